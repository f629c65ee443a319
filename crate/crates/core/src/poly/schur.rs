//! Schur polynomials via the bialternant formula.

use super::{MPoly, Monomial, PolyError, Rational, VarId};

/// `s_λ(vars)`, computed as `det(x_j^{λ_i + r - i}) / ∏_{i<j}(x_i - x_j)`.
pub fn schur(lambda: &[u32], vars: &[VarId]) -> Result<MPoly, PolyError> {
    if lambda.windows(2).any(|w| w[0] < w[1]) {
        return Err(PolyError::BadPartition(format!(
            "{lambda:?} is not weakly decreasing"
        )));
    }
    let parts = lambda.iter().filter(|&&p| p > 0).count();
    let r = vars.len();
    if parts > r {
        return Err(PolyError::BadPartition(format!(
            "{lambda:?} has {parts} nonzero parts but only {r} variables"
        )));
    }
    if r == 0 {
        return Ok(MPoly::one());
    }
    let exps: Vec<u32> = (0..r)
        .map(|i| lambda.get(i).copied().unwrap_or(0) + (r - 1 - i) as u32)
        .collect();
    let mut num = MPoly::zero();
    for (perm, sign) in permutations(r) {
        let m = Monomial::from_pairs((0..r).map(|i| (vars[perm[i]], exps[i])).collect());
        num.add_term(m, Rational::from_integer(sign.into()));
    }
    for i in 0..r {
        for j in i + 1..r {
            num = num
                .exact_div(&MPoly::difference(vars[i], vars[j]))
                .expect("alternant is divisible by the Vandermonde factors");
        }
    }
    Ok(num)
}

/// All permutations of `0..n` with their signs.
fn permutations(n: usize) -> Vec<(Vec<usize>, i64)> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    let mut used = vec![false; n];
    extend(n, &mut cur, &mut used, &mut out);
    out
}

fn extend(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<(Vec<usize>, i64)>) {
    if cur.len() == n {
        let inversions = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| cur[i] > cur[j])
            .count();
        out.push((cur.clone(), if inversions % 2 == 0 { 1 } else { -1 }));
        return;
    }
    for v in 0..n {
        if !used[v] {
            used[v] = true;
            cur.push(v);
            extend(n, cur, used, out);
            cur.pop();
            used[v] = false;
        }
    }
}
