//! Elements of the cohomological Hall algebra and the shuffle product.
//!
//! An element of grade `γ` is a polynomial in `ω[i,j]`, `1 ≤ j ≤ γ(i)`,
//! separately symmetric in the variables of each vertex.

use std::sync::Arc;

use thiserror::Error;

use crate::par::{self, Exec};
use crate::poly::{omega_block, Family, MPoly, VarId};
use crate::quiver::{DimVector, Quiver, QuiverError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CohaError {
    #[error("elements live over different quivers")]
    QuiverMismatch,
    #[error("polynomial is not symmetric in the variables of each vertex")]
    NotSymmetric,
    #[error("variable {0} is out of range for the grade")]
    VariableOutOfRange(VarId),
    #[error("shuffle sum was not divisible by the Vandermonde denominator")]
    InternalNotDivisible,
    #[error("product of an empty list")]
    EmptyProduct,
    #[error("root {0} has no coordinate equal to 1")]
    NoUnitCoordinate(DimVector),
    #[error("vertex {vertex} is not a valid marker for {root}")]
    BadMarker { root: DimVector, vertex: usize },
    #[error("arrow mask has length {got}, quiver has {expected} arrows")]
    MaskLength { expected: usize, got: usize },
    #[error(transparent)]
    Quiver(#[from] QuiverError),
}

#[derive(Debug, Clone)]
pub struct CohaElement {
    quiver: Arc<Quiver>,
    grade: DimVector,
    poly: MPoly,
}

impl PartialEq for CohaElement {
    fn eq(&self, other: &Self) -> bool {
        self.grade == other.grade
            && self.poly == other.poly
            && same_quiver(&self.quiver, &other.quiver)
    }
}

impl Eq for CohaElement {}

fn same_quiver(a: &Arc<Quiver>, b: &Arc<Quiver>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Validates `p` as an element of `ℋ_γ`.
pub fn element(q: &Arc<Quiver>, gamma: DimVector, p: MPoly) -> Result<CohaElement, CohaError> {
    q.check_dim(&gamma)?;
    for v in p.variables() {
        let ok = v.family == Family::Omega
            && (v.a as usize) >= 1
            && (v.a as usize) <= q.vertex_count()
            && v.b <= gamma.at(v.a as usize);
        if !ok {
            return Err(CohaError::VariableOutOfRange(v));
        }
    }
    if !p.is_block_symmetric(&vertex_blocks(&gamma)) {
        return Err(CohaError::NotSymmetric);
    }
    Ok(CohaElement {
        quiver: Arc::clone(q),
        grade: gamma,
        poly: p,
    })
}

/// The constant `1 ∈ ℋ_γ`.
pub fn one(q: &Arc<Quiver>, gamma: DimVector) -> Result<CohaElement, CohaError> {
    q.check_dim(&gamma)?;
    Ok(CohaElement {
        quiver: Arc::clone(q),
        grade: gamma,
        poly: MPoly::one(),
    })
}

fn vertex_blocks(gamma: &DimVector) -> Vec<Vec<VarId>> {
    (1..=gamma.len())
        .map(|i| omega_block(i as u32, gamma.at(i)))
        .collect()
}

impl CohaElement {
    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn grade(&self) -> &DimVector {
        &self.grade
    }

    pub fn poly(&self) -> &MPoly {
        &self.poly
    }

    pub fn into_poly(self) -> MPoly {
        self.poly
    }

    /// Polynomial degree when homogeneous.
    pub fn degree(&self) -> Option<u32> {
        self.poly.homogeneous_degree()
    }

    /// The same polynomial viewed in another grade.
    pub fn regrade(&self, gamma: DimVector) -> Result<CohaElement, CohaError> {
        element(&self.quiver, gamma, self.poly.clone())
    }
}

pub fn mul2(f: &CohaElement, g: &CohaElement) -> Result<CohaElement, CohaError> {
    mul2_with(f, g, Exec::default())
}

pub fn mul2_with(f: &CohaElement, g: &CohaElement, exec: Exec) -> Result<CohaElement, CohaError> {
    let keep = vec![true; f.quiver.arrows().len()];
    shuffle(f, g, &keep, exec)
}

/// The shuffle product with the numerator factors of arrows where `keep` is
/// false replaced by 1.
pub fn mul2_masked(
    f: &CohaElement,
    g: &CohaElement,
    keep: &[bool],
) -> Result<CohaElement, CohaError> {
    if keep.len() != f.quiver.arrows().len() {
        return Err(CohaError::MaskLength {
            expected: f.quiver.arrows().len(),
            got: keep.len(),
        });
    }
    shuffle(f, g, keep, Exec::default())
}

pub fn muln(factors: &[CohaElement]) -> Result<CohaElement, CohaError> {
    muln_with(factors, Exec::default())
}

pub fn muln_with(factors: &[CohaElement], exec: Exec) -> Result<CohaElement, CohaError> {
    let (first, rest) = factors.split_first().ok_or(CohaError::EmptyProduct)?;
    rest.iter()
        .try_fold(first.clone(), |acc, h| mul2_with(&acc, h, exec))
}

/// One choice of index subsets: `s[i]` has size `γ1(i)`, `c[i]` is its
/// complement in `[γ1(i) + γ2(i)]`.
struct Split {
    s: Vec<Vec<u32>>,
    c: Vec<Vec<u32>>,
}

fn shuffle(
    f: &CohaElement,
    g: &CohaElement,
    keep: &[bool],
    exec: Exec,
) -> Result<CohaElement, CohaError> {
    if !same_quiver(&f.quiver, &g.quiver) {
        return Err(CohaError::QuiverMismatch);
    }
    let q = &f.quiver;
    let n = q.vertex_count();
    let gamma = &f.grade + &g.grade;
    if f.poly.is_zero() || g.poly.is_zero() {
        return Ok(CohaElement {
            quiver: Arc::clone(q),
            grade: gamma,
            poly: MPoly::zero(),
        });
    }

    let per_vertex: Vec<Vec<Vec<u32>>> = (1..=n)
        .map(|i| subsets(gamma.at(i), f.grade.at(i)))
        .collect();
    let splits: Vec<Split> = cartesian(&per_vertex)
        .into_iter()
        .map(|s| {
            let c = s
                .iter()
                .enumerate()
                .map(|(k, si)| complement(gamma.at(k + 1), si))
                .collect();
            Split { s, c }
        })
        .collect();

    let numerator = par::map_reduce(
        exec,
        &splits,
        |sp| shuffle_term(q, f, g, sp, keep),
        MPoly::zero,
        |a, b| &a + &b,
    );

    let mut poly = numerator;
    for i in 1..=n {
        let d = gamma.at(i);
        for a in 1..=d {
            for b in a + 1..=d {
                let factor =
                    MPoly::difference(VarId::omega(i as u32, a), VarId::omega(i as u32, b));
                poly = poly
                    .exact_div(&factor)
                    .map_err(|_| CohaError::InternalNotDivisible)?;
            }
        }
    }
    Ok(CohaElement {
        quiver: Arc::clone(q),
        grade: gamma,
        poly,
    })
}

/// One summand of the shuffle sum, rescaled to the common Vandermonde
/// denominator.
fn shuffle_term(q: &Quiver, f: &CohaElement, g: &CohaElement, sp: &Split, keep: &[bool]) -> MPoly {
    let fs = f.poly.rename(|v| place(v, &sp.s));
    let gs = g.poly.rename(|v| place(v, &sp.c));
    let mut term = fs.mul_with(&gs, Exec::Sequential);
    let mut negative = false;

    for (arrow, &k) in q.arrows().iter().zip(keep) {
        if !k {
            continue;
        }
        let (h, t) = (arrow.head, arrow.tail);
        for &u in &sp.c[h - 1] {
            for &v in &sp.s[t - 1] {
                term = term.mul_with(
                    &MPoly::difference(VarId::omega(h as u32, u), VarId::omega(t as u32, v)),
                    Exec::Sequential,
                );
            }
        }
    }

    for (k, (s, c)) in sp.s.iter().zip(&sp.c).enumerate() {
        let i = (k + 1) as u32;
        let inversions: usize = c
            .iter()
            .map(|&u| s.iter().filter(|&&v| u > v).count())
            .sum();
        negative ^= inversions % 2 == 1;
        for part in [s, c] {
            for (x, &a) in part.iter().enumerate() {
                for &b in &part[x + 1..] {
                    term = term.mul_with(
                        &MPoly::difference(VarId::omega(i, a), VarId::omega(i, b)),
                        Exec::Sequential,
                    );
                }
            }
        }
    }
    if negative {
        -&term
    } else {
        term
    }
}

fn place(v: VarId, slots: &[Vec<u32>]) -> VarId {
    VarId::omega(v.a, slots[v.a as usize - 1][v.b as usize - 1])
}

/// Size-`k` subsets of `[n]`, each sorted, in lexicographic order.
fn subsets(n: u32, k: u32) -> Vec<Vec<u32>> {
    fn go(start: u32, n: u32, k: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() as u32 == k {
            out.push(cur.clone());
            return;
        }
        for x in start..=n {
            cur.push(x);
            go(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, n, k, &mut Vec::new(), &mut out);
    out
}

fn complement(n: u32, s: &[u32]) -> Vec<u32> {
    (1..=n).filter(|x| !s.contains(x)).collect()
}

fn cartesian(lists: &[Vec<Vec<u32>>]) -> Vec<Vec<Vec<u32>>> {
    lists.iter().fold(vec![Vec::new()], |acc, options| {
        acc.into_iter()
            .flat_map(|prefix| {
                options.iter().map(move |o| {
                    let mut next = prefix.clone();
                    next.push(o.clone());
                    next
                })
            })
            .collect()
    })
}

/// `ψ_p = x^p ∈ ℋ_1` over the one-vertex quiver.
pub fn psi(p: u32) -> CohaElement {
    CohaElement {
        quiver: Arc::new(Quiver::a1()),
        grade: DimVector::new(vec![1]),
        poly: MPoly::var(VarId::omega(1, 1)).pow(p),
    }
}

/// `ψ_p` over a shared one-vertex quiver, so that products avoid the
/// structural quiver comparison.
pub fn psi_on(q: &Arc<Quiver>, p: u32) -> Result<CohaElement, CohaError> {
    element(
        q,
        DimVector::new(vec![1]),
        MPoly::var(VarId::omega(1, 1)).pow(p),
    )
}

/// Smallest vertex where `beta` has coordinate 1.
pub fn choose_marker(beta: &DimVector) -> Result<usize, CohaError> {
    (1..=beta.len())
        .find(|&i| beta.at(i) == 1)
        .ok_or_else(|| CohaError::NoUnitCoordinate(beta.clone()))
}

/// The element of `ℋ_{mβ}` given by `f(ω[i,1..m])`, where `f` is written in
/// the variables `ω[1,1..m]`.
pub fn subalgebra_element(
    q: &Arc<Quiver>,
    beta: &DimVector,
    m: u32,
    marker: usize,
    f: &MPoly,
) -> Result<CohaElement, CohaError> {
    q.check_dim(beta)?;
    if marker == 0 || marker > beta.len() || beta.at(marker) != 1 {
        return Err(CohaError::BadMarker {
            root: beta.clone(),
            vertex: marker,
        });
    }
    for v in f.variables() {
        if v.family != Family::Omega || v.a != 1 || v.b > m {
            return Err(CohaError::VariableOutOfRange(v));
        }
    }
    if !f.is_block_symmetric(&[omega_block(1, m)]) {
        return Err(CohaError::NotSymmetric);
    }
    let moved = f.rename(|v| VarId::omega(marker as u32, v.b));
    element(q, beta.scale(m), moved)
}

/// Number of partitions of `k` into at most `parts` parts.
pub fn partitions_at_most(k: u32, parts: u32) -> u64 {
    let k = k as usize;
    let mut table = vec![0u64; k + 1];
    table[0] = 1;
    for size in 1..=(parts as usize).min(k.max(1)) {
        // parts bounded by m == parts of size at most m, by conjugation
        for total in size..=k {
            table[total] += table[total - size];
        }
    }
    table[k]
}

/// `dim (ℋ_γ)_k`: tuples of partitions with at most `γ(i)` parts at vertex
/// `i` and total size `k`.
pub fn graded_dim(gamma: &DimVector, k: u32) -> u64 {
    let k = k as usize;
    let mut acc = vec![0u64; k + 1];
    acc[0] = 1;
    for &m in gamma.entries() {
        let local: Vec<u64> = (0..=k as u32).map(|d| partitions_at_most(d, m)).collect();
        let mut next = vec![0u64; k + 1];
        for (a, &x) in acc.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (b, &y) in local.iter().enumerate().take(k + 1 - a) {
                next[a + b] += x * y;
            }
        }
        acc = next;
    }
    acc[k]
}
