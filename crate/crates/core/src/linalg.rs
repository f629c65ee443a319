//! Exact rank of polynomial coefficient matrices.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::poly::{MPoly, Monomial};

/// Rank over `Q` of the coefficient vectors of `polys`.
pub fn rank_of(polys: &[MPoly]) -> usize {
    let rows: Vec<Vec<(Monomial, BigInt)>> = polys.iter().map(MPoly::integer_row).collect();
    let mut columns: BTreeMap<&Monomial, usize> = BTreeMap::new();
    for row in &rows {
        for (m, _) in row {
            let next = columns.len();
            columns.entry(m).or_insert(next);
        }
    }
    let mut dense = vec![vec![BigInt::zero(); columns.len()]; rows.len()];
    for (r, row) in rows.iter().enumerate() {
        for (m, c) in row {
            dense[r][columns[m]] = c.clone();
        }
    }
    bareiss_rank(dense)
}

/// Fraction-free Gaussian elimination; every division is exact.
pub fn bareiss_rank(mut a: Vec<Vec<BigInt>>) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, pivot);
        for i in rank + 1..rows {
            for j in col + 1..cols {
                let v = (&a[rank][col] * &a[i][j] - &a[i][col] * &a[rank][j]) / &prev;
                a[i][j] = v;
            }
            a[i][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    rank
}
