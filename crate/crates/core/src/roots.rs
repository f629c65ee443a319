//! Positive roots of Dynkin quivers, Reineke orders and Kostant partitions.

use std::collections::{BTreeSet, HashSet};

use thiserror::Error;

use crate::quiver::{DimVector, DynkinType, Quiver, SubquiverPartition};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootError {
    #[error("quiver (or block {0}) is not Dynkin")]
    NotDynkin(usize),
    #[error("no Reineke order exists for these roots")]
    NoValidOrder,
    #[error("roots are not in a valid Reineke order at positions {0} and {1}")]
    BadOrder(usize, usize),
    #[error("roots of different blocks are interleaved; blocks must appear in block order")]
    BlocksInterleaved,
    #[error("the given list is not the set of positive roots of the blocks")]
    NotRootSet,
    #[error("multiplicity list has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
}

/// Positive roots of the underlying diagram, by reflection closure of the
/// simple roots under the Cartan matrix. Sorted lexicographically.
pub fn positive_roots(q: &Quiver) -> Result<Vec<DimVector>, RootError> {
    if !q.dynkin_type().is_dynkin() {
        return Err(RootError::NotDynkin(1));
    }
    let n = q.vertex_count();
    let mut adj = vec![Vec::new(); n];
    for a in q.arrows() {
        adj[a.tail - 1].push(a.head - 1);
        adj[a.head - 1].push(a.tail - 1);
    }
    let mut found: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut frontier: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut e = vec![0i64; n];
            e[i] = 1;
            e
        })
        .collect();
    found.extend(frontier.iter().cloned());
    while let Some(beta) = frontier.pop() {
        for i in 0..n {
            // (Cβ)_i = 2β_i − Σ_{j~i} β_j
            let pairing = 2 * beta[i] - adj[i].iter().map(|&j| beta[j]).sum::<i64>();
            if pairing == 0 {
                continue;
            }
            let mut r = beta.clone();
            r[i] -= pairing;
            if r.iter().all(|&x| x >= 0) && r.iter().any(|&x| x > 0) && found.insert(r.clone()) {
                frontier.push(r);
            }
        }
    }
    Ok(found
        .into_iter()
        .map(|v| DimVector::new(v.into_iter().map(|x| x as u32).collect()))
        .collect())
}

/// Orders roots so that `u` before `v` implies `⟨β_u, β_v⟩ ≥ 0`.
///
/// Topological sort of the strict constraint graph; among available roots
/// the lexicographically smallest vector goes first.
pub fn reineke_order(q: &Quiver, roots: &[DimVector]) -> Result<Vec<DimVector>, RootError> {
    let r = roots.len();
    let mut indeg = vec![0usize; r];
    let mut succ = vec![Vec::new(); r];
    for a in 0..r {
        for b in 0..r {
            if a != b && q.antisym_unchecked(&roots[a], &roots[b]) > 0 {
                succ[a].push(b);
                indeg[b] += 1;
            }
        }
    }
    let mut ready: BTreeSet<(&DimVector, usize)> = (0..r)
        .filter(|&k| indeg[k] == 0)
        .map(|k| (&roots[k], k))
        .collect();
    let mut out = Vec::with_capacity(r);
    while let Some((_, k)) = ready.pop_first() {
        out.push(roots[k].clone());
        for &b in &succ[k] {
            indeg[b] -= 1;
            if indeg[b] == 0 {
                ready.insert((&roots[b], b));
            }
        }
    }
    if out.len() != r {
        return Err(RootError::NoValidOrder);
    }
    Ok(out)
}

/// Returns the first pair `(u, v)`, 1-based, with `u < v` and `⟨β_u, β_v⟩ < 0`.
pub fn order_violation(q: &Quiver, ordered: &[DimVector]) -> Option<(usize, usize)> {
    for u in 0..ordered.len() {
        for v in u + 1..ordered.len() {
            if q.antisym_unchecked(&ordered[u], &ordered[v]) < 0 {
                return Some((u + 1, v + 1));
            }
        }
    }
    None
}

/// Positive roots of a partition's blocks, in a combined Reineke order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootList {
    roots: Vec<DimVector>,
    /// 0-based block index of each root.
    blocks: Vec<usize>,
}

impl RootList {
    /// Per-block Reineke orders concatenated in block order.
    pub fn combined(q: &Quiver, p: &SubquiverPartition) -> Result<Self, RootError> {
        let n = q.vertex_count();
        let mut roots = Vec::new();
        let mut blocks = Vec::new();
        for (j, blk) in p.blocks().iter().enumerate() {
            if blk.kind == DynkinType::NotDynkin {
                return Err(RootError::NotDynkin(j + 1));
            }
            let sub = blk.as_quiver(q);
            let local = reineke_order(&sub, &positive_roots(&sub)?)?;
            for beta in local {
                let mut full = vec![0u32; n];
                for (k, &v) in blk.vertices.iter().enumerate() {
                    full[v - 1] = beta[k];
                }
                roots.push(DimVector::new(full));
                blocks.push(j);
            }
        }
        Ok(RootList { roots, blocks })
    }

    /// Uses a caller-supplied order, checked block by block.
    pub fn from_ordered(
        q: &Quiver,
        p: &SubquiverPartition,
        roots: Vec<DimVector>,
    ) -> Result<Self, RootError> {
        let reference = Self::combined(q, p)?;
        let mut expected: Vec<&DimVector> = reference.roots.iter().collect();
        let mut given: Vec<&DimVector> = roots.iter().collect();
        expected.sort();
        given.sort();
        if expected != given {
            return Err(RootError::NotRootSet);
        }
        let blocks: Vec<usize> = roots
            .iter()
            .map(|b| p.supporting_block(b).expect("root lies in one block"))
            .collect();
        if blocks.windows(2).any(|w| w[0] > w[1]) {
            return Err(RootError::BlocksInterleaved);
        }
        for u in 0..roots.len() {
            for v in u + 1..roots.len() {
                if blocks[u] == blocks[v] && q.antisym_unchecked(&roots[u], &roots[v]) < 0 {
                    return Err(RootError::BadOrder(u + 1, v + 1));
                }
            }
        }
        Ok(RootList { roots, blocks })
    }

    pub fn roots(&self) -> &[DimVector] {
        &self.roots
    }

    pub fn root(&self, u: usize) -> &DimVector {
        &self.roots[u]
    }

    pub fn block_of(&self, u: usize) -> usize {
        self.blocks[u]
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// Indices of roots belonging to block `j`.
    pub fn block_range(&self, j: usize) -> std::ops::Range<usize> {
        let start = self.blocks.iter().position(|&b| b == j).unwrap_or(0);
        let end = self
            .blocks
            .iter()
            .rposition(|&b| b == j)
            .map_or(start, |e| e + 1);
        start..end
    }

    pub fn partition(&self, mults: Vec<u32>) -> Result<KostantPartition, RootError> {
        if mults.len() != self.roots.len() {
            return Err(RootError::LengthMismatch {
                expected: self.roots.len(),
                got: mults.len(),
            });
        }
        Ok(KostantPartition(mults))
    }

    /// `Σ m_u β_u`.
    pub fn total(&self, m: &KostantPartition) -> DimVector {
        let n = self.roots.first().map_or(0, |r| r.len());
        let mut acc = vec![0u32; n];
        for (beta, &k) in self.roots.iter().zip(&m.0) {
            for (a, b) in acc.iter_mut().zip(beta.entries()) {
                *a += k * b;
            }
        }
        DimVector::new(acc)
    }
}

/// Multiplicities aligned with a [`RootList`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KostantPartition(pub Vec<u32>);

impl KostantPartition {
    pub fn mults(&self) -> &[u32] {
        &self.0
    }
}

/// All multiplicity lists with `Σ m_u β_u = γ`, lexicographically ascending.
pub fn enumerate_partitions(roots: &[DimVector], gamma: &DimVector) -> Vec<KostantPartition> {
    let r = roots.len();
    let n = gamma.len();
    // covered[u][i]: some root at index >= u is nonzero at vertex i
    let mut covered = vec![vec![false; n]; r + 1];
    for u in (0..r).rev() {
        for i in 0..n {
            covered[u][i] = covered[u + 1][i] || roots[u][i] > 0;
        }
    }
    let mut out = Vec::new();
    let mut current = vec![0u32; r];
    let mut remaining: Vec<u32> = gamma.entries().to_vec();
    fn go(
        u: usize,
        roots: &[DimVector],
        covered: &[Vec<bool>],
        current: &mut Vec<u32>,
        remaining: &mut Vec<u32>,
        out: &mut Vec<KostantPartition>,
    ) {
        if remaining
            .iter()
            .enumerate()
            .any(|(i, &x)| x > 0 && !covered[u][i])
        {
            return;
        }
        if u == roots.len() {
            out.push(KostantPartition(current.clone()));
            return;
        }
        let beta = &roots[u];
        let cap = beta
            .entries()
            .iter()
            .zip(remaining.iter())
            .filter(|(&d, _)| d > 0)
            .map(|(&d, &g)| g / d)
            .min()
            .unwrap_or(0);
        for k in 0..=cap {
            current[u] = k;
            for (x, &d) in remaining.iter_mut().zip(beta.entries()) {
                *x -= k * d;
            }
            go(u + 1, roots, covered, current, remaining, out);
            for (x, &d) in remaining.iter_mut().zip(beta.entries()) {
                *x += k * d;
            }
        }
        current[u] = 0;
    }
    go(0, roots, &covered, &mut current, &mut remaining, &mut out);
    out
}

/// Distinctness check used by tests and assertions.
pub fn all_distinct(roots: &[DimVector]) -> bool {
    let set: HashSet<&DimVector> = roots.iter().collect();
    set.len() == roots.len()
}
