//! Quivers, dimension vectors, bilinear forms and subquiver partitions.
//!
//! Vertices are numbered `1..=n` and every arrow must point from a larger
//! vertex to a smaller one (`head < tail`). Use [`reindex_topological`] to
//! relabel an arbitrary acyclic quiver into that form.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Index};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuiverError {
    #[error("quiver must have at least one vertex")]
    NoVertices,
    #[error("arrow {arrow} references vertex {vertex}, outside 1..={n}")]
    VertexOutOfRange {
        arrow: usize,
        vertex: usize,
        n: usize,
    },
    #[error("quiver has an oriented cycle through vertex {0}")]
    CycleFound(usize),
    #[error("arrow {arrow} ({tail} -> {head}) violates head-before-tail order")]
    OrderViolation {
        arrow: usize,
        tail: usize,
        head: usize,
    },
    #[error("dimension vector has length {got}, quiver has {expected} vertices")]
    LengthMismatch { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("blocks do not form a disjoint cover of the vertices: {0}")]
    NotDisjointCover(String),
    #[error("block {0} is empty or not connected")]
    NotConnected(usize),
    #[error("contracting the blocks produces an oriented cycle")]
    ContractionCyclic,
    #[error("blocks are not in head-before-tail order; a valid order is {suggested:?}")]
    NotOrdered { suggested: Vec<Vec<usize>> },
    #[error("block {block} is not a Dynkin quiver")]
    NotDynkin { block: usize },
    #[error(transparent)]
    Quiver(#[from] QuiverError),
}

/// A dimension vector, one non-negative entry per vertex.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DimVector(Vec<u32>);

impl DimVector {
    pub fn new(entries: Vec<u32>) -> Self {
        DimVector(entries)
    }

    pub fn zero(n: usize) -> Self {
        DimVector(vec![0; n])
    }

    /// The simple vector `e_i` (1-based).
    pub fn simple(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i - 1] = 1;
        DimVector(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    /// Entry at a 1-based vertex.
    pub fn at(&self, vertex: usize) -> u32 {
        self.0[vertex - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn scale(&self, k: u32) -> Self {
        DimVector(self.0.iter().map(|&x| x * k).collect())
    }

    /// Componentwise `self <= other`.
    pub fn fits_in(&self, other: &DimVector) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Componentwise difference, `None` if some entry would go negative.
    pub fn checked_sub(&self, other: &DimVector) -> Option<DimVector> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(DimVector)
    }

    /// 1-based vertices with nonzero entry.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &x)| x != 0)
            .map(|(i, _)| i + 1)
    }

    /// Renders as a sum of simple roots, e.g. `e1+e2+e3` or `2e1+e3`.
    pub fn as_root_sum(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &x)| x != 0)
            .map(|(i, &x)| {
                if x == 1 {
                    format!("e{}", i + 1)
                } else {
                    format!("{}e{}", x, i + 1)
                }
            })
            .collect::<Vec<_>>()
            .join("+")
    }
}

impl From<Vec<u32>> for DimVector {
    fn from(v: Vec<u32>) -> Self {
        DimVector(v)
    }
}

impl Index<usize> for DimVector {
    type Output = u32;
    fn index(&self, idx: usize) -> &u32 {
        &self.0[idx]
    }
}

impl Add for &DimVector {
    type Output = DimVector;
    fn add(self, rhs: &DimVector) -> DimVector {
        assert_eq!(self.len(), rhs.len(), "dimension vector length mismatch");
        DimVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for DimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, x) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// An arrow `tail -> head`, vertices 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub tail: usize,
    pub head: usize,
}

/// An acyclic quiver with vertices `1..=n` in head-before-tail order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Quiver {
    n: usize,
    arrows: Vec<Arrow>,
}

impl Quiver {
    /// Validates raw data given as `(tail, head)` pairs.
    pub fn new(n: usize, raw_arrows: &[(usize, usize)]) -> Result<Self, QuiverError> {
        if n == 0 {
            return Err(QuiverError::NoVertices);
        }
        let arrows = check_range(n, raw_arrows)?;
        if let Some(v) = find_cycle(n, &arrows) {
            return Err(QuiverError::CycleFound(v));
        }
        for (k, a) in arrows.iter().enumerate() {
            if a.head >= a.tail {
                return Err(QuiverError::OrderViolation {
                    arrow: k + 1,
                    tail: a.tail,
                    head: a.head,
                });
            }
        }
        Ok(Quiver { n, arrows })
    }

    /// The quiver `A_1`: one vertex, no arrows.
    pub fn a1() -> Self {
        Quiver {
            n: 1,
            arrows: vec![],
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn dim(&self, entries: Vec<u32>) -> Result<DimVector, QuiverError> {
        let v = DimVector(entries);
        self.check_dim(&v)?;
        Ok(v)
    }

    pub fn check_dim(&self, v: &DimVector) -> Result<(), QuiverError> {
        if v.len() != self.n {
            return Err(QuiverError::LengthMismatch {
                expected: self.n,
                got: v.len(),
            });
        }
        Ok(())
    }

    pub fn simple(&self, i: usize) -> DimVector {
        DimVector::simple(self.n, i)
    }

    /// Euler form `χ(γ1, γ2) = Σ_i γ1(i)γ2(i) − Σ_a γ1(ta)γ2(ha)`.
    pub fn euler_form(&self, g1: &DimVector, g2: &DimVector) -> Result<i64, QuiverError> {
        self.check_dim(g1)?;
        self.check_dim(g2)?;
        Ok(self.euler_unchecked(g1, g2))
    }

    pub(crate) fn euler_unchecked(&self, g1: &DimVector, g2: &DimVector) -> i64 {
        let diag: i64 =
            g1.0.iter()
                .zip(&g2.0)
                .map(|(a, b)| *a as i64 * *b as i64)
                .sum();
        let off: i64 = self
            .arrows
            .iter()
            .map(|a| g1.at(a.tail) as i64 * g2.at(a.head) as i64)
            .sum();
        diag - off
    }

    /// Antisymmetrized form `⟨γ1, γ2⟩ = χ(γ2, γ1) − χ(γ1, γ2)`.
    pub fn antisym_form(&self, g1: &DimVector, g2: &DimVector) -> Result<i64, QuiverError> {
        self.check_dim(g1)?;
        self.check_dim(g2)?;
        Ok(self.antisym_unchecked(g1, g2))
    }

    pub(crate) fn antisym_unchecked(&self, g1: &DimVector, g2: &DimVector) -> i64 {
        self.euler_unchecked(g2, g1) - self.euler_unchecked(g1, g2)
    }

    /// The full subquiver on a sorted vertex subset, relabelled `1..=k`
    /// preserving order. Returns it with the indices of the arrows kept.
    pub fn induced(&self, vertices: &[usize]) -> (Quiver, Vec<usize>) {
        let local = |v: usize| vertices.iter().position(|&w| w == v);
        let mut arrows = Vec::new();
        let mut kept = Vec::new();
        for (k, a) in self.arrows.iter().enumerate() {
            if let (Some(t), Some(h)) = (local(a.tail), local(a.head)) {
                arrows.push(Arrow {
                    tail: t + 1,
                    head: h + 1,
                });
                kept.push(k);
            }
        }
        (
            Quiver {
                n: vertices.len(),
                arrows,
            },
            kept,
        )
    }

    pub fn dynkin_type(&self) -> DynkinType {
        classify_dynkin(self)
    }
}

fn check_range(n: usize, raw: &[(usize, usize)]) -> Result<Vec<Arrow>, QuiverError> {
    raw.iter()
        .enumerate()
        .map(|(k, &(tail, head))| {
            for v in [tail, head] {
                if v == 0 || v > n {
                    return Err(QuiverError::VertexOutOfRange {
                        arrow: k + 1,
                        vertex: v,
                        n,
                    });
                }
            }
            Ok(Arrow { tail, head })
        })
        .collect()
}

/// Returns some vertex on an oriented cycle, if one exists.
fn find_cycle(n: usize, arrows: &[Arrow]) -> Option<usize> {
    let mut indeg = vec![0usize; n + 1];
    for a in arrows {
        indeg[a.head] += 1;
    }
    let mut stack: Vec<usize> = (1..=n).filter(|&v| indeg[v] == 0).collect();
    let mut seen = 0;
    while let Some(v) = stack.pop() {
        seen += 1;
        for a in arrows.iter().filter(|a| a.tail == v) {
            indeg[a.head] -= 1;
            if indeg[a.head] == 0 {
                stack.push(a.head);
            }
        }
    }
    if seen == n {
        None
    } else {
        (1..=n).find(|&v| indeg[v] > 0)
    }
}

/// Relabels an acyclic quiver so that every head precedes its tail.
///
/// Ties are broken by smallest original index. Returns the quiver together
/// with `new_label[old - 1]`.
pub fn reindex_topological(
    n: usize,
    raw_arrows: &[(usize, usize)],
) -> Result<(Quiver, Vec<usize>), QuiverError> {
    if n == 0 {
        return Err(QuiverError::NoVertices);
    }
    let arrows = check_range(n, raw_arrows)?;
    if let Some(v) = find_cycle(n, &arrows) {
        return Err(QuiverError::CycleFound(v));
    }
    // A vertex can be placed once all heads of its outgoing arrows are placed.
    let mut pending = vec![0usize; n + 1];
    for a in &arrows {
        pending[a.tail] += 1;
    }
    let mut ready: BTreeSet<usize> = (1..=n).filter(|&v| pending[v] == 0).collect();
    let mut new_label = vec![0usize; n];
    let mut next = 1;
    while let Some(v) = ready.pop_first() {
        new_label[v - 1] = next;
        next += 1;
        for a in arrows.iter().filter(|a| a.head == v) {
            pending[a.tail] -= 1;
            if pending[a.tail] == 0 {
                ready.insert(a.tail);
            }
        }
    }
    let relabelled: Vec<(usize, usize)> = arrows
        .iter()
        .map(|a| (new_label[a.tail - 1], new_label[a.head - 1]))
        .collect();
    Ok((Quiver::new(n, &relabelled)?, new_label))
}

/// Type of the underlying undirected graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DynkinType {
    A(usize),
    D(usize),
    E6,
    E7,
    E8,
    NotDynkin,
}

impl DynkinType {
    pub fn is_dynkin(self) -> bool {
        self != DynkinType::NotDynkin
    }

    pub fn is_type_e(self) -> bool {
        matches!(self, DynkinType::E6 | DynkinType::E7 | DynkinType::E8)
    }
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DynkinType::A(n) => write!(f, "A{n}"),
            DynkinType::D(n) => write!(f, "D{n}"),
            DynkinType::E6 => write!(f, "E6"),
            DynkinType::E7 => write!(f, "E7"),
            DynkinType::E8 => write!(f, "E8"),
            DynkinType::NotDynkin => write!(f, "not Dynkin"),
        }
    }
}

/// Classifies the underlying undirected graph. Parallel arrows and
/// disconnected graphs are not Dynkin.
pub fn classify_dynkin(q: &Quiver) -> DynkinType {
    let n = q.n;
    let mut edges = BTreeSet::new();
    for a in &q.arrows {
        let e = (a.head.min(a.tail), a.head.max(a.tail));
        if !edges.insert(e) {
            return DynkinType::NotDynkin;
        }
    }
    if edges.len() + 1 != n || !connected(n, edges.iter().copied()) {
        return DynkinType::NotDynkin;
    }
    let mut adj = vec![Vec::new(); n + 1];
    for &(a, b) in &edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let branch: Vec<usize> = (1..=n).filter(|&v| adj[v].len() >= 3).collect();
    match branch.as_slice() {
        [] => DynkinType::A(n),
        [c] if adj[*c].len() == 3 => {
            let mut arms: Vec<usize> = adj[*c]
                .iter()
                .map(|&start| {
                    let (mut prev, mut cur, mut len) = (*c, start, 1);
                    while let Some(&nxt) = adj[cur].iter().find(|&&w| w != prev) {
                        prev = cur;
                        cur = nxt;
                        len += 1;
                    }
                    len
                })
                .collect();
            arms.sort_unstable();
            match arms.as_slice() {
                [1, 1, _] => DynkinType::D(n),
                [1, 2, 2] => DynkinType::E6,
                [1, 2, 3] => DynkinType::E7,
                [1, 2, 4] => DynkinType::E8,
                _ => DynkinType::NotDynkin,
            }
        }
        _ => DynkinType::NotDynkin,
    }
}

fn connected(n: usize, edges: impl Iterator<Item = (usize, usize)>) -> bool {
    let mut parent: Vec<usize> = (0..=n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for (a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent[ra] = rb;
    }
    let root = find(&mut parent, 1);
    (1..=n).all(|v| find(&mut parent, v) == root)
}

/// One block of a subquiver partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    /// Sorted 1-based vertices.
    pub vertices: Vec<usize>,
    /// Indices into `Quiver::arrows` of the arrows inside the block.
    pub arrows: Vec<usize>,
    pub kind: DynkinType,
}

impl Block {
    /// The block as a standalone quiver with vertices relabelled `1..=k`.
    pub fn as_quiver(&self, q: &Quiver) -> Quiver {
        q.induced(&self.vertices).0
    }
}

/// An admissible, ordered subquiver partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubquiverPartition {
    blocks: Vec<Block>,
    block_of: Vec<usize>,
}

impl SubquiverPartition {
    /// Validates raw vertex blocks. With `require_dynkin`, every block must
    /// be a Dynkin quiver.
    pub fn new(
        q: &Quiver,
        raw: &[Vec<usize>],
        require_dynkin: bool,
    ) -> Result<Self, PartitionError> {
        let n = q.vertex_count();
        let mut block_of = vec![usize::MAX; n];
        for (j, blk) in raw.iter().enumerate() {
            if blk.is_empty() {
                return Err(PartitionError::NotConnected(j + 1));
            }
            for &v in blk {
                if v == 0 || v > n {
                    return Err(PartitionError::NotDisjointCover(format!(
                        "vertex {v} out of range"
                    )));
                }
                if block_of[v - 1] != usize::MAX {
                    return Err(PartitionError::NotDisjointCover(format!(
                        "vertex {v} appears twice"
                    )));
                }
                block_of[v - 1] = j;
            }
        }
        if let Some(v) = block_of.iter().position(|&b| b == usize::MAX) {
            return Err(PartitionError::NotDisjointCover(format!(
                "vertex {} is not covered",
                v + 1
            )));
        }

        let mut blocks = Vec::with_capacity(raw.len());
        for (j, blk) in raw.iter().enumerate() {
            let mut vertices = blk.clone();
            vertices.sort_unstable();
            let (sub, arrows) = q.induced(&vertices);
            let edges = sub.arrows.iter().map(|a| (a.head, a.tail));
            if !connected(sub.n, edges) {
                return Err(PartitionError::NotConnected(j + 1));
            }
            blocks.push(Block {
                vertices,
                arrows,
                kind: classify_dynkin(&sub),
            });
        }

        // Contracted quiver: one vertex per block, arrows between blocks.
        let l = blocks.len();
        let contracted: Vec<Arrow> = q
            .arrows
            .iter()
            .filter(|a| block_of[a.tail - 1] != block_of[a.head - 1])
            .map(|a| Arrow {
                tail: block_of[a.tail - 1] + 1,
                head: block_of[a.head - 1] + 1,
            })
            .collect();
        if find_cycle(l, &contracted).is_some() {
            return Err(PartitionError::ContractionCyclic);
        }
        if contracted.iter().any(|a| a.head >= a.tail) {
            let pairs: Vec<(usize, usize)> = contracted.iter().map(|a| (a.tail, a.head)).collect();
            let (_, label) = reindex_topological(l, &pairs)?;
            let mut suggested = vec![Vec::new(); l];
            for (j, blk) in blocks.iter().enumerate() {
                suggested[label[j] - 1] = blk.vertices.clone();
            }
            return Err(PartitionError::NotOrdered { suggested });
        }
        if require_dynkin {
            if let Some(j) = blocks.iter().position(|b| !b.kind.is_dynkin()) {
                return Err(PartitionError::NotDynkin { block: j + 1 });
            }
        }
        Ok(SubquiverPartition { blocks, block_of })
    }

    /// Singleton blocks in vertex order; valid for every quiver.
    pub fn singletons(q: &Quiver) -> Self {
        let raw: Vec<Vec<usize>> = (1..=q.vertex_count()).map(|v| vec![v]).collect();
        Self::new(q, &raw, true).expect("singleton partition is always valid")
    }

    /// One block holding the whole quiver.
    pub fn whole(q: &Quiver, require_dynkin: bool) -> Result<Self, PartitionError> {
        Self::new(q, &[(1..=q.vertex_count()).collect()], require_dynkin)
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// 0-based block index of a 1-based vertex.
    pub fn block_of(&self, vertex: usize) -> usize {
        self.block_of[vertex - 1]
    }

    pub fn kinds(&self) -> Vec<DynkinType> {
        self.blocks.iter().map(|b| b.kind).collect()
    }

    pub fn has_e8(&self) -> bool {
        self.blocks.iter().any(|b| b.kind == DynkinType::E8)
    }

    pub fn has_type_e(&self) -> bool {
        self.blocks.iter().any(|b| b.kind.is_type_e())
    }

    /// Mask over `q.arrows()` marking arrows inside some block.
    pub fn internal_arrows(&self, q: &Quiver) -> Vec<bool> {
        let mut mask = vec![false; q.arrows().len()];
        for b in &self.blocks {
            for &k in &b.arrows {
                mask[k] = true;
            }
        }
        mask
    }

    /// The block containing the support of `v`, if there is exactly one.
    /// The zero vector has no block.
    pub fn supporting_block(&self, v: &DimVector) -> Option<usize> {
        let mut blocks = v.support().map(|i| self.block_of(i));
        let first = blocks.next()?;
        blocks.all(|b| b == first).then_some(first)
    }

    /// The contracted quiver, with block `j` as vertex `j + 1`.
    pub fn contract(&self, q: &Quiver) -> Result<Quiver, QuiverError> {
        let arrows: Vec<(usize, usize)> = q
            .arrows
            .iter()
            .filter(|a| self.block_of(a.tail) != self.block_of(a.head))
            .map(|a| (self.block_of(a.tail) + 1, self.block_of(a.head) + 1))
            .collect();
        Quiver::new(self.blocks.len(), &arrows)
    }
}

/// Outcome of a consistency check of a list of dimension vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Consistency {
    Consistent,
    /// The vector at this 1-based position is supported in no single block.
    Unsupported(usize),
    /// Positions `u < v` whose blocks appear in decreasing order.
    OutOfOrder(usize, usize),
}

impl Consistency {
    pub fn holds(&self) -> bool {
        *self == Consistency::Consistent
    }
}

/// Checks that each vector lies in one block and the blocks weakly increase.
pub fn is_consistent(p: &SubquiverPartition, list: &[DimVector]) -> Consistency {
    let mut current: Option<(usize, usize)> = None;
    for (u, v) in list.iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        let Some(j) = p.supporting_block(v) else {
            return Consistency::Unsupported(u + 1);
        };
        match current {
            Some((prev_u, prev_j)) if j < prev_j => {
                return Consistency::OutOfOrder(prev_u + 1, u + 1)
            }
            Some((_, prev_j)) if j == prev_j => {}
            _ => current = Some((u, j)),
        }
    }
    Consistency::Consistent
}
