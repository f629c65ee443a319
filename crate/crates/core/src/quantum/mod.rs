//! The quantum algebra of a quiver over `Q(s)`, `s = q^{1/2}`, truncated to
//! a box of dimension vectors, with quantum dilogarithms and the
//! codimension read off from normal ordering.

mod scalar;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::Ratio;
use thiserror::Error;

pub use scalar::{QScalar, ScalarError, UPoly};

use crate::coha::graded_dim;
use crate::coha::partitions_at_most;
use crate::par::{self, Exec};
use crate::quiver::{DimVector, Quiver, QuiverError, SubquiverPartition};
use crate::roots::{enumerate_partitions, KostantPartition, RootError, RootList};
use crate::strata::block_data;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuantumError {
    #[error("elements are truncated to different boxes")]
    BoxMismatch,
    #[error("elements live over different quivers")]
    QuiverMismatch,
    #[error("the dilogarithm of y_0 is not defined")]
    ZeroVector,
    #[error("grade {0} lies outside the box")]
    OutsideBox(DimVector),
    #[error("normal ordering gave sign {computed}, closed formula gives {expected}")]
    SignMismatch { computed: i8, expected: i8 },
    #[error("codimension {0} is negative")]
    NegativeCodim(Ratio<i64>),
    #[error("codimension {0} is not an integer")]
    NonInteger(Ratio<i64>),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error(transparent)]
    Root(#[from] RootError),
}

/// A box-truncated element `Σ c_γ y_γ`; the zero grade stands for the unit.
#[derive(Debug, Clone)]
pub struct QElement {
    quiver: Arc<Quiver>,
    bound: DimVector,
    terms: BTreeMap<DimVector, QScalar>,
}

impl PartialEq for QElement {
    fn eq(&self, other: &Self) -> bool {
        self.bound == other.bound && self.terms == other.terms && *self.quiver == *other.quiver
    }
}

impl Eq for QElement {}

impl QElement {
    pub fn zero(q: &Arc<Quiver>, bound: DimVector) -> Result<Self, QuantumError> {
        q.check_dim(&bound)?;
        Ok(QElement {
            quiver: Arc::clone(q),
            bound,
            terms: BTreeMap::new(),
        })
    }

    pub fn unit(q: &Arc<Quiver>, bound: DimVector) -> Result<Self, QuantumError> {
        let zero = DimVector::zero(q.vertex_count());
        QElement::monomial(q, bound, zero, QScalar::one())
    }

    /// `c · y_γ`.
    pub fn monomial(
        q: &Arc<Quiver>,
        bound: DimVector,
        gamma: DimVector,
        c: QScalar,
    ) -> Result<Self, QuantumError> {
        let mut e = QElement::zero(q, bound)?;
        e.add_term(gamma, c)?;
        Ok(e)
    }

    pub fn add_term(&mut self, gamma: DimVector, c: QScalar) -> Result<(), QuantumError> {
        self.quiver.check_dim(&gamma)?;
        if !gamma.fits_in(&self.bound) {
            return Err(QuantumError::OutsideBox(gamma));
        }
        accumulate(&mut self.terms, gamma, c);
        Ok(())
    }

    pub fn bound(&self) -> &DimVector {
        &self.bound
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    /// Terms in lexicographic order of grade.
    pub fn terms(&self) -> &BTreeMap<DimVector, QScalar> {
        &self.terms
    }

    pub fn coefficient(&self, gamma: &DimVector) -> QScalar {
        self.terms.get(gamma).cloned().unwrap_or_else(QScalar::zero)
    }

    pub fn scale(&self, c: &QScalar) -> QElement {
        let mut out = QElement {
            quiver: Arc::clone(&self.quiver),
            bound: self.bound.clone(),
            terms: BTreeMap::new(),
        };
        for (g, x) in &self.terms {
            accumulate(&mut out.terms, g.clone(), x * c);
        }
        out
    }

    pub fn add(&self, other: &QElement) -> Result<QElement, QuantumError> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (g, x) in &other.terms {
            accumulate(&mut out.terms, g.clone(), x.clone());
        }
        Ok(out)
    }

    fn compatible(&self, other: &QElement) -> Result<(), QuantumError> {
        if *self.quiver != *other.quiver {
            return Err(QuantumError::QuiverMismatch);
        }
        if self.bound != other.bound {
            return Err(QuantumError::BoxMismatch);
        }
        Ok(())
    }
}

fn accumulate(terms: &mut BTreeMap<DimVector, QScalar>, gamma: DimVector, c: QScalar) {
    if c.is_zero() {
        return;
    }
    match terms.entry(gamma) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let sum = e.get() + &c;
            if sum.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = sum;
            }
        }
    }
}

/// The scalar and grade of `y_{γ1} · y_{γ2}`, without truncation.
fn basis_product(q: &Quiver, g1: &DimVector, g2: &DimVector) -> (DimVector, i8, i64) {
    if g1.is_zero() {
        return (g2.clone(), 1, 0);
    }
    if g2.is_zero() {
        return (g1.clone(), 1, 0);
    }
    (g1 + g2, -1, q.antisym_unchecked(g1, g2))
}

pub fn qmul(x: &QElement, y: &QElement) -> Result<QElement, QuantumError> {
    qmul_with(x, y, Exec::default())
}

pub fn qmul_with(x: &QElement, y: &QElement, exec: Exec) -> Result<QElement, QuantumError> {
    x.compatible(y)?;
    let q = &x.quiver;
    let left: Vec<(&DimVector, &QScalar)> = x.terms.iter().collect();
    let terms = par::map_reduce(
        exec,
        &left,
        |&(g1, c1)| {
            let mut part = BTreeMap::new();
            for (g2, c2) in &y.terms {
                let (g, sign, k) = basis_product(q, g1, g2);
                if !g.fits_in(&x.bound) {
                    continue;
                }
                let mut c = &(c1 * c2) * &QScalar::s_pow(k);
                if sign < 0 {
                    c = -&c;
                }
                accumulate(&mut part, g, c);
            }
            part
        },
        BTreeMap::new,
        |mut a, b| {
            for (g, c) in b {
                accumulate(&mut a, g, c);
            }
            a
        },
    );
    Ok(QElement {
        quiver: Arc::clone(q),
        bound: x.bound.clone(),
        terms,
    })
}

/// `𝒫_d = ∏_{k=1}^{d} (1 - s^{2k})^{-1}`.
pub fn pochhammer_inverse(d: u32) -> QScalar {
    let mut den = UPoly::one();
    for k in 1..=d as usize {
        den = &den * &(&UPoly::one() - &UPoly::monomial(2 * k));
    }
    QScalar::new(UPoly::one(), den).expect("nonzero product")
}

/// `E(y_γ) = Σ_d (-1)^d q^{d²/2} 𝒫_d y_γ^d`, truncated to the box.
pub fn dilog(
    q: &Arc<Quiver>,
    gamma: &DimVector,
    bound: &DimVector,
) -> Result<QElement, QuantumError> {
    q.check_dim(gamma)?;
    if gamma.is_zero() {
        return Err(QuantumError::ZeroVector);
    }
    let y = QElement::monomial(q, bound.clone(), gamma.clone(), QScalar::one());
    let mut out = QElement::unit(q, bound.clone())?;
    if !gamma.fits_in(bound) {
        return Ok(out);
    }
    let y = y?;
    let mut power = QElement::unit(q, bound.clone())?;
    let mut d: u32 = 0;
    loop {
        d += 1;
        power = qmul(&power, &y)?;
        if power.terms.is_empty() {
            return Ok(out);
        }
        let sign = if d.is_multiple_of(2) { 1 } else { -1 };
        let c = &(&QScalar::int(sign) * &QScalar::s_pow(i64::from(d * d))) * &pochhammer_inverse(d);
        out = out.add(&power.scale(&c))?;
    }
}

/// Product of dilogarithms in the given order.
pub fn dilog_product(
    q: &Arc<Quiver>,
    grades: &[DimVector],
    bound: &DimVector,
) -> Result<QElement, QuantumError> {
    let mut acc = QElement::unit(q, bound.clone())?;
    for g in grades {
        acc = qmul(&acc, &dilog(q, g, bound)?)?;
    }
    Ok(acc)
}

/// First grade (lexicographically) where the two sides differ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Discrepancy {
    pub gamma: DimVector,
    pub simple_side: QScalar,
    pub root_side: QScalar,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorizationReport {
    pub holds: bool,
    pub grades_compared: usize,
    pub discrepancy: Option<Discrepancy>,
}

/// `E(y_{e_1}) ⋯ E(y_{e_n}) = E(y_{β_1}) ⋯ E(y_{β_r})` in the box, roots in
/// the combined Reineke order of `p`.
pub fn verify_factorization(
    q: &Arc<Quiver>,
    p: &SubquiverPartition,
    bound: &DimVector,
) -> Result<FactorizationReport, QuantumError> {
    let roots = RootList::combined(q, p)?;
    verify_factorization_with(q, &roots, bound)
}

pub fn verify_factorization_with(
    q: &Arc<Quiver>,
    roots: &RootList,
    bound: &DimVector,
) -> Result<FactorizationReport, QuantumError> {
    let simples: Vec<DimVector> = (1..=q.vertex_count()).map(|i| q.simple(i)).collect();
    let lhs = dilog_product(q, &simples, bound)?;
    let rhs = dilog_product(q, roots.roots(), bound)?;
    let mut grades: Vec<&DimVector> = lhs.terms.keys().chain(rhs.terms.keys()).collect();
    grades.sort();
    grades.dedup();
    let discrepancy = grades.iter().find_map(|g| {
        let (a, b) = (lhs.coefficient(g), rhs.coefficient(g));
        (a != b).then(|| Discrepancy {
            gamma: (*g).clone(),
            simple_side: a,
            root_side: b,
        })
    });
    Ok(FactorizationReport {
        holds: discrepancy.is_none(),
        grades_compared: grades.len(),
        discrepancy,
    })
}

/// `y_{β_1}^{m_1} ⋯ y_{β_r}^{m_r} = (-1)^{s_m} q^{w_m} y_{e_1}^{γ(1)} ⋯ y_{e_n}^{γ(n)}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalForm {
    pub sign: i8,
    pub w: Ratio<i64>,
    pub s_m: u64,
}

/// Sign, power of `s` and grade of a product of basis monomials.
fn monomial_track(q: &Quiver, factors: impl Iterator<Item = DimVector>) -> (i8, i64, DimVector) {
    let mut state = (1i8, 0i64, DimVector::zero(q.vertex_count()));
    for g in factors {
        let (grade, sign, k) = basis_product(q, &state.2, &g);
        state = (state.0 * sign, state.1 + k, grade);
    }
    state
}

pub fn normal_form(
    q: &Quiver,
    roots: &RootList,
    m: &KostantPartition,
) -> Result<NormalForm, QuantumError> {
    roots.partition(m.0.clone())?;
    let gamma = roots.total(m);
    let lhs = monomial_track(
        q,
        roots
            .roots()
            .iter()
            .zip(m.mults())
            .flat_map(|(b, &k)| std::iter::repeat_n(b.clone(), k as usize)),
    );
    let rhs = monomial_track(
        q,
        (1..=q.vertex_count()).flat_map(|i| std::iter::repeat_n(q.simple(i), gamma.at(i) as usize)),
    );
    let sign = lhs.0 * rhs.0;
    let w = Ratio::new(lhs.1 - rhs.1, 2);
    let s_m: u64 = roots
        .roots()
        .iter()
        .zip(m.mults())
        .map(|(b, &k)| u64::from(k) * u64::from(b.total() - 1))
        .sum();
    let expected = if s_m.is_multiple_of(2) { 1 } else { -1 };
    if sign != expected {
        return Err(QuantumError::SignMismatch {
            computed: sign,
            expected,
        });
    }
    Ok(NormalForm { sign, w, s_m })
}

/// `codim η_m = w_m - ½ Σ γ(i)² + ½ Σ m_u²`.
pub fn codim(q: &Quiver, roots: &RootList, m: &KostantPartition) -> Result<u64, QuantumError> {
    let nf = normal_form(q, roots, m)?;
    let gamma = roots.total(m);
    let sq_gamma: i64 = gamma
        .entries()
        .iter()
        .map(|&x| i64::from(x) * i64::from(x))
        .sum();
    let sq_m: i64 = m.mults().iter().map(|&x| i64::from(x) * i64::from(x)).sum();
    let c = nf.w + Ratio::new(sq_m - sq_gamma, 2);
    if !c.is_integer() {
        return Err(QuantumError::NonInteger(c));
    }
    u64::try_from(c.to_integer()).map_err(|_| QuantumError::NegativeCodim(c))
}

/// Codimension over the partition versus the sum over blocks, each block
/// computed on its own quiver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodimAdditivity {
    pub holds: bool,
    pub total: u64,
    pub per_block: Vec<u64>,
}

pub fn codim_block_check(
    q: &Quiver,
    p: &SubquiverPartition,
    roots: &RootList,
    m: &KostantPartition,
) -> Result<CodimAdditivity, QuantumError> {
    let total = codim(q, roots, m)?;
    let mut per_block = Vec::with_capacity(p.len());
    for j in 0..p.len() {
        let (sub, local, mj) = block_data(q, p, roots, m, j).map_err(|e| match e {
            crate::strata::StrataError::Root(r) => QuantumError::Root(r),
            _ => QuantumError::Root(RootError::NotDynkin(j + 1)),
        })?;
        per_block.push(codim(&sub, &local, &mj)?);
    }
    Ok(CodimAdditivity {
        holds: per_block.iter().sum::<u64>() == total,
        total,
        per_block,
    })
}

/// `Σ_{m ⊢ γ} Σ_{k_1 + ⋯ + k_r = k - codim(m)} ∏_u p(k_u, ≤ m_u parts)`.
pub fn poincare_count(
    q: &Quiver,
    roots: &RootList,
    gamma: &DimVector,
    k: u32,
) -> Result<u64, QuantumError> {
    let mut total = 0u64;
    for m in enumerate_partitions(roots.roots(), gamma) {
        let c = codim(q, roots, &m)?;
        let Some(budget) = u64::from(k).checked_sub(c) else {
            continue;
        };
        // convolve the per-root partition counts up to the budget
        let budget = budget as usize;
        let mut acc = vec![0u64; budget + 1];
        acc[0] = 1;
        for &mu in m.mults().iter().filter(|&&x| x > 0) {
            let local: Vec<u64> = (0..=budget as u32)
                .map(|d| partitions_at_most(d, mu))
                .collect();
            let mut next = vec![0u64; budget + 1];
            for (a, &x) in acc.iter().enumerate() {
                for (b, &y) in local.iter().enumerate().take(budget + 1 - a) {
                    next[a + b] += x * y;
                }
            }
            acc = next;
        }
        total += acc[budget];
    }
    Ok(total)
}

/// Per degree: the partition-sum count against `dim (ℋ_γ)_k`.
pub fn poincare_check(
    q: &Quiver,
    roots: &RootList,
    gamma: &DimVector,
    k_max: u32,
) -> Result<Vec<(u32, u64, u64)>, QuantumError> {
    (0..=k_max)
        .map(|k| Ok((k, poincare_count(q, roots, gamma, k)?, graded_dim(gamma, k))))
        .collect()
}
