//! Classes of quiver strata, their restriction to the torus-fixed locus, and
//! the exhaustive check that products of subalgebra elements span `ℋ_γ`.

use std::collections::BTreeMap;
use std::ops::Range;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::coha::{
    self, choose_marker, graded_dim, muln_with, one, subalgebra_element, CohaElement, CohaError,
};
use crate::linalg::rank_of;
use crate::par::{self, Exec};
use crate::poly::{monomial_symmetric, omega_block, partitions, Family, MPoly, PolyError, VarId};
use crate::quiver::{DimVector, Quiver, SubquiverPartition};
use crate::roots::{enumerate_partitions, KostantPartition, RootError, RootList};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrataError {
    #[error("element has grade {got}, restriction expects {expected}")]
    GradeMismatch { expected: DimVector, got: DimVector },
    #[error("partition contains an E8 block; the structure theorem does not apply")]
    E8Block,
    #[error("expected {expected} polynomials, one per root, got {got}")]
    InputCount { expected: usize, got: usize },
    #[error("polynomial for root {slot} must be constant since its multiplicity is 0")]
    NonConstantUnused { slot: usize },
    #[error(transparent)]
    Coha(#[from] CohaError),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// The index sets `Y_{i,u,v}` and the substitution `ω[i,k] ↦ t[u,v]` they
/// define. Slots `u` and copies `v` are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct YSystem {
    gamma: DimVector,
    mults: Vec<u32>,
    blocks: Vec<usize>,
    /// `sets[u-1][v-1][i-1]`
    sets: Vec<Vec<Vec<Range<u32>>>>,
    map: BTreeMap<VarId, VarId>,
}

pub fn y_system(roots: &RootList, m: &KostantPartition) -> Result<YSystem, StrataError> {
    roots.partition(m.0.clone())?;
    let gamma = roots.total(m);
    let n = gamma.len();
    let mut next = vec![0u32; n];
    let mut sets = Vec::with_capacity(roots.len());
    let mut map = BTreeMap::new();
    for (u, (beta, &mu)) in roots.roots().iter().zip(m.mults()).enumerate() {
        let mut copies = Vec::with_capacity(mu as usize);
        for v in 1..=mu {
            let per_vertex: Vec<Range<u32>> = (0..n)
                .map(|i| {
                    let range = next[i] + 1..next[i] + 1 + beta[i];
                    next[i] += beta[i];
                    range
                })
                .collect();
            for (i, range) in per_vertex.iter().enumerate() {
                for k in range.clone() {
                    map.insert(VarId::omega(i as u32 + 1, k), VarId::t(u as u32 + 1, v));
                }
            }
            copies.push(per_vertex);
        }
        sets.push(copies);
    }
    Ok(YSystem {
        gamma,
        mults: m.0.clone(),
        blocks: (0..roots.len()).map(|u| roots.block_of(u)).collect(),
        sets,
        map,
    })
}

impl YSystem {
    pub fn gamma(&self) -> &DimVector {
        &self.gamma
    }

    /// `Y_{i,u,v}` as a sorted list; empty when `v > m_u`.
    pub fn set(&self, vertex: usize, u: usize, v: usize) -> Vec<u32> {
        self.sets
            .get(u - 1)
            .and_then(|copies| copies.get(v - 1))
            .map(|per_vertex| per_vertex[vertex - 1].clone().collect())
            .unwrap_or_default()
    }

    /// Block index (0-based) of slot `u` and its 1-based position inside
    /// that block.
    pub fn block_slot(&self, u: usize) -> (usize, usize) {
        let j = self.blocks[u - 1];
        let first = self.blocks.iter().position(|&b| b == j).unwrap_or(0);
        (j, u - first)
    }

    pub fn substitution(&self) -> &BTreeMap<VarId, VarId> {
        &self.map
    }

    /// The variables `t[u,1..m_u]`, grouped per slot.
    pub fn t_blocks(&self) -> Vec<Vec<VarId>> {
        self.mults
            .iter()
            .enumerate()
            .map(|(u, &mu)| (1..=mu).map(|v| VarId::t(u as u32 + 1, v)).collect())
            .collect()
    }

    pub fn restrict(&self, e: &CohaElement) -> Result<MPoly, StrataError> {
        if e.grade() != &self.gamma {
            return Err(StrataError::GradeMismatch {
                expected: self.gamma.clone(),
                got: e.grade().clone(),
            });
        }
        Ok(e.poly().substitute(&self.map))
    }
}

/// `1_{m_1β_1} ∗ ⋯ ∗ 1_{m_rβ_r}`, skipping zero multiplicities.
pub fn stratum_class(
    q: &Arc<Quiver>,
    roots: &RootList,
    m: &KostantPartition,
) -> Result<CohaElement, StrataError> {
    stratum_class_with(q, roots, m, Exec::default())
}

pub fn stratum_class_with(
    q: &Arc<Quiver>,
    roots: &RootList,
    m: &KostantPartition,
    exec: Exec,
) -> Result<CohaElement, StrataError> {
    roots.partition(m.0.clone())?;
    let factors: Vec<CohaElement> = roots
        .roots()
        .iter()
        .zip(m.mults())
        .filter(|(_, &k)| k > 0)
        .map(|(beta, &k)| one(q, beta.scale(k)))
        .collect::<Result<_, _>>()?;
    if factors.is_empty() {
        return Ok(one(q, DimVector::zero(q.vertex_count()))?);
    }
    Ok(muln_with(&factors, exec)?)
}

/// `ε_m`: the stratum class restricted through the Y-set substitution.
pub fn euler_class(
    q: &Arc<Quiver>,
    roots: &RootList,
    m: &KostantPartition,
) -> Result<MPoly, StrataError> {
    let y = y_system(roots, m)?;
    y.restrict(&stratum_class(q, roots, m)?)
}

/// Both sides of the factored restriction identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictionCheck {
    pub holds: bool,
    pub restricted: MPoly,
    pub expected: MPoly,
}

/// Checks `ι*(μ_m(f_1, …, f_r)) = f_1(t[1,•]) ⋯ f_r(t[r,•]) · ε_m`.
///
/// Each `f_u` is written in `ω[1,1..m_u]`. `markers` overrides the default
/// marker vertex of each root.
pub fn factored_restriction_check(
    q: &Arc<Quiver>,
    roots: &RootList,
    m: &KostantPartition,
    fs: &[MPoly],
    markers: Option<&[usize]>,
) -> Result<RestrictionCheck, StrataError> {
    if fs.len() != roots.len() {
        return Err(StrataError::InputCount {
            expected: roots.len(),
            got: fs.len(),
        });
    }
    if let Some(mk) = markers {
        if mk.len() != roots.len() {
            return Err(StrataError::InputCount {
                expected: roots.len(),
                got: mk.len(),
            });
        }
    }
    let y = y_system(roots, m)?;
    let mut factors = Vec::new();
    let mut scalar = MPoly::one();
    let mut expected = euler_class(q, roots, m)?;
    for (u, (beta, &mu)) in roots.roots().iter().zip(m.mults()).enumerate() {
        let f = &fs[u];
        if mu == 0 {
            if f.degree().unwrap_or(0) > 0 {
                return Err(StrataError::NonConstantUnused { slot: u + 1 });
            }
            scalar = &scalar * f;
            continue;
        }
        let marker = match markers {
            Some(mk) => mk[u],
            None => choose_marker(beta)?,
        };
        factors.push(subalgebra_element(q, beta, mu, marker, f)?);
        let slot = u as u32 + 1;
        expected = &expected * &f.rename(|v| VarId::t(slot, v.b));
    }
    let product = if factors.is_empty() {
        one(q, DimVector::zero(q.vertex_count()))?
    } else {
        coha::muln(&factors)?
    };
    let restricted = &y.restrict(&product)? * &scalar;
    let expected = &expected * &scalar;
    Ok(RestrictionCheck {
        holds: restricted == expected,
        restricted,
        expected,
    })
}

/// The quiver of block `j`, its roots in block coordinates (same order),
/// and their multiplicities.
pub(crate) fn block_data(
    q: &Quiver,
    p: &SubquiverPartition,
    roots: &RootList,
    m: &KostantPartition,
    j: usize,
) -> Result<(Quiver, RootList, KostantPartition), StrataError> {
    let blk = &p.blocks()[j];
    let sub = blk.as_quiver(q);
    let range = roots.block_range(j);
    let local_roots: Vec<DimVector> = roots.roots()[range.clone()]
        .iter()
        .map(|beta| DimVector::new(blk.vertices.iter().map(|&v| beta.at(v)).collect()))
        .collect();
    let whole = SubquiverPartition::whole(&sub, true).map_err(|_| RootError::NotDynkin(j + 1))?;
    let local = RootList::from_ordered(&sub, &whole, local_roots)?;
    let mj = KostantPartition(m.mults()[range].to_vec());
    Ok((sub, local, mj))
}

/// Result of comparing a quantity with the product of its per-block
/// counterparts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockProductCheck {
    pub holds: bool,
    pub direct: MPoly,
    pub from_blocks: MPoly,
}

/// Multiplies the per-block orbit classes, each computed on its block
/// quiver alone, and compares with [`stratum_class`].
pub fn orbit_product_check(
    q: &Arc<Quiver>,
    p: &SubquiverPartition,
    roots: &RootList,
    m: &KostantPartition,
) -> Result<BlockProductCheck, StrataError> {
    let direct = stratum_class(q, roots, m)?;
    let mut factors = Vec::new();
    for (j, blk) in p.blocks().iter().enumerate() {
        let (sub, local, mj) = block_data(q, p, roots, m, j)?;
        let class = stratum_class(&Arc::new(sub), &local, &mj)?;
        let lifted = class
            .poly()
            .rename(|v| VarId::omega(blk.vertices[v.a as usize - 1] as u32, v.b));
        let mut grade = vec![0u32; q.vertex_count()];
        for (k, &v) in blk.vertices.iter().enumerate() {
            grade[v - 1] = class.grade()[k];
        }
        factors.push(coha::element(q, DimVector::new(grade), lifted)?);
    }
    let from_blocks = coha::muln(&factors)?;
    Ok(BlockProductCheck {
        holds: from_blocks == direct,
        direct: direct.into_poly(),
        from_blocks: from_blocks.into_poly(),
    })
}

/// Compares `ε_m` with the product of the per-block Euler classes.
pub fn euler_block_check(
    q: &Arc<Quiver>,
    p: &SubquiverPartition,
    roots: &RootList,
    m: &KostantPartition,
) -> Result<BlockProductCheck, StrataError> {
    let direct = euler_class(q, roots, m)?;
    let mut from_blocks = MPoly::one();
    for j in 0..p.len() {
        let (sub, local, mj) = block_data(q, p, roots, m, j)?;
        let offset = roots.block_range(j).start as u32;
        let eps = euler_class(&Arc::new(sub), &local, &mj)?;
        from_blocks = &from_blocks * &eps.rename(|v| VarId::t(v.a + offset, v.b));
    }
    Ok(BlockProductCheck {
        holds: from_blocks == direct,
        direct,
        from_blocks,
    })
}

/// Outcome of the spanning check in one degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeReport {
    pub k: u32,
    pub products: usize,
    pub rank: usize,
    pub graded_dim: u64,
    pub verified: bool,
}

/// `Σ_{u<v} -χ(m_uβ_u, m_vβ_v)` over nonzero factors: the degree of the
/// product of units.
pub fn product_shift(q: &Quiver, roots: &RootList, m: &KostantPartition) -> i64 {
    let grades: Vec<DimVector> = roots
        .roots()
        .iter()
        .zip(m.mults())
        .filter(|(_, &k)| k > 0)
        .map(|(b, &k)| b.scale(k))
        .collect();
    let mut shift = 0;
    for a in 0..grades.len() {
        for b in a + 1..grades.len() {
            shift -= q.euler_unchecked(&grades[a], &grades[b]);
        }
    }
    shift
}

pub fn verify_structure_iso(
    q: &Arc<Quiver>,
    p: &SubquiverPartition,
    gamma: &DimVector,
    k_max: u32,
) -> Result<Vec<DegreeReport>, StrataError> {
    verify_structure_iso_with(q, p, gamma, k_max, Exec::default())
}

/// For each `k ≤ k_max`, the products `μ_m(b_1, …, b_r)` of monomial
/// symmetric basis elements over all partitions `m ⊢ γ`, their rank, and
/// `dim (ℋ_γ)_k`.
pub fn verify_structure_iso_with(
    q: &Arc<Quiver>,
    p: &SubquiverPartition,
    gamma: &DimVector,
    k_max: u32,
    exec: Exec,
) -> Result<Vec<DegreeReport>, StrataError> {
    if p.has_e8() {
        return Err(StrataError::E8Block);
    }
    q.check_dim(gamma).map_err(CohaError::from)?;
    let roots = RootList::combined(q, p)?;
    let parts = enumerate_partitions(roots.roots(), gamma);
    let per_m = par::map_collect(exec, &parts, |m| products_for(q, &roots, m, k_max));
    let mut buckets: Vec<Vec<MPoly>> = vec![Vec::new(); k_max as usize + 1];
    for found in per_m {
        for (k, polys) in found?.into_iter().enumerate() {
            buckets[k].extend(polys);
        }
    }
    Ok(buckets
        .into_iter()
        .enumerate()
        .map(|(k, polys)| {
            let rank = rank_of(&polys);
            let dim = graded_dim(gamma, k as u32);
            DegreeReport {
                k: k as u32,
                products: polys.len(),
                rank,
                graded_dim: dim,
                verified: polys.len() == rank && rank as u64 == dim,
            }
        })
        .collect())
}

/// Products for one partition, bucketed by degree `0..=k_max`.
fn products_for(
    q: &Arc<Quiver>,
    roots: &RootList,
    m: &KostantPartition,
    k_max: u32,
) -> Result<Vec<Vec<MPoly>>, StrataError> {
    let mut out = vec![Vec::new(); k_max as usize + 1];
    let shift = product_shift(q, roots, m);
    let slots: Vec<(usize, u32)> = m
        .mults()
        .iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(u, &k)| (u, k))
        .collect();
    let markers: Vec<usize> = slots
        .iter()
        .map(|&(u, _)| choose_marker(roots.root(u)))
        .collect::<Result<_, _>>()?;
    for k in 0..=k_max {
        let Some(budget) = (k as i64).checked_sub(shift).filter(|b| *b >= 0) else {
            continue;
        };
        for split in compositions(budget as u32, slots.len()) {
            let bases: Vec<Vec<Vec<u32>>> = slots
                .iter()
                .zip(&split)
                .map(|(&(_, mu), &d)| partitions(d, mu as usize))
                .collect();
            for choice in cartesian(&bases) {
                let factors: Vec<CohaElement> = slots
                    .iter()
                    .zip(&markers)
                    .zip(&choice)
                    .map(|((&(u, mu), &i), lambda)| {
                        let f = monomial_symmetric(lambda, &omega_block(1, mu))?;
                        Ok(subalgebra_element(q, roots.root(u), mu, i, &f)?)
                    })
                    .collect::<Result<_, StrataError>>()?;
                let prod = if factors.is_empty() {
                    one(q, DimVector::zero(q.vertex_count()))?
                } else {
                    muln_with(&factors, Exec::Sequential)?
                };
                out[k as usize].push(prod.into_poly());
            }
        }
    }
    Ok(out)
}

/// Ordered ways to write `total` as a sum of `parts` non-negative integers.
fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 {
            vec![Vec::new()]
        } else {
            Vec::new()
        };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
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

/// Whether a partition has type E blocks, whose orbit-closure classes are
/// computed under an unverified normality assumption.
pub fn is_conditional(p: &SubquiverPartition) -> bool {
    p.has_type_e()
}

/// True iff `p` is a nonzero integer times a product of differences of
/// its `t` variables.
pub fn is_product_of_differences(p: &MPoly) -> bool {
    if p.is_zero() {
        return false;
    }
    let vars: Vec<VarId> = p
        .variables()
        .into_iter()
        .filter(|v| v.family == Family::T)
        .collect();
    let mut rest = p.clone();
    loop {
        if rest.degree() == Some(0) {
            return rest.constant_term().is_integer();
        }
        let mut peeled = false;
        'search: for &a in &vars {
            for &b in &vars {
                if a >= b {
                    continue;
                }
                if let Ok(qt) = rest.exact_div(&MPoly::difference(a, b)) {
                    rest = qt;
                    peeled = true;
                    break 'search;
                }
            }
        }
        if !peeled {
            return false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn a2() -> Arc<Quiver> {
        Arc::new(Quiver::new(2, &[(2, 1)]).unwrap())
    }

    fn dv(v: &[u32]) -> DimVector {
        DimVector::new(v.to_vec())
    }

    #[test]
    fn single_root_sets() {
        let q = Quiver::new(3, &[(2, 1), (3, 2)]).unwrap();
        let p = SubquiverPartition::whole(&q, true).unwrap();
        let roots = RootList::combined(&q, &p).unwrap();
        let u = roots
            .roots()
            .iter()
            .position(|r| r == &dv(&[0, 1, 1]))
            .unwrap();
        let mut mults = vec![0; roots.len()];
        mults[u] = 1;
        let y = y_system(&roots, &KostantPartition(mults)).unwrap();
        assert_eq!(y.set(2, u + 1, 1), vec![1]);
        assert_eq!(y.set(3, u + 1, 1), vec![1]);
        assert!(y.set(1, u + 1, 1).is_empty());
        assert!(y.set(2, u + 1, 2).is_empty());
    }

    #[test]
    fn classes_on_a2() {
        let q = a2();
        let p = SubquiverPartition::whole(&q, true).unwrap();
        let roots = RootList::combined(&q, &p).unwrap();
        assert_eq!(roots.roots(), &[dv(&[0, 1]), dv(&[1, 1]), dv(&[1, 0])]);
        let zero_orbit = KostantPartition(vec![1, 0, 1]);
        let class = stratum_class(&q, &roots, &zero_orbit).unwrap();
        assert_eq!(class.poly().to_string(), "ω[1,1] - ω[2,1]");
        assert_eq!(
            euler_class(&q, &roots, &zero_orbit).unwrap().to_string(),
            "-t[1,1] + t[3,1]"
        );
        assert!(stratum_class(&q, &roots, &KostantPartition(vec![0, 1, 0]))
            .unwrap()
            .poly()
            .is_one());
        let empty = stratum_class(&q, &roots, &KostantPartition(vec![0, 0, 0])).unwrap();
        assert!(empty.poly().is_one() && empty.grade().is_zero());
    }

    #[test]
    fn restriction_rejects_wrong_grade() {
        let q = a2();
        let p = SubquiverPartition::whole(&q, true).unwrap();
        let roots = RootList::combined(&q, &p).unwrap();
        let y = y_system(&roots, &KostantPartition(vec![1, 0, 1])).unwrap();
        let e = one(&q, dv(&[1, 0])).unwrap();
        assert!(matches!(
            y.restrict(&e),
            Err(StrataError::GradeMismatch { .. })
        ));
        let ok = coha::element(&q, dv(&[1, 1]), parse_poly("ω[1,1] + ω[2,1]").unwrap()).unwrap();
        assert_eq!(y.restrict(&ok).unwrap().to_string(), "t[1,1] + t[3,1]");
    }

    #[test]
    fn structure_small() {
        let q = a2();
        let p = SubquiverPartition::whole(&q, true).unwrap();
        let report = verify_structure_iso(&q, &p, &dv(&[1, 1]), 3).unwrap();
        assert!(report.iter().all(|r| r.verified), "{report:?}");
        assert_eq!(report[0].products, 1);
        let simple = verify_structure_iso(&q, &p, &dv(&[1, 0]), 5).unwrap();
        assert!(simple.iter().all(|r| r.verified && r.rank == 1));
    }

    #[test]
    fn difference_products() {
        assert!(is_product_of_differences(
            &parse_poly("t[4,1] - t[2,1]").unwrap()
        ));
        assert!(is_product_of_differences(
            &parse_poly("(t[1,1] - t[2,1])*(t[1,1] - t[3,1])*2").unwrap()
        ));
        assert!(is_product_of_differences(&MPoly::one()));
        assert!(!is_product_of_differences(
            &parse_poly("t[1,1] + t[2,1]").unwrap()
        ));
        assert!(!is_product_of_differences(&MPoly::zero()));
    }

    #[test]
    fn compositions_count() {
        assert_eq!(compositions(2, 2), vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
        assert_eq!(compositions(0, 0), vec![Vec::<u32>::new()]);
        assert!(compositions(1, 0).is_empty());
    }
}
