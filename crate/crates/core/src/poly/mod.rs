//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Variables come in two families: `ω[i,j]` (Chern roots at vertex `i`) and
//! `t[u,v]` (variables of a restriction target). Terms are kept in a
//! `BTreeMap` under graded lexicographic order, so equality is structural
//! and the leading term is the last key.

mod parse;
mod schur;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::par::{self, Exec};

pub use parse::parse_poly;
pub use schur::schur;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("polynomial is not divisible by the divisor")]
    NotDivisible,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("bad partition: {0}")]
    BadPartition(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    Omega,
    T,
}

/// A variable `ω[a,b]` or `t[a,b]`, ordered by family then indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId {
    pub family: Family,
    pub a: u32,
    pub b: u32,
}

impl VarId {
    pub const fn omega(vertex: u32, j: u32) -> Self {
        VarId {
            family: Family::Omega,
            a: vertex,
            b: j,
        }
    }

    pub const fn t(u: u32, v: u32) -> Self {
        VarId {
            family: Family::T,
            a: u,
            b: v,
        }
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::Omega => write!(f, "ω[{},{}]", self.a, self.b),
            Family::T => write!(f, "t[{},{}]", self.a, self.b),
        }
    }
}

/// A monomial as sorted `(variable, exponent)` pairs with positive exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(VarId, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: VarId) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_pairs(mut pairs: Vec<(VarId, u32)>) -> Self {
        pairs.retain(|&(_, e)| e > 0);
        pairs.sort_by_key(|&(v, _)| v);
        let mut out: Vec<(VarId, u32)> = Vec::with_capacity(pairs.len());
        for (v, e) in pairs {
            match out.last_mut() {
                Some((w, f)) if *w == v => *f += e,
                _ => out.push((v, e)),
            }
        }
        Monomial(out)
    }

    pub fn pairs(&self) -> &[(VarId, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, v: VarId) -> u32 {
        self.0
            .binary_search_by_key(&v, |&(w, _)| w)
            .map_or(0, |k| self.0[k].1)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for &(v, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 == v {
                let f = other.0[j].1;
                if f > e {
                    return None;
                }
                if e > f {
                    out.push((v, e - f));
                }
                j += 1;
            } else if j < other.0.len() && other.0[j].0 < v {
                return None;
            } else {
                out.push((v, e));
            }
        }
        (j == other.0.len()).then_some(Monomial(out))
    }

    fn rename(&self, map: &impl Fn(VarId) -> VarId) -> Monomial {
        Monomial::from_pairs(self.0.iter().map(|&(v, e)| (map(v), e)).collect())
    }
}

impl Ord for Monomial {
    /// Graded lex: total degree first, then the larger exponent at the
    /// smallest variable where the two differ wins.
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        for (x, y) in self.0.iter().zip(&other.0) {
            if x.0 != y.0 {
                // whoever carries the smaller variable has the larger exponent there
                return if x.0 < y.0 {
                    Ordering::Greater
                } else {
                    Ordering::Less
                };
            }
            if x.1 != y.1 {
                return x.1.cmp(&y.1);
            }
        }
        self.0.len().cmp(&other.0.len())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, (v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// A polynomial with exact rational coefficients and no zero terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct MPoly {
    terms: BTreeMap<Monomial, Rational>,
}

/// Products with at least this many term pairs are split across threads.
const PAR_MUL_THRESHOLD: usize = 4096;

impl MPoly {
    pub fn zero() -> Self {
        MPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn int(c: i64) -> Self {
        Self::constant(Rational::from_integer(BigInt::from(c)))
    }

    pub fn var(v: VarId) -> Self {
        Self::term(Rational::one(), Monomial::var(v))
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MPoly { terms }
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = MPoly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    /// `x - y` for two variables.
    pub fn difference(x: VarId, y: VarId) -> Self {
        &Self::var(x) - &Self::var(y)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical (descending graded lex) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::one())
    }

    pub fn variables(&self) -> BTreeSet<VarId> {
        self.terms
            .keys()
            .flat_map(|m| m.0.iter().map(|&(v, _)| v))
            .collect()
    }

    /// Maximum total degree; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// The common degree of all terms, if homogeneous and nonzero.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(Monomial::degree);
        let d = degs.next()?;
        degs.all(|e| e == d).then_some(d)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        // multiplying by a monomial preserves the term order
        MPoly {
            terms: self.terms.iter().map(|(k, x)| (k.mul(m), x * c)).collect(),
        }
    }

    pub fn mul_with(&self, other: &MPoly, exec: Exec) -> MPoly {
        if self.is_zero() || other.is_zero() {
            return MPoly::zero();
        }
        let (big, small) = if self.len() >= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        let lhs: Vec<(&Monomial, &Rational)> = big.terms.iter().collect();
        if exec.is_parallel() && big.len() * small.len() >= PAR_MUL_THRESHOLD {
            let chunk = (lhs.len() / 16).max(1);
            let chunks: Vec<&[(&Monomial, &Rational)]> = lhs.chunks(chunk).collect();
            return par::map_reduce(
                exec,
                &chunks,
                |part| Self::mul_slice(part, small),
                MPoly::zero,
                |a, b| &a + &b,
            );
        }
        Self::mul_slice(&lhs, small)
    }

    fn mul_slice(lhs: &[(&Monomial, &Rational)], rhs: &MPoly) -> MPoly {
        let mut acc: HashMap<Monomial, Rational> = HashMap::with_capacity(lhs.len() * rhs.len());
        for (m1, c1) in lhs {
            for (m2, c2) in &rhs.terms {
                let c = *c1 * c2;
                acc.entry(m1.mul(m2)).and_modify(|x| *x += &c).or_insert(c);
            }
        }
        MPoly {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut acc = MPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Exact quotient by long division on leading terms.
    pub fn exact_div(&self, d: &MPoly) -> Result<MPoly, PolyError> {
        let (lm, lc) = d.leading_term().ok_or(PolyError::DivisionByZero)?;
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = self.clone();
        let mut quot = MPoly::zero();
        while let Some((m, c)) = rem.leading_term() {
            let qm = m.div(&lm).ok_or(PolyError::NotDivisible)?;
            let qc = c / &lc;
            for (dm, dc) in &d.terms {
                rem.add_term(dm.mul(&qm), -(dc * &qc));
            }
            quot.add_term(qm, qc);
        }
        Ok(quot)
    }

    /// Renames variables through `map`; absent variables are kept.
    pub fn substitute(&self, map: &BTreeMap<VarId, VarId>) -> MPoly {
        self.rename(|v| map.get(&v).copied().unwrap_or(v))
    }

    pub fn rename(&self, f: impl Fn(VarId) -> VarId) -> MPoly {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.rename(&f), c.clone());
        }
        out
    }

    /// Invariance under every adjacent transposition inside each block.
    pub fn is_block_symmetric(&self, blocks: &[Vec<VarId>]) -> bool {
        blocks.iter().all(|blk| {
            blk.windows(2).all(|w| {
                let (x, y) = (w[0], w[1]);
                let swapped = self.rename(|v| {
                    if v == x {
                        y
                    } else if v == y {
                        x
                    } else {
                        v
                    }
                });
                swapped == *self
            })
        })
    }

    /// Coefficients scaled to coprime integers; used for exact rank.
    pub(crate) fn integer_row(&self) -> Vec<(Monomial, BigInt)> {
        use num_integer::Integer;
        let lcm = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        self.terms
            .iter()
            .map(|(m, c)| {
                (
                    m.clone(),
                    (c * Rational::from_integer(lcm.clone())).to_integer(),
                )
            })
            .collect()
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let a = c.abs();
            if m.is_one() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{a}*{m}")?;
            }
        }
        Ok(())
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        let (mut out, other) = if self.len() >= rhs.len() {
            (self.clone(), rhs)
        } else {
            (rhs.clone(), self)
        };
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        self.mul_with(rhs, Exec::default())
    }
}

impl std::iter::Sum for MPoly {
    fn sum<I: Iterator<Item = MPoly>>(iter: I) -> MPoly {
        iter.fold(MPoly::zero(), |a, b| &a + &b)
    }
}

impl std::iter::Product for MPoly {
    fn product<I: Iterator<Item = MPoly>>(iter: I) -> MPoly {
        iter.fold(MPoly::one(), |a, b| &a * &b)
    }
}

/// `ω[vertex, 1..=count]`.
pub fn omega_block(vertex: u32, count: u32) -> Vec<VarId> {
    (1..=count).map(|j| VarId::omega(vertex, j)).collect()
}

/// Partitions of `d` with at most `max_parts` parts, each weakly decreasing,
/// in reverse lexicographic order.
pub fn partitions(d: u32, max_parts: usize) -> Vec<Vec<u32>> {
    fn go(rest: u32, cap: u32, slots: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        if slots == 0 {
            return;
        }
        for part in (1..=cap.min(rest)).rev() {
            cur.push(part);
            go(rest - part, part, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(d, d, max_parts, &mut Vec::new(), &mut out);
    out
}

/// The monomial symmetric polynomial `m_λ(vars)`: the sum of all distinct
/// monomials whose exponent vector is a rearrangement of `λ`.
pub fn monomial_symmetric(lambda: &[u32], vars: &[VarId]) -> Result<MPoly, PolyError> {
    let parts: Vec<u32> = lambda.iter().copied().filter(|&p| p > 0).collect();
    if parts.len() > vars.len() {
        return Err(PolyError::BadPartition(format!(
            "{lambda:?} has more parts than the {} variables",
            vars.len()
        )));
    }
    let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
    for &p in &parts {
        *counts.entry(p).or_default() += 1;
    }
    *counts.entry(0).or_default() += vars.len() - parts.len();
    let mut out = MPoly::zero();
    let mut cur = Vec::with_capacity(vars.len());
    arrange(&mut counts, vars.len(), &mut cur, &mut |exps: &[u32]| {
        let m = Monomial::from_pairs(vars.iter().copied().zip(exps.iter().copied()).collect());
        out.add_term(m, Rational::one());
    });
    Ok(out)
}

fn arrange(
    counts: &mut BTreeMap<u32, usize>,
    len: usize,
    cur: &mut Vec<u32>,
    emit: &mut impl FnMut(&[u32]),
) {
    if cur.len() == len {
        emit(cur);
        return;
    }
    let keys: Vec<u32> = counts
        .iter()
        .filter(|(_, &c)| c > 0)
        .map(|(&k, _)| k)
        .collect();
    for k in keys {
        *counts.get_mut(&k).expect("key present") -= 1;
        cur.push(k);
        arrange(counts, len, cur, emit);
        cur.pop();
        *counts.get_mut(&k).expect("key present") += 1;
    }
}
