//! Exact rational functions in `s = q^{1/2}`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse scalar at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// A dense polynomial in `s`, coefficients in ascending order, no trailing
/// zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct UPoly(Vec<BigRational>);

impl UPoly {
    pub fn zero() -> Self {
        UPoly(Vec::new())
    }

    pub fn one() -> Self {
        UPoly(vec![BigRational::one()])
    }

    pub fn constant(c: BigRational) -> Self {
        UPoly::new(vec![c])
    }

    /// `s^k`.
    pub fn monomial(k: usize) -> Self {
        let mut v = vec![BigRational::zero(); k + 1];
        v[k] = BigRational::one();
        UPoly(v)
    }

    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UPoly(coeffs)
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        UPoly::new(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.0.last()
    }

    pub fn scale(&self, c: &BigRational) -> UPoly {
        UPoly::new(self.0.iter().map(|x| x * c).collect())
    }

    /// Quotient and remainder; panics on a zero divisor.
    pub fn divrem(&self, d: &UPoly) -> (UPoly, UPoly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.0[dd].clone();
        let mut rem = self.0.clone();
        if rem.len() <= dd {
            return (UPoly::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &lead;
            if !c.is_zero() {
                for (j, x) in d.0.iter().enumerate() {
                    let sub = &c * x;
                    rem[k + j] -= sub;
                }
            }
            quot[k] = c;
        }
        (UPoly::new(quot), UPoly::new(rem))
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> UPoly {
        match self.leading() {
            Some(l) => self.scale(&l.recip()),
            None => UPoly::zero(),
        }
    }
}

impl Add for &UPoly {
    type Output = UPoly;
    fn add(self, rhs: &UPoly) -> UPoly {
        let n = self.0.len().max(rhs.0.len());
        let zero = BigRational::zero();
        UPoly::new(
            (0..n)
                .map(|k| self.0.get(k).unwrap_or(&zero) + rhs.0.get(k).unwrap_or(&zero))
                .collect(),
        )
    }
}

impl Neg for &UPoly {
    type Output = UPoly;
    fn neg(self) -> UPoly {
        UPoly(self.0.iter().map(|c| -c).collect())
    }
}

impl Sub for &UPoly {
    type Output = UPoly;
    fn sub(self, rhs: &UPoly) -> UPoly {
        self + &(-rhs)
    }
}

impl Mul for &UPoly {
    type Output = UPoly;
    fn mul(self, rhs: &UPoly) -> UPoly {
        if self.is_zero() || rhs.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UPoly::new(out)
    }
}

impl fmt::Display for UPoly {
    /// Ascending powers, e.g. `1 - 2*s + 1/3*s^4`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            let a = c.abs();
            let power = match k {
                0 => String::new(),
                1 => "s".to_string(),
                _ => format!("s^{k}"),
            };
            if k == 0 {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{power}")?;
            } else {
                write!(f, "{a}*{power}")?;
            }
        }
        Ok(())
    }
}

/// A reduced fraction `num/den` with `den` monic; zero is `0/1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QScalar {
    num: UPoly,
    den: UPoly,
}

impl QScalar {
    pub fn new(num: UPoly, den: UPoly) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(QScalar::zero());
        }
        let g = num.gcd(&den);
        let (num, _) = num.divrem(&g);
        let (den, _) = den.divrem(&g);
        let lead = den
            .leading()
            .cloned()
            .unwrap_or_else(BigRational::one)
            .recip();
        Ok(QScalar {
            num: num.scale(&lead),
            den: den.scale(&lead),
        })
    }

    fn make(num: UPoly, den: UPoly) -> Self {
        QScalar::new(num, den).expect("nonzero denominator")
    }

    pub fn zero() -> Self {
        QScalar {
            num: UPoly::zero(),
            den: UPoly::one(),
        }
    }

    pub fn one() -> Self {
        QScalar {
            num: UPoly::one(),
            den: UPoly::one(),
        }
    }

    pub fn int(c: i64) -> Self {
        QScalar::make(UPoly::from_ints(&[c]), UPoly::one())
    }

    /// `s^k` for any integer `k`.
    pub fn s_pow(k: i64) -> Self {
        let m = UPoly::monomial(k.unsigned_abs() as usize);
        if k >= 0 {
            QScalar {
                num: m,
                den: UPoly::one(),
            }
        } else {
            QScalar {
                num: UPoly::one(),
                den: m,
            }
        }
    }

    pub fn from_poly(p: UPoly) -> Self {
        QScalar::make(p, UPoly::one())
    }

    pub fn num(&self) -> &UPoly {
        &self.num
    }

    pub fn den(&self) -> &UPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn recip(&self) -> Result<Self, ScalarError> {
        QScalar::new(self.den.clone(), self.num.clone())
    }

    pub fn parse(src: &str) -> Result<Self, ScalarError> {
        let src = src.trim();
        match split_fraction(src) {
            Some((n, d)) => {
                let num = parse_upoly(n.0, n.1)?;
                let den = parse_upoly(d.0, d.1)?;
                QScalar::new(num, den)
            }
            None => Ok(QScalar::from_poly(parse_upoly(src, 0)?)),
        }
    }
}

/// A slice of the input with its byte offset.
type Located<'a> = (&'a str, usize);

/// Splits `(a)/(b)` into its two bodies with their byte offsets.
fn split_fraction(src: &str) -> Option<(Located<'_>, Located<'_>)> {
    let rest = src.strip_prefix('(')?;
    let close = rest.find(')')?;
    let after = rest[close + 1..].trim_start().strip_prefix('/')?.trim();
    let den = after.strip_prefix('(')?.strip_suffix(')')?;
    let den_offset = src.len() - after.len() + 1;
    Some(((&rest[..close], 1), (den, den_offset)))
}

fn parse_upoly(src: &str, offset: usize) -> Result<UPoly, ScalarError> {
    let err = |pos: usize, msg: &str| ScalarError::Parse {
        pos: offset + pos,
        msg: msg.to_string(),
    };
    let compact: Vec<(usize, char)> = src
        .char_indices()
        .filter(|(_, c)| !c.is_whitespace())
        .collect();
    if compact.is_empty() {
        return Err(err(0, "empty polynomial"));
    }
    let mut acc = UPoly::zero();
    let mut i = 0;
    while i < compact.len() {
        let mut sign = BigRational::one();
        match compact[i].1 {
            '+' => i += 1,
            '-' => {
                sign = -sign;
                i += 1;
            }
            _ if i > 0 => return Err(err(compact[i].0, "expected '+' or '-'")),
            _ => {}
        }
        let start = i;
        while i < compact.len() && !matches!(compact[i].1, '+' | '-') {
            i += 1;
        }
        if start == i {
            return Err(err(
                compact.get(start).map_or(src.len(), |c| c.0),
                "missing term",
            ));
        }
        let term: String = compact[start..i].iter().map(|c| c.1).collect();
        let pos = compact[start].0;
        let (coef, power) = match term.find('s') {
            None => (term.as_str(), None),
            Some(k) => {
                let coef = term[..k].strip_suffix('*').unwrap_or(&term[..k]);
                (coef, Some(&term[k + 1..]))
            }
        };
        let c = if coef.is_empty() {
            BigRational::one()
        } else {
            parse_rational(coef).ok_or_else(|| err(pos, "bad coefficient"))?
        };
        let k = match power {
            None => 0,
            Some("") => 1,
            Some(p) => p
                .strip_prefix('^')
                .and_then(|e| e.parse::<usize>().ok())
                .ok_or_else(|| err(pos, "bad power of s"))?,
        };
        acc = &acc + &UPoly::monomial(k).scale(&(sign * c));
    }
    Ok(acc)
}

fn parse_rational(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((a, b)) => {
            let n: BigInt = a.parse().ok()?;
            let d: BigInt = b.parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

impl fmt::Display for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/({})", self.num, self.den)
    }
}

impl Add for &QScalar {
    type Output = QScalar;
    fn add(self, rhs: &QScalar) -> QScalar {
        if self.den == rhs.den {
            return QScalar::make(&self.num + &rhs.num, self.den.clone());
        }
        QScalar::make(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Neg for &QScalar {
    type Output = QScalar;
    fn neg(self) -> QScalar {
        QScalar {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Sub for &QScalar {
    type Output = QScalar;
    fn sub(self, rhs: &QScalar) -> QScalar {
        self + &(-rhs)
    }
}

impl Mul for &QScalar {
    type Output = QScalar;
    fn mul(self, rhs: &QScalar) -> QScalar {
        QScalar::make(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Div for &QScalar {
    type Output = Result<QScalar, ScalarError>;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &QScalar) -> Result<QScalar, ScalarError> {
        Ok(self * &rhs.recip()?)
    }
}
