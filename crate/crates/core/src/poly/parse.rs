//! Recursive-descent parser for the textual polynomial format.
//!
//! Grammar (whitespace ignored):
//! ```text
//! expr   := ['-'|'+'] term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*      // '/' only by a nonzero constant
//! factor := atom ('^' int)?
//! atom   := int | var | '(' expr ')'
//! var    := ('ω'|'w'|'t') '[' int ',' int ']'
//! ```

use num_bigint::BigInt;
use num_traits::Zero;

use super::{MPoly, PolyError, Rational, VarId};

pub fn parse_poly(src: &str) -> Result<MPoly, PolyError> {
    let mut p = Parser { src, pos: 0 };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos < src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> PolyError {
        PolyError::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek_raw() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek_raw(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.peek_raw()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn expect(&mut self, want: char) -> Result<(), PolyError> {
        match self.bump() {
            Some(c) if c == want => Ok(()),
            _ => Err(self.err(&format!("expected '{want}'"))),
        }
    }

    fn expr(&mut self) -> Result<MPoly, PolyError> {
        let neg = match self.peek() {
            Some('-') => {
                self.bump();
                true
            }
            Some('+') => {
                self.bump();
                false
            }
            _ => false,
        };
        let first = self.term()?;
        let mut acc = if neg { -&first } else { first };
        loop {
            match self.peek() {
                Some('+') => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Some('-') => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MPoly, PolyError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.bump();
                    acc = &acc * &self.factor()?;
                }
                Some('/') => {
                    self.bump();
                    let d = self.factor()?;
                    let c = d.constant_term();
                    if d.len() > 1 || (d.len() == 1 && c.is_zero()) || d.is_zero() {
                        return Err(self.err("division only by a nonzero constant"));
                    }
                    acc = acc.scale(&(Rational::from_integer(1.into()) / c));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<MPoly, PolyError> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.bump();
            let e = self.int()?;
            let e = u32::try_from(e).map_err(|_| self.err("exponent out of range"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MPoly, PolyError> {
        match self.peek() {
            Some('(') => {
                self.bump();
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.peek_raw().is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let n: BigInt = self.src[start..self.pos]
                    .parse()
                    .map_err(|_| self.err("bad integer"))?;
                Ok(MPoly::constant(Rational::from_integer(n)))
            }
            Some('ω') | Some('w') | Some('t') => {
                let c = self.bump().unwrap_or('t');
                self.expect('[')?;
                let a = self.index()?;
                self.expect(',')?;
                let b = self.index()?;
                self.expect(']')?;
                Ok(MPoly::var(if c == 't' {
                    VarId::t(a, b)
                } else {
                    VarId::omega(a, b)
                }))
            }
            _ => Err(self.err("expected number, variable or '('")),
        }
    }

    fn int(&mut self) -> Result<u64, PolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.peek_raw().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.src[start..self.pos]
            .parse()
            .map_err(|_| PolyError::Parse {
                pos: start,
                msg: "expected integer".into(),
            })
    }

    fn index(&mut self) -> Result<u32, PolyError> {
        let v = self.int()?;
        match u32::try_from(v) {
            Ok(v) if v >= 1 => Ok(v),
            _ => Err(self.err("variable index must be a positive integer")),
        }
    }
}
