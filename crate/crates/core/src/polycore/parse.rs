//! Text input for polynomials.
//!
//! ```text
//! poly   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := atom ('^' nat)?
//! atom   := nat | var | '(' poly ')'
//! ```
//!
//! Division is only allowed by a nonzero constant. Whitespace is ignored.
//! Error positions are 0-based byte offsets into the input.

use std::sync::Arc;

use num_bigint::BigInt;

use super::monomial::Monomial;
use super::poly::Poly;
use super::ring::Ring;
use crate::error::{Error, Result};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ring: &'a Arc<Ring>,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { pos: self.pos, msg: msg.into() })
    }

    fn poly(&mut self) -> Result<Poly> {
        let mut acc = Poly::zero(self.ring);
        let mut first = true;
        loop {
            let neg = match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    false
                }
                Some(b'-') => {
                    self.pos += 1;
                    true
                }
                _ if first => false,
                _ => return Ok(acc),
            };
            first = false;
            let t = self.term()?;
            acc = if neg { &acc - &t } else { &acc + &t };
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = acc.try_mul(&f)?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let f = self.factor()?;
                    if !f.is_constant() {
                        return Err(Error::Syntax { pos: at, msg: "division by a non-constant".into() });
                    }
                    if f.is_zero() {
                        return Err(Error::ZeroDenominator { pos: at });
                    }
                    acc = acc.scale(&f.lc().inv());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let e = self.nat()?;
            let e: u32 = match u32::try_from(&e) {
                Ok(e) if e <= u16::MAX as u32 => e,
                _ => return Err(Error::Syntax { pos: start, msg: "exponent too large".into() }),
            };
            if base.len() == 1 {
                let t = &base.terms()[0];
                let exps: Vec<u32> = t.m.exps(self.ring.nvars()).iter().map(|&x| x * e).collect();
                let m = Monomial::from_exps(&exps)?;
                return Ok(Poly::term(self.ring, m, t.c.pow(e)));
            }
            return base.pow(e);
        }
        Ok(base)
    }

    fn nat(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a number");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    fn atom(&mut self) -> Result<Poly> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let p = self.poly()?;
                if self.peek() != Some(b')') {
                    return self.err("expected `)`");
                }
                self.pos += 1;
                Ok(p)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.nat()?;
                Ok(Poly::constant(self.ring, self.ring.field().from_bigint(&n)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match self.ring.index_of(name) {
                    Some(i) => Ok(Poly::var(self.ring, i)),
                    None => Err(Error::UnknownVariable { name: name.to_string(), pos: start }),
                }
            }
            Some(_) => self.err("unexpected character"),
            None => self.err("unexpected end of input"),
        }
    }
}

pub fn parse_poly(text: &str, ring: &Arc<Ring>) -> Result<Poly> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, ring };
    if p.peek().is_none() {
        return p.err("empty input");
    }
    let out = p.poly()?;
    if p.peek().is_some() {
        return p.err("unexpected trailing input");
    }
    Ok(out)
}

/// Parse a comma separated list of polynomials.
pub fn parse_list(text: &str, ring: &Arc<Ring>) -> Result<Vec<Poly>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for piece in text.split(',') {
        let p = parse_poly(piece, ring).map_err(|e| shift(e, offset))?;
        out.push(p);
        offset += piece.len() + 1;
    }
    Ok(out)
}

fn shift(e: Error, by: usize) -> Error {
    match e {
        Error::Syntax { pos, msg } => Error::Syntax { pos: pos + by, msg },
        Error::UnknownVariable { name, pos } => Error::UnknownVariable { name, pos: pos + by },
        Error::ZeroDenominator { pos } => Error::ZeroDenominator { pos: pos + by },
        e => e,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Field;

    fn ring() -> Arc<Ring> {
        Ring::polynomial(3, Field::Rational)
    }

    #[test]
    fn round_trip_display() {
        let r = ring();
        let p = parse_poly("3*x1^2 - x2 + 1/2*x3", &r).unwrap();
        assert_eq!(p.to_string(), "3*x1^2 - x2 + 1/2*x3");
    }

    #[test]
    fn parentheses_and_powers() {
        let r = ring();
        let p = parse_poly("(x1+x2)^2 - x1*(x1 + 2*x2)", &r).unwrap();
        assert_eq!(p.to_string(), "x2^2");
        assert_eq!(parse_poly("-x1^0", &r).unwrap().to_string(), "-1");
    }

    #[test]
    fn errors_carry_positions() {
        let r = ring();
        assert_eq!(
            parse_poly("x1 + y", &r),
            Err(Error::UnknownVariable { name: "y".into(), pos: 5 })
        );
        assert_eq!(parse_poly("x1/0", &r), Err(Error::ZeroDenominator { pos: 3 }));
        assert!(matches!(parse_poly("x1 + * x2", &r), Err(Error::Syntax { pos: 5, .. })));
        assert!(matches!(parse_poly("x1^", &r), Err(Error::Syntax { pos: 3, .. })));
        assert!(matches!(parse_poly("x1 x2", &r), Err(Error::Syntax { pos: 3, .. })));
    }

    #[test]
    fn residues_mod_p() {
        let r = Ring::polynomial(2, Field::Prime(7));
        let p = parse_poly("8*x1 - x2 + 1/2", &r).unwrap();
        assert_eq!(p.to_string(), "x1 + 6*x2 + 4");
    }
}
