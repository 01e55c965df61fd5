use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::monomial::Monomial;
use super::ring::Ring;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub m: Monomial,
    pub c: Scalar,
}

/// Sparse polynomial (or free-module element, via monomial components) with
/// terms kept strictly descending in the ring's order, no zero coefficients.
#[derive(Clone)]
pub struct Poly {
    ring: Arc<Ring>,
    terms: Vec<Term>,
}

pub fn same_ring(a: &Arc<Ring>, b: &Arc<Ring>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl PartialEq for Poly {
    fn eq(&self, other: &Poly) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl Poly {
    pub fn zero(ring: &Arc<Ring>) -> Poly {
        Poly { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn constant(ring: &Arc<Ring>, c: Scalar) -> Poly {
        Poly::term(ring, Monomial::one(), c)
    }

    pub fn from_i64(ring: &Arc<Ring>, v: i64) -> Poly {
        Poly::constant(ring, ring.field().from_i64(v))
    }

    pub fn one(ring: &Arc<Ring>) -> Poly {
        Poly::from_i64(ring, 1)
    }

    pub fn var(ring: &Arc<Ring>, i: usize) -> Poly {
        assert!(i < ring.nvars());
        Poly::term(ring, Monomial::var(i), ring.field().one())
    }

    pub fn var_named(ring: &Arc<Ring>, name: &str) -> Option<Poly> {
        ring.index_of(name).map(|i| Poly::var(ring, i))
    }

    pub fn term(ring: &Arc<Ring>, m: Monomial, c: Scalar) -> Poly {
        let c = ring.field().coerce(&c);
        if c.is_zero() {
            return Poly::zero(ring);
        }
        Poly { ring: ring.clone(), terms: vec![Term { m, c }] }
    }

    pub fn monomial(ring: &Arc<Ring>, m: Monomial) -> Poly {
        Poly::term(ring, m, ring.field().one())
    }

    /// Build from arbitrary terms: coefficients coerced, like terms combined.
    pub fn from_terms(ring: &Arc<Ring>, terms: Vec<Term>) -> Poly {
        let field = ring.field();
        let order = ring.order();
        let mut terms: Vec<Term> =
            terms.into_iter().map(|t| Term { m: t.m, c: field.coerce(&t.c) }).collect();
        terms.sort_by(|a, b| order.cmp(&b.m, &a.m));
        let mut out: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            match out.last_mut() {
                Some(last) if last.m == t.m => last.c = &last.c + &t.c,
                _ => {
                    if let Some(last) = out.last() {
                        if last.c.is_zero() {
                            out.pop();
                        }
                    }
                    out.push(t)
                }
            }
        }
        if out.last().is_some_and(|t| t.c.is_zero()) {
            out.pop();
        }
        Poly { ring: ring.clone(), terms: out }
    }

    /// Terms must already be strictly descending with nonzero coefficients.
    pub(crate) fn from_sorted(ring: &Arc<Ring>, terms: Vec<Term>) -> Poly {
        debug_assert!(terms.windows(2).all(|w| ring.order().cmp(&w[0].m, &w[1].m) == Ordering::Greater));
        debug_assert!(terms.iter().all(|t| !t.c.is_zero()));
        Poly { ring: ring.clone(), terms }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Term> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|t| t.m.is_one())
    }

    pub fn lt(&self) -> Option<&Term> {
        self.terms.first()
    }

    /// Leading monomial; panics on zero.
    pub fn lm(&self) -> Monomial {
        self.terms[0].m
    }

    pub fn lc(&self) -> &Scalar {
        &self.terms[0].c
    }

    pub fn check_ring(&self, other: &Poly) -> Result<()> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    fn merge(&self, other: &Poly, negate: bool) -> Poly {
        let order = self.ring.order();
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match order.cmp(&a[i].m, &b[j].m) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate { -&b[j].c } else { b[j].c.clone() };
                    out.push(Term { m: b[j].m, c });
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { &a[i].c - &b[j].c } else { &a[i].c + &b[j].c };
                    if !c.is_zero() {
                        out.push(Term { m: a[i].m, c });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        for t in &b[j..] {
            let c = if negate { -&t.c } else { t.c.clone() };
            out.push(Term { m: t.m, c });
        }
        Poly { ring: self.ring.clone(), terms: out }
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly> {
        self.check_ring(other)?;
        Ok(self.merge(other, false))
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly> {
        self.check_ring(other)?;
        Ok(self.merge(other, true))
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly> {
        self.check_ring(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero(&self.ring));
        }
        if other.len() == 1 {
            return Ok(self.mul_term(&other.terms[0].m, &other.terms[0].c));
        }
        if self.len() == 1 {
            return Ok(other.mul_term(&self.terms[0].m, &self.terms[0].c));
        }
        let mut acc: HashMap<Monomial, Scalar> = HashMap::with_capacity(self.len() * other.len());
        for s in &self.terms {
            for t in &other.terms {
                let m = s.m.try_mul(&t.m)?;
                let c = &s.c * &t.c;
                acc.entry(m).and_modify(|e| *e = &*e + &c).or_insert(c);
            }
        }
        let order = self.ring.order();
        let mut terms: Vec<Term> =
            acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(m, c)| Term { m, c }).collect();
        terms.sort_by(|a, b| order.cmp(&b.m, &a.m));
        Ok(Poly { ring: self.ring.clone(), terms })
    }

    /// `c * m * self`. Multiplication by a monomial preserves the term order.
    pub fn mul_term(&self, m: &Monomial, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        let terms = self.terms.iter().map(|t| Term { m: t.m.mul(m), c: &t.c * c }).collect();
        Poly { ring: self.ring.clone(), terms }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        let terms = self.terms.iter().map(|t| Term { m: t.m.mul(m), c: t.c.clone() }).collect();
        Poly { ring: self.ring.clone(), terms }
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        let c = self.ring.field().coerce(c);
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        let terms = self.terms.iter().map(|t| Term { m: t.m, c: &t.c * &c }).collect();
        Poly { ring: self.ring.clone(), terms }
    }

    pub fn pow(&self, e: u32) -> Result<Poly> {
        let mut acc = Poly::one(&self.ring);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.try_mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.try_mul(&base)?;
            }
        }
        Ok(acc)
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() || self.lc().is_one() {
            return self.clone();
        }
        self.scale(&self.lc().inv())
    }

    /// Scale so that the leading coefficient is positive (rationals) and, over
    /// Q, the coefficients are coprime integers.
    pub fn primitive(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        match self.lc() {
            Scalar::Mod(..) => self.monic(),
            _ => {
                use num_integer::Integer;
                use num_traits::{One, Zero};
                let mut den = num_bigint::BigInt::one();
                let mut num = num_bigint::BigInt::zero();
                for t in &self.terms {
                    let (n, d) = t.c.to_big_parts();
                    den = den.lcm(&d);
                    num = num.gcd(&n);
                }
                let mut f = num_rational::BigRational::new(den, num);
                if self.lc().is_negative() {
                    f = -f;
                }
                self.scale(&Scalar::from_big(f))
            }
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.m.deg()).max()
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.m.deg()).min()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.terms.windows(2).all(|w| w[0].m.deg() == w[1].m.deg())
    }

    pub fn weighted_degree(&self) -> Option<u64> {
        let w = self.ring.weights();
        self.terms.iter().map(|t| t.m.weighted_deg(w)).max()
    }

    pub fn is_weighted_homogeneous(&self) -> bool {
        let w = self.ring.weights();
        self.terms.windows(2).all(|p| p[0].m.weighted_deg(w) == p[1].m.weighted_deg(w))
    }

    /// (x-degree, T-degree) of a bihomogeneous element of R[T].
    pub fn bidegree(&self) -> Result<(u32, u32)> {
        let (xm, tm) = (self.ring.x_mask(), self.ring.t_mask());
        let mut it = self.terms.iter().map(|t| (t.m.masked_deg(xm), t.m.masked_deg(tm)));
        let first = match it.next() {
            None => return Err(Error::NotBihomogeneous),
            Some(b) => b,
        };
        if it.all(|b| b == first) {
            Ok(first)
        } else {
            Err(Error::NotBihomogeneous)
        }
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.iter().map(|t| t.m.exp(var)).max().unwrap_or(0)
    }

    /// Move into `target`, sending variable `i` to variable `map[i]`.
    pub fn remap(&self, target: &Arc<Ring>, map: &[usize]) -> Poly {
        let terms = self.terms.iter().map(|t| Term { m: t.m.remap(map), c: t.c.clone() }).collect();
        Poly::from_terms(target, terms)
    }

    /// Move into a ring whose variable names include every variable that
    /// occurs in `self`.
    pub fn to_ring(&self, target: &Arc<Ring>) -> Result<Poly> {
        if same_ring(&self.ring, target) {
            return Ok(self.clone());
        }
        let n = self.ring.nvars();
        let mut map = Vec::with_capacity(n);
        let mut missing = Vec::new();
        for i in 0..n {
            match target.index_of(self.ring.name(i)) {
                Some(j) => map.push(j),
                None => {
                    missing.push(i);
                    map.push(usize::MAX);
                }
            }
        }
        if self.terms.iter().any(|t| missing.iter().any(|&i| t.m.exp(i) > 0)) {
            return Err(Error::RingMismatch);
        }
        if self.ring.field() != target.field() {
            return Err(Error::RingMismatch);
        }
        Ok(self.remap(target, &map))
    }

    /// Same polynomial, terms re-sorted for a ring differing only in order or
    /// weights.
    pub fn reorder(&self, target: &Arc<Ring>) -> Poly {
        debug_assert!(self.ring.same_variables(target));
        if Arc::ptr_eq(&self.ring, target) {
            return self.clone();
        }
        let order = target.order();
        let mut terms = self.terms.clone();
        terms.sort_by(|a, b| order.cmp(&b.m, &a.m));
        Poly { ring: target.clone(), terms }
    }

    /// Substitute `images[i]` for variable `i`; the images share a ring.
    pub fn substitute(&self, images: &[Poly]) -> Result<Poly> {
        let target = images.first().map(|p| p.ring.clone()).ok_or(Error::RingMismatch)?;
        let mut powers: Vec<Vec<Poly>> = vec![vec![Poly::one(&target)]; images.len()];
        let mut acc = Poly::zero(&target);
        for t in &self.terms {
            let mut prod = Poly::constant(&target, target.field().coerce(&t.c));
            for (i, img) in images.iter().enumerate() {
                let e = t.m.exp(i) as usize;
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e {
                    let next = powers[i].last().unwrap().try_mul(img)?;
                    powers[i].push(next);
                }
                prod = prod.try_mul(&powers[i][e])?;
            }
            acc = acc.try_add(&prod)?;
        }
        Ok(acc)
    }

    /// Group terms by their restriction to the masked variables:
    /// `self = sum_k mono_k * coeff_k` with `coeff_k` free of masked variables.
    /// Keys come out in descending order of the ring order.
    pub fn coefficients(&self, mask: u32) -> Vec<(Monomial, Poly)> {
        let mut groups: HashMap<Monomial, Vec<Term>> = HashMap::new();
        for t in &self.terms {
            let key = t.m.keep(mask).with_comp(0);
            groups.entry(key).or_default().push(Term { m: t.m.strip(mask), c: t.c.clone() });
        }
        let order = self.ring.order();
        let mut out: Vec<(Monomial, Poly)> =
            groups.into_iter().map(|(k, ts)| (k, Poly::from_terms(&self.ring, ts))).collect();
        out.sort_by(|a, b| order.cmp(&b.0, &a.0));
        out
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms
            .iter()
            .find(|t| t.m == *m)
            .map(|t| t.c.clone())
            .unwrap_or_else(|| self.ring.field().zero())
    }

    /// Module element: the polynomial sitting in component `comp`.
    pub fn component(&self, comp: u32) -> Poly {
        let terms: Vec<Term> = self
            .terms
            .iter()
            .filter(|t| t.m.comp() == comp)
            .map(|t| Term { m: t.m.with_comp(0), c: t.c.clone() })
            .collect();
        Poly { ring: self.ring.clone(), terms }
    }

    pub fn in_component(&self, comp: u32) -> Poly {
        let mut terms: Vec<Term> =
            self.terms.iter().map(|t| Term { m: t.m.with_comp(comp), c: t.c.clone() }).collect();
        if terms.windows(2).any(|w| w[0].m.comp() != w[1].m.comp()) {
            let order = self.ring.order();
            terms.sort_by(|a, b| order.cmp(&b.m, &a.m));
        }
        Poly { ring: self.ring.clone(), terms }
    }

    /// Module element from a vector of polynomials, entry `i` in component `i + base`.
    pub fn from_vector(ring: &Arc<Ring>, entries: &[Poly], base: u32) -> Poly {
        let mut terms = Vec::new();
        for (i, e) in entries.iter().enumerate() {
            for t in &e.terms {
                terms.push(Term { m: t.m.with_comp(i as u32 + base), c: t.c.clone() });
            }
        }
        Poly::from_terms(ring, terms)
    }

    pub fn to_vector(&self, len: usize, base: u32) -> Vec<Poly> {
        (0..len).map(|i| self.component(i as u32 + base)).collect()
    }

    pub fn max_comp(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.m.comp()).max()
    }

    pub fn map_coefficients(&self, f: impl Fn(&Scalar) -> Scalar) -> Poly {
        let terms = self.terms.iter().map(|t| Term { m: t.m, c: f(&t.c) }).collect();
        Poly::from_terms(&self.ring, terms)
    }

    /// Divide every term by `m` (which must divide each of them).
    pub fn div_monomial(&self, m: &Monomial) -> Option<Poly> {
        let mut terms = Vec::with_capacity(self.len());
        for t in &self.terms {
            if !m.divides_exps(&t.m) {
                return None;
            }
            terms.push(Term { m: m.quotient_of(&t.m).with_comp(t.m.comp()), c: t.c.clone() });
        }
        Some(Poly { ring: self.ring.clone(), terms })
    }

    /// Gcd of all monomials of `self`.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.iter();
        let first = match it.next() {
            None => return Monomial::one(),
            Some(t) => t.m.with_comp(0),
        };
        it.fold(first, |g, t| g.gcd(&t.m))
    }

    pub fn uses_var(&self, i: usize) -> bool {
        self.terms.iter().any(|t| t.m.exp(i) > 0)
    }

    pub fn support_mask(&self) -> u32 {
        self.terms.iter().fold(0, |s, t| s | t.m.sev())
    }

    /// Deterministic total order on polynomials: by terms, monomials first.
    pub fn cmp_terms(&self, other: &Poly) -> Ordering {
        let order = self.ring.order();
        for (a, b) in self.terms.iter().zip(other.terms.iter()) {
            match order.cmp(&a.m, &b.m) {
                Ordering::Equal => {}
                o => return o,
            }
            match a.c.cmp_canonical(&b.c) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        self.len().cmp(&other.len())
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.try_add(rhs).expect("ring mismatch")
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.try_sub(rhs).expect("ring mismatch")
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.try_mul(rhs).expect("ring mismatch")
    }
}

impl<'a> Neg for &'a Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let terms = self.terms.iter().map(|t| Term { m: t.m, c: -&t.c }).collect();
        Poly { ring: self.ring.clone(), terms }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

pub fn fmt_monomial(ring: &Ring, m: &Monomial) -> String {
    let mut parts = Vec::new();
    for i in 0..ring.nvars() {
        match m.exp(i) {
            0 => {}
            1 => parts.push(ring.name(i).to_string()),
            e => parts.push(format!("{}^{}", ring.name(i), e)),
        }
    }
    let mut s = parts.join("*");
    if m.comp() > 0 || s.is_empty() && m.comp() > 0 {
        if s.is_empty() {
            s = format!("e{}", m.comp());
        } else {
            s = format!("{s}*e{}", m.comp());
        }
    }
    s
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, t) in self.terms.iter().enumerate() {
            let neg = t.c.is_negative();
            let abs = if neg { -&t.c } else { t.c.clone() };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mono = fmt_monomial(&self.ring, &t.m);
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{abs}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl serde::Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::parse::parse_poly;
    use crate::scalar::Field;

    #[test]
    fn difference_of_squares() {
        let r = Ring::new(vec!["x".into(), "y".into()], Field::Rational).unwrap();
        let x = Poly::var(&r, 0);
        let y = Poly::var(&r, 1);
        let p = &(&x + &y) * &(&x - &y);
        assert_eq!(p.to_string(), "x^2 - y^2");
    }

    #[test]
    fn bidegree_of_biforms() {
        let r = Ring::new(
            ["x", "y", "T1", "T2", "T3"].iter().map(|s| s.to_string()).collect(),
            Field::Rational,
        )
        .unwrap();
        let f = parse_poly("x^2*T1+x*y*T2+y^2*T3", &r).unwrap();
        assert_eq!(f.bidegree().unwrap(), (2, 1));
        let h2 = parse_poly("x*y^2*T1^2+y^3*T1*T2-x^3*T2*T3-x^2*y*T2*T3-y^3*T3^2", &r).unwrap();
        assert_eq!(h2.bidegree().unwrap(), (3, 2));
        assert_eq!(Poly::one(&r).bidegree().unwrap(), (0, 0));
        let bad = parse_poly("x*T1 + T1^2", &r).unwrap();
        assert!(bad.bidegree().is_err());
    }

    #[test]
    fn ring_mismatch_is_reported() {
        let a = Ring::polynomial(2, Field::Rational);
        let b = Ring::polynomial(3, Field::Rational);
        assert_eq!(Poly::one(&a).try_add(&Poly::one(&b)), Err(Error::RingMismatch));
    }

    #[test]
    fn primitive_clears_denominators() {
        let r = Ring::polynomial(2, Field::Rational);
        let p = parse_poly("-1/2*x1 + 3/4*x2", &r).unwrap();
        assert_eq!(p.primitive().to_string(), "2*x1 - 3*x2");
    }
}
