use std::cmp::Ordering;
use std::sync::Arc;

use crate::polycore::{Monomial, MonomialOrder, Poly, Ring, Term};
use crate::scalar::Scalar;

/// A monic reducer with its leading monomial and support mask cached.
#[derive(Clone, Debug)]
pub struct Reducer {
    pub lm: Monomial,
    pub sev: u32,
    pub poly: Poly,
}

impl Reducer {
    pub fn new(p: Poly) -> Reducer {
        let p = p.monic();
        let lm = p.lm();
        Reducer { lm, sev: lm.sev(), poly: p }
    }
}

#[inline]
pub fn find_divisor(divs: &[Reducer], m: &Monomial) -> Option<usize> {
    let s = m.sev();
    divs.iter().position(|d| d.sev & !s == 0 && d.lm.divides(m))
}

/// `p - c*q*g`, where `p` is stored ascending and `tail` is descending.
fn sub_scaled(p: Vec<Term>, c: &Scalar, q: &Monomial, tail: &[Term], order: MonomialOrder) -> Vec<Term> {
    let mut out = Vec::with_capacity(p.len() + tail.len());
    let mut a = p.into_iter().peekable();
    let mut b = tail.iter().rev().map(|t| Term { m: t.m.mul(q), c: -(&t.c * c) }).peekable();
    loop {
        match (a.peek(), b.peek()) {
            (Some(x), Some(y)) => match order.cmp(&x.m, &y.m) {
                Ordering::Less => out.push(a.next().unwrap()),
                Ordering::Greater => out.push(b.next().unwrap()),
                Ordering::Equal => {
                    let x = a.next().unwrap();
                    let y = b.next().unwrap();
                    let s = &x.c + &y.c;
                    if !s.is_zero() {
                        out.push(Term { m: x.m, c: s });
                    }
                }
            },
            (Some(_), None) => {
                out.extend(a);
                break;
            }
            (None, Some(_)) => {
                out.extend(b);
                break;
            }
            (None, None) => break,
        }
    }
    out
}

/// Full normal form of `f` with respect to `divs` (not necessarily a basis).
pub fn reduce_full(f: &Poly, divs: &[Reducer]) -> Poly {
    reduce_impl(f, divs, false)
}

/// Reduce only until the leading term is irreducible.
pub fn reduce_top(f: &Poly, divs: &[Reducer]) -> Poly {
    reduce_impl(f, divs, true)
}

fn reduce_impl(f: &Poly, divs: &[Reducer], top_only: bool) -> Poly {
    let ring: &Arc<Ring> = f.ring();
    let order = ring.order();
    let mut p: Vec<Term> = f.terms().iter().rev().cloned().collect();
    let mut r: Vec<Term> = Vec::new();
    while let Some(lt) = p.pop() {
        match find_divisor(divs, &lt.m) {
            Some(i) => {
                let g = &divs[i];
                let q = lt.m.checked_div(&g.lm).expect("divisor");
                p = sub_scaled(p, &lt.c, &q, &g.poly.terms()[1..], order);
            }
            None => {
                r.push(lt);
                if top_only {
                    r.extend(p.into_iter().rev());
                    break;
                }
            }
        }
    }
    Poly::from_sorted(ring, r)
}

/// Normal form together with the quotients: `f = sum q_i * divs[i] + r`.
pub fn divide(f: &Poly, divs: &[Reducer]) -> (Vec<Poly>, Poly) {
    let ring = f.ring();
    let order = ring.order();
    let mut quot: Vec<Vec<Term>> = vec![Vec::new(); divs.len()];
    let mut p: Vec<Term> = f.terms().iter().rev().cloned().collect();
    let mut r: Vec<Term> = Vec::new();
    while let Some(lt) = p.pop() {
        match find_divisor(divs, &lt.m) {
            Some(i) => {
                let g = &divs[i];
                let q = lt.m.checked_div(&g.lm).expect("divisor");
                p = sub_scaled(p, &lt.c, &q, &g.poly.terms()[1..], order);
                quot[i].push(Term { m: q, c: lt.c });
            }
            None => r.push(lt),
        }
    }
    let quot = quot.into_iter().map(|ts| Poly::from_terms(ring, ts)).collect();
    (quot, Poly::from_sorted(ring, r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::parse_poly;
    use crate::scalar::Field;

    #[test]
    fn division_identity() {
        let r = Ring::polynomial(3, Field::Rational);
        let g1 = parse_poly("x1^2 - x2*x3", &r).unwrap();
        let g2 = parse_poly("x2^2 - x1*x3", &r).unwrap();
        let f = parse_poly("x1^3*x2 + 2*x2^3 - x3^4 + x1*x2", &r).unwrap();
        let divs = vec![Reducer::new(g1.clone()), Reducer::new(g2.clone())];
        let (q, rem) = divide(&f, &divs);
        let back = &(&(&q[0] * &g1) + &(&q[1] * &g2)) + &rem;
        assert_eq!(back, f);
        assert_eq!(rem, reduce_full(&f, &divs));
        for t in rem.terms() {
            assert!(find_divisor(&divs, &t.m).is_none());
        }
    }
}
