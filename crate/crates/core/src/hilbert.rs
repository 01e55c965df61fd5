use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gbasis::{ideal_quotient, GroebnerBasis};
use crate::linalg::{nullspace, Echelon, MonomialIndex};
use crate::polycore::{Monomial, MonomialOrder, Poly, Ring};

/// Coefficients `h_offset, h_(offset+1), ...` of a finite Hilbert series.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HilbertSeries {
    pub coeffs: Vec<i64>,
    pub offset: i64,
}

impl HilbertSeries {
    pub fn new(coeffs: Vec<i64>, offset: i64) -> HilbertSeries {
        let mut s = HilbertSeries { coeffs, offset };
        s.trim();
        s
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
        while self.coeffs.first() == Some(&0) {
            self.coeffs.remove(0);
            self.offset += 1;
        }
    }

    pub fn at(&self, t: i64) -> i64 {
        if t < self.offset {
            return 0;
        }
        self.coeffs.get((t - self.offset) as usize).copied().unwrap_or(0)
    }

    pub fn length(&self) -> i64 {
        self.coeffs.iter().sum()
    }

    /// Largest degree with a nonzero coefficient.
    pub fn top_degree(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.offset + self.coeffs.len() as i64 - 1)
        }
    }

    pub fn reversed(&self) -> Vec<i64> {
        self.coeffs.iter().rev().copied().collect()
    }

    pub fn shifted(&self, by: i64) -> HilbertSeries {
        HilbertSeries { coeffs: self.coeffs.clone(), offset: self.offset + by }
    }

    pub fn sub(&self, other: &HilbertSeries) -> HilbertSeries {
        let lo = self.offset.min(other.offset);
        let hi = self.top_degree().unwrap_or(lo).max(other.top_degree().unwrap_or(lo));
        let coeffs = (lo..=hi).map(|t| self.at(t) - other.at(t)).collect();
        HilbertSeries::new(coeffs, lo)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|&c| c >= 0)
    }
}

impl fmt::Display for HilbertSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let t = self.offset + i as i64;
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            let a = c.abs();
            let body = match (t, a) {
                (0, _) => format!("{a}"),
                (1, 1) => "t".to_string(),
                (1, _) => format!("{a}t"),
                (_, 1) => format!("t^{t}"),
                _ => format!("{a}t^{t}"),
            };
            write!(f, "{sign}{body}")?;
            first = false;
        }
        Ok(())
    }
}

/// Standard monomials of an Artinian quotient, grouped by degree.
#[derive(Clone, Debug)]
pub struct StandardBasis {
    pub gb: GroebnerBasis,
    pub by_degree: Vec<Vec<Monomial>>,
}

impl StandardBasis {
    pub fn series(&self) -> HilbertSeries {
        HilbertSeries::new(self.by_degree.iter().map(|v| v.len() as i64).collect(), 0)
    }
}

fn grevlex_ring(ring: &Arc<Ring>) -> Arc<Ring> {
    ring.with_order(MonomialOrder::Grevlex)
}

/// Standard monomial basis of `R/I`, failing if the quotient is not Artinian.
pub fn standard_basis(ring: &Arc<Ring>, ideal: &[Poly]) -> Result<StandardBasis> {
    let gring = grevlex_ring(ring);
    let gb = GroebnerBasis::new(&gring, ideal)?;
    let n = ring.nvars();
    let lms = gb.leading_monomials();
    for v in 0..n {
        let pure = lms.iter().any(|m| m.exp(v) > 0 && m.deg() == m.exp(v));
        if !pure && !gb.is_unit_ideal() {
            return Err(Error::NotArtinian { var: ring.name(v).to_string() });
        }
    }
    let mut by_degree: Vec<Vec<Monomial>> = Vec::new();
    let mut cur: Vec<Monomial> = if gb.is_standard(&Monomial::one()) { vec![Monomial::one()] } else { vec![] };
    while !cur.is_empty() {
        let mut next: HashSet<Monomial> = HashSet::new();
        for m in &cur {
            for v in 0..n {
                let mm = m.mul(&Monomial::var(v));
                if gb.is_standard(&mm) {
                    next.insert(mm);
                }
            }
        }
        let mut sorted = cur;
        sorted.sort_by(|a, b| gring.order().cmp(b, a));
        by_degree.push(sorted);
        cur = next.into_iter().collect();
    }
    Ok(StandardBasis { gb, by_degree })
}

/// Hilbert series of `R/I` for an Artinian quotient.
pub fn hilbert_series(ring: &Arc<Ring>, ideal: &[Poly]) -> Result<HilbertSeries> {
    Ok(standard_basis(ring, ideal)?.series())
}

/// Socle of an Artinian quotient `R/I`.
#[derive(Clone, Debug)]
pub struct Socle {
    pub degree: i64,
    pub dimension: usize,
    pub basis: Vec<Poly>,
    pub dims_by_degree: Vec<usize>,
}

/// Socle `(I : m)/I`, computed degree by degree as the common kernel of the
/// multiplication maps by the variables.
pub fn socle(ring: &Arc<Ring>, ideal: &[Poly]) -> Result<Socle> {
    let sb = standard_basis(ring, ideal)?;
    let gring = sb.gb.ring().clone();
    let n = ring.nvars();
    let top = sb.by_degree.len() as i64 - 1;
    let mut basis = Vec::new();
    let mut dims = Vec::new();
    for (t, mons) in sb.by_degree.iter().enumerate() {
        let next = sb.by_degree.get(t + 1);
        // Columns: standard monomials of degree t; rows: (variable, target).
        let mut rows: Vec<Vec<_>> = Vec::new();
        if let Some(next) = next {
            let idx = MonomialIndex::from_monomials(next);
            for v in 0..n {
                let mut block = vec![vec![ring.field().zero(); mons.len()]; next.len()];
                for (j, m) in mons.iter().enumerate() {
                    let p = Poly::monomial(&gring, m.mul(&Monomial::var(v)));
                    let r = sb.gb.reduce(&p);
                    for term in r.terms() {
                        let i = idx.get(&term.m).expect("normal form in standard basis");
                        block[i][j] = term.c.clone();
                    }
                }
                rows.extend(block);
            }
        }
        let ker = if rows.is_empty() {
            (0..mons.len())
                .map(|j| {
                    let mut v = vec![ring.field().zero(); mons.len()];
                    v[j] = ring.field().one();
                    v
                })
                .collect()
        } else {
            nullspace(&rows, mons.len(), &ring.field().zero())
        };
        dims.push(ker.len());
        for v in ker {
            let terms = mons
                .iter()
                .zip(v)
                .filter(|(_, c)| !c.is_zero())
                .map(|(m, c)| crate::polycore::Term { m: *m, c })
                .collect();
            basis.push(Poly::from_terms(&gring, terms).reorder(ring));
        }
    }
    Ok(Socle { degree: top, dimension: basis.len(), basis, dims_by_degree: dims })
}

/// Checks `H_{R/I}(t) = H_{R/J}(t) - t^n H_{R/(J:a)}(t)` coefficientwise.
pub fn dubreil_identity_check(ring: &Arc<Ring>, j: &[Poly], a: &Poly, n: u32) -> Result<bool> {
    let gj = GroebnerBasis::new(ring, j)?;
    if gj.contains(a) {
        return Err(Error::Precondition("the extra generator lies in the reduction".into()));
    }
    let mut i = j.to_vec();
    i.push(a.clone());
    let hi = hilbert_series(ring, &i)?;
    let hj = hilbert_series(ring, j)?;
    let colon = ideal_quotient(j, a)?;
    let hc = hilbert_series(ring, &colon)?;
    Ok(hi == hj.sub(&hc.shifted(n as i64)))
}

/// Hilbert series of `H_1(I) ≅ (J:a)/J`, placed in the degrees it occupies
/// inside `R/J`.
pub fn h1_series(ring: &Arc<Ring>, j: &[Poly], a: &Poly) -> Result<HilbertSeries> {
    let hj = hilbert_series(ring, j)?;
    let colon = ideal_quotient(j, a)?;
    let hc = hilbert_series(ring, &colon)?;
    Ok(hj.sub(&hc))
}

/// Hilbert–Samuel data of an m-primary ideal generated by forms of degree `n`.
#[derive(Clone, Debug, Serialize)]
pub struct SamuelData {
    pub e0: i64,
    pub e1: i64,
    pub ebar1: String,
    /// `lengths[m] = λ(R/I^(m+1))`.
    pub lengths: Vec<i64>,
    pub fitted_from: usize,
}

fn binom(n: i64, k: i64) -> BigRational {
    if k < 0 || n < k {
        return BigRational::zero();
    }
    let mut r = BigRational::from_integer(1.into());
    for i in 0..k {
        r = r * BigRational::from_integer((n - i).into()) / BigRational::from_integer((i + 1).into());
    }
    r
}

/// `ē_1 = (d-1)/2 (n^d - n^(d-1))`.
pub fn ebar1(d: u32, n: u32) -> BigRational {
    let nd = (n as i64).pow(d);
    let nd1 = (n as i64).pow(d - 1);
    BigRational::new(((d as i64 - 1) * (nd - nd1)).into(), 2.into())
}

/// Next power, kept as a basis of its single generating degree.
fn next_power(power: &[Poly], gens: &[Poly]) -> Vec<Poly> {
    let mut idx = MonomialIndex::new();
    let mut ech = Echelon::new();
    let mut out = Vec::new();
    for p in power {
        for g in gens {
            let prod = p * g;
            let row = idx.row(&prod);
            if ech.insert(&row) {
                out.push(prod);
            }
        }
    }
    out
}

/// Solve for the Hilbert–Samuel coefficients from `λ(R/I^(m+1))`, growing the
/// range of `m` until a degree-`d` polynomial fit through the last `d+1`
/// values also predicts the two values before them and has `e_0 = n^d`.
pub fn hilbert_samuel(ring: &Arc<Ring>, gens: &[Poly], max_m: usize) -> Result<SamuelData> {
    let d = ring.nvars() as i64;
    let n = gens
        .first()
        .and_then(|g| g.total_degree())
        .ok_or_else(|| Error::Input("empty ideal".into()))?;
    let mut lengths = Vec::new();
    let mut power = gens.to_vec();
    for m in 0..=max_m {
        if m > 0 {
            power = next_power(&power, gens);
        }
        lengths.push(hilbert_series(ring, &power)?.length());
        if lengths.len() >= d as usize + 3 {
            let e0_expected = (n as i64).pow(d as u32);
            if let Some((e0, e1)) = fit(&lengths, d).filter(|f| f.0 == e0_expected) {
                return Ok(SamuelData {
                    e0,
                    e1,
                    ebar1: ebar1(d as u32, n).to_string(),
                    fitted_from: lengths.len() - d as usize - 3,
                    lengths,
                });
            }
        }
    }
    Err(Error::Precondition(format!(
        "Hilbert–Samuel fit did not stabilize for m <= {max_m}"
    )))
}

/// Fit `λ(m) = Σ (-1)^i e_i C(m+d-i, d-i)` through the last `d+1` points and
/// confirm on the two points before them.
fn fit(lengths: &[i64], d: i64) -> Option<(i64, i64)> {
    let k = d as usize + 1;
    let last = lengths.len() - 1;
    let pts: Vec<usize> = (last + 1 - k..=last).collect();
    // Unknowns e_0..e_d; row for m: coefficient (-1)^i C(m+d-i, d-i).
    let mut a: Vec<Vec<BigRational>> = pts
        .iter()
        .map(|&m| {
            let mut row: Vec<BigRational> = (0..k as i64)
                .map(|i| {
                    let b = binom(m as i64 + d - i, d - i);
                    if i % 2 == 0 {
                        b
                    } else {
                        -b
                    }
                })
                .collect();
            row.push(BigRational::from_integer(lengths[m].into()));
            row
        })
        .collect();
    // Gauss–Jordan on the (k x k+1) system.
    for c in 0..k {
        let p = (c..k).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, p);
        let inv = BigRational::from_integer(1.into()) / a[c][c].clone();
        for x in a[c].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..k {
            if i != c && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for x in 0..=k {
                    let t = a[c][x].clone() * f.clone();
                    a[i][x] = a[i][x].clone() - t;
                }
            }
        }
    }
    let e: Vec<BigRational> = (0..k).map(|i| a[i][k].clone()).collect();
    for check in [last - k, last - k - 1] {
        let mut pred = BigRational::zero();
        for (i, ei) in e.iter().enumerate() {
            let b = binom(check as i64 + d - i as i64, d - i as i64);
            let term = ei.clone() * b;
            pred = if i % 2 == 0 { pred + term } else { pred - term };
        }
        if pred != BigRational::from_integer(lengths[check].into()) {
            return None;
        }
    }
    if !e[0].is_integer() || !e[1].is_integer() {
        return None;
    }
    Some((e[0].to_integer().to_i64()?, e[1].to_integer().to_i64()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::parse_list;
    use crate::scalar::Field;

    #[test]
    fn series_of_monomial_complete_intersection() {
        let r = Ring::polynomial(3, Field::Rational);
        let j = parse_list("x1^2, x2^2, x3^2", &r).unwrap();
        let h = hilbert_series(&r, &j).unwrap();
        assert_eq!(h.coeffs, vec![1, 3, 3, 1]);
        assert_eq!(h.to_string(), "1+3t+3t^2+t^3");
        let s = socle(&r, &j).unwrap();
        assert_eq!((s.degree, s.dimension), (3, 1));
    }

    #[test]
    fn not_artinian_names_a_variable() {
        let r = Ring::polynomial(2, Field::Rational);
        let i = parse_list("x1^2, x1*x2", &r).unwrap();
        assert_eq!(hilbert_series(&r, &i), Err(Error::NotArtinian { var: "x2".into() }));
    }

    #[test]
    fn socle_of_power_of_maximal_ideal() {
        let r = Ring::polynomial(3, Field::Rational);
        let m2 = parse_list("x1^2, x1*x2, x1*x3, x2^2, x2*x3, x3^2", &r).unwrap();
        let s = socle(&r, &m2).unwrap();
        assert_eq!((s.degree, s.dimension), (1, 3));
    }

    #[test]
    fn samuel_of_power_of_maximal_ideal() {
        // I = m^3 in two variables is integrally closed: e1 = ebar1 = 3.
        let r = Ring::polynomial(2, Field::Rational);
        let m3 = parse_list("x1^3, x1^2*x2, x1*x2^2, x2^3", &r).unwrap();
        let s = hilbert_samuel(&r, &m3, 8).unwrap();
        assert_eq!((s.e0, s.e1), (9, 3));
        assert_eq!(s.ebar1, "3");
    }
}
