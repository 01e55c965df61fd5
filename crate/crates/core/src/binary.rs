//! Binary almost complete intersections: the link `N = (L_1) : (x,y)^r`,
//! its Hilbert-Burch matrix and the square content matrix B.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gbasis::{ideal_colon_ideal, minimal_generators, same_ideal, GroebnerBasis};
use crate::matrix::Matrix;
use crate::polycore::{Poly, Ring};
use crate::rees::{symmetric_ideal, ReesIdeal, ReesSetup};
use crate::resolution::minimal_resolution;
use crate::scalar::Field;
use crate::syzmatrix::{colon_max_power, content_matrix, det_content, monomial_basis, power_of_elim, ContentMatrix, PowerOf};

#[derive(Clone, Debug)]
pub struct BinaryLinkData {
    pub r: u32,
    pub s: u32,
    /// Generator of `(L_1)` of bidegree `(r,1)`.
    pub f: Poly,
    /// Generator of `(L_1)` of bidegree `(s,1)`.
    pub g: Poly,
    /// Minimal generators `f, g, h_1..h_r` of `N`.
    pub n_ideal: Vec<Poly>,
    /// Hilbert-Burch matrix, `(r+2) x (r+1)`, rows indexed like `n_ideal`.
    pub zeta: Matrix,
    /// Rows of `zeta` for `f` and `g`.
    pub sigma: Matrix,
    /// Rows of `zeta` for the h-forms.
    pub tau: Matrix,
    pub hforms: Vec<Poly>,
}

fn max_ideal_power(s: &Arc<Ring>, e: u32) -> Vec<Poly> {
    monomial_basis(s, e)
}

fn rows_of(m: &Matrix, idx: std::ops::Range<usize>) -> Matrix {
    Matrix::from_rows(m.ring(), idx.map(|i| m.row(i)).collect())
}

fn check_row_bidegree(m: &Matrix, i: usize, want: (u32, u32)) -> bool {
    m.row(i).iter().all(|p| p.is_zero() || p.bidegree() == Ok(want))
}

/// Computes `N` and its resolution and identifies the blocks of `zeta`.
pub fn binary_link(setup: &ReesSetup) -> Result<BinaryLinkData> {
    if setup.d != 2 {
        return Err(Error::Precondition("binary_link needs two variables".into()));
    }
    let s_ring = &setup.rees_ring;
    let degs = &setup.phi.degrees;
    if degs.len() != 2 {
        return Err(Error::Precondition("phi must have two columns".into()));
    }
    let l1 = symmetric_ideal(setup)?;
    let (fi, gi) = if degs[0] <= degs[1] { (0, 1) } else { (1, 0) };
    let (r, s) = (degs[fi], degs[gi]);
    let (f, g) = (l1[fi].clone(), l1[gi].clone());
    let colon = ideal_colon_ideal(&[f.clone(), g.clone()], &max_ideal_power(s_ring, r))?;
    let mins = minimal_generators(&colon)?;
    let mut hforms: Vec<Poly> = mins.iter().filter(|p| p.bidegree().map(|b| b.1) == Ok(2)).map(|p| p.primitive()).collect();
    hforms.sort_by(|a, b| a.cmp_terms(b));
    if mins.len() != hforms.len() + 2 || hforms.len() != r as usize {
        return Err(Error::Theorem(format!("N has {} minimal generators, expected f, g and {r} forms of T-degree 2", mins.len())));
    }
    for h in &hforms {
        if h.bidegree()? != (s - 1, 2) {
            return Err(Error::Theorem("an h-form is not of bidegree (s-1, 2)".into()));
        }
    }
    let mut n_ideal = vec![f.clone(), g.clone()];
    n_ideal.extend(hforms.iter().cloned());
    if !same_ideal(&n_ideal, &colon)? {
        return Err(Error::Inconsistency("f, g and the h-forms do not generate N".into()));
    }
    let res = minimal_resolution(s_ring, &n_ideal)?;
    if res.length() != 2 {
        return Err(Error::Theorem(format!("S/N has projective dimension {}, not 2", res.length())));
    }
    // The resolution may have re-chosen generators; rebuild zeta against n_ideal.
    let zeta = hilbert_burch(&n_ideal)?;
    if zeta.cols() != r as usize + 1 {
        return Err(Error::Theorem(format!("zeta has {} columns, expected {}", zeta.cols(), r + 1)));
    }
    let k = n_ideal.len();
    let blocks_ok = check_row_bidegree(&zeta, 0, (s - r, 1))
        && check_row_bidegree(&zeta, 1, (0, 1))
        && (2..k).all(|i| check_row_bidegree(&zeta, i, (1, 0)));
    if !blocks_ok {
        return Err(Error::Theorem("zeta does not split into sigma and tau blocks by bidegree".into()));
    }
    let minors = zeta.signed_maximal_minors()?;
    if !same_ideal(&minors, &n_ideal)? {
        return Err(Error::Inconsistency("maximal minors of zeta do not generate N".into()));
    }
    let sigma = rows_of(&zeta, 0..2);
    let tau = rows_of(&zeta, 2..k);
    Ok(BinaryLinkData { r, s, f, g, n_ideal, zeta, sigma, tau, hforms })
}

/// Minimal syzygies of `gens`, as the columns of a matrix with one row per
/// generator.
fn hilbert_burch(gens: &[Poly]) -> Result<Matrix> {
    let ring = gens[0].ring().clone();
    let row = Matrix::from_rows(&ring, vec![gens.to_vec()]);
    let syz = crate::gbasis::syzygies_of_row(gens)?;
    // Drop syzygies generated by the others, lowest degree first.
    let mut cols: Vec<Vec<Poly>> = Vec::new();
    let mut sorted = syz;
    let deg = |c: &Vec<Poly>| -> u32 {
        c.iter()
            .zip(gens)
            .filter(|(e, _)| !e.is_zero())
            .map(|(e, g)| e.total_degree().unwrap() + g.total_degree().unwrap())
            .next()
            .unwrap_or(0)
    };
    sorted.sort_by_key(deg);
    let shifts: Vec<u64> = gens.iter().map(|g| g.total_degree().unwrap() as u64).collect();
    for c in sorted {
        let v = Poly::from_vector(&ring, &c, 0);
        if !cols.is_empty() {
            let elems: Vec<Poly> = cols.iter().map(|c| Poly::from_vector(&ring, c, 0)).collect();
            let lifter = crate::gbasis::Lifter::new(&elems, gens.len() as u32, &shifts)?;
            if lifter.lift(&v)?.is_some() {
                continue;
            }
        }
        cols.push(c);
    }
    let zeta = Matrix::from_columns(&ring, gens.len(), &cols);
    if !row.mul(&zeta)?.is_zero() {
        return Err(Error::Inconsistency("zeta columns are not syzygies".into()));
    }
    Ok(zeta)
}

/// `[x^(s-r-1) f, ..., y^(s-r-1) f, h_1, ..., h_r] = [x^(s-1), ..., y^(s-1)] B`.
pub fn binary_b(data: &BinaryLinkData) -> Result<ContentMatrix> {
    binary_b_with(data, &data.hforms)
}

/// Same, with a caller-supplied choice of h-forms.
pub fn binary_b_with(data: &BinaryLinkData, hforms: &[Poly]) -> Result<ContentMatrix> {
    let s_ring = data.f.ring().clone();
    let mut forms = Vec::new();
    if data.s > data.r {
        for m in monomial_basis(&s_ring, data.s - data.r - 1) {
            forms.push(&m * &data.f);
        }
    }
    forms.extend(hforms.iter().cloned());
    content_matrix(&forms, data.s - 1, true)
}

#[derive(Clone, Debug, Serialize)]
pub struct BinaryTheorems {
    pub r: u32,
    pub s: u32,
    pub det: Poly,
    pub det_degree: u32,
    pub power: PowerOf,
    pub edeg: u32,
    /// `L = (L_1) : (x,y)^(n-1)`.
    pub saturation: bool,
}

impl BinaryTheorems {
    pub fn holds(&self, n: u32) -> bool {
        !self.det.is_zero()
            && self.det_degree == n
            && self.power.pure
            && self.power.exponent * self.edeg == n
            && self.saturation
    }
}

pub fn binary_theorems(setup: &ReesSetup, rees: &ReesIdeal, data: &BinaryLinkData) -> Result<BinaryTheorems> {
    let b = binary_b(data)?;
    let det = det_content(&b)?;
    if det.is_zero() {
        return Err(Error::Theorem("det B vanishes".into()));
    }
    let (x, t) = det.bidegree()?;
    if x != 0 || t != setup.n {
        return Err(Error::Theorem(format!("det B has bidegree ({x},{t}), expected (0,{})", setup.n)));
    }
    let power = power_of_elim(&det, &setup.fiber.equation)?;
    if !power.pure {
        return Err(Error::Theorem("det B is not a power of the elimination equation".into()));
    }
    let colon = colon_max_power(&rees.l1, setup.n - 1)?;
    let saturation = GroebnerBasis::new(&rees.ring, &colon)?.same_ideal(&rees.gb);
    if !saturation {
        return Err(Error::Theorem("L differs from (L1) : (x,y)^(n-1)".into()));
    }
    let out = BinaryTheorems { r: data.r, s: data.s, det, det_degree: t, power, edeg: setup.fiber.edeg, saturation };
    if !out.holds(setup.n) {
        return Err(Error::Theorem("edeg times the exponent differs from n".into()));
    }
    Ok(out)
}

/// A seeded binary fixture: the signed maximal minors of a 3x2 matrix with
/// column degrees `r` and `n - r` and small random integer coefficients.
/// Draws again until the minors form a minimally presented ideal of finite
/// colength.
pub fn random_binary(seed: u64, n: u32, r: u32) -> Result<(Arc<Ring>, Vec<Poly>)> {
    if r == 0 || r > n - r {
        return Err(Error::Input("need 1 <= r <= n - r".into()));
    }
    let ring = Ring::new(vec!["x".into(), "y".into()], Field::Rational)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let basis = |e: u32| monomial_basis(&ring, e);
    for _ in 0..100 {
        let mut rows = Vec::new();
        for _ in 0..3 {
            let mut row = Vec::new();
            for e in [r, n - r] {
                let mut p = Poly::zero(&ring);
                for m in basis(e) {
                    let c: i64 = rng.gen_range(-3..=3);
                    p = &p + &m.scale(&ring.field().from_i64(c));
                }
                row.push(p);
            }
            rows.push(row);
        }
        let phi = Matrix::from_rows(&ring, rows);
        let gens = phi.signed_maximal_minors()?;
        if gens.iter().any(|g| g.is_zero()) {
            continue;
        }
        if ReesSetup::new(&ring, &gens, None).is_ok() {
            return Ok((ring, gens));
        }
    }
    Err(Error::Input(format!("no admissible binary ideal for seed {seed}")))
}

/// `a_i(x,y) = b_i(x^2, y^2)` for a random binary triple `b` of degree `m`:
/// the parametrization factors through a double cover.
pub fn double_cover_binary(seed: u64, m: u32, r: u32) -> Result<(Arc<Ring>, Vec<Poly>)> {
    let (ring, b) = random_binary(seed, m, r)?;
    let squares = vec![Poly::var(&ring, 0).pow(2)?, Poly::var(&ring, 1).pow(2)?];
    let gens = b.iter().map(|p| p.substitute(&squares)).collect::<Result<Vec<_>>>()?;
    Ok((ring, gens))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::fixture;
    use crate::polycore::parse_poly;
    use crate::rees::rees_ideal;

    #[test]
    fn printed_binary_example() {
        let spec = fixture("binary").unwrap();
        let l = spec.load().unwrap();
        let setup = ReesSetup::new(&l.ring, &l.gens, spec.reduction0().as_deref()).unwrap();
        let rees = rees_ideal(&setup).unwrap();
        let data = binary_link(&setup).unwrap();
        assert_eq!((data.r, data.s), (2, 4));
        assert_eq!(data.zeta.rows(), 4);
        assert_eq!(data.zeta.cols(), 3);
        let printed: Vec<Poly> = spec
            .expected
            .hforms
            .unwrap()
            .iter()
            .map(|h| parse_poly(h, &setup.rees_ring).unwrap())
            .collect();
        let mut with_printed = vec![data.f.clone(), data.g.clone()];
        with_printed.extend(printed.iter().cloned());
        assert!(same_ideal(&with_printed, &data.n_ideal).unwrap());
        let th = binary_theorems(&setup, &rees, &data).unwrap();
        assert_eq!(th.det_degree, 6);
        assert_eq!(th.power.exponent, 1);
    }

    #[test]
    fn smallest_binary_case() {
        // n = 2, r = s = 1: B is 1x1 and its entry is the single h.
        let (ring, gens) = random_binary(1, 2, 1).unwrap();
        let setup = ReesSetup::new(&ring, &gens, None).unwrap();
        let data = binary_link(&setup).unwrap();
        let b = binary_b(&data).unwrap();
        assert_eq!((b.b.rows(), b.b.cols()), (1, 1));
        assert_eq!(b.b.get(0, 0), &data.hforms[0]);
    }
}
