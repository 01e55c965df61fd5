use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gbasis::{intersect, module_intersect, same_ideal, GroebnerBasis, Lifter};
use crate::hilbert::{h1_series, hilbert_series, socle, HilbertSeries};
use crate::linalg::{Coordinates, Echelon, MonomialIndex};
use crate::matrix::{exact_div, Matrix};
use crate::polycore::{Poly, Ring};
use crate::rees::{monomials_in, ReesIdeal, ReesSetup};
use crate::resolution::content_ideal;

fn binomial(n: i64, k: i64) -> i64 {
    if k < 0 || n < k {
        return 0;
    }
    let mut r: i64 = 1;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Forms of `𝔪^e`: monomials in the x-variables of `ring`, descending lex.
pub fn monomial_basis(ring: &Arc<Ring>, e: u32) -> Vec<Poly> {
    monomials_in(&ring.x_vars(), e).into_iter().map(|m| Poly::monomial(ring, m)).collect()
}

/// `𝔪^e` in `ring` as a list of monomial generators.
fn power_of_max(ring: &Arc<Ring>, e: u32) -> Vec<Poly> {
    monomial_basis(ring, e)
}

#[derive(Clone, Debug, Serialize)]
pub struct BalanceData {
    /// `s` with `I_1(phi) = 𝔪^s`, if there is one.
    pub s: Option<u32>,
    /// Largest `s` with `I_1(phi) ⊆ 𝔪^s`.
    pub max_s: u32,
    /// Coefficient degree of the fresh quadratic equations, `(d-1)(n-1) - s`.
    pub r_i: Option<i64>,
    pub content_series: HilbertSeries,
    /// Dimension of the socle of `R/I_1(phi)`.
    pub content_type: usize,
    /// `C(d+s-2, d-1)`, the socle dimension of `R/𝔪^s`.
    pub predicted_delta: Option<usize>,
}

pub fn balance(setup: &ReesSetup) -> Result<BalanceData> {
    let content = content_ideal(&setup.phi)?;
    let ring = &setup.ring;
    let max_s = content.iter().filter_map(|p| p.min_degree()).min().unwrap_or(0);
    let s = if same_ideal(&content, &power_of_max(ring, max_s))? { Some(max_s) } else { None };
    let d = setup.d as i64;
    let n = setup.n as i64;
    let content_series = hilbert_series(ring, &content)?;
    let content_type = socle(ring, &content)?.dimension;
    Ok(BalanceData {
        s,
        max_s,
        r_i: s.map(|s| (d - 1) * (n - 1) - s as i64),
        content_series,
        content_type,
        predicted_delta: s.map(|s| binomial(d + s as i64 - 2, d - 1) as usize),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SocleDegreeCheck {
    pub h1_top: i64,
    pub expected_top: i64,
    /// `𝔪^(d(n-1)-s+1) = I 𝔪^((d-1)(n-1)-s)`, when the exponent is nonnegative.
    pub power_identity: Option<bool>,
}

impl SocleDegreeCheck {
    pub fn holds(&self) -> bool {
        self.h1_top == self.expected_top && self.power_identity != Some(false)
    }
}

fn product(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x * y);
        }
    }
    out
}

pub fn socle_degree_theorem(setup: &ReesSetup, s: u32) -> Result<SocleDegreeCheck> {
    let (d, n) = (setup.d as i64, setup.n as i64);
    let h1 = h1_series(&setup.ring, &setup.j(), setup.a())?;
    let h1_top = h1.top_degree().unwrap_or(-1);
    let k = (d - 1) * (n - 1) - s as i64;
    let power_identity = if k >= 0 {
        let lhs = power_of_max(&setup.ring, (d * (n - 1) - s as i64 + 1) as u32);
        let rhs = product(&setup.gens, &power_of_max(&setup.ring, k as u32));
        Some(same_ideal(&lhs, &rhs)?)
    } else {
        None
    };
    Ok(SocleDegreeCheck { h1_top, expected_top: d * (n - 1), power_identity })
}

/// Dimension of the kernel of `R_s^(d+1) -> R_(s+n)` when the map is onto.
pub fn kernel_count_formula(d: i64, n: i64, s: i64) -> i64 {
    (d + 1) * binomial(s + d - 1, d - 1) - binomial(s + n + d - 1, d - 1)
}

/// `(d+1) dim ker(psi_s) >= dim R_s`, necessary for `I_1(phi) = 𝔪^s`.
pub fn balanced_inequality(d: i64, s: i64, kernel: i64) -> bool {
    (d + 1) * kernel >= binomial(s + d - 1, d - 1)
}

#[derive(Clone, Debug, Serialize)]
pub struct CountCheck {
    pub s: u32,
    /// `(d+1) dim R_s - dim I_(n+s)`.
    pub kernel: i64,
    /// The closed form, present when `I_(n+s) = R_(n+s)`.
    pub closed_form: Option<i64>,
    /// Syzygies of degree `s` among the columns of phi.
    pub actual: usize,
    pub inequality: bool,
    /// Extra claim for the case at hand, with its outcome.
    pub special: Option<(String, bool)>,
}

impl CountCheck {
    pub fn holds(&self) -> bool {
        self.kernel == self.actual as i64
            && self.closed_form.is_none_or(|c| c == self.kernel)
            && self.inequality
            && self.special.as_ref().is_none_or(|s| s.1)
    }
}

/// Degree-`s` syzygies against `dim ker(psi_s)`. Only valid when `phi` has
/// no columns of degree below `s`, which holds for `I_1(phi) ⊆ 𝔪^s`.
pub fn count_checks(setup: &ReesSetup, s: u32) -> Result<CountCheck> {
    let (d, n) = (setup.d as i64, setup.n as i64);
    let hs = hilbert_series(&setup.ring, &setup.gens)?;
    let deg = n + s as i64;
    let dim_r = binomial(deg + d - 1, d - 1);
    let dim_i = dim_r - hs.at(deg);
    let kernel = (d + 1) * binomial(s as i64 + d - 1, d - 1) - dim_i;
    let closed_form = (hs.at(deg) == 0).then(|| kernel_count_formula(d, n, s as i64));
    let actual = setup.phi.count_of_degree(s);
    let special = if d == 3 && s as i64 == n - 1 {
        Some((format!("{n} syzygies of degree {} and n <= 7", n - 1), actual as i64 == n && n <= 7))
    } else if d == 4 && s == 2 && n == 2 {
        Some(("15 syzygies of degree 2".to_string(), actual == 15))
    } else {
        None
    };
    Ok(CountCheck { s, kernel, closed_form, actual, inequality: balanced_inequality(d, s as i64, kernel), special })
}

/// Keeps the forms of `candidates` that are independent modulo
/// `S_1 * lower + 𝔪 * (forms of the same T-degree)`, working one bidegree at a
/// time in increasing x-degree. All inputs must be bihomogeneous.
pub fn fresh_modulo(candidates: &[Poly], lower: &[Poly], tdeg: u32) -> Result<Vec<Poly>> {
    let mut cands: Vec<(u32, Poly)> = Vec::new();
    for c in candidates {
        if c.is_zero() {
            continue;
        }
        let (a, b) = c.bidegree()?;
        if b != tdeg {
            return Err(Error::Input("candidate of the wrong T-degree".into()));
        }
        cands.push((a, c.clone()));
    }
    cands.sort_by(|x, y| x.0.cmp(&y.0).then_with(|| y.1.cmp_terms(&x.1)));
    let ring = match cands.first() {
        Some(c) => c.1.ring().clone(),
        None => return Ok(Vec::new()),
    };
    let xs = ring.x_vars();
    let ts = ring.t_vars();
    let mut lower_bi = Vec::new();
    for l in lower {
        if !l.is_zero() {
            lower_bi.push((l.bidegree()?, l));
        }
    }
    let mut chosen = Vec::new();
    let mut i = 0;
    while i < cands.len() {
        let a = cands[i].0;
        let mut idx = MonomialIndex::new();
        let mut ech = Echelon::new();
        for ((la, lb), l) in &lower_bi {
            if *la > a || *lb > tdeg {
                continue;
            }
            for mx in monomials_in(&xs, a - la) {
                for mt in monomials_in(&ts, tdeg - lb) {
                    let row = idx.row(&l.mul_monomial(&mx.mul(&mt)));
                    ech.insert(&row);
                }
            }
        }
        for (ca, c) in &cands[..i] {
            if *ca < a {
                for mx in monomials_in(&xs, a - ca) {
                    let row = idx.row(&c.mul_monomial(&mx));
                    ech.insert(&row);
                }
            }
        }
        while i < cands.len() && cands[i].0 == a {
            let row = idx.row(&cands[i].1);
            if ech.insert(&row) {
                chosen.push(cands[i].1.clone());
            }
            i += 1;
        }
    }
    Ok(chosen)
}

/// Fresh quadratic equations obtained from syzygies with coefficients in `I`:
/// each `alpha_i = sum c_ij a_j` gives `sum c_ij T_i T_j`. The number of fresh
/// forms must equal the socle dimension of `R/I_1(phi)`.
pub fn delta_generators(setup: &ReesSetup, l1: &[Poly]) -> Result<Vec<Poly>> {
    let ring = &setup.ring;
    let s = &setup.rees_ring;
    let m = setup.gens.len();
    let z1: Vec<Vec<Poly>> = setup.phi.matrix.columns();
    let mut ir = Vec::with_capacity(m * m);
    for a in &setup.gens {
        for k in 0..m {
            let mut v = vec![Poly::zero(ring); m];
            v[k] = a.clone();
            ir.push(v);
        }
    }
    let inter = module_intersect(&z1, &ir, m)?;
    let lifter = Lifter::new(&setup.gens, 1, &[])?;
    let tv = s.t_vars();
    let mut candidates = Vec::new();
    for z in &inter {
        let mut form = Poly::zero(s);
        for (i, alpha) in z.iter().enumerate() {
            if alpha.is_zero() {
                continue;
            }
            let c = lifter
                .lift(alpha)?
                .ok_or_else(|| Error::Inconsistency("syzygy coefficient outside I".into()))?;
            for (j, cij) in c.iter().enumerate() {
                if cij.is_zero() {
                    continue;
                }
                let tt = &Poly::var(s, tv[i]) * &Poly::var(s, tv[j]);
                form = &form + &(&cij.to_ring(s)? * &tt);
            }
        }
        if !form.is_zero() {
            candidates.push(form);
        }
    }
    let fresh = fresh_modulo(&candidates, l1, 2)?;
    let images: Vec<Poly> = (0..s.nvars())
        .map(|i| if i < setup.d { Poly::var(ring, i) } else { setup.gens[i - setup.d].clone() })
        .collect();
    for h in &fresh {
        if !h.substitute(&images)?.is_zero() {
            return Err(Error::Inconsistency("an extracted quadric does not vanish on I".into()));
        }
    }
    let content = content_ideal(&setup.phi)?;
    let expected = socle(ring, &content)?.dimension;
    if fresh.len() != expected {
        return Err(Error::Theorem(format!(
            "{} fresh quadratic equations, but the socle of R/I_1(phi) has dimension {expected}",
            fresh.len()
        )));
    }
    let mut out: Vec<Poly> = fresh.iter().map(|p| p.primitive()).collect();
    out.sort_by(|a, b| {
        let (ax, bx) = (a.bidegree().map(|x| x.0).unwrap_or(0), b.bidegree().map(|x| x.0).unwrap_or(0));
        ax.cmp(&bx).then_with(|| b.cmp_terms(a))
    });
    Ok(out)
}

/// Result of lifting a form of `L_(k-1) ∩ I S_(k-1)` to `L_k`.
#[derive(Clone, Debug)]
pub struct Upgrade {
    pub form: Poly,
    /// The lift already lies in `S_(k-1) L_1`.
    pub in_s_l1: bool,
}

/// Write each R-coefficient of `h` as `sum c_j a_j` and return
/// `H = sum_j T_j c_j(T)`, so that substituting `a_j` for the new `T_j`
/// recovers `h`.
pub fn upgrade(setup: &ReesSetup, l1_gb: &GroebnerBasis, h: &Poly) -> Result<Upgrade> {
    let s = &setup.rees_ring;
    let h = h.to_ring(s)?;
    let ring = &setup.ring;
    let lifter = Lifter::new(&setup.gens, 1, &[])?;
    let tv = s.t_vars();
    let tmask = s.t_mask();
    let mut form = Poly::zero(s);
    for (mu, coeff) in h.coefficients(tmask) {
        let c = coeff.to_ring(ring)?;
        let parts = lifter
            .lift(&c)?
            .ok_or_else(|| Error::Precondition("the form has a coefficient outside I".into()))?;
        for (j, cj) in parts.iter().enumerate() {
            if cj.is_zero() {
                continue;
            }
            let t = Poly::var(s, tv[j]).mul_monomial(&mu);
            form = &form + &(&cj.to_ring(s)? * &t);
        }
    }
    let images: Vec<Poly> = (0..s.nvars())
        .map(|i| if i < setup.d { Poly::var(ring, i) } else { setup.gens[i - setup.d].clone() })
        .collect();
    if !h.substitute(&images)?.is_zero() {
        return Err(Error::Precondition("the form is not in L".into()));
    }
    if !form.substitute(&images)?.is_zero() {
        return Err(Error::Inconsistency("the lifted form is not in L".into()));
    }
    Ok(Upgrade { in_s_l1: form.is_zero() || l1_gb.contains(&form), form })
}

/// `[forms] = [basis] * B`, with `B` over `k[T]`.
#[derive(Clone, Debug)]
pub struct ContentMatrix {
    pub basis: Vec<Poly>,
    pub forms: Vec<Poly>,
    pub b: Matrix,
    pub e: u32,
}

impl ContentMatrix {
    pub fn is_square(&self) -> bool {
        self.b.rows() == self.b.cols()
    }

    /// Expands `[basis] * B - [forms]`.
    pub fn verify(&self) -> Result<bool> {
        let row = Matrix::from_rows(self.b.ring(), vec![self.basis.clone()]);
        let prod = row.mul(&self.b)?;
        Ok(prod.row(0) == self.forms)
    }
}

/// Content matrix of bihomogeneous `forms` with respect to `basis`, a
/// linearly independent family of x-forms of degree `e`.
pub fn content_matrix_over(forms: &[Poly], basis: &[Poly]) -> Result<ContentMatrix> {
    let s = basis.first().ok_or_else(|| Error::Input("empty basis".into()))?.ring().clone();
    let e = basis[0].total_degree().unwrap_or(0);
    let coords = Coordinates::new(basis).ok_or_else(|| Error::Input("basis is linearly dependent".into()))?;
    let tmask = s.t_mask();
    let mut b = Matrix::zero(&s, basis.len(), forms.len());
    for (k, f) in forms.iter().enumerate() {
        let f = f.to_ring(&s)?;
        for (mu, coeff) in f.coefficients(tmask) {
            let lambda = coords.of(&coeff).ok_or_else(|| {
                Error::Precondition(format!("form {} has a coefficient outside the span of degree {e}", k + 1))
            })?;
            let tmon = Poly::monomial(&s, mu);
            for (i, l) in lambda.iter().enumerate() {
                if !l.is_zero() {
                    let v = b.get(i, k) + &tmon.scale(l);
                    b.set(i, k, v);
                }
            }
        }
    }
    let cm = ContentMatrix { basis: basis.to_vec(), forms: forms.to_vec(), b, e };
    if !cm.verify()? {
        return Err(Error::Inconsistency("content matrix identity fails".into()));
    }
    Ok(cm)
}

/// Content matrix over the monomials of `𝔪^e` in descending lex order.
pub fn content_matrix(forms: &[Poly], e: u32, square: bool) -> Result<ContentMatrix> {
    let s = forms.first().ok_or_else(|| Error::Input("no forms".into()))?.ring().clone();
    let basis = monomial_basis(&s, e);
    if square && basis.len() != forms.len() {
        return Err(Error::Precondition(format!(
            "{} forms against {} monomials of degree {e}",
            forms.len(),
            basis.len()
        )));
    }
    content_matrix_over(forms, &basis)
}

/// `det B`, made primitive with positive leading coefficient.
pub fn det_content(cm: &ContentMatrix) -> Result<Poly> {
    if !cm.is_square() {
        return Err(Error::Input("content matrix is not square".into()));
    }
    Ok(cm.b.det()?.primitive())
}

#[derive(Clone, Debug, Serialize)]
pub struct PowerOf {
    pub exponent: u32,
    pub cofactor: Poly,
    /// The cofactor is a nonzero constant.
    pub pure: bool,
}

/// Largest `m` with `f^m | det`, by repeated exact division.
pub fn power_of_elim(det: &Poly, f: &Poly) -> Result<PowerOf> {
    if f.is_zero() {
        return Err(Error::Input("elimination equation is zero".into()));
    }
    if det.is_zero() {
        return Err(Error::Input("determinant is zero".into()));
    }
    let mut m = 0;
    let mut cur = det.clone();
    if !f.is_constant() {
        while let Ok(q) = exact_div(&cur, f) {
            cur = q;
            m += 1;
        }
    }
    let pure = cur.is_constant() && !cur.is_zero();
    Ok(PowerOf { exponent: m, cofactor: cur, pure })
}

fn sorted_by_degree(mut v: Vec<Poly>) -> Vec<Poly> {
    v.sort_by(|a, b| {
        let (ax, bx) = (a.bidegree().map(|x| x.0).unwrap_or(0), b.bidegree().map(|x| x.0).unwrap_or(0));
        ax.cmp(&bx).then_with(|| b.cmp_terms(a))
    });
    v
}

/// The `f`'s of a balanced case: generators of `(L_1)` whose coefficients
/// have degree `e`.
pub fn linear_forms_of_degree(l1: &[Poly], e: u32) -> Vec<Poly> {
    sorted_by_degree(l1.iter().filter(|g| g.bidegree().map(|b| b.0) == Ok(e)).map(|p| p.primitive()).collect())
}

/// Ternary `(n-1)`-balanced case: `[f_1..f_n, h_1..h_C(n,2)] = 𝔪^(n-1) B`.
pub fn ternary_balanced_matrix(setup: &ReesSetup, l1: &[Poly], deltas: &[Poly]) -> Result<ContentMatrix> {
    let e = setup.n - 1;
    let mut forms = linear_forms_of_degree(l1, e);
    forms.extend(deltas.iter().filter(|h| h.bidegree().map(|b| b.0) == Ok(e)).cloned());
    content_matrix(&forms, e, true)
}

/// `[q_1..q_4] = [x_1..x_4] B` for quaternary quadrics, from the fresh
/// quadratic equations with linear coefficients.
pub fn quaternary_quadrics_matrix(deltas: &[Poly]) -> Result<ContentMatrix> {
    let forms: Vec<Poly> = deltas.iter().filter(|h| h.bidegree().map(|b| b.0) == Ok(1)).cloned().collect();
    content_matrix(&forms, 1, true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadricsCase {
    /// `I_1(phi) = 𝔪`
    Generic,
    /// `I_1(phi) = (v_1, v_2, v_3^2)`
    Degenerate,
}

#[derive(Clone, Debug)]
pub struct QuadricsClassification {
    pub case: QuadricsCase,
    pub matrix: ContentMatrix,
    pub det: Poly,
    pub power: PowerOf,
    pub birational: bool,
}

/// Ternary quadrics: `[f_1, f_2, h] = [x_1, x_2, x_3] B` where in the
/// degenerate case `h = v_3 p` for the fresh equation `p` with constant
/// coefficients.
pub fn ternary_quadrics_classify(setup: &ReesSetup, l1: &[Poly], deltas: &[Poly]) -> Result<QuadricsClassification> {
    if setup.d != 3 || setup.n != 2 {
        return Err(Error::Precondition("ternary quadrics need d = 3 and n = 2".into()));
    }
    let s = &setup.rees_ring;
    let ring = &setup.ring;
    let content = content_ideal(&setup.phi)?;
    let mm = power_of_max(ring, 1);
    let fs = linear_forms_of_degree(l1, 1);
    if fs.len() != 2 {
        return Err(Error::Precondition(format!("expected 2 linear syzygies, found {}", fs.len())));
    }
    let (case, h) = if same_ideal(&content, &mm)? {
        let hs: Vec<&Poly> = deltas.iter().filter(|h| h.bidegree().map(|b| b.0) == Ok(1)).collect();
        if hs.len() != 1 {
            return Err(Error::Precondition("no fresh quadric with linear coefficients".into()));
        }
        (QuadricsCase::Generic, hs[0].clone())
    } else {
        let linear: Vec<Poly> = content.iter().filter(|p| p.total_degree() == Some(1)).cloned().collect();
        let ps: Vec<&Poly> = deltas.iter().filter(|h| h.bidegree().map(|b| b.0) == Ok(0)).collect();
        if linear.len() != 2 || ps.len() != 1 {
            return Err(Error::Precondition("ternary quadrics fit neither case".into()));
        }
        // v_3: the first variable outside the span of v_1, v_2.
        let v3 = (0..3)
            .map(|i| Poly::var(ring, i))
            .find(|x| {
                let mut fam = linear.clone();
                fam.push(x.clone());
                Coordinates::new(&fam).is_some()
            })
            .unwrap();
        let mut want = linear.clone();
        want.push(&v3 * &v3);
        if !same_ideal(&content, &want)? {
            return Err(Error::Precondition("I_1(phi) is not (v1, v2, v3^2)".into()));
        }
        (QuadricsCase::Degenerate, &v3.to_ring(s)? * ps[0])
    };
    let forms = vec![fs[0].clone(), fs[1].clone(), h];
    let matrix = content_matrix(&forms, 1, true)?;
    let det = det_content(&matrix)?;
    let power = power_of_elim(&det, &setup.fiber.equation)?;
    Ok(QuadricsClassification { case, matrix, det, power, birational: case == QuadricsCase::Generic })
}

/// `I : 𝔪^k` for the maximal ideal of the x-variables, by intersecting
/// colons by the monomials of degree `k`.
pub fn colon_max_power(ideal: &[Poly], k: u32) -> Result<Vec<Poly>> {
    let ring = ideal.first().ok_or_else(|| Error::Input("empty ideal".into()))?.ring().clone();
    let xs = ring.x_vars();
    let mut acc: Option<Vec<Poly>> = None;
    for m in monomials_in(&xs, k) {
        let mut cur = GroebnerBasis::new(&ring, ideal)?.polys().to_vec();
        for &v in &xs {
            for _ in 0..m.exp(v) {
                cur = crate::gbasis::colon_var(&cur, v, false)?;
            }
        }
        acc = Some(match acc {
            None => cur,
            Some(prev) => intersect(&prev, &cur)?,
        });
    }
    Ok(acc.unwrap_or_default())
}

#[derive(Clone, Debug, Serialize)]
pub struct BeingAPower {
    /// `L = (L_1) : 𝔪^(2n-2)`.
    pub secondary: bool,
    /// `(L_1) : 𝔪^(n-1) = (f, h)`.
    pub hypothesis: bool,
    pub power: Option<PowerOf>,
}

pub fn being_a_power_check(setup: &ReesSetup, rees: &ReesIdeal, r_min: u32, cm: &ContentMatrix) -> Result<BeingAPower> {
    let n = setup.n;
    let secondary = r_min <= 2 * n - 2;
    let colon = colon_max_power(&rees.l1, n - 1)?;
    let hypothesis = same_ideal(&colon, &cm.forms)?;
    let power = if hypothesis {
        let det = det_content(cm)?;
        let p = power_of_elim(&det, &setup.fiber.equation)?;
        if !p.pure {
            return Err(Error::Theorem("det B is not a power of the elimination equation".into()));
        }
        Some(p)
    } else {
        None
    };
    Ok(BeingAPower { secondary, hypothesis, power })
}

/// Whether `forms` (all of T-degree `k`) are fresh and, together with the
/// generators of L of lower T-degree, account for every generator of
/// T-degree `k`.
pub fn fresh_generating_set(rees: &ReesIdeal, forms: &[Poly], k: u32) -> Result<bool> {
    let lower: Vec<Poly> = rees.generators.iter().filter(|g| g.bidegree().map(|b| b.1 < k) == Ok(true)).cloned().collect();
    if !GroebnerBasis::new(&rees.ring, &rees.generators)?.contains_all(forms) {
        return Ok(false);
    }
    for i in 0..forms.len() {
        let mut others = lower.clone();
        others.extend(forms.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, f)| f.clone()));
        if GroebnerBasis::new(&rees.ring, &others)?.contains(&forms[i]) {
            return Ok(false);
        }
    }
    let mut all = lower;
    all.extend(forms.iter().cloned());
    let gb = GroebnerBasis::new(&rees.ring, &all)?;
    let target: Vec<Poly> = rees.generators.iter().filter(|g| g.bidegree().map(|b| b.1) == Ok(k)).cloned().collect();
    Ok(gb.contains_all(&target) && target.len() == forms.len())
}

/// One step of the scripted two-step derivation: a syzygy `f = u F_u + v F_v`
/// and a quadric `h = u H_u + v H_v` with the same content `(u, v)`.
#[derive(Clone, Debug)]
pub struct TwoStepInput {
    pub u: Poly,
    pub v: Poly,
    pub f: (Poly, Poly),
    pub h: (Poly, Poly),
}

#[derive(Clone, Debug)]
pub struct TwoStepResult {
    pub f: Vec<Poly>,
    pub h: Vec<Poly>,
    pub step_dets: Vec<Poly>,
    pub steps_fresh: bool,
    pub matrix: ContentMatrix,
    pub det: Poly,
    pub power: PowerOf,
}

/// Parses the scripted steps of a fixture in the Rees ring.
pub fn two_step_inputs(rees: &ReesIdeal, steps: &[crate::fixtures::TwoStep]) -> Result<Vec<TwoStepInput>> {
    let s = &rees.ring;
    let p = |t: &str| crate::polycore::parse_poly(t, s);
    steps
        .iter()
        .map(|st| {
            Ok(TwoStepInput { u: p(&st.u)?, v: p(&st.v)?, f: (p(&st.f_u)?, p(&st.f_v)?), h: (p(&st.h_u)?, p(&st.h_v)?) })
        })
        .collect()
}

pub fn two_step(setup: &ReesSetup, rees: &ReesIdeal, steps: &[TwoStepInput]) -> Result<TwoStepResult> {
    let s = &rees.ring;
    let mut fs = Vec::new();
    let mut hs = Vec::new();
    let mut dets = Vec::new();
    for (k, st) in steps.iter().enumerate() {
        let (u, v) = (st.u.to_ring(s)?, st.v.to_ring(s)?);
        let f = &(&u * &st.f.0) + &(&v * &st.f.1);
        let h = &(&u * &st.h.0) + &(&v * &st.h.1);
        if f.bidegree()?.1 != 1 || !rees.l1_gb.contains(&f) {
            return Err(Error::Precondition(format!("step {}: f is not in (L1)", k + 1)));
        }
        if h.bidegree()?.1 != 2 || !rees.gb.contains(&h) || rees.l1_gb.contains(&h) {
            return Err(Error::Precondition(format!("step {}: h is not a fresh quadric of L", k + 1)));
        }
        let b = Matrix::from_rows(s, vec![vec![st.f.0.clone(), st.h.0.clone()], vec![st.f.1.clone(), st.h.1.clone()]]);
        dets.push(b.det()?);
        fs.push(f);
        hs.push(h);
    }
    // Each h represents the same class modulo S_1 L_1.
    for w in hs.windows(2) {
        if !rees.l1_gb.contains(&(&w[0] - &w[1])) {
            return Err(Error::Precondition("the quadrics differ modulo S1 L1".into()));
        }
    }
    let steps_fresh = fresh_generating_set(rees, &dets, 3)?;
    let mut forms = fs.clone();
    forms.extend(dets.iter().cloned());
    let matrix = content_matrix(&forms, 1, true)?;
    let det = det_content(&matrix)?;
    let power = power_of_elim(&det, &setup.fiber.equation)?;
    Ok(TwoStepResult { f: fs, h: hs, step_dets: dets, steps_fresh, matrix, det, power })
}

/// Entries of `B` as strings, row by row.
pub fn matrix_strings(m: &Matrix) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(|p| p.to_string()).collect()).collect()
}

/// True if `a` turns into `b` after permuting rows and columns and
/// changing the sign of whole rows or columns; also tries the transpose.
pub fn same_up_to_permutation(a: &Matrix, b: &Matrix) -> bool {
    fn canon(m: &Matrix) -> Vec<Vec<Poly>> {
        (0..m.rows()).map(|i| m.row(i)).collect()
    }
    fn try_match(a: &Matrix, b: &Matrix) -> bool {
        if a.rows() != b.rows() || a.cols() != b.cols() {
            return false;
        }
        let n = a.rows();
        let rows_a = canon(a);
        let rows_b = canon(b);
        let mut used = vec![false; n];
        let mut perm = vec![0usize; n];
        fn cols_match(ra: &[Vec<Poly>], rb: &[Vec<Poly>], perm: &[usize]) -> bool {
            let c = ra[0].len();
            let col = |rows: &[Vec<Poly>], j: usize, p: Option<&[usize]>| -> Vec<Poly> {
                (0..rows.len()).map(|i| rows[p.map_or(i, |p| p[i])][j].clone()).collect::<Vec<_>>()
            };
            let mut taken = vec![false; c];
            'outer: for j in 0..c {
                let ca = col(ra, j, Some(perm));
                let neg: Vec<Poly> = ca.iter().map(|p| -p).collect();
                for k in 0..c {
                    if !taken[k] {
                        let cb = col(rb, k, None);
                        if cb == ca || cb == neg {
                            taken[k] = true;
                            continue 'outer;
                        }
                    }
                }
                return false;
            }
            true
        }
        fn go(k: usize, ra: &[Vec<Poly>], rb: &[Vec<Poly>], used: &mut [bool], perm: &mut [usize]) -> bool {
            let n = ra.len();
            if k == n {
                return cols_match(ra, rb, perm);
            }
            // Row k of b must be a row of a up to sign and column order;
            // compare as multisets of entries up to sign.
            let key = |r: &[Poly]| {
                let mut v: Vec<String> = r.iter().map(|p| p.primitive().to_string()).collect();
                v.sort();
                v
            };
            let kb = key(&rb[k]);
            for i in 0..n {
                if !used[i] && key(&ra[i]) == kb {
                    used[i] = true;
                    perm[k] = i;
                    if go(k + 1, ra, rb, used, perm) {
                        return true;
                    }
                    used[i] = false;
                }
            }
            false
        }
        go(0, &rows_a, &rows_b, &mut used, &mut perm)
    }
    try_match(a, b) || try_match(&a.transpose(), b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::parse_list;
    use crate::rees::rees_ideal;
    use crate::scalar::Field;

    #[test]
    fn kernel_count_examples() {
        assert_eq!(kernel_count_formula(3, 3, 2), 3);
        assert_eq!(kernel_count_formula(4, 2, 2), 15);
        // d = 3, s = n - 1: the count is n, and the inequality caps n at 7.
        for n in 2..=7 {
            assert_eq!(kernel_count_formula(3, n, n - 1), n);
            assert!(balanced_inequality(3, n - 1, n));
        }
        assert!(!balanced_inequality(3, 7, kernel_count_formula(3, 8, 7)));
    }

    #[test]
    fn monomial_cubics_content_matrix() {
        let r = Ring::polynomial(3, Field::Rational);
        let g = parse_list("x1^3, x2^3, x3^3, x1*x2*x3", &r).unwrap();
        let setup = ReesSetup::new(&r, &g, None).unwrap();
        let rees = rees_ideal(&setup).unwrap();
        let bal = balance(&setup).unwrap();
        assert_eq!(bal.s, Some(2));
        assert_eq!(bal.r_i, Some(2));
        let deltas = delta_generators(&setup, &rees.l1).unwrap();
        assert_eq!(deltas.len(), 3);
        let cm = ternary_balanced_matrix(&setup, &rees.l1, &deltas).unwrap();
        let det = det_content(&cm).unwrap();
        let p = power_of_elim(&det, &setup.fiber.equation).unwrap();
        assert_eq!(p.exponent, 3);
        assert!(p.pure);
        let sd = socle_degree_theorem(&setup, 2).unwrap();
        assert!(sd.holds());
        assert!(count_checks(&setup, 2).unwrap().holds());
    }

    #[test]
    fn upgrade_of_a_times_f() {
        let r = Ring::polynomial(3, Field::Rational);
        let g = parse_list("x1^3, x2^3, x3^3, x1*x2*x3", &r).unwrap();
        let setup = ReesSetup::new(&r, &g, None).unwrap();
        let rees = rees_ideal(&setup).unwrap();
        let f = rees.l1[0].clone();
        let a = setup.a().to_ring(&setup.rees_ring).unwrap();
        let up = upgrade(&setup, &rees.l1_gb, &(&a * &f)).unwrap();
        let t4 = Poly::var(&setup.rees_ring, 6);
        assert_eq!(up.form, &t4 * &f);
        assert!(up.in_s_l1);
    }

    #[test]
    fn power_of_small_polynomials() {
        let r = Ring::polynomial(2, Field::Rational);
        let p = parse_list("x1 + x2, 3*(x1 + x2)^3, x1", &r).unwrap();
        let res = power_of_elim(&p[1], &p[0]).unwrap();
        assert_eq!(res.exponent, 3);
        assert!(res.pure);
        let res = power_of_elim(&p[2], &p[1]).unwrap();
        assert_eq!(res.exponent, 0);
        assert!(!res.pure);
    }
}
