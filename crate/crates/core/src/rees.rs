use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gbasis::{colon_var, eliminate, ideal_quotient, minimal_generators, GroebnerBasis};
use crate::hilbert::{hilbert_series, HilbertSeries};
use crate::matrix::Matrix;
use crate::polycore::{Monomial, MonomialOrder, Poly, Ring};
use crate::resolution::{check_regular_sequence, minimal_presentation, PresentationMatrix};

/// An almost complete intersection `I = (J, a)` of `d+1` forms of degree `n`
/// in `d` variables. `T_i` corresponds to the i-th generator as given.
#[derive(Clone, Debug)]
pub struct ReesSetup {
    pub ring: Arc<Ring>,
    pub rees_ring: Arc<Ring>,
    pub gens: Vec<Poly>,
    pub d: usize,
    pub n: u32,
    /// Positions of the generators of `J`; `extra` is the remaining one.
    pub reduction: Vec<usize>,
    pub extra: usize,
    pub phi: PresentationMatrix,
    pub fiber: FiberData,
    pub reduction_number: u32,
}

/// Elimination equation of the special fiber, normalized to be primitive
/// with positive leading coefficient.
#[derive(Clone, Debug)]
pub struct FiberData {
    pub equation: Poly,
    pub edeg: u32,
    pub birational: bool,
}

fn normalize(p: &Poly) -> Poly {
    p.primitive()
}

/// Kernel of `k[T] -> k[x]`, `T_i -> a_i`, by eliminating the x-variables.
pub fn special_fiber(ring: &Arc<Ring>, gens: &[Poly], rees_ring: &Arc<Ring>) -> Result<FiberData> {
    let d = ring.nvars();
    let n = gens[0].total_degree().unwrap_or(0);
    let mut w = vec![1u32; d];
    w.extend(std::iter::repeat(n).take(gens.len()));
    let er = rees_ring.with_weights(w).with_order(MonomialOrder::Elimination { mask: rees_ring.x_mask() });
    let mut eqs = Vec::new();
    for (i, a) in gens.iter().enumerate() {
        let t = Poly::var(&er, d + i);
        eqs.push(&t - &a.to_ring(&er)?);
    }
    let kernel = eliminate(&er, &eqs, er.x_mask())?;
    if kernel.len() != 1 {
        return Err(Error::Precondition(format!(
            "the special fiber is not a hypersurface ({} equations)",
            kernel.len()
        )));
    }
    let eq = normalize(&kernel[0].to_ring(rees_ring)?);
    let edeg = eq.total_degree().unwrap_or(0);
    let birational = edeg as u64 == (n as u64).pow(d as u32 - 1);
    Ok(FiberData { equation: eq, edeg, birational })
}

fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if m < k {
        return vec![];
    }
    let mut out = subsets(m - 1, k);
    for mut s in subsets(m - 1, k - 1) {
        s.push(m - 1);
        out.push(s);
    }
    out.sort();
    out
}

impl ReesSetup {
    /// Validate the input. `reduction` lists the 0-based positions of the
    /// generators forming `J`; by default the first `d`-subset (in lex order
    /// of positions) that is a regular sequence.
    pub fn new(ring: &Arc<Ring>, gens: &[Poly], reduction: Option<&[usize]>) -> Result<ReesSetup> {
        let d = ring.nvars();
        if gens.len() != d + 1 {
            return Err(Error::Precondition(format!("expected {} generators in {d} variables, got {}", d + 1, gens.len())));
        }
        let phi = minimal_presentation(ring, gens)?;
        let n = phi.n;
        // Finite colength; reports the first variable with no pure power.
        hilbert_series(ring, gens)?;
        let reduction: Vec<usize> = match reduction {
            Some(idx) => {
                let mut seen = vec![false; d + 1];
                for &i in idx {
                    if i > d || seen[i] {
                        return Err(Error::Input(format!("bad reduction index {}", i + 1)));
                    }
                    seen[i] = true;
                }
                if idx.len() != d {
                    return Err(Error::Input(format!("the reduction needs {d} generators")));
                }
                let j: Vec<Poly> = idx.iter().map(|&i| gens[i].clone()).collect();
                check_regular_sequence(ring, &j)?;
                idx.to_vec()
            }
            None => subsets(d + 1, d)
                .into_iter()
                .find(|idx| {
                    let j: Vec<Poly> = idx.iter().map(|&i| gens[i].clone()).collect();
                    check_regular_sequence(ring, &j).is_ok()
                })
                .ok_or_else(|| Error::Precondition("no d of the generators form a regular sequence".into()))?,
        };
        let extra = (0..=d).find(|i| !reduction.contains(i)).unwrap();
        let rees_ring = Ring::rees_over(ring);
        let fiber = special_fiber(ring, gens, &rees_ring)?;
        let reduction_number = reduction_number(&rees_ring, &fiber, &reduction, extra, n)?;
        Ok(ReesSetup {
            ring: ring.clone(),
            rees_ring,
            gens: gens.to_vec(),
            d,
            n,
            reduction,
            extra,
            phi,
            fiber,
            reduction_number,
        })
    }

    pub fn j(&self) -> Vec<Poly> {
        self.reduction.iter().map(|&i| self.gens[i].clone()).collect()
    }

    pub fn a(&self) -> &Poly {
        &self.gens[self.extra]
    }

    pub fn lift_to_s(&self, p: &Poly) -> Result<Poly> {
        p.to_ring(&self.rees_ring)
    }

    pub fn maximal_ideal(&self) -> Vec<Poly> {
        (0..self.d).map(|i| Poly::var(&self.ring, i)).collect()
    }
}

/// Least `r` with `I^(r+1) = J I^r`, searched over `1..=d(n-1)`. Both sides
/// are generated in one degree, so by graded Nakayama the equality can be
/// read in the special fiber: `T_a^(r+1)` must lie in `(T_j : j in J) + (f)`.
fn reduction_number(s: &Arc<Ring>, fiber: &FiberData, reduction: &[usize], extra: usize, n: u32) -> Result<u32> {
    let tv = s.t_vars();
    let mut gens: Vec<Poly> = reduction.iter().map(|&i| Poly::var(s, tv[i])).collect();
    gens.push(fiber.equation.clone());
    let gb = GroebnerBasis::new(s, &gens)?;
    let last = Poly::var(s, tv[extra]);
    let cap = (n.max(1)).pow(reduction.len() as u32 - 1).max(reduction.len() as u32 * (n.max(1) - 1));
    let mut pw = last.clone();
    for r in 1..=cap.max(1) {
        pw = &pw * &last;
        if gb.contains(&pw) {
            return Ok(r);
        }
    }
    Err(Error::Precondition(format!("J is not a reduction of I with reduction number at most {cap}")))
}

/// Generators `[T_1 .. T_(d+1)] * phi` of the symmetric algebra ideal.
pub fn symmetric_ideal(setup: &ReesSetup) -> Result<Vec<Poly>> {
    let s = &setup.rees_ring;
    let tv = s.t_vars();
    let row: Vec<Poly> = tv.iter().map(|&i| Poly::var(s, i)).collect();
    let m = &setup.phi.matrix;
    let mut lifted = Matrix::zero(s, m.rows(), m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            lifted.set(i, j, m.get(i, j).to_ring(s)?);
        }
    }
    Matrix::from_rows(s, vec![row]).mul(&lifted).map(|p| p.row(0))
}

/// The Rees ideal with its minimal generators sorted by bidegree.
#[derive(Clone, Debug)]
pub struct ReesIdeal {
    pub ring: Arc<Ring>,
    pub l1: Vec<Poly>,
    pub generators: Vec<Poly>,
    pub gb: GroebnerBasis,
    pub l1_gb: GroebnerBasis,
    /// T-degree -> number of fresh generators.
    pub fresh: BTreeMap<u32, usize>,
}

/// Fresh generators of `L_i` and their count.
#[derive(Clone, Debug)]
pub struct GradedPiece {
    pub generators: Vec<Poly>,
    pub fresh_count: usize,
}

/// `L` as the t-free part of `(T_i - a_i t)`.
pub fn rees_by_elimination(setup: &ReesSetup) -> Result<Vec<Poly>> {
    let s = &setup.rees_ring;
    let er = s.extended(&["t"])?;
    let d = setup.d;
    let mut w = vec![1u32; d];
    w.extend(std::iter::repeat(setup.n + 1).take(d + 1));
    w.push(1);
    let er = er.with_weights(w);
    let tvar = er.nvars() - 1;
    let er = er.with_order(MonomialOrder::Elimination { mask: 1 << tvar });
    let t = Poly::var(&er, tvar);
    let mut eqs = Vec::new();
    for (i, a) in setup.gens.iter().enumerate() {
        eqs.push(&Poly::var(&er, d + i) - &(&a.to_ring(&er)? * &t));
    }
    let kept = eliminate(&er, &eqs, 1 << tvar)?;
    kept.iter().map(|p| p.to_ring(s)).collect()
}

/// `L` as `(L_1) : x_d^∞`, which equals `(L_1) : 𝔪^∞` since `L` is prime and
/// misses `x_d`.
pub fn rees_by_saturation(setup: &ReesSetup, l1: &[Poly]) -> Result<Vec<Poly>> {
    colon_var(l1, setup.d - 1, true)
}

fn sort_bigraded(v: &mut [Poly]) {
    v.sort_by(|a, b| {
        let (ax, at) = a.bidegree().unwrap_or((0, 0));
        let (bx, bt) = b.bidegree().unwrap_or((0, 0));
        at.cmp(&bt).then(ax.cmp(&bx)).then_with(|| b.cmp_terms(a))
    });
}

pub fn rees_ideal(setup: &ReesSetup) -> Result<ReesIdeal> {
    let s = setup.rees_ring.clone();
    let l1 = symmetric_ideal(setup)?;
    for g in &l1 {
        let images: Vec<Poly> = s
            .names()
            .iter()
            .enumerate()
            .map(|(i, _)| if i < setup.d { Poly::var(&setup.ring, i) } else { setup.gens[i - setup.d].clone() })
            .collect();
        if !g.substitute(&images)?.is_zero() {
            return Err(Error::Inconsistency("a symmetric algebra generator does not vanish on I".into()));
        }
    }
    let by_elim = rees_by_elimination(setup)?;
    let by_sat = rees_by_saturation(setup, &l1)?;
    let gb = GroebnerBasis::new(&s, &by_sat)?;
    let gb_elim = GroebnerBasis::new(&s, &by_elim)?;
    if !gb.same_ideal(&gb_elim) {
        return Err(Error::Inconsistency("elimination and saturation give different Rees ideals".into()));
    }
    let l1_gb = GroebnerBasis::new(&s, &l1)?;
    if !gb.contains_all(&l1) {
        return Err(Error::Inconsistency("(L1) is not contained in L".into()));
    }
    let mut generators = minimal_generators(gb.polys())?;
    generators = generators.into_iter().map(|p| p.primitive()).collect();
    sort_bigraded(&mut generators);
    let mut fresh = BTreeMap::new();
    for g in &generators {
        let (_, t) = g.bidegree()?;
        if t == 0 {
            return Err(Error::Inconsistency("L contains a nonzero element of R".into()));
        }
        *fresh.entry(t).or_insert(0) += 1;
    }
    if fresh.get(&1).copied().unwrap_or(0) != setup.phi.cols() {
        return Err(Error::Inconsistency("fresh count in T-degree 1 differs from the columns of phi".into()));
    }
    Ok(ReesIdeal { ring: s, l1, generators, gb, l1_gb, fresh })
}

impl ReesIdeal {
    pub fn nu(&self, i: u32) -> usize {
        self.fresh.get(&i).copied().unwrap_or(0)
    }

    pub fn graded_piece(&self, i: u32) -> GradedPiece {
        let generators: Vec<Poly> =
            self.generators.iter().filter(|g| g.bidegree().map(|b| b.1) == Ok(i)).cloned().collect();
        GradedPiece { fresh_count: generators.len(), generators }
    }

    /// `dim_k L_(a,b)`: monomials of bidegree `(a,b)` minus standard ones.
    pub fn piece_dimension(&self, a: u32, b: u32) -> usize {
        let xs = self.ring.x_vars();
        let ts = self.ring.t_vars();
        let mut count = 0;
        for mx in monomials_in(&xs, a) {
            for mt in monomials_in(&ts, b) {
                if !self.gb.is_standard(&mx.mul(&mt)) {
                    count += 1;
                }
            }
        }
        count
    }

    /// Minimal generators of bidegree `(a, b)`.
    pub fn generators_in(&self, a: u32, b: u32) -> usize {
        self.generators.iter().filter(|g| g.bidegree().ok() == Some((a, b))).count()
    }
}

/// Monomials of total degree `deg` in the given variables, descending lex.
pub fn monomials_in(vars: &[usize], deg: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    fn go(vars: &[usize], k: usize, left: u32, cur: &mut Monomial, out: &mut Vec<Monomial>) {
        if k + 1 == vars.len() {
            let mut m = *cur;
            m.set_exp(vars[k], left);
            out.push(m);
            return;
        }
        for e in (0..=left).rev() {
            let mut m = *cur;
            m.set_exp(vars[k], e);
            go(vars, k + 1, left - e, &mut m, out);
        }
    }
    if vars.is_empty() {
        if deg == 0 {
            out.push(Monomial::one());
        }
        return out;
    }
    go(vars, 0, deg, &mut Monomial::one(), &mut out);
    out
}

/// Socle degree of `R/(J:a)`, the saturation exponent it predicts, and the
/// least exponent that actually works.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SecondaryEdeg {
    pub epsilon: u32,
    pub r_bound: u32,
    pub r_min: u32,
    pub colon_series: HilbertSeries,
}

/// Least `r` with `𝔪^r g ⊆ (L_1)`, trying `r = 0..=cap`.
fn annihilating_power(setup: &ReesSetup, rees: &ReesIdeal, g: &Poly, cap: u32) -> Option<u32> {
    let mut failing: Vec<Monomial> = vec![Monomial::one()];
    for r in 0..=cap {
        let mut still = Vec::new();
        for m in &failing {
            let p = g.mul_monomial(m);
            if !rees.l1_gb.contains(&p) {
                still.push(*m);
            }
        }
        if still.is_empty() {
            return Some(r);
        }
        let mut next = Vec::new();
        for m in &still {
            for i in 0..setup.d {
                let mut v = *m;
                v.set_exp(i, m.exp(i) + 1);
                if !next.contains(&v) {
                    next.push(v);
                }
            }
        }
        failing = next;
    }
    None
}

pub fn secondary_edeg(setup: &ReesSetup, rees: &ReesIdeal) -> Result<SecondaryEdeg> {
    let colon = ideal_quotient(&setup.j(), setup.a())?;
    let series = hilbert_series(&setup.ring, &colon)?;
    let epsilon = series.top_degree().unwrap_or(0) as u32;
    let r_bound = epsilon + 1;
    let cap = setup.d as u32 * (setup.n - 1);
    if r_bound > cap {
        return Err(Error::Theorem(format!("socle degree {epsilon} of R/(J:a) is not below d(n-1) = {cap}")));
    }
    let mut r_min = 0;
    for g in &rees.generators {
        match annihilating_power(setup, rees, g, r_bound) {
            Some(r) => r_min = r_min.max(r),
            None => {
                return Err(Error::Theorem(format!("L is not (L1) : m^{r_bound}")));
            }
        }
    }
    Ok(SecondaryEdeg { epsilon, r_bound, r_min, colon_series: series })
}

/// No fresh generator of T-degree at least 2 has all of its coefficients in
/// `𝔪^r`.
pub fn coefficient_theorem_check(rees: &ReesIdeal, r: u32) -> Result<bool> {
    for g in &rees.generators {
        let (a, b) = g.bidegree()?;
        if b >= 2 && a >= r {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The special fiber equation must be the unique minimal generator of L of
/// x-degree 0.
pub fn fiber_in_rees(setup: &ReesSetup, rees: &ReesIdeal) -> Result<()> {
    let f = &setup.fiber.equation;
    if !rees.gb.contains(f) {
        return Err(Error::Inconsistency("the elimination equation is not in L".into()));
    }
    let zero_x: Vec<&Poly> = rees.generators.iter().filter(|g| g.bidegree().map(|b| b.0) == Ok(0)).collect();
    if zero_x.len() != 1 || zero_x[0].primitive() != *f {
        return Err(Error::Inconsistency("L has no unique x-degree 0 generator matching the fiber".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::{parse_list, parse_poly};
    use crate::scalar::Field;

    fn monomial_cubics() -> ReesSetup {
        let r = Ring::polynomial(3, Field::Rational);
        let g = parse_list("x1^3, x2^3, x3^3, x1*x2*x3", &r).unwrap();
        ReesSetup::new(&r, &g, None).unwrap()
    }

    #[test]
    fn monomial_cubics_rees_ideal() {
        let s = monomial_cubics();
        assert_eq!(s.reduction_number, 2);
        assert_eq!(s.fiber.edeg, 3);
        let f = parse_poly("-T1*T2*T3 + T4^3", &s.rees_ring).unwrap();
        assert_eq!(s.fiber.equation, f.primitive());
        let l = rees_ideal(&s).unwrap();
        assert_eq!((l.nu(1), l.nu(2), l.nu(3)), (6, 3, 1));
        fiber_in_rees(&s, &l).unwrap();
        let se = secondary_edeg(&s, &l).unwrap();
        assert_eq!(se.r_min, 4);
        assert!(coefficient_theorem_check(&l, se.r_bound).unwrap());
    }

    #[test]
    fn reduction_can_be_chosen() {
        let r = Ring::polynomial(2, Field::Rational);
        let g = parse_list("x1*x2, x1^2, x2^2", &r).unwrap();
        let s = ReesSetup::new(&r, &g, Some(&[1, 2])).unwrap();
        assert_eq!(s.a(), &g[0]);
        assert!(ReesSetup::new(&r, &g, Some(&[0, 1])).is_err());
        let auto = ReesSetup::new(&r, &g, None).unwrap();
        assert_eq!(auto.reduction, vec![1, 2]);
    }

    #[test]
    fn complete_intersection_kernel_is_linear() {
        // For a regular sequence, the kernel is generated in T-degree 1.
        let r = Ring::polynomial(2, Field::Rational);
        let s = Ring::rees_over(&r);
        let eqs = parse_list("x2^2*T1 - x1^2*T2", &s).unwrap();
        let g = parse_list("x1^2, x2^2", &r).unwrap();
        let syz = crate::resolution::syzygy_module(&g).unwrap();
        assert_eq!(syz.columns.cols(), 1);
        let sat = colon_var(&eqs, 1, true).unwrap();
        assert!(GroebnerBasis::new(&s, &eqs).unwrap().contains_all(&sat));
    }
}
