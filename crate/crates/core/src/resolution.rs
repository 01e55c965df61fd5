use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gbasis::{self, ideal_quotient, lift, minimal_generators, same_ideal, GroebnerBasis, Lifter};
use crate::hilbert::{hilbert_series, HilbertSeries};
use crate::matrix::Matrix;
use crate::polycore::{Poly, Ring};

/// Minimal syzygy matrix of a row of forms of common degree `n`.
#[derive(Clone, Debug)]
pub struct PresentationMatrix {
    pub matrix: Matrix,
    /// Degree of the entries of each column (`n_j - n`).
    pub degrees: Vec<u32>,
    pub n: u32,
}

impl PresentationMatrix {
    pub fn cols(&self) -> usize {
        self.matrix.cols()
    }

    /// Twists `n_j` of the source summands `R(-n_j)`.
    pub fn twists(&self) -> Vec<u32> {
        self.degrees.iter().map(|d| d + self.n).collect()
    }

    pub fn count_of_degree(&self, deg: u32) -> usize {
        self.degrees.iter().filter(|&&d| d == deg).count()
    }
}

/// Generators of the first syzygy module of a row.
#[derive(Clone, Debug)]
pub struct SyzygyModule {
    pub rank: usize,
    pub columns: Matrix,
    pub degrees: Vec<u32>,
    /// Which columns are (scalar multiples of) Koszul relations.
    pub koszul: Vec<bool>,
}

fn vector_degree(v: &[Poly], shifts: &[i64]) -> i64 {
    for (k, e) in v.iter().enumerate() {
        if let Some(d) = e.total_degree() {
            return d as i64 + shifts[k];
        }
    }
    0
}

fn is_koszul(col: &[Poly], row: &[Poly]) -> bool {
    let nz: Vec<usize> = (0..col.len()).filter(|&k| !col[k].is_zero()).collect();
    if nz.len() != 2 {
        return false;
    }
    let (i, j) = (nz[0], nz[1]);
    // col = lambda * (a_j e_i - a_i e_j)
    let lhs = &col[i] * &row[i];
    let rhs = &col[j] * &row[j];
    if !(&lhs + &rhs).is_zero() || row[j].is_zero() {
        return false;
    }
    let ratio = col[i].lc() / row[j].lc();
    col[i] == row[j].scale(&ratio)
}

fn sort_columns(cols: &mut [Vec<Poly>], shifts: &[i64]) {
    cols.sort_by(|a, b| {
        vector_degree(a, shifts).cmp(&vector_degree(b, shifts)).then_with(|| {
            for (x, y) in a.iter().zip(b.iter()) {
                let o = y.cmp_terms(x);
                if o != std::cmp::Ordering::Equal {
                    return o;
                }
            }
            std::cmp::Ordering::Equal
        })
    });
}

/// Minimal generators of the syzygies of `row`, columns sorted by degree.
pub fn syzygy_module(row: &[Poly]) -> Result<SyzygyModule> {
    let ring = row.first().ok_or_else(|| Error::Input("empty row".into()))?.ring().clone();
    if row.iter().all(|p| p.is_zero()) {
        return Err(Error::Precondition("syzygies of a zero row".into()));
    }
    let mut cols = gbasis::syzygies(row, 1, &[])?;
    let shifts: Vec<i64> = row.iter().map(|p| p.total_degree().unwrap_or(0) as i64).collect();
    sort_columns(&mut cols, &shifts);
    let degrees = cols.iter().map(|c| vector_degree(c, &shifts) as u32).collect();
    let koszul = cols.iter().map(|c| is_koszul(c, row)).collect();
    Ok(SyzygyModule { rank: row.len(), columns: Matrix::from_columns(&ring, row.len(), &cols), degrees, koszul })
}

/// Minimal presentation `phi` of an ideal minimally generated by forms of
/// one degree.
pub fn minimal_presentation(ring: &Arc<Ring>, gens: &[Poly]) -> Result<PresentationMatrix> {
    if gens.is_empty() {
        return Err(Error::Input("no generators".into()));
    }
    let n = gens[0].total_degree().unwrap_or(0);
    for (i, g) in gens.iter().enumerate() {
        if g.is_zero() || !g.is_homogeneous() || g.total_degree() != Some(n) {
            return Err(Error::Precondition(format!("generator {} is not a form of degree {n}", i + 1)));
        }
    }
    for i in 0..gens.len() {
        let others: Vec<Poly> = gens.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, g)| g.clone()).collect();
        if !others.is_empty() && GroebnerBasis::new(ring, &others)?.contains(&gens[i]) {
            return Err(Error::Precondition(format!("generator {} is redundant", i + 1)));
        }
    }
    let syz = syzygy_module(gens)?;
    let degrees = syz.degrees.iter().map(|d| d - n).collect();
    Ok(PresentationMatrix { matrix: syz.columns, degrees, n })
}

/// The ideal of entries of `phi`, as a reduced Gröbner basis.
pub fn content_ideal(phi: &PresentationMatrix) -> Result<Vec<Poly>> {
    let ring = phi.matrix.ring();
    let entries: Vec<Poly> = phi.matrix.entries().iter().filter(|p| !p.is_zero()).cloned().collect();
    Ok(GroebnerBasis::new(ring, &entries)?.polys().to_vec())
}

/// A complex of graded free modules `F_len -> ... -> F_1 -> F_0`.
/// `maps[j-1]` is `d_j : F_j -> F_(j-1)`; `degrees[j]` lists the twists of
/// the basis of `F_j`.
#[derive(Clone, Debug)]
pub struct FreeComplex {
    pub ring: Arc<Ring>,
    pub maps: Vec<Matrix>,
    pub degrees: Vec<Vec<i64>>,
}

impl FreeComplex {
    pub fn ranks(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.len()).collect()
    }

    pub fn length(&self) -> usize {
        self.maps.len()
    }

    pub fn is_complex(&self) -> Result<bool> {
        for j in 1..self.maps.len() {
            if !self.maps[j - 1].mul(&self.maps[j])?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Every nonzero entry of `d_j` at `(p, q)` has degree
    /// `deg F_j[q] - deg F_(j-1)[p]`.
    pub fn is_graded(&self) -> bool {
        for (j, m) in self.maps.iter().enumerate() {
            for p in 0..m.rows() {
                for q in 0..m.cols() {
                    let e = m.get(p, q);
                    if e.is_zero() {
                        continue;
                    }
                    let want = self.degrees[j + 1][q] - self.degrees[j][p];
                    if !e.is_homogeneous() || e.total_degree().map(|d| d as i64) != Some(want) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Split off unit entries until the complex is minimal. The pivot is the
    /// first unit found scanning maps, then columns, then rows.
    pub fn minimalize(&mut self) {
        loop {
            let mut found = None;
            'scan: for (j, m) in self.maps.iter().enumerate() {
                for q in 0..m.cols() {
                    for p in 0..m.rows() {
                        let e = m.get(p, q);
                        if !e.is_zero() && e.is_constant() {
                            found = Some((j, p, q));
                            break 'scan;
                        }
                    }
                }
            }
            let (j, p, q) = match found {
                None => break,
                Some(x) => x,
            };
            let d = &self.maps[j];
            let inv = d.get(p, q).lc().inv();
            let mut nd = d.clone();
            for i in 0..d.rows() {
                let diq = d.get(i, q);
                if i == p || diq.is_zero() {
                    continue;
                }
                let f = diq.scale(&inv);
                for k in 0..d.cols() {
                    if k == q || d.get(p, k).is_zero() {
                        continue;
                    }
                    let v = d.get(i, k) - &(&f * d.get(p, k));
                    nd.set(i, k, v);
                }
            }
            nd.remove_row(p);
            nd.remove_col(q);
            self.maps[j] = nd;
            if j + 1 < self.maps.len() {
                self.maps[j + 1].remove_row(q);
            }
            if j > 0 {
                self.maps[j - 1].remove_col(p);
            }
            self.degrees[j + 1].remove(q);
            self.degrees[j].remove(p);
        }
        while self.degrees.len() > 1 && self.degrees.last().is_some_and(|d| d.is_empty()) {
            self.degrees.pop();
            self.maps.pop();
        }
    }

    pub fn is_minimal(&self) -> bool {
        self.maps.iter().all(|m| m.entries().iter().all(|e| e.is_zero() || !e.is_constant()))
    }

    /// Hilbert series of `coker d_1`, from the graded Betti numbers. Fails if
    /// the alternating sum is not a polynomial.
    pub fn resolved_series(&self) -> Result<HilbertSeries> {
        let nv = self.ring.nvars();
        let lo = self.degrees.iter().flatten().copied().min().unwrap_or(0);
        let hi = self.degrees.iter().flatten().copied().max().unwrap_or(0);
        let mut num = vec![0i64; (hi - lo + 1) as usize];
        for (j, degs) in self.degrees.iter().enumerate() {
            for &g in degs {
                num[(g - lo) as usize] += if j % 2 == 0 { 1 } else { -1 };
            }
        }
        // Divide by (1 - t), nv times.
        for _ in 0..nv {
            let mut q = vec![0i64; num.len().saturating_sub(1)];
            let mut acc = 0;
            for i in 0..q.len() {
                acc += num[i];
                q[i] = acc;
            }
            if acc + num.last().copied().unwrap_or(0) != 0 {
                return Err(Error::Inconsistency("Betti numbers do not give a finite-length module".into()));
            }
            num = q;
        }
        Ok(HilbertSeries::new(num, lo))
    }
}

/// Koszul complex on `z`; basis of `K_i` is the i-subsets in lex order, with
/// `d(e_S) = sum_k (-1)^k z_(s_k) e_(S - s_k)`.
pub fn koszul_complex(ring: &Arc<Ring>, z: &[Poly]) -> FreeComplex {
    let m = z.len();
    let subsets: Vec<Vec<Vec<usize>>> = (0..=m).map(|i| subsets_of(m, i)).collect();
    let degs: Vec<Vec<i64>> = subsets
        .iter()
        .map(|ss| {
            ss.iter()
                .map(|s| s.iter().map(|&k| z[k].total_degree().unwrap_or(0) as i64).sum())
                .collect()
        })
        .collect();
    let mut maps = Vec::new();
    for i in 1..=m {
        let src = &subsets[i];
        let tgt = &subsets[i - 1];
        let mut mat = Matrix::zero(ring, tgt.len(), src.len());
        for (q, s) in src.iter().enumerate() {
            for (k, &elt) in s.iter().enumerate() {
                let rest: Vec<usize> = s.iter().copied().filter(|&x| x != elt).collect();
                let p = tgt.iter().position(|t| *t == rest).unwrap();
                let e = if k % 2 == 0 { z[elt].clone() } else { -&z[elt] };
                mat.set(p, q, e);
            }
        }
        maps.push(mat);
    }
    FreeComplex { ring: ring.clone(), maps, degrees: degs }
}

fn subsets_of(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            go(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, m, k, &mut Vec::new(), &mut out);
    out
}

fn module_elements(ring: &Arc<Ring>, m: &Matrix) -> Vec<Poly> {
    m.columns().iter().map(|c| Poly::from_vector(ring, c, 0)).collect()
}

fn shifts_u64(degs: &[i64]) -> Vec<u64> {
    let lo = degs.iter().copied().min().unwrap_or(0).min(0);
    degs.iter().map(|&d| (d - lo) as u64).collect()
}

/// Minimal graded free resolution of `R/I` by iterated minimal syzygies.
pub fn minimal_resolution(ring: &Arc<Ring>, gens: &[Poly]) -> Result<FreeComplex> {
    let gens: Vec<Poly> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    let mins = minimal_generators(&gens)?;
    let d1 = Matrix::from_rows(ring, vec![mins.clone()]);
    let mut degrees = vec![vec![0i64], mins.iter().map(|g| g.total_degree().unwrap() as i64).collect()];
    let mut maps = vec![d1];
    loop {
        let last = maps.last().unwrap();
        let tgt = &degrees[degrees.len() - 2];
        let src = degrees.last().unwrap().clone();
        let elems = module_elements(ring, last);
        let syz = gbasis::syzygies(&elems, last.rows() as u32, &shifts_u64(tgt))?;
        if syz.is_empty() {
            break;
        }
        let mut cols = syz;
        sort_columns(&mut cols, &src);
        let degs: Vec<i64> = cols.iter().map(|c| vector_degree(c, &src)).collect();
        maps.push(Matrix::from_columns(ring, last.cols(), &cols));
        degrees.push(degs);
    }
    Ok(FreeComplex { ring: ring.clone(), maps, degrees })
}

/// Lift `u : K -> F` of complexes starting from `u_0` and `u_1`, one
/// homological degree at a time, through module lifts.
pub fn comparison_map(k: &FreeComplex, f: &FreeComplex, u1: Matrix) -> Result<Vec<Matrix>> {
    let ring = &k.ring;
    let mut us = vec![Matrix::identity(ring, 1), u1];
    for i in 2..=k.length() {
        let dk = &k.maps[i - 1];
        let prev = &us[i - 1];
        let images = prev.mul(dk)?;
        if i > f.length() {
            if !images.is_zero() {
                return Err(Error::Inconsistency("comparison map does not vanish past the resolution".into()));
            }
            us.push(Matrix::zero(ring, 0, dk.cols()));
            continue;
        }
        let df = &f.maps[i - 1];
        let lifter = Lifter::new(&module_elements(ring, df), df.rows() as u32, &shifts_u64(&f.degrees[i - 1]))?;
        let mut cols = Vec::with_capacity(images.cols());
        for c in images.columns() {
            let target = Poly::from_vector(ring, &c, 0);
            match lifter.lift(&target)? {
                Some(v) => cols.push(v),
                None => return Err(Error::Inconsistency(format!("comparison map has no lift in degree {i}"))),
            }
        }
        us.push(Matrix::from_columns(ring, df.cols(), &cols));
    }
    Ok(us)
}

/// Resolution of `R/(J:a)` obtained by dualizing the mapping cone of the
/// comparison map from the Koszul complex of `J` to the resolution of `R/I`.
#[derive(Clone, Debug)]
pub struct LinkResolution {
    pub complex: FreeComplex,
    pub colon: Vec<Poly>,
    pub series: HilbertSeries,
}

pub fn check_regular_sequence(ring: &Arc<Ring>, j: &[Poly]) -> Result<()> {
    let d = ring.nvars();
    if j.len() != d {
        return Err(Error::Precondition(format!("expected {d} forms in the reduction, got {}", j.len())));
    }
    let n = j[0].total_degree().unwrap_or(0) as usize;
    let mut want = vec![1i64];
    for _ in 0..d {
        let mut next = vec![0i64; want.len() + n - 1];
        for (i, &c) in want.iter().enumerate() {
            for k in 0..n {
                next[i + k] += c;
            }
        }
        want = next;
    }
    let got = hilbert_series(ring, j).map_err(|_| Error::Precondition("the reduction is not a regular sequence".into()))?;
    if got != HilbertSeries::new(want, 0) {
        return Err(Error::Precondition("the reduction is not a regular sequence".into()));
    }
    Ok(())
}

pub fn link_resolution(ring: &Arc<Ring>, j: &[Poly], a: &Poly) -> Result<LinkResolution> {
    check_regular_sequence(ring, j)?;
    if GroebnerBasis::new(ring, j)?.contains(a) {
        return Err(Error::Precondition("the extra generator lies in the reduction".into()));
    }
    let d = j.len();
    let n = j[0].total_degree().unwrap() as i64;
    let mut gens = j.to_vec();
    gens.push(a.clone());
    let k = koszul_complex(ring, j);
    let f = minimal_resolution(ring, &gens)?;
    if f.maps[0].cols() != d + 1 {
        return Err(Error::Precondition("generators are not minimal".into()));
    }
    let mut u1 = Matrix::zero(ring, d + 1, d);
    for i in 0..d {
        u1.set(i, i, Poly::one(ring));
    }
    let u = comparison_map(&k, &f, u1)?;
    // Cone C_i = K_(i-1) + F_i, reduced modulo K_0 + F_0; keep C'_1 .. C'_(d+1).
    let rank_k = |i: usize| k.degrees.get(i).map_or(0, |v| v.len());
    let rank_f = |i: usize| f.degrees.get(i).map_or(0, |v| v.len());
    let cone_degs = |i: usize| -> Vec<i64> {
        let mut v = if i >= 1 { k.degrees.get(i - 1).cloned().unwrap_or_default() } else { vec![] };
        v.extend(f.degrees.get(i).cloned().unwrap_or_default());
        v
    };
    // Differential C'_i -> C'_(i-1) for i = 2..=d+1.
    let mut cone_maps: Vec<Matrix> = Vec::new();
    for i in 2..=d + 1 {
        let (src_k, src_f) = (rank_k(i - 1), rank_f(i));
        let (tgt_k, tgt_f) = if i == 2 { (0, rank_f(1)) } else { (rank_k(i - 2), rank_f(i - 1)) };
        let mut m = Matrix::zero(ring, tgt_k + tgt_f, src_k + src_f);
        if i > 2 {
            let dk = &k.maps[i - 2];
            for p in 0..tgt_k {
                for q in 0..src_k {
                    m.set(p, q, -dk.get(p, q));
                }
            }
        }
        let ui = &u[i - 1];
        for p in 0..tgt_f.min(ui.rows()) {
            for q in 0..src_k {
                m.set(tgt_k + p, q, ui.get(p, q).clone());
            }
        }
        if src_f > 0 {
            let df = &f.maps[i - 1];
            for p in 0..tgt_f {
                for q in 0..src_f {
                    m.set(tgt_k + p, src_k + q, df.get(p, q).clone());
                }
            }
        }
        cone_maps.push(m);
    }
    // Dualize: G_j = C'_(d+1-j)^*, twisted so that G_0 sits in degree 0.
    let shift = d as i64 * n;
    let mut degrees = Vec::new();
    for jj in 0..=d {
        let i = d + 1 - jj;
        let degs = if i == 1 { f.degrees[1].clone() } else { cone_degs(i) };
        degrees.push(degs.iter().map(|x| shift - x).collect::<Vec<i64>>());
    }
    let mut maps = Vec::new();
    for jj in 1..=d {
        // d^G_jj = transpose of C'_(d+2-jj) -> C'_(d+1-jj)
        maps.push(cone_maps[d - jj].transpose());
    }
    let mut g = FreeComplex { ring: ring.clone(), maps, degrees };
    if !g.is_complex()? {
        return Err(Error::Inconsistency("dual mapping cone is not a complex".into()));
    }
    g.minimalize();
    let colon = ideal_quotient(j, a)?;
    let presented: Vec<Poly> = g.maps[0].row(0);
    if !same_ideal(&presented, &colon)? {
        return Err(Error::Inconsistency("dual mapping cone does not present R/(J:a)".into()));
    }
    let series = g.resolved_series()?;
    if series != hilbert_series(ring, &colon)? {
        return Err(Error::Inconsistency("Betti numbers disagree with the Hilbert series of R/(J:a)".into()));
    }
    Ok(LinkResolution { complex: g, colon, series })
}

/// Outcome of testing whether `I = (J, det phi')` where `[a_1..a_d] = [b]phi'`
/// for a `d`-generated `J:a = (b)`.
#[derive(Clone, Debug)]
pub struct NorthcottResult {
    pub applicable: bool,
    pub holds: bool,
    pub detphi: Option<Poly>,
    pub colon_generators: usize,
}

pub fn northcott_check(ring: &Arc<Ring>, j: &[Poly], a: &Poly) -> Result<NorthcottResult> {
    let colon = ideal_quotient(j, a)?;
    let b = minimal_generators(&colon)?;
    if b.len() != j.len() {
        return Ok(NorthcottResult { applicable: false, holds: false, detphi: None, colon_generators: b.len() });
    }
    let mut cols = Vec::new();
    for aj in j {
        match lift(aj, &b)? {
            Some(c) => cols.push(c),
            None => return Err(Error::Inconsistency("J is not contained in J:a".into())),
        }
    }
    let phi = Matrix::from_columns(ring, b.len(), &cols);
    let det = phi.det()?;
    let mut lhs = j.to_vec();
    lhs.push(det.clone());
    let mut i = j.to_vec();
    i.push(a.clone());
    let holds = same_ideal(&lhs, &i)?;
    Ok(NorthcottResult { applicable: true, holds, detphi: Some(det), colon_generators: b.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::{parse_list, parse_poly};
    use crate::scalar::Field;

    #[test]
    fn koszul_conventions() {
        let r = Ring::new(vec!["x".into(), "y".into()], Field::Rational).unwrap();
        let z = parse_list("x, y", &r).unwrap();
        let k = koszul_complex(&r, &z);
        assert_eq!(k.ranks(), vec![1, 2, 1]);
        assert_eq!(k.maps[1].column(0), parse_list("-y, x", &r).unwrap());
        assert!(k.is_complex().unwrap());
        let r4 = Ring::polynomial(4, Field::Rational);
        let z4 = parse_list("x1^3, x2^3, x3^3, x4^3", &r4).unwrap();
        let k4 = koszul_complex(&r4, &z4);
        assert_eq!(k4.ranks(), vec![1, 4, 6, 4, 1]);
        assert!(k4.is_complex().unwrap());
        assert!(k4.is_graded());
    }

    #[test]
    fn regular_sequence_has_only_koszul_syzygies() {
        let r = Ring::polynomial(3, Field::Rational);
        let row = parse_list("x1^3, x2^3, x3^3", &r).unwrap();
        let s = syzygy_module(&row).unwrap();
        assert_eq!(s.columns.cols(), 3);
        assert!(s.koszul.iter().all(|&k| k));
    }

    #[test]
    fn binary_presentation_degrees() {
        let r = Ring::new(vec!["x".into(), "y".into()], Field::Rational).unwrap();
        let phi = Matrix::from_rows(
            &r,
            parse_list("x^2, y^4, x*y, x^3*y + x^4, y^2, x*y^3", &r).unwrap().chunks(2).map(|c| c.to_vec()).collect(),
        );
        let gens = phi.signed_maximal_minors().unwrap();
        let p = minimal_presentation(&r, &gens).unwrap();
        assert_eq!(p.degrees, vec![2, 4]);
        assert_eq!(p.twists(), vec![8, 10]);
    }

    #[test]
    fn redundant_generator_is_rejected() {
        let r = Ring::polynomial(2, Field::Rational);
        let gens = parse_list("x1^2, x2^2, x1^2 + x2^2", &r).unwrap();
        match minimal_presentation(&r, &gens) {
            Err(Error::Precondition(m)) => assert!(m.contains("generator 1")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn linked_resolution_of_monomial_cubics() {
        let r = Ring::polynomial(3, Field::Rational);
        let j = parse_list("x1^3, x2^3, x3^3", &r).unwrap();
        let a = parse_poly("x1*x2*x3", &r).unwrap();
        let lr = link_resolution(&r, &j, &a).unwrap();
        assert_eq!(lr.series.coeffs, vec![1, 3, 3, 1]);
        assert!(lr.complex.is_minimal());
        assert!(lr.complex.is_complex().unwrap());
        assert_eq!(lr.complex.ranks(), vec![1, 3, 3, 1]);
        let nc = northcott_check(&r, &j, &a).unwrap();
        assert!(nc.applicable && nc.holds);
    }
}
