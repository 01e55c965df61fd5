//! Brute-force linear algebra independent of the Gröbner machinery: graded
//! pieces of the Rees ideal as kernels of evaluation maps, and Hilbert
//! functions as ranks. Arithmetic is exact (rationals over Q, residues over
//! GF(p)) and implemented here rather than shared with `linalg`.

use std::collections::HashMap;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polycore::{Monomial, Poly, Term};
use crate::rees::ReesSetup;
use crate::scalar::{Field, Scalar};

trait Arith: Clone {
    type E: Clone + PartialEq + Debug;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Self::E;
    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Self::E;
    fn to_scalar(&self, a: &Self::E, field: Field) -> Scalar;
}

#[derive(Clone, Copy, Debug)]
struct Fp(u64);

impl Arith for Fp {
    type E = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.0
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.0 - b) % self.0
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.0
    }
    fn inv(&self, a: &u64) -> u64 {
        let (mut r, mut e, mut base) = (1u64, self.0 - 2, *a);
        while e > 0 {
            if e & 1 == 1 {
                r = r * base % self.0;
            }
            base = base * base % self.0;
            e >>= 1;
        }
        r
    }
    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> u64 {
        let p = BigInt::from(self.0);
        let red = |v: &BigInt| (((v % &p) + &p) % &p).to_u64().unwrap();
        self.mul(&red(num), &self.inv(&red(den)))
    }
    fn to_scalar(&self, a: &u64, field: Field) -> Scalar {
        field.from_i64(*a as i64)
    }
}

#[derive(Clone, Copy, Debug)]
struct Q;

impl Arith for Q {
    type E = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> BigRational {
        BigRational::new(num.clone(), den.clone())
    }
    fn to_scalar(&self, a: &BigRational, _field: Field) -> Scalar {
        Scalar::from_big(a.clone())
    }
}

type Exps = Vec<u32>;

/// All exponent vectors of total degree `deg` in `n` variables, in
/// descending lex order.
pub fn exponents(n: usize, deg: u32) -> Vec<Exps> {
    fn go(n: usize, deg: u32, prefix: &mut Exps, out: &mut Vec<Exps>) {
        if prefix.len() + 1 == n {
            prefix.push(deg);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=deg).rev() {
            prefix.push(e);
            go(n, deg - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if deg == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(n, deg, &mut Vec::new(), &mut out);
    out
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Reduced row echelon form, grown one row at a time.
struct Basis<A: Arith> {
    k: A,
    cols: usize,
    pivots: Vec<(usize, Vec<A::E>)>,
}

impl<A: Arith> Basis<A> {
    fn new(k: A, cols: usize) -> Self {
        Basis { k, cols, pivots: Vec::new() }
    }

    fn rank(&self) -> usize {
        self.pivots.len()
    }

    fn full(&self) -> bool {
        self.pivots.len() == self.cols
    }

    fn insert(&mut self, mut row: Vec<A::E>) -> bool {
        let k = &self.k;
        for (pc, prow) in &self.pivots {
            if k.is_zero(&row[*pc]) {
                continue;
            }
            let c = row[*pc].clone();
            for j in *pc..self.cols {
                if !k.is_zero(&prow[j]) {
                    row[j] = k.sub(&row[j], &k.mul(&c, &prow[j]));
                }
            }
        }
        let Some(lead) = row.iter().position(|x| !k.is_zero(x)) else {
            return false;
        };
        let inv = k.inv(&row[lead]);
        for x in row.iter_mut().skip(lead) {
            *x = k.mul(x, &inv);
        }
        for (_, prow) in self.pivots.iter_mut() {
            if k.is_zero(&prow[lead]) {
                continue;
            }
            let c = prow[lead].clone();
            for j in lead..self.cols {
                if !k.is_zero(&row[j]) {
                    prow[j] = k.sub(&prow[j], &k.mul(&c, &row[j]));
                }
            }
        }
        let pos = self.pivots.partition_point(|(c, _)| *c < lead);
        self.pivots.insert(pos, (lead, row));
        true
    }
}

/// All `c` with `c M = 0`, by elimination on `[M | 1]`.
fn left_kernel<A: Arith>(k: &A, rows: &[Vec<A::E>], cols: usize) -> Vec<Vec<A::E>> {
    let m = rows.len();
    let mut aug: Vec<Vec<A::E>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut v = r.clone();
            v.resize(cols + m, k.zero());
            v[cols + i] = k.one();
            v
        })
        .collect();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m).find(|&i| !k.is_zero(&aug[i][c])) else { continue };
        aug.swap(rank, p);
        let inv = k.inv(&aug[rank][c]);
        for x in aug[rank].iter_mut() {
            *x = k.mul(x, &inv);
        }
        let pivot = aug[rank].clone();
        for (i, row) in aug.iter_mut().enumerate() {
            if i != rank && !k.is_zero(&row[c]) {
                let f = row[c].clone();
                for j in 0..cols + m {
                    if !k.is_zero(&pivot[j]) {
                        row[j] = k.sub(&row[j], &k.mul(&f, &pivot[j]));
                    }
                }
            }
        }
        rank += 1;
    }
    aug.drain(rank..).map(|mut r| r.split_off(cols)).collect()
}

type Sparse<A> = HashMap<Exps, <A as Arith>::E>;

struct Engine<A: Arith> {
    k: A,
    d: usize,
    gens: Vec<(u32, Sparse<A>)>,
}

impl<A: Arith> Engine<A> {
    fn new(k: A, gens: &[Poly]) -> Self {
        let d = gens[0].ring().nvars();
        let gens = gens
            .iter()
            .map(|g| {
                let mut m = HashMap::new();
                let mut deg = 0;
                for t in g.terms() {
                    let (num, den) = t.c.to_big_parts();
                    let e = t.m.exps(d);
                    deg = e.iter().sum();
                    m.insert(e, k.from_ratio(&num, &den));
                }
                (deg, m)
            })
            .collect();
        Engine { k, d, gens }
    }

    fn product(&self, a: &Sparse<A>, b: &Sparse<A>) -> Sparse<A> {
        let k = &self.k;
        let mut out: Sparse<A> = HashMap::new();
        for (ea, ca) in a {
            for (eb, cb) in b {
                let e: Exps = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let p = k.mul(ca, cb);
                match out.get_mut(&e) {
                    Some(v) => *v = k.add(v, &p),
                    None => {
                        out.insert(e, p);
                    }
                }
            }
        }
        out.retain(|_, c| !k.is_zero(c));
        out
    }

    fn times_var(&self, a: &Sparse<A>, i: usize) -> Sparse<A> {
        a.iter()
            .map(|(e, c)| {
                let mut e = e.clone();
                e[i] += 1;
                (e, c.clone())
            })
            .collect()
    }

    fn dense(&self, p: &Sparse<A>, index: &HashMap<Exps, usize>) -> Vec<A::E> {
        let mut row = vec![self.k.zero(); index.len()];
        for (e, c) in p {
            row[index[e]] = c.clone();
        }
        row
    }

    /// `dim (gens)_t` for `t = 0..=max_t`, spanning each degree by the
    /// variables times a basis of the previous degree plus the generators
    /// of that degree.
    fn ideal_dimensions(&self, gens: &[(u32, Sparse<A>)], max_t: u32) -> Vec<u64> {
        let mut dims = Vec::new();
        let mut prev: Vec<Sparse<A>> = Vec::new();
        let mut full = false;
        for t in 0..=max_t {
            let mons = exponents(self.d, t);
            if full {
                dims.push(mons.len() as u64);
                continue;
            }
            let index: HashMap<Exps, usize> = mons.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
            let mut basis = Basis::new(self.k.clone(), mons.len());
            let mut kept = Vec::new();
            let shifted = prev.iter().flat_map(|v| (0..self.d).map(move |i| (v, i))).map(|(v, i)| self.times_var(v, i));
            let fresh = gens.iter().filter(|(g, _)| *g == t).map(|(_, p)| p.clone());
            for c in shifted.chain(fresh) {
                if basis.full() {
                    break;
                }
                if basis.insert(self.dense(&c, &index)) {
                    kept.push(c);
                }
            }
            full = basis.full();
            dims.push(basis.rank() as u64);
            prev = kept;
        }
        dims
    }

    fn power_products(&self, b: u32) -> Vec<Sparse<A>> {
        exponents(self.gens.len(), b)
            .into_iter()
            .map(|beta| {
                let mut acc: Sparse<A> = [(vec![0; self.d], self.k.one())].into_iter().collect();
                for (j, &e) in beta.iter().enumerate() {
                    for _ in 0..e {
                        acc = self.product(&acc, &self.gens[j].1);
                    }
                }
                acc
            })
            .collect()
    }

    fn common_degree(&self) -> Result<u32> {
        let n = self.gens[0].0;
        if self.gens.iter().any(|g| g.0 != n) {
            return Err(Error::Input("generators must share one degree".into()));
        }
        Ok(n)
    }

    fn kernel_dimensions(&self, max_a: u32, b: u32) -> Result<Vec<u64>> {
        let n = self.common_degree()?;
        let m = self.gens.len() as u64;
        let d = self.d as u64;
        let prods: Vec<(u32, Sparse<A>)> = self.power_products(b).into_iter().map(|p| (n * b, p)).collect();
        let dims = self.ideal_dimensions(&prods, n * b + max_a);
        Ok((0..=max_a)
            .map(|a| {
                let s_dim = binomial(a as u64 + d - 1, d - 1) * binomial(b as u64 + m - 1, m - 1);
                s_dim - dims[(n * b + a) as usize]
            })
            .collect())
    }

    /// Kernel vectors over the monomials `x^alpha T^beta`, indexed
    /// `alpha`-major, both in descending lex order.
    fn kernel_basis(&self, a: u32, b: u32) -> Result<Vec<Vec<A::E>>> {
        let n = self.common_degree()?;
        let xs = exponents(self.d, a);
        let prods = self.power_products(b);
        let target = exponents(self.d, a + n * b);
        let index: HashMap<Exps, usize> = target.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let mut rows = Vec::with_capacity(xs.len() * prods.len());
        for alpha in &xs {
            let mono: Sparse<A> = [(alpha.clone(), self.k.one())].into_iter().collect();
            for p in &prods {
                rows.push(self.dense(&self.product(&mono, p), &index));
            }
        }
        Ok(left_kernel(&self.k, &rows, target.len()))
    }

    fn minimal_generator_count(&self, a: u32, b: u32) -> Result<u64> {
        let m = self.gens.len();
        let xs = exponents(self.d, a);
        let ts = exponents(m, b);
        let xpos: HashMap<&Exps, usize> = xs.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let tpos: HashMap<&Exps, usize> = ts.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let width = xs.len() * ts.len();
        let here = self.kernel_basis(a, b)?;
        let mut span = Basis::new(self.k.clone(), width);
        if a > 0 {
            let xs0 = exponents(self.d, a - 1);
            for v in self.kernel_basis(a - 1, b)? {
                for i in 0..self.d {
                    let mut row = vec![self.k.zero(); width];
                    for (idx, c) in v.iter().enumerate() {
                        if !self.k.is_zero(c) {
                            let mut alpha = xs0[idx / ts.len()].clone();
                            alpha[i] += 1;
                            row[xpos[&alpha] * ts.len() + idx % ts.len()] = c.clone();
                        }
                    }
                    span.insert(row);
                }
            }
        }
        if b > 0 {
            let ts0 = exponents(m, b - 1);
            for v in self.kernel_basis(a, b - 1)? {
                for j in 0..m {
                    let mut row = vec![self.k.zero(); width];
                    for (idx, c) in v.iter().enumerate() {
                        if !self.k.is_zero(c) {
                            let mut beta = ts0[idx % ts0.len()].clone();
                            beta[j] += 1;
                            row[(idx / ts0.len()) * ts.len() + tpos[&beta]] = c.clone();
                        }
                    }
                    span.insert(row);
                }
            }
        }
        Ok(here.len() as u64 - span.rank() as u64)
    }
}

macro_rules! dispatch {
    ($gens:expr, $e:ident => $body:expr) => {{
        let gens: &[Poly] = $gens;
        let first = gens.first().ok_or_else(|| Error::Input("empty ideal".into()))?;
        match first.ring().field() {
            Field::Rational => {
                let $e = Engine::new(Q, gens);
                $body
            }
            Field::Prime(p) => {
                let $e = Engine::new(Fp(p as u64), gens);
                $body
            }
        }
    }};
}

/// Bounds on the bidegrees the kernel oracle accepts.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Caps {
    pub max_a: u32,
    pub max_b: u32,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_a: 10, max_b: 4 }
    }
}

#[derive(Clone, Debug)]
pub struct TruncatedKernelResult {
    pub bidegree: (u32, u32),
    pub dimension: usize,
    /// Forms of the Rees ring spanning `L_(a,b)`.
    pub basis: Vec<Poly>,
}

/// Exact basis of `{F in S_(a,b) : F(x, a_1 t, ..., a_(d+1) t) = 0}`.
pub fn truncated_kernel(setup: &ReesSetup, a: u32, b: u32, caps: Caps) -> Result<TruncatedKernelResult> {
    if a > caps.max_a || b > caps.max_b {
        return Err(Error::Input(format!("bidegree ({a},{b}) exceeds the caps ({},{})", caps.max_a, caps.max_b)));
    }
    let s = &setup.rees_ring;
    let xv = s.x_vars();
    let tv = s.t_vars();
    let field = s.field();
    fn to_polys<A: Arith>(
        e: &Engine<A>,
        vecs: Vec<Vec<A::E>>,
        s: &std::sync::Arc<crate::polycore::Ring>,
        xv: &[usize],
        tv: &[usize],
        a: u32,
        b: u32,
    ) -> Result<Vec<Poly>> {
        let xs = exponents(xv.len(), a);
        let ts = exponents(tv.len(), b);
        let mut out = Vec::with_capacity(vecs.len());
        for v in vecs {
            let mut terms = Vec::new();
            for (idx, c) in v.iter().enumerate() {
                if e.k.is_zero(c) {
                    continue;
                }
                let mut exps = vec![0u32; s.nvars()];
                for (i, &x) in xv.iter().enumerate() {
                    exps[x] = xs[idx / ts.len()][i];
                }
                for (j, &t) in tv.iter().enumerate() {
                    exps[t] = ts[idx % ts.len()][j];
                }
                terms.push(Term { m: Monomial::from_exps(&exps)?, c: e.k.to_scalar(c, s.field()) });
            }
            out.push(Poly::from_terms(s, terms).primitive());
        }
        Ok(out)
    }
    let basis = match field {
        Field::Rational => {
            let e = Engine::new(Q, &setup.gens);
            let v = e.kernel_basis(a, b)?;
            to_polys(&e, v, s, &xv, &tv, a, b)?
        }
        Field::Prime(p) => {
            let e = Engine::new(Fp(p as u64), &setup.gens);
            let v = e.kernel_basis(a, b)?;
            to_polys(&e, v, s, &xv, &tv, a, b)?
        }
    };
    Ok(TruncatedKernelResult { bidegree: (a, b), dimension: basis.len(), basis })
}

/// `dim L_(a,b)` for `a = 0..=max_a`, as `dim S_(a,b) - dim (I^b)_(a+nb)`.
pub fn kernel_dimensions(gens: &[Poly], max_a: u32, b: u32) -> Result<Vec<u64>> {
    dispatch!(gens, e => e.kernel_dimensions(max_a, b))
}

/// Minimal generators of L in bidegree `(a,b)`: `dim L_(a,b)` minus the
/// dimension of `𝔪 L_(a-1,b) + S_1 L_(a,b-1)`.
pub fn minimal_generator_count(gens: &[Poly], a: u32, b: u32) -> Result<u64> {
    dispatch!(gens, e => e.minimal_generator_count(a, b))
}

/// `dim_k (R/I)_t` for `t = 0..=max_t`.
pub fn rank_hilbert_upto(gens: &[Poly], max_t: u32) -> Result<Vec<i64>> {
    dispatch!(gens, e => {
        let dims = e.ideal_dimensions(&e.gens, max_t);
        let d = e.d as u64;
        Ok((0..=max_t).map(|t| binomial(t as u64 + d - 1, d - 1) as i64 - dims[t as usize] as i64).collect())
    })
}

/// `dim_k (R/I)_t`.
pub fn rank_hilbert(gens: &[Poly], t: u32) -> Result<i64> {
    Ok(rank_hilbert_upto(gens, t)?[t as usize])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::{parse_list, Ring};

    #[test]
    fn exponent_enumeration() {
        assert_eq!(exponents(2, 2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(exponents(3, 4).len(), 15);
    }

    #[test]
    fn square_of_the_maximal_ideal() {
        let r = Ring::polynomial(4, Field::Rational);
        let m2 = parse_list("x1^2, x1*x2, x1*x3, x1*x4, x2^2, x2*x3, x2*x4, x3^2, x3*x4, x4^2", &r).unwrap();
        assert_eq!(rank_hilbert(&m2, 1).unwrap(), 4);
        assert_eq!(rank_hilbert_upto(&m2, 3).unwrap(), vec![1, 4, 0, 0]);
    }

    #[test]
    fn kernel_of_a_complete_intersection_is_koszul() {
        let r = Ring::polynomial(2, Field::Rational);
        let g = parse_list("x1^2, x2^2", &r).unwrap();
        assert_eq!(kernel_dimensions(&g, 3, 1).unwrap(), vec![0, 0, 1, 2]);
        assert_eq!(minimal_generator_count(&g, 2, 1).unwrap(), 1);
        assert_eq!(minimal_generator_count(&g, 3, 1).unwrap(), 0);
    }

    #[test]
    fn prime_field_input() {
        let r = Ring::polynomial(2, Field::Prime(7));
        let g = parse_list("x1^2, 3*x2^2", &r).unwrap();
        assert_eq!(rank_hilbert_upto(&g, 3).unwrap(), vec![1, 2, 1, 0]);
        assert_eq!(kernel_dimensions(&g, 2, 1).unwrap(), vec![0, 0, 1]);
    }

    #[test]
    fn kernel_basis_of_monomial_cubics() {
        let r = Ring::polynomial(3, Field::Rational);
        let g = parse_list("x1^3, x2^3, x3^3, x1*x2*x3", &r).unwrap();
        let setup = ReesSetup::new(&r, &g, None).unwrap();
        assert_eq!(truncated_kernel(&setup, 0, 0, Caps::default()).unwrap().dimension, 0);
        let k = truncated_kernel(&setup, 0, 3, Caps::default()).unwrap();
        assert_eq!(k.dimension, 1);
        let f = crate::polycore::parse_poly("-T1*T2*T3 + T4^3", &setup.rees_ring).unwrap();
        assert!(k.basis[0] == f || k.basis[0] == -f);
        assert!(truncated_kernel(&setup, 11, 0, Caps::default()).is_err());
    }
}
