//! Sparse row echelon forms over the coefficient field, used for counting
//! dimensions of spans of polynomials in a fixed degree.

use std::collections::{BTreeMap, HashMap};

use crate::polycore::{Monomial, Poly};
use crate::scalar::Scalar;

pub type SparseRow = Vec<(usize, Scalar)>;

/// Rows with pairwise distinct leading columns, each leading entry 1.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<SparseRow>,
    pivot_of: HashMap<usize, usize>,
}

impl Echelon {
    pub fn new() -> Echelon {
        Echelon::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseRow] {
        &self.rows
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.pivot_of.keys().copied().collect();
        v.sort();
        v
    }

    /// Reduce `v` against the pivots; the result has no pivot columns.
    pub fn reduce(&self, v: &[(usize, Scalar)]) -> SparseRow {
        let mut work: BTreeMap<usize, Scalar> = v.iter().filter(|(_, c)| !c.is_zero()).cloned().collect();
        let mut out = Vec::new();
        while let Some((&col, _)) = work.iter().next() {
            let c = work.remove(&col).unwrap();
            match self.pivot_of.get(&col) {
                Some(&ri) => {
                    for (k, e) in &self.rows[ri][1..] {
                        let delta = &(e * &c);
                        let slot = work.entry(*k).or_insert_with(|| delta.field().zero());
                        *slot = &*slot - delta;
                        if slot.is_zero() {
                            work.remove(k);
                        }
                    }
                }
                None => out.push((col, c)),
            }
        }
        out
    }

    /// Add a row; returns whether it was independent of the rows so far.
    pub fn insert(&mut self, v: &[(usize, Scalar)]) -> bool {
        let r = self.reduce(v);
        if r.is_empty() {
            return false;
        }
        let inv = r[0].1.inv();
        let row: SparseRow = r.into_iter().map(|(k, c)| (k, &c * &inv)).collect();
        self.pivot_of.insert(row[0].0, self.rows.len());
        self.rows.push(row);
        true
    }

    pub fn contains(&self, v: &[(usize, Scalar)]) -> bool {
        self.reduce(v).is_empty()
    }
}

/// Assigns column indices to monomials on first sight.
#[derive(Clone, Debug, Default)]
pub struct MonomialIndex {
    index: HashMap<Monomial, usize>,
    monomials: Vec<Monomial>,
}

impl MonomialIndex {
    pub fn new() -> MonomialIndex {
        MonomialIndex::default()
    }

    pub fn from_monomials(ms: &[Monomial]) -> MonomialIndex {
        let mut idx = MonomialIndex::new();
        for m in ms {
            idx.get_or_insert(m);
        }
        idx
    }

    pub fn get_or_insert(&mut self, m: &Monomial) -> usize {
        if let Some(&i) = self.index.get(m) {
            return i;
        }
        let i = self.monomials.len();
        self.index.insert(*m, i);
        self.monomials.push(*m);
        i
    }

    pub fn get(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn monomial(&self, i: usize) -> &Monomial {
        &self.monomials[i]
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn row(&mut self, p: &Poly) -> SparseRow {
        let mut row: SparseRow = p.terms().iter().map(|t| (self.get_or_insert(&t.m), t.c.clone())).collect();
        row.sort_by_key(|e| e.0);
        row
    }
}

/// Rank of the span of a set of polynomials.
pub fn span_rank(polys: &[Poly]) -> usize {
    let mut idx = MonomialIndex::new();
    let mut ech = Echelon::new();
    for p in polys {
        let row = idx.row(p);
        ech.insert(&row);
    }
    ech.rank()
}

/// Indices of a maximal linearly independent subfamily, chosen greedily.
pub fn independent_subset(polys: &[Poly]) -> Vec<usize> {
    let mut idx = MonomialIndex::new();
    let mut ech = Echelon::new();
    let mut out = Vec::new();
    for (i, p) in polys.iter().enumerate() {
        let row = idx.row(p);
        if ech.insert(&row) {
            out.push(i);
        }
    }
    out
}

/// Coordinates of polynomials with respect to a linearly independent family.
#[derive(Clone, Debug)]
pub struct Coordinates {
    idx: MonomialIndex,
    // Reduced vector and the combination of basis elements producing it.
    rows: Vec<(SparseRow, Vec<Scalar>)>,
    pivot_of: HashMap<usize, usize>,
    len: usize,
}

impl Coordinates {
    /// `None` if the family is linearly dependent.
    pub fn new(basis: &[Poly]) -> Option<Coordinates> {
        let zero = basis.first()?.ring().field().zero();
        let one = zero.field().one();
        let mut c = Coordinates { idx: MonomialIndex::new(), rows: Vec::new(), pivot_of: HashMap::new(), len: basis.len() };
        for (i, b) in basis.iter().enumerate() {
            let v = c.idx.row(b);
            let mut comb = vec![zero.clone(); basis.len()];
            comb[i] = one.clone();
            let (r, comb) = c.reduce(&v, comb);
            if r.is_empty() {
                return None;
            }
            let inv = r[0].1.inv();
            let r: SparseRow = r.into_iter().map(|(k, x)| (k, &x * &inv)).collect();
            let comb: Vec<Scalar> = comb.iter().map(|x| x * &inv).collect();
            c.pivot_of.insert(r[0].0, c.rows.len());
            c.rows.push((r, comb));
        }
        Some(c)
    }

    fn reduce(&self, v: &[(usize, Scalar)], mut comb: Vec<Scalar>) -> (SparseRow, Vec<Scalar>) {
        let mut work: BTreeMap<usize, Scalar> = v.iter().filter(|(_, c)| !c.is_zero()).cloned().collect();
        let mut out = Vec::new();
        while let Some((&col, _)) = work.iter().next() {
            let c = work.remove(&col).unwrap();
            match self.pivot_of.get(&col) {
                Some(&ri) => {
                    let (row, rc) = &self.rows[ri];
                    for (k, e) in &row[1..] {
                        let delta = &(e * &c);
                        let slot = work.entry(*k).or_insert_with(|| delta.field().zero());
                        *slot = &*slot - delta;
                        if slot.is_zero() {
                            work.remove(k);
                        }
                    }
                    for (t, x) in comb.iter_mut().zip(rc) {
                        *t = &*t - &(x * &c);
                    }
                }
                None => out.push((col, c)),
            }
        }
        (out, comb)
    }

    /// `lambda` with `target = sum lambda_i basis_i`, or `None` outside the span.
    pub fn of(&self, target: &Poly) -> Option<Vec<Scalar>> {
        let zero = target.ring().field().zero();
        let mut v = Vec::new();
        for t in target.terms() {
            v.push((self.idx.get(&t.m)?, t.c.clone()));
        }
        let (r, comb) = self.reduce(&v, vec![zero; self.len]);
        if !r.is_empty() {
            return None;
        }
        Some(comb.iter().map(|x| -x).collect())
    }
}

/// Basis of the null space of a dense matrix given by rows (`rows x cols`):
/// vectors `v` with `M v = 0`.
pub fn nullspace(m: &[Vec<Scalar>], cols: usize, zero: &Scalar) -> Vec<Vec<Scalar>> {
    let mut a: Vec<Vec<Scalar>> = m.to_vec();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let p = (r..a.len()).find(|&i| !a[i][c].is_zero());
        let p = match p {
            Some(p) => p,
            None => continue,
        };
        a.swap(r, p);
        let inv = a[r][c].inv();
        for k in 0..cols {
            a[r][k] = &a[r][k] * &inv;
        }
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for k in 0..cols {
                    let t = &a[r][k] * &f;
                    a[i][k] = &a[i][k] - &t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let one = zero.field().one();
    free.iter()
        .map(|&f| {
            let mut v = vec![zero.clone(); cols];
            v[f] = one.clone();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -&a[i][f];
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::{parse_list, Ring};
    use crate::scalar::Field;

    #[test]
    fn rank_of_dependent_family() {
        let r = Ring::polynomial(3, Field::Rational);
        let ps = parse_list("x1 + x2, x2 + x3, x1 - x3, x1", &r).unwrap();
        assert_eq!(span_rank(&ps), 3);
        assert_eq!(independent_subset(&ps), vec![0, 1, 3]);
    }

    #[test]
    fn coordinates_in_a_basis() {
        let r = Ring::polynomial(2, Field::Rational);
        let basis = parse_list("x1 + x2, x1 - x2", &r).unwrap();
        let c = Coordinates::new(&basis).unwrap();
        let q = Field::Rational;
        assert_eq!(c.of(&parse_list("3*x1 + x2", &r).unwrap()[0]).unwrap(), vec![q.from_i64(2), q.from_i64(1)]);
        assert!(c.of(&parse_list("x1^2", &r).unwrap()[0]).is_none());
        assert!(Coordinates::new(&parse_list("x1, 2*x1", &r).unwrap()).is_none());
    }

    #[test]
    fn nullspace_of_small_matrix() {
        let q = Field::Rational;
        let m = vec![vec![q.from_i64(1), q.from_i64(2), q.from_i64(3)], vec![q.from_i64(2), q.from_i64(4), q.from_i64(6)]];
        let ns = nullspace(&m, 3, &q.zero());
        assert_eq!(ns.len(), 2);
        for v in &ns {
            let s = &(&(&m[0][0] * &v[0]) + &(&m[0][1] * &v[1])) + &(&m[0][2] * &v[2]);
            assert!(s.is_zero());
        }
    }
}
