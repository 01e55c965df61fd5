use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gbasis::{divide, Reducer};
use crate::polycore::{Poly, Ring};

/// Dense matrix of polynomials, row-major.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    ring: Arc<Ring>,
    rows: usize,
    cols: usize,
    data: Vec<Poly>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zero(ring: &Arc<Ring>, rows: usize, cols: usize) -> Matrix {
        Matrix { ring: ring.clone(), rows, cols, data: vec![Poly::zero(ring); rows * cols] }
    }

    pub fn identity(ring: &Arc<Ring>, n: usize) -> Matrix {
        let mut m = Matrix::zero(ring, n, n);
        for i in 0..n {
            m.set(i, i, Poly::one(ring));
        }
        m
    }

    pub fn from_rows(ring: &Arc<Ring>, rows: Vec<Vec<Poly>>) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Matrix::zero(ring, r, c);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), c);
            for (j, p) in row.into_iter().enumerate() {
                m.set(i, j, p);
            }
        }
        m
    }

    pub fn from_columns(ring: &Arc<Ring>, rows: usize, cols: &[Vec<Poly>]) -> Matrix {
        let mut m = Matrix::zero(ring, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, p) in c.iter().enumerate() {
                m.set(i, j, p.clone());
            }
        }
        m
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        self.data[i * self.cols + j] = p;
    }

    pub fn column(&self, j: usize) -> Vec<Poly> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<Poly> {
        (0..self.cols).map(|j| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Poly>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn entries(&self) -> &[Poly] {
        &self.data
    }

    pub fn transpose(&self) -> Matrix {
        let mut m = Matrix::zero(&self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Input(format!(
                "matrix shapes {}x{} and {}x{} do not compose",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut m = Matrix::zero(&self.ring, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Poly::zero(&self.ring);
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    let b = other.get(k, j);
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &a.try_mul(b)?;
                    }
                }
                m.set(i, j, acc);
            }
        }
        Ok(m)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|p| p.is_zero())
    }

    pub fn remove_row(&mut self, r: usize) {
        let mut data = Vec::with_capacity((self.rows - 1) * self.cols);
        for i in 0..self.rows {
            if i != r {
                data.extend_from_slice(&self.data[i * self.cols..(i + 1) * self.cols]);
            }
        }
        self.data = data;
        self.rows -= 1;
    }

    pub fn remove_col(&mut self, c: usize) {
        let mut data = Vec::with_capacity(self.rows * (self.cols - 1));
        for i in 0..self.rows {
            for j in 0..self.cols {
                if j != c {
                    data.push(self.data[i * self.cols + j].clone());
                }
            }
        }
        self.data = data;
        self.cols -= 1;
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    pub fn select_columns(&self, idx: &[usize]) -> Matrix {
        let cols: Vec<Vec<Poly>> = idx.iter().map(|&j| self.column(j)).collect();
        Matrix::from_columns(&self.ring, self.rows, &cols)
    }

    /// Determinant by Bareiss fraction-free elimination with exact division;
    /// cofactor expansion for small sizes.
    pub fn det(&self) -> Result<Poly> {
        if self.rows != self.cols {
            return Err(Error::Input("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Poly::one(&self.ring));
        }
        if n <= 3 {
            return Ok(self.det_cofactor());
        }
        let mut a: Vec<Vec<Poly>> = (0..n).map(|i| self.row(i)).collect();
        let mut prev = Poly::one(&self.ring);
        let mut sign = false;
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(p) => {
                        a.swap(k, p);
                        sign = !sign;
                    }
                    None => return Ok(Poly::zero(&self.ring)),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                    a[i][j] = exact_div(&num, &prev)?;
                }
                a[i][k] = Poly::zero(&self.ring);
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        Ok(if sign { -d } else { d })
    }

    fn det_cofactor(&self) -> Poly {
        let n = self.rows;
        match n {
            1 => self.get(0, 0).clone(),
            2 => &(self.get(0, 0) * self.get(1, 1)) - &(self.get(0, 1) * self.get(1, 0)),
            _ => {
                let mut acc = Poly::zero(&self.ring);
                for j in 0..n {
                    let e = self.get(0, j);
                    if e.is_zero() {
                        continue;
                    }
                    let mut minor = self.clone();
                    minor.remove_row(0);
                    minor.remove_col(j);
                    let t = e * &minor.det_cofactor();
                    acc = if j % 2 == 0 { &acc + &t } else { &acc - &t };
                }
                acc
            }
        }
    }

    /// Maximal minors of a `(k+1) x k` matrix, signed so that
    /// `[m_1 .. m_(k+1)] * self = 0`.
    pub fn signed_maximal_minors(&self) -> Result<Vec<Poly>> {
        if self.rows != self.cols + 1 {
            return Err(Error::Input("expected a (k+1) x k matrix".into()));
        }
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut m = self.clone();
            m.remove_row(i);
            let d = m.det()?;
            out.push(if i % 2 == 0 { d } else { -d });
        }
        Ok(out)
    }
}

/// `num / den`, failing unless the division is exact.
pub fn exact_div(num: &Poly, den: &Poly) -> Result<Poly> {
    if den.is_zero() {
        return Err(Error::Input("division by zero polynomial".into()));
    }
    if num.is_zero() {
        return Ok(Poly::zero(num.ring()));
    }
    if den.is_constant() {
        return Ok(num.scale(&den.lc().inv()));
    }
    let r = Reducer::new(den.clone());
    let (q, rem) = divide(num, std::slice::from_ref(&r));
    if !rem.is_zero() {
        return Err(Error::Inconsistency("inexact polynomial division".into()));
    }
    // The reducer is monic; undo the normalization.
    Ok(q[0].scale(&den.lc().inv()))
}

/// Quotient if `den` divides `num`, else `None`.
pub fn try_div(num: &Poly, den: &Poly) -> Option<Poly> {
    exact_div(num, den).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::{parse_list, parse_poly};
    use crate::scalar::Field;

    #[test]
    fn bareiss_agrees_with_cofactors() {
        let r = Ring::polynomial(3, Field::Rational);
        let e = parse_list(
            "x1, x2, 0, x3, x2, x1 + x3, 1, 0, 0, x3^2, x1, x2, x1*x2, 0, x3, 2",
            &r,
        )
        .unwrap();
        let rows: Vec<Vec<Poly>> = e.chunks(4).map(|c| c.to_vec()).collect();
        let m = Matrix::from_rows(&r, rows);
        let bareiss = m.det().unwrap();
        // Expand along the first row by hand through 3x3 cofactors.
        let mut acc = Poly::zero(&r);
        for j in 0..4 {
            let mut minor = m.clone();
            minor.remove_row(0);
            minor.remove_col(j);
            let t = m.get(0, j) * &minor.det_cofactor();
            acc = if j % 2 == 0 { &acc + &t } else { &acc - &t };
        }
        assert_eq!(bareiss, acc);
    }

    #[test]
    fn exact_division() {
        let r = Ring::polynomial(2, Field::Rational);
        let a = parse_poly("2*x1^2 - 2*x2^2", &r).unwrap();
        let b = parse_poly("2*x1 + 2*x2", &r).unwrap();
        assert_eq!(exact_div(&a, &b).unwrap(), parse_poly("x1 - x2", &r).unwrap());
        assert!(try_div(&b, &a).is_none());
    }

    #[test]
    fn minors_annihilate() {
        let r = Ring::polynomial(2, Field::Rational);
        let e = parse_list("x1^2, x2^4, x1*x2, x1^3*x2 + x1^4, x2^2, x1*x2^3", &r).unwrap();
        let m = Matrix::from_rows(&r, e.chunks(2).map(|c| c.to_vec()).collect());
        let minors = m.signed_maximal_minors().unwrap();
        let row = Matrix::from_rows(&r, vec![minors]);
        assert!(row.mul(&m).unwrap().is_zero());
    }
}
