//! Dense exact linear algebra over a `FieldElement` scalar.
//!
//! All routines assume every entry lives in one common field (rationals
//! promote into a cyclotomic order on contact). Reduced row echelon form is
//! the canonical form used for subspace identity throughout the crate.

use crate::error::Error;
use crate::field::FieldElement;

pub type Row = Vec<FieldElement>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    pub rows: Vec<Row>,
    pub cols: usize,
}

impl Matrix {
    pub fn new(rows: Vec<Row>, cols: usize) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == cols));
        Matrix { rows, cols }
    }

    pub fn zero_rows(cols: usize) -> Self {
        Matrix { rows: Vec::new(), cols }
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { FieldElement::one() } else { FieldElement::zero() })
                    .collect()
            })
            .collect();
        Matrix { rows, cols: n }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    /// In-place reduced row echelon form; returns pivot column indices.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            let Some(p) = (r..self.nrows()).find(|&i| !self.rows[i][c].is_zero()) else {
                continue;
            };
            self.rows.swap(r, p);
            let inv = self.rows[r][c].inv().expect("pivot is nonzero");
            for j in c..self.cols {
                self.rows[r][j] = self.rows[r][j].mul(&inv).unwrap();
            }
            for i in 0..self.nrows() {
                if i != r && !self.rows[i][c].is_zero() {
                    let f = self.rows[i][c].clone();
                    for j in c..self.cols {
                        let t = self.rows[r][j].mul(&f).unwrap();
                        self.rows[i][j] = self.rows[i][j].sub(&t).unwrap();
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == self.nrows() {
                break;
            }
        }
        self.rows.truncate(r);
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right nullspace {x : M·x = 0}, one solution per row.
    pub fn nullspace(&self) -> Matrix {
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivot_set.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![FieldElement::zero(); self.cols];
            v[f] = FieldElement::one();
            for (ri, &pc) in pivots.iter().enumerate() {
                // Pivot row: x_pc + Σ_free coeff·x_f = 0.
                v[pc] = m.rows[ri][f].neg();
            }
            basis.push(v);
        }
        Matrix::new(basis, self.cols)
    }

    /// Solve xᵀ·M = bᵀ for x given the rows of M as a spanning set; returns
    /// coordinates of b in terms of the rows, if b lies in the row space.
    pub fn express_in_rows(&self, b: &Row) -> Option<Row> {
        // Transposed system: columns are the given rows.
        let n = self.nrows();
        let mut aug = Vec::with_capacity(self.cols);
        for c in 0..self.cols {
            let mut row: Row = (0..n).map(|r| self.rows[r][c].clone()).collect();
            row.push(b[c].clone());
            aug.push(row);
        }
        let mut m = Matrix::new(aug, n + 1);
        let pivots = m.rref();
        if pivots.contains(&n) {
            return None; // inconsistent: b not in the row space
        }
        let mut x = vec![FieldElement::zero(); n];
        for (ri, &pc) in pivots.iter().enumerate() {
            x[pc] = m.rows[ri][n].clone();
        }
        Some(x)
    }

    pub fn mul_matrix(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.nrows());
        let mut rows = Vec::with_capacity(self.nrows());
        for r in &self.rows {
            let mut out = vec![FieldElement::zero(); other.cols];
            for (k, a) in r.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    if !other.rows[k][j].is_zero() {
                        let t = a.mul(&other.rows[k][j]).unwrap();
                        out[j] = out[j].add(&t).unwrap();
                    }
                }
            }
            rows.push(out);
        }
        Matrix::new(rows, other.cols)
    }

    /// Inverse of a square matrix.
    pub fn inverse(&self) -> Result<Matrix, Error> {
        let n = self.nrows();
        assert_eq!(n, self.cols);
        let mut aug = Vec::with_capacity(n);
        for (i, r) in self.rows.iter().enumerate() {
            let mut row = r.clone();
            for j in 0..n {
                row.push(if i == j { FieldElement::one() } else { FieldElement::zero() });
            }
            aug.push(row);
        }
        let mut m = Matrix::new(aug, 2 * n);
        let pivots = m.rref();
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return Err(Error::Internal("matrix is singular".into()));
        }
        let rows = m.rows.into_iter().map(|r| r[n..].to_vec()).collect();
        Ok(Matrix::new(rows, n))
    }
}

pub fn dot(a: &Row, b: &Row) -> FieldElement {
    let mut acc = FieldElement::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc = acc.add(&x.mul(y).unwrap()).unwrap();
        }
    }
    acc
}

pub fn scale_row(v: &Row, c: &FieldElement) -> Row {
    v.iter().map(|x| x.mul(c).unwrap()).collect()
}

pub fn add_rows(a: &Row, b: &Row) -> Row {
    a.iter().zip(b).map(|(x, y)| x.add(y).unwrap()).collect()
}

pub fn sub_rows(a: &Row, b: &Row) -> Row {
    a.iter().zip(b).map(|(x, y)| x.sub(y).unwrap()).collect()
}

pub fn zero_row(n: usize) -> Row {
    vec![FieldElement::zero(); n]
}

pub fn is_zero_row(v: &Row) -> bool {
    v.iter().all(|x| x.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fe(n: i64) -> FieldElement {
        FieldElement::integer(n)
    }

    #[test]
    fn rref_and_rank() {
        let mut m = Matrix::new(
            vec![
                vec![fe(1), fe(2), fe(3)],
                vec![fe(2), fe(4), fe(6)],
                vec![fe(0), fe(1), fe(1)],
            ],
            3,
        );
        let pivots = m.rref();
        assert_eq!(pivots, vec![0, 1]);
        assert_eq!(m.nrows(), 2);
    }

    #[test]
    fn nullspace_annihilates() {
        let m = Matrix::new(vec![vec![fe(1), fe(1), fe(1)], vec![fe(1), fe(2), fe(3)]], 3);
        let ns = m.nullspace();
        assert_eq!(ns.nrows(), 1);
        for r in &m.rows {
            assert!(dot(r, &ns.rows[0]).is_zero());
        }
    }

    #[test]
    fn express_and_inverse() {
        let m = Matrix::new(vec![vec![fe(1), fe(1)], vec![fe(0), fe(1)]], 2);
        let x = m.express_in_rows(&vec![fe(2), fe(3)]).unwrap();
        assert_eq!(x, vec![fe(2), fe(1)]);
        let inv = m.inverse().unwrap();
        let prod = m.mul_matrix(&inv);
        assert_eq!(prod, Matrix::identity(2));
    }
}
