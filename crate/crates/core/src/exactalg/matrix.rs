use std::fmt;

use crate::error::{Error, Result};

use super::Scalar;

/// Dense row-major matrix over a [`Scalar`] field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

/// Result of row reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Echelon<S> {
    /// Reduced row echelon form, same shape as the input; zero rows last.
    pub matrix: Matrix<S>,
    pub rank: usize,
    /// Pivot column of each nonzero row.
    pub pivots: Vec<usize>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, S::one());
        }
        m
    }

    /// Builds from rows; `cols` fixes the width when `rows` is empty.
    pub fn from_rows(cols: usize, rows: Vec<Vec<S>>) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let nrows = rows.len();
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, found: row.len() });
            }
            data.extend(row);
        }
        Ok(Matrix { rows: nrows, cols, data })
    }

    /// Convenience for small literal matrices.
    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(cols, rows.iter().map(|r| r.iter().map(|&v| S::from_i64(v)).collect()).collect())
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &S {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: S) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[S] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[S]> {
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        self.row_iter().map(|r| r.to_vec()).collect()
    }

    /// Rows rendered with [`Scalar::to_exact_string`].
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.row_iter().map(|r| r.iter().map(Scalar::to_exact_string).collect()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    /// First `n` rows.
    pub fn truncate_rows(mut self, n: usize) -> Self {
        let n = n.min(self.rows);
        self.data.truncate(n * self.cols);
        self.rows = n;
        self
    }

    /// `self` on top of `other`.
    pub fn stack(&self, other: &Matrix<S>) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.cols });
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(Matrix { rows: self.rows + other.rows, cols: self.cols, data })
    }

    pub fn mul(&self, rhs: &Matrix<S>) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: rhs.rows });
        }
        let mut out = Matrix::<S>::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let v = out.get(r, c).clone() + a.clone() * rhs.get(k, c).clone();
                    out.set(r, c, v);
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn left_mul_vec(&self, v: &[S]) -> Result<Vec<S>> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, found: v.len() });
        }
        let mut out = vec![S::zero(); self.cols];
        for (k, a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (c, o) in out.iter_mut().enumerate() {
                *o = o.clone() + a.clone() * self.get(k, c).clone();
            }
        }
        Ok(out)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// row[target] -= factor * row[source], starting at column `from`.
    fn eliminate(&mut self, target: usize, source: usize, factor: &S, from: usize) {
        for c in from..self.cols {
            let s = self.get(source, c);
            if s.is_zero() {
                continue;
            }
            let v = self.get(target, c).clone() - factor.clone() * s.clone();
            self.set(target, c, v);
        }
    }

    /// Canonical reduced row echelon form by Gauss-Jordan elimination.
    pub fn rref(&self) -> Echelon<S> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = S::one() / m.get(row, col).clone();
            for c in col..m.cols {
                let v = m.get(row, c).clone() * inv.clone();
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r != row && !m.get(r, col).is_zero() {
                    let f = m.get(r, col).clone();
                    m.eliminate(r, row, &f, col);
                }
            }
            pivots.push(col);
            row += 1;
        }
        Echelon { rank: pivots.len(), matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    pub fn determinant(&self) -> Result<S> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch { expected: self.rows, found: self.cols });
        }
        let mut m = self.clone();
        let mut det = S::one();
        for col in 0..m.cols {
            let Some(p) = (col..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                return Ok(S::zero());
            };
            if p != col {
                m.swap_rows(col, p);
                det = -det;
            }
            let pivot = m.get(col, col).clone();
            det = det * pivot.clone();
            for r in col + 1..m.rows {
                if !m.get(r, col).is_zero() {
                    let f = m.get(r, col).clone() / pivot.clone();
                    m.eliminate(r, col, &f, col);
                }
            }
        }
        Ok(det)
    }

    /// Basis (as rows) of the right kernel `{x : self * x = 0}`.
    pub fn null_space(&self) -> Matrix<S> {
        let ech = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &ech.pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![S::zero(); self.cols];
            v[free] = S::one();
            for (i, &p) in ech.pivots.iter().enumerate() {
                v[p] = -ech.matrix.get(i, free).clone();
            }
            basis.push(v);
        }
        Matrix::from_rows(self.cols, basis).expect("kernel rows have matrix width")
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch { expected: self.rows, found: self.cols });
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, n + r, S::one());
        }
        let ech = aug.rref();
        if ech.pivots.iter().take(n).enumerate().any(|(i, &p)| p != i) || ech.rank < n {
            return Err(Error::Singular);
        }
        let mut inv = Matrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, ech.matrix.get(r, n + c).clone());
            }
        }
        Ok(inv)
    }
}

impl<S: fmt::Debug> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for row in self.data.chunks(self.cols.max(1)).take(self.rows) {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Gf2, Gf3, Rational};
    use num_traits::Zero;
    use proptest::prelude::*;

    #[test]
    fn rref_identity_and_zero() {
        let id = Matrix::<Rational>::identity(4);
        let e = id.rref();
        assert_eq!(e.matrix, id);
        assert_eq!(e.rank, 4);
        let z = Matrix::<Rational>::zeros(3, 5);
        let e = z.rref();
        assert_eq!(e.matrix, z);
        assert_eq!(e.rank, 0);
    }

    #[test]
    fn rank_depends_on_field() {
        let rows: &[&[i64]] = &[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]];
        assert_eq!(Matrix::<Gf2>::from_i64(rows).unwrap().rank(), 2);
        assert_eq!(Matrix::<Rational>::from_i64(rows).unwrap().rank(), 3);
    }

    #[test]
    fn rref_known_form() {
        let m = Matrix::<Rational>::from_i64(&[&[2, 4, 2], &[4, 8, 0], &[6, 12, 0]]).unwrap();
        let e = m.rref();
        assert_eq!(e.matrix, Matrix::from_i64(&[&[1, 2, 0], &[0, 0, 1], &[0, 0, 0]]).unwrap());
        assert_eq!(e.pivots, vec![0, 2]);
    }

    #[test]
    fn determinant_and_inverse() {
        let m = Matrix::<Rational>::from_i64(&[&[2, 1], &[7, 4]]).unwrap();
        assert_eq!(m.determinant().unwrap(), Rational::from_i64(1));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(2));
        let sing = Matrix::<Gf3>::from_i64(&[&[1, 2], &[2, 1]]).unwrap();
        assert!(sing.determinant().unwrap().is_zero());
        assert_eq!(sing.inverse(), Err(Error::Singular));
    }

    #[test]
    fn shape_errors() {
        assert!(Matrix::<Rational>::from_rows(2, vec![vec![Rational::from_i64(1)]]).is_err());
        let a = Matrix::<Rational>::zeros(2, 3);
        assert!(a.mul(&a).is_err());
        assert!(a.determinant().is_err());
        assert!(a.left_mul_vec(&[Rational::from_i64(1)]).is_err());
    }

    #[test]
    fn null_space_is_kernel() {
        let m = Matrix::<Rational>::from_i64(&[&[1, 2, 3, 4], &[2, 4, 6, 9]]).unwrap();
        let k = m.null_space();
        assert_eq!(k.nrows(), 2);
        let prod = m.mul(&k.transpose()).unwrap();
        assert!(prod.row_iter().flatten().all(|v| v.is_zero()));
        // Empty matrix: everything is in the kernel.
        let empty = Matrix::<Gf2>::zeros(0, 3);
        assert_eq!(empty.null_space(), Matrix::identity(3));
    }

    fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..5, 1usize..6).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-3i64..=3, c), r))
    }

    proptest! {
        #[test]
        fn rref_is_canonical_under_row_operations(rows in small_matrix(), seed in any::<u64>()) {
            let m = Matrix::<Rational>::from_rows(rows[0].len(), rows.iter().map(|r| r.iter().map(|&v| Rational::from_i64(v)).collect()).collect()).unwrap();
            // Apply an invertible lower-triangular recombination and a row rotation.
            let n = m.nrows();
            let mut t = Matrix::<Rational>::identity(n);
            let mut x = seed;
            for i in 0..n {
                for j in 0..i {
                    x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    t.set(i, j, Rational::from_i64((x >> 60) as i64 - 8));
                }
            }
            let mixed = t.mul(&m).unwrap();
            let mut rotated = mixed.to_rows();
            rotated.rotate_left((seed % n as u64) as usize);
            let rotated = Matrix::from_rows(m.ncols(), rotated).unwrap();
            prop_assert_eq!(rotated.rref().matrix, m.rref().matrix);
        }

        #[test]
        fn rank_nullity(rows in small_matrix()) {
            let m = Matrix::<Gf3>::from_rows(rows[0].len(), rows.iter().map(|r| r.iter().map(|&v| Gf3::from_i64(v)).collect()).collect()).unwrap();
            prop_assert_eq!(m.rank() + m.null_space().nrows(), m.ncols());
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }
    }
}
