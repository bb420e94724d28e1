//! Dense complex matrices in row-major order, with the handful of products
//! the correlation pipeline needs.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::ONE;
        }
        m
    }

    /// Matrix with every entry equal to one.
    pub fn ones(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::ONE; rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds from nested row slices; rows must have equal lengths.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self {
            rows: r,
            cols: c,
            data: rows.concat(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    /// Conjugate transpose.
    pub fn hermitian_transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(Complex64::conj).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "add: shape mismatch");
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "sub: shape mismatch");
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }

    /// Matrix product; panics on incompatible shapes.
    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "mul: inner dimension mismatch");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let lhs_row = self.row(i);
            let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for (k, &lik) in lhs_row.iter().enumerate() {
                if lik == Complex64::ZERO {
                    continue;
                }
                let rhs_row = rhs.row(k);
                for (o, &r) in out_row.iter_mut().zip(rhs_row) {
                    *o += lik * r;
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square(), "trace: non-square matrix");
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of the difference.
    pub fn max_abs_diff(&self, rhs: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest modulus of `a[i][j] - conj(a[j][i])`; zero for a Hermitian matrix.
    pub fn hermitian_deviation(&self) -> f64 {
        assert!(self.is_square(), "hermitian_deviation: non-square matrix");
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    /// Returns `(A + A^H)/2`.
    pub fn hermitize(&self) -> Self {
        assert!(self.is_square(), "hermitize: non-square matrix");
        Self::from_fn(self.rows, self.cols, |r, c| {
            0.5 * (self[(r, c)] + self[(c, r)].conj())
        })
    }

    /// Checks Hermitian-ness against an absolute tolerance scaled by the
    /// largest entry (at least 1).
    pub fn check_hermitian(&self, tol: f64) -> Result<()> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "expected square matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        let scale = self.max_abs().max(1.0);
        let dev = self.hermitian_deviation();
        if dev > tol * scale {
            return Err(Error::NotHermitian { deviation: dev, tol: tol * scale });
        }
        Ok(())
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

/// Kronecker product: block `(i, j)` of the result equals `lhs[i][j] * rhs`.
pub fn kronecker(lhs: &ComplexMatrix, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
    if lhs.rows() == 0 || lhs.cols() == 0 || rhs.rows() == 0 || rhs.cols() == 0 {
        return Err(Error::DimensionMismatch("kronecker: empty operand".into()));
    }
    let rows = lhs
        .rows()
        .checked_mul(rhs.rows())
        .ok_or_else(|| Error::DimensionMismatch("kronecker: row count overflow".into()))?;
    let cols = lhs
        .cols()
        .checked_mul(rhs.cols())
        .ok_or_else(|| Error::DimensionMismatch("kronecker: column count overflow".into()))?;
    rows.checked_mul(cols)
        .ok_or_else(|| Error::DimensionMismatch("kronecker: entry count overflow".into()))?;

    let mut out = ComplexMatrix::zeros(rows, cols);
    for i in 0..lhs.rows() {
        for j in 0..lhs.cols() {
            let lij = lhs[(i, j)];
            for p in 0..rhs.rows() {
                for q in 0..rhs.cols() {
                    out[(i * rhs.rows() + p, j * rhs.cols() + q)] = lij * rhs[(p, q)];
                }
            }
        }
    }
    Ok(out)
}

/// Entrywise (Hadamard) product.
pub fn hadamard(lhs: &ComplexMatrix, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
    if (lhs.rows(), lhs.cols()) != (rhs.rows(), rhs.cols()) {
        return Err(Error::DimensionMismatch(format!(
            "hadamard: {}x{} vs {}x{}",
            lhs.rows(),
            lhs.cols(),
            rhs.rows(),
            rhs.cols()
        )));
    }
    Ok(ComplexMatrix {
        rows: lhs.rows(),
        cols: lhs.cols(),
        data: lhs.data.iter().zip(&rhs.data).map(|(a, b)| a * b).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn kronecker_identity_case() {
        let i2 = ComplexMatrix::identity(2);
        let k = kronecker(&i2, &i2).unwrap();
        assert_eq!(k, ComplexMatrix::identity(4));
    }

    #[test]
    fn kronecker_ones_tiles_the_block() {
        // 1_2 (x) [[1, 0.1], [0.1, 1]] tiles the x-pol block into every 2x2 block.
        let block = ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(0.1, 0.0)],
            vec![c(0.1, 0.0), c(1.0, 0.0)],
        ]);
        let k = kronecker(&ComplexMatrix::ones(2, 2), &block).unwrap();
        assert_eq!(k.rows(), 4);
        for bi in 0..2 {
            for bj in 0..2 {
                for p in 0..2 {
                    for q in 0..2 {
                        assert_eq!(k[(2 * bi + p, 2 * bj + q)], block[(p, q)]);
                    }
                }
            }
        }
    }

    #[test]
    fn kronecker_matches_definition_bruteforce() {
        // brute-force oracle over all index pairs
        let a = ComplexMatrix::from_fn(2, 2, |r, c_| c(r as f64 + 0.5, c_ as f64 - 1.0));
        let b = ComplexMatrix::from_fn(3, 3, |r, c_| c(1.0 / (r as f64 + 1.0), c_ as f64));
        let k = kronecker(&a, &b).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                let expect = a[(i / 3, j / 3)] * b[(i % 3, j % 3)];
                assert_eq!(k[(i, j)], expect);
            }
        }
    }

    #[test]
    fn hadamard_ones_and_zero() {
        let a = ComplexMatrix::from_fn(3, 2, |r, c_| c(r as f64, c_ as f64));
        assert_eq!(hadamard(&a, &ComplexMatrix::ones(3, 2)).unwrap(), a);
        let z = ComplexMatrix::zeros(3, 2);
        assert_eq!(hadamard(&a, &z).unwrap(), z);
        assert!(hadamard(&a, &ComplexMatrix::zeros(2, 2)).is_err());
    }

    #[test]
    fn hadamard_matches_scalar_products() {
        let a = ComplexMatrix::from_rows(&[vec![c(1.0, 2.0), c(0.5, 0.0)], vec![c(0.0, -1.0), c(3.0, 3.0)]]);
        let b = ComplexMatrix::from_rows(&[vec![c(2.0, 0.0), c(1.0, 1.0)], vec![c(0.5, 0.5), c(-1.0, 0.0)]]);
        let h = hadamard(&a, &b).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(h[(i, j)], a[(i, j)] * b[(i, j)]);
            }
        }
    }

    #[test]
    fn mul_small_known_case() {
        let a = ComplexMatrix::from_rows(&[vec![c(1.0, 0.0), c(0.0, 1.0)]]);
        let b = ComplexMatrix::from_rows(&[vec![c(2.0, 0.0)], vec![c(0.0, -2.0)]]);
        let p = a.mul(&b);
        assert_eq!(p[(0, 0)], c(4.0, 0.0));
    }

    #[test]
    fn hermitian_helpers() {
        let m = ComplexMatrix::from_rows(&[vec![c(1.0, 0.0), c(0.5, 0.25)], vec![c(0.5, -0.25), c(2.0, 0.0)]]);
        assert!(m.hermitian_deviation() < 1e-15);
        m.check_hermitian(1e-9).unwrap();
        let skew = ComplexMatrix::from_rows(&[vec![c(1.0, 0.0), c(0.5, 0.25)], vec![c(0.9, -0.25), c(2.0, 0.0)]]);
        assert!(skew.check_hermitian(1e-9).is_err());
        assert!(skew.hermitize().hermitian_deviation() < 1e-15);
    }
}
