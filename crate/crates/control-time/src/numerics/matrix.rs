use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense square complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![Complex64::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    /// Builds from a row-major vector; fails unless `data.len() == dim * dim`.
    pub fn from_row_major(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, found: data.len() });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("non-finite matrix entry".into()));
        }
        Ok(Self { dim, data })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: row.len() });
            }
            data.extend_from_slice(row);
        }
        Self::from_row_major(dim, data)
    }

    /// Rows given as real parts only.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows.iter().map(|r| r.iter().map(|&x| c64(x, 0.0)).collect()).collect();
        Self::from_rows(&rows)
    }

    pub fn from_diag(diag: &[Complex64]) -> Self {
        let dim = diag.len();
        let mut m = Self::zeros(dim);
        for (i, &z) in diag.iter().enumerate() {
            m.data[i * dim + i] = z;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, z: Complex64) {
        self.data[i * self.dim + j] = z;
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        self.data.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i))
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn scale_re(&self, s: f64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|z| z * s).collect() }
    }

    /// `self * i`.
    pub fn mul_i(&self) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|z| c64(-z.im, z.re)).collect() }
    }

    /// `self * (-i)`.
    pub fn mul_neg_i(&self) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|z| c64(z.im, -z.re)).collect() }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matmul dimension mismatch");
        let n = self.dim;
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            let row = &self.data[i * n..(i + 1) * n];
            let out_row = &mut out[i * n..(i + 1) * n];
            for (k, &a) in row.iter().enumerate() {
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let other_row = &other.data[k * n..(k + 1) * n];
                for (o, &b) in out_row.iter_mut().zip(other_row) {
                    *o += a * b;
                }
            }
        }
        Self { dim: n, data: out }
    }

    /// `AB - BA` without dimension checking.
    pub fn commutator_unchecked(&self, other: &Self) -> Self {
        &self.matmul(other) - &other.matmul(self)
    }

    pub fn frobenius_norm_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.frobenius_norm_sqr().sqrt()
    }

    /// Real Hilbert–Schmidt inner product `Re tr(X† Y)`.
    pub fn inner_re(&self, other: &Self) -> f64 {
        self.data.iter().zip(&other.data).map(|(x, y)| x.re * y.re + x.im * y.im).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn hermitian_residual(&self) -> f64 {
        (self - &self.adjoint()).max_abs()
    }

    pub fn anti_hermitian_residual(&self) -> f64 {
        (self + &self.adjoint()).max_abs()
    }

    pub fn unitary_residual(&self) -> f64 {
        (&self.adjoint().matmul(self) - &Self::identity(self.dim)).max_abs()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_residual() <= tol
    }

    pub fn is_anti_hermitian(&self, tol: f64) -> bool {
        self.anti_hermitian_residual() <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitary_residual() <= tol
    }

    /// `(A - A†)/2`.
    pub fn anti_hermitian_part(&self) -> Self {
        (self - &self.adjoint()).scale_re(0.5)
    }

    /// `(A + A†)/2`.
    pub fn hermitian_part(&self) -> Self {
        (self + &self.adjoint()).scale_re(0.5)
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (n, m) = (self.dim, other.dim);
        Self::from_fn(n * m, |i, j| self.get(i / m, j / m) * other.get(i % m, j % m))
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim);
        self.data.chunks(self.dim).map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.dim, self.dim, &self.data)
    }

    pub fn from_nalgebra(m: &DMatrix<Complex64>) -> Self {
        assert_eq!(m.nrows(), m.ncols());
        Self::from_fn(m.nrows(), |i, j| m[(i, j)])
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.dim == other.dim && (self - other).max_abs() <= tol
    }
}

/// `AB - BA`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    Ok(a.commutator_unchecked(b))
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for row in self.data.chunks(self.dim) {
            let cells: Vec<String> = row.iter().map(|z| format!("{:+.6e}{:+.6e}i", z.re, z.im)).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "add dimension mismatch");
        ComplexMatrix { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "sub dimension mismatch");
        ComplexMatrix { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.scale_re(-1.0)
    }
}

impl AddAssign<&ComplexMatrix> for ComplexMatrix {
    fn add_assign(&mut self, rhs: &ComplexMatrix) {
        assert_eq!(self.dim, rhs.dim, "add dimension mismatch");
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
    }
}

impl SubAssign<&ComplexMatrix> for ComplexMatrix {
    fn sub_assign(&mut self, rhs: &ComplexMatrix) {
        assert_eq!(self.dim, rhs.dim, "sub dimension mismatch");
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a -= b;
        }
    }
}

impl ComplexMatrix {
    /// `self += s * other`.
    pub fn axpy(&mut self, s: f64, other: &ComplexMatrix) {
        assert_eq!(self.dim, other.dim, "axpy dimension mismatch");
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b * s;
        }
    }
}

/// Pauli matrices and other fixed operators.
pub mod pauli {
    use super::{c64, ComplexMatrix};

    pub fn x() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap()
    }

    pub fn y() -> ComplexMatrix {
        ComplexMatrix::from_rows(&[vec![c64(0.0, 0.0), c64(0.0, -1.0)], vec![c64(0.0, 1.0), c64(0.0, 0.0)]]).unwrap()
    }

    pub fn z() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]).unwrap()
    }
}
