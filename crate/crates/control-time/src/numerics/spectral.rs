use nalgebra::{DMatrix, Schur, SymmetricEigen};
use num_complex::Complex64;

use super::matrix::{c64, ComplexMatrix};
use crate::error::{Error, Result};

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eigh(h: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let herm = h.hermitian_part();
    let eig = SymmetricEigen::new(herm.to_nalgebra());
    let n = h.dim();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Eigenphases in (−π, π] and orthonormal eigenvectors (columns) of a unitary matrix.
pub fn unitary_eig(u: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let n = u.dim();
    let m = u.to_nalgebra();
    let schur = Schur::try_new(m.clone(), f64::EPSILON, 10_000).unwrap_or_else(|| Schur::new(m));
    let (q, t) = schur.unpack();
    let phases = (0..n).map(|i| wrap_phase(t[(i, i)].arg())).collect();
    (phases, ComplexMatrix::from_nalgebra(&q))
}

/// Maps an angle into (−π, π].
pub fn wrap_phase(x: f64) -> f64 {
    use std::f64::consts::PI;
    let mut y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y -= 2.0 * PI;
    }
    y
}

/// `V diag(d) V†`.
pub fn reconstruct(v: &ComplexMatrix, d: &[Complex64]) -> ComplexMatrix {
    let n = v.dim();
    ComplexMatrix::from_fn(n, |i, j| (0..n).map(|k| v.get(i, k) * d[k] * v.get(j, k).conj()).sum())
}

/// Matrix exponential. Anti-Hermitian input goes through the Hermitian
/// eigendecomposition of `iA`; anything else through Padé scaling and squaring.
pub fn mat_exp(a: &ComplexMatrix) -> ComplexMatrix {
    let scale = a.max_abs().max(1.0);
    if a.anti_hermitian_residual() <= 64.0 * f64::EPSILON * scale {
        exp_anti_hermitian(a)
    } else {
        exp_general(a)
    }
}

pub fn exp_anti_hermitian(a: &ComplexMatrix) -> ComplexMatrix {
    let (lambda, v) = hermitian_eigh(&a.mul_i());
    let d: Vec<Complex64> = lambda.iter().map(|&l| Complex64::from_polar(1.0, -l)).collect();
    reconstruct(&v, &d)
}

pub fn exp_general(a: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_nalgebra(&a.to_nalgebra().exp())
}

/// Anti-Hermitian `C` with `e^C = U` and eigenphases in (−π, π].
pub fn principal_log_unitary(u: &ComplexMatrix, eq_tol: f64) -> Result<ComplexMatrix> {
    let residual = u.unitary_residual();
    if residual > eq_tol {
        return Err(Error::NotUnitary { residual });
    }
    let (phases, v) = unitary_eig(u);
    let d: Vec<Complex64> = phases.iter().map(|&p| c64(0.0, p)).collect();
    Ok(reconstruct(&v, &d).anti_hermitian_part())
}

pub fn frobenius_norm(a: &ComplexMatrix) -> f64 {
    a.frobenius_norm()
}

/// Largest singular value.
pub fn operator_norm(a: &ComplexMatrix) -> f64 {
    largest_singular_value(a.to_nalgebra())
}

fn largest_singular_value(m: DMatrix<Complex64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().iter().copied().fold(0.0, f64::max)
}

/// Operator norm of `X ↦ AX − XA` acting on D×D matrices with the Frobenius norm.
pub fn ad_operator_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let id = ComplexMatrix::identity(n);
    // Column-stacking: vec(AX) = (I⊗A) vec X, vec(XA) = (Aᵀ⊗I) vec X.
    let s = &id.kron(a) - &a.transpose().kron(&id);
    largest_singular_value(s.to_nalgebra())
}

/// State-free deviation `sqrt(tr(A²)/D − (tr A/D)²)` of a Hermitian matrix.
pub fn dev(a: &ComplexMatrix, eq_tol: f64) -> Result<f64> {
    let residual = a.hermitian_residual();
    if residual > eq_tol {
        return Err(Error::NotHermitian { residual });
    }
    Ok(dev_unchecked(a))
}

pub(crate) fn dev_unchecked(a: &ComplexMatrix) -> f64 {
    let n = a.dim() as f64;
    let shift = a.trace().re / n;
    let mut centered = a.hermitian_part();
    for i in 0..a.dim() {
        let z = centered.get(i, i);
        centered.set(i, i, z - shift);
    }
    centered.frobenius_norm() / n.sqrt()
}
