//! Dense complex matrix kernel: norms, spectral decompositions, exponential,
//! principal logarithm, commutators and the state-free deviation.

mod matrix;
mod spectral;

pub use matrix::{c64, commutator, pauli, ComplexMatrix};
pub(crate) use spectral::dev_unchecked;
pub use spectral::{
    ad_operator_norm, dev, exp_anti_hermitian, exp_general, frobenius_norm, hermitian_eigh, mat_exp, operator_norm,
    principal_log_unitary, reconstruct, unitary_eig, wrap_phase,
};

use crate::error::{Error, Result};

/// Residual thresholds used throughout the crate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Operator-equality residual.
    pub eq_tol: f64,
    /// Algebra-membership residual.
    pub algebra_tol: f64,
    /// Iteration stopping threshold.
    pub convergence_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { eq_tol: 1e-10, algebra_tol: 1e-8, convergence_tol: 1e-12 }
    }
}

impl Tolerances {
    pub fn new(eq_tol: f64, algebra_tol: f64, convergence_tol: f64) -> Result<Self> {
        let t = Self { eq_tol, algebra_tol, convergence_tol };
        for (name, v) in [("eq_tol", eq_tol), ("algebra_tol", algebra_tol), ("conv_tol", convergence_tol)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidTolerance(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(t)
    }

    /// Checks `eq_tol > ε·D²` for matrices of dimension `dim`.
    pub fn validate_for_dim(&self, dim: usize) -> Result<()> {
        let floor = f64::EPSILON * (dim * dim) as f64;
        if self.eq_tol <= floor {
            return Err(Error::InvalidTolerance(format!("eq_tol {} must exceed {floor:e} for D = {dim}", self.eq_tol)));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    fn taylor_exp(a: &ComplexMatrix) -> ComplexMatrix {
        // Oracle: scaled Taylor series followed by repeated squaring.
        let s = (a.frobenius_norm().log2().ceil().max(0.0) as i32) + 4;
        let b = a.scale_re(0.5f64.powi(s));
        let mut term = ComplexMatrix::identity(a.dim());
        let mut sum = term.clone();
        for k in 1..30 {
            term = term.matmul(&b).scale_re(1.0 / k as f64);
            sum += &term;
        }
        for _ in 0..s {
            sum = sum.matmul(&sum);
        }
        sum
    }

    fn sample_anti_hermitian(dim: usize, seed: u64) -> ComplexMatrix {
        crate::random::anti_hermitian(&mut crate::random::rng(seed), dim, 1.0)
    }

    #[test]
    fn frobenius_examples() {
        assert!((frobenius_norm(&ComplexMatrix::identity(3)) - 3f64.sqrt()).abs() < 1e-15);
        assert_eq!(frobenius_norm(&ComplexMatrix::zeros(4)), 0.0);
        let a = ComplexMatrix::from_diag(&[c64(0.0, 1.0), c64(0.0, -1.0)]);
        assert!((frobenius_norm(&a) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn operator_norm_examples() {
        assert!((operator_norm(&pauli::x()) - 1.0).abs() < 1e-14);
        let a = ComplexMatrix::from_diag(&[c64(0.0, 3.0), c64(0.0, 1.0)]);
        assert!((operator_norm(&a) - 3.0).abs() < 1e-14);
    }

    #[test]
    fn operator_norm_matches_power_iteration() {
        let a = crate::random::general(&mut crate::random::rng(5), 4);
        // Oracle: power iteration on A†A.
        let g = a.adjoint().matmul(&a);
        let mut v = vec![c64(1.0, 0.3); 4];
        for _ in 0..2000 {
            let w = g.apply(&v);
            let n: f64 = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            v = w.iter().map(|z| z / n).collect();
        }
        let rayleigh: f64 = g.apply(&v).iter().zip(&v).map(|(a, b)| (b.conj() * a).re).sum();
        let op = operator_norm(&a);
        assert!((op - rayleigh.sqrt()).abs() < 1e-10);
        let f = a.frobenius_norm();
        assert!(op <= f + 1e-14 && f <= 2.0 * op + 1e-14);
    }

    #[test]
    fn ad_norm_examples() {
        let a = ComplexMatrix::from_diag(&[c64(0.0, 1.0), c64(0.0, -1.0)]);
        assert!((ad_operator_norm(&a) - 2.0).abs() < 1e-13);
        assert!(ad_operator_norm(&ComplexMatrix::identity(3).mul_i()) < 1e-14);
    }

    #[test]
    fn ad_norm_of_normal_matrix_is_max_eigen_gap() {
        let a = sample_anti_hermitian(3, 11);
        let (lambda, _) = hermitian_eigh(&a.mul_i());
        let gap = lambda[lambda.len() - 1] - lambda[0];
        assert!((ad_operator_norm(&a) - gap).abs() < 1e-12);
        assert!(ad_operator_norm(&a) <= 2.0 * operator_norm(&a) + 1e-13);
    }

    #[test]
    fn exp_examples() {
        assert!(mat_exp(&ComplexMatrix::zeros(3)).approx_eq(&ComplexMatrix::identity(3), 1e-15));
        let a = pauli::z().scale(c64(0.0, -PI / 2.0));
        let expected = ComplexMatrix::from_diag(&[c64(0.0, -1.0), c64(0.0, 1.0)]);
        assert!(mat_exp(&a).approx_eq(&expected, 1e-15));
    }

    #[test]
    fn exp_matches_taylor_oracle() {
        for seed in 0..5 {
            let a = sample_anti_hermitian(4, seed).scale_re(3.0);
            assert!(mat_exp(&a).approx_eq(&taylor_exp(&a), 1e-12));
            let g = crate::random::general(&mut crate::random::rng(seed + 100), 3);
            assert!(mat_exp(&g).approx_eq(&taylor_exp(&g), 1e-11));
        }
    }

    #[test]
    fn exp_inverse_identity() {
        let a = sample_anti_hermitian(3, 2);
        let p = mat_exp(&a).matmul(&mat_exp(&a.scale_re(-1.0)));
        assert!(p.approx_eq(&ComplexMatrix::identity(3), 1e-12));
    }

    #[test]
    fn log_examples() {
        let tol = Tolerances::default().eq_tol;
        let z = principal_log_unitary(&ComplexMatrix::identity(2), tol).unwrap();
        assert!(z.max_abs() < 1e-15);
        let u =
            ComplexMatrix::from_diag(&[Complex64::from_polar(1.0, PI / 3.0), Complex64::from_polar(1.0, -PI / 3.0)]);
        let expected = ComplexMatrix::from_diag(&[c64(0.0, PI / 3.0), c64(0.0, -PI / 3.0)]);
        assert!(principal_log_unitary(&u, tol).unwrap().approx_eq(&expected, 1e-14));
        let bad = ComplexMatrix::identity(2).scale_re(2.0);
        assert!(matches!(principal_log_unitary(&bad, tol), Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn log_of_phase_minus_one_is_plus_pi() {
        let l = principal_log_unitary(&ComplexMatrix::identity(2).scale_re(-1.0), 1e-10).unwrap();
        assert!(l.approx_eq(&ComplexMatrix::identity(2).scale(c64(0.0, PI)), 1e-14));
    }

    #[test]
    fn commutator_examples() {
        let c = commutator(&pauli::x(), &pauli::y()).unwrap();
        assert!(c.approx_eq(&pauli::z().scale(c64(0.0, 2.0)), 1e-15));
        let a = sample_anti_hermitian(3, 1);
        assert_eq!(commutator(&a, &a).unwrap().max_abs(), 0.0);
        assert!(commutator(&a, &ComplexMatrix::identity(3)).unwrap().max_abs() < 1e-15);
        assert!(matches!(commutator(&a, &ComplexMatrix::identity(2)), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn dev_examples() {
        assert!(dev(&ComplexMatrix::identity(3), 1e-10).unwrap() < 1e-15);
        let d = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]).unwrap();
        assert!((dev(&d, 1e-10).unwrap() - 1.0).abs() < 1e-15);
        let not_h = pauli::x().mul_i();
        assert!(matches!(dev(&not_h, 1e-10), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn dev_is_min_shifted_frobenius() {
        let h = crate::random::hermitian(&mut crate::random::rng(9), 4, 1.0);
        let d = dev(&h, 1e-10).unwrap();
        // Oracle: golden-section minimisation of ‖H + εI‖F over ε.
        let f = |e: f64| (&h + &ComplexMatrix::identity(4).scale_re(e)).frobenius_norm();
        let (mut lo, mut hi) = (-10.0, 10.0);
        let r = (5f64.sqrt() - 1.0) / 2.0;
        for _ in 0..200 {
            let (x1, x2) = (hi - r * (hi - lo), lo + r * (hi - lo));
            if f(x1) < f(x2) {
                hi = x2;
            } else {
                lo = x1;
            }
        }
        assert!((d - f(0.5 * (lo + hi)) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn tolerances_validation() {
        assert!(Tolerances::new(0.0, 1e-8, 1e-12).is_err());
        assert!(Tolerances::default().validate_for_dim(8).is_ok());
        assert!(Tolerances::new(1e-17, 1e-8, 1e-12).unwrap().validate_for_dim(4).is_err());
    }
}
