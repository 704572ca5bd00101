//! Seeded samplers for matrices, states and schedules.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::lie::AlgebraBasis;
use crate::numerics::{c64, mat_exp, ComplexMatrix};
use crate::schedule::ControlSchedule;

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn normal(rng: &mut impl Rng) -> f64 {
    rng.sample(StandardNormal)
}

/// Matrix with i.i.d. complex Gaussian entries.
pub fn general(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, |_, _| c64(normal(rng), normal(rng)))
}

/// Anti-Hermitian matrix with Frobenius norm drawn uniformly from (0, max_norm].
pub fn anti_hermitian(rng: &mut impl Rng, dim: usize, max_norm: f64) -> ComplexMatrix {
    let x = general(rng, dim).anti_hermitian_part();
    let target = max_norm * (1.0 - rng.random::<f64>());
    x.scale_re(target / x.frobenius_norm())
}

/// Traceless anti-Hermitian matrix with Frobenius norm in (0, max_norm].
pub fn traceless_anti_hermitian(rng: &mut impl Rng, dim: usize, max_norm: f64) -> ComplexMatrix {
    let mut x = general(rng, dim).anti_hermitian_part();
    let shift = x.trace() / dim as f64;
    for i in 0..dim {
        let z = x.get(i, i);
        x.set(i, i, z - shift);
    }
    let target = max_norm * (1.0 - rng.random::<f64>());
    x.scale_re(target / x.frobenius_norm())
}

/// Hermitian matrix with Frobenius norm in (0, max_norm].
pub fn hermitian(rng: &mut impl Rng, dim: usize, max_norm: f64) -> ComplexMatrix {
    anti_hermitian(rng, dim, max_norm).mul_neg_i()
}

/// Traceless Hermitian matrix with Frobenius norm in (0, max_norm].
pub fn traceless_hermitian(rng: &mut impl Rng, dim: usize, max_norm: f64) -> ComplexMatrix {
    traceless_anti_hermitian(rng, dim, max_norm).mul_neg_i()
}

/// Element of the span of `basis` with Frobenius norm in (0, max_norm].
pub fn algebra_element(rng: &mut impl Rng, basis: &AlgebraBasis, max_norm: f64) -> ComplexMatrix {
    let mut x = ComplexMatrix::zeros(basis.dim_space());
    for e in basis.elements() {
        x.axpy(normal(rng), e);
    }
    let target = max_norm * (1.0 - rng.random::<f64>());
    x.scale_re(target / x.frobenius_norm().max(f64::MIN_POSITIVE))
}

/// `exp` of a random algebra element.
pub fn algebra_unitary(rng: &mut impl Rng, basis: &AlgebraBasis, max_norm: f64) -> ComplexMatrix {
    mat_exp(&algebra_element(rng, basis, max_norm))
}

/// Normalised complex Gaussian vector.
pub fn state(rng: &mut impl Rng, dim: usize) -> Vec<num_complex::Complex64> {
    let v: Vec<_> = (0..dim).map(|_| c64(normal(rng), normal(rng))).collect();
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / n).collect()
}

/// Schedule whose segment Hamiltonians `H` satisfy `iH ∈ basis`, with per-segment
/// `dt·‖H‖F` at most `max_step`.
pub fn schedule_in_algebra(
    rng: &mut impl Rng,
    basis: &AlgebraBasis,
    segments: usize,
    max_step: f64,
) -> ControlSchedule {
    let segs = (0..segments)
        .map(|_| {
            let h = algebra_element(rng, basis, 1.0).mul_neg_i();
            let dt = 0.2 + rng.random::<f64>();
            let norm = h.frobenius_norm();
            let s = max_step * (1.0 - rng.random::<f64>()) / (dt * norm);
            (h.scale_re(s), dt)
        })
        .collect();
    ControlSchedule::new(segs).expect("sampled schedule is valid")
}
