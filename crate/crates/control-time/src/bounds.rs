//! Control-time lower bounds: state and operator Mandelstam–Tamm,
//! Margolus–Levitin, the deviation bound `T★`, Poggi's unitary bound, the
//! metric form of the Nielsen inequality and the refined Lee bound.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{closure, AlgebraBasis};
use crate::metric::{distance, min_dev_log, BranchSearchConfig, DistanceResult};
use crate::numerics::{dev_unchecked, hermitian_eigh, unitary_eig, ComplexMatrix, Tolerances};
use crate::schedule::ControlSchedule;

/// Normalised pure state.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn new(amps: Vec<Complex64>, tol: &Tolerances) -> Result<Self> {
        let norm: f64 = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > tol.eq_tol {
            return Err(Error::InvalidInput(format!("state norm {norm} differs from 1")));
        }
        Ok(Self { amps })
    }

    /// `|k⟩` in dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[k] = Complex64::new(1.0, 0.0);
        Self { amps }
    }

    /// `D^{-1/2} Σ |k⟩|k⟩` in dimension `D²`.
    pub fn maximally_entangled(dim: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); dim * dim];
        let s = 1.0 / (dim as f64).sqrt();
        for k in 0..dim {
            amps[k * dim + k] = Complex64::new(s, 0.0);
        }
        Self { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// `⟨self|other⟩`.
    pub fn overlap(&self, other: &[Complex64]) -> Complex64 {
        self.amps.iter().zip(other).map(|(a, b)| a.conj() * b).sum()
    }
}

/// Time-ordered propagator, earliest segment rightmost; `I` for an empty schedule.
pub fn propagate(schedule: &ControlSchedule, dim: usize) -> ComplexMatrix {
    schedule.propagate(dim)
}

/// `I ⊗ H` for every segment.
pub fn choi_lift(schedule: &ControlSchedule) -> ControlSchedule {
    let dim = schedule.dim().unwrap_or(1);
    let id = ComplexMatrix::identity(dim);
    let segs = schedule.segments().iter().map(|s| (id.kron(&s.h), s.dt)).collect();
    ControlSchedule::new(segs).expect("lift of a valid schedule is valid")
}

fn expectation(h: &ComplexMatrix, psi: &[Complex64]) -> f64 {
    let hp = h.apply(psi);
    psi.iter().zip(&hp).map(|(a, b)| (a.conj() * b).re).sum()
}

fn check_state(schedule: &ControlSchedule, psi0: &StateVector) -> Result<()> {
    if let Some(d) = schedule.dim() {
        if d != psi0.dim() {
            return Err(Error::DimensionMismatch { expected: d, found: psi0.dim() });
        }
    }
    Ok(())
}

/// Per-segment start states and the final state.
fn trajectory(schedule: &ControlSchedule, psi0: &StateVector) -> (Vec<Vec<Complex64>>, Vec<Complex64>) {
    let mut psi = psi0.amps.clone();
    let mut starts = Vec::with_capacity(schedule.len());
    for s in schedule.segments() {
        starts.push(psi.clone());
        let step = crate::numerics::mat_exp(&s.h.mul_neg_i().scale_re(s.dt));
        psi = step.apply(&psi);
    }
    (starts, psi)
}

/// Bures angle `arccos|⟨φ(0)|φ(T)⟩|`.
pub fn bures_angle(schedule: &ControlSchedule, psi0: &StateVector) -> Result<f64> {
    check_state(schedule, psi0)?;
    let (_, last) = trajectory(schedule, psi0);
    Ok(psi0.overlap(&last).norm().min(1.0).acos())
}

/// `∫ΔH dt`; `ΔH` is constant on a segment since `H` commutes with its own flow.
fn integrated_spread(schedule: &ControlSchedule, starts: &[Vec<Complex64>]) -> f64 {
    schedule
        .segments()
        .iter()
        .zip(starts)
        .map(|(s, psi)| {
            let mean = expectation(&s.h, psi);
            let sq = expectation(&s.h.matmul(&s.h), psi);
            s.dt * (sq - mean * mean).max(0.0).sqrt()
        })
        .sum()
}

/// Path length `2∫ΔH dt` of the projective trajectory.
pub fn anandan_length(schedule: &ControlSchedule, psi0: &StateVector) -> Result<f64> {
    check_state(schedule, psi0)?;
    let (starts, _) = trajectory(schedule, psi0);
    Ok(2.0 * integrated_spread(schedule, &starts))
}

fn ratio_or_zero(angle: f64, rate: f64, tol: &Tolerances) -> Result<f64> {
    if rate > 0.0 {
        Ok(angle / rate)
    } else if angle <= tol.eq_tol {
        Ok(0.0)
    } else {
        Err(Error::ZeroDeviation { angle })
    }
}

/// `T_MT = arccos|⟨φ(0)|φ(T)⟩| / (T⁻¹∫ΔH dt)`.
pub fn mt_state_bound(schedule: &ControlSchedule, psi0: &StateVector, tol: &Tolerances) -> Result<f64> {
    check_state(schedule, psi0)?;
    if schedule.is_empty() {
        return Ok(0.0);
    }
    let (starts, last) = trajectory(schedule, psi0);
    let angle = psi0.overlap(&last).norm().min(1.0).acos();
    let rate = integrated_spread(schedule, &starts) / schedule.total_time();
    ratio_or_zero(angle, rate, tol)
}

/// `T_ML = sin²θ / (2 T⁻¹∫√⟨H'²⟩ dt)` with each segment shifted so that its
/// lowest eigenvalue is zero.
pub fn ml_state_bound(schedule: &ControlSchedule, psi0: &StateVector, tol: &Tolerances) -> Result<f64> {
    check_state(schedule, psi0)?;
    if schedule.is_empty() {
        return Ok(0.0);
    }
    let (starts, last) = trajectory(schedule, psi0);
    let angle = psi0.overlap(&last).norm().min(1.0).acos();
    let integral: f64 = schedule
        .segments()
        .iter()
        .zip(&starts)
        .map(|(s, psi)| {
            let (lambda, _) = hermitian_eigh(&s.h);
            let shifted = &s.h - &ComplexMatrix::identity(s.h.dim()).scale_re(lambda[0]);
            s.dt * expectation(&shifted.matmul(&shifted), psi).max(0.0).sqrt()
        })
        .sum();
    let rate = 2.0 * integral / schedule.total_time();
    ratio_or_zero(angle.sin().powi(2), rate, tol)
}

/// Time-averaged `dev H`.
pub fn mean_dev(schedule: &ControlSchedule) -> f64 {
    if schedule.is_empty() {
        return 0.0;
    }
    let total: f64 = schedule.segments().iter().map(|s| s.dt * dev_unchecked(&s.h)).sum();
    total / schedule.total_time()
}

fn check_target(u: &ComplexMatrix, schedule: &ControlSchedule, tol: &Tolerances) -> Result<()> {
    let residual = u.unitary_residual();
    if residual > tol.eq_tol {
        return Err(Error::NotUnitary { residual });
    }
    if let Some(d) = schedule.dim() {
        if d != u.dim() {
            return Err(Error::DimensionMismatch { expected: d, found: u.dim() });
        }
    }
    Ok(())
}

/// `arccos|D⁻¹ tr U|`.
pub fn choi_angle(u: &ComplexMatrix) -> f64 {
    (u.trace().norm() / u.dim() as f64).min(1.0).acos()
}

/// Operator form `T_MT = arccos|D⁻¹ tr U| / (T⁻¹∫dev H dt)`.
pub fn mt_choi_bound(u_target: &ComplexMatrix, schedule: &ControlSchedule, tol: &Tolerances) -> Result<f64> {
    check_target(u_target, schedule, tol)?;
    ratio_or_zero(choi_angle(u_target), mean_dev(schedule), tol)
}

/// `T★ = dev C_T / (T⁻¹∫dev H dt)` for a Hermitian `C_T` with `e^{−iC_T} = U(T)`.
pub fn t_star_bound(c_t: &ComplexMatrix, schedule: &ControlSchedule, tol: &Tolerances) -> Result<f64> {
    let residual = c_t.hermitian_residual();
    if residual > tol.eq_tol * c_t.max_abs().max(1.0) {
        return Err(Error::NotHermitian { residual });
    }
    ratio_or_zero(dev_unchecked(c_t), mean_dev(schedule), tol)
}

/// `T★` with `C_T` the algebra logarithm of `U` of least deviation found by
/// branch search. Returns the bound and the search result.
pub fn t_star_min_branch(
    u_target: &ComplexMatrix,
    schedule: &ControlSchedule,
    basis: &AlgebraBasis,
    cfg: &BranchSearchConfig,
    tol: &Tolerances,
) -> Result<(f64, DistanceResult)> {
    check_target(u_target, schedule, tol)?;
    let log = min_dev_log(u_target, Some(basis), cfg, tol)?;
    Ok((ratio_or_zero(log.value, mean_dev(schedule), tol)?, log))
}

/// Length of the shortest arc of the unit circle holding every eigenvalue.
pub fn eigenphase_arc(u: &ComplexMatrix) -> f64 {
    let (mut phases, _) = unitary_eig(u);
    phases.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = phases.len();
    let mut largest_gap = phases[0] + 2.0 * PI - phases[n - 1];
    for w in phases.windows(2) {
        largest_gap = largest_gap.max(w[1] - w[0]);
    }
    (2.0 * PI - largest_gap).max(0.0)
}

/// `min_ψ |⟨ψ|U|ψ⟩|`: distance from the origin to the convex hull of the
/// eigenvalues.
pub fn numerical_range_min_modulus(u: &ComplexMatrix) -> f64 {
    let arc = eigenphase_arc(u);
    if arc >= PI {
        0.0
    } else {
        (0.5 * arc).cos()
    }
}

/// Largest `E_max − E_min` over segments.
pub fn max_energy_spread(schedule: &ControlSchedule) -> f64 {
    schedule
        .segments()
        .iter()
        .map(|s| {
            let (l, _) = hermitian_eigh(&s.h);
            l[l.len() - 1] - l[0]
        })
        .fold(0.0, f64::max)
}

/// `T_P = 2 arccos min_ψ|⟨ψ|U|ψ⟩| / (E_max − E_min)`.
pub fn poggi_bound(u_target: &ComplexMatrix, schedule: &ControlSchedule, tol: &Tolerances) -> Result<f64> {
    check_target(u_target, schedule, tol)?;
    let angle = 2.0 * numerical_range_min_modulus(u_target).min(1.0).acos();
    ratio_or_zero(angle, max_energy_spread(schedule), tol)
}

/// Both sides of `‖U_A − U_B‖F ≤ d(U_A, U_B) ≤ ∫‖H_A − H_B‖F dt`.
#[derive(Clone, Debug)]
pub struct NielsenCheck {
    pub lhs_frob: f64,
    pub lhs_d: f64,
    pub rhs: f64,
    pub distance: DistanceResult,
}

impl NielsenCheck {
    pub fn holds(&self, slack: f64) -> bool {
        self.lhs_frob <= self.lhs_d + slack && self.lhs_d <= self.rhs + slack
    }
}

/// Merged breakpoints of two schedules with equal total time.
pub fn common_grid(a: &ControlSchedule, b: &ControlSchedule, tol: f64) -> Result<Vec<f64>> {
    let (ta, tb) = (a.total_time(), b.total_time());
    if (ta - tb).abs() > tol * ta.max(1.0) {
        return Err(Error::InvalidSchedule(format!("total times differ: {ta} vs {tb}")));
    }
    let mut grid: Vec<f64> = a.breakpoints().into_iter().chain(b.breakpoints()).collect();
    grid.sort_by(|x, y| x.partial_cmp(y).unwrap());
    grid.dedup_by(|x, y| (*x - *y).abs() <= tol);
    if let Some(last) = grid.last_mut() {
        *last = ta.min(tb);
    }
    Ok(grid)
}

/// Evaluates the Nielsen chain on a common segmentation. Without a basis the
/// algebra generated by both schedules is used.
pub fn nielsen_metric_check(
    a: &ControlSchedule,
    b: &ControlSchedule,
    basis: Option<&AlgebraBasis>,
    cfg: &BranchSearchConfig,
    tol: &Tolerances,
) -> Result<NielsenCheck> {
    let dim = a.dim().or(b.dim()).ok_or_else(|| Error::InvalidSchedule("both schedules empty".into()))?;
    let grid = common_grid(a, b, 1e-12)?;
    let (ra, rb) = (a.resample(&grid), b.resample(&grid));
    let (ua, ub) = (ra.propagate(dim), rb.propagate(dim));
    let rhs: f64 = ra.segments().iter().zip(rb.segments()).map(|(x, y)| x.dt * (&x.h - &y.h).frobenius_norm()).sum();
    let owned;
    let basis = match basis {
        Some(b) => b,
        None => {
            let mut gens = ra.anti_hermitian_hamiltonians();
            gens.extend(rb.anti_hermitian_hamiltonians());
            gens.retain(|g| g.frobenius_norm() > 0.0);
            owned = if gens.is_empty() { AlgebraBasis::full_unitary(dim) } else { closure(&gens, tol)? };
            &owned
        }
    };
    let d = distance(&ua, &ub, Some(basis), cfg, tol)?;
    Ok(NielsenCheck { lhs_frob: (&ua - &ub).frobenius_norm(), lhs_d: d.value, rhs, distance: d })
}

/// Refined and original Lee bounds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LeeBound {
    /// `d(U, VUV†) / ‖[H₀, V]‖F`.
    pub refined: f64,
    /// `‖[U, V]‖F / ‖[H₀, V]‖F`.
    pub original: f64,
}

pub fn lee_refined_bound(
    u_t: &ComplexMatrix,
    h0: &ComplexMatrix,
    v: &ComplexMatrix,
    basis: Option<&AlgebraBasis>,
    cfg: &BranchSearchConfig,
    tol: &Tolerances,
) -> Result<LeeBound> {
    for m in [h0, v] {
        if m.dim() != u_t.dim() {
            return Err(Error::DimensionMismatch { expected: u_t.dim(), found: m.dim() });
        }
    }
    let denom = h0.commutator_unchecked(v).frobenius_norm();
    if denom <= tol.eq_tol {
        return Err(Error::DegenerateDenominator(denom));
    }
    let rotated = v.matmul(u_t).matmul(&v.adjoint());
    let d = distance(u_t, &rotated, basis, cfg, tol)?;
    Ok(LeeBound { refined: d.value / denom, original: u_t.commutator_unchecked(v).frobenius_norm() / denom })
}

/// All bounds for one schedule and target.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub t_real: f64,
    pub t_mt: f64,
    pub t_ml: Option<f64>,
    pub t_p: f64,
    pub t_star: Option<f64>,
    /// Time-averaged `dev H`.
    pub dev_h: f64,
    /// `dev C_T` of the least-deviation algebra logarithm.
    pub dev_c: Option<f64>,
    /// `|D⁻¹ tr U|`.
    pub arccos_arg: f64,
    /// Arc length of the eigenphase hull of `U`.
    pub phi: f64,
}

impl BoundReport {
    pub const CSV_HEADER: [&'static str; 9] =
        ["T_real", "T_MT", "T_ML", "T_P", "T_star", "dev_H", "dev_C", "arccos_arg", "phi"];

    pub fn csv_record(&self) -> Vec<String> {
        let opt = |x: Option<f64>| x.map(|v| format!("{v:.12e}")).unwrap_or_default();
        vec![
            format!("{:.12e}", self.t_real),
            format!("{:.12e}", self.t_mt),
            opt(self.t_ml),
            format!("{:.12e}", self.t_p),
            opt(self.t_star),
            format!("{:.12e}", self.dev_h),
            opt(self.dev_c),
            format!("{:.12e}", self.arccos_arg),
            format!("{:.12e}", self.phi),
        ]
    }
}

/// Evaluates every bound. The target defaults to the schedule's propagator and
/// the algebra to the closure of its Hamiltonians; `T_ML` uses the maximally
/// entangled input on `I ⊗ H`.
pub fn bound_report(
    schedule: &ControlSchedule,
    target: Option<&ComplexMatrix>,
    basis: Option<&AlgebraBasis>,
    cfg: &BranchSearchConfig,
    tol: &Tolerances,
) -> Result<BoundReport> {
    let dim = schedule.dim().ok_or_else(|| Error::InvalidSchedule("empty schedule".into()))?;
    let u = match target {
        Some(u) => u.clone(),
        None => schedule.propagate(dim),
    };
    let owned;
    let basis = match basis {
        Some(b) => b,
        None => {
            let gens: Vec<_> =
                schedule.anti_hermitian_hamiltonians().into_iter().filter(|g| g.frobenius_norm() > 0.0).collect();
            owned = if gens.is_empty() { AlgebraBasis::full_unitary(dim) } else { closure(&gens, tol)? };
            &owned
        }
    };
    let t_mt = mt_choi_bound(&u, schedule, tol)?;
    let t_ml = if target.is_none() {
        ml_state_bound(&choi_lift(schedule), &StateVector::maximally_entangled(dim), tol).ok()
    } else {
        None
    };
    let star = t_star_min_branch(&u, schedule, basis, cfg, tol).ok();
    Ok(BoundReport {
        t_real: schedule.total_time(),
        t_mt,
        t_ml,
        t_p: poggi_bound(&u, schedule, tol)?,
        t_star: star.as_ref().map(|s| s.0),
        dev_h: mean_dev(schedule),
        dev_c: star.as_ref().map(|s| s.1.value),
        arccos_arg: u.trace().norm() / dim as f64,
        phi: eigenphase_arc(&u),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{c64, mat_exp, pauli};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn plus() -> StateVector {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        StateVector::new(vec![c64(s, 0.0), c64(s, 0.0)], &tol()).unwrap()
    }

    #[test]
    fn propagate_examples() {
        assert!(propagate(&ControlSchedule::empty(), 3).approx_eq(&ComplexMatrix::identity(3), 0.0));
        let h = pauli::x().scale_re(0.7);
        let s = ControlSchedule::new(vec![(h.clone(), 1.3)]).unwrap();
        assert!(propagate(&s, 2).approx_eq(&mat_exp(&h.scale(c64(0.0, -1.3))), 1e-14));
    }

    #[test]
    fn mt_is_tight_for_spin_half() {
        let s = ControlSchedule::new(vec![(pauli::z(), PI / 2.0)]).unwrap();
        let t = mt_state_bound(&s, &plus(), &tol()).unwrap();
        assert!((t - PI / 2.0).abs() < 1e-12);
        let ml = ml_state_bound(&s, &plus(), &tol()).unwrap();
        assert!(ml <= t);
        let eig = StateVector::basis(2, 0);
        assert_eq!(mt_state_bound(&s, &eig, &tol()).unwrap(), 0.0);
        assert_eq!(ml_state_bound(&s, &eig, &tol()).unwrap(), 0.0);
    }

    #[test]
    fn choi_state_reproduces_operator_bound() {
        let mut rng = crate::random::rng(5);
        let segs: Vec<_> = (0..3).map(|_| (crate::random::hermitian(&mut rng, 3, 1.0), 0.4)).collect();
        let s = ControlSchedule::new(segs).unwrap();
        let u = s.propagate(3);
        let op = mt_choi_bound(&u, &s, &tol()).unwrap();
        let state = mt_state_bound(&choi_lift(&s), &StateVector::maximally_entangled(3), &tol()).unwrap();
        assert!((op - state).abs() < 1e-10);
    }

    #[test]
    fn global_phase_and_shift_invariance() {
        let mut rng = crate::random::rng(6);
        let h = crate::random::hermitian(&mut rng, 3, 1.0);
        let s = ControlSchedule::new(vec![(h.clone(), 1.0)]).unwrap();
        let shifted = ControlSchedule::new(vec![(&h + &ComplexMatrix::identity(3).scale_re(0.8), 1.0)]).unwrap();
        let u = s.propagate(3);
        let v = u.scale(Complex64::from_polar(1.0, 0.9));
        let t = tol();
        assert!((mt_choi_bound(&u, &s, &t).unwrap() - mt_choi_bound(&v, &shifted, &t).unwrap()).abs() < 1e-12);
        assert!((poggi_bound(&u, &s, &t).unwrap() - poggi_bound(&v, &shifted, &t).unwrap()).abs() < 1e-12);
        let ct = h.scale_re(1.0);
        assert!((t_star_bound(&ct, &s, &t).unwrap() - t_star_bound(&ct, &shifted, &t).unwrap()).abs() < 1e-12);
        assert_eq!(mt_choi_bound(&ComplexMatrix::identity(3), &s, &t).unwrap(), 0.0);
        assert_eq!(poggi_bound(&ComplexMatrix::identity(3), &s, &t).unwrap(), 0.0);
    }

    #[test]
    fn numerical_range_matches_sampling() {
        let mut rng = crate::random::rng(7);
        for (dim, max_norm) in [(2, 1.0), (3, 2.0), (3, 9.0)] {
            let u = mat_exp(&crate::random::anti_hermitian(&mut rng, dim, max_norm));
            let hull = numerical_range_min_modulus(&u);
            // Oracle: random states never go below the hull value and come close to it.
            let mut sampled = f64::INFINITY;
            for _ in 0..20000 {
                let psi = crate::random::state(&mut rng, dim);
                let up = u.apply(&psi);
                let v: Complex64 = psi.iter().zip(&up).map(|(a, b)| a.conj() * b).sum();
                sampled = sampled.min(v.norm());
            }
            assert!(sampled >= hull - 1e-12);
            assert!(sampled - hull < 0.05, "{sampled} vs {hull}");
        }
    }

    #[test]
    fn wide_spread_gives_pi_over_gap() {
        let u = ComplexMatrix::from_diag(&[
            Complex64::from_polar(1.0, 2.0),
            Complex64::from_polar(1.0, -2.0),
            Complex64::from_polar(1.0, 0.0),
        ]);
        assert_eq!(numerical_range_min_modulus(&u), 0.0);
        let s = ControlSchedule::new(vec![(pauli::z(), 1.0)]).unwrap();
        let u2 = ComplexMatrix::from_diag(&[c64(0.0, 1.0), c64(0.0, -1.0)]);
        assert!((poggi_bound(&u2, &s, &tol()).unwrap() - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn nielsen_sigma_x_example() {
        for t in [0.5, 1.0, 2.0] {
            let a = ControlSchedule::new(vec![(pauli::x(), t)]).unwrap();
            let b = ControlSchedule::new(vec![(ComplexMatrix::zeros(2), t)]).unwrap();
            let r = nielsen_metric_check(&a, &b, None, &BranchSearchConfig::default(), &tol()).unwrap();
            assert!((r.lhs_frob - 2.0 * 2f64.sqrt() * (t / 2.0).sin()).abs() < 1e-12);
            assert!((r.rhs - 2f64.sqrt() * t).abs() < 1e-12);
            assert!((r.lhs_d - 2f64.sqrt() * t).abs() < 1e-10);
            assert!(r.holds(1e-9));
        }
        let a = ControlSchedule::new(vec![(pauli::y(), 0.7)]).unwrap();
        let r = nielsen_metric_check(&a, &a, None, &BranchSearchConfig::default(), &tol()).unwrap();
        assert!(r.lhs_frob < 1e-14 && r.lhs_d < 1e-14 && r.rhs == 0.0);
    }

    #[test]
    fn lee_bound_two_qubits() {
        let id = ComplexMatrix::identity(2);
        let h0 = pauli::z().kron(&id);
        let control = id.kron(&pauli::x());
        let v = pauli::x().kron(&id);
        let s = ControlSchedule::new(vec![(&h0 + &control.scale_re(0.8), 0.6), (&h0 - &control.scale_re(0.3), 0.9)])
            .unwrap();
        let u = s.propagate(4);
        let r = lee_refined_bound(&u, &h0, &v, None, &BranchSearchConfig::default(), &tol()).unwrap();
        assert!(r.original > 0.0);
        assert!(r.refined >= r.original - 1e-9);
        assert!(r.refined <= s.total_time() + 1e-9);
        let err = lee_refined_bound(&u, &h0, &ComplexMatrix::identity(4), None, &BranchSearchConfig::default(), &tol());
        assert!(matches!(err, Err(Error::DegenerateDenominator(_))));
    }

    #[test]
    fn ordering_on_random_schedules() {
        let mut rng = crate::random::rng(12);
        let cfg = BranchSearchConfig::default();
        for _ in 0..10 {
            let gens: Vec<_> = (0..2).map(|_| crate::random::anti_hermitian(&mut rng, 3, 1.0)).collect();
            let basis = closure(&gens, &tol()).unwrap();
            let s = crate::random::schedule_in_algebra(&mut rng, &basis, 3, 0.5);
            let r = bound_report(&s, None, Some(&basis), &cfg, &tol()).unwrap();
            let star = r.t_star.unwrap();
            assert!(r.t_ml.unwrap() <= r.t_mt + 1e-9);
            assert!(r.t_mt <= star + 1e-9, "{} > {}", r.t_mt, star);
            assert!(star <= r.t_real + 1e-9, "{} > {}", star, r.t_real);
        }
    }

    #[test]
    fn anandan_length_dominates_angle() {
        let mut rng = crate::random::rng(14);
        let segs: Vec<_> = (0..4).map(|_| (crate::random::hermitian(&mut rng, 3, 1.5), 0.5)).collect();
        let s = ControlSchedule::new(segs).unwrap();
        let psi = StateVector::new(crate::random::state(&mut rng, 3), &tol()).unwrap();
        assert!(anandan_length(&s, &psi).unwrap() >= 2.0 * bures_angle(&s, &psi).unwrap() - 1e-12);
    }
}
