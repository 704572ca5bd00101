//! Synthesis of a single in-algebra generator for a product of exponentials
//! by repeated neighbour averaging with `M(A, B)`.

use std::sync::{Arc, OnceLock};

use crate::bch::{bch_m, delta_constants, ConvergenceConstants, WordCoefficientTable, DEFAULT_BCH_ORDER, ORDER_CAP};
use crate::error::{Error, Result};
use crate::lie::AlgebraBasis;
use crate::numerics::{mat_exp, operator_norm, principal_log_unitary, ComplexMatrix, Tolerances};
use crate::schedule::ControlSchedule;

/// Word tables at the order cap, built once per process.
pub fn shared_tables() -> Arc<WordCoefficientTable> {
    static TABLES: OnceLock<Arc<WordCoefficientTable>> = OnceLock::new();
    TABLES.get_or_init(|| Arc::new(WordCoefficientTable::build(ORDER_CAP).expect("cap order builds"))).clone()
}

/// Parameters of the averaging scheme.
#[derive(Clone, Debug)]
pub struct SynthesisConfig {
    /// Division fineness; the chain uses `⌈r‖A‖F/Δ̂⌉` pieces for `A`.
    pub r: usize,
    pub constants: ConvergenceConstants,
    pub max_sweeps: usize,
    /// Stop once the neighbour spread `d` falls below this value.
    pub d_stop: f64,
    pub bch_order: usize,
    /// Number of gate halvings allowed before giving up.
    pub max_restarts: usize,
    pub tables: Arc<WordCoefficientTable>,
}

impl Default for SynthesisConfig {
    fn default() -> Self {
        Self::with_safety(1.0).expect("default constants")
    }
}

impl SynthesisConfig {
    /// Default settings with the given safety factor on the convergence radius.
    pub fn with_safety(safety: f64) -> Result<Self> {
        let tables = shared_tables();
        let h_order = tables.h_order().unwrap_or(0);
        let constants = delta_constants(&tables.h, h_order, safety)?;
        Ok(Self {
            r: 2,
            constants,
            max_sweeps: 100_000,
            d_stop: 1e-26,
            bch_order: DEFAULT_BCH_ORDER,
            max_restarts: 5,
            tables,
        })
    }

    pub fn with_r(mut self, r: usize) -> Self {
        self.r = r;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.r < 2 {
            return Err(Error::InvalidInput(format!("r must be at least 2, got {}", self.r)));
        }
        if self.d_stop.is_nan() || self.d_stop <= 0.0 {
            return Err(Error::InvalidInput("d_stop must be positive".into()));
        }
        if self.bch_order > self.tables.g_order() {
            return Err(Error::InsufficientOrder { required: self.bch_order, available: self.tables.g_order() });
        }
        Ok(())
    }
}

/// Record of one synthesis run.
#[derive(Clone, Debug, Default)]
pub struct SynthesisTrace {
    /// `u^(k) = Σ‖Cⱼ‖F²` for each recorded sweep of the final attempt.
    pub u_history: Vec<f64>,
    /// `d^(k) = Σ‖Cⱼ − Cⱼ₊₁‖F²` for each recorded sweep of the final attempt.
    pub d_history: Vec<f64>,
    pub sweeps_used: usize,
    pub m_a: usize,
    pub m_b: usize,
    pub n: usize,
    /// Fineness after the odd-`m_a` adjustment.
    pub r_used: usize,
    /// Gate in force during the final attempt.
    pub gate: f64,
    pub restarts: usize,
    /// Largest `‖Cⱼ^(k)‖F` seen during the final attempt.
    pub max_piece_norm: f64,
}

impl SynthesisTrace {
    /// Smallest `u^(k) − u^(k+1) − ½d^(k)` over the run.
    pub fn min_descent_slack(&self) -> f64 {
        self.u_history.windows(2).zip(&self.d_history).map(|(u, d)| u[0] - u[1] - 0.5 * d).fold(f64::INFINITY, f64::min)
    }

    /// Largest increase `u^(k+1) − u^(k)`; non-positive for a monotone run.
    pub fn max_u_increase(&self) -> f64 {
        self.u_history.windows(2).map(|u| u[1] - u[0]).fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Piece counts `(m_a, m_b, r)` with `m_a` odd whenever `A ≠ 0`.
pub fn division_counts(norm_a: f64, norm_b: f64, gate: f64, r: usize) -> (usize, usize, usize) {
    let count = |norm: f64, r: usize| (r as f64 * norm / gate).ceil() as usize;
    let odd = (r..r + 4).find(|&rr| count(norm_a, rr) % 2 == 1);
    match odd {
        Some(rr) => (count(norm_a, rr), count(norm_b, rr), rr),
        None if norm_a == 0.0 => (0, count(norm_b, r), r),
        // ‖A‖F/gate close to an even integer: one extra piece at the original
        // fineness keeps ‖A‖F/m_a below gate/r.
        None => (count(norm_a, r) + 1, count(norm_b, r), r),
    }
}

/// Chain of pieces `C₁ … Cₙ` whose exponentials multiply to `e^A e^B`.
#[derive(Clone, Debug)]
pub struct AveragingChain {
    pieces: Vec<ComplexMatrix>,
    sweep: usize,
}

impl AveragingChain {
    /// `m_a` copies of `A/m_a` followed by `m_b` copies of `B/m_b`.
    pub fn new(a: &ComplexMatrix, b: &ComplexMatrix, m_a: usize, m_b: usize) -> Self {
        let mut pieces = Vec::with_capacity(m_a + m_b);
        if m_a > 0 {
            pieces.extend(std::iter::repeat_n(a.scale_re(1.0 / m_a as f64), m_a));
        }
        if m_b > 0 {
            pieces.extend(std::iter::repeat_n(b.scale_re(1.0 / m_b as f64), m_b));
        }
        Self { pieces, sweep: 1 }
    }

    pub fn pieces(&self) -> &[ComplexMatrix] {
        &self.pieces
    }

    /// Index `k` of the current state (starts at 1).
    pub fn sweep_index(&self) -> usize {
        self.sweep
    }

    pub fn u(&self) -> f64 {
        self.pieces.iter().map(|c| c.frobenius_norm_sqr()).sum()
    }

    pub fn d(&self) -> f64 {
        self.pieces.windows(2).map(|w| (&w[0] - &w[1]).frobenius_norm_sqr()).sum()
    }

    pub fn max_piece_norm(&self) -> f64 {
        self.pieces.iter().map(|c| c.frobenius_norm()).fold(0.0, f64::max)
    }

    /// `Π exp(Cⱼ)` in chain order.
    pub fn product(&self) -> ComplexMatrix {
        let dim = self.pieces.first().map(|c| c.dim()).unwrap_or(1);
        self.pieces.iter().fold(ComplexMatrix::identity(dim), |acc, c| acc.matmul(&mat_exp(c)))
    }

    /// One application of the alternating rule: with 1-based `j`, pairs
    /// `(j, j+1)` with `j + k` even are both replaced by `½M(Cⱼ, Cⱼ₊₁)`.
    pub fn step(&mut self, table: &WordCoefficientTable, order: usize) -> Result<()> {
        let n = self.pieces.len();
        // 1-based j ≡ k (mod 2)  ⇔  0-based start ≡ k + 1 (mod 2).
        let mut i = (self.sweep + 1) % 2;
        while i + 1 < n {
            if self.pieces[i] != self.pieces[i + 1] {
                let m = bch_m(&self.pieces[i], &self.pieces[i + 1], table, order)?.m.scale_re(0.5);
                self.pieces[i + 1] = m.clone();
                self.pieces[i] = m;
            }
            i += 2;
        }
        self.sweep += 1;
        Ok(())
    }
}

enum Attempt {
    Done(ComplexMatrix, SynthesisTrace),
    GateViolated,
}

fn run_chain(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    gate: f64,
    cfg: &SynthesisConfig,
    tol: &Tolerances,
) -> Result<Attempt> {
    let (na, nb) = (a.frobenius_norm(), b.frobenius_norm());
    let (m_a, m_b, r_used) = division_counts(na, nb, gate, cfg.r);
    let mut chain = AveragingChain::new(a, b, m_a, m_b);
    let n = m_a + m_b;
    let mut trace = SynthesisTrace { m_a, m_b, n, r_used, gate, ..Default::default() };
    loop {
        let (u, d) = (chain.u(), chain.d());
        let max_norm = chain.max_piece_norm();
        trace.max_piece_norm = trace.max_piece_norm.max(max_norm);
        if max_norm >= gate {
            return Ok(Attempt::GateViolated);
        }
        if let Some(&prev) = trace.u_history.last() {
            if u > prev + 10.0 * tol.eq_tol {
                return Ok(Attempt::GateViolated);
            }
        }
        trace.u_history.push(u);
        trace.d_history.push(d);
        trace.sweeps_used = chain.sweep_index();
        if d < cfg.d_stop {
            let c = chain.pieces()[0].scale_re(n as f64);
            return Ok(Attempt::Done(c.anti_hermitian_part(), trace));
        }
        if chain.sweep_index() >= cfg.max_sweeps {
            return Err(Error::MaxSweepsExceeded(cfg.max_sweeps));
        }
        match chain.step(&cfg.tables, cfg.bch_order) {
            Ok(()) => {}
            Err(Error::ConvergenceGateFailed { .. }) => return Ok(Attempt::GateViolated),
            Err(e) => return Err(e),
        }
    }
}

/// Anti-Hermitian `C` with `e^C = e^A e^B`, built in the algebra generated by
/// `A` and `B` with `‖C‖F` close to at most `‖A‖F + ‖B‖F`.
pub fn synthesize_pair(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    cfg: &SynthesisConfig,
    tol: &Tolerances,
) -> Result<(ComplexMatrix, SynthesisTrace)> {
    cfg.validate()?;
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    for x in [a, b] {
        let residual = x.anti_hermitian_residual();
        if residual > tol.eq_tol {
            return Err(Error::NotAntiHermitian { residual });
        }
    }
    let (a, b) = (a.anti_hermitian_part(), b.anti_hermitian_part());
    if a.frobenius_norm() == 0.0 && b.frobenius_norm() == 0.0 {
        return Ok((ComplexMatrix::zeros(a.dim()), SynthesisTrace { sweeps_used: 1, ..Default::default() }));
    }
    let mut gate = cfg.constants.capital_delta_hat;
    for restarts in 0..=cfg.max_restarts {
        if let Attempt::Done(c, mut trace) = run_chain(&a, &b, gate, cfg, tol)? {
            trace.restarts = restarts;
            return Ok((c, trace));
        }
        gate *= 0.5;
    }
    Err(Error::GateRestartLimit(cfg.max_restarts))
}

/// Outcome of folding pair synthesis over a schedule.
#[derive(Clone, Debug)]
pub struct ScheduleSynthesis {
    /// Hermitian `C_T` with `exp(−i C_T) = U(T)`.
    pub c_t: ComplexMatrix,
    /// `Σ dt·‖H‖F + 10·eq_tol`.
    pub bound_rhs: f64,
    pub traces: Vec<SynthesisTrace>,
}

/// Folds [`synthesize_pair`] over the segment generators `−i·dt·H`, later
/// segments on the left.
pub fn synthesize_schedule(
    schedule: &ControlSchedule,
    basis: &AlgebraBasis,
    cfg: &SynthesisConfig,
    tol: &Tolerances,
) -> Result<ScheduleSynthesis> {
    if schedule.is_empty() {
        return Err(Error::InvalidSchedule("empty schedule".into()));
    }
    for h in schedule.anti_hermitian_hamiltonians() {
        let residual = basis.residual(&h)?;
        if residual > tol.algebra_tol * h.frobenius_norm().max(1.0) {
            return Err(Error::GeneratorOutsideAlgebra { residual });
        }
    }
    let mut generators = schedule.generators().into_iter();
    let mut acc = generators.next().expect("non-empty");
    let mut traces = Vec::new();
    for g in generators {
        let (c, trace) = synthesize_pair(&g, &acc, cfg, tol)?;
        acc = c;
        traces.push(trace);
    }
    Ok(ScheduleSynthesis {
        c_t: acc.mul_i().hermitian_part(),
        bound_rhs: schedule.frobenius_action() + 10.0 * tol.eq_tol,
        traces,
    })
}

/// Principal logarithm of a short-time propagator with its first-order defect.
#[derive(Clone, Debug)]
pub struct SmallTimeLog {
    /// Anti-Hermitian principal log of `U(T)`.
    pub c_tilde: ComplexMatrix,
    /// `‖C̃ + i∫H dt‖F`.
    pub defect: f64,
    /// `4√D·α²T²`.
    pub bound: f64,
}

/// Requires `αT ≤ 1/3` and `βT ≤ π` for `α = max‖H‖op`, `β = max‖H‖F`.
pub fn small_time_log(schedule: &ControlSchedule, tol: &Tolerances) -> Result<SmallTimeLog> {
    let dim = schedule.dim().ok_or_else(|| Error::InvalidSchedule("empty schedule".into()))?;
    let t = schedule.total_time();
    let alpha = schedule.segments().iter().map(|s| operator_norm(&s.h)).fold(0.0, f64::max);
    let beta = schedule.segments().iter().map(|s| s.h.frobenius_norm()).fold(0.0, f64::max);
    if alpha * t > 1.0 / 3.0 || beta * t > std::f64::consts::PI {
        return Err(Error::SmallTimeGateFailed { alpha_t: alpha * t, beta_t: beta * t });
    }
    let u = schedule.propagate(dim);
    let c_tilde = principal_log_unitary(&u, tol.eq_tol)?;
    let mut integral = ComplexMatrix::zeros(dim);
    for s in schedule.segments() {
        integral.axpy(s.dt, &s.h);
    }
    let defect = (&c_tilde + &integral.mul_i()).frobenius_norm();
    let bound = 4.0 * (dim as f64).sqrt() * (alpha * t).powi(2);
    Ok(SmallTimeLog { c_tilde, defect, bound })
}
