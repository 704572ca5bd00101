//! Piecewise-constant Hamiltonian schedules.

use crate::error::{Error, Result};
use crate::numerics::{mat_exp, ComplexMatrix};

/// One constant-Hamiltonian segment.
#[derive(Clone, Debug, PartialEq)]
pub struct Segment {
    pub h: ComplexMatrix,
    pub dt: f64,
}

/// Sequence of Hermitian Hamiltonians with durations, applied in order.
#[derive(Clone, Debug, PartialEq)]
pub struct ControlSchedule {
    segments: Vec<Segment>,
}

impl ControlSchedule {
    /// Validates positive finite durations, equal dimensions and Hermiticity
    /// up to a loose roundoff threshold.
    pub fn new(segments: Vec<(ComplexMatrix, f64)>) -> Result<Self> {
        let dim = segments.first().map(|(h, _)| h.dim());
        let mut out = Vec::with_capacity(segments.len());
        for (idx, (h, dt)) in segments.into_iter().enumerate() {
            if !(dt > 0.0 && dt.is_finite()) {
                return Err(Error::InvalidSchedule(format!("segment {idx}: duration {dt}")));
            }
            if Some(h.dim()) != dim {
                return Err(Error::DimensionMismatch { expected: dim.unwrap_or(0), found: h.dim() });
            }
            let residual = h.hermitian_residual();
            if residual > 1e-9 * h.max_abs().max(1.0) {
                return Err(Error::NotHermitian { residual });
            }
            out.push(Segment { h: h.hermitian_part(), dt });
        }
        Ok(Self { segments: out })
    }

    pub fn empty() -> Self {
        Self { segments: Vec::new() }
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    /// Dimension of the Hamiltonians, `None` when empty.
    pub fn dim(&self) -> Option<usize> {
        self.segments.first().map(|s| s.h.dim())
    }

    pub fn total_time(&self) -> f64 {
        self.segments.iter().map(|s| s.dt).sum()
    }

    /// `Σ dt·‖H‖F`.
    pub fn frobenius_action(&self) -> f64 {
        self.segments.iter().map(|s| s.dt * s.h.frobenius_norm()).sum()
    }

    /// Segment generators `−i·dt·H`.
    pub fn generators(&self) -> Vec<ComplexMatrix> {
        self.segments.iter().map(|s| s.h.mul_neg_i().scale_re(s.dt)).collect()
    }

    /// `i·H` for each segment, the inputs of algebra closure.
    pub fn anti_hermitian_hamiltonians(&self) -> Vec<ComplexMatrix> {
        self.segments.iter().map(|s| s.h.mul_i()).collect()
    }

    /// Concatenation: `self` first, then `other`.
    pub fn then(&self, other: &ControlSchedule) -> ControlSchedule {
        let mut segments = self.segments.clone();
        segments.extend(other.segments.iter().cloned());
        ControlSchedule { segments }
    }

    /// Repeats the schedule `times` times.
    pub fn repeat(&self, times: usize) -> ControlSchedule {
        let mut segments = Vec::with_capacity(self.segments.len() * times);
        for _ in 0..times {
            segments.extend(self.segments.iter().cloned());
        }
        ControlSchedule { segments }
    }

    /// Time-ordered propagator, earliest segment rightmost.
    pub fn propagate(&self, dim: usize) -> ComplexMatrix {
        let mut u = ComplexMatrix::identity(dim);
        for s in &self.segments {
            u = mat_exp(&s.h.mul_neg_i().scale_re(s.dt)).matmul(&u);
        }
        u
    }

    /// Segment boundaries `0 = t₀ < t₁ < … < T`.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut t = 0.0;
        let mut out = vec![0.0];
        for s in &self.segments {
            t += s.dt;
            out.push(t);
        }
        out
    }

    /// Hamiltonian active at time `t` (right-continuous), `None` outside `[0, T)`.
    pub fn hamiltonian_at(&self, t: f64) -> Option<&ComplexMatrix> {
        let mut start = 0.0;
        for s in &self.segments {
            if t >= start && t < start + s.dt {
                return Some(&s.h);
            }
            start += s.dt;
        }
        None
    }

    /// Re-expresses the schedule on a finer grid containing all its breakpoints.
    pub fn resample(&self, grid: &[f64]) -> ControlSchedule {
        let segments = grid
            .windows(2)
            .filter(|w| w[1] > w[0])
            .map(|w| {
                let mid = 0.5 * (w[0] + w[1]);
                let h =
                    self.hamiltonian_at(mid).cloned().unwrap_or_else(|| ComplexMatrix::zeros(self.dim().unwrap_or(1)));
                Segment { h, dt: w[1] - w[0] }
            })
            .collect();
        ControlSchedule { segments }
    }
}
