//! Alternating two-Hamiltonian example on three levels, its closed-form
//! control-time bounds, the bound-versus-period sweep and the counterexample witnesses.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bounds::{eigenphase_arc, max_energy_spread, mean_dev, mt_choi_bound, poggi_bound};
use crate::error::{Error, Result};
use crate::lie::{closure, AlgebraBasis};
use crate::metric::{min_dev_log, min_norm_log, BranchSearchConfig};
use crate::numerics::{c64, mat_exp, unitary_eig, wrap_phase, ComplexMatrix, Tolerances};
use crate::schedule::ControlSchedule;

/// Parameters `a`, `b`, `c` of the alternating Hamiltonians.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZigzagParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Default for ZigzagParams {
    fn default() -> Self {
        Self { a: PI / 500.0, b: -PI / 1200.0, c: PI / 1000.0 }
    }
}

impl ZigzagParams {
    /// Checks `a > 0`, `√(a²+b²) < π/2` and `0 ≤ c < θ < π/2`.
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        let p = Self { a, b, c };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::ParamConstraintViolated(m));
        if !(self.a > 0.0 && self.a.is_finite() && self.b.is_finite() && self.c.is_finite()) {
            return bad(format!("a must be positive and finite, got a = {}", self.a));
        }
        if self.radius() >= PI / 2.0 {
            return bad(format!("√(a²+b²) = {} must be below π/2", self.radius()));
        }
        let theta = self.theta();
        if !(0.0 <= self.c && self.c < theta && theta < PI / 2.0) {
            return bad(format!("need 0 ≤ c < θ < π/2, got c = {}, θ = {theta}", self.c));
        }
        Ok(())
    }

    /// `√(a² + b²)`.
    pub fn radius(&self) -> f64 {
        self.a.hypot(self.b)
    }

    /// `θ = arctan((a/√(a²+b²))·tan√(a²+b²))`.
    pub fn theta(&self) -> f64 {
        let r = self.radius();
        (self.a / r * r.tan()).atan()
    }

    /// `√(2(a²+b²) + c²)`, the Frobenius norm of either Hamiltonian.
    pub fn hamiltonian_norm(&self) -> f64 {
        (2.0 * (self.a * self.a + self.b * self.b) + self.c * self.c).sqrt()
    }

    /// `dev A = dev B = √(2/3)·√(a²+b²+c²/3)`.
    pub fn dev_h(&self) -> f64 {
        (2.0f64 / 3.0).sqrt() * (self.a * self.a + self.b * self.b + self.c * self.c / 3.0).sqrt()
    }
}

/// Hermitian `A` and `B` applied alternately for unit time.
pub fn build_zigzag(p: &ZigzagParams) -> Result<(ComplexMatrix, ComplexMatrix)> {
    p.validate()?;
    let t = p.theta();
    let z = c64(0.0, 0.0);
    let e = Complex64::from_polar(p.b, t);
    let a = ComplexMatrix::from_rows(&[
        vec![c64(p.a, 0.0), e, z],
        vec![e.conj(), c64(-p.a, 0.0), z],
        vec![z, z, c64(p.c, 0.0)],
    ])?;
    let f = -Complex64::from_polar(p.b, -t);
    let b = ComplexMatrix::from_rows(&[
        vec![c64(p.a, 0.0), f, z],
        vec![f.conj(), c64(-p.a, 0.0), z],
        vec![z, z, c64(p.c, 0.0)],
    ])?;
    Ok((a, b))
}

/// `M` periods of `A` then `B`, each for unit time.
pub fn zigzag_schedule(p: &ZigzagParams, m: usize) -> Result<ControlSchedule> {
    let (a, b) = build_zigzag(p)?;
    Ok(ControlSchedule::new(vec![(a, 1.0), (b, 1.0)])?.repeat(m))
}

/// Eigenphases `{−2θM, 2θM, −2cM}` of `U(2M)`, wrapped to `(−π, π]`.
pub fn expected_phases(p: &ZigzagParams, m: usize) -> [f64; 3] {
    let (t, mf) = (p.theta(), m as f64);
    [wrap_phase(-2.0 * t * mf), wrap_phase(2.0 * t * mf), wrap_phase(-2.0 * p.c * mf)]
}

fn circular_gap(x: f64, y: f64) -> f64 {
    (Complex64::from_polar(1.0, x) - Complex64::from_polar(1.0, y)).norm()
}

/// Largest distance on the unit circle between matched eigenvalues of `u` and
/// the expected phases.
pub fn phase_mismatch(u: &ComplexMatrix, expected: &[f64]) -> f64 {
    let (mut found, _) = unitary_eig(u);
    let mut worst: f64 = 0.0;
    for &e in expected {
        let (idx, gap) = found
            .iter()
            .enumerate()
            .map(|(i, &f)| (i, circular_gap(e, f)))
            .min_by(|x, y| x.1.partial_cmp(&y.1).unwrap())
            .unwrap_or((0, f64::INFINITY));
        worst = worst.max(gap);
        if !found.is_empty() {
            found.remove(idx);
        }
    }
    worst
}

/// `U(2M) = (e^{−iB}e^{−iA})^M`, checked against its diagonal form to 1e-9.
pub fn u_2m(p: &ZigzagParams, m: usize) -> Result<ComplexMatrix> {
    let (a, b) = build_zigzag(p)?;
    let period = mat_exp(&b.mul_neg_i()).matmul(&mat_exp(&a.mul_neg_i()));
    let mut u = ComplexMatrix::identity(3);
    for _ in 0..m {
        u = period.matmul(&u);
    }
    let mismatch = phase_mismatch(&u, &expected_phases(p, m));
    if mismatch > 1e-9 {
        return Err(Error::DiagonalizationMismatch(mismatch));
    }
    Ok(u)
}

/// Closed-form Mandelstam–Tamm bound
/// `√(3/2)·(a²+b²+c²/3)^{−1/2}·arccos|(2cos2θM + e^{−2icM})/3|`.
pub fn t_mt_closed(p: &ZigzagParams, m: usize) -> f64 {
    let (t, mf) = (p.theta(), m as f64);
    let s = (p.a * p.a + p.b * p.b + p.c * p.c / 3.0).sqrt();
    let z = (c64(2.0 * (2.0 * t * mf).cos(), 0.0) + Complex64::from_polar(1.0, -2.0 * p.c * mf)) / 3.0;
    (1.5f64).sqrt() / s * z.norm().min(1.0).acos()
}

/// Integer window `[−2, ⌈max(θ, c)M/π⌉ + 2]` for the closed-form branch search.
pub fn branch_window(p: &ZigzagParams, m: usize) -> (i64, i64) {
    let hi = (p.theta().max(p.c) * m as f64 / PI).ceil() as i64 + 2;
    (-2, hi)
}

/// Closed-form deviation bound
/// `2(a²+b²+c²/3)^{−1/2}·min_{j,k} √((θM−jπ)² + (cM−kπ)²/3)` over `window`.
pub fn t_star_closed_window(p: &ZigzagParams, m: usize, window: (i64, i64)) -> f64 {
    let (t, mf) = (p.theta(), m as f64);
    let s = (p.a * p.a + p.b * p.b + p.c * p.c / 3.0).sqrt();
    let mut best = f64::INFINITY;
    for j in window.0..=window.1 {
        for k in window.0..=window.1 {
            let x = t * mf - j as f64 * PI;
            let y = p.c * mf - k as f64 * PI;
            best = best.min((x * x + y * y / 3.0).sqrt());
        }
    }
    2.0 / s * best
}

pub fn t_star_closed(p: &ZigzagParams, m: usize) -> f64 {
    t_star_closed_window(p, m, branch_window(p, m))
}

/// Eigenphase-hull arc `φ` in closed form. The three regimes follow the
/// ordering of `±2θM` and `−2cM` on the circle; outside them the largest gap
/// between the three phases is used.
pub fn poggi_phi_closed(p: &ZigzagParams, m: usize) -> f64 {
    let (t, c, mf) = (p.theta(), p.c, m as f64);
    let half_gap = if 2.0 * t * mf <= PI {
        (PI - 2.0 * t * mf).max((t + c) * mf)
    } else if 2.0 * (t + c) * mf <= 2.0 * PI {
        (2.0 * t * mf - PI).max(PI - (t - c) * mf)
    } else if 2.0 * t * mf <= 2.0 * PI {
        (2.0 * PI - 2.0 * t * mf).max((t + c) * mf - PI).max((t - c) * mf)
    } else {
        let mut ph: Vec<f64> = expected_phases(p, m).iter().map(|x| x.rem_euclid(2.0 * PI)).collect();
        ph.sort_by(|x, y| x.partial_cmp(y).unwrap());
        let gap = (ph[1] - ph[0]).max(ph[2] - ph[1]).max(ph[0] + 2.0 * PI - ph[2]);
        0.5 * gap
    };
    2.0 * PI - 2.0 * half_gap
}

/// `T_P = min(φ, π) / (2√(a²+b²))`.
pub fn t_p_closed(p: &ZigzagParams, m: usize) -> f64 {
    poggi_phi_closed(p, m).min(PI) / (2.0 * p.radius())
}

/// Algebra `L({iA, iB})`.
pub fn zigzag_algebra(p: &ZigzagParams, tol: &Tolerances) -> Result<AlgebraBasis> {
    let (a, b) = build_zigzag(p)?;
    closure(&[a.mul_i(), b.mul_i()], tol)
}

/// One row of the bound-versus-period sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FigureRow {
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "T_real")]
    pub t_real: f64,
    #[serde(rename = "T_MT")]
    pub t_mt: f64,
    #[serde(rename = "T_star")]
    pub t_star: f64,
    #[serde(rename = "T_P")]
    pub t_p: f64,
    pub ratio_mt: f64,
    pub ratio_star: f64,
    pub ratio_p: f64,
}

pub const FIGURE_CSV_HEADER: [&str; 8] = ["M", "T_real", "T_MT", "T_star", "T_P", "ratio_MT", "ratio_star", "ratio_P"];

fn figure_row(p: &ZigzagParams, m: usize) -> FigureRow {
    let t_real = 2.0 * m as f64;
    let (t_mt, t_star, t_p) = (t_mt_closed(p, m), t_star_closed(p, m), t_p_closed(p, m));
    let ratio = |x: f64| if t_real > 0.0 { x / t_real } else { 0.0 };
    FigureRow { m, t_real, t_mt, t_star, t_p, ratio_mt: ratio(t_mt), ratio_star: ratio(t_star), ratio_p: ratio(t_p) }
}

/// Closed-form rows for each `M` in `ms`; requires `cM ≤ π` throughout.
pub fn figure1_sweep(p: &ZigzagParams, ms: &[usize]) -> Result<Vec<FigureRow>> {
    p.validate()?;
    if ms.is_empty() {
        return Err(Error::InvalidInput("empty M range".into()));
    }
    if let Some(&m) = ms.iter().find(|&&m| p.c * m as f64 > PI) {
        return Err(Error::ParamConstraintViolated(format!("cM = {} exceeds π at M = {m}", p.c * m as f64)));
    }
    Ok(ms.iter().map(|&m| figure_row(p, m)).collect())
}

/// Writes rows as CSV with the fixed header.
pub fn write_figure_csv<W: Write>(rows: &[FigureRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::InvalidInput(format!("csv: {e}"));
    w.write_record(FIGURE_CSV_HEADER).map_err(io)?;
    for r in rows {
        w.write_record([
            r.m.to_string(),
            format!("{:.12e}", r.t_real),
            format!("{:.12e}", r.t_mt),
            format!("{:.12e}", r.t_star),
            format!("{:.12e}", r.t_p),
            format!("{:.12e}", r.ratio_mt),
            format!("{:.12e}", r.ratio_star),
            format!("{:.12e}", r.ratio_p),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::InvalidInput(format!("csv: {e}")))?;
    Ok(())
}

type Series = (&'static str, &'static str, fn(&FigureRow) -> f64);

/// Line plot of the four absolute times against `M`.
pub fn figure_svg(rows: &[FigureRow]) -> String {
    let (w, h, pad) = (640.0, 400.0, 40.0);
    let m_max = rows.iter().map(|r| r.m).max().unwrap_or(1).max(1) as f64;
    let y_max = rows.iter().map(|r| r.t_real.max(r.t_star)).fold(1e-12, f64::max);
    let series: [Series; 4] = [
        ("T_real", "#d62728", |r| r.t_real),
        ("T_star", "#1f77b4", |r| r.t_star),
        ("T_MT", "#000000", |r| r.t_mt),
        ("T_P", "#2ca02c", |r| r.t_p),
    ];
    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n\
         <line x1=\"{pad}\" y1=\"{y0}\" x2=\"{x1}\" y2=\"{y0}\" stroke=\"black\"/>\n\
         <line x1=\"{pad}\" y1=\"{pad}\" x2=\"{pad}\" y2=\"{y0}\" stroke=\"black\"/>\n",
        y0 = h - pad,
        x1 = w - pad,
    );
    for (i, (name, color, f)) in series.iter().enumerate() {
        let pts: Vec<String> = rows
            .iter()
            .map(|r| {
                let x = pad + (w - 2.0 * pad) * r.m as f64 / m_max;
                let y = h - pad - (h - 2.0 * pad) * f(r) / y_max;
                format!("{x:.2},{y:.2}")
            })
            .collect();
        s.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
            pts.join(" ")
        ));
        s.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"12\" fill=\"{color}\">{name}</text>\n",
            pad + 10.0,
            pad + 14.0 * (i as f64 + 1.0)
        ));
    }
    s.push_str("</svg>\n");
    s
}

/// Closed forms against the generic computations for one `M`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RowCrossCheck {
    pub m: usize,
    pub mt_closed: f64,
    pub mt_generic: f64,
    pub star_closed: f64,
    pub star_generic: f64,
    pub p_closed: f64,
    pub p_generic: f64,
}

impl RowCrossCheck {
    pub fn max_abs_diff(&self) -> f64 {
        (self.mt_closed - self.mt_generic)
            .abs()
            .max((self.star_closed - self.star_generic).abs())
            .max((self.p_closed - self.p_generic).abs())
    }
}

/// Recomputes each bound from `U(2M)`: operator Mandelstam–Tamm from the
/// trace, `T★` from the least-deviation logarithm in `L({iA, iB})`, and the
/// Poggi bound from the eigenphase hull.
pub fn cross_check_row(
    p: &ZigzagParams,
    m: usize,
    basis: &AlgebraBasis,
    cfg: &BranchSearchConfig,
    tol: &Tolerances,
) -> Result<RowCrossCheck> {
    let u = u_2m(p, m)?;
    let period = zigzag_schedule(p, 1)?;
    let star = min_dev_log(&u, Some(basis), cfg, tol)?.value / mean_dev(&period);
    Ok(RowCrossCheck {
        m,
        mt_closed: t_mt_closed(p, m),
        mt_generic: mt_choi_bound(&u, &period, tol)?,
        star_closed: t_star_closed(p, m),
        star_generic: star,
        p_closed: t_p_closed(p, m),
        p_generic: poggi_bound(&u, &period, tol)?,
    })
}

/// Relative spread `(max − min)/mean` of `T★/T_real` over `ms`.
pub fn ratio_flatness(rows: &[FigureRow]) -> f64 {
    let r: Vec<f64> = rows.iter().filter(|x| x.m > 0).map(|x| x.ratio_star).collect();
    let (lo, hi) = r.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));
    (hi - lo) / (r.iter().sum::<f64>() / r.len() as f64)
}

/// Non-continuity of the least-norm logarithm for the piecewise field
/// `π cos t·σz` (`t < π/2`), `π cos t·σx` (`π/2 ≤ t < π`).
#[derive(Clone, Debug)]
pub struct BranchJumpWitness {
    pub before: ComplexMatrix,
    pub after: ComplexMatrix,
    /// `‖C[π/2 + ε] − C[π/2 − ε]‖F`.
    pub jump: f64,
}

/// Schedule with exactly integrated segment strengths up to time `t`.
pub fn branch_jump_schedule(t: f64) -> Result<ControlSchedule> {
    let z = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]])?;
    let x = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])?;
    let half = PI / 2.0;
    // ∫ π cos s ds over [t₀, t₁] applied as a unit-strength segment of that length.
    let mut segs = Vec::new();
    let first_end = t.min(half);
    if first_end > 0.0 {
        segs.push((z.scale_re(PI * first_end.sin() / first_end), first_end));
    }
    if t > half {
        let dt = t - half;
        segs.push((x.scale_re(PI * (t.sin() - 1.0) / dt), dt));
    }
    ControlSchedule::new(segs)
}

pub fn branch_jump_witness(eps: f64, cfg: &BranchSearchConfig, tol: &Tolerances) -> Result<BranchJumpWitness> {
    let gens = [
        ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]])?.mul_i(),
        ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])?.mul_i(),
    ];
    let basis = closure(&gens, tol)?;
    let log_at = |t: f64| -> Result<ComplexMatrix> {
        let u = branch_jump_schedule(t)?.propagate(2);
        Ok(min_norm_log(&u, Some(&basis), cfg, tol)?.argmin_c.mul_i())
    };
    let before = log_at(PI / 2.0 - eps)?;
    let after = log_at(PI / 2.0 + eps)?;
    let jump = (&after - &before).frobenius_norm();
    Ok(BranchJumpWitness { before, after, jump })
}

/// Grid search for `e^C = e^Ae^B` with `C = i[[α, γ], [0, −α]]` and the
/// non-anti-Hermitian `A = iπ/2·[[1, 1], [0, −1]]`, `B = iπ/2·[[1, −1], [0, −1]]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TriangularWitness {
    /// Smallest `‖e^C − e^Ae^B‖F` found.
    pub min_residual: f64,
    pub alpha: f64,
    pub gamma: Complex64,
    pub evaluated: usize,
}

fn triangular_exp(alpha: f64, gamma: Complex64) -> [Complex64; 4] {
    let off = if alpha.abs() < 1e-12 { c64(0.0, 1.0) * gamma } else { c64(0.0, 1.0) * gamma * (alpha.sin() / alpha) };
    [Complex64::from_polar(1.0, alpha), off, c64(0.0, 0.0), Complex64::from_polar(1.0, -alpha)]
}

/// `e^Ae^B` for the triangular pair.
pub fn triangular_target() -> ComplexMatrix {
    let h = PI / 2.0;
    let a =
        ComplexMatrix::from_rows(&[vec![c64(0.0, h), c64(0.0, h)], vec![c64(0.0, 0.0), c64(0.0, -h)]]).expect("finite");
    let b = ComplexMatrix::from_rows(&[vec![c64(0.0, h), c64(0.0, -h)], vec![c64(0.0, 0.0), c64(0.0, -h)]])
        .expect("finite");
    mat_exp(&a).matmul(&mat_exp(&b))
}

/// Searches `α ∈ [−10, 10]` with `alpha_steps` points and `γ` on a square
/// grid of half-width `gamma_max` with `gamma_steps` points per axis.
pub fn triangular_witness(alpha_steps: usize, gamma_max: f64, gamma_steps: usize) -> TriangularWitness {
    let target = triangular_target();
    let t = target.as_slice();
    let mut best = TriangularWitness { min_residual: f64::INFINITY, alpha: 0.0, gamma: c64(0.0, 0.0), evaluated: 0 };
    let axis = |i: usize, n: usize, lo: f64, hi: f64| lo + (hi - lo) * i as f64 / (n - 1).max(1) as f64;
    for ia in 0..alpha_steps {
        let alpha = axis(ia, alpha_steps, -10.0, 10.0);
        for ir in 0..gamma_steps {
            for ii in 0..gamma_steps {
                let gamma =
                    c64(axis(ir, gamma_steps, -gamma_max, gamma_max), axis(ii, gamma_steps, -gamma_max, gamma_max));
                let e = triangular_exp(alpha, gamma);
                let r = e.iter().zip(t).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt();
                best.evaluated += 1;
                if r < best.min_residual {
                    best = TriangularWitness { min_residual: r, alpha, gamma, evaluated: best.evaluated };
                }
            }
        }
    }
    best
}

/// Matrix `i[[α, γ], [0, −α]]`.
pub fn triangular_element(alpha: f64, gamma: Complex64) -> ComplexMatrix {
    ComplexMatrix::from_rows(&[vec![c64(0.0, alpha), c64(0.0, 1.0) * gamma], vec![c64(0.0, 0.0), c64(0.0, -alpha)]])
        .expect("finite")
}

/// Values of `d` for the two three-level algebras with different minimal logs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AlgebraDependence {
    pub d1: f64,
    pub d2: f64,
}

/// Four-dimensional algebra `s(u(2) ⊕ u(1))` and the one-dimensional span of
/// `diag(i, 2i, −3i)`.
pub fn reference_algebras(tol: &Tolerances) -> Result<(AlgebraBasis, AlgebraBasis)> {
    let z = c64(0.0, 0.0);
    let diag = |v: [f64; 3]| ComplexMatrix::from_diag(&v.map(|x| c64(0.0, x)));
    let sym = ComplexMatrix::from_rows(&[vec![z, c64(0.0, 1.0), z], vec![c64(0.0, 1.0), z, z], vec![z; 3]])?;
    let anti = ComplexMatrix::from_real_rows(&[&[0.0, 1.0, 0.0], &[-1.0, 0.0, 0.0], &[0.0, 0.0, 0.0]])?;
    let l1 = closure(&[sym, anti, diag([1.0, -1.0, 0.0]), diag([1.0, 1.0, -2.0])], tol)?;
    let l2 = closure(&[diag([1.0, 2.0, -3.0])], tol)?;
    Ok((l1, l2))
}

pub fn algebra_dependence(cfg: &BranchSearchConfig, tol: &Tolerances) -> Result<AlgebraDependence> {
    let (l1, l2) = reference_algebras(tol)?;
    let u1 = ComplexMatrix::from_real_rows(&[&[-1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, -1.0]])?;
    let id = ComplexMatrix::identity(3);
    Ok(AlgebraDependence {
        d1: crate::metric::distance(&u1, &id, Some(&l1), cfg, tol)?.value,
        d2: crate::metric::distance(&u1, &id, Some(&l2), cfg, tol)?.value,
    })
}

/// Closed-form energy spread `2√(a²+b²)` against the spectra of the segments.
pub fn energy_spread_check(p: &ZigzagParams) -> Result<f64> {
    let s = zigzag_schedule(p, 1)?;
    Ok((max_energy_spread(&s) - 2.0 * p.radius()).abs())
}

/// Eigenphase-hull arc of `U(2M)`, the generic counterpart of `φ`.
pub fn poggi_phi_generic(p: &ZigzagParams, m: usize) -> Result<f64> {
    Ok(eigenphase_arc(&u_2m(p, m)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn parameter_validation() {
        assert!(ZigzagParams::new(PI / 500.0, -PI / 1200.0, PI / 1000.0).is_ok());
        assert!(ZigzagParams::new(-0.1, 0.0, 0.0).is_err());
        assert!(ZigzagParams::new(1.2, 1.2, 0.0).is_err());
        assert!(ZigzagParams::new(0.01, 0.001, 0.5).is_err());
        let p = ZigzagParams::default();
        let r = p.radius();
        // Oracle: direct evaluation of the defining arctangent.
        assert!((p.theta() - (p.a / r * r.tan()).atan()).abs() < 1e-18);
        assert!(p.theta() > p.c && p.theta() < p.radius());
    }

    #[test]
    fn hamiltonians_have_stated_spectrum_and_norm() {
        let p = ZigzagParams::default();
        let (a, b) = build_zigzag(&p).unwrap();
        for h in [&a, &b] {
            assert!(h.is_hermitian(0.0));
            assert!((h.frobenius_norm() - p.hamiltonian_norm()).abs() < 1e-15);
            let (l, _) = crate::numerics::hermitian_eigh(h);
            let mut expected = [-p.radius(), p.c, p.radius()];
            expected.sort_by(|x, y| x.partial_cmp(y).unwrap());
            for (x, y) in l.iter().zip(expected) {
                assert!((x - y).abs() < 1e-15);
            }
            assert!((crate::numerics::dev(h, 1e-12).unwrap() - p.dev_h()).abs() < 1e-15);
        }
        let flat = ZigzagParams { a: 0.3, b: 0.0, c: 0.1 };
        let (a0, b0) = build_zigzag(&flat).unwrap();
        assert!(a0.approx_eq(&b0, 0.0));
    }

    #[test]
    fn product_matches_diagonal_form() {
        let p = ZigzagParams::default();
        assert!(u_2m(&p, 0).unwrap().approx_eq(&ComplexMatrix::identity(3), 0.0));
        for m in [1, 7, 250, 500] {
            let u = u_2m(&p, m).unwrap();
            let v = zigzag_schedule(&p, m).unwrap().propagate(3);
            assert!(u.approx_eq(&v, 1e-10));
        }
        assert!(phase_mismatch(&u_2m(&p, 1).unwrap(), &expected_phases(&p, 1)) < 1e-12);
    }

    #[test]
    fn algebra_is_four_dimensional() {
        let b = zigzag_algebra(&ZigzagParams::default(), &tol()).unwrap();
        assert_eq!(b.len(), 4);
    }

    #[test]
    fn closed_forms_match_generic_paths() {
        let p = ZigzagParams::default();
        let basis = zigzag_algebra(&p, &tol()).unwrap();
        let cfg = BranchSearchConfig::default();
        for m in [1, 50, 249, 250, 251, 333, 334, 400, 499, 500] {
            let c = cross_check_row(&p, m, &basis, &cfg, &tol()).unwrap();
            assert!(c.max_abs_diff() < 1e-8, "{c:?}");
        }
    }

    #[test]
    fn poggi_arc_regimes() {
        let p = ZigzagParams::default();
        for m in [1, 100, 249, 260, 333, 334, 350, 420, 499, 500] {
            let generic = poggi_phi_generic(&p, m).unwrap();
            assert!((poggi_phi_closed(&p, m) - generic).abs() < 1e-9, "M = {m}");
        }
        assert_eq!(t_p_closed(&p, 0), 0.0);
    }

    #[test]
    fn sweep_orderings() {
        let p = ZigzagParams::default();
        let ms: Vec<usize> = (1..=500).collect();
        let rows = figure1_sweep(&p, &ms).unwrap();
        for r in &rows {
            assert!(r.t_mt <= r.t_star + 1e-9, "{r:?}");
            assert!(r.t_star <= r.t_real + 1e-9, "{r:?}");
        }
        let r250 = &rows[249];
        assert!(r250.t_star / r250.t_mt > 1.0);
        assert!(figure1_sweep(&p, &[]).is_err());
        assert!(figure1_sweep(&p, &[1001]).is_err());
    }

    #[test]
    fn small_m_ratio_is_flat() {
        let p = ZigzagParams::default();
        let rows = figure1_sweep(&p, &(1..=20).collect::<Vec<_>>()).unwrap();
        // Golden values from the closed forms.
        assert!(ratio_flatness(&rows) < 1e-12);
        assert!((rows[0].ratio_star - 0.928_376_048_935_719_5).abs() < 1e-12);
        let mt: Vec<f64> = rows.iter().map(|r| r.ratio_mt).collect();
        let spread =
            mt.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - mt.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(spread > 5e-4);
    }

    #[test]
    fn widening_window_never_increases_closed_t_star() {
        let p = ZigzagParams::default();
        for m in [3, 120, 260, 480] {
            let (lo, hi) = branch_window(&p, m);
            let base = t_star_closed_window(&p, m, (lo, hi));
            assert!(t_star_closed_window(&p, m, (lo - 5, hi + 5)) <= base);
            assert_eq!(t_star_closed_window(&p, m, (lo - 5, hi + 5)), base);
        }
    }

    #[test]
    fn csv_is_deterministic() {
        let p = ZigzagParams::default();
        let rows = figure1_sweep(&p, &[1, 2, 3]).unwrap();
        let mut a = Vec::new();
        let mut b = Vec::new();
        write_figure_csv(&rows, &mut a).unwrap();
        write_figure_csv(&rows, &mut b).unwrap();
        assert_eq!(a, b);
        let text = String::from_utf8(a).unwrap();
        assert!(text.starts_with("M,T_real,T_MT,T_star,T_P,ratio_MT,ratio_star,ratio_P\n"));
        assert_eq!(text.lines().count(), 4);
        assert!(figure_svg(&rows).contains("<polyline"));
    }

    #[test]
    fn branch_jump_exceeds_half_pi() {
        let w = branch_jump_witness(0.01, &BranchSearchConfig::default(), &tol()).unwrap();
        assert!(w.jump > PI / 2.0);
        // Oracle: the least-norm logs are −π sin t·σz and −π sin t·σx on the two sides.
        let s = (PI / 2.0 - 0.01).sin();
        assert!((w.jump - 2.0 * PI * s).abs() < 1e-9, "{}", w.jump);
    }

    #[test]
    fn branch_jump_schedule_integrates_exactly() {
        for t in [0.3, PI / 2.0 - 0.01, PI / 2.0 + 0.01, 2.5] {
            let u = branch_jump_schedule(t).unwrap().propagate(2);
            let gen = if t < PI / 2.0 {
                ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]).unwrap()
            } else {
                ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap()
            };
            let expected = mat_exp(&gen.scale(c64(0.0, -PI * t.sin())));
            assert!(u.approx_eq(&expected, 1e-12));
        }
    }

    #[test]
    fn triangular_target_and_exponential() {
        let target = triangular_target();
        let expected = ComplexMatrix::from_real_rows(&[&[-1.0, 2.0], &[0.0, -1.0]]).unwrap();
        assert!(target.approx_eq(&expected, 1e-14));
        for (alpha, gamma) in [(0.7, c64(0.3, -1.2)), (0.0, c64(2.0, 1.0)), (-3.0, c64(-0.5, 0.5))] {
            let e = triangular_exp(alpha, gamma);
            let g = crate::numerics::exp_general(&triangular_element(alpha, gamma));
            for (x, y) in e.iter().zip(g.as_slice()) {
                assert!((x - y).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn triangular_grid_never_reaches_target() {
        let w = triangular_witness(401, 10.0, 41);
        assert!(w.min_residual > 1e-6);
        assert_eq!(w.evaluated, 401 * 41 * 41);
    }

    #[test]
    fn algebra_dependent_distance_values() {
        let d = algebra_dependence(&BranchSearchConfig::default(), &tol()).unwrap();
        assert!((d.d1 - 2f64.sqrt() * PI).abs() < 1e-9);
        assert!((d.d2 - 14f64.sqrt() * PI).abs() < 1e-9);
    }

    #[test]
    fn energy_spread_closed_form() {
        assert!(energy_spread_check(&ZigzagParams::default()).unwrap() < 1e-15);
    }
}
