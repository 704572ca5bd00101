//! Algebra-constrained distance `d(U₁, U₂) = min ‖C‖F` over logarithms
//! `C ∈ L` of `U₁U₂⁻¹`, evaluated by branch search over eigenphase shifts.
//!
//! Candidates are `C(k̄) = V diag(i(φₙ + 2πkₙ)) V†` with `kₙ ∈ [−k_max, k_max]`.
//! Inside a cluster of degenerate eigenphases the eigenbasis is not unique; it
//! is fixed by diagonalising a generic element of the part of `L` that is
//! block diagonal with respect to the clusters, so that shifts may differ
//! between vectors of one cluster.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lie::AlgebraBasis;
use crate::numerics::{hermitian_eigh, reconstruct, unitary_eig, ComplexMatrix, Tolerances};

/// Upper limit on the number of branch vectors enumerated in one search.
pub const MAX_CANDIDATES: usize = 5_000_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BranchSearchConfig {
    /// Eigenphase shifts `2πk` are searched over `|k| ≤ k_max`.
    pub k_max: i64,
    /// Eigenvalues closer than this on the unit circle form one cluster.
    pub degenerate_tol: f64,
}

impl Default for BranchSearchConfig {
    fn default() -> Self {
        Self { k_max: 3, degenerate_tol: 1e-9 }
    }
}

impl BranchSearchConfig {
    pub fn with_k_max(k_max: i64) -> Self {
        Self { k_max, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k_max < 0 {
            return Err(Error::InvalidInput(format!("k_max must be non-negative, got {}", self.k_max)));
        }
        if !(self.degenerate_tol >= 0.0 && self.degenerate_tol.is_finite()) {
            return Err(Error::InvalidTolerance(format!("degenerate_tol {}", self.degenerate_tol)));
        }
        Ok(())
    }
}

/// Minimiser found by a branch search.
#[derive(Clone, Debug)]
pub struct DistanceResult {
    /// Objective value: `‖C‖F` for distances, `dev(iC)` for deviation searches.
    pub value: f64,
    /// Anti-Hermitian logarithm attaining `value`.
    pub argmin_c: ComplexMatrix,
    /// Branch offsets of the minimiser in the adapted eigenbasis.
    pub branch: Vec<i64>,
    pub candidates_examined: usize,
    /// Whether the algebra filter was active.
    pub constrained: bool,
    /// No degenerate eigenphases and every `|kₙ| < k_max`.
    pub exact: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Objective {
    Norm,
    Dev,
}

/// Eigen-decomposition with clustered phases and an algebra-adapted basis.
struct Spectrum {
    phases: Vec<f64>,
    vectors: ComplexMatrix,
    degenerate: bool,
}

fn check_unitary(u: &ComplexMatrix, tol: &Tolerances) -> Result<()> {
    let residual = u.unitary_residual();
    if residual > tol.eq_tol {
        return Err(Error::NotUnitary { residual });
    }
    Ok(())
}

fn clusters(phases: &[f64], tol: f64) -> Vec<Vec<usize>> {
    let n = phases.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let gap = (Complex64::from_polar(1.0, phases[i]) - Complex64::from_polar(1.0, phases[j])).norm();
            if gap <= tol {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    let mut out: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        match out.iter_mut().find(|c| c[0] == r) {
            Some(c) => c.push(i),
            None => out.push(vec![i]),
        }
    }
    out
}

/// Generic element of `{X ∈ L : X = Σ_c P_c X P_c}`.
fn block_diagonal_generic(basis: &AlgebraBasis, groups: &[Vec<usize>], vectors: &ComplexMatrix) -> ComplexMatrix {
    let dim = vectors.dim();
    let cluster_of: Vec<usize> = {
        let mut c = vec![0; dim];
        for (g, members) in groups.iter().enumerate() {
            for &i in members {
                c[i] = g;
            }
        }
        c
    };
    // Off-block part of each basis element in the eigenbasis, flattened to reals.
    let cols: Vec<Vec<f64>> = basis
        .elements()
        .iter()
        .map(|e| {
            let t = vectors.adjoint().matmul(e).matmul(vectors);
            let mut v = Vec::with_capacity(2 * dim * dim);
            for i in 0..dim {
                for j in 0..dim {
                    let z = if cluster_of[i] == cluster_of[j] { Complex64::new(0.0, 0.0) } else { t.get(i, j) };
                    v.push(z.re);
                    v.push(z.im);
                }
            }
            v
        })
        .collect();
    let m = cols.len();
    let gram = DMatrix::from_fn(m, m, |i, j| cols[i].iter().zip(&cols[j]).map(|(a, b)| a * b).sum::<f64>());
    let eig = SymmetricEigen::new(gram);
    let top = eig.eigenvalues.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    let null_tol = 1e-18 * top.max(1.0);
    let golden = 0.618_033_988_749_894_9;
    let mut out = ComplexMatrix::zeros(dim);
    let mut t = 0usize;
    for (idx, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda.abs() > null_tol {
            continue;
        }
        t += 1;
        let weight = 0.5 + (t as f64 * golden).fract();
        for (i, e) in basis.elements().iter().enumerate() {
            out.axpy(weight * eig.eigenvectors[(i, idx)], e);
        }
    }
    out
}

fn spectrum(w: &ComplexMatrix, basis: Option<&AlgebraBasis>, cfg: &BranchSearchConfig) -> Spectrum {
    let (mut phases, mut vectors) = unitary_eig(w);
    let groups = clusters(&phases, cfg.degenerate_tol);
    let degenerate = groups.iter().any(|g| g.len() > 1);
    if !degenerate {
        return Spectrum { phases, vectors, degenerate };
    }
    for g in groups.iter().filter(|g| g.len() > 1) {
        let mean: Complex64 = g.iter().map(|&i| Complex64::from_polar(1.0, phases[i])).sum();
        let common = mean.arg();
        for &i in g {
            phases[i] = common;
        }
    }
    if let Some(basis) = basis {
        let y = block_diagonal_generic(basis, &groups, &vectors);
        let yt = vectors.adjoint().matmul(&y).matmul(&vectors);
        let dim = w.dim();
        for g in groups.iter().filter(|g| g.len() > 1) {
            let block = ComplexMatrix::from_fn(g.len(), |a, b| yt.get(g[a], g[b]));
            let (_, rot) = hermitian_eigh(&block.mul_i());
            let old: Vec<Vec<Complex64>> =
                g.iter().map(|&col| (0..dim).map(|r| vectors.get(r, col)).collect()).collect();
            for (b, &col) in g.iter().enumerate() {
                for r in 0..dim {
                    let z: Complex64 = old.iter().enumerate().map(|(a, v)| v[r] * rot.get(a, b)).sum();
                    vectors.set(r, col, z);
                }
            }
        }
    }
    Spectrum { phases, vectors, degenerate }
}

fn objective_value(x: &[f64], objective: Objective) -> f64 {
    match objective {
        Objective::Norm => x.iter().map(|v| v * v).sum::<f64>().sqrt(),
        Objective::Dev => {
            let n = x.len() as f64;
            let mean = x.iter().sum::<f64>() / n;
            let var = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
            var.max(0.0).sqrt()
        }
    }
}

fn flatten(x: &ComplexMatrix) -> Vec<f64> {
    x.as_slice().iter().flat_map(|z| [z.re, z.im]).collect()
}

fn search(
    w: &ComplexMatrix,
    basis: Option<&AlgebraBasis>,
    cfg: &BranchSearchConfig,
    tol: &Tolerances,
    objective: Objective,
) -> Result<DistanceResult> {
    cfg.validate()?;
    check_unitary(w, tol)?;
    if let Some(b) = basis {
        if b.dim_space() != w.dim() {
            return Err(Error::DimensionMismatch { expected: b.dim_space(), found: w.dim() });
        }
    }
    let spec = spectrum(w, basis, cfg);
    let dim = w.dim();
    let kmax = cfg.k_max;
    let width = (2 * kmax + 1) as usize;
    let build = |k: &[i64]| -> ComplexMatrix {
        let d: Vec<Complex64> =
            spec.phases.iter().zip(k).map(|(p, &kk)| Complex64::new(0.0, p + 2.0 * PI * kk as f64)).collect();
        reconstruct(&spec.vectors, &d).anti_hermitian_part()
    };
    let finish = |k: Vec<i64>, value: f64, examined: usize| DistanceResult {
        value,
        argmin_c: build(&k),
        exact: !spec.degenerate && k.iter().all(|kk| kk.abs() < kmax),
        branch: k,
        candidates_examined: examined,
        constrained: basis.is_some(),
    };

    if basis.is_none() && objective == Objective::Norm {
        // Separable: each eigenvalue independently takes its smallest shift.
        let k: Vec<i64> = spec
            .phases
            .iter()
            .map(|p| {
                (-kmax..=kmax)
                    .min_by(|a, b| {
                        let fa = (p + 2.0 * PI * *a as f64).abs();
                        let fb = (p + 2.0 * PI * *b as f64).abs();
                        fa.partial_cmp(&fb).unwrap()
                    })
                    .unwrap_or(0)
            })
            .collect();
        let x: Vec<f64> = spec.phases.iter().zip(&k).map(|(p, kk)| p + 2.0 * PI * *kk as f64).collect();
        return Ok(finish(k, objective_value(&x, objective), dim * width));
    }

    let total = (width as f64).powi(dim as i32);
    if total > MAX_CANDIDATES as f64 {
        return Err(Error::InvalidInput(format!("branch window of {total:e} candidates exceeds {MAX_CANDIDATES}")));
    }

    // Membership residual is affine in k̄: r(k̄) = r₀ + Σ kₙ qₙ.
    let (r0, q) = match basis {
        Some(b) => {
            let base = build(&vec![0; dim]);
            let r0 = flatten(&(&base - &b.project(&base)?.0));
            let q: Vec<Vec<f64>> = (0..dim)
                .map(|n| {
                    let mut e = vec![Complex64::new(0.0, 0.0); dim];
                    e[n] = Complex64::new(0.0, 2.0 * PI);
                    let p = reconstruct(&spec.vectors, &e);
                    flatten(&(&p - &b.project(&p).map(|x| x.0).unwrap_or_else(|_| p.clone())))
                })
                .collect();
            (r0, q)
        }
        None => (Vec::new(), Vec::new()),
    };

    let mut k = vec![-kmax; dim];
    let mut best: Option<(f64, Vec<i64>)> = None;
    let mut examined = 0usize;
    let mut resid = vec![0.0; r0.len()];
    loop {
        examined += 1;
        let admissible = if basis.is_some() {
            resid.copy_from_slice(&r0);
            for (n, &kk) in k.iter().enumerate() {
                if kk != 0 {
                    for (r, qv) in resid.iter_mut().zip(&q[n]) {
                        *r += kk as f64 * qv;
                    }
                }
            }
            resid.iter().map(|v| v * v).sum::<f64>().sqrt() <= tol.algebra_tol
        } else {
            true
        };
        if admissible {
            let x: Vec<f64> = spec.phases.iter().zip(&k).map(|(p, kk)| p + 2.0 * PI * *kk as f64).collect();
            let v = objective_value(&x, objective);
            let better = match &best {
                None => true,
                Some((b, _)) => v < b - 1e-12 * b.max(1.0),
            };
            if better {
                best = Some((v, k.clone()));
            }
        }
        // Lexicographic odometer, last index fastest.
        let mut pos = dim;
        loop {
            if pos == 0 {
                return best.map(|(v, kb)| finish(kb, v, examined)).ok_or(Error::NoAdmissibleCandidate);
            }
            pos -= 1;
            if k[pos] < kmax {
                k[pos] += 1;
                for kk in &mut k[pos + 1..] {
                    *kk = -kmax;
                }
                break;
            }
        }
    }
}

/// Smallest-norm logarithm of `w` in the algebra (or in `u(D)` without a basis).
pub fn min_norm_log(
    w: &ComplexMatrix,
    basis: Option<&AlgebraBasis>,
    cfg: &BranchSearchConfig,
    tol: &Tolerances,
) -> Result<DistanceResult> {
    search(w, basis, cfg, tol, Objective::Norm)
}

/// Logarithm `C` of `w` in the algebra minimising `dev(iC)`.
pub fn min_dev_log(
    w: &ComplexMatrix,
    basis: Option<&AlgebraBasis>,
    cfg: &BranchSearchConfig,
    tol: &Tolerances,
) -> Result<DistanceResult> {
    search(w, basis, cfg, tol, Objective::Dev)
}

/// `d(U₁, U₂)`: smallest `‖C‖F` with `e^C = U₁U₂⁻¹`, `C` in the algebra when given.
pub fn distance(
    u1: &ComplexMatrix,
    u2: &ComplexMatrix,
    basis: Option<&AlgebraBasis>,
    cfg: &BranchSearchConfig,
    tol: &Tolerances,
) -> Result<DistanceResult> {
    if u1.dim() != u2.dim() {
        return Err(Error::DimensionMismatch { expected: u1.dim(), found: u2.dim() });
    }
    check_unitary(u1, tol)?;
    check_unitary(u2, tol)?;
    min_norm_log(&u1.matmul(&u2.adjoint()), basis, cfg, tol)
}

/// Outcome of checking the metric axioms on a sample.
#[derive(Clone, Debug, Default)]
pub struct MetricAxiomReport {
    pub pairs_checked: usize,
    pub triples_checked: usize,
    pub violations: Vec<String>,
}

impl MetricAxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Identity, positivity, symmetry and triangle inequality on all pairs and
/// triples of `sample`.
pub fn verify_metric_axioms(
    sample: &[ComplexMatrix],
    basis: Option<&AlgebraBasis>,
    cfg: &BranchSearchConfig,
    tol: &Tolerances,
) -> Result<MetricAxiomReport> {
    let n = sample.len();
    let slack = 10.0 * tol.eq_tol;
    let mut report = MetricAxiomReport::default();
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            d[i][j] = distance(&sample[i], &sample[j], basis, cfg, tol)?.value;
        }
    }
    for i in 0..n {
        if d[i][i] > slack {
            report.violations.push(format!("identity: d(U{i}, U{i}) = {:e}", d[i][i]));
        }
        for j in (i + 1)..n {
            report.pairs_checked += 1;
            let distinct = (&sample[i] - &sample[j]).frobenius_norm() > tol.eq_tol;
            if distinct && d[i][j] <= 0.0 {
                report.violations.push(format!("positivity: d(U{i}, U{j}) = 0 for distinct pair"));
            }
            if (d[i][j] - d[j][i]).abs() > slack {
                report.violations.push(format!("symmetry: d(U{i}, U{j}) = {} vs {}", d[i][j], d[j][i]));
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if i == j || j == k || i == k {
                    continue;
                }
                report.triples_checked += 1;
                if d[i][k] > d[i][j] + d[j][k] + slack {
                    report
                        .violations
                        .push(format!("triangle: d(U{i}, U{k}) = {} > {} + {}", d[i][k], d[i][j], d[j][k]));
                }
            }
        }
    }
    Ok(report)
}

/// `|d(U₁, U₂) − d(VU₁, VU₂)| ≤ 10·eq_tol`.
pub fn conjugation_invariance_check(
    u1: &ComplexMatrix,
    u2: &ComplexMatrix,
    v: &ComplexMatrix,
    basis: Option<&AlgebraBasis>,
    cfg: &BranchSearchConfig,
    tol: &Tolerances,
) -> Result<bool> {
    check_unitary(v, tol)?;
    let before = distance(u1, u2, basis, cfg, tol)?.value;
    let after = distance(&v.matmul(u1), &v.matmul(u2), basis, cfg, tol)?.value;
    Ok((before - after).abs() <= 10.0 * tol.eq_tol)
}
