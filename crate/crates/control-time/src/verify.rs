//! Seeded property suite over every module, reported as pass counts.

use std::f64::consts::PI;
use std::fmt;

use serde::Serialize;

use crate::bch::{check_norm_inequality, WordCoefficientTable};
use crate::bounds::{bound_report, nielsen_metric_check};
use crate::error::Result;
use crate::lie::closure;
use crate::metric::{conjugation_invariance_check, distance, verify_metric_axioms, BranchSearchConfig};
use crate::numerics::{mat_exp, pauli, ComplexMatrix, Tolerances};
use crate::random;
use crate::schedule::ControlSchedule;
use crate::synthesis::{small_time_log, synthesize_pair, synthesize_schedule, SynthesisConfig};
use crate::zigzag::{
    algebra_dependence, branch_jump_witness, cross_check_row, figure1_sweep, triangular_witness, zigzag_algebra,
    ZigzagParams,
};

/// Pass count for one property.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropertyCount {
    pub name: String,
    pub passed: usize,
    pub total: usize,
    /// First failure, if any.
    pub detail: Option<String>,
}

impl PropertyCount {
    fn new(name: &str) -> Self {
        Self { name: name.to_string(), passed: 0, total: 0, detail: None }
    }

    fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.total += 1;
        if ok {
            self.passed += 1;
        } else if self.detail.is_none() {
            self.detail = Some(detail());
        }
    }

    fn record_result<T>(&mut self, r: Result<T>, check: impl FnOnce(&T) -> (bool, String)) {
        match r {
            Ok(v) => {
                let (ok, msg) = check(&v);
                self.record(ok, || msg);
            }
            Err(e) => self.record(false, || e.to_string()),
        }
    }

    pub fn ok(&self) -> bool {
        self.passed == self.total
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub properties: Vec<PropertyCount>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(PropertyCount::ok)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "seed {}", self.seed)?;
        for p in &self.properties {
            let tag = if p.ok() { "PASS" } else { "FAIL" };
            write!(f, "{tag} {:<34} {}/{}", p.name, p.passed, p.total)?;
            if let Some(d) = &p.detail {
                write!(f, "  ({d})")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Sample sizes of the suite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerifySizes {
    pub synthesis_pairs: usize,
    pub norm_inequality_pairs: usize,
    pub schedules: usize,
    pub metric_samples: usize,
    pub conjugation_triples: usize,
    pub small_time_schedules: usize,
    pub nielsen_pairs: usize,
    pub ordering_instances: usize,
}

impl Default for VerifySizes {
    fn default() -> Self {
        Self {
            synthesis_pairs: 12,
            norm_inequality_pairs: 1000,
            schedules: 6,
            metric_samples: 8,
            conjugation_triples: 10,
            small_time_schedules: 50,
            nielsen_pairs: 30,
            ordering_instances: 50,
        }
    }
}

pub fn verify_suite(seed: u64) -> Result<VerifyReport> {
    verify_suite_with(seed, &VerifySizes::default(), &Tolerances::default())
}

pub fn verify_suite_with(seed: u64, sizes: &VerifySizes, tol: &Tolerances) -> Result<VerifyReport> {
    let mut rng = random::rng(seed);
    let cfg = SynthesisConfig::default();
    let branch = BranchSearchConfig::default();
    let mut props = Vec::new();

    let mut p = PropertyCount::new("bch exact coefficients");
    let table = WordCoefficientTable::build(4)?;
    let q = |n: i64, d: i64| num_rational::BigRational::new(n.into(), d.into());
    let listed: [(&crate::bch::WordTable, &[u8], (i64, i64)); 11] = [
        (&table.f, &[], (1, 1)),
        (&table.f, &[0], (-1, 2)),
        (&table.f, &[1], (-1, 2)),
        (&table.f, &[0, 0], (1, 12)),
        (&table.f, &[0, 1], (-1, 6)),
        (&table.f, &[1, 0], (1, 3)),
        (&table.f, &[1, 1], (1, 12)),
        (&table.g, &[], (1, 2)),
        (&table.g, &[0], (1, 12)),
        (&table.g, &[1], (-1, 12)),
        (&table.h, &[], (-1, 12)),
    ];
    for (t, w, (n, d)) in listed {
        p.record(t.at(w) == &q(n, d), || format!("word {w:?}"));
    }
    props.push(p);

    let gate = cfg.constants.capital_delta_hat;
    let mut p = PropertyCount::new("norm inequality under gate");
    for i in 0..sizes.norm_inequality_pairs {
        let dim = 2 + i % 3;
        let a = random::anti_hermitian(&mut rng, dim, 0.999 * gate);
        let b = random::anti_hermitian(&mut rng, dim, 0.999 * gate);
        p.record_result(check_norm_inequality(&a, &b, &cfg.tables, cfg.bch_order, gate, tol), |r| {
            (r.lhs <= r.rhs + 1e-9, format!("lhs {} rhs {}", r.lhs, r.rhs))
        });
    }
    props.push(p);

    let mut p = PropertyCount::new("pair synthesis");
    for i in 0..sizes.synthesis_pairs {
        let dim = 2 + i % 3;
        let a = random::anti_hermitian(&mut rng, dim, 1.0);
        let b = random::anti_hermitian(&mut rng, dim, 1.0);
        let basis = closure(&[a.clone(), b.clone()], tol)?;
        p.record_result(synthesize_pair(&a, &b, &cfg, tol), |(c, tr)| {
            let err = (&mat_exp(c) - &mat_exp(&a).matmul(&mat_exp(&b))).frobenius_norm();
            let res = basis.residual(c).unwrap_or(f64::INFINITY);
            let excess = c.frobenius_norm() - a.frobenius_norm() - b.frobenius_norm();
            let ok = err <= 1e-8 && res <= 1e-8 && excess <= 1e-8 && tr.min_descent_slack() >= -1e-10;
            (ok, format!("err {err:e} residual {res:e} excess {excess:e} slack {:e}", tr.min_descent_slack()))
        });
    }
    props.push(p);

    let mut p = PropertyCount::new("schedule synthesis bound");
    for _ in 0..sizes.schedules {
        let gens: Vec<_> = (0..2).map(|_| random::anti_hermitian(&mut rng, 3, 1.0)).collect();
        let basis = closure(&gens, tol)?;
        let s = random::schedule_in_algebra(&mut rng, &basis, 3, 0.6);
        p.record_result(synthesize_schedule(&s, &basis, &cfg, tol), |r| {
            let norm = r.c_t.frobenius_norm();
            let res = basis.residual(&r.c_t.mul_neg_i()).unwrap_or(f64::INFINITY);
            let err = (&mat_exp(&r.c_t.mul_neg_i()) - &s.propagate(3)).frobenius_norm();
            let ok = norm <= s.frobenius_action() + 1e-8 && res <= 1e-8 && err <= 1e-8;
            (ok, format!("‖C_T‖ {norm} action {} residual {res:e} err {err:e}", s.frobenius_action()))
        });
    }
    let h = random::hermitian(&mut rng, 3, 0.3);
    let single = ControlSchedule::new(vec![(h.clone(), 1.7)])?;
    let basis = closure(&[h.mul_i()], tol)?;
    p.record_result(synthesize_schedule(&single, &basis, &cfg, tol), |r| {
        let gap = (r.c_t.frobenius_norm() - single.frobenius_action()).abs();
        (gap < 1e-12, format!("single segment gap {gap:e}"))
    });
    props.push(p);

    let mut p = PropertyCount::new("metric axioms");
    let su2 = closure(&[pauli::x().mul_i(), pauli::y().mul_i()], tol)?;
    let sample: Vec<_> = (0..sizes.metric_samples).map(|_| random::algebra_unitary(&mut rng, &su2, 3.0)).collect();
    p.record_result(verify_metric_axioms(&sample, Some(&su2), &branch, tol), |r| {
        (r.passed(), r.violations.first().cloned().unwrap_or_default())
    });
    let zz = ZigzagParams::default();
    let zb = zigzag_algebra(&zz, tol)?;
    let triple: Result<Vec<_>> = (1..=3).map(|m| crate::zigzag::u_2m(&zz, m)).collect();
    p.record_result(triple.and_then(|t| verify_metric_axioms(&t, Some(&zb), &branch, tol)), |r| {
        (r.passed(), r.violations.first().cloned().unwrap_or_default())
    });
    props.push(p);

    let mut p = PropertyCount::new("left-multiplication invariance");
    let cfg2 = BranchSearchConfig { k_max: 2, ..branch };
    for _ in 0..sizes.conjugation_triples {
        let gens: Vec<_> = (0..2).map(|_| random::traceless_anti_hermitian(&mut rng, 3, 1.0)).collect();
        let su3 = closure(&gens, tol)?;
        let u1 = random::algebra_unitary(&mut rng, &su3, 2.0);
        let u2 = random::algebra_unitary(&mut rng, &su3, 2.0);
        let v = random::algebra_unitary(&mut rng, &su3, 2.0);
        p.record_result(conjugation_invariance_check(&u1, &u2, &v, Some(&su3), &cfg2, tol), |ok| {
            (*ok, "distance changed".into())
        });
    }
    props.push(p);

    let mut p = PropertyCount::new("small-time log defect");
    for i in 0..sizes.small_time_schedules {
        let dim = 2 + i % 3;
        let segs: Vec<_> = (0..3).map(|_| (random::hermitian(&mut rng, dim, 1.0), 1.0)).collect();
        let raw = ControlSchedule::new(segs)?;
        let alpha = raw.segments().iter().map(|s| crate::numerics::operator_norm(&s.h)).fold(0.0, f64::max);
        let beta = raw.segments().iter().map(|s| s.h.frobenius_norm()).fold(0.0, f64::max);
        let scale = (0.3 / (alpha * 3.0)).min(3.0 / (beta * 3.0));
        let s = ControlSchedule::new(raw.segments().iter().map(|x| (x.h.scale_re(scale), x.dt)).collect())?;
        p.record_result(small_time_log(&s, tol), |r| (r.defect <= r.bound, format!("{} > {}", r.defect, r.bound)));
    }
    props.push(p);

    let mut p = PropertyCount::new("nielsen metric chain");
    for t in [0.5, 1.0, 2.0] {
        let a = ControlSchedule::new(vec![(pauli::x(), t)])?;
        let b = ControlSchedule::new(vec![(ComplexMatrix::zeros(2), t)])?;
        p.record_result(nielsen_metric_check(&a, &b, None, &branch, tol), |r| {
            let ok = (r.lhs_frob - 2.0 * 2f64.sqrt() * (t / 2.0).sin()).abs() < 1e-12
                && (r.rhs - 2f64.sqrt() * t).abs() < 1e-12
                && r.holds(1e-9);
            (ok, format!("t = {t}: {} {} {}", r.lhs_frob, r.lhs_d, r.rhs))
        });
    }
    for _ in 0..sizes.nielsen_pairs {
        let gens: Vec<_> = (0..2).map(|_| random::traceless_anti_hermitian(&mut rng, 3, 1.0)).collect();
        let su3 = closure(&gens, tol)?;
        let a = random::schedule_in_algebra(&mut rng, &su3, 2, 0.5);
        let mut b_segs: Vec<_> =
            a.segments().iter().map(|s| (random::algebra_element(&mut rng, &su3, 0.3).mul_neg_i(), s.dt)).collect();
        b_segs.reverse();
        let total_b: f64 = b_segs.iter().map(|x| x.1).sum();
        let scale = a.total_time() / total_b;
        let b = ControlSchedule::new(b_segs.into_iter().map(|(h, dt)| (h, dt * scale)).collect())?;
        p.record_result(nielsen_metric_check(&a, &b, Some(&su3), &branch, tol), |r| {
            (r.holds(1e-9), format!("{} {} {}", r.lhs_frob, r.lhs_d, r.rhs))
        });
    }
    props.push(p);

    let mut p = PropertyCount::new("bound ordering");
    for i in 0..sizes.ordering_instances {
        let dim = 2 + i % 2;
        let gens: Vec<_> = (0..2).map(|_| random::anti_hermitian(&mut rng, dim, 1.0)).collect();
        let basis = closure(&gens, tol)?;
        let s = random::schedule_in_algebra(&mut rng, &basis, 3, 0.5);
        p.record_result(bound_report(&s, None, Some(&basis), &branch, tol), |r| match (r.t_ml, r.t_star) {
            (Some(ml), Some(star)) => {
                let ok = ml <= r.t_mt + 1e-9 && r.t_mt <= star + 1e-9 && star <= r.t_real + 1e-9;
                (ok, format!("ML {ml} MT {} star {star} real {}", r.t_mt, r.t_real))
            }
            _ => (false, "bound undefined".into()),
        });
    }
    props.push(p);

    let mut p = PropertyCount::new("zigzag closed forms");
    let ms: Vec<usize> = (1..=500).collect();
    match figure1_sweep(&zz, &ms) {
        Ok(rows) => {
            for r in &rows {
                p.record(r.t_mt <= r.t_star + 1e-9 && r.t_star <= r.t_real + 1e-9, || format!("M = {}", r.m));
            }
            p.record(rows[249].t_star > rows[249].t_mt, || "no gap at M = 250".into());
        }
        Err(e) => p.record(false, || e.to_string()),
    }
    for m in (1..=500).step_by(7) {
        p.record_result(cross_check_row(&zz, m, &zb, &branch, tol), |c| {
            (c.max_abs_diff() <= 1e-8, format!("M = {m}: {:e}", c.max_abs_diff()))
        });
    }
    props.push(p);

    let mut p = PropertyCount::new("witnesses");
    p.record_result(branch_jump_witness(0.01, &branch, tol), |w| (w.jump > PI / 2.0, format!("jump {}", w.jump)));
    let tri = triangular_witness(401, 10.0, 41);
    p.record(tri.min_residual > 1e-6, || format!("residual {}", tri.min_residual));
    p.record_result(algebra_dependence(&branch, tol), |d| {
        let ok = (d.d1 - 2f64.sqrt() * PI).abs() < 1e-9 && (d.d2 - 14f64.sqrt() * PI).abs() < 1e-9;
        (ok, format!("d1 {} d2 {}", d.d1, d.d2))
    });
    let u = crate::zigzag::u_2m(&zz, 5)?;
    p.record_result(distance(&u, &u, Some(&zb), &branch, tol), |d| (d.value < 1e-12, format!("{}", d.value)));
    props.push(p);

    Ok(VerifyReport { seed, properties: props })
}
