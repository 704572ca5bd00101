//! Norm-bounded generator of `e^A e^B` and of a whole schedule.

use control_time::lie::closure;
use control_time::numerics::{mat_exp, Tolerances};
use control_time::random;
use control_time::synthesis::{synthesize_pair, synthesize_schedule, SynthesisConfig};

fn main() -> control_time::Result<()> {
    let tol = Tolerances::default();
    let cfg = SynthesisConfig::default();
    let mut rng = random::rng(3);

    let a = random::anti_hermitian(&mut rng, 3, 1.0);
    let b = random::anti_hermitian(&mut rng, 3, 1.0);
    let (c, trace) = synthesize_pair(&a, &b, &cfg, &tol)?;
    let target = mat_exp(&a).matmul(&mat_exp(&b));
    println!("‖A‖F + ‖B‖F = {:.6}", a.frobenius_norm() + b.frobenius_norm());
    println!("‖C‖F        = {:.6}", c.frobenius_norm());
    println!("‖e^C − e^A e^B‖F = {:.2e}", (&mat_exp(&c) - &target).frobenius_norm());
    println!("pieces m_a={} m_b={} n={}  sweeps {}", trace.m_a, trace.m_b, trace.n, trace.sweeps_used);
    println!("u: {:.6} → {:.6}", trace.u_history[0], trace.u_history.last().unwrap());

    let basis = closure(&[a.clone(), b.clone()], &tol)?;
    let schedule = random::schedule_in_algebra(&mut rng, &basis, 3, 0.6);
    let out = synthesize_schedule(&schedule, &basis, &cfg, &tol)?;
    println!("schedule: ‖C_T‖F = {:.6} ≤ ∫‖H‖F = {:.6}", out.c_t.frobenius_norm(), schedule.frobenius_action());
    Ok(())
}
