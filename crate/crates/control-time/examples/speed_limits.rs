//! Bound comparison for a random schedule and a refined commutator bound.

use control_time::bounds::{bound_report, lee_refined_bound, BoundReport};
use control_time::lie::closure;
use control_time::metric::BranchSearchConfig;
use control_time::numerics::{pauli, ComplexMatrix, Tolerances};
use control_time::random;
use control_time::schedule::ControlSchedule;

fn main() -> control_time::Result<()> {
    let tol = Tolerances::default();
    let cfg = BranchSearchConfig::default();
    let mut rng = random::rng(11);

    let gens = [random::traceless_anti_hermitian(&mut rng, 3, 1.0), random::traceless_anti_hermitian(&mut rng, 3, 1.0)];
    let basis = closure(&gens, &tol)?;
    let schedule = random::schedule_in_algebra(&mut rng, &basis, 4, 0.8);
    let r = bound_report(&schedule, None, Some(&basis), &cfg, &tol)?;
    println!("{}", BoundReport::CSV_HEADER.join(","));
    println!("{}", r.csv_record().join(","));
    println!(
        "T_ML ≤ T_MT ≤ T★ ≤ T: {:.6} ≤ {:.6} ≤ {:.6} ≤ {:.6}",
        r.t_ml.unwrap_or(f64::NAN),
        r.t_mt,
        r.t_star.unwrap_or(f64::NAN),
        r.t_real
    );

    let id = ComplexMatrix::identity(2);
    let h0 = pauli::z().kron(&id);
    let control = id.kron(&pauli::x());
    let two_qubit = ControlSchedule::new(vec![(&h0 + &control, 0.7), (h0.clone(), 0.4)])?;
    let u = two_qubit.propagate(4);
    let lee = lee_refined_bound(&u, &h0, &pauli::x().kron(&id), None, &cfg, &tol)?;
    println!("commutator bound {:.6}, metric refinement {:.6}", lee.original, lee.refined);
    Ok(())
}
