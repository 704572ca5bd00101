//! Counterexamples: a logarithm branch jump and an unreachable minimal generator.

use control_time::metric::BranchSearchConfig;
use control_time::numerics::Tolerances;
use control_time::zigzag::{branch_jump_witness, triangular_witness};

fn main() -> control_time::Result<()> {
    let w = branch_jump_witness(0.01, &BranchSearchConfig::default(), &Tolerances::default())?;
    println!("principal-log jump across t = π/2: {:.6} (π/2 = {:.6})", w.jump, std::f64::consts::FRAC_PI_2);

    let t = triangular_witness(401, 10.0, 41);
    println!(
        "triangular grid: {} points, min residual {:.4} at α={:.4}, |γ|={:.3}",
        t.evaluated,
        t.min_residual,
        t.alpha,
        t.gamma.norm()
    );
    Ok(())
}
