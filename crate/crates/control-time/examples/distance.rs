//! Algebra-restricted distance and its dependence on the algebra.

use control_time::metric::{distance, BranchSearchConfig};
use control_time::numerics::{pauli, ComplexMatrix, Tolerances};
use control_time::zigzag::algebra_dependence;

fn main() -> control_time::Result<()> {
    let tol = Tolerances::default();
    let cfg = BranchSearchConfig::default();

    let id = ComplexMatrix::identity(2);
    let d = distance(&id, &pauli::x(), None, &cfg, &tol)?;
    println!("d(I, σx) in u(2) = {:.12} (π = {:.12}) exact {}", d.value, std::f64::consts::PI, d.exact);

    let dep = algebra_dependence(&cfg, &tol)?;
    let (r2, r14) = (2f64.sqrt() * std::f64::consts::PI, 14f64.sqrt() * std::f64::consts::PI);
    println!("four-dimensional algebra: {:.12} (√2π = {r2:.12})", dep.d1);
    println!("one-dimensional algebra:  {:.12} (√14π = {r14:.12})", dep.d2);
    Ok(())
}
