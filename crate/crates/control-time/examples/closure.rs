//! Dynamical Lie algebras of a few generator sets.

use control_time::lie::closure;
use control_time::numerics::{pauli, ComplexMatrix, Tolerances};

fn main() -> control_time::Result<()> {
    let tol = Tolerances::default();
    let (x, y, z) = (pauli::x(), pauli::y(), pauli::z());
    let id = ComplexMatrix::identity(2);

    let sets: Vec<(&str, Vec<ComplexMatrix>)> = vec![
        ("iσx, iσz", vec![x.mul_i(), z.mul_i()]),
        ("iσz", vec![z.mul_i()]),
        ("iσz⊗I + iσx⊗σx", vec![z.kron(&id).mul_i(), x.kron(&x).mul_i()]),
        ("iσz⊗I, iI⊗σx, iσy⊗σy", vec![z.kron(&id).mul_i(), id.kron(&x).mul_i(), y.kron(&y).mul_i()]),
    ];
    for (name, gens) in sets {
        let basis = closure(&gens, &tol)?;
        println!("{name:28} dim {:2}  closure defect {:.1e}", basis.len(), basis.closure_defect());
        for (k, p) in basis.provenance().iter().enumerate() {
            println!("    E{k}: {p}");
        }
    }
    Ok(())
}
