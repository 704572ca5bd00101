//! Exact word coefficients and the truncated composition `M(A, B)`.

use control_time::bch::{bch_m, check_norm_inequality, delta_constants, WordCoefficientTable};
use control_time::numerics::{mat_exp, pauli, Tolerances};

fn main() -> control_time::Result<()> {
    let table = WordCoefficientTable::for_bch_order(8)?;
    for (name, t) in [("f", &table.f), ("g", &table.g), ("h", &table.h)] {
        let shown: Vec<String> = t.iter().take(7).map(|(w, q)| format!("{w:?}={q}")).collect();
        println!("{name}: {}", shown.join("  "));
    }

    let c = delta_constants(&table.h, table.h_order().unwrap_or(0), 1.0)?;
    println!("δ̂ = {}, Δ̂ = {:.7}", c.delta_hat, c.capital_delta_hat);

    let a = pauli::x().mul_i().scale_re(0.05);
    let b = pauli::z().mul_i().scale_re(0.04);
    let out = bch_m(&a, &b, &table, 8)?;
    let residual = (&mat_exp(&a).matmul(&mat_exp(&b)) - &mat_exp(&out.m)).frobenius_norm();
    println!("levels {}  ‖e^A e^B − e^M‖F = {residual:.2e}", out.levels_used);

    let ineq = check_norm_inequality(&a, &b, &table, 8, c.capital_delta_hat, &Tolerances::default())?;
    println!("‖M‖² = {:.6e} ≤ {:.6e}: {}", ineq.lhs, ineq.rhs, ineq.holds);
    Ok(())
}
