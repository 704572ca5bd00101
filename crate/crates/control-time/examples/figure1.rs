//! Zigzag sweep: four time bounds versus the number of periods.
//!
//! Writes `figure1.csv` and `figure1.svg` to the working directory.

use std::fs::File;

use control_time::metric::BranchSearchConfig;
use control_time::numerics::Tolerances;
use control_time::zigzag::{
    cross_check_row, figure1_sweep, figure_svg, ratio_flatness, write_figure_csv, zigzag_algebra, ZigzagParams,
};

fn main() -> control_time::Result<()> {
    let p = ZigzagParams::default();
    let ms: Vec<usize> = (1..=500).collect();
    let rows = figure1_sweep(&p, &ms)?;
    let file = File::create("figure1.csv").map_err(|e| control_time::Error::InvalidInput(e.to_string()))?;
    write_figure_csv(&rows, file)?;
    std::fs::write("figure1.svg", figure_svg(&rows)).map_err(|e| control_time::Error::InvalidInput(e.to_string()))?;

    for m in [1, 10, 100, 250, 500] {
        let r = &rows[m - 1];
        println!(
            "M={m:3}  T_MT/T={:.6}  T★/T={:.6}  T_P/T={:.6}  T★/T_MT={:.6}",
            r.ratio_mt,
            r.ratio_star,
            r.ratio_p,
            r.t_star / r.t_mt
        );
    }
    println!("T★/T relative spread over M ≤ 20: {:.1e}", ratio_flatness(&rows[..20]));

    let tol = Tolerances::default();
    let basis = zigzag_algebra(&p, &tol)?;
    let check = cross_check_row(&p, 250, &basis, &BranchSearchConfig::default(), &tol)?;
    println!("closed vs generic at M=250: {:.1e}", check.max_abs_diff());
    Ok(())
}
