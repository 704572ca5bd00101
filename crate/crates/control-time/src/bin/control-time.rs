use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use control_time::bch::{bch_m, WordCoefficientTable};
use control_time::bounds::{bound_report, BoundReport};
use control_time::io::{
    coefficients_json, read_basis, read_json, read_matrix, read_schedule, BasisJson, GeneratorsJson, MatrixJson,
};
use control_time::lie::closure;
use control_time::metric::{distance, BranchSearchConfig};
use control_time::numerics::{mat_exp, Tolerances};
use control_time::synthesis::{synthesize_pair, synthesize_schedule, SynthesisConfig};
use control_time::verify::verify_suite_with;
use control_time::zigzag::{figure1_sweep, figure_svg, write_figure_csv, ZigzagParams};
use control_time::{Error, Result};

#[derive(Parser)]
#[command(name = "control-time", version, about = "Lie-algebraic control-time bounds")]
struct Cli {
    /// Operator-equality tolerance.
    #[arg(long, global = true, default_value_t = 1e-10)]
    eq_tol: f64,
    /// Algebra-membership tolerance.
    #[arg(long, global = true, default_value_t = 1e-8)]
    algebra_tol: f64,
    /// Iteration stopping tolerance.
    #[arg(long, global = true, default_value_t = 1e-12)]
    conv_tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Orthonormal basis of the Lie algebra generated by a set of matrices.
    Closure {
        #[arg(long)]
        generators: PathBuf,
        /// Print only the dimension.
        #[arg(long)]
        dim_only: bool,
    },
    /// Word coefficients and truncated composition.
    Bch {
        #[command(subcommand)]
        command: BchCommand,
    },
    /// Generator of e^A e^B with Frobenius norm at most ‖A‖F + ‖B‖F.
    Synthesize {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        r: Option<usize>,
    },
    /// Hermitian C_T for a piecewise-constant schedule.
    SynthesizeSchedule {
        #[arg(long)]
        schedule: PathBuf,
        #[arg(long)]
        algebra: Option<PathBuf>,
    },
    /// Algebra-restricted distance between two unitaries.
    Distance {
        #[arg(long)]
        u1: PathBuf,
        #[arg(long)]
        u2: PathBuf,
        #[arg(long)]
        algebra: Option<PathBuf>,
        #[arg(long)]
        kmax: Option<i64>,
    },
    /// Speed-limit comparison for a schedule.
    Bounds {
        #[arg(long)]
        schedule: PathBuf,
        #[arg(long)]
        target: Option<PathBuf>,
        #[arg(long)]
        algebra: Option<PathBuf>,
        /// Emit one CSV row with header instead of JSON.
        #[arg(long)]
        csv: bool,
    },
    /// Zigzag sweep of the four time bounds.
    Figure1 {
        #[arg(long)]
        a: Option<f64>,
        #[arg(long)]
        b: Option<f64>,
        #[arg(long)]
        c: Option<f64>,
        #[arg(long, default_value_t = 500)]
        m_max: usize,
        #[arg(long)]
        out: PathBuf,
        /// Also write an SVG plot to this path.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Seeded randomized property suite.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum BchCommand {
    /// Exact f, g, h tables.
    Coeffs {
        #[arg(long, default_value_t = 8)]
        order: usize,
    },
    /// M(A, B) and ‖e^A e^B − e^M‖F.
    Compose {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long, default_value_t = 8)]
        order: usize,
    },
}

enum Outcome {
    Pass,
    Violation,
}

// A closed downstream pipe is not an error.
fn print_json(v: &serde_json::Value) {
    let _ = writeln!(io::stdout().lock(), "{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn run(cli: Cli) -> Result<Outcome> {
    let tol = Tolerances::new(cli.eq_tol, cli.algebra_tol, cli.conv_tol)?;
    match cli.command {
        Command::Closure { generators, dim_only } => {
            let gens = read_json::<GeneratorsJson>(&generators)?.matrices()?;
            let basis = closure(&gens, &tol)?;
            if dim_only {
                let _ = writeln!(io::stdout().lock(), "{}", basis.len());
            } else {
                print_json(&serde_json::to_value(BasisJson::from(&basis)).expect("serializable"));
            }
        }
        Command::Bch { command: BchCommand::Coeffs { order } } => {
            let table = WordCoefficientTable::for_bch_order(order)?;
            print_json(&coefficients_json(&table));
        }
        Command::Bch { command: BchCommand::Compose { a, b, order } } => {
            let (a, b) = (read_matrix(&a)?, read_matrix(&b)?);
            let table = WordCoefficientTable::for_bch_order(order)?;
            let out = bch_m(&a, &b, &table, order)?;
            let residual = (&mat_exp(&a).matmul(&mat_exp(&b)) - &mat_exp(&out.m)).frobenius_norm();
            print_json(&json!({
                "m": MatrixJson::from(&out.m),
                "residual": residual,
                "levels_used": out.levels_used,
                "tail_estimate": out.residual_estimate,
            }));
        }
        Command::Synthesize { a, b, r } => {
            let (a, b) = (read_matrix(&a)?, read_matrix(&b)?);
            let mut cfg = SynthesisConfig::default();
            if let Some(r) = r {
                cfg = cfg.with_r(r);
            }
            let (c, trace) = synthesize_pair(&a, &b, &cfg, &tol)?;
            let target = mat_exp(&a).matmul(&mat_exp(&b));
            let gens = [a.clone(), b.clone()];
            let nonzero: Vec<_> = gens.iter().filter(|g| g.frobenius_norm() > 0.0).cloned().collect();
            let algebra_residual = if nonzero.is_empty() { 0.0 } else { closure(&nonzero, &tol)?.residual(&c)? };
            let norm_c = c.frobenius_norm();
            let rhs = a.frobenius_norm() + b.frobenius_norm();
            print_json(&json!({
                "c": MatrixJson::from(&c),
                "norm_c": norm_c,
                "norm_a_plus_norm_b": rhs,
                "exp_residual": (&mat_exp(&c) - &target).frobenius_norm(),
                "algebra_residual": algebra_residual,
                "sweeps": trace.sweeps_used,
                "m_a": trace.m_a,
                "m_b": trace.m_b,
                "n": trace.n,
                "r": trace.r_used,
                "restarts": trace.restarts,
            }));
            if norm_c > rhs + 1e-8 {
                return Ok(Outcome::Violation);
            }
        }
        Command::SynthesizeSchedule { schedule, algebra } => {
            let s = read_schedule(&schedule)?;
            let basis = match algebra {
                Some(p) => read_basis(&p, &tol)?,
                None => closure(&nonzero_generators(&s), &tol)?,
            };
            let out = synthesize_schedule(&s, &basis, &SynthesisConfig::default(), &tol)?;
            let dim = s.dim().expect("non-empty");
            let u = s.propagate(dim);
            let exp_residual = (&mat_exp(&out.c_t.mul_neg_i()) - &u).frobenius_norm();
            let norm = out.c_t.frobenius_norm();
            print_json(&json!({
                "c_t": MatrixJson::from(&out.c_t),
                "norm_c_t": norm,
                "action": s.frobenius_action(),
                "exp_residual": exp_residual,
                "algebra_residual": basis.residual(&out.c_t.mul_neg_i())?,
                "sweeps": out.traces.iter().map(|t| t.sweeps_used).collect::<Vec<_>>(),
            }));
            if norm > out.bound_rhs {
                return Ok(Outcome::Violation);
            }
        }
        Command::Distance { u1, u2, algebra, kmax } => {
            let (u1, u2) = (read_matrix(&u1)?, read_matrix(&u2)?);
            let basis = algebra.map(|p| read_basis(&p, &tol)).transpose()?;
            let cfg = kmax.map_or_else(BranchSearchConfig::default, BranchSearchConfig::with_k_max);
            let d = distance(&u1, &u2, basis.as_ref(), &cfg, &tol)?;
            print_json(&json!({
                "value": d.value,
                "argmin": MatrixJson::from(&d.argmin_c),
                "exact": d.exact,
                "branch": d.branch,
                "candidates_examined": d.candidates_examined,
            }));
        }
        Command::Bounds { schedule, target, algebra, csv } => {
            let s = read_schedule(&schedule)?;
            let target = target.map(|p| read_matrix(&p)).transpose()?;
            let basis = algebra.map(|p| read_basis(&p, &tol)).transpose()?;
            let report = bound_report(&s, target.as_ref(), basis.as_ref(), &BranchSearchConfig::default(), &tol)?;
            if csv {
                let mut w = csv::Writer::from_writer(io::stdout());
                w.write_record(BoundReport::CSV_HEADER).map_err(io_error)?;
                w.write_record(report.csv_record()).map_err(io_error)?;
                w.flush().map_err(io_error)?;
            } else {
                print_json(&serde_json::to_value(&report).expect("serializable"));
            }
        }
        Command::Figure1 { a, b, c, m_max, out, svg } => {
            let d = ZigzagParams::default();
            let p = ZigzagParams::new(a.unwrap_or(d.a), b.unwrap_or(d.b), c.unwrap_or(d.c))?;
            let ms: Vec<usize> = (1..=m_max).collect();
            let rows = figure1_sweep(&p, &ms)?;
            write_figure_csv(&rows, BufWriter::new(File::create(&out).map_err(io_error)?))?;
            if let Some(path) = svg {
                std::fs::write(path, figure_svg(&rows)).map_err(io_error)?;
            }
            eprintln!("wrote {} rows to {}", rows.len(), out.display());
        }
        Command::Verify { seed } => {
            let report = verify_suite_with(seed, &Default::default(), &tol)?;
            let _ = write!(io::stdout().lock(), "{report}");
            if !report.passed() {
                return Ok(Outcome::Violation);
            }
        }
    }
    Ok(Outcome::Pass)
}

fn nonzero_generators(s: &control_time::schedule::ControlSchedule) -> Vec<control_time::numerics::ComplexMatrix> {
    s.anti_hermitian_hamiltonians().into_iter().filter(|g| g.frobenius_norm() > 0.0).collect()
}

fn io_error(e: impl std::fmt::Display) -> Error {
    Error::InvalidInput(e.to_string())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Violation) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_input_error() { 2 } else { 1 })
        }
    }
}
