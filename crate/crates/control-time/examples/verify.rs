//! Seeded randomized property suite.

use control_time::verify::verify_suite;

fn main() -> control_time::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0);
    let report = verify_suite(seed)?;
    print!("{report}");
    if !report.passed() {
        std::process::exit(1);
    }
    Ok(())
}
