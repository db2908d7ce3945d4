//! Runs the ten acceptance criteria and prints one line per criterion.
//! Set `CPV_SEED` to change the seed. Exits nonzero if any criterion fails.

use std::process::ExitCode;

use cpv::cli::DEFAULT_SEED;
use cpv::suite::run_suite;

fn main() -> ExitCode {
    let seed = std::env::var("CPV_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_SEED);
    println!("acceptance suite, seed {seed}");
    let outcomes = run_suite(seed);
    for o in &outcomes {
        println!("{}  [{}]", o.line(), o.timing().trim_start());
    }
    let failed: Vec<u8> = outcomes
        .iter()
        .filter(|o| !o.passed)
        .map(|o| o.id)
        .collect();
    if failed.is_empty() {
        println!("all {} criteria passed", outcomes.len());
        ExitCode::SUCCESS
    } else {
        println!("failed criteria: {failed:?}");
        ExitCode::FAILURE
    }
}
