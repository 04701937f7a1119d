//! Runs every acceptance criterion and prints one pass/fail line each.
//! Built without the test harness so the lines are always shown.

use std::process::ExitCode;

use weaklog::suite::{self, SuiteConfig};

fn main() -> ExitCode {
    let cfg = SuiteConfig::default();
    let reports = suite::run_all(&cfg);
    print!("{}", suite::render(&reports));
    if reports.iter().all(|r| r.passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
