//! Runs every acceptance criterion and prints one line per criterion.
//! Build with `--release` for representative timings.

use std::process::ExitCode;

use eternalbar::acceptance::selftest;

fn main() -> ExitCode {
    let report = selftest();
    for e in report.examples.iter().filter(|e| !e.passed) {
        println!("FAIL example {}: {}", e.op, e.detail);
    }
    for c in &report.criteria {
        println!("{c}");
    }
    let failed: Vec<u8> = report.criteria.iter().filter(|c| !c.passed).map(|c| c.id).collect();
    if report.passed() {
        println!("acceptance: all {} criteria pass", report.criteria.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
