//! One PASS/FAIL line per acceptance criterion, with every named check.

use std::process::ExitCode;

use caustics_core::verify::{run_criterion, CRITERIA};

fn main() -> ExitCode {
    let mut failed = Vec::new();
    for (id, name) in CRITERIA {
        let report = run_criterion(id);
        let status = if report.passed { "PASS" } else { "FAIL" };
        println!("{status} criterion {id} {name}");
        for c in &report.checks {
            let residual = c.residual.map_or("n/a".to_string(), |r| format!("{r:.3e}"));
            let mark = if c.passed { "ok" } else { "FAIL" };
            println!("    [{mark}] {}: residual {residual}, threshold {:.0e} {}", c.name, c.threshold, c.note);
        }
        if !report.passed {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria pass", CRITERIA.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {failed:?}");
        ExitCode::FAILURE
    }
}
