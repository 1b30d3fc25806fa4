//! Acceptance gate: every criterion at its pinned tolerance, one line each.

use std::process::Command;
use std::time::{Duration, Instant};

use gapshift::suite::{run_criterion, SuiteOptions, CRITERIA};

const VERIFY_BUDGET: Duration = Duration::from_secs(15 * 60);

fn verify_end_to_end() -> (bool, String, Duration) {
    let dir = tempfile::tempdir().expect("tempdir");
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_gapshift"))
        .arg("verify")
        .arg("--out")
        .arg(dir.path())
        .output()
        .expect("spawn gapshift");
    let elapsed = start.elapsed();
    let stdout = String::from_utf8_lossy(&out.stdout);
    let table_ok = (1..=13).all(|id| {
        stdout
            .lines()
            .any(|l| l.starts_with(&format!("criterion {id:>2} ")) && l.contains(" PASS "))
    });
    let records = std::fs::read_to_string(dir.path().join("verify.ndjson")).unwrap_or_default();
    let ok = out.status.success()
        && table_ok
        && records.lines().count() == 13
        && elapsed < VERIFY_BUDGET;
    (
        ok,
        format!(
            "exit {:?}, {} result records",
            out.status.code(),
            records.lines().count()
        ),
        elapsed,
    )
}

fn main() {
    let opts = SuiteOptions::default();
    let mut failures = Vec::new();
    for (id, _, _) in CRITERIA.iter() {
        let r = run_criterion(*id, &opts).expect("known criterion");
        println!("{}", r.line());
        if !r.passed {
            failures.push(r.id);
        }
    }
    let (ok, detail, elapsed) = verify_end_to_end();
    println!(
        "criterion 14 {:<28} {} ({:.1}s) {detail}",
        "verify-command",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    if !ok {
        failures.push(14);
    }
    if failures.is_empty() {
        println!("acceptance: all 14 criteria passed");
    } else {
        println!("acceptance: failed criteria {failures:?}");
        std::process::exit(1);
    }
}
