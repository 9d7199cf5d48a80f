//! Acceptance suite: one PASS/FAIL line per criterion; exits nonzero if any fails.

use chromlag::cli::golden::{run_checks, CHECKS};

fn main() {
    // `cargo test -- <filter>` style arguments select checks by name
    let filters: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let ids: Vec<usize> = (1..=CHECKS.len())
        .filter(|&i| filters.is_empty() || filters.iter().any(|f| CHECKS[i - 1].contains(f.as_str())))
        .collect();
    if ids.is_empty() {
        println!("acceptance: no checks match {filters:?}");
        return;
    }
    let results = run_checks(&ids).expect("check ids are valid");
    println!();
    for r in &results {
        println!("{r}");
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
