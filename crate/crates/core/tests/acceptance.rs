//! One line per acceptance criterion. Runs without the test harness so the
//! lines are always printed; exits non-zero if any criterion fails.

use invgen::invgen::Budgets;
use invgen::suite::{run_suite, Profile, DEFAULT_SEED as SEED};

fn main() {
    let budgets = Budgets::default();
    let full = run_suite(Profile::Full, SEED, &budgets).expect("suite runs");
    let mut failed = Vec::new();
    for c in &full.criteria {
        let status = if c.passed { "PASS" } else { "FAIL" };
        println!(
            "criterion {:>2}: {status} {} ({} checks, {} violations; {})",
            c.id, c.name, c.checked, c.violations, c.detail
        );
        if !c.passed {
            failed.push(c.id);
        }
    }

    let first = serde_json::to_string_pretty(&run_suite(Profile::Quick, SEED, &budgets).unwrap()).unwrap();
    let second = serde_json::to_string_pretty(&run_suite(Profile::Quick, SEED, &budgets).unwrap()).unwrap();
    let identical = first == second;
    println!(
        "criterion 10: {} quick suite JSON byte-identical across runs ({} bytes)",
        if identical { "PASS" } else { "FAIL" },
        first.len()
    );
    if !identical {
        failed.push(10);
    }
    if failed.is_empty() {
        println!("acceptance: all criteria passed");
    } else {
        eprintln!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
