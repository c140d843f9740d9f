//! Release gate. Runs the full verification suite on the default seed and
//! prints one line per check; any FAIL line fails the target.
//!
//! Run it alone with `cargo test -p poussin --test acceptance`.

use poussin::{verify_suite, VerifyOptions, CHECK_NAMES};

fn main() {
    let summary = verify_suite(&VerifyOptions::default());
    assert_eq!(
        summary.checks.len(),
        CHECK_NAMES.len(),
        "suite must cover every advertised check"
    );
    println!(
        "verification suite: seed {} over {} sweep rows",
        summary.base_seed,
        summary.rows.len()
    );
    for (check, name) in summary.checks.iter().zip(CHECK_NAMES) {
        assert_eq!(check.name, name, "check order is pinned");
        println!(
            "{} {:<24} measured {:>12.5e}  tolerance {:>9.3e}  {}",
            if check.passed { "PASS" } else { "FAIL" },
            check.name,
            check.measured,
            check.tolerance,
            check.detail
        );
    }
    if !summary.all_passed() {
        std::process::exit(1);
    }
}
