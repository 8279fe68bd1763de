// Run the certificate battery for the limit group and print one line per check.

use riley::certify::{run_suite, Suite};
use riley::siegel::DEFAULT_EPS;

pub fn run_example() -> bool {
    let report = run_suite(Suite::Limit, DEFAULT_EPS);
    for c in &report.checks {
        let w = c.witnesses.first().map(|w| format!("{}={:.3e}", w.name, w.value)).unwrap_or_default();
        println!("{:?}  {:<28} {w}", c.verdict, c.check);
    }
    report.passed
}

fn main() {
    if !run_example() {
        std::process::exit(1);
    }
}
