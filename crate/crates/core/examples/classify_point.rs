// Classify a few parameter points: region, polynomial values and commutator type.

use riley::cli::classify_report_for;
use riley::moduli::{alpha2_limit, Params};
use riley::siegel::DEFAULT_EPS;

pub fn run_example() -> riley::Result<Vec<(String, &'static str)>> {
    let mut rows = Vec::new();
    for (a1, a2) in [(0.0, 0.0), (0.0, alpha2_limit()), (0.0, 1.4), (0.6, 0.2)] {
        let r = classify_report_for(&Params::new(a1, a2)?, DEFAULT_EPS)?;
        println!(
            "({a1:.4}, {a2:.4})  region={:<12} D={:<12.6} G={:<12.6} commutator={:?}",
            r.region, r.d, r.g, r.commutator_type
        );
        rows.push((format!("{a1:.4},{a2:.4}"), r.region));
    }
    Ok(rows)
}

fn main() -> riley::Result<()> {
    run_example().map(|_| ())
}
