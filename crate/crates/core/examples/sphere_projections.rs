// Projection discs of the isometric spheres and the closed-form separation test.

use riley::moduli::Params;
use riley::siegel::DEFAULT_EPS;
use riley::spheres::{is_neighbour, pairwise_disjointness_certificate, projection_discs};

pub fn run_example() -> riley::Result<Vec<String>> {
    let p = Params::new(0.4, 0.3)?;
    let discs = projection_discs(&p, 2);
    let base = discs.iter().find(|d| d.label == "0+").expect("base disc");
    let mut overlapping = Vec::new();
    for d in &discs {
        let gap = (d.center_re - base.center_re).hypot(d.center_im - base.center_im);
        println!("{:>4}  centre ({:+.4}, {:+.4})  distance to 0+ {:.4}", d.label, d.center_re, d.center_im, gap);
        if d.label != "0+" && gap < d.radius + base.radius {
            overlapping.push(d.label.clone());
        }
    }
    println!("discs overlapping 0+: {overlapping:?}");
    let report = pairwise_disjointness_certificate(&p, 5, DEFAULT_EPS)?;
    for e in report.entries.iter().filter(|e| is_neighbour(e.k, e.plus)) {
        println!("neighbour {}{}: d^4 = {:.6}", e.k, if e.plus { "+" } else { "-" }, e.closed_form);
    }
    println!("spheres beyond the neighbours disjoint: {}", report.passed());
    Ok(overlapping)
}

fn main() -> riley::Result<()> {
    run_example().map(|_| ())
}
