// Coarse scan of the parameter square rendered as text, plus the traced boundary curves.

use std::collections::BTreeMap;

use riley::moduli::{scan_region, trace_boundary, BoundaryCurve, RegionTag};
use riley::siegel::DEFAULT_EPS;

pub fn run_example() -> BTreeMap<&'static str, usize> {
    let n = 41;
    let b = 1.55;
    let cells = scan_region([-b, b, -b, b], n, DEFAULT_EPS);
    for j in (0..n).rev() {
        let row: String = (0..n)
            .map(|i| match cells[i * n + j].class.tag {
                RegionTag::ZInterior | RegionTag::ZBoundary => '#',
                RegionTag::LOutsideZ | RegionTag::PCurve => '+',
                RegionTag::EElliptic => '.',
            })
            .collect();
        println!("{row}");
    }
    let mut counts = BTreeMap::new();
    for c in &cells {
        *counts.entry(c.class.tag.label()).or_insert(0) += 1;
    }
    println!("{counts:?}");
    for curve in [BoundaryCurve::Z, BoundaryCurve::P] {
        let t = trace_boundary(curve, 100);
        println!("{curve:?}: {} points per quadrant, residual {:.2e}", t.quadrants[0].len(), t.max_residual);
    }
    counts
}

fn main() {
    run_example();
}
