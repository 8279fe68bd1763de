// Where three isometric spheres meet: empty inside the region, two points at the limit.

use riley::moduli::Params;
use riley::siegel::DEFAULT_EPS;
use riley::spheres::{triple_intersection, TripleLocus};

pub fn run_example() -> riley::Result<Vec<usize>> {
    let mut counts = Vec::new();
    for p in [Params::new(0.0, 0.0)?, Params::new(0.3, 0.5)?, Params::limit()] {
        let r = triple_intersection(&p, DEFAULT_EPS);
        let n = match &r.locus {
            TripleLocus::Empty => 0,
            TripleLocus::Points(pts) => {
                for t in pts {
                    println!(
                        "  alpha={:+.6} beta={:.6} w={:.6} multiplicity {}",
                        t.coord.alpha, t.coord.beta, t.coord.w, t.multiplicity
                    );
                }
                pts.len()
            }
        };
        println!("({:.4}, {:.4}): {n} points, sampled min f0 {:.3e}", p.alpha1, p.alpha2, r.sampled_min);
        counts.push(n);
    }
    Ok(counts)
}

fn main() -> riley::Result<()> {
    run_example().map(|_| ())
}
