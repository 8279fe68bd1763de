// The limit group: boundary cell complex, the ideal octahedron and its face pairings.

use riley::limit::{boundary_cell_complex, limit_group, octahedron};
use riley::siegel::DEFAULT_EPS;

pub fn run_example() -> riley::Result<(i64, usize, usize)> {
    let l = limit_group()?;
    let b = boundary_cell_complex(&l);
    let c = &b.complex;
    println!(
        "boundary complex: V={} E={} F={} chi={}",
        c.vertices.len(),
        c.edges.len(),
        c.faces.len(),
        b.euler_characteristic
    );
    let o = octahedron(&l);
    for p in &o.post_merge.pairings {
        let src = &o.post_merge.faces[p.source];
        let dst = &o.post_merge.faces[p.target];
        let name = |f: &riley::limit::Face| {
            f.vertices.iter().map(|&v| o.post_merge.vertices[v].label.as_str()).collect::<Vec<_>>().join(" ")
        };
        println!("{:>3}: [{}] -> [{}]  residual {:.1e}", p.name, name(src), name(dst), p.residual);
    }
    let classes = o.post_merge.vertex_classes();
    for (label, tags) in o.post_merge.vertex_stabilisers(DEFAULT_EPS) {
        println!("cusp at {label}: {} peripheral loops, {:?}", tags.len(), tags.first());
    }
    Ok((b.euler_characteristic, o.post_merge.pairings.len(), classes.len()))
}

fn main() -> riley::Result<()> {
    run_example().map(|_| ())
}
