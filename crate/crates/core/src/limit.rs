//! The limit group at (0, arccos √(3/8)): its extra parabolic fixed points, tangencies,
//! the cusp cycle graph, the fans bounding a slab for ⟨A⟩, the cell structure of the
//! boundary inside the slab, and the ideal octahedron with its face pairings.

use std::collections::{BTreeMap, VecDeque};
use std::f64::consts::SQRT_2;

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::Result;
use crate::ford::{side_pairing, FordDomain, SideTag};
use crate::moduli::{build_group, delta_phi, reflection_iota1, symmetry_maps, GroupData, Params};
use crate::poly::{real_roots, Poly};
use crate::siegel::{
    c, classify, cygan_distance, hermitian_product, GroupElement, HeisPoint, IsometryTag, Lift,
    DEFAULT_EPS,
};
use crate::spheres::{
    vertical_projection, BoundaryGrid, CyganSphere, SphereFamily, TripleLocus,
};

fn sqrt(v: f64) -> f64 {
    v.sqrt()
}

/// The limit group with its four additional parabolic fixed points.
#[derive(Clone, Debug)]
pub struct LimitData {
    pub group: GroupData,
    /// Fixed by S T⁻¹ (equivalently T S⁻¹).
    pub p_st_inv: Lift,
    /// Fixed by S⁻¹ T (equivalently T⁻¹ S).
    pub p_s_inv_t: Lift,
    pub p_tst: Lift,
    pub p_sts: Lift,
    /// Largest projective gap between computed fixed points and their closed forms.
    pub closed_form_gap: f64,
}

/// Closed-form lifts of the four extra parabolic fixed points.
pub fn closed_form_points() -> [Lift; 4] {
    let (r3, r5, r15) = (sqrt(3.0), sqrt(5.0), sqrt(15.0));
    [
        Lift::new(c(-0.25, r15 / 4.0), c(r3 / 4.0, r5 / 4.0), c(1.0, 0.0)),
        Lift::new(c(-0.25, -r15 / 4.0), c(-r3 / 4.0, r5 / 4.0), c(1.0, 0.0)),
        Lift::new(c(-1.0, 0.0), c(-3.0 * r3 / 4.0, r5 / 4.0), c(1.0, 0.0)),
        Lift::new(c(-1.0, 0.0), c(3.0 * r3 / 4.0, r5 / 4.0), c(1.0, 0.0)),
    ]
}

impl LimitData {
    pub fn words(&self) -> [(&'static str, GroupElement); 4] {
        let g = &self.group;
        [
            ("ST^-1", g.s * g.t.inverse()),
            ("S^-1T", g.s.inverse() * g.t),
            ("TST", g.t * g.s * g.t),
            ("STS", g.s * g.t * g.s),
        ]
    }

    pub fn points(&self) -> [Lift; 4] {
        [self.p_st_inv, self.p_s_inv_t, self.p_tst, self.p_sts]
    }
}

pub fn limit_group() -> Result<LimitData> {
    let group = build_group(&Params::limit())?;
    let g = &group;
    let words = [
        g.s * g.t.inverse(),
        g.s.inverse() * g.t,
        g.t * g.s * g.t,
        g.s * g.t * g.s,
    ];
    let closed = closed_form_points();
    let mut pts = [Lift::q_infinity(); 4];
    let mut gap: f64 = 0.0;
    for (i, w) in words.iter().enumerate() {
        pts[i] = w.parabolic_fixed_point().unwrap_or(closed[i]);
        gap = gap.max(pts[i].projective_gap(&closed[i]));
    }
    Ok(LimitData {
        group,
        p_st_inv: pts[0],
        p_s_inv_t: pts[1],
        p_tst: pts[2],
        p_sts: pts[3],
        closed_form_gap: gap,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FixedPointCheck {
    pub word: &'static str,
    pub tag: IsometryTag,
    /// Projective gap between the point and its image.
    pub fixed_residual: f64,
    pub closed_form_gap: f64,
}

pub fn fixed_point_checks(l: &LimitData) -> Vec<FixedPointCheck> {
    let closed = closed_form_points();
    l.words()
        .iter()
        .zip(l.points())
        .zip(closed)
        .map(|(((word, m), p), cf)| FixedPointCheck {
            word,
            tag: classify(m, DEFAULT_EPS).tag,
            fixed_residual: m.apply_raw(&p).projective_gap(&p),
            closed_form_gap: p.projective_gap(&cf),
        })
        .collect()
}

/// Gaps along φ: p_TST → p_S⁻¹T → p_ST⁻¹ → p_STS.
pub fn phi_orbit_gaps(l: &LimitData) -> [f64; 3] {
    let phi = symmetry_maps(&l.group, DEFAULT_EPS).phi;
    let chain = [l.p_tst, l.p_s_inv_t, l.p_st_inv, l.p_sts];
    [0, 1, 2].map(|i| phi.apply(&chain[i]).projective_gap(&chain[i + 1]))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TangencyReport {
    /// |⟨p_ST⁻¹, p_BA⟩| and |⟨p_ST⁻¹, A p_B⟩|.
    pub at_st_inv: [f64; 2],
    /// |⟨p_S⁻¹T, p_AB⟩| and |⟨p_S⁻¹T, A⁻¹ p_B⟩|.
    pub at_s_inv_t: [f64; 2],
    /// Distances between projection-disc centres of the tangent pairs.
    pub disc_gaps: [f64; 2],
    /// Gaps between the triple-intersection points and the two fixed points.
    pub triple_gaps: Vec<f64>,
}

impl TangencyReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.at_st_inv.iter().chain(&self.at_s_inv_t).all(|v| (v - 1.0).abs() <= tol)
            && self.disc_gaps.iter().all(|d| (d - 2.0).abs() <= tol)
            && self.triple_gaps.len() == 2
            && self.triple_gaps.iter().all(|g| *g <= 1e-6)
    }
}

pub fn tangency_check(l: &LimitData) -> TangencyReport {
    let g = &l.group;
    let fam = SphereFamily::new(g.params);
    let a_pb = g.a.apply(&g.p_b);
    let a_inv_pb = g.a.inverse().apply(&g.p_b);
    let disc_gap = |s1: CyganSphere, s2: CyganSphere| {
        (vertical_projection(&s1).center - vertical_projection(&s2).center).norm()
    };
    let report = crate::spheres::triple_intersection(&g.params, DEFAULT_EPS);
    let base = CyganSphere::unit(HeisPoint::origin());
    let triple_gaps = match report.locus {
        TripleLocus::Empty => Vec::new(),
        TripleLocus::Points(pts) => pts
            .iter()
            .map(|p| {
                let q = crate::spheres::geo_to_point(&base, &p.coord).unwrap();
                q.projective_gap(&l.p_st_inv).min(q.projective_gap(&l.p_s_inv_t))
            })
            .collect(),
    };
    TangencyReport {
        at_st_inv: [
            hermitian_product(&l.p_st_inv, &g.p_ba).norm(),
            hermitian_product(&l.p_st_inv, &a_pb).norm(),
        ],
        at_s_inv_t: [
            hermitian_product(&l.p_s_inv_t, &g.p_ab).norm(),
            hermitian_product(&l.p_s_inv_t, &a_inv_pb).norm(),
        ],
        disc_gaps: [disc_gap(fam.plus(1), fam.minus(-1)), disc_gap(fam.plus(-1), fam.minus(0))],
        triple_gaps,
    }
}

/// A vertical plane 3√3 x − √5 y = offset in Heisenberg coordinates, the image of the
/// fan through p_ST⁻¹ under A^index.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Fan {
    pub index: i32,
    pub offset: f64,
}

/// Increase of 3√3 x − √5 y under one application of A.
pub fn fan_step() -> f64 {
    9.0 / SQRT_2
}

pub fn fan_value(h: &HeisPoint) -> f64 {
    3.0 * sqrt(3.0) * h.z.re - sqrt(5.0) * h.z.im
}

impl Fan {
    pub fn new(index: i32) -> Self {
        Fan {
            index,
            offset: SQRT_2 / 2.0 + index as f64 * fan_step(),
        }
    }

    /// Point with fan coordinates (ξ, η) on the fan of index 0.
    pub fn base_point(xi: f64, eta: f64) -> HeisPoint {
        let (r3, r5) = (sqrt(3.0), sqrt(5.0));
        HeisPoint::boundary(
            c(r5 * xi + r3, 3.0 * r3 * xi + r5) / (4.0 * SQRT_2),
            eta - xi / 4.0,
        )
    }

    /// Closed-form standard lift of the base point.
    pub fn base_lift(xi: f64, eta: f64) -> Lift {
        let (r3, r5, r15) = (sqrt(3.0), sqrt(5.0), sqrt(15.0));
        Lift::new(
            c(-xi * xi - r15 * xi / 4.0 - 0.25, eta - xi / 4.0),
            c(r5 * xi / 4.0 + r3 / 4.0, 3.0 * r3 * xi / 4.0 + r5 / 4.0),
            c(1.0, 0.0),
        )
    }

    pub fn point(&self, g: &GroupData, xi: f64, eta: f64) -> Lift {
        g.a.pow(self.index).apply(&Fan::base_lift(xi, eta))
    }

    /// Signed distance of a z-value from the plane, in units of the normal |(3√3, −√5)| = √32.
    pub fn signed_distance(&self, z: C64) -> f64 {
        (3.0 * sqrt(3.0) * z.re - sqrt(5.0) * z.im - self.offset) / sqrt(32.0)
    }
}

/// |⟨f(ξ,η), p_B⟩|² as an explicit polynomial.
pub fn fan_product_b(xi: f64, eta: f64) -> f64 {
    let r15 = sqrt(15.0);
    (xi * xi + 0.25).powi(2) + xi * xi + eta * eta + xi * (r15 * xi * xi + r15 / 4.0 - eta) / 2.0
}

/// |⟨f(ξ,η), p_AB⟩|² as an explicit polynomial.
pub fn fan_product_ab(xi: f64, eta: f64) -> f64 {
    let r15 = sqrt(15.0);
    (xi * xi + 0.25).powi(2) + xi * xi + eta * eta - xi * (r15 * xi * xi + r15 / 4.0 - eta) / 2.0
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FanRidgeReport {
    pub solutions: Vec<(f64, f64)>,
    pub max_residual: f64,
    /// Arc of the fan on the (0,+) sphere outside (0,−): ξ ≤ 0, from p_ST⁻¹ to q₀.
    pub arc_plus: Vec<(f64, f64)>,
    /// Arc of the fan on the (0,−) sphere outside (0,+): ξ ≥ 0.
    pub arc_minus: Vec<(f64, f64)>,
    /// Projective gap between f(0, √15/4) and p_ST⁻¹.
    pub first_is_fixed_point: f64,
    /// q₀ lies between p_S⁻¹T and p_STS: the fan separates them.
    pub separates: bool,
}

/// η values with |⟨f(ξ,η), p⟩|² = 1 for a fixed ξ, using the sign `s` of the ξ-coupling.
fn eta_on_circle(xi: f64, s: f64) -> Option<(f64, f64)> {
    let r15 = sqrt(15.0);
    let b = -s * xi / 2.0;
    let c0 = (xi * xi + 0.25).powi(2) + xi * xi + s * xi * (r15 * xi * xi + r15 / 4.0) / 2.0 - 1.0;
    let disc = b * b - 4.0 * c0;
    if disc < 0.0 {
        return None;
    }
    let r = disc.sqrt();
    Some(((-b - r) / 2.0, (-b + r) / 2.0))
}

fn arc(sign: f64, samples: usize) -> Vec<(f64, f64)> {
    let mut lo = 0.0;
    while eta_on_circle(sign * (lo + 0.01), sign).is_some() {
        lo += 0.01;
    }
    let (mut a, mut b) = (lo, lo + 0.01);
    for _ in 0..80 {
        let m = 0.5 * (a + b);
        if eta_on_circle(sign * m, sign).is_some() {
            a = m;
        } else {
            b = m;
        }
    }
    let end = a;
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    for i in 0..=samples {
        let xi = sign * end * i as f64 / samples as f64;
        if let Some((l, u)) = eta_on_circle(xi, sign) {
            upper.push((xi, u));
            lower.push((xi, l));
        }
    }
    lower.reverse();
    upper.into_iter().chain(lower).collect()
}

pub fn fan_ridge_intersection(l: &LimitData, samples: usize) -> FanRidgeReport {
    let mut solutions = Vec::new();
    // ξ = 0 gives η² + 1/16 = 1.
    for r in real_roots(&Poly::new(vec![1.0 / 16.0 - 1.0, 0.0, 1.0])) {
        solutions.push((0.0, r.value));
    }
    // η = √15(ξ² + 1/4) gives 16s² + 9s = 0 in s = ξ².
    for r in real_roots(&Poly::new(vec![0.0, 9.0, 16.0])) {
        if r.value >= 0.0 {
            let xi = r.value.sqrt();
            for x in [xi, -xi] {
                let cand = (x, sqrt(15.0) * (x * x + 0.25));
                if !solutions.iter().any(|s: &(f64, f64)| (s.0 - cand.0).abs() + (s.1 - cand.1).abs() < 1e-9) {
                    solutions.push(cand);
                }
            }
        }
    }
    solutions.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let g = &l.group;
    let max_residual = solutions
        .iter()
        .map(|&(x, e)| {
            let f = Fan::base_lift(x, e);
            (hermitian_product(&f, &g.p_b).norm() - 1.0)
                .abs()
                .max((hermitian_product(&f, &g.p_ab).norm() - 1.0).abs())
        })
        .fold(0.0, f64::max);
    let f0 = Fan::new(0);
    let side = |p: &Lift| f0.signed_distance(p.to_heis(DEFAULT_EPS).unwrap().z);
    FanRidgeReport {
        solutions,
        max_residual,
        arc_plus: arc(-1.0, samples),
        arc_minus: arc(1.0, samples),
        first_is_fixed_point: Fan::base_lift(0.0, sqrt(15.0) / 4.0).projective_gap(&l.p_st_inv),
        separates: side(&l.p_s_inv_t) * side(&l.p_sts) < 0.0,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FanContact {
    Empty,
    Point,
    Circle,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FanSphereEntry {
    pub fan: i32,
    pub k: i32,
    pub plus: bool,
    pub contact: FanContact,
    /// Distance from the plane to the projection-disc centre.
    pub distance: f64,
    pub tangent_point: Option<HeisPoint>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SlabPosition {
    Interior,
    OnFan(i32),
    Exterior,
}

pub fn slab_position(h: &HeisPoint, eps: f64) -> SlabPosition {
    let v = fan_value(h);
    let (lo, hi) = (Fan::new(-1).offset, Fan::new(0).offset);
    if (v - hi).abs() <= eps {
        SlabPosition::OnFan(0)
    } else if (v - lo).abs() <= eps {
        SlabPosition::OnFan(-1)
    } else if v > lo && v < hi {
        SlabPosition::Interior
    } else {
        SlabPosition::Exterior
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SlabEntry {
    pub point: &'static str,
    pub k: i32,
    pub position: SlabPosition,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FanSphereTable {
    pub entries: Vec<FanSphereEntry>,
    pub slab: Vec<SlabEntry>,
    /// Largest deviation of A·(fan −1) from fan 0 on sampled points.
    pub translation_residual: f64,
}

impl FanSphereTable {
    pub fn contact(&self, fan: i32, k: i32, plus: bool) -> Option<FanContact> {
        self.entries
            .iter()
            .find(|e| e.fan == fan && e.k == k && e.plus == plus)
            .map(|e| e.contact)
    }
}

/// The contact pattern of both fans with the spheres of index −2..1.
pub fn fan_sphere_table(l: &LimitData, eps: f64) -> FanSphereTable {
    let g = &l.group;
    let fam = SphereFamily::new(g.params);
    let mut entries = Vec::new();
    for fan in [0, -1] {
        let f = Fan::new(fan);
        for k in -2..=1 {
            for plus in [false, true] {
                let s = fam.sphere(k, plus);
                let d = f.signed_distance(s.center.z);
                let contact = if (d.abs() - s.radius).abs() <= eps {
                    FanContact::Point
                } else if d.abs() < s.radius {
                    FanContact::Circle
                } else {
                    FanContact::Empty
                };
                let tangent_point = (contact == FanContact::Point).then(|| {
                    let normal = c(3.0 * sqrt(3.0), -sqrt(5.0)) / sqrt(32.0);
                    let z = s.center.z - normal * (d.signum() * s.radius);
                    HeisPoint::boundary(z, s.center.t - 2.0 * (z * s.center.z.conj()).im)
                });
                entries.push(FanSphereEntry {
                    fan,
                    k,
                    plus,
                    contact,
                    distance: d,
                    tangent_point,
                });
            }
        }
    }
    let mut slab = Vec::new();
    for (name, p) in [("ST^-1", l.p_st_inv), ("S^-1T", l.p_s_inv_t)] {
        for k in -3..=3 {
            let h = g.a.pow(k).apply(&p).to_heis(DEFAULT_EPS).unwrap();
            slab.push(SlabEntry {
                point: name,
                k,
                position: slab_position(&h, 1e-9),
            });
        }
    }
    let (fm1, f0) = (Fan::new(-1), Fan::new(0));
    let translation_residual = [(-1.0, 0.3), (0.2, -0.7), (1.5, 2.0)]
        .iter()
        .map(|&(x, e)| {
            let img = g.a.apply(&fm1.point(g, x, e));
            img.projective_gap(&f0.point(g, x, e))
        })
        .fold(0.0, f64::max);
    FanSphereTable {
        entries,
        slab,
        translation_residual,
    }
}

/// Directed edge between cusp classes labelled by the element carrying one representative
/// to the other.
#[derive(Clone, Debug, Serialize)]
pub struct CycleEdge {
    pub from: usize,
    pub to: usize,
    pub side: SideTag,
    /// Power of A needed to bring the image back to its representative.
    pub shift: i32,
    #[serde(skip)]
    pub element: GroupElement,
}

#[derive(Clone, Debug, Serialize)]
pub struct CycleLoop {
    pub edge: usize,
    pub tag: IsometryTag,
    pub fixed_gap: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CycleGraph {
    pub representatives: Vec<&'static str>,
    pub edges: Vec<CycleEdge>,
    /// Loop elements at the first representative, one per non-tree edge.
    pub loops: Vec<CycleLoop>,
    /// Tags of the explicitly named cycles: S³, (A⁻¹S)³ and the quadrilateral product.
    pub named: Vec<(&'static str, IsometryTag)>,
}

impl CycleGraph {
    pub fn passed(&self) -> bool {
        let ok = |t: &IsometryTag| matches!(t, IsometryTag::Identity | IsometryTag::Unipotent);
        !self.loops.is_empty()
            && self.loops.iter().all(|l| ok(&l.tag) && l.fixed_gap < 1e-9)
            && self.named.iter().all(|(_, t)| ok(t))
    }
}

/// Side-pairing action on the cusp classes modulo A.
pub fn cycle_graph(l: &LimitData, eps: f64) -> Result<CycleGraph> {
    let g = &l.group;
    let dom = FordDomain::new(&g.params, 5)?;
    let reps = [("ST^-1", l.p_st_inv), ("S^-1T", l.p_s_inv_t)];
    let classify_point = |q: &Lift| -> Option<(usize, i32)> {
        let (r, m) = dom.reduce(q);
        reps.iter()
            .position(|(_, p)| p.projective_gap(&r) < 1e-8)
            .map(|i| (i, m))
    };
    let mut edges = Vec::new();
    for (i, (_, p)) in reps.iter().enumerate() {
        let w = dom.effective_window();
        for k in -w..=w {
            for plus in [true, false] {
                let side = SideTag { k, plus };
                if dom.family.sphere(k, plus).level(p).abs() > 1e-9 {
                    continue;
                }
                let sigma = side_pairing(g, side);
                let img = sigma.apply(p);
                if let Some((j, m)) = classify_point(&img) {
                    edges.push(CycleEdge {
                        from: i,
                        to: j,
                        side,
                        shift: m,
                        element: g.a.pow(-m) * sigma,
                    });
                }
            }
        }
    }
    let mut path: Vec<Option<GroupElement>> = vec![None; reps.len()];
    path[0] = Some(GroupElement::identity());
    let mut tree = vec![false; edges.len()];
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        for (e, edge) in edges.iter().enumerate() {
            if edge.from == v && path[edge.to].is_none() {
                path[edge.to] = Some(edge.element * path[v].unwrap());
                tree[e] = true;
                queue.push_back(edge.to);
            }
        }
    }
    let mut loops = Vec::new();
    for (e, edge) in edges.iter().enumerate() {
        if tree[e] {
            continue;
        }
        let (Some(pv), Some(pw)) = (path[edge.from], path[edge.to]) else {
            continue;
        };
        let elt = pw.inverse() * edge.element * pv;
        let root = reps[0].1;
        loops.push(CycleLoop {
            edge: e,
            tag: classify(&elt, eps).tag,
            fixed_gap: elt.apply_raw(&root).projective_gap(&root),
        });
    }
    let a = g.a;
    let s = g.s;
    let quad = a.inverse() * s * a * s.inverse() * a * s * a.inverse() * s.inverse();
    let named = vec![
        ("S^3", classify(&s.pow(3), eps).tag),
        ("(A^-1 S)^3", classify(&(a.inverse() * s).pow(3), eps).tag),
        ("(A^-1 S A)(S^-1)(A S A^-1)(S^-1)", classify(&quad, eps).tag),
        ("(T^-1 S)^3", classify(&(g.t.inverse() * s).pow(3), eps).tag),
    ];
    Ok(CycleGraph {
        representatives: reps.iter().map(|(n, _)| *n).collect(),
        edges,
        loops,
        named,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Vertex {
    pub label: String,
    #[serde(skip)]
    pub lift: Lift,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub ends: [usize; 2],
    pub carrier: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Face {
    pub label: String,
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FacePairing {
    pub name: String,
    pub source: usize,
    pub target: usize,
    #[serde(skip)]
    pub element: GroupElement,
    /// Largest projective gap between images of source vertices and target vertices.
    pub residual: f64,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CellComplex {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    pub faces: Vec<Face>,
    pub pairings: Vec<FacePairing>,
    pub notes: Vec<String>,
}

impl CellComplex {
    pub fn vertex(&mut self, label: &str, lift: Lift) -> usize {
        self.vertices.push(Vertex {
            label: label.to_string(),
            lift,
        });
        self.vertices.len() - 1
    }

    pub fn index(&self, label: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.label == label)
    }

    fn edge(&mut self, a: usize, b: usize, carrier: &str) -> usize {
        let ends = [a.min(b), a.max(b)];
        if let Some(i) = self.edges.iter().position(|e| e.ends == ends && e.carrier == carrier) {
            return i;
        }
        self.edges.push(Edge {
            ends,
            carrier: carrier.to_string(),
        });
        self.edges.len() - 1
    }

    /// Add a face from its boundary, given as consecutive (vertex, vertex, carrier) edges.
    pub fn face(&mut self, label: &str, boundary: &[(usize, usize, &str)]) -> usize {
        let edges = boundary.iter().map(|&(a, b, c)| self.edge(a, b, c)).collect();
        let vertices = boundary.iter().map(|&(a, _, _)| a).collect();
        self.faces.push(Face {
            label: label.to_string(),
            vertices,
            edges,
        });
        self.faces.len() - 1
    }

    /// Add a face whose edges carry the default tag, from a cyclic vertex list.
    pub fn polygon(&mut self, label: &str, cycle: &[usize]) -> usize {
        let boundary: Vec<(usize, usize, &str)> = (0..cycle.len())
            .map(|i| (cycle[i], cycle[(i + 1) % cycle.len()], ""))
            .collect();
        self.face(label, &boundary)
    }

    /// Pair two faces, mapping their vertex lists in order.
    pub fn pair(&mut self, name: &str, source: usize, target: usize, element: GroupElement) {
        let src = &self.faces[source].vertices;
        let dst = &self.faces[target].vertices;
        let residual = src
            .iter()
            .zip(dst)
            .map(|(&a, &b)| {
                element
                    .apply_raw(&self.vertices[a].lift)
                    .projective_gap(&self.vertices[b].lift)
            })
            .fold(0.0, f64::max);
        self.pairings.push(FacePairing {
            name: name.to_string(),
            source,
            target,
            element,
            residual,
        });
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    /// Number of faces containing each edge.
    pub fn edge_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.edges.len()];
        for f in &self.faces {
            for &e in &f.edges {
                deg[e] += 1;
            }
        }
        deg
    }

    pub fn is_closed_surface(&self) -> bool {
        self.edge_degrees().iter().all(|&d| d == 2)
    }

    pub fn face_sizes(&self) -> Vec<usize> {
        self.faces.iter().map(|f| f.edges.len()).collect()
    }

    /// Classes of vertices identified by the pairings.
    pub fn vertex_classes(&self) -> Vec<Vec<usize>> {
        let mut parent: Vec<usize> = (0..self.vertices.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for pr in &self.pairings {
            let (src, dst) = (&self.faces[pr.source].vertices, &self.faces[pr.target].vertices);
            for (&a, &b) in src.iter().zip(dst) {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..self.vertices.len() {
            let r = find(&mut parent, v);
            classes.entry(r).or_default().push(v);
        }
        classes.into_values().collect()
    }

    /// For each vertex class, the tags of the elements returning a vertex to itself.
    pub fn vertex_stabilisers(&self, eps: f64) -> Vec<(String, Vec<IsometryTag>)> {
        let mut moves: Vec<(usize, usize, GroupElement)> = Vec::new();
        for pr in &self.pairings {
            let (src, dst) = (&self.faces[pr.source].vertices, &self.faces[pr.target].vertices);
            for (&a, &b) in src.iter().zip(dst) {
                moves.push((a, b, pr.element));
                moves.push((b, a, pr.element.inverse()));
            }
        }
        moves.sort_by_key(|m| (m.0, m.1));
        moves.dedup_by(|x, y| x.0 == y.0 && x.1 == y.1 && x.2.projective_distance(&y.2) < 1e-9);
        let mut out = Vec::new();
        for class in self.vertex_classes() {
            let root = class[0];
            let mut path: BTreeMap<usize, GroupElement> = BTreeMap::new();
            path.insert(root, GroupElement::identity());
            let mut queue = VecDeque::from([root]);
            let mut used = vec![false; moves.len()];
            while let Some(v) = queue.pop_front() {
                for (i, &(a, b, m)) in moves.iter().enumerate() {
                    if a == v && !path.contains_key(&b) {
                        path.insert(b, m * path[&v]);
                        used[i] = true;
                        queue.push_back(b);
                    }
                }
            }
            let mut tags = Vec::new();
            for (i, &(a, b, m)) in moves.iter().enumerate() {
                if used[i] || !path.contains_key(&a) {
                    continue;
                }
                let loop_elt = path[&b].inverse() * m * path[&a];
                tags.push(classify(&loop_elt, eps).tag);
            }
            out.push((self.vertices[root].label.clone(), tags));
        }
        out
    }
}

/// Carriers claimed for a vertex of the boundary complex: spheres as (k, plus) and fans.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VertexCertificate {
    pub label: String,
    pub max_residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundaryComplexReport {
    pub complex: CellComplex,
    pub euler_characteristic: i64,
    pub closed_surface: bool,
    pub vertex_certificates: Vec<VertexCertificate>,
    /// Each edge endpoint lies on both surfaces named by the edge.
    pub edge_residual: f64,
}

fn carrier_level(g: &GroupData, name: &str, p: &Lift) -> f64 {
    let fam = SphereFamily::new(g.params);
    let h = p.to_heis(DEFAULT_EPS).unwrap();
    match name {
        "F0" => Fan::new(0).signed_distance(h.z),
        "F-1" => Fan::new(-1).signed_distance(h.z),
        s => {
            let body = s.trim_start_matches("I[").trim_end_matches(']');
            let plus = body.ends_with('+');
            let k: i32 = body[..body.len() - 1].parse().unwrap();
            fam.sphere(k, plus).level(p)
        }
    }
}

/// The cell structure of the boundary of the complement of the Ford domain inside the slab.
pub fn boundary_cell_complex(l: &LimitData) -> BoundaryComplexReport {
    let g = &l.group;
    let q0 = Fan::base_lift(0.0, -sqrt(15.0) / 4.0);
    let qm1 = g.a.inverse().apply(&q0);
    let mut cx = CellComplex::default();
    let st = cx.vertex("p_ST^-1", l.p_st_inv);
    let si = cx.vertex("p_S^-1T", l.p_s_inv_t);
    let tst = cx.vertex("p_TST", l.p_tst);
    let q = cx.vertex("q_0", q0);
    let qm = cx.vertex("q_-1", qm1);
    let (r0, rm) = ("I[0+]&I[-1-]", "I[-1+]&I[-1-]");
    let (p0, f0p, f0m) = ("I[0+]&I[0-]", "F0&I[0+]", "F0&I[0-]");
    let (fm1m, fm1p) = ("F-1&I[-1-]", "F-1&I[-1+]");
    cx.face("Q'0+", &[(si, tst, r0), (tst, st, r0), (st, q, f0p), (q, si, p0)]);
    cx.face("T0-", &[(q, si, p0), (si, st, p0), (st, q, f0m)]);
    cx.face("B0+", &[(st, si, p0), (si, st, r0)]);
    cx.face("F0&D^c", &[(st, q, f0p), (q, st, f0m)]);
    cx.face("Q'-1-", &[(si, st, r0), (st, tst, r0), (tst, qm, fm1m), (qm, si, rm)]);
    cx.face("T-1+", &[(qm, si, rm), (si, tst, rm), (tst, qm, fm1p)]);
    cx.face("B-1-", &[(si, tst, r0), (tst, si, rm)]);
    cx.face("F-1&D^c", &[(tst, qm, fm1m), (qm, tst, fm1p)]);
    cx.notes.push("vertex set of Q'-1- inferred by translating the construction of Q'0+".into());

    let claims: [(usize, &[&str]); 5] = [
        (st, &["I[0+]", "I[0-]", "I[-1-]", "I[1+]", "F0"]),
        (si, &["I[0+]", "I[0-]", "I[-1-]", "I[-1+]"]),
        (tst, &["I[0+]", "I[-1-]", "I[-1+]", "I[-2-]", "F-1"]),
        (q, &["I[0+]", "I[0-]", "F0"]),
        (qm, &["I[-1+]", "I[-1-]", "F-1"]),
    ];
    let vertex_certificates = claims
        .iter()
        .map(|(v, names)| VertexCertificate {
            label: cx.vertices[*v].label.clone(),
            max_residual: names
                .iter()
                .map(|n| carrier_level(g, n, &cx.vertices[*v].lift).abs())
                .fold(0.0, f64::max),
        })
        .collect();
    let edge_residual = cx
        .edges
        .iter()
        .flat_map(|e| {
            e.carrier
                .split('&')
                .flat_map(|name| e.ends.map(|v| carrier_level(g, name, &cx.vertices[v].lift).abs()))
                .collect::<Vec<_>>()
        })
        .fold(0.0, f64::max);
    BoundaryComplexReport {
        euler_characteristic: cx.euler_characteristic(),
        closed_surface: cx.is_closed_surface(),
        complex: cx,
        vertex_certificates,
        edge_residual,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Octahedron {
    pub pre_merge: CellComplex,
    pub post_merge: CellComplex,
    /// Apex of the image of the lower pyramid; p_B = p_TS.
    pub lower_apex_gap: f64,
}

fn octahedron_vertices(l: &LimitData, cx: &mut CellComplex) -> [usize; 6] {
    let g = &l.group;
    [
        cx.vertex("p_ST", Lift::q_infinity()),
        cx.vertex("p_TS", g.p_b),
        cx.vertex("p_T^-1S", l.p_s_inv_t),
        cx.vertex("p_STS", l.p_sts),
        cx.vertex("p_TST", l.p_tst),
        cx.vertex("p_TS^-1", l.p_st_inv),
    ]
}

/// The ideal octahedron, before and after merging the bigon into its neighbouring triangle.
pub fn octahedron(l: &LimitData) -> Octahedron {
    let g = &l.group;
    let (s, t) = (g.s, g.t);
    let pairs = [("TS", t * s), ("ST", s * t), ("T", t), ("S", s)];

    let mut post = CellComplex::default();
    let [a, b, c_, d, e, f] = octahedron_vertices(l, &mut post);
    let tri = [
        [b, c_, d],
        [b, e, f],
        [a, e, c_],
        [a, f, d],
        [a, e, f],
        [b, c_, e],
        [b, f, d],
        [a, d, c_],
    ];
    let ids: Vec<usize> = tri
        .iter()
        .enumerate()
        .map(|(i, v)| post.polygon(&format!("F{i}"), v))
        .collect();
    for (i, (name, m)) in pairs.iter().enumerate() {
        post.pair(name, ids[2 * i], ids[2 * i + 1], *m);
    }

    let mut pre = CellComplex::default();
    let [a, b, c_, d, e, f] = octahedron_vertices(l, &mut pre);
    let x = "";
    let (fd1, fd2, dc1, dc2) = ("fd-inner", "fd-outer", "dc-inner", "dc-outer");
    let f_bcd = pre.face("F0", &[(b, c_, x), (c_, d, dc2), (d, b, x)]);
    let f_bef = pre.polygon("F1", &[b, e, f]);
    let f_aec = pre.polygon("F2", &[a, e, c_]);
    let f_afd = pre.face("F3", &[(a, f, x), (f, d, fd2), (d, a, x)]);
    let f_aef = pre.polygon("F4", &[a, e, f]);
    let f_bce = pre.polygon("F5", &[b, c_, e]);
    let f_bfd = pre.face("F6", &[(b, f, x), (f, d, fd1), (d, b, x)]);
    let f_adc = pre.face("F7", &[(a, d, x), (d, c_, dc1), (c_, a, x)]);
    let bigon_fd = pre.face("B0", &[(f, d, fd1), (d, f, fd2)]);
    let bigon_dc = pre.face("B1", &[(d, c_, dc1), (c_, d, dc2)]);
    pre.pair("TS", f_bcd, f_bef, t * s);
    pre.pair("ST", f_aec, f_afd, s * t);
    pre.pair("T", f_aef, f_bce, t);
    pre.pair("S", f_bfd, f_adc, s);
    pre.pair("S", bigon_fd, bigon_dc, s);

    let lower_apex_gap = s.apply(&g.p_ab).projective_gap(&g.p_b);
    Octahedron {
        pre_merge: pre,
        post_merge: post,
        lower_apex_gap,
    }
}

fn lift_parts(p: &Lift) -> [[f64; 2]; 3] {
    p.coords().map(|z| [z.re, z.im])
}

#[derive(Clone, Debug, Serialize)]
pub struct VertexExport {
    pub label: String,
    pub lift: [[f64; 2]; 3],
    pub heisenberg: Option<[f64; 3]>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairingExport {
    pub name: String,
    pub source_face: usize,
    pub target_face: usize,
    pub matrix: Vec<Vec<[f64; 2]>>,
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComplexExport {
    pub vertices: Vec<VertexExport>,
    pub faces: Vec<Vec<String>>,
    pub pairings: Vec<PairingExport>,
    pub euler_characteristic: i64,
}

pub fn export_complex(cx: &CellComplex) -> ComplexExport {
    ComplexExport {
        vertices: cx
            .vertices
            .iter()
            .map(|v| VertexExport {
                label: v.label.clone(),
                lift: lift_parts(&v.lift),
                heisenberg: v.lift.to_heis(DEFAULT_EPS).ok().map(|h| [h.z.re, h.z.im, h.t]),
            })
            .collect(),
        faces: cx
            .faces
            .iter()
            .map(|f| f.vertices.iter().map(|&v| cx.vertices[v].label.clone()).collect())
            .collect(),
        pairings: cx
            .pairings
            .iter()
            .map(|p| PairingExport {
                name: p.name.clone(),
                source_face: p.source,
                target_face: p.target,
                matrix: (0..3)
                    .map(|i| (0..3).map(|j| {
                        let z = p.element.matrix()[(i, j)];
                        [z.re, z.im]
                    }).collect())
                    .collect(),
                residual: p.residual,
            })
            .collect(),
        euler_characteristic: cx.euler_characteristic(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeltaPhiCheck {
    pub samples: usize,
    pub max_d4: f64,
    pub closed_form_residual: f64,
    pub bound: f64,
    pub all_outside: bool,
}

/// Distances from p_B to the φ-invariant line over one period, with the bound 529/1024.
pub fn delta_phi_exclusion(l: &LimitData, samples: usize) -> Result<DeltaPhiCheck> {
    let p = l.group.params;
    let dom = FordDomain::new(&p, 5)?;
    let half = sqrt(3.0 / 8.0);
    let mut max_d4: f64 = 0.0;
    let mut closed_form_residual: f64 = 0.0;
    let mut all_outside = true;
    for i in 0..samples {
        let x = -half + 2.0 * half * i as f64 / (samples - 1).max(1) as f64;
        let h = delta_phi(&p, x);
        let d4 = cygan_distance(&h, &HeisPoint::origin()).powi(4);
        max_d4 = max_d4.max(d4);
        let closed = x.powi(4) + 15.0 * x * x / 16.0 + 25.0 / 1024.0;
        closed_form_residual = closed_form_residual.max((d4 - closed).abs());
        all_outside &= matches!(
            dom.membership(&h.lift(), DEFAULT_EPS),
            crate::ford::DomainMembership::Outside(_)
        );
    }
    Ok(DeltaPhiCheck {
        samples,
        max_d4,
        closed_form_residual,
        bound: 529.0 / 1024.0,
        all_outside,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RidgeSplit {
    pub grid: BoundaryGrid,
    pub exclusion_radius: f64,
    pub components: usize,
    /// For each component, which of (ST⁻¹, S⁻¹T, STS, TST) it reaches.
    pub incidences: Vec<[bool; 4]>,
    pub sizes: Vec<usize>,
    /// Largest deviation of ι₁(r0+) from r0−, on sampled points.
    pub swap_residual: f64,
}

impl RidgeSplit {
    /// One component reaches all four points, the other only the two pinch points.
    pub fn quadrilateral_and_bigon(&self) -> bool {
        let mut inc = self.incidences.clone();
        inc.sort();
        self.components == 2
            && inc.contains(&[true, true, true, true])
            && inc.contains(&[true, true, false, false])
    }
}

/// Components of the part of ∂I[0+] outside both I[0−] and I[−1−], away from the pinch points.
pub fn ridge_split(l: &LimitData, grid: BoundaryGrid, exclusion_radius: f64) -> RidgeSplit {
    let g = &l.group;
    let base = CyganSphere::unit(HeisPoint::origin());
    let pts: Vec<Lift> = (0..grid.len()).map(|i| grid.point(&base, i)).collect();
    let cyg = |q: &Lift, v: &Lift| hermitian_product(q, v).norm().sqrt();
    let mask: Vec<bool> = pts
        .iter()
        .map(|q| {
            let f0 = hermitian_product(q, &g.p_ab).norm_sqr() - 1.0;
            let fm1 = hermitian_product(q, &g.p_ba).norm_sqr() - 1.0;
            f0 > 0.0
                && fm1 > 0.0
                && cyg(q, &l.p_st_inv) >= exclusion_radius
                && cyg(q, &l.p_s_inv_t) >= exclusion_radius
        })
        .collect();
    let comps = grid.components(&mask);
    let targets = [l.p_st_inv, l.p_s_inv_t, l.p_sts, l.p_tst];
    let reach = exclusion_radius + 0.05;
    let incidences = comps
        .iter()
        .map(|cmp| {
            targets.map(|v| cmp.iter().any(|&i| cyg(&pts[i], &v) <= reach))
        })
        .collect();
    let fam = SphereFamily::new(g.params);
    let iota1 = reflection_iota1();
    let mut swap_residual: f64 = 0.0;
    for i in 0..grid.len() {
        let q = &pts[i];
        if fam.minus(0).level(q).abs() < 1e-3 {
            let img = iota1.apply(q);
            let near: f64 = fam.minus(-1).level(&img).abs() - fam.minus(0).level(q).abs();
            swap_residual = swap_residual.max(near.abs());
        }
    }
    RidgeSplit {
        grid,
        exclusion_radius,
        components: comps.len(),
        incidences,
        sizes: comps.iter().map(Vec::len).collect(),
        swap_residual,
    }
}
