//! Cygan spheres, geographical coordinates, the isometric spheres of the family, their
//! pairwise positions and the triple intersection on the distinguished meridian.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::moduli::{build_group, quartic_roots_in_unit_interval, GroupData, Params};
use crate::poly::UnitIntervalRoots;
use crate::siegel::{
    c, cygan_distance, hermitian_product, serialize_complex, GroupElement, HeisPoint, Lift,
    DEFAULT_EPS,
};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CyganSphere {
    pub center: HeisPoint,
    pub radius: f64,
}

impl CyganSphere {
    pub fn new(center: HeisPoint, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::BadRadius(radius));
        }
        Ok(CyganSphere { center, radius })
    }

    pub fn unit(center: HeisPoint) -> Self {
        CyganSphere {
            center,
            radius: 1.0,
        }
    }

    /// Signed gap |⟨q,c⟩| − r² for a standard lift q; zero on the sphere.
    pub fn level(&self, q: &Lift) -> f64 {
        let q = q.standard(DEFAULT_EPS);
        hermitian_product(&q, &self.center.lift()).norm() - self.radius * self.radius
    }
}

/// Geographical coordinates on a Cygan sphere.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GeoCoord {
    pub alpha: f64,
    pub beta: f64,
    pub w: f64,
}

impl GeoCoord {
    pub fn new(alpha: f64, beta: f64, w: f64) -> Self {
        GeoCoord { alpha, beta, w }
    }

    /// A boundary point, w = ±√(2cos α).
    pub fn boundary(alpha: f64, beta: f64, positive: bool) -> Self {
        let w = (2.0 * alpha.cos()).max(0.0).sqrt();
        GeoCoord {
            alpha,
            beta,
            w: if positive { w } else { -w },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Membership {
    Interior,
    On,
    Exterior,
}

/// The isometric sphere of an element not fixing q∞: centre g⁻¹(q∞), radius |g₃₁|^{−1/2}.
pub fn isometric_sphere(g: &GroupElement, eps: f64) -> Result<CyganSphere> {
    let g31 = g.matrix()[(2, 0)];
    let scale = g.matrix().iter().map(|z| z.norm()).fold(1.0, f64::max);
    if g31.norm() <= eps * scale {
        return Err(Error::FixesInfinity);
    }
    let center = g.inverse().apply(&Lift::q_infinity()).to_heis(eps)?;
    CyganSphere::new(HeisPoint::boundary(center.z, center.t), 1.0 / g31.norm().sqrt())
}

/// Horospherical coordinates of a point in geographical coordinates relative to the origin.
fn geo_local(radius: f64, g: &GeoCoord) -> HeisPoint {
    let r2 = radius * radius;
    HeisPoint::new(
        C64::from_polar(radius * g.w / SQRT_2, g.beta - g.alpha / 2.0),
        r2 * g.alpha.sin(),
        (r2 * (g.alpha.cos() - g.w * g.w / 2.0)).max(0.0),
    )
}

pub fn geo_to_point(sphere: &CyganSphere, g: &GeoCoord) -> Result<Lift> {
    let bound = 2.0 * g.alpha.cos();
    if g.w * g.w > bound + 1e-12 {
        return Err(Error::OffSphere {
            w2: g.w * g.w,
            bound,
        });
    }
    let local = geo_local(sphere.radius, g).lift();
    Ok(GroupElement::heisenberg_translation(&sphere.center).apply(&local))
}

pub fn membership(sphere: &CyganSphere, q: &Lift, eps: f64) -> Membership {
    if q.is_infinity(eps) {
        return Membership::Exterior;
    }
    let gap = sphere.level(q);
    if gap.abs() <= eps * sphere.radius * sphere.radius {
        Membership::On
    } else if gap < 0.0 {
        Membership::Interior
    } else {
        Membership::Exterior
    }
}

/// The isometric spheres of A^k S^{±1} A^{−k}.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SphereFamily {
    pub params: Params,
}

impl SphereFamily {
    pub fn new(params: Params) -> Self {
        SphereFamily { params }
    }

    /// Centre [kℓ_A, k t_A].
    pub fn plus(&self, k: i32) -> CyganSphere {
        let p = &self.params;
        let k = k as f64;
        CyganSphere::unit(HeisPoint::boundary(c(k * p.ell_a(), 0.0), k * p.t_a()))
    }

    /// Centre [kℓ_A + √(cos α₁) e^{iα₂}, −sin α₁].
    pub fn minus(&self, k: i32) -> CyganSphere {
        let p = &self.params;
        let z = c(k as f64 * p.ell_a(), 0.0) + C64::from_polar(p.alpha1.cos().sqrt(), p.alpha2);
        CyganSphere::unit(HeisPoint::boundary(z, -p.alpha1.sin()))
    }

    pub fn sphere(&self, k: i32, plus: bool) -> CyganSphere {
        if plus {
            self.plus(k)
        } else {
            self.minus(k)
        }
    }
}

/// Fourth power of the centre distance between the spheres indexed (k,+) and (0,+).
pub fn closed_form_plus(p: &Params, k: i32) -> f64 {
    let (x, y) = (p.x1_4(), p.x2_4());
    let k = k as f64;
    (k.powi(4) * x * y * y + k * k * x * y * (4.0 - y)) / 4.0
}

/// Fourth power of the centre distance between the spheres indexed (k,−) and (0,+).
pub fn closed_form_minus(p: &Params, k: i32) -> f64 {
    let (x, y) = (p.x1_4(), p.x2_4());
    let m = (k as f64) * (k as f64 + 1.0);
    1.0 + (m * m * x * y * y + 2.0 * m * x * y) / 4.0
}

pub fn direct_plus(g: &GroupData, k: i32) -> Result<f64> {
    let q = g.a.pow(k).apply(&g.p_b).to_heis(DEFAULT_EPS)?;
    Ok(cygan_distance(&q, &HeisPoint::origin()).powi(4))
}

pub fn direct_minus(g: &GroupData, k: i32) -> Result<f64> {
    let q = g.a.pow(k).apply(&g.p_ab).to_heis(DEFAULT_EPS)?;
    Ok(cygan_distance(&q, &HeisPoint::origin()).powi(4))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PairStatus {
    /// Centre distance above 2: disjoint.
    Disjoint,
    /// Centre distance exactly 2 within tolerance.
    Tangent,
    /// One of the four spheres allowed to meet the (0,+) sphere.
    Neighbour,
    /// A sphere that should be disjoint is too close.
    Violation,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PairEntry {
    pub k: i32,
    pub plus: bool,
    pub closed_form: f64,
    pub direct: f64,
    pub status: PairStatus,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DisjointnessReport {
    pub params: Params,
    pub window: i32,
    pub entries: Vec<PairEntry>,
    /// Beyond the window both closed forms grow with |k| and already exceed 16 at the edge.
    pub tail_certified: bool,
}

impl DisjointnessReport {
    pub fn passed(&self) -> bool {
        self.tail_certified && self.entries.iter().all(|e| e.status != PairStatus::Violation)
    }
}

pub fn is_neighbour(k: i32, plus: bool) -> bool {
    if plus {
        k.abs() == 1
    } else {
        k == 0 || k == -1
    }
}

/// Compare each sphere within the window against the (0,+) sphere via the closed forms.
pub fn pairwise_disjointness_certificate(p: &Params, window: i32, eps: f64) -> Result<DisjointnessReport> {
    let g = build_group(p)?;
    let mut entries = Vec::new();
    for k in -window..=window {
        for plus in [true, false] {
            if plus && k == 0 {
                continue;
            }
            let (closed_form, direct) = if plus {
                (closed_form_plus(p, k), direct_plus(&g, k)?)
            } else {
                (closed_form_minus(p, k), direct_minus(&g, k)?)
            };
            let status = if is_neighbour(k, plus) {
                PairStatus::Neighbour
            } else if (closed_form - 16.0).abs() <= eps * 16.0 {
                PairStatus::Tangent
            } else if closed_form > 16.0 {
                PairStatus::Disjoint
            } else {
                PairStatus::Violation
            };
            entries.push(PairEntry {
                k,
                plus,
                closed_form,
                direct,
                status,
            });
        }
    }
    let y = p.x2_4();
    let edge = window + 1;
    let tail_certified = y <= 4.0
        && closed_form_plus(p, edge) >= 16.0 * (1.0 - eps)
        && closed_form_minus(p, edge) >= 16.0 * (1.0 - eps)
        && closed_form_minus(p, -edge - 1) >= 16.0 * (1.0 - eps);
    Ok(DisjointnessReport {
        params: *p,
        window,
        entries,
        tail_certified,
    })
}

/// The two functions whose signs decide membership in the (0,−) and (−1,−) spheres for
/// points of the (0,+) sphere.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FValues {
    pub f0: f64,
    pub fm1: f64,
    pub f0_direct: f64,
    pub fm1_direct: f64,
}

impl FValues {
    pub fn agreement(&self) -> f64 {
        (self.f0 - self.f0_direct).abs().max((self.fm1 - self.fm1_direct).abs())
    }
}

pub fn f_closed(p: &Params, q: &GeoCoord) -> (f64, f64) {
    let (a1, a2) = (p.alpha1, p.alpha2);
    let x1 = p.x1();
    let cc = (q.alpha / 2.0 - a1 / 2.0).cos();
    let common = 2.0 * cc * cc + (q.alpha - a1).cos() + q.w * q.w * x1 * x1;
    (
        common - 4.0 * q.w * x1 * cc * (q.beta + a1 / 2.0 - a2).cos(),
        common + 4.0 * q.w * x1 * cc * (q.beta + a1 / 2.0 + a2).cos(),
    )
}

pub fn f_functions(g: &GroupData, q: &GeoCoord) -> Result<FValues> {
    let (f0, fm1) = f_closed(&g.params, q);
    let pt = geo_to_point(&CyganSphere::unit(HeisPoint::origin()), q)?;
    Ok(FValues {
        f0,
        fm1,
        f0_direct: hermitian_product(&pt, &g.p_ab).norm_sqr() - 1.0,
        fm1_direct: hermitian_product(&pt, &g.p_ba).norm_sqr() - 1.0,
    })
}

/// β of the meridian where the two functions coincide.
pub fn distinguished_meridian(p: &Params) -> f64 {
    (PI - p.alpha1) / 2.0
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TriplePoint {
    pub coord: GeoCoord,
    pub multiplicity: u32,
    /// Value of f0 at the reported point.
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum TripleLocus {
    Empty,
    Points(Vec<TriplePoint>),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TripleReport {
    pub locus: TripleLocus,
    pub roots: UnitIntervalRoots,
    /// Smallest f0 over a dense sample of boundary points of the meridian.
    pub sampled_min: f64,
    pub consistent: bool,
}

impl TripleReport {
    pub fn is_empty(&self) -> bool {
        self.locus == TripleLocus::Empty
    }
}

fn meridian_f0(p: &Params, alpha: f64, positive: bool) -> f64 {
    f_closed(p, &GeoCoord::boundary(alpha, distinguished_meridian(p), positive)).0
}

/// Boundary points of the (0,+) sphere lying on both (0,−) and (−1,−), found through the quartic.
pub fn triple_intersection(p: &Params, eps: f64) -> TripleReport {
    let roots = quartic_roots_in_unit_interval(p, eps);
    let mut points = Vec::new();
    for r in &roots.roots {
        let alpha = 2.0 * r.value.atan();
        let (fp, fn_) = (meridian_f0(p, alpha, true), meridian_f0(p, alpha, false));
        let (positive, residual) = if fp.abs() <= fn_.abs() { (true, fp) } else { (false, fn_) };
        points.push(TriplePoint {
            coord: GeoCoord::boundary(alpha, distinguished_meridian(p), positive),
            multiplicity: r.multiplicity,
            residual,
        });
    }
    const SAMPLES: usize = 2001;
    let sampled_min = (0..SAMPLES)
        .flat_map(|i| {
            let alpha = -FRAC_PI_2 + PI * i as f64 / (SAMPLES - 1) as f64;
            [meridian_f0(p, alpha, true), meridian_f0(p, alpha, false)]
        })
        .fold(f64::INFINITY, f64::min);
    let spurious = points.iter().any(|q| q.residual.abs() > 1e-6);
    let consistent = !spurious && !(points.is_empty() && sampled_min < -1e-9);
    TripleReport {
        locus: if points.is_empty() {
            TripleLocus::Empty
        } else {
            TripleLocus::Points(points)
        },
        roots,
        sampled_min,
        consistent,
    }
}

/// Projection of a sphere to the z-plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Disc {
    #[serde(serialize_with = "serialize_complex")]
    pub center: C64,
    pub radius: f64,
}

pub fn vertical_projection(sphere: &CyganSphere) -> Disc {
    Disc {
        center: sphere.center.z,
        radius: sphere.radius,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LabelledDisc {
    pub center_re: f64,
    pub center_im: f64,
    pub radius: f64,
    pub label: String,
}

/// Projection discs of the family for |k| ≤ k_range, ordered by k then sign.
pub fn projection_discs(p: &Params, k_range: i32) -> Vec<LabelledDisc> {
    let fam = SphereFamily::new(*p);
    let mut out = Vec::new();
    for k in -k_range..=k_range {
        for plus in [true, false] {
            let d = vertical_projection(&fam.sphere(k, plus));
            out.push(LabelledDisc {
                center_re: d.center.re,
                center_im: d.center.im,
                radius: d.radius,
                label: format!("{k}{}", if plus { "+" } else { "-" }),
            });
        }
    }
    out
}

/// Sample grid of the boundary 2-sphere of a Cygan sphere: α rows, θ = β (+π for w < 0) columns.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundaryGrid {
    pub n_alpha: usize,
    pub n_theta: usize,
}

impl BoundaryGrid {
    pub fn new(n_alpha: usize, n_theta: usize) -> Self {
        BoundaryGrid { n_alpha, n_theta }
    }

    pub fn len(&self) -> usize {
        self.n_alpha * self.n_theta
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn alpha(&self, i: usize) -> f64 {
        -FRAC_PI_2 + PI * i as f64 / (self.n_alpha - 1) as f64
    }

    pub fn theta(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.n_theta as f64
    }

    pub fn point(&self, sphere: &CyganSphere, idx: usize) -> Lift {
        let (i, j) = (idx / self.n_theta, idx % self.n_theta);
        let alpha = self.alpha(i);
        let g = GeoCoord::new(alpha, self.theta(j), (2.0 * alpha.cos()).max(0.0).sqrt());
        geo_to_point(sphere, &g).expect("boundary coordinates lie on the sphere")
    }

    /// Connected components of the marked cells under 8-adjacency with θ wrapping.
    pub fn components(&self, mask: &[bool]) -> Vec<Vec<usize>> {
        let (na, nt) = (self.n_alpha, self.n_theta);
        let mut label = vec![usize::MAX; na * nt];
        let mut comps = Vec::new();
        for start in 0..na * nt {
            if !mask[start] || label[start] != usize::MAX {
                continue;
            }
            let id = comps.len();
            let mut members = vec![start];
            label[start] = id;
            let mut head = 0;
            while head < members.len() {
                let cur = members[head];
                head += 1;
                let (i, j) = ((cur / nt) as i64, (cur % nt) as i64);
                for di in -1..=1i64 {
                    for dj in -1..=1i64 {
                        let ni = i + di;
                        if ni < 0 || ni >= na as i64 {
                            continue;
                        }
                        let nj = (j + dj).rem_euclid(nt as i64);
                        let n = ni as usize * nt + nj as usize;
                        if mask[n] && label[n] == usize::MAX {
                            label[n] = id;
                            members.push(n);
                        }
                    }
                }
            }
            comps.push(members);
        }
        comps
    }
}

/// Number of connected pieces of the part of ∂`on` lying inside or on `other`.
pub fn intersection_components(on: &CyganSphere, other: &CyganSphere, grid: BoundaryGrid) -> usize {
    let mask: Vec<bool> = (0..grid.len())
        .map(|idx| other.level(&grid.point(on, idx)) <= 0.0)
        .collect();
    grid.components(&mask).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moduli::alpha2_limit;
    use crate::siegel::DEFAULT_EPS as EPS;

    #[test]
    fn isometric_sphere_of_s_is_unit_at_origin() {
        let g = build_group(&Params::new(0.3, -0.2).unwrap()).unwrap();
        let s = isometric_sphere(&g.s, EPS).unwrap();
        assert!(s.center.z.norm() < 1e-14 && s.center.t.abs() < 1e-14);
        assert!((s.radius - 1.0).abs() < 1e-14);
    }

    #[test]
    fn isometric_spheres_match_family() {
        let p = Params::new(0.4, 0.3).unwrap();
        let g = build_group(&p).unwrap();
        let fam = SphereFamily::new(p);
        for k in -3..=3 {
            let plus = isometric_sphere(&g.conj_a(&g.s, k), EPS).unwrap();
            let minus = isometric_sphere(&g.conj_a(&g.s.inverse(), k), EPS).unwrap();
            assert!(cygan_distance(&plus.center, &fam.plus(k).center).powi(2) < 1e-12);
            assert!(cygan_distance(&minus.center, &fam.minus(k).center).powi(2) < 1e-12);
            assert!((plus.radius - 1.0).abs() < 1e-12 && (minus.radius - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn radius_from_corner_entry() {
        let z = c(0.0, 0.0);
        let m = nalgebra::Matrix3::new(z, z, c(-0.25, 0.0), z, c(-1.0, 0.0), z, c(-4.0, 0.0), z, z);
        let g = GroupElement::new(m, 1e-9).unwrap();
        assert!((isometric_sphere(&g, EPS).unwrap().radius - 0.5).abs() < 1e-14);
        let a = build_group(&Params::limit()).unwrap().a;
        assert_eq!(isometric_sphere(&a, EPS), Err(Error::FixesInfinity));
    }

    #[test]
    fn geographical_points_lie_on_sphere() {
        let sphere = SphereFamily::new(Params::limit()).minus(2);
        for &(a, b, w) in &[(0.0, 0.3, 0.0), (0.7, 2.0, -0.9), (-1.2, 1.0, 0.5)] {
            let q = geo_to_point(&sphere, &GeoCoord::new(a, b, w)).unwrap();
            assert!(sphere.level(&q).abs() < 1e-12);
        }
        let o = geo_local(1.0, &GeoCoord::new(0.0, 1.3, 0.0));
        assert!(o.z.norm() < 1e-15 && o.t.abs() < 1e-15 && (o.u - 1.0).abs() < 1e-15);
        let b = geo_to_point(&CyganSphere::unit(HeisPoint::origin()), &GeoCoord::boundary(0.4, 0.2, true)).unwrap();
        assert!(b.self_product().abs() < 1e-14);
        assert!(geo_to_point(&sphere, &GeoCoord::new(1.0, 0.0, 2.0)).is_err());
    }

    #[test]
    fn limit_point_from_geography() {
        let q = geo_to_point(
            &CyganSphere::unit(HeisPoint::origin()),
            &GeoCoord::new(0.25f64.acos(), FRAC_PI_2, 0.5f64.sqrt()),
        )
        .unwrap();
        let want = Lift::new(
            c(-0.25, 15f64.sqrt() / 4.0),
            c(3f64.sqrt() / 4.0, 5f64.sqrt() / 4.0),
            c(1.0, 0.0),
        );
        assert!((q.0 - want.0).norm() < 1e-12);
    }

    #[test]
    fn membership_examples() {
        let g = build_group(&Params::new(0.2, 0.5).unwrap()).unwrap();
        let fam = SphereFamily::new(g.params);
        assert_eq!(membership(&fam.plus(0), &g.p_b, EPS), Membership::Interior);
        assert_eq!(membership(&fam.minus(0), &g.p_b, EPS), Membership::On);
        assert_eq!(membership(&fam.plus(0), &Lift::q_infinity(), EPS), Membership::Exterior);
    }

    #[test]
    fn closed_forms_match_direct() {
        let g = build_group(&Params::new(-0.35, 0.6).unwrap()).unwrap();
        for k in -5..=5 {
            let (cp, dp) = (closed_form_plus(&g.params, k), direct_plus(&g, k).unwrap());
            let (cm, dm) = (closed_form_minus(&g.params, k), direct_minus(&g, k).unwrap());
            assert!((cp - dp).abs() <= 1e-12 * cp.max(1.0), "{k}: {cp} {dp}");
            assert!((cm - dm).abs() <= 1e-12 * cm.max(1.0), "{k}: {cm} {dm}");
        }
    }

    #[test]
    fn closed_form_values() {
        let origin = Params::new(0.0, 0.0).unwrap();
        assert!((closed_form_plus(&origin, 1) - 16.0).abs() < 1e-12);
        assert_eq!(closed_form_plus(&origin, 0), 0.0);
        assert!((closed_form_minus(&Params::limit(), 1) - 16.0).abs() < 1e-12);
    }

    #[test]
    fn certificate_inside_region() {
        let r = pairwise_disjointness_certificate(&Params::new(0.4, 0.3).unwrap(), 5, EPS).unwrap();
        assert!(r.passed());
        let n = r.entries.iter().filter(|e| e.status == PairStatus::Neighbour).count();
        assert_eq!(n, 4);
        let lim = pairwise_disjointness_certificate(&Params::limit(), 5, EPS).unwrap();
        assert!(lim.passed());
        assert!(lim.entries.iter().any(|e| e.status == PairStatus::Tangent));
    }

    #[test]
    fn f_functions_agree() {
        let g = build_group(&Params::new(0.3, 0.4).unwrap()).unwrap();
        for &(a, b, w) in &[(0.2, 1.1, 0.8), (-0.5, 2.0, -0.4), (1.0, 0.1, 0.0)] {
            let f = f_functions(&g, &GeoCoord::new(a, b, w)).unwrap();
            assert!(f.agreement() < 1e-10, "{f:?}");
            let diff = -8.0 * w * g.params.x1() * (a / 2.0 - 0.15).cos() * (b + 0.15).cos() * 0.4f64.cos();
            assert!((f.f0 - f.fm1 - diff).abs() < 1e-12);
        }
        let centre_side = f_closed(&g.params, &GeoCoord::new(0.3, 0.0, 0.0));
        assert!((centre_side.0 - 3.0).abs() < 1e-12);
    }

    #[test]
    fn triple_intersection_examples() {
        assert!(triple_intersection(&Params::new(0.0, 0.0).unwrap(), EPS).is_empty());
        let r = triple_intersection(&Params::limit(), EPS);
        assert!(r.consistent);
        let TripleLocus::Points(pts) = &r.locus else { panic!("expected points") };
        assert_eq!(pts.len(), 2);
        for (q, s) in pts.iter().zip([-1.0, 1.0]) {
            assert!((q.coord.alpha - s * 0.25f64.acos()).abs() < 1e-7);
            assert!((q.coord.beta - FRAC_PI_2).abs() < 1e-15);
            assert!((q.coord.w - 0.5f64.sqrt()).abs() < 1e-7);
            assert_eq!(q.multiplicity, 2);
        }
        let outside = triple_intersection(&Params::new(0.0, alpha2_limit() + 0.05).unwrap(), EPS);
        assert!(!outside.is_empty() && outside.consistent);
    }

    #[test]
    fn projection_disc_examples() {
        let p = Params::new(0.4, 0.3).unwrap();
        let discs = projection_discs(&p, 2);
        assert_eq!(discs.len(), 10);
        let fam = SphereFamily::new(p);
        let d = vertical_projection(&fam.plus(1));
        assert!((d.center - c(p.ell_a(), 0.0)).norm() < 1e-15 && d.radius == 1.0);
    }

    #[test]
    fn components_wrap_in_theta() {
        let grid = BoundaryGrid::new(4, 6);
        let mut mask = vec![false; 24];
        mask[6] = true;
        mask[11] = true;
        mask[18] = true;
        assert_eq!(grid.components(&mask).len(), 2);
    }

    #[test]
    fn intersection_of_neighbours_connected() {
        let fam = SphereFamily::new(Params::new(0.2, 0.3).unwrap());
        let n = intersection_components(&fam.plus(0), &fam.minus(0), BoundaryGrid::new(128, 128));
        assert_eq!(n, 1);
    }
}
