//! Siegel-model arithmetic: the Hermitian form, lifts, Heisenberg coordinates,
//! the Cygan metric and the classification of isometries.

use std::fmt;
use std::ops::Mul;

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Default tolerance for "is zero" and "has unit modulus" predicates.
pub const DEFAULT_EPS: f64 = 1e-9;

const SQRT2: f64 = std::f64::consts::SQRT_2;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// The three cube roots of unity, starting with 1.
pub fn cube_roots_of_unity() -> [C64; 3] {
    let w = C64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
    [C64::new(1.0, 0.0), w, w * w]
}

/// The antidiagonal Hermitian form of signature (2,1).
pub fn form_matrix() -> Matrix3<C64> {
    let o = C64::new(1.0, 0.0);
    let z = C64::new(0.0, 0.0);
    Matrix3::new(z, z, o, z, o, z, o, z, z)
}

/// Three-valued outcome of a tolerance-sensitive predicate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Yes,
    No,
    Marginal,
}

impl Verdict {
    /// `Yes` above `eps`, `No` below `-eps`, `Marginal` in between.
    pub fn positive(value: f64, eps: f64) -> Self {
        if value > eps {
            Verdict::Yes
        } else if value < -eps {
            Verdict::No
        } else {
            Verdict::Marginal
        }
    }

    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }

    pub fn passed(self) -> bool {
        self == Verdict::Yes
    }

    /// Combine two verdicts: any `No` wins, then any `Marginal`.
    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::No, _) | (_, Verdict::No) => Verdict::No,
            (Verdict::Marginal, _) | (_, Verdict::Marginal) => Verdict::Marginal,
            _ => Verdict::Yes,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::Yes => "pass",
            Verdict::No => "fail",
            Verdict::Marginal => "marginal",
        };
        f.write_str(s)
    }
}

/// A vector of C³ representing a point of the complex hyperbolic plane or its boundary.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Lift(pub Vector3<C64>);

impl Lift {
    pub fn new(z1: C64, z2: C64, z3: C64) -> Self {
        Lift(Vector3::new(z1, z2, z3))
    }

    pub fn q_infinity() -> Self {
        Lift::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0))
    }

    pub fn coords(&self) -> [C64; 3] {
        [self.0[0], self.0[1], self.0[2]]
    }

    pub fn max_modulus(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_infinity(&self, eps: f64) -> bool {
        self.0[2].norm() < eps * self.max_modulus()
    }

    /// Rescale to the standard lift: third coordinate 1, or (1,0,0) at infinity.
    pub fn standard(&self, eps: f64) -> Lift {
        if self.is_infinity(eps) {
            let s = self.0[0];
            if s.norm() == 0.0 {
                return *self;
            }
            Lift(self.0 / s)
        } else {
            Lift(self.0 / self.0[2])
        }
    }

    /// Real number ⟨v,v⟩; negative inside, zero on the boundary.
    pub fn self_product(&self) -> f64 {
        hermitian_product(self, self).re
    }

    pub fn to_heis(&self, eps: f64) -> Result<HeisPoint> {
        if self.is_infinity(eps) {
            return Err(Error::PointAtInfinity);
        }
        let v = self.0 / self.0[2];
        let z = v[1] / SQRT2;
        Ok(HeisPoint {
            z,
            t: v[0].im,
            u: (-v[0].re - z.norm_sqr()).max(0.0),
        })
    }

    /// Sine of the angle between the complex lines spanned by two lifts.
    pub fn projective_gap(&self, other: &Lift) -> f64 {
        let n = self.norm() * other.norm();
        if n == 0.0 {
            return f64::INFINITY;
        }
        let x = self.0.cross(&other.0);
        x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt() / n
    }

    pub fn same_point(&self, other: &Lift, tol: f64) -> bool {
        self.projective_gap(other) <= tol
    }

    pub fn conj(&self) -> Lift {
        Lift(self.0.map(|z| z.conj()))
    }
}

/// ⟨x,y⟩ = y* H x.
pub fn hermitian_product(x: &Lift, y: &Lift) -> C64 {
    x.0[0] * y.0[2].conj() + x.0[1] * y.0[1].conj() + x.0[2] * y.0[0].conj()
}

/// Horospherical coordinates (z,t,u); u = 0 on the boundary.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HeisPoint {
    #[serde(serialize_with = "serialize_complex")]
    pub z: C64,
    pub t: f64,
    pub u: f64,
}

pub(crate) fn serialize_complex<S: serde::Serializer>(
    z: &C64,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    let mut tup = s.serialize_tuple(2)?;
    tup.serialize_element(&z.re)?;
    tup.serialize_element(&z.im)?;
    tup.end()
}

impl HeisPoint {
    pub fn new(z: C64, t: f64, u: f64) -> Self {
        HeisPoint { z, t, u }
    }

    pub fn boundary(z: C64, t: f64) -> Self {
        HeisPoint { z, t, u: 0.0 }
    }

    pub fn origin() -> Self {
        HeisPoint::boundary(c(0.0, 0.0), 0.0)
    }

    /// Standard lift (−|z|²−u+it, z√2, 1).
    pub fn lift(&self) -> Lift {
        Lift::new(
            c(-self.z.norm_sqr() - self.u, self.t),
            self.z * SQRT2,
            c(1.0, 0.0),
        )
    }
}

/// Cygan distance, extended to horospherical coordinates.
pub fn cygan_distance(p: &HeisPoint, q: &HeisPoint) -> f64 {
    let dz = (p.z - q.z).norm_sqr();
    let im = p.t - q.t + 2.0 * (p.z * q.z.conj()).im;
    c(dz + (p.u - q.u).abs(), im).norm().sqrt()
}

/// Left translation [w,s]·[z,t]; the height of the second point is carried along.
pub fn heisenberg_translate(by: &HeisPoint, p: &HeisPoint) -> HeisPoint {
    HeisPoint {
        z: by.z + p.z,
        t: by.t + p.t - 2.0 * (p.z * by.z.conj()).im,
        u: p.u,
    }
}

/// An element of SU(2,1), stored as a unit-determinant matrix preserving the form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GroupElement(Matrix3<C64>);

impl GroupElement {
    /// Validate `m` and rescale it to determinant one.
    pub fn new(m: Matrix3<C64>, eps: f64) -> Result<Self> {
        let h = form_matrix();
        let scale = m.iter().map(|z| z.norm_sqr()).sum::<f64>().max(1.0);
        let residual = (m.adjoint() * h * m - h).norm() / scale;
        if residual > eps {
            return Err(Error::NotFormPreserving(residual));
        }
        let det = m.determinant();
        let near_root = cube_roots_of_unity()
            .iter()
            .any(|w| (det - w).norm() <= eps.max(1e-12) * scale);
        if !near_root {
            return Err(Error::BadDeterminant {
                re: det.re,
                im: det.im,
            });
        }
        let root = det.powf(1.0 / 3.0);
        Ok(GroupElement(m / root))
    }

    /// Wrap a matrix known to lie in SU(2,1), such as a product of validated elements.
    pub(crate) fn trusted(m: Matrix3<C64>) -> Self {
        GroupElement(m)
    }

    pub fn identity() -> Self {
        GroupElement(Matrix3::identity())
    }

    pub fn matrix(&self) -> &Matrix3<C64> {
        &self.0
    }

    /// Heisenberg translation by [w,s] as a matrix.
    pub fn heisenberg_translation(p: &HeisPoint) -> Self {
        let w = p.z;
        let one = c(1.0, 0.0);
        let zero = c(0.0, 0.0);
        GroupElement(Matrix3::new(
            one,
            -w.conj() * SQRT2,
            c(-w.norm_sqr(), p.t),
            zero,
            one,
            w * SQRT2,
            zero,
            zero,
            one,
        ))
    }

    pub fn apply_raw(&self, p: &Lift) -> Lift {
        Lift(self.0 * p.0)
    }

    /// Image of a point, renormalised to its standard lift.
    pub fn apply(&self, p: &Lift) -> Lift {
        self.apply_raw(p).standard(DEFAULT_EPS)
    }

    /// H m* H, the inverse of a form-preserving matrix.
    pub fn inverse(&self) -> Self {
        let h = form_matrix();
        GroupElement(h * self.0.adjoint() * h)
    }

    pub fn pow(&self, n: i32) -> Self {
        let base = if n < 0 { self.inverse() } else { *self };
        let mut out = GroupElement::identity();
        for _ in 0..n.unsigned_abs() {
            out = out * base;
        }
        out
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn commutator(&self, other: &GroupElement) -> Self {
        *self * *other * self.inverse() * other.inverse()
    }

    pub fn conjugate_by(&self, h: &GroupElement) -> Self {
        *h * *self * h.inverse()
    }

    /// Frobenius distance between projective classes, minimised over cube-root scalars.
    pub fn projective_distance(&self, other: &GroupElement) -> f64 {
        cube_roots_of_unity()
            .iter()
            .map(|w| (self.0 - other.0 * *w).norm())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn distance_from_identity(&self) -> f64 {
        self.projective_distance(&GroupElement::identity())
    }

    pub fn is_scalar(&self, eps: f64) -> bool {
        let scale = self.0.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let d = self.0[(0, 0)];
        (0..3).all(|i| {
            (0..3).all(|j| {
                let target = if i == j { d } else { c(0.0, 0.0) };
                (self.0[(i, j)] - target).norm() <= eps * scale
            })
        })
    }

    pub fn form_residual(&self) -> f64 {
        let h = form_matrix();
        (self.0.adjoint() * h * self.0 - h).norm()
    }

    /// Fixed boundary point of a parabolic element (the image of its nilpotent part).
    pub fn parabolic_fixed_point(&self) -> Option<Lift> {
        let tr = self.trace();
        let mu = cube_roots_of_unity()
            .into_iter()
            .min_by(|a, b| {
                (tr - a * 3.0)
                    .norm()
                    .partial_cmp(&(tr - b * 3.0).norm())
                    .unwrap()
            })
            .unwrap();
        let n = self.0 / mu - Matrix3::identity();
        let nn = n.norm();
        if nn < 1e-12 {
            return None;
        }
        let n2 = n * n;
        let m = if n2.norm() > 1e-8 * nn * nn.max(1.0) { n2 } else { n };
        let col = (0..3)
            .max_by(|&a, &b| {
                m.column(a)
                    .norm()
                    .partial_cmp(&m.column(b).norm())
                    .unwrap()
            })
            .unwrap();
        let v = m.column(col);
        Some(Lift::new(v[0], v[1], v[2]).standard(DEFAULT_EPS))
    }
}

impl Mul for GroupElement {
    type Output = GroupElement;
    fn mul(self, rhs: GroupElement) -> GroupElement {
        GroupElement(self.0 * rhs.0)
    }
}

/// An antiholomorphic isometry v ↦ M·conj(v).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AntiHolomorphic(pub Matrix3<C64>);

impl AntiHolomorphic {
    pub fn apply_raw(&self, p: &Lift) -> Lift {
        Lift(self.0 * p.0.map(|z| z.conj()))
    }

    pub fn apply(&self, p: &Lift) -> Lift {
        self.apply_raw(p).standard(DEFAULT_EPS)
    }

    /// self ∘ other, which is holomorphic.
    pub fn compose(&self, other: &AntiHolomorphic) -> GroupElement {
        GroupElement::trusted(self.0 * other.0.map(|z| z.conj()))
    }

    /// g ∘ self.
    pub fn after(&self, g: &GroupElement) -> AntiHolomorphic {
        AntiHolomorphic(g.matrix() * self.0)
    }

    /// self ∘ g.
    pub fn before(&self, g: &GroupElement) -> AntiHolomorphic {
        AntiHolomorphic(self.0 * g.matrix().map(|z| z.conj()))
    }

    pub fn square(&self) -> GroupElement {
        self.compose(self)
    }
}

/// Goldman's trace polynomial |z|⁴ − 8Re(z³) + 18|z|² − 27.
pub fn trace_function(z: C64) -> f64 {
    let n = z.norm_sqr();
    n * n - 8.0 * (z * z * z).re + 18.0 * n - 27.0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum IsometryTag {
    Loxodromic,
    RegularElliptic,
    Unipotent,
    ParabolicOrSpecialElliptic,
    Identity,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IsometryClass {
    pub tag: IsometryTag,
    /// Value of the trace polynomial at the trace.
    pub witness: f64,
    /// True when the witness fell inside the tolerance band.
    pub marginal: bool,
}

pub fn classify(g: &GroupElement, eps: f64) -> IsometryClass {
    let tr = g.trace();
    let f = trace_function(tr);
    let scale = tr.norm().powi(4).max(1.0);
    if g.is_scalar(eps) {
        return IsometryClass {
            tag: IsometryTag::Identity,
            witness: f,
            marginal: false,
        };
    }
    let tag = match Verdict::positive(f, eps * scale) {
        Verdict::Yes => IsometryTag::Loxodromic,
        Verdict::No => IsometryTag::RegularElliptic,
        Verdict::Marginal => {
            let unipotent = cube_roots_of_unity()
                .iter()
                .any(|w| (tr - w * 3.0).norm() <= eps * 3.0);
            if unipotent {
                IsometryTag::Unipotent
            } else {
                IsometryTag::ParabolicOrSpecialElliptic
            }
        }
    };
    IsometryClass {
        tag,
        witness: f,
        marginal: f.abs() <= eps * scale,
    }
}

/// arg(−⟨p₁,p₂⟩⟨p₂,p₃⟩⟨p₃,p₁⟩) with the branch (−π, π].
pub fn cartan_invariant(p1: &Lift, p2: &Lift, p3: &Lift, eps: f64) -> Result<f64> {
    let pairs = [(p1, p2), (p2, p3), (p3, p1)];
    let mut prod = c(-1.0, 0.0);
    for (a, b) in pairs {
        let h = hermitian_product(a, b);
        if h.norm() <= eps * a.norm() * b.norm() {
            return Err(Error::CoincidentPoints);
        }
        prod *= h;
    }
    let arg = prod.arg();
    Ok(if arg <= -std::f64::consts::PI { std::f64::consts::PI } else { arg })
}

/// The polar vector H·conj(p × q), orthogonal to both inputs.
pub fn polar_vector(p: &Lift, q: &Lift, eps: f64) -> Result<Lift> {
    if p.projective_gap(q) <= eps {
        return Err(Error::CoincidentPoints);
    }
    let x = p.0.cross(&q.0).map(|z| z.conj());
    Ok(Lift::new(x[2], x[1], x[0]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn form_on_basis_points() {
        let qinf = Lift::q_infinity();
        let pb = HeisPoint::origin().lift();
        assert_eq!(hermitian_product(&qinf, &qinf), c(0.0, 0.0));
        assert_eq!(hermitian_product(&qinf, &pb), c(1.0, 0.0));
    }

    #[test]
    fn cygan_unit_point_and_self() {
        let o = HeisPoint::origin();
        let one = HeisPoint::boundary(c(1.0, 0.0), 0.0);
        assert!(close(cygan_distance(&o, &one), 1.0, 1e-15));
        let p = HeisPoint::boundary(c(0.3, -0.2), 0.7);
        assert_eq!(cygan_distance(&p, &p), 0.0);
    }

    #[test]
    fn cygan_matches_form_on_boundary() {
        let p = HeisPoint::boundary(c(0.3, 0.2), 0.4);
        let q = HeisPoint::boundary(c(-0.5, 0.7), -1.1);
        let d = cygan_distance(&p, &q);
        let h = hermitian_product(&p.lift(), &q.lift()).norm();
        assert!(close(d * d, h, 1e-12));
    }

    #[test]
    fn heisenberg_law_examples() {
        let id = heisenberg_translate(&HeisPoint::origin(), &HeisPoint::boundary(c(0.4, 1.0), 2.0));
        assert_eq!(id, HeisPoint::boundary(c(0.4, 1.0), 2.0));
        let r = heisenberg_translate(
            &HeisPoint::boundary(c(1.0, 0.0), 0.0),
            &HeisPoint::boundary(c(0.0, 1.0), 0.0),
        );
        assert_eq!(r.z, c(1.0, 1.0));
        assert!(close(r.t, -2.0, 1e-15));
    }

    #[test]
    fn translation_matrix_moves_origin() {
        let w = HeisPoint::boundary(c(0.3, -1.2), 0.8);
        let g = GroupElement::heisenberg_translation(&w);
        let img = g.apply(&HeisPoint::origin().lift()).to_heis(DEFAULT_EPS).unwrap();
        assert!((img.z - w.z).norm() < 1e-15 && close(img.t, w.t, 1e-15));
        assert!(GroupElement::new(*g.matrix(), DEFAULT_EPS).is_ok());
    }

    #[test]
    fn translation_matrix_matches_group_law() {
        let w = HeisPoint::boundary(c(0.3, -1.2), 0.8);
        let p = HeisPoint::boundary(c(-0.7, 0.4), -0.3);
        let g = GroupElement::heisenberg_translation(&w);
        let img = g.apply(&p.lift()).to_heis(DEFAULT_EPS).unwrap();
        let law = heisenberg_translate(&w, &p);
        assert!((img.z - law.z).norm() < 1e-14 && close(img.t, law.t, 1e-14));
    }

    #[test]
    fn trace_function_values() {
        assert!(close(trace_function(c(0.0, 0.0)), -27.0, 0.0));
        assert!(close(trace_function(c(3.0, 0.0)), 0.0, 1e-12));
        assert!(close(trace_function(c(4.0, 0.0)), 5.0, 1e-12));
    }

    #[test]
    fn classify_translation_and_identity() {
        let g = GroupElement::heisenberg_translation(&HeisPoint::boundary(c(1.0, 0.0), 0.5));
        assert_eq!(classify(&g, DEFAULT_EPS).tag, IsometryTag::Unipotent);
        assert_eq!(classify(&GroupElement::identity(), DEFAULT_EPS).tag, IsometryTag::Identity);
    }

    #[test]
    fn cartan_examples() {
        let qinf = Lift::q_infinity();
        let o = HeisPoint::origin().lift();
        let real = HeisPoint::boundary(c(1.0, 0.0), 0.0).lift();
        let vert = HeisPoint::boundary(c(0.0, 0.0), 1.0).lift();
        assert!(close(cartan_invariant(&qinf, &o, &real, DEFAULT_EPS).unwrap(), 0.0, 1e-15));
        assert!(close(
            cartan_invariant(&qinf, &o, &vert, DEFAULT_EPS).unwrap(),
            std::f64::consts::FRAC_PI_2,
            1e-15
        ));
        assert!(cartan_invariant(&qinf, &qinf, &o, DEFAULT_EPS).is_err());
    }

    #[test]
    fn polar_of_basis_points() {
        let v = polar_vector(&Lift::q_infinity(), &HeisPoint::origin().lift(), DEFAULT_EPS).unwrap();
        assert!(v.0[0].norm() < 1e-15 && v.0[2].norm() < 1e-15 && v.0[1].norm() > 0.5);
        assert!(polar_vector(&Lift::q_infinity(), &Lift::q_infinity(), DEFAULT_EPS).is_err());
    }

    #[test]
    fn rejects_non_isometry() {
        let m = Matrix3::from_diagonal(&Vector3::new(c(2.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)));
        assert!(matches!(GroupElement::new(m, DEFAULT_EPS), Err(Error::NotFormPreserving(_))));
    }

    #[test]
    fn rescales_cube_root_determinant() {
        let w = cube_roots_of_unity()[1];
        let g = GroupElement::heisenberg_translation(&HeisPoint::boundary(c(0.2, 0.1), 0.3));
        let scaled = GroupElement::new(g.matrix() * w, DEFAULT_EPS).unwrap();
        assert!((scaled.matrix().determinant() - c(1.0, 0.0)).norm() < 1e-12);
        assert!(scaled.projective_distance(&g) < 1e-12);
    }

    #[test]
    fn standard_lift_round_trip() {
        let p = HeisPoint::new(c(0.25, -0.5), 1.5, 0.75);
        let back = p.lift().to_heis(DEFAULT_EPS).unwrap();
        assert!((back.z - p.z).norm() < 1e-15);
        assert!(close(back.t, p.t, 1e-15) && close(back.u, p.u, 1e-15));
        assert!(Lift::q_infinity().to_heis(DEFAULT_EPS).is_err());
    }

    #[test]
    fn parabolic_fixed_point_of_translation() {
        let g = GroupElement::heisenberg_translation(&HeisPoint::boundary(c(0.0, 0.0), 2.0));
        let p = g.parabolic_fixed_point().unwrap();
        assert!(p.same_point(&Lift::q_infinity(), 1e-15));
        assert!(GroupElement::identity().parabolic_fixed_point().is_none());
    }
}
