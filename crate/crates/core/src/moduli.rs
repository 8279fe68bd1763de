//! The parameter square: generators, fixed points, symmetries, the commutator and
//! discreteness polynomials, and the quartic whose roots detect triple intersections.

use std::f64::consts::FRAC_PI_2;

use nalgebra::Matrix3;
use num_bigint::BigInt;
use num_complex::Complex64 as C64;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{has_root_in_unit_interval, quartic_discriminant, quartic_discriminant_in, Poly, UnitIntervalRoots};
use crate::siegel::{
    c, classify, AntiHolomorphic, GroupElement, HeisPoint, IsometryTag, Lift, Verdict, DEFAULT_EPS,
};

/// Distance kept from the edges ±π/2 of the square.
pub const GUARD: f64 = 1e-6;

/// The value of α₂ where the region boundary meets the axis α₁ = 0: arccos √(3/8).
pub fn alpha2_limit() -> f64 {
    (3.0f64 / 8.0).sqrt().acos()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Params {
    pub alpha1: f64,
    pub alpha2: f64,
}

impl Params {
    pub fn new(alpha1: f64, alpha2: f64) -> Result<Self> {
        let bound = FRAC_PI_2 - GUARD;
        if !(alpha1.abs() < bound && alpha2.abs() < bound) {
            return Err(Error::OutOfDomain { alpha1, alpha2 });
        }
        Ok(Params { alpha1, alpha2 })
    }

    /// The parameters of the limit group, (0, arccos √(3/8)).
    pub fn limit() -> Self {
        Params {
            alpha1: 0.0,
            alpha2: alpha2_limit(),
        }
    }

    pub fn x1(&self) -> f64 {
        (2.0 * self.alpha1.cos()).sqrt()
    }

    pub fn x2(&self) -> f64 {
        (2.0 * self.alpha2.cos()).sqrt()
    }

    /// x₁⁴ = 4cos²α₁.
    pub fn x1_4(&self) -> f64 {
        let c1 = self.alpha1.cos();
        4.0 * c1 * c1
    }

    /// x₂⁴ = 4cos²α₂.
    pub fn x2_4(&self) -> f64 {
        let c2 = self.alpha2.cos();
        4.0 * c2 * c2
    }

    /// Horizontal length of the translation A.
    pub fn ell_a(&self) -> f64 {
        self.x1() * self.x2().powi(2) / std::f64::consts::SQRT_2
    }

    /// Vertical component of the translation A.
    pub fn t_a(&self) -> f64 {
        self.x1().powi(2) * self.x2().powi(2) * self.alpha2.sin()
    }

    pub fn in_rectangle(&self) -> bool {
        self.alpha1.abs() <= std::f64::consts::FRAC_PI_6 && self.alpha2.abs() <= alpha2_limit()
    }
}

/// The generators and their named fixed points.
#[derive(Clone, Debug)]
pub struct GroupData {
    pub params: Params,
    pub a: GroupElement,
    pub b: GroupElement,
    pub s: GroupElement,
    pub t: GroupElement,
    pub p_a: Lift,
    pub p_b: Lift,
    pub p_ab: Lift,
    pub p_ba: Lift,
}

pub fn build_group(p: &Params) -> Result<GroupData> {
    let (a1, a2) = (p.alpha1, p.alpha2);
    let x1 = p.x1();
    let x2s = p.x2().powi(2);
    let e = |theta: f64| C64::from_polar(1.0, theta);
    let z = c(0.0, 0.0);
    let o = c(1.0, 0.0);
    let r = |v: f64| c(v, 0.0);
    let eps = DEFAULT_EPS;

    let a = GroupElement::new(
        Matrix3::new(
            o,
            r(-x1 * x2s),
            e(-a2) * (-x1 * x1 * x2s),
            z,
            o,
            r(x1 * x2s),
            z,
            z,
            o,
        ),
        eps,
    )?;
    let b = GroupElement::new(
        Matrix3::new(
            o,
            z,
            z,
            e(-a1) * (x1 * x2s),
            o,
            z,
            e(a2) * (-x1 * x1 * x2s),
            e(a1) * (-x1 * x2s),
            o,
        ),
        eps,
    )?;
    let s = GroupElement::new(
        Matrix3::new(
            e(a1),
            e(a1 - a2) * x1,
            -o,
            e(a2) * (-x1),
            -e(a1),
            z,
            -o,
            z,
            z,
        ) * e(-a1 / 3.0),
        eps,
    )?;
    let t = GroupElement::new(
        Matrix3::new(
            z,
            z,
            -o,
            z,
            -e(-a1),
            e(-a1 - a2) * (-x1),
            -o,
            e(a2) * x1,
            e(-a1),
        ) * e(a1 / 3.0),
        eps,
    )?;

    for (name, g) in [("A", a), ("B", b), ("AB", a * b)] {
        if classify(&g, eps).tag != IsometryTag::Unipotent {
            return Err(Error::NotUnipotent(name));
        }
    }

    Ok(GroupData {
        params: *p,
        a,
        b,
        s,
        t,
        p_a: Lift::q_infinity(),
        p_b: HeisPoint::origin().lift(),
        p_ab: Lift::new(-e(a1), e(a2) * x1, o),
        p_ba: Lift::new(-e(a1), e(-a2) * (-x1), o),
    })
}

impl GroupData {
    /// A^k S A^{-k}.
    pub fn conj_a(&self, g: &GroupElement, k: i32) -> GroupElement {
        self.a.pow(k) * *g * self.a.pow(-k)
    }

    /// The predicted value x₁²x₂⁴e^{iα₁/3} of tr(ST⁻¹).
    pub fn predicted_trace_st_inv(&self) -> C64 {
        let p = &self.params;
        C64::from_polar(p.x1().powi(2) * p.x2().powi(4), p.alpha1 / 3.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DecompositionKind {
    /// α₁ = 0: S = I₂I₁ and T = I₁I₃.
    StProduct,
    /// α₂ = 0: A = I₂I₁ and B = I₁I₃.
    AbProduct,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub kind: DecompositionKind,
    pub i1: GroupElement,
    pub i2: GroupElement,
    pub i3: GroupElement,
}

#[derive(Clone, Debug)]
pub struct SymmetryMaps {
    /// Antiholomorphic involution swapping A and B.
    pub iota: AntiHolomorphic,
    /// Antiholomorphic square root of A.
    pub phi: AntiHolomorphic,
    pub decompositions: Vec<Decomposition>,
}

/// v ↦ (conj z₁, −conj z₂, conj z₃); in Heisenberg coordinates [z,t] ↦ [−conj z, −t].
pub fn reflection_iota1() -> AntiHolomorphic {
    AntiHolomorphic(Matrix3::from_diagonal(&nalgebra::Vector3::new(
        c(1.0, 0.0),
        c(-1.0, 0.0),
        c(1.0, 0.0),
    )))
}

pub fn symmetry_maps(g: &GroupData, eps: f64) -> SymmetryMaps {
    let a1 = g.params.alpha1;
    let z = c(0.0, 0.0);
    let o = c(1.0, 0.0);
    let iota = AntiHolomorphic(Matrix3::new(
        z,
        z,
        o,
        z,
        C64::from_polar(1.0, -a1),
        z,
        o,
        z,
        z,
    ));
    let phi = iota.after(&g.s);
    let mut decompositions = Vec::new();
    if a1.abs() <= eps {
        if let Ok(i1) = GroupElement::new(reflection_iota1().compose(&iota).matrix().to_owned(), 1e-9) {
            decompositions.push(Decomposition {
                kind: DecompositionKind::StProduct,
                i1,
                i2: g.s * i1,
                i3: i1 * g.t,
            });
        }
    }
    if g.params.alpha2.abs() <= eps {
        let i1 = GroupElement::new(
            Matrix3::from_diagonal(&nalgebra::Vector3::new(-o, o, -o)),
            1e-9,
        )
        .expect("diagonal reflection lies in SU(2,1)");
        decompositions.push(Decomposition {
            kind: DecompositionKind::AbProduct,
            i1,
            i2: g.a * i1,
            i3: i1 * g.b,
        });
    }
    SymmetryMaps {
        iota,
        phi,
        decompositions,
    }
}

/// The φ-invariant line, parametrised so that φ shifts the parameter by ℓ_A/2.
pub fn delta_phi(p: &Params, x: f64) -> HeisPoint {
    let r = p.alpha1.cos().sqrt() * p.alpha2.sin();
    HeisPoint::boundary(c(x, r / 2.0), x * r - p.alpha1.sin() / 2.0)
}

fn k<N: FromPrimitive>(v: i64) -> N {
    N::from_i64(v).expect("small integer constant")
}

fn discreteness_generic<N: Clone + Num + FromPrimitive>(x: &N, y: &N) -> N {
    let x = x.clone();
    let y = y.clone();
    let x2 = x.clone() * x.clone();
    let y2 = y.clone() * y.clone();
    x2.clone() * x.clone() * y2.clone() * y.clone() - k::<N>(9) * x2 * y2.clone()
        - k::<N>(27) * x.clone() * y2
        + k::<N>(81) * x.clone() * y
        - k::<N>(27) * x
        - k::<N>(27)
}

fn commutator_generic<N: Clone + Num + FromPrimitive>(x: &N, y: &N) -> N {
    let x = x.clone();
    let y = y.clone();
    let x2 = x.clone() * x.clone();
    let y2 = y.clone() * y.clone();
    let y3 = y2.clone() * y.clone();
    x2.clone() * y3.clone() * y - k::<N>(4) * x2 * y3 + k::<N>(18) * x * y2 - k::<N>(27)
}

/// x³y³ − 9x²y² − 27xy² + 81xy − 27x − 27, positive on the interior of the region.
pub fn discreteness_polynomial(x: f64, y: f64) -> f64 {
    discreteness_generic(&x, &y)
}

/// x²y⁴ − 4x²y³ + 18xy² − 27, whose sign is the isometry type of the commutator.
pub fn commutator_polynomial(x: f64, y: f64) -> f64 {
    commutator_generic(&x, &y)
}

pub fn discreteness_exact(x: &BigRational, y: &BigRational) -> BigRational {
    discreteness_generic(x, y)
}

pub fn commutator_exact(x: &BigRational, y: &BigRational) -> BigRational {
    commutator_generic(x, y)
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// A rational with denominator at most 64 within 1e−12 of `v`, if any.
pub fn snap_rational(v: f64) -> Option<BigRational> {
    let tol = 1e-12 * v.abs().max(1.0);
    (1..=64i64).find_map(|d| {
        let n = (v * d as f64).round();
        if (n / d as f64 - v).abs() <= tol {
            Some(rational(n as i64, d))
        } else {
            None
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CommutatorTag {
    Loxodromic,
    Parabolic,
    Elliptic,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CommutatorClass {
    pub tag: CommutatorTag,
    pub g: f64,
    pub marginal: bool,
    /// Classification of [A,B] computed from matrices.
    pub matrix_tag: IsometryTag,
    pub consistent: bool,
}

pub fn commutator_class(g: &GroupData, eps: f64) -> CommutatorClass {
    let p = &g.params;
    let (value, exact_sign) = polynomial_value(p, commutator_exact, commutator_polynomial);
    let verdict = exact_sign.unwrap_or_else(|| Verdict::positive(value, eps));
    let tag = match verdict {
        Verdict::Yes => CommutatorTag::Loxodromic,
        Verdict::No => CommutatorTag::Elliptic,
        Verdict::Marginal => CommutatorTag::Parabolic,
    };
    let m = classify(&g.a.commutator(&g.b), eps).tag;
    let consistent = match tag {
        CommutatorTag::Loxodromic => m == IsometryTag::Loxodromic,
        CommutatorTag::Elliptic => matches!(
            m,
            IsometryTag::RegularElliptic | IsometryTag::ParabolicOrSpecialElliptic | IsometryTag::Identity
        ),
        CommutatorTag::Parabolic => {
            matches!(m, IsometryTag::Unipotent | IsometryTag::ParabolicOrSpecialElliptic)
        }
    };
    CommutatorClass {
        tag,
        g: value,
        marginal: exact_sign.is_none() && verdict == Verdict::Marginal,
        matrix_tag: m,
        consistent,
    }
}

/// Evaluate a polynomial in (x₁⁴, x₂⁴), exactly when both snap to small rationals.
/// The second component is the exact sign when available.
fn polynomial_value(
    p: &Params,
    exact: fn(&BigRational, &BigRational) -> BigRational,
    float: fn(f64, f64) -> f64,
) -> (f64, Option<Verdict>) {
    let (x, y) = (p.x1_4(), p.x2_4());
    match (snap_rational(x), snap_rational(y)) {
        (Some(xr), Some(yr)) => {
            let v = exact(&xr, &yr);
            let sign = if v.is_zero() {
                Verdict::Marginal
            } else if v.is_positive() {
                Verdict::Yes
            } else {
                Verdict::No
            };
            (v.to_f64().unwrap_or(f64::NAN), Some(sign))
        }
        _ => (float(x, y), None),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RegionTag {
    #[serde(rename = "Z_interior")]
    ZInterior,
    #[serde(rename = "Z_boundary")]
    ZBoundary,
    #[serde(rename = "L_outside_Z")]
    LOutsideZ,
    #[serde(rename = "P_curve")]
    PCurve,
    #[serde(rename = "E_elliptic")]
    EElliptic,
}

impl RegionTag {
    pub fn label(self) -> &'static str {
        match self {
            RegionTag::ZInterior => "Z_interior",
            RegionTag::ZBoundary => "Z_boundary",
            RegionTag::LOutsideZ => "L_outside_Z",
            RegionTag::PCurve => "P_curve",
            RegionTag::EElliptic => "E_elliptic",
        }
    }

    pub fn in_closure(self) -> bool {
        matches!(self, RegionTag::ZInterior | RegionTag::ZBoundary)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RegionClass {
    pub tag: RegionTag,
    pub d: f64,
    pub g: f64,
    pub delta: f64,
    /// Values came from exact rational evaluation.
    pub exact: bool,
    /// The deciding value fell inside the tolerance band.
    pub marginal: bool,
    pub on_parabolic_curve: bool,
}

pub fn region_classify(p: &Params, eps: f64) -> RegionClass {
    let (d, d_sign) = polynomial_value(p, discreteness_exact, discreteness_polynomial);
    let (g, g_sign) = polynomial_value(p, commutator_exact, commutator_polynomial);
    let exact = d_sign.is_some() && g_sign.is_some();
    let inside = p.alpha1.abs() <= std::f64::consts::FRAC_PI_6 + eps && p.alpha2.abs() <= alpha2_limit() + eps;
    let dv = if inside {
        d_sign.unwrap_or_else(|| Verdict::positive(d, eps))
    } else {
        Verdict::No
    };
    let gv = g_sign.unwrap_or_else(|| Verdict::positive(g, eps));
    let (tag, marginal) = match (dv, gv) {
        (Verdict::Yes, _) => (RegionTag::ZInterior, false),
        (Verdict::Marginal, _) => (RegionTag::ZBoundary, d_sign.is_none()),
        (_, Verdict::No) => (RegionTag::EElliptic, false),
        (_, Verdict::Marginal) => (RegionTag::PCurve, g_sign.is_none()),
        _ => (RegionTag::LOutsideZ, false),
    };
    RegionClass {
        tag,
        d,
        g,
        delta: discriminant(p),
        exact,
        marginal,
        on_parabolic_curve: gv == Verdict::Marginal,
    }
}

/// The quartic in T = tan(α/2) whose roots in [−1,1] are triple-intersection points.
pub fn quartic_l(p: &Params) -> Poly {
    let u = p.x1().powi(2);
    let u2 = p.x1_4();
    let v = p.x2_4();
    let s = p.alpha1.sin();
    Poly::new(vec![
        2.0 * u2 * v + 4.0 * u * v + u2 - 10.0 * u + 1.0,
        8.0 * s * (u * v - u + 1.0),
        -2.0 * (2.0 * u2 * v + 3.0 * u2 - 9.0),
        -8.0 * s * (u * v - u - 1.0),
        2.0 * u2 * v - 4.0 * u * v + u2 + 10.0 * u + 1.0,
    ])
}

/// Closed-form discriminant of the quartic, factored through the discreteness polynomial.
/// It carries the leading coefficient as an extra factor, i.e. it is the resultant of
/// the quartic with its derivative.
pub fn discriminant(p: &Params) -> f64 {
    closed_discriminant_in(&p.x1().powi(2), &p.x2_4())
}

/// Resultant of the quartic with its derivative, computed from its coefficients.
pub fn algebraic_discriminant(p: &Params) -> f64 {
    let c = quartic_l(p).coeffs_padded(5);
    c[4] * quartic_discriminant([c[0], c[1], c[2], c[3], c[4]])
}

/// Both discriminants evaluated in exact rational arithmetic at the floating-point values
/// of x₁² and x₂⁴, with sin²α₁ taken as 1 − x₁⁴/4.
pub fn discriminants_exact(p: &Params) -> (BigRational, BigRational) {
    let u = BigRational::from_float(p.x1().powi(2)).expect("finite");
    let y = BigRational::from_float(p.x2_4()).expect("finite");
    (closed_discriminant_in(&u, &y), algebraic_discriminant_exact(&u, &y))
}

fn closed_discriminant_in<N: Clone + Num + FromPrimitive>(u: &N, y: &N) -> N {
    let n = |v: i64| k::<N>(v);
    let x = u.clone() * u.clone();
    let four_y = n(4) - y.clone();
    let mid = n(2) * u.clone() * (n(2) - u.clone()) * four_y.clone()
        + (n(3) * u.clone() - n(1)) * (n(3) * u.clone() - n(1));
    let xp = x.clone() + n(1);
    n(65536) * x.clone() * xp.clone() * xp * mid * four_y.clone() * four_y * discreteness_generic(&x, y)
}

/// The odd coefficients carry a factor sin α₁; rescaling T by 1/sin α₁ makes every
/// coefficient rational in x₁², x₂⁴ and sin²α₁. Everything is cleared to integers so the
/// quartic discriminant runs over BigInt with a single final division.
fn algebraic_discriminant_exact(u: &BigRational, y: &BigRational) -> BigRational {
    let den = u.denom().max(y.denom()).clone();
    let big_u = u.numer() * (&den / u.denom());
    let big_y = y.numer() * (&den / y.denom());
    let d = |e: u32| num_traits::pow(den.clone(), e as usize);
    let i = |v: i64| BigInt::from(v);
    let (uu, uy) = (&big_u * &big_u, &big_u * &big_y);
    let uuy = &uu * &big_y;
    // Coefficients scaled by den³.
    let c0 = i(2) * &uuy + i(4) * &uy * d(1) + &uu * d(1) - i(10) * &big_u * d(2) + d(3);
    let k1 = i(8) * (&uy * d(1) - &big_u * d(2) + d(3));
    let c2 = i(-2) * (i(2) * &uuy + i(3) * &uu * d(1) - i(9) * d(3));
    let k3 = i(-8) * (&uy * d(1) - &big_u * d(2) - d(3));
    let c4 = i(2) * &uuy - i(4) * &uy * d(1) + &uu * d(1) + i(10) * &big_u * d(2) + d(3);
    // sin²α₁ = P/Q.
    let q = i(4) * d(2);
    let pn = &q - &uu;
    if pn.is_zero() {
        let disc = quartic_discriminant_in([c0, i(0), c2, i(0), c4.clone()]);
        return BigRational::new(c4 * disc, d(21));
    }
    let p2 = &pn * &pn;
    let scaled = [
        &c0 * &p2,
        &k1 * &p2,
        &c2 * &q * &pn,
        &k3 * &q * &pn,
        &c4 * &q * &q,
    ];
    let disc = quartic_discriminant_in(scaled);
    let q6 = num_traits::pow(q, 6);
    let p6 = num_traits::pow(pn, 6);
    BigRational::new(c4 * disc, d(21) * q6 * p6)
}

pub fn quartic_roots_in_unit_interval(p: &Params, eps: f64) -> UnitIntervalRoots {
    has_root_in_unit_interval(&quartic_l(p), eps)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BoundaryCurve {
    /// The boundary of the discreteness region.
    Z,
    /// The curve where the commutator is parabolic.
    P,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundaryTrace {
    pub curve: BoundaryCurve,
    /// Polylines in the quadrants (+,+), (−,+), (−,−), (+,−).
    pub quadrants: Vec<Vec<(f64, f64)>>,
    pub max_residual: f64,
    /// Sample indices where no sign change bracketed a root.
    pub failures: Vec<usize>,
}

fn bisect_fn(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> Option<f64> {
    let (mut flo, fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if (flo > 0.0) == (fhi > 0.0) {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Some(mid);
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

fn angle_from_fourth_power(v: f64) -> f64 {
    (v.sqrt() / 2.0).clamp(-1.0, 1.0).acos()
}

/// Trace a boundary curve by bisection in x₂⁴ for sampled x₁⁴, then mirror into all quadrants.
pub fn trace_boundary(curve: BoundaryCurve, samples: usize) -> BoundaryTrace {
    let samples = samples.max(2);
    let (x_lo, x_hi) = match curve {
        BoundaryCurve::Z => (3.0, 4.0),
        BoundaryCurve::P => (3.0 / 32.0, 4.0),
    };
    let (y_lo, y_hi) = match curve {
        BoundaryCurve::Z => (1.5, 4.0),
        BoundaryCurve::P => (0.0, 4.0),
    };
    let f = match curve {
        BoundaryCurve::Z => discreteness_polynomial,
        BoundaryCurve::P => commutator_polynomial,
    };
    let mut first = Vec::with_capacity(samples);
    let mut failures = Vec::new();
    let mut max_residual: f64 = 0.0;
    for i in 0..samples {
        let x = x_lo + (x_hi - x_lo) * i as f64 / (samples - 1) as f64;
        match bisect_fn(|y| f(x, y), y_lo, y_hi) {
            Some(y) => {
                max_residual = max_residual.max(f(x, y).abs());
                first.push((angle_from_fourth_power(x), angle_from_fourth_power(y)));
            }
            None => failures.push(i),
        }
    }
    let flip = |sx: f64, sy: f64| -> Vec<(f64, f64)> {
        first.iter().map(|&(a, b)| (sx * a, sy * b)).collect()
    };
    BoundaryTrace {
        curve,
        quadrants: vec![flip(1.0, 1.0), flip(-1.0, 1.0), flip(-1.0, -1.0), flip(1.0, -1.0)],
        max_residual,
        failures,
    }
}

/// Grid coordinate i of n on [lo, hi], exactly antisymmetric when lo = −hi.
pub fn grid_coordinate(lo: f64, hi: f64, i: usize, n: usize) -> f64 {
    if n < 2 {
        return 0.5 * (lo + hi);
    }
    let m = (n - 1) as f64;
    (lo * (m - i as f64) + hi * i as f64) / m
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScanCell {
    pub alpha1: f64,
    pub alpha2: f64,
    pub class: RegionClass,
}

/// Classify an n×n grid; cells are ordered with α₁ as the outer index.
pub fn scan_region(bounds: [f64; 4], n: usize, eps: f64) -> Vec<ScanCell> {
    let [a1_lo, a1_hi, a2_lo, a2_hi] = bounds;
    (0..n * n)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / n, idx % n);
            let p = Params {
                alpha1: grid_coordinate(a1_lo, a1_hi, i, n),
                alpha2: grid_coordinate(a2_lo, a2_hi, j, n),
            };
            ScanCell {
                alpha1: p.alpha1,
                alpha2: p.alpha2,
                class: region_classify(&p, eps),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;


    #[test]
    fn headline_values_exact() {
        assert_eq!(discreteness_exact(&rational(4, 1), &rational(4, 1)), rational(1225, 1));
        assert!(discreteness_exact(&rational(4, 1), &rational(3, 2)).is_zero());
        assert!(discreteness_exact(&rational(3, 1), &rational(4, 1)).is_zero());
        assert!(commutator_exact(&rational(4, 1), &rational(3, 2)).is_zero());
        assert_eq!(commutator_exact(&rational(4, 1), &rational(4, 1)), rational(1125, 1));
    }

    #[test]
    fn special_value_factorisations() {
        for i in 0..20 {
            let x = 0.1 + 0.37 * i as f64;
            let d = |a, b| discreteness_polynomial(a, b);
            assert!((d(x, 1.5) - 27.0 / 8.0 * (x - 4.0) * (x * x - 2.0 * x + 2.0)).abs() < 1e-9);
            assert!((d(x, 4.0) - (x - 3.0) * (3.0 + 8.0 * x).powi(2)).abs() < 1e-8);
            assert!((d(3.0, x) - 27.0 * (x - 4.0) * (x - 1.0).powi(2)).abs() < 1e-8);
            assert!((d(4.0, x) - (16.0 * x - 15.0) * (2.0 * x - 3.0).powi(2)).abs() < 1e-8);
            assert!((commutator_polynomial(x, 4.0) - 9.0 * (32.0 * x - 3.0)).abs() < 1e-8);
        }
    }

    #[test]
    fn generator_matrices_at_origin() {
        let g = build_group(&Params::new(0.0, 0.0).unwrap()).unwrap();
        let r8 = 8.0f64.sqrt();
        let m = g.a.matrix();
        assert!((m[(0, 1)] - c(-r8, 0.0)).norm() < 1e-14);
        assert!((m[(0, 2)] - c(-4.0, 0.0)).norm() < 1e-14);
        assert!((m[(1, 2)] - c(r8, 0.0)).norm() < 1e-14);
        assert!((g.s * g.t).projective_distance(&g.a) < 1e-12);
        assert!((g.t * g.s).projective_distance(&g.b) < 1e-12);
    }

    #[test]
    fn limit_generator_entries() {
        let g = build_group(&Params::limit()).unwrap();
        let m = g.a.matrix();
        assert!((m[(0, 1)] - c(-3f64.sqrt(), 0.0)).norm() < 1e-14);
        assert!((m[(0, 2)] - c(-1.5, 15f64.sqrt() / 2.0)).norm() < 1e-14);
    }

    #[test]
    fn out_of_domain_rejected() {
        assert!(Params::new(FRAC_PI_2, 0.0).is_err());
        assert!(Params::new(0.0, -FRAC_PI_2 + 1e-7).is_err());
        assert!(Params::new(1.5, -1.5).is_ok());
    }

    #[test]
    fn region_examples() {
        let origin = region_classify(&Params::new(0.0, 0.0).unwrap(), DEFAULT_EPS);
        assert_eq!(origin.tag, RegionTag::ZInterior);
        assert!(origin.exact);
        assert_eq!(origin.d, 1225.0);
        let lim = region_classify(&Params::limit(), DEFAULT_EPS);
        assert_eq!(lim.tag, RegionTag::ZBoundary);
        assert!(lim.on_parabolic_curve && lim.exact);
        let side = region_classify(&Params::new(std::f64::consts::FRAC_PI_6, 0.0).unwrap(), DEFAULT_EPS);
        assert_eq!(side.tag, RegionTag::ZBoundary);
        let lobe = Params::new(0.0, 1.0).unwrap();
        assert!(discreteness_polynomial(4.0, 4.0 * 1f64.cos().powi(2)) > 0.0);
        assert!(!region_classify(&lobe, DEFAULT_EPS).tag.in_closure());
    }

    #[test]
    fn commutator_examples() {
        let g0 = build_group(&Params::new(0.0, 0.0).unwrap()).unwrap();
        let c0 = commutator_class(&g0, DEFAULT_EPS);
        assert_eq!(c0.tag, CommutatorTag::Loxodromic);
        assert_eq!(c0.g, 1125.0);
        assert!(c0.consistent);
        let gl = build_group(&Params::limit()).unwrap();
        assert_eq!(commutator_class(&gl, DEFAULT_EPS).tag, CommutatorTag::Parabolic);
        let ge = build_group(&Params::new(0.0, 1.4).unwrap()).unwrap();
        let ce = commutator_class(&ge, DEFAULT_EPS);
        assert_eq!(ce.tag, CommutatorTag::Elliptic);
        assert!(ce.consistent);
    }

    #[test]
    fn quartic_squares_on_axes() {
        let l0 = quartic_l(&Params::new(0.0, 0.0).unwrap());
        for (got, want) in l0.coeffs.iter().zip([49.0, 0.0, -70.0, 0.0, 25.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        let ll = quartic_l(&Params::limit());
        for (got, want) in ll.coeffs.iter().zip([9.0, 0.0, -30.0, 0.0, 25.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn discriminant_is_lead_times_standard() {
        for &(a1, a2) in &[(0.1, 0.2), (-0.3, 0.5), (0.45, -0.7)] {
            let p = Params::new(a1, a2).unwrap();
            let l = quartic_l(&p);
            let coeffs: [f64; 5] = l.coeffs.clone().try_into().unwrap();
            let alg = l.leading() * quartic_discriminant(coeffs);
            let closed = discriminant(&p);
            assert!((alg - closed).abs() <= 1e-9 * closed.abs().max(1.0), "{alg} vs {closed}");
        }
    }

    #[test]
    fn discriminant_positive_inside() {
        assert!(discriminant(&Params::new(0.0, std::f64::consts::FRAC_PI_4).unwrap()) > 0.0);
        assert_eq!(discriminant(&Params::new(0.2, 0.0).unwrap()).abs(), 0.0);
    }

    #[test]
    fn boundary_trace_endpoints() {
        let tr = trace_boundary(BoundaryCurve::Z, 33);
        assert!(tr.failures.is_empty());
        assert!(tr.max_residual < 1e-9);
        let q = &tr.quadrants[0];
        assert!((q[0].0 - std::f64::consts::FRAC_PI_6).abs() < 1e-9 && q[0].1.abs() < 1e-6);
        let last = q.last().unwrap();
        assert!(last.0.abs() < 1e-12 && (last.1 - alpha2_limit()).abs() < 1e-9);
        let p = trace_boundary(BoundaryCurve::P, 17);
        assert!(p.failures.is_empty());
    }

    #[test]
    fn snap_only_near_rationals() {
        assert_eq!(snap_rational(1.4999999999999996), Some(rational(3, 2)));
        assert_eq!(snap_rational(0.1234567), None);
    }

    #[test]
    fn grid_is_antisymmetric() {
        for i in 0..11 {
            assert_eq!(grid_coordinate(-0.7, 0.7, i, 11), -grid_coordinate(-0.7, 0.7, 10 - i, 11));
        }
    }
}
