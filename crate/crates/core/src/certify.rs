//! Certificate batteries grouped by module, each check reported as
//! `{check, params, resolution, verdict, witnesses}`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_6};

use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::ford::{
    freeness_probe, local_tessellation, presentation, reduce_word, rel, ridge_invariance, ridge_to_ridge,
    FordDomain, Word,
};
use crate::limit::{
    boundary_cell_complex, cycle_graph, delta_phi_exclusion, fan_ridge_intersection, fan_sphere_table,
    fixed_point_checks, limit_group, octahedron, phi_orbit_gaps, tangency_check,
};
use crate::moduli::{
    alpha2_limit, build_group, commutator_exact, discreteness_exact, discriminant, discriminants_exact, quartic_l, rational,
    region_classify, trace_boundary, BoundaryCurve, Params, RegionTag, GUARD,
};
use crate::siegel::{cartan_invariant, classify, cygan_distance, HeisPoint, IsometryTag, Lift};
use crate::spheres::{
    closed_form_minus, closed_form_plus, direct_minus, direct_plus, pairwise_disjointness_certificate,
    triple_intersection,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckVerdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub name: String,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub check: String,
    pub params: Option<[f64; 2]>,
    pub resolution: f64,
    pub verdict: CheckVerdict,
    pub witnesses: Vec<Witness>,
}

impl Check {
    fn new(check: &str, params: Option<&Params>, resolution: f64, ok: bool) -> Self {
        Check {
            check: check.to_string(),
            params: params.map(|p| [p.alpha1, p.alpha2]),
            resolution,
            verdict: if ok { CheckVerdict::Pass } else { CheckVerdict::Fail },
            witnesses: Vec::new(),
        }
    }

    fn with(mut self, name: &str, value: f64) -> Self {
        self.witnesses.push(Witness {
            name: name.to_string(),
            value,
        });
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == CheckVerdict::Pass
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Core,
    Moduli,
    Spheres,
    Ford,
    Limit,
    All,
}

impl Suite {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "core" => Suite::Core,
            "moduli" => Suite::Moduli,
            "spheres" => Suite::Spheres,
            "ford" => Suite::Ford,
            "limit" => Suite::Limit,
            "all" => Suite::All,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Core => "core",
            Suite::Moduli => "moduli",
            Suite::Spheres => "spheres",
            Suite::Ford => "ford",
            Suite::Limit => "limit",
            Suite::All => "all",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub passed: bool,
    pub checks: Vec<Check>,
}

pub fn run_suite(suite: Suite, eps: f64) -> SuiteReport {
    let checks = match suite {
        Suite::Core => core_checks(eps),
        Suite::Moduli => moduli_checks(eps),
        Suite::Spheres => spheres_checks(eps),
        Suite::Ford => ford_checks(eps),
        Suite::Limit => limit_checks(eps),
        Suite::All => [core_checks, moduli_checks, spheres_checks, ford_checks, limit_checks]
            .iter()
            .flat_map(|f| f(eps))
            .collect(),
    };
    SuiteReport {
        suite,
        passed: checks.iter().all(Check::passed),
        checks,
    }
}

/// Parameters drawn uniformly from the square minus the guard band.
pub fn random_params(rng: &mut impl Rng) -> Params {
    let b = FRAC_PI_2 - 2.0 * GUARD;
    Params::new(rng.random_range(-b..b), rng.random_range(-b..b)).expect("inside the guarded square")
}

/// Parameters drawn from the rectangle |α₁| ≤ π/6, |α₂| ≤ α₂^lim.
pub fn random_rectangle_params(rng: &mut impl Rng) -> Params {
    let (a, b) = (FRAC_PI_6, alpha2_limit());
    Params::new(rng.random_range(-a..=a), rng.random_range(-b..=b)).expect("inside the rectangle")
}

fn error(check: &str, p: Option<&Params>, e: crate::Error) -> Check {
    Check::new(&format!("{check}: {e}"), p, 0.0, false)
}

fn core_checks(eps: f64) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut out = Vec::new();
    let (mut tr_unip, mut tr_zero, mut prod, mut cube, mut form, mut st_inv): (f64, f64, f64, f64, f64, f64) =
        (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    for _ in 0..50 {
        let p = random_params(&mut rng);
        let Ok(g) = build_group(&p) else {
            out.push(Check::new("generator_identities", Some(&p), 1e-12, false));
            return out;
        };
        let three = num_complex::Complex64::new(3.0, 0.0);
        tr_unip = tr_unip.max((g.a.trace() - three).norm()).max(((g.a * g.b).trace() - three).norm());
        tr_zero = tr_zero.max(g.s.trace().norm()).max(g.t.trace().norm());
        prod = prod
            .max((g.s * g.t).projective_distance(&g.a))
            .max((g.t * g.s).projective_distance(&g.b));
        cube = cube.max(g.s.pow(3).distance_from_identity());
        form = form.max(g.s.form_residual()).max(g.t.form_residual());
        st_inv = st_inv.max(((g.s * g.t.inverse()).trace() - g.predicted_trace_st_inv()).norm());
    }
    out.push(
        Check::new(
            "generator_identities",
            None,
            1e-12,
            tr_unip < 1e-12 && tr_zero < 1e-12 && prod < 1e-10 && cube < 1e-10 && form < 1e-12 && st_inv < 1e-12,
        )
        .with("trace_unipotent", tr_unip)
        .with("trace_order_three", tr_zero)
        .with("product_gap", prod)
        .with("cube_gap", cube)
        .with("form_residual", form)
        .with("trace_st_inverse", st_inv),
    );

    let (o, one) = (HeisPoint::origin(), HeisPoint::boundary(num_complex::Complex64::new(1.0, 0.0), 0.0));
    let d = cygan_distance(&o, &one);
    out.push(Check::new("cygan_unit_point", None, 1e-15, (d - 1.0).abs() < 1e-15).with("distance", d));

    let cartan = cartan_invariant(
        &Lift::q_infinity(),
        &HeisPoint::origin().lift(),
        &HeisPoint::boundary(num_complex::Complex64::new(1.0, 0.0), 0.0).lift(),
        eps,
    );
    out.push(match cartan {
        Ok(v) => Check::new("cartan_real_triple", None, 1e-12, v.abs() < 1e-12).with("cartan", v),
        Err(e) => error("cartan_real_triple", None, e),
    });

    let g0 = build_group(&Params::new(0.0, 0.0).unwrap()).unwrap();
    let tags = [
        classify(&g0.a, eps).tag == IsometryTag::Unipotent,
        classify(&g0.s, eps).tag == IsometryTag::RegularElliptic,
        classify(&g0.s.pow(3), eps).tag == IsometryTag::Identity,
    ];
    out.push(Check::new("isometry_classes", Some(&g0.params), eps, tags.iter().all(|&t| t)));
    out
}

fn moduli_checks(eps: f64) -> Vec<Check> {
    let mut out = Vec::new();
    let d = |x: (i64, i64), y: (i64, i64)| discreteness_exact(&rational(x.0, x.1), &rational(y.0, y.1));
    let ok = d((4, 1), (4, 1)) == rational(1225, 1)
        && d((4, 1), (3, 2)).is_zero()
        && d((3, 1), (4, 1)).is_zero()
        && commutator_exact(&rational(4, 1), &rational(3, 2)).is_zero();
    out.push(Check::new("exact_polynomial_values", None, 0.0, ok));

    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let (mut exact_mismatch, mut worst): (usize, f64) = (0, 0.0);
    for _ in 0..1000 {
        let p = random_rectangle_params(&mut rng);
        let (closed, alg) = discriminants_exact(&p);
        if closed != alg {
            exact_mismatch += 1;
        }
        let reference = alg.to_f64().unwrap_or(f64::NAN);
        worst = worst.max((discriminant(&p) - reference).abs() / reference.abs().max(f64::MIN_POSITIVE));
    }
    out.push(
        Check::new("discriminant_identity", None, 1e-9, exact_mismatch == 0 && worst < 1e-9)
            .with("exact_mismatches", exact_mismatch as f64)
            .with("max_relative_gap", worst),
    );

    for (p, want) in [
        (Params::new(0.0, 0.0).unwrap(), (5.0, -7.0)),
        (Params::limit(), (5.0, -3.0)),
    ] {
        let l = quartic_l(&p).coeffs_padded(5);
        let expected = [want.1 * want.1, 0.0, 2.0 * want.0 * want.1, 0.0, want.0 * want.0];
        let gap = l.iter().zip(expected).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        out.push(Check::new("quartic_square_factor", Some(&p), 1e-12, gap < 1e-12).with("coefficient_gap", gap));
    }

    for (p, want) in [
        (Params::new(0.0, 0.0).unwrap(), RegionTag::ZInterior),
        (Params::limit(), RegionTag::ZBoundary),
        (Params::new(0.0, 1.4).unwrap(), RegionTag::EElliptic),
    ] {
        let r = region_classify(&p, eps);
        out.push(Check::new(&format!("region_{}", want.label()), Some(&p), eps, r.tag == want).with("D", r.d).with("G", r.g));
    }

    for curve in [BoundaryCurve::Z, BoundaryCurve::P] {
        let t = trace_boundary(curve, 200);
        out.push(
            Check::new(&format!("trace_{curve:?}"), None, 1e-9, t.failures.is_empty() && t.max_residual < 1e-9)
                .with("max_residual", t.max_residual),
        );
    }
    out
}

fn spheres_checks(eps: f64) -> Vec<Check> {
    let mut out = Vec::new();
    for p in [Params::new(0.0, 0.0).unwrap(), Params::new(0.4, 0.3).unwrap(), Params::limit()] {
        match pairwise_disjointness_certificate(&p, 5, eps) {
            Ok(r) => out.push(Check::new("pairwise_disjointness", Some(&p), eps, r.passed())),
            Err(e) => out.push(error("pairwise_disjointness", Some(&p), e)),
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let p = random_params(&mut rng);
        let g = build_group(&p).unwrap();
        for k in -5..=5 {
            for (closed, direct) in [
                (closed_form_plus(&p, k), direct_plus(&g, k)),
                (closed_form_minus(&p, k), direct_minus(&g, k)),
            ] {
                let gap = direct.map(|d| (d - closed).abs() / closed.abs().max(1.0)).unwrap_or(f64::INFINITY);
                worst = worst.max(gap);
            }
        }
    }
    out.push(Check::new("cygan_closed_forms", None, 1e-12, worst < 1e-12).with("max_gap", worst));

    let origin = Params::new(0.0, 0.0).unwrap();
    let r0 = triple_intersection(&origin, eps);
    out.push(Check::new("triple_empty_inside", Some(&origin), eps, r0.is_empty() && r0.consistent));
    let lim = Params::limit();
    let rl = triple_intersection(&lim, eps);
    let n = match &rl.locus {
        crate::spheres::TripleLocus::Points(v) => v.len(),
        crate::spheres::TripleLocus::Empty => 0,
    };
    out.push(Check::new("triple_two_points_at_limit", Some(&lim), eps, n == 2).with("points", n as f64));
    out
}

fn ford_checks(eps: f64) -> Vec<Check> {
    let mut out = Vec::new();
    let st = Word::parse("s t").unwrap();
    let tst = Word::parse("t s t").unwrap();
    let r = reduce_word(&rel(&st, &tst));
    out.push(Check::new("relator_reduces", None, 0.0, r.is_empty()).with("length", r.len() as f64));

    for p in [Params::new(0.0, 0.0).unwrap(), Params::limit()] {
        match presentation(&p, eps) {
            Ok(pr) => out.push(
                Check::new("presentation", Some(&p), 1e-10, pr.residuals.iter().all(|&x| x < 1e-10))
                    .with("s_cubed", pr.residuals[0])
                    .with("a_inv_s_cubed", pr.residuals[1]),
            ),
            Err(e) => out.push(error("presentation", Some(&p), e)),
        }
        match freeness_probe(&p, 6, 1e-6) {
            Ok(f) => out.push(Check::new("freeness_probe", Some(&p), 1e-6, f.passed()).with("min_distance", f.min_distance)),
            Err(e) => out.push(error("freeness_probe", Some(&p), e)),
        }
    }
    let p = Params::new(0.3, 0.2).unwrap();
    let g = build_group(&p).unwrap();
    let inv = ridge_invariance(&g, 50, 5);
    out.push(Check::new("ridge_invariance", Some(&p), 1e-9, inv.samples > 0 && inv.max_residual < 1e-9).with("max_residual", inv.max_residual));
    let rr = ridge_to_ridge(&g, 50, 7);
    out.push(Check::new("ridge_to_ridge", Some(&p), 1e-9, rr.samples > 0 && rr.max_residual < 1e-9).with("max_residual", rr.max_residual));
    match FordDomain::new(&p, 5) {
        Ok(dom) => {
            let t = local_tessellation(&dom, 4, 250, 1e-2, 1e-4, 13);
            out.push(
                Check::new("local_tessellation", Some(&p), 1e-4, t.passed())
                    .with("overlaps", t.overlaps as f64)
                    .with("uncovered", t.uncovered as f64),
            );
        }
        Err(e) => out.push(error("local_tessellation", Some(&p), e)),
    }
    out
}

fn limit_checks(eps: f64) -> Vec<Check> {
    let mut out = Vec::new();
    let l = match limit_group() {
        Ok(l) => l,
        Err(e) => return vec![error("limit_group", None, e)],
    };
    let p = l.group.params;
    let fp = fixed_point_checks(&l);
    let worst = fp.iter().map(|c| c.fixed_residual.max(c.closed_form_gap)).fold(0.0, f64::max);
    let unip = fp.iter().all(|c| c.tag == IsometryTag::Unipotent);
    out.push(Check::new("parabolic_fixed_points", Some(&p), 1e-12, unip && worst < 1e-12).with("max_gap", worst));
    let phi = phi_orbit_gaps(&l).into_iter().fold(0.0, f64::max);
    out.push(Check::new("phi_orbit", Some(&p), 1e-12, phi < 1e-12).with("max_gap", phi));

    let t = tangency_check(&l);
    out.push(Check::new("tangencies", Some(&p), 1e-12, t.passed(1e-12)).with("st_inv_ba", t.at_st_inv[0]));

    match cycle_graph(&l, eps) {
        Ok(cg) => out.push(Check::new("cycle_graph_parabolic", Some(&p), eps, cg.passed()).with("loops", cg.loops.len() as f64)),
        Err(e) => out.push(error("cycle_graph_parabolic", Some(&p), e)),
    }

    let fr = fan_ridge_intersection(&l, 32);
    out.push(
        Check::new("fan_ridge_solutions", Some(&p), 1e-12, fr.solutions.len() == 2 && fr.max_residual < 1e-12 && fr.separates)
            .with("max_residual", fr.max_residual),
    );
    let table = fan_sphere_table(&l, 1e-9);
    out.push(Check::new("fan_translation", Some(&p), 1e-10, table.translation_residual < 1e-10).with("residual", table.translation_residual));

    let cx = boundary_cell_complex(&l);
    let c = &cx.complex;
    let census = c.vertices.len() == 5 && c.edges.len() == 11 && c.faces.len() == 8;
    out.push(
        Check::new("euler_characteristic", Some(&p), 0.0, census && cx.euler_characteristic == 2 && cx.closed_surface)
            .with("chi", cx.euler_characteristic as f64),
    );
    let vres = cx.vertex_certificates.iter().map(|v| v.max_residual).fold(cx.edge_residual, f64::max);
    out.push(Check::new("cell_incidences", Some(&p), 1e-12, vres < 1e-12).with("max_residual", vres));

    let o = octahedron(&l);
    let pres = o.post_merge.pairings.iter().map(|x| x.residual).fold(0.0, f64::max);
    out.push(
        Check::new(
            "octahedron_pairings",
            Some(&p),
            1e-10,
            o.post_merge.pairings.len() == 4 && o.pre_merge.pairings.len() == 5 && pres < 1e-10,
        )
        .with("max_residual", pres),
    );
    let stab = o.post_merge.vertex_stabilisers(eps);
    let cusp_ok = stab.len() == 2
        && stab.iter().all(|(_, t)| !t.is_empty() && t.iter().all(|x| matches!(x, IsometryTag::Unipotent | IsometryTag::Identity)));
    out.push(Check::new("cusp_holonomy_unipotent", Some(&p), eps, cusp_ok).with("cusps", stab.len() as f64));

    match delta_phi_exclusion(&l, 201) {
        Ok(d) => out.push(
            Check::new("delta_phi_outside", Some(&p), 1e-12, d.all_outside && d.max_d4 <= d.bound + 1e-12)
                .with("max_d4", d.max_d4),
        ),
        Err(e) => out.push(error("delta_phi_outside", Some(&p), e)),
    }
    out
}
