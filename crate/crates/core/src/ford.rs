//! The Ford polyhedron: side pairings, ridge cycles, membership, the presentation,
//! and words in the free product of two cyclic groups of order three.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::moduli::{build_group, region_classify, GroupData, Params};
use crate::siegel::{hermitian_product, GroupElement, HeisPoint, Lift, DEFAULT_EPS};
use crate::spheres::{CyganSphere, GeoCoord, SphereFamily};

/// The side contained in the isometric sphere of A^k S^{±1} A^{−k}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SideTag {
    pub k: i32,
    pub plus: bool,
}

impl fmt::Display for SideTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s[{}{}]", self.k, if self.plus { "+" } else { "-" })
    }
}

/// r[k+] lies on s[k+] and s[k−]; r[k−] lies on s[k+] and s[(k−1)−].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RidgeTag {
    pub plus: bool,
    pub k: i32,
}

impl RidgeTag {
    pub fn sides(&self) -> [SideTag; 2] {
        let first = SideTag {
            k: self.k,
            plus: true,
        };
        let second = if self.plus {
            SideTag {
                k: self.k,
                plus: false,
            }
        } else {
            SideTag {
                k: self.k - 1,
                plus: false,
            }
        };
        [first, second]
    }
}

pub fn side_pairing(g: &GroupData, side: SideTag) -> GroupElement {
    let s = if side.plus { g.s } else { g.s.inverse() };
    g.conj_a(&s, side.k)
}

/// Smallest n ≤ max with gⁿ scalar.
pub fn finite_order(g: &GroupElement, max: u32, eps: f64) -> Option<u32> {
    let mut acc = *g;
    for n in 1..=max {
        if acc.is_scalar(eps) {
            return Some(n);
        }
        acc = acc * *g;
    }
    None
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RidgeCycle {
    pub ridge: RidgeTag,
    #[serde(skip)]
    pub transformation: GroupElement,
    pub order: Option<u32>,
}

pub fn ridge_cycle(g: &GroupData, ridge: RidgeTag) -> RidgeCycle {
    let transformation = if ridge.plus {
        g.conj_a(&g.s, ridge.k)
    } else {
        g.a.pow(ridge.k - 1) * g.s * g.a.pow(-ridge.k)
    };
    RidgeCycle {
        ridge,
        transformation,
        order: finite_order(&transformation, 6, 1e-9),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum DomainMembership {
    Inside,
    OnSide(Vec<SideTag>),
    Outside(SideTag),
}

/// The polyhedron bounded by the isometric spheres of the family.
#[derive(Clone, Debug)]
pub struct FordDomain {
    pub group: GroupData,
    pub family: SphereFamily,
    pub window: i32,
}

impl FordDomain {
    pub fn new(p: &Params, window: i32) -> Result<Self> {
        Ok(FordDomain {
            group: build_group(p)?,
            family: SphereFamily::new(*p),
            window: window.max(2),
        })
    }

    /// The window actually scanned: widened when ℓ_A is short so that every sphere
    /// outside it has a projection disc missing the strip |Re z| ≤ ℓ_A/2.
    pub fn effective_window(&self) -> i32 {
        let ell = self.group.params.ell_a();
        let needed = ((2.0 + ell / 2.0) / ell).ceil() as i32 + 1;
        self.window.max(needed)
    }

    /// Translate q by a power of A into the strip |Re z| ≤ ℓ_A/2; returns the power used.
    pub fn reduce(&self, q: &Lift) -> (Lift, i32) {
        let Ok(h) = q.to_heis(DEFAULT_EPS) else {
            return (*q, 0);
        };
        let m = (h.z.re / self.group.params.ell_a()).round() as i32;
        (self.group.a.pow(-m).apply(q), m)
    }

    /// Smallest value of |⟨q,c⟩| − 1 over the spheres; positive inside the domain.
    pub fn margin(&self, q: &Lift) -> f64 {
        if q.is_infinity(DEFAULT_EPS) {
            return f64::INFINITY;
        }
        let (r, _) = self.reduce(q);
        let w = self.effective_window();
        (-w..=w)
            .flat_map(|k| [self.family.plus(k), self.family.minus(k)])
            .map(|s| s.level(&r))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn membership(&self, q: &Lift, eps: f64) -> DomainMembership {
        if q.is_infinity(eps) {
            return DomainMembership::Inside;
        }
        let (r, m) = self.reduce(q);
        let w = self.effective_window();
        let mut on = Vec::new();
        let mut worst: Option<(f64, SideTag)> = None;
        for k in -w..=w {
            for plus in [true, false] {
                let level = self.family.sphere(k, plus).level(&r);
                let tag = SideTag { k: k + m, plus };
                if level.abs() <= eps {
                    on.push(tag);
                } else if level < 0.0 && worst.is_none_or(|(v, _)| level < v) {
                    worst = Some((level, tag));
                }
            }
        }
        match worst {
            Some((_, tag)) => DomainMembership::Outside(tag),
            None if on.is_empty() => DomainMembership::Inside,
            None => {
                on.sort();
                DomainMembership::OnSide(on)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Presentation {
    pub generators: Vec<&'static str>,
    pub relations: Vec<&'static str>,
    pub alternate_generators: Vec<&'static str>,
    pub alternate_relations: Vec<&'static str>,
    /// Distances of S³ and (A⁻¹S)³ from the identity.
    pub residuals: [f64; 2],
}

pub fn presentation(p: &Params, eps: f64) -> Result<Presentation> {
    let region = region_classify(p, eps);
    if !region.tag.in_closure() {
        return Err(Error::OutsideRegion(region.d));
    }
    let g = build_group(p)?;
    let t_inv = g.a.inverse() * g.s;
    Ok(Presentation {
        generators: vec!["S", "A"],
        relations: vec!["S^3", "(A^-1 S)^3"],
        alternate_generators: vec!["S", "T"],
        alternate_relations: vec!["S^3", "T^3"],
        residuals: [
            g.s.pow(3).distance_from_identity(),
            t_inv.pow(3).distance_from_identity(),
        ],
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Factor {
    S,
    T,
}

/// A letter of the free product: a factor and an exponent taken mod 3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Letter {
    pub factor: Factor,
    pub exp: u8,
}

impl Letter {
    pub fn new(factor: Factor, exp: i32) -> Self {
        Letter {
            factor,
            exp: exp.rem_euclid(3) as u8,
        }
    }

    pub fn s(exp: i32) -> Self {
        Letter::new(Factor::S, exp)
    }

    pub fn t(exp: i32) -> Self {
        Letter::new(Factor::T, exp)
    }

    pub fn inverse(self) -> Self {
        Letter::new(self.factor, -(self.exp as i32))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: &[Letter]) -> Self {
        Word(letters.to_vec())
    }

    /// Parse a space-separated word such as "s t^2 s^-1".
    pub fn parse(text: &str) -> Option<Self> {
        text.split_whitespace()
            .map(|tok| {
                let (base, exp) = match tok.split_once('^') {
                    Some((b, e)) => (b, e.parse::<i32>().ok()?),
                    None => (tok, 1),
                };
                match base {
                    "s" => Some(Letter::s(exp)),
                    "t" => Some(Letter::t(exp)),
                    _ => None,
                }
            })
            .collect::<Option<Vec<_>>>()
            .map(Word)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word(self.0.iter().chain(other.0.iter()).copied().collect())
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn commutator(&self, other: &Word) -> Word {
        self.concat(other).concat(&self.inverse()).concat(&other.inverse())
    }

    pub fn is_reduced(&self) -> bool {
        self.0.iter().all(|l| l.exp != 0) && self.0.windows(2).all(|w| w[0].factor != w[1].factor)
    }

    pub fn evaluate(&self, s: &GroupElement, t: &GroupElement) -> GroupElement {
        self.0.iter().fold(GroupElement::identity(), |acc, l| {
            let base = match l.factor {
                Factor::S => s,
                Factor::T => t,
            };
            acc * base.pow(l.exp as i32)
        })
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|l| {
                let name = match l.factor {
                    Factor::S => "s",
                    Factor::T => "t",
                };
                match l.exp {
                    1 => name.to_string(),
                    e => format!("{name}^{e}"),
                }
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Normal form in Z/3 * Z/3: merge neighbouring letters of one factor and drop trivial ones.
pub fn reduce_word(w: &Word) -> Word {
    let mut stack: Vec<Letter> = Vec::with_capacity(w.len());
    for &l in &w.0 {
        if l.exp == 0 {
            continue;
        }
        match stack.last_mut() {
            Some(top) if top.factor == l.factor => {
                let e = (top.exp + l.exp) % 3;
                if e == 0 {
                    stack.pop();
                } else {
                    top.exp = e;
                }
            }
            _ => stack.push(l),
        }
    }
    Word(stack)
}

/// [u,v][u,v⁻¹][u⁻¹,v⁻¹][u⁻¹,v].
pub fn rel(u: &Word, v: &Word) -> Word {
    let (ui, vi) = (u.inverse(), v.inverse());
    u.commutator(v)
        .concat(&u.commutator(&vi))
        .concat(&ui.commutator(&vi))
        .concat(&ui.commutator(v))
}

/// All reduced non-empty words of length at most `max_len`, by length then lexicographically.
pub fn reduced_words(max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut layer: Vec<Word> = vec![Word::empty()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for factor in [Factor::S, Factor::T] {
                if w.0.last().is_some_and(|l| l.factor == factor) {
                    continue;
                }
                for exp in 1..=2 {
                    let mut v = w.0.clone();
                    v.push(Letter::new(factor, exp));
                    next.push(Word(v));
                }
            }
        }
        next.sort();
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FreenessReport {
    pub params: Params,
    pub max_len: usize,
    pub delta: f64,
    pub product_words: usize,
    pub free_words: usize,
    pub min_distance: f64,
    pub counterexamples: Vec<String>,
}

impl FreenessReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

fn free_word_name(letters: &[usize]) -> String {
    const NAMES: [&str; 4] = ["A", "A^-1", "B", "B^-1"];
    letters.iter().map(|&i| NAMES[i]).collect::<Vec<_>>().join(" ")
}

/// Evaluate every reduced word of length ≤ `max_len` in both the order-three generators and
/// the free generators, recording any that land within `delta` of the identity.
pub fn freeness_probe(p: &Params, max_len: usize, delta: f64) -> Result<FreenessReport> {
    let g = build_group(p)?;
    let mut min_distance = f64::INFINITY;
    let mut counterexamples = Vec::new();
    let words = reduced_words(max_len);
    for w in &words {
        let d = w.evaluate(&g.s, &g.t).distance_from_identity();
        min_distance = min_distance.min(d);
        if d < delta {
            counterexamples.push(w.to_string());
        }
    }
    let gens = [g.a, g.a.inverse(), g.b, g.b.inverse()];
    let mut free_words = 0;
    let mut stack: Vec<(Vec<usize>, GroupElement)> = vec![(Vec::new(), GroupElement::identity())];
    while let Some((letters, m)) = stack.pop() {
        if !letters.is_empty() {
            free_words += 1;
            let d = m.distance_from_identity();
            min_distance = min_distance.min(d);
            if d < delta {
                counterexamples.push(free_word_name(&letters));
            }
        }
        if letters.len() == max_len {
            continue;
        }
        for (i, gen) in gens.iter().enumerate().rev() {
            if letters.last().is_some_and(|&j| j ^ 1 == i) {
                continue;
            }
            let mut next = letters.clone();
            next.push(i);
            stack.push((next, m * *gen));
        }
    }
    Ok(FreenessReport {
        params: *p,
        max_len,
        delta,
        product_words: words.len(),
        free_words,
        min_distance,
        counterexamples,
    })
}

/// Points of the (0,+) sphere lying on a second sphere of the family, found on α,β lines.
fn sample_on_pair(
    other: &CyganSphere,
    rng: &mut ChaCha8Rng,
    count: usize,
) -> Vec<Lift> {
    let base = CyganSphere::unit(HeisPoint::origin());
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < count && attempts < 200 * count {
        attempts += 1;
        let alpha = rng.random_range(-1.4..1.4f64);
        let beta = rng.random_range(0.0..std::f64::consts::PI);
        let wmax = (2.0 * f64::cos(alpha)).sqrt() * 0.999;
        let level = |w: f64| {
            let q = crate::spheres::geo_to_point(&base, &GeoCoord::new(alpha, beta, w)).unwrap();
            other.level(&q)
        };
        let (lo, hi) = (-wmax, wmax);
        let n = 64;
        for i in 0..n {
            let a = lo + (hi - lo) * i as f64 / n as f64;
            let b = lo + (hi - lo) * (i + 1) as f64 / n as f64;
            let (fa, fb) = (level(a), level(b));
            if (fa > 0.0) != (fb > 0.0) {
                let (mut a, mut b, mut fa) = (a, b, fa);
                for _ in 0..100 {
                    let m = 0.5 * (a + b);
                    let fm = level(m);
                    if (fm > 0.0) == (fa > 0.0) {
                        a = m;
                        fa = fm;
                    } else {
                        b = m;
                    }
                }
                let w = 0.5 * (a + b);
                out.push(crate::spheres::geo_to_point(&base, &GeoCoord::new(alpha, beta, w)).unwrap());
                break;
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LocusCheck {
    pub samples: usize,
    pub max_residual: f64,
}

/// S maps points of {|⟨z,q∞⟩| = |⟨z,S⁻¹q∞⟩| = |⟨z,Sq∞⟩|} back into the same set.
pub fn ridge_invariance(g: &GroupData, samples: usize, seed: u64) -> LocusCheck {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fam = SphereFamily::new(g.params);
    let pts = sample_on_pair(&fam.minus(0), &mut rng, samples);
    let e1 = Lift::q_infinity();
    let (sm, sp) = (g.s.inverse().apply_raw(&e1), g.s.apply_raw(&e1));
    let residual = |q: &Lift| {
        let a = hermitian_product(q, &e1).norm();
        let b = hermitian_product(q, &sm).norm();
        let c = hermitian_product(q, &sp).norm();
        ((a - b).abs().max((a - c).abs())) / a
    };
    let max_residual = pts
        .iter()
        .map(|q| residual(q).max(residual(&g.s.apply_raw(q))))
        .fold(0.0, f64::max);
    LocusCheck {
        samples: pts.len(),
        max_residual,
    }
}

/// S maps points of the ridge on the (0,+) and (−1,−) spheres onto the (1,+) and (0,−) spheres.
pub fn ridge_to_ridge(g: &GroupData, samples: usize, seed: u64) -> LocusCheck {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fam = SphereFamily::new(g.params);
    let pts = sample_on_pair(&fam.minus(-1), &mut rng, samples);
    let max_residual = pts
        .iter()
        .map(|q| {
            let img = g.s.apply(q);
            fam.plus(1).level(&img).abs().max(fam.minus(0).level(&img).abs())
        })
        .fold(0.0, f64::max);
    LocusCheck {
        samples: pts.len(),
        max_residual,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TessellationCheck {
    pub centres: usize,
    pub samples: usize,
    pub ball_radius: f64,
    pub shell: f64,
    pub overlaps: usize,
    pub uncovered: usize,
    pub in_shell: usize,
}

impl TessellationCheck {
    pub fn passed(&self) -> bool {
        self.overlaps == 0 && self.uncovered == 0 && self.centres > 0
    }
}

/// Around points of the ridge r[0+], the domain and its images under S and S⁻¹ fill a small
/// ball without overlapping, apart from a thin shell about their common boundary.
pub fn local_tessellation(
    dom: &FordDomain,
    centres: usize,
    samples: usize,
    ball_radius: f64,
    shell: f64,
    seed: u64,
) -> TessellationCheck {
    let g = &dom.group;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ridge: Vec<Lift> = sample_on_pair(&dom.family.minus(0), &mut rng, 8 * centres)
        .into_iter()
        .filter(|q| {
            let h = q.to_heis(DEFAULT_EPS).unwrap();
            h.u > 4.0 * ball_radius * ball_radius && dom.margin(q) > -1e-9
        })
        .filter(|q| {
            let others = (-dom.effective_window()..=dom.effective_window())
                .flat_map(|k| [(k, true), (k, false)])
                .filter(|&(k, _)| k != 0)
                .map(|(k, plus)| dom.family.sphere(k, plus).level(q))
                .fold(f64::INFINITY, f64::min);
            others > 10.0 * ball_radius
        })
        .take(centres)
        .collect();
    let (s, s_inv) = (g.s, g.s.inverse());
    let mut check = TessellationCheck {
        centres: ridge.len(),
        samples: 0,
        ball_radius,
        shell,
        overlaps: 0,
        uncovered: 0,
        in_shell: 0,
    };
    for centre in &ridge {
        let h = centre.to_heis(DEFAULT_EPS).unwrap();
        for _ in 0..samples {
            let dz = num_complex::Complex64::new(
                rng.random_range(-ball_radius..ball_radius),
                rng.random_range(-ball_radius..ball_radius),
            );
            let r2 = ball_radius * ball_radius;
            let q = HeisPoint::new(h.z + dz, h.t + rng.random_range(-r2..r2), h.u + rng.random_range(-r2..r2))
                .lift();
            let margins = [
                dom.margin(&q),
                dom.margin(&s_inv.apply(&q)),
                dom.margin(&s.apply(&q)),
            ];
            check.samples += 1;
            if margins.iter().any(|m| m.abs() <= shell) {
                check.in_shell += 1;
                continue;
            }
            let inside = margins.iter().filter(|&&m| m > 0.0).count();
            if inside > 1 {
                check.overlaps += 1;
            } else if inside == 0 {
                check.uncovered += 1;
            }
        }
    }
    check
}
