//! Real polynomials of low degree: evaluation, root isolation with multiplicities,
//! Sturm counts and the quartic discriminant.

use serde::Serialize;
use num_traits::{FromPrimitive, Num};

/// Bisection stops after this many halvings or once the bracket is narrower than `ROOT_WIDTH`.
pub const MAX_BISECTIONS: usize = 80;
pub const ROOT_WIDTH: f64 = 1e-13;
/// Relative size below which a critical value counts as a repeated root.
pub const REPEATED_ROOT_TOL: f64 = 1e-12;

/// Coefficients in ascending order of degree.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Poly {
    pub coeffs: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RealRoot {
    pub value: f64,
    pub multiplicity: u32,
}

impl Poly {
    pub fn new(coeffs: Vec<f64>) -> Self {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.len() > 1 && *self.coeffs.last().unwrap() == 0.0 {
            self.coeffs.pop();
        }
        if self.coeffs.is_empty() {
            self.coeffs.push(0.0);
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficients padded with zeros to length `n`.
    pub fn coeffs_padded(&self, n: usize) -> Vec<f64> {
        let mut c = self.coeffs.clone();
        c.resize(n.max(c.len()), 0.0);
        c
    }

    pub fn leading(&self) -> f64 {
        *self.coeffs.last().unwrap()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::new(vec![0.0]);
        }
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * i as f64)
                .collect(),
        )
    }

    /// Sum of |coefficients| weighted by |x|^k, the natural size of a value at x.
    fn magnitude_at(&self, x: f64) -> f64 {
        let ax = x.abs().max(1.0);
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c.abs() * ax.powi(k as i32))
            .sum::<f64>()
            .max(f64::MIN_POSITIVE)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    /// Remainder of Euclidean division.
    pub fn rem(&self, divisor: &Poly) -> Poly {
        let mut r = self.coeffs.clone();
        let d = &divisor.coeffs;
        let dl = divisor.leading();
        while r.len() >= d.len() && r.len() > 1 {
            let q = r[r.len() - 1] / dl;
            let shift = r.len() - d.len();
            for (k, dc) in d.iter().enumerate() {
                r[shift + k] -= q * dc;
            }
            r.pop();
        }
        Poly::new(r)
    }

    /// Cauchy bound on the modulus of every root.
    pub fn root_bound(&self) -> f64 {
        let lead = self.leading().abs();
        1.0 + self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|c| c.abs() / lead)
            .fold(0.0, f64::max)
    }
}

fn bisect(p: &Poly, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = p.eval(lo);
    for _ in 0..MAX_BISECTIONS {
        if hi - lo <= ROOT_WIDTH {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let fm = p.eval(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// All distinct real roots in [lo, hi] with multiplicities, sorted ascending.
///
/// Roots of the derivative split the interval into monotone pieces; a sign change on a
/// piece is a simple root, and a critical point where the value vanishes to relative
/// `REPEATED_ROOT_TOL` is a repeated root.
pub fn real_roots_in(p: &Poly, lo: f64, hi: f64) -> Vec<RealRoot> {
    if p.is_zero() || lo > hi {
        return Vec::new();
    }
    match p.degree() {
        0 => Vec::new(),
        1 => {
            let x = -p.coeffs[0] / p.coeffs[1];
            if x >= lo && x <= hi {
                vec![RealRoot {
                    value: x,
                    multiplicity: 1,
                }]
            } else {
                Vec::new()
            }
        }
        _ => {
            let crit = real_roots_in(&p.derivative(), lo, hi);
            let mut roots: Vec<RealRoot> = Vec::new();
            let mut breaks: Vec<(f64, bool)> = vec![(lo, false)];
            for cr in &crit {
                let v = p.eval(cr.value);
                let vanishing = v.abs() <= REPEATED_ROOT_TOL * p.magnitude_at(cr.value);
                if vanishing {
                    roots.push(RealRoot {
                        value: cr.value,
                        multiplicity: cr.multiplicity + 1,
                    });
                }
                breaks.push((cr.value, vanishing));
            }
            breaks.push((hi, false));
            for w in breaks.windows(2) {
                let (a, a_root) = w[0];
                let (b, b_root) = w[1];
                if a_root || b_root || b <= a {
                    continue;
                }
                let fa = p.eval(a);
                let fb = p.eval(b);
                if fa == 0.0 {
                    push_unique(&mut roots, a);
                } else if fb == 0.0 {
                    push_unique(&mut roots, b);
                } else if (fa > 0.0) != (fb > 0.0) {
                    roots.push(RealRoot {
                        value: bisect(p, a, b),
                        multiplicity: 1,
                    });
                }
            }
            roots.sort_by(|x, y| x.value.partial_cmp(&y.value).unwrap());
            roots
        }
    }
}

fn push_unique(roots: &mut Vec<RealRoot>, x: f64) {
    if !roots.iter().any(|r| r.value == x) {
        roots.push(RealRoot {
            value: x,
            multiplicity: 1,
        });
    }
}

/// Every real root, searched inside the Cauchy bound.
pub fn real_roots(p: &Poly) -> Vec<RealRoot> {
    if p.degree() == 0 {
        return Vec::new();
    }
    let b = p.root_bound();
    real_roots_in(p, -b, b)
}

/// Result of searching [−1, 1] for roots.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UnitIntervalRoots {
    pub roots: Vec<RealRoot>,
    /// Set when the leading coefficient was too small and dense sampling was used.
    pub degraded: bool,
}

impl UnitIntervalRoots {
    pub fn has_root(&self) -> bool {
        !self.roots.is_empty()
    }
}

/// Roots of a quartic in [−1, 1]. A leading coefficient at or below `eps` triggers a
/// sampling fallback that reports sign changes and near-zero samples.
pub fn has_root_in_unit_interval(p: &Poly, eps: f64) -> UnitIntervalRoots {
    if p.coeffs.get(4).copied().unwrap_or(0.0) > eps {
        return UnitIntervalRoots {
            roots: real_roots_in(p, -1.0, 1.0),
            degraded: false,
        };
    }
    const SAMPLES: usize = 20_001;
    let mut roots = Vec::new();
    let xs: Vec<f64> = (0..SAMPLES)
        .map(|i| -1.0 + 2.0 * i as f64 / (SAMPLES - 1) as f64)
        .collect();
    let scale = p.coeffs.iter().map(|c| c.abs()).sum::<f64>().max(1.0);
    for w in xs.windows(2) {
        let (fa, fb) = (p.eval(w[0]), p.eval(w[1]));
        if fa.abs() <= eps * scale {
            push_unique(&mut roots, w[0]);
        } else if fb != 0.0 && (fa > 0.0) != (fb > 0.0) {
            roots.push(RealRoot {
                value: bisect(p, w[0], w[1]),
                multiplicity: 1,
            });
        }
    }
    UnitIntervalRoots {
        roots,
        degraded: true,
    }
}

/// Sturm chain p, p', −rem(p_{k−1}, p_k), … stopped at a negligible remainder.
pub fn sturm_chain(p: &Poly) -> Vec<Poly> {
    let mut chain = vec![p.clone(), p.derivative()];
    let scale = p.coeffs.iter().map(|c| c.abs()).fold(0.0, f64::max);
    loop {
        let n = chain.len();
        if chain[n - 1].degree() == 0 {
            break;
        }
        let r = chain[n - 2].rem(&chain[n - 1]);
        let size = r.coeffs.iter().map(|c| c.abs()).fold(0.0, f64::max);
        if size <= 1e-12 * scale {
            break;
        }
        chain.push(Poly::new(r.coeffs.iter().map(|c| -c).collect()));
    }
    chain
}

fn sign_changes(chain: &[Poly], x: f64) -> usize {
    let signs: Vec<bool> = chain
        .iter()
        .map(|q| q.eval(x))
        .filter(|v| *v != 0.0)
        .map(|v| v > 0.0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of distinct real roots in (a, b].
pub fn sturm_count(p: &Poly, a: f64, b: f64) -> usize {
    let chain = sturm_chain(p);
    sign_changes(&chain, a).saturating_sub(sign_changes(&chain, b))
}

/// Discriminant of e + dx + cx² + bx³ + ax⁴ in the standard normalisation.
pub fn quartic_discriminant(coeffs: [f64; 5]) -> f64 {
    quartic_discriminant_in(coeffs)
}

/// The quartic discriminant over any commutative ring with small integer constants.
pub fn quartic_discriminant_in<N: Clone + Num + FromPrimitive>(coeffs: [N; 5]) -> N {
    let [e, d, c, b, a] = coeffs;
    let k = |v: i64| N::from_i64(v).expect("small integer constant");
    let p = |x: &N, n: u32| (0..n).fold(N::one(), |acc, _| acc * x.clone());
    let (a2, b2, c2, d2, e2) = (p(&a, 2), p(&b, 2), p(&c, 2), p(&d, 2), p(&e, 2));
    let plus = k(256) * p(&a, 3) * p(&e, 3)
        + k(144) * a2.clone() * c.clone() * d2.clone() * e.clone()
        + k(144) * a.clone() * b2.clone() * c.clone() * e2.clone()
        + k(18) * a.clone() * b.clone() * c.clone() * p(&d, 3)
        + k(16) * a.clone() * p(&c, 4) * e.clone()
        + k(18) * p(&b, 3) * c.clone() * d.clone() * e.clone()
        + b2.clone() * c2.clone() * d2.clone();
    let minus = k(192) * a2.clone() * b.clone() * d.clone() * e2.clone()
        + k(128) * a2.clone() * c2.clone() * e2.clone()
        + k(27) * a2 * p(&d, 4)
        + k(6) * a.clone() * b2.clone() * d2.clone() * e.clone()
        + k(80) * a.clone() * b.clone() * c2.clone() * d.clone() * e.clone()
        + k(4) * a * p(&c, 3) * d2.clone()
        + k(27) * p(&b, 4) * e2
        + k(4) * p(&b, 3) * p(&d, 3)
        + k(4) * b2 * p(&c, 3) * e;
    plus - minus
}
