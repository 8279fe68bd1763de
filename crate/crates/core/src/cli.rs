//! Command-line surface. `run` parses arguments, performs one command and returns the
//! process exit code: 0 success, 1 failed verification, 2 usage error, 3 unwritable output.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::certify::{run_suite, Suite};
use crate::ford::{reduce_word, rel, Word};
use crate::limit::{export_complex, limit_group, octahedron, ComplexExport};
use crate::moduli::{
    build_group, commutator_class, quartic_roots_in_unit_interval, region_classify, scan_region,
    trace_boundary, BoundaryCurve, CommutatorTag, Params, GUARD,
};
use crate::render::{scan_csv, scan_svg, spheres_svg, tangent_contacts};
use crate::siegel::DEFAULT_EPS;
use crate::spheres::projection_discs;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_OUTPUT: i32 = 3;

pub const EPS_VAR: &str = "RILEY_EPS";

#[derive(Parser, Debug)]
#[command(name = "riley", version, about = "Unipotent two-generator subgroups of PU(2,1)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Svg,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classify one parameter point.
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        alpha1: f64,
        #[arg(long, allow_hyphen_values = true)]
        alpha2: f64,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify a grid of parameters.
    Scan {
        #[arg(long, default_value_t = 200)]
        grid: usize,
        /// alpha1_min,alpha1_max,alpha2_min,alpha2_max
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
        bounds: Option<Vec<f64>>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Vertical projections of the isometric spheres.
    Spheres {
        #[arg(long, allow_hyphen_values = true)]
        alpha1: f64,
        #[arg(long, allow_hyphen_values = true)]
        alpha2: f64,
        #[arg(long = "k-range", default_value_t = 2)]
        k_range: i32,
        #[arg(long, value_enum, default_value_t = Format::Svg)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a certificate suite.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export the limit-group octahedron.
    Octahedron {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Output(String),
}

type Outcome = std::result::Result<(Vec<u8>, bool), Failure>;

/// Tolerance from the flag, else the environment, else the default.
pub fn resolve_eps(flag: Option<f64>, env: Option<&str>) -> std::result::Result<f64, String> {
    let eps = match (flag, env) {
        (Some(e), _) => e,
        (None, Some(s)) => s
            .trim()
            .parse::<f64>()
            .map_err(|_| format!("{EPS_VAR} is not a number: {s}"))?,
        (None, None) => DEFAULT_EPS,
    };
    if eps.is_finite() && eps > 0.0 {
        Ok(eps)
    } else {
        Err(format!("epsilon must be positive and finite, got {eps}"))
    }
}

pub fn run<I, T>(args: I, env_eps: Option<&str>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = stdout.write_all(text.as_bytes());
            } else {
                let _ = stderr.write_all(text.as_bytes());
            }
            return code;
        }
    };
    let out_path = match &cli.command {
        Command::Classify { out, .. }
        | Command::Scan { out, .. }
        | Command::Spheres { out, .. }
        | Command::Verify { out, .. }
        | Command::Octahedron { out } => out.clone(),
    };
    let result = execute(cli.command, env_eps);
    match result {
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Output(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_OUTPUT
        }
        Ok((bytes, ok)) => {
            match out_path {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, &bytes) {
                        let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                        return EXIT_OUTPUT;
                    }
                }
                None => {
                    if stdout.write_all(&bytes).is_err() {
                        return EXIT_OUTPUT;
                    }
                }
            }
            if ok {
                EXIT_OK
            } else {
                let _ = writeln!(stderr, "verification failed");
                EXIT_FAILED
            }
        }
    }
}

fn params(alpha1: f64, alpha2: f64) -> std::result::Result<Params, Failure> {
    Params::new(alpha1, alpha2).map_err(|e| Failure::Usage(e.to_string()))
}

fn json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut v = serde_json::to_vec_pretty(value).expect("report serialises");
    v.push(b'\n');
    v
}

fn execute(cmd: Command, env_eps: Option<&str>) -> Outcome {
    let eps_of = |flag: Option<f64>| resolve_eps(flag, env_eps).map_err(Failure::Usage);
    match cmd {
        Command::Classify {
            alpha1,
            alpha2,
            epsilon,
            ..
        } => {
            let eps = eps_of(epsilon)?;
            let p = params(alpha1, alpha2)?;
            Ok((json(&classify_report(&p, eps)?), true))
        }
        Command::Scan {
            grid,
            bounds,
            format,
            epsilon,
            ..
        } => {
            let eps = eps_of(epsilon)?;
            if grid < 2 {
                return Err(Failure::Usage(format!("grid must be at least 2, got {grid}")));
            }
            let b = scan_bounds(bounds)?;
            let cells = scan_region(b, grid, eps);
            let bytes = match format {
                Format::Csv => scan_csv(&cells).into_bytes(),
                Format::Svg => {
                    let curves = [trace_boundary(BoundaryCurve::Z, 400), trace_boundary(BoundaryCurve::P, 400)];
                    scan_svg(&cells, b, grid, &curves).into_bytes()
                }
                Format::Json => json(&cells),
            };
            Ok((bytes, true))
        }
        Command::Spheres {
            alpha1,
            alpha2,
            k_range,
            format,
            ..
        } => {
            let p = params(alpha1, alpha2)?;
            if k_range < 0 {
                return Err(Failure::Usage(format!("k-range must be non-negative, got {k_range}")));
            }
            let discs = projection_discs(&p, k_range);
            let contacts = tangent_contacts(&discs, 1e-9);
            let bytes = match format {
                Format::Svg => spheres_svg(&discs, &contacts).into_bytes(),
                Format::Json => json(&discs),
                Format::Csv => {
                    let mut s = String::from("label,center_re,center_im,radius\n");
                    for d in &discs {
                        s.push_str(&format!(
                            "{},{},{},{}\n",
                            d.label,
                            crate::render::float(d.center_re),
                            crate::render::float(d.center_im),
                            crate::render::float(d.radius)
                        ));
                    }
                    s.into_bytes()
                }
            };
            Ok((bytes, true))
        }
        Command::Verify { suite, epsilon, .. } => {
            let eps = eps_of(epsilon)?;
            let s = Suite::parse(&suite).ok_or_else(|| {
                Failure::Usage(format!("unknown suite {suite}; expected core, moduli, spheres, ford, limit or all"))
            })?;
            let report = run_suite(s, eps);
            Ok((json(&report), report.passed))
        }
        Command::Octahedron { .. } => {
            let e = octahedron_export().map_err(|e| Failure::Output(e.to_string()))?;
            let ok = e.relator.reduces_to_identity && e.post_merge.pairings.len() == 4;
            Ok((json(&e), ok))
        }
    }
}

fn scan_bounds(bounds: Option<Vec<f64>>) -> std::result::Result<[f64; 4], Failure> {
    let lim = std::f64::consts::FRAC_PI_2 - GUARD;
    let b = match bounds {
        None => [-lim, lim, -lim, lim],
        Some(v) if v.len() == 4 => [v[0], v[1], v[2], v[3]],
        Some(v) => return Err(Failure::Usage(format!("bounds needs four comma-separated values, got {}", v.len()))),
    };
    if b.iter().any(|x| !x.is_finite() || x.abs() > lim) || b[0] >= b[1] || b[2] >= b[3] {
        return Err(Failure::Usage(format!(
            "bounds must satisfy -{lim} <= min < max <= {lim} on both axes"
        )));
    }
    Ok(b)
}

#[derive(Clone, Debug, Serialize)]
pub struct Traces {
    #[serde(rename = "A")]
    pub a: [f64; 2],
    #[serde(rename = "B")]
    pub b: [f64; 2],
    #[serde(rename = "AB")]
    pub ab: [f64; 2],
    #[serde(rename = "S")]
    pub s: [f64; 2],
    #[serde(rename = "T")]
    pub t: [f64; 2],
    #[serde(rename = "ST^-1")]
    pub st_inv: [f64; 2],
    #[serde(rename = "[A,B]")]
    pub commutator: [f64; 2],
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassifyReport {
    pub alpha1: f64,
    pub alpha2: f64,
    pub epsilon: f64,
    #[serde(rename = "D")]
    pub d: f64,
    #[serde(rename = "G")]
    pub g: f64,
    #[serde(rename = "Delta")]
    pub delta: f64,
    pub region: &'static str,
    pub exact: bool,
    pub commutator_type: CommutatorTag,
    pub quartic_roots_in_unit_interval: Vec<f64>,
    pub traces: Traces,
}

fn pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

pub fn classify_report_for(p: &Params, eps: f64) -> crate::Result<ClassifyReport> {
    let g = build_group(p)?;
    let r = region_classify(p, eps);
    let roots = quartic_roots_in_unit_interval(p, eps);
    Ok(ClassifyReport {
        alpha1: p.alpha1,
        alpha2: p.alpha2,
        epsilon: eps,
        d: r.d,
        g: r.g,
        delta: r.delta,
        region: r.tag.label(),
        exact: r.exact,
        commutator_type: commutator_class(&g, eps).tag,
        quartic_roots_in_unit_interval: roots.roots.iter().map(|x| x.value).collect(),
        traces: Traces {
            a: pair(g.a.trace()),
            b: pair(g.b.trace()),
            ab: pair((g.a * g.b).trace()),
            s: pair(g.s.trace()),
            t: pair(g.t.trace()),
            st_inv: pair((g.s * g.t.inverse()).trace()),
            commutator: pair(g.a.commutator(&g.b).trace()),
        },
    })
}

fn classify_report(p: &Params, eps: f64) -> std::result::Result<ClassifyReport, Failure> {
    classify_report_for(p, eps).map_err(|e| Failure::Usage(e.to_string()))
}

#[derive(Clone, Debug, Serialize)]
pub struct RelatorCheck {
    pub word: String,
    pub reduced: String,
    pub reduces_to_identity: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct OctahedronExport {
    pub alpha1: f64,
    pub alpha2: f64,
    pub post_merge: ComplexExport,
    pub pre_merge: ComplexExport,
    pub cusps: Vec<Vec<String>>,
    pub relator: RelatorCheck,
}

pub fn octahedron_export() -> crate::Result<OctahedronExport> {
    let l = limit_group()?;
    let o = octahedron(&l);
    let cusps = o
        .post_merge
        .vertex_classes()
        .iter()
        .map(|c| c.iter().map(|&v| o.post_merge.vertices[v].label.clone()).collect())
        .collect();
    let (u, v) = (Word::parse("s t").expect("word"), Word::parse("t s t").expect("word"));
    let w = rel(&u, &v);
    let reduced = reduce_word(&w);
    Ok(OctahedronExport {
        alpha1: l.group.params.alpha1,
        alpha2: l.group.params.alpha2,
        post_merge: export_complex(&o.post_merge),
        pre_merge: export_complex(&o.pre_merge),
        cusps,
        relator: RelatorCheck {
            word: w.to_string(),
            reduced: reduced.to_string(),
            reduces_to_identity: reduced.is_empty(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let mut full = vec!["riley"];
        full.extend_from_slice(args);
        let code = run(full, None, &mut o, &mut e);
        (code, String::from_utf8(o).unwrap(), String::from_utf8(e).unwrap())
    }

    #[test]
    fn eps_resolution_order() {
        assert_eq!(resolve_eps(Some(1e-6), Some("1e-3")), Ok(1e-6));
        assert_eq!(resolve_eps(None, Some("1e-3")), Ok(1e-3));
        assert_eq!(resolve_eps(None, None), Ok(DEFAULT_EPS));
        assert!(resolve_eps(None, Some("abc")).is_err());
        assert!(resolve_eps(Some(-1.0), None).is_err());
    }

    #[test]
    fn classify_origin() {
        let (code, out, _) = call(&["classify", "--alpha1", "0", "--alpha2", "0"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["region"], "Z_interior");
        assert_eq!(v["D"], 1225.0);
    }

    #[test]
    fn classify_limit_and_elliptic() {
        let a2 = crate::moduli::alpha2_limit().to_string();
        let (code, out, _) = call(&["classify", "--alpha1", "0", "--alpha2", &a2]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["region"], "Z_boundary");
        assert_eq!(v["G"], 0.0);
        let (_, out, _) = call(&["classify", "--alpha1", "0", "--alpha2", "1.4"]);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["commutator_type"], "Elliptic");
    }

    #[test]
    fn usage_errors() {
        assert_eq!(call(&["classify", "--alpha1", "2", "--alpha2", "0"]).0, EXIT_USAGE);
        assert_eq!(call(&["classify", "--alpha1", "x", "--alpha2", "0"]).0, EXIT_USAGE);
        assert_eq!(call(&["scan", "--grid", "1"]).0, EXIT_USAGE);
        assert_eq!(call(&["scan", "--bounds", "1,0,0,1"]).0, EXIT_USAGE);
        assert_eq!(call(&["scan", "--bounds", "0,1,0"]).0, EXIT_USAGE);
        assert_eq!(call(&["verify", "--suite", "nope"]).0, EXIT_USAGE);
        assert_eq!(call(&["frobnicate"]).0, EXIT_USAGE);
    }

    #[test]
    fn unwritable_output() {
        let (code, _, err) = call(&["octahedron", "--out", "/nonexistent-dir/x/o.json"]);
        assert_eq!(code, EXIT_OUTPUT);
        assert!(err.contains("cannot write"));
    }

    #[test]
    fn scan_csv_small() {
        let (code, out, _) = call(&["scan", "--grid", "3", "--bounds", "-0.5,0.5,-0.5,0.5"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("alpha1,alpha2,D,G,region\n"));
        assert_eq!(out.lines().count(), 10);
    }

    #[test]
    fn octahedron_export_shape() {
        let e = octahedron_export().unwrap();
        assert_eq!(e.post_merge.pairings.len(), 4);
        assert_eq!(e.pre_merge.pairings.len(), 5);
        assert!(e.relator.reduces_to_identity);
        assert_eq!(e.cusps.len(), 2);
    }
}
