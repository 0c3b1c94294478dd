//! Command-line surface. Every command produces one [`Report`]; the exit
//! code follows the verdict:
//!
//! | code | meaning                                          |
//! |------|--------------------------------------------------|
//! | 0    | verified / consistent / computed                 |
//! | 1    | refuted / distinguishes / a check failed         |
//! | 2    | incomplete or dependent on asserted hypotheses   |
//! | 64   | usage error                                      |
//! | 65   | parse error in a definition file or report       |
//! | 70   | a Groebner basis or saturation cap was exceeded  |

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use folmod_core::algebra::display::poly_to_string;
use folmod_core::algebra::{GbLimits, Rational};
use folmod_core::foliation::{lie_invariants, product_foliation, restrict_to_slice, EqualityReport, FoliationError, SingularFoliation};
use folmod_core::gallery::{self, GalleryError};
use folmod_core::geometry::{RationalPoint, SubmersionCertificate};
use folmod_core::morita::{check_witness, compare_invariants, ComparisonVerdict, MoritaError, Verdict};
use folmod_core::pullback::{bisubmersion_check, pullback, pushforward_foliation, PullbackError, Pushforward};
use serde_json::{json, Value};

use crate::defs::{self, DefError, Definitions, Missing};
use crate::report::{membership_certificate, submersion_certificate, verify_report, Report};
use crate::sample::sample_points;

pub const EXIT_USAGE: i32 = 64;
pub const EXIT_PARSE: i32 = 65;
pub const EXIT_CAP: i32 = 70;

/// Default seed for sampled checks.
pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Parser, Debug)]
#[command(name = "folmod", version, about = "Exact checks on polynomial singular foliations")]
pub struct Cli {
    /// Render a plain-text table instead of JSON.
    #[arg(long, global = true)]
    pub human: bool,
    /// Include wall-clock timings (makes reports non-reproducible).
    #[arg(long, global = true)]
    pub timings: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Involutivity with bracket certificates, or re-verification of a report.
    #[command(subcommand)]
    Check(CheckCommand),
    /// Dimension of the fiber F/I_p F.
    Fiber { file: PathBuf, fol: String, #[arg(long)] point: String },
    /// Isotropy Lie algebra with structure constants and invariants.
    Isotropy { file: PathBuf, fol: String, #[arg(long)] point: String },
    /// Vanishing order at a point.
    Order { file: PathBuf, fol: String, #[arg(long)] point: String },
    /// Pullback along a submersion.
    Pullback {
        file: PathBuf,
        map: String,
        fol: String,
        /// Write the result as a definition file.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Pushforward along a coordinate projection.
    Pushforward { file: PathBuf, map: String, fol: String },
    /// Equality of saturated modules with certificates both ways.
    Equal { file: PathBuf, fol1: String, fol2: String },
    /// Product foliation.
    Product { file: PathBuf, fol1: String, fol2: String },
    /// Restriction to a declared slice through a point.
    Slice {
        file: PathBuf,
        fol: String,
        #[arg(long)]
        slice: String,
        #[arg(long)]
        point: String,
    },
    /// The three bisubmersion equalities.
    Bisubmersion { file: PathBuf, v: String, s: String, t: String, fol_m: String, fol_n: String },
    /// Checks a Morita witness and reports the hypothesis ledger.
    Morita { file: PathBuf, witness: String, fol_m: String, fol_n: String },
    /// Compares point invariants; `--point` is given once per foliation.
    Compare {
        file: PathBuf,
        fol_m: String,
        fol_n: String,
        #[arg(long = "point", required = true, num_args = 1)]
        points: Vec<String>,
    },
    /// Built-in examples.
    #[command(subcommand)]
    Gallery(GalleryCommand),
}

#[derive(Subcommand, Debug)]
pub enum CheckCommand {
    Involutive { file: PathBuf, fol: String },
    /// Re-expands every certificate in a report.
    Certificates { report: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum GalleryCommand {
    List,
    /// Print an entry as a definition file.
    Emit {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recompute expectations and sampled identities.
    Check {
        name: Option<String>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Random points per foliation, in addition to the origin.
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
}

/// What a command printed and how it ended.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {error}")]
    Parse { path: String, error: String },
    #[error("{0}")]
    Cap(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Parse { .. } => EXIT_PARSE,
            CliError::Cap(_) => EXIT_CAP,
        }
    }
}

impl From<Missing> for CliError {
    fn from(m: Missing) -> Self {
        CliError::Usage(m.to_string())
    }
}

macro_rules! kernel_error {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                if e.is_cap() { CliError::Cap(e.to_string()) } else { CliError::Usage(e.to_string()) }
            }
        }
    )*};
}
kernel_error!(FoliationError, PullbackError, MoritaError, GalleryError, folmod_core::geometry::GeometryError);

fn load(path: &Path) -> Result<Definitions, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    defs::parse(&text).map_err(|e: DefError| match e.cap {
        true => CliError::Cap(format!("{}: {e}", path.display())),
        false => CliError::Parse { path: path.display().to_string(), error: e.to_string() },
    })
}

/// A declared point name or comma-separated rationals on the foliation's chart.
fn point(d: &Definitions, f: &SingularFoliation, text: &str) -> Result<RationalPoint, CliError> {
    if let Ok(p) = d.point(text) {
        if p.chart() != f.chart() {
            return Err(CliError::Usage(format!("point {text} lies on chart {}, not {}", p.chart().name(), f.chart().name())));
        }
        return Ok(p.clone());
    }
    let coords = defs::parse_coords(text).ok_or_else(|| CliError::Usage(format!("not a point: {text:?}")))?;
    RationalPoint::new(f.chart(), coords).map_err(|e| CliError::Usage(e.to_string()))
}

fn coords_text(p: &RationalPoint) -> String {
    p.coords().iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn gens_text(f: &SingularFoliation) -> Vec<String> {
    f.generators().iter().map(ToString::to_string).collect()
}

fn file_input(file: &Path) -> String {
    file.display().to_string()
}

/// Certificates of `a = b`: each generator of `b` in `a` and vice versa.
fn equality_certificates(a_name: &str, a: &SingularFoliation, b_name: &str, b: &SingularFoliation, eq: &EqualityReport) -> Vec<Value> {
    let mut out = Vec::new();
    for (i, c) in eq.forward.iter().enumerate() {
        if let Some(c) = c {
            let claim = format!("generator {i} of {b_name} lies in {a_name}");
            out.push(membership_certificate(&claim, &b.generators()[i], a.generators(), a.avoid_product(), c));
        }
    }
    for (i, c) in eq.backward.iter().enumerate() {
        if let Some(c) = c {
            let claim = format!("generator {i} of {a_name} lies in {b_name}");
            out.push(membership_certificate(&claim, &a.generators()[i], b.generators(), b.avoid_product(), c));
        }
    }
    out
}

fn missing_generators(eq: &EqualityReport) -> Value {
    let idx = |v: &[Option<_>]| v.iter().enumerate().filter(|(_, c)| c.is_none()).map(|(i, _)| i).collect::<Vec<_>>();
    json!({ "second_not_in_first": idx(&eq.forward), "first_not_in_second": idx(&eq.backward) })
}

fn submersion_kind(c: &SubmersionCertificate) -> &'static str {
    match c {
        SubmersionCertificate::CertifiedEverywhere { .. } => "certified-everywhere",
        SubmersionCertificate::SampleVerified { .. } => "sample-verified",
        SubmersionCertificate::Failed { .. } => "failed",
    }
}

fn matrix_text(m: &[Vec<Vec<Rational>>]) -> Vec<Vec<Vec<String>>> {
    m.iter().map(|a| a.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect()).collect()
}

fn run_command(cmd: &Command) -> Result<Report, CliError> {
    Ok(match cmd {
        Command::Check(CheckCommand::Involutive { file, fol }) => {
            let d = load(file)?;
            let f = d.foliation(fol)?;
            let r = f.is_involutive()?;
            let mut rep = Report::new("check involutive", json!({ "file": file_input(file), "foliation": fol }));
            for pc in &r.certificates {
                let b = f.generators()[pc.i].lie_bracket(&f.generators()[pc.j]).map_err(|e| CliError::Usage(e.to_string()))?;
                let claim = format!("[X_{}, X_{}] lies in {fol}", pc.i, pc.j);
                rep.certificates.push(membership_certificate(&claim, &b, f.generators(), f.avoid_product(), &pc.certificate));
            }
            let mut detail = json!({ "generators": gens_text(f), "pairs_certified": r.certificates.len() });
            match &r.failure {
                None => rep.verdict("involutive", 0, detail),
                Some(bf) => {
                    let vars = f.chart().vars();
                    detail["failure"] = json!({
                        "pair": [bf.i, bf.j],
                        "normal_form": bf.normal_form.components().iter().map(|c| poly_to_string(c, vars)).collect::<Vec<_>>(),
                    });
                    rep.verdict("not-involutive", 1, detail)
                }
            }
        }
        Command::Check(CheckCommand::Certificates { report }) => {
            let text = std::fs::read_to_string(report).map_err(|e| CliError::Usage(format!("{}: {e}", report.display())))?;
            let doc: Value = serde_json::from_str(&text).map_err(|e| CliError::Parse { path: report.display().to_string(), error: e.to_string() })?;
            let (total, failed) = verify_report(&doc).map_err(|e| CliError::Parse { path: report.display().to_string(), error: e.to_string() })?;
            let rep = Report::new("check certificates", json!({ "report": file_input(report) }));
            let detail = json!({ "checked": total, "failed": failed });
            if failed.is_empty() { rep.verdict("verified", 0, detail) } else { rep.verdict("failed", 1, detail) }
        }
        Command::Fiber { file, fol, point: pt } => {
            let d = load(file)?;
            let f = d.foliation(fol)?;
            let p = point(&d, f, pt)?;
            let rep = Report::new("fiber", json!({ "file": file_input(file), "foliation": fol, "point": coords_text(&p) }));
            rep.verdict("computed", 0, json!({ "fiber_dim": f.fiber_dim(&p)?, "tangent_dim": f.tangent_dim(&p)? }))
        }
        Command::Isotropy { file, fol, point: pt } => {
            let d = load(file)?;
            let f = d.foliation(fol)?;
            let p = point(&d, f, pt)?;
            let rep = Report::new("isotropy", json!({ "file": file_input(file), "foliation": fol, "point": coords_text(&p) }));
            if !f.is_involutive()?.ok {
                return Ok(rep.verdict("incomplete", 2, json!({ "reason": format!("{fol} is not involutive") })));
            }
            let g = f.isotropy_algebra(&p)?;
            let inv = lie_invariants(&g);
            rep.verdict(
                "computed",
                0,
                json!({
                    "dim": g.dim,
                    "basis": matrix_text(std::slice::from_ref(&g.basis_witness))[0],
                    "structure_constants": matrix_text(&g.structure_constants),
                    "antisymmetric": g.is_antisymmetric(),
                    "jacobi": g.satisfies_jacobi(),
                    "derived_series": inv.derived_series_dims,
                    "lower_central_series": inv.lower_central_dims,
                    "center_dim": inv.center_dim,
                    "abelianization_dim": inv.abelianization_dim,
                }),
            )
        }
        Command::Order { file, fol, point: pt } => {
            let d = load(file)?;
            let f = d.foliation(fol)?;
            let p = point(&d, f, pt)?;
            let v = f.vanishing_order(&p)?;
            let rep = Report::new("order", json!({ "file": file_input(file), "foliation": fol, "point": coords_text(&p) }));
            rep.verdict("computed", 0, json!({ "vanishing_order": v.order, "capped": v.capped }))
        }
        Command::Pullback { file, map, fol, emit } => {
            let d = load(file)?;
            let m = d.map(map)?;
            let f = d.foliation(fol)?;
            let mut rep = Report::new("pullback", json!({ "file": file_input(file), "map": map, "foliation": fol }));
            let pb = match pullback(m, f) {
                Ok(pb) => pb,
                Err(e @ PullbackError::NotSubmersion { .. }) => return Ok(rep.verdict("not-a-submersion", 1, json!({ "reason": e.to_string() }))),
                Err(e @ PullbackError::LiftUnavailable { .. }) => return Ok(rep.verdict("incomplete", 2, json!({ "reason": e.to_string() }))),
                Err(e) => return Err(e.into()),
            };
            rep.certificates.extend(submersion_certificate(&format!("{map} is a submersion"), m, &pb.submersion));
            let vars = m.source().vars();
            let lifts: Vec<Value> = pb
                .lifts
                .iter()
                .zip(f.generators())
                .map(|(l, g)| json!({ "generator": g.to_string(), "lift": l.lift.to_string(), "power": l.power }))
                .collect();
            let name = format!("{fol}_pullback");
            if let Some(out) = emit {
                let mut defs_out = Definitions { charts: vec![m.source().clone()], ..Default::default() };
                defs_out.foliations.push((name.clone(), pb.foliation.clone()));
                std::fs::write(out, defs_out.to_text() + "\n").map_err(|e| CliError::Usage(format!("{}: {e}", out.display())))?;
            }
            rep.verdict(
                "computed",
                0,
                json!({
                    "name": name,
                    "chart": m.source().name(),
                    "vars": vars,
                    "submersion": submersion_kind(&pb.submersion),
                    "generators": gens_text(&pb.foliation),
                    "vertical": pb.vertical.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "lifts": lifts,
                }),
            )
        }
        Command::Pushforward { file, map, fol } => {
            let d = load(file)?;
            let m = d.map(map)?;
            let f = d.foliation(fol)?;
            let mut rep = Report::new("pushforward", json!({ "file": file_input(file), "map": map, "foliation": fol }));
            match pushforward_foliation(m, f) {
                Ok(Pushforward::Pushed { foliation, round_trip }) => {
                    let back = folmod_core::pullback::pullback_foliation(m, &foliation)?;
                    rep.certificates = equality_certificates(&format!("{map}^-1(pushforward)"), &back, fol, f, &round_trip);
                    rep.verdict("pushed", 0, json!({ "chart": m.target().name(), "generators": gens_text(&foliation) }))
                }
                Ok(Pushforward::MissingVertical { missing }) => {
                    let names: Vec<&String> = missing.iter().map(|&i| &m.source().vars()[i]).collect();
                    let detail = json!({ "missing": names.iter().map(|v| format!("d/d{v}")).collect::<Vec<_>>() });
                    rep.verdict("missing-vertical", 1, detail)
                }
                Ok(Pushforward::NotAPullback { candidate, round_trip }) => {
                    let detail = json!({ "candidate": gens_text(&candidate), "missing": missing_generators(&round_trip) });
                    rep.verdict("not-a-pullback", 1, detail)
                }
                Err(e @ PullbackError::NotProjection { .. }) => rep.verdict("incomplete", 2, json!({ "reason": e.to_string() })),
                Err(e) => return Err(e.into()),
            }
        }
        Command::Equal { file, fol1, fol2 } => {
            let d = load(file)?;
            let (a, b) = (d.foliation(fol1)?, d.foliation(fol2)?);
            let eq = a.equals(b)?;
            let mut rep = Report::new("equal", json!({ "file": file_input(file), "first": fol1, "second": fol2 }));
            rep.certificates = equality_certificates(fol1, a, fol2, b, &eq);
            if eq.equal { rep.verdict("equal", 0, Value::Null) } else { rep.verdict("different", 1, missing_generators(&eq)) }
        }
        Command::Product { file, fol1, fol2 } => {
            let d = load(file)?;
            let p = product_foliation(d.foliation(fol1)?, d.foliation(fol2)?)?;
            let rep = Report::new("product", json!({ "file": file_input(file), "first": fol1, "second": fol2 }));
            rep.verdict("computed", 0, json!({ "chart": p.chart().name(), "vars": p.chart().vars(), "generators": gens_text(&p) }))
        }
        Command::Slice { file, fol, slice, point: pt } => {
            let d = load(file)?;
            let f = d.foliation(fol)?;
            let s = d.slice(slice)?;
            let p = point(&d, f, pt)?;
            if s.chart != f.chart().name() {
                return Err(CliError::Usage(format!("slice {slice} is on chart {}, not {}", s.chart, f.chart().name())));
            }
            let rep = Report::new("slice", json!({ "file": file_input(file), "foliation": fol, "slice": slice, "point": coords_text(&p) }));
            match restrict_to_slice(f, &s.fixed, &p) {
                Ok(r) => {
                    let coords: Vec<Rational> =
                        (0..p.coords().len()).filter(|i| !s.fixed.iter().any(|(j, _)| j == i)).map(|i| p.coords()[i].clone()).collect();
                    let base = RationalPoint::new(r.chart(), coords)?;
                    let detail = json!({
                        "chart": r.chart().name(),
                        "vars": r.chart().vars(),
                        "generators": gens_text(&r),
                        "tangent_dim": r.tangent_dim(&base)?,
                    });
                    rep.verdict("transversal", 0, detail)
                }
                Err(FoliationError::NotTransversal) => rep.verdict("not-transversal", 1, Value::Null),
                Err(FoliationError::InvalidSlice(why)) => return Err(CliError::Usage(format!("invalid slice: {why}"))),
                Err(e) => return Err(e.into()),
            }
        }
        Command::Bisubmersion { file, v, s, t, fol_m, fol_n } => {
            let d = load(file)?;
            let chart = d.chart(v)?;
            let (sm, tm) = (d.map(s)?, d.map(t)?);
            for m in [sm, tm] {
                if m.source() != chart {
                    return Err(CliError::Usage(format!("map {} does not start at {v}", m.name())));
                }
            }
            let (fm, fnn) = (d.foliation(fol_m)?, d.foliation(fol_n)?);
            let mut rep = Report::new(
                "bisubmersion",
                json!({ "file": file_input(file), "space": v, "s": s, "t": t, "foliation_m": fol_m, "foliation_n": fol_n }),
            );
            let r = match bisubmersion_check(sm, tm, fm, fnn) {
                Ok(r) => r,
                Err(e @ (PullbackError::NotSubmersion { .. } | PullbackError::LiftUnavailable { .. })) => {
                    return Ok(rep.verdict("incomplete", 2, json!({ "reason": e.to_string() })))
                }
                Err(e) => return Err(e.into()),
            };
            let checks = [
                ("s^-1 F_M = t^-1 F_N", &r.s_pullback, &r.t_pullback, &r.pullbacks_equal, "s^-1 F_M", "t^-1 F_N"),
                ("s^-1 F_M = ker ds + ker dt", &r.s_pullback, &r.vertical_sum, &r.s_matches_verticals, "s^-1 F_M", "ker ds + ker dt"),
                ("t^-1 F_N = ker ds + ker dt", &r.t_pullback, &r.vertical_sum, &r.t_matches_verticals, "t^-1 F_N", "ker ds + ker dt"),
            ];
            let mut failing = Vec::new();
            let mut rows = serde_json::Map::new();
            for (label, a, b, eq, an, bn) in checks {
                rep.certificates.extend(equality_certificates(an, a, bn, b, eq));
                rows.insert(label.to_string(), json!(eq.equal));
                if !eq.equal {
                    failing.push(label);
                }
            }
            let detail = json!({ "equalities": rows, "failing": failing, "vertical_sum_involutive": r.vertical_sum_involutive });
            if failing.is_empty() { rep.verdict("bisubmersion", 0, detail) } else { rep.verdict("not-a-bisubmersion", 1, detail) }
        }
        Command::Morita { file, witness, fol_m, fol_n } => {
            let d = load(file)?;
            let w = d.witness(witness)?;
            let (fm, fnn) = (d.foliation(fol_m)?, d.foliation(fol_n)?);
            let r = check_witness(w, fm, fnn)?;
            let mut rep =
                Report::new("morita", json!({ "file": file_input(file), "witness": witness, "foliation_m": fol_m, "foliation_n": fol_n }));
            rep.ledger = Value::Array(
                r.ledger
                    .iter()
                    .map(|l| {
                        json!({
                            "map": l.map,
                            "submersion": l.submersion.as_str(),
                            "surjective": l.surjective.as_str(),
                            "connected_fibers": l.connected_fibers.as_str(),
                        })
                    })
                    .collect(),
            );
            for (m, c) in [(&w.pi_m, &r.submersions[0]), (&w.pi_n, &r.submersions[1])] {
                rep.certificates.extend(submersion_certificate(&format!("{} is a submersion", m.name()), m, c));
            }
            let mut detail = json!({});
            if let (Some((pm, pn)), Some(eq)) = (&r.pullbacks, &r.module_equality) {
                rep.certificates.extend(equality_certificates("pi_M^-1 F_M", pm, "pi_N^-1 F_N", pn, eq));
                detail["pi_M^-1 F_M"] = json!(gens_text(pm));
                detail["pi_N^-1 F_N"] = json!(gens_text(pn));
                detail["modules_equal"] = json!(eq.equal);
            }
            let (code, reason) = match &r.verdict {
                Verdict::WitnessVerified => (0, None),
                Verdict::WitnessVerifiedModuloAssertions => (2, None),
                Verdict::Refuted(why) => (1, Some(why.clone())),
                Verdict::Incomplete(why) => (2, Some(why.clone())),
            };
            if let Some(why) = reason {
                detail["reason"] = json!(why);
            }
            rep.verdict(r.verdict.label(), code, detail)
        }
        Command::Compare { file, fol_m, fol_n, points } => {
            if points.len() != 2 {
                return Err(CliError::Usage(format!("compare takes --point twice, got {}", points.len())));
            }
            let d = load(file)?;
            let (fm, fnn) = (d.foliation(fol_m)?, d.foliation(fol_n)?);
            let (x, y) = (point(&d, fm, &points[0])?, point(&d, fnn, &points[1])?);
            let r = compare_invariants(fm, &x, fnn, &y)?;
            let rep = Report::new(
                "compare",
                json!({ "file": file_input(file), "foliation_m": fol_m, "point_m": coords_text(&x), "foliation_n": fol_n, "point_n": coords_text(&y) }),
            );
            let rows: Vec<Value> = r
                .rows
                .iter()
                .map(|row| json!({ "invariant": row.name, "left": row.left, "right": row.right, "necessary": row.necessary, "differs": row.differs }))
                .collect();
            match &r.verdict {
                ComparisonVerdict::Distinguishes(reasons) => rep.verdict("distinguishes", 1, json!({ "reasons": reasons, "rows": rows })),
                ComparisonVerdict::Consistent => rep.verdict("consistent", 0, json!({ "rows": rows })),
            }
        }
        Command::Gallery(GalleryCommand::List) => {
            let entries: Vec<Value> = gallery::list()
                .into_iter()
                .map(|n| {
                    let e = gallery::load(n)?;
                    Ok(json!({ "name": n, "description": e.description, "expectations": e.expectations.len() }))
                })
                .collect::<Result<_, CliError>>()?;
            Report::new("gallery list", json!({})).verdict("computed", 0, json!({ "entries": entries }))
        }
        Command::Gallery(GalleryCommand::Emit { name, out }) => {
            let e = gallery::load(name)?;
            let text = Definitions::from_gallery(&e).to_text() + "\n";
            let rep = Report::new("gallery emit", json!({ "name": name }));
            match out {
                Some(path) => {
                    std::fs::write(path, &text).map_err(|err| CliError::Usage(format!("{}: {err}", path.display())))?;
                    rep.verdict("written", 0, json!({ "path": path.display().to_string() }))
                }
                None => rep.verdict("emitted", 0, json!({ "text": text })),
            }
        }
        Command::Gallery(GalleryCommand::Check { name, seed, samples }) => gallery_check(name.as_deref(), *seed, *samples)?,
    })
}

/// Expectations of the selected entries, plus `dim g_p = fiber - tangent`
/// at the origin (when in the domain) and `samples` seeded random points of
/// every involutive foliation.
pub fn gallery_check(name: Option<&str>, seed: u64, samples: usize) -> Result<Report, CliError> {
    let names: Vec<String> = match name {
        Some(n) => vec![n.to_string()],
        None => gallery::list().into_iter().map(str::to_string).collect(),
    };
    let mut entries = Vec::new();
    let mut all_ok = true;
    for n in &names {
        let e = gallery::load(n)?;
        let mut rows = Vec::new();
        for c in e.verify()? {
            all_ok &= c.ok();
            rows.push(json!({ "label": c.label, "expected": c.expected, "actual": c.actual, "provenance": c.provenance.label(), "ok": c.ok() }));
        }
        let mut identity = Vec::new();
        for (k, (fname, f)) in e.foliations.iter().enumerate() {
            let points = sample_points(f.chart(), samples, seed.wrapping_add(k as u64));
            let mut bad = Vec::new();
            for p in &points {
                let iso = f.isotropy_algebra(p)?.dim;
                if iso + f.tangent_dim(p)? != f.fiber_dim(p)? {
                    bad.push(coords_text(p));
                }
            }
            all_ok &= bad.is_empty();
            identity.push(json!({ "foliation": fname, "points": points.len(), "violations": bad }));
        }
        entries.push(json!({ "name": n, "expectations": rows, "isotropy_identity": identity }));
    }
    let rep = Report::new("gallery check", json!({ "names": names, "seed": seed, "samples": samples }));
    let detail = json!({ "entries": entries });
    Ok(if all_ok { rep.verdict("verified", 0, detail) } else { rep.verdict("mismatch", 1, detail) })
}

fn install_degree_cap() -> Result<(), CliError> {
    if let Ok(v) = std::env::var("FOLMOD_DEGREE_CAP") {
        let cap: u32 = v.trim().parse().map_err(|_| CliError::Usage(format!("FOLMOD_DEGREE_CAP must be a nonnegative integer, got {v:?}")))?;
        GbLimits { max_degree: cap, ..GbLimits::current() }.install();
    }
    Ok(())
}

/// Parses arguments (including the program name) and runs one command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    if let Err(e) = install_degree_cap() {
        return Outcome { code: e.code(), stdout: String::new(), stderr: format!("error: {e}\n") };
    }
    let start = Instant::now();
    match run_command(&cli.command) {
        Ok(mut rep) => {
            if cli.timings {
                rep.timings = Some(json!({ "total_ms": start.elapsed().as_secs_f64() * 1e3 }));
            }
            let emitted_text = match (&cli.command, &rep.detail) {
                (Command::Gallery(GalleryCommand::Emit { out: None, .. }), d) => d.get("text").and_then(Value::as_str).map(str::to_string),
                _ => None,
            };
            let stdout = match emitted_text {
                Some(t) => t,
                None if cli.human => rep.to_human(),
                None => rep.to_json(),
            };
            Outcome { code: rep.exit, stdout, stderr: String::new() }
        }
        Err(e) => Outcome { code: e.code(), stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}
