//! End-to-end acceptance run, without the libtest harness so the per-criterion
//! PASS/FAIL lines always reach the output. Exits nonzero if any criterion fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use folmod_core::algebra::{Rational, SATURATION_POWER_CAP};
use folmod_core::foliation::{gl_basis, lie_invariants, EqualityReport, SingularFoliation};
use folmod_core::gallery::{self, Probe};
use folmod_core::geometry::{PolyMap, RationalPoint, VectorField};
use folmod_core::pullback::{functoriality_check, pullback_foliation, pushforward_foliation, Pushforward};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

struct Run {
    code: i32,
    stdout: String,
    json: Value,
}

fn folmod(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_folmod")).args(args).output().expect("spawn folmod");
    let stdout = String::from_utf8(out.stdout).expect("utf-8 output");
    let json = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    Run { code: out.status.code().unwrap_or(-1), stdout, json }
}

fn emit(dir: &Path, entry: &str) -> PathBuf {
    let path = dir.join(format!("{entry}.fol"));
    let run = folmod(&["gallery", "emit", entry, "--out", path.to_str().unwrap()]);
    assert_eq!(run.code, 0, "emitting {entry}");
    path
}

fn row<'a>(report: &'a Value, invariant: &str) -> Option<&'a Value> {
    report["verdict"]["detail"]["rows"].as_array()?.iter().find(|r| r["invariant"] == invariant)
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took < limit, format!("took {took:?}, limit {limit:?}"))
}

fn certified_both_ways(a: &SingularFoliation, b: &SingularFoliation, rep: &EqualityReport) -> Result<usize, String> {
    ensure(rep.equal, "modules differ")?;
    let mut n = 0;
    for (target, gens, h, certs) in [(b, a, a.avoid_product(), &rep.forward), (a, b, b.avoid_product(), &rep.backward)] {
        let elems = gens.generator_elements();
        for (g, c) in target.generators().iter().zip(certs) {
            let c = c.as_ref().ok_or("missing certificate")?;
            ensure(c.power <= SATURATION_POWER_CAP && c.verify(g.as_element(), &elems, h), "certificate fails to expand")?;
            n += 1;
        }
    }
    Ok(n)
}

fn gl_vs_sl(dir: &Path) -> Outcome {
    let file = emit(dir, "gl2-vs-sl2");
    let start = Instant::now();
    let run = folmod(&["compare", file.to_str().unwrap(), "Fgl", "Fsl", "--point", "o", "--point", "o"]);
    within(start, Duration::from_secs(1))?;
    ensure(run.code == 1, format!("exit {}", run.code))?;
    let iso = row(&run.json, "isotropy dim").ok_or("no isotropy row")?;
    ensure(iso["left"] == "4" && iso["right"] == "3", format!("isotropy row {iso}"))?;
    let der = row(&run.json, "derived series").ok_or("no derived row")?;
    ensure(der["differs"] == true, format!("derived row {der}"))?;
    Ok(format!("isotropy 4 vs 3, derived {} vs {}, exit 1", der["left"], der["right"]))
}

fn x2_vs_x3(dir: &Path) -> Outcome {
    let file = emit(dir, "x2-vs-x3");
    let start = Instant::now();
    let run = folmod(&["compare", file.to_str().unwrap(), "F2", "F3", "--point", "o", "--point", "o"]);
    within(start, Duration::from_secs(1))?;
    ensure(run.code == 1, format!("exit {}", run.code))?;
    let ord = row(&run.json, "vanishing order").ok_or("no order row")?;
    ensure(ord["left"] == "2" && ord["right"] == "3", format!("order row {ord}"))?;
    Ok("vanishing orders 2 and 3, exit 1".into())
}

fn circles_witness(dir: &Path) -> Outcome {
    let file = emit(dir, "circles-ray-witness");
    let start = Instant::now();
    let run = folmod(&["morita", file.to_str().unwrap(), "W", "circles", "zero"]);
    within(start, Duration::from_secs(2))?;
    ensure(run.code == 2, format!("exit {}", run.code))?;
    let detail = &run.json["verdict"]["detail"];
    let rotation = Value::from(vec!["-y*d/dx + x*d/dy"]);
    ensure(detail["pi_M^-1 F_M"] == rotation && detail["pi_N^-1 F_N"] == rotation, format!("pullbacks {detail}"))?;
    for entry in run.json["ledger"].as_array().ok_or("no ledger")? {
        ensure(entry["submersion"] == "certified", format!("ledger {entry}"))?;
        ensure(entry["connected_fibers"] == "structural", format!("ledger {entry}"))?;
    }
    let certs = run.json["certificates"].as_array().ok_or("no certificates")?;
    let claims: Vec<&str> = certs.iter().filter_map(|c| c["claim"].as_str()).collect();
    for want in ["lies in pi_M^-1 F_M", "lies in pi_N^-1 F_N"] {
        ensure(claims.iter().any(|c| c.ends_with(want)), format!("no certificate that a generator {want}"))?;
    }
    let report = dir.join("circles-report.json");
    std::fs::write(&report, &run.stdout).map_err(|e| e.to_string())?;
    let check = folmod(&["check", "certificates", report.to_str().unwrap()]);
    ensure(check.code == 0, format!("certificate re-check exit {}", check.code))?;
    Ok(format!("equal to <x d/dy - y d/dx>, {} certificates re-verified, exit 2", certs.len()))
}

fn bisubmersions(dir: &Path) -> Outcome {
    let ff = emit(dir, "full-full-bisubmersion");
    let circles = emit(dir, "circles-ray-witness");
    let mut start = Instant::now();
    let ok = folmod(&["bisubmersion", ff.to_str().unwrap(), "V", "s", "t", "FM", "FN"]);
    within(start, Duration::from_secs(2))?;
    ensure(ok.code == 0, format!("full-full exit {}", ok.code))?;
    start = Instant::now();
    let w = folmod(&["bisubmersion", circles.to_str().unwrap(), "P", "pi_M", "pi_N", "circles", "zero"]);
    within(start, Duration::from_secs(2))?;
    ensure(w.code == 0, format!("circles witness exit {}", w.code))?;
    start = Instant::now();
    let bad = folmod(&["bisubmersion", ff.to_str().unwrap(), "V", "s", "t_bad", "FM", "FN"]);
    within(start, Duration::from_secs(2))?;
    ensure(bad.code == 1, format!("control exit {}", bad.code))?;
    let failing = bad.json["verdict"]["detail"]["failing"].as_array().cloned().unwrap_or_default();
    ensure(!failing.is_empty() && failing.iter().all(|f| f.as_str().is_some_and(|f| f.contains(" = "))), "control names no equality")?;
    let failing = failing.iter().filter_map(Value::as_str).collect::<Vec<_>>().join("; ");
    Ok(format!("full-full and circles pass; control fails on {failing}"))
}

fn functoriality() -> Outcome {
    let start = Instant::now();
    let e = gallery::load("functoriality").map_err(|e| e.to_string())?;
    let mut cases = 0;
    let mut certs = 0;
    for x in &e.expectations {
        let Probe::Functoriality { pi, rho, fol } = &x.probe else { continue };
        let (pi, rho, f) = (e.map(pi).unwrap(), e.map(rho).unwrap(), e.foliation(fol).unwrap());
        let direct = pullback_foliation(&PolyMap::compose(pi, rho).unwrap(), f).map_err(|e| e.to_string())?;
        let stepwise = pullback_foliation(rho, &pullback_foliation(pi, f).unwrap()).map_err(|e| e.to_string())?;
        let rep = direct.equals(&stepwise).map_err(|e| e.to_string())?;
        certs += certified_both_ways(&direct, &stepwise, &rep).map_err(|m| format!("{}: {m}", x.label))?;
        ensure(functoriality_check(pi, rho, f).map_err(|e| e.to_string())?.equal, "library check disagrees")?;
        cases += 1;
    }
    within(start, Duration::from_secs(10))?;
    ensure(cases >= 5, format!("only {cases} cases"))?;
    Ok(format!("{cases} compositions, {certs} certificates re-expanded"))
}

fn pushforward() -> Outcome {
    let start = Instant::now();
    let e = gallery::load("pushforward").map_err(|e| e.to_string())?;
    let (mut pushed, mut controls) = (0, 0);
    for x in &e.expectations {
        let Probe::Pushforward { map, fol, expected } = &x.probe else { continue };
        let (pi, f) = (e.map(map).unwrap(), e.foliation(fol).unwrap());
        let kept = pi.as_projection().ok_or("not a projection")?;
        let fiber: Vec<usize> = (0..pi.source().dim()).filter(|i| !kept.contains(i)).collect();
        let missing: Vec<usize> = fiber
            .iter()
            .copied()
            .filter(|&w| f.contains(&VectorField::coordinate(pi.source(), w)).unwrap().is_none())
            .collect();
        match pushforward_foliation(pi, f).map_err(|e| e.to_string())? {
            Pushforward::Pushed { foliation, .. } => {
                ensure(missing.is_empty(), format!("{}: pushed despite missing fibers", x.label))?;
                let back = pullback_foliation(pi, &foliation).map_err(|e| e.to_string())?;
                certified_both_ways(&back, f, &back.equals(f).unwrap()).map_err(|m| format!("{}: {m}", x.label))?;
                if let Some(name) = expected {
                    ensure(foliation.equals(e.foliation(name).unwrap()).unwrap().equal, format!("{}: wrong base", x.label))?;
                }
                pushed += 1;
            }
            Pushforward::MissingVertical { missing: reported } => {
                ensure(!missing.is_empty() && reported == missing, format!("{}: diagnostic {reported:?}", x.label))?;
                controls += 1;
            }
            Pushforward::NotAPullback { .. } => return Err(format!("{}: not a pullback", x.label)),
        }
    }
    within(start, Duration::from_secs(5))?;
    ensure(pushed >= 1 && controls >= 1, format!("{pushed} round trips, {controls} controls"))?;
    Ok(format!("{pushed} round trips certified, {controls} control reports missing-vertical"))
}

fn sampled() -> Vec<(String, SingularFoliation, Vec<RationalPoint>)> {
    common::gallery_foliations()
        .into_iter()
        .enumerate()
        .map(|(k, (name, f))| {
            let points = common::sample(f.chart(), 21, 40 + k as u64);
            (name, f, points)
        })
        .collect()
}

fn exact_sequence() -> Outcome {
    let mut total = 0;
    let all = sampled();
    for (name, f, points) in &all {
        ensure(points.len() >= 20, format!("{name}: {} points", points.len()))?;
        for p in points {
            ensure(p.coords().iter().all(|c| *c.denom() <= 7.into()), "denominator above 7")?;
            let iso = f.isotropy_algebra(p).map_err(|e| e.to_string())?.dim;
            let tangent = common::tangent_oracle(f, p);
            let fiber = f.fiber_dim(p).map_err(|e| e.to_string())?;
            ensure(iso + tangent == fiber, format!("{name} at {:?}: {iso} + {tangent} != {fiber}", p.coords()))?;
            total += 1;
        }
    }
    Ok(format!("{} foliations, {total} points", all.len()))
}

fn structure_constants() -> Outcome {
    let mut algebras = 0;
    for (name, f, points) in sampled() {
        for p in &points {
            let iso = f.isotropy_algebra(p).map_err(|e| e.to_string())?;
            ensure(iso.is_antisymmetric() && iso.satisfies_jacobi(), format!("{name} at {:?}", p.coords()))?;
            algebras += 1;
        }
    }
    let e = gallery::load("gl2").map_err(|e| e.to_string())?;
    let iso = e.foliation("F").unwrap().isotropy_algebra(e.point("o").unwrap()).map_err(|e| e.to_string())?;
    let mats = gl_basis(2);
    let basis: Vec<common::Mat> = iso.basis_witness.iter().map(|c| common::combine(c, &mats)).collect();
    let cols: Vec<Vec<Rational>> = basis.iter().map(common::flatten).collect();
    let mut entries = 0;
    for a in 0..iso.dim {
        for b in 0..iso.dim {
            // linear fields bracket as [X_A, X_B] = X_{BA - AB}
            let want = common::solve(&cols, &common::flatten(&common::commutator(&basis[b], &basis[a]))).ok_or("commutator escapes")?;
            ensure(iso.structure_constants[a][b] == want, format!("gl2 constants differ at ({a}, {b})"))?;
            entries += want.len();
        }
    }
    Ok(format!("{algebras} isotropy algebras sound; gl2 matches the commutator in {entries} entries"))
}

fn robustness() -> Outcome {
    let mut rewritings = 0;
    for (k, (name, f)) in common::gallery_foliations().into_iter().enumerate() {
        let points = common::sample(f.chart(), 4, 11 + k as u64);
        let before: Vec<String> = points.iter().map(|p| common::pointwise(&f, p)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(500 + k as u64);
        for round in 0..10 {
            let g = common::rewrite(&f, &mut rng);
            ensure(g.equals(&f).map_err(|e| e.to_string())?.equal, format!("{name}: rewriting {round} changed the module"))?;
            for (p, b) in points.iter().zip(&before) {
                ensure(&common::pointwise(&g, p) == b, format!("{name}: rewriting {round} at {:?}", p.coords()))?;
            }
            rewritings += 1;
        }
    }
    Ok(format!("{rewritings} rewritings, invariants unchanged"))
}

fn so3() -> Outcome {
    let e = gallery::load("so3").map_err(|e| e.to_string())?;
    let f = e.foliation("F").unwrap();
    let origin = e.point("o").unwrap();
    ensure(f.tangent_dim(origin).unwrap() == 0, "tangent dim at origin")?;
    let off: Vec<RationalPoint> =
        common::sample(f.chart(), 13, 77).into_iter().filter(|p| p.coords().iter().any(|c| !c.is_zero())).collect();
    ensure(off.len() >= 10, "too few samples")?;
    for p in &off {
        ensure(f.tangent_dim(p).unwrap() == 2, format!("tangent dim at {:?}", p.coords()))?;
    }
    let inv = lie_invariants(&f.isotropy_algebra(origin).unwrap());
    ensure(inv.dim == 3 && inv.derived_series_dims.get(1) == Some(&3), format!("isotropy {inv:?}"))?;
    Ok(format!("tangent 0 at origin, 2 at {} points; isotropy dim 3, derived dim 3", off.len()))
}

fn kernel_oracle() -> Outcome {
    let start = Instant::now();
    let corpus = common::kernel_corpus();
    ensure(corpus.len() >= 30, "corpus too small")?;
    let mut queries = 0;
    for (i, inst) in corpus.iter().enumerate() {
        queries += common::check_instance(inst, 100 + i as u64)?;
    }
    within(start, Duration::from_secs(30))?;
    Ok(format!("{} instances, {queries} membership queries and all syzygy modules agree", corpus.len()))
}

fn determinism() -> Outcome {
    let first = folmod(&["gallery", "check"]);
    let second = folmod(&["gallery", "check"]);
    ensure(first.code == 0, format!("gallery check exit {}", first.code))?;
    ensure(first.stdout == second.stdout, "reports differ")?;
    Ok(format!("{} identical bytes", first.stdout.len()))
}

fn main() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let criteria: Vec<Criterion<'_>> = vec![
        ("GL2/SL2 separation", Box::new(|| gl_vs_sl(d))),
        ("x^2 vs x^3 separation", Box::new(|| x2_vs_x3(d))),
        ("circles/ray Morita witness", Box::new(|| circles_witness(d))),
        ("bisubmersion checks", Box::new(|| bisubmersions(d))),
        ("pullback functoriality", Box::new(functoriality)),
        ("pushforward round trip", Box::new(pushforward)),
        ("exact-sequence identity", Box::new(exact_sequence)),
        ("structure-constant soundness", Box::new(structure_constants)),
        ("generator robustness", Box::new(robustness)),
        ("so(3) stratification", Box::new(so3)),
        ("kernel oracle equivalence", Box::new(kernel_oracle)),
        ("determinism", Box::new(determinism)),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let took = start.elapsed();
        match &result {
            Ok(summary) => println!("criterion {:>2} PASS  {name}: {summary} ({took:.2?})", i + 1),
            Err(why) => {
                println!("criterion {:>2} FAIL  {name}: {why} ({took:.2?})", i + 1);
                failed.push(i + 1);
            }
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria pass", criteria.len());
    } else {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}
