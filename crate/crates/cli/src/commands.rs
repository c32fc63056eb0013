//! The subcommands, as functions from input texts to reports.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use logcy3::boundary::Marking;
use logcy3::exactnum::GaussianRational;
use logcy3::oracle::{compare_period_paths, cubic_oracle};
use logcy3::pair::{validate_pair, LogCY3Pair};
use logcy3::periods::{
    act_on_marking, gamma_map, lambda_lattice, marked_period, marked_value, quotient_class, theta, unmarked_period,
};
use logcy3::toric::validate_fan;
use logcy3::torelli::{
    classify_contraction, decide_with_search, recheck, toric_boundary_complexity, Correspondence, Verdict,
};
use logcy3::{fixtures, Error};

use crate::document::{parse_marking, CorrespondenceDocument, PairDocument};
use crate::report::{yes_no, Report};

/// A failure with its exit code: 1 for diagnostics about the input data,
/// 2 for unreadable input and internal errors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        let code = match e {
            Error::InvalidFan(_) | Error::InvalidPair(_) | Error::NotToric(_) => 1,
            _ => 2,
        };
        CliError { code, message: e.to_string() }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn load(text: &str) -> CliResult<(PairDocument, LogCY3Pair)> {
    let doc = PairDocument::parse(text)?;
    let pair = LogCY3Pair::new(doc.to_spec()?)?;
    Ok((doc, pair))
}

fn values(v: &[GaussianRational]) -> Value {
    Value::Array(v.iter().map(|g| Value::String(g.to_string())).collect())
}

/// A random nonzero element of `Q(i)` with small numerators and denominators.
pub fn random_gaussian(rng: &mut ChaCha8Rng) -> GaussianRational {
    loop {
        let g = GaussianRational::from_parts(
            (rng.gen_range(-9..=9), rng.gen_range(1..=9)),
            (rng.gen_range(-9..=9), rng.gen_range(1..=9)),
        );
        if !g.is_zero() {
            return g;
        }
    }
}

pub fn random_marking(rng: &mut ChaCha8Rng, n: usize) -> Marking {
    Marking { points: (0..n).map(|_| random_gaussian(rng)).collect() }
}

pub fn cmd_validate(text: &str) -> CliResult<Report> {
    let mut r = Report::new("validate", &[text.as_bytes()]);
    let doc = PairDocument::parse(text)?;
    let spec = match doc.to_spec() {
        Ok(s) => s,
        Err(e @ (Error::InvalidPair(_) | Error::InvalidFan(_))) => {
            r.set("valid", json!(false));
            r.set("stage", json!("document"));
            r.set("diagnostic", json!(e.to_string()));
            r.line(format!("invalid: {e}"));
            r.exit_code = 1;
            return Ok(r);
        }
        Err(e) => return Err(e.into()),
    };
    for (stage, check) in [("fan", validate_fan(&spec.fan)), ("pair", validate_pair(&spec))] {
        if let Err(d) = check {
            r.set("valid", json!(false));
            r.set("stage", json!(stage));
            r.set("diagnostic", json!(d.0));
            r.line(format!("invalid {stage}: {d}"));
            r.exit_code = 1;
            return Ok(r);
        }
    }
    let p = LogCY3Pair::new(spec)?;
    r.set("valid", json!(true));
    r.set("rays", json!(p.fan().n_rays()));
    r.set("edges", json!(p.n_edges()));
    r.set("triangles", json!(p.fan().dual().triangles().len()));
    r.set("steps", json!(p.n_steps()));
    r.set("warnings", json!(p.warnings()));
    r.line(format!(
        "valid: {} components, {} edges, {} triangles, {} blowups",
        p.n_components(),
        p.n_edges(),
        p.fan().dual().triangles().len(),
        p.n_steps()
    ));
    for w in p.warnings() {
        r.line(format!("warning: {w}"));
    }
    Ok(r)
}

/// Randomized checks: marking independence, the torsor identity and
/// multiplicativity, each over `trials` draws.
pub fn random_suite(p: &LogCY3Pair, seed: u64, trials: usize) -> CliResult<Value> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = p.n_edges();
    let lam = lambda_lattice(p)?;
    let base = unmarked_period(p)?;
    let mut independent = true;
    let mut torsor = true;
    let mut multiplicative = true;
    for _ in 0..trials {
        let m = random_marking(&mut rng, n);
        for (x, v) in lam.basis.iter().zip(&base.values) {
            independent &= marked_value(p, &m, x)? == *v;
        }
        let alpha: Vec<GaussianRational> = (0..n).map(|_| random_gaussian(&mut rng)).collect();
        let lhs = theta(p, &alpha)?.product(&marked_period(p, &m)?);
        torsor &= lhs == marked_period(p, &act_on_marking(&alpha, &m))?;
        let dim = p.direct_sum_rank();
        let a: Vec<i64> = (0..dim).map(|_| rng.gen_range(-3..=3)).collect();
        let b: Vec<i64> = (0..dim).map(|_| rng.gen_range(-3..=3)).collect();
        let ab: Vec<i64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        multiplicative &= marked_value(p, &m, &ab)? == &marked_value(p, &m, &a)? * &marked_value(p, &m, &b)?;
    }
    Ok(json!({
        "seed": seed,
        "trials": trials,
        "marking_independent": independent,
        "torsor_identity": torsor,
        "multiplicative": multiplicative,
    }))
}

pub fn cmd_invariants(text: &str, seed: Option<u64>) -> CliResult<Report> {
    let mut r = Report::new("invariants", &[text.as_bytes()]);
    let (_, p) = load(text)?;
    let lam = lambda_lattice(&p)?;
    let k = p.k_image();
    let q = quotient_class(&p)?;
    let g = gamma_map(&p);
    let trivial = unmarked_period(&p)?.is_trivial();
    let minus_k = p.anticanonical();
    let cube = p.cubic(&minus_k, &minus_k, &minus_k);
    let steps = (0..p.n_steps())
        .map(|s| {
            let c = classify_contraction(&p, s)?;
            Ok(json!({
                "step": s,
                "kind": if p.spec().steps[s].is_point() { "point" } else { "curve" },
                "descriptor": [c.descriptor.0, c.descriptor.1, c.descriptor.2],
                "types": c.types,
            }))
        })
        .collect::<CliResult<Vec<Value>>>()?;
    let torsion = |t: &[logcy3::exactnum::BigInt]| Value::Array(t.iter().map(|x| json!(x.to_string())).collect());
    r.set("pic_rank", json!(p.rank()));
    r.set("anticanonical_cube", json!(cube));
    r.set("lambda", json!({ "rank": lam.rank(), "basis": lam.basis }));
    r.set("k", json!({ "rank": k.basis.len(), "saturated": k.saturated }));
    r.set(
        "lambda_mod_k",
        json!({
            "free_rank": q.free_rank(),
            "torsion": q.torsion.iter().map(|t| t.0).collect::<Vec<_>>(),
            "free_values": values(&q.free_values),
        }),
    );
    r.set(
        "edge_map_cokernel",
        json!({ "free_rank": g.coker_l.free_rank, "torsion": torsion(&g.coker_l.torsion) }),
    );
    r.set(
        "gamma",
        json!({
            "blown_edges": g.blown_edges,
            "composite_vanishes_mod_blown": g.composite_vanishes,
            "n_prime": { "free_rank": g.n_prime.free_rank, "torsion": torsion(&g.n_prime.torsion) },
            "cokernel_matches_n_prime": g.cokernel_matches(),
        }),
    );
    r.set("steps", Value::Array(steps.clone()));
    r.set("period_trivial", json!(trivial));
    if p.is_toric() {
        let c = toric_boundary_complexity(p.fan())?;
        r.set("toric_boundary_complexity", json!(c.c.to_string()));
    }
    r.line(format!("Pic rank {}, (-K)^3 = {cube}", p.rank()));
    r.line(format!("Lambda rank {}, K rank {}, Lambda/K free rank {}", lam.rank(), k.basis.len(), q.free_rank()));
    if !q.torsion.is_empty() {
        r.line(format!("Lambda/K torsion {:?}", q.torsion.iter().map(|t| t.0).collect::<Vec<_>>()));
    }
    r.line(format!(
        "coker(l) free rank {}, torsion {:?}; gamma o l vanishes: {}",
        g.coker_l.free_rank,
        g.coker_l.torsion.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        yes_no(g.composite_vanishes)
    ));
    for s in &steps {
        r.line(format!("step {}: {} blowup, descriptor {}, type {}", s["step"], s["kind"].as_str().unwrap(), s["descriptor"], s["types"]));
    }
    r.line(format!("period trivial: {}", yes_no(trivial)));
    if let Some(seed) = seed {
        let suite = random_suite(&p, seed, 100)?;
        let ok = ["marking_independent", "torsor_identity", "multiplicative"].iter().all(|k| suite[k] == json!(true));
        r.line(format!("randomized suite (seed {seed}): {}", if ok { "pass" } else { "FAIL" }));
        if !ok {
            r.exit_code = 1;
        }
        r.set("random_suite", suite);
    }
    Ok(r)
}

pub fn cmd_periods(text: &str, marking: Option<&str>, seed: Option<u64>) -> CliResult<Report> {
    let mut r = Report::new("periods", &[text.as_bytes(), marking.unwrap_or("").as_bytes()]);
    let (doc, p) = load(text)?;
    let m = match marking {
        Some(s) => parse_marking(s)?,
        None => doc.marking().unwrap_or_else(|| Marking::markers(p.n_edges())),
    };
    m.check(p.n_edges()).map_err(|e| CliError { code: 2, message: format!("--marking: {e}") })?;
    let marked = marked_period(&p, &m)?;
    let unmarked = unmarked_period(&p)?;
    let off = p.component_offsets();
    let table: Vec<Value> = marked
        .values
        .iter()
        .enumerate()
        .map(|(j, v)| {
            let comp = off.iter().rposition(|&o| o <= j).unwrap();
            json!({ "index": j, "component": comp, "basis": j - off[comp], "value": v.to_string() })
        })
        .collect();
    let lam: Vec<Value> = unmarked
        .domain
        .iter()
        .zip(&unmarked.values)
        .map(|(x, v)| json!({ "generator": x, "value": v.to_string() }))
        .collect();
    r.set("marking", values(&m.points));
    r.set("marked", Value::Array(table));
    r.set("unmarked", Value::Array(lam));
    r.line(format!("marking: {}", m.points.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")));
    r.line("marked period on the basis of ⊕ Pic(D_v):");
    for (j, v) in marked.values.iter().enumerate() {
        let comp = off.iter().rposition(|&o| o <= j).unwrap();
        r.line(format!("  D_{comp} basis {}: {v}", j - off[comp]));
    }
    r.line("unmarked period on the basis of Lambda:");
    for (x, v) in unmarked.domain.iter().zip(&unmarked.values) {
        r.line(format!("  {x:?}: {v}"));
    }
    if let Some(seed) = seed {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = (random_marking(&mut rng, p.n_edges()), random_marking(&mut rng, p.n_edges()));
        let mut same = true;
        for x in &unmarked.domain {
            same &= marked_value(&p, &a, x)? == marked_value(&p, &b, x)?;
        }
        r.set("random_markings_agree", json!(same));
        r.line(format!("two random markings (seed {seed}) give the same unmarked table: {}", yes_no(same)));
        if !same {
            r.exit_code = 1;
        }
    }
    Ok(r)
}

fn verdict_lines(r: &mut Report, v: &Verdict) {
    match v {
        Verdict::Isomorphic(c) => {
            r.line("verdict: isomorphic");
            r.line(format!("fan map {:?}", c.fan_map.matrix));
            for w in &c.periods {
                r.line(format!("  period on {:?}: {} = {}", w.generator, w.value, w.image_value));
            }
        }
        Verdict::Distinct { certificate, .. } => {
            r.line("verdict: distinct under this correspondence");
            r.line(format!("certificate: {}", serde_json::to_string(certificate).expect("serializable")));
        }
        Verdict::Inconclusive { reason } => r.line(format!("verdict: inconclusive ({reason})")),
    }
}

pub fn cmd_compare(a: &str, b: &str, corr: Option<&str>, search_bound: usize) -> CliResult<Report> {
    let mut r = Report::new("compare", &[a.as_bytes(), b.as_bytes(), corr.unwrap_or("").as_bytes()]);
    let (_, p) = load(a)?;
    let (_, q) = load(b)?;
    let c = match corr {
        Some(t) => CorrespondenceDocument::parse(t)?,
        None => Correspondence::identity(&p),
    };
    let v = decide_with_search(&p, &q, &c, search_bound)?;
    r.set("verdict", serde_json::to_value(&v).expect("serializable"));
    r.set("search_bound", json!(search_bound));
    verdict_lines(&mut r, &v);
    r.exit_code = v.exit_code();
    Ok(r)
}

pub fn cmd_recheck(a: &str, b: &str, report: &str) -> CliResult<Report> {
    let mut r = Report::new("recheck", &[a.as_bytes(), b.as_bytes(), report.as_bytes()]);
    let (_, p) = load(a)?;
    let (_, q) = load(b)?;
    let v: Value = serde_json::from_str(report).map_err(|e| Error::Parse(format!("report: {e}")))?;
    let verdict_value = v.get("results").and_then(|x| x.get("verdict")).or_else(|| v.get("verdict")).unwrap_or(&v);
    let verdict: Verdict =
        serde_json::from_value(verdict_value.clone()).map_err(|e| Error::Parse(format!("verdict: {e}")))?;
    let outcome = recheck(&p, &q, &verdict)?;
    r.set("verdict", json!(verdict.kind()));
    r.set("verified", json!(outcome.is_ok()));
    match outcome {
        Ok(()) => r.line(format!("{} certificate verified", verdict.kind())),
        Err(e) => {
            r.set("failure", json!(e));
            r.line(format!("{} certificate NOT verified: {e}", verdict.kind()));
            r.exit_code = 1;
        }
    }
    Ok(r)
}

pub fn cmd_oracle_check(text: &str, flip: bool) -> CliResult<Report> {
    let mut r = Report::new("oracle-check", &[text.as_bytes(), &[u8::from(flip)]]);
    let (_, p) = load(text)?;
    let paths = compare_period_paths(&p, flip)?;
    r.set("period_paths", serde_json::to_value(&paths).expect("serializable"));
    match &paths.first_discrepancy {
        None => r.line(format!(
            "cocycle product path = lambda product path: agree on {} generators{}",
            paths.generators,
            if flip { " (orientation flipped)" } else { "" }
        )),
        Some(d) => {
            r.line(format!(
                "cocycle product path = lambda product path: DISCREPANCY on {:?}: {} against {}{}",
                d.generator,
                d.cocycle_path,
                d.lambda_path,
                if flip { " (orientation flipped)" } else { "" }
            ));
            r.exit_code = 1;
        }
    }
    let own = cubic_oracle(&p)?;
    match &own {
        Some(c) => {
            r.line(format!(
                "cubic tensor against toric degeneration {:?}: {}",
                c.subdivisions,
                if c.agree() { "agree" } else { "DISCREPANCY" }
            ));
            if !c.agree() {
                r.exit_code = 1;
            }
        }
        None => r.line("cubic oracle: centers have no torus-invariant degeneration"),
    }
    r.set("cubic_oracle", serde_json::to_value(&own).expect("serializable"));
    let mut internal = Vec::new();
    for (name, spec) in fixtures::invariant_center_pairs() {
        let q = LogCY3Pair::new(spec)?;
        let c = cubic_oracle(&q)?.ok_or_else(|| Error::Internal(format!("{name} has no degeneration")))?;
        if !c.agree() {
            r.exit_code = 1;
        }
        r.line(format!("invariant-center fixture {name}: cubic tensors {}", if c.agree() { "agree" } else { "DISCREPANCY" }));
        internal.push(json!({ "fixture": name, "agree": c.agree(), "checked": c.checked }));
    }
    r.set("invariant_fixtures", Value::Array(internal));
    Ok(r)
}
