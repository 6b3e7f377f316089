//! One adapter per experiment: parse params, call the library, package the
//! results.

use std::collections::BTreeMap;

use hadamard_weak::spaces::book::vertex_a;
use hadamard_weak::{
    ball_net, book_property_n_witness, book_witness_tw_ne_tg, check_convex_complement,
    check_fingerprint_separation, check_preimage_identity, cone_cover_certificate, fingerprint,
    halfspace_formula_check, in_elementary_set, search_counterexamples, weak_convergence_report,
    ConvexBody64, CoverOptions, Membership, Point64, ProbeSet, SearchProperty, Space64, Verdict,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::{Experiment, Points, ResolvedConfig};
use crate::error::{input, CliError};
use crate::report::{cell, to_value, Outcome, Table};

pub fn run(cfg: &mut ResolvedConfig) -> Result<Outcome, CliError> {
    match cfg.experiment {
        Experiment::Project => project(cfg),
        Experiment::Elementary => elementary(cfg),
        Experiment::Weakconv => weakconv(cfg),
        Experiment::PreimageIdentity => preimage_identity(cfg),
        Experiment::ConvexComplement => convex_complement(cfg),
        Experiment::ConeCover => cone_cover(cfg),
        Experiment::PropertySearch => property_search(cfg),
        Experiment::BookWitness => book_witness(cfg),
        Experiment::Fingerprint => fingerprint_experiment(cfg),
    }
}

fn status(s: &str) -> Value {
    json!({ "status": s })
}

fn summary<const N: usize>(entries: [(&str, Value); N]) -> BTreeMap<String, Value> {
    entries.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProjectParams {
    geodesic: [Point64; 2],
    points: Points,
}

fn project(cfg: &mut ResolvedConfig) -> Result<Outcome, CliError> {
    let p: ProjectParams = cfg.params()?;
    let space = cfg.space;
    let g = space.geodesic(&p.geodesic[0], &p.geodesic[1])?;
    let points = p.points.resolve("points", &space, Some(&p.geodesic[0]), cfg.seed, 0)?;
    let tol = cfg.tolerances;
    let results = points
        .par_iter()
        .map(|z| g.project(z, &tol))
        .collect::<Result<Vec<_>, _>>()?;
    let records: Vec<Value> = points
        .iter()
        .zip(&results)
        .enumerate()
        .map(|(i, (z, r))| {
            json!({
                "index": i,
                "z": z,
                "point": r.point,
                "t": r.t,
                "dist": r.dist,
                "iterations": r.iterations,
                "certified_at_start": r.certified_at_start(),
                "certified_at_end": r.certified_at_end(),
            })
        })
        .collect();
    let table = Table::from_records(
        &["index", "z", "point", "t", "dist", "iterations", "certified_at_start", "certified_at_end"],
        &records,
    )?;
    Ok(Outcome {
        verdict: status("ok"),
        summary: summary([("points", json!(points.len())), ("geodesic_length", json!(g.length()))]),
        traces: Value::Array(records),
        table,
        ..Default::default()
    })
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ElementaryParams {
    x: Point64,
    y: Point64,
    points: Points,
}

fn elementary(cfg: &mut ResolvedConfig) -> Result<Outcome, CliError> {
    let p: ElementaryParams = cfg.params()?;
    let space = cfg.space;
    let tol = cfg.tolerances;
    let points = p.points.resolve("points", &space, Some(&p.x), cfg.seed, 0)?;
    let euclidean = matches!(space, Space64::Euclidean { .. });
    let records = points
        .par_iter()
        .enumerate()
        .map(|(i, z)| -> Result<Value, CliError> {
            let q = in_elementary_set(&space, &p.x, &p.y, z, &tol)?;
            let mut rec = json!({
                "index": i,
                "z": z,
                "membership": q.membership,
                "margin": q.margin,
                "t": q.projection.t,
            });
            if euclidean {
                let h = halfspace_formula_check(&space, &p.x, &p.y, z, &tol)?;
                rec["halfspace_in"] = json!(h.halfspace_in);
                rec["inner"] = json!(h.inner);
                rec["agree"] = json!(h.agree);
            }
            Ok(rec)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let count = |m: Membership| records.iter().filter(|r| r["membership"] == json!(m)).count();
    let mismatches: Vec<Value> = records.iter().filter(|r| r["agree"] == json!(false)).cloned().collect();
    let header: &[&str] = if euclidean {
        &["index", "z", "membership", "margin", "t", "halfspace_in", "inner", "agree"]
    } else {
        &["index", "z", "membership", "margin", "t"]
    };
    Ok(Outcome {
        verdict: status(if !euclidean {
            "ok"
        } else if mismatches.is_empty() {
            "halfspace_agrees"
        } else {
            "halfspace_disagrees"
        }),
        summary: summary([
            ("points", json!(points.len())),
            ("in", json!(count(Membership::In))),
            ("out", json!(count(Membership::Out))),
            ("indeterminate", json!(count(Membership::Indeterminate))),
        ]),
        table: Table::from_records(header, &records)?,
        traces: Value::Array(records),
        unexpected: !mismatches.is_empty(),
        mismatches,
        ..Default::default()
    })
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WeakconvParams {
    candidate: Point64,
    sequence: Points,
    probes: Points,
    epsilon: f64,
}

fn weakconv(cfg: &mut ResolvedConfig) -> Result<Outcome, CliError> {
    let p: WeakconvParams = cfg.params()?;
    let space = cfg.space;
    let tol = cfg.tolerances;
    let seq = p.sequence.resolve("sequence", &space, Some(&p.candidate), cfg.seed, 0)?;
    let probes = p.probes.resolve("probes", &space, Some(&p.candidate), cfg.seed, 1)?;
    let probes = ProbeSet::new(&space, &p.candidate, probes, &tol)?;
    let report = weak_convergence_report(&space, &seq, &p.candidate, &probes, p.epsilon, &tol)?;
    let envelope = report.envelope();
    let mut table = Table::new(&["probe", "index", "value"]);
    for (j, trace) in report.traces.iter().enumerate() {
        for (k, v) in trace.iter().enumerate() {
            table.push(vec![(j + 1).to_string(), (k + 1).to_string(), cell(&json!(v))]);
        }
    }
    for (k, v) in report.strong_trace.iter().enumerate() {
        table.push(vec!["strong".into(), (k + 1).to_string(), cell(&json!(v))]);
    }
    let index = match report.verdict {
        Verdict::ConvergedWithin { index, .. } => json!(index),
        _ => Value::Null,
    };
    Ok(Outcome {
        verdict: to_value(&report.verdict)?,
        traces: json!({
            "candidate": report.candidate,
            "probes": report.probes,
            "projection": report.traces,
            "envelope": envelope,
            "strong": report.strong_trace,
        }),
        summary: summary([
            ("sequence_length", json!(seq.len())),
            ("probes", json!(probes.len())),
            ("index", index),
            ("final_strong_distance", json!(report.strong_trace.last())),
        ]),
        table,
        ..Default::default()
    })
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PreimageParams {
    geodesic: [Point64; 2],
    x: Point64,
    y: Point64,
    samples: Points,
}

fn preimage_identity(cfg: &mut ResolvedConfig) -> Result<Outcome, CliError> {
    let p: PreimageParams = cfg.params()?;
    let space = cfg.space;
    let g = space.geodesic(&p.geodesic[0], &p.geodesic[1])?;
    let samples = p.samples.resolve("samples", &space, Some(&p.x), cfg.seed, 0)?;
    let check = check_preimage_identity(&space, &g, &p.x, &p.y, &samples, &cfg.tolerances)?;
    let mismatches = check.mismatches.iter().map(to_value).collect::<Result<Vec<_>, _>>()?;
    Ok(Outcome {
        verdict: status(if mismatches.is_empty() { "identity_holds" } else { "mismatch" }),
        traces: json!({ "checked": check.checked, "indeterminate": check.indeterminate }),
        summary: summary([
            ("checked", json!(check.checked)),
            ("indeterminate", json!(check.indeterminate)),
            ("mismatches", json!(mismatches.len())),
        ]),
        table: Table::from_records(&["index", "z", "t", "left", "right", "in_u_a_x", "in_u_b_y"], &mismatches)?,
        unexpected: !mismatches.is_empty(),
        mismatches,
        ..Default::default()
    })
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplementParams {
    center: Point64,
    radius: f64,
    x: Point64,
    samples: Points,
}

fn convex_complement(cfg: &mut ResolvedConfig) -> Result<Outcome, CliError> {
    let p: ComplementParams = cfg.params()?;
    let space = cfg.space;
    let body = ConvexBody64::closed_ball(&space, p.center.clone(), p.radius)?;
    let samples = p.samples.resolve("samples", &space, Some(&p.center), cfg.seed, 0)?;
    let check = check_convex_complement(&space, &body, &p.x, &samples, &cfg.tolerances)?;
    let mismatches = check.violations.iter().map(to_value).collect::<Result<Vec<_>, _>>()?;
    Ok(Outcome {
        verdict: status(if mismatches.is_empty() { "inclusion_holds" } else { "violation" }),
        traces: json!({
            "projection": check.projection,
            "checked": check.checked,
            "outside_body": check.outside_body,
            "indeterminate": check.indeterminate,
        }),
        summary: summary([
            ("checked", json!(check.checked)),
            ("outside_body", json!(check.outside_body)),
            ("indeterminate", json!(check.indeterminate)),
            ("violations", json!(mismatches.len())),
        ]),
        table: Table::from_records(&["index", "c", "margin"], &mismatches)?,
        unexpected: !mismatches.is_empty(),
        mismatches,
        ..Default::default()
    })
}

fn default_covering_samples() -> usize {
    CoverOptions::default().covering_samples
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConeCoverParams {
    x: Point64,
    eps: f64,
    /// Covering radius of the default net, as a fraction of `eps`.
    #[serde(default = "default_net_fraction")]
    net_fraction: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    net: Option<Points>,
    testers: Points,
    #[serde(default = "default_covering_samples")]
    covering_samples: usize,
}

fn default_net_fraction() -> f64 {
    0.25
}

fn cone_cover(cfg: &mut ResolvedConfig) -> Result<Outcome, CliError> {
    let p: ConeCoverParams = cfg.params()?;
    let seed = cfg.require_seed("the covering-radius estimate")?;
    let space = cfg.space;
    let net = match &p.net {
        Some(net) => net.resolve("net", &space, Some(&p.x), cfg.seed, 0)?,
        None => ball_net(&space, &p.x, p.eps, p.eps * p.net_fraction)?,
    };
    let testers = p.testers.resolve("testers", &space, Some(&p.x), cfg.seed, 1)?;
    let opts = CoverOptions {
        covering_samples: p.covering_samples,
        seed,
    };
    let cert = cone_cover_certificate(&space, &p.x, p.eps, &net, &testers, &opts, &cfg.tolerances)?;
    let mismatches: Vec<Value> = cert
        .counterexamples
        .iter()
        .map(|&i| json!({ "tester": i, "z": testers[i] }))
        .collect();
    Ok(Outcome {
        verdict: status(if cert.certified() { "certified" } else { "not_certified" }),
        summary: summary([
            ("net_size", json!(cert.net_size)),
            ("covering_radius", json!(cert.covering_radius)),
            ("testers", json!(testers.len())),
            ("expelled", json!(cert.expulsions.len())),
        ]),
        table: Table::from_records(&["tester", "net_index", "midpoint", "net_gap", "margin"], &cert.expulsions)?,
        traces: to_value(&cert.expulsions)?,
        unexpected: !mismatches.is_empty(),
        mismatches,
        ..Default::default()
    })
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SearchParams {
    property: SearchProperty,
    budget: usize,
    /// Whether the space is known to violate the property.
    #[serde(default)]
    expect_witnesses: bool,
}

fn witness_table(witnesses: &[hadamard_weak::Witness64]) -> Table {
    let mut table = Table::new(&["witness", "kind", "name", "value"]);
    for (i, w) in witnesses.iter().enumerate() {
        let kind = cell(&json!(w.kind));
        for (name, p) in &w.points {
            table.push(vec![i.to_string(), kind.clone(), name.clone(), cell(&json!(p))]);
        }
        for (name, v) in &w.values {
            table.push(vec![i.to_string(), kind.clone(), name.clone(), cell(&json!(v))]);
        }
    }
    table
}

fn property_search(cfg: &mut ResolvedConfig) -> Result<Outcome, CliError> {
    let p: SearchParams = cfg.params()?;
    let seed = cfg.require_seed("property search")?;
    let witnesses = search_counterexamples(&cfg.space, p.property, p.budget, seed, &cfg.tolerances)?;
    let found = !witnesses.is_empty();
    Ok(Outcome {
        verdict: json!({
            "status": if found { "witnesses_found" } else { "no_witness" },
            "property": p.property,
            "expected": p.expect_witnesses,
        }),
        traces: Value::Array(vec![]),
        summary: summary([("budget", json!(p.budget)), ("witnesses", json!(witnesses.len()))]),
        table: witness_table(&witnesses),
        unexpected: found && !p.expect_witnesses,
        witnesses,
        ..Default::default()
    })
}

#[derive(Serialize, Deserialize, Clone, Copy, Default)]
#[serde(rename_all = "snake_case")]
enum BookWitnessKind {
    #[default]
    TwNeTg,
    PropertyN,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BookParams {
    #[serde(default)]
    kind: BookWitnessKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    probes: Option<Points>,
}

fn book_witness(cfg: &mut ResolvedConfig) -> Result<Outcome, CliError> {
    let p: BookParams = cfg.params()?;
    let space = cfg.space;
    let tol = cfg.tolerances;
    let witness = match p.kind {
        BookWitnessKind::TwNeTg => {
            let probes = p
                .probes
                .as_ref()
                .ok_or_else(|| input("tw_ne_tg witness needs `probes`"))?;
            let a = vertex_a(&space)?;
            let probes = probes.resolve("probes", &space, Some(&a), cfg.seed, 0)?;
            book_witness_tw_ne_tg(&space, &probes, &tol)?
        }
        BookWitnessKind::PropertyN => {
            if p.probes.is_some() {
                return Err(input("property_n witness takes no probes"));
            }
            book_property_n_witness(&space, &tol)?
        }
    };
    let verified = witness.reverify(&tol)?;
    if !verified {
        return Err(input("witness failed re-verification"));
    }
    let mut verdict = json!({ "status": "witness_found", "kind": witness.kind, "verified": verified });
    if let Ok(n) = witness.get_value("n") {
        verdict["n"] = json!(n);
    }
    let witnesses = vec![witness];
    Ok(Outcome {
        verdict,
        traces: Value::Array(vec![]),
        summary: summary([("witnesses", json!(1))]),
        table: witness_table(&witnesses),
        witnesses,
        ..Default::default()
    })
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FingerprintParams {
    base_set: Points,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    z: Option<Point64>,
    /// `(x, y)` pairs whose projections are checked for separation.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pairs: Vec<[Point64; 2]>,
}

fn fingerprint_experiment(cfg: &mut ResolvedConfig) -> Result<Outcome, CliError> {
    let p: FingerprintParams = cfg.params()?;
    if p.z.is_none() && p.pairs.is_empty() {
        return Err(input("fingerprint needs `z`, `pairs` or both"));
    }
    let space = cfg.space;
    let tol = cfg.tolerances;
    let base = p.base_set.resolve("base_set", &space, p.z.as_ref(), cfg.seed, 0)?;
    let mut table = Table::new(&["kind", "i", "j", "t", "value"]);
    let fp = match &p.z {
        Some(z) => {
            let fp = fingerprint(&space, &base, z, &tol)?;
            for (((i, j), t), v) in fp.geodesics.iter().zip(&fp.params).zip(&fp.values) {
                table.push(vec!["fingerprint".into(), i.to_string(), j.to_string(), cell(&json!(t)), cell(&json!(v))]);
            }
            to_value(&fp)?
        }
        None => Value::Null,
    };
    let records = p
        .pairs
        .par_iter()
        .map(|[x, y]| check_fingerprint_separation(&space, &base, x, y, &tol))
        .collect::<Result<Vec<_>, _>>()?;
    let mut witnesses = Vec::new();
    let mut mismatches = Vec::new();
    for (k, r) in records.iter().enumerate() {
        table.push(vec![
            "separation".into(),
            k.to_string(),
            String::new(),
            cell(&json!(r.separation)),
            cell(&json!(r.r)),
        ]);
        if r.holds {
            witnesses.push(r.to_witness(&space));
        } else {
            mismatches.push(json!({ "pair": k, "record": r }));
        }
    }
    Ok(Outcome {
        verdict: status(if mismatches.is_empty() { "separated" } else { "not_separated" }),
        traces: json!({ "fingerprint": fp, "separations": records }),
        summary: summary([
            ("base_points", json!(base.len())),
            ("pairs", json!(p.pairs.len())),
            ("separated", json!(witnesses.len())),
        ]),
        table,
        unexpected: !mismatches.is_empty(),
        witnesses,
        mismatches,
    })
}
