use std::collections::BTreeMap;
use std::path::Path;

use cubvis::arith::rational::rat;
use cubvis::certificate::{all_passed, Certificate};
use cubvis::container::{
    ambient_container_check, cubic_container_with, fit_cubic, turan_identities_with, DEFAULT_CLIQUE_BUDGET,
    DEFAULT_FIT_TRIALS,
};
use cubvis::cubic::classify;
use cubvis::generators::GeneratorSpec;
use cubvis::geometry::{enumerate_lines, orient, LineStats, PointSet};
use cubvis::orchard::{orchard_core_with, verify_orchard_guarantees, GuaranteeStatus};
use cubvis::patches::{decompose_cubic, Assignment};
use cubvis::visibility::{max_visible_clique, VisibilityError, VisibilityGraph};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::{CliError, Outcome};

fn domain(e: impl std::fmt::Display) -> CliError {
    CliError::Domain(e.to_string())
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("results serialize")
}

fn budget(cfg: &RunConfig) -> u64 {
    cfg.clique_budget.unwrap_or(DEFAULT_CLIQUE_BUDGET)
}

fn lines(a: &PointSet) -> Result<LineStats, CliError> {
    enumerate_lines(a).map_err(domain)
}

/// Compares the line-class visibility graph with a direct scan and rechecks every witness.
fn visibility_recomputed(a: &PointSet, g: &VisibilityGraph) -> Certificate {
    let naive = VisibilityGraph::naive(a);
    let same = g.same_adjacency(&naive);
    Certificate::new("visibility adjacency recomputed", same && g.recertify(a), format!("{} edges", g.edge_count()))
}

/// Maximum clique by exhaustive search over subsets; only for small graphs.
pub fn brute_force_clique(g: &VisibilityGraph) -> usize {
    let n = g.n();
    let adj: Vec<u32> = (0..n).map(|i| (0..n).filter(|&j| g.adjacent(i, j)).fold(0u32, |m, j| m | (1 << j))).collect();
    let mut best = 0;
    for mask in 1u32..(1u32 << n) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let ok = (0..n).filter(|&i| mask & (1 << i) != 0).all(|i| (mask & !(1 << i)) & !adj[i] == 0);
        if ok {
            best = size;
        }
    }
    best
}

pub fn run(command: &str, cfg: &RunConfig) -> Result<Outcome, CliError> {
    match command {
        "generate" => generate(cfg),
        "analyze" => analyze(cfg),
        "classify-cubic" => classify_cubic(cfg),
        "patches" => patches(cfg),
        "container" => container(cfg),
        "turan" => turan(cfg),
        "orchard" => orchard(cfg),
        "fit-cubic" => fit(cfg),
        "ambient-check" => ambient(cfg),
        "verify-all" => verify_all(cfg),
        other => Err(CliError::Usage(format!("unknown command {other:?}"))),
    }
}

fn generate(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let spec = cfg.generator.as_ref().ok_or_else(|| CliError::Usage("--kind or a generator config is required".into()))?;
    let a = cfg.points()?;
    let stats = lines(&a)?;
    let mut certs = Vec::new();
    match spec {
        GeneratorSpec::OneBlocker { .. } => {
            certs.push(Certificate::new("no four collinear", stats.max_collinear() <= 3, format!("max {}", stats.max_collinear())));
        }
        GeneratorSpec::CubicPower { .. } => {
            let rule = (0..a.len()).all(|i| {
                (i + 1..a.len()).all(|j| {
                    (j + 1..a.len()).all(|k| {
                        let collinear = orient(a.get(i), a.get(j), a.get(k)) == 0;
                        let sum = &a.get(i).x + &a.get(j).x + &a.get(k).x;
                        collinear == num_traits::Zero::is_zero(&sum)
                    })
                })
            });
            certs.push(Certificate::new("collinear exactly when parameters sum to zero", rule, ""));
        }
        GeneratorSpec::EllipticCoset { a: ca, b: cb, .. } => {
            let on = a.points().iter().all(|p| &p.y * &p.y == &p.x * &p.x * &p.x + ca * &p.x + cb);
            certs.push(Certificate::new("points on the curve", on, ""));
        }
        GeneratorSpec::RandomGeneral { .. } => {
            certs.push(Certificate::new("no three collinear", stats.max_collinear() <= 2, ""));
        }
        GeneratorSpec::Grid { .. } => {}
    }
    Ok(Outcome { results: to_value(&a), certificates: certs })
}

fn analyze(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let a = cfg.points()?;
    let stats = lines(&a)?;
    let g = VisibilityGraph::from_lines(&a, &stats);
    let mut certs = vec![visibility_recomputed(&a, &g)];
    let (clique, exact) = match max_visible_clique(&g, budget(cfg)) {
        Ok(c) => (c, true),
        Err(VisibilityError::BudgetExceeded { best }) => (best, false),
        Err(e) => return Err(domain(e)),
    };
    if exact && a.len() <= 18 {
        let brute = brute_force_clique(&g);
        certs.push(Certificate::new("maximum clique matches exhaustive search", brute == clique.len(), format!("{} vs {brute}", clique.len())));
    }
    let results = json!({
        "n": a.len(),
        "lines": to_value(&stats),
        "max_collinear": stats.max_collinear(),
        "edges": g.edge_count(),
        "max_visible_clique": clique,
        "clique_exact": exact,
    });
    Ok(Outcome { results, certificates: certs })
}

fn classify_cubic(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let f = cfg.cubic()?;
    let c = classify(&f);
    let mut certs = Vec::new();
    if let Some(product) = c.product() {
        certs.push(Certificate::new("components multiply back to the cubic", product.proportional_to(f.form()), ""));
    }
    let results = json!({
        "cubic": to_value(&f),
        "classification": to_value(&c),
        "hessian": f.hessian().to_string(),
    });
    Ok(Outcome { results, certificates: certs })
}

fn patches(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let f = cfg.cubic()?;
    let dec = decompose_cubic(&f, cfg.chart.unwrap_or_default()).map_err(domain)?;
    let e = &dec.exceptional;
    let fa = dec.chart_equation();
    let width = rat(1, 1 << 20);
    let mut certs = vec![
        Certificate::new("exceptional set size <= 13", e.total() <= 13, format!("{}", e.total())),
        Certificate::new("patch count <= 15", dec.patch_count() <= 15, format!("{}", dec.patch_count())),
        Certificate::new(
            "affine exceptional points lie on the curve",
            e.affine().iter().all(|(_, p)| p.certify(&[fa], &width)),
            "",
        ),
    ];
    let mut assignments = Vec::new();
    if cfg.input.is_some() || cfg.generator.is_some() {
        let a = cfg.points()?;
        let assigned: Vec<Assignment> = a.points().iter().map(|p| dec.assign_point(p)).collect();
        let mut by_patch: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, s) in assigned.iter().enumerate() {
            if let Assignment::Patch(p) = s {
                by_patch.entry(*p).or_default().push(i);
            }
        }
        for (p, pts) in &by_patch {
            let mut empty = true;
            let mut checked = 0;
            for (s, &i) in pts.iter().enumerate() {
                for &j in &pts[s + 1..] {
                    let cert = dec.certify_patch_chord(*p, a.get(i), a.get(j)).map_err(domain)?;
                    empty &= cert.empty;
                    checked += 1;
                }
            }
            certs.push(Certificate::new(format!("patch {p} chords miss the curve"), empty, format!("{checked} chords")));
        }
        assignments = assigned;
    }
    let results = json!({
        "decomposition": to_value(&dec),
        "assignments": to_value(&assignments),
    });
    Ok(Outcome { results, certificates: certs })
}

fn container(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let a = cfg.points()?;
    let f = cfg.cubic()?;
    let r = cubic_container_with(&a, &f, cfg.k()?, budget(cfg)).map_err(domain)?;
    let stats = lines(&a)?;
    let mut certs = r.certificates.clone();
    certs.push(visibility_recomputed(&a, &VisibilityGraph::from_lines(&a, &stats)));
    Ok(Outcome { results: to_value(&r), certificates: certs })
}

fn turan(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let a = cfg.points()?;
    let stats = lines(&a)?;
    let r = turan_identities_with(&a, &stats, budget(cfg)).map_err(domain)?;
    let mut certs = r.certificates.clone();
    certs.push(visibility_recomputed(&a, &VisibilityGraph::from_lines(&a, &stats)));
    Ok(Outcome { results: to_value(&r), certificates: certs })
}

fn orchard(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let a = cfg.points()?;
    let (k, l) = (cfg.k.unwrap_or(4), cfg.l.unwrap_or(4));
    if k < 4 || l < 2 {
        return Err(CliError::Usage("orchard needs k >= 4 and l >= 2".into()));
    }
    if a.len() < 3 {
        return Err(CliError::Usage("orchard needs at least 3 points".into()));
    }
    let stats = lines(&a)?;
    let mut core = orchard_core_with(&stats, k, l);
    let v = verify_orchard_guarantees(&mut core, &a, budget(cfg)).map_err(domain)?;
    let mut certs = v.certificates.clone();
    certs.push(Certificate::new("guarantees not violated", v.status != GuaranteeStatus::Violated, format!("{:?}", v.status)));
    Ok(Outcome { results: json!({ "core": to_value(&core), "verification": to_value(&v) }), certificates: certs })
}

fn fit(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let a = cfg.points()?;
    let r = fit_cubic(&a, cfg.trials.unwrap_or(DEFAULT_FIT_TRIALS), cfg.seed.unwrap_or(0)).map_err(domain)?;
    let fa = r.cubic.affine();
    let recount: Vec<usize> = (0..a.len()).filter(|&i| !num_traits::Zero::is_zero(&fa.eval(&a.get(i).x, &a.get(i).y))).collect();
    let certs = vec![Certificate::new("off-curve points recounted", recount == r.off_curve, format!("s = {}", r.s))];
    Ok(Outcome { results: to_value(&r), certificates: certs })
}

fn ambient(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let a = cfg.points()?;
    let f = cfg.cubic()?;
    let patch = cfg.patch.ok_or_else(|| CliError::Usage("--patch is required".into()))?;
    let alpha = RunConfig::rational(&cfg.alpha, "alpha")?;
    let beta = RunConfig::rational(&cfg.beta, "beta")?;
    let r = ambient_container_check(&a, &f, patch, &alpha, &beta).map_err(domain)?;
    let certs = vec![
        Certificate::new("patch holds at least alpha n points", r.dense, format!("{} of {}", r.patch_points.len(), r.n)),
        Certificate::new("at most beta m external blockers", r.sparse_blockers, format!("{}", r.external_blockers.len())),
    ];
    Ok(Outcome { results: to_value(&r), certificates: certs })
}

#[derive(Serialize)]
struct InstanceSummary {
    file: String,
    command: String,
    passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    certificates: Vec<Certificate>,
    results: Value,
}

fn verify_all(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let dir = cfg.suite.as_ref().ok_or_else(|| CliError::Usage("--suite is required".into()))?;
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .map_err(|e| CliError::Input(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    let mut instances = Vec::new();
    for path in &files {
        let inst = RunConfig::load(path)?;
        let command = inst
            .command
            .clone()
            .ok_or_else(|| CliError::Input(format!("{}: missing \"command\"", path.display())))?;
        if command == "verify-all" {
            return Err(CliError::Input(format!("{}: nested verify-all", path.display())));
        }
        instances.push((path.clone(), command, inst));
    }
    if instances.is_empty() {
        eprintln!("warning: suite {} contains no instances", dir.display());
    }
    let mut summaries = Vec::new();
    let mut certs = Vec::new();
    for (path, command, inst) in &instances {
        let file = file_name(path);
        let summary = match run(command, inst) {
            Ok(o) => InstanceSummary {
                file: file.clone(),
                command: command.clone(),
                passed: all_passed(&o.certificates),
                error: None,
                certificates: o.certificates,
                results: o.results,
            },
            Err(e @ (CliError::Usage(_) | CliError::Input(_))) => {
                return Err(CliError::Input(format!("{}: {e}", path.display())))
            }
            Err(e) => InstanceSummary {
                file: file.clone(),
                command: command.clone(),
                passed: false,
                error: Some(e.to_string()),
                certificates: vec![Certificate::new("ran without error", false, e.to_string())],
                results: Value::Null,
            },
        };
        certs.extend(summary.certificates.iter().map(|c| Certificate::new(format!("{file}: {}", c.name), c.passed, c.detail.clone())));
        summaries.push(summary);
    }
    Ok(Outcome { results: json!({ "instances": to_value(&summaries) }), certificates: certs })
}

fn file_name(p: &Path) -> String {
    p.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}
