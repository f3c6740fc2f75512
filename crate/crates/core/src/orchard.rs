//! Collinear-triple hypergraph statistics and the dense-orchard core.

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::arith::rational::{self, Rational};
use crate::certificate::Certificate;
use crate::geometry::{enumerate_lines, GeometryError, LineStats, PointSet};
use crate::visibility::{max_visible_clique, VisibilityError, VisibilityGraph};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OrchardError {
    #[error("at least 3 points are required, got {0}")]
    TooFewPoints(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("clique search exceeded its budget below size {l}; best found {best}")]
    CliqueBudgetExceeded { best: usize, l: usize },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

fn choose2(t: u64) -> u64 {
    t * t.saturating_sub(1) / 2
}

fn choose3(t: u64) -> u64 {
    t * t.saturating_sub(1) * t.saturating_sub(2) / 6
}

/// Collinear triples counted through line classes.
#[derive(Clone, Debug, Serialize)]
pub struct TripleHypergraph {
    pub n: usize,
    pub rich_lines: usize,
    pub degrees: Vec<u64>,
    pub triples: u64,
}

pub fn triple_stats(a: &PointSet) -> Result<TripleHypergraph, OrchardError> {
    if a.len() < 3 {
        return Err(OrchardError::TooFewPoints(a.len()));
    }
    let stats = enumerate_lines(a)?;
    Ok(triple_stats_with(&stats))
}

pub fn triple_stats_with(stats: &LineStats) -> TripleHypergraph {
    let mut degrees = vec![0u64; stats.n];
    let mut triples = 0;
    for line in stats.rich_lines.values() {
        let t = line.len() as u64;
        triples += choose3(t);
        for &p in line {
            degrees[p] += choose2(t - 1);
        }
    }
    assert_eq!(degrees.iter().sum::<u64>(), 3 * triples, "hyperdegree sum must be three times the triple count");
    TripleHypergraph { n: stats.n, rich_lines: stats.rich_count(), degrees, triples }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GuaranteeStatus {
    Applicable,
    NotApplicable,
    Violated,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrchardCore {
    pub n: usize,
    pub k: usize,
    pub l: usize,
    #[serde(serialize_with = "rational::serde_str::serialize")]
    pub delta: Rational,
    pub d_k: u64,
    #[serde(serialize_with = "rational::serde_str::serialize")]
    pub threshold: Rational,
    pub survivors: Vec<usize>,
    pub deletion_order: Vec<usize>,
    /// Hyperdegree within the core, per survivor.
    pub degrees: Vec<u64>,
    /// 3-rich lines within the core through each survivor.
    pub rich_line_counts: Vec<usize>,
    pub triples: u64,
    pub status: Option<GuaranteeStatus>,
}

/// `1 / (12 (l - 1))`.
pub fn orchard_delta(l: usize) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(12 * (l as u64 - 1)))
}

/// `C(k - 2, 2)`.
pub fn orchard_d_k(k: usize) -> u64 {
    choose2(k as u64 - 2)
}

/// Deletes the smallest-index vertex of hyperdegree below `delta n / 2`
/// until none remains, with `n` the original size.
pub fn orchard_core(a: &PointSet, k: usize, l: usize) -> Result<OrchardCore, OrchardError> {
    if k < 4 || l < 2 {
        return Err(OrchardError::InvalidParameter("k >= 4 and l >= 2 are required".into()));
    }
    let stats = enumerate_lines(a)?;
    Ok(orchard_core_with(&stats, k, l))
}

pub fn orchard_core_with(stats: &LineStats, k: usize, l: usize) -> OrchardCore {
    let n = stats.n;
    let delta = orchard_delta(l);
    let threshold = &delta * rational::int(n as i64) / rational::int(2);
    let lines: Vec<&Vec<usize>> = stats.rich_lines.values().collect();
    let mut through: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (li, line) in lines.iter().enumerate() {
        for &p in line.iter() {
            through[p].push(li);
        }
    }
    let mut size: Vec<u64> = lines.iter().map(|line| line.len() as u64).collect();
    let mut alive = vec![true; n];
    let mut degree: Vec<u64> = (0..n).map(|p| through[p].iter().map(|&li| choose2(size[li] - 1)).sum()).collect();
    let mut triples: u64 = size.iter().map(|&t| choose3(t)).sum();
    let below = |d: u64| rational::int(d as i64) < threshold;
    let mut deletion_order = Vec::new();
    while let Some(p) = (0..n).find(|&p| alive[p] && below(degree[p])) {
        alive[p] = false;
        deletion_order.push(p);
        for &li in &through[p] {
            let t = size[li];
            triples -= choose2(t - 1);
            for &q in lines[li] {
                if alive[q] {
                    degree[q] -= t.saturating_sub(2);
                }
            }
            size[li] = t - 1;
        }
        degree[p] = 0;
        debug_assert_eq!((0..n).filter(|&q| alive[q]).map(|q| degree[q]).sum::<u64>(), 3 * triples);
    }
    let survivors: Vec<usize> = (0..n).filter(|&p| alive[p]).collect();
    let rich_line_counts = survivors.iter().map(|&p| through[p].iter().filter(|&&li| size[li] >= 3).count()).collect();
    OrchardCore {
        n,
        k,
        l,
        delta,
        d_k: orchard_d_k(k),
        threshold,
        degrees: survivors.iter().map(|&p| degree[p]).collect(),
        survivors,
        deletion_order,
        rich_line_counts,
        triples,
        status: None,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OrchardVerification {
    pub status: GuaranteeStatus,
    pub max_collinear: usize,
    /// Size of a visible clique found, and whether it is maximum.
    pub visible_clique: usize,
    pub clique_exact: bool,
    #[serde(serialize_with = "rational::serde_str::serialize")]
    pub size_bound: Rational,
    #[serde(serialize_with = "rational::serde_str::serialize")]
    pub incidence_bound: Rational,
    pub certificates: Vec<Certificate>,
}

/// Recounts the core from scratch and, when the hypotheses hold, checks
/// `|A'| >= n / (8 (l-1) D_k)` and per-point incidence `>= n / (24 (l-1) D_k)`.
pub fn verify_orchard_guarantees(
    core: &mut OrchardCore,
    a: &PointSet,
    clique_budget: u64,
) -> Result<OrchardVerification, OrchardError> {
    let (n, k, l) = (core.n, core.k, core.l);
    let stats = enumerate_lines(a)?;
    let mut certs = Vec::new();

    let sub = a.subset(&core.survivors);
    let sub_stats = if sub.len() < 2 { None } else { Some(enumerate_lines(&sub)?) };
    let recount = match &sub_stats {
        Some(s) => triple_stats_with(s),
        None => TripleHypergraph { n: sub.len(), rich_lines: 0, degrees: vec![0; sub.len()], triples: 0 },
    };
    let threshold_ok = recount.degrees.iter().all(|&d| rational::int(d as i64) >= core.threshold);
    certs.push(Certificate::new(
        "survivor degrees >= delta n / 2",
        threshold_ok && recount.degrees == core.degrees,
        format!("{} survivors, threshold {}", core.survivors.len(), core.threshold),
    ));
    let mut counts = vec![0usize; sub.len()];
    for line in sub_stats.iter().flat_map(|s| s.rich_lines.values()) {
        for &p in line {
            counts[p] += 1;
        }
    }
    certs.push(Certificate::new("rich-line counts recounted", counts == core.rich_line_counts, ""));

    let d = Rational::from_integer(BigInt::from((l as u64 - 1) * core.d_k.max(1)));
    let nn = rational::int(n as i64);
    let size_bound = &nn / (rational::int(8) * &d);
    let incidence_bound = &nn / (rational::int(24) * &d);

    let max_collinear = stats.max_collinear();
    let g = VisibilityGraph::from_lines(a, &stats);
    let (visible_clique, clique_exact) = match max_visible_clique(&g, clique_budget) {
        Ok(c) => (c.len(), true),
        Err(VisibilityError::BudgetExceeded { best }) if best.len() >= l => (best.len(), false),
        Err(VisibilityError::BudgetExceeded { best }) => {
            return Err(OrchardError::CliqueBudgetExceeded { best: best.len(), l })
        }
        Err(e) => unreachable!("{e}"),
    };
    let hypotheses = max_collinear < k && visible_clique < l && n >= 4 * (l - 1);
    let status = if !hypotheses {
        GuaranteeStatus::NotApplicable
    } else {
        let size_ok = rational::int(core.survivors.len() as i64) >= size_bound;
        let incidence_ok = counts.iter().all(|&c| rational::int(c as i64) >= incidence_bound);
        certs.push(Certificate::new(
            "|A'| >= n / (8 (l-1) D_k)",
            size_ok,
            format!("{} >= {size_bound}", core.survivors.len()),
        ));
        certs.push(Certificate::new(
            "rich-line incidence >= n / (24 (l-1) D_k)",
            incidence_ok,
            format!("min {} >= {incidence_bound}", counts.iter().min().copied().unwrap_or(0)),
        ));
        if size_ok && incidence_ok {
            GuaranteeStatus::Applicable
        } else {
            GuaranteeStatus::Violated
        }
    };
    core.status = Some(status);
    Ok(OrchardVerification { status, max_collinear, visible_clique, clique_exact, size_bound, incidence_bound, certificates: certs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::rat;
    use crate::generators::{gen_cubic_power, gen_grid, gen_random_general};
    use crate::geometry::Point;

    #[test]
    fn small_triples() {
        let h = triple_stats(&gen_cubic_power(2)).unwrap();
        assert_eq!(h.triples, 2);
        assert_eq!(h.degrees, vec![1, 1, 2, 1, 1]);
        let line = PointSet::new((0..5).map(|i| Point::int(i, 2 * i)).collect(), None).unwrap();
        assert_eq!(triple_stats(&line).unwrap().triples, 10);
        assert_eq!(triple_stats(&gen_random_general(8, 50, 1).unwrap()).unwrap().triples, 0);
    }

    #[test]
    fn constants() {
        assert_eq!(orchard_delta(4), rat(1, 36));
        assert_eq!(orchard_d_k(4), 1);
        assert_eq!(orchard_d_k(6), 6);
    }

    #[test]
    fn empty_core_without_triples() {
        let a = gen_random_general(12, 50, 2).unwrap();
        let core = orchard_core(&a, 4, 4).unwrap();
        assert!(core.survivors.is_empty());
        assert_eq!(core.deletion_order, (0..12).collect::<Vec<_>>());
        let mut core = core;
        let v = verify_orchard_guarantees(&mut core, &a, 100_000).unwrap();
        assert!(v.certificates[0].passed);
    }

    #[test]
    fn grid_is_applicable() {
        let a = gen_grid(4, 4).unwrap();
        let mut core = orchard_core(&a, 5, 5).unwrap();
        let v = verify_orchard_guarantees(&mut core, &a, 100_000).unwrap();
        assert_eq!(v.visible_clique, 4);
        assert_eq!(v.status, GuaranteeStatus::Applicable, "{:?}", v.certificates);
        assert!(v.certificates.iter().all(|c| c.passed));
    }

    #[test]
    fn cubic_power_not_applicable() {
        let a = gen_cubic_power(6);
        let mut core = orchard_core(&a, 4, 4).unwrap();
        let v = verify_orchard_guarantees(&mut core, &a, 100_000).unwrap();
        assert_eq!(v.status, GuaranteeStatus::NotApplicable);
        assert!(v.certificates.iter().all(|c| c.passed));
    }
}
