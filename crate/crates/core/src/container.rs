//! Clique covers of point sets that lie mostly on a cubic, the
//! ordinary-line identities, cubic fitting and the ambient blocker check.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::rational::{self, Rational};
use crate::certificate::{all_passed, Certificate};
use crate::cubic::{classify, Chart, ConicForm, CubicClassification, Form, HomogeneousCubic, MONOMIALS};
use crate::geometry::{enumerate_lines, GeometryError, LineStats, PointSet};
use crate::patches::{decompose_cubic, Assignment, PatchError};
use crate::visibility::{
    blocker_colouring_cover_with, blocker_set_with, certify_cover, max_visible_clique, CliqueCover, VisibilityError,
    VisibilityGraph,
};

pub const DEFAULT_CLIQUE_BUDGET: u64 = 200_000;
pub const DEFAULT_FIT_TRIALS: u64 = 200;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ContainerError {
    #[error("the cubic is a union of three lines")]
    ThreeLinesExcluded,
    #[error("only {m} points on the cubic; more than {needed} required")]
    TooFewOnCubic { m: usize, needed: usize },
    #[error("the cubic is neither irreducible nor a line times a conic: {0}")]
    NotIrreducibleOrDecomposable(String),
    #[error("{max_collinear} collinear points; fewer than k = {k} required")]
    TooManyCollinear { max_collinear: usize, k: usize },
    #[error("four or more collinear points ({0})")]
    NoFourCollinearRequired(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("patch {0} does not exist")]
    UnknownPatch(usize),
    #[error("at least 10 points are needed to fit a cubic, got {0}")]
    TooFewToFit(usize),
    #[error("no sample determined a unique cubic ({degenerate} degenerate samples)")]
    NoneFound { degenerate: u64 },
    #[error(transparent)]
    Patch(#[from] PatchError),
    #[error(transparent)]
    Visibility(#[from] VisibilityError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// `max{1, min((n-s-(k-1))/(s+k), (n-s-13)/(15(s+1)))}`.
pub fn bound_formula(n: u64, s: u64, k: u64) -> Rational {
    let (n, s, k) = (BigInt::from(n), BigInt::from(s), BigInt::from(k));
    let first = Rational::new(&n - &s - (&k - 1), &s + &k);
    let second = Rational::new(&n - &s - 13, (&s + 1) * 15);
    rational::max(&Rational::one(), &rational::min(&first, &second))
}

/// `1 / (4 (l - 1) C(k - 1, 2))`.
pub fn triple_density_k(k: u64, l: u64) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(4 * (l - 1)) * rational::binomial(k - 1, 2))
}

/// `1 / (8 (l - 1) C(d, 2))`.
pub fn triple_density_d(d: u64, l: u64) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(8 * (l - 1)) * rational::binomial(d, 2))
}

/// Pairs of an `N`-point set on an irreducible curve of degree at most `d`
/// that a single off-curve point can block.
pub fn external_pair_bound(d: u64, big_n: u64) -> Rational {
    Rational::new(BigInt::from((d - 1) * big_n), BigInt::from(2))
}

fn sizes(parts: &[Vec<usize>]) -> usize {
    parts.iter().map(Vec::len).max().unwrap_or(0)
}

#[derive(Clone, Debug, Serialize)]
pub struct PatchCover {
    pub patch: usize,
    pub points: Vec<usize>,
    pub blockers: Vec<usize>,
    pub parts: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ContainerReport {
    pub classification: String,
    pub n: usize,
    pub s: usize,
    pub m: usize,
    /// Points on the line but not on the conic.
    pub a: Option<usize>,
    pub k: usize,
    pub chart: Option<Chart>,
    #[serde(serialize_with = "rational::serde_str::serialize")]
    pub lambda: Rational,
    pub off_curve: Vec<usize>,
    pub exceptional_points: Vec<usize>,
    pub patch_covers: Vec<PatchCover>,
    pub cover: CliqueCover,
    pub cover_bound_claimed: usize,
    #[serde(serialize_with = "rational::serde_str::serialize")]
    pub omega_lower_bound: Rational,
    pub realized_clique: Vec<usize>,
    pub clique_exact: bool,
    pub certificates: Vec<Certificate>,
}

impl ContainerReport {
    pub fn passed(&self) -> bool {
        all_passed(&self.certificates)
    }
}

pub fn cubic_container(a: &PointSet, f: &HomogeneousCubic, k: usize) -> Result<ContainerReport, ContainerError> {
    cubic_container_with(a, f, k, DEFAULT_CLIQUE_BUDGET)
}

pub fn cubic_container_with(
    a: &PointSet,
    f: &HomogeneousCubic,
    k: usize,
    clique_budget: u64,
) -> Result<ContainerReport, ContainerError> {
    if k < 2 {
        return Err(ContainerError::InvalidParameter("k must be at least 2".into()));
    }
    let stats = enumerate_lines(a)?;
    if stats.max_collinear() >= k {
        return Err(ContainerError::TooManyCollinear { max_collinear: stats.max_collinear(), k });
    }
    let on: Vec<usize> = (0..a.len()).filter(|&i| f.contains(a.get(i))).collect();
    let off_curve: Vec<usize> = (0..a.len()).filter(|&i| !f.contains(a.get(i))).collect();
    let (n, m, s) = (a.len(), on.len(), off_curve.len());
    let class = classify(f);
    match &class {
        CubicClassification::ThreeLines { .. } => return Err(ContainerError::ThreeLinesExcluded),
        CubicClassification::Unclassified { reason } => {
            return Err(ContainerError::NotIrreducibleOrDecomposable(reason.clone()))
        }
        _ => {}
    }
    if m <= 3 * (k - 1) {
        return Err(ContainerError::TooFewOnCubic { m, needed: 3 * (k - 1) });
    }
    let g = VisibilityGraph::from_lines(a, &stats);
    let off: BTreeSet<usize> = off_curve.iter().copied().collect();
    let mut certs = Vec::new();
    let mut report = ContainerReport {
        classification: class.tag().to_string(),
        n,
        s,
        m,
        a: None,
        k,
        chart: None,
        lambda: Rational::zero(),
        off_curve: off_curve.clone(),
        exceptional_points: Vec::new(),
        patch_covers: Vec::new(),
        cover: CliqueCover::singletons(&[]),
        cover_bound_claimed: 0,
        omega_lower_bound: bound_formula(n as u64, s as u64, k as u64),
        realized_clique: Vec::new(),
        clique_exact: false,
        certificates: Vec::new(),
    };

    let mut parts: Vec<Vec<usize>> = Vec::new();
    match &class {
        CubicClassification::LineConic { conic, .. } => {
            let (conic_part, line_part) = split_line_conic(a, &on, conic);
            let cover = blocker_colouring_cover_with(a, &g, Some(&stats), &conic_part)?;
            let blockers = blocker_set_with(a, Some(&stats), &conic_part);
            let allowed = blockers.indices.iter().all(|r| off.contains(r) || line_part.contains(r));
            certs.push(Certificate::new(
                "conic blockers off the conic",
                allowed,
                format!("{} blockers", blockers.b),
            ));
            let la = line_part.len();
            certs.push(Certificate::new(
                "conic parts <= s + a + 1",
                cover.len() <= s + la + 1,
                format!("{} parts, s = {s}, a = {la}", cover.len()),
            ));
            report.patch_covers.push(PatchCover {
                patch: 0,
                points: conic_part.clone(),
                blockers: blockers.indices.iter().copied().collect(),
                parts: cover.len(),
            });
            parts.extend(cover.parts);
            parts.extend(line_part.iter().map(|&i| vec![i]));
            report.a = Some(la);
            report.cover_bound_claimed = s + 2 * la + 1;
        }
        CubicClassification::Irreducible => {
            let dec = decompose_cubic(f, Chart::Sheared)?;
            report.chart = Some(dec.chart());
            report.lambda = dec.lambda().clone();
            let mut by_patch: Vec<Vec<usize>> = vec![Vec::new(); dec.patch_count()];
            for &i in &on {
                match dec.assign_point(a.get(i)) {
                    Assignment::Patch(p) => by_patch[p].push(i),
                    Assignment::Exceptional(_) => report.exceptional_points.push(i),
                    Assignment::NotOnCurve => {
                        return Err(ContainerError::Patch(PatchError::InconsistentExceptionalSet(format!(
                            "point {i} lies on the cubic but not on its chart curve"
                        ))))
                    }
                }
            }
            for (p, pts) in by_patch.iter().enumerate() {
                if pts.is_empty() {
                    continue;
                }
                let cover = blocker_colouring_cover_with(a, &g, Some(&stats), pts)?;
                let blockers = blocker_set_with(a, Some(&stats), pts);
                certs.push(Certificate::new(
                    format!("patch {p} blockers off the cubic"),
                    blockers.indices.is_subset(&off),
                    format!("{} blockers", blockers.b),
                ));
                certs.push(Certificate::new(
                    format!("patch {p} parts <= s + 1"),
                    cover.len() <= s + 1,
                    format!("{} parts", cover.len()),
                ));
                report.patch_covers.push(PatchCover {
                    patch: p,
                    points: pts.clone(),
                    blockers: blockers.indices.iter().copied().collect(),
                    parts: cover.len(),
                });
                parts.extend(cover.parts);
            }
            parts.extend(report.exceptional_points.iter().map(|&i| vec![i]));
            report.cover_bound_claimed = 15 * (s + 1) + 13;
        }
        _ => unreachable!(),
    }

    let mut cover = CliqueCover { scope: on.clone(), parts, certified: false, b: s };
    cover.certified = certify_cover(a, &cover);
    certs.push(Certificate::new("cover recertified", cover.certified, format!("{} parts over {m} points", cover.len())));
    certs.push(Certificate::new(
        "cover size bound",
        cover.len() <= report.cover_bound_claimed,
        format!("{} <= {}", cover.len(), report.cover_bound_claimed),
    ));

    let (mut clique, exact) = match max_visible_clique(&g, clique_budget) {
        Ok(c) => (c, true),
        Err(VisibilityError::BudgetExceeded { best }) => (best, false),
        Err(e) => return Err(e.into()),
    };
    if !exact && sizes(&cover.parts) > clique.len() {
        clique = cover.parts.iter().max_by_key(|p| p.len()).cloned().unwrap_or_default();
        clique.sort_unstable();
    }
    let target = rational::ceil_to_u64(&report.omega_lower_bound) as usize;
    let is_clique = clique.iter().enumerate().all(|(s, &i)| clique[s + 1..].iter().all(|&j| g.adjacent(i, j)));
    certs.push(Certificate::new(
        "realized clique >= ceil(bound)",
        is_clique && clique.len() >= target,
        format!("{} >= {target}", clique.len()),
    ));
    report.realized_clique = clique;
    report.clique_exact = exact;
    report.cover = cover;
    report.certificates = certs;
    Ok(report)
}

/// Conic points (including the points where line and conic meet) and the remaining line points.
fn split_line_conic(a: &PointSet, on: &[usize], conic: &ConicForm) -> (Vec<usize>, Vec<usize>) {
    on.iter().partition(|&&i| conic.eval_affine(a.get(i)).is_zero())
}

#[derive(Clone, Debug, Serialize)]
pub struct TuranReport {
    pub n: usize,
    pub t2: usize,
    pub t3: usize,
    pub e: usize,
    pub pairs: u64,
    pub max_visible_clique: Option<usize>,
    pub certificates: Vec<Certificate>,
}

impl TuranReport {
    pub fn passed(&self) -> bool {
        all_passed(&self.certificates)
    }
}

/// Checks `C(n,2) = t2 + 3 t3`, `e = t2 + 2 t3`, `t2 = 3e - 2 C(n,2)` and,
/// without a visible 4-clique, `t2 <= n`.
pub fn turan_identities(a: &PointSet, clique_budget: u64) -> Result<TuranReport, ContainerError> {
    let stats = enumerate_lines(a)?;
    turan_identities_with(a, &stats, clique_budget)
}

pub fn turan_identities_with(a: &PointSet, stats: &LineStats, clique_budget: u64) -> Result<TuranReport, ContainerError> {
    if stats.max_collinear() > 3 {
        return Err(ContainerError::NoFourCollinearRequired(stats.max_collinear()));
    }
    let g = VisibilityGraph::from_lines(a, stats);
    let n = a.len();
    let (t2, t3, e) = (stats.t2, stats.t3(), g.edge_count());
    let pairs = (n * n.saturating_sub(1) / 2) as u64;
    let mut certs = vec![
        Certificate::new("C(n,2) = t2 + 3 t3", pairs == (t2 + 3 * t3) as u64, format!("{pairs} = {t2} + 3*{t3}")),
        Certificate::new("e = t2 + 2 t3", e == t2 + 2 * t3, format!("{e} = {t2} + 2*{t3}")),
        Certificate::new(
            "t2 = 3e - 2 C(n,2)",
            t2 as i64 == 3 * e as i64 - 2 * pairs as i64,
            format!("{t2} = 3*{e} - 2*{pairs}"),
        ),
    ];
    let omega = max_visible_clique(&g, clique_budget).ok().map(|c| c.len());
    if let Some(w) = omega {
        if w < 4 {
            certs.push(Certificate::new("t2 <= n", t2 <= n, format!("{t2} <= {n}")));
        }
    }
    Ok(TuranReport { n, t2, t3, e, pairs, max_visible_clique: omega, certificates: certs })
}

#[derive(Clone, Debug, Serialize)]
pub struct FitResult {
    pub cubic: HomogeneousCubic,
    pub s: usize,
    pub off_curve: Vec<usize>,
    pub trials_run: u64,
    pub degenerate_samples: u64,
}

/// One-dimensional kernel of a rational matrix, if the kernel has dimension one.
/// Rows are cleared to integers and reduced by fraction-free Gauss-Jordan elimination.
fn kernel_vector(rows: Vec<Vec<Rational>>) -> Option<Vec<Rational>> {
    let cols = rows[0].len();
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
        })
        .collect();
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let piv = m[r][c].clone();
        for i in 0..m.len() {
            if i == r {
                continue;
            }
            let factor = m[i][c].clone();
            for j in 0..cols {
                let v = (&piv * &m[i][j] - &factor * &m[r][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = piv;
        pivots.push(c);
        r += 1;
    }
    if cols - pivots.len() != 1 {
        return None;
    }
    let free = (0..cols).find(|c| !pivots.contains(c)).expect("one free column");
    let mut v = vec![BigInt::zero(); cols];
    v[free] = prev;
    for (i, &c) in pivots.iter().enumerate() {
        v[c] = -m[i][free].clone();
    }
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    Some(v.into_iter().map(|x| Rational::from_integer(x / &g)).collect())
}

/// Repeatedly fits a cubic through 9 random points and keeps the one
/// missing the fewest points of `A`.
pub fn fit_cubic(a: &PointSet, trials: u64, seed: u64) -> Result<FitResult, ContainerError> {
    if a.len() < 10 {
        return Err(ContainerError::TooFewToFit(a.len()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let one = Rational::one();
    let row = |i: usize| -> Vec<Rational> {
        let p = a.get(i);
        MONOMIALS.iter().map(|(_, e)| Form::monomial(*e, one.clone()).eval([&p.x, &p.y, &one])).collect()
    };
    let mut best: Option<FitResult> = None;
    let mut degenerate = 0;
    let mut run = 0;
    for _ in 0..trials {
        run += 1;
        let sample = rand::seq::index::sample(&mut rng, a.len(), 9).into_vec();
        let Some(v) = kernel_vector(sample.iter().map(|&i| row(i)).collect()) else {
            degenerate += 1;
            continue;
        };
        let coeffs: [Rational; 10] = v.try_into().expect("ten coefficients");
        let Ok(cubic) = HomogeneousCubic::from_coeffs(&coeffs) else {
            degenerate += 1;
            continue;
        };
        let limit = best.as_ref().map_or(a.len() + 1, |b| b.s);
        let off_curve: Vec<usize> = (0..a.len()).filter(|&i| !cubic.contains(a.get(i))).take(limit).collect();
        if off_curve.len() < limit {
            best = Some(FitResult { cubic, s: off_curve.len(), off_curve, trials_run: 0, degenerate_samples: 0 });
            if best.as_ref().is_some_and(|b| b.s == 0) {
                break;
            }
        }
    }
    match best {
        Some(mut b) => {
            b.trials_run = run;
            b.degenerate_samples = degenerate;
            Ok(b)
        }
        None => Err(ContainerError::NoneFound { degenerate }),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AmbientReport {
    pub patch: usize,
    pub n: usize,
    pub patch_points: Vec<usize>,
    #[serde(serialize_with = "rational::serde_str::serialize")]
    pub alpha: Rational,
    #[serde(serialize_with = "rational::serde_str::serialize")]
    pub beta: Rational,
    pub dense: bool,
    pub external_blockers: Vec<usize>,
    pub sparse_blockers: bool,
    /// `m / (beta m + 1)`.
    #[serde(serialize_with = "rational::serde_str::serialize")]
    pub clique_lower_bound: Rational,
    pub passed: bool,
}

/// For an irreducible cubic `patch_id` indexes the sheared-chart patches;
/// for a line times a conic, patch 0 is the conic.
pub fn ambient_container_check(
    a: &PointSet,
    f: &HomogeneousCubic,
    patch_id: usize,
    alpha: &Rational,
    beta: &Rational,
) -> Result<AmbientReport, ContainerError> {
    if !(alpha > &Rational::zero() && beta > &Rational::zero()) {
        return Err(ContainerError::InvalidParameter("alpha and beta must be positive".into()));
    }
    let pts: Vec<usize> = match classify(f) {
        CubicClassification::Irreducible => {
            let dec = decompose_cubic(f, Chart::Sheared)?;
            if patch_id >= dec.patch_count() {
                return Err(ContainerError::UnknownPatch(patch_id));
            }
            (0..a.len()).filter(|&i| dec.assign_point(a.get(i)) == Assignment::Patch(patch_id)).collect()
        }
        CubicClassification::LineConic { conic, .. } => {
            if patch_id != 0 {
                return Err(ContainerError::UnknownPatch(patch_id));
            }
            (0..a.len()).filter(|&i| conic.eval_affine(a.get(i)).is_zero()).collect()
        }
        CubicClassification::ThreeLines { .. } => return Err(ContainerError::ThreeLinesExcluded),
        CubicClassification::Unclassified { reason } => return Err(ContainerError::NotIrreducibleOrDecomposable(reason)),
    };
    let stats = enumerate_lines(a)?;
    let blockers = blocker_set_with(a, Some(&stats), &pts);
    let external: Vec<usize> = blockers.indices.into_iter().filter(|&r| !f.contains(a.get(r))).collect();
    let m = rational::int(pts.len() as i64);
    let dense = m >= alpha * rational::int(a.len() as i64);
    let sparse_blockers = rational::int(external.len() as i64) <= beta * &m;
    let clique_lower_bound = &m / (beta * &m + Rational::one());
    Ok(AmbientReport {
        patch: patch_id,
        n: a.len(),
        patch_points: pts,
        alpha: alpha.clone(),
        beta: beta.clone(),
        dense,
        external_blockers: external,
        sparse_blockers,
        clique_lower_bound,
        passed: dense && sparse_blockers,
    })
}
