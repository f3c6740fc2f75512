mod common;

use std::time::{Duration, Instant};

use common::*;
use cubvis::arith::rational::{int, rat, Rational};
use cubvis::arith::RealAlgebraic;
use cubvis::container::{cubic_container, fit_cubic, turan_identities, DEFAULT_CLIQUE_BUDGET};
use cubvis::cubic::{exceptional_set, Chart, Form};
use cubvis::generators::{gen_cubic_power, gen_grid, gen_one_blocker};
use cubvis::geometry::{enumerate_lines, orient, Point, PointSet};
use cubvis::orchard::{orchard_core, orchard_delta, verify_orchard_guarantees, GuaranteeStatus};
use cubvis::patches::{decompose_cubic, Assignment, PatchDecomposition};
use cubvis::visibility::{
    blocker_colouring_cover, blocker_set, certify_cover, max_clique_within, max_visible_clique, visibility_graph,
    VisibilityGraph,
};
use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t <= limit, || format!("took {t:.2?}, limit {limit:?}"))
}

fn ceil(r: &Rational) -> usize {
    r.numer().div_ceil(r.denom()).try_into().unwrap()
}

/// Points with at most three on a line, added greedily from a small grid.
fn no_four_collinear(rng: &mut ChaCha8Rng, n: usize, span: i64) -> PointSet {
    let mut pts: Vec<Point> = Vec::new();
    let mut attempts = 0;
    while pts.len() < n && attempts < 50 * n {
        attempts += 1;
        let p = Point::int(rng.gen_range(-span..=span), rng.gen_range(-span..=span));
        if pts.contains(&p) {
            continue;
        }
        let four = (0..pts.len()).any(|i| {
            (i + 1..pts.len()).any(|j| {
                orient(&pts[i], &pts[j], &p) == 0
                    && (j + 1..pts.len()).any(|k| orient(&pts[i], &pts[j], &pts[k]) == 0)
            })
        });
        if !four {
            pts.push(p);
        }
    }
    PointSet::new(pts, None).unwrap()
}

fn random_set(rng: &mut ChaCha8Rng, max: usize, span: i64) -> PointSet {
    let n = rng.gen_range(3..=max);
    let mut pts: Vec<Point> = Vec::new();
    while pts.len() < n {
        let p = Point::int(rng.gen_range(-span..=span), rng.gen_range(-span..=span));
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    PointSet::new(pts, None).unwrap()
}

fn figure_curve() -> Outcome {
    let start = Instant::now();
    let f = weierstrass();
    let e = exceptional_set(&f, Chart::Standard).map_err(|e| e.to_string())?;
    ensure(e.counts() == [0, 1, 3, 2], || format!("counts {:?}", e.counts()))?;
    let roots: Vec<RealAlgebraic> = e.e_vt.iter().map(|p| p.x.clone()).collect();
    let expected: Vec<RealAlgebraic> = [-1, 0, 1].iter().map(|&x| RealAlgebraic::Rational(int(x))).collect();
    ensure(roots == expected, || format!("vertical tangents at {roots:?}"))?;
    let dec = decompose_cubic(&f, Chart::Standard).map_err(|e| e.to_string())?;
    ensure(dec.patch_count() == 6, || format!("{} patches", dec.patch_count()))?;
    within(start, Duration::from_secs(5))?;
    Ok(format!("|E| = {}, 6 patches in {:.2?}", e.total(), start.elapsed()))
}

fn hessians() -> Outcome {
    let cusp = cubic(&[([3, 0, 0], 1), ([0, 2, 1], -1)]);
    ensure(cusp.hessian() == Form::from_int_terms(&[([1, 2, 0], -24)]), || "cusp Hessian".into())?;
    let node = cubic(&[([0, 2, 1], 1), ([3, 0, 0], -1), ([2, 0, 1], -1)]);
    let expected = Form::from_int_terms(&[([1, 2, 0], 3), ([0, 2, 1], 1), ([2, 0, 1], -1)]).scale(&int(8));
    ensure(node.hessian() == expected, || "node Hessian".into())?;
    let e = exceptional_set(&crunodal(), Chart::Standard).map_err(|e| e.to_string())?;
    let four_thirds = RealAlgebraic::Rational(rat(4, 3));
    ensure(e.e_fl.len() == 2 && e.e_fl.iter().all(|p| p.x == four_thirds), || format!("flexes {:?}", e.e_fl))?;
    Ok("-24XY^2, 8(3XY^2 + Y^2Z - X^2Z), flexes at x = 4/3".into())
}

fn one_blocker() -> Outcome {
    for m in (2..=20u64).step_by(2) {
        let a = gen_one_blocker(m).map_err(|e| e.to_string())?;
        let g = visibility_graph(&a);
        let circle: Vec<usize> = (0..m as usize).collect();
        for &i in &circle {
            let hidden: Vec<usize> = circle.iter().copied().filter(|&j| j != i && !g.adjacent(i, j)).collect();
            ensure(hidden == vec![i ^ 1], || format!("m = {m}: point {i} hidden from {hidden:?}"))?;
        }
        let w = max_clique_within(&g, &circle, DEFAULT_CLIQUE_BUDGET).map_err(|e| e.to_string())?.len();
        ensure(w == m as usize / 2, || format!("m = {m}: clique {w}"))?;
        let cover = blocker_colouring_cover(&a, &circle).map_err(|e| e.to_string())?;
        ensure(cover.len() <= 2 && certify_cover(&a, &cover), || format!("m = {m}: cover {}", cover.len()))?;
        let c = enumerate_lines(&a).map_err(|e| e.to_string())?.max_collinear();
        ensure(c <= 3, || format!("m = {m}: {c} collinear"))?;
    }
    Ok("m = 2..20".into())
}

fn blocker_colouring_fuzz() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for case in 0..100 {
        let a = random_set(&mut rng, 26, 5);
        let mut x: Vec<usize> = Vec::new();
        for i in 0..a.len() {
            let ok = (0..x.len()).all(|s| (s + 1..x.len()).all(|t| orient(a.get(x[s]), a.get(x[t]), a.get(i)) != 0));
            if ok {
                x.push(i);
            }
        }
        let cover = blocker_colouring_cover(&a, &x).map_err(|e| format!("case {case}: {e}"))?;
        let b = blocker_set(&a, &x);
        let g = visibility_graph(&a);
        let delta = x.iter().map(|&i| x.iter().filter(|&&j| j != i && !g.adjacent(i, j)).count()).max().unwrap_or(0);
        ensure(certify_cover(&a, &cover) && cover.len() <= b.b + 1 && delta <= b.b && b.disjoint_from_x, || {
            format!("case {case}: {} parts, b = {}, max degree {delta}", cover.len(), b.b)
        })?;
    }
    Ok("100 instances".into())
}

fn container() -> Outcome {
    let f = power_cubic();
    let mut lines = Vec::new();
    for m in [5u64, 10, 25] {
        let base = gen_cubic_power(m);
        for s in 0..=3usize {
            let a = if s == 0 { base.clone() } else { plant_off_curve(&base, &f, s, 4, 7 * m + s as u64) };
            let start = Instant::now();
            let r = cubic_container(&a, &f, 4).map_err(|e| format!("m = {m}, s = {s}: {e}"))?;
            if m == 25 {
                within(start, Duration::from_secs(60))?;
            }
            let bound = ceil(&r.omega_lower_bound);
            ensure(
                r.passed() && r.s == s && r.cover.len() <= 15 * (s + 1) + 13 && r.realized_clique.len() >= bound,
                || format!("m = {m}, s = {s}: cover {}, clique {} vs {bound}", r.cover.len(), r.realized_clique.len()),
            )?;
            if s == 0 {
                lines.push(format!("m={m}: cover {}, clique {}", r.cover.len(), r.realized_clique.len()));
            }
        }
    }
    Ok(lines.join("; "))
}

fn turan_fuzz() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for case in 0..200 {
        let n = rng.gen_range(4..=60);
        let a = no_four_collinear(&mut rng, n, 8);
        let r = turan_identities(&a, DEFAULT_CLIQUE_BUDGET).map_err(|e| format!("case {case}: {e}"))?;
        ensure(r.passed(), || format!("case {case}: {:?}", r.certificates))?;
    }
    Ok("200 sets".into())
}

fn orchard() -> Outcome {
    ensure(orchard_delta(4) == rat(1, 36), || format!("delta {}", orchard_delta(4)))?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut sets = vec![gen_grid(4, 4).unwrap(), gen_grid(5, 3).unwrap(), gen_one_blocker(12).unwrap()];
    sets.extend((0..20).map(|_| random_set(&mut rng, 24, 3)));
    let mut applicable = 0;
    for (i, a) in sets.iter().enumerate() {
        for (k, l) in [(5, 4), (5, 5), (6, 4)] {
            let mut core = orchard_core(a, k, l).map_err(|e| e.to_string())?;
            let half = &core.delta * int(a.len() as i64) / int(2);
            ensure(core.degrees.iter().all(|&d| int(d as i64) >= half), || format!("set {i}: survivor below threshold"))?;
            let v = match verify_orchard_guarantees(&mut core, a, DEFAULT_CLIQUE_BUDGET) {
                Ok(v) => v,
                Err(e) => return Err(format!("set {i}: {e}")),
            };
            ensure(v.status != GuaranteeStatus::Violated, || format!("set {i}, k = {k}, l = {l}: {:?}", v.certificates))?;
            if v.status == GuaranteeStatus::Applicable {
                applicable += 1;
            }
        }
    }
    ensure(applicable > 0, || "no instance met the hypotheses".into())?;
    Ok(format!("delta(4) = 1/36, {applicable} applicable instances"))
}

fn same_patch_pairs(dec: &PatchDecomposition, pts: &[Point]) -> Vec<(usize, usize, usize)> {
    let assigned: Vec<Assignment> = pts.iter().map(|p| dec.assign_point(p)).collect();
    let mut out = Vec::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if let (Assignment::Patch(a), Assignment::Patch(b)) = (&assigned[i], &assigned[j]) {
                if a == b && pts[i] != pts[j] {
                    out.push((*a, i, j));
                }
            }
        }
    }
    out
}

fn chords() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let params: Vec<Rational> = (0..80).map(|_| random_rational(&mut rng, 6)).collect();
    let curves = [
        ("y = x^3", power_cubic(), Chart::Sheared, params.iter().map(power_point).collect::<Vec<_>>()),
        ("y^2 = x^3 - x", twisted_weierstrass(), Chart::Standard, twisted_points(4)),
        ("y^2 = x^3 - x^2", crunodal(), Chart::Standard, params.iter().map(crunodal_point).collect()),
    ];
    let mut summary = Vec::new();
    for (name, f, chart, pts) in curves {
        let dec = decompose_cubic(&f, chart).map_err(|e| format!("{name}: {e}"))?;
        let pairs = same_patch_pairs(&dec, &pts);
        ensure(!pairs.is_empty(), || format!("{name}: no same-patch pairs"))?;
        for _ in 0..200 {
            let &(patch, i, j) = pairs.choose(&mut rng).unwrap();
            let cert = dec.certify_patch_chord(patch, &pts[i], &pts[j]).map_err(|e| format!("{name}: {e}"))?;
            ensure(cert.empty, || format!("{name}: chord {:?} {:?} meets the curve", pts[i], pts[j]))?;
        }
        summary.push(format!("{name}: {} pairs", pairs.len()));
    }
    within(start, Duration::from_secs(30))?;
    Ok(format!("{} in {:.2?}", summary.join(", "), start.elapsed()))
}

fn brute_force_cliques() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for case in 0..60 {
        let a = random_set(&mut rng, 18, 3);
        let g = visibility_graph(&a);
        ensure(g.same_adjacency(&VisibilityGraph::naive(&a)) && g.recertify(&a), || format!("case {case}: adjacency"))?;
        let c = max_visible_clique(&g, 10_000_000).map_err(|e| format!("case {case}: {e}"))?;
        let brute = brute_clique(&g);
        ensure(c.len() == brute, || format!("case {case}: {} vs {brute}", c.len()))?;
    }
    Ok("60 sets with n <= 18".into())
}

fn fitting() -> Outcome {
    let start = Instant::now();
    let f = power_cubic();
    let mut recovered = 0;
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        let mut params: Vec<i64> = (-60..=60).collect();
        params.shuffle(&mut rng);
        let curve: Vec<Point> = params[..40].iter().map(|&t| power_point(&int(t))).collect();
        let base = PointSet::new(curve, None).unwrap();
        let s = (seed % 4) as usize;
        let a = if s == 0 { base } else { plant_off_curve(&base, &f, s, 41, seed) };
        let fit = fit_cubic(&a, 200, seed).map_err(|e| e.to_string())?;
        let planted: Vec<usize> = (40..40 + s).collect();
        if fit.off_curve == planted && fit.trials_run <= 200 {
            recovered += 1;
        }
    }
    ensure(recovered >= 95, || format!("{recovered} of 100 recovered"))?;
    within(start, Duration::from_secs(60))?;
    Ok(format!("{recovered} of 100 recovered in {:.2?}", start.elapsed()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("figure curve decomposition", figure_curve),
        ("Hessian normal forms and flexes", hessians),
        ("one-blocker family", one_blocker),
        ("blocker colouring fuzz", blocker_colouring_fuzz),
        ("container on power curves", container),
        ("Turan identities fuzz", turan_fuzz),
        ("orchard core guarantees", orchard),
        ("same-patch chords", chords),
        ("clique search vs brute force", brute_force_cliques),
        ("cubic fitting with outliers", fitting),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
