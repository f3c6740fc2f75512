//! Visibility graphs, maximum visible cliques and blocker-colouring covers.

use std::collections::{BTreeMap, BTreeSet};

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::geometry::{enumerate_lines, strictly_between, LineStats, PointSet};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VisibilityError {
    #[error("clique search exceeded its node budget; best clique found has size {}", best.len())]
    BudgetExceeded { best: Vec<usize> },
    #[error("points {0:?} of the covered set are collinear")]
    ThreeCollinearInPatch([usize; 3]),
    #[error("index {0} is out of range")]
    IndexOutOfRange(usize),
    #[error("blocker-colouring assertion failed: {0}")]
    AssertionFailed(String),
}

/// Adjacency of mutually visible pairs, with the smallest-index blocker
/// recorded for every non-adjacent pair.
#[derive(Clone, Debug)]
pub struct VisibilityGraph {
    n: usize,
    adj: Vec<FixedBitSet>,
    witness: BTreeMap<(usize, usize), usize>,
}

fn ordered(i: usize, j: usize) -> (usize, usize) {
    if i < j { (i, j) } else { (j, i) }
}

impl VisibilityGraph {
    pub fn from_lines(a: &PointSet, stats: &LineStats) -> Self {
        let n = a.len();
        let mut adj = vec![FixedBitSet::with_capacity(n); n];
        for (i, row) in adj.iter_mut().enumerate() {
            row.insert_range(..);
            row.set(i, false);
        }
        let mut witness = BTreeMap::new();
        for (_, line) in stats.ordered_rich_lines(a) {
            for s in 0..line.len() {
                let mut smallest = usize::MAX;
                for t in s + 2..line.len() {
                    smallest = smallest.min(line[t - 1]);
                    let (i, j) = (line[s], line[t]);
                    adj[i].set(j, false);
                    adj[j].set(i, false);
                    witness.insert(ordered(i, j), smallest);
                }
            }
        }
        VisibilityGraph { n, adj, witness }
    }

    /// Direct cubic scan over all pairs and candidate blockers.
    pub fn naive(a: &PointSet) -> Self {
        let n = a.len();
        let mut adj = vec![FixedBitSet::with_capacity(n); n];
        let mut witness = BTreeMap::new();
        for i in 0..n {
            for j in i + 1..n {
                match (0..n).find(|&r| strictly_between(a.get(i), a.get(j), a.get(r))) {
                    Some(r) => {
                        witness.insert((i, j), r);
                    }
                    None => {
                        adj[i].insert(j);
                        adj[j].insert(i);
                    }
                }
            }
        }
        VisibilityGraph { n, adj, witness }
    }

    /// From an explicit adjacency list; no witnesses.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut adj = vec![FixedBitSet::with_capacity(n); n];
        for &(i, j) in edges {
            if i != j {
                adj[i].insert(j);
                adj[j].insert(i);
            }
        }
        VisibilityGraph { n, adj, witness: BTreeMap::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adj[i].contains(j)
    }

    pub fn neighbours(&self, i: usize) -> &FixedBitSet {
        &self.adj[i]
    }

    pub fn witness(&self, i: usize, j: usize) -> Option<usize> {
        self.witness.get(&ordered(i, j)).copied()
    }

    pub fn witnesses(&self) -> &BTreeMap<(usize, usize), usize> {
        &self.witness
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|r| r.count_ones(..)).sum::<usize>() / 2
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].count_ones(..)
    }

    pub fn same_adjacency(&self, other: &VisibilityGraph) -> bool {
        self.n == other.n && self.adj == other.adj
    }

    /// Rechecks every witness and every edge against the points.
    pub fn recertify(&self, a: &PointSet) -> bool {
        let naive = VisibilityGraph::naive(a);
        if !self.same_adjacency(&naive) {
            return false;
        }
        self.witness.iter().all(|(&(i, j), &r)| strictly_between(a.get(i), a.get(j), a.get(r)))
    }
}

impl Serialize for VisibilityGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("VisibilityGraph", 3)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("edges", &self.edge_count())?;
        let blocked: Vec<[usize; 3]> = self.witness.iter().map(|(&(i, j), &r)| [i, j, r]).collect();
        st.serialize_field("blocked", &blocked)?;
        st.end()
    }
}

pub fn visibility_graph(a: &PointSet) -> VisibilityGraph {
    match enumerate_lines(a) {
        Ok(stats) => VisibilityGraph::from_lines(a, &stats),
        Err(_) => VisibilityGraph::naive(a),
    }
}

struct CliqueSearch<'g> {
    g: &'g VisibilityGraph,
    best: Vec<usize>,
    nodes: u64,
    budget: u64,
    exhausted: bool,
}

impl CliqueSearch<'_> {
    fn colour_order(&self, p: &FixedBitSet) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(p.count_ones(..));
        let mut uncoloured = p.clone();
        let mut colour = 0;
        while !uncoloured.is_clear() {
            colour += 1;
            let mut q = uncoloured.clone();
            while let Some(v) = q.ones().next() {
                q.set(v, false);
                uncoloured.set(v, false);
                q.difference_with(&self.g.adj[v]);
                out.push((v, colour));
            }
        }
        out
    }

    fn expand(&mut self, r: &mut Vec<usize>, mut p: FixedBitSet) {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return;
        }
        let order = self.colour_order(&p);
        for &(v, colour) in order.iter().rev() {
            if r.len() + colour <= self.best.len() || self.exhausted {
                return;
            }
            r.push(v);
            let mut np = p.clone();
            np.intersect_with(&self.g.adj[v]);
            if np.is_clear() {
                if r.len() > self.best.len() {
                    self.best = r.clone();
                }
            } else {
                self.expand(r, np);
            }
            r.pop();
            p.set(v, false);
        }
    }
}

/// Exact maximum clique by branch and bound with a greedy colouring bound.
pub fn max_visible_clique(g: &VisibilityGraph, node_budget: u64) -> Result<Vec<usize>, VisibilityError> {
    let all: Vec<usize> = (0..g.n).collect();
    max_clique_within(g, &all, node_budget)
}

/// Maximum clique of the subgraph induced by `subset`.
pub fn max_clique_within(g: &VisibilityGraph, subset: &[usize], node_budget: u64) -> Result<Vec<usize>, VisibilityError> {
    let mut p = FixedBitSet::with_capacity(g.n);
    for &i in subset {
        if i >= g.n {
            return Err(VisibilityError::IndexOutOfRange(i));
        }
        p.insert(i);
    }
    let mut search = CliqueSearch { g, best: Vec::new(), nodes: 0, budget: node_budget.max(1), exhausted: false };
    if !p.is_clear() {
        search.expand(&mut Vec::new(), p);
    }
    let mut best = search.best;
    best.sort_unstable();
    if search.exhausted {
        Err(VisibilityError::BudgetExceeded { best })
    } else {
        Ok(best)
    }
}

/// Points of `A` that block at least one pair of `X`.
#[derive(Clone, Debug, Serialize)]
pub struct BlockerSet {
    pub indices: BTreeSet<usize>,
    pub b: usize,
    pub disjoint_from_x: bool,
}

pub fn blocker_set(a: &PointSet, x: &[usize]) -> BlockerSet {
    let stats = enumerate_lines(a).ok();
    blocker_set_with(a, stats.as_ref(), x)
}

pub fn blocker_set_with(a: &PointSet, stats: Option<&LineStats>, x: &[usize]) -> BlockerSet {
    let in_x: BTreeSet<usize> = x.iter().copied().collect();
    let mut indices = BTreeSet::new();
    if let Some(stats) = stats {
        for (_, line) in stats.ordered_rich_lines(a) {
            let pos: Vec<usize> = (0..line.len()).filter(|&t| in_x.contains(&line[t])).collect();
            if pos.len() < 2 {
                continue;
            }
            let (first, last) = (pos[0], pos[pos.len() - 1]);
            indices.extend(line[first + 1..last].iter().copied());
        }
    }
    let disjoint_from_x = indices.is_disjoint(&in_x);
    BlockerSet { b: indices.len(), indices, disjoint_from_x }
}

/// A partition of `scope` into parts whose members see each other.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CliqueCover {
    pub scope: Vec<usize>,
    pub parts: Vec<Vec<usize>>,
    pub certified: bool,
    pub b: usize,
}

impl CliqueCover {
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn singletons(scope: &[usize]) -> Self {
        CliqueCover { scope: scope.to_vec(), parts: scope.iter().map(|&i| vec![i]).collect(), certified: true, b: 0 }
    }
}

/// Recomputes from scratch that the parts partition the scope and that
/// every within-part pair is unobstructed in `A`.
pub fn certify_cover(a: &PointSet, cover: &CliqueCover) -> bool {
    let mut seen = BTreeSet::new();
    for part in &cover.parts {
        for &i in part {
            if !seen.insert(i) {
                return false;
            }
        }
    }
    let scope: BTreeSet<usize> = cover.scope.iter().copied().collect();
    if seen != scope {
        return false;
    }
    cover.parts.iter().all(|part| {
        part.iter().enumerate().all(|(s, &i)| {
            part[s + 1..]
                .iter()
                .all(|&j| !(0..a.len()).any(|r| strictly_between(a.get(i), a.get(j), a.get(r))))
        })
    })
}

/// First collinear triple inside `x`, if any.
pub fn collinear_triple_in(stats: &LineStats, x: &[usize]) -> Option<[usize; 3]> {
    let in_x: BTreeSet<usize> = x.iter().copied().collect();
    stats.rich_lines.values().find_map(|line| {
        let hit: Vec<usize> = line.iter().copied().filter(|i| in_x.contains(i)).take(3).collect();
        (hit.len() == 3).then(|| [hit[0], hit[1], hit[2]])
    })
}

/// Greedy colouring of the non-visibility graph on `x` in ascending index order.
///
/// Requires that no line meets `x` in three points. Every blocked pair is charged
/// to its recorded witness; the pairs charged to one blocker must be disjoint,
/// the conflict degree must stay at most `b`, and at most `b + 1` colours may be used.
pub fn blocker_colouring_cover(a: &PointSet, x: &[usize]) -> Result<CliqueCover, VisibilityError> {
    let stats = enumerate_lines(a).ok();
    let g = match &stats {
        Some(s) => VisibilityGraph::from_lines(a, s),
        None => VisibilityGraph::naive(a),
    };
    blocker_colouring_cover_with(a, &g, stats.as_ref(), x)
}

pub fn blocker_colouring_cover_with(
    a: &PointSet,
    g: &VisibilityGraph,
    stats: Option<&LineStats>,
    x: &[usize],
) -> Result<CliqueCover, VisibilityError> {
    let mut scope: Vec<usize> = x.to_vec();
    scope.sort_unstable();
    scope.dedup();
    if let Some(&i) = scope.iter().find(|&&i| i >= a.len()) {
        return Err(VisibilityError::IndexOutOfRange(i));
    }
    if let Some(t) = stats.and_then(|s| collinear_triple_in(s, &scope)) {
        return Err(VisibilityError::ThreeCollinearInPatch(t));
    }
    let blockers = blocker_set_with(a, stats, &scope);
    let b = blockers.b;

    let mut conflict_degree: BTreeMap<usize, usize> = BTreeMap::new();
    let mut charged: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for (s, &i) in scope.iter().enumerate() {
        for &j in &scope[s + 1..] {
            if g.adjacent(i, j) {
                continue;
            }
            let r = g
                .witness(i, j)
                .ok_or_else(|| VisibilityError::AssertionFailed(format!("pair ({i}, {j}) has no witness")))?;
            if !blockers.indices.contains(&r) {
                return Err(VisibilityError::AssertionFailed(format!("witness {r} missing from blocker set")));
            }
            let ends = charged.entry(r).or_default();
            if !ends.insert(i) || !ends.insert(j) {
                return Err(VisibilityError::AssertionFailed(format!("pairs charged to blocker {r} are not a matching")));
            }
            *conflict_degree.entry(i).or_insert(0) += 1;
            *conflict_degree.entry(j).or_insert(0) += 1;
        }
    }
    let max_degree = conflict_degree.values().copied().max().unwrap_or(0);
    if max_degree > b {
        return Err(VisibilityError::AssertionFailed(format!("conflict degree {max_degree} exceeds b = {b}")));
    }

    let mut parts: Vec<Vec<usize>> = Vec::new();
    for &i in &scope {
        match parts.iter_mut().find(|part| part.iter().all(|&j| g.adjacent(i, j))) {
            Some(part) => part.push(i),
            None => parts.push(vec![i]),
        }
    }
    if parts.len() > b + 1 {
        return Err(VisibilityError::AssertionFailed(format!("{} parts exceed b + 1 = {}", parts.len(), b + 1)));
    }
    let mut cover = CliqueCover { scope, parts, certified: false, b };
    cover.certified = certify_cover(a, &cover);
    if !cover.certified {
        return Err(VisibilityError::AssertionFailed("a part failed recertification".into()));
    }
    Ok(cover)
}
