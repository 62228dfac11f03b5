//! Prize-collecting forest and path solvers.
//!
//! [`solve_pcf`] returns a forest with exactly `m` trees that trades edge
//! weight against the penalties of the vertices it leaves out. Its contract is
//! Lagrangian multiplier preservation with factor 2:
//!
//! ```text
//! w(F) + 2·π(V \ V(F)) ≤ 2·opt
//! ```
//!
//! [`solve_pcp`] shortcuts every tree into a path, which at most doubles the
//! edge weight, so it preserves the same inequality with factor 4.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{MetricGraph, Path, PathSet};
use crate::TOL;

const EPS: f64 = 1e-12;

/// Resolution of the penalty-offset bisection.
const OFFSET_RESOLUTION: f64 = 1e-6;

/// Per-vertex nonnegative penalties.
#[derive(Debug, Clone, PartialEq)]
pub struct Penalties(Vec<f64>);

impl Penalties {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(Error::NegativePenalty);
        }
        Ok(Self(values))
    }

    pub fn uniform(n: usize, value: f64) -> Result<Self> {
        Self::new(vec![value; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn max(&self) -> f64 {
        self.0.iter().copied().fold(0.0, f64::max)
    }

    /// Total penalty of the vertices not marked in `spanned`.
    pub fn unspanned(&self, spanned: &[bool]) -> f64 {
        self.0
            .iter()
            .zip(spanned)
            .filter(|(_, &s)| !s)
            .map(|(p, _)| p)
            .fold(0.0, |a, b| a + b)
    }
}

/// A tree given by its vertex set and edge list. A single vertex is a tree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    pub vertices: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
}

impl Tree {
    pub fn weight(&self, g: &MetricGraph) -> f64 {
        self.edges.iter().map(|&(u, v)| g.dist(u, v)).fold(0.0, |a, b| a + b)
    }
}

/// Exactly `m` vertex-disjoint trees.
#[derive(Debug, Clone, PartialEq)]
pub struct Forest {
    pub trees: Vec<Tree>,
    pub cost: f64,
    pub unspanned_penalty: f64,
}

impl Forest {
    fn assemble(g: &MetricGraph, pi: &Penalties, mut trees: Vec<Tree>) -> Self {
        for t in &mut trees {
            t.vertices.sort_unstable();
        }
        trees.sort_by_key(|t| t.vertices[0]);
        let cost = trees.iter().map(|t| t.weight(g)).fold(0.0, |a, b| a + b);
        let mut spanned = vec![false; g.n()];
        for t in &trees {
            for &v in &t.vertices {
                spanned[v] = true;
            }
        }
        Self {
            trees,
            cost,
            unspanned_penalty: pi.unspanned(&spanned),
        }
    }

    pub fn components(&self) -> usize {
        self.trees.len()
    }

    pub fn spanned(&self) -> usize {
        self.trees.iter().map(|t| t.vertices.len()).sum()
    }

    pub fn spanned_mask(&self, n: usize) -> Vec<bool> {
        let mut mask = vec![false; n];
        for t in &self.trees {
            for &v in &t.vertices {
                mask[v] = true;
            }
        }
        mask
    }

    pub fn certificate(&self, factor: f64) -> LmpCertificate {
        LmpCertificate::new(factor, self.cost, self.unspanned_penalty)
    }
}

/// `solution_cost + penalty_term ≤ bound_rhs`, with `penalty_term = r·π(unspanned)`
/// and `bound_rhs = r·opt` once an exact optimum is known.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LmpCertificate {
    pub factor: f64,
    pub solution_cost: f64,
    pub penalty_term: f64,
    pub bound_rhs: Option<f64>,
}

impl LmpCertificate {
    pub fn new(factor: f64, solution_cost: f64, unspanned_penalty: f64) -> Self {
        Self {
            factor,
            solution_cost,
            penalty_term: factor * unspanned_penalty,
            bound_rhs: None,
        }
    }

    pub fn lhs(&self) -> f64 {
        self.solution_cost + self.penalty_term
    }

    pub fn with_opt(mut self, opt: f64) -> Self {
        self.bound_rhs = Some(self.factor * opt);
        self
    }

    /// `None` when no optimum has been attached.
    pub fn holds(&self) -> Option<bool> {
        self.bound_rhs.map(|rhs| self.lhs() <= rhs + TOL)
    }
}

fn check_args(g: &MetricGraph, pi: &Penalties, m: usize) -> Result<()> {
    if pi.len() != g.n() {
        return Err(Error::PenaltyLength {
            got: pi.len(),
            expected: g.n(),
        });
    }
    if m == 0 || m > g.n() {
        return Err(Error::InvalidPathCount { m, n: g.n() });
    }
    Ok(())
}

/// Forest with exactly `m` trees satisfying the 2-LMP contract.
///
/// Three starting vertex sets are tried: the one spanned by
/// [`moat_growing_forest`], the best `m` clusters of the single-linkage
/// hierarchy, and the `m` most expensive vertices. Each is re-spanned by the
/// minimum spanning forest with `m` components and improved by single-vertex
/// insertions and deletions while `w + 2·π(unspanned)` drops. The best result
/// is kept.
pub fn solve_pcf(g: &MetricGraph, pi: &Penalties, m: usize) -> Result<Forest> {
    let moats = moat_growing_forest(g, pi, m)?;
    let starts = [
        moats.spanned_mask(g.n()),
        linkage_clusters(g, pi, m),
        top_penalty_mask(pi, m),
    ];
    let mut best: Option<Forest> = None;
    for start in starts {
        let f = local_search(g, pi, m, start);
        if best
            .as_ref()
            .is_none_or(|b| lmp_objective(&f) < lmp_objective(b) - EPS)
        {
            best = Some(f);
        }
    }
    Ok(best.expect("at least one start"))
}

/// Best `m` disjoint clusters of the single-linkage hierarchy, scoring a
/// cluster by its spanning tree weight minus twice its penalty.
fn linkage_clusters(g: &MetricGraph, pi: &Penalties, m: usize) -> Vec<bool> {
    let n = g.n();
    let mut pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
        .collect();
    pairs.sort_by(|a, b| g.dist(a.0, a.1).total_cmp(&g.dist(b.0, b.1)).then(a.cmp(b)));

    // Hierarchy nodes: leaves 0..n, merges appended after.
    let mut children: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut score: Vec<f64> = pi.0.iter().map(|p| -2.0 * p).collect();
    let mut size: Vec<usize> = vec![1; n];
    let mut parent: Vec<usize> = (0..n).collect();
    let mut node_of: Vec<usize> = (0..n).collect();
    for (u, v) in pairs {
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru == rv {
            continue;
        }
        let (a, b) = (node_of[ru], node_of[rv]);
        children.push(Some((a, b)));
        score.push(score[a] + score[b] + g.dist(u, v));
        size.push(size[a] + size[b]);
        let r = ru.min(rv);
        parent[ru.max(rv)] = r;
        node_of[r] = children.len() - 1;
    }
    let root = children.len() - 1;

    // table[node][j]: best total score of j disjoint clusters inside node.
    let width = m + 1;
    let mut table = vec![f64::INFINITY; children.len() * width];
    let mut pick_self = vec![false; children.len()];
    let mut split = vec![0usize; children.len() * width];
    for node in 0..children.len() {
        table[node * width] = 0.0;
        if let Some((a, b)) = children[node] {
            for j in 1..=m.min(size[node]) {
                for ja in 0..=j.min(size[a]) {
                    let jb = j - ja;
                    if jb > size[b] {
                        continue;
                    }
                    let val = table[a * width + ja] + table[b * width + jb];
                    if val < table[node * width + j] {
                        table[node * width + j] = val;
                        split[node * width + j] = ja;
                    }
                }
            }
        }
        if score[node] < table[node * width + 1] {
            table[node * width + 1] = score[node];
            pick_self[node] = true;
        }
    }

    let mut mask = vec![false; n];
    let mut stack = vec![(root, m)];
    while let Some((node, j)) = stack.pop() {
        if j == 0 {
            continue;
        }
        match children[node] {
            _ if j == 1 && pick_self[node] => mark_leaves(&children, node, &mut mask),
            Some((a, b)) => {
                let ja = split[node * width + j];
                stack.push((a, ja));
                stack.push((b, j - ja));
            }
            None => mask[node] = true,
        }
    }
    mask
}

fn mark_leaves(children: &[Option<(usize, usize)>], node: usize, mask: &mut [bool]) {
    let mut stack = vec![node];
    while let Some(x) = stack.pop() {
        match children[x] {
            Some((a, b)) => {
                stack.push(a);
                stack.push(b);
            }
            None => mask[x] = true,
        }
    }
}

fn lmp_objective(f: &Forest) -> f64 {
    f.cost + 2.0 * f.unspanned_penalty
}

fn top_penalty_mask(pi: &Penalties, m: usize) -> Vec<bool> {
    let mut order: Vec<usize> = (0..pi.len()).collect();
    order.sort_by(|&a, &b| pi.0[b].total_cmp(&pi.0[a]).then(a.cmp(&b)));
    let mut mask = vec![false; pi.len()];
    for &v in order.iter().take(m) {
        mask[v] = true;
    }
    mask
}

/// Primal-dual moat growing with a uniform penalty offset tuned so that the
/// pruned forest has exactly `m` trees.
pub fn moat_growing_forest(g: &MetricGraph, pi: &Penalties, m: usize) -> Result<Forest> {
    check_args(g, pi, m)?;
    let n = g.n();
    let run = |offset: f64| -> MoatRun {
        let budget: Vec<f64> = pi.0.iter().map(|p| p + offset).collect();
        grow_moats(g, &budget)
    };

    let at_zero = run(0.0);
    let chosen = if at_zero.clusters.len() <= m {
        at_zero
    } else {
        let mut lo = 0.0;
        let mut hi = n as f64 * (pi.max() + g.max_distance()) + 1.0;
        let mut below = run(hi);
        let mut exact = None;
        while hi - lo > OFFSET_RESOLUTION {
            let mid = 0.5 * (lo + hi);
            let r = run(mid);
            match r.clusters.len().cmp(&m) {
                std::cmp::Ordering::Equal => {
                    exact = Some(r);
                    break;
                }
                std::cmp::Ordering::Greater => lo = mid,
                std::cmp::Ordering::Less => {
                    hi = mid;
                    below = r;
                }
            }
        }
        exact.unwrap_or(below)
    };
    let trees = chosen.into_trees();
    Ok(Forest::assemble(g, pi, fix_component_count(g, pi, trees, m)))
}

/// Splits heaviest edges, then adds the most expensive unspanned vertices as
/// singletons, until there are `m` trees. Both steps never increase
/// `w + r·π(unspanned)`. Surplus trees (never produced by the moat search) are
/// dropped in order of least penalty relief.
fn fix_component_count(g: &MetricGraph, pi: &Penalties, trees: Vec<Tree>, m: usize) -> Vec<Tree> {
    let n = g.n();
    let mut in_forest = vec![false; n];
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for t in &trees {
        for &v in &t.vertices {
            in_forest[v] = true;
        }
        edges.extend(t.edges.iter().copied());
    }
    let mut comps = trees.len();
    if comps > m {
        let mut ranked: Vec<(f64, usize)> = trees
            .iter()
            .enumerate()
            .map(|(i, t)| (pi.unspanned(&not_mask(n, &t.vertices)) - t.weight(g), i))
            .collect();
        ranked.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let keep: Vec<usize> = ranked[comps - m..].iter().map(|&(_, i)| i).collect();
        return keep.into_iter().map(|i| trees[i].clone()).collect();
    }
    edges.sort_by(|a, b| {
        g.dist(b.0, b.1)
            .total_cmp(&g.dist(a.0, a.1))
            .then(a.cmp(b))
    });
    let split = (m - comps).min(edges.len());
    edges.drain(..split);
    comps += split;
    if comps < m {
        let mut outside: Vec<usize> = (0..n).filter(|&v| !in_forest[v]).collect();
        outside.sort_by(|&a, &b| pi.0[b].total_cmp(&pi.0[a]).then(a.cmp(&b)));
        for &v in outside.iter().take(m - comps) {
            in_forest[v] = true;
        }
    }
    let members: Vec<usize> = (0..n).filter(|&v| in_forest[v]).collect();
    trees_from_edges(n, &members, &edges)
}

fn not_mask(n: usize, vertices: &[usize]) -> Vec<bool> {
    let mut mask = vec![true; n];
    for &v in vertices {
        mask[v] = false;
    }
    mask
}

struct MoatRun {
    n: usize,
    edges: Vec<(usize, usize)>,
    clusters: Vec<Vec<usize>>,
    dead: Vec<Vec<usize>>,
}

struct Moat {
    members: Vec<usize>,
    slack: f64,
    active: bool,
}

enum Event {
    Deactivate(usize),
    Merge(usize, usize),
}

/// Unrooted moat growing: every active moat raises its dual uniformly until it
/// exhausts its penalty budget or an edge between two moats becomes tight.
fn grow_moats(g: &MetricGraph, budget: &[f64]) -> MoatRun {
    let n = g.n();
    let mut label: Vec<usize> = (0..n).collect();
    let mut load = vec![0.0; n];
    let mut edges = Vec::new();
    let mut dead = Vec::new();
    let mut moats: Vec<Option<Moat>> = (0..n)
        .map(|v| {
            let active = budget[v] > EPS;
            if !active {
                dead.push(vec![v]);
            }
            Some(Moat {
                members: vec![v],
                slack: budget[v].max(0.0),
                active,
            })
        })
        .collect();

    loop {
        let active: Vec<bool> = (0..n)
            .map(|v| moats[label[v]].as_ref().is_some_and(|m| m.active))
            .collect();
        let mut next: Option<(f64, Event)> = None;
        for (id, moat) in moats.iter().enumerate() {
            if let Some(moat) = moat {
                if moat.active && next.as_ref().is_none_or(|(t, _)| moat.slack < *t) {
                    next = Some((moat.slack, Event::Deactivate(id)));
                }
            }
        }
        for u in 0..n {
            for v in (u + 1)..n {
                if label[u] == label[v] {
                    continue;
                }
                let rate = active[u] as u8 + active[v] as u8;
                if rate == 0 {
                    continue;
                }
                let t = (g.dist(u, v) - load[u] - load[v]).max(0.0) / rate as f64;
                if next.as_ref().is_none_or(|(best, _)| t < *best) {
                    next = Some((t, Event::Merge(u, v)));
                }
            }
        }
        let Some((dt, event)) = next else { break };

        for moat in moats.iter_mut().flatten().filter(|m| m.active) {
            moat.slack -= dt;
            for &v in &moat.members {
                load[v] += dt;
            }
        }
        match event {
            Event::Deactivate(id) => {
                let moat = moats[id].as_mut().expect("live moat");
                moat.slack = 0.0;
                moat.active = false;
                dead.push(moat.members.clone());
            }
            Event::Merge(u, v) => {
                let (a, b) = (label[u], label[v]);
                let absorbed = moats[b].take().expect("live moat");
                for &x in &absorbed.members {
                    label[x] = a;
                }
                let moat = moats[a].as_mut().expect("live moat");
                moat.members.extend(absorbed.members);
                moat.slack = (moat.slack + absorbed.slack).max(0.0);
                moat.active = moat.slack > EPS;
                if !moat.active {
                    moat.slack = 0.0;
                    dead.push(moat.members.clone());
                }
                edges.push((u.min(v), u.max(v)));
            }
        }
    }

    let clusters = moats.into_iter().flatten().map(|m| m.members).collect();
    MoatRun {
        n,
        edges,
        clusters,
        dead,
    }
}

impl MoatRun {
    /// Prunes every dead moat that hangs off the rest of its cluster by a
    /// single edge; each cluster keeps a nonempty tree.
    fn into_trees(self) -> Vec<Tree> {
        let n = self.n;
        let mut cluster_of = vec![0; n];
        for (c, members) in self.clusters.iter().enumerate() {
            for &v in members {
                cluster_of[v] = c;
            }
        }
        let mut alive_in_cluster: Vec<usize> = self.clusters.iter().map(Vec::len).collect();
        let mut alive = vec![true; n];
        let mut in_set = vec![false; n];
        let mut changed = true;
        while changed {
            changed = false;
            for set in &self.dead {
                if !set.iter().all(|&v| alive[v]) {
                    continue;
                }
                let c = cluster_of[set[0]];
                if set.len() >= alive_in_cluster[c] {
                    continue;
                }
                for &v in set {
                    in_set[v] = true;
                }
                let crossing = self
                    .edges
                    .iter()
                    .filter(|&&(a, b)| alive[a] && alive[b] && in_set[a] != in_set[b])
                    .count();
                for &v in set {
                    in_set[v] = false;
                }
                if crossing == 1 {
                    for &v in set {
                        alive[v] = false;
                    }
                    alive_in_cluster[c] -= set.len();
                    changed = true;
                }
            }
        }
        let edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .copied()
            .filter(|&(a, b)| alive[a] && alive[b])
            .collect();
        let members: Vec<usize> = (0..n).filter(|&v| alive[v]).collect();
        trees_from_edges(n, &members, &edges)
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Groups `members` into trees along `edges` (which must form a forest).
fn trees_from_edges(n: usize, members: &[usize], edges: &[(usize, usize)]) -> Vec<Tree> {
    let mut parent: Vec<usize> = (0..n).collect();
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut index = vec![usize::MAX; n];
    let mut trees: Vec<Tree> = Vec::new();
    for &v in members {
        let r = find(&mut parent, v);
        if index[r] == usize::MAX {
            index[r] = trees.len();
            trees.push(Tree {
                vertices: Vec::new(),
                edges: Vec::new(),
            });
        }
        trees[index[r]].vertices.push(v);
    }
    for &(a, b) in edges {
        let r = find(&mut parent, a);
        trees[index[r]].edges.push((a, b));
    }
    trees
}

/// Minimum spanning forest of `members` with exactly `m` components:
/// a minimum spanning tree with its `m - 1` heaviest edges removed.
/// Requires `members.len() >= m`.
pub(crate) fn spanning_forest(g: &MetricGraph, members: &[usize], m: usize) -> (f64, Vec<(usize, usize)>) {
    let s = members.len();
    if s <= m {
        return (0.0, Vec::new());
    }
    let mut in_tree = vec![false; s];
    let mut best = vec![f64::INFINITY; s];
    let mut link = vec![0usize; s];
    let mut mst = Vec::with_capacity(s - 1);
    in_tree[0] = true;
    for j in 1..s {
        best[j] = g.dist(members[0], members[j]);
    }
    for _ in 1..s {
        let mut pick = usize::MAX;
        for j in 0..s {
            if !in_tree[j] && (pick == usize::MAX || best[j] < best[pick]) {
                pick = j;
            }
        }
        in_tree[pick] = true;
        let (a, b) = (members[link[pick]], members[pick]);
        mst.push((a.min(b), a.max(b)));
        for j in 0..s {
            if !in_tree[j] {
                let d = g.dist(members[pick], members[j]);
                if d < best[j] {
                    best[j] = d;
                    link[j] = pick;
                }
            }
        }
    }
    mst.sort_by(|a, b| g.dist(b.0, b.1).total_cmp(&g.dist(a.0, a.1)).then(a.cmp(b)));
    mst.drain(..m - 1);
    let weight = mst.iter().map(|&(a, b)| g.dist(a, b)).sum();
    (weight, mst)
}

/// Add/drop local search over the spanned set for `w + 2·π(unspanned)`.
fn local_search(g: &MetricGraph, pi: &Penalties, m: usize, mut spanned: Vec<bool>) -> Forest {
    let n = g.n();
    let eval = |mask: &[bool]| -> f64 {
        let members: Vec<usize> = (0..n).filter(|&v| mask[v]).collect();
        spanning_forest(g, &members, m).0 + 2.0 * pi.unspanned(mask)
    };
    let mut current = eval(&spanned);
    let mut size = spanned.iter().filter(|&&s| s).count();
    loop {
        let mut improved = false;
        for v in 0..n {
            if spanned[v] && size <= m {
                continue;
            }
            spanned[v] = !spanned[v];
            let value = eval(&spanned);
            if value < current - EPS * current.abs().max(1.0) {
                current = value;
                size = if spanned[v] { size + 1 } else { size - 1 };
                improved = true;
            } else {
                spanned[v] = !spanned[v];
            }
        }
        if !improved {
            break;
        }
    }
    let members: Vec<usize> = (0..n).filter(|&v| spanned[v]).collect();
    let (_, edges) = spanning_forest(g, &members, m);
    Forest::assemble(g, pi, trees_from_edges(n, &members, &edges))
}

/// Shortcuts a doubled-edge Euler tour of `tree` into a simple path on the
/// same vertices with `w(P) ≤ 2·w(T)`.
///
/// The tour starts at the lowest id and visits children in ascending id
/// order; the heaviest edge of the shortcut cycle (lowest position on ties)
/// is the one left out.
pub fn tree_to_path(g: &MetricGraph, tree: &Tree) -> Result<Path> {
    let order = preorder(g.n(), tree)?;
    let q = order.len();
    if q == 1 {
        return Ok(Path::trivial(order[0]));
    }
    let mut cut = 0;
    let mut heaviest = f64::NEG_INFINITY;
    for i in 0..q {
        let d = g.dist(order[i], order[(i + 1) % q]);
        if d > heaviest {
            heaviest = d;
            cut = i;
        }
    }
    let vertices: Vec<usize> = (1..=q).map(|s| order[(cut + s) % q]).collect();
    Path::new(g, vertices)
}

fn preorder(n: usize, tree: &Tree) -> Result<Vec<usize>> {
    let vs = &tree.vertices;
    if vs.is_empty() || tree.edges.len() + 1 != vs.len() {
        return Err(Error::NotATree);
    }
    let mut member = vec![false; n];
    for &v in vs {
        if v >= n {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
        if std::mem::replace(&mut member[v], true) {
            return Err(Error::NotATree);
        }
    }
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(a, b) in &tree.edges {
        if a >= n || b >= n || !member[a] || !member[b] || a == b {
            return Err(Error::NotATree);
        }
        adj[a].push(b);
        adj[b].push(a);
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    let root = *vs.iter().min().expect("nonempty");
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(vs.len());
    let mut stack = vec![root];
    while let Some(v) = stack.pop() {
        if std::mem::replace(&mut seen[v], true) {
            continue;
        }
        order.push(v);
        stack.extend(adj[v].iter().rev().filter(|&&c| !seen[c]));
    }
    if order.len() != vs.len() {
        return Err(Error::NotATree);
    }
    Ok(order)
}

/// `m` vertex-disjoint paths with `w + 4·π(unspanned) ≤ 4·opt`.
pub fn solve_pcp(g: &MetricGraph, pi: &Penalties, m: usize) -> Result<(PathSet, LmpCertificate)> {
    let forest = solve_pcf(g, pi, m)?;
    let paths = forest
        .trees
        .iter()
        .map(|t| tree_to_path(g, t))
        .collect::<Result<Vec<_>>>()?;
    let ps = PathSet::new(paths);
    let cert = LmpCertificate::new(4.0, ps.cost, forest.unspanned_penalty);
    Ok((ps, cert))
}
