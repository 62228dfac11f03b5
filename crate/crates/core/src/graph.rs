//! Metric graphs, simple paths and vertex-disjoint path sets.
//!
//! Every solver in this crate works on a [`MetricGraph`]: a complete,
//! symmetric distance matrix over dense vertex ids `0..n` that satisfies the
//! triangle inequality. Non-metric input is never rejected; it is embedded by
//! taking its shortest-path closure.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::TOL;

/// Complete symmetric distance matrix satisfying the triangle inequality.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricGraph {
    n: usize,
    dist: Vec<f64>,
}

impl MetricGraph {
    /// Shortest-path closure of an undirected weighted edge list.
    ///
    /// Parallel edges keep the lighter weight and self loops are ignored.
    pub fn metric_closure(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut dist = vec![f64::INFINITY; n * n];
        for v in 0..n {
            dist[v * n + v] = 0.0;
        }
        for &(u, v, w) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if !w.is_finite() {
                return Err(Error::NonFinite(format!("edge ({u}, {v})")));
            }
            if w < 0.0 {
                return Err(Error::NegativeWeight { u, v, weight: w });
            }
            if u != v && w < dist[u * n + v] {
                dist[u * n + v] = w;
                dist[v * n + u] = w;
            }
        }
        floyd_warshall(n, &mut dist);
        if dist.iter().any(|d| d.is_infinite()) {
            return Err(Error::Disconnected);
        }
        Ok(Self { n, dist })
    }

    /// Closure of a full (possibly non-metric, possibly asymmetric) matrix.
    /// Each pair is symmetrised to the lighter of its two directions.
    pub fn from_matrix(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::NotSquare);
        }
        let mut edges = Vec::with_capacity(n * n / 2);
        for u in 0..n {
            for v in (u + 1)..n {
                edges.push((u, v, rows[u][v].min(rows[v][u])));
            }
        }
        Self::metric_closure(n, &edges)
    }

    /// Euclidean metric over planar points.
    pub fn from_points(points: &[[f64; 2]]) -> Result<Self> {
        let n = points.len();
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        if points.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("point coordinate".into()));
        }
        let mut dist = vec![0.0; n * n];
        for u in 0..n {
            for v in (u + 1)..n {
                let d = (points[u][0] - points[v][0]).hypot(points[u][1] - points[v][1]);
                dist[u * n + v] = d;
                dist[v * n + u] = d;
            }
        }
        Ok(Self { n, dist })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn dist(&self, u: usize, v: usize) -> f64 {
        self.dist[u * self.n + v]
    }

    pub fn max_distance(&self) -> f64 {
        self.dist.iter().copied().fold(0.0, f64::max)
    }

    /// True iff every distance is at most 1.
    pub fn is_normalized(&self) -> bool {
        self.max_distance() <= 1.0
    }

    /// All distances multiplied by `factor` (which must be positive).
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            n: self.n,
            dist: self.dist.iter().map(|d| d * factor).collect(),
        }
    }

    /// Distances of all unordered pairs `u < v`.
    pub fn pair_distances(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).flat_map(move |u| ((u + 1)..self.n).map(move |v| self.dist(u, v)))
    }

    /// Sum of consecutive distances along `vertices`; 0 for a trivial path.
    pub fn path_weight(&self, vertices: &[usize]) -> Result<f64> {
        check_simple(self.n, vertices)?;
        Ok(self.walk_weight(vertices))
    }

    /// Weight of a vertex sequence without simplicity or range checks.
    pub(crate) fn walk_weight(&self, vertices: &[usize]) -> f64 {
        vertices.windows(2).map(|w| self.dist(w[0], w[1])).fold(0.0, |a, b| a + b)
    }

    /// First violated triangle inequality `(u, v, w)`, if any.
    pub fn triangle_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.n;
        for u in 0..n {
            for v in 0..n {
                for w in 0..n {
                    if self.dist(u, w) > self.dist(u, v) + self.dist(v, w) + TOL {
                        return Some((u, v, w));
                    }
                }
            }
        }
        None
    }
}

fn floyd_warshall(n: usize, dist: &mut [f64]) {
    for k in 0..n {
        for i in 0..n {
            let dik = dist[i * n + k];
            if dik.is_infinite() {
                continue;
            }
            for j in 0..n {
                let via = dik + dist[k * n + j];
                if via < dist[i * n + j] {
                    dist[i * n + j] = via;
                }
            }
        }
    }
}

fn check_simple(n: usize, vertices: &[usize]) -> Result<()> {
    let mut seen = vec![false; n];
    for &v in vertices {
        if v >= n {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
        if std::mem::replace(&mut seen[v], true) {
            return Err(Error::NotSimplePath(v));
        }
    }
    Ok(())
}

/// Simple path: an ordered list of distinct vertices and its weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Path {
    pub vertices: Vec<usize>,
    pub weight: f64,
}

impl Path {
    pub fn new(g: &MetricGraph, vertices: Vec<usize>) -> Result<Self> {
        let weight = g.path_weight(&vertices)?;
        Ok(Self { vertices, weight })
    }

    pub fn trivial(v: usize) -> Self {
        Self {
            vertices: vec![v],
            weight: 0.0,
        }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.vertices.len() == 1
    }
}

/// `m` pairwise vertex-disjoint paths with their spanned count and total cost.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathSet {
    pub paths: Vec<Path>,
    pub spanned: usize,
    pub cost: f64,
}

impl PathSet {
    pub fn new(paths: Vec<Path>) -> Self {
        let spanned = paths.iter().map(Path::len).sum();
        let cost = paths.iter().map(|p| p.weight).fold(0.0, |a, b| a + b);
        Self {
            paths,
            spanned,
            cost,
        }
    }

    /// Builds a path set from raw vertex lists, recomputing every weight.
    pub fn from_vertex_lists(g: &MetricGraph, lists: Vec<Vec<usize>>) -> Result<Self> {
        let paths = lists
            .into_iter()
            .map(|vs| Path::new(g, vs))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(paths))
    }

    /// `m` trivial paths on the `m` lowest-id vertices.
    pub fn trivial(m: usize) -> Self {
        Self::new((0..m).map(Path::trivial).collect())
    }

    pub fn m(&self) -> usize {
        self.paths.len()
    }

    /// Membership mask over `0..n`.
    pub fn spanned_mask(&self, n: usize) -> Vec<bool> {
        let mut mask = vec![false; n];
        for p in &self.paths {
            for &v in &p.vertices {
                if v < n {
                    mask[v] = true;
                }
            }
        }
        mask
    }

    pub fn vertex_lists(&self) -> Vec<Vec<usize>> {
        self.paths.iter().map(|p| p.vertices.clone()).collect()
    }
}

/// First problem found by [`validate_pathset`].
#[derive(Debug, Clone, PartialEq)]
pub enum PathSetViolation {
    EmptyPath { path: usize },
    OutOfRange { path: usize, vertex: usize },
    NotSimple { path: usize, vertex: usize },
    VertexShared { vertex: usize },
    WeightMismatch { path: usize, stored: f64, actual: f64 },
    SpannedMismatch { stored: usize, actual: usize },
    CostMismatch { stored: f64, actual: f64 },
}

impl fmt::Display for PathSetViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::EmptyPath { path } => write!(f, "path {path} is empty"),
            Self::OutOfRange { path, vertex } => {
                write!(f, "path {path} uses vertex {vertex} which is out of range")
            }
            Self::NotSimple { path, vertex } => {
                write!(f, "path {path} is not a simple path: vertex {vertex} repeated")
            }
            Self::VertexShared { vertex } => write!(f, "vertex {vertex} shared"),
            Self::WeightMismatch {
                path,
                stored,
                actual,
            } => write!(f, "weight mismatch on path {path}: stored {stored}, actual {actual}"),
            Self::SpannedMismatch { stored, actual } => {
                write!(f, "spanned mismatch: stored {stored}, actual {actual}")
            }
            Self::CostMismatch { stored, actual } => {
                write!(f, "cost mismatch: stored {stored}, actual {actual}")
            }
        }
    }
}

/// Checks simplicity, disjointness and the stored weight/cost bookkeeping.
pub fn validate_pathset(g: &MetricGraph, ps: &PathSet) -> std::result::Result<(), PathSetViolation> {
    let n = g.n();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    for (i, p) in ps.paths.iter().enumerate() {
        if p.vertices.is_empty() {
            return Err(PathSetViolation::EmptyPath { path: i });
        }
        for &v in &p.vertices {
            if v >= n {
                return Err(PathSetViolation::OutOfRange { path: i, vertex: v });
            }
            match owner[v] {
                Some(j) if j == i => return Err(PathSetViolation::NotSimple { path: i, vertex: v }),
                Some(_) => return Err(PathSetViolation::VertexShared { vertex: v }),
                None => owner[v] = Some(i),
            }
        }
        let actual = g.walk_weight(&p.vertices);
        if (actual - p.weight).abs() > TOL * actual.max(1.0) {
            return Err(PathSetViolation::WeightMismatch {
                path: i,
                stored: p.weight,
                actual,
            });
        }
    }
    let spanned: usize = ps.paths.iter().map(Path::len).sum();
    if spanned != ps.spanned {
        return Err(PathSetViolation::SpannedMismatch {
            stored: ps.spanned,
            actual: spanned,
        });
    }
    let cost: f64 = ps.paths.iter().map(|p| g.walk_weight(&p.vertices)).fold(0.0, |a, b| a + b);
    if (cost - ps.cost).abs() > TOL * cost.max(1.0) {
        return Err(PathSetViolation::CostMismatch {
            stored: ps.cost,
            actual: cost,
        });
    }
    Ok(())
}

/// A budgeted sweep coverage instance: `sensors` mobile sensors moving at
/// `speed` must revisit points within every `period`.
#[derive(Debug, Clone, PartialEq)]
pub struct BscInstance {
    pub graph: MetricGraph,
    pub sensors: usize,
    pub speed: f64,
    pub period: f64,
}

impl BscInstance {
    pub fn new(graph: MetricGraph, sensors: usize, speed: f64, period: f64) -> Result<Self> {
        if sensors == 0 {
            return Err(Error::InvalidParameter("sensor count must be at least 1".into()));
        }
        if !(speed > 0.0 && speed.is_finite()) {
            return Err(Error::InvalidParameter(format!("speed must be positive, got {speed}")));
        }
        if !(period > 0.0 && period.is_finite()) {
            return Err(Error::InvalidParameter(format!("period must be positive, got {period}")));
        }
        Ok(Self {
            graph,
            sensors,
            speed,
            period,
        })
    }

    /// Total walking length available to all sensors in one period, `N·a·t`.
    pub fn budget(&self) -> f64 {
        self.sensors as f64 * self.speed * self.period
    }

    /// Longest segment one sensor can sweep back and forth, `a·t/2`.
    pub fn window(&self) -> f64 {
        self.speed * self.period / 2.0
    }
}

/// An instance rescaled so that every distance is at most 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Normalized {
    pub instance: BscInstance,
    /// Original length per normalized length unit (1 when nothing changed).
    pub scale: f64,
}

/// Divides all distances and the speed by the largest distance when it
/// exceeds 1. Budget ratios, and hence every feasibility test, are unchanged.
pub fn normalize(inst: &BscInstance) -> Normalized {
    let w = inst.graph.max_distance();
    if w <= 1.0 {
        return Normalized {
            instance: inst.clone(),
            scale: 1.0,
        };
    }
    Normalized {
        instance: BscInstance {
            graph: inst.graph.scaled(1.0 / w),
            sensors: inst.sensors,
            speed: inst.speed / w,
            period: inst.period,
        },
        scale: w,
    }
}
