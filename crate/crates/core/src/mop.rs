//! Multi-orienteering: `m` vertex-disjoint paths of total weight at most `B`
//! spanning as many vertices as possible.
//!
//! For every target size `k` the bicriteria k-MinWP_m solver produces a path
//! set. Each of its paths is laid out as a segment of its own length, cut into
//! `ls` equal pieces, and only the piece holding the most vertices is kept.
//! Optionally the solution is also cut to the best budget-fitting window per
//! path. The candidate spanning the most vertices within the budget wins.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{MetricGraph, Path, PathSet};
use crate::kminwp::{solve_kminwp, Mode};
use crate::TOL;

/// `α* = 11 − 4√7`, where the two branches of [`guaranteed_ratio`] meet.
pub fn alpha_star() -> f64 {
    11.0 - 4.0 * 7f64.sqrt()
}

/// Ratio guaranteed by the branch whose k-MinWP_m solution is feasible.
pub fn feasible_branch_ratio(alpha: f64) -> f64 {
    (1.0 - alpha) / (17.0 - alpha)
}

/// Ratio guaranteed by the branch whose k-MinWP_m solution is bicriteria.
pub fn bicriteria_branch_ratio(alpha: f64) -> f64 {
    alpha * (1.0 - alpha) / (9.0 - 5.0 * alpha)
}

/// Worst-case fraction of the optimum spanned, up to `O(ε)`.
pub fn guaranteed_ratio(alpha: f64) -> f64 {
    feasible_branch_ratio(alpha).min(bicriteria_branch_ratio(alpha))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MopParams {
    pub m: usize,
    pub budget: f64,
    pub alpha: f64,
    pub eps: f64,
    /// Also offer, for every `k`, the best choice of one contiguous window
    /// per k-MinWP_m path that fits the budget.
    pub fit_windows: bool,
    /// Worker threads for the loop over `k`; 1 runs sequentially.
    pub threads: usize,
}

impl MopParams {
    pub fn new(m: usize, budget: f64) -> Self {
        Self {
            m,
            budget,
            alpha: alpha_star(),
            eps: 0.01,
            fit_windows: true,
            threads: 1,
        }
    }

    fn validate(&self, n: usize) -> Result<()> {
        if !(self.budget >= 0.0) || !self.budget.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "budget must be finite and nonnegative, got {}",
                self.budget
            )));
        }
        if self.m == 0 || self.m > n {
            return Err(Error::InvalidPathCount { m: self.m, n });
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidParameter(format!("alpha must lie in (0, 1), got {}", self.alpha)));
        }
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return Err(Error::InvalidParameter(format!("eps must be positive, got {}", self.eps)));
        }
        if self.threads == 0 {
            return Err(Error::InvalidParameter("thread count must be at least 1".into()));
        }
        Ok(())
    }
}

/// Segment count used to cut the paths of a k-MinWP_m solution.
pub fn segment_count(mode: Mode, alpha: f64, eps: f64) -> usize {
    let bound = match mode {
        Mode::Feasible => 16.0 / (1.0 - alpha),
        Mode::Bicriteria => (8.0 - 4.0 * alpha) / (1.0 - alpha),
    };
    (bound + eps).ceil() as usize
}

/// Arc-length position of every vertex along the path.
pub fn vertex_positions(g: &MetricGraph, p: &Path) -> Vec<f64> {
    let mut out = Vec::with_capacity(p.len());
    let mut acc = 0.0;
    for (i, &v) in p.vertices.iter().enumerate() {
        if i > 0 {
            acc += g.dist(p.vertices[i - 1], v);
        }
        out.push(acc);
    }
    out
}

/// A path cut into `ls` equal pieces of its arc length.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentDivision {
    pub path: Path,
    pub ls: usize,
    /// `ls + 1` cut points from 0 to the path weight.
    pub boundaries: Vec<f64>,
    /// Vertices falling into each piece, in path order.
    pub segments: Vec<Vec<usize>>,
}

/// Pieces are half-open except the last; a vertex on a cut point goes right.
pub fn divide_segments(g: &MetricGraph, p: &Path, ls: usize) -> Result<SegmentDivision> {
    if ls == 0 {
        return Err(Error::InvalidParameter("segment count must be at least 1".into()));
    }
    let w = p.weight;
    let boundaries = (0..=ls).map(|i| w * i as f64 / ls as f64).collect();
    let mut segments = vec![Vec::new(); ls];
    for (&v, pos) in p.vertices.iter().zip(vertex_positions(g, p)) {
        let idx = if w > 0.0 {
            ((pos * ls as f64 / w).floor() as usize).min(ls - 1)
        } else {
            0
        };
        segments[idx].push(v);
    }
    Ok(SegmentDivision {
        path: p.clone(),
        ls,
        boundaries,
        segments,
    })
}

/// The piece with the most vertices, lowest index on ties.
pub fn heaviest_subpath(g: &MetricGraph, p: &Path, ls: usize) -> Result<Path> {
    let div = divide_segments(g, p, ls)?;
    let mut best = 0;
    for (i, s) in div.segments.iter().enumerate() {
        if s.len() > div.segments[best].len() {
            best = i;
        }
    }
    Path::new(g, div.segments[best].clone())
}

/// Keeps one contiguous window of every path, maximizing the total vertex
/// count subject to total weight at most `budget`. Every path keeps at least
/// one vertex, so the result always has as many paths as `ps`.
pub fn fit_windows(g: &MetricGraph, ps: &PathSet, budget: f64) -> Result<PathSet> {
    // For each path and window size c, the lightest window (lowest start on ties).
    let lightest: Vec<Vec<(f64, usize)>> = ps
        .paths
        .iter()
        .map(|p| {
            let pos = vertex_positions(g, p);
            (1..=pos.len())
                .map(|c| {
                    (0..=pos.len() - c)
                        .map(|s| (pos[s + c - 1] - pos[s], s))
                        .fold((f64::INFINITY, 0), |best, x| if x.0 < best.0 { x } else { best })
                })
                .collect()
        })
        .collect();

    // cost[i][t]: least weight for `t` vertices over the first `i` paths.
    let total = ps.spanned;
    let mut cost = vec![vec![f64::INFINITY; total + 1]; ps.m() + 1];
    let mut pick = vec![vec![0usize; total + 1]; ps.m() + 1];
    cost[0][0] = 0.0;
    for (i, row) in lightest.iter().enumerate() {
        for t in 0..=total {
            if cost[i][t].is_infinite() {
                continue;
            }
            for (c, &(w, _)) in row.iter().enumerate() {
                let (t2, val) = (t + c + 1, cost[i][t] + w);
                if val < cost[i + 1][t2] {
                    cost[i + 1][t2] = val;
                    pick[i + 1][t2] = c + 1;
                }
            }
        }
    }
    let mut t = (0..=total)
        .rev()
        .find(|&t| cost[ps.m()][t] <= budget + TOL)
        .unwrap_or(ps.m());
    let mut lists = vec![Vec::new(); ps.m()];
    for i in (0..ps.m()).rev() {
        let c = pick[i + 1][t].max(1);
        let start = lightest[i][c - 1].1;
        lists[i] = ps.paths[i].vertices[start..start + c].to_vec();
        t -= c;
    }
    PathSet::from_vertex_lists(g, lists)
}

/// What happened for one target size `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KDiagnostic {
    pub k: usize,
    pub mode: Mode,
    pub ls: usize,
    /// Vertices spanned and weight of the cut-down path set.
    pub spanned: usize,
    pub cost: f64,
    /// Vertices spanned and weight of the uncut k-MinWP_m solution.
    pub solution_spanned: usize,
    pub solution_cost: f64,
    pub trim_rounds: usize,
    pub budget_estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Choice {
    /// Cut-down path set for the given `k`.
    Segments(usize),
    /// Budget-fitted windows of the k-MinWP_m solution for the given `k`.
    Windows(usize),
    /// Nothing fit; `m` trivial paths.
    Trivial,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MopSolution {
    pub pathset: PathSet,
    pub choice: Choice,
    pub per_k: Vec<KDiagnostic>,
}

struct Candidate {
    diag: KDiagnostic,
    cut: PathSet,
    windows: Option<PathSet>,
}

fn candidate_for(g: &MetricGraph, params: &MopParams, k: usize) -> Result<Candidate> {
    let sol = solve_kminwp(g, params.m, k, params.alpha, params.eps)?;
    let ls = segment_count(sol.mode, params.alpha, params.eps);
    let cut = PathSet::new(
        sol.pathset
            .paths
            .iter()
            .map(|p| heaviest_subpath(g, p, ls))
            .collect::<Result<_>>()?,
    );
    Ok(Candidate {
        diag: KDiagnostic {
            k,
            mode: sol.mode,
            ls,
            spanned: cut.spanned,
            cost: cut.cost,
            solution_spanned: sol.pathset.spanned,
            solution_cost: sol.pathset.cost,
            trim_rounds: sol.rounds,
            budget_estimate: sol.budget_estimate,
        },
        windows: params
            .fit_windows
            .then(|| fit_windows(g, &sol.pathset, params.budget))
            .transpose()?,
        cut,
    })
}

/// Runs the k-MinWP_m solver for every `k` from `m` to `n` and keeps the
/// path set spanning the most vertices within the budget, smallest `k` on
/// ties. The output never exceeds the budget.
pub fn solve_mop(g: &MetricGraph, params: &MopParams) -> Result<MopSolution> {
    params.validate(g.n())?;
    let ks: Vec<usize> = (params.m..=g.n()).collect();
    let candidates: Vec<Candidate> = if params.threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(params.threads)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
        pool.install(|| ks.par_iter().map(|&k| candidate_for(g, params, k)).collect::<Result<_>>())?
    } else {
        ks.iter().map(|&k| candidate_for(g, params, k)).collect::<Result<_>>()?
    };

    let mut best: Option<(usize, Choice)> = None;
    let mut consider = |spanned: usize, cost: f64, choice: Choice| {
        if cost <= params.budget + TOL && best.as_ref().is_none_or(|(s, _)| spanned > *s) {
            best = Some((spanned, choice));
        }
    };
    for c in &candidates {
        consider(c.cut.spanned, c.cut.cost, Choice::Segments(c.diag.k));
        if let Some(w) = &c.windows {
            consider(w.spanned, w.cost, Choice::Windows(c.diag.k));
        }
    }

    let choice = best.map(|(_, c)| c).unwrap_or(Choice::Trivial);
    let pathset = match &choice {
        Choice::Segments(k) => candidates[k - params.m].cut.clone(),
        Choice::Windows(k) => candidates[k - params.m].windows.clone().expect("windows computed"),
        Choice::Trivial => PathSet::trivial(params.m),
    };
    log::debug!("mop: chose {choice:?}, spanned {} cost {}", pathset.spanned, pathset.cost);
    Ok(MopSolution {
        pathset,
        choice,
        per_k: candidates.into_iter().map(|c| c.diag).collect(),
    })
}
