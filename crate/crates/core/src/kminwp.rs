//! Bicriteria approximation for k-MinWP_m: `m` vertex-disjoint paths spanning
//! at least `k` vertices at minimum total weight.
//!
//! [`guess_budget`] bisects a budget estimate `L`, probing the prize-collecting
//! path solver with the uniform penalty `L / ((1 - α)·k)`. If the probe at the
//! final estimate spans more than `2k` vertices, [`trim`] halves paths until
//! between `k` and `2k` vertices remain.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{MetricGraph, Path, PathSet};
use crate::pc::{solve_pcp, Penalties};

/// Outcome of the budget bisection.
#[derive(Debug, Clone, PartialEq)]
pub struct GuessResult {
    /// Final upper estimate `L1`; its probe spans more than `αk` vertices.
    pub upper: f64,
    /// Final lower bracket `L2`.
    pub lower: f64,
    /// Initial upper bound: total length of the `k - m` longest edges.
    pub initial_upper: f64,
    pub pathset: PathSet,
    /// Number of solver probes.
    pub iterations: usize,
}

fn check_args(g: &MetricGraph, m: usize, k: usize, alpha: f64, eps: f64) -> Result<()> {
    if m == 0 || k < m || k > g.n() {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= m <= k <= n, got m = {m}, k = {k}, n = {}",
            g.n()
        )));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidParameter(format!("eps must be positive, got {eps}")));
    }
    Ok(())
}

/// Total length of the `count` longest edges of the complete graph.
pub fn longest_edges_total(g: &MetricGraph, count: usize) -> f64 {
    if count == 0 {
        return 0.0;
    }
    let mut d: Vec<f64> = g.pair_distances().collect();
    d.sort_by(|a, b| b.total_cmp(a));
    d.iter().take(count).fold(0.0, |a, b| a + b)
}

/// Bisection on the budget `L ∈ [0, Q]`.
///
/// A probe that spans at most `αk` vertices raises the lower bracket,
/// anything else lowers the upper one. Returns the path set of the last
/// probe that lowered `L1`; if none did, `L1 = Q` is probed once more.
pub fn guess_budget(g: &MetricGraph, m: usize, k: usize, alpha: f64, eps: f64) -> Result<GuessResult> {
    check_args(g, m, k, alpha, eps)?;
    let n = g.n();
    let q = longest_edges_total(g, k - m);
    if k == m || q == 0.0 {
        return Ok(GuessResult {
            upper: 0.0,
            lower: 0.0,
            initial_upper: q,
            pathset: PathSet::trivial(m),
            iterations: 0,
        });
    }
    let scale = (1.0 - alpha) * k as f64;
    let probe = |budget: f64| -> Result<PathSet> {
        let pi = Penalties::uniform(n, budget / scale)?;
        Ok(solve_pcp(g, &pi, m)?.0)
    };
    let threshold = alpha * k as f64;
    let (mut upper, mut lower) = (q, 0.0);
    let mut at_upper = None;
    let mut iterations = 0;
    while upper - lower > eps {
        let mid = 0.5 * (upper + lower);
        let ps = probe(mid)?;
        iterations += 1;
        if (ps.spanned as f64) <= threshold {
            lower = mid;
        } else {
            upper = mid;
            at_upper = Some(ps);
        }
    }
    let pathset = match at_upper {
        Some(ps) => ps,
        None => {
            iterations += 1;
            probe(upper)?
        }
    };
    log::debug!(
        "guess_budget m={m} k={k}: L1={upper:.6} L2={lower:.6} Q={q:.6} spans {} in {iterations} probes",
        pathset.spanned
    );
    Ok(GuessResult {
        upper,
        lower,
        initial_upper: q,
        pathset,
        iterations,
    })
}

/// The two halves of a non-trivial path and the weights charged to them.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitResult {
    pub left: Path,
    pub right: Path,
    /// Weight of the left half plus the edge joining it to the rest.
    pub left_charge: f64,
    /// Weight of the right half plus the edge joining it to the rest.
    pub right_charge: f64,
    /// Middle vertex for odd vertex counts.
    pub middle: Option<usize>,
}

impl SplitResult {
    pub fn half_len(&self) -> usize {
        self.left.len()
    }
}

/// Splits a path with `q ≥ 2` vertices into halves of `⌊q/2⌋` vertices.
///
/// For even `q` the middle edge is charged to both halves; for odd `q` the
/// middle vertex belongs to neither and each half is charged its edge to it.
pub fn split_path(g: &MetricGraph, p: &Path) -> Result<SplitResult> {
    let v = &p.vertices;
    let q = v.len();
    if q < 2 {
        return Err(Error::TrivialSplit);
    }
    let h = q / 2;
    let (left, right, lj, rj, middle) = if q % 2 == 0 {
        let mid = g.dist(v[h - 1], v[h]);
        (&v[..h], &v[h..], mid, mid, None)
    } else {
        (
            &v[..h],
            &v[h + 1..],
            g.dist(v[h - 1], v[h]),
            g.dist(v[h], v[h + 1]),
            Some(v[h]),
        )
    };
    let left = Path {
        vertices: left.to_vec(),
        weight: g.walk_weight(left),
    };
    let right = Path {
        vertices: right.to_vec(),
        weight: g.walk_weight(right),
    };
    Ok(SplitResult {
        left_charge: left.weight + lj,
        right_charge: right.weight + rj,
        left,
        right,
        middle,
    })
}

/// Removes the half with the larger charge-per-vertex ratio; ties drop the
/// left half. The result has `⌈q/2⌉` vertices.
fn trim_once(g: &MetricGraph, p: &Path) -> Result<Path> {
    let s = split_path(g, p)?;
    // Both halves have the same vertex count, so the ratios compare as charges.
    let drop_right = s.right_charge > s.left_charge + crate::TOL * s.left_charge.abs().max(1.0);
    let mut vertices = Vec::with_capacity(p.len() - s.half_len());
    let weight;
    if drop_right {
        vertices.extend_from_slice(&s.left.vertices);
        vertices.extend(s.middle);
        weight = p.weight - s.right_charge;
    } else {
        vertices.extend(s.middle);
        vertices.extend_from_slice(&s.right.vertices);
        weight = p.weight - s.left_charge;
    }
    let exact = g.walk_weight(&vertices);
    debug_assert!((exact - weight).abs() <= 1e-6 * p.weight.max(1.0));
    Ok(Path {
        vertices,
        weight: exact,
    })
}

/// Result of [`trim`].
#[derive(Debug, Clone, PartialEq)]
pub struct Trimmed {
    pub pathset: PathSet,
    /// Number of full rounds `M`.
    pub rounds: usize,
    /// Times each path (in input order) was halved.
    pub trims: Vec<usize>,
}

/// Halves every non-trivial path once per round while more than `2k`
/// vertices are spanned. The loop condition is checked between full rounds.
/// Input already spanning at most `2k` vertices is returned unchanged.
pub fn trim(g: &MetricGraph, ps: &PathSet, k: usize) -> Result<Trimmed> {
    if k == 0 {
        return Err(Error::TrimPrecondition("k must be positive".into()));
    }
    if ps.m() > 2 * k && ps.spanned > 2 * k {
        return Err(Error::TrimPrecondition(format!(
            "{} paths can never span at most 2k = {} vertices",
            ps.m(),
            2 * k
        )));
    }
    let mut paths = ps.paths.clone();
    let mut trims = vec![0; paths.len()];
    let mut spanned = ps.spanned;
    let mut rounds = 0;
    while spanned > 2 * k {
        for (p, t) in paths.iter_mut().zip(trims.iter_mut()) {
            if !p.is_trivial() {
                *p = trim_once(g, p)?;
                *t += 1;
            }
        }
        spanned = paths.iter().map(Path::len).sum();
        rounds += 1;
    }
    Ok(Trimmed {
        pathset: PathSet::new(paths),
        rounds,
        trims,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Mode {
    /// Spans at least `k` vertices.
    Feasible,
    /// Spans more than `αk` but fewer than `k` vertices.
    Bicriteria,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BicriteriaSolution {
    pub pathset: PathSet,
    pub mode: Mode,
    pub alpha: f64,
    pub eps: f64,
    /// Trim rounds `M`, 0 when untrimmed.
    pub rounds: usize,
    /// Budget estimate `L1` from the bisection.
    pub budget_estimate: f64,
    pub iterations: usize,
    /// Vertices spanned before trimming.
    pub untrimmed_spanned: usize,
}

/// Approximation factor for a solution of the given mode, excluding the
/// additive `ε` slack: `16/(1-α)` when feasible after trimming and
/// `(8-4α)/(1-α)` otherwise.
pub fn ratio_bound(mode: Mode, trimmed: bool, alpha: f64) -> f64 {
    match (mode, trimmed) {
        (Mode::Feasible, true) => 16.0 / (1.0 - alpha),
        _ => (8.0 - 4.0 * alpha) / (1.0 - alpha),
    }
}

/// Budget bisection followed by trimming when more than `2k` vertices are spanned.
pub fn solve_kminwp(g: &MetricGraph, m: usize, k: usize, alpha: f64, eps: f64) -> Result<BicriteriaSolution> {
    let guess = guess_budget(g, m, k, alpha, eps)?;
    let untrimmed_spanned = guess.pathset.spanned;
    let (pathset, rounds) = if untrimmed_spanned > 2 * k {
        let t = trim(g, &guess.pathset, k)?;
        (t.pathset, t.rounds)
    } else {
        (guess.pathset, 0)
    };
    let mode = if pathset.spanned >= k {
        Mode::Feasible
    } else {
        Mode::Bicriteria
    };
    Ok(BicriteriaSolution {
        pathset,
        mode,
        alpha,
        eps,
        rounds,
        budget_estimate: guess.upper,
        iterations: guess.iterations,
        untrimmed_spanned,
    })
}
