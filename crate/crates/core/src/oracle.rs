//! Exact brute-force optima for small instances.
//!
//! A [`CoverTable`] stores, for every vertex subset `S` and block count
//! `p ≤ m_max`, the minimum total weight of `p` vertex-disjoint blocks that
//! partition `S`. Blocks are simple paths for the path table and trees for
//! the tree table. Partitions are enumerated with the block containing the
//! lowest vertex of `S` first, so each partition is seen once.
//! Memory and time grow like `3^n`, hence the hard cap on `n`.

use crate::error::{Error, Result};
use crate::graph::{MetricGraph, PathSet};
use crate::pc::Penalties;
use crate::TOL;

pub const ORACLE_CAP: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Blocks {
    Paths,
    Trees,
}

#[derive(Debug, Clone)]
pub struct CoverTable {
    n: usize,
    m_max: usize,
    blocks: Blocks,
    /// `cover[S * (m_max + 1) + p]`, `INFINITY` when infeasible.
    cover: Vec<f64>,
    /// First block of the optimal partition of `(S, p)`.
    first: Vec<u32>,
    /// Hamiltonian path DP, only for path tables: `ham[S * n + v]`.
    ham: Vec<f64>,
    pred: Vec<u8>,
}

fn check_size(n: usize, m_max: usize) -> Result<()> {
    if n > ORACLE_CAP {
        return Err(Error::OracleCap { n, cap: ORACLE_CAP });
    }
    if m_max == 0 || m_max > n {
        return Err(Error::InvalidPathCount { m: m_max, n });
    }
    Ok(())
}

/// Minimum-weight covers of every subset by `1..=m_max` vertex-disjoint paths.
pub fn build_path_cover_table(g: &MetricGraph, m_max: usize) -> Result<CoverTable> {
    let n = g.n();
    check_size(n, m_max)?;
    let full = 1usize << n;
    let mut ham = vec![f64::INFINITY; full * n];
    let mut pred = vec![u8::MAX; full * n];
    for v in 0..n {
        ham[(1 << v) * n + v] = 0.0;
    }
    for s in 1..full {
        for v in 0..n {
            let here = ham[s * n + v];
            if s & (1 << v) == 0 || here.is_infinite() {
                continue;
            }
            for u in 0..n {
                if s & (1 << u) != 0 {
                    continue;
                }
                let t = s | (1 << u);
                let cand = here + g.dist(v, u);
                if cand < ham[t * n + u] {
                    ham[t * n + u] = cand;
                    pred[t * n + u] = v as u8;
                }
            }
        }
    }
    let single: Vec<f64> = (0..full)
        .map(|s| (0..n).map(|v| ham[s * n + v]).fold(f64::INFINITY, f64::min))
        .collect();
    let (cover, first) = partition_dp(n, m_max, &single);
    Ok(CoverTable {
        n,
        m_max,
        blocks: Blocks::Paths,
        cover,
        first,
        ham,
        pred,
    })
}

/// Minimum-weight spanning forests of every subset with `1..=m_max` trees.
pub fn build_tree_cover_table(g: &MetricGraph, m_max: usize) -> Result<CoverTable> {
    let n = g.n();
    check_size(n, m_max)?;
    let full = 1usize << n;
    let mut single = vec![f64::INFINITY; full];
    for (s, slot) in single.iter_mut().enumerate().skip(1) {
        *slot = prim(g, s);
    }
    let (cover, first) = partition_dp(n, m_max, &single);
    Ok(CoverTable {
        n,
        m_max,
        blocks: Blocks::Trees,
        cover,
        first,
        ham: Vec::new(),
        pred: Vec::new(),
    })
}

fn prim(g: &MetricGraph, set: usize) -> f64 {
    let members: Vec<usize> = (0..g.n()).filter(|&v| set & (1 << v) != 0).collect();
    let k = members.len();
    let mut done = vec![false; k];
    let mut best = vec![f64::INFINITY; k];
    best[0] = 0.0;
    let mut total = 0.0;
    for _ in 0..k {
        let j = (0..k)
            .filter(|&j| !done[j])
            .min_by(|&a, &b| best[a].total_cmp(&best[b]))
            .expect("unvisited vertex");
        done[j] = true;
        total += best[j];
        for i in 0..k {
            if !done[i] {
                best[i] = best[i].min(g.dist(members[j], members[i]));
            }
        }
    }
    total
}

fn partition_dp(n: usize, m_max: usize, single: &[f64]) -> (Vec<f64>, Vec<u32>) {
    let full = 1usize << n;
    let w = m_max + 1;
    let mut cover = vec![f64::INFINITY; full * w];
    let mut first = vec![0u32; full * w];
    cover[0] = 0.0;
    for s in 1..full {
        cover[s * w + 1] = single[s];
        first[s * w + 1] = s as u32;
    }
    for p in 2..=m_max {
        for s in 1..full {
            if (s.count_ones() as usize) < p {
                continue;
            }
            let low = s & s.wrapping_neg();
            let rest = s ^ low;
            // Enumerate the block containing `low`: low | (submask of rest), proper.
            let mut sub = rest;
            loop {
                let block = low | sub;
                if block != s {
                    let val = single[block] + cover[(s ^ block) * w + p - 1];
                    if val < cover[s * w + p] {
                        cover[s * w + p] = val;
                        first[s * w + p] = block as u32;
                    }
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & rest;
            }
        }
    }
    (cover, first)
}

impl CoverTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m_max(&self) -> usize {
        self.m_max
    }

    /// Minimum weight of `p` blocks partitioning the vertex set `set` (bitmask).
    pub fn value(&self, set: usize, p: usize) -> f64 {
        if p > self.m_max {
            return f64::INFINITY;
        }
        self.cover[set * (self.m_max + 1) + p]
    }

    fn check_m(&self, m: usize) -> Result<()> {
        if m == 0 || m > self.m_max {
            return Err(Error::InvalidPathCount { m, n: self.n });
        }
        Ok(())
    }

    /// Vertex sets of an optimal partition of `(set, p)`.
    pub fn blocks_of(&self, set: usize, p: usize) -> Vec<usize> {
        let w = self.m_max + 1;
        let mut out = Vec::with_capacity(p);
        let (mut s, mut q) = (set, p);
        while q > 0 && s != 0 {
            let b = self.first[s * w + q] as usize;
            out.push(b);
            s ^= b;
            q -= 1;
        }
        out
    }

    /// An explicit optimal path set for `(set, p)` (path tables only).
    pub fn witness(&self, g: &MetricGraph, set: usize, p: usize) -> Option<PathSet> {
        if self.blocks != Blocks::Paths || self.value(set, p).is_infinite() {
            return None;
        }
        let n = self.n;
        let lists = self
            .blocks_of(set, p)
            .into_iter()
            .map(|block| {
                let mut end = (0..n)
                    .filter(|&v| block & (1 << v) != 0)
                    .min_by(|&a, &b| self.ham[block * n + a].total_cmp(&self.ham[block * n + b]))
                    .expect("nonempty block");
                let mut s = block;
                let mut path = vec![end];
                while s.count_ones() > 1 {
                    let prev = self.pred[s * n + end] as usize;
                    s ^= 1 << end;
                    end = prev;
                    path.push(end);
                }
                path
            })
            .collect();
        PathSet::from_vertex_lists(g, lists).ok()
    }

    fn subsets(&self) -> impl Iterator<Item = usize> {
        1..(1usize << self.n)
    }
}

/// `opt_{m,k}`: minimum weight of `m` disjoint paths spanning at least `k` vertices.
pub fn opt_kminwp(table: &CoverTable, m: usize, k: usize) -> Result<f64> {
    Ok(argmin_kminwp(table, m, k)?.0)
}

/// Value and vertex set of an optimal k-MinWP_m solution.
pub fn argmin_kminwp(table: &CoverTable, m: usize, k: usize) -> Result<(f64, usize)> {
    table.check_m(m)?;
    if m > k || k > table.n {
        return Err(Error::InvalidParameter(format!(
            "need m <= k <= n, got m = {m}, k = {k}, n = {}",
            table.n
        )));
    }
    let mut best = (f64::INFINITY, 0);
    for s in table.subsets() {
        if (s.count_ones() as usize) >= k {
            let v = table.value(s, m);
            if v < best.0 {
                best = (v, s);
            }
        }
    }
    Ok(best)
}

fn prize_collecting(table: &CoverTable, pi: &Penalties, m: usize) -> Result<f64> {
    table.check_m(m)?;
    if pi.len() != table.n {
        return Err(Error::PenaltyLength {
            got: pi.len(),
            expected: table.n,
        });
    }
    let p = pi.as_slice();
    let total: f64 = p.iter().sum();
    let mut best = f64::INFINITY;
    for s in table.subsets() {
        if (s.count_ones() as usize) < m {
            continue;
        }
        let inside: f64 = (0..table.n).filter(|&v| s & (1 << v) != 0).map(|v| p[v]).sum();
        best = best.min(table.value(s, m) + (total - inside).max(0.0));
    }
    Ok(best)
}

/// Exact prize-collecting `m`-paths optimum (path table required).
pub fn opt_pcp(table: &CoverTable, pi: &Penalties, m: usize) -> Result<f64> {
    if table.blocks != Blocks::Paths {
        return Err(Error::InvalidParameter("opt_pcp needs a path cover table".into()));
    }
    prize_collecting(table, pi, m)
}

/// Exact prize-collecting `m`-forest optimum (tree table required).
pub fn opt_pcf(table: &CoverTable, pi: &Penalties, m: usize) -> Result<f64> {
    if table.blocks != Blocks::Trees {
        return Err(Error::InvalidParameter("opt_pcf needs a tree cover table".into()));
    }
    prize_collecting(table, pi, m)
}

/// `opt_MO`: most vertices spanned by `m` disjoint paths of total weight ≤ `budget`.
pub fn opt_mop(table: &CoverTable, m: usize, budget: f64) -> Result<usize> {
    table.check_m(m)?;
    if budget < 0.0 {
        return Err(Error::InvalidParameter(format!("budget must be nonnegative, got {budget}")));
    }
    Ok(table
        .subsets()
        .filter(|&s| table.value(s, m) <= budget + TOL)
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap_or(0))
}

/// MOP optimum at budget `N·a·t` with `m = N`; an upper bound on the number
/// of points any schedule of `N` sensors can sweep-cover.
pub fn bsc_upper_bound(table: &CoverTable, sensors: usize, speed: f64, period: f64) -> Result<usize> {
    if sensors == 0 {
        return Ok(0);
    }
    if sensors >= table.n {
        return Ok(table.n);
    }
    opt_mop(table, sensors, sensors as f64 * speed * period)
}
