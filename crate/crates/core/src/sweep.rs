//! Sweep coverage scheduling on the paths produced by the orienteering solver.
//!
//! A sensor assigned the arc-length interval `[s, e]` of a path, with
//! `e - s ≤ a·t/2`, walks back and forth between its ends and so revisits
//! every point of the interval within each period `t`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{normalize, validate_pathset, BscInstance, MetricGraph, Path, PathSet};
use crate::mop::{solve_mop, vertex_positions, MopParams, MopSolution};
use crate::TOL;

/// Points of interest laid out along one path.
#[derive(Debug, Clone, PartialEq)]
pub struct LineInstance {
    /// Non-decreasing arc-length positions.
    pub positions: Vec<f64>,
    /// Longest interval one sensor can sweep, `a·t/2`.
    pub window: f64,
}

impl LineInstance {
    pub fn new(positions: Vec<f64>, window: f64) -> Result<Self> {
        if positions.windows(2).any(|w| !(w[0] <= w[1])) {
            return Err(Error::InvalidParameter("positions must be sorted".into()));
        }
        if !(window > 0.0 && window.is_finite()) {
            return Err(Error::InvalidParameter(format!("window must be positive, got {window}")));
        }
        Ok(Self { positions, window })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LineSolution {
    pub count: usize,
    /// Intervals `[s, e]` in increasing order, at most one per sensor.
    pub intervals: Vec<(f64, f64)>,
}

struct LineDp {
    /// first[i]: 1-based index of the leftmost point an interval ending at
    /// point `i` can reach.
    first: Vec<usize>,
    /// c[i * width + j]: best count over the first `i` points with `j` sensors.
    c: Vec<usize>,
    width: usize,
}

impl LineDp {
    fn build(li: &LineInstance, sensors: usize) -> Self {
        let q = li.positions.len();
        let cap = sensors.min(q);
        let width = cap + 1;
        let mut first = vec![0; q + 1];
        let mut f = 1;
        for i in 1..=q {
            while li.positions[i - 1] - li.positions[f - 1] > li.window + TOL {
                f += 1;
            }
            first[i] = f;
        }
        let mut c = vec![0; (q + 1) * width];
        for i in 1..=q {
            for j in 1..width {
                let skip = c[(i - 1) * width + j];
                let take = c[(first[i] - 1) * width + j - 1] + (i - first[i] + 1);
                c[i * width + j] = skip.max(take);
            }
        }
        Self { first, c, width }
    }

    fn best(&self, i: usize, sensors: usize) -> usize {
        self.c[i * self.width + sensors.min(self.width - 1)]
    }
}

/// Maximum number of points coverable by `sensors` intervals of length at
/// most `window`, with a witness.
pub fn solve_line(li: &LineInstance, sensors: usize) -> LineSolution {
    let q = li.positions.len();
    let dp = LineDp::build(li, sensors);
    let mut j = sensors.min(dp.width - 1);
    let count = dp.best(q, j);
    let mut intervals = Vec::new();
    let mut i = q;
    while i > 0 && j > 0 {
        if dp.c[i * dp.width + j] == dp.c[(i - 1) * dp.width + j] {
            i -= 1;
        } else {
            let f = dp.first[i];
            intervals.push((li.positions[f - 1], li.positions[i - 1]));
            i = f - 1;
            j -= 1;
        }
    }
    intervals.reverse();
    LineSolution { count, intervals }
}

/// `opt[j]` for `j = 0..=max_sensors`.
pub fn line_table(li: &LineInstance, max_sensors: usize) -> Vec<usize> {
    let dp = LineDp::build(li, max_sensors);
    (0..=max_sensors).map(|j| dp.best(li.positions.len(), j)).collect()
}

/// Sensor counts per path maximizing the total covered count.
#[derive(Debug, Clone, PartialEq)]
pub struct Allocation {
    pub counts: Vec<usize>,
    pub covered: usize,
    paths: usize,
    total: usize,
    table: Vec<Option<usize>>,
}

impl Allocation {
    /// Best count over paths `1..=i` using at most `budget` sensors, path `i`
    /// receiving exactly `own`. `None` when `own > budget`.
    pub fn value(&self, i: usize, budget: usize, own: usize) -> Option<usize> {
        if i == 0 {
            return Some(0);
        }
        if i > self.paths || budget > self.total || own > self.total {
            return None;
        }
        let w = self.total + 1;
        self.table[((i - 1) * w + budget) * w + own]
    }
}

/// Allocation dynamic program over paths.
///
/// `per_path_opt[i][j]` is the best count on path `i` with `j` sensors; rows
/// shorter than `total + 1` are extended with their last entry. The sensors
/// on the previous path are capped by that path's vertex count.
pub fn allocate_sensors(per_path_opt: &[Vec<usize>], path_sizes: &[usize], total: usize) -> Result<Allocation> {
    if per_path_opt.len() != path_sizes.len() {
        return Err(Error::InvalidParameter(format!(
            "{} opt rows for {} paths",
            per_path_opt.len(),
            path_sizes.len()
        )));
    }
    if per_path_opt.iter().any(|row| row.first().is_some_and(|&x| x != 0)) {
        return Err(Error::InvalidParameter("opt rows must start at 0".into()));
    }
    let opt = |i: usize, j: usize| -> usize {
        let row = &per_path_opt[i];
        row.get(j).or(row.last()).copied().unwrap_or(0)
    };
    let p = path_sizes.len();
    let w = total + 1;
    let idx = |i: usize, k: usize, x: usize| ((i - 1) * w + k) * w + x;
    let mut table = vec![None; p * w * w];
    for i in 1..=p {
        let prev_cap = if i == 1 { 0 } else { path_sizes[i - 2] };
        for k in 0..=total {
            for x in 0..=k {
                let rest = k - x;
                let prev = if i == 1 {
                    Some(0)
                } else {
                    (0..=rest.min(prev_cap)).filter_map(|j| table[idx(i - 1, rest, j)]).max()
                };
                table[idx(i, k, x)] = prev.map(|v| v + opt(i - 1, x));
            }
        }
    }

    let mut counts = vec![0; p];
    let mut covered = 0;
    if p > 0 {
        let argmax = |i: usize, k: usize, hi: usize| -> (usize, usize) {
            let mut best = (0, table[idx(i, k, 0)].unwrap_or(0));
            for x in 1..=hi {
                if let Some(v) = table[idx(i, k, x)] {
                    if v > best.1 {
                        best = (x, v);
                    }
                }
            }
            best
        };
        let (x, v) = argmax(p, total, total);
        covered = v;
        counts[p - 1] = x;
        let mut budget = total - x;
        for i in (1..p).rev() {
            let (x, _) = argmax(i, budget, budget.min(path_sizes[i - 1]));
            counts[i - 1] = x;
            budget -= x;
        }
    }
    Ok(Allocation {
        counts,
        covered,
        paths: p,
        total,
        table,
    })
}

/// One sensor sweeping `[start, end]` along path `path`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Assignment {
    pub sensor: usize,
    pub path: usize,
    #[serde(rename = "s")]
    pub start: f64,
    #[serde(rename = "e")]
    pub end: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub assignments: Vec<Assignment>,
    pub speed: f64,
    pub period: f64,
}

impl Schedule {
    fn scaled(&self, factor: f64) -> Self {
        Self {
            assignments: self
                .assignments
                .iter()
                .map(|a| Assignment {
                    start: a.start * factor,
                    end: a.end * factor,
                    ..*a
                })
                .collect(),
            speed: self.speed * factor,
            period: self.period,
        }
    }
}

/// Blocks of length `a·t/2` tiled along each path, keeping the richest ones.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockSchedule {
    pub schedule: Schedule,
    pub total_blocks: usize,
}

/// Tiles every path with consecutive blocks of length `a·t/2` (the last one
/// shorter) and assigns one sensor to each of the `sensors` blocks holding
/// the most vertices. A vertex on a block boundary counts for the left block.
pub fn richest_blocks(g: &MetricGraph, ps: &PathSet, sensors: usize, speed: f64, period: f64) -> Result<BlockSchedule> {
    let budget = sensors as f64 * speed * period;
    if ps.cost > budget + TOL {
        return Err(Error::OverBudget { cost: ps.cost, budget });
    }
    let window = speed * period / 2.0;
    // (vertex count, path, start, end)
    let mut blocks: Vec<(usize, usize, f64, f64)> = Vec::new();
    for (pid, p) in ps.paths.iter().enumerate() {
        let w = p.weight;
        let count = ((w / window).ceil() as usize).max(1);
        let first = blocks.len();
        for b in 0..count {
            let start = b as f64 * window;
            blocks.push((0, pid, start, (start + window).min(w)));
        }
        for pos in vertex_positions(g, p) {
            let b = ((pos / window).ceil() as usize).saturating_sub(1).min(count - 1);
            blocks[first + b].0 += 1;
        }
    }
    let total_blocks = blocks.len();
    let mut order: Vec<usize> = (0..total_blocks).filter(|&i| blocks[i].0 > 0).collect();
    order.sort_by(|&a, &b| blocks[b].0.cmp(&blocks[a].0).then(a.cmp(&b)));
    order.truncate(sensors);
    order.sort_unstable();
    let assignments = order
        .iter()
        .enumerate()
        .map(|(sensor, &i)| Assignment {
            sensor,
            path: blocks[i].1,
            start: blocks[i].2,
            end: blocks[i].3,
        })
        .collect();
    Ok(BlockSchedule {
        schedule: Schedule {
            assignments,
            speed,
            period,
        },
        total_blocks,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ScheduleViolation {
    PathSet(String),
    TooManyAssignments { count: usize, sensors: usize },
    SensorOutOfRange(usize),
    DuplicateSensor(usize),
    UnknownPath { sensor: usize, path: usize },
    Reversed { sensor: usize },
    IntervalTooLong { sensor: usize, length: f64, window: f64 },
    OffPath { sensor: usize, start: f64, end: f64, length: f64 },
}

impl fmt::Display for ScheduleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::PathSet(e) => write!(f, "invalid path set: {e}"),
            Self::TooManyAssignments { count, sensors } => {
                write!(f, "{count} assignments for {sensors} sensors")
            }
            Self::SensorOutOfRange(s) => write!(f, "sensor {s} out of range"),
            Self::DuplicateSensor(s) => write!(f, "sensor {s} assigned twice"),
            Self::UnknownPath { sensor, path } => write!(f, "sensor {sensor} assigned to unknown path {path}"),
            Self::Reversed { sensor } => write!(f, "sensor {sensor} has an interval with start after end"),
            Self::IntervalTooLong { sensor, length, window } => {
                write!(f, "sensor {sensor} interval length {length} exceeds a*t/2 = {window}")
            }
            Self::OffPath {
                sensor,
                start,
                end,
                length,
            } => write!(f, "sensor {sensor} interval [{start}, {end}] leaves its path [0, {length}]"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub covered: usize,
    pub covered_vertices: Vec<usize>,
    pub violations: Vec<ScheduleViolation>,
    /// Exact orienteering optimum at budget `N·a·t`, when known.
    pub upper_bound: Option<usize>,
    pub ratio: Option<f64>,
}

impl CoverageReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn with_upper_bound(mut self, ub: usize) -> Self {
        self.upper_bound = Some(ub);
        self.ratio = Some(if ub == 0 { 1.0 } else { self.covered as f64 / ub as f64 });
        self
    }
}

/// Checks the schedule against the instance and counts the vertices it covers.
pub fn verify_schedule(inst: &BscInstance, ps: &PathSet, s: &Schedule) -> CoverageReport {
    let g = &inst.graph;
    let window = inst.window();
    let mut violations = Vec::new();
    if let Err(e) = validate_pathset(g, ps) {
        violations.push(ScheduleViolation::PathSet(e.to_string()));
    }
    if s.assignments.len() > inst.sensors {
        violations.push(ScheduleViolation::TooManyAssignments {
            count: s.assignments.len(),
            sensors: inst.sensors,
        });
    }
    let mut seen = vec![false; inst.sensors];
    let mut covered_mask = vec![false; g.n()];
    for a in &s.assignments {
        if a.sensor >= inst.sensors {
            violations.push(ScheduleViolation::SensorOutOfRange(a.sensor));
        } else if std::mem::replace(&mut seen[a.sensor], true) {
            violations.push(ScheduleViolation::DuplicateSensor(a.sensor));
        }
        let Some(p) = ps.paths.get(a.path) else {
            violations.push(ScheduleViolation::UnknownPath {
                sensor: a.sensor,
                path: a.path,
            });
            continue;
        };
        if !(a.start <= a.end) {
            violations.push(ScheduleViolation::Reversed { sensor: a.sensor });
            continue;
        }
        if a.end - a.start > window + TOL {
            violations.push(ScheduleViolation::IntervalTooLong {
                sensor: a.sensor,
                length: a.end - a.start,
                window,
            });
            continue;
        }
        if p.vertices.iter().any(|&v| v >= g.n()) {
            continue;
        }
        let length = g.walk_weight(&p.vertices);
        if a.start < -TOL || a.end > length + TOL {
            violations.push(ScheduleViolation::OffPath {
                sensor: a.sensor,
                start: a.start,
                end: a.end,
                length,
            });
            continue;
        }
        for (&v, pos) in p.vertices.iter().zip(vertex_positions(g, p)) {
            if a.start - TOL <= pos && pos <= a.end + TOL {
                covered_mask[v] = true;
            }
        }
    }
    let covered_vertices: Vec<usize> = (0..g.n()).filter(|&v| covered_mask[v]).collect();
    CoverageReport {
        covered: covered_vertices.len(),
        covered_vertices,
        violations,
        upper_bound: None,
        ratio: None,
    }
}

/// Which construction produced the returned schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleSource {
    Allocation,
    Blocks,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BscSolution {
    /// Paths in the units of the input instance.
    pub pathset: PathSet,
    pub schedule: Schedule,
    pub report: CoverageReport,
    pub mop: MopSolution,
    /// Length unit divisor applied before solving.
    pub scale: f64,
    pub allocation: Vec<usize>,
    pub allocation_covered: usize,
    pub blocks_covered: usize,
    pub total_blocks: usize,
    pub source: ScheduleSource,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BscParams {
    pub alpha: f64,
    pub eps: f64,
    pub fit_windows: bool,
    pub threads: usize,
}

impl Default for BscParams {
    fn default() -> Self {
        let p = MopParams::new(1, 0.0);
        Self {
            alpha: p.alpha,
            eps: p.eps,
            fit_windows: p.fit_windows,
            threads: p.threads,
        }
    }
}

/// Orienteering with budget `N·a·t` and `min(N, n)` paths, then sensors
/// spread over the paths by the allocation program; the richest-blocks
/// schedule replaces it when that covers more.
pub fn solve_bsc(inst: &BscInstance, params: &BscParams) -> Result<BscSolution> {
    let norm = normalize(inst);
    let ni = &norm.instance;
    let g = &ni.graph;
    let sensors = ni.sensors;
    let mop = solve_mop(
        g,
        &MopParams {
            m: sensors.min(g.n()),
            budget: ni.budget(),
            alpha: params.alpha,
            eps: params.eps,
            fit_windows: params.fit_windows,
            threads: params.threads,
        },
    )?;
    let ps = &mop.pathset;

    let lines: Vec<LineInstance> = ps
        .paths
        .iter()
        .map(|p| LineInstance::new(vertex_positions(g, p), ni.window()))
        .collect::<Result<_>>()?;
    let tables: Vec<Vec<usize>> = lines.iter().map(|li| line_table(li, sensors)).collect();
    let sizes: Vec<usize> = ps.paths.iter().map(Path::len).collect();
    let alloc = allocate_sensors(&tables, &sizes, sensors)?;
    let mut assignments = Vec::new();
    for (pid, (li, &count)) in lines.iter().zip(&alloc.counts).enumerate() {
        for (s, e) in solve_line(li, count).intervals {
            assignments.push(Assignment {
                sensor: assignments.len(),
                path: pid,
                start: s,
                end: e,
            });
        }
    }
    let dp_schedule = Schedule {
        assignments,
        speed: ni.speed,
        period: ni.period,
    };
    let blocks = richest_blocks(g, ps, sensors, ni.speed, ni.period)?;
    let dp_covered = verify_schedule(ni, ps, &dp_schedule).covered;
    let blocks_covered = verify_schedule(ni, ps, &blocks.schedule).covered;
    let (chosen, source) = if dp_covered >= blocks_covered {
        (dp_schedule, ScheduleSource::Allocation)
    } else {
        (blocks.schedule, ScheduleSource::Blocks)
    };

    let pathset = PathSet::from_vertex_lists(&inst.graph, ps.vertex_lists())?;
    let schedule = chosen.scaled(norm.scale);
    let report = verify_schedule(inst, &pathset, &schedule);
    log::info!(
        "bsc: {} paths spanning {}, allocation covers {dp_covered}, blocks cover {blocks_covered}",
        pathset.m(),
        pathset.spanned
    );
    Ok(BscSolution {
        pathset,
        schedule,
        report,
        mop,
        scale: norm.scale,
        allocation: alloc.counts,
        allocation_covered: dp_covered,
        blocks_covered,
        total_blocks: blocks.total_blocks,
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_line(n: usize) -> MetricGraph {
        let pts: Vec<[f64; 2]> = (0..n).map(|i| [i as f64, 0.0]).collect();
        MetricGraph::from_points(&pts).unwrap()
    }

    #[test]
    fn line_examples() {
        let li = LineInstance::new(vec![0.0, 1.0, 2.0, 10.0], 2.0).unwrap();
        let s = solve_line(&li, 1);
        assert_eq!(s.count, 3);
        assert_eq!(s.intervals, vec![(0.0, 2.0)]);

        let li = LineInstance::new(vec![0.0, 5.0, 10.0], 1.0).unwrap();
        let s = solve_line(&li, 3);
        assert_eq!(s.count, 3);
        assert_eq!(s.intervals, vec![(0.0, 0.0), (5.0, 5.0), (10.0, 10.0)]);

        let li = LineInstance::new(vec![0.0, 1.0, 2.0, 3.0], 3.0).unwrap();
        assert_eq!(solve_line(&li, 1).intervals, vec![(0.0, 3.0)]);
        assert_eq!(solve_line(&li, 0), LineSolution { count: 0, intervals: vec![] });
    }

    #[test]
    fn allocation_examples() {
        let a = allocate_sensors(&[vec![0, 3, 5], vec![0, 4, 4]], &[5, 4], 2).unwrap();
        assert_eq!(a.counts, vec![1, 1]);
        assert_eq!(a.covered, 7);
        assert_eq!(a.value(0, 2, 0), Some(0));

        let a = allocate_sensors(&[vec![0, 2, 4, 4]], &[4], 3).unwrap();
        assert_eq!(a.counts, vec![2]);
        assert_eq!(a.covered, 4);

        let a = allocate_sensors(&[vec![0, 0], vec![0, 0]], &[1, 1], 1).unwrap();
        assert_eq!(a.covered, 0);
    }

    #[test]
    fn blocks_on_five_vertex_line() {
        let g = unit_line(5);
        let ps = PathSet::from_vertex_lists(&g, vec![(0..5).collect()]).unwrap();
        let b = richest_blocks(&g, &ps, 2, 1.0, 4.0).unwrap();
        assert_eq!(b.total_blocks, 2);
        let spans: Vec<(f64, f64)> = b.schedule.assignments.iter().map(|a| (a.start, a.end)).collect();
        assert_eq!(spans, vec![(0.0, 2.0), (2.0, 4.0)]);
        let inst = BscInstance::new(g, 2, 1.0, 4.0).unwrap();
        assert_eq!(verify_schedule(&inst, &ps, &b.schedule).covered, 5);
    }

    #[test]
    fn blocks_on_trivial_paths() {
        let g = unit_line(3);
        let ps = PathSet::trivial(3);
        let b = richest_blocks(&g, &ps, 3, 1.0, 1.0).unwrap();
        assert_eq!(b.total_blocks, 3);
        assert!(b.schedule.assignments.iter().all(|a| a.start == 0.0 && a.end == 0.0));
    }

    #[test]
    fn blocks_reject_over_budget() {
        let g = unit_line(5);
        let ps = PathSet::from_vertex_lists(&g, vec![(0..5).collect()]).unwrap();
        assert!(richest_blocks(&g, &ps, 1, 1.0, 1.0).is_err());
    }

    #[test]
    fn verify_flags_long_interval() {
        let g = unit_line(4);
        let ps = PathSet::from_vertex_lists(&g, vec![(0..4).collect()]).unwrap();
        let inst = BscInstance::new(g, 1, 1.0, 2.0).unwrap();
        let s = Schedule {
            assignments: vec![Assignment {
                sensor: 0,
                path: 0,
                start: 0.0,
                end: 1.1,
            }],
            speed: 1.0,
            period: 2.0,
        };
        let r = verify_schedule(&inst, &ps, &s);
        assert!(matches!(r.violations[0], ScheduleViolation::IntervalTooLong { .. }));
        let empty = Schedule {
            assignments: vec![],
            speed: 1.0,
            period: 2.0,
        };
        let r = verify_schedule(&inst, &ps, &empty);
        assert!(r.is_valid());
        assert_eq!(r.covered, 0);
    }

    #[test]
    fn one_sensor_per_vertex_covers_all() {
        let pts: Vec<[f64; 2]> = (0..6).map(|i| [(i * 5 % 7) as f64, (i * 2 % 3) as f64]).collect();
        let g = MetricGraph::from_points(&pts).unwrap();
        let inst = BscInstance::new(g, 6, 0.3, 0.5).unwrap();
        let sol = solve_bsc(&inst, &BscParams::default()).unwrap();
        assert!(sol.report.is_valid());
        assert_eq!(sol.report.covered, 6);
    }

    #[test]
    fn five_point_line_one_sensor() {
        let g = unit_line(5);
        let inst = BscInstance::new(g, 1, 1.0, 2.0).unwrap();
        let sol = solve_bsc(&inst, &BscParams::default()).unwrap();
        assert!(sol.report.is_valid(), "{:?}", sol.report.violations);
        assert!(sol.report.covered >= 2);
        let recount = verify_schedule(&inst, &sol.pathset, &sol.schedule);
        assert_eq!(recount.covered, sol.report.covered);
    }
}
