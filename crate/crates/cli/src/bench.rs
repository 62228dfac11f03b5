//! Seeded benchmark suites: one row per (instance, ε, α) written as CSV,
//! plus an SVG histogram and a plain-text summary.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use sweepcover::graph::BscInstance;
use sweepcover::instance::{generate, GenKind};
use sweepcover::mop::guaranteed_ratio;
use sweepcover::oracle::{bsc_upper_bound, build_path_cover_table, opt_mop};
use sweepcover::sweep::{solve_bsc, BscParams};
use sweepcover::TOL;

use crate::{default_alpha, REPORT_ORACLE_MAX_N};

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    /// Euclidean and random-metric instances with 4 to 10 vertices.
    Small,
    /// Euclidean instances with 10, 20, 40 and 60 vertices.
    Scaling,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(long, value_enum, default_value_t = Suite::Small)]
    suite: Suite,
    /// Instances in the small suite, or instances per size in the scaling suite.
    #[arg(long)]
    count: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_delimiter = ',', default_value = "0.01")]
    eps: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_values_t = vec![default_alpha()])]
    alpha: Vec<f64>,
    /// Attach exact upper bounds (instances with at most 10 vertices).
    #[arg(long)]
    oracle: bool,
    #[arg(long)]
    literal: bool,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Directory receiving bench.csv, ratio_histogram.svg and summary.txt.
    #[arg(long, default_value = "bench-out")]
    output: PathBuf,
}

struct Member {
    name: String,
    instance: BscInstance,
}

#[derive(Debug, Serialize)]
struct Row {
    instance: String,
    ratio: Option<f64>,
    #[serde(rename = "UB")]
    ub: Option<usize>,
    covered: usize,
    time: f64,
}

struct Outcome {
    rows: Vec<Row>,
    valid: bool,
    /// Spanned count of the orienteering step over its exact optimum.
    mop_ratios: Vec<f64>,
}

fn members(suite: Suite, count: usize, seed: u64) -> Result<Vec<Member>> {
    let mut out = Vec::new();
    let specs: Vec<(usize, u64)> = match suite {
        Suite::Small => (0..count as u64).map(|i| (4 + (i % 7) as usize, seed + i)).collect(),
        Suite::Scaling => [10, 20, 40, 60]
            .into_iter()
            .flat_map(|n| (0..count as u64).map(move |i| (n, seed + i)))
            .collect(),
    };
    for (idx, (n, s)) in specs.into_iter().enumerate() {
        let kind = if suite == Suite::Small && idx % 2 == 1 {
            GenKind::RandomMetric
        } else {
            GenKind::Euclidean
        };
        let mut file = generate(kind, n, s)?;
        file.sensors = Some(1 + idx % 3);
        file.speed = Some(1.0);
        file.period = Some(0.2 + 0.1 * (idx % 5) as f64);
        let kind_name = if kind == GenKind::Euclidean { "euclidean" } else { "random-metric" };
        out.push(Member {
            name: format!("{kind_name}-n{n}-s{s}"),
            instance: file.bsc()?,
        });
    }
    Ok(out)
}

fn run_member(member: &Member, a: &BenchArgs) -> Result<Outcome> {
    let inst = &member.instance;
    let n = inst.graph.n();
    let exact = if a.oracle && n <= REPORT_ORACLE_MAX_N {
        let m = inst.sensors.min(n);
        let table = build_path_cover_table(&inst.graph, m)?;
        let ub = bsc_upper_bound(&table, inst.sensors, inst.speed, inst.period)?;
        Some((ub, opt_mop(&table, m, inst.budget())?))
    } else {
        None
    };
    let mut out = Outcome {
        rows: Vec::new(),
        valid: true,
        mop_ratios: Vec::new(),
    };
    for &eps in &a.eps {
        for &alpha in &a.alpha {
            let params = BscParams {
                alpha,
                eps,
                fit_windows: !a.literal,
                threads: 1,
            };
            let start = Instant::now();
            let sol = solve_bsc(inst, &params)?;
            let time = start.elapsed().as_secs_f64();
            let mut ratio = None;
            if let Some((ub, mop_opt)) = exact {
                let r = if ub == 0 { 1.0 } else { sol.report.covered as f64 / ub as f64 };
                if r < guaranteed_ratio(alpha) / 3.0 - TOL {
                    log::warn!("{}: ratio {r} below the guarantee", member.name);
                    out.valid = false;
                }
                ratio = Some(r);
                if mop_opt > 0 {
                    out.mop_ratios.push(sol.mop.pathset.spanned as f64 / mop_opt as f64);
                }
            }
            out.valid &= sol.report.is_valid();
            out.rows.push(Row {
                instance: format!("{}-eps{eps}-a{alpha:.4}", member.name),
                ratio,
                ub: exact.map(|e| e.0),
                covered: sol.report.covered,
                time,
            });
        }
    }
    Ok(out)
}

pub fn run(a: &BenchArgs) -> Result<bool> {
    if a.threads == 0 {
        bail!("--threads must be at least 1");
    }
    if a.eps.iter().any(|&e| !(e > 0.0)) || a.alpha.iter().any(|&x| !(x > 0.0 && x < 1.0)) {
        bail!("--eps values must be positive and --alpha values in (0, 1)");
    }
    let count = a.count.unwrap_or(match a.suite {
        Suite::Small => 50,
        Suite::Scaling => 3,
    });
    let members = members(a.suite, count, a.seed)?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(a.threads).build()?;
    let outcomes: Vec<Outcome> =
        pool.install(|| members.par_iter().map(|m| run_member(m, a)).collect::<Result<_>>())?;

    std::fs::create_dir_all(&a.output).with_context(|| format!("creating {}", a.output.display()))?;
    let mut writer = csv::Writer::from_path(a.output.join("bench.csv"))?;
    for row in outcomes.iter().flat_map(|o| &o.rows) {
        writer.serialize(row)?;
    }
    writer.flush()?;

    let rows: Vec<&Row> = outcomes.iter().flat_map(|o| &o.rows).collect();
    let ratios: Vec<f64> = rows.iter().filter_map(|r| r.ratio).collect();
    let mop_ratios: Vec<f64> = outcomes.iter().flat_map(|o| o.mop_ratios.iter().copied()).collect();
    write_histogram(&a.output.join("ratio_histogram.svg"), &ratios)?;
    let summary = summary(&rows, &ratios, &mop_ratios);
    std::fs::write(a.output.join("summary.txt"), &summary)?;
    print!("{summary}");
    Ok(outcomes.iter().all(|o| o.valid))
}

fn summary(rows: &[&Row], ratios: &[f64], mop_ratios: &[f64]) -> String {
    let mut s = String::new();
    let total_time: f64 = rows.iter().map(|r| r.time).sum();
    let _ = writeln!(s, "rows          {}", rows.len());
    let _ = writeln!(s, "total time    {total_time:.3} s");
    if ratios.is_empty() {
        let _ = writeln!(s, "ratio         (no oracle)");
    } else {
        let mut sorted = ratios.to_vec();
        sorted.sort_by(f64::total_cmp);
        let mean = sorted.iter().sum::<f64>() / sorted.len() as f64;
        let _ = writeln!(s, "ratio min     {:.4}", sorted[0]);
        let _ = writeln!(s, "ratio median  {:.4}", sorted[sorted.len() / 2]);
        let _ = writeln!(s, "ratio mean    {mean:.4}");
        let optimal = sorted.iter().filter(|&&r| r >= 1.0 - TOL).count();
        let _ = writeln!(s, "ratio = 1     {optimal}/{}", sorted.len());
    }
    if let Some(min) = mop_ratios.iter().copied().min_by(f64::total_cmp) {
        let _ = writeln!(s, "mop ratio min {min:.4}");
    }
    s
}

const BINS: usize = 10;

fn write_histogram(path: &Path, ratios: &[f64]) -> Result<()> {
    let mut counts = [0usize; BINS];
    for &r in ratios {
        let bin = ((r.clamp(0.0, 1.0) * BINS as f64) as usize).min(BINS - 1);
        counts[bin] += 1;
    }
    std::fs::write(path, histogram_svg(&counts)).with_context(|| format!("writing {}", path.display()))
}

fn histogram_svg(counts: &[usize; BINS]) -> String {
    let (width, height, margin) = (600.0, 360.0, 50.0);
    let plot_w = width - 2.0 * margin;
    let plot_h = height - 2.0 * margin;
    let max = counts.iter().copied().max().unwrap_or(0).max(1) as f64;
    let bar_w = plot_w / BINS as f64;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" text-anchor="middle" font-family="sans-serif" font-size="16">covered / upper bound</text>"#,
        width / 2.0
    );
    for (i, &c) in counts.iter().enumerate() {
        let h = plot_h * c as f64 / max;
        let x = margin + i as f64 * bar_w;
        let y = height - margin - h;
        let _ = writeln!(
            s,
            r##"<rect x="{x:.1}" y="{y:.1}" width="{:.1}" height="{h:.1}" fill="#4a78b0" stroke="black"/>"##,
            bar_w - 2.0
        );
        if c > 0 {
            let _ = writeln!(
                s,
                r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-family="sans-serif" font-size="11">{c}</text>"#,
                x + bar_w / 2.0,
                y - 4.0
            );
        }
    }
    for i in 0..=BINS {
        let x = margin + i as f64 * bar_w;
        let _ = writeln!(
            s,
            r#"<text x="{x:.1}" y="{:.1}" text-anchor="middle" font-family="sans-serif" font-size="11">{:.1}</text>"#,
            height - margin + 16.0,
            i as f64 / BINS as f64
        );
    }
    let _ = writeln!(
        s,
        r#"<line x1="{margin}" y1="{0}" x2="{1}" y2="{0}" stroke="black"/>"#,
        height - margin,
        width - margin
    );
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_is_deterministic_and_in_range() {
        let a = members(Suite::Small, 14, 3).unwrap();
        let b = members(Suite::Small, 14, 3).unwrap();
        assert_eq!(a.len(), 14);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.name, y.name);
            assert_eq!(x.instance, y.instance);
            assert!((4..=10).contains(&x.instance.graph.n()));
        }
    }

    #[test]
    fn histogram_has_one_bar_per_bin() {
        let svg = histogram_svg(&[1, 0, 2, 0, 0, 0, 0, 0, 0, 5]);
        assert_eq!(svg.matches("<rect x=").count(), BINS);
        assert!(svg.trim_end().ends_with("</svg>"));
    }
}
