//! JSON instance files and deterministic instance generators.
//!
//! A file holds either `{"points": [[x, y], ...]}` for a Euclidean metric or
//! `{"edges": [[u, v, w], ...], "n": n}` whose shortest-path closure becomes
//! the metric. `sensors`, `speed` and `period` are optional and default to 1.

use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{BscInstance, MetricGraph};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<[f64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<(usize, usize, f64)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sensors: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub speed: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub period: Option<f64>,
}

impl InstanceFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInstance(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("instance serializes");
        s.push('\n');
        s
    }

    pub fn graph(&self) -> Result<MetricGraph> {
        match (&self.points, &self.edges) {
            (Some(pts), None) => {
                if self.n.is_some_and(|n| n != pts.len()) {
                    return Err(Error::InvalidInstance("n disagrees with the number of points".into()));
                }
                MetricGraph::from_points(pts)
            }
            (None, Some(edges)) => {
                let n = self
                    .n
                    .ok_or_else(|| Error::InvalidInstance("an edge list needs \"n\"".into()))?;
                MetricGraph::metric_closure(n, edges)
            }
            (Some(_), Some(_)) => Err(Error::InvalidInstance("give either points or edges, not both".into())),
            (None, None) => Err(Error::InvalidInstance("missing points or edges".into())),
        }
    }

    pub fn bsc(&self) -> Result<BscInstance> {
        BscInstance::new(
            self.graph()?,
            self.sensors.unwrap_or(1),
            self.speed.unwrap_or(1.0),
            self.period.unwrap_or(1.0),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenKind {
    /// Points uniform in the unit square.
    Euclidean,
    /// Complete graph with weights uniform in `[0.1, 1]`, then closed.
    RandomMetric,
    /// Collinear points with unit spacing.
    Line,
    /// Vertex 0 joined to every other vertex by an edge of weight in `[0.5, 1.5]`.
    Star,
}

impl FromStr for GenKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euclidean" => Ok(Self::Euclidean),
            "random-metric" => Ok(Self::RandomMetric),
            "line" => Ok(Self::Line),
            "star" => Ok(Self::Star),
            other => Err(Error::InvalidParameter(format!("unknown instance kind {other:?}"))),
        }
    }
}

fn round6(x: f64) -> f64 {
    (x * 1e6).round() / 1e6
}

/// Builds an instance from a seeded ChaCha stream. Equal arguments give
/// identical files.
pub fn generate(kind: GenKind, n: usize, seed: u64) -> Result<InstanceFile> {
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut file = InstanceFile::default();
    match kind {
        GenKind::Euclidean => {
            file.points = Some((0..n).map(|_| [round6(rng.gen()), round6(rng.gen())]).collect());
        }
        GenKind::Line => {
            file.points = Some((0..n).map(|i| [i as f64, 0.0]).collect());
        }
        GenKind::RandomMetric => {
            let mut edges = Vec::new();
            for u in 0..n {
                for v in (u + 1)..n {
                    edges.push((u, v, round6(rng.gen_range(0.1..=1.0))));
                }
            }
            file.edges = Some(edges);
            file.n = Some(n);
        }
        GenKind::Star => {
            file.edges = Some((1..n).map(|v| (0, v, round6(rng.gen_range(0.5..=1.5)))).collect());
            file.n = Some(n);
        }
    }
    Ok(file)
}
