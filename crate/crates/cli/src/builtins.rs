//! Built-in sampled systems: circle doubling and rotation, the Arnold cat
//! map on a torus lattice, and the static example sets (dyadic interval
//! sample, the fraction ladder, the punctured circle).

use std::sync::Arc;

use num_traits::Zero;

use scaled_homology::metric::{coordinate_distance, FiniteMetricSpace, MetricKind};
use scaled_homology::scalar::{q, q_int, Q};
use scaled_homology::selfmap::SampledSelfMap;

use crate::config::ExperimentConfig;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BuiltinError {
    UnknownName(String),
    BadParameter(String),
}

impl std::fmt::Display for BuiltinError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BuiltinError::UnknownName(n) => write!(f, "unknown builtin system `{n}`"),
            BuiltinError::BadParameter(m) => write!(f, "{m}"),
        }
    }
}

/// A builtin space, its self-map, and the default experiment configuration.
pub struct BuiltinSystem {
    pub name: String,
    pub space: Arc<FiniteMetricSpace>,
    pub map: SampledSelfMap,
    pub config: ExperimentConfig,
    /// Canonical description used for input digests.
    pub descriptor: String,
}

/// Uniform circle sample `{j/n}` under the wraparound metric.
pub fn flat_circle(n: u32) -> Arc<FiniteMetricSpace> {
    let pts: Vec<Vec<Q>> = (0..n).map(|j| vec![q(j as i64, n as i64)]).collect();
    Arc::new(FiniteMetricSpace::from_point_cloud(&pts, MetricKind::FlatCircle).unwrap())
}

/// Full `n × n` torus lattice `{(i/n, j/n)}` under the max of coordinate
/// circle distances. Index of `(i, j)` is `i * n + j`.
pub fn flat_torus_lattice(n: u32) -> Arc<FiniteMetricSpace> {
    let mut pts = Vec::with_capacity((n * n) as usize);
    for i in 0..n {
        for j in 0..n {
            pts.push(vec![q(i as i64, n as i64), q(j as i64, n as i64)]);
        }
    }
    Arc::new(FiniteMetricSpace::from_point_cloud(&pts, MetricKind::FlatTorus).unwrap())
}

/// `{1, 1/2, …, 1/2^k} ∪ {0}` on the line.
pub fn dyadic_interval_sample(k: u32) -> Arc<FiniteMetricSpace> {
    let mut pts: Vec<Vec<Q>> = (0..=k).map(|e| vec![q(1, 1i64 << e)]).collect();
    pts.push(vec![q_int(0)]);
    Arc::new(FiniteMetricSpace::from_point_cloud(&pts, MetricKind::Euclidean).unwrap())
}

/// `{m + i/m : 1 ≤ m ≤ n_max, 0 ≤ i < m}` on the line.
pub fn fraction_ladder_sample(n_max: u32) -> Arc<FiniteMetricSpace> {
    let mut pts = Vec::new();
    for m in 1..=n_max as i64 {
        for i in 0..m {
            pts.push(vec![q_int(m) + q(i, m)]);
        }
    }
    Arc::new(FiniteMetricSpace::from_point_cloud(&pts, MetricKind::Euclidean).unwrap())
}

/// Circle sample with one point removed.
pub fn punctured_circle(n: u32, gap_index: u32) -> Arc<FiniteMetricSpace> {
    let pts: Vec<Vec<Q>> = (0..n)
        .filter(|&j| j != gap_index)
        .map(|j| vec![q(j as i64, n as i64)])
        .collect();
    Arc::new(FiniteMetricSpace::from_point_cloud(&pts, MetricKind::FlatCircle).unwrap())
}

fn require(cond: bool, msg: &str) -> Result<(), BuiltinError> {
    if cond {
        Ok(())
    } else {
        Err(BuiltinError::BadParameter(msg.into()))
    }
}

/// Nearest-point projection of an analytic map onto the sample: each image
/// coordinate vector is snapped to the closest sample point (lowest index
/// on ties). Returns the image table together with the largest projection
/// error — this mode is an approximation and the error says how much.
pub fn project_self_map(
    points: &[Vec<Q>],
    kind: MetricKind,
    images: &[Vec<Q>],
) -> Result<(Vec<u32>, Q), BuiltinError> {
    if points.is_empty() || images.len() != points.len() {
        return Err(BuiltinError::BadParameter(format!(
            "projection needs one image per point ({} points, {} images)",
            points.len(),
            images.len()
        )));
    }
    let mut table = Vec::with_capacity(points.len());
    let mut worst = Q::zero();
    for image in images {
        let mut best: Option<(usize, Q)> = None;
        for (j, p) in points.iter().enumerate() {
            let d = coordinate_distance(kind, image, p)
                .map_err(|e| BuiltinError::BadParameter(e.to_string()))?;
            if best.as_ref().is_none_or(|(_, b)| d < *b) {
                best = Some((j, d));
            }
        }
        let (j, err) = best.expect("non-empty point set");
        table.push(j as u32);
        if err > worst {
            worst = err;
        }
    }
    Ok((table, worst))
}

/// Instantiates a named builtin. Parameters are taken from the fields that
/// apply to the given name (`n`, `step`, `k`, `n_max`, `gap_index`).
pub fn builtin_system(
    name: &str,
    n: Option<u32>,
    step: Option<u32>,
    k: Option<u32>,
    n_max: Option<u32>,
    gap_index: Option<u32>,
) -> Result<BuiltinSystem, BuiltinError> {
    match name {
        "circle_doubling" => {
            let n = n.unwrap_or(512);
            require(n >= 4, "circle_doubling needs n >= 4")?;
            let space = flat_circle(n);
            let image = (0..n).map(|j| (2 * j) % n).collect();
            let map = SampledSelfMap::new(space.clone(), image).expect("closed by construction");
            Ok(BuiltinSystem {
                name: name.into(),
                descriptor: format!("builtin:circle_doubling(n={n})"),
                space,
                map,
                config: ExperimentConfig::circle_defaults(n),
            })
        }
        "circle_rotation" => {
            let n = n.unwrap_or(256);
            let step = step.unwrap_or(1);
            require(n >= 4, "circle_rotation needs n >= 4")?;
            require(step < n, "rotation step must be below n")?;
            let space = flat_circle(n);
            let image = (0..n).map(|j| (j + step) % n).collect();
            let map = SampledSelfMap::new(space.clone(), image).expect("closed by construction");
            Ok(BuiltinSystem {
                name: name.into(),
                descriptor: format!("builtin:circle_rotation(n={n},step={step})"),
                space,
                map,
                config: ExperimentConfig::circle_defaults(n),
            })
        }
        "cat_map" => {
            let n = n.unwrap_or(32);
            require(n >= 4, "cat_map needs n >= 4 per side")?;
            let space = flat_torus_lattice(n);
            // (x, y) -> (2x + y, x + y) mod 1 closes over the full lattice.
            let mut image = Vec::with_capacity((n * n) as usize);
            for i in 0..n {
                for j in 0..n {
                    let x = (2 * i + j) % n;
                    let y = (i + j) % n;
                    image.push(x * n + y);
                }
            }
            let map = SampledSelfMap::new(space.clone(), image).expect("closed by construction");
            Ok(BuiltinSystem {
                name: name.into(),
                descriptor: format!("builtin:cat_map(n={n})"),
                space,
                map,
                config: ExperimentConfig::cat_map_defaults(n),
            })
        }
        "interval_2_12" => {
            let k = k.unwrap_or(8);
            require(k >= 2, "interval_2_12 needs k >= 2")?;
            let space = dyadic_interval_sample(k);
            let map = SampledSelfMap::identity(space.clone());
            Ok(BuiltinSystem {
                name: name.into(),
                descriptor: format!("builtin:interval_2_12(k={k})"),
                space,
                map,
                config: ExperimentConfig {
                    // The scales the sample is built to answer for.
                    scales: (0..=k.saturating_sub(2))
                        .map(|e| q(1, 1i64 << (e + 1)))
                        .collect(),
                    ..ExperimentConfig::static_sample_defaults(1 << k)
                },
            })
        }
        "set_B_2_14" | "set_b_2_14" => {
            let n_max = n_max.unwrap_or(6);
            require(n_max >= 2, "set_B_2_14 needs n_max >= 2")?;
            let space = fraction_ladder_sample(n_max);
            let map = SampledSelfMap::identity(space.clone());
            Ok(BuiltinSystem {
                name: "set_B_2_14".into(),
                descriptor: format!("builtin:set_B_2_14(n_max={n_max})"),
                space,
                map,
                config: ExperimentConfig {
                    scales: vec![q(1, 2), q(2, 5), q(1, 3)],
                    ..ExperimentConfig::static_sample_defaults(n_max * n_max)
                },
            })
        }
        "punctured_circle" => {
            let n = n.unwrap_or(256);
            let gap = gap_index.unwrap_or(0);
            require(n >= 8, "punctured_circle needs n >= 8")?;
            require(gap < n, "gap index must be below n")?;
            let space = punctured_circle(n, gap);
            let map = SampledSelfMap::identity(space.clone());
            Ok(BuiltinSystem {
                name: name.into(),
                descriptor: format!("builtin:punctured_circle(n={n},gap={gap})"),
                space,
                map,
                config: ExperimentConfig {
                    // Stay above the doubled sample spacing left by the gap.
                    scales: ExperimentConfig::geometric(q(4, n as i64), q(4, 5), 3),
                    ..ExperimentConfig::static_sample_defaults(n)
                },
            })
        }
        other => Err(BuiltinError::UnknownName(other.into())),
    }
}
