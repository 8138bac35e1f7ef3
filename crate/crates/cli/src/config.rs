//! Experiment configuration: scale grids, entropy grids, stability window
//! and tolerance, with per-system defaults and a JSON file form.

use serde::Deserialize;

use scaled_homology::scalar::{q, q_parse, Q};

/// Everything a `verify` run needs, resolved before execution so the report
/// can carry it verbatim.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    /// Tower scales, strictly decreasing.
    pub scales: Vec<Q>,
    pub max_dim: usize,
    /// Minimum number of scales an isomorphism window must span.
    pub min_window: usize,
    /// Scale grid for the entropy count table.
    pub eps_grid: Vec<Q>,
    /// Orbit horizons for the entropy count table, strictly increasing.
    pub n_grid: Vec<usize>,
    /// Allowed slack in the bound margin `h_est - log ρ`, in nats.
    pub tolerance: f64,
}

impl ExperimentConfig {
    /// Geometric scale grid `start · ratio^k`, `k = 0..count`.
    pub fn geometric(start: Q, ratio: Q, count: usize) -> Vec<Q> {
        let mut out = Vec::with_capacity(count);
        let mut s = start;
        for _ in 0..count {
            out.push(s.clone());
            s *= &ratio;
        }
        out
    }

    /// Defaults for a circle sample with `n` points: tower between roughly
    /// six and two sample steps (isomorphic circles throughout), entropy
    /// scales coarse enough that counts stay well under `n` for the first
    /// horizons.
    pub fn circle_defaults(n: u32) -> Self {
        ExperimentConfig {
            scales: Self::geometric(q(6, n as i64), q(4, 5), 5),
            max_dim: 2,
            min_window: 3,
            eps_grid: vec![q(1, 20), q(1, 10), q(1, 5)],
            n_grid: (1..=7).collect(),
            tolerance: 0.1,
        }
    }

    /// Defaults for the `n × n` torus lattice under a hyperbolic map: the
    /// tower spans one to three-and-a-half lattice steps so the coarse end
    /// sits above the modulus of continuity of one-step neighborhoods.
    ///
    /// The horizon grid starts at 2 and stops at 4: the one-step cell
    /// measures static lattice packing rather than orbit growth, and past
    /// `λ^(n-1) > n_side` the iterated lattice wraps the torus and aliases
    /// the expansion (for the cat map, `λ⁴ ≈ 47` already exceeds 32).
    pub fn cat_map_defaults(n: u32) -> Self {
        ExperimentConfig {
            scales: Self::geometric(q(7, 2 * n as i64), q(4, 5), 5),
            max_dim: 2,
            min_window: 3,
            eps_grid: vec![q(3, 20), q(1, 5), q(1, 4)],
            n_grid: (2..=4).collect(),
            tolerance: 0.12,
        }
    }

    /// Defaults for static example sets: a short tower between four and
    /// two-and-a-half sample steps.
    pub fn static_sample_defaults(n: u32) -> Self {
        ExperimentConfig {
            scales: Self::geometric(q(4, n as i64), q(4, 5), 3),
            max_dim: 2,
            min_window: 3,
            eps_grid: vec![q(1, 20), q(1, 10), q(1, 5)],
            n_grid: (1..=5).collect(),
            tolerance: 0.1,
        }
    }
}

/// Parses a scale list: either an explicit comma list (`1.5,1.2,0.5`) or
/// the geometric shorthand `start:ratio:count` (`0.1:0.8:5`). All numbers
/// are parsed exactly.
pub fn parse_scale_list(text: &str) -> Result<Vec<Q>, String> {
    let s = text.trim();
    if s.is_empty() {
        return Err("empty scale list".into());
    }
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!(
                "geometric grid must be start:ratio:count, got `{s}`"
            ));
        }
        let start = q_parse(parts[0]).ok_or_else(|| format!("bad start `{}`", parts[0]))?;
        let ratio = q_parse(parts[1]).ok_or_else(|| format!("bad ratio `{}`", parts[1]))?;
        let count: usize = parts[2]
            .trim()
            .parse()
            .map_err(|_| format!("bad count `{}`", parts[2]))?;
        if count == 0 {
            return Err("geometric grid needs at least one scale".into());
        }
        Ok(ExperimentConfig::geometric(start, ratio, count))
    } else {
        s.split(',')
            .map(|p| q_parse(p).ok_or_else(|| format!("bad scale `{p}`")))
            .collect()
    }
}

/// Parses a comma list of horizons.
pub fn parse_horizons(text: &str) -> Result<Vec<usize>, String> {
    text.split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| format!("bad horizon `{p}`"))
        })
        .collect()
}

/// JSON form of [`ExperimentConfig`]. Scales are strings so they parse
/// exactly (`"1/3"`, `"0.05"`), never through floats.
#[derive(Deserialize)]
pub struct ExperimentConfigFile {
    pub scales: Vec<String>,
    #[serde(default)]
    pub max_dim: Option<usize>,
    #[serde(default)]
    pub min_window: Option<usize>,
    pub eps_grid: Vec<String>,
    pub n_grid: Vec<usize>,
    #[serde(default)]
    pub tolerance: Option<f64>,
}

impl ExperimentConfigFile {
    pub fn resolve(&self) -> Result<ExperimentConfig, String> {
        let parse_all = |items: &[String]| -> Result<Vec<Q>, String> {
            items
                .iter()
                .map(|t| q_parse(t).ok_or_else(|| format!("bad scalar `{t}` in config")))
                .collect()
        };
        Ok(ExperimentConfig {
            scales: parse_all(&self.scales)?,
            max_dim: self.max_dim.unwrap_or(2),
            min_window: self.min_window.unwrap_or(3),
            eps_grid: parse_all(&self.eps_grid)?,
            n_grid: self.n_grid.clone(),
            tolerance: self.tolerance.unwrap_or(0.1),
        })
    }
}

/// Loads and resolves an experiment-config JSON file.
pub fn config_from_file(path: &std::path::Path) -> Result<ExperimentConfig, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let file: ExperimentConfigFile =
        serde_json::from_str(&text).map_err(|e| format!("cannot parse {}: {e}", path.display()))?;
    file.resolve()
}
