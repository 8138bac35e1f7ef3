//! Machine-readable reports. JSON is the canonical format; CSV is a lossy
//! projection carrying counts and ranks only. Serialization is
//! deterministic: struct field order is fixed and every collection is
//! emitted in a sorted or construction-fixed order.

use serde::Serialize;

use scaled_homology::complex::SparseCol;
use scaled_homology::entropy::EntropyEstimate;
use scaled_homology::homology::HomologyGroup;
use scaled_homology::matrix::QMat;
use scaled_homology::scalar::{q_display, q_to_f64, Q};
use scaled_homology::spectral::CharPoly;
use scaled_homology::tower::{ScaleTower, StabilityReport};

use crate::config::ExperimentConfig;

pub const TOOL_NAME: &str = "scaled-homology";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Carried by every report for reproducibility.
#[derive(Serialize, Clone)]
pub struct ReportMeta {
    pub tool: &'static str,
    pub version: &'static str,
    pub input_digest: String,
    pub config: serde_json::Value,
}

impl ReportMeta {
    pub fn new(input_digest: String, config: serde_json::Value) -> Self {
        ReportMeta {
            tool: TOOL_NAME,
            version: TOOL_VERSION,
            input_digest,
            config,
        }
    }
}

/// Exact rational plus a float rendering for quick reading.
#[derive(Serialize, Clone, PartialEq)]
pub struct ScalarRepr {
    pub num: String,
    pub den: String,
    pub approx: f64,
}

pub fn scalar_repr(x: &Q) -> ScalarRepr {
    ScalarRepr {
        num: x.numer().to_string(),
        den: x.denom().to_string(),
        approx: q_to_f64(x),
    }
}

/// One term of a representative cycle: the simplex (by vertex indices) and
/// its exact coefficient.
#[derive(Serialize)]
pub struct ChainTermRepr {
    pub simplex: Vec<u32>,
    pub num: String,
    pub den: String,
}

#[derive(Serialize)]
pub struct HomologyGroupRepr {
    pub dimension: usize,
    pub rank: usize,
    pub reduced: bool,
    /// Rank lacks the next boundary operator (dimension equals `max_dim`).
    pub truncated: bool,
    pub representatives: Vec<Vec<ChainTermRepr>>,
}

pub fn homology_group_repr(
    group: &HomologyGroup,
    complex: &scaled_homology::complex::ScaleComplex,
) -> HomologyGroupRepr {
    let representatives = group
        .cycle_basis
        .iter()
        .map(|chain| {
            chain
                .entries
                .iter()
                .map(|(id, c)| ChainTermRepr {
                    simplex: complex.simplices(group.dimension)[*id as usize].to_vec(),
                    num: c.numer().to_string(),
                    den: c.denom().to_string(),
                })
                .collect()
        })
        .collect();
    HomologyGroupRepr {
        dimension: group.dimension,
        rank: group.rank,
        reduced: group.reduced,
        truncated: group.truncated,
        representatives,
    }
}

/// Full complex dump: the scale and every simplex per dimension as vertex
/// index arrays.
#[derive(Serialize)]
pub struct ComplexDump {
    pub scale: ScalarRepr,
    pub simplices: Vec<Vec<Vec<u32>>>,
}

pub fn complex_dump(complex: &scaled_homology::complex::ScaleComplex) -> ComplexDump {
    ComplexDump {
        scale: scalar_repr(complex.scale()),
        simplices: (0..=complex.max_dim())
            .map(|d| complex.simplices(d).iter().map(|s| s.to_vec()).collect())
            .collect(),
    }
}

#[derive(Serialize)]
pub struct BettiScaleRepr {
    pub scale: ScalarRepr,
    pub simplex_counts: Vec<usize>,
    pub groups: Vec<HomologyGroupRepr>,
}

#[derive(Serialize)]
pub struct BettiReport {
    #[serde(flatten)]
    pub meta: ReportMeta,
    pub max_dim: usize,
    pub reduced: bool,
    pub scales: Vec<BettiScaleRepr>,
}

#[derive(Serialize)]
pub struct StabilityRepr {
    pub dimension: usize,
    pub stable: bool,
    pub stable_rank: Option<usize>,
    pub window_scales: Vec<ScalarRepr>,
    pub rank_sequence: Vec<usize>,
}

pub fn stability_repr(report: &StabilityReport, scales: &[Q]) -> StabilityRepr {
    StabilityRepr {
        dimension: report.dimension,
        stable: report.stable,
        stable_rank: report.stable_rank,
        window_scales: scales[report.window_start..]
            .iter()
            .map(scalar_repr)
            .collect(),
        rank_sequence: report.rank_sequence.clone(),
    }
}

#[derive(Serialize)]
pub struct TowerDimensionRepr {
    pub dimension: usize,
    pub rank_sequence: Vec<usize>,
    /// Rank of each adjacent connecting map, finer scale into coarser.
    pub connecting_ranks: Vec<usize>,
    pub stability: StabilityRepr,
    pub lc_betti: Option<usize>,
}

#[derive(Serialize)]
pub struct TowerReport {
    #[serde(flatten)]
    pub meta: ReportMeta,
    pub max_dim: usize,
    pub scales: Vec<ScalarRepr>,
    pub dimensions: Vec<TowerDimensionRepr>,
}

pub fn tower_report(meta: ReportMeta, tower: &ScaleTower, min_window: usize) -> TowerReport {
    let scales = tower.scales();
    let dimensions = (0..tower.max_dim())
        .map(|n| {
            let stability = tower.detect_stability(n, min_window);
            let connecting_ranks = (0..tower.len().saturating_sub(1))
                .map(|k| tower.adjacent_connecting(n, k).rank())
                .collect();
            TowerDimensionRepr {
                dimension: n,
                rank_sequence: stability.rank_sequence.clone(),
                connecting_ranks,
                lc_betti: stability.stable_rank,
                stability: stability_repr(&stability, &scales),
            }
        })
        .collect();
    TowerReport {
        meta,
        max_dim: tower.max_dim(),
        scales: scales.iter().map(scalar_repr).collect(),
        dimensions,
    }
}

#[derive(Serialize)]
pub struct MatrixRepr {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<ScalarRepr>>,
}

pub fn matrix_repr(m: &QMat) -> MatrixRepr {
    MatrixRepr {
        rows: m.rows(),
        cols: m.cols(),
        entries: (0..m.rows())
            .map(|i| (0..m.cols()).map(|j| scalar_repr(m.at(i, j))).collect())
            .collect(),
    }
}

#[derive(Serialize)]
pub struct InducedMapReport {
    #[serde(flatten)]
    pub meta: ReportMeta,
    pub dimension: usize,
    pub source_scale: ScalarRepr,
    pub target_scale: ScalarRepr,
    pub matrix: MatrixRepr,
    /// Monic characteristic polynomial coefficients (degree down to
    /// constant), exact; present for matrices up to 4×4.
    pub char_poly: Option<Vec<String>>,
    pub spectral_radius: f64,
    pub log_spectral_radius: f64,
    pub gershgorin_bound: f64,
}

pub fn char_poly_repr(p: &CharPoly) -> Vec<String> {
    p.coeffs.iter().map(q_display).collect()
}

#[derive(Serialize)]
pub struct GridCellRepr {
    pub horizon: usize,
    pub eps: ScalarRepr,
    pub spanning: usize,
    pub separated: usize,
    pub saturated: bool,
}

#[derive(Serialize)]
pub struct SlopeRepr {
    pub eps: ScalarRepr,
    pub slope: f64,
    pub window: Vec<usize>,
}

#[derive(Serialize)]
pub struct EntropyReport {
    #[serde(flatten)]
    pub meta: ReportMeta,
    pub grid: Vec<GridCellRepr>,
    pub slopes: Vec<SlopeRepr>,
    pub h_est: f64,
}

pub fn entropy_report(meta: ReportMeta, est: &EntropyEstimate) -> EntropyReport {
    EntropyReport {
        meta,
        grid: est
            .grid
            .iter()
            .map(|c| GridCellRepr {
                horizon: c.horizon,
                eps: scalar_repr(&c.eps),
                spanning: c.spanning,
                separated: c.separated,
                saturated: c.saturated,
            })
            .collect(),
        slopes: est
            .slopes
            .iter()
            .map(|s| SlopeRepr {
                eps: scalar_repr(&s.eps),
                slope: s.slope,
                window: s.window.clone(),
            })
            .collect(),
        h_est: est.h_est,
    }
}

#[derive(Serialize)]
pub struct VerdictProvenance {
    pub induced_source_scale: ScalarRepr,
    pub induced_target_scale: ScalarRepr,
    pub induced_matrix: MatrixRepr,
    pub char_poly: Option<Vec<String>>,
    pub fit_windows: Vec<SlopeRepr>,
    pub saturated_cells: usize,
}

#[derive(Serialize)]
pub struct VerdictReport {
    #[serde(flatten)]
    pub meta: ReportMeta,
    pub h_est: f64,
    pub log_rho: f64,
    pub margin: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub provenance: VerdictProvenance,
}

#[derive(Serialize)]
pub struct AxiomCheckRepr {
    pub passes: usize,
    pub failures: usize,
}

#[derive(Serialize)]
pub struct AxiomsReport {
    #[serde(flatten)]
    pub meta: ReportMeta,
    pub seed: u64,
    pub trials: usize,
    pub small_diameter: AxiomCheckRepr,
    pub additivity: AxiomCheckRepr,
    pub excision: AxiomCheckRepr,
    pub long_exact: AxiomCheckRepr,
    /// Distance matrices of failing spaces, for replay.
    pub counterexamples: Vec<crate::io::DistMatrixFile>,
}

/// Structured failure payload, written to standard error as JSON.
#[derive(Serialize)]
pub struct ErrorPayload {
    pub error: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<serde_json::Value>,
}

/// Resolved-config JSON helper for report metadata.
pub fn config_json(config: &ExperimentConfig) -> serde_json::Value {
    serde_json::json!({
        "scales": config.scales.iter().map(q_display).collect::<Vec<_>>(),
        "max_dim": config.max_dim,
        "min_window": config.min_window,
        "eps_grid": config.eps_grid.iter().map(q_display).collect::<Vec<_>>(),
        "n_grid": config.n_grid,
        "tolerance": config.tolerance,
    })
}

/// Pretty, deterministic JSON text (struct order is fixed at compile time).
pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serialization");
    s.push('\n');
    s
}

/// CSV projections: ranks and counts only.
pub fn betti_csv(report: &BettiReport) -> String {
    let mut out = String::from("scale,dimension,rank\n");
    for scale in &report.scales {
        for g in &scale.groups {
            out.push_str(&format!(
                "{},{},{}\n",
                scale.scale.approx, g.dimension, g.rank
            ));
        }
    }
    out
}

pub fn tower_csv(report: &TowerReport) -> String {
    let mut out = String::from("scale,dimension,rank\n");
    for dim in &report.dimensions {
        for (scale, rank) in report.scales.iter().zip(&dim.rank_sequence) {
            out.push_str(&format!("{},{},{}\n", scale.approx, dim.dimension, rank));
        }
    }
    out
}

pub fn entropy_csv(report: &EntropyReport) -> String {
    let mut out = String::from("horizon,eps,spanning,separated,saturated\n");
    for cell in &report.grid {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            cell.horizon, cell.eps.approx, cell.spanning, cell.separated, cell.saturated
        ));
    }
    out
}

pub fn verdict_csv(report: &VerdictReport) -> String {
    format!(
        "h_est,log_rho,margin,tolerance,pass\n{},{},{},{},{}\n",
        report.h_est, report.log_rho, report.margin, report.tolerance, report.pass
    )
}

/// Sparse chain-map column dump used by the `map` subcommand level report.
pub fn sparse_col_terms(col: &SparseCol) -> Vec<(u32, String)> {
    col.iter().map(|(r, c)| (*r, q_display(c))).collect()
}
