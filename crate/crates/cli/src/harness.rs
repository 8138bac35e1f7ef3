//! End-to-end experiments: the entropy-bound verdict (`h_est` against
//! `log ρ` of the induced map on stable first homology) and the axiom
//! suite over seeded random spaces.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use scaled_homology::entropy::{estimate_from_grid, grid_cell, EntropyError, EntropyEstimate};
use scaled_homology::homology::{homology, long_exact_rank_check, relative_homology};
use scaled_homology::metric::{FiniteMetricSpace, MetricKind};
use scaled_homology::scalar::{f64_ln, q, q_int, Q};
use scaled_homology::selfmap::{induced_on_homology, InducedMatrix, MapError, SampledSelfMap};
use scaled_homology::spectral::{char_poly, spectral_radius};
use scaled_homology::tower::{ScaleSlot, ScaleTower, TowerError};
use scaled_homology::ScaleComplex;

use crate::config::ExperimentConfig;
use crate::io::{dist_matrix_file, DistMatrixFile};

#[derive(Debug)]
pub enum HarnessError {
    Tower(TowerError),
    Map(MapError),
    Entropy(EntropyError),
}

impl std::fmt::Display for HarnessError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            HarnessError::Tower(e) => write!(f, "{e}"),
            HarnessError::Map(e) => write!(f, "{e}"),
            HarnessError::Entropy(e) => write!(f, "{e}"),
        }
    }
}

impl From<TowerError> for HarnessError {
    fn from(e: TowerError) -> Self {
        HarnessError::Tower(e)
    }
}

impl From<MapError> for HarnessError {
    fn from(e: MapError) -> Self {
        HarnessError::Map(e)
    }
}

impl From<EntropyError> for HarnessError {
    fn from(e: EntropyError) -> Self {
        HarnessError::Entropy(e)
    }
}

/// Builds a tower with per-scale work distributed across threads.
pub fn build_tower_par(
    space: Arc<FiniteMetricSpace>,
    scales: &[Q],
    max_dim: usize,
) -> Result<ScaleTower, TowerError> {
    let slots: Result<Vec<ScaleSlot>, TowerError> = scales
        .par_iter()
        .map(|s| ScaleSlot::build(&space, s, max_dim))
        .collect();
    ScaleTower::assemble(space, slots?, max_dim)
}

/// Entropy estimate with grid cells computed concurrently.
pub fn estimate_entropy_par(
    map: &SampledSelfMap,
    eps_grid: &[Q],
    horizons: &[usize],
) -> Result<EntropyEstimate, EntropyError> {
    let pairs: Vec<(usize, Q)> = horizons
        .iter()
        .flat_map(|&n| eps_grid.iter().map(move |e| (n, e.clone())))
        .collect();
    let grid = pairs
        .par_iter()
        .map(|(n, eps)| grid_cell(map, *n, eps))
        .collect::<Result<Vec<_>, _>>()?;
    estimate_from_grid(grid, eps_grid, horizons)
}

/// The bound verdict: greedy entropy estimate versus the log spectral
/// radius of the induced map on stable first homology.
pub struct BoundVerdict {
    pub h_est: f64,
    pub log_rho: f64,
    pub margin: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub spectral_radius: f64,
    pub induced: InducedMatrix,
    pub entropy: EntropyEstimate,
}

/// Runs the tower, induced-map and entropy pipelines and compares the two
/// sides of the bound. Structural failures (unstable tower, map too
/// expansive for the tower, fully saturated counts) surface as errors, not
/// verdicts.
pub fn verify_entropy_bound(
    space: Arc<FiniteMetricSpace>,
    map: &SampledSelfMap,
    config: &ExperimentConfig,
) -> Result<BoundVerdict, HarnessError> {
    let tower = build_tower_par(space, &config.scales, config.max_dim)?;
    let induced = induced_on_homology(map, &tower, 1, config.min_window)?;
    let rho = spectral_radius(&induced.matrix);
    let log_rho = if rho == 1.0 { 0.0 } else { f64_ln(rho) };
    let entropy = estimate_entropy_par(map, &config.eps_grid, &config.n_grid)?;
    let margin = entropy.h_est - log_rho;
    Ok(BoundVerdict {
        h_est: entropy.h_est,
        log_rho,
        margin,
        tolerance: config.tolerance,
        pass: margin >= -config.tolerance,
        spectral_radius: rho,
        induced,
        entropy,
    })
}

/// Exact characteristic polynomial for small induced matrices (reports).
pub fn induced_char_poly(induced: &InducedMatrix) -> Option<scaled_homology::spectral::CharPoly> {
    if induced.matrix.rows() <= 4 && induced.matrix.rows() > 0 {
        Some(char_poly(&induced.matrix))
    } else {
        None
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AxiomCheck {
    pub passes: usize,
    pub failures: usize,
}

impl AxiomCheck {
    fn record(&mut self, ok: bool) {
        if ok {
            self.passes += 1;
        } else {
            self.failures += 1;
        }
    }
}

/// Outcome of the randomized axiom suite. Counterexample spaces are
/// serialized for replay.
pub struct AxiomSuiteReport {
    pub seed: u64,
    pub trials: usize,
    pub small_diameter: AxiomCheck,
    pub additivity: AxiomCheck,
    pub excision: AxiomCheck,
    pub long_exact: AxiomCheck,
    pub counterexamples: Vec<DistMatrixFile>,
}

struct TrialOutcome {
    small_diameter: bool,
    additivity: bool,
    excision: bool,
    long_exact: bool,
    counterexample: Option<DistMatrixFile>,
}

fn random_points(rng: &mut ChaCha8Rng, n: usize, denom: i64, span: i64) -> Vec<Vec<Q>> {
    (0..n)
        .map(|_| {
            vec![
                q(rng.gen_range(0..span), denom),
                q(rng.gen_range(0..span), denom),
            ]
        })
        .collect()
}

fn random_space(rng: &mut ChaCha8Rng, n: usize) -> FiniteMetricSpace {
    FiniteMetricSpace::from_point_cloud(&random_points(rng, n, 256, 256), MetricKind::Euclidean)
        .unwrap()
}

const AXIOM_MAX_DIM: usize = 3;

/// One seeded trial exercising the four axiom checks on fresh random
/// spaces.
fn axiom_trial(seed: u64, trial: u64) -> TrialOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ trial.wrapping_mul(0x9E3779B97F4A7C15));
    let scale = q(rng.gen_range(4..8), 20); // 0.2 .. 0.4

    // Small diameter: squash a random cloud into a box of side scale/2, so
    // the diameter stays below the scale; reduced homology must vanish.
    let small_ok = {
        let n = rng.gen_range(3..=12);
        let side = 64;
        let pts: Vec<Vec<Q>> = random_points(&mut rng, n, 256, side)
            .into_iter()
            .map(|p| p.into_iter().map(|c| c * &scale).collect())
            .collect();
        let space = FiniteMetricSpace::from_point_cloud(&pts, MetricKind::Euclidean).unwrap();
        debug_assert!(space.diameter() < scale);
        let complex = ScaleComplex::build(&space, &scale, AXIOM_MAX_DIM).unwrap();
        (0..AXIOM_MAX_DIM).all(|dim| homology(&complex, dim, true).unwrap().rank == 0)
    };

    // Additivity: blocks further apart than the scale contribute ranks
    // independently.
    let mut counterexample = None;
    let additivity_ok = {
        let block_count = rng.gen_range(2..=3);
        let blocks: Vec<FiniteMetricSpace> = (0..block_count)
            .map(|_| {
                let size = rng.gen_range(3..=10);
                random_space(&mut rng, size)
            })
            .collect();
        let gap = blocks
            .iter()
            .map(|b| b.diameter())
            .fold(scale.clone(), |a, b| if b > a { b } else { a })
            + q_int(1);
        let union = FiniteMetricSpace::disjoint_union(&blocks, &gap).unwrap();
        let union_complex = ScaleComplex::build(&union, &scale, AXIOM_MAX_DIM).unwrap();
        let mut ok = true;
        for dim in 0..AXIOM_MAX_DIM {
            let whole = homology(&union_complex, dim, false).unwrap().rank;
            let parts: usize = blocks
                .iter()
                .map(|b| {
                    let c = ScaleComplex::build(b, &scale, AXIOM_MAX_DIM).unwrap();
                    homology(&c, dim, false).unwrap().rank
                })
                .sum();
            if whole != parts {
                ok = false;
            }
        }
        if !ok {
            counterexample = Some(dist_matrix_file(&union));
        }
        ok
    };

    // Excision by slabs: across the separation threshold every simplex lies
    // in A or in B, so the relative groups agree rank for rank.
    let excision_ok = {
        let size = rng.gen_range(6..=14);
        let space = random_space(&mut rng, size);
        let n = space.len();
        let coords: Vec<Q> = (0..n).map(|i| space.dist(0, i).clone()).collect();
        // Slab coordinate: distance from point 0; threshold at the median.
        let mut sorted = coords.clone();
        sorted.sort();
        let threshold = sorted[n / 2].clone();
        let margin = &scale * q(3, 5);
        let a: Vec<usize> = (0..n)
            .filter(|&i| coords[i] <= &threshold + &margin)
            .collect();
        let b: Vec<usize> = (0..n)
            .filter(|&i| coords[i] >= &threshold - &margin)
            .collect();
        let a_and_b: Vec<usize> = (0..n)
            .filter(|&i| a.contains(&i) && b.contains(&i))
            .collect();
        let complex = ScaleComplex::build(&space, &scale, AXIOM_MAX_DIM).unwrap();
        let sub_b = complex.subcomplex(&b);
        // A ∩ B in B-local indices.
        let local: Vec<usize> = b
            .iter()
            .enumerate()
            .filter(|(_, orig)| a_and_b.contains(orig))
            .map(|(local, _)| local)
            .collect();
        let mut ok = true;
        for dim in 0..AXIOM_MAX_DIM {
            let lhs = relative_homology(&sub_b, &local, dim).unwrap().rank;
            let rhs = relative_homology(&complex, &a, dim).unwrap().rank;
            if lhs != rhs {
                ok = false;
            }
        }
        if !ok && counterexample.is_none() {
            counterexample = Some(dist_matrix_file(&space));
        }
        ok
    };

    // Long exact sequence rank windows balance for a random subspace.
    let les_ok = {
        let size = rng.gen_range(4..=12);
        let space = random_space(&mut rng, size);
        let n = space.len();
        let subset: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.4)).collect();
        let complex = ScaleComplex::build(&space, &scale, AXIOM_MAX_DIM).unwrap();
        let windows = long_exact_rank_check(&complex, &subset, AXIOM_MAX_DIM - 1).unwrap();
        let ok = windows.iter().all(|w| w.balanced);
        if !ok && counterexample.is_none() {
            counterexample = Some(dist_matrix_file(&space));
        }
        ok
    };

    TrialOutcome {
        small_diameter: small_ok,
        additivity: additivity_ok,
        excision: excision_ok,
        long_exact: les_ok,
        counterexample,
    }
}

/// Runs the axiom suite: per trial, fresh seeded random spaces are checked
/// for small-diameter triviality, additivity over gapped unions, excision
/// on slab covers, and long-exact-sequence rank balance. Deterministic for
/// a fixed seed; trials run concurrently.
pub fn axiom_suite(seed: u64, trials: usize) -> AxiomSuiteReport {
    let outcomes: Vec<TrialOutcome> = (0..trials as u64)
        .into_par_iter()
        .map(|t| axiom_trial(seed, t))
        .collect();
    let mut report = AxiomSuiteReport {
        seed,
        trials,
        small_diameter: AxiomCheck::default(),
        additivity: AxiomCheck::default(),
        excision: AxiomCheck::default(),
        long_exact: AxiomCheck::default(),
        counterexamples: Vec::new(),
    };
    for o in outcomes {
        report.small_diameter.record(o.small_diameter);
        report.additivity.record(o.additivity);
        report.excision.record(o.excision);
        report.long_exact.record(o.long_exact);
        if let Some(c) = o.counterexample {
            report.counterexamples.push(c);
        }
    }
    report
}
