//! Bowen topological entropy machinery: orbit metrics, greedy spanning and
//! separated counts, exact small-instance oracles, and growth-rate fits.
//!
//! Exact minimum spanning / maximum separated counts are hard (dominating
//! set / independent set), so the estimator works with greedy bounds: a
//! first-fit maximal separated set is simultaneously `(n,ε)`-separated (so
//! its size lower-bounds the maximum) and `(n,ε)`-spanning (so its size
//! upper-bounds the minimum). Growth rates are what the entropy estimate
//! needs, and the exact oracles stay available for test-time verification.

use alloc::vec::Vec;

use num_traits::Signed;

use crate::metric::FiniteMetricSpace;
use crate::scalar::{f64_ln, q_to_f64, Q};
use crate::selfmap::SampledSelfMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EntropyError {
    ZeroHorizon,
    EmptyGrid,
    NonIncreasingHorizons,
    NonPositiveScale,
    AllSaturated,
    NoUsableWindow,
    OracleTooLarge { points: usize, horizon: usize },
}

impl core::fmt::Display for EntropyError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            EntropyError::ZeroHorizon => write!(f, "orbit horizon must be at least 1"),
            EntropyError::EmptyGrid => write!(f, "count grids must be non-empty"),
            EntropyError::NonIncreasingHorizons => {
                write!(f, "horizon grid must be strictly increasing")
            }
            EntropyError::NonPositiveScale => write!(f, "scale grid entries must be positive"),
            EntropyError::AllSaturated => {
                write!(
                    f,
                    "every count hit the sample size; sample too small for the grid"
                )
            }
            EntropyError::NoUsableWindow => {
                write!(f, "no scale had three unsaturated horizons to fit a slope")
            }
            EntropyError::OracleTooLarge { points, horizon } => {
                write!(
                    f,
                    "exact oracle gated to 64 points and horizon 4 (got {points}, {horizon})"
                )
            }
        }
    }
}

/// Orbit metric context: the cached orbit table of a map up to a horizon,
/// supporting the metric `d_n(x,y) = max_{k<n} d(f^k x, f^k y)`.
pub struct OrbitMetricContext<'a> {
    space: &'a FiniteMetricSpace,
    horizon: usize,
    orbit: Vec<Vec<u32>>,
}

impl<'a> OrbitMetricContext<'a> {
    pub fn new(map: &'a SampledSelfMap, horizon: usize) -> Result<Self, EntropyError> {
        if horizon == 0 {
            return Err(EntropyError::ZeroHorizon);
        }
        let n = map.space().len();
        let mut orbit: Vec<Vec<u32>> = Vec::with_capacity(horizon);
        orbit.push((0..n as u32).collect());
        for k in 1..horizon {
            let prev = &orbit[k - 1];
            orbit.push(prev.iter().map(|&i| map.image()[i as usize]).collect());
        }
        Ok(OrbitMetricContext {
            space: map.space(),
            horizon,
            orbit,
        })
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn point_count(&self) -> usize {
        self.space.len()
    }

    /// The orbit metric `d_n(i,j)`.
    pub fn bowen_distance(&self, i: usize, j: usize) -> Q {
        let mut worst = self.space.dist(i, j).clone();
        for row in &self.orbit[1..] {
            let d = self.space.dist(row[i] as usize, row[j] as usize);
            if *d > worst {
                worst = d.clone();
            }
        }
        worst
    }

    /// `d_n(i,j) < eps`, with early exit on the first large iterate.
    fn within(&self, i: usize, j: usize, eps: &Q) -> bool {
        self.orbit
            .iter()
            .all(|row| self.space.dist(row[i] as usize, row[j] as usize) < eps)
    }

    fn greedy_maximal_separated(&self, eps: &Q) -> Vec<usize> {
        let mut chosen: Vec<usize> = Vec::new();
        for i in 0..self.space.len() {
            if chosen.iter().all(|&c| !self.within(i, c, eps)) {
                chosen.push(i);
            }
        }
        chosen
    }
}

/// Size of a greedy `(n,ε)`-spanning set: scan in index order, adding a
/// point as a center when no existing center is within orbit distance
/// `< ε`. The result covers the space, so it upper-bounds the minimum
/// spanning count `r_n(ε)`.
pub fn spanning_count(ctx: &OrbitMetricContext<'_>, eps: &Q) -> usize {
    ctx.greedy_maximal_separated(eps).len()
}

/// Size of a greedy maximal `(n,ε)`-separated set (same scan: accepted
/// points are pairwise `≥ ε` apart). Lower-bounds the maximum separated
/// count `s_n(ε)`.
pub fn separated_count(ctx: &OrbitMetricContext<'_>, eps: &Q) -> usize {
    ctx.greedy_maximal_separated(eps).len()
}

fn oracle_gate(ctx: &OrbitMetricContext<'_>) -> Result<(), EntropyError> {
    if ctx.point_count() > 64 || ctx.horizon() > 4 {
        return Err(EntropyError::OracleTooLarge {
            points: ctx.point_count(),
            horizon: ctx.horizon(),
        });
    }
    Ok(())
}

/// Exact maximum `(n,ε)`-separated cardinality by branch and bound over the
/// conflict graph. Gated to small instances; test-time oracle.
pub fn exact_separated_number(
    ctx: &OrbitMetricContext<'_>,
    eps: &Q,
) -> Result<usize, EntropyError> {
    oracle_gate(ctx)?;
    let n = ctx.point_count();
    // conflicts[i] = bitmask of j with d_n(i,j) < eps (cannot coexist).
    let mut conflicts = alloc::vec![0u64; n];
    for i in 0..n {
        for j in (i + 1)..n {
            if ctx.within(i, j, eps) {
                conflicts[i] |= 1 << j;
                conflicts[j] |= 1 << i;
            }
        }
    }
    let mut best = ctx.greedy_maximal_separated(eps).len();
    fn search(conflicts: &[u64], candidates: u64, chosen: usize, best: &mut usize) {
        if chosen + candidates.count_ones() as usize <= *best {
            return;
        }
        if candidates == 0 {
            if chosen > *best {
                *best = chosen;
            }
            return;
        }
        let v = candidates.trailing_zeros() as usize;
        // Either take v (dropping its conflicts) or skip it.
        search(
            conflicts,
            candidates & !(1 << v) & !conflicts[v],
            chosen + 1,
            best,
        );
        search(conflicts, candidates & !(1 << v), chosen, best);
    }
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    search(&conflicts, all, 0, &mut best);
    Ok(best)
}

/// Exact minimum `(n,ε)`-spanning cardinality by branching on an uncovered
/// point and trying every center that covers it. Gated to small instances.
pub fn exact_spanning_number(ctx: &OrbitMetricContext<'_>, eps: &Q) -> Result<usize, EntropyError> {
    oracle_gate(ctx)?;
    let n = ctx.point_count();
    // covers[c] = bitmask of points within d_n < eps of c (including c).
    let mut covers = alloc::vec![0u64; n];
    for (c, cover) in covers.iter_mut().enumerate() {
        for x in 0..n {
            if ctx.within(x, c, eps) {
                *cover |= 1 << x;
            }
        }
    }
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut best = ctx.greedy_maximal_separated(eps).len();
    fn search(covers: &[u64], all: u64, covered: u64, used: usize, best: &mut usize) {
        if used >= *best {
            return;
        }
        let missing = all & !covered;
        if missing == 0 {
            *best = used;
            return;
        }
        let p = missing.trailing_zeros() as usize;
        for mask in covers {
            if mask & (1 << p) != 0 {
                search(covers, all, covered | mask, used + 1, best);
            }
        }
    }
    search(&covers, all, 0, 0, &mut best);
    Ok(best)
}

/// One `(n, ε)` cell of the count grid. The greedy spanning and separated
/// sizes coincide by construction; both are recorded for auditability.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridCell {
    pub horizon: usize,
    pub eps: Q,
    pub spanning: usize,
    pub separated: usize,
    /// The count hit the sample size: the sample cannot resolve this cell
    /// and it is excluded from slope fits.
    pub saturated: bool,
}

/// Least-squares slope of log-counts over one scale's unsaturated window.
#[derive(Debug, Clone, PartialEq)]
pub struct SlopeFit {
    pub eps: Q,
    pub slope: f64,
    /// Horizons used for the fit.
    pub window: Vec<usize>,
}

/// The full entropy estimate: count grid, per-scale slope fits, and the
/// headline rate.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyEstimate {
    pub grid: Vec<GridCell>,
    pub slopes: Vec<SlopeFit>,
    pub h_est: f64,
}

/// Computes one grid cell.
pub fn grid_cell(map: &SampledSelfMap, horizon: usize, eps: &Q) -> Result<GridCell, EntropyError> {
    if !eps.is_positive() {
        return Err(EntropyError::NonPositiveScale);
    }
    let ctx = OrbitMetricContext::new(map, horizon)?;
    let count = separated_count(&ctx, eps);
    Ok(GridCell {
        horizon,
        eps: eps.clone(),
        spanning: count,
        separated: count,
        saturated: count == map.space().len(),
    })
}

fn validate_grids(eps_grid: &[Q], horizons: &[usize]) -> Result<(), EntropyError> {
    if eps_grid.is_empty() || horizons.is_empty() {
        return Err(EntropyError::EmptyGrid);
    }
    if horizons[0] == 0 {
        return Err(EntropyError::ZeroHorizon);
    }
    if horizons.windows(2).any(|w| w[1] <= w[0]) {
        return Err(EntropyError::NonIncreasingHorizons);
    }
    if eps_grid.iter().any(|e| !e.is_positive()) {
        return Err(EntropyError::NonPositiveScale);
    }
    Ok(())
}

/// Assembles the estimate from precomputed cells (ordered however; they are
/// matched by `(horizon, eps)`). Exposed so callers can fill the grid
/// concurrently.
pub fn estimate_from_grid(
    grid: Vec<GridCell>,
    eps_grid: &[Q],
    horizons: &[usize],
) -> Result<EntropyEstimate, EntropyError> {
    validate_grids(eps_grid, horizons)?;
    let mut slopes: Vec<SlopeFit> = Vec::new();
    for eps in eps_grid {
        let mut window: Vec<usize> = Vec::new();
        let mut logs: Vec<f64> = Vec::new();
        for &n in horizons {
            let cell = grid
                .iter()
                .find(|c| c.horizon == n && &c.eps == eps)
                .expect("grid covers every (horizon, eps) pair");
            if cell.saturated {
                break;
            }
            window.push(n);
            logs.push(f64_ln(cell.separated as f64));
        }
        if window.len() >= 3 {
            slopes.push(SlopeFit {
                eps: eps.clone(),
                slope: ls_slope(&window, &logs),
                window,
            });
        }
    }
    if slopes.is_empty() {
        if grid.iter().all(|c| c.saturated) {
            return Err(EntropyError::AllSaturated);
        }
        return Err(EntropyError::NoUsableWindow);
    }
    let mut h_est: f64 = 0.0;
    for s in &slopes {
        if s.slope > h_est {
            h_est = s.slope;
        }
    }
    Ok(EntropyEstimate {
        grid,
        slopes,
        h_est,
    })
}

/// Greedy count grid plus growth-rate fit: per scale, the least-squares
/// slope of log separated counts over the unsaturated horizon prefix
/// (at least three points), and the maximum slope over scales.
pub fn estimate_entropy(
    map: &SampledSelfMap,
    eps_grid: &[Q],
    horizons: &[usize],
) -> Result<EntropyEstimate, EntropyError> {
    validate_grids(eps_grid, horizons)?;
    let mut grid = Vec::with_capacity(eps_grid.len() * horizons.len());
    for &n in horizons {
        let ctx = OrbitMetricContext::new(map, n)?;
        for eps in eps_grid {
            let count = separated_count(&ctx, eps);
            grid.push(GridCell {
                horizon: n,
                eps: eps.clone(),
                spanning: count,
                separated: count,
                saturated: count == map.space().len(),
            });
        }
    }
    estimate_from_grid(grid, eps_grid, horizons)
}

/// Least-squares slope; exactly zero for constant data so that isometries
/// report a hard zero rather than rounding noise.
fn ls_slope(xs: &[usize], ys: &[f64]) -> f64 {
    debug_assert_eq!(xs.len(), ys.len());
    if ys.windows(2).all(|w| w[0] == w[1]) {
        return 0.0;
    }
    let k = xs.len() as f64;
    let sx: f64 = xs.iter().map(|&x| x as f64).sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|&x| (x * x) as f64).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(&x, &y)| x as f64 * y).sum();
    (k * sxy - sx * sy) / (k * sxx - sx * sx)
}

/// Convenience view of a rational scale for reports.
pub fn eps_as_f64(eps: &Q) -> f64 {
    q_to_f64(eps)
}
