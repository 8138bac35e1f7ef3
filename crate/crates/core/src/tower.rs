//! Towers of scale complexes over one space: connecting homomorphisms
//! between homology at adjacent scales, stability detection, and the finite
//! approximation of the inverse-limit (infinitesimal-scale) homology.

use alloc::sync::Arc;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::complex::{ScaleComplex, SparseCol};
use crate::homology::{homology_basis, HomologyError};
use crate::matrix::QMat;
use crate::metric::FiniteMetricSpace;
use crate::reduce::CycleBasis;
use crate::scalar::Q;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TowerError {
    EmptyScaleList,
    NotStrictlyDecreasing { position: usize },
    NonPositiveScale,
    ScaleNotInTower,
    WrongDirection,
    Homology(alloc::string::String),
}

impl From<HomologyError> for TowerError {
    fn from(e: HomologyError) -> Self {
        TowerError::Homology(alloc::format!("{e}"))
    }
}

impl core::fmt::Display for TowerError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            TowerError::EmptyScaleList => write!(f, "scale list is empty"),
            TowerError::NotStrictlyDecreasing { position } => {
                write!(
                    f,
                    "scales must be strictly decreasing (violated at {position})"
                )
            }
            TowerError::NonPositiveScale => write!(f, "scales must be positive"),
            TowerError::ScaleNotInTower => write!(f, "requested scale is not in the tower"),
            TowerError::WrongDirection => {
                write!(f, "connecting maps go from finer to coarser scales")
            }
            TowerError::Homology(e) => write!(f, "{e}"),
        }
    }
}

/// One scale of a tower: the complex plus homology bases for every
/// dimension below `max_dim`.
pub struct ScaleSlot {
    pub scale: Q,
    pub complex: ScaleComplex,
    bases: Arc<[CycleBasis]>,
}

impl ScaleSlot {
    /// Builds the complex and its homology bases at one scale. Exposed so
    /// callers can distribute per-scale work before assembling a tower.
    pub fn build(space: &FiniteMetricSpace, scale: &Q, max_dim: usize) -> Result<Self, TowerError> {
        if !scale.is_positive() {
            return Err(TowerError::NonPositiveScale);
        }
        let complex = ScaleComplex::build(space, scale, max_dim)
            .map_err(|e| TowerError::Homology(alloc::format!("{e}")))?;
        let bases: Vec<CycleBasis> = (0..max_dim)
            .map(|n| homology_basis(&complex, n))
            .collect::<Result<_, _>>()?;
        Ok(ScaleSlot {
            scale: scale.clone(),
            complex,
            bases: bases.into(),
        })
    }

    /// Same complex structure as another slot (no distance value separates
    /// the two scales); lets towers reuse reduction work.
    fn same_structure(&self, other: &ScaleSlot) -> bool {
        (0..=self.complex.max_dim()).all(|d| {
            self.complex.size(d) == other.complex.size(d)
                && self.complex.simplices(d) == other.complex.simplices(d)
        })
    }

    pub fn basis(&self, n: usize) -> &CycleBasis {
        &self.bases[n]
    }
}

/// Report of [`ScaleTower::detect_stability`]: the maximal suffix of scales
/// over which every adjacent connecting map is a rational isomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityReport {
    pub dimension: usize,
    pub stable: bool,
    pub stable_rank: Option<usize>,
    /// Index into `scales` where the isomorphism window starts; the window
    /// is `scales[window_start..]`.
    pub window_start: usize,
    pub rank_sequence: Vec<usize>,
}

/// Finite approximation of the inverse limit in one dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LcBetti {
    Stable {
        rank: usize,
    },
    /// The tower never settles; rather than fabricate a limit, the observed
    /// ranks are handed back.
    Unstable {
        rank_sequence: Vec<usize>,
    },
}

/// A strictly decreasing sequence of scales with one complex per scale and
/// the connecting homology maps between adjacent scales.
pub struct ScaleTower {
    space: Arc<FiniteMetricSpace>,
    max_dim: usize,
    slots: Vec<ScaleSlot>,
    /// `connecting[n][k]`: H_n at `scales[k+1]` (finer) → H_n at
    /// `scales[k]` (coarser), induced by inclusion of chains.
    connecting: Vec<Vec<QMat>>,
}

/// Relabels a chain of the finer complex by vertex set into the coarser
/// complex, where every simplex of the finer complex still exists.
fn include_chain(
    fine: &ScaleComplex,
    coarse: &ScaleComplex,
    dim: usize,
    chain: &SparseCol,
) -> SparseCol {
    let mut out: SparseCol = chain
        .iter()
        .map(|(id, c)| {
            let verts = &fine.simplices(dim)[*id as usize];
            let idx = coarse
                .simplex_index(dim, verts)
                .expect("finer-scale simplex exists at coarser scale");
            (idx as u32, c.clone())
        })
        .collect();
    out.sort_by_key(|&(r, _)| r);
    out
}

/// Expresses each representative of `from` in the homology basis of `to`,
/// giving the matrix of the inclusion-induced map.
fn induced_by_inclusion(
    from_complex: &ScaleComplex,
    from: &CycleBasis,
    to_complex: &ScaleComplex,
    to: &CycleBasis,
    dim: usize,
) -> Result<QMat, TowerError> {
    let cols: Result<Vec<Vec<Q>>, TowerError> = from
        .reps()
        .iter()
        .map(|rep| {
            let included = include_chain(from_complex, to_complex, dim, rep);
            to.express(&included).ok_or_else(|| {
                TowerError::Homology(alloc::string::String::from(
                    "included representative is not a cycle at the coarser scale",
                ))
            })
        })
        .collect();
    Ok(QMat::from_columns(to.rank(), &cols?))
}

impl ScaleTower {
    /// Builds every scale and the adjacent connecting maps. Scales must be
    /// strictly decreasing and positive.
    pub fn build(
        space: Arc<FiniteMetricSpace>,
        scales: &[Q],
        max_dim: usize,
    ) -> Result<Self, TowerError> {
        Self::validate_scales(scales)?;
        let mut slots: Vec<ScaleSlot> = Vec::with_capacity(scales.len());
        for scale in scales {
            let slot = ScaleSlot::build(&space, scale, max_dim)?;
            let slot = Self::reuse_if_unchanged(slot, slots.last());
            slots.push(slot);
        }
        Self::assemble(space, slots, max_dim)
    }

    /// Assembles a tower from pre-built slots (e.g. built concurrently).
    /// Slots must come in strictly decreasing scale order.
    pub fn assemble(
        space: Arc<FiniteMetricSpace>,
        slots: Vec<ScaleSlot>,
        max_dim: usize,
    ) -> Result<Self, TowerError> {
        let scales: Vec<Q> = slots.iter().map(|s| s.scale.clone()).collect();
        Self::validate_scales(&scales)?;
        let mut connecting: Vec<Vec<QMat>> = alloc::vec![Vec::new(); max_dim];
        for k in 0..slots.len().saturating_sub(1) {
            let coarse = &slots[k];
            let fine = &slots[k + 1];
            for (n, maps) in connecting.iter_mut().enumerate() {
                maps.push(induced_by_inclusion(
                    &fine.complex,
                    fine.basis(n),
                    &coarse.complex,
                    coarse.basis(n),
                    n,
                )?);
            }
        }
        Ok(ScaleTower {
            space,
            max_dim,
            slots,
            connecting,
        })
    }

    fn reuse_if_unchanged(slot: ScaleSlot, prev: Option<&ScaleSlot>) -> ScaleSlot {
        match prev {
            Some(p) if slot.same_structure(p) => ScaleSlot {
                scale: slot.scale,
                complex: slot.complex,
                bases: p.bases.clone(),
            },
            _ => slot,
        }
    }

    fn validate_scales(scales: &[Q]) -> Result<(), TowerError> {
        if scales.is_empty() {
            return Err(TowerError::EmptyScaleList);
        }
        if scales.iter().any(|s| !s.is_positive()) {
            return Err(TowerError::NonPositiveScale);
        }
        for (i, pair) in scales.windows(2).enumerate() {
            if pair[1] >= pair[0] {
                return Err(TowerError::NotStrictlyDecreasing { position: i + 1 });
            }
        }
        Ok(())
    }

    pub fn space(&self) -> &Arc<FiniteMetricSpace> {
        &self.space
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    pub fn scales(&self) -> Vec<Q> {
        self.slots.iter().map(|s| s.scale.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn slot(&self, k: usize) -> &ScaleSlot {
        &self.slots[k]
    }

    fn scale_index(&self, scale: &Q) -> Result<usize, TowerError> {
        self.slots
            .iter()
            .position(|s| &s.scale == scale)
            .ok_or(TowerError::ScaleNotInTower)
    }

    /// Homology rank per scale, coarsest first.
    pub fn rank_sequence(&self, n: usize) -> Vec<usize> {
        self.slots.iter().map(|s| s.basis(n).rank()).collect()
    }

    /// Connecting map between adjacent scales: index `k` maps homology at
    /// `scales[k+1]` into homology at `scales[k]`.
    pub fn adjacent_connecting(&self, n: usize, k: usize) -> &QMat {
        &self.connecting[n][k]
    }

    /// Connecting map from a finer tower scale into a coarser one, solved
    /// directly from the coarser scale's reduction data (not by chaining
    /// adjacent maps; agreement of the two routes is a tested invariant).
    pub fn connecting_map(&self, n: usize, from: &Q, to: &Q) -> Result<QMat, TowerError> {
        if from > to {
            return Err(TowerError::WrongDirection);
        }
        let fine = self.scale_index(from)?;
        let coarse = self.scale_index(to)?;
        debug_assert!(fine >= coarse);
        let f = &self.slots[fine];
        let c = &self.slots[coarse];
        induced_by_inclusion(&f.complex, f.basis(n), &c.complex, c.basis(n), n)
    }

    /// Finds the longest suffix of scales (the finest end) over which every
    /// adjacent connecting map in dimension `n` is an isomorphism. The
    /// tower is stable when that window spans at least `min_window` scales;
    /// matrices decide, not rank coincidences.
    pub fn detect_stability(&self, n: usize, min_window: usize) -> StabilityReport {
        let m = self.slots.len();
        let mut window_start = m.saturating_sub(1);
        for k in (0..m.saturating_sub(1)).rev() {
            let map = &self.connecting[n][k];
            let iso = map.is_square() && !map.determinant().is_zero();
            if iso {
                window_start = k;
            } else {
                break;
            }
        }
        let window_len = m - window_start;
        let stable = window_len >= min_window && m >= 2;
        let rank_sequence = self.rank_sequence(n);
        StabilityReport {
            dimension: n,
            stable,
            stable_rank: stable.then(|| rank_sequence[m - 1]),
            window_start,
            rank_sequence,
        }
    }

    /// Stable rank when the tower is stable in dimension `n`; otherwise the
    /// observed rank sequence.
    pub fn lc_betti(&self, n: usize, min_window: usize) -> LcBetti {
        let report = self.detect_stability(n, min_window);
        match report.stable_rank {
            Some(rank) => LcBetti::Stable { rank },
            None => LcBetti::Unstable {
                rank_sequence: report.rank_sequence,
            },
        }
    }

    /// Extends the tower down to a scale below the smallest positive
    /// distance, where the complex is constant in `ε`, so the finite
    /// inverse limit is attained exactly. For any finite space that limit
    /// is the discrete one, which is why this is opt-in rather than the
    /// default reading of `lc_betti`.
    pub fn extended_to_discrete(&self) -> Result<ScaleTower, TowerError> {
        let half = Q::from_integer(2.into());
        let target = match self.space.min_positive_distance() {
            Some(d) => d / &half,
            None => self.slots.last().expect("non-empty tower").scale.clone() / &half,
        };
        let mut scales = self.scales();
        if *scales.last().expect("non-empty") > target {
            scales.push(target);
        }
        ScaleTower::build(self.space.clone(), &scales, self.max_dim)
    }
}
