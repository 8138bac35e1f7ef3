//! Sampled self-maps of a finite metric space: moduli of continuity, chain
//! maps between scale complexes, and induced matrices on stable homology.

use alloc::sync::Arc;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::complex::{ScaleComplex, SparseCol};
use crate::matrix::QMat;
use crate::metric::FiniteMetricSpace;
use crate::scalar::{q_sign, Q};
use crate::tower::{ScaleTower, TowerError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MapError {
    ImageIndexOutOfRange { index: usize, value: u32 },
    WrongImageLength { expected: usize, found: usize },
    SpaceMismatch,
    MaxDimMismatch,
    TargetScaleTooSmall,
    UnstableTower { rank_sequence: Vec<usize> },
    TooExpansive,
    Tower(TowerError),
}

impl From<TowerError> for MapError {
    fn from(e: TowerError) -> Self {
        MapError::Tower(e)
    }
}

impl core::fmt::Display for MapError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            MapError::ImageIndexOutOfRange { index, value } => {
                write!(f, "image of point {index} is {value}, outside the space")
            }
            MapError::WrongImageLength { expected, found } => {
                write!(f, "image table has {found} entries, expected {expected}")
            }
            MapError::SpaceMismatch => write!(f, "map and complex live on different spaces"),
            MapError::MaxDimMismatch => write!(f, "source and target max_dim differ"),
            MapError::TargetScaleTooSmall => {
                write!(f, "target scale does not exceed the modulus of continuity")
            }
            MapError::UnstableTower { .. } => {
                write!(f, "tower is not stable in the requested dimension")
            }
            MapError::TooExpansive => {
                write!(
                    f,
                    "map too expansive for tower: no scale pair fits the modulus"
                )
            }
            MapError::Tower(e) => write!(f, "{e}"),
        }
    }
}

/// A self-map given by where each sample point goes, with an optional
/// cached table of moduli of continuity.
#[derive(Debug, Clone)]
pub struct SampledSelfMap {
    space: Arc<FiniteMetricSpace>,
    image: Vec<u32>,
    modulus_table: Vec<(Q, Q)>,
}

impl SampledSelfMap {
    pub fn new(space: Arc<FiniteMetricSpace>, image: Vec<u32>) -> Result<Self, MapError> {
        if image.len() != space.len() {
            return Err(MapError::WrongImageLength {
                expected: space.len(),
                found: image.len(),
            });
        }
        for (i, &v) in image.iter().enumerate() {
            if v as usize >= space.len() {
                return Err(MapError::ImageIndexOutOfRange { index: i, value: v });
            }
        }
        Ok(SampledSelfMap {
            space,
            image,
            modulus_table: Vec::new(),
        })
    }

    pub fn identity(space: Arc<FiniteMetricSpace>) -> Self {
        let image = (0..space.len() as u32).collect();
        SampledSelfMap {
            space,
            image,
            modulus_table: Vec::new(),
        }
    }

    pub fn constant(space: Arc<FiniteMetricSpace>, target: usize) -> Result<Self, MapError> {
        let n = space.len();
        if target >= n {
            return Err(MapError::ImageIndexOutOfRange {
                index: 0,
                value: target as u32,
            });
        }
        Ok(SampledSelfMap {
            space,
            image: alloc::vec![target as u32; n],
            modulus_table: Vec::new(),
        })
    }

    pub fn space(&self) -> &Arc<FiniteMetricSpace> {
        &self.space
    }

    pub fn image(&self) -> &[u32] {
        &self.image
    }

    pub fn apply(&self, i: usize) -> usize {
        self.image[i] as usize
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &SampledSelfMap) -> SampledSelfMap {
        debug_assert_eq!(self.space.len(), other.space.len());
        let image = other
            .image
            .iter()
            .map(|&i| self.image[i as usize])
            .collect();
        SampledSelfMap {
            space: self.space.clone(),
            image,
            modulus_table: Vec::new(),
        }
    }

    /// `k`-fold iterate (`k = 0` is the identity).
    pub fn iterate(&self, k: usize) -> SampledSelfMap {
        let mut out = SampledSelfMap::identity(self.space.clone());
        for _ in 0..k {
            out = self.compose(&out);
        }
        out
    }

    /// Modulus of continuity at scale `ε`: the largest image distance over
    /// pairs closer than `ε`. It is the smallest `ω` such that the map
    /// sends `ε`-simplices into any complex of scale strictly above `ω`;
    /// zero when no pair is that close.
    pub fn modulus(&self, eps: &Q) -> Q {
        if let Some((_, cached)) = self.modulus_table.iter().find(|(e, _)| e == eps) {
            return cached.clone();
        }
        self.modulus_uncached(eps)
    }

    fn modulus_uncached(&self, eps: &Q) -> Q {
        let n = self.space.len();
        let mut worst = Q::zero();
        for i in 0..n {
            for j in (i + 1)..n {
                if self.space.dist(i, j) < eps {
                    let img = self
                        .space
                        .dist(self.image[i] as usize, self.image[j] as usize);
                    if *img > worst {
                        worst = img.clone();
                    }
                }
            }
        }
        worst
    }

    /// Precomputes the `(ε, ω(ε))` cache for the given scales.
    pub fn with_modulus_table(mut self, scales: &[Q]) -> Self {
        let mut table: Vec<(Q, Q)> = scales
            .iter()
            .map(|e| (e.clone(), self.modulus_uncached(e)))
            .collect();
        table.sort_by(|a, b| a.0.cmp(&b.0));
        table.dedup_by(|a, b| a.0 == b.0);
        self.modulus_table = table;
        self
    }

    pub fn modulus_table(&self) -> &[(Q, Q)] {
        &self.modulus_table
    }

    /// The same map on a relabeled space (`perm[new] = old`), for
    /// basis-independence checks.
    pub fn permuted(&self, space: Arc<FiniteMetricSpace>, perm: &[usize]) -> SampledSelfMap {
        let mut inverse = alloc::vec![0u32; perm.len()];
        for (new, &old) in perm.iter().enumerate() {
            inverse[old] = new as u32;
        }
        let image = perm
            .iter()
            .map(|&old| inverse[self.image[old] as usize])
            .collect();
        SampledSelfMap {
            space,
            image,
            modulus_table: Vec::new(),
        }
    }
}

/// Chain map induced by a sampled self-map between two complexes over the
/// same space, one matrix per dimension.
///
/// A source simplex maps to the simplex on its image vertex set with the
/// sign of the sorting permutation; if vertices collide the image is the
/// zero chain. Requires `target scale > modulus(source scale)`, which
/// guarantees every image simplex exists in the target complex.
pub fn chain_map(
    map: &SampledSelfMap,
    source: &ScaleComplex,
    target: &ScaleComplex,
) -> Result<Vec<Vec<SparseCol>>, MapError> {
    if source.point_count() != map.space().len() || target.point_count() != map.space().len() {
        return Err(MapError::SpaceMismatch);
    }
    if source.max_dim() != target.max_dim() {
        return Err(MapError::MaxDimMismatch);
    }
    if *target.scale() <= map.modulus(source.scale()) {
        return Err(MapError::TargetScaleTooSmall);
    }
    let mut per_dim = Vec::with_capacity(source.max_dim() + 1);
    for dim in 0..=source.max_dim() {
        let mut cols = Vec::with_capacity(source.size(dim));
        for simplex in source.simplices(dim) {
            cols.push(image_column(map, target, dim, simplex)?);
        }
        per_dim.push(cols);
    }
    Ok(per_dim)
}

/// Image of one simplex under the map, as a (possibly zero) target column.
fn image_column(
    map: &SampledSelfMap,
    target: &ScaleComplex,
    dim: usize,
    simplex: &[u32],
) -> Result<SparseCol, MapError> {
    let mut verts: Vec<u32> = simplex.iter().map(|&v| map.image()[v as usize]).collect();
    // Insertion sort, counting swaps for the orientation sign.
    let mut swaps = 0usize;
    for i in 1..verts.len() {
        let mut j = i;
        while j > 0 && verts[j - 1] > verts[j] {
            verts.swap(j - 1, j);
            swaps += 1;
            j -= 1;
        }
    }
    if verts.windows(2).any(|w| w[0] == w[1]) {
        return Ok(Vec::new());
    }
    let idx = target
        .simplex_index(dim, &verts)
        .ok_or(MapError::TargetScaleTooSmall)? as u32;
    Ok(alloc::vec![(idx, q_sign(swaps))])
}

/// Applies the chain map to a single chain of the source complex.
pub fn push_chain(
    map: &SampledSelfMap,
    target: &ScaleComplex,
    dim: usize,
    source: &ScaleComplex,
    chain: &SparseCol,
) -> Result<SparseCol, MapError> {
    let mut acc: alloc::collections::BTreeMap<u32, Q> = alloc::collections::BTreeMap::new();
    for (id, coeff) in chain {
        let simplex = &source.simplices(dim)[*id as usize];
        for (row, sign) in image_column(map, target, dim, simplex)? {
            let entry = acc.entry(row).or_insert_with(Q::zero);
            *entry += coeff * &sign;
        }
    }
    Ok(acc.into_iter().filter(|(_, c)| !c.is_zero()).collect())
}

/// The induced endomorphism on stable homology, with the scales that
/// produced it.
#[derive(Debug, Clone)]
pub struct InducedMatrix {
    pub dimension: usize,
    /// Fine scale whose cycles were pushed through the map.
    pub source_scale: Q,
    /// Coarse scale receiving the image chains; exceeds the modulus of
    /// continuity at the source scale.
    pub target_scale: Q,
    /// Square endomorphism matrix on the stable homology basis.
    pub matrix: QMat,
}

/// Presents the map's action on stable dimension-`n` homology of the tower
/// as a square matrix: push fine-scale cycles through the map into a coarse
/// scale above the modulus, then pull back along the (invertible)
/// connecting map.
pub fn induced_on_homology(
    map: &SampledSelfMap,
    tower: &ScaleTower,
    n: usize,
    min_window: usize,
) -> Result<InducedMatrix, MapError> {
    if tower.space().len() != map.space().len() {
        return Err(MapError::SpaceMismatch);
    }
    let report = tower.detect_stability(n, min_window);
    if !report.stable {
        return Err(MapError::UnstableTower {
            rank_sequence: report.rank_sequence,
        });
    }
    let scales = tower.scales();
    let window = &scales[report.window_start..];
    // Finest source scale that still has a window scale above its modulus.
    let mut choice: Option<(usize, usize)> = None;
    'outer: for fi in (0..window.len()).rev() {
        let modulus = map.modulus(&window[fi]);
        for ci in (0..=fi).rev() {
            if window[ci] > modulus {
                choice = Some((fi, ci));
                break 'outer;
            }
        }
    }
    let Some((fi, ci)) = choice else {
        return Err(MapError::TooExpansive);
    };
    let fine = tower.slot(report.window_start + fi);
    let coarse = tower.slot(report.window_start + ci);

    let cols: Result<Vec<Vec<Q>>, MapError> = fine
        .basis(n)
        .reps()
        .iter()
        .map(|rep| {
            let pushed = push_chain(map, &coarse.complex, n, &fine.complex, rep)?;
            coarse
                .basis(n)
                .express(&pushed)
                .ok_or(MapError::TargetScaleTooSmall)
        })
        .collect();
    let pushed_matrix = QMat::from_columns(coarse.basis(n).rank(), &cols?);

    let connecting = tower.connecting_map(n, &fine.scale, &coarse.scale)?;
    let inverse = connecting.inverse().ok_or(MapError::UnstableTower {
        rank_sequence: report.rank_sequence.clone(),
    })?;
    Ok(InducedMatrix {
        dimension: n,
        source_scale: fine.scale.clone(),
        target_scale: coarse.scale.clone(),
        matrix: inverse.mul(&pushed_matrix),
    })
}
