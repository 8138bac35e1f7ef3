//! The chain complex of a finite metric space at one scale.
//!
//! At scale `ε` the complex is generated by the cliques of the strict-`ε`
//! proximity graph: an `n`-simplex is a set of `n+1` points whose pairwise
//! distances are all `< ε`. This is the finite model of the scale-`ε`
//! singular chain complex: a short path into a finite space realizes exactly
//! a chain of points with consecutive jumps `< ε`, and any vertex set of
//! diameter `< ε` must be acyclic, which forces the clique filling.

use alloc::boxed::Box;
use alloc::vec::Vec;

use num_traits::Signed;

use crate::metric::FiniteMetricSpace;
use crate::scalar::{q_sign, Q};

/// Sparse matrix column: `(row, coefficient)` pairs, rows strictly
/// ascending, coefficients non-zero.
pub type SparseCol = Vec<(u32, Q)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ComplexError {
    NonPositiveScale,
    DimensionOutOfRange { n: usize, max_dim: usize },
}

impl core::fmt::Display for ComplexError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ComplexError::NonPositiveScale => write!(f, "scale must be positive"),
            ComplexError::DimensionOutOfRange { n, max_dim } => {
                write!(f, "dimension {n} out of range for max_dim {max_dim}")
            }
        }
    }
}

/// All simplices of a space at one scale, listed per dimension in
/// lexicographic vertex order.
#[derive(Debug, Clone)]
pub struct ScaleComplex {
    scale: Q,
    max_dim: usize,
    point_count: usize,
    simplices: Vec<Vec<Box<[u32]>>>,
}

struct Bitset {
    words: Vec<u64>,
}

impl Bitset {
    fn empty(bits: usize) -> Self {
        Bitset {
            words: alloc::vec![0u64; bits.div_ceil(64)],
        }
    }

    fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1u64 << (i % 64);
    }

    fn intersect_above(&self, other: &Bitset, threshold: usize) -> Bitset {
        let mut words: Vec<u64> = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a & b)
            .collect();
        let w = threshold / 64;
        for word in words.iter_mut().take(w) {
            *word = 0;
        }
        if w < words.len() {
            let shift = threshold % 64;
            if shift == 63 {
                words[w] = 0;
            } else {
                words[w] &= !((1u64 << (shift + 1)) - 1);
            }
        }
        Bitset { words }
    }

    fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &bits)| {
            let mut rest = bits;
            core::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let tz = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(w * 64 + tz)
            })
        })
    }
}

impl ScaleComplex {
    /// Enumerates every clique of the strict-`ε` proximity graph up to
    /// `max_dim + 1` vertices, by ordered extension: a simplex is only
    /// extended by higher-indexed common neighbors of its vertices, so each
    /// clique is produced exactly once and each dimension comes out in
    /// lexicographic order.
    pub fn build(
        space: &FiniteMetricSpace,
        scale: &Q,
        max_dim: usize,
    ) -> Result<Self, ComplexError> {
        if !scale.is_positive() {
            return Err(ComplexError::NonPositiveScale);
        }
        let n = space.len();
        let mut adjacency: Vec<Bitset> = (0..n).map(|_| Bitset::empty(n)).collect();
        for i in 0..n {
            for j in (i + 1)..n {
                if space.dist(i, j) < scale {
                    adjacency[i].set(j);
                    adjacency[j].set(i);
                }
            }
        }
        let mut simplices: Vec<Vec<Box<[u32]>>> = alloc::vec![Vec::new(); max_dim + 1];
        let mut stack: Vec<u32> = Vec::with_capacity(max_dim + 1);
        for v in 0..n {
            stack.push(v as u32);
            simplices[0].push(stack.clone().into_boxed_slice());
            if max_dim > 0 {
                let candidates = adjacency[v].intersect_above(&adjacency[v], v);
                extend_cliques(&adjacency, &mut stack, &candidates, max_dim, &mut simplices);
            }
            stack.pop();
        }
        Ok(Self {
            scale: scale.clone(),
            max_dim,
            point_count: n,
            simplices,
        })
    }

    pub fn scale(&self) -> &Q {
        &self.scale
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    pub fn point_count(&self) -> usize {
        self.point_count
    }

    /// Number of simplices in dimension `dim` (zero above `max_dim`).
    pub fn size(&self, dim: usize) -> usize {
        self.simplices.get(dim).map_or(0, Vec::len)
    }

    pub fn simplices(&self, dim: usize) -> &[Box<[u32]>] {
        self.simplices.get(dim).map_or(&[], Vec::as_slice)
    }

    /// Index of a simplex given its ascending vertex list.
    pub fn simplex_index(&self, dim: usize, vertices: &[u32]) -> Option<usize> {
        self.simplices
            .get(dim)?
            .binary_search_by(|s| s.as_ref().cmp(vertices))
            .ok()
    }

    /// Boundary operator as sparse columns: column `j` lists the faces of
    /// the `j`-th `n`-simplex, face `i` (vertex `i` deleted) with sign
    /// `(-1)^i`.
    pub fn boundary_matrix(&self, n: usize) -> Result<Vec<SparseCol>, ComplexError> {
        if n == 0 || n > self.max_dim {
            return Err(ComplexError::DimensionOutOfRange {
                n,
                max_dim: self.max_dim,
            });
        }
        let mut cols = Vec::with_capacity(self.size(n));
        let mut face: Vec<u32> = Vec::with_capacity(n);
        for simplex in self.simplices(n) {
            let mut col: SparseCol = Vec::with_capacity(n + 1);
            for i in 0..=n {
                face.clear();
                face.extend(
                    simplex
                        .iter()
                        .enumerate()
                        .filter(|(k, _)| *k != i)
                        .map(|(_, &v)| v),
                );
                let row = self
                    .simplex_index(n - 1, &face)
                    .expect("faces of a clique are cliques") as u32;
                col.push((row, q_sign(i)));
            }
            col.sort_by_key(|&(row, _)| row);
            cols.push(col);
        }
        Ok(cols)
    }

    /// The subcomplex on a vertex subset (ascending point indices),
    /// relabeled to local indices `0..subset.len()`. Because simplices are
    /// cliques, this equals the complex of the restricted space.
    pub fn subcomplex(&self, subset: &[usize]) -> ScaleComplex {
        debug_assert!(subset.windows(2).all(|w| w[0] < w[1]));
        let mut local = alloc::vec![u32::MAX; self.point_count];
        for (new, &old) in subset.iter().enumerate() {
            local[old] = new as u32;
        }
        let mut simplices: Vec<Vec<Box<[u32]>>> = alloc::vec![Vec::new(); self.max_dim + 1];
        for (dim, kept) in simplices.iter_mut().enumerate() {
            for simplex in self.simplices(dim) {
                if simplex.iter().all(|&v| local[v as usize] != u32::MAX) {
                    let relabeled: Vec<u32> = simplex.iter().map(|&v| local[v as usize]).collect();
                    kept.push(relabeled.into_boxed_slice());
                }
            }
        }
        ScaleComplex {
            scale: self.scale.clone(),
            max_dim: self.max_dim,
            point_count: subset.len(),
            simplices,
        }
    }

    /// Per-dimension simplex counts, for Euler characteristic bookkeeping.
    pub fn sizes(&self) -> Vec<usize> {
        (0..=self.max_dim).map(|d| self.size(d)).collect()
    }
}

fn extend_cliques(
    adjacency: &[Bitset],
    stack: &mut Vec<u32>,
    candidates: &Bitset,
    max_dim: usize,
    simplices: &mut [Vec<Box<[u32]>>],
) {
    for u in candidates.iter_ones() {
        stack.push(u as u32);
        simplices[stack.len() - 1].push(stack.clone().into_boxed_slice());
        if stack.len() <= max_dim {
            let next = candidates.intersect_above(&adjacency[u], u);
            extend_cliques(adjacency, stack, &next, max_dim, simplices);
        }
        stack.pop();
    }
}
