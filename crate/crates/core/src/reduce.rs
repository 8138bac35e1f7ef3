//! Exact column reduction of sparse rational matrices.
//!
//! Left-to-right elimination with pivot memoization, the persistence-style
//! reduction: each column is reduced until its lowest non-zero row is new,
//! then registered as the pivot for that row. Everything is exact rational
//! arithmetic, and the same pass that computes ranks yields kernel bases and
//! representative cycles.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::complex::SparseCol;
use crate::scalar::Q;

/// `target -= factor * source`, both columns sorted by ascending row.
pub fn sub_scaled(target: &SparseCol, source: &SparseCol, factor: &Q) -> SparseCol {
    let mut out = Vec::with_capacity(target.len() + source.len());
    let mut a = target.iter().peekable();
    let mut b = source.iter().peekable();
    loop {
        match (a.peek(), b.peek()) {
            (Some(&&(ra, ref ca)), Some(&&(rb, ref cb))) => {
                if ra < rb {
                    out.push((ra, ca.clone()));
                    a.next();
                } else if rb < ra {
                    out.push((rb, -(factor * cb)));
                    b.next();
                } else {
                    let c = ca - factor * cb;
                    if !c.is_zero() {
                        out.push((ra, c));
                    }
                    a.next();
                    b.next();
                }
            }
            (Some(&&(ra, ref ca)), None) => {
                out.push((ra, ca.clone()));
                a.next();
            }
            (None, Some(&&(rb, ref cb))) => {
                out.push((rb, -(factor * cb)));
                b.next();
            }
            (None, None) => break,
        }
    }
    out
}

/// Divides a column by its lowest coefficient so the pivot entry is `1`,
/// rescaling the change-of-basis column by the same factor.
fn normalize(col: &mut SparseCol, basis_col: Option<&mut SparseCol>) {
    let low = col.last().expect("normalize of zero column").1.clone();
    if low.is_one() {
        return;
    }
    for (_, c) in col.iter_mut() {
        *c /= &low;
    }
    if let Some(v) = basis_col {
        for (_, c) in v.iter_mut() {
            *c /= &low;
        }
    }
}

/// Result of reducing a column set.
pub struct ReducedMatrix {
    /// Columns after reduction; zero columns are empty. Non-zero columns
    /// are normalized to pivot coefficient `1` and have pairwise distinct
    /// lowest rows.
    pub reduced: Vec<SparseCol>,
    /// When requested, `basis[j]` expresses reduced column `j` as a
    /// combination of the original columns (`R = D · V`).
    pub basis: Option<Vec<SparseCol>>,
}

impl ReducedMatrix {
    pub fn rank(&self) -> usize {
        self.reduced.iter().filter(|c| !c.is_empty()).count()
    }
}

/// Reduces the columns left to right. With `track_basis`, maintains the
/// change-of-basis columns so kernel elements can be read off from the zero
/// columns.
pub fn reduce_matrix(columns: Vec<SparseCol>, track_basis: bool) -> ReducedMatrix {
    let count = columns.len();
    let mut reduced: Vec<SparseCol> = Vec::with_capacity(count);
    let mut basis: Option<Vec<SparseCol>> = if track_basis {
        Some(Vec::with_capacity(count))
    } else {
        None
    };
    let mut pivot_of_row: BTreeMap<u32, usize> = BTreeMap::new();
    for (j, mut col) in columns.into_iter().enumerate() {
        let mut v: SparseCol = alloc::vec![(j as u32, Q::one())];
        while let Some(&(low, ref coeff)) = col.last() {
            match pivot_of_row.get(&low) {
                None => break,
                Some(&p) => {
                    let factor = coeff.clone();
                    col = sub_scaled(&col, &reduced[p], &factor);
                    if let Some(vs) = basis.as_ref() {
                        v = sub_scaled(&v, &vs[p], &factor);
                    }
                }
            }
        }
        if let Some(&(low, _)) = col.last() {
            let tracked = if basis.is_some() { Some(&mut v) } else { None };
            normalize(&mut col, tracked);
            pivot_of_row.insert(low, j);
        }
        reduced.push(col);
        if let Some(vs) = basis.as_mut() {
            vs.push(v);
        }
    }
    ReducedMatrix { reduced, basis }
}

/// Rank of a sparse column matrix over the rationals.
pub fn matrix_rank(columns: Vec<SparseCol>) -> usize {
    reduce_matrix(columns, false).rank()
}

/// How a pivot row is owned inside a [`CycleBasis`].
enum Pivot {
    Boundary(usize),
    Rep(usize),
}

/// A homology basis at one dimension: boundary columns plus representative
/// cycles, with pairwise distinct pivot rows, so any cycle can be expressed
/// in the basis by elimination.
pub struct CycleBasis {
    boundaries: Vec<SparseCol>,
    reps: Vec<SparseCol>,
    pivots: BTreeMap<u32, Pivot>,
    kernel_dim: usize,
    truncated: bool,
}

impl CycleBasis {
    /// Builds the basis from the boundary operator out of this dimension
    /// (`d_n`, kernel side) and into it (`d_np1`, image side).
    ///
    /// `d_n` may be `None` for dimension 0 (everything is a cycle);
    /// `truncated` marks that `d_np1` was unavailable (dimension equals the
    /// complex's `max_dim`), in which case the rank is only the cycle count.
    pub fn new(
        column_count: usize,
        d_n: Option<Vec<SparseCol>>,
        d_np1: Vec<SparseCol>,
        truncated: bool,
    ) -> Self {
        let mut boundaries: Vec<SparseCol> = Vec::new();
        let mut pivots: BTreeMap<u32, Pivot> = BTreeMap::new();
        for col in reduce_matrix(d_np1, false).reduced {
            if let Some(&(low, _)) = col.last() {
                pivots.insert(low, Pivot::Boundary(boundaries.len()));
                boundaries.push(col);
            }
        }
        let kernel: Vec<SparseCol> = match d_n {
            None => (0..column_count)
                .map(|j| alloc::vec![(j as u32, Q::one())])
                .collect(),
            Some(cols) => {
                let r = reduce_matrix(cols, true);
                let basis = r.basis.expect("basis tracked");
                r.reduced
                    .iter()
                    .zip(basis)
                    .filter(|(col, _)| col.is_empty())
                    .map(|(_, v)| v)
                    .collect()
            }
        };
        let kernel_dim = kernel.len();
        let mut reps: Vec<SparseCol> = Vec::new();
        for mut z in kernel {
            while let Some(&(low, ref coeff)) = z.last() {
                let factor = coeff.clone();
                match pivots.get(&low) {
                    Some(Pivot::Boundary(b)) => z = sub_scaled(&z, &boundaries[*b], &factor),
                    Some(Pivot::Rep(r)) => z = sub_scaled(&z, &reps[*r], &factor),
                    None => break,
                }
            }
            if let Some(&(low, _)) = z.last() {
                normalize(&mut z, None);
                pivots.insert(low, Pivot::Rep(reps.len()));
                reps.push(z);
            }
        }
        debug_assert_eq!(reps.len() + boundaries.len(), kernel_dim);
        CycleBasis {
            boundaries,
            reps,
            pivots,
            kernel_dim,
            truncated,
        }
    }

    /// Homology rank (cycle count minus boundary rank).
    pub fn rank(&self) -> usize {
        self.reps.len()
    }

    pub fn kernel_dim(&self) -> usize {
        self.kernel_dim
    }

    pub fn boundary_rank(&self) -> usize {
        self.boundaries.len()
    }

    /// True when the image-side boundary operator was not available, so the
    /// reported rank is not the true homology rank.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    /// Representative cycles, one per homology class in the basis.
    pub fn reps(&self) -> &[SparseCol] {
        &self.reps
    }

    /// Coordinates of a cycle in the homology basis, or `None` when the
    /// chain is not a cycle of this complex (its class leaves the span).
    pub fn express(&self, chain: &SparseCol) -> Option<Vec<Q>> {
        let mut coords = alloc::vec![Q::zero(); self.reps.len()];
        let mut w = chain.clone();
        while let Some(&(low, ref coeff)) = w.last() {
            let factor = coeff.clone();
            match self.pivots.get(&low)? {
                Pivot::Boundary(b) => w = sub_scaled(&w, &self.boundaries[*b], &factor),
                Pivot::Rep(r) => {
                    coords[*r] += &factor;
                    w = sub_scaled(&w, &self.reps[*r], &factor);
                }
            }
        }
        Some(coords)
    }
}
