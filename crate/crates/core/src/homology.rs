//! Homology of a scale complex over the rationals: absolute, reduced and
//! relative groups, representative cycles, the long-exact-sequence rank
//! bookkeeping, and cohomology ranks via the dualized complex.

use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::complex::{ComplexError, ScaleComplex, SparseCol};
use crate::matrix::QMat;
use crate::reduce::{matrix_rank, CycleBasis};
use crate::scalar::Q;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HomologyError {
    Complex(ComplexError),
    InvalidSubsetIndex { index: usize, point_count: usize },
    NeedsHigherMaxDim { needed: usize, max_dim: usize },
    NotACycle,
}

impl From<ComplexError> for HomologyError {
    fn from(e: ComplexError) -> Self {
        HomologyError::Complex(e)
    }
}

impl core::fmt::Display for HomologyError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            HomologyError::Complex(e) => write!(f, "{e}"),
            HomologyError::InvalidSubsetIndex { index, point_count } => {
                write!(
                    f,
                    "subset index {index} out of range for {point_count} points"
                )
            }
            HomologyError::NeedsHigherMaxDim { needed, max_dim } => {
                write!(
                    f,
                    "operation needs max_dim >= {needed}, complex has {max_dim}"
                )
            }
            HomologyError::NotACycle => write!(f, "chain is not a cycle of the complex"),
        }
    }
}

/// A chain: sparse rational combination of same-dimension simplices,
/// entries sorted by simplex id with non-zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainVector {
    pub dimension: usize,
    pub entries: Vec<(u32, Q)>,
}

impl ChainVector {
    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }
}

/// One homology group: rank plus representative cycles.
#[derive(Debug, Clone)]
pub struct HomologyGroup {
    pub dimension: usize,
    pub rank: usize,
    pub cycle_basis: Vec<ChainVector>,
    pub reduced: bool,
    /// Set when the `(n+1)`-boundary was beyond the complex's `max_dim`;
    /// the rank is then only the cycle count, not the true quotient.
    pub truncated: bool,
}

fn augmentation_columns(count: usize) -> Vec<SparseCol> {
    (0..count).map(|_| alloc::vec![(0u32, Q::one())]).collect()
}

fn basis_at(complex: &ScaleComplex, n: usize, reduced: bool) -> Result<CycleBasis, HomologyError> {
    if n > complex.max_dim() {
        return Err(ComplexError::DimensionOutOfRange {
            n,
            max_dim: complex.max_dim(),
        }
        .into());
    }
    let d_n = if n == 0 {
        if reduced && complex.point_count() > 0 {
            Some(augmentation_columns(complex.size(0)))
        } else {
            None
        }
    } else {
        Some(complex.boundary_matrix(n)?)
    };
    let truncated = n == complex.max_dim();
    let d_np1 = if truncated {
        Vec::new()
    } else {
        complex.boundary_matrix(n + 1)?
    };
    Ok(CycleBasis::new(complex.size(n), d_n, d_np1, truncated))
}

/// Homology basis (unreduced) of a complex at one dimension. This carries
/// the reduction data used to express arbitrary cycles in the basis, which
/// is what connecting maps and induced maps are made of.
pub fn homology_basis(complex: &ScaleComplex, n: usize) -> Result<CycleBasis, HomologyError> {
    basis_at(complex, n, false)
}

/// The `n`-th homology group at this scale. With `reduced`, dimension 0 is
/// computed from the augmented complex (one less than the component count).
pub fn homology(
    complex: &ScaleComplex,
    n: usize,
    reduced: bool,
) -> Result<HomologyGroup, HomologyError> {
    let basis = basis_at(complex, n, reduced)?;
    let cycle_basis = basis
        .reps()
        .iter()
        .map(|col| ChainVector {
            dimension: n,
            entries: col.clone(),
        })
        .collect();
    Ok(HomologyGroup {
        dimension: n,
        rank: basis.rank(),
        cycle_basis,
        reduced,
        truncated: basis.truncated(),
    })
}

/// Boundary of a chain, computed face by face.
pub fn boundary_of(complex: &ScaleComplex, chain: &ChainVector) -> ChainVector {
    let n = chain.dimension;
    if n == 0 {
        return ChainVector {
            dimension: 0,
            entries: Vec::new(),
        };
    }
    let mut acc: alloc::collections::BTreeMap<u32, Q> = alloc::collections::BTreeMap::new();
    let mut face: Vec<u32> = Vec::with_capacity(n);
    for (id, coeff) in &chain.entries {
        let simplex = &complex.simplices(n)[*id as usize];
        for i in 0..=n {
            face.clear();
            face.extend(
                simplex
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| *k != i)
                    .map(|(_, &v)| v),
            );
            let row = complex
                .simplex_index(n - 1, &face)
                .expect("face of simplex") as u32;
            let sign = crate::scalar::q_sign(i);
            let entry = acc.entry(row).or_insert_with(Q::zero);
            *entry += coeff * &sign;
        }
    }
    let entries = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    ChainVector {
        dimension: n - 1,
        entries,
    }
}

fn checked_subset(
    complex: &ScaleComplex,
    subset: &[usize],
) -> Result<(Vec<usize>, Vec<bool>), HomologyError> {
    let count = complex.point_count();
    let mut in_a = alloc::vec![false; count];
    for &i in subset {
        if i >= count {
            return Err(HomologyError::InvalidSubsetIndex {
                index: i,
                point_count: count,
            });
        }
        in_a[i] = true;
    }
    let sorted: Vec<usize> = (0..count).filter(|&i| in_a[i]).collect();
    Ok((sorted, in_a))
}

/// Index translation for the quotient complex `C(X)/C(A)`: per dimension,
/// the simplices with at least one vertex outside `A`.
struct QuotientIndex {
    to_quotient: Vec<u32>,
    to_full: Vec<u32>,
}

const DROPPED: u32 = u32::MAX;

fn quotient_index(complex: &ScaleComplex, dim: usize, in_a: &[bool]) -> QuotientIndex {
    let mut to_quotient = alloc::vec![DROPPED; complex.size(dim)];
    let mut to_full = Vec::new();
    for (i, s) in complex.simplices(dim).iter().enumerate() {
        if !s.iter().all(|&v| in_a[v as usize]) {
            to_quotient[i] = to_full.len() as u32;
            to_full.push(i as u32);
        }
    }
    QuotientIndex {
        to_quotient,
        to_full,
    }
}

fn quotient_boundary(
    complex: &ScaleComplex,
    dim: usize,
    rows: &QuotientIndex,
    cols: &QuotientIndex,
) -> Result<Vec<SparseCol>, HomologyError> {
    let full = complex.boundary_matrix(dim)?;
    let mut out = Vec::with_capacity(cols.to_full.len());
    for &j in &cols.to_full {
        let mut col: SparseCol = full[j as usize]
            .iter()
            .filter_map(|(r, c)| {
                let q = rows.to_quotient[*r as usize];
                (q != DROPPED).then(|| (q, c.clone()))
            })
            .collect();
        col.sort_by_key(|&(r, _)| r);
        out.push(col);
    }
    Ok(out)
}

fn relative_basis(
    complex: &ScaleComplex,
    in_a: &[bool],
    n: usize,
) -> Result<(CycleBasis, QuotientIndex), HomologyError> {
    if n > complex.max_dim() {
        return Err(ComplexError::DimensionOutOfRange {
            n,
            max_dim: complex.max_dim(),
        }
        .into());
    }
    let idx_n = quotient_index(complex, n, in_a);
    let d_n = if n == 0 {
        None
    } else {
        let idx_nm1 = quotient_index(complex, n - 1, in_a);
        Some(quotient_boundary(complex, n, &idx_nm1, &idx_n)?)
    };
    let truncated = n == complex.max_dim();
    let d_np1 = if truncated {
        Vec::new()
    } else {
        let idx_np1 = quotient_index(complex, n + 1, in_a);
        quotient_boundary(complex, n + 1, &idx_n, &idx_np1)?
    };
    Ok((
        CycleBasis::new(idx_n.to_full.len(), d_n, d_np1, truncated),
        idx_n,
    ))
}

/// Relative homology `H_n(X, A)`: homology of the quotient complex where
/// every simplex fully inside `A` is zero. Representatives are reported in
/// the full complex's simplex ids.
pub fn relative_homology(
    complex: &ScaleComplex,
    subset: &[usize],
    n: usize,
) -> Result<HomologyGroup, HomologyError> {
    let (_, in_a) = checked_subset(complex, subset)?;
    let (basis, idx_n) = relative_basis(complex, &in_a, n)?;
    let cycle_basis = basis
        .reps()
        .iter()
        .map(|col| ChainVector {
            dimension: n,
            entries: col
                .iter()
                .map(|(r, c)| (idx_n.to_full[*r as usize], c.clone()))
                .collect(),
        })
        .collect();
    Ok(HomologyGroup {
        dimension: n,
        rank: basis.rank(),
        cycle_basis,
        reduced: false,
        truncated: basis.truncated(),
    })
}

/// One window of the long exact sequence of the pair, with the rank
/// identity implied by exactness:
/// `rank H_n(A) - rank H_n(X) + rank H_n(X,A) = rank ∂ + rank ker i*`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LesWindow {
    pub n: usize,
    pub rank_sub: usize,
    pub rank_total: usize,
    pub rank_rel: usize,
    pub connecting_rank: usize,
    pub inclusion_kernel_rank: usize,
    pub balanced: bool,
}

/// Expresses an `A`-local chain in the full complex's simplex ids.
fn promote_chain(
    complex: &ScaleComplex,
    sub: &ScaleComplex,
    subset: &[usize],
    dim: usize,
    chain: &SparseCol,
) -> SparseCol {
    let mut out: SparseCol = chain
        .iter()
        .map(|(id, c)| {
            let local = &sub.simplices(dim)[*id as usize];
            let verts: Vec<u32> = local.iter().map(|&v| subset[v as usize] as u32).collect();
            let full = complex
                .simplex_index(dim, &verts)
                .expect("subset simplex in complex");
            (full as u32, c.clone())
        })
        .collect();
    out.sort_by_key(|&(r, _)| r);
    out
}

/// Matrix of the inclusion-induced map `H_n(A) -> H_n(X)` in the two
/// reduction bases.
fn inclusion_matrix(
    complex: &ScaleComplex,
    sub: &ScaleComplex,
    subset: &[usize],
    n: usize,
    sub_basis: &CycleBasis,
    total_basis: &CycleBasis,
) -> Result<QMat, HomologyError> {
    let cols: Result<Vec<Vec<Q>>, HomologyError> = sub_basis
        .reps()
        .iter()
        .map(|rep| {
            let promoted = promote_chain(complex, sub, subset, n, rep);
            total_basis
                .express(&promoted)
                .ok_or(HomologyError::NotACycle)
        })
        .collect();
    Ok(QMat::from_columns(total_basis.rank(), &cols?))
}

/// Checks the alternating-rank identity of the long exact sequence of
/// `(X, A)` for every `n < n_max`, returning the computed ranks per window.
pub fn long_exact_rank_check(
    complex: &ScaleComplex,
    subset: &[usize],
    n_max: usize,
) -> Result<Vec<LesWindow>, HomologyError> {
    if complex.max_dim() < n_max + 1 {
        return Err(HomologyError::NeedsHigherMaxDim {
            needed: n_max + 1,
            max_dim: complex.max_dim(),
        });
    }
    let (sorted, in_a) = checked_subset(complex, subset)?;
    let sub = complex.subcomplex(&sorted);
    let mut windows = Vec::new();
    for n in 0..n_max {
        let sub_basis = basis_at(&sub, n, false)?;
        let total_basis = basis_at(complex, n, false)?;
        let (rel_basis, rel_idx) = relative_basis(complex, &in_a, n)?;

        let inclusion = inclusion_matrix(complex, &sub, &sorted, n, &sub_basis, &total_basis)?;
        let inclusion_kernel_rank = sub_basis.rank() - inclusion.rank();

        // ∂ lands in H_{n-1}(A); for n = 0 the target is zero.
        let connecting_rank = if n == 0 {
            0
        } else {
            connecting_map_rank(complex, &sub, &sorted, n, &rel_basis, &rel_idx)?
        };

        let lhs = sub_basis.rank() as i64 - total_basis.rank() as i64 + rel_basis.rank() as i64;
        let rhs = connecting_rank as i64 + inclusion_kernel_rank as i64;
        windows.push(LesWindow {
            n,
            rank_sub: sub_basis.rank(),
            rank_total: total_basis.rank(),
            rank_rel: rel_basis.rank(),
            connecting_rank,
            inclusion_kernel_rank,
            balanced: lhs == rhs,
        });
    }
    Ok(windows)
}

/// Rank of the connecting homomorphism `H_n(X,A) -> H_{n-1}(A)`: take each
/// relative representative, form its absolute boundary (a cycle inside `A`),
/// and express it in the `A` homology basis.
fn connecting_map_rank(
    complex: &ScaleComplex,
    sub: &ScaleComplex,
    subset: &[usize],
    n: usize,
    rel_basis: &CycleBasis,
    rel_idx: &QuotientIndex,
) -> Result<usize, HomologyError> {
    let sub_basis_nm1 = basis_at(sub, n - 1, false)?;
    let mut local_of_full = alloc::collections::BTreeMap::new();
    for (local, s) in sub.simplices(n - 1).iter().enumerate() {
        let verts: Vec<u32> = s.iter().map(|&v| subset[v as usize] as u32).collect();
        let full = complex
            .simplex_index(n - 1, &verts)
            .expect("subset simplex");
        local_of_full.insert(full as u32, local as u32);
    }
    let mut cols: Vec<Vec<Q>> = Vec::with_capacity(rel_basis.rank());
    for rep in rel_basis.reps() {
        let full_chain = ChainVector {
            dimension: n,
            entries: rep
                .iter()
                .map(|(r, c)| (rel_idx.to_full[*r as usize], c.clone()))
                .collect(),
        };
        let boundary = boundary_of(complex, &full_chain);
        let mut local: SparseCol = boundary
            .entries
            .iter()
            .map(|(full, c)| {
                let l = *local_of_full
                    .get(full)
                    .expect("relative boundary lies in A");
                (l, c.clone())
            })
            .collect();
        local.sort_by_key(|&(r, _)| r);
        cols.push(
            sub_basis_nm1
                .express(&local)
                .ok_or(HomologyError::NotACycle)?,
        );
    }
    Ok(QMat::from_columns(sub_basis_nm1.rank(), &cols).rank())
}

fn transpose_columns(columns: &[SparseCol], row_count: usize) -> Vec<SparseCol> {
    let mut out: Vec<SparseCol> = alloc::vec![Vec::new(); row_count];
    for (j, col) in columns.iter().enumerate() {
        for (r, c) in col {
            out[*r as usize].push((j as u32, c.clone()));
        }
    }
    out
}

/// Rank of degree-`n` cohomology of the dualized complex (coboundaries are
/// transposed boundaries). Over a field this equals the homology rank, but
/// it is computed on the transposed matrices as an independent route.
pub fn cohomology_rank(complex: &ScaleComplex, n: usize) -> Result<usize, HomologyError> {
    if n + 1 > complex.max_dim() {
        return Err(HomologyError::NeedsHigherMaxDim {
            needed: n + 1,
            max_dim: complex.max_dim(),
        });
    }
    // δ_n: C^n -> C^{n+1} is the transpose of ∂_{n+1}.
    let delta_n = transpose_columns(&complex.boundary_matrix(n + 1)?, complex.size(n));
    let rank_delta_n = matrix_rank(delta_n);
    let rank_delta_nm1 = if n == 0 {
        0
    } else {
        let delta = transpose_columns(&complex.boundary_matrix(n)?, complex.size(n - 1));
        matrix_rank(delta)
    };
    Ok(complex.size(n) - rank_delta_n - rank_delta_nm1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{FiniteMetricSpace, MetricKind};
    use crate::scalar::{q, q_from_f64, q_int};
    use alloc::vec;
    use alloc::vec::Vec;

    fn hexagon() -> FiniteMetricSpace {
        let points: Vec<Vec<Q>> = (0..6)
            .map(|k| {
                let angle = core::f64::consts::PI * (k as f64) / 3.0;
                vec![
                    q_from_f64(angle.cos()).unwrap(),
                    q_from_f64(angle.sin()).unwrap(),
                ]
            })
            .collect();
        FiniteMetricSpace::from_point_cloud(&points, MetricKind::Euclidean).unwrap()
    }

    fn two_points() -> FiniteMetricSpace {
        FiniteMetricSpace::from_point_cloud(
            &[vec![q_int(0)], vec![q_int(1)]],
            MetricKind::Euclidean,
        )
        .unwrap()
    }

    /// Independent component count on the strict-scale proximity graph.
    fn component_count(space: &FiniteMetricSpace, scale: &Q) -> usize {
        let n = space.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if space.dist(i, j) < scale {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    parent[a] = b;
                }
            }
        }
        (0..n)
            .map(|i| find(&mut parent, i))
            .collect::<alloc::collections::BTreeSet<_>>()
            .len()
    }

    #[test]
    fn single_point_homology() {
        let s =
            FiniteMetricSpace::from_point_cloud(&[vec![q_int(0)]], MetricKind::Euclidean).unwrap();
        let c = ScaleComplex::build(&s, &q_int(1), 2).unwrap();
        assert_eq!(homology(&c, 0, false).unwrap().rank, 1);
        assert_eq!(homology(&c, 1, false).unwrap().rank, 0);
        assert_eq!(homology(&c, 0, true).unwrap().rank, 0);
    }

    #[test]
    fn hexagon_circle_ranks() {
        let c = ScaleComplex::build(&hexagon(), &q(6, 5), 2).unwrap();
        let h0 = homology(&c, 0, false).unwrap();
        let h1 = homology(&c, 1, false).unwrap();
        assert_eq!((h0.rank, h1.rank), (1, 1));
        assert!(!h1.truncated);
        // The generating cycle really is a cycle.
        for rep in &h1.cycle_basis {
            assert!(boundary_of(&c, rep).is_zero());
        }
    }

    #[test]
    fn small_diameter_space_has_trivial_reduced_homology() {
        let pts = vec![
            vec![q_int(0)],
            vec![q(1, 10)],
            vec![q(2, 10)],
            vec![q(3, 10)],
        ];
        let s = FiniteMetricSpace::from_point_cloud(&pts, MetricKind::Euclidean).unwrap();
        let c = ScaleComplex::build(&s, &q_int(1), 3).unwrap();
        for n in 0..=2 {
            assert_eq!(homology(&c, n, true).unwrap().rank, 0, "reduced H_{n}");
        }
    }

    #[test]
    fn dyadic_sample_components_match_independent_count() {
        // Points 1, 1/2, ..., 1/64 and 0 at scale 1/16: the strict proximity
        // graph keeps 1, 1/2, 1/4, 1/8 isolated and chains the tail
        // (1/16 is within 1/32 of 1/32), giving five classes.
        let mut pts: Vec<Vec<Q>> = (0..=6).map(|k| vec![q(1, 1 << k)]).collect();
        pts.push(vec![q_int(0)]);
        let s = FiniteMetricSpace::from_point_cloud(&pts, MetricKind::Euclidean).unwrap();
        let scale = q(1, 16);
        let c = ScaleComplex::build(&s, &scale, 2).unwrap();
        let rank = homology(&c, 0, false).unwrap().rank;
        assert_eq!(rank, component_count(&s, &scale));
        assert_eq!(rank, 5);
        assert_eq!(homology(&c, 1, false).unwrap().rank, 0);
    }

    #[test]
    fn relative_checks() {
        let hexa = hexagon();
        let c = ScaleComplex::build(&hexa, &q(6, 5), 2).unwrap();
        // A = X kills everything.
        for n in 0..=1 {
            assert_eq!(
                relative_homology(&c, &[0, 1, 2, 3, 4, 5], n).unwrap().rank,
                0
            );
        }
        // The hexagon loop survives rel a vertex.
        assert_eq!(relative_homology(&c, &[0], 1).unwrap().rank, 1);
        assert_eq!(relative_homology(&c, &[0], 0).unwrap().rank, 0);

        let two = two_points();
        let c2 = ScaleComplex::build(&two, &q(1, 2), 2).unwrap();
        assert_eq!(relative_homology(&c2, &[0], 0).unwrap().rank, 1);

        assert!(matches!(
            relative_homology(&c2, &[7], 0),
            Err(HomologyError::InvalidSubsetIndex { index: 7, .. })
        ));
    }

    #[test]
    fn relative_representatives_have_boundary_in_subset() {
        let c = ScaleComplex::build(&hexagon(), &q(6, 5), 2).unwrap();
        let rel = relative_homology(&c, &[0], 1).unwrap();
        assert_eq!(rel.rank, 1);
        for rep in &rel.cycle_basis {
            let b = boundary_of(&c, rep);
            // Boundary must be supported on vertices of A = {0}.
            for (id, _) in &b.entries {
                assert_eq!(c.simplices(0)[*id as usize].as_ref(), &[0]);
            }
        }
    }

    #[test]
    fn les_windows_balance() {
        let two = two_points();
        let c2 = ScaleComplex::build(&two, &q(1, 2), 2).unwrap();
        let windows = long_exact_rank_check(&c2, &[0], 1).unwrap();
        assert_eq!(windows.len(), 1);
        let w = &windows[0];
        assert_eq!((w.rank_sub, w.rank_total, w.rank_rel), (1, 2, 1));
        assert_eq!(w.connecting_rank, 0);
        assert!(w.balanced);

        let c = ScaleComplex::build(&hexagon(), &q(6, 5), 3).unwrap();
        for w in long_exact_rank_check(&c, &[0], 2).unwrap() {
            assert!(w.balanced, "window at n={}", w.n);
        }
        // A = X: everything cancels.
        for w in long_exact_rank_check(&c, &[0, 1, 2, 3, 4, 5], 2).unwrap() {
            assert!(w.balanced);
            assert_eq!(w.rank_rel, 0);
        }
    }

    #[test]
    fn cohomology_matches_homology_rank() {
        let c = ScaleComplex::build(&hexagon(), &q(6, 5), 2).unwrap();
        assert_eq!(cohomology_rank(&c, 1).unwrap(), 1);
        assert_eq!(cohomology_rank(&c, 0).unwrap(), 1);

        let point =
            FiniteMetricSpace::from_point_cloud(&[vec![q_int(0)]], MetricKind::Euclidean).unwrap();
        let cp = ScaleComplex::build(&point, &q_int(1), 2).unwrap();
        assert_eq!(cohomology_rank(&cp, 1).unwrap(), 0);
    }
}
