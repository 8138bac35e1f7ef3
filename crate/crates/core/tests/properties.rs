//! Property tests for the structural invariants: boundary-squared vanishes,
//! scale monotonicity, small-diameter triviality, Euler characteristic,
//! chain-map commutation, functoriality, tower coherence, and the greedy
//! count sandwich.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;
use proptest::prelude::*;

use scaled_homology::complex::{ScaleComplex, SparseCol};
use scaled_homology::entropy::{
    exact_separated_number, exact_spanning_number, separated_count, spanning_count,
    OrbitMetricContext,
};
use scaled_homology::homology::{boundary_of, cohomology_rank, homology, homology_basis};
use scaled_homology::metric::{FiniteMetricSpace, MetricKind};
use scaled_homology::scalar::{q, q_int, Q};
use scaled_homology::selfmap::{chain_map, push_chain, SampledSelfMap};
use scaled_homology::tower::ScaleTower;

fn space_strategy() -> impl Strategy<Value = FiniteMetricSpace> {
    (3usize..9)
        .prop_flat_map(|n| proptest::collection::vec((0i64..32, 0i64..32), n))
        .prop_map(|coords| {
            let pts: Vec<Vec<Q>> = coords
                .iter()
                .map(|&(x, y)| vec![q(x, 16), q(y, 16)])
                .collect();
            FiniteMetricSpace::from_point_cloud(&pts, MetricKind::Euclidean).unwrap()
        })
}

fn scale_strategy() -> impl Strategy<Value = Q> {
    (1i64..30).prop_map(|k| q(k, 10))
}

/// Accumulates `cols ∘ chain-map` style composites into dense-keyed maps.
fn apply_columns(cols: &[SparseCol], input: &SparseCol) -> BTreeMap<u32, Q> {
    let mut acc: BTreeMap<u32, Q> = BTreeMap::new();
    for (j, c) in input {
        for (r, v) in &cols[*j as usize] {
            let e = acc.entry(*r).or_insert_with(Q::zero);
            *e += c * v;
        }
    }
    acc.retain(|_, v| !v.is_zero());
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn boundary_squared_is_zero(space in space_strategy(), scale in scale_strategy()) {
        let complex = ScaleComplex::build(&space, &scale, 3).unwrap();
        for n in 2..=3usize {
            if complex.size(n) == 0 {
                continue;
            }
            let d_hi = complex.boundary_matrix(n).unwrap();
            let d_lo = complex.boundary_matrix(n - 1).unwrap();
            for col in &d_hi {
                let composite = apply_columns(&d_lo, col);
                prop_assert!(composite.is_empty(), "∂∂ ≠ 0 at n={n}");
            }
        }
    }

    #[test]
    fn finer_scale_simplices_nest(space in space_strategy(), scale in scale_strategy()) {
        let fine_scale = &scale * q(3, 5);
        let coarse = ScaleComplex::build(&space, &scale, 2).unwrap();
        let fine = ScaleComplex::build(&space, &fine_scale, 2).unwrap();
        for dim in 0..=2 {
            for s in fine.simplices(dim) {
                prop_assert!(coarse.simplex_index(dim, s).is_some());
            }
        }
    }

    #[test]
    fn small_diameter_is_acyclic(space in space_strategy()) {
        let scale = space.diameter() + q(1, 10);
        let complex = ScaleComplex::build(&space, &scale, 3).unwrap();
        for n in 0..=2usize {
            prop_assert_eq!(homology(&complex, n, true).unwrap().rank, 0);
        }
    }

    #[test]
    fn euler_characteristic_consistent(space in space_strategy(), scale in scale_strategy()) {
        // max_dim covers every possible clique, so the alternating sums agree.
        let complex = ScaleComplex::build(&space, &scale, space.len()).unwrap();
        let mut by_counts = 0i64;
        let mut by_ranks = 0i64;
        for dim in 0..space.len() {
            let sign = if dim % 2 == 0 { 1 } else { -1 };
            by_counts += sign * complex.size(dim) as i64;
            if dim + 1 < space.len() || complex.size(dim) == 0 {
                by_ranks += sign * homology(&complex, dim, false).unwrap().rank as i64;
            }
        }
        prop_assert_eq!(by_counts, by_ranks);
    }

    #[test]
    fn representatives_are_cycles(space in space_strategy(), scale in scale_strategy()) {
        let complex = ScaleComplex::build(&space, &scale, 3).unwrap();
        for n in 0..=2usize {
            let group = homology(&complex, n, false).unwrap();
            for rep in &group.cycle_basis {
                prop_assert!(boundary_of(&complex, rep).is_zero());
            }
        }
    }

    #[test]
    fn constructed_spaces_validate(space in space_strategy()) {
        prop_assert!(space.validate(false).is_empty());
        let union = FiniteMetricSpace::disjoint_union(
            &[space.clone(), space.clone()],
            &(space.diameter() + q_int(1)),
        )
        .unwrap();
        prop_assert!(union.validate(false).is_empty());
        let n = space.len();
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(union.dist(i, n + j), &(space.diameter() + q_int(1)));
            }
        }
    }

    #[test]
    fn greedy_net_covers(space in space_strategy(), scale in scale_strategy()) {
        let net = space.greedy_net(&scale).unwrap();
        for i in 0..space.len() {
            prop_assert!(net.center_indices.iter().any(|&c| space.dist(i, c) < &scale));
        }
    }

    #[test]
    fn cohomology_duality(space in space_strategy(), scale in scale_strategy()) {
        let complex = ScaleComplex::build(&space, &scale, 3).unwrap();
        for n in 0..=2usize {
            prop_assert_eq!(
                cohomology_rank(&complex, n).unwrap(),
                homology(&complex, n, false).unwrap().rank
            );
        }
    }

    #[test]
    fn tower_coherence(space in space_strategy()) {
        let d = space.diameter();
        if d.is_zero() {
            return Ok(());
        }
        let scales = [&d * q(9, 10), &d * q(6, 10), &d * q(3, 10)];
        let tower = ScaleTower::build(Arc::new(space), &scales, 2).unwrap();
        for n in 0..2usize {
            let direct = tower.connecting_map(n, &scales[2], &scales[0]).unwrap();
            let chained = tower
                .adjacent_connecting(n, 0)
                .mul(tower.adjacent_connecting(n, 1));
            prop_assert_eq!(direct, chained);
        }
    }

    #[test]
    fn connecting_ranks_survive_relabeling(space in space_strategy(), seed in 0u64..1000) {
        let d = space.diameter();
        if d.is_zero() {
            return Ok(());
        }
        let scales = [&d * q(9, 10), &d * q(5, 10)];
        let n_points = space.len();
        let tower = ScaleTower::build(Arc::new(space.clone()), &scales, 2).unwrap();

        // Deterministic pseudo-shuffle of the point order.
        let mut perm: Vec<usize> = (0..n_points).collect();
        let mut state = seed.wrapping_add(1);
        for i in (1..n_points).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (state as usize) % (i + 1));
        }
        let permuted = ScaleTower::build(Arc::new(space.permuted(&perm)), &scales, 2).unwrap();
        for n in 0..2usize {
            prop_assert_eq!(
                tower.adjacent_connecting(n, 0).rank(),
                permuted.adjacent_connecting(n, 0).rank()
            );
        }
    }

    #[test]
    fn chain_map_commutes_with_boundary(
        space in space_strategy(),
        scale in scale_strategy(),
        raw_image in proptest::collection::vec(0usize..64, 9),
    ) {
        let n_points = space.len();
        let image: Vec<u32> = (0..n_points).map(|i| (raw_image[i] % n_points) as u32).collect();
        let space = Arc::new(space);
        let map = SampledSelfMap::new(space.clone(), image).unwrap();
        let target_scale = map.modulus(&scale) + &scale;
        let source = ScaleComplex::build(&space, &scale, 3).unwrap();
        let target = ScaleComplex::build(&space, &target_scale, 3).unwrap();
        let f = chain_map(&map, &source, &target).unwrap();
        for n in 1..=3usize {
            let d_src = source.boundary_matrix(n).unwrap();
            let d_tgt = target.boundary_matrix(n).unwrap();
            for j in 0..source.size(n) {
                // ∂ ∘ f# on simplex j.
                let lhs = apply_columns(&d_tgt, &f[n][j]);
                // f# ∘ ∂ on simplex j.
                let rhs = apply_columns(&f[n - 1], &d_src[j]);
                prop_assert_eq!(lhs, rhs, "dim {} simplex {}", n, j);
            }
        }
    }

    #[test]
    fn composition_is_functorial(
        space in space_strategy(),
        scale in scale_strategy(),
        raw_f in proptest::collection::vec(0usize..64, 9),
        raw_g in proptest::collection::vec(0usize..64, 9),
    ) {
        let n_points = space.len();
        let space = Arc::new(space);
        let f_img: Vec<u32> = (0..n_points).map(|i| (raw_f[i] % n_points) as u32).collect();
        let g_img: Vec<u32> = (0..n_points).map(|i| (raw_g[i] % n_points) as u32).collect();
        let f = SampledSelfMap::new(space.clone(), f_img).unwrap();
        let g = SampledSelfMap::new(space.clone(), g_img).unwrap();
        let gf = g.compose(&f);

        let mid_scale = f.modulus(&scale) + &scale;
        let top_scale = g.modulus(&mid_scale) + gf.modulus(&scale) + &mid_scale;
        let source = ScaleComplex::build(&space, &scale, 2).unwrap();
        let mid = ScaleComplex::build(&space, &mid_scale, 2).unwrap();
        let top = ScaleComplex::build(&space, &top_scale, 2).unwrap();

        let f_map = chain_map(&f, &source, &mid).unwrap();
        let g_map = chain_map(&g, &mid, &top).unwrap();
        let gf_map = chain_map(&gf, &source, &top).unwrap();
        for dim in 0..=2usize {
            for j in 0..source.size(dim) {
                let composite = apply_columns(&g_map[dim], &f_map[dim][j]);
                let direct: BTreeMap<u32, Q> =
                    gf_map[dim][j].iter().cloned().collect();
                prop_assert_eq!(composite, direct, "dim {} simplex {}", dim, j);
            }
        }
    }

    #[test]
    fn greedy_counts_are_bounded_by_exact(
        space in space_strategy(),
        raw_image in proptest::collection::vec(0usize..64, 9),
        horizon in 1usize..4,
    ) {
        let n_points = space.len();
        let image: Vec<u32> = (0..n_points).map(|i| (raw_image[i] % n_points) as u32).collect();
        let map = SampledSelfMap::new(Arc::new(space), image).unwrap();
        let ctx = OrbitMetricContext::new(&map, horizon).unwrap();
        let eps = q(1, 2);
        let greedy_span = spanning_count(&ctx, &eps);
        let greedy_sep = separated_count(&ctx, &eps);
        prop_assert!(greedy_span <= greedy_sep);
        let r = exact_spanning_number(&ctx, &eps).unwrap();
        let s = exact_separated_number(&ctx, &eps).unwrap();
        prop_assert!(r <= s);
        prop_assert!(greedy_span >= r);
        prop_assert!(greedy_sep <= s);
        let r_half = exact_spanning_number(&ctx, &q(1, 4)).unwrap();
        prop_assert!(s <= r_half);
    }
}

#[test]
fn identity_chain_map_reproduces_connecting_map() {
    let pts: Vec<Vec<Q>> = (0..12).map(|j| vec![q(j, 12)]).collect();
    let space =
        Arc::new(FiniteMetricSpace::from_point_cloud(&pts, MetricKind::FlatCircle).unwrap());
    let scales = [q(3, 12), q(2, 12), q(3, 24)];
    let tower = ScaleTower::build(space.clone(), &scales, 2).unwrap();
    let id = SampledSelfMap::identity(space);
    for n in 0..2usize {
        for (fine_idx, coarse_idx) in [(2usize, 1usize), (1, 0), (2, 0)] {
            let fine = tower.slot(fine_idx);
            let coarse = tower.slot(coarse_idx);
            let fine_basis = homology_basis(&fine.complex, n).unwrap();
            let coarse_basis = homology_basis(&coarse.complex, n).unwrap();
            let cols: Vec<Vec<Q>> = fine_basis
                .reps()
                .iter()
                .map(|rep| {
                    let pushed = push_chain(&id, &coarse.complex, n, &fine.complex, rep).unwrap();
                    coarse_basis.express(&pushed).unwrap()
                })
                .collect();
            let via_identity =
                scaled_homology::matrix::QMat::from_columns(coarse_basis.rank(), &cols);
            let connecting = tower.connecting_map(n, &fine.scale, &coarse.scale).unwrap();
            assert_eq!(via_identity, connecting, "n={n} {fine_idx}->{coarse_idx}");
        }
    }
}

#[test]
fn doubling_power_compatibility() {
    // ρ((f²)*) = ρ(f*)² for the circle doubling map on the stable class.
    let n: i64 = 64;
    let pts: Vec<Vec<Q>> = (0..n).map(|j| vec![q(j, n)]).collect();
    let space =
        Arc::new(FiniteMetricSpace::from_point_cloud(&pts, MetricKind::FlatCircle).unwrap());
    let mut scales = Vec::new();
    let mut s = q(18, n);
    for _ in 0..8 {
        scales.push(s.clone());
        s *= q(4, 5);
    }
    let tower = ScaleTower::build(space.clone(), &scales, 2).unwrap();
    let doubling = SampledSelfMap::new(
        space.clone(),
        (0..n).map(|j| ((2 * j) % n) as u32).collect(),
    )
    .unwrap();
    let squared = doubling.compose(&doubling);

    let m1 = scaled_homology::selfmap::induced_on_homology(&doubling, &tower, 1, 3).unwrap();
    let m2 = scaled_homology::selfmap::induced_on_homology(&squared, &tower, 1, 3).unwrap();
    let rho1 = scaled_homology::spectral::spectral_radius(&m1.matrix);
    let rho2 = scaled_homology::spectral::spectral_radius(&m2.matrix);
    assert_eq!(*m1.matrix.at(0, 0), q_int(2));
    assert_eq!(*m2.matrix.at(0, 0), q_int(4));
    assert!((rho2 - rho1 * rho1).abs() < 1e-12);
}
