//! Finite metric spaces: construction, validation and derived metrics.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{Signed, ToPrimitive, Zero};

use crate::scalar::{f64_sqrt, q_from_f64, Q};

/// Which metric `from_point_cloud` installs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricKind {
    /// Straight-line distance in any dimension.
    Euclidean,
    /// Dimension 1, coordinates in `[0,1)`; `d(x,y) = min(|x-y|, 1-|x-y|)`.
    FlatCircle,
    /// Dimension 2, coordinates in `[0,1)²`; max of per-coordinate circle
    /// distances.
    FlatTorus,
}

/// A labeled finite point set with an explicit distance matrix.
///
/// The matrix is stored in full so that diagnostic `validate` can inspect
/// asymmetric or otherwise broken inputs; all constructors in this crate
/// produce symmetric matrices with zero diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    dist: Vec<Q>,
    n: usize,
}

/// A `δ`-net: centers such that every point lies within `< δ` of one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Net {
    pub center_indices: Vec<usize>,
    pub radius: Q,
}

/// One violated metric-space invariant, reported by [`FiniteMetricSpace::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NonzeroDiagonal {
        i: usize,
        value: Q,
    },
    Asymmetric {
        i: usize,
        j: usize,
        forward: Q,
        backward: Q,
    },
    Negative {
        i: usize,
        j: usize,
        value: Q,
    },
    Triangle {
        i: usize,
        j: usize,
        k: usize,
        direct: Q,
        via: Q,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MetricError {
    EmptyInput,
    DimensionMismatch {
        expected: usize,
        found: usize,
        row: usize,
    },
    CoordinateOutOfRange {
        row: usize,
        coordinate: usize,
    },
    BadMatrixShape {
        expected: usize,
        found: usize,
    },
    NonPositiveRadius,
    NonPositiveGap,
}

impl core::fmt::Display for MetricError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            MetricError::EmptyInput => write!(f, "input contains no points"),
            MetricError::DimensionMismatch {
                expected,
                found,
                row,
            } => {
                write!(f, "row {row} has dimension {found}, expected {expected}")
            }
            MetricError::CoordinateOutOfRange { row, coordinate } => {
                write!(f, "coordinate {coordinate} of row {row} is outside [0,1)")
            }
            MetricError::BadMatrixShape { expected, found } => {
                write!(
                    f,
                    "distance matrix has {found} entries, expected {expected}"
                )
            }
            MetricError::NonPositiveRadius => write!(f, "net radius must be positive"),
            MetricError::NonPositiveGap => write!(f, "union gap must be positive"),
        }
    }
}

fn circle_distance(x: &Q, y: &Q) -> Q {
    let t = (x - y).abs();
    let complement = Q::from_integer(1.into()) - &t;
    if t <= complement {
        t
    } else {
        complement
    }
}

fn euclidean_distance(x: &[Q], y: &[Q]) -> Q {
    let mut sq = Q::zero();
    for (a, b) in x.iter().zip(y) {
        let d = a - b;
        sq += &d * &d;
    }
    if sq.is_zero() {
        return Q::zero();
    }
    // The squared distance is exact. When it is a perfect square (always in
    // dimension 1, and for axis-aligned pairs) the root stays exact;
    // otherwise the nearest dyadic value keeps comparisons deterministic.
    let numer_root = sq.numer().sqrt();
    let denom_root = sq.denom().sqrt();
    if &(&numer_root * &numer_root) == sq.numer() && &(&denom_root * &denom_root) == sq.denom() {
        return Q::new(numer_root, denom_root);
    }
    let approx = f64_sqrt(sq.to_f64().unwrap_or(f64::INFINITY));
    q_from_f64(approx).unwrap_or(sq)
}

fn in_unit_interval(x: &Q) -> bool {
    !x.is_negative() && *x < Q::from_integer(1.into())
}

/// Distance between two raw coordinate vectors under the named metric;
/// used by constructors and by nearest-point projection of analytic maps.
pub fn coordinate_distance(kind: MetricKind, a: &[Q], b: &[Q]) -> Result<Q, MetricError> {
    let expected = match kind {
        MetricKind::Euclidean => a.len(),
        MetricKind::FlatCircle => 1,
        MetricKind::FlatTorus => 2,
    };
    for (row, p) in [a, b].into_iter().enumerate() {
        if p.len() != expected {
            return Err(MetricError::DimensionMismatch {
                expected,
                found: p.len(),
                row,
            });
        }
        if matches!(kind, MetricKind::FlatCircle | MetricKind::FlatTorus) {
            for (c, x) in p.iter().enumerate() {
                if !in_unit_interval(x) {
                    return Err(MetricError::CoordinateOutOfRange { row, coordinate: c });
                }
            }
        }
    }
    Ok(match kind {
        MetricKind::Euclidean => euclidean_distance(a, b),
        MetricKind::FlatCircle => circle_distance(&a[0], &b[0]),
        MetricKind::FlatTorus => {
            let dx = circle_distance(&a[0], &b[0]);
            let dy = circle_distance(&a[1], &b[1]);
            if dx >= dy {
                dx
            } else {
                dy
            }
        }
    })
}

impl FiniteMetricSpace {
    /// Builds a space from raw coordinates under the chosen metric.
    pub fn from_point_cloud(points: &[Vec<Q>], kind: MetricKind) -> Result<Self, MetricError> {
        if points.is_empty() {
            return Err(MetricError::EmptyInput);
        }
        let dim = points[0].len();
        let expected_dim = match kind {
            MetricKind::Euclidean => dim,
            MetricKind::FlatCircle => 1,
            MetricKind::FlatTorus => 2,
        };
        for (row, p) in points.iter().enumerate() {
            if p.len() != expected_dim {
                return Err(MetricError::DimensionMismatch {
                    expected: expected_dim,
                    found: p.len(),
                    row,
                });
            }
            if matches!(kind, MetricKind::FlatCircle | MetricKind::FlatTorus) {
                for (c, x) in p.iter().enumerate() {
                    if !in_unit_interval(x) {
                        return Err(MetricError::CoordinateOutOfRange { row, coordinate: c });
                    }
                }
            }
        }
        let n = points.len();
        let mut dist = alloc::vec![Q::zero(); n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = match kind {
                    MetricKind::Euclidean => euclidean_distance(&points[i], &points[j]),
                    MetricKind::FlatCircle => circle_distance(&points[i][0], &points[j][0]),
                    MetricKind::FlatTorus => {
                        let dx = circle_distance(&points[i][0], &points[j][0]);
                        let dy = circle_distance(&points[i][1], &points[j][1]);
                        if dx >= dy {
                            dx
                        } else {
                            dy
                        }
                    }
                };
                dist[i * n + j] = d.clone();
                dist[j * n + i] = d;
            }
        }
        let labels = (0..n).map(|i| format!("{i}")).collect();
        Ok(Self { labels, dist, n })
    }

    /// Wraps an explicit matrix. Only the shape is checked here; metric
    /// axioms are the business of [`validate`](Self::validate).
    pub fn from_matrix(labels: Vec<String>, rows: Vec<Vec<Q>>) -> Result<Self, MetricError> {
        let n = labels.len();
        if n == 0 {
            return Err(MetricError::EmptyInput);
        }
        if rows.len() != n {
            return Err(MetricError::BadMatrixShape {
                expected: n,
                found: rows.len(),
            });
        }
        let mut dist = Vec::with_capacity(n * n);
        for row in &rows {
            if row.len() != n {
                return Err(MetricError::BadMatrixShape {
                    expected: n * n,
                    found: row.len() * n,
                });
            }
            dist.extend(row.iter().cloned());
        }
        Ok(Self { labels, dist, n })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn set_labels(&mut self, labels: Vec<String>) {
        assert_eq!(labels.len(), self.n);
        self.labels = labels;
    }

    /// Distance between points `i` and `j` as stored.
    pub fn dist(&self, i: usize, j: usize) -> &Q {
        &self.dist[i * self.n + j]
    }

    /// Checks the metric-space invariants, returning every violation found.
    ///
    /// The triangle inequality is optional: nothing in this crate relies on
    /// it, and gapped unions may break it harmlessly.
    pub fn validate(&self, check_triangle: bool) -> Vec<Violation> {
        let mut out = Vec::new();
        for i in 0..self.n {
            if !self.dist(i, i).is_zero() {
                out.push(Violation::NonzeroDiagonal {
                    i,
                    value: self.dist(i, i).clone(),
                });
            }
        }
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let forward = self.dist(i, j);
                let backward = self.dist(j, i);
                if forward != backward {
                    out.push(Violation::Asymmetric {
                        i,
                        j,
                        forward: forward.clone(),
                        backward: backward.clone(),
                    });
                }
                if forward.is_negative() {
                    out.push(Violation::Negative {
                        i,
                        j,
                        value: forward.clone(),
                    });
                }
            }
        }
        if check_triangle {
            for i in 0..self.n {
                for j in 0..self.n {
                    if j == i {
                        continue;
                    }
                    for k in 0..self.n {
                        if k == i || k == j {
                            continue;
                        }
                        let via = self.dist(i, j) + self.dist(j, k);
                        if *self.dist(i, k) > via {
                            out.push(Violation::Triangle {
                                i,
                                j,
                                k,
                                direct: self.dist(i, k).clone(),
                                via,
                            });
                        }
                    }
                }
            }
        }
        out
    }

    /// Largest pairwise distance; zero for a single point.
    pub fn diameter(&self) -> Q {
        let mut best = Q::zero();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if *self.dist(i, j) > best {
                    best = self.dist(i, j).clone();
                }
            }
        }
        best
    }

    /// Smallest strictly positive pairwise distance, if any.
    pub fn min_positive_distance(&self) -> Option<Q> {
        let mut best: Option<Q> = None;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let d = self.dist(i, j);
                if d.is_positive() && best.as_ref().is_none_or(|b| d < b) {
                    best = Some(d.clone());
                }
            }
        }
        best
    }

    /// Greedy `δ`-net: scan points in index order and keep a point as a
    /// center exactly when no existing center lies within `< δ` of it.
    /// Deterministic given the index order.
    pub fn greedy_net(&self, radius: &Q) -> Result<Net, MetricError> {
        if !radius.is_positive() {
            return Err(MetricError::NonPositiveRadius);
        }
        let mut centers: Vec<usize> = Vec::new();
        for i in 0..self.n {
            let covered = centers.iter().any(|&c| self.dist(i, c) < radius);
            if !covered {
                centers.push(i);
            }
        }
        Ok(Net {
            center_indices: centers,
            radius: radius.clone(),
        })
    }

    /// Block-diagonal union: distances inside each part are preserved and
    /// every cross-part distance equals `gap`.
    pub fn disjoint_union(parts: &[FiniteMetricSpace], gap: &Q) -> Result<Self, MetricError> {
        if parts.is_empty() {
            return Err(MetricError::EmptyInput);
        }
        if !gap.is_positive() {
            return Err(MetricError::NonPositiveGap);
        }
        let n: usize = parts.iter().map(|p| p.n).sum();
        let mut dist = alloc::vec![gap.clone(); n * n];
        let mut labels = Vec::with_capacity(n);
        let mut offset = 0;
        for (b, part) in parts.iter().enumerate() {
            for i in 0..part.n {
                labels.push(format!("{b}:{}", part.labels[i]));
                for j in 0..part.n {
                    dist[(offset + i) * n + (offset + j)] = part.dist(i, j).clone();
                }
            }
            offset += part.n;
        }
        Ok(Self { labels, dist, n })
    }

    /// New space with points renamed by `perm` (`perm[new] = old`). Used by
    /// the basis-independence checks.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n);
        let n = self.n;
        let mut dist = alloc::vec![Q::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                dist[i * n + j] = self.dist(perm[i], perm[j]).clone();
            }
        }
        let labels = perm.iter().map(|&o| self.labels[o].clone()).collect();
        Self { labels, dist, n }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, q_int, q_to_f64};
    use alloc::vec;

    pub(crate) fn hexagon() -> FiniteMetricSpace {
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

    #[test]
    fn antipodal_circle_points() {
        let pts = vec![vec![q_int(0)], vec![q(1, 2)]];
        let s = FiniteMetricSpace::from_point_cloud(&pts, MetricKind::FlatCircle).unwrap();
        assert_eq!(*s.dist(0, 1), q(1, 2));
        assert_eq!(s.diameter(), q(1, 2));
    }

    #[test]
    fn circle_wraparound() {
        let pts = vec![vec![q_int(0)], vec![q(1, 4)], vec![q(3, 4)]];
        let s = FiniteMetricSpace::from_point_cloud(&pts, MetricKind::FlatCircle).unwrap();
        assert_eq!(*s.dist(1, 2), q(1, 2));
        assert_eq!(*s.dist(0, 2), q(1, 4));
    }

    #[test]
    fn hexagon_chord_lengths() {
        // Chord between vertices k apart is 2 sin(kπ/6): 1, √3, 2.
        let s = hexagon();
        let expect = [1.0, 3.0f64.sqrt(), 2.0];
        for i in 0..6usize {
            for j in (i + 1)..6 {
                let steps = (j - i).min(6 - (j - i));
                let d = q_to_f64(s.dist(i, j));
                assert!((d - expect[steps - 1]).abs() < 1e-12, "chord {i},{j}");
            }
        }
        assert!((q_to_f64(&s.diameter()) - 2.0).abs() < 1e-12);
        assert!(s.validate(true).is_empty());
    }

    #[test]
    fn single_point_diameter_is_zero() {
        let s =
            FiniteMetricSpace::from_point_cloud(&[vec![q_int(7)]], MetricKind::Euclidean).unwrap();
        assert!(s.diameter().is_zero());
    }

    #[test]
    fn validate_reports_constructed_violations() {
        let rows = vec![vec![q_int(0), q_int(1)], vec![q_int(2), q_int(0)]];
        let s = FiniteMetricSpace::from_matrix(vec!["a".into(), "b".into()], rows).unwrap();
        let violations = s.validate(false);
        assert_eq!(violations.len(), 1);
        assert!(matches!(
            violations[0],
            Violation::Asymmetric { i: 0, j: 1, .. }
        ));
    }

    #[test]
    fn validate_reports_triangle_violation() {
        let rows = vec![
            vec![q_int(0), q_int(1), q_int(5)],
            vec![q_int(1), q_int(0), q_int(1)],
            vec![q_int(5), q_int(1), q_int(0)],
        ];
        let s =
            FiniteMetricSpace::from_matrix(vec!["a".into(), "b".into(), "c".into()], rows).unwrap();
        assert!(s.validate(false).is_empty());
        let violations = s.validate(true);
        assert!(violations.iter().any(|v| matches!(
            v,
            Violation::Triangle {
                i: 0,
                j: 1,
                k: 2,
                ..
            }
        )));
    }

    #[test]
    fn greedy_net_edge_cases() {
        let s = hexagon();
        let wide = s.greedy_net(&q_int(3)).unwrap();
        assert_eq!(wide.center_indices, vec![0]);
        let tight = s.greedy_net(&q(1, 2)).unwrap();
        assert_eq!(tight.center_indices.len(), 6);
        assert!(s.greedy_net(&q_int(0)).is_err());
    }

    #[test]
    fn greedy_net_hexagon_covers_with_three_centers() {
        let s = hexagon();
        let net = s.greedy_net(&q(11, 10)).unwrap();
        assert_eq!(net.center_indices, vec![0, 2, 4]);
        for i in 0..s.len() {
            assert!(net
                .center_indices
                .iter()
                .any(|&c| s.dist(i, c) < &net.radius));
        }
    }

    #[test]
    fn disjoint_union_block_structure() {
        let p =
            FiniteMetricSpace::from_point_cloud(&[vec![q_int(0)]], MetricKind::Euclidean).unwrap();
        let two = FiniteMetricSpace::disjoint_union(&[p.clone(), p.clone()], &q_int(10)).unwrap();
        assert_eq!(two.len(), 2);
        assert_eq!(*two.dist(0, 1), q_int(10));

        let hexa = hexagon();
        let double =
            FiniteMetricSpace::disjoint_union(&[hexa.clone(), hexa.clone()], &q_int(10)).unwrap();
        assert_eq!(double.len(), 12);
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(double.dist(i, j), hexa.dist(i, j));
                assert_eq!(double.dist(6 + i, 6 + j), hexa.dist(i, j));
                if i != j || true {
                    assert_eq!(*double.dist(i, 6 + j), q_int(10));
                }
            }
        }
        assert_eq!(double.diameter(), q_int(10));

        let single =
            FiniteMetricSpace::disjoint_union(core::slice::from_ref(&hexa), &q_int(5)).unwrap();
        assert_eq!(single.dist(1, 4), hexa.dist(1, 4));
        assert_eq!(single.len(), hexa.len());
    }
}
