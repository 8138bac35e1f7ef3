//! Spectral radius of induced matrices.
//!
//! Small matrices (everything the homology pipeline produces in practice)
//! get exact characteristic polynomials and closed-form root moduli; larger
//! ones fall back to norm-growth iteration `‖A^m‖^{1/m}` with a Gershgorin
//! upper bound as a certificate.

use alloc::vec::Vec;

use num_traits::Signed;

use crate::matrix::QMat;
use crate::scalar::{f64_abs, f64_exp, f64_ln, f64_sqrt, q_to_f64, Q};

/// Monic characteristic polynomial with exact rational coefficients:
/// `λ^n + coeffs[0]·λ^(n-1) + … + coeffs[n-1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharPoly {
    pub coeffs: Vec<Q>,
}

impl CharPoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// Trace of the underlying matrix (`-coeffs[0]`).
    pub fn trace(&self) -> Q {
        -self.coeffs[0].clone()
    }

    /// Determinant (`(-1)^n · coeffs[n-1]`).
    pub fn determinant(&self) -> Q {
        let n = self.coeffs.len();
        let c = self.coeffs[n - 1].clone();
        if n.is_multiple_of(2) {
            c
        } else {
            -c
        }
    }
}

/// Characteristic polynomial by the Faddeev–LeVerrier recurrence, exact
/// over the rationals. Cost grows as `n^4`; callers keep it to the small
/// matrices where exactness matters.
pub fn char_poly(m: &QMat) -> CharPoly {
    assert!(m.is_square());
    let n = m.rows();
    let mut coeffs: Vec<Q> = Vec::with_capacity(n);
    let mut work = QMat::identity(n);
    for k in 1..=n {
        work = m.mul(&work);
        let c = -(work.trace() / Q::from_integer(k.into()));
        for i in 0..n {
            *work.at_mut(i, i) += &c;
        }
        coeffs.push(c);
    }
    CharPoly { coeffs }
}

/// Exact-rational upper bound on the spectral radius (largest absolute row
/// sum), reported alongside iterative estimates as a certificate.
pub fn gershgorin_bound(m: &QMat) -> Q {
    m.max_row_sum()
}

/// Maximum modulus of the eigenvalues.
///
/// Sizes 0–2 are closed-form from the exact characteristic polynomial; for
/// larger matrices the modulus is the limit `‖A^(2^k)‖^(1/2^k)`, evaluated
/// by repeated squaring in floats with renormalization.
pub fn spectral_radius(m: &QMat) -> f64 {
    assert!(m.is_square(), "spectral radius of a non-square matrix");
    match m.rows() {
        0 => 0.0,
        1 => q_to_f64(&m.at(0, 0).abs()),
        2 => {
            let tr = m.trace();
            let det = m.at(0, 0) * m.at(1, 1) - m.at(0, 1) * m.at(1, 0);
            let disc = &tr * &tr - Q::from_integer(4.into()) * &det;
            if disc.is_negative() {
                // Complex pair: |λ|² equals the determinant.
                f64_sqrt(q_to_f64(&det))
            } else {
                let s = f64_sqrt(q_to_f64(&disc));
                let t = q_to_f64(&tr);
                let a = (t + s) / 2.0;
                let b = (t - s) / 2.0;
                if f64_abs(a) >= f64_abs(b) {
                    f64_abs(a)
                } else {
                    f64_abs(b)
                }
            }
        }
        _ => power_radius(m),
    }
}

fn power_radius(m: &QMat) -> f64 {
    let n = m.rows();
    let mut a: Vec<f64> = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            a.push(q_to_f64(m.at(i, j)));
        }
    }
    // log ρ = Σ log(r_k) / 2^k where r_k renormalizes each squaring.
    let mut log_radius = 0.0f64;
    let mut scale = 0.5f64;
    for _ in 0..48 {
        let mut next = alloc::vec![0.0f64; n * n];
        for i in 0..n {
            for k in 0..n {
                let v = a[i * n + k];
                if v == 0.0 {
                    continue;
                }
                for j in 0..n {
                    next[i * n + j] += v * a[k * n + j];
                }
            }
        }
        let norm = next.iter().fold(
            0.0f64,
            |acc, &x| if f64_abs(x) > acc { f64_abs(x) } else { acc },
        );
        if norm == 0.0 {
            return 0.0;
        }
        for x in next.iter_mut() {
            *x /= norm;
        }
        log_radius += scale * f64_ln(norm);
        scale *= 0.5;
        a = next;
    }
    let estimate = f64_exp(log_radius);
    debug_assert!(
        estimate <= q_to_f64(&gershgorin_bound(m)) * (1.0 + 1e-9) + 1e-12,
        "estimate exceeds Gershgorin certificate"
    );
    estimate
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, q_int};

    fn from_rows(rows: &[&[i64]]) -> QMat {
        let n = rows.len();
        let mut m = QMat::zero(n, rows[0].len());
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                *m.at_mut(i, j) = q_int(v);
            }
        }
        m
    }

    #[test]
    fn tiny_cases() {
        assert_eq!(spectral_radius(&QMat::zero(0, 0)), 0.0);
        assert_eq!(spectral_radius(&from_rows(&[&[1]])), 1.0);
        assert_eq!(spectral_radius(&from_rows(&[&[2]])), 2.0);
        assert_eq!(spectral_radius(&from_rows(&[&[-3]])), 3.0);
    }

    #[test]
    fn golden_mean_squared_matrix() {
        // λ² - 3λ + 1: largest root (3+√5)/2.
        let m = from_rows(&[&[2, 1], &[1, 1]]);
        let p = char_poly(&m);
        assert_eq!(p.coeffs, alloc::vec![q_int(-3), q_int(1)]);
        assert_eq!(p.trace(), q_int(3));
        assert_eq!(p.determinant(), q_int(1));
        let rho = spectral_radius(&m);
        let expect = (3.0 + 5.0f64.sqrt()) / 2.0;
        assert!((rho - expect).abs() < 1e-12);
    }

    #[test]
    fn rotation_matrix_has_complex_pair() {
        // λ² + 1: eigenvalues ±i, modulus 1.
        let m = from_rows(&[&[0, -1], &[1, 0]]);
        assert!((spectral_radius(&m) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn char_poly_of_rational_matrix() {
        let mut m = QMat::zero(2, 2);
        *m.at_mut(0, 0) = q(1, 2);
        *m.at_mut(1, 1) = q(1, 3);
        let p = char_poly(&m);
        assert_eq!(p.coeffs, alloc::vec![q(-5, 6), q(1, 6)]);
    }

    #[test]
    fn power_iteration_matches_closed_form() {
        // Companion of λ³ - 6λ² + 11λ - 6 = (λ-1)(λ-2)(λ-3): radius 3.
        let m = from_rows(&[&[0, 0, 6], &[1, 0, -11], &[0, 1, 6]]);
        assert!((spectral_radius(&m) - 3.0).abs() < 1e-9);
        // And a rotation-like 3x3 with complex dominant pair of modulus 2.
        let r = from_rows(&[&[0, -2, 0], &[2, 0, 0], &[0, 0, 1]]);
        assert!((spectral_radius(&r) - 2.0).abs() < 1e-9);
    }

    #[test]
    fn gershgorin_bounds_the_radius() {
        let m = from_rows(&[&[2, 1], &[1, 1]]);
        let bound = q_to_f64(&gershgorin_bound(&m));
        assert!(spectral_radius(&m) <= bound + 1e-12);
        assert_eq!(bound, 3.0);
    }
}
