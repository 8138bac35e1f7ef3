//! Exact rational scalars.
//!
//! All distances and scale thresholds are `Q = BigRational`. Inputs that
//! arrive as floats are converted exactly (every finite `f64` is a dyadic
//! rational), so strict comparisons `d < ε` are deterministic even at ties.

use alloc::string::String;
use alloc::string::ToString;
use alloc::vec::Vec;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational scalar used for every distance and scale in the crate.
pub type Q = BigRational;

/// Rational from an integer.
pub fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Rational `num/den`. Panics if `den == 0`.
pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Exact conversion from a finite `f64`.
///
/// The result is the dyadic rational the float denotes, not a decimal
/// approximation of it.
pub fn q_from_f64(x: f64) -> Option<Q> {
    if !x.is_finite() {
        return None;
    }
    Some(BigRational::from_float(x).expect("finite float"))
}

/// Nearest-`f64` view of a rational, for reporting only.
pub fn q_to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Parse a scalar from text.
///
/// Accepts integer (`3`), fraction (`3/40`) and decimal (`0.075`, `1.2e-2`)
/// forms. Decimal and scientific forms are parsed exactly: `1.2` becomes
/// `6/5`, never the nearest float.
pub fn q_parse(text: &str) -> Option<Q> {
    let s = text.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().ok()?;
        let d: BigInt = den.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Q::new(n, d));
    }
    let (mantissa, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    if frac_part.contains(['+', '-']) {
        return None;
    }
    let negative = int_part.starts_with('-');
    let int_digits = int_part.trim_start_matches(['+', '-']);
    if int_digits.is_empty() && frac_part.is_empty() {
        return None;
    }
    let mut digits = String::with_capacity(int_digits.len() + frac_part.len());
    digits.push_str(int_digits);
    digits.push_str(frac_part);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let unsigned: BigInt = digits.parse().ok()?;
    let numer = if negative { -unsigned } else { unsigned };
    let shift = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let value = if shift >= 0 {
        Q::from_integer(numer * ten.pow(shift as u32))
    } else {
        Q::new(numer, ten.pow((-shift) as u32))
    };
    Some(value)
}

/// Render a rational as `p/q` (or just `p` when integral).
pub fn q_display(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        let mut s = x.numer().to_string();
        s.push('/');
        s.push_str(&x.denom().to_string());
        s
    }
}

/// `max` of two rationals by value.
pub fn q_max(a: Q, b: Q) -> Q {
    if a >= b {
        a
    } else {
        b
    }
}

/// Natural log of a positive rational, for entropy and spectral reports.
pub fn q_ln(x: &Q) -> f64 {
    // Split into mantissa and exponent so huge numerators stay in range.
    let ln_big = |n: &BigInt| -> f64 {
        debug_assert!(n.is_positive());
        let bits = n.bits();
        if bits <= 52 {
            return libm_ln(n.to_f64().unwrap());
        }
        let shift = bits - 52;
        let top = n >> shift;
        libm_ln(top.to_f64().unwrap()) + (shift as f64) * core::f64::consts::LN_2
    };
    debug_assert!(x.is_positive());
    ln_big(x.numer()) - ln_big(x.denom())
}

/// Float natural log that resolves identically with and without `std` in
/// the build (through the libm-backed trait in pure-`core` builds).
pub fn f64_ln(x: f64) -> f64 {
    num_traits::Float::ln(x)
}

/// Float square root; see [`f64_ln`] for why this is a free function.
pub fn f64_sqrt(x: f64) -> f64 {
    num_traits::Float::sqrt(x)
}

pub(crate) fn f64_exp(x: f64) -> f64 {
    num_traits::Float::exp(x)
}

pub(crate) fn f64_abs(x: f64) -> f64 {
    num_traits::Float::abs(x)
}

fn libm_ln(x: f64) -> f64 {
    f64_ln(x)
}

/// Sum of a slice of rationals.
pub fn q_sum(xs: &[Q]) -> Q {
    let mut acc = Q::zero();
    for x in xs {
        acc += x;
    }
    acc
}

/// Sorted copy with duplicates removed, ascending.
pub fn q_sorted_unique(values: &[Q]) -> Vec<Q> {
    let mut v: Vec<Q> = values.to_vec();
    v.sort();
    v.dedup();
    v
}

/// Sign helper for orientation bookkeeping: `(-1)^k` as a rational.
pub fn q_sign(k: usize) -> Q {
    if k.is_multiple_of(2) {
        Q::one()
    } else {
        -Q::one()
    }
}

/// True when the rational is a ratio of small integers, used by reports to
/// decide whether an `f64` rendering is exact.
pub fn q_is_dyadic(x: &Q) -> bool {
    let (_, limbs) = x.denom().to_u64_digits();
    match limbs.len() {
        0 => true,
        1 => limbs[0].is_power_of_two(),
        _ => {
            let d = x.denom();
            let sign_ok = d.sign() == Sign::Plus;
            sign_ok && (d & (d - 1u8)).is_zero()
        }
    }
}
