//! Exact integer, rational and polynomial arithmetic plus a tracked-error
//! real type for the log-heavy inequality checks.

mod hpreal;
mod linalg;
mod poly;

pub use hpreal::{HighPrecisionReal, DEFAULT_PRECISION};
pub use linalg::rational_determinant;
pub use poly::IntPolynomial;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Binomial coefficient C(n, k); zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

pub fn factorial(n: u64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// Falling factorial (n)_s = n (n-1) ... (n-s+1).
pub fn falling_factorial(n: i64, s: u32) -> BigInt {
    (0..s as i64).fold(BigInt::one(), |acc, i| acc * (n - i))
}

/// Number of perfect matchings of 2a labelled points, M(2a) = (2a)! / (a! 2^a).
pub fn pairings_count(a: u64) -> BigInt {
    (1..=a).fold(BigInt::one(), |acc, i| acc * (2 * i - 1))
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int_ratio(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}

/// Strict sign-change test of `poly` between `lo` and `hi`, evaluated exactly.
pub fn verify_root_bracket(poly: &IntPolynomial, lo: &BigRational, hi: &BigRational) -> Result<bool> {
    if lo >= hi {
        return Err(Error::EmptyInterval { lo: lo.to_string(), hi: hi.to_string() });
    }
    let a = poly.eval_rational(lo);
    let b = poly.eval_rational(hi);
    Ok((a.is_negative() && b.is_positive()) || (a.is_positive() && b.is_negative()))
}

/// Bisect a certified bracket until its width is at most `width`.
///
/// Returns the final bracket; each step keeps a strict sign change (or lands
/// exactly on a root, in which case a degenerate bracket is returned).
pub fn refine_root(
    poly: &IntPolynomial,
    lo: &BigRational,
    hi: &BigRational,
    width: &BigRational,
) -> Result<(BigRational, BigRational)> {
    if !verify_root_bracket(poly, lo, hi)? {
        return Err(Error::InvalidParams(format!("no sign change on [{lo}, {hi}]")));
    }
    let (mut lo, mut hi) = (lo.clone(), hi.clone());
    let lo_sign = poly.eval_rational(&lo).signum();
    let two = int_ratio(BigInt::from(2));
    while &(&hi - &lo) > width {
        let mid = (&lo + &hi) / &two;
        let v = poly.eval_rational(&mid);
        if v.is_zero() {
            return Ok((mid.clone(), mid));
        }
        if v.signum() == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo, hi))
}
