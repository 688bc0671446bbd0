use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub const DEFAULT_PRECISION: u32 = 128;

const GUARD_BITS: u32 = 64;

/// A fixed-point real `mant * 2^-prec` carrying an absolute error bound
/// `err * 2^-prec`; the true value is guaranteed to lie within that radius.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HighPrecisionReal {
    mant: BigInt,
    err: BigUint,
    prec: u32,
}

fn ceil_div(n: &BigUint, d: &BigUint) -> BigUint {
    let (q, r) = n.div_rem(d);
    if r.is_zero() { q } else { q + 1u32 }
}

/// Round-to-nearest of `n / d` for `d > 0`; error at most half a unit.
fn round_div(n: &BigInt, d: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    (n * &two + d).div_floor(&(d * &two))
}

impl HighPrecisionReal {
    pub fn from_int(v: impl Into<BigInt>, prec: u32) -> Self {
        Self { mant: v.into() << prec, err: BigUint::zero(), prec }
    }

    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        let num = r.numer() << prec;
        let exact = (&num % r.denom()).is_zero();
        Self {
            mant: round_div(&num, r.denom()),
            err: if exact { BigUint::zero() } else { BigUint::one() },
            prec,
        }
    }

    pub fn from_ratio(n: i64, d: i64, prec: u32) -> Self {
        Self::from_rational(&BigRational::new(n.into(), d.into()), prec)
    }

    /// Exact conversion of a finite double (every finite double is dyadic).
    pub fn from_f64(x: f64, prec: u32) -> Result<Self> {
        let r = BigRational::from_float(x).ok_or_else(|| Error::OutsideDomain(format!("non-finite value {x}")))?;
        Ok(Self::from_rational(&r, prec))
    }

    pub fn zero(prec: u32) -> Self {
        Self { mant: BigInt::zero(), err: BigUint::zero(), prec }
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn midpoint(&self) -> BigRational {
        BigRational::new(self.mant.clone(), BigInt::one() << self.prec)
    }

    pub fn radius(&self) -> f64 {
        BigRational::new(BigInt::from(self.err.clone()), BigInt::one() << self.prec)
            .to_f64()
            .unwrap_or(f64::INFINITY)
    }

    pub fn to_f64(&self) -> f64 {
        self.midpoint().to_f64().unwrap_or(f64::NAN)
    }

    fn at_prec(&self, prec: u32) -> (BigInt, BigUint) {
        let s = prec - self.prec;
        (&self.mant << s, &self.err << s)
    }

    fn align(a: &Self, b: &Self) -> (BigInt, BigUint, BigInt, BigUint, u32) {
        let prec = a.prec.max(b.prec);
        let (am, ae) = a.at_prec(prec);
        let (bm, be) = b.at_prec(prec);
        (am, ae, bm, be, prec)
    }

    fn lower(&self) -> BigInt {
        &self.mant - BigInt::from(self.err.clone())
    }

    fn upper(&self) -> BigInt {
        &self.mant + BigInt::from(self.err.clone())
    }

    /// True when the whole enclosure of `self` lies strictly below that of `other`.
    pub fn definitely_lt(&self, other: &Self) -> bool {
        let (am, ae, bm, be, _) = Self::align(self, other);
        am + BigInt::from(ae) < bm - BigInt::from(be)
    }

    pub fn definitely_gt(&self, other: &Self) -> bool {
        other.definitely_lt(self)
    }

    pub fn definitely_positive(&self) -> bool {
        self.lower().is_positive()
    }

    pub fn definitely_negative(&self) -> bool {
        self.upper().is_negative()
    }

    /// True when `|self - other|` is at most `tol` for every pair of values in the enclosures.
    pub fn within(&self, other: &Self, tol: &Self) -> bool {
        let diff = (self - other).abs();
        let (dm, de, tm, te, _) = Self::align(&diff, tol);
        dm + BigInt::from(de) <= tm - BigInt::from(te)
    }

    pub fn abs(&self) -> Self {
        Self { mant: self.mant.abs(), err: self.err.clone(), prec: self.prec }
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        let (a, ea, b, eb, prec) = Self::align(self, rhs);
        let b_abs = b.magnitude().clone();
        if b_abs <= eb {
            return Err(Error::OutsideDomain("division by an enclosure containing zero".into()));
        }
        let mant = round_div(&(&a << prec), &b);
        let num = (a.magnitude() * &eb + &b_abs * &ea) << prec;
        let den = &b_abs * (&b_abs - &eb);
        let err = ceil_div(&num, &den) + 1u32;
        Ok(Self { mant, err, prec })
    }

    /// Natural logarithm; the enclosure must be strictly positive.
    pub fn ln(&self) -> Result<Self> {
        let lo = self.lower();
        if !lo.is_positive() {
            return Err(Error::OutsideDomain(format!("log of non-positive value {}", self.to_f64())));
        }
        let prec = self.prec;
        let (core, core_err_w) = ln_fixed(self.mant.magnitude(), prec);
        // Result of ln_fixed is in units of 2^-(prec + GUARD_BITS).
        let mant = round_div(&core, &(BigInt::one() << GUARD_BITS));
        let comp_err = ceil_div(&core_err_w, &(BigUint::one() << GUARD_BITS)) + 1u32;
        // |ln(x) - ln(m)| <= err / (m - err), converted to units of 2^-prec.
        let input_err = if self.err.is_zero() {
            BigUint::zero()
        } else {
            ceil_div(&(&self.err << prec), lo.magnitude())
        };
        Ok(Self { mant, err: comp_err + input_err, prec })
    }

    /// Square root; the enclosure must be strictly positive, or exactly zero.
    pub fn sqrt(&self) -> Result<Self> {
        if self.mant.is_zero() && self.err.is_zero() {
            return Ok(self.clone());
        }
        let lo = self.lower();
        if !lo.is_positive() {
            return Err(Error::OutsideDomain(format!("sqrt of non-positive value {}", self.to_f64())));
        }
        let prec = self.prec;
        let mant = BigInt::from((self.mant.magnitude() << prec).sqrt());
        let input_err = if self.err.is_zero() {
            BigUint::zero()
        } else {
            let denom = (lo.magnitude() << prec).sqrt();
            ceil_div(&(&self.err << prec), &denom.max(BigUint::one()))
        };
        Ok(Self { mant, err: input_err + 1u32, prec })
    }

    /// `x log x` with the convention `0 log 0 = 0` for an exact zero.
    pub fn xlogx(&self) -> Result<Self> {
        if self.mant.is_zero() && self.err.is_zero() {
            return Ok(self.clone());
        }
        Ok(self * &self.ln()?)
    }

    pub fn powi(&self, k: u32) -> Self {
        (0..k).fold(Self::from_int(1, self.prec), |acc, _| &acc * self)
    }

    pub fn ln2(prec: u32) -> Self {
        let w = prec + GUARD_BITS;
        let (v, e) = ln2_fixed(w);
        Self {
            mant: round_div(&v, &(BigInt::one() << GUARD_BITS)),
            err: ceil_div(&e, &(BigUint::one() << GUARD_BITS)) + 1u32,
            prec,
        }
    }
}

/// `2 atanh(s)` for `s = num/den` in `[0, 1/3]`, fixed point at `w` bits.
/// Returns the value and an error bound, both in units of `2^-w`.
fn two_atanh_fixed(num: &BigInt, den: &BigInt, w: u32) -> (BigInt, BigUint) {
    let s = (num << w) / den;
    let s2 = (&s * &s) >> w;
    let mut power = s;
    let mut sum = BigInt::zero();
    let mut terms = 0u64;
    let mut k = 1u64;
    while !power.is_zero() {
        sum += &power / k;
        power = (&power * &s2) >> w;
        k += 2;
        terms += 1;
    }
    // Truncation of s, s^2 and each product/quotient each costs below one
    // unit; contraction by s^2 <= 1/9 keeps the propagated error below 2
    // units per term, and the omitted tail is below one unit.
    let err = BigUint::from(4 * terms + 8);
    (sum << 1, err << 1)
}

fn ln2_fixed(w: u32) -> (BigInt, BigUint) {
    two_atanh_fixed(&BigInt::one(), &BigInt::from(3), w)
}

/// `ln(m * 2^-prec)` for `m > 0`, in units of `2^-(prec + GUARD_BITS)`.
fn ln_fixed(m: &BigUint, prec: u32) -> (BigInt, BigUint) {
    let w = prec + GUARD_BITS;
    // m * 2^-prec = r * 2^k with r in [1, 2).
    let bits = m.bits() as i64;
    let k = bits - 1 - prec as i64;
    let m = BigInt::from_biguint(Sign::Plus, m.clone());
    let (r_num, r_den) = if k >= 0 {
        (m, BigInt::one() << (prec as i64 + k) as u32)
    } else {
        (m << (-k) as u32, BigInt::one() << prec)
    };
    // ln r = 2 atanh((r - 1) / (r + 1)), argument in [0, 1/3).
    let (lr, lr_err) = two_atanh_fixed(&(&r_num - &r_den), &(&r_num + &r_den), w);
    let (l2, l2_err) = ln2_fixed(w);
    let kk = BigInt::from(k);
    let value = lr + &l2 * &kk;
    let err = lr_err + l2_err * k.unsigned_abs() + 4u32;
    (value, err)
}

impl Add for &HighPrecisionReal {
    type Output = HighPrecisionReal;
    fn add(self, rhs: &HighPrecisionReal) -> HighPrecisionReal {
        let (am, ae, bm, be, prec) = HighPrecisionReal::align(self, rhs);
        HighPrecisionReal { mant: am + bm, err: ae + be, prec }
    }
}

impl Sub for &HighPrecisionReal {
    type Output = HighPrecisionReal;
    fn sub(self, rhs: &HighPrecisionReal) -> HighPrecisionReal {
        let (am, ae, bm, be, prec) = HighPrecisionReal::align(self, rhs);
        HighPrecisionReal { mant: am - bm, err: ae + be, prec }
    }
}

impl Mul for &HighPrecisionReal {
    type Output = HighPrecisionReal;
    fn mul(self, rhs: &HighPrecisionReal) -> HighPrecisionReal {
        let (am, ae, bm, be, prec) = HighPrecisionReal::align(self, rhs);
        let scale = BigInt::one() << prec;
        let exact = (&am * &bm) % &scale == BigInt::zero();
        let mant = round_div(&(&am * &bm), &scale);
        let prop = am.magnitude() * &be + bm.magnitude() * &ae + &ae * &be;
        let mut err = ceil_div(&prop, &(BigUint::one() << prec));
        if !exact {
            err += 1u32;
        }
        HighPrecisionReal { mant, err, prec }
    }
}

impl Neg for &HighPrecisionReal {
    type Output = HighPrecisionReal;
    fn neg(self) -> HighPrecisionReal {
        HighPrecisionReal { mant: -&self.mant, err: self.err.clone(), prec: self.prec }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for HighPrecisionReal {
            type Output = HighPrecisionReal;
            fn $m(self, rhs: HighPrecisionReal) -> HighPrecisionReal {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for HighPrecisionReal {
    type Output = HighPrecisionReal;
    fn neg(self) -> HighPrecisionReal {
        -&self
    }
}

impl PartialOrd for HighPrecisionReal {
    /// Ordering only when the enclosures are disjoint.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if self.definitely_lt(other) {
            Some(Ordering::Less)
        } else if other.definitely_lt(self) {
            Some(Ordering::Greater)
        } else {
            None
        }
    }
}

impl fmt::Display for HighPrecisionReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match f.precision() {
            Some(p) => write!(f, "{:.*}", p, self.to_f64()),
            None => write!(f, "{} ± {:.1e}", self.to_f64(), self.radius()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = DEFAULT_PRECISION;

    fn hp(n: i64, d: i64) -> HighPrecisionReal {
        HighPrecisionReal::from_ratio(n, d, P)
    }

    #[test]
    fn ln_matches_f64_and_stays_tight() {
        for &(n, d) in &[(1, 1), (2, 1), (3, 1), (1, 3), (755755, 2), (13, 4), (1, 1000), (10_i64.pow(12), 7)] {
            let v = hp(n, d).ln().unwrap();
            let expect = (n as f64 / d as f64).ln();
            assert!((v.to_f64() - expect).abs() < 1e-12, "ln({n}/{d})");
            assert!(v.radius() < 1e-30, "radius {} for ln({n}/{d})", v.radius());
        }
        assert_eq!(hp(1, 1).ln().unwrap().to_f64(), 0.0);
    }

    #[test]
    fn ln_of_product_is_sum_of_logs() {
        let a = hp(9829, 2114);
        let b = hp(1956, 1057);
        let lhs = (&a * &b).ln().unwrap();
        let rhs = &a.ln().unwrap() + &b.ln().unwrap();
        assert!(lhs.within(&rhs, &hp(1, 1 << 40)));
    }

    #[test]
    fn ln2_digits() {
        let l = HighPrecisionReal::ln2(P);
        // 0.693147180559945309417232121458176568...
        let reference = BigRational::new(
            BigInt::parse_bytes(b"693147180559945309417232121458176568", 10).unwrap(),
            BigInt::from(10).pow(36),
        );
        let r = HighPrecisionReal::from_rational(&reference, P);
        assert!(l.within(&r, &hp(1, 1_000_000_000_000_000_000)));
    }

    #[test]
    fn sqrt_and_division() {
        let two = hp(2, 1);
        let s = two.sqrt().unwrap();
        assert!((&s * &s).within(&two, &hp(1, 1 << 60)));
        let q = hp(1, 1).checked_div(&hp(3, 1)).unwrap();
        assert!((q.to_f64() - 1.0 / 3.0).abs() < 1e-16);
        assert!(hp(1, 1).checked_div(&HighPrecisionReal::zero(P)).is_err());
    }

    #[test]
    fn xlogx_zero_convention() {
        assert_eq!(HighPrecisionReal::zero(P).xlogx().unwrap().to_f64(), 0.0);
        let v = hp(1, 4).xlogx().unwrap().to_f64();
        assert!((v - 0.25 * 0.25f64.ln()).abs() < 1e-15);
        assert!(HighPrecisionReal::zero(P).ln().is_err());
    }

    #[test]
    fn strict_comparisons_respect_error_radius() {
        let a = hp(1, 3);
        let b = hp(1, 2);
        assert!(a.definitely_lt(&b));
        assert!(!b.definitely_lt(&a));
        assert!(!a.definitely_lt(&a));
        assert_eq!(a.partial_cmp(&a), None);
    }

    #[test]
    fn mixed_precision_aligns_up() {
        let a = HighPrecisionReal::from_ratio(1, 4, 64);
        let b = HighPrecisionReal::from_ratio(1, 4, 256);
        let s = &a + &b;
        assert_eq!(s.precision(), 256);
        assert_eq!(s.to_f64(), 0.5);
    }
}
