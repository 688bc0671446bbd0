//! Certificates that `z*` is the unique maximum of φ on K: a positivity
//! certificate for the interior polynomial `f`, a root bracket plus
//! mean-value bound for the boundary polynomial `g`, the corner gap, and a
//! sampled check that boundary points are never local maxima.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::exact_math::{int_ratio, rational, refine_root, verify_root_bracket, HighPrecisionReal, IntPolynomial};
use crate::moments::{tau_all, ParamPair};
use crate::second_moment::{phi, phi_star_closed, sample_k, z_star, ZPoint};

/// The generating polynomials of the `τ_j` and their reciprocals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaFamily {
    /// `θ(t) = Σ τ_j t^j`.
    pub theta: IntPolynomial,
    /// `t θ'(t)`.
    pub theta1: IntPolynomial,
    /// `t θ1'(t)`.
    pub theta2: IntPolynomial,
    /// `t^p θ(1/t)`.
    pub eta: IntPolynomial,
    /// `t^p θ1(1/t)`.
    pub eta1: IntPolynomial,
}

pub fn theta_family(pair: ParamPair) -> ThetaFamily {
    let pair = pair.canonical();
    let p = pair.p as usize;
    let theta = IntPolynomial::new(tau_all(pair));
    let theta1 = theta.x_derivative();
    let theta2 = theta1.x_derivative();
    let eta = theta.reciprocal(p);
    let eta1 = theta1.reciprocal(p);
    ThetaFamily { theta, theta1, theta2, eta, eta1 }
}

fn require_non_eulerian(pair: ParamPair) -> Result<ParamPair> {
    let pair = pair.canonical();
    if pair.is_eulerian() {
        return Err(Error::InvalidParams(format!("the interior analysis needs d > 2p, got {pair}")));
    }
    Ok(pair)
}

/// `f1(y) = (-4y-4) θ1(y) + (4py + 4p - 2d) θ(y)` and
/// `f2(y) = (4y+4) η1(y) + (2dy - 4py - 4p) η(y)`.
pub fn build_f_parts(pair: ParamPair) -> Result<(IntPolynomial, IntPolynomial)> {
    let pair = require_non_eulerian(pair)?;
    let (d, p) = (pair.d as i64, pair.p as i64);
    let t = theta_family(pair);
    let lin = |c0: i64, c1: i64| IntPolynomial::from_i64(&[c0, c1]);
    let f1 = &lin(-4, -4) * &t.theta1 + &lin(4 * p - 2 * d, 4 * p) * &t.theta;
    let f2 = &lin(4, 4) * &t.eta1 + &lin(-4 * p, 2 * d - 4 * p) * &t.eta;
    Ok((f1, f2))
}

/// `f(w) = w^{d-2p} f1(w^2) + f2(w^2)`; its positive roots other than `w = 1`
/// would be further interior critical points.
pub fn build_f(pair: ParamPair) -> Result<IntPolynomial> {
    let pair = require_non_eulerian(pair)?;
    let (f1, f2) = build_f_parts(pair)?;
    let shift = (pair.d - 2 * pair.p) as usize;
    Ok(&f1.compose_power(2).shift_up(shift) + &f2.compose_power(2))
}

/// `f(1 + x)`, divided by its content.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftedF {
    pub shifted: IntPolynomial,
    pub content: BigInt,
    pub reduced: IntPolynomial,
}

pub fn shifted_f(pair: ParamPair) -> Result<ShiftedF> {
    let shifted = build_f(pair)?.taylor_shift_one();
    let content = shifted.content();
    let reduced = shifted.div_exact(&content);
    Ok(ShiftedF { shifted, content, reduced })
}

/// `f(1 + x)` has no negative coefficient and no constant term, so `f` has no
/// root in `(1, ∞)`; the antisymmetry `w^{d+2} f(1/w) = -f(w)` rules out `(0, 1)`.
pub fn interior_uniqueness(pair: ParamPair) -> bool {
    let Ok(f) = build_f(pair) else {
        return false;
    };
    let shifted = f.taylor_shift_one();
    let antisymmetric = f.reciprocal(pair.d as usize + 2) == -&f;
    antisymmetric && shifted.coeff(0).is_zero() && shifted.all_nonnegative() && !shifted.is_zero()
}

/// `g(x) = 2 (p θ(x) - θ1(x)) (1 + x) - d θ(x)`; its positive roots are the
/// values `B0/A0` at critical points of φ on the face `z = 0`.
pub fn build_g(pair: ParamPair) -> IntPolynomial {
    let pair = pair.canonical();
    let t = theta_family(pair);
    let p = BigInt::from(pair.p);
    let inner = &t.theta.scale(&p) - &t.theta1;
    &(&inner * &IntPolynomial::from_i64(&[2, 2])) - &t.theta.scale(&BigInt::from(pair.d))
}

/// The interior critical-point family: `z_{jαα} = τ_j z y^j / θ(y)` and
/// `z_{jαβ} = τ_j (1 - 2z) y^{-j} / (2 θ(1/y))` for `α ≠ β`.
pub fn interior_param(pair: ParamPair, y: &BigRational, z: &BigRational) -> Result<ZPoint> {
    let pair = pair.canonical();
    if !y.is_positive() {
        return Err(Error::OutsideDomain(format!("y = {y} must be positive")));
    }
    if !z.is_positive() || *z >= rational(1, 2) {
        return Err(Error::OutsideDomain(format!("z = {z} must lie in (0, 1/2)")));
    }
    let t = theta_family(pair);
    let yinv = y.recip();
    let th_y = t.theta.eval_rational(y);
    let th_inv = t.theta.eval_rational(&yinv);
    let taus = tau_all(pair);
    let off = (BigRational::one() - z * rational(2, 1)) / (rational(2, 1) * &th_inv);
    let zj = (1..=pair.p as usize)
        .map(|j| {
            let tj = int_ratio(taus[j].clone());
            let diag = &tj * z * num_traits::pow(y.clone(), j) / &th_y;
            let cross = &tj * &off * num_traits::pow(yinv.clone(), j);
            [diag.clone(), cross.clone(), cross, diag]
        })
        .collect();
    Ok(ZPoint { z: z.clone(), zj })
}

/// The `z` at which the interior family satisfies `y = R`:
/// `2z / (1 - 2z) = y^{(d-4p)/2} θ(y) / θ(1/y)`. Requires `y` to be a perfect
/// rational square when `d` is odd, so the caller passes `w = sqrt(y)`.
pub fn interior_z_for(pair: ParamPair, w: &BigRational) -> Result<BigRational> {
    let pair = require_non_eulerian(pair)?;
    if !w.is_positive() {
        return Err(Error::OutsideDomain(format!("w = {w} must be positive")));
    }
    let t = theta_family(pair);
    let y = w * w;
    let e = pair.d as i32 - 4 * pair.p as i32;
    let q = num_traits::pow(w.clone(), e.unsigned_abs() as usize);
    let q = if e < 0 { q.recip() } else { q };
    let q = q * t.theta.eval_rational(&y) / t.theta.eval_rational(&y.recip());
    Ok(&q / (rational(2, 1) * (BigRational::one() + &q)))
}

/// The critical curve of φ on the face `z = 0`: `z̃_{j01} = z̃_{j10} = τ_j x^j / (2θ(x))`,
/// returned as a point of K with all diagonal coordinates zero.
pub fn boundary_param(pair: ParamPair, x: &BigRational) -> Result<ZPoint> {
    let pair = pair.canonical();
    if !x.is_positive() {
        return Err(Error::OutsideDomain(format!("x = {x} must be positive")));
    }
    let t = theta_family(pair);
    let den = rational(2, 1) * t.theta.eval_rational(x);
    let taus = tau_all(pair);
    let zj = (1..=pair.p as usize)
        .map(|j| {
            let v = int_ratio(taus[j].clone()) * num_traits::pow(x.clone(), j) / &den;
            [BigRational::zero(), v.clone(), v, BigRational::zero()]
        })
        .collect();
    Ok(ZPoint { z: BigRational::zero(), zj })
}

/// φ restricted to the face `z = 0`.
pub fn phi0(zpt: &ZPoint, pair: ParamPair, prec: u32) -> Result<HighPrecisionReal> {
    if !zpt.z.is_zero() {
        return Err(Error::OutsideDomain("φ0 lives on the face z = 0".into()));
    }
    phi(zpt, pair, prec)
}

/// `Ã(x) = p - θ1(x)/θ(x)` and `B̃ = d/2 - Ã`.
pub fn tilde_ab(pair: ParamPair, x: &BigRational) -> (BigRational, BigRational) {
    let pair = pair.canonical();
    let t = theta_family(pair);
    let a = rational(pair.p as i64, 1) - t.theta1.eval_rational(x) / t.theta.eval_rational(x);
    let b = rational(pair.d as i64, 2) - &a;
    (a, b)
}

fn tilde_ab_checked(pair: ParamPair, x: &BigRational) -> Result<(BigRational, BigRational)> {
    if !x.is_positive() {
        return Err(Error::OutsideDomain(format!("x = {x} must be positive")));
    }
    let (a, b) = tilde_ab(pair, x);
    if !a.is_positive() || !b.is_positive() {
        return Err(Error::OutsideDomain(format!("Ã = {a}, B̃ = {b} must both be positive")));
    }
    Ok((a, b))
}

/// `φ̃(x) = Ã log Ã + B̃ log B̃ + log(2θ(x)) - (θ1(x)/θ(x)) log x`.
pub fn phi_tilde(pair: ParamPair, x: &BigRational, prec: u32) -> Result<HighPrecisionReal> {
    let (a, b) = tilde_ab_checked(pair, x)?;
    let t = theta_family(pair);
    let hp = |r: &BigRational| HighPrecisionReal::from_rational(r, prec);
    let th = t.theta.eval_rational(x);
    let ratio = t.theta1.eval_rational(x) / &th;
    let mut v = &hp(&a).xlogx()? + &hp(&b).xlogx()?;
    v = &v + &hp(&(rational(2, 1) * th)).ln()?;
    v = &v - &(&hp(&ratio) * &hp(x).ln()?);
    Ok(v)
}

/// `Ã'(x) = -(θ2 θ - θ1^2) / (x θ^2)`.
pub fn a_tilde_prime(pair: ParamPair, x: &BigRational) -> BigRational {
    let t = theta_family(pair);
    let (th, th1, th2) = (t.theta.eval_rational(x), t.theta1.eval_rational(x), t.theta2.eval_rational(x));
    -(&th2 * &th - &th1 * &th1) / (x * &th * &th)
}

/// `φ̃'(x) = Ã'(x) (log Ã - log B̃ + log x)`.
pub fn phi_tilde_prime(pair: ParamPair, x: &BigRational, prec: u32) -> Result<HighPrecisionReal> {
    let (a, b) = tilde_ab_checked(pair, x)?;
    let l = HighPrecisionReal::from_rational(&(a * x / b), prec).ln()?;
    Ok(&HighPrecisionReal::from_rational(&a_tilde_prime(pair, x), prec) * &l)
}

/// A bracket `[lo, hi]` around the positive root of `g` together with the
/// point at which φ̃ anchors the mean-value bound. `lo == hi` marks an exact root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootBracket {
    pub lo: BigRational,
    pub hi: BigRational,
    pub anchor: BigRational,
}

type Fraction = (i64, i64);

/// Brackets for the five certified pairs as `(d, p, lo, hi, anchor)`.
const CERTIFIED_BRACKETS: [(u32, u32, Fraction, Fraction, Fraction); 5] = [
    (6, 1, (5, 1), (5, 1), (5, 1)),
    (10, 2, (3, 1), (16, 5), (3, 1)),
    (13, 3, (5, 2), (8, 3), (5, 2)),
    (14, 3, (25, 9), (26, 9), (25, 9)),
    (17, 4, (7, 3), (5, 2), (5, 2)),
];

/// The stored bracket of a certified pair.
pub fn certified_bracket(pair: ParamPair) -> Option<RootBracket> {
    let pair = pair.canonical();
    CERTIFIED_BRACKETS.iter().find(|b| b.0 == pair.d && b.1 == pair.p).map(|b| RootBracket {
        lo: rational(b.2 .0, b.2 .1),
        hi: rational(b.3 .0, b.3 .1),
        anchor: rational(b.4 .0, b.4 .1),
    })
}

/// A bracket of width at most `1/16` found by bisection on `[0, 1 + max|g_i/g_lead|]`.
pub fn search_bracket(pair: ParamPair) -> Result<RootBracket> {
    let g = build_g(pair);
    let deg = g.degree().ok_or_else(|| Error::InvalidParams("g vanishes identically".into()))?;
    let lead = g.coeff(deg).abs();
    let bound = g.coeffs().iter().map(|c| BigRational::new(c.abs(), lead.clone())).fold(BigRational::zero(), |a, b| a.max(b))
        + BigRational::one();
    let zero = BigRational::zero();
    if g.eval_rational(&zero).is_zero() {
        return Err(Error::InvalidParams("g has a root at 0".into()));
    }
    let (lo, hi) = refine_root(&g, &zero, &bound, &rational(1, 16))?;
    Ok(RootBracket { anchor: lo.clone(), lo, hi })
}

/// Outcome of the boundary analysis on the face `z = 0`.
#[derive(Clone, Debug)]
pub struct BoundaryCheck {
    pub g: IntPolynomial,
    pub sign_changes: usize,
    pub bracket: RootBracket,
    pub bracket_valid: bool,
    /// Upper bound on `|φ̃'|` over the bracket.
    pub mvt_bound: HighPrecisionReal,
    pub mvt_ok: bool,
    pub phi_tilde_anchor: HighPrecisionReal,
    /// `φ̃(anchor) + (hi - lo)`, which dominates `φ̃` at the root.
    pub phi_tilde_bound: HighPrecisionReal,
    pub phi_star: HighPrecisionReal,
    pub below_star: bool,
}

impl BoundaryCheck {
    pub fn passed(&self) -> bool {
        self.failures().is_empty()
    }

    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.sign_changes != 1 {
            out.push("g does not have exactly one sign change");
        }
        if !self.bracket_valid {
            out.push("bracket does not isolate the root of g");
        }
        if !self.mvt_ok {
            out.push("|φ̃'| is not certified below 1 on the bracket");
        }
        if !self.below_star {
            out.push("φ̃ bound does not stay below φ(z*)");
        }
        out
    }
}

/// Checks a bracket: one sign change in `g`, a strict sign change (or exact
/// root) on `[lo, hi]`, `|φ̃'| < 1` there, and `φ̃(anchor) + (hi - lo) < φ(z*)`.
///
/// On the bracket `Ã` is decreasing because `θ2 θ - θ1^2` and `x θ^2` have
/// nonnegative coefficients, so `|Ã'| <= P(hi)/Q(lo)` and
/// `log(Ã x / B̃)` is confined between its values with the endpoints mixed.
pub fn boundary_max_check_with(pair: ParamPair, bracket: RootBracket, prec: u32) -> Result<BoundaryCheck> {
    let pair = pair.canonical();
    let g = build_g(pair);
    let sign_changes = g.sign_changes();
    let RootBracket { lo, hi, anchor } = &bracket;
    if lo > hi || anchor < lo || anchor > hi || !lo.is_positive() {
        return Err(Error::EmptyInterval { lo: lo.to_string(), hi: hi.to_string() });
    }
    let bracket_valid = if lo == hi { g.eval_rational(lo).is_zero() } else { verify_root_bracket(&g, lo, hi)? };

    let t = theta_family(pair);
    let p_poly = &(&t.theta2 * &t.theta) - &(&t.theta1 * &t.theta1);
    let q_poly = (&t.theta * &t.theta).shift_up(1);
    let monotone = p_poly.all_nonnegative() && q_poly.all_nonnegative();
    let a_prime_sup = p_poly.eval_rational(hi) / q_poly.eval_rational(lo);
    let (a_lo, b_lo) = tilde_ab_checked(pair, lo)?;
    let (a_hi, b_hi) = tilde_ab_checked(pair, hi)?;
    let r_small = &a_hi * lo / &b_hi;
    let r_large = &a_lo * hi / &b_lo;
    let extreme = [r_small.clone(), r_small.recip(), r_large.clone(), r_large.recip()]
        .into_iter()
        .fold(BigRational::one(), |a, b| a.max(b));
    let log_sup = HighPrecisionReal::from_rational(&extreme, prec).ln()?;
    let mvt_bound = &HighPrecisionReal::from_rational(&a_prime_sup, prec) * &log_sup;
    let mvt_ok = monotone && mvt_bound.definitely_lt(&HighPrecisionReal::from_int(1, prec));

    let phi_tilde_anchor = phi_tilde(pair, anchor, prec)?;
    let phi_tilde_bound = &phi_tilde_anchor + &HighPrecisionReal::from_rational(&(hi - lo), prec);
    let phi_star = phi_star_closed(pair, prec)?;
    let below_star = phi_tilde_bound.definitely_lt(&phi_star);
    Ok(BoundaryCheck {
        g,
        sign_changes,
        bracket,
        bracket_valid,
        mvt_bound,
        mvt_ok,
        phi_tilde_anchor,
        phi_tilde_bound,
        phi_star,
        below_star,
    })
}

/// [`boundary_max_check_with`] on the stored bracket of a certified pair.
pub fn boundary_max_check(pair: ParamPair, prec: u32) -> Result<BoundaryCheck> {
    let bracket = certified_bracket(pair)
        .ok_or_else(|| Error::InvalidParams(format!("no stored bracket for {}", pair.canonical())))?;
    boundary_max_check_with(pair, bracket, prec)
}

/// The root of `g` refined to width `2^-40` (reporting only).
pub fn refined_boundary_root(pair: ParamPair, bracket: &RootBracket) -> Result<BigRational> {
    if bracket.lo == bracket.hi {
        return Ok(bracket.lo.clone());
    }
    let width = BigRational::new(BigInt::one(), BigInt::one() << 40);
    let (lo, hi) = refine_root(&build_g(pair), &bracket.lo, &bracket.hi, &width)?;
    Ok((lo + hi) / rational(2, 1))
}

/// The corner `a_{p01} = a_{p10} = 1/2` of the face `z = 0`.
pub fn corner_point(pair: ParamPair) -> ZPoint {
    let pair = pair.canonical();
    let p = pair.p as usize;
    let mut zj = vec![[BigRational::zero(), BigRational::zero(), BigRational::zero(), BigRational::zero()]; p];
    zj[p - 1] = [BigRational::zero(), rational(1, 2), rational(1, 2), BigRational::zero()];
    ZPoint { z: BigRational::zero(), zj }
}

/// `φ(z*) - φ0(corner)`, evaluated directly.
pub fn corner_check(pair: ParamPair, prec: u32) -> Result<HighPrecisionReal> {
    let pair = require_non_eulerian(pair)?;
    let star = phi(&z_star(pair), pair, prec)?;
    Ok(&star - &phi0(&corner_point(pair), pair, prec)?)
}

/// `log(C(d,p) 2^{1 - d/2})`, the closed form of the corner gap.
pub fn corner_gap_closed(pair: ParamPair, prec: u32) -> Result<HighPrecisionReal> {
    let pair = pair.canonical();
    let ln_c = HighPrecisionReal::from_int(pair.choose(), prec).ln()?;
    let k = HighPrecisionReal::from_ratio(2 - pair.d as i64, 2, prec);
    Ok(&ln_c + &(&k * &HighPrecisionReal::ln2(prec)))
}

/// Number of boundary points tried by [`boundary_escape_check`].
pub const ESCAPE_SAMPLES: usize = 100;

/// Samples boundary points of K with `z ∈ (0.05, 0.45)` and some vanished
/// coordinates, and checks that moving toward an interior point increases φ
/// for steps `1e-4` and `1e-3`.
pub fn boundary_escape_check<R: Rng + ?Sized>(pair: ParamPair, rng: &mut R) -> Result<bool> {
    boundary_escape_check_n(pair, ESCAPE_SAMPLES, 0, rng)
}

/// As [`boundary_escape_check`] with `samples` points; `vanish` fixes the
/// number of zeroed coordinates (0 picks it at random per point).
pub fn boundary_escape_check_n<R: Rng + ?Sized>(pair: ParamPair, samples: usize, vanish: usize, rng: &mut R) -> Result<bool> {
    let pair = require_non_eulerian(pair)?;
    let p = pair.p as usize;
    let prec = 128;
    let steps = [rational(1, 10_000), rational(1, 1000)];
    let mut done = 0;
    while done < samples {
        let s = sample_k(pair, rng)?;
        if !(0.05..0.45).contains(&s.z) {
            continue;
        }
        let star = z_star(pair).to_f64();
        let mid: Vec<f64> = s.to_vec().iter().zip(star.to_vec()).map(|(a, b)| 0.5 * (a + b)).collect();
        let b = to_rational_point(&ZPoint::<f64>::from_vec(&mid));
        let a = vanish_coordinates(&b, p, vanish, rng);
        let base = phi(&a, pair, prec)?;
        for eps in &steps {
            let moved = ZPoint::from_vec(
                &a.to_vec().iter().zip(b.to_vec()).map(|(x, y)| x + eps * (y - x)).collect::<Vec<_>>(),
            );
            if !phi(&moved, pair, prec)?.definitely_gt(&base) {
                return Ok(false);
            }
        }
        done += 1;
    }
    Ok(true)
}

fn to_rational_point(x: &ZPoint<f64>) -> ZPoint {
    let r = |v: f64| BigRational::from_float(v).expect("finite coordinate");
    ZPoint { z: r(x.z), zj: x.zj.iter().map(|row| row.map(&r)).collect() }
}

/// Zeroes some coordinates `z_{jαβ}` (`j = 0` included) while keeping every
/// slot total, rescaling the survivors of each slot.
fn vanish_coordinates<R: Rng + ?Sized>(b: &ZPoint, p: usize, vanish: usize, rng: &mut R) -> ZPoint {
    let cols = b.all_coords();
    let total = 4 * (p + 1);
    let count = if vanish == 0 { rng.random_range(1..=p + 1) } else { vanish };
    let mut chosen = vec![false; total];
    let mut placed = 0;
    while placed < count {
        let idx = rng.random_range(0..total);
        let (j, s) = (idx / 4, idx % 4);
        let zeroed_in_slot = (0..=p).filter(|&jj| chosen[4 * jj + s]).count();
        if chosen[idx] || zeroed_in_slot == p {
            continue;
        }
        chosen[4 * j + s] = true;
        placed += 1;
    }
    let mut out = b.clone();
    for s in 0..4 {
        let keep: BigRational = (0..=p).filter(|&j| !chosen[4 * j + s]).map(|j| cols[j][s].clone()).sum();
        let slot_total: BigRational = (0..=p).map(|j| cols[j][s].clone()).sum();
        for j in 1..=p {
            out.zj[j - 1][s] = if chosen[4 * j + s] {
                BigRational::zero()
            } else {
                &cols[j][s] * &slot_total / &keep
            };
        }
    }
    out
}

/// Every check behind the claim that `z*` is the unique maximum of φ on K.
#[derive(Clone, Debug)]
pub struct AppendixCertificate {
    pub pair: ParamPair,
    /// Set for pairs without a stored bracket; the verdict is then informative only.
    pub exploratory: bool,
    pub f_vanishes_at_one: bool,
    pub f_shift_nonneg: bool,
    pub f_shift: ShiftedF,
    pub boundary: BoundaryCheck,
    pub refined_root: BigRational,
    pub corner_gap: HighPrecisionReal,
    pub escape_ok: bool,
    pub verdict: bool,
}

impl AppendixCertificate {
    pub fn build<R: Rng + ?Sized>(pair: ParamPair, prec: u32, rng: &mut R) -> Result<Self> {
        let pair = require_non_eulerian(pair)?;
        let f = build_f(pair)?;
        let f_vanishes_at_one = f.eval_rational(&BigRational::one()).is_zero();
        let f_shift = shifted_f(pair)?;
        let f_shift_nonneg = interior_uniqueness(pair);
        let (bracket, exploratory) = match certified_bracket(pair) {
            Some(b) => (b, false),
            None => (search_bracket(pair)?, true),
        };
        let refined_root = refined_boundary_root(pair, &bracket)?;
        let boundary = boundary_max_check_with(pair, bracket, prec)?;
        let corner_gap = corner_check(pair, prec)?;
        let escape_ok = boundary_escape_check(pair, rng)?;
        let verdict = f_vanishes_at_one && f_shift_nonneg && boundary.passed() && corner_gap.definitely_positive() && escape_ok;
        Ok(Self { pair, exploratory, f_vanishes_at_one, f_shift_nonneg, f_shift, boundary, refined_root, corner_gap, escape_ok, verdict })
    }

    /// One `key: value` line per field.
    pub fn to_report(&self) -> String {
        let b = &self.boundary;
        let mut s = String::new();
        let mut line = |k: &str, v: String| writeln!(s, "{k}: {v}").unwrap();
        line("pair", self.pair.to_string());
        line("mode", if self.exploratory { "exploratory" } else { "certified" }.into());
        line("f_at_one_zero", self.f_vanishes_at_one.to_string());
        line("f_shift_content", self.f_shift.content.to_string());
        line("f_shift_reduced", self.f_shift.reduced.to_string());
        line("f_shift_nonneg", self.f_shift_nonneg.to_string());
        line("g", b.g.to_string());
        line("g_sign_changes", b.sign_changes.to_string());
        line("g_root_bracket", format!("[{}, {}]", b.bracket.lo, b.bracket.hi));
        line("g_bracket_valid", b.bracket_valid.to_string());
        line("g_root_refined", format!("{:.12}", self.refined_root.to_f64().unwrap_or(f64::NAN)));
        line("mvt_anchor", b.bracket.anchor.to_string());
        line("mvt_bound", format!("{:.6}", b.mvt_bound.to_f64()));
        line("mvt_ok", b.mvt_ok.to_string());
        line("phi_tilde_anchor", format!("{:.6}", b.phi_tilde_anchor.to_f64()));
        line("phi_tilde_bound", format!("{:.6}", b.phi_tilde_bound.to_f64()));
        line("phi_star", format!("{:.6}", b.phi_star.to_f64()));
        line("boundary_below_star", b.below_star.to_string());
        line("corner_gap", format!("{:.6}", self.corner_gap.to_f64()));
        line("escape_ok", self.escape_ok.to_string());
        line("verdict", self.verdict.to_string());
        s
    }
}

#[cfg(test)]
mod tests;
