//! First-moment formulas, short-cycle constants, the closed forms of the
//! cycle-conditioning sum, and the classification table.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact_math::{binomial, factorial, falling_factorial, int_ratio, pairings_count, HighPrecisionReal};

/// A degree `d` together with an orientation parameter `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParamPair {
    pub d: u32,
    pub p: u32,
}

/// The five pairs whose interior maximum is certified explicitly.
pub const CERTIFIED_PAIRS: [ParamPair; 5] = [
    ParamPair { d: 6, p: 1 },
    ParamPair { d: 10, p: 2 },
    ParamPair { d: 13, p: 3 },
    ParamPair { d: 14, p: 3 },
    ParamPair { d: 17, p: 4 },
];

impl ParamPair {
    pub fn new(d: u32, p: u32) -> Result<Self> {
        if d < 3 {
            return Err(Error::InvalidParams(format!("degree d = {d} must be at least 3")));
        }
        if p < 1 || p >= d {
            return Err(Error::InvalidParams(format!("need 1 <= p < d, got (d, p) = ({d}, {p})")));
        }
        Ok(Self { d, p })
    }

    /// Representative with `p <= d/2`; `p` and `d - p` orientations coincide.
    pub fn canonical(self) -> Self {
        Self { d: self.d, p: self.p.min(self.d - self.p) }
    }

    pub fn is_eulerian(self) -> bool {
        self.d == 2 * self.p
    }

    pub fn is_certified(self) -> bool {
        CERTIFIED_PAIRS.contains(&self.canonical())
    }

    /// `C(d, p)`.
    pub fn choose(self) -> BigInt {
        binomial(self.d as i64, self.p as i64)
    }

    /// `d^2 - 4dp + 4p^2 - d`, which equals `(d - 2p)^2 - d`.
    pub fn cycle_coefficient(self) -> i64 {
        let (d, p) = (self.d as i64, self.p as i64);
        d * d - 4 * d * p + 4 * p * p - d
    }

    /// `d^2 (d - 1) - c^2`; positive exactly when the variance condition holds.
    pub fn condition_margin(self) -> BigInt {
        let d = BigInt::from(self.d);
        let c = BigInt::from(self.cycle_coefficient());
        &d * &d * (&d - 1) - &c * &c
    }
}

impl fmt::Display for ParamPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.d, self.p)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClassLabel {
    AffirmativeY,
    NegativeN,
    NegativeNstar,
    Unknown,
    Infeasible,
}

impl ClassLabel {
    pub fn symbol(self) -> &'static str {
        match self {
            Self::AffirmativeY => "Y",
            Self::NegativeN => "N",
            Self::NegativeNstar => "N*",
            Self::Unknown => "?",
            Self::Infeasible => "#",
        }
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Printed a.a.s. upper bounds on the max-cut fraction of random d-regular
/// graphs (Coja-Oghlan, Loick, Mezei and Sorkin, 2022), keyed by degree.
pub const MAXCUT_UPPER_BOUNDS: [(u32, f64); 4] = [(14, 0.7028), (15, 0.6965), (19, 0.6749), (20, 0.6703)];

/// `tau_j = C(d,p) C(p,j) C(d-p,p-j)`.
pub fn tau(pair: ParamPair, j: u32) -> Result<BigInt> {
    if j > pair.p {
        return Err(Error::InvalidParams(format!("j = {j} outside [0, {}]", pair.p)));
    }
    let (d, p, j) = (pair.d as i64, pair.p as i64, j as i64);
    Ok(binomial(d, p) * binomial(p, j) * binomial(d - p, p - j))
}

pub fn tau_all(pair: ParamPair) -> Vec<BigInt> {
    (0..=pair.p).map(|j| tau(pair, j).expect("j in range")).collect()
}

/// Both sides of `sum_j (j)_s tau_j = (p)_s C(d,p) C(d-s,p-s)`.
pub fn hypergeom_identity(pair: ParamPair, s: u32) -> (BigInt, BigInt) {
    let lhs = tau_all(pair)
        .iter()
        .enumerate()
        .map(|(j, t)| falling_factorial(j as i64, s) * t)
        .sum();
    let (d, p) = (pair.d as i64, pair.p as i64);
    let rhs = falling_factorial(p, s) * binomial(d, p) * binomial(d - s as i64, p - s as i64);
    (lhs, rhs)
}

/// Limiting mean `(d-1)^i / (2i)` of the number of i-cycles.
pub fn lambda_i(d: u32, i: u32) -> BigRational {
    BigRational::new(BigInt::from(d as i64 - 1).pow(i), BigInt::from(2 * i))
}

/// `-(d^2 - 4dp + 4p^2 - d) / (d(d-1))`, the ratio whose powers are the `delta_i`.
pub fn delta_base(pair: ParamPair) -> BigRational {
    let d = pair.d as i64;
    BigRational::new(BigInt::from(-pair.cycle_coefficient()), BigInt::from(d * (d - 1)))
}

pub fn delta_i(pair: ParamPair, i: u32) -> BigRational {
    num_traits::pow(delta_base(pair), i as usize)
}

/// `delta_i` recomputed from the sum over cycle orientations: `j` cells of
/// in-degree two, `s` of them in-vertices, `t` out-degree-two cells that are
/// out-vertices, with `gamma_k = C(d-2, p-k)`.
pub fn delta_via_cycle_sum(pair: ParamPair, i: u32) -> BigRational {
    let (d, p) = (pair.d as i64, pair.p as i64);
    let gamma = |k: i64| binomial(d - 2, p - k);
    let (g0, g1, g2) = (gamma(0), gamma(1), gamma(2));
    let i64i = i as i64;
    let mut total = BigRational::zero();
    for j in 0..=i64i / 2 {
        let mut inner = BigInt::zero();
        for s in 0..=j {
            for t in 0..=j {
                inner += binomial(j, s)
                    * binomial(j, t)
                    * g2.pow((s + t) as u32)
                    * g0.pow((2 * j - s - t) as u32)
                    * g1.pow((i64i - 2 * j) as u32);
            }
        }
        total += BigRational::new(binomial(i64i, 2 * j) * inner, BigInt::from(4).pow(j as u32));
    }
    let scale = BigRational::new(BigInt::from(2).pow(i + 1), pair.choose().pow(i));
    total * scale - BigRational::one()
}

/// Exact expected number of p-orientations of a uniform pairing on `n` cells.
///
/// For `d = 2p` every vertex is both an in- and an out-vertex, so the
/// `C(n, n/2)` choice of in-vertices disappears.
pub fn expected_count_exact(pair: ParamPair, n: usize) -> Result<BigRational> {
    let pair = pair.canonical();
    if n < 1 {
        return Err(Error::InvalidParams("n must be positive".into()));
    }
    let dn = pair.d as usize * n;
    if dn % 2 == 1 {
        return Err(Error::OddPointCount(dn));
    }
    let base = pair.choose().pow(n as u32) * factorial(dn as u64 / 2);
    let numerator = if pair.is_eulerian() {
        base
    } else {
        if n % 2 == 1 {
            return Err(Error::OddVertexCount(n));
        }
        binomial(n as i64, n as i64 / 2) * base
    };
    Ok(BigRational::new(numerator, pairings_count(dn as u64 / 2)))
}

/// `2^{1-d/2} C(d,p)`: the per-vertex growth rate of the first moment.
pub fn growth_base(pair: ParamPair) -> f64 {
    let pair = pair.canonical();
    let c = pair.choose().to_f64().unwrap_or(f64::INFINITY);
    c * 2f64.powf(1.0 - pair.d as f64 / 2.0)
}

/// Compares `C(d,p)` with `2^{d/2-1}` exactly by squaring both sides.
pub fn growth_base_cmp_one(pair: ParamPair) -> std::cmp::Ordering {
    let pair = pair.canonical();
    let c = pair.choose();
    (&c * &c).cmp(&(BigInt::one() << (pair.d - 2)))
}

pub fn condition_one(pair: ParamPair) -> bool {
    pair.condition_margin().is_positive()
}

fn closed_form_ratio(d: u32, c: i64, prec: u32) -> Result<HighPrecisionReal> {
    let db = BigInt::from(d);
    let cb = BigInt::from(c);
    let margin = &db * &db * (&db - 1) - &cb * &cb;
    let inside = BigRational::new(db.clone() - 1, margin);
    let root = HighPrecisionReal::from_rational(&inside, prec).sqrt()?;
    Ok(&HighPrecisionReal::from_int(db, prec) * &root)
}

/// `exp(sum_i lambda_i delta_i^2) = d sqrt((d-1) / (d^2(d-1) - c^2))`.
pub fn sscm_sum_closed(pair: ParamPair, prec: u32) -> Result<HighPrecisionReal> {
    if !condition_one(pair) {
        return Err(Error::ConditionOneFails { d: pair.d, p: pair.p });
    }
    closed_form_ratio(pair.d, pair.cycle_coefficient(), prec)
}

/// `sum_{i <= terms} lambda_i delta_i^2`, each term rounded once.
pub fn sscm_partial_sum(pair: ParamPair, terms: u32, prec: u32) -> HighPrecisionReal {
    (1..=terms).fold(HighPrecisionReal::zero(prec), |acc, i| {
        let term = lambda_i(pair.d, i) * delta_i(pair, i).pow(2);
        &acc + &HighPrecisionReal::from_rational(&term, prec)
    })
}

/// Limit of `E(Y^2) / E(Y)^2`, written as `d sqrt((d-1)/(d^2(d-1) - (4p^2-4dp+d^2-d)^2))`.
pub fn second_moment_ratio(pair: ParamPair, prec: u32) -> Result<HighPrecisionReal> {
    if !condition_one(pair) {
        return Err(Error::ConditionOneFails { d: pair.d, p: pair.p });
    }
    let (d, p) = (pair.d as i64, pair.p as i64);
    closed_form_ratio(pair.d, 4 * p * p - 4 * d * p + d * d - d, prec)
}

/// Limiting mean `(2p(d-p)/d)^r / r` of the number of directed r-cycles.
pub fn mu_r(pair: ParamPair, r: u32) -> BigRational {
    let (d, p) = (pair.d as i64, pair.p as i64);
    let base = BigRational::new(BigInt::from(2 * p * (d - p)), BigInt::from(d));
    num_traits::pow(base, r as usize) / int_ratio(BigInt::from(r))
}

fn seed_pairs(dmax: u32) -> BTreeSet<(u32, u32)> {
    let mut seeds: BTreeSet<(u32, u32)> = [(3, 1), (4, 1), (5, 1), (9, 2)].into_iter().collect();
    seeds.extend(CERTIFIED_PAIRS.iter().map(|q| (q.d, q.p)));
    for p in 1..=dmax / 2 {
        seeds.insert((2 * p, p));
        seeds.insert((2 * p + 1, p));
    }
    seeds.retain(|&(d, _)| d <= dmax);
    seeds
}

/// All pairs with `d <= dmax` reachable from the known affirmative seeds by
/// adding a Hamilton cycle `(d, p) -> (d + 2, p + 1)` or by the symmetry
/// `(d, p) <-> (d, d - p)`.
pub fn affirmative_closure(dmax: u32) -> BTreeSet<(u32, u32)> {
    let mut set = seed_pairs(dmax);
    let mut frontier: Vec<(u32, u32)> = set.iter().copied().collect();
    while let Some((d, p)) = frontier.pop() {
        for next in [(d + 2, p + 1), (d, d - p)] {
            if next.0 <= dmax && next.1 >= 1 && next.1 < next.0 && set.insert(next) {
                frontier.push(next);
            }
        }
    }
    set
}

fn maxcut_bound(d: u32) -> Option<f64> {
    MAXCUT_UPPER_BOUNDS.iter().find(|(dd, _)| *dd == d).map(|(_, b)| *b)
}

/// Classification of a single table cell.
pub fn classify(d: u32, p: u32) -> ClassLabel {
    classify_with(&affirmative_closure(d), d, p)
}

/// Classification reusing a precomputed closure covering degree `d`.
pub fn classify_with(closure: &BTreeSet<(u32, u32)>, d: u32, p: u32) -> ClassLabel {
    let Ok(pair) = ParamPair::new(d, p) else {
        return ClassLabel::Infeasible;
    };
    if closure.contains(&(d, p)) && condition_one(pair) {
        return ClassLabel::AffirmativeY;
    }
    if growth_base_cmp_one(pair) != std::cmp::Ordering::Greater {
        return ClassLabel::NegativeN;
    }
    let q = pair.canonical().p;
    if let Some(bound) = maxcut_bound(d) {
        if 1.0 - 2.0 * q as f64 / d as f64 > bound {
            return ClassLabel::NegativeNstar;
        }
    }
    ClassLabel::Unknown
}

#[derive(Clone, Debug)]
pub struct MomentReport {
    pub growth_base: f64,
    pub lambda: Vec<BigRational>,
    pub delta: Vec<BigRational>,
    pub sscm_sum: Option<f64>,
    pub ratio: Option<f64>,
    pub condition1: bool,
}

pub fn moment_report(pair: ParamPair, imax: u32, prec: u32) -> MomentReport {
    let condition1 = condition_one(pair);
    MomentReport {
        growth_base: growth_base(pair),
        lambda: (1..=imax).map(|i| lambda_i(pair.d, i)).collect(),
        delta: (1..=imax).map(|i| delta_i(pair, i)).collect(),
        sscm_sum: sscm_sum_closed(pair, prec).ok().map(|v| v.to_f64()),
        ratio: second_moment_ratio(pair, prec).ok().map(|v| v.to_f64()),
        condition1,
    }
}
