//! The exact second-moment sum over pair-class vectors, the functions φ and ψ
//! on the compact set K, the Hessian at the symmetric point and the assembled
//! Laplace ratio.
//!
//! Points of K carry `z` and the `4p` coordinates `z_{jαβ}` for `1 <= j <= p`,
//! with `(α, β)` ordered `00, 01, 10, 11`. The `j = 0` coordinates are derived:
//! `z_{0αα} = z - Σ_j z_{jαα}` and `z_{0αβ} = 1/2 - z - Σ_j z_{jαβ}` for `α ≠ β`.
//! Hessian rows and columns follow the same order, `z` first.

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand_distr::{Beta, Distribution, Exp1};

use crate::error::{Error, Result};
use crate::exact_math::{factorial, int_ratio, pairings_count, rational, rational_determinant, HighPrecisionReal};
use crate::moments::{condition_one, sscm_sum_closed, tau_all, ParamPair};
use crate::orientation::PairClassVector;

/// Integer pair-class counts indexing the second-moment sum.
pub type KVector = PairClassVector;

/// `(-1)^{α+β}` for the slots `00, 01, 10, 11`.
pub const SLOT_SIGN: [i64; 4] = [1, -1, -1, 1];

fn is_diagonal_slot(s: usize) -> bool {
    s == 0 || s == 3
}

fn canonical_split(pair: ParamPair) -> Result<(i64, i64)> {
    let pair = pair.canonical();
    if pair.is_eulerian() {
        return Err(Error::InvalidParams(format!("second-moment quantities need p < d/2, got {pair}")));
    }
    Ok((pair.d as i64, pair.p as i64))
}

/// `(Â, B̂)`: points that are in-points under both orientations, and
/// out-points under both.
pub fn ab_hat(kvec: &KVector) -> (i64, i64) {
    let (d, p, n) = (kvec.d as i64, kvec.p as i64, kvec.n as i64);
    let mixed: i64 = kvec
        .counts
        .iter()
        .enumerate()
        .map(|(j, c)| j as i64 * (0..4).map(|s| SLOT_SIGN[s] * c[s] as i64).sum::<i64>())
        .sum();
    let a = p * n + (d - 4 * p) * kvec.k as i64 + mixed;
    (a, d * n / 2 - a)
}

fn check_membership(kvec: &KVector) -> Result<(i64, i64)> {
    if kvec.counts.len() != kvec.p + 1 {
        return Err(Error::OutsideDomain(format!("{} rows for p = {}", kvec.counts.len(), kvec.p)));
    }
    if !kvec.satisfies_sum_constraints() {
        return Err(Error::OutsideDomain("class counts violate the row-sum constraints".into()));
    }
    let (a, b) = ab_hat(kvec);
    if a < 0 || b < 0 {
        return Err(Error::OutsideDomain(format!("negative point counts A = {a}, B = {b}")));
    }
    Ok((a, b))
}

/// Exact contribution `J_n(k)` of one class vector to `E(Y^2)`:
/// `n!/M(dn) · Π τ_j^{k_{jαβ}}/k_{jαβ}! · Â! B̂!`.
pub fn jn_exact(kvec: &KVector) -> Result<BigRational> {
    let pair = ParamPair::new(kvec.d as u32, kvec.p as u32)?;
    canonical_split(pair)?;
    let (a, b) = check_membership(kvec)?;
    let taus = tau_all(pair);
    let mut num = factorial(kvec.n as u64) * factorial(a as u64) * factorial(b as u64);
    let mut den = pairings_count((kvec.d * kvec.n / 2) as u64);
    for (t, row) in taus.iter().zip(&kvec.counts) {
        for &c in row {
            num *= t.pow(c as u32);
            den *= factorial(c);
        }
    }
    Ok(BigRational::new(num, den))
}

fn compositions(total: u64, parts: usize) -> Vec<Vec<u64>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    (0..=total)
        .flat_map(|first| {
            compositions(total - first, parts - 1).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

/// Every class vector satisfying the row-sum constraints with `Â, B̂ >= 0`.
pub fn enumerate_kvectors(pair: ParamPair, n: usize) -> Result<Vec<KVector>> {
    let (d, p) = canonical_split(pair)?;
    if n % 2 == 1 {
        return Err(Error::OddVertexCount(n));
    }
    let (d, p) = (d as usize, p as usize);
    let half = (n / 2) as u64;
    let mut out = Vec::new();
    for k in 0..=half {
        let totals = [k, half - k, half - k, k];
        let options: Vec<Vec<Vec<u64>>> = totals.iter().map(|&t| compositions(t, p + 1)).collect();
        for c0 in &options[0] {
            for c1 in &options[1] {
                for c2 in &options[2] {
                    for c3 in &options[3] {
                        let counts = (0..=p).map(|j| [c0[j], c1[j], c2[j], c3[j]]).collect();
                        let v = PairClassVector { d, n, p, k, counts };
                        if check_membership(&v).is_ok() {
                            out.push(v);
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `E(Y^2)` as the exact sum of [`jn_exact`] over all class vectors.
pub fn second_moment_exact(pair: ParamPair, n: usize) -> Result<BigRational> {
    enumerate_kvectors(pair, n)?.iter().try_fold(BigRational::zero(), |acc, k| Ok(acc + jn_exact(k)?))
}

/// Numeric types usable as coordinates of K.
pub trait Scalar: Clone + Num + PartialOrd + FromPrimitive {}
impl<T: Clone + Num + PartialOrd + FromPrimitive> Scalar for T {}

fn lit<T: Scalar>(v: i64) -> T {
    T::from_i64(v).expect("small integer")
}

fn half<T: Scalar>() -> T {
    T::one() / lit(2)
}

/// A point of K; `zj[j - 1]` holds `z_{j00}, z_{j01}, z_{j10}, z_{j11}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ZPoint<T = BigRational> {
    pub z: T,
    pub zj: Vec<[T; 4]>,
}

impl<T: Scalar> ZPoint<T> {
    pub fn p(&self) -> usize {
        self.zj.len()
    }

    /// The total mass of slot `s`: `z` on the diagonal, `1/2 - z` off it.
    fn slot_total(&self, s: usize) -> T {
        if is_diagonal_slot(s) {
            self.z.clone()
        } else {
            half::<T>() - self.z.clone()
        }
    }

    /// The derived coordinates `z_{0αβ}`.
    pub fn zero_row(&self) -> [T; 4] {
        std::array::from_fn(|s| self.zj.iter().fold(self.slot_total(s), |acc, row| acc - row[s].clone()))
    }

    /// All `4(p+1)` coordinates `z_{jαβ}`, `j = 0` first.
    pub fn all_coords(&self) -> Vec<[T; 4]> {
        std::iter::once(self.zero_row()).chain(self.zj.iter().cloned()).collect()
    }

    pub fn in_k(&self) -> bool {
        let zero = T::zero();
        self.z >= zero && self.z <= half() && self.all_coords().iter().flatten().all(|c| *c >= zero)
    }

    pub fn is_interior(&self) -> bool {
        let zero = T::zero();
        self.all_coords().iter().flatten().all(|c| *c > zero)
    }

    /// `(A, B)` with `A = p + (d-4p) z + Σ j (z_{j00} + z_{j11} - z_{j01} - z_{j10})`
    /// and `B = d/2 - A`.
    pub fn ab(&self, d: i64) -> (T, T) {
        let p = self.p() as i64;
        let mut a = lit::<T>(p) + lit::<T>(d - 4 * p) * self.z.clone();
        for (j, row) in self.zj.iter().enumerate() {
            for s in 0..4 {
                a = a + lit::<T>((j as i64 + 1) * SLOT_SIGN[s]) * row[s].clone();
            }
        }
        let b = lit::<T>(d) / lit(2) - a.clone();
        (a, b)
    }

    /// `z ↦ 1/2 - z` with `β` flipped in every coordinate.
    pub fn involution(&self) -> Self {
        Self {
            z: half::<T>() - self.z.clone(),
            zj: self.zj.iter().map(|r| [r[1].clone(), r[0].clone(), r[3].clone(), r[2].clone()]).collect(),
        }
    }

    /// Coordinates in Hessian order.
    pub fn to_vec(&self) -> Vec<T> {
        std::iter::once(self.z.clone()).chain(self.zj.iter().flatten().cloned()).collect()
    }

    pub fn from_vec(v: &[T]) -> Self {
        assert!(v.len() % 4 == 1, "expected 4p + 1 coordinates");
        let zj = v[1..].chunks_exact(4).map(|c| [c[0].clone(), c[1].clone(), c[2].clone(), c[3].clone()]).collect();
        Self { z: v[0].clone(), zj }
    }
}

impl ZPoint<BigRational> {
    pub fn to_f64(&self) -> ZPoint<f64> {
        let f = |x: &BigRational| x.to_f64().unwrap_or(f64::NAN);
        ZPoint { z: f(&self.z), zj: self.zj.iter().map(|r| std::array::from_fn(|s| f(&r[s]))).collect() }
    }
}

/// The class vector divided by `n`.
pub fn scaled_point(kvec: &KVector) -> ZPoint<BigRational> {
    let n = BigInt::from(kvec.n);
    let r = |c: u64| BigRational::new(BigInt::from(c), n.clone());
    ZPoint { z: r(kvec.k), zj: kvec.counts[1..].iter().map(|row| std::array::from_fn(|s| r(row[s]))).collect() }
}

/// The symmetric critical point: `z = 1/4`, `z_{jαβ} = τ_j / (4 C(d,p)^2)`.
pub fn z_star(pair: ParamPair) -> ZPoint<BigRational> {
    let pair = pair.canonical();
    let c = pair.choose();
    let den = BigInt::from(4) * &c * &c;
    let zj = tau_all(pair)[1..]
        .iter()
        .map(|t| {
            let v = BigRational::new(t.clone(), den.clone());
            [v.clone(), v.clone(), v.clone(), v]
        })
        .collect();
    ZPoint { z: rational(1, 4), zj }
}

fn check_dims<T: Scalar>(zpt: &ZPoint<T>, pair: ParamPair) -> Result<(i64, i64)> {
    let (d, p) = canonical_split(pair)?;
    if zpt.p() != p as usize {
        return Err(Error::InvalidParams(format!("point has {} rows, {pair} needs {p}", zpt.p())));
    }
    Ok((d, p))
}

/// `φ = A log A + B log B + Σ_{j,α,β} z_{jαβ} (log τ_j - log z_{jαβ})`, with `0 log 0 = 0`.
pub fn phi(zpt: &ZPoint<BigRational>, pair: ParamPair, prec: u32) -> Result<HighPrecisionReal> {
    let (d, _) = check_dims(zpt, pair)?;
    if !zpt.in_k() {
        return Err(Error::OutsideDomain("point is not in K".into()));
    }
    let hp = |x: &BigRational| HighPrecisionReal::from_rational(x, prec);
    let (a, b) = zpt.ab(d);
    let mut total = &hp(&a).xlogx()? + &hp(&b).xlogx()?;
    for (t, row) in tau_all(pair.canonical()).iter().zip(zpt.all_coords()) {
        let ln_tau = HighPrecisionReal::from_int(t.clone(), prec).ln()?;
        for c in &row {
            let x = hp(c);
            total = &(&total + &(&x * &ln_tau)) - &x.xlogx()?;
        }
    }
    Ok(total)
}

fn xlogx_f64(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// Double-precision φ for sweeps; `NaN` outside K.
pub fn phi_f64(zpt: &ZPoint<f64>, pair: ParamPair) -> f64 {
    let Ok((d, _)) = check_dims(zpt, pair) else {
        return f64::NAN;
    };
    if !zpt.in_k() {
        return f64::NAN;
    }
    let (a, b) = zpt.ab(d);
    let taus: Vec<f64> = tau_all(pair.canonical()).iter().map(|t| t.to_f64().unwrap_or(f64::NAN)).collect();
    let mut total = xlogx_f64(a) + xlogx_f64(b);
    for (t, row) in taus.iter().zip(zpt.all_coords()) {
        for c in row {
            total += c * t.ln() - xlogx_f64(c);
        }
    }
    total
}

/// `ψ = sqrt(AB) (Π_{j,α,β} z_{jαβ})^{-1/2}` on the interior of K.
pub fn psi(zpt: &ZPoint<BigRational>, pair: ParamPair, prec: u32) -> Result<HighPrecisionReal> {
    let (d, _) = check_dims(zpt, pair)?;
    if !zpt.is_interior() {
        return Err(Error::OutsideDomain("ψ is defined on the interior of K only".into()));
    }
    let (a, b) = zpt.ab(d);
    let prod = zpt.all_coords().iter().flatten().fold(BigRational::one(), |acc, c| acc * c);
    HighPrecisionReal::from_rational(&(a * b / prod), prec).sqrt()
}

/// `ψ(z*) = d (2 C(d,p))^{4(p+1)} / (4 Π τ_j^2)`.
pub fn psi_star_closed(pair: ParamPair) -> BigRational {
    let pair = pair.canonical();
    let two_c = BigInt::from(2) * pair.choose();
    let prod: BigInt = tau_all(pair).iter().map(|t| t * t).product();
    BigRational::new(BigInt::from(pair.d) * two_c.pow(4 * (pair.p + 1)), BigInt::from(4) * prod)
}

fn interior_or_err<T: Scalar>(zpt: &ZPoint<T>, d: i64) -> Result<()> {
    let (a, b) = zpt.ab(d);
    if !zpt.is_interior() || a <= T::zero() || b <= T::zero() {
        return Err(Error::OutsideDomain("derivatives need an interior point".into()));
    }
    Ok(())
}

/// Partial derivatives of φ in Hessian order:
/// `∂φ/∂z = (d-4p) log(A/B) + log(z_{001} z_{010} / (z_{000} z_{011}))` and
/// `∂φ/∂z_{jαβ} = j(-1)^{α+β} log(A/B) + log(τ_j z_{0αβ} / (τ_0 z_{jαβ}))`.
pub fn gradient_phi(zpt: &ZPoint<f64>, pair: ParamPair) -> Result<Vec<f64>> {
    let (d, p) = check_dims(zpt, pair)?;
    interior_or_err(zpt, d)?;
    let (a, b) = zpt.ab(d);
    let lab = (a / b).ln();
    let z0 = zpt.zero_row();
    let taus: Vec<f64> = tau_all(pair.canonical()).iter().map(|t| t.to_f64().unwrap_or(f64::NAN)).collect();
    let mut g = vec![(d - 4 * p) as f64 * lab + (z0[1] * z0[2] / (z0[0] * z0[3])).ln()];
    for (j, row) in zpt.zj.iter().enumerate() {
        let j = j + 1;
        for s in 0..4 {
            g.push((j as i64 * SLOT_SIGN[s]) as f64 * lab + (taus[j] * z0[s] / (taus[0] * row[s])).ln());
        }
    }
    Ok(g)
}

/// The same partials evaluated with tracked error at an exact point.
pub fn gradient_phi_exact(zpt: &ZPoint<BigRational>, pair: ParamPair, prec: u32) -> Result<Vec<HighPrecisionReal>> {
    let (d, p) = check_dims(zpt, pair)?;
    interior_or_err(zpt, d)?;
    let (a, b) = zpt.ab(d);
    let ln = |x: BigRational| HighPrecisionReal::from_rational(&x, prec).ln();
    let lab = ln(a / b)?;
    let z0 = zpt.zero_row();
    let taus: Vec<BigRational> = tau_all(pair.canonical()).into_iter().map(int_ratio).collect();
    let scaled = |k: i64, x: &HighPrecisionReal| &HighPrecisionReal::from_int(k, prec) * x;
    let mut g = vec![&scaled(d - 4 * p, &lab) + &ln(&z0[1] * &z0[2] / (&z0[0] * &z0[3]))?];
    for (j, row) in zpt.zj.iter().enumerate() {
        let j = j + 1;
        for s in 0..4 {
            let ratio = &taus[j] * &z0[s] / (&taus[0] * &row[s]);
            g.push(&scaled(j as i64 * SLOT_SIGN[s], &lab) + &ln(ratio)?);
        }
    }
    Ok(g)
}

/// Second derivatives of φ at an interior point:
/// `∂²/∂z² = (d-4p)^2 (1/A + 1/B) - Σ 1/z_{0αβ}`,
/// `∂²/∂z∂z_{jαβ} = (-1)^{α+β} (j (d-4p)(1/A + 1/B) + 1/z_{0αβ})`,
/// `∂²/∂z_{jαβ}∂z_{kγδ} = jk (-1)^{α+β+γ+δ} (1/A + 1/B) - [αβ = γδ]/z_{0αβ} - [jαβ = kγδ]/z_{jαβ}`.
pub fn hessian_general<T: Scalar>(zpt: &ZPoint<T>, pair: ParamPair) -> Result<Vec<Vec<T>>> {
    let (d, p) = check_dims(zpt, pair)?;
    interior_or_err(zpt, d)?;
    let (a, b) = zpt.ab(d);
    let w = T::one() / a + T::one() / b;
    let z0 = zpt.zero_row();
    let inv0: Vec<T> = z0.iter().map(|c| T::one() / c.clone()).collect();
    let r = 4 * p as usize + 1;
    let u: Vec<i64> = std::iter::once(d - 4 * p)
        .chain((1..=p).flat_map(|j| SLOT_SIGN.map(|s| j * s)))
        .collect();
    let mut h = vec![vec![T::zero(); r]; r];
    for row in 0..r {
        for col in 0..r {
            let mut v = lit::<T>(u[row] * u[col]) * w.clone();
            match (row, col) {
                (0, 0) => v = inv0.iter().fold(v, |acc, x| acc - x.clone()),
                (0, c) | (c, 0) => {
                    let s = (c - 1) % 4;
                    v = v + lit::<T>(SLOT_SIGN[s]) * inv0[s].clone();
                }
                (i, k) => {
                    let (si, sk) = ((i - 1) % 4, (k - 1) % 4);
                    if si == sk {
                        v = v - inv0[si].clone();
                    }
                    if i == k {
                        v = v - T::one() / zpt.zj[(i - 1) / 4][si].clone();
                    }
                }
            }
            h[row][col] = v;
        }
    }
    Ok(h)
}

/// The Hessian of φ at `z*`, stored exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct HessianMatrix {
    pub entries: Vec<Vec<BigRational>>,
}

impl HessianMatrix {
    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| self.entries[i][j] == self.entries[j][i]))
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        let n = self.dim();
        DMatrix::from_fn(n, n, |i, j| self.entries[i][j].to_f64().unwrap_or(f64::NAN))
    }

    /// `det(-H)` by exact elimination.
    pub fn neg_det_exact(&self) -> BigRational {
        let neg: Vec<Vec<BigRational>> = self.entries.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
        rational_determinant(&neg)
    }

    /// `det(-H)` by floating-point LU.
    pub fn neg_det_lu(&self) -> f64 {
        (-self.to_f64()).lu().determinant()
    }

    /// Pivots of exact elimination on `-H` without row exchanges, stopping at
    /// the first non-positive one.
    pub fn neg_pivots(&self) -> Vec<BigRational> {
        let mut a: Vec<Vec<BigRational>> = self.entries.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
        let n = self.dim();
        let mut pivots = Vec::with_capacity(n);
        for k in 0..n {
            let pivot = a[k][k].clone();
            pivots.push(pivot.clone());
            if !pivot.is_positive() {
                break;
            }
            for i in k + 1..n {
                let factor = &a[i][k] / &pivot;
                for j in k..n {
                    let delta = &factor * &a[k][j];
                    a[i][j] -= delta;
                }
            }
        }
        pivots
    }

    /// Sylvester's criterion through the elimination pivots of `-H`.
    pub fn is_negative_definite(&self) -> bool {
        let pivots = self.neg_pivots();
        pivots.len() == self.dim() && pivots.iter().all(|p| p.is_positive())
    }
}

/// `H = D - E + (8/d) u uᵀ - V Vᵀ / z*_{000}` with `D = diag(1, -1/z*_{jαβ})`,
/// `E` the `(1,1)` unit matrix, `u = (d - 4p, (-1)^{α+β} j)` and
/// `V = (v | I_4 | ... | I_4)ᵀ` for `v = (-1, 1, 1, -1)`.
pub fn hessian_assembled(pair: ParamPair) -> Result<HessianMatrix> {
    let (d, p) = canonical_split(pair)?;
    let zs = z_star(pair);
    let r = 4 * p as usize + 1;
    let z000 = zs.zero_row()[0].clone();
    let u: Vec<BigRational> = std::iter::once(d - 4 * p)
        .chain((1..=p).flat_map(|j| SLOT_SIGN.map(|s| j * s)))
        .map(|x| rational(x, 1))
        .collect();
    let v_row = |i: usize| -> [BigRational; 4] {
        if i == 0 {
            [-1, 1, 1, -1].map(|x| rational(x, 1))
        } else {
            std::array::from_fn(|s| rational(i64::from(s == (i - 1) % 4), 1))
        }
    };
    let flat = zs.to_vec();
    let scale = rational(8, d);
    let mut entries = vec![vec![BigRational::zero(); r]; r];
    for i in 0..r {
        let vi = v_row(i);
        for j in 0..r {
            let vj = v_row(j);
            let vv: BigRational = vi.iter().zip(&vj).map(|(a, b)| a * b).sum();
            let mut x = &scale * &u[i] * &u[j] - vv / &z000;
            if i == j {
                x += if i == 0 { BigRational::zero() } else { -flat[i].recip() };
            }
            entries[i][j] = x;
        }
    }
    Ok(HessianMatrix { entries })
}

/// `det(-H) = (2C)^{8(p+1)} (d^2(d-1) - c^2) / (32 d^2 (d-1) Π τ_j^4)` with
/// `c = d^2 - 4dp + 4p^2 - d`, exactly.
pub fn hessian_det_closed_exact(pair: ParamPair) -> BigRational {
    let pair = pair.canonical();
    let d = BigInt::from(pair.d);
    let two_c = BigInt::from(2) * pair.choose();
    let prod: BigInt = tau_all(pair).iter().map(|t| t.pow(4)).product();
    let num = two_c.pow(8 * (pair.p + 1)) * pair.condition_margin();
    BigRational::new(num, BigInt::from(32) * &d * &d * (&d - 1) * prod)
}

pub fn hessian_det_closed(pair: ParamPair, prec: u32) -> HighPrecisionReal {
    HighPrecisionReal::from_rational(&hessian_det_closed_exact(pair), prec)
}

/// Both sides of `det(D + λuuᵀ + μVVᵀ) = (1 + λuᵀD⁻¹u) det D det(I + μVᵀD⁻¹V - λμ VᵀD⁻¹uuᵀD⁻¹V / (1 + λuᵀD⁻¹u))`.
pub fn matrix_det_lemma_sides(diag: &[f64], u: &[f64], v: &DMatrix<f64>, lambda: f64, mu: f64) -> (f64, f64) {
    let n = diag.len();
    let dm = DMatrix::from_diagonal(&DVector::from_column_slice(diag));
    let uv = DVector::from_column_slice(u);
    let lhs = (&dm + lambda * &uv * uv.transpose() + mu * v * v.transpose()).determinant();
    let dinv = DMatrix::from_diagonal(&DVector::from_iterator(n, diag.iter().map(|x| 1.0 / x)));
    let s = 1.0 + lambda * (uv.transpose() * &dinv * &uv)[(0, 0)];
    let dinv_u = &dinv * &uv;
    let vt_dinv_u = v.transpose() * &dinv_u;
    let k = v.ncols();
    let inner = DMatrix::identity(k, k) + mu * v.transpose() * &dinv * v
        - (lambda * mu / s) * &vt_dinv_u * vt_dinv_u.transpose();
    let det_d: f64 = diag.iter().product();
    (lhs, s * det_d * inner.determinant())
}

/// One random instance of the determinant identity, checked to relative error `1e-9`.
pub fn matrix_det_lemma_check<R: Rng + ?Sized>(rng: &mut R) -> bool {
    let n = rng.random_range(2..=6);
    let k = rng.random_range(1..=n.min(4));
    loop {
        let diag: Vec<f64> = (0..n)
            .map(|_| {
                let x: f64 = rng.random_range(0.5..2.0);
                if rng.random_bool(0.5) { x } else { -x }
            })
            .collect();
        let u: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let v = DMatrix::from_fn(n, k, |_, _| rng.random_range(-1.0..1.0));
        let lambda = rng.random_range(-2.0..2.0);
        let mu = rng.random_range(-2.0..2.0);
        let s = 1.0 + lambda * u.iter().zip(&diag).map(|(x, d)| x * x / d).sum::<f64>();
        if s.abs() < 0.1 {
            continue;
        }
        let (lhs, rhs) = matrix_det_lemma_sides(&diag, &u, &v, lambda, mu);
        return (lhs - rhs).abs() <= 1e-9 * lhs.abs().max(rhs.abs()).max(1.0);
    }
}

/// The Laplace-summation constant `(2C)^{4(p+1)} / sqrt(32 det(-H) Π τ_j^4)`.
///
/// Panics if it disagrees with `ψ(z*) / (sqrt 2 · d · sqrt det(-H))` or with
/// the closed form of the cycle-conditioning sum.
pub fn laplace_ratio(pair: ParamPair, prec: u32) -> Result<HighPrecisionReal> {
    if !condition_one(pair) {
        return Err(Error::ConditionOneFails { d: pair.d, p: pair.p });
    }
    let (d, p) = canonical_split(pair)?;
    let pair = pair.canonical();
    let det = hessian_det_closed_exact(pair);
    let two_c = BigInt::from(2) * pair.choose();
    let prod: BigInt = tau_all(pair).iter().map(|t| t.pow(4)).product();
    let squared = int_ratio(two_c.pow(8 * (p as u32 + 1))) / (rational(32, 1) * &det * int_ratio(prod));
    let ratio = HighPrecisionReal::from_rational(&squared, prec).sqrt()?;

    let psi_star = psi(&z_star(pair), pair, prec)?;
    let denom_sq = rational(2 * d * d, 1) * det;
    let via_psi = psi_star.checked_div(&HighPrecisionReal::from_rational(&denom_sq, prec).sqrt()?)?;
    let closed = sscm_sum_closed(pair, prec)?;
    let tol = HighPrecisionReal::from_rational(&BigRational::new(BigInt::one(), BigInt::one() << (prec / 2)), prec);
    assert!(ratio.within(&via_psi, &tol), "Laplace forms disagree for {pair}: {ratio} vs {via_psi}");
    assert!(ratio.within(&closed, &tol), "Laplace ratio {ratio} differs from closed form {closed} for {pair}");
    Ok(ratio)
}

/// A uniform point of K: `2z ~ Beta(2p+1, 2p+1)` and each slot's `p + 1`
/// coordinates (the derived `j = 0` one included) are a flat Dirichlet split of
/// the slot total.
pub fn sample_k<R: Rng + ?Sized>(pair: ParamPair, rng: &mut R) -> Result<ZPoint<f64>> {
    let (_, p) = canonical_split(pair)?;
    let p = p as usize;
    let shape = (2 * p + 1) as f64;
    let beta = Beta::new(shape, shape).map_err(|e| Error::InvalidParams(e.to_string()))?;
    let z = 0.5 * beta.sample(rng);
    let mut zj = vec![[0.0; 4]; p];
    for s in 0..4 {
        let total = if is_diagonal_slot(s) { z } else { 0.5 - z };
        let e: Vec<f64> = (0..=p).map(|_| Exp1.sample(rng)).collect();
        let sum: f64 = e.iter().sum();
        for j in 0..p {
            zj[j][s] = total * e[j + 1] / sum;
        }
    }
    Ok(ZPoint { z, zj })
}

/// Largest `φ(x) - φ(z*)` over `samples` uniform points of K.
pub fn max_phi_excess<R: Rng + ?Sized>(pair: ParamPair, samples: usize, rng: &mut R) -> Result<f64> {
    let star = phi_f64(&z_star(pair).to_f64(), pair);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..samples {
        let x = sample_k(pair, rng)?;
        let v = phi_f64(&x, pair);
        if v.is_finite() {
            worst = worst.max(v - star);
        }
    }
    Ok(worst)
}

/// `ψ(z*)` assembled from its definition, for cross-checks against [`psi_star_closed`].
pub fn psi_star(pair: ParamPair, prec: u32) -> Result<HighPrecisionReal> {
    psi(&z_star(pair), pair, prec)
}

/// `φ(z*) = (d/2) log(d/4) + 2 log(2 C(d,p))`.
pub fn phi_star_closed(pair: ParamPair, prec: u32) -> Result<HighPrecisionReal> {
    let pair = pair.canonical();
    let d = pair.d as i64;
    let first = &HighPrecisionReal::from_ratio(d, 2, prec) * &HighPrecisionReal::from_ratio(d, 4, prec).ln()?;
    let second = &HighPrecisionReal::from_int(2, prec) * &HighPrecisionReal::from_int(BigInt::from(2) * pair.choose(), prec).ln()?;
    Ok(&first + &second)
}
