//! The Stirling function `φ(z) = log Γ(z) − ½log 2π − (z−½)log z + z`.
//!
//! `φ` is computed as the Laplace integral of the Binet kernel
//! `κ(t) = (t/(e^t−1) − 1 + t/2)/t²` along a ray `arg t = θ`, `|θ| < π/2`.
//! Term-by-term, the Laplace images of the Taylor coefficients of `κ` are the
//! coefficients `c_k = B_{2k}/(2k(2k−1))` of the divergent asymptotic series
//! `φ̂(z) = Σ c_k z^{1−2k}`. Outside the right half-plane `φ` is extended by
//! `φ(z) = −φ(−z) − log(1 − e^{−2πiz})` for `Im z < 0` and by Schwarz
//! reflection for `Im z > 0`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use once_cell::sync::Lazy;

use crate::error::{Error, Result};
use crate::quadrature::{composite, GL12};

/// Number of even Bernoulli numbers kept in the shared table.
pub const SHARED_TABLE_SIZE: usize = 125;

/// Largest number of asymptotic terms used by [`phi_asymptotic`].
pub const MAX_ASYMPTOTIC_TERMS: usize = 120;

/// Absolute tolerance of the panel-doubling test in [`phi_binet`].
pub const BINET_TOLERANCE: f64 = 1e-12;

/// Largest series error bound accepted by [`phi_fast`].
pub const FAST_SERIES_BOUND: f64 = 1e-15;

/// Rays closer than this to the imaginary axis pass too near the kernel's
/// poles at `2πik`.
const MAX_DIRECTION: f64 = 1.2;

/// `B_2, B_4, ..., B_{2K}` as exact rationals with `f64` mirrors.
#[derive(Clone, Debug)]
pub struct BernoulliTable {
    exact: Vec<BigRational>,
    values: Vec<f64>,
}

static SHARED: Lazy<BernoulliTable> = Lazy::new(|| BernoulliTable::new(SHARED_TABLE_SIZE));

impl BernoulliTable {
    /// Builds `B_0..B_{2K}` from `Σ_{j=0}^{m} C(m+1, j) B_j = 0`.
    pub fn new(k: usize) -> Self {
        assert!(k >= 1, "Bernoulli table needs K >= 1");
        let top = 2 * k;
        let mut all: Vec<BigRational> = Vec::with_capacity(top + 1);
        all.push(BigRational::one());
        // binomial row C(m+1, j), updated in place
        let mut row: Vec<BigInt> = vec![BigInt::one(), BigInt::from(2), BigInt::one()];
        for m in 1..=top {
            // row currently holds C(m+1, 0..=m+1)
            if m > 1 && m % 2 == 1 {
                all.push(BigRational::zero());
            } else {
                let mut acc = BigRational::zero();
                for (j, b) in all.iter().enumerate() {
                    if !b.is_zero() {
                        acc += b * BigRational::from_integer(row[j].clone());
                    }
                }
                all.push(-acc / BigRational::from_integer(BigInt::from(m as u64 + 1)));
            }
            let mut next = vec![BigInt::one(); row.len() + 1];
            for j in 1..row.len() {
                next[j] = &row[j - 1] + &row[j];
            }
            row = next;
        }
        let exact: Vec<BigRational> = (1..=k).map(|i| all[2 * i].clone()).collect();
        let values = exact.iter().map(rational_to_f64).collect();
        Self { exact, values }
    }

    /// Process-wide table with [`SHARED_TABLE_SIZE`] entries.
    pub fn shared() -> &'static BernoulliTable {
        &SHARED
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Exact `B_{2k}`, `k ≥ 1`.
    pub fn b2k_exact(&self, k: usize) -> &BigRational {
        &self.exact[k - 1]
    }

    /// `B_{2k}` as a float, `k ≥ 1`.
    pub fn b2k(&self, k: usize) -> f64 {
        self.values[k - 1]
    }
}

fn rational_to_f64(q: &BigRational) -> f64 {
    // numerators outgrow f64 before the quotient does
    let (n, d) = (q.numer(), q.denom());
    let sn = n.bits().saturating_sub(64);
    let sd = d.bits().saturating_sub(64);
    let a = (n >> sn).to_f64().unwrap_or(f64::NAN);
    let b = (d >> sd).to_f64().unwrap_or(f64::NAN);
    let e = sn as i64 - sd as i64;
    // split the power of two so neither factor overflows on its own
    let half = (e / 2) as i32;
    (a / b) * 2f64.powi(half) * 2f64.powi(e as i32 - half)
}

/// Bernoulli numbers `B_0, B_1, ..., B_{2K}` (exact), with `B_1 = −1/2`.
pub fn bernoulli(k: usize) -> Vec<BigRational> {
    let t = BernoulliTable::new(k);
    let mut out = vec![BigRational::one(), BigRational::new(BigInt::from(-1), BigInt::from(2))];
    for i in 1..=k {
        out.push(t.b2k_exact(i).clone());
        if i < k {
            out.push(BigRational::zero());
        }
    }
    out
}

/// Exact `c_k = B_{2k}/(2k(2k−1))`.
pub fn stirling_coeff_exact(k: usize) -> BigRational {
    assert!(k >= 1);
    let table = BernoulliTable::shared();
    let b = if k <= table.len() { table.b2k_exact(k).clone() } else { BernoulliTable::new(k).b2k_exact(k).clone() };
    let d = BigInt::from((2 * k * (2 * k - 1)) as u64);
    b / BigRational::from_integer(d)
}

/// `c_k = B_{2k}/(2k(2k−1))` as a float.
pub fn stirling_coeff(k: usize) -> f64 {
    assert!(k >= 1);
    let table = BernoulliTable::shared();
    if k <= table.len() {
        table.b2k(k) / ((2 * k) as f64 * (2 * k - 1) as f64)
    } else {
        rational_to_f64(&stirling_coeff_exact(k))
    }
}

/// The coefficients `c_1..c_K` of `φ̂`.
#[derive(Clone, Debug)]
pub struct StirlingSeries {
    coeffs: Vec<f64>,
}

impl StirlingSeries {
    pub fn new(k: usize) -> Self {
        Self { coeffs: (1..=k).map(stirling_coeff).collect() }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// `|c_{k+1}/c_k|` for `k = 1..K−1`.
    pub fn ratios(&self) -> Vec<f64> {
        self.coeffs.windows(2).map(|w| (w[1] / w[0]).abs()).collect()
    }
}

/// Truncation rule for [`phi_asymptotic`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Truncation {
    Order(usize),
    /// `N = ⌊π|z|⌋`, the least-term index.
    Optimal,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AsymptoticValue {
    pub value: Complex64,
    /// First-omitted-term bound (times `sec^{2N+2}(arg z / 2)` off the real
    /// axis) plus the floating-point error of the partial sum.
    pub err_bound: f64,
    pub terms: usize,
    /// Set for `|z| < 1`, where the bound is not informative.
    pub degenerate: bool,
}

/// Partial sum `Σ_{k=1}^{N} c_k z^{1−2k}` of the asymptotic series.
pub fn phi_asymptotic(z: Complex64, truncation: Truncation) -> Result<AsymptoticValue> {
    if z == Complex64::new(0.0, 0.0) || (z.im == 0.0 && z.re < 0.0) {
        return Err(Error::Domain(format!("asymptotic series needs z != 0, |arg z| < pi; got {z}")));
    }
    let n = match truncation {
        Truncation::Order(n) => n,
        Truncation::Optimal => (PI * z.norm()).floor() as usize,
    }
    .clamp(1, MAX_ASYMPTOTIC_TERMS);
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut power = inv;
    let mut value = Complex64::new(0.0, 0.0);
    let mut magnitude = 0.0;
    for k in 1..=n {
        let term = power * stirling_coeff(k);
        magnitude += term.norm();
        value += term;
        power *= inv2;
    }
    let half_arg = 0.5 * z.arg();
    let sec = if z.im == 0.0 { 1.0 } else { 1.0 / half_arg.cos() };
    let next = stirling_coeff(n + 1).abs() * z.norm().powi(-1 - 2 * n as i32) * sec.powi(2 * n as i32 + 2);
    let rounding = 4.0 * (n as f64 + 1.0) * f64::EPSILON * magnitude;
    Ok(AsymptoticValue { value, err_bound: next + rounding, terms: n, degenerate: z.norm() < 1.0 })
}

static KAPPA_TAYLOR: Lazy<Vec<f64>> = Lazy::new(|| {
    // B_{2k}/(2k)! for k = 1..16
    let table = BernoulliTable::shared();
    let mut fact = 1.0;
    (1..=16)
        .map(|k| {
            fact *= (2 * k - 1) as f64 * (2 * k) as f64;
            table.b2k(k) / fact
        })
        .collect()
});

/// Binet kernel `κ(t) = (1/(e^t − 1) − 1/t + 1/2)/t`, analytic at 0 with
/// `κ(0) = 1/12`. Intended for `Re t ≥ 0`.
pub fn kappa(t: Complex64) -> Complex64 {
    if t.norm_sqr() < 1.0 {
        let t2 = t * t;
        let coeffs = &*KAPPA_TAYLOR;
        let mut acc = Complex64::new(coeffs[coeffs.len() - 1], 0.0);
        for c in coeffs.iter().rev().skip(1) {
            acc = acc * t2 + c;
        }
        return acc;
    }
    let one = Complex64::new(1.0, 0.0);
    let bose = if t.re >= 0.0 {
        let q = (-t).exp();
        q / (one - q)
    } else {
        one / (t.exp() - one)
    };
    (bose - t.inv() + 0.5) / t
}

/// Direction of steepest descent `−arg z`, clamped away from `±π/2`.
pub fn default_direction(z: Complex64) -> f64 {
    (-z.arg()).clamp(-MAX_DIRECTION, MAX_DIRECTION)
}

/// `∫_0^{∞e^{iθ}} (−t)^j κ(t) e^{−zt} dt`, the `j`-th derivative of `φ`.
pub fn binet_moment(z: Complex64, theta: f64, j: u32) -> Result<Complex64> {
    if !(theta.abs() < FRAC_PI_2) {
        return Err(Error::Parameter(format!("direction {theta} must lie in (-pi/2, pi/2)")));
    }
    let dir = Complex64::from_polar(1.0, theta);
    let w = z * dir;
    if !(w.re > 0.0) {
        return Err(Error::Convergence(format!("Re(z e^(i theta)) = {} <= 0 for z = {z}", w.re)));
    }
    let breaks = panel_breaks(w, theta, j);
    let integrand = |s: f64| {
        let t = dir * s;
        let mut v = kappa(t) * (-w * s).exp() * dir;
        if j > 0 {
            v *= (-t).powu(j);
        }
        v
    };
    let mut splits = 1;
    let mut prev = composite(&GL12, &breaks, splits, integrand);
    loop {
        splits *= 2;
        let next = composite(&GL12, &breaks, splits, integrand);
        let diff = (next - prev).norm();
        if diff < BINET_TOLERANCE {
            return Ok(next);
        }
        if splits >= 64 {
            return Err(Error::Quadrature { diff, panels: splits * (breaks.len() - 1) });
        }
        prev = next;
    }
}

fn panel_breaks(w: Complex64, theta: f64, j: u32) -> Vec<f64> {
    let decay = w.re;
    // |κ| ≤ 1/2 on the ray; moments add a polynomial factor
    let mut cutoff = 42.0 / decay;
    for _ in 0..3 {
        cutoff = (42.0 + f64::from(j) * cutoff.max(1.0).ln()) / decay;
    }
    let h_cap = 8.0 / w.norm();
    let damping = theta.cos();
    let mut breaks = vec![0.0];
    let mut s = 0.0;
    while s < cutoff {
        let structural = if s * damping < 37.0 { 2.5f64.min((0.5 * s).max(1.0)) } else { (0.5 * s).max(1.0) };
        let h = structural.min(h_cap);
        s = (s + h).min(cutoff);
        breaks.push(s);
    }
    breaks
}

/// Laplace integral of `κ` along `arg t = θ`.
pub fn phi_binet(z: Complex64, theta: f64) -> Result<Complex64> {
    binet_moment(z, theta, 0)
}

fn check_slit(z: Complex64) -> Result<()> {
    if z.im == 0.0 && z.re <= 0.0 {
        return Err(Error::Domain(format!("{z} lies on the cut (-inf, 0]")));
    }
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain(format!("{z} is not finite")));
    }
    Ok(())
}

/// `log(1 − e^{−2πiz})` for `Im z < 0`.
fn reflection_log(z: Complex64) -> Complex64 {
    let q = (Complex64::new(0.0, -2.0 * PI) * z).exp();
    (Complex64::new(1.0, 0.0) - q).ln()
}

/// The Stirling function on `ℂ \ (−∞, 0]`.
pub fn phi(z: Complex64) -> Result<Complex64> {
    check_slit(z)?;
    if z.im > 0.0 {
        return Ok(phi(z.conj())?.conj());
    }
    if z.re > 0.0 {
        return phi_binet(z, default_direction(z));
    }
    // Re z ≤ 0, Im z < 0
    let mz = -z;
    Ok(-phi_binet(mz, default_direction(mz))? - reflection_log(z))
}

/// `φ` from the optimally truncated series where `|z| ≥ 8`, `Re z ≥ 0` and
/// its error bound is below `1e−15`; from [`phi`] elsewhere.
pub fn phi_fast(z: Complex64) -> Result<Complex64> {
    check_slit(z)?;
    if z.re >= 0.0 && z.norm() >= 8.0 {
        let a = phi_asymptotic(z, Truncation::Optimal)?;
        if a.err_bound < FAST_SERIES_BOUND {
            return Ok(a.value);
        }
    }
    phi(z)
}

/// `φ'` on `ℂ \ (−∞, 0]`.
pub fn phi_prime(z: Complex64) -> Result<Complex64> {
    check_slit(z)?;
    if z.im > 0.0 {
        return Ok(phi_prime(z.conj())?.conj());
    }
    if z.re > 0.0 {
        return binet_moment(z, default_direction(z), 1);
    }
    let mz = -z;
    let q = (Complex64::new(0.0, -2.0 * PI) * z).exp();
    let dlog = Complex64::new(0.0, 2.0 * PI) * q / (Complex64::new(1.0, 0.0) - q);
    Ok(binet_moment(mz, default_direction(mz), 1)? - dlog)
}

/// `φ₂(z) = −φ(−z)` on `ℂ \ [0, ∞)`.
pub fn phi2(z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 && z.re >= 0.0 {
        return Err(Error::Domain(format!("{z} lies on [0, inf)")));
    }
    Ok(-phi(-z)?)
}

/// Checks that every term `c_k (it)^{1−2k}`, `k ≤ K`, is purely imaginary:
/// the exponents are odd, so `i^{1−2k} ∈ {i, −i}`.
pub fn odd_support_check(k: usize) -> bool {
    (1..=k).all(|j| {
        let exponent = 1 - 2 * j as i64;
        let unit_is_imaginary = exponent.rem_euclid(4) % 2 == 1;
        unit_is_imaginary && stirling_coeff(j).is_finite()
    })
}

/// Largest `|φ(z)|` over a polar grid of the annular sector
/// `r_min ≤ |z| ≤ r_max`, `|arg z| ≤ max_arg`.
pub fn phi_sector_sup(r_min: f64, r_max: f64, max_arg: f64, n_r: usize, n_arg: usize) -> Result<f64> {
    let mut sup: f64 = 0.0;
    for i in 0..n_r {
        let r = r_min * (r_max / r_min).powf(i as f64 / (n_r.max(2) - 1) as f64);
        for k in 0..n_arg {
            let a = -max_arg + 2.0 * max_arg * k as f64 / (n_arg.max(2) - 1) as f64;
            let z = Complex64::from_polar(r, a);
            if z.im == 0.0 && z.re <= 0.0 {
                continue;
            }
            sup = sup.max(phi(z)?.norm());
        }
    }
    Ok(sup)
}
