//! The Gamma function on the slit plane `ℂ \ (−∞, 0]`, its phase
//! `A(z) = Im((z−½)Log z − z + φ(z))`, the strips `U_n`, `Ũ_n`, `V_n` and the
//! companion `g(z) = Γ(z)(1 − e^{2πiz})`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::stirling::{binet_moment, phi_fast, phi_prime};

/// Below this modulus `Γ` is shifted up with the functional equation.
pub const Z_MIN: f64 = 8.0;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Terms kept in the partial sums of [`dmod_dx`] and [`dmod_dy`] by callers
/// that do not choose their own.
pub const DMOD_TERMS: usize = 1000;

const HALF_LOG_TAU: f64 = 0.918_938_533_204_672_8;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn on_cut(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0
}

fn is_pole(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0
}

/// `(z−½)Log z − z + ½log 2π + φ(z)`, the branch of `log Γ` that is
/// analytic on the slit plane and real on `(0, ∞)`.
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    Ok((z - 0.5) * z.ln() - z + HALF_LOG_TAU + phi_fast(z)?)
}

/// `Γ(z)` for `z ∉ {0, −1, −2, ...}`.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    if is_pole(z) {
        return Err(Error::Pole(format!("{z}")));
    }
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain(format!("{z} is not finite")));
    }
    if z.norm() >= Z_MIN && !on_cut(z) {
        return Ok(log_gamma(z)?.exp());
    }
    let mut m = 0u32;
    let mut denom = c(1.0, 0.0);
    let mut w = z;
    while w.norm() < Z_MIN || on_cut(w) {
        denom *= w;
        m += 1;
        w = z + f64::from(m);
    }
    Ok(log_gamma(w)?.exp() / denom)
}

/// `ψ(z) = Γ'(z)/Γ(z) = Log z − 1/(2z) + φ'(z)` on the slit plane.
pub fn digamma(z: Complex64) -> Result<Complex64> {
    Ok(z.ln() - 0.5 / z + phi_prime(z)?)
}

/// Independent `log Γ` from the Weierstrass product
/// `Γ(z) = e^{−γz}/z ∏ (1 + z/n)^{−1} e^{z/n}`, summed to
/// `N = max(1000, 50|z|)` with an Euler–Maclaurin tail.
pub fn log_gamma_oracle(z: Complex64) -> Result<Complex64> {
    if is_pole(z) {
        return Err(Error::Pole(format!("{z}")));
    }
    let n_terms = (50.0 * z.norm()).ceil().max(1000.0) as usize;
    // f(x) = z/x − Log(1 + z/x)
    let f = |x: f64| z / x - (z / x + 1.0).ln();
    let mut acc = c(0.0, 0.0);
    let mut comp = c(0.0, 0.0);
    for n in 1..n_terms {
        // Kahan summation keeps the long tail of tiny terms
        let y = f(n as f64) - comp;
        let t = acc + y;
        comp = (t - acc) - y;
        acc = t;
    }
    let nf = n_terms as f64;
    let integral = (z + nf) * (z / nf + 1.0).ln() - z;
    let d1 = 1.0 / nf - z / (nf * nf) - (z + nf).inv();
    let d3 = 2.0 / nf.powi(3) - 6.0 * z / nf.powi(4) - 2.0 * (z + nf).powu(3).inv();
    let tail = integral + f(nf) * 0.5 - d1 / 12.0 + d3 / 720.0;
    Ok(-z * EULER_GAMMA - z.ln() + acc + tail)
}

/// `Γ` from [`log_gamma_oracle`]; for cross-validation only.
pub fn gamma_oracle(z: Complex64) -> Result<Complex64> {
    Ok(log_gamma_oracle(z)?.exp())
}

/// `φ` from [`log_gamma_oracle`]; for cross-validation only.
pub fn phi_oracle(z: Complex64) -> Result<Complex64> {
    if on_cut(z) {
        return Err(Error::Domain(format!("{z} lies on the cut (-inf, 0]")));
    }
    Ok(log_gamma_oracle(z)? - ((z - 0.5) * z.ln() - z + HALF_LOG_TAU))
}

/// Shift threshold and the positive critical point of `Γ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GammaContext {
    pub z_min: f64,
    pub x0: f64,
}

impl GammaContext {
    pub fn new() -> Result<Self> {
        Ok(Self { z_min: Z_MIN, x0: find_x0()? })
    }
}

/// The unique positive zero of `Γ'`, by Newton on `ψ` from `x = 1.5`.
pub fn find_x0() -> Result<f64> {
    let mut x: f64 = 1.5;
    for _ in 0..50 {
        let z = c(x, 0.0);
        let psi = digamma(z)?.re;
        let dpsi = 1.0 / x + 0.5 / (x * x) + binet_moment(z, 0.0, 2)?.re;
        let step = psi / dpsi;
        x -= step;
        let residual = (gamma(c(x, 0.0))?.re * digamma(c(x, 0.0))?.re).abs();
        if (step.abs() < 1e-15 * x || residual < 1e-14) && residual < 1e-12 {
            return Ok(x);
        }
    }
    Err(Error::NoConvergence { what: "Newton iteration for the critical point of Gamma".into(), iterations: 50 })
}

/// `A(z) = Im((z−½)Log z − z + φ(z))`, a continuous branch of `arg Γ`.
pub fn phase_a(z: Complex64) -> Result<f64> {
    if on_cut(z) {
        return Err(Error::Domain(format!("{z} lies on the cut (-inf, 0]")));
    }
    Ok(((z - 0.5) * z.ln() - z + phi_fast(z)?).im)
}

/// `A_g(z) = Im((z−½)Log z − z − φ(−z))`, the phase of `g` for `Im z > 0`.
pub fn phase_a_g(z: Complex64) -> Result<f64> {
    if !(z.im > 0.0) {
        return Err(Error::Domain(format!("phase of g needs Im z > 0; got {z}")));
    }
    Ok(((z - 0.5) * z.ln() - z - phi_fast(-z)?).im)
}

/// `S^∞(R, α)` together with a strip index `n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegionSpec {
    pub radius: f64,
    pub alpha: f64,
    pub n: i64,
}

impl RegionSpec {
    pub fn new(radius: f64, alpha: f64, n: i64) -> Result<Self> {
        if !(radius > 0.0) || !(alpha > 0.0 && alpha < PI / 2.0) {
            return Err(Error::Parameter(format!(
                "need R > 0 and alpha in (0, pi/2); got R = {radius}, alpha = {alpha}"
            )));
        }
        Ok(Self { radius, alpha, n })
    }

    /// `|z| > R` and `|arg z| < α`.
    pub fn in_sector(&self, z: Complex64) -> bool {
        z.norm() > self.radius && z.arg().abs() < self.alpha
    }
}

fn strip_index(a: f64) -> i64 {
    (a / (2.0 * PI)).floor() as i64
}

/// `n` with `z ∈ Ũ_n(R, α)`, or `None` outside the sector.
pub fn classify_un_tilde(z: Complex64, spec: &RegionSpec) -> Result<Option<i64>> {
    if !spec.in_sector(z) {
        return Ok(None);
    }
    Ok(Some(strip_index(phase_a(z)?)))
}

/// `n` with `z ∈ U_n(R, α) = Ũ_n ∩ {Re z > x₀}`.
pub fn classify_un(z: Complex64, spec: &RegionSpec, x0: f64) -> Result<Option<i64>> {
    if z.re <= x0 {
        return Ok(None);
    }
    classify_un_tilde(z, spec)
}

/// `n` with `z ∈ V_n`: `−z ∈ S^∞(R, α)`, `Im z > 0`, `2πn ≤ A_g(z) < 2π(n+1)`.
pub fn classify_vn(z: Complex64, spec: &RegionSpec) -> Result<Option<i64>> {
    if !(z.im > 0.0) {
        return Err(Error::Domain(format!("V_n lives in Im z > 0; got {z}")));
    }
    if !spec.in_sector(-z) {
        return Ok(None);
    }
    Ok(Some(strip_index(phase_a_g(z)?)))
}

/// `∂|Γ|/∂x` from the partial-fraction expansion of `ψ`, `N` terms plus an
/// integral tail.
pub fn dmod_dx(x: f64, y: f64, n_terms: usize) -> Result<f64> {
    let modulus = gamma(c(x, y))?.norm();
    let mut sum = -EULER_GAMMA - x / (x * x + y * y);
    for n in 1..=n_terms.max(1) {
        let u = n as f64 + x;
        sum += 1.0 / n as f64 - u / (u * u + y * y);
    }
    let m = n_terms.max(1) as f64 + 0.5;
    sum += 0.5 * (((m + x).powi(2) + y * y) / (m * m)).ln();
    Ok(modulus * sum)
}

/// `∂|Γ|/∂y`, same expansion.
pub fn dmod_dy(x: f64, y: f64, n_terms: usize) -> Result<f64> {
    let modulus = gamma(c(x, y))?.norm();
    let mut sum = -y / (x * x + y * y);
    for n in 1..=n_terms.max(1) {
        let u = n as f64 + x;
        sum -= y / (u * u + y * y);
    }
    if y != 0.0 {
        let m = n_terms.max(1) as f64 + 0.5;
        sum -= y.signum() * PI / 2.0 - ((x + m) / y).atan();
    }
    Ok(modulus * sum)
}

/// `g(z) = Γ(z)(1 − e^{2πiz})`.
pub fn g_tilde(z: Complex64) -> Result<Complex64> {
    if on_cut(z) {
        return Err(Error::Domain(format!("{z} lies on the cut (-inf, 0]")));
    }
    let factor = c(1.0, 0.0) - (c(0.0, 2.0 * PI) * z).exp();
    if z.im == 0.0 && z.re.fract() == 0.0 {
        return Ok(c(0.0, 0.0));
    }
    Ok(gamma(z)? * factor)
}

/// `|(x−½) arccot(x/|y|) + |y|(log|z| − 1)| − B` with `arccot ∈ (0, π)`.
pub fn a_lower_bound(z: Complex64, bound: f64) -> Result<f64> {
    if z.im == 0.0 {
        return Err(Error::Domain("lower bound needs Im z != 0".into()));
    }
    let (x, y) = (z.re, z.im.abs());
    let arccot = PI / 2.0 - (x / y).atan();
    Ok(((x - 0.5) * arccot + y * (z.norm().ln() - 1.0)).abs() - bound)
}
