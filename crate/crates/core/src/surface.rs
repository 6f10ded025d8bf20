//! Points, charts and sector predicates on the Riemann surface of the logarithm.
//!
//! A point of the surface is a `(modulus, argument)` pair with the argument
//! kept unreduced, so distinct sheets stay distinct. The extra point `0` is
//! stored as `(0, 0)`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of the surface (including its origin).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogPoint {
    #[serde(rename = "mod")]
    modulus: f64,
    #[serde(rename = "arg")]
    argument: f64,
}

impl LogPoint {
    pub const ZERO: LogPoint = LogPoint { modulus: 0.0, argument: 0.0 };

    /// Builds a point; a zero modulus always yields the origin `(0, 0)`.
    pub fn new(modulus: f64, argument: f64) -> Result<Self> {
        if !(modulus >= 0.0) || !modulus.is_finite() || !argument.is_finite() {
            return Err(Error::Domain(format!("invalid surface point (modulus {modulus}, argument {argument})")));
        }
        if modulus == 0.0 {
            return Ok(Self::ZERO);
        }
        Ok(Self { modulus, argument })
    }

    pub fn modulus(&self) -> f64 {
        self.modulus
    }

    pub fn argument(&self) -> f64 {
        self.argument
    }

    pub fn is_zero(&self) -> bool {
        self.modulus == 0.0
    }

    /// Same modulus, negated argument.
    pub fn conj(&self) -> Self {
        Self { modulus: self.modulus, argument: -self.argument }
    }

    /// Product on the surface: moduli multiply, arguments add.
    pub fn mul(&self, other: &LogPoint) -> LogPoint {
        if self.is_zero() || other.is_zero() {
            return Self::ZERO;
        }
        Self { modulus: self.modulus * other.modulus, argument: self.argument + other.argument }
    }
}

// Serialized form must satisfy the origin invariant too.
impl TryFrom<(f64, f64)> for LogPoint {
    type Error = Error;
    fn try_from((m, a): (f64, f64)) -> Result<Self> {
        LogPoint::new(m, a)
    }
}

/// A point of the `m`-fold product of the surface.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LogVector(Vec<LogPoint>);

impl LogVector {
    pub fn new(components: Vec<LogPoint>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Parameter("a surface vector needs at least one component".into()));
        }
        Ok(Self(components))
    }

    pub fn components(&self) -> &[LogPoint] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn conj(&self) -> Self {
        Self(self.0.iter().map(LogPoint::conj).collect())
    }

    /// Coordinatewise product.
    pub fn mul(&self, other: &LogVector) -> Result<LogVector> {
        check_dim(self.len(), other.len())?;
        Ok(Self(self.0.iter().zip(&other.0).map(|(a, b)| a.mul(b)).collect()))
    }

    /// `max |z_i|`.
    pub fn sup_modulus(&self) -> f64 {
        self.0.iter().map(|p| p.modulus).fold(0.0, f64::max)
    }

    /// `k · |arg z|`.
    pub fn weighted_abs_arg(&self, k: &[f64]) -> f64 {
        self.0.iter().zip(k).map(|(p, ki)| ki * p.argument.abs()).sum()
    }
}

fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

/// The covering map `(r, θ) ↦ r e^{iθ}`.
pub fn project_pi(z: &LogPoint) -> Complex64 {
    if z.is_zero() {
        return Complex64::new(0.0, 0.0);
    }
    Complex64::from_polar(z.modulus, z.argument)
}

/// Inverse of the covering map restricted to the principal sheet `|arg| < π`.
pub fn lift_pi0(w: Complex64) -> Result<LogPoint> {
    if w.im == 0.0 && w.re <= 0.0 {
        return Err(Error::Domain(format!("{w} lies on the cut (-inf, 0]")));
    }
    LogPoint::new(w.norm(), w.im.atan2(w.re))
}

/// The chart `(r, θ) ↦ -log r + iθ`.
pub fn chart_l(z: &LogPoint) -> Result<Complex64> {
    if z.is_zero() {
        return Err(Error::Domain("chart L is undefined at the origin".into()));
    }
    Ok(Complex64::new(-z.modulus.ln(), z.argument))
}

/// Inverse chart `w ↦ (e^{-Re w}, Im w)`.
pub fn chart_e(w: Complex64) -> LogPoint {
    LogPoint { modulus: (-w.re).exp(), argument: w.im }
}

/// `z^k = (Π|z_i|^{k_i}, Σ k_i arg z_i)`.
pub fn log_power(z: &LogVector, k: &[f64]) -> Result<LogPoint> {
    check_dim(z.len(), k.len())?;
    if let Some(bad) = k.iter().find(|ki| !(**ki >= 0.0)) {
        return Err(Error::Parameter(format!("weight {bad} is negative")));
    }
    let mut modulus = 1.0;
    let mut argument = 0.0;
    for (p, &ki) in z.components().iter().zip(k) {
        if p.is_zero() {
            if ki == 0.0 {
                return Err(Error::Domain("0^0 in a surface power".into()));
            }
            return Ok(LogPoint::ZERO);
        }
        if ki != 0.0 {
            modulus *= p.modulus.powf(ki);
            argument += ki * p.argument;
        }
    }
    LogPoint::new(modulus, argument)
}

/// `z E(iw)`: component `j` gets modulus `|z_j| e^{-Im w_j}` and argument
/// `arg z_j + Re w_j`.
pub fn rotate_scale(z: &LogVector, w: &[Complex64]) -> Result<LogVector> {
    check_dim(z.len(), w.len())?;
    let comps = z
        .components()
        .iter()
        .zip(w)
        .map(|(p, wj)| {
            if p.is_zero() {
                LogPoint::ZERO
            } else {
                LogPoint { modulus: p.modulus * (-wj.im).exp(), argument: p.argument + wj.re }
            }
        })
        .collect();
    Ok(LogVector(comps))
}

/// Generalized sector data `(K, R, φ, r, p)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectorSpec {
    weights: Vec<Vec<f64>>,
    radius: Vec<f64>,
    phi: f64,
    r: f64,
    p: u32,
}

impl SectorSpec {
    pub fn new(weights: Vec<Vec<f64>>, radius: Vec<f64>, phi: f64, r: f64, p: u32) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Parameter("K must be nonempty".into()));
        }
        let m = radius.len();
        if m == 0 {
            return Err(Error::Parameter("polyradius must be nonempty".into()));
        }
        for k in &weights {
            check_dim(m, k.len())?;
            if k.iter().any(|ki| !(*ki >= 0.0) || !ki.is_finite()) {
                return Err(Error::Parameter(format!("weight vector {k:?} must be in [0, inf)^m")));
            }
        }
        if radius.iter().any(|ri| !(*ri > 0.0) || !ri.is_finite()) {
            return Err(Error::Parameter(format!("polyradius {radius:?} must be positive")));
        }
        if !(phi > 0.0 && phi < PI) {
            return Err(Error::Parameter(format!("aperture {phi} must be in (0, pi)")));
        }
        if !(r > 1.0) {
            return Err(Error::Parameter(format!("series weight r = {r} must exceed 1")));
        }
        Ok(Self { weights, radius, phi, r, p })
    }

    pub fn weights(&self) -> &[Vec<f64>] {
        &self.weights
    }
    pub fn radius(&self) -> &[f64] {
        &self.radius
    }
    pub fn phi(&self) -> f64 {
        self.phi
    }
    pub fn r(&self) -> f64 {
        self.r
    }
    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn dim(&self) -> usize {
        self.radius.len()
    }

    pub fn with_p(&self, p: u32) -> Self {
        Self { p, ..self.clone() }
    }

    /// `M = max_{k∈K} (k_1 + ... + k_m)`.
    pub fn max_weight_sum(&self) -> f64 {
        self.weights.iter().map(|k| k.iter().sum::<f64>()).fold(0.0, f64::max)
    }
}

/// Where a point sits relative to `S_p(τ) = ∩_k (S(k) ∪ D(k, p))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SectorClass {
    /// In the generalized sector `S(K, R, φ)`.
    InS,
    /// In the small polydisk `D(K, R, p)` but not in `S`.
    InDp,
    /// In `S_p(τ)` through the sector condition for some `k ∈ K` and the disk
    /// condition for the others (only possible when `|K| > 1`).
    Mixed,
    Outside,
}

impl SectorClass {
    pub fn in_sp(self) -> bool {
        !matches!(self, SectorClass::Outside)
    }
}

/// Classifies `z` against `S(τ)` and `S_p(τ)`. All inequalities are strict
/// and evaluated on the given floating values.
pub fn in_sector(z: &LogVector, spec: &SectorSpec) -> Result<SectorClass> {
    check_dim(spec.dim(), z.len())?;
    let in_disk = z.components().iter().zip(&spec.radius).all(|(p, r)| p.modulus < *r);
    if !in_disk {
        return Ok(SectorClass::Outside);
    }
    let threshold = 1.0 / (spec.p as f64 + 1.0);
    let mut all_sector = true;
    let mut all_disk = true;
    let mut all_either = true;
    for k in &spec.weights {
        let sector = z.weighted_abs_arg(k) < spec.phi;
        let zk = log_power(z, k)?.modulus;
        let rk: f64 = spec.radius.iter().zip(k).map(|(r, ki)| r.powf(*ki)).product();
        let disk = zk < rk * threshold;
        all_sector &= sector;
        all_disk &= disk;
        all_either &= sector || disk;
    }
    Ok(if all_sector {
        SectorClass::InS
    } else if all_disk {
        SectorClass::InDp
    } else if all_either {
        SectorClass::Mixed
    } else {
        SectorClass::Outside
    })
}

/// Classic polysector `{ |z_i| < R_i, |arg z_i| < ρ }`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassicSectorSpec {
    radius: Vec<f64>,
    rho: f64,
}

impl ClassicSectorSpec {
    pub fn new(radius: Vec<f64>, rho: f64) -> Result<Self> {
        if radius.is_empty() || radius.iter().any(|r| !(*r > 0.0)) {
            return Err(Error::Parameter(format!("polyradius {radius:?} must be positive")));
        }
        if !(rho > 0.0) {
            return Err(Error::Parameter(format!("aperture {rho} must be positive")));
        }
        Ok(Self { radius, rho })
    }

    pub fn radius(&self) -> &[f64] {
        &self.radius
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn contains(&self, z: &LogVector) -> Result<bool> {
        check_dim(self.radius.len(), z.len())?;
        Ok(z.components().iter().zip(&self.radius).all(|(p, r)| p.modulus < *r && p.argument.abs() < self.rho))
    }
}

/// Auxiliary parameters for shrinking a sector: `σ = (K, R', r, ε)`,
/// `τ' = (K, ρ, r, μ)` and `τ'' = (K, R', r, μ)` with `R' = R e^{-ν}`.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivedSpecs {
    pub max_weight_sum: f64,
    pub mu: f64,
    pub nu: f64,
    pub delta: f64,
    pub epsilon: f64,
    pub sigma: SectorSpec,
    pub tau_prime: SectorSpec,
    pub tau_double_prime: SectorSpec,
}

pub fn derive_inner_specs(tau: &SectorSpec, mu: f64, nu: f64, rho: &[f64]) -> Result<DerivedSpecs> {
    if !(tau.phi > FRAC_PI_2) {
        return Err(Error::Parameter(format!("aperture {} must exceed pi/2", tau.phi)));
    }
    let m_sum = tau.max_weight_sum();
    if !(m_sum > 0.0) {
        return Err(Error::Parameter("M must be positive (some weight must be nonzero)".into()));
    }
    let cap = (tau.phi - FRAC_PI_2) / m_sum;
    if !(0.0 < mu && mu < nu && nu < cap) {
        return Err(Error::Parameter(format!("need 0 < mu < nu < (phi - pi/2)/M = {cap}, got mu = {mu}, nu = {nu}")));
    }
    check_dim(tau.dim(), rho.len())?;
    if rho.iter().zip(&tau.radius).any(|(a, b)| !(*a > 0.0 && a < b)) {
        return Err(Error::Parameter(format!("need 0 < rho < R, got rho = {rho:?}")));
    }
    let delta = tau.phi - m_sum * mu;
    let epsilon = tau.phi - m_sum * nu;
    if !(FRAC_PI_2 < epsilon && epsilon < delta && delta < tau.phi) {
        return Err(Error::Parameter(format!(
            "ordering pi/2 < epsilon < delta < phi violated (epsilon {epsilon}, delta {delta})"
        )));
    }
    let shrunk: Vec<f64> = tau.radius.iter().map(|r| r / nu.exp()).collect();
    let sigma = SectorSpec::new(tau.weights.clone(), shrunk.clone(), epsilon, tau.r, tau.p)?;
    let tau_prime = SectorSpec::new(tau.weights.clone(), rho.to_vec(), mu, tau.r, tau.p)?;
    let tau_double_prime = SectorSpec::new(tau.weights.clone(), shrunk, mu, tau.r, tau.p)?;
    Ok(DerivedSpecs { max_weight_sum: m_sum, mu, nu, delta, epsilon, sigma, tau_prime, tau_double_prime })
}

/// Real and imaginary symmetrizations of a function `f` on the surface:
/// with `g(z, w) = f(z E(iw))` and `ĝ(z, w) = conj f(z̄ E(-i w̄))`,
/// returns `((g(z,w) + ĝ(z,-w))/2, (g(z,w) - ĝ(z,-w))/(2i))`.
///
/// On real arguments (`arg z = 0`, `w` real) these are `Re f(zE(iw))` and
/// `Im f(zE(iw))`.
pub fn symmetrize<F>(f: F, z: &LogVector, w: &[Complex64]) -> Result<(Complex64, Complex64)>
where
    F: Fn(&LogVector) -> Result<Complex64>,
{
    let g = f(&rotate_scale(z, w)?)?;
    // ĝ(z, -w) = conj f(z̄ E(i w̄))
    let wbar: Vec<Complex64> = w.iter().map(|c| c.conj()).collect();
    let ghat = f(&rotate_scale(&z.conj(), &wbar)?)?.conj();
    let re = (g + ghat) * 0.5;
    let im = (g - ghat) / Complex64::new(0.0, 2.0);
    Ok((re, im))
}
