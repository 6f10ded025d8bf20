//! Mixed generalized power series `Σ a_{α,β} X^α Y^β` with real exponents
//! `α ≥ 0` in the generalized indeterminates `X` and natural exponents `β` in
//! the standard indeterminates `Y`.
//!
//! Infinite supports are represented by a finite list of terms plus an
//! optional certified bound on the omitted mass `Σ |a| r^α s^β`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::surface::LogPoint;

/// Bound on the omitted tail as a function of the polyradius `(r, s)`.
pub type TailFn = Arc<dyn Fn(&[f64], &[f64]) -> f64 + Send + Sync>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub alpha: Vec<f64>,
    pub beta: Vec<u32>,
    pub coeff: Complex64,
}

#[derive(Clone)]
pub struct MixedSeries {
    m: usize,
    n: usize,
    terms: Vec<Term>,
    tail: Option<TailFn>,
}

impl fmt::Debug for MixedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MixedSeries")
            .field("m", &self.m)
            .field("n", &self.n)
            .field("terms", &self.terms)
            .field("tail", &self.tail.as_ref().map(|_| "<fn>"))
            .finish()
    }
}

type ExponentKey = (Vec<u64>, Vec<u32>);

fn key_of(alpha: &[f64], beta: &[u32]) -> ExponentKey {
    // +0.0 and -0.0 must collide
    (alpha.iter().map(|a| (a + 0.0).to_bits()).collect(), beta.to_vec())
}

impl MixedSeries {
    /// Builds a series, summing coefficients of identical exponent pairs and
    /// dropping zero coefficients.
    pub fn new(m: usize, n: usize, terms: Vec<Term>) -> Result<Self> {
        let mut index: HashMap<ExponentKey, usize> = HashMap::new();
        let mut merged: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            if t.alpha.len() != m {
                return Err(Error::DimensionMismatch { expected: m, got: t.alpha.len() });
            }
            if t.beta.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: t.beta.len() });
            }
            if t.alpha.iter().any(|a| !(*a >= 0.0) || !a.is_finite()) {
                return Err(Error::Parameter(format!("exponent {:?} must be >= 0", t.alpha)));
            }
            if !t.coeff.re.is_finite() || !t.coeff.im.is_finite() {
                return Err(Error::Parameter(format!("coefficient {} is not finite", t.coeff)));
            }
            let key = key_of(&t.alpha, &t.beta);
            match index.get(&key) {
                Some(&i) => merged[i].coeff += t.coeff,
                None => {
                    index.insert(key, merged.len());
                    merged.push(t);
                }
            }
        }
        merged.retain(|t| t.coeff != Complex64::new(0.0, 0.0));
        Ok(Self { m, n, terms: merged, tail: None })
    }

    /// Univariate series `Σ c_i X^{α_i}` with real coefficients.
    pub fn univariate(terms: &[(f64, f64)]) -> Result<Self> {
        Self::new(
            1,
            0,
            terms
                .iter()
                .map(|&(alpha, c)| Term { alpha: vec![alpha], beta: vec![], coeff: Complex64::new(c, 0.0) })
                .collect(),
        )
    }

    pub fn zero(m: usize, n: usize) -> Self {
        Self { m, n, terms: Vec::new(), tail: None }
    }

    pub fn with_tail(mut self, tail: TailFn) -> Self {
        self.tail = Some(tail);
        self
    }

    pub fn m(&self) -> usize {
        self.m
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn terms(&self) -> &[Term] {
        &self.terms
    }
    pub fn tail(&self) -> Option<&TailFn> {
        self.tail.as_ref()
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.tail.is_none()
    }

    pub fn has_real_coefficients(&self) -> bool {
        self.terms.iter().all(|t| t.coeff.im == 0.0)
    }

    /// Coefficient of the constant term `X^0 Y^0`.
    pub fn constant_term(&self) -> Complex64 {
        self.terms
            .iter()
            .find(|t| t.alpha.iter().all(|a| *a == 0.0) && t.beta.iter().all(|b| *b == 0))
            .map(|t| t.coeff)
            .unwrap_or_default()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: SeriesJson = serde_json::from_str(text)?;
        raw.try_into()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&SeriesJson::from(self))?)
    }

    fn check_args(&self, x: &[LogPoint], y: &[Complex64]) -> Result<()> {
        if x.len() != self.m {
            return Err(Error::DimensionMismatch { expected: self.m, got: x.len() });
        }
        if y.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: y.len() });
        }
        Ok(())
    }
}

/// Wire format `{"m":..,"n":..,"terms":[{"alpha":[..],"beta":[..],"re":..,"im":..}]}`.
#[derive(Debug, Serialize, Deserialize)]
pub struct SeriesJson {
    pub m: usize,
    pub n: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TermJson {
    pub alpha: Vec<f64>,
    #[serde(default)]
    pub beta: Vec<u32>,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

impl TryFrom<SeriesJson> for MixedSeries {
    type Error = Error;
    fn try_from(raw: SeriesJson) -> Result<Self> {
        let terms = raw
            .terms
            .into_iter()
            .map(|t| Term { alpha: t.alpha, beta: t.beta, coeff: Complex64::new(t.re, t.im) })
            .collect();
        MixedSeries::new(raw.m, raw.n, terms)
    }
}

impl From<&MixedSeries> for SeriesJson {
    fn from(s: &MixedSeries) -> Self {
        SeriesJson {
            m: s.m,
            n: s.n,
            terms: s
                .terms
                .iter()
                .map(|t| TermJson { alpha: t.alpha.clone(), beta: t.beta.clone(), re: t.coeff.re, im: t.coeff.im })
                .collect(),
        }
    }
}

/// Value of a series at a point, with the tail bound at `(|x|, |y|)` when the
/// series carries one.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Evaluation {
    pub value: Complex64,
    pub tail_bound: Option<f64>,
}

fn term_value(t: &Term, x: &[LogPoint], y: &[Complex64]) -> Complex64 {
    let mut modulus = 1.0;
    let mut phase = 0.0;
    for (a, p) in t.alpha.iter().zip(x) {
        if *a == 0.0 {
            continue;
        }
        if p.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        modulus *= p.modulus().powf(*a);
        phase += a * p.argument();
    }
    let mut v = t.coeff * Complex64::from_polar(modulus, phase);
    for (b, yj) in t.beta.iter().zip(y) {
        if *b > 0 {
            v *= yj.powu(*b);
        }
    }
    v
}

/// `F(x, y) = Σ a |x|^α e^{iα·arg x} y^β`.
pub fn eval_series(f: &MixedSeries, x: &[LogPoint], y: &[Complex64]) -> Result<Evaluation> {
    f.check_args(x, y)?;
    let value = f.terms.iter().map(|t| term_value(t, x, y)).sum();
    let tail_bound = f.tail.as_ref().map(|tail| {
        let r: Vec<f64> = x.iter().map(LogPoint::modulus).collect();
        let s: Vec<f64> = y.iter().map(|c| c.norm()).collect();
        tail(&r, &s)
    });
    Ok(Evaluation { value, tail_bound })
}

/// `‖F‖_{r,s} = Σ |a| r^α s^β`, plus the tail bound when present.
pub fn series_norm(f: &MixedSeries, r: &[f64], s: &[f64]) -> Result<f64> {
    if r.len() != f.m {
        return Err(Error::DimensionMismatch { expected: f.m, got: r.len() });
    }
    if s.len() != f.n {
        return Err(Error::DimensionMismatch { expected: f.n, got: s.len() });
    }
    let mut total = 0.0;
    for t in &f.terms {
        let mut w = t.coeff.norm();
        for (a, ri) in t.alpha.iter().zip(r) {
            if *a != 0.0 {
                w *= ri.powf(*a);
            }
        }
        for (b, si) in t.beta.iter().zip(s) {
            if *b != 0 {
                w *= si.powi(*b as i32);
            }
        }
        total += w;
    }
    if let Some(tail) = &f.tail {
        let tb = tail(r, s);
        if !(tb >= 0.0) || !tb.is_finite() {
            return Ok(f64::INFINITY);
        }
        total += tb;
    }
    Ok(total)
}

/// `sup { t > 0 : ‖G‖_t < 1 }` for a univariate series without constant
/// term, found by bisection (the norm is nondecreasing in `t`). Returns
/// `+∞` for the zero series and `0` if the norm is never below one.
pub fn unit_norm_radius(g: &MixedSeries) -> Result<f64> {
    if g.m != 1 || g.n != 0 {
        return Err(Error::Parameter("unit_norm_radius needs a series in one generalized variable".into()));
    }
    if g.constant_term() != Complex64::new(0.0, 0.0) {
        return Err(Error::Precondition("series has a nonzero constant term".into()));
    }
    if g.is_zero() {
        return Ok(f64::INFINITY);
    }
    let norm = |t: f64| series_norm(g, &[t], &[]).unwrap_or(f64::INFINITY);
    let mut lo;
    let mut hi = 1.0;
    if norm(hi) < 1.0 {
        lo = hi;
        loop {
            hi *= 2.0;
            if norm(hi) >= 1.0 {
                break;
            }
            lo = hi;
            if hi > 1e300 {
                return Ok(f64::INFINITY);
            }
        }
    } else {
        // shrink until the norm drops below one
        let mut t = 0.5;
        loop {
            if norm(t) < 1.0 {
                lo = t;
                hi = 2.0 * t;
                break;
            }
            t *= 0.5;
            if t < 1e-300 {
                return Ok(0.0);
            }
        }
    }
    while hi - lo > 1e-10 * hi {
        let mid = 0.5 * (lo + hi);
        if norm(mid) < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Real and imaginary parts of a series on real slices, as series in the
/// generalized `X` and standard `(U, Y, V)`.
#[derive(Clone, Debug)]
pub struct SplitPair {
    pub g: MixedSeries,
    pub h: MixedSeries,
    pub depth: u32,
    pub tail_bound: f64,
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * f64::from(n - j) / f64::from(j + 1))
}

fn i_pow(k: u32) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Replaces `e^{iα_j u_j}` by its Taylor polynomial of degree `depth` and
/// expands `(y + iv)^β`, then collects real and imaginary parts.
///
/// The returned `tail_bound` bounds `|Re F((x,u), y+iv) − G(x,u,y,v)|` (and
/// the same for `Im`/`H`) whenever `0 < x < r'`, `|u| < ρ` and
/// `|y|, |v| < s/2`.
pub fn split_real_imag(f: &MixedSeries, r_prime: &[f64], rho: &[f64], s: &[f64], depth: u32) -> Result<SplitPair> {
    let (m, n) = (f.m, f.n);
    for (len, want) in [(r_prime.len(), m), (rho.len(), m), (s.len(), n)] {
        if len != want {
            return Err(Error::DimensionMismatch { expected: want, got: len });
        }
    }
    if r_prime.iter().chain(rho).chain(s).any(|v| !(*v > 0.0)) {
        return Err(Error::Parameter("polyradii must be positive".into()));
    }
    let enlarged: Vec<f64> = r_prime.iter().zip(rho).map(|(r, p)| r * p.exp()).collect();
    let outer = series_norm(f, &enlarged, s)?;
    if !outer.is_finite() {
        return Err(Error::Convergence(format!("r' e^rho = {enlarged:?} is outside the convergence polyradius")));
    }

    let mut acc: HashMap<ExponentKey, (Vec<f64>, Vec<u32>, Complex64)> = HashMap::new();
    let mut order: Vec<ExponentKey> = Vec::new();
    let mut trunc = 0.0;
    let rem_factor = 1.0 / factorial(depth + 1);

    for t in &f.terms {
        // Expansion factors per generalized variable: (power of U_j, coefficient).
        let gen_factors: Vec<Vec<(u32, Complex64)>> = t
            .alpha
            .iter()
            .map(|&a| {
                (0..=depth)
                    .filter(|&k| k == 0 || a != 0.0)
                    .map(|k| (k, i_pow(k) * a.powi(k as i32) / factorial(k)))
                    .collect()
            })
            .collect();
        // Per standard variable: (power of Y_j, power of V_j, coefficient).
        let std_factors: Vec<Vec<(u32, u32, Complex64)>> =
            t.beta.iter().map(|&b| (0..=b).map(|l| (b - l, l, i_pow(l) * binomial(b, l))).collect()).collect();

        let mut partial: Vec<(Vec<u32>, Complex64)> = vec![(Vec::new(), t.coeff)];
        for factors in &gen_factors {
            partial = partial
                .into_iter()
                .flat_map(|(pows, c)| {
                    factors.iter().map(move |(k, fc)| {
                        let mut p = pows.clone();
                        p.push(*k);
                        (p, c * fc)
                    })
                })
                .collect();
        }
        let mut full: Vec<(Vec<u32>, Vec<u32>, Complex64)> =
            partial.into_iter().map(|(u, c)| (u, Vec::new(), c)).collect();
        for factors in &std_factors {
            full = full
                .into_iter()
                .flat_map(|(u, yv, c)| {
                    factors.iter().map(move |(py, pv, fc)| {
                        let mut q = yv.clone();
                        q.push(*py);
                        q.push(*pv);
                        (u.clone(), q, c * fc)
                    })
                })
                .collect();
        }
        for (u, yv, c) in full {
            let mut beta = u;
            beta.extend(yv.iter().step_by(2));
            beta.extend(yv.iter().skip(1).step_by(2));
            let key = key_of(&t.alpha, &beta);
            match acc.get_mut(&key) {
                Some(entry) => entry.2 += c,
                None => {
                    order.push(key.clone());
                    acc.insert(key, (t.alpha.clone(), beta, c));
                }
            }
        }

        // |Π e^{iθ_j} − Π T_D(iθ_j)| ≤ Σ_j |θ_j|^{D+1}/(D+1)! · e^{Σ|θ_i|}
        let theta: Vec<f64> = t.alpha.iter().zip(rho).map(|(a, p)| a * p).collect();
        let rem: f64 = theta.iter().map(|th| th.powi(depth as i32 + 1) * rem_factor).sum();
        if rem > 0.0 {
            let mut w = t.coeff.norm() * rem * theta.iter().sum::<f64>().exp();
            for (a, r) in t.alpha.iter().zip(r_prime) {
                w *= r.powf(*a);
            }
            for (b, si) in t.beta.iter().zip(s) {
                w *= si.powi(*b as i32);
            }
            trunc += w;
        }
    }
    if let Some(tail) = &f.tail {
        trunc += tail(r_prime, s);
    }

    let mut g_terms = Vec::new();
    let mut h_terms = Vec::new();
    for key in order {
        let (alpha, beta, c) = acc.remove(&key).expect("key recorded on insert");
        if c.re != 0.0 {
            g_terms.push(Term { alpha: alpha.clone(), beta: beta.clone(), coeff: Complex64::new(c.re, 0.0) });
        }
        if c.im != 0.0 {
            h_terms.push(Term { alpha, beta, coeff: Complex64::new(c.im, 0.0) });
        }
    }
    let n_std = m + 2 * n;
    Ok(SplitPair {
        g: MixedSeries::new(m, n_std, g_terms)?,
        h: MixedSeries::new(m, n_std, h_terms)?,
        depth,
        tail_bound: trunc,
    })
}

/// Certified bound `Σ_{k>N} k^{-s} ≤ ∫_{N+1/2}^∞ x^{-s} dx` (convexity of `x^{-s}`).
pub fn dirichlet_tail_bound(n_terms: u64, s: f64) -> f64 {
    if !(s > 1.0) {
        return f64::INFINITY;
    }
    (n_terms as f64 + 0.5).powf(1.0 - s) / (s - 1.0)
}

/// Truncation of `F^ζ(X) = Σ_{n≥1} X^{log n}` to its first `N` terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ZetaSeries {
    n_terms: u64,
}

impl ZetaSeries {
    pub fn new(n_terms: u64) -> Result<Self> {
        if n_terms < 2 {
            return Err(Error::Parameter("zeta series needs at least two terms".into()));
        }
        Ok(Self { n_terms })
    }

    /// Smallest `N` with `∫_N^∞ x^{-σ} dx < tol`.
    pub fn for_tolerance(sigma: f64, tol: f64) -> Result<Self> {
        if !(sigma > 1.0) {
            return Err(Error::Domain(format!("Re w = {sigma} must exceed 1")));
        }
        if !(tol > 0.0) {
            return Err(Error::Parameter("tolerance must be positive".into()));
        }
        let n = (tol * (sigma - 1.0)).powf(1.0 / (1.0 - sigma));
        if !n.is_finite() || n > 5e9 {
            return Err(Error::Convergence(format!("tolerance {tol:e} needs too many terms ({n:e})")));
        }
        Self::new((n.floor() as u64 + 1).max(2))
    }

    pub fn n_terms(&self) -> u64 {
        self.n_terms
    }

    /// Bound on `Σ_{n>N} t^{log n}` at modulus `t`.
    pub fn tail_bound(&self, modulus: f64) -> f64 {
        if modulus <= 0.0 {
            return 0.0;
        }
        dirichlet_tail_bound(self.n_terms, -modulus.ln())
    }

    fn build(&self, first: u64) -> MixedSeries {
        let terms = (first..=self.n_terms)
            .map(|k| Term { alpha: vec![(k as f64).ln()], beta: vec![], coeff: Complex64::new(1.0, 0.0) })
            .collect();
        let me = *self;
        MixedSeries::new(1, 0, terms)
            .expect("zeta exponents are distinct and nonnegative")
            .with_tail(Arc::new(move |r: &[f64], _s: &[f64]| me.tail_bound(r[0])))
    }

    /// `F^ζ` as a materialized series (terms `n = 1..N`).
    pub fn series(&self) -> MixedSeries {
        self.build(1)
    }

    /// `G^ζ = F^ζ − 1` (terms `n = 2..N`).
    pub fn g_series(&self) -> MixedSeries {
        self.build(2)
    }

    /// Evaluates the truncated series at a surface point without materializing
    /// the terms; summation runs from the smallest term up with Neumaier
    /// compensation.
    pub fn eval(&self, x: &LogPoint) -> Evaluation {
        if x.is_zero() {
            return Evaluation { value: Complex64::new(1.0, 0.0), tail_bound: Some(0.0) };
        }
        let log_mod = x.modulus().ln();
        let arg = x.argument();
        let mut re = Neumaier::default();
        let mut im = Neumaier::default();
        for k in (1..=self.n_terms).rev() {
            let lk = (k as f64).ln();
            let m = (lk * log_mod).exp();
            if arg == 0.0 {
                re.add(m);
            } else {
                let (s, c) = (lk * arg).sin_cos();
                re.add(m * c);
                im.add(m * s);
            }
        }
        Evaluation { value: Complex64::new(re.total(), im.total()), tail_bound: Some(self.tail_bound(x.modulus())) }
    }
}

#[derive(Default)]
struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

/// ζ(w) for `Re w > 1` through the generalized series `f^ζ` evaluated at the
/// surface point `(e^{-Re w}, -Im w)`, truncated where the integral tail is
/// below `tol`.
pub fn zeta_eval(w: Complex64, tol: f64) -> Result<Complex64> {
    if !(w.re > 1.0) {
        return Err(Error::Domain(format!("zeta series needs Re w > 1, got {w}")));
    }
    let series = ZetaSeries::for_tolerance(w.re, tol)?;
    let point = LogPoint::new((-w.re).exp(), -w.im)?;
    Ok(series.eval(&point).value)
}

/// ζ(s) on `ℂ \ {1}` by Euler–Maclaurin summation with `N` explicit terms
/// and `K` Bernoulli corrections. Used for plotting over the whole plane.
pub fn zeta_continued(s: Complex64) -> Result<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    if s == one {
        return Err(Error::Pole("1".into()));
    }
    const N: u32 = 24;
    const K: usize = 24;
    let table = crate::stirling::BernoulliTable::shared();
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 1..N {
        acc += Complex64::new(f64::from(k), 0.0).powc(-s);
    }
    let nf = Complex64::new(f64::from(N), 0.0);
    let n_pow = nf.powc(-s);
    acc += n_pow * nf / (s - one) + n_pow * 0.5;
    // Σ B_{2k}/(2k)! · s(s+1)...(s+2k-2) · N^{-s-2k+1}
    let mut rising = s;
    let mut npow = n_pow / nf;
    let mut fact = 2.0;
    for k in 1..=K {
        acc += rising * npow * (table.b2k(k) / fact);
        let kk = 2 * k as u32;
        rising *= (s + f64::from(kk - 1)) * (s + f64::from(kk));
        npow /= nf * nf;
        fact *= f64::from(kk + 1) * f64::from(kk + 2);
    }
    Ok(acc)
}

/// Outcome of [`crossing_probe`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CrossingReport {
    /// Leading exponent `α₀` of `F − F(0)`.
    pub alpha0: f64,
    /// `‖G‖` at the probed modulus, where `F − F(0) = a X^{α₀} (1 + G)`.
    pub g_norm: f64,
    /// Number of connected components of `{Im δ = 0}` found on the grid.
    pub crossings: usize,
}

/// Splits `F − F(0) = a_{α₀} X^{α₀}(1 + G)` and returns `(α₀, a_{α₀}, G)`.
pub fn leading_factorization(f: &MixedSeries) -> Result<(f64, Complex64, MixedSeries)> {
    if f.m != 1 || f.n != 0 {
        return Err(Error::Parameter("needs a series in one generalized variable".into()));
    }
    let lead = f
        .terms
        .iter()
        .filter(|t| t.alpha[0] > 0.0)
        .min_by(|a, b| a.alpha[0].total_cmp(&b.alpha[0]))
        .ok_or_else(|| Error::Precondition("series is constant".into()))?;
    let alpha0 = lead.alpha[0];
    let a0 = lead.coeff;
    let g_terms = f
        .terms
        .iter()
        .filter(|t| t.alpha[0] > alpha0)
        .map(|t| Term { alpha: vec![t.alpha[0] - alpha0], beta: vec![], coeff: t.coeff / a0 })
        .collect();
    let mut g = MixedSeries::new(1, 0, g_terms)?;
    if let Some(tail) = f.tail.clone() {
        let scale = a0.norm();
        g = g.with_tail(Arc::new(move |r: &[f64], s: &[f64]| tail(r, s) / (scale * r[0].powf(alpha0))));
    }
    Ok((alpha0, a0, g))
}

/// Counts real-axis crossings of
/// `δ(t) = (F(γ(t)) − F(0)) / (a_{α₀}|γ(t)|^{α₀})` along `γ(t) = (modulus, t)`,
/// sampled at `t_i = arg_max · i / samples`, `i = 1..=samples`.
///
/// Exact (numerical) zeros count once per run; sign flips between nonzero
/// neighbours count once each.
pub fn crossing_probe(f: &MixedSeries, modulus: f64, arg_max: f64, samples: usize) -> Result<CrossingReport> {
    if !(modulus > 0.0) || !(arg_max > 0.0) || samples == 0 {
        return Err(Error::Parameter("modulus, arg_max and samples must be positive".into()));
    }
    let (alpha0, a0, g) = leading_factorization(f)?;
    let g_norm = series_norm(&g, &[modulus], &[])?;
    if !(g_norm < 1.0) {
        return Err(Error::Precondition(format!("|G| may reach 1 on the circle of modulus {modulus} (norm {g_norm})")));
    }
    let f0 = f.constant_term();
    let scale = a0 * modulus.powf(alpha0);
    let mut crossings = 0;
    let mut prev: i8 = 0;
    let mut started = false;
    for i in 1..=samples {
        let t = arg_max * i as f64 / samples as f64;
        let p = LogPoint::new(modulus, t)?;
        let delta = (eval_series(f, &[p], &[])?.value - f0) / scale;
        let sign = if delta.im.abs() <= 1e-9 * delta.norm() {
            0
        } else if delta.im > 0.0 {
            1
        } else {
            -1
        };
        if started {
            if prev != 0 && (sign == 0 || sign != prev) {
                crossings += 1;
            }
        } else if sign == 0 {
            crossings += 1;
        }
        started = true;
        prev = sign;
    }
    Ok(CrossingReport { alpha0, g_norm, crossings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn lp(m: f64, a: f64) -> LogPoint {
        LogPoint::new(m, a).unwrap()
    }

    #[test]
    fn eval_examples() {
        let f = MixedSeries::univariate(&[(0.5, 1.0)]).unwrap();
        let v = eval_series(&f, &[lp(4.0, 2.0 * PI)], &[]).unwrap().value;
        assert!((v - Complex64::new(-2.0, 0.0)).norm() < 1e-14);

        let f = MixedSeries::new(
            1,
            1,
            vec![
                Term { alpha: vec![0.0], beta: vec![0], coeff: Complex64::new(1.0, 0.0) },
                Term { alpha: vec![1.0], beta: vec![1], coeff: Complex64::new(1.0, 0.0) },
            ],
        )
        .unwrap();
        let v = eval_series(&f, &[lp(0.5, 0.0)], &[Complex64::new(2.0, 0.0)]).unwrap().value;
        assert!((v - Complex64::new(2.0, 0.0)).norm() < 1e-15);

        let f = MixedSeries::univariate(&[(0.5, 1.0), (1.5, 0.1)]).unwrap();
        for t in [0.3, 5.0, 40.0] {
            let v = eval_series(&f, &[lp(1.0, t)], &[]).unwrap().value;
            let expect =
                Complex64::from_polar(1.0, t / 2.0) * (Complex64::new(1.0, 0.0) + Complex64::from_polar(0.1, t));
            assert!((v - expect).norm() < 1e-13);
        }
    }

    #[test]
    fn dimension_errors() {
        let f = MixedSeries::univariate(&[(1.0, 1.0)]).unwrap();
        assert!(matches!(eval_series(&f, &[], &[]), Err(Error::DimensionMismatch { .. })));
        assert!(eval_series(&f, &[lp(1.0, 0.0)], &[Complex64::new(0.0, 0.0)]).is_err());
    }

    #[test]
    fn construction_merges_and_drops() {
        let f = MixedSeries::univariate(&[(1.0, 2.0), (1.0, -2.0), (2.0, 1.0)]).unwrap();
        assert_eq!(f.terms().len(), 1);
        assert!(MixedSeries::univariate(&[(-1.0, 1.0)]).is_err());
    }

    #[test]
    fn norm_examples() {
        let f = MixedSeries::univariate(&[(2.0, 3.0)]).unwrap();
        assert!((series_norm(&f, &[0.5], &[]).unwrap() - 0.75).abs() < 1e-15);
        assert_eq!(series_norm(&MixedSeries::zero(1, 0), &[0.5], &[]).unwrap(), 0.0);
    }

    #[test]
    fn unit_radius_examples() {
        let g = MixedSeries::univariate(&[(1.0, 2.0)]).unwrap();
        assert!((unit_norm_radius(&g).unwrap() - 0.5).abs() < 1e-10);
        let g = MixedSeries::univariate(&[(1.5, 0.1)]).unwrap();
        let expect = 10f64.powf(2.0 / 3.0);
        assert!((unit_norm_radius(&g).unwrap() - expect).abs() < 1e-9 * expect);
        assert_eq!(unit_norm_radius(&MixedSeries::zero(1, 0)).unwrap(), f64::INFINITY);
        let with_const = MixedSeries::univariate(&[(0.0, 1.0), (1.0, 1.0)]).unwrap();
        assert!(matches!(unit_norm_radius(&with_const), Err(Error::Precondition(_))));
    }

    #[test]
    fn split_of_x() {
        let f = MixedSeries::univariate(&[(1.0, 1.0)]).unwrap();
        let sp = split_real_imag(&f, &[0.5], &[0.3], &[], 3).unwrap();
        // G = X(1 - U^2/2), H = X(U - U^3/6)
        let g: HashMap<u32, f64> = sp.g.terms().iter().map(|t| (t.beta[0], t.coeff.re)).collect();
        let h: HashMap<u32, f64> = sp.h.terms().iter().map(|t| (t.beta[0], t.coeff.re)).collect();
        assert_eq!(g.len(), 2);
        assert_eq!(g[&0], 1.0);
        assert_eq!(g[&2], -0.5);
        assert_eq!(h.len(), 2);
        assert_eq!(h[&1], 1.0);
        assert!((h[&3] + 1.0 / 6.0).abs() < 1e-16);
        let expect = 0.5 * 0.3f64.powi(4) / 24.0 * 0.3f64.exp();
        assert!((sp.tail_bound - expect).abs() < 1e-16);
    }

    #[test]
    fn split_of_standard_variable_is_exact() {
        let f = MixedSeries::new(0, 1, vec![Term { alpha: vec![], beta: vec![1], coeff: Complex64::new(1.0, 0.0) }])
            .unwrap();
        let sp = split_real_imag(&f, &[], &[], &[1.0], 4).unwrap();
        assert_eq!(sp.tail_bound, 0.0);
        assert_eq!(sp.g.terms(), &[Term { alpha: vec![], beta: vec![1, 0], coeff: Complex64::new(1.0, 0.0) }]);
        assert_eq!(sp.h.terms(), &[Term { alpha: vec![], beta: vec![0, 1], coeff: Complex64::new(1.0, 0.0) }]);
    }

    #[test]
    fn split_rejects_divergent_radius() {
        let z = ZetaSeries::new(10).unwrap().series();
        // r' e^rho beyond 1/e: tail bound infinite
        assert!(matches!(split_real_imag(&z, &[0.5], &[0.1], &[], 3), Err(Error::Convergence(_))));
    }

    #[test]
    fn zeta_series_streaming_matches_materialized() {
        let z = ZetaSeries::new(200).unwrap();
        let p = lp((-2.5f64).exp(), -3.0);
        let a = z.eval(&p).value;
        let b = eval_series(&z.series(), &[p], &[]).unwrap().value;
        assert!((a - b).norm() < 1e-13);
    }

    #[test]
    fn zeta_domain() {
        assert!(matches!(zeta_eval(Complex64::new(1.0, 3.0), 1e-6), Err(Error::Domain(_))));
        assert!(matches!(zeta_eval(Complex64::new(0.5, 0.0), 1e-6), Err(Error::Domain(_))));
    }

    #[test]
    fn zeta_symmetric_on_real_axis() {
        let a = zeta_eval(Complex64::new(2.0, 0.0), 1e-6).unwrap();
        let b = zeta_eval(Complex64::new(2.0, -0.0), 1e-6).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.im, 0.0);
    }

    #[test]
    fn zeta_continuation_matches_series() {
        for w in [Complex64::new(2.0, 0.0), Complex64::new(3.0, 4.0), Complex64::new(2.5, -10.0)] {
            let a = zeta_eval(w, 1e-7).unwrap();
            let b = zeta_continued(w).unwrap();
            assert!((a - b).norm() < 2e-7, "{w}: {a} vs {b}");
        }
        // ζ(0) = -1/2, ζ(-1) = -1/12, trivial zero at -2
        assert!((zeta_continued(Complex64::new(0.0, 0.0)).unwrap() + 0.5).norm() < 1e-12);
        assert!((zeta_continued(Complex64::new(-1.0, 0.0)).unwrap() + 1.0 / 12.0).norm() < 1e-12);
        let z2 = zeta_continued(Complex64::new(-2.0, 0.0)).unwrap();
        assert!(z2.norm() < 1e-11, "{z2}");
        // first nontrivial zero
        assert!(zeta_continued(Complex64::new(0.5, 14.134725141734693)).unwrap().norm() < 1e-9);
        assert!(zeta_continued(Complex64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn crossing_of_identity() {
        let f = MixedSeries::univariate(&[(1.0, 1.0)]).unwrap();
        for k in [3usize, 10, 100] {
            let arg_max = k as f64 * PI;
            let rep = crossing_probe(&f, 1.0, arg_max, 64 * k).unwrap();
            assert_eq!(rep.crossings, k);
            assert_eq!(rep.alpha0, 1.0);
        }
        let rep = crossing_probe(&f, 1.0, 10.5 * PI, 2000).unwrap();
        assert_eq!(rep.crossings, 10);
    }

    #[test]
    fn crossing_precondition() {
        let f = MixedSeries::univariate(&[(0.5, 1.0), (1.5, 2.0)]).unwrap();
        assert!(matches!(crossing_probe(&f, 1.0, 10.0, 100), Err(Error::Precondition(_))));
        let constant = MixedSeries::univariate(&[(0.0, 3.0)]).unwrap();
        assert!(crossing_probe(&constant, 0.1, 10.0, 100).is_err());
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"m":1,"n":1,"terms":[{"alpha":[0.5],"beta":[2],"re":1.5,"im":-0.25}]}"#;
        let f = MixedSeries::from_json(text).unwrap();
        assert_eq!(f.terms()[0].coeff, Complex64::new(1.5, -0.25));
        let back = MixedSeries::from_json(&f.to_json().unwrap()).unwrap();
        assert_eq!(back.terms(), f.terms());
        assert!(MixedSeries::from_json(r#"{"m":1,"n":0,"terms":[{"alpha":[1,2],"re":1}]}"#).is_err());
    }
}
