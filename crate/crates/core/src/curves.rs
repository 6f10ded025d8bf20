//! Continuation of the level curves `|Γ| = r`, `A = θ` and `A_g = θ`, each
//! parameterized by `x`.

use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gamma::{digamma, dmod_dx, dmod_dy, find_x0, gamma, phase_a, phase_a_g, DMOD_TERMS};
use crate::stirling::phi_prime;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum CurveKind {
    /// `|Γ(z)| = r`.
    ModLevel(f64),
    /// `A(z) = θ`.
    ArgLevel(f64),
    /// `A_g(z) = θ`, the phase level of `g`.
    GLevel(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Quadrant {
    UpperRight,
    UpperLeft,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurveSample {
    pub x: f64,
    pub y: f64,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelCurve {
    pub kind: CurveKind,
    pub quadrant: Quadrant,
    pub samples: Vec<CurveSample>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Window {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Window {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Result<Self> {
        if !(x_min < x_max && y_min < y_max) {
            return Err(Error::Parameter(format!("degenerate window [{x_min}, {x_max}] x [{y_min}, {y_max}]")));
        }
        Ok(Self { x_min, x_max, y_min, y_max })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceConfig {
    pub x_step: f64,
    pub newton_tol: f64,
    pub max_newton: usize,
    /// Initial step when searching for a sign change around the predictor.
    pub y_bracket: f64,
}

impl Default for TraceConfig {
    fn default() -> Self {
        Self { x_step: 0.05, newton_tol: 1e-10, max_newton: 60, y_bracket: 0.25 }
    }
}

impl TraceConfig {
    fn validate(&self) -> Result<()> {
        if !(self.x_step > 0.0 && self.newton_tol > 0.0 && self.max_newton > 0 && self.y_bracket > 0.0) {
            return Err(Error::Parameter(format!("trace configuration must be positive: {self:?}")));
        }
        Ok(())
    }
}

/// Level function `f(x + iy) − target` with its `x` and `y` partials.
fn level(kind: CurveKind, x: f64, y: f64) -> Result<(f64, f64, f64)> {
    let z = Complex64::new(x, y);
    match kind {
        CurveKind::ModLevel(r) => {
            let m = gamma(z)?.norm();
            Ok((m - r, dmod_dx(x, y, DMOD_TERMS)?, dmod_dy(x, y, DMOD_TERMS)?))
        }
        CurveKind::ArgLevel(theta) => {
            let psi = digamma(z)?;
            Ok((phase_a(z)? - theta, psi.im, psi.re))
        }
        CurveKind::GLevel(theta) => {
            let psi = z.ln() - 0.5 / z + phi_prime(-z)?;
            Ok((phase_a_g(z)? - theta, psi.im, psi.re))
        }
    }
}

/// Sign making the level function increasing in `y`.
fn orientation(kind: CurveKind) -> f64 {
    match kind {
        CurveKind::ModLevel(_) => -1.0,
        _ => 1.0,
    }
}

/// Solves `f(x + iy) = 0` for `y ∈ [y_lo, y_hi]` starting from `guess`, by
/// Newton steps kept inside a sign-change bracket.
fn correct(kind: CurveKind, x: f64, guess: f64, y_lo: f64, y_hi: f64, cfg: &TraceConfig) -> Result<CurveSample> {
    let s = orientation(kind);
    let eval = |y: f64| -> Result<(f64, f64)> {
        let (v, _, dy) = level(kind, x, y)?;
        Ok((s * v, s * dy))
    };
    let exits = |_| Error::CurveExitsWindow { x };
    let mut y = guess.clamp(y_lo, y_hi);
    let (mut v, mut d) = eval(y)?;
    let (mut lo, mut hi);
    if v == 0.0 {
        return Ok(CurveSample { x, y, residual: 0.0 });
    }
    // grow a bracket [lo, hi] with g(lo) < 0 < g(hi)
    let mut step = cfg.y_bracket;
    if v < 0.0 {
        lo = y;
        loop {
            if lo >= y_hi {
                return Err(exits(()));
            }
            hi = (lo + step).min(y_hi);
            if eval(hi)?.0 > 0.0 {
                break;
            }
            lo = hi;
            step *= 2.0;
        }
    } else {
        hi = y;
        loop {
            if hi <= y_lo {
                return Err(exits(()));
            }
            lo = (hi - step).max(y_lo);
            if eval(lo)?.0 < 0.0 {
                break;
            }
            hi = lo;
            step *= 2.0;
        }
    }
    if y < lo || y > hi {
        y = 0.5 * (lo + hi);
        (v, d) = eval(y)?;
    }
    for _ in 0..cfg.max_newton {
        if v < 0.0 {
            lo = y;
        } else {
            hi = y;
        }
        let mut next = y - v / d;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        let moved = (next - y).abs();
        y = next;
        (v, d) = eval(y)?;
        if v == 0.0 || moved < 1e-14 * y.abs().max(1.0) || hi - lo < 1e-14 * y.abs().max(1.0) {
            break;
        }
    }
    let residual = v.abs();
    if residual >= cfg.newton_tol {
        return Err(Error::Bracket { x, reason: format!("corrector stalled with residual {residual:e}") });
    }
    Ok(CurveSample { x, y, residual })
}

fn x_grid(x_start: f64, x_end: f64, step: f64) -> Vec<f64> {
    let n = ((x_end - x_start) / step).ceil().max(1.0) as usize;
    let h = (x_end - x_start) / n as f64;
    (0..=n).map(|k| if k == n { x_end } else { x_start + h * k as f64 }).collect()
}

/// Follows a level curve across the x-grid, seeding each sample from the
/// previous one plus the tangent slope `−f_x/f_y`.
fn continue_curve(
    kind: CurveKind,
    quadrant: Quadrant,
    xs: &[f64],
    seed: f64,
    y_lo: f64,
    y_hi: f64,
    cfg: &TraceConfig,
) -> Result<LevelCurve> {
    let mut samples = Vec::with_capacity(xs.len());
    let mut guess = seed;
    for (k, &x) in xs.iter().enumerate() {
        let sample = correct(kind, x, guess, y_lo, y_hi, cfg)?;
        if sample.y <= y_lo || sample.y >= y_hi {
            return Err(Error::CurveExitsWindow { x });
        }
        if let Some(&next_x) = xs.get(k + 1) {
            let (_, fx, fy) = level(kind, x, sample.y)?;
            guess = sample.y - fx / fy * (next_x - x);
        }
        samples.push(sample);
    }
    Ok(LevelCurve { kind, quadrant, samples })
}

/// Traces `|Γ(x + iy)| = r`, `y > 0`, for `x` from `x_start` to `x_end`.
pub fn trace_mod_level(r: f64, x_start: f64, x_end: f64, cfg: &TraceConfig) -> Result<LevelCurve> {
    cfg.validate()?;
    if !(r > 0.0) {
        return Err(Error::Parameter(format!("level r = {r} must be positive")));
    }
    let x0 = find_x0()?;
    if !(x_start > x0 && x_end > x_start) {
        return Err(Error::Parameter(format!("need {x0} < x_start < x_end; got [{x_start}, {x_end}]")));
    }
    let xs = x_grid(x_start, x_end, cfg.x_step);
    // |Γ| decreases from Γ(x) on the axis, so the seed bracket starts there
    let on_axis = gamma(Complex64::new(x_start, 0.0))?.re;
    if on_axis <= r {
        return Err(Error::Bracket {
            x: x_start,
            reason: format!("Gamma({x_start}) = {on_axis} does not exceed r = {r}"),
        });
    }
    continue_curve(CurveKind::ModLevel(r), Quadrant::UpperRight, &xs, cfg.y_bracket, 0.0, 1e3, cfg)
}

/// Traces `A(x + iy) = θ` across the window, in the given quadrant.
pub fn trace_arg_level(theta: f64, quadrant: Quadrant, window: &Window, cfg: &TraceConfig) -> Result<LevelCurve> {
    cfg.validate()?;
    match quadrant {
        Quadrant::UpperRight => {
            let x0 = find_x0()?;
            if !(window.x_min > x0 && window.y_min >= 0.0 && theta > 0.0) {
                return Err(Error::Precondition(format!(
                    "upper-right traces need x > {x0}, y >= 0 and theta > 0; got {window:?}, theta = {theta}"
                )));
            }
        }
        Quadrant::UpperLeft => {
            if window.y_min < 2.0 {
                return Err(Error::Precondition(format!(
                    "upper-left traces need y >= 2; got y_min = {}",
                    window.y_min
                )));
            }
        }
    }
    trace_in_window(CurveKind::ArgLevel(theta), quadrant, window, cfg)
}

/// Traces `A_g(x + iy) = θ` in a window inside `Im z > 2`.
pub fn trace_g_level(theta: f64, window: &Window, cfg: &TraceConfig) -> Result<LevelCurve> {
    cfg.validate()?;
    if window.y_min < 2.0 {
        return Err(Error::Precondition(format!("window must lie in Im z >= 2; got y_min = {}", window.y_min)));
    }
    let quadrant = if window.x_max <= 0.0 { Quadrant::UpperLeft } else { Quadrant::UpperRight };
    trace_in_window(CurveKind::GLevel(theta), quadrant, window, cfg)
}

fn trace_in_window(kind: CurveKind, quadrant: Quadrant, window: &Window, cfg: &TraceConfig) -> Result<LevelCurve> {
    let xs = x_grid(window.x_min, window.x_max, cfg.x_step);
    let (v, _, _) = level(kind, window.x_min, window.y_min)?;
    if v >= 0.0 {
        return Err(Error::Bracket { x: window.x_min, reason: "level lies below the window".into() });
    }
    continue_curve(kind, quadrant, &xs, window.y_min, window.y_min, window.y_max, cfg)
}

/// Slopes `(y_{k+1} − y_k)/(x_{k+1} − x_k)` between consecutive samples.
pub fn slopes(curve: &LevelCurve) -> Vec<f64> {
    curve.samples.windows(2).map(|w| (w[1].y - w[0].y) / (w[1].x - w[0].x)).collect()
}

/// `dA/dx` along `|Γ| = r`, with the comparison value `2(log⌊x⌋ − 1)²`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PhaseGrowth {
    pub x: f64,
    pub derivative: f64,
    /// `None` for `x < 3`, where the comparison value is not meaningful.
    pub bound: Option<f64>,
}

impl PhaseGrowth {
    pub fn holds(&self) -> bool {
        self.bound.is_none_or(|b| self.derivative >= b)
    }
}

/// `2(log⌊x⌋ − 1)²` for `x ≥ 3`.
pub fn phase_growth_bound(x: f64) -> Option<f64> {
    let fl = x.floor();
    (fl >= 3.0).then(|| 2.0 * (fl.ln() - 1.0).powi(2))
}

/// Exact `dA/dx = |ψ|²/Im ψ` along a curve `|Γ| = r`.
pub fn mod_level_phase_slope(z: Complex64) -> Result<f64> {
    let psi = digamma(z)?;
    Ok(psi.norm_sqr() / psi.im)
}

/// Finite-difference derivative of `A` along a `ModLevel` curve: central
/// differences inside, one-sided at the ends.
pub fn curve_a_derivative(curve: &LevelCurve) -> Result<Vec<PhaseGrowth>> {
    if !matches!(curve.kind, CurveKind::ModLevel(_)) {
        return Err(Error::Precondition("phase derivative is defined along |Gamma| = r curves".into()));
    }
    let s = &curve.samples;
    if s.len() < 2 {
        return Err(Error::Precondition("need at least two samples".into()));
    }
    let a: Vec<f64> = s.iter().map(|p| phase_a(Complex64::new(p.x, p.y))).collect::<Result<_>>()?;
    let n = s.len();
    Ok((0..n)
        .map(|k| {
            let (i, j) = match k {
                0 => (0, 1),
                k if k == n - 1 => (n - 2, n - 1),
                k => (k - 1, k + 1),
            };
            let derivative = (a[j] - a[i]) / (s[j].x - s[i].x);
            PhaseGrowth { x: s[k].x, derivative, bound: phase_growth_bound(s[k].x) }
        })
        .collect())
}

/// Outcome of [`sandwich_check`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SandwichReport {
    pub theta: f64,
    pub half_width: f64,
    pub samples: usize,
    pub max_deviation: f64,
    /// `(x, y, A − θ)` for samples outside the band.
    pub violations: Vec<(f64, f64, f64)>,
}

impl SandwichReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Traces `A_g = θ` and checks `|A − θ| ≤ 2e^{−4π}` at every sample.
pub fn sandwich_check(theta: f64, window: &Window, cfg: &TraceConfig) -> Result<SandwichReport> {
    let curve = trace_g_level(theta, window, cfg)?;
    let half_width = 2.0 * (-4.0 * PI).exp();
    let mut max_deviation: f64 = 0.0;
    let mut violations = Vec::new();
    for p in &curve.samples {
        let dev = phase_a(Complex64::new(p.x, p.y))? - theta;
        max_deviation = max_deviation.max(dev.abs());
        if dev.abs() > half_width {
            violations.push((p.x, p.y, dev));
        }
    }
    Ok(SandwichReport { theta, half_width, samples: curve.samples.len(), max_deviation, violations })
}

#[derive(Serialize)]
struct CsvRow {
    x: f64,
    y: f64,
    residual: f64,
    #[serde(rename = "A")]
    phase: f64,
    #[serde(rename = "|Gamma|")]
    modulus: f64,
}

impl LevelCurve {
    fn rows(&self) -> Result<Vec<CsvRow>> {
        self.samples
            .iter()
            .map(|p| {
                let z = Complex64::new(p.x, p.y);
                Ok(CsvRow { x: p.x, y: p.y, residual: p.residual, phase: phase_a(z)?, modulus: gamma(z)?.norm() })
            })
            .collect()
    }

    /// CSV with columns `x, y, residual, A, |Gamma|`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in self.rows()? {
            w.serialize(row).map_err(|e| Error::Io(std::io::Error::other(e)))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv()?)?;
        Ok(())
    }
}
