//! Randomized invariant suites behind `verify`.

use std::f64::consts::PI;

use anyhow::Result;
use clap::ValueEnum;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use logsurf::curves::{curve_a_derivative, sandwich_check, slopes, trace_mod_level, TraceConfig, Window};
use logsurf::gamma::{g_tilde, gamma, gamma_oracle, phase_a, phase_a_g};
use logsurf::genseries::{eval_series, split_real_imag, zeta_continued, zeta_eval, MixedSeries, Term};
use logsurf::stirling::{default_direction, phi, phi_binet, BINET_TOLERANCE};
use logsurf::surface::{derive_inner_specs, in_sector, rotate_scale, LogPoint, LogVector, SectorSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// Random sector families: points of the inner sector, moved by `zE(iw)`, stay in the outer one.
    Sectors,
    /// Schwarz reflection, the reflection identity and direction independence of the Laplace integral.
    Stirling,
    /// Agreement with the product oracle and the functional equation.
    Gamma,
    /// Generalized-series zeta against the Euler-Maclaurin continuation.
    Zeta,
    /// Real/imaginary split series against their certified tail bound.
    Split,
    /// Modulus level curves from random seeds and the g-level sandwich.
    Curves,
    /// Recurrence of g and closeness of its phase to the Gamma phase.
    Gfunc,
}

impl Suite {
    pub fn default_samples(self) -> usize {
        match self {
            Suite::Sectors => 10_000,
            Suite::Stirling => 200,
            Suite::Gamma => 1000,
            Suite::Zeta => 10,
            Suite::Split => 20,
            Suite::Curves => 4,
            Suite::Gfunc => 100,
        }
    }
}

#[derive(Debug)]
pub struct Report {
    pub checks: usize,
    pub failures: Vec<String>,
    pub summary: String,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn run(suite: Suite, samples: usize, seed: u64) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match suite {
        Suite::Sectors => sectors(&mut rng, samples),
        Suite::Stirling => stirling(&mut rng, samples),
        Suite::Gamma => gamma_suite(&mut rng, samples),
        Suite::Zeta => zeta(&mut rng, samples),
        Suite::Split => split(&mut rng, samples),
        Suite::Curves => curves(&mut rng, samples),
        Suite::Gfunc => gfunc(&mut rng, samples),
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Runs `check` on every sample in parallel; `check` returns the measured
/// error or a failure message.
fn sweep<T, F>(points: &[T], check: F) -> (Vec<String>, f64)
where
    T: Sync,
    F: Fn(&T) -> std::result::Result<f64, String> + Sync + Send,
{
    let results: Vec<_> = points.par_iter().map(check).collect();
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    for r in results {
        match r {
            Ok(e) => worst = worst.max(e),
            Err(msg) => failures.push(msg),
        }
    }
    (failures, worst)
}

fn bounded(err: f64, limit: f64, what: impl FnOnce() -> String) -> std::result::Result<f64, String> {
    if err <= limit {
        Ok(err)
    } else {
        Err(format!("{}: error {err:.3e} exceeds {limit:.1e}", what()))
    }
}

fn random_family(rng: &mut ChaCha8Rng) -> (SectorSpec, f64, f64) {
    loop {
        let m = rng.gen_range(1..=3);
        let rows = rng.gen_range(1..=3);
        let weights: Vec<Vec<f64>> = (0..rows)
            .map(|_| (0..m).map(|_| if rng.gen_bool(0.2) { 0.0 } else { rng.gen_range(0.1..2.0) }).collect())
            .collect();
        let radius: Vec<f64> = (0..m).map(|_| rng.gen_range(0.5..3.0)).collect();
        let aperture = rng.gen_range(PI / 2.0 + 0.1..PI - 0.05);
        let p = rng.gen_range(0..6);
        let Ok(spec) = SectorSpec::new(weights, radius, aperture, 2.0, p) else { continue };
        let m_sum = spec.max_weight_sum();
        if m_sum <= 0.0 {
            continue;
        }
        let nu = (aperture - PI / 2.0) / m_sum * rng.gen_range(0.3..0.95);
        let mu = nu * rng.gen_range(0.1..0.9);
        return (spec, mu, nu);
    }
}

fn sectors(rng: &mut ChaCha8Rng, samples: usize) -> Result<Report> {
    let families = 10.min(samples.max(1));
    let mut failures = Vec::new();
    let mut checks = 0;
    for family in 0..families {
        let per_family = samples / families + usize::from(family < samples % families);
        let (outer, mu, nu) = random_family(rng);
        let rho: Vec<f64> = outer.radius().iter().map(|r| 0.5 * r).collect();
        let inner = derive_inner_specs(&outer, mu, nu, &rho)?.sigma;
        let mut accepted = 0;
        while accepted < per_family {
            let z: Vec<LogPoint> = inner
                .radius()
                .iter()
                .map(|r| LogPoint::new(r * rng.gen::<f64>().powi(3), rng.gen_range(-1.5..1.5) * inner.phi()))
                .collect::<logsurf::Result<_>>()?;
            let z = LogVector::new(z)?;
            if !in_sector(&z, &inner)?.in_sp() {
                continue;
            }
            accepted += 1;
            let w: Vec<Complex64> = (0..z.len())
                .map(|_| Complex64::from_polar(nu * rng.gen::<f64>().sqrt() * (1.0 - 1e-12), rng.gen_range(-PI..PI)))
                .collect();
            if !in_sector(&rotate_scale(&z, &w)?, &outer)?.in_sp() {
                failures.push(format!("family {family}: z = {:?}, w = {w:?} leaves the outer sector", z.components()));
            }
        }
        checks += accepted;
    }
    let summary = format!("{checks} instances over {families} families, {} failures", failures.len());
    Ok(Report { checks, failures, summary })
}

fn stirling(rng: &mut ChaCha8Rng, samples: usize) -> Result<Report> {
    let lower: Vec<Complex64> =
        (0..samples).map(|_| c(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..-0.5))).collect();
    let (mut failures, reflect) = sweep(&lower, |&z| {
        let log_term = (c(1.0, 0.0) - (c(0.0, -2.0 * PI) * z).exp()).ln();
        let sum = phi(z).and_then(|a| Ok(a + phi(-z)?)).map_err(|e| format!("{z}: {e}"))? + log_term;
        bounded(sum.norm(), 1e-9, || format!("reflection identity at {z}"))
    });
    let right: Vec<(Complex64, f64)> = (0..samples)
        .map(|_| {
            let z = c(rng.gen_range(0.1..20.0), rng.gen_range(-20.0..20.0));
            (z, rng.gen_range(-0.3..0.3))
        })
        .collect();
    let (more, schwarz) = sweep(&right, |&(z, shift)| {
        let theta = (default_direction(z) + shift).clamp(-1.2, 1.2);
        let err = |e: logsurf::Error| format!("{z}: {e}");
        let mirror = (phi(z.conj()).map_err(err)? - phi(z).map_err(err)?.conj()).norm();
        let ray = (phi_binet(z, theta).map_err(err)? - phi(z).map_err(err)?).norm();
        bounded(mirror, 1e-12, || format!("Schwarz reflection at {z}"))?;
        bounded(ray, 10.0 * BINET_TOLERANCE, || format!("direction {theta:.3} at {z}"))
    });
    failures.extend(more);
    let summary = format!(
        "{} points: reflection identity {reflect:.2e}, Schwarz and direction independence {schwarz:.2e}",
        2 * samples
    );
    Ok(Report { checks: 2 * samples, failures, summary })
}

fn gamma_suite(rng: &mut ChaCha8Rng, samples: usize) -> Result<Report> {
    let mut points = Vec::with_capacity(samples);
    while points.len() < samples {
        let z = c(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
        if z.im != 0.0 || z.re > 0.0 {
            points.push(z);
        }
    }
    let (failures, worst) = sweep(&points, |&z| {
        let err = |e: logsurf::Error| format!("{z}: {e}");
        let ours = gamma(z).map_err(err)?;
        let oracle = gamma_oracle(z).map_err(err)?;
        let shifted = gamma(z + 1.0).map_err(err)?;
        let rel = (ours - oracle).norm() / oracle.norm();
        let step = (shifted - z * ours).norm() / shifted.norm();
        bounded(rel, 1e-8, || format!("oracle agreement at {z}"))?;
        bounded(step, 1e-9, || format!("functional equation at {z}")).map(|s| s.max(rel))
    });
    let summary = format!("{samples} points, worst relative error {worst:.2e}");
    Ok(Report { checks: samples, failures, summary })
}

fn zeta(rng: &mut ChaCha8Rng, samples: usize) -> Result<Report> {
    let points: Vec<Complex64> = (0..samples).map(|_| c(rng.gen_range(2.0..4.0), rng.gen_range(-20.0..20.0))).collect();
    let tol = 1e-7;
    let (failures, worst) = sweep(&points, |&w| {
        let err = |e: logsurf::Error| format!("{w}: {e}");
        let series = zeta_eval(w, tol).map_err(err)?;
        let reference = zeta_continued(w).map_err(err)?;
        bounded((series - reference).norm(), 2.0 * tol, || format!("zeta at {w}"))
    });
    let summary = format!("{samples} points with Re w in [2, 4], worst difference {worst:.2e}");
    Ok(Report { checks: samples, failures, summary })
}

fn random_series(rng: &mut ChaCha8Rng, m: usize, n: usize) -> Result<MixedSeries> {
    let terms = (0..5)
        .map(|_| Term {
            alpha: (0..m).map(|_| rng.gen_range(0.0..3.0)).collect(),
            beta: (0..n).map(|_| rng.gen_range(0..4)).collect(),
            coeff: c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
        })
        .collect();
    Ok(MixedSeries::new(m, n, terms)?)
}

fn split(rng: &mut ChaCha8Rng, samples: usize) -> Result<Report> {
    let mut failures = Vec::new();
    let mut worst_ratio: f64 = 0.0;
    for index in 0..samples {
        let (m, n) = (rng.gen_range(1..=2), rng.gen_range(0..=2));
        let f = random_series(rng, m, n)?;
        let r_prime: Vec<f64> = (0..m).map(|_| rng.gen_range(0.3..1.5)).collect();
        let rho: Vec<f64> = (0..m).map(|_| rng.gen_range(0.1..1.0)).collect();
        let s: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..2.0)).collect();
        let depth = rng.gen_range(4..=10);
        let pair = split_real_imag(&f, &r_prime, &rho, &s, depth)?;
        for _ in 0..100 {
            let xs: Vec<f64> = r_prime.iter().map(|r| r * rng.gen_range(0.0..1.0)).collect();
            let us: Vec<f64> = rho.iter().map(|p| p * rng.gen_range(-1.0..1.0)).collect();
            let ys: Vec<f64> = s.iter().map(|v| 0.5 * v * rng.gen_range(-1.0..1.0)).collect();
            let vs: Vec<f64> = s.iter().map(|v| 0.5 * v * rng.gen_range(-1.0..1.0)).collect();
            let surface: Vec<LogPoint> =
                xs.iter().zip(&us).map(|(&x, &u)| LogPoint::new(x, u)).collect::<logsurf::Result<_>>()?;
            let standard: Vec<Complex64> = ys.iter().zip(&vs).map(|(&y, &v)| c(y, v)).collect();
            let value = eval_series(&f, &surface, &standard)?.value;
            let flat: Vec<LogPoint> = xs.iter().map(|&x| LogPoint::new(x, 0.0)).collect::<logsurf::Result<_>>()?;
            let real: Vec<Complex64> = us.iter().chain(&ys).chain(&vs).map(|&v| c(v, 0.0)).collect();
            let g = eval_series(&pair.g, &flat, &real)?.value.re;
            let h = eval_series(&pair.h, &flat, &real)?.value.re;
            let err = (value.re - g).abs().max((value.im - h).abs());
            if err > pair.tail_bound + 1e-12 * (1.0 + value.norm()) {
                failures.push(format!("series {index}: error {err:.3e} above bound {:.3e}", pair.tail_bound));
            }
            if pair.tail_bound > 0.0 {
                worst_ratio = worst_ratio.max(err / pair.tail_bound);
            }
        }
    }
    let summary = format!("{samples} series x 100 points, worst error/bound {worst_ratio:.2e}");
    Ok(Report { checks: 100 * samples, failures, summary })
}

fn curves(rng: &mut ChaCha8Rng, samples: usize) -> Result<Report> {
    let cfg = TraceConfig::default();
    let seeds: Vec<Complex64> = (0..samples).map(|_| c(rng.gen_range(2.0..4.0), rng.gen_range(0.5..2.0))).collect();
    let (mut failures, worst) = sweep(&seeds, |&seed| {
        let err = |e: logsurf::Error| format!("seed {seed}: {e}");
        let r = gamma(seed).map_err(err)?.norm();
        let curve = trace_mod_level(r, seed.re, seed.re + 6.0, &cfg).map_err(err)?;
        let residual = curve.samples.iter().map(|p| p.residual).fold(0.0, f64::max);
        if slopes(&curve).iter().any(|&s| !(s > 0.0)) {
            return Err(format!("seed {seed}: nonpositive slope"));
        }
        let growth = curve_a_derivative(&curve).map_err(err)?;
        if let Some(g) = growth.iter().find(|g| g.x >= 4.0 && !g.holds()) {
            return Err(format!("seed {seed}: phase growth {:.4} below {:?} at x = {:.3}", g.derivative, g.bound, g.x));
        }
        bounded(residual, cfg.newton_tol, || format!("seed {seed} residual"))
    });
    let window = Window::new(-20.0, -5.0, 2.0, 80.0)?;
    let theta = 2.0 * PI * f64::from(rng.gen_range(-1..=1));
    let band = sandwich_check(theta, &window, &cfg)?;
    if !band.passed() {
        failures.push(format!("sandwich at theta {theta:.3}: {} samples outside the band", band.violations.len()));
    }
    let summary = format!(
        "{samples} modulus curves, worst residual {worst:.2e}; g-level sandwich at theta {theta:.3}: max deviation {:.2e} <= {:.2e}",
        band.max_deviation, band.half_width
    );
    Ok(Report { checks: samples + band.samples, failures, summary })
}

fn gfunc(rng: &mut ChaCha8Rng, samples: usize) -> Result<Report> {
    let low: Vec<Complex64> = (0..samples).map(|_| c(rng.gen_range(-4.0..3.0), rng.gen_range(0.5..4.0))).collect();
    let (mut failures, recurrence) = sweep(&low, |&z| {
        let err = |e: logsurf::Error| format!("{z}: {e}");
        let lhs = g_tilde(z + 1.0).map_err(err)?;
        let rhs = z * g_tilde(z).map_err(err)?;
        bounded((lhs - rhs).norm(), 1e-9, || format!("recurrence at {z}"))
    });
    let high: Vec<Complex64> = (0..samples).map(|_| c(rng.gen_range(-30.0..30.0), rng.gen_range(2.0..30.0))).collect();
    let half_width = 2.0 * (-4.0 * PI).exp();
    let (more, phase) = sweep(&high, |&z| {
        let err = |e: logsurf::Error| format!("{z}: {e}");
        let d = (phase_a_g(z).map_err(err)? - phase_a(z).map_err(err)?).abs();
        bounded(d, half_width, || format!("phase gap at {z}"))
    });
    failures.extend(more);
    let summary = format!("recurrence residual {recurrence:.2e}, phase gap {phase:.2e} <= {half_width:.2e}");
    Ok(Report { checks: 2 * samples, failures, summary })
}
