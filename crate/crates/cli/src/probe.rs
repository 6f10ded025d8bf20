//! Crossing counts along argument rays and phase growth along a ray into the
//! left half-plane.

use std::f64::consts::PI;

use anyhow::Result;
use num_complex::Complex64;
use rayon::prelude::*;

use logsurf::gamma::{a_lower_bound, phase_a};
use logsurf::genseries::{crossing_probe, MixedSeries, ZetaSeries};
use logsurf::stirling::phi;

pub struct CrossingRow {
    pub name: String,
    pub arg_max: f64,
    pub crossings: usize,
}

/// Series used when none is given on the command line, with the modulus at
/// which each is probed.
pub fn builtin_series() -> Result<Vec<(String, MixedSeries, f64)>> {
    Ok(vec![
        ("X^0.5 + 0.1 X^1.5".into(), MixedSeries::univariate(&[(0.5, 1.0), (1.5, 0.1)])?, 1.0),
        ("X + 0.3 X^2.5 - 0.2 X^3".into(), MixedSeries::univariate(&[(1.0, 1.0), (2.5, 0.3), (3.0, -0.2)])?, 1.0),
        ("zeta series, 1000 terms".into(), ZetaSeries::new(1000)?.series(), (-3.0f64).exp()),
    ])
}

/// Crossing counts at `arg_max = turns · π` for each entry of `turns`, sampled
/// `per_unit` times per unit of argument.
pub fn crossings(series: &[(String, MixedSeries, f64)], turns: &[f64], per_unit: f64) -> Result<Vec<CrossingRow>> {
    let mut rows = Vec::new();
    for (name, f, modulus) in series {
        for &k in turns {
            let arg_max = k * PI;
            let samples = (arg_max * per_unit).ceil().max(1.0) as usize;
            let report = crossing_probe(f, *modulus, arg_max, samples)?;
            rows.push(CrossingRow { name: name.clone(), arg_max, crossings: report.crossings });
        }
    }
    Ok(rows)
}

pub struct PhaseRow {
    pub t: f64,
    pub phase: f64,
    pub lower_bound: f64,
}

pub struct PhaseTable {
    pub angle: f64,
    /// Sup of `|φ|` along the sampled ray, used as the constant in the bound.
    pub phi_bound: f64,
    pub rows: Vec<PhaseRow>,
}

impl PhaseTable {
    pub fn violations(&self) -> usize {
        self.rows.iter().filter(|r| r.phase.abs() < r.lower_bound).count()
    }
}

/// `A(t e^{i angle})` at `points` log-spaced `t` in `[t_min, t_max]`, against
/// the lower bound built from the largest `|φ|` seen on a denser grid.
pub fn phase(angle: f64, t_min: f64, t_max: f64, points: usize) -> Result<PhaseTable> {
    anyhow::ensure!(0.0 < t_min && t_min < t_max, "need 0 < t-min < t-max");
    anyhow::ensure!(points >= 2, "need at least two points");
    let dir = Complex64::from_polar(1.0, angle);
    let grid =
        |n: usize| -> Vec<f64> { (0..n).map(|k| t_min * (t_max / t_min).powf(k as f64 / (n - 1) as f64)).collect() };
    let dense = grid(points.max(600));
    let sups: Vec<f64> = dense.par_iter().map(|&t| phi(dir * t).map(|v| v.norm())).collect::<logsurf::Result<_>>()?;
    let phi_bound = sups.into_iter().fold(0.0, f64::max) * (1.0 + 1e-9);
    let rows = grid(points)
        .par_iter()
        .map(|&t| {
            let z = dir * t;
            Ok(PhaseRow { t, phase: phase_a(z)?, lower_bound: a_lower_bound(z, phi_bound)? })
        })
        .collect::<logsurf::Result<_>>()?;
    Ok(PhaseTable { angle, phi_bound, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crossings_double_with_the_window() {
        let series = builtin_series().unwrap();
        let rows = crossings(&series[..1], &[50.0, 100.0], 60.0).unwrap();
        assert!(rows[1].crossings as f64 >= 1.9 * rows[0].crossings as f64);
    }

    #[test]
    fn phase_respects_its_bound() {
        let table = phase(0.75 * PI, 40.0, 2000.0, 20).unwrap();
        assert_eq!(table.violations(), 0);
        assert!(table.rows.last().unwrap().phase.abs() > 1000.0);
    }
}
