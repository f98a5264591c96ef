//! Coherent-incoherent boundary `α_c`, underdamped-overdamped crossover
//! `α_c*` and phase-diagram sweeps.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bath::{BathSpec, SystemSpec};
use crate::dynamics::Spectrum;
use crate::error::{Error, Result};
use crate::renorm::{self, solve_eta};
use crate::roots;
use crate::selfenergy::r_quadrature;

/// Bisection tolerance in `α` for both numeric boundaries.
pub const ALPHA_TOL: f64 = 1e-5;

/// Scaling-limit `α_c = sin(πs) / (2π(1-s)) (Δ_r/ω_s)^{1-s}`; `1/2` for `s = 1`.
pub fn alpha_c_scaling(s: f64, omega_s: f64, delta_r: f64) -> Result<f64> {
    BathSpec::new(s, 0.0, omega_s)?;
    if !(delta_r > 0.0) {
        return Err(Error::domain(format!("alpha_c needs delta_r > 0 (got {delta_r})")));
    }
    if (1.0 - s).abs() < 1e-9 {
        return Ok(0.5);
    }
    Ok((PI * s).sin() / (2.0 * PI * (1.0 - s)) * (delta_r / omega_s).powf(1.0 - s))
}

/// `Δ_r + R(0)` at coupling `alpha`; `None` in the localized phase.
pub fn coherence_margin(bath: &BathSpec, sys: &SystemSpec) -> Result<Option<f64>> {
    let renorm = solve_eta(bath, sys)?;
    if !renorm.is_delocalized() {
        return Ok(None);
    }
    Ok(Some(renorm.delta_r + r_quadrature(0.0, bath, renorm.delta_r)?))
}

fn is_coherent(s: f64, omega_s: f64, sys: &SystemSpec, alpha: f64) -> Result<bool> {
    let bath = BathSpec::new(s, alpha, omega_s)?;
    Ok(coherence_margin(&bath, sys)?.is_some_and(|g| g > 0.0))
}

/// Coupling at which the pole reaches zero frequency, `Δ_r + R(0) = 0`.
/// Localized points count as incoherent.
pub fn alpha_c_numeric(s: f64, omega_s: f64, delta: f64) -> Result<f64> {
    let sys = SystemSpec::new(delta)?;
    let (mut lo, mut hi) = (0.0, 0.05);
    while is_coherent(s, omega_s, &sys, hi)? {
        lo = hi;
        hi *= 1.5;
        if hi > 100.0 {
            return Err(Error::search(format!(
                "no coherent-incoherent boundary below alpha = 100 (s = {s}, delta = {delta})"
            )));
        }
    }
    let (a, b) =
        roots::bisect_predicate(|alpha| is_coherent(s, omega_s, &sys, alpha), lo, hi, ALPHA_TOL)?;
    Ok(0.5 * (a + b))
}

/// Ohmic finite-tunneling boundary `α_c = ½(1 + ηΔ)`, with `η` evaluated at
/// `α_c` itself. Returns `(α_c, η)`.
pub fn alpha_c_ohmic_finite(delta: f64) -> Result<(f64, f64)> {
    let sys = SystemSpec::new(delta)?;
    let mut alpha = 0.5;
    let mut eta = 1.0;
    for _ in 0..200 {
        let r = solve_eta(&BathSpec::new(1.0, alpha, 1.0)?, &sys)?;
        eta = r.eta;
        let next = 0.5 * (1.0 + eta * delta);
        if (next - alpha).abs() < 1e-12 {
            return Ok((next, eta));
        }
        alpha = next;
    }
    Err(Error::Convergence {
        iterations: 200,
        previous: alpha,
        last: 0.5 * (1.0 + eta * delta),
    })
}

/// Ohmic scaling-limit crossover: root `x = ω_p/Δ_r` of
/// `x - 1 + (1 + x - x ln x)/π = 0`, then `α = (1 + x)^2 / (2π)`.
/// Returns `(x, α)`.
pub fn alpha_c_star_ohmic_scaling() -> Result<(f64, f64)> {
    let h = |x: f64| roots::ok(x - 1.0 + (1.0 + x - x * x.ln()) / PI);
    let x = roots::bisect(h, 1e-12, 10.0, 1e-15)?;
    Ok((x, (1.0 + x) * (1.0 + x) / (2.0 * PI)))
}

/// Underdamped when a pole `ω_p` exists and `γ(ω_p) < ω_p`.
pub fn is_underdamped(spec: &Spectrum) -> bool {
    spec.pole.is_some_and(|wp| spec.damping(wp) < wp)
}

fn underdamped_at(s: f64, omega_s: f64, sys: &SystemSpec, alpha: f64) -> Result<bool> {
    let bath = BathSpec::new(s, alpha, omega_s)?;
    let renorm = solve_eta(&bath, sys)?;
    if !renorm.is_delocalized() {
        return Ok(false);
    }
    Ok(is_underdamped(&Spectrum::new(&bath, &renorm)?))
}

/// Crossover coupling where the damping at the pole equals the pole
/// frequency, searched inside `(0, α_c)`.
pub fn alpha_c_star_numeric(s: f64, omega_s: f64, delta: f64) -> Result<f64> {
    let alpha_c = alpha_c_numeric(s, omega_s, delta)?;
    alpha_c_star_below(s, omega_s, delta, alpha_c)
}

/// As [`alpha_c_star_numeric`] with a known `α_c`.
pub fn alpha_c_star_below(s: f64, omega_s: f64, delta: f64, alpha_c: f64) -> Result<f64> {
    let sys = SystemSpec::new(delta)?;
    const SCAN: usize = 12;
    let alphas: Vec<f64> = (1..SCAN).map(|k| alpha_c * k as f64 / SCAN as f64).collect();
    let flags = alphas
        .par_iter()
        .map(|&a| underdamped_at(s, omega_s, &sys, a))
        .collect::<Result<Vec<bool>>>()?;
    let first_false = flags.iter().position(|f| !f).unwrap_or(flags.len());
    if flags[first_false..].iter().any(|&f| f) {
        let trace: Vec<String> = alphas
            .iter()
            .zip(&flags)
            .map(|(a, f)| format!("{a:.5}:{}", if *f { "under" } else { "over" }))
            .collect();
        return Err(Error::Ambiguous(format!(
            "damping predicate not monotone in alpha: {}",
            trace.join(" ")
        )));
    }
    let lo = if first_false == 0 { 0.0 } else { alphas[first_false - 1] };
    let hi = alphas.get(first_false).copied().unwrap_or(alpha_c);
    let (a, b) = roots::bisect_predicate(
        |alpha| underdamped_at(s, omega_s, &sys, alpha),
        lo,
        hi,
        ALPHA_TOL,
    )?;
    Ok(0.5 * (a + b))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub delta: f64,
    pub alpha_l: Option<f64>,
    pub alpha_c: Option<f64>,
    pub alpha_c_star: Option<f64>,
    /// Messages for boundaries that could not be located.
    pub failures: Vec<String>,
}

/// Log-log power-law fit `α ∝ Δ^p` of one boundary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub boundary: String,
    pub exponent: f64,
    pub prefactor: f64,
    /// Root-mean-square residual in `ln α`.
    pub residual: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseDiagram {
    pub s: f64,
    pub omega_s: f64,
    pub points: Vec<PhasePoint>,
    pub fits: Vec<PowerLawFit>,
}

pub fn phase_point(s: f64, omega_s: f64, delta: f64) -> PhasePoint {
    let mut failures = Vec::new();
    let mut keep = |name: &str, r: Result<f64>| match r {
        Ok(v) => Some(v),
        Err(e) => {
            failures.push(format!("{name}: {e}"));
            None
        }
    };
    let alpha_l = keep("alpha_l", renorm::alpha_l(s, omega_s, delta));
    let alpha_c = keep("alpha_c", alpha_c_numeric(s, omega_s, delta));
    let alpha_c_star = match alpha_c {
        Some(ac) => keep("alpha_c_star", alpha_c_star_below(s, omega_s, delta, ac)),
        None => None,
    };
    PhasePoint {
        delta,
        alpha_l,
        alpha_c,
        alpha_c_star,
        failures,
    }
}

/// Least-squares line through `(ln x, ln y)`; returns `(slope, intercept, rms)`.
pub fn log_log_fit(xs: &[f64], ys: &[f64]) -> Option<(f64, f64, f64)> {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(x, y)| **x > 0.0 && **y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return None;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rms = (pts
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    Some((slope, intercept, rms))
}

/// `per_decade` log-spaced points on `[lo, hi]`.
pub fn delta_grid(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    let decades = (hi / lo).log10();
    let n = (decades * per_decade as f64).round().max(1.0) as usize + 1;
    roots::logspace(lo, hi, n)
}

pub const DEFAULT_PER_DECADE: usize = 24;

/// Sweep the three boundaries over an ascending tunneling grid. Failures are
/// recorded per point; fits use the points with `Δ < 10^-2`.
pub fn phase_diagram(s: f64, omega_s: f64, deltas: &[f64]) -> Result<PhaseDiagram> {
    BathSpec::new(s, 0.0, omega_s)?;
    if deltas.is_empty() {
        return Err(Error::Validation {
            field: "delta_grid",
            reason: "delta grid is empty".into(),
        });
    }
    if deltas.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Validation {
            field: "delta_grid",
            reason: "delta grid must be strictly ascending".into(),
        });
    }
    for &d in deltas {
        SystemSpec::new(d)?;
    }
    let points: Vec<PhasePoint> = deltas
        .par_iter()
        .map(|&d| phase_point(s, omega_s, d))
        .collect();
    let mut fits = Vec::new();
    let boundaries: [(&str, fn(&PhasePoint) -> Option<f64>); 3] = [
        ("alpha_l", |p| p.alpha_l),
        ("alpha_c", |p| p.alpha_c),
        ("alpha_c_star", |p| p.alpha_c_star),
    ];
    for (name, get) in boundaries {
        let (xs, ys): (Vec<f64>, Vec<f64>) = points
            .iter()
            .filter(|p| p.delta < renorm::SCALING_LIMIT_DELTA)
            .filter_map(|p| get(p).map(|v| (p.delta, v)))
            .unzip();
        if let Some((slope, intercept, rms)) = log_log_fit(&xs, &ys) {
            fits.push(PowerLawFit {
                boundary: name.to_string(),
                exponent: slope,
                prefactor: intercept.exp(),
                residual: rms,
                points: xs.len(),
            });
        }
    }
    Ok(PhaseDiagram {
        s,
        omega_s,
        points,
        fits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scaling_alpha_c_ohmic_and_continuity() {
        assert_eq!(alpha_c_scaling(1.0, 1.0, 0.01).unwrap(), 0.5);
        let near = alpha_c_scaling(1.0 - 1e-7, 1.0, 0.01).unwrap();
        assert!((near - 0.5).abs() < 1e-5);
        let full = alpha_c_scaling(0.8, 0.01, 0.02).unwrap();
        let half = alpha_c_scaling(0.8, 0.01, 0.01).unwrap();
        assert!((half / full - 2f64.powf(-0.2)).abs() < 1e-12);
    }

    #[test]
    fn ohmic_crossover_closed_form() {
        let (x, alpha) = alpha_c_star_ohmic_scaling().unwrap();
        assert!(x > 0.0 && x < 1.0);
        assert!((alpha - 0.325).abs() < 1e-3, "{alpha}");
    }

    #[test]
    fn ohmic_finite_boundary_exceeds_half() {
        let (ac, eta) = alpha_c_ohmic_finite(0.1).unwrap();
        assert!(ac > 0.5 && eta > 0.0);
        assert!((ac - 0.5 * (1.0 + eta * 0.1)).abs() < 1e-10);
    }

    #[test]
    fn fit_recovers_power_law() {
        let xs = [1e-4, 1e-3, 1e-2];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(0.2)).collect();
        let (p, c, r) = log_log_fit(&xs, &ys).unwrap();
        assert!((p - 0.2).abs() < 1e-12 && (c.exp() - 3.0).abs() < 1e-10 && r < 1e-12);
    }

    #[test]
    fn grid_density() {
        let g = delta_grid(1e-4, 1e-2, 24);
        assert_eq!(g.len(), 49);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn sweep_rejects_unsorted_grid() {
        assert!(phase_diagram(0.8, 0.01, &[0.1, 0.05]).is_err());
        assert!(phase_diagram(0.8, 0.01, &[]).is_err());
    }
}
