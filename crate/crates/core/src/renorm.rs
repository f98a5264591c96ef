//! Self-consistent tunneling renormalization and the localization boundary.
//!
//! The dressing factor solves
//! `η = exp{-α ω_s^{1-s} ∫_0^{ω_c} ω^s dω / (ω + ηΔ)^2}`.
//! `η = 0` is always a solution; the delocalized phase is the branch reached
//! by damped iteration from `η = 1`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::bath::{BathSpec, SystemSpec};
use crate::error::{Error, Result};
use crate::quad::{self, Tolerance};
use crate::roots;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Phase {
    Delocalized,
    Localized,
}

impl std::fmt::Display for Phase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Phase::Delocalized => write!(f, "delocalized"),
            Phase::Localized => write!(f, "localized"),
        }
    }
}

/// Converged dressing factor and renormalized tunneling `Δ_r = ηΔ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RenormResult {
    pub delta: f64,
    pub eta: f64,
    pub delta_r: f64,
    pub phase: Phase,
    pub iterations: usize,
    pub residual: f64,
}

impl RenormResult {
    pub fn is_delocalized(&self) -> bool {
        self.phase == Phase::Delocalized
    }

    /// Fail with a domain error unless the system tunnels.
    pub fn require_delocalized(&self) -> Result<()> {
        if self.is_delocalized() && self.delta_r > 0.0 {
            Ok(())
        } else {
            Err(Error::domain(
                "quantity only defined in the delocalized phase (eta > 0)",
            ))
        }
    }
}

/// `ξ(ω) = ω / (ω + Δ_r)`, the fraction of the adiabatic displacement a mode
/// of frequency `ω` follows.
pub fn xi(omega: f64, delta_r: f64) -> Result<f64> {
    if !(omega >= 0.0 && delta_r >= 0.0) {
        return Err(Error::domain(format!(
            "xi needs omega >= 0 and delta_r >= 0 (got {omega}, {delta_r})"
        )));
    }
    if omega == 0.0 && delta_r == 0.0 {
        return Err(Error::domain("xi undefined for omega = delta_r = 0"));
    }
    Ok(omega / (omega + delta_r))
}

/// `∫_0^1 x^s / (x + a)^2 dx` for `a > 0`.
pub fn eta_integral(s: f64, a: f64) -> Result<f64> {
    if a == 0.0 {
        return Ok(f64::INFINITY);
    }
    if !(a > 0.0) {
        return Err(Error::domain(format!("eta integral needs a > 0 (got {a})")));
    }
    // With x = a y the integrand stays representable even for a ~ 1e-260.
    let y_max = 1.0 / a;
    let y_min = 1e-12 * y_max.min(1.0);
    let f = |y: f64| y.powf(s) / ((1.0 + y) * (1.0 + y));
    let head = y_min.powf(s + 1.0) / (s + 1.0);
    let tol = Tolerance {
        abs: 0.0,
        rel: 1e-12,
        max_intervals: 20_000,
    };
    let body = quad::integrate_log(f, y_min, y_max, &[1.0], 1.0, &tol)?;
    Ok(a.powf(s - 1.0) * (head + body.value))
}

/// Settings for the damped fixed-point iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaSolver {
    /// Mixing weight `λ` in `η ← (1-λ)η + λ F(η)`.
    pub damping: f64,
    pub max_iterations: usize,
    pub tolerance: f64,
    /// Iterates below this value count toward collapse.
    pub collapse_threshold: f64,
    pub collapse_run: usize,
}

impl Default for EtaSolver {
    fn default() -> Self {
        EtaSolver {
            damping: 0.5,
            max_iterations: 100_000,
            tolerance: 1e-10,
            collapse_threshold: 1e-8,
            collapse_run: 10,
        }
    }
}

impl EtaSolver {
    pub fn solve(&self, bath: &BathSpec, sys: &SystemSpec) -> Result<RenormResult> {
        let scale = bath.coupling_scale();
        let map = |eta: f64| -> Result<f64> {
            if scale == 0.0 {
                return Ok(1.0);
            }
            Ok((-scale * eta_integral(bath.s, eta * sys.delta)?).exp())
        };

        let mut eta = 1.0;
        let mut previous = 1.0;
        let mut below = 0;
        for it in 1..=self.max_iterations {
            let target = map(eta)?;
            let residual = (eta - target).abs();
            if residual < self.tolerance && eta >= self.collapse_threshold {
                return Ok(RenormResult {
                    delta: sys.delta,
                    eta,
                    delta_r: eta * sys.delta,
                    phase: Phase::Delocalized,
                    iterations: it,
                    residual,
                });
            }
            let next = (1.0 - self.damping) * eta + self.damping * target;
            if next < self.collapse_threshold {
                below += 1;
                if below >= self.collapse_run {
                    return Ok(RenormResult {
                        delta: sys.delta,
                        eta: 0.0,
                        delta_r: 0.0,
                        phase: Phase::Localized,
                        iterations: it,
                        residual: next,
                    });
                }
            } else {
                below = 0;
            }
            previous = eta;
            eta = next;
        }
        Err(Error::Convergence {
            iterations: self.max_iterations,
            previous,
            last: eta,
        })
    }
}

/// Solve for `η` with the default iteration settings.
pub fn solve_eta(bath: &BathSpec, sys: &SystemSpec) -> Result<RenormResult> {
    EtaSolver::default().solve(bath, sys)
}

pub fn classify_phase(bath: &BathSpec, sys: &SystemSpec) -> Result<Phase> {
    Ok(solve_eta(bath, sys)?.phase)
}

/// `π s (1-s) / sin(π s)`, continued by its limit `s` at the Ohmic point.
pub(crate) fn sub_ohmic_factor(s: f64) -> f64 {
    if (1.0 - s).abs() < 1e-6 {
        s
    } else {
        PI * s * (1.0 - s) / (PI * s).sin()
    }
}

/// Below this bare tunneling the scaling-limit condition locates `α_l`.
pub const SCALING_LIMIT_DELTA: f64 = 1e-2;

/// Localization boundary `α_l`.
///
/// For `Δ < 10^-2` the scaling-limit delocalization condition is solved in
/// closed form; otherwise the boundary is the coupling at which the
/// delocalized branch of the fixed-point equation disappears.
pub fn alpha_l(s: f64, omega_s: f64, delta: f64) -> Result<f64> {
    if delta < SCALING_LIMIT_DELTA {
        alpha_l_scaling(s, omega_s, delta)
    } else {
        alpha_l_collapse(s, omega_s, delta)
    }
}

/// First coupling at which
/// `κ π s(1-s) / (sin(πs) Δ^{1-s}) ≤ e^{κ-1}`, `κ = α ω_s^{1-s}`, fails.
pub fn alpha_l_scaling(s: f64, omega_s: f64, delta: f64) -> Result<f64> {
    check_boundary_args(s, omega_s, delta)?;
    let c = sub_ohmic_factor(s) / delta.powf(1.0 - s);
    let unit = omega_s.powf(1.0 - s);
    if (1.0 - s).abs() < 1e-6 && (c - 1.0).abs() < 1e-6 {
        // Ohmic bath: the two sides touch at κ = 1.
        return Ok(1.0 / unit);
    }
    if c <= 1.0 {
        return Err(Error::search(format!(
            "delocalization condition holds for every coupling (s = {s}, delta = {delta}, factor {c:.6})"
        )));
    }
    let h = |k: f64| roots::ok((k - 1.0).exp() - c * k);
    let kappa = roots::bisect(h, 0.0, 1.0 + c.ln(), 1e-15)?;
    Ok(kappa / unit)
}

/// Coupling at which the delocalized fixed point disappears, found as the
/// maximum over `η` of `α(η) = -ln η / (ω_s^{1-s} ∫ x^s/(x+ηΔ)^2)`.
pub fn alpha_l_collapse(s: f64, omega_s: f64, delta: f64) -> Result<f64> {
    check_boundary_args(s, omega_s, delta)?;
    let unit = omega_s.powf(1.0 - s);
    let alpha_of = |u: f64| -> Result<f64> {
        let eta = u.exp();
        Ok(-u / (unit * eta_integral(s, eta * delta)?))
    };
    const U_MIN: f64 = -600.0;
    let grid = roots::linspace(U_MIN, -1e-3, 300);
    let values = grid
        .iter()
        .map(|&u| alpha_of(u))
        .collect::<Result<Vec<_>>>()?;
    let (imax, &vmax) = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty grid");
    let ohmic = (1.0 - s).abs() < 1e-6;
    if imax == 0 && !ohmic {
        return Err(Error::search(format!(
            "collapse point lies below eta = exp({U_MIN}) for s = {s}"
        )));
    }
    let lo = grid[imax.saturating_sub(1)];
    let hi = grid[(imax + 1).min(grid.len() - 1)];
    let (_, refined) = roots::golden_max(alpha_of, lo, hi, 1e-10)?;
    let best = refined.max(vmax);
    if ohmic {
        // α(η) → 1/ω_s^{0} = 1 as η → 0 for the Ohmic bath.
        Ok(best.max(1.0 / unit))
    } else {
        Ok(best)
    }
}

fn check_boundary_args(s: f64, omega_s: f64, delta: f64) -> Result<()> {
    BathSpec::new(s, 0.0, omega_s)?;
    SystemSpec::new(delta)?;
    Ok(())
}
