//! Level shift `R(ω)` and damping `γ(ω)` of the one-excitation resolvent.
//!
//! With the dressed couplings `V_k = Δ_r g_k / (ω_k + Δ_r)`,
//! `Σ_k V_k^2 / (ω ± i0 - ω_k) = R(ω) ∓ i γ(ω)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::bath::{BathSpec, OMEGA_C};
use crate::error::{Error, Result};
use crate::quad::{self, Tolerance};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelfEnergyPoint {
    pub omega: f64,
    pub r: f64,
    pub gamma: f64,
}

/// `γ(ω) = π J(ω) (Δ_r / (ω + Δ_r))^2` inside the band, zero outside.
pub fn gamma_of(omega: f64, bath: &BathSpec, delta_r: f64) -> f64 {
    debug_assert!(delta_r > 0.0);
    if omega <= 0.0 || omega >= OMEGA_C {
        return 0.0;
    }
    let ratio = delta_r / (omega + delta_r);
    2.0 * PI * bath.coupling_scale() * ratio * ratio * omega.powf(bath.s)
}

fn quad_tolerance() -> Tolerance {
    Tolerance {
        abs: 1e-13,
        rel: 1e-10,
        max_intervals: 20_000,
    }
}

/// `R(ω)` by adaptive quadrature; principal value inside the band.
pub fn r_quadrature(omega: f64, bath: &BathSpec, delta_r: f64) -> Result<f64> {
    if !(delta_r > 0.0) {
        return Err(Error::domain(format!("level shift needs delta_r > 0 (got {delta_r})")));
    }
    if !omega.is_finite() {
        return Err(Error::domain("level shift needs a finite frequency"));
    }
    if bath.alpha == 0.0 {
        return Ok(0.0);
    }
    let prefactor = -2.0 * bath.coupling_scale() * delta_r * delta_r;
    let pv = match pv_integral(omega, bath.s, delta_r) {
        // The tight target can hit the roundoff floor of the subtracted
        // integrand; the contract tolerance is looser.
        Err(Error::Accuracy { estimate, error }) if error <= 1e-10 + 1e-8 * estimate.abs() => {
            estimate
        }
        other => other?,
    };
    Ok(prefactor * pv)
}

/// `PV ∫_0^1 x^s dx / ((x - w)(x + a)^2)`.
fn pv_integral(w: f64, s: f64, a: f64) -> Result<f64> {
    let f = |x: f64| x.powf(s) / ((x + a) * (x + a));
    let tol = quad_tolerance();
    if w == 1.0 {
        return Err(Error::domain("level shift diverges at the band edge"));
    }
    if w <= 0.0 {
        // Regular integrand, peaked near x ~ max(|w|, a).
        let scale = if w < 0.0 { a.min(-w) } else { a };
        let x_min = 1e-14 * scale.min(1.0);
        let g = |x: f64| f(x) / (x - w);
        let head = if w < 0.0 {
            x_min.powf(s + 1.0) / ((s + 1.0) * a * a * (-w))
        } else {
            x_min.powf(s) / (s * a * a)
        };
        let mut breaks = vec![a];
        if w < 0.0 {
            breaks.push(-w);
        }
        let body = quad::integrate_log(g, x_min, 1.0, &breaks, 0.5, &tol)?;
        return Ok(head + body.value);
    }
    // Singularity subtraction; also valid for w > 1 where no PV is needed.
    let fw = f(w);
    let g = |x: f64| {
        let d = x - w;
        if d == 0.0 {
            0.0
        } else {
            (f(x) - fw) / d
        }
    };
    let x_min = 1e-14 * a.min(w).min(1.0);
    // Near x = 0 the quotient tends to f(w)/w.
    let head = x_min * fw / w;
    let body = quad::integrate_log(g, x_min, 1.0, &[a, w], 0.5, &tol)?;
    Ok(head + body.value + fw * ((1.0 - w) / w).abs().ln())
}

/// Bound on the series index; the series converges geometrically.
const SERIES_MAX_TERMS: usize = 10_000_000;

/// `R(ω)` from the closed-form residue expansion, valid for `0 < s < 1`
/// (away from the Ohmic point), `0 ≤ ω < 1` and `Δ_r < 1`.
pub fn r_series(omega: f64, bath: &BathSpec, delta_r: f64) -> Result<f64> {
    let s = bath.s;
    if !(s > 0.0 && (1.0 - s).abs() > 1e-3) {
        return Err(Error::domain(format!(
            "series form needs 0 < s < 1 away from s = 1 (got s = {s}); use r_quadrature"
        )));
    }
    if !(0.0..1.0).contains(&omega) || !(delta_r > 0.0 && delta_r < 1.0) {
        return Err(Error::domain(format!(
            "series form needs 0 <= omega < 1 and 0 < delta_r < 1 (got {omega}, {delta_r}); use r_quadrature"
        )));
    }
    if bath.alpha == 0.0 {
        return Ok(0.0);
    }
    let (w, a) = (omega, delta_r);
    let mut sum = 0.0;
    let mut neg_a_pow = a; // (-a)^{n+1} with sign tracked below
    let mut w_pow = w * w; // w^{n+2}
    for n in 0..SERIES_MAX_TERMS {
        let sign = if n % 2 == 0 { -1.0 } else { 1.0 };
        let a1 = sign * neg_a_pow; // (-a)^{n+1}
        let a2 = -a1 * a; // (-a)^{n+2}
        let term = ((1.0 - s) * a2 + w * s * a1 - w_pow) / (n as f64 + 2.0 - s);
        sum += term;
        if term.abs() < 1e-14 && n > 2 {
            break;
        }
        if n + 1 == SERIES_MAX_TERMS {
            return Err(Error::Accuracy {
                estimate: sum,
                error: term.abs(),
            });
        }
        neg_a_pow *= a;
        w_pow *= w;
    }
    let brace = sum
        - (a + w) * a / (1.0 + a)
        - PI / (PI * s).sin()
            * ((s - 1.0) * a.powf(s) + s * a.powf(s - 1.0) * w + w.powf(s) * (PI * s).cos());
    let ratio = a / (w + a);
    Ok(-2.0 * bath.coupling_scale() * ratio * ratio * brace)
}

pub fn self_energy(omega: f64, bath: &BathSpec, delta_r: f64) -> Result<SelfEnergyPoint> {
    Ok(SelfEnergyPoint {
        omega,
        r: r_quadrature(omega, bath, delta_r)?,
        gamma: gamma_of(omega, bath, delta_r),
    })
}
