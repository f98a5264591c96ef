//! Model parameters and the bath spectral density.
//!
//! All frequencies are measured in units of the cutoff `ω_c`, which is fixed
//! to one. The spectral density is `J(ω) = 2 α ω_s^{1-s} ω^s θ(ω_c - ω)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// High-frequency cutoff; the internal unit of energy.
pub const OMEGA_C: f64 = 1.0;

/// Auxiliary scale used when none is given, `ω_s = ω_c / 100`.
pub const DEFAULT_OMEGA_S: f64 = 0.01;

/// Power-law bath with exponent `s`, coupling `alpha` and auxiliary scale
/// `omega_s` (in units of `ω_c`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BathSpec {
    pub s: f64,
    pub alpha: f64,
    pub omega_s: f64,
}

impl BathSpec {
    pub fn new(s: f64, alpha: f64, omega_s: f64) -> Result<Self> {
        let bath = BathSpec { s, alpha, omega_s };
        bath.check()?;
        Ok(bath)
    }

    pub fn omega_c(&self) -> f64 {
        OMEGA_C
    }

    /// The same bath at a different coupling.
    pub fn with_alpha(&self, alpha: f64) -> Self {
        BathSpec { alpha, ..*self }
    }

    /// `α ω_s^{1-s}`, the only combination of `α` and `ω_s` that enters the
    /// physics.
    pub fn coupling_scale(&self) -> f64 {
        self.alpha * self.omega_s.powf(1.0 - self.s)
    }

    /// `∫_0^{ω_c} J(ω) dω`.
    pub fn total_weight(&self) -> f64 {
        2.0 * self.coupling_scale() / (self.s + 1.0)
    }

    fn check(&self) -> Result<()> {
        if !(self.s > 0.0 && self.s <= 1.0) {
            return Err(Error::Validation {
                field: "s",
                reason: format!("s out of range (0, 1]: {}", self.s),
            });
        }
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(Error::Validation {
                field: "alpha",
                reason: format!("alpha must be finite and non-negative: {}", self.alpha),
            });
        }
        if !(self.omega_s > 0.0 && self.omega_s.is_finite()) {
            return Err(Error::Validation {
                field: "omega_s",
                reason: format!("omega_s must be positive: {}", self.omega_s),
            });
        }
        Ok(())
    }
}

/// The two-level system; only the bare tunneling `delta` (bias is zero).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemSpec {
    pub delta: f64,
}

impl SystemSpec {
    pub fn new(delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta < OMEGA_C) {
            return Err(Error::Validation {
                field: "delta",
                reason: format!("delta out of range (0, 1): {delta}"),
            });
        }
        Ok(SystemSpec { delta })
    }
}

/// Unchecked parameter set, as read from a config file or the command line.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct RawParams {
    pub s: Option<f64>,
    pub alpha: Option<f64>,
    pub omega_s: Option<f64>,
    pub delta: Option<f64>,
}

impl RawParams {
    pub fn new(s: f64, alpha: f64, omega_s: Option<f64>, delta: f64) -> Self {
        RawParams {
            s: Some(s),
            alpha: Some(alpha),
            omega_s,
            delta: Some(delta),
        }
    }
}

/// Check every invariant and fill the default `ω_s`.
pub fn validate(raw: &RawParams) -> Result<(BathSpec, SystemSpec)> {
    let required = |v: Option<f64>, field: &'static str| {
        v.ok_or(Error::Validation {
            field,
            reason: format!("{field} required"),
        })
    };
    let s = required(raw.s, "s")?;
    let alpha = required(raw.alpha, "alpha")?;
    let delta = required(raw.delta, "delta")?;
    let bath = BathSpec::new(s, alpha, raw.omega_s.unwrap_or(DEFAULT_OMEGA_S))?;
    let sys = SystemSpec::new(delta)?;
    Ok((bath, sys))
}

/// `J(ω)`; zero at and above the cutoff.
pub fn spectral_density(omega: f64, bath: &BathSpec) -> Result<f64> {
    if !(omega >= 0.0) {
        return Err(Error::domain(format!(
            "spectral density needs omega >= 0 (got {omega})"
        )));
    }
    if omega >= OMEGA_C {
        return Ok(0.0);
    }
    Ok(2.0 * bath.coupling_scale() * omega.powf(bath.s))
}
