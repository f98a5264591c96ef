//! Discretized-bath oracle: the one-excitation problem with `N` explicit
//! modes, diagonalized exactly.
//!
//! Levels are the roots of `E - Δ_r/2 - Σ_k V_k^2 / (E + Δ_r/2 - ω_k) = 0`.
//! Internally the shifted variable `ω = E + Δ_r/2` is used, so the poles sit
//! at the mode frequencies.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bath::{BathSpec, OMEGA_C};
use crate::error::{Error, Result};
use crate::renorm::RenormResult;
use crate::roots;

/// Lower edge of the discretized band.
pub const OMEGA_MIN: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mode {
    pub omega: f64,
    pub g: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteBath {
    pub modes: Vec<Mode>,
    /// `V_k = Δ_r g_k / (ω_k + Δ_r)`.
    pub v: Vec<f64>,
    pub renorm: RenormResult,
}

impl DiscreteBath {
    pub fn delta_r(&self) -> f64 {
        self.renorm.delta_r
    }

    pub fn total_weight(&self) -> f64 {
        self.modes.iter().map(|m| m.g * m.g).sum()
    }

    /// `ω - Δ_r - Σ V_k^2 / (ω - ω_k)`.
    fn secular(&self, w: f64) -> f64 {
        w - self.delta_r() - self.shift(w)
    }

    fn shift(&self, w: f64) -> f64 {
        self.modes
            .iter()
            .zip(&self.v)
            .map(|(m, v)| v * v / (w - m.omega))
            .sum()
    }
}

/// Log-spaced bins on `[ω_min, ω_c]`; each mode carries the exact weight
/// `∫_bin J` at the bin's `J`-weighted mean frequency.
pub fn discretize(bath: &BathSpec, renorm: &RenormResult, n_modes: usize) -> Result<DiscreteBath> {
    if n_modes < 2 {
        return Err(Error::Validation {
            field: "n_modes",
            reason: format!("need at least two modes (got {n_modes})"),
        });
    }
    renorm.require_delocalized()?;
    let s = bath.s;
    let edges = roots::logspace(OMEGA_MIN, OMEGA_C, n_modes + 1);
    let k = bath.coupling_scale();
    let modes: Vec<Mode> = edges
        .windows(2)
        .map(|e| {
            let (a, b) = (e[0], e[1]);
            let m0 = b.powf(s + 1.0) - a.powf(s + 1.0);
            let m1 = b.powf(s + 2.0) - a.powf(s + 2.0);
            Mode {
                omega: (s + 1.0) / (s + 2.0) * m1 / m0,
                g: (2.0 * k / (s + 1.0) * m0).sqrt(),
            }
        })
        .collect();
    let dr = renorm.delta_r;
    let v = modes.iter().map(|m| dr * m.g / (m.omega + dr)).collect();
    Ok(DiscreteBath {
        modes,
        v,
        renorm: *renorm,
    })
}

/// One eigenlevel: energy `E` and the spin-component amplitude `x(E)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenLevel {
    pub e: f64,
    pub x: f64,
    /// `E + Δ_r/2`, kept separately so that levels hugging a pole keep
    /// their distance to it.
    pub omega: f64,
}

impl EigenLevel {
    /// Boson amplitudes `y_k = x V_k / (E + Δ_r/2 - ω_k)`.
    pub fn y(&self, db: &DiscreteBath) -> Vec<f64> {
        let w = self.omega;
        db.modes
            .iter()
            .zip(&db.v)
            .map(|(m, v)| {
                let d = w - m.omega;
                if d == 0.0 {
                    // Decoupled mode sitting exactly on the level.
                    1.0
                } else {
                    self.x * v / d
                }
            })
            .collect()
    }
}

/// Bisect on the sign of the secular function, which increases between
/// poles; `lo` is known negative and `hi` known positive.
fn bisect_increasing(db: &DiscreteBath, mut lo: f64, mut hi: f64) -> f64 {
    loop {
        let m = 0.5 * (lo + hi);
        if m <= lo || m >= hi {
            return m;
        }
        if db.secular(m) < 0.0 {
            lo = m;
        } else {
            hi = m;
        }
    }
}

fn level_at(db: &DiscreteBath, w: f64) -> EigenLevel {
    let norm: f64 = db
        .modes
        .iter()
        .zip(&db.v)
        .map(|(m, v)| (v / (w - m.omega)).powi(2))
        .sum();
    EigenLevel {
        e: w - 0.5 * db.delta_r(),
        x: (1.0 / (1.0 + norm)).sqrt(),
        omega: w,
    }
}

/// All `N + 1` levels, ascending in energy.
pub fn solve_levels(db: &DiscreteBath) -> Result<Vec<EigenLevel>> {
    let n = db.modes.len();
    if n == 0 {
        return Err(Error::domain("discrete bath has no modes"));
    }
    if db.v.iter().all(|&v| v == 0.0) {
        // Decoupled: the spin level at Δ_r plus bare boson levels.
        let mut levels: Vec<EigenLevel> = db
            .modes
            .iter()
            .map(|m| EigenLevel {
                e: m.omega - 0.5 * db.delta_r(),
                x: 0.0,
                omega: m.omega,
            })
            .collect();
        levels.push(EigenLevel {
            e: 0.5 * db.delta_r(),
            x: 1.0,
            omega: db.delta_r(),
        });
        levels.sort_by(|a, b| a.e.total_cmp(&b.e));
        return Ok(levels);
    }
    if db.v.iter().any(|&v| v == 0.0) {
        return Err(Error::domain("partially decoupled bath: zero coupling for some modes"));
    }
    let poles: Vec<f64> = db.modes.iter().map(|m| m.omega).collect();
    if poles.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::domain("mode frequencies must be strictly ascending"));
    }
    let shrink = |w: f64| 1e-15 * w.abs().max(f64::MIN_POSITIVE);

    let mut lo = poles[0] - 1.0;
    while db.secular(lo) >= 0.0 {
        lo = poles[0] - 2.0 * (poles[0] - lo);
        if !lo.is_finite() {
            return Err(Error::search("lowest level bracket diverged"));
        }
    }
    let mut hi = poles[n - 1] + 1.0;
    while db.secular(hi) <= 0.0 {
        hi = poles[n - 1] + 2.0 * (hi - poles[n - 1]);
        if !hi.is_finite() {
            return Err(Error::search("highest level bracket diverged"));
        }
    }

    let mut brackets = Vec::with_capacity(n + 1);
    brackets.push((lo, poles[0] - shrink(poles[0])));
    for w in poles.windows(2) {
        brackets.push((w[0] + shrink(w[0]), w[1] - shrink(w[1])));
    }
    brackets.push((poles[n - 1] + shrink(poles[n - 1]), hi));

    let levels: Vec<EigenLevel> = brackets
        .par_iter()
        .map(|&(a, b)| level_at(db, bisect_increasing(db, a, b)))
        .collect();

    // Exactly one root per inter-pole interval by construction; verify.
    for (i, level) in levels.iter().enumerate() {
        let w = level.omega;
        let below = if i == 0 { f64::NEG_INFINITY } else { poles[i - 1] };
        let above = if i == n { f64::INFINITY } else { poles[i] };
        if !(w > below && w < above) {
            return Err(Error::search(format!(
                "level {i} at omega = {w:e} escaped its pole interval ({below:e}, {above:e})"
            )));
        }
    }
    Ok(levels)
}

/// `Σ_E x(E)^2`.
pub fn completeness(levels: &[EigenLevel]) -> f64 {
    levels.iter().map(|l| l.x * l.x).sum()
}

/// `P(t) = Σ_E x(E)^2 cos((E + Δ_r/2) t)`.
pub fn p_of_t_discrete(levels: &[EigenLevel], renorm: &RenormResult, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::domain(format!("time must be non-negative (got {t})")));
    }
    debug_assert!(levels
        .iter()
        .all(|l| (l.e + 0.5 * renorm.delta_r - l.omega).abs() <= 1e-12));
    Ok(levels
        .par_iter()
        .map(|l| l.x * l.x * (l.omega * t).cos())
        .sum())
}

/// Discrete analogue of the level shift, `Σ_k V_k^2 / (ω - ω_k)`.
pub fn discrete_shift(db: &DiscreteBath, omega: f64) -> f64 {
    db.shift(omega)
}

/// Principal-value version of [`discrete_shift`] inside the band: the sum is
/// evaluated at the geometric midpoints between neighbouring modes and
/// interpolated linearly in `ln ω`, which removes the nearest-pole jitter.
pub fn discrete_shift_pv(db: &DiscreteBath, omega: f64) -> Result<f64> {
    let w: Vec<f64> = db.modes.iter().map(|m| m.omega).collect();
    let mids: Vec<f64> = w.windows(2).map(|p| (p[0] * p[1]).sqrt()).collect();
    let Some(j) = mids.windows(2).position(|m| m[0] <= omega && omega <= m[1]) else {
        return Err(Error::domain(format!(
            "frequency {omega:e} outside the interpolation range of the discrete bath"
        )));
    };
    let (a, b) = (mids[j], mids[j + 1]);
    let f = (omega.ln() - a.ln()) / (b.ln() - a.ln());
    Ok((1.0 - f) * db.shift(a) + f * db.shift(b))
}

/// Write `(E, x^2)` pairs as CSV.
pub fn write_levels<W: Write>(levels: &[EigenLevel], out: &mut W) -> Result<()> {
    writeln!(out, "e,x2")?;
    for l in levels {
        writeln!(out, "{:.8e},{:.8e}", l.e, l.x * l.x)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bath::SystemSpec;
    use crate::renorm::solve_eta;

    fn setup(s: f64, alpha: f64, delta: f64, n: usize) -> DiscreteBath {
        let b = BathSpec::new(s, alpha, 0.01).unwrap();
        let r = solve_eta(&b, &SystemSpec::new(delta).unwrap()).unwrap();
        discretize(&b, &r, n).unwrap()
    }

    #[test]
    fn weights_match_power_law_integral() {
        let db = setup(0.7, 0.2, 0.1, 300);
        let b = BathSpec::new(0.7, 0.2, 0.01).unwrap();
        let expect = b.total_weight() - 2.0 * b.coupling_scale() * OMEGA_MIN.powf(1.7) / 1.7;
        assert!((db.total_weight() - expect).abs() < 1e-12 * expect);
        assert!(db.modes.windows(2).all(|w| w[1].omega > w[0].omega));
    }

    #[test]
    fn levels_complete_and_normalized() {
        let db = setup(0.9, 0.05, 0.1, 400);
        let levels = solve_levels(&db).unwrap();
        assert_eq!(levels.len(), 401);
        assert!((completeness(&levels) - 1.0).abs() < 1e-8);
        for l in levels.iter().step_by(37) {
            let y2: f64 = l.y(&db).iter().map(|y| y * y).sum();
            assert!((l.x * l.x + y2 - 1.0).abs() < 1e-10);
        }
        assert!((p_of_t_discrete(&levels, &db.renorm, 0.0).unwrap() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn pv_shift_tracks_quadrature() {
        let db = setup(0.9, 0.05, 0.1, 2000);
        let b = BathSpec::new(0.9, 0.05, 0.01).unwrap();
        let dr = db.delta_r();
        let exact = crate::selfenergy::r_quadrature(dr, &b, dr).unwrap();
        let got = discrete_shift_pv(&db, dr).unwrap();
        assert!((got / exact - 1.0).abs() < 1e-3, "{got} {exact}");
        assert!(discrete_shift_pv(&db, 2.0).is_err());
    }

    #[test]
    fn decoupled_bath() {
        let db = setup(0.9, 0.0, 0.1, 10);
        assert!(db.modes.iter().all(|m| m.g == 0.0));
        let levels = solve_levels(&db).unwrap();
        assert_eq!(levels.len(), 11);
        let spin: Vec<_> = levels.iter().filter(|l| l.x == 1.0).collect();
        assert_eq!(spin.len(), 1);
        assert!((spin[0].e - 0.05).abs() < 1e-15);
    }

    #[test]
    fn rejects_tiny_discretization() {
        let b = BathSpec::new(0.9, 0.05, 0.01).unwrap();
        let r = solve_eta(&b, &SystemSpec::new(0.1).unwrap()).unwrap();
        assert!(discretize(&b, &r, 1).is_err());
    }
}
