//! Spectral functions, sum rules and the population dynamics `P(t)`.
//!
//! `C(ω) = (1/π) γ(ω) / [(ω - Δ_r - R(ω))^2 + γ(ω)^2]` on `0 < ω < ω_c` is the
//! symmetrized correlation spectrum; `P(t) = ∫ C(ω) cos(ωt) dω`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bath::{BathSpec, SystemSpec, OMEGA_C};
use crate::error::{Error, Result};
use crate::quad::{self, Estimate, Tolerance};
use crate::renorm::{solve_eta, RenormResult};
use crate::roots;
use crate::selfenergy::{gamma_of, r_quadrature};

/// Frequencies closer than this to the cutoff are treated as the cutoff.
const EDGE_GAP: f64 = 1e-12;
/// Pole search grid, `(1e-12, 1 - 1e-6)` plus the origin.
const POLE_GRID: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Coherence {
    Coherent,
    Incoherent,
}

impl std::fmt::Display for Coherence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Coherence::Coherent => "coherent",
            Coherence::Incoherent => "incoherent",
        })
    }
}

/// Resolvent quantities for one delocalized parameter point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub bath: BathSpec,
    pub renorm: RenormResult,
    /// `R(0)`.
    pub r0: f64,
    /// Highest real root of `ω - Δ_r - R(ω)` inside the band; the
    /// continuation of the weak-coupling quasiparticle pole.
    pub pole: Option<f64>,
    /// Number of roots found; more than one makes `ω_0` ambiguous.
    pub pole_count: usize,
}

impl Spectrum {
    pub fn new(bath: &BathSpec, renorm: &RenormResult) -> Result<Self> {
        renorm.require_delocalized()?;
        let r0 = r_quadrature(0.0, bath, renorm.delta_r)?;
        let mut spec = Spectrum {
            bath: *bath,
            renorm: *renorm,
            r0,
            pole: None,
            pole_count: 0,
        };
        let poles = spec.find_poles()?;
        spec.pole = poles.last().copied();
        spec.pole_count = poles.len();
        Ok(spec)
    }

    pub fn from_params(bath: &BathSpec, sys: &SystemSpec) -> Result<Self> {
        Spectrum::new(bath, &solve_eta(bath, sys)?)
    }

    pub fn delta_r(&self) -> f64 {
        self.renorm.delta_r
    }

    /// `Δ_r + R(0)`; positive exactly in the coherent regime.
    pub fn zero_shift(&self) -> f64 {
        self.delta_r() + self.r0
    }

    pub fn coherence(&self) -> Coherence {
        if self.zero_shift() > 0.0 && self.pole.is_some() {
            Coherence::Coherent
        } else {
            Coherence::Incoherent
        }
    }

    pub fn level_shift(&self, omega: f64) -> Result<f64> {
        if omega == 0.0 {
            return Ok(self.r0);
        }
        r_quadrature(omega, &self.bath, self.delta_r())
    }

    pub fn damping(&self, omega: f64) -> f64 {
        gamma_of(omega, &self.bath, self.delta_r())
    }

    fn pole_residual(&self, omega: f64) -> Result<f64> {
        Ok(omega - self.delta_r() - self.level_shift(omega)?)
    }

    /// All roots bracketed on the scan grid, ascending.
    fn find_poles(&self) -> Result<Vec<f64>> {
        if self.zero_shift() <= 0.0 {
            return Ok(Vec::new());
        }
        let mut grid = vec![0.0];
        grid.extend(roots::logspace(1e-12, OMEGA_C - 1e-6, POLE_GRID));
        let values = grid
            .par_iter()
            .map(|&w| self.pole_residual(w))
            .collect::<Result<Vec<f64>>>()?;
        roots::sign_changes(&values)
            .par_iter()
            .map(|&i| roots::bisect(|w| self.pole_residual(w), grid[i], grid[i + 1], 1e-15 * grid[i + 1]))
            .collect()
    }

    /// The unique pole `ω_0`; an ambiguity error when several roots exist.
    pub fn omega0(&self) -> Result<Option<f64>> {
        if self.pole_count > 1 {
            let all = self.find_poles()?;
            return Err(Error::Ambiguous(format!(
                "{} roots of omega - delta_r - R(omega) in (0, 1): {}",
                all.len(),
                all.iter().map(|w| format!("{w:e}")).collect::<Vec<_>>().join(", ")
            )));
        }
        Ok(self.pole)
    }

    /// `C(ω)`; zero outside `(0, ω_c)`.
    pub fn correlation(&self, omega: f64) -> Result<f64> {
        if !(omega > 0.0 && omega < OMEGA_C - EDGE_GAP) {
            return Ok(0.0);
        }
        let g = self.damping(omega);
        let d = self.pole_residual(omega)?;
        Ok(g / PI / (d * d + g * g))
    }

    /// `χ''(ω)`, odd-frequency mirror term for `ω < 0`.
    pub fn chi_im(&self, omega: f64) -> Result<f64> {
        if omega > 0.0 {
            return Ok(PI * self.correlation(omega)?);
        }
        let w = -omega;
        if !(w > 0.0 && w < OMEGA_C - EDGE_GAP) {
            return Ok(0.0);
        }
        let g = self.damping(w);
        let d = omega + self.delta_r() + self.level_shift(w)?;
        Ok(g / (d * d + g * g))
    }

    /// `S(ω) = χ''(ω) / J(ω)` inside the band.
    pub fn s_of_omega(&self, omega: f64) -> Result<f64> {
        if !(omega > 0.0 && omega < OMEGA_C) {
            return Err(Error::domain(format!(
                "S(omega) is defined on 0 < omega < 1 (got {omega})"
            )));
        }
        let a = self.delta_r();
        let ratio = a / (omega + a);
        let g = self.damping(omega);
        let d = self.pole_residual(omega)?;
        Ok(PI * ratio * ratio / (d * d + g * g))
    }

    /// `S(0^+) = π / (Δ_r + R(0))^2`.
    pub fn s_zero_limit(&self) -> Result<f64> {
        let z = self.zero_shift();
        if z == 0.0 {
            return Err(Error::domain("S(0) diverges at the coherence boundary"));
        }
        Ok(PI / (z * z))
    }

    /// `lim_{ω→0} C(ω) / J(ω) = 1 / (Δ_r + R(0))^2`.
    pub fn low_frequency_limit(&self) -> Result<f64> {
        Ok(self.s_zero_limit()? / PI)
    }

    fn require_coherent(&self, what: &str) -> Result<()> {
        if self.zero_shift() <= 0.0 {
            return Err(Error::domain(format!(
                "{what} needs delta_r + R(0) > 0 (got {:e}); point is incoherent",
                self.zero_shift()
            )));
        }
        Ok(())
    }

    /// Without coupling the spectrum is a unit delta at `Δ`.
    fn atom(&self) -> Option<f64> {
        (self.bath.alpha == 0.0).then_some(self.delta_r())
    }

    /// Below this frequency `C(ω) ω^p` is replaced by its leading power law.
    /// The neglected piece is of relative order `(ω/Δ_r)^{s+p+1}`.
    fn low_cut(&self, p: f64) -> f64 {
        let order = (self.bath.s + p + 1.0).min(1.0);
        (1e-10f64.powf(1.0 / order) * self.delta_r().min(1.0)).max(1e-280)
    }

    fn breaks(&self) -> Vec<f64> {
        let mut b = vec![self.delta_r()];
        if let Some(w0) = self.pole {
            let g = self.damping(w0).max(1e-14 * w0);
            b.extend([w0 - 3.0 * g, w0 - g, w0, w0 + g, w0 + 3.0 * g]);
        }
        b.retain(|&x| x > 0.0 && x < OMEGA_C - EDGE_GAP);
        b
    }

    fn integral_tolerance() -> Tolerance {
        Tolerance {
            abs: 1e-12,
            rel: 1e-9,
            max_intervals: 20_000,
        }
    }

    /// Integrate `C(ω) ω^p` over the band, with the `ω → 0` tail taken from
    /// `C ∝ ω^s`.
    fn band_moment(&self, p: f64) -> Result<Estimate> {
        if let Some(w) = self.atom() {
            return Ok(Estimate {
                value: w.powf(p),
                error: 0.0,
            });
        }
        let lo = self.low_cut(p);
        let c_lo = self.correlation(lo)?;
        let head = c_lo * lo.powf(p + 1.0) / (self.bath.s + p + 1.0);
        // An error inside the closure is rare; surface it after integrating.
        let failure = std::sync::Mutex::new(None);
        let body = quad::integrate_log(
            |w| match self.correlation(w) {
                Ok(c) => c * w.powf(p),
                Err(e) => {
                    failure.lock().unwrap().get_or_insert(e);
                    0.0
                }
            },
            lo,
            OMEGA_C - EDGE_GAP,
            &self.breaks(),
            0.5,
            &Self::integral_tolerance(),
        )?;
        if let Some(e) = failure.into_inner().unwrap() {
            return Err(e);
        }
        Ok(body
            + Estimate {
                value: head,
                error: 1e-3 * head.abs(),
            })
    }

    /// Static susceptibility `χ_0 = ½ ∫ C(ω)/ω dω`.
    pub fn chi0(&self) -> Result<f64> {
        self.require_coherent("chi0")?;
        Ok(0.5 * self.band_moment(-1.0)?.value)
    }

    /// `[lim C/J] / (2 χ_0)^2`; one when the generalized Shiba relation holds.
    pub fn shiba_ratio(&self) -> Result<f64> {
        let limit = self.low_frequency_limit()?;
        let chi0 = self.chi0()?;
        Ok(limit / (4.0 * chi0 * chi0))
    }

    /// `∫ C(ω) dω`, which should equal one.
    pub fn sum_rule(&self) -> Result<f64> {
        Ok(self.band_moment(0.0)?.value)
    }

    /// Interior local maxima of `S(ω)`, sorted by frequency.
    pub fn s_peaks(&self) -> Result<Vec<(f64, f64)>> {
        let lo = (self.delta_r() * 1e-3).max(1e-6);
        let grid = roots::logspace(lo, 0.99, 240);
        let values = grid
            .par_iter()
            .map(|&w| self.s_of_omega(w))
            .collect::<Result<Vec<f64>>>()?;
        let mut peaks = Vec::new();
        for i in 1..grid.len() - 1 {
            if values[i] > values[i - 1] * (1.0 + 1e-6) && values[i] >= values[i + 1] {
                let (u, s) = roots::golden_max(
                    |u: f64| self.s_of_omega(u.exp()),
                    grid[i - 1].ln(),
                    grid[i + 1].ln(),
                    1e-9,
                )?;
                peaks.push((u.exp(), s));
            }
        }
        Ok(peaks)
    }

    /// Cosine transform of `C(ω)`, built once and evaluated at any `t`.
    pub fn cosine_transform(&self) -> Result<CosineTransform> {
        CosineTransform::new(self)
    }

    /// `C(t) = ∫ C(ω) cos(ωt) dω` for a single time.
    pub fn c_of_t(&self, t: f64) -> Result<Estimate> {
        self.cosine_transform()?.eval(t)
    }
}

const CHEB_ORDER: usize = 16;

#[derive(Debug, Clone)]
struct ChebPanel {
    a: f64,
    b: f64,
    values: [f64; CHEB_ORDER + 1],
}

fn cheb_node(a: f64, b: f64, theta: f64) -> f64 {
    0.5 * (a + b) + 0.5 * (b - a) * theta.cos()
}

impl ChebPanel {
    fn node(&self, j: usize) -> f64 {
        cheb_node(self.a, self.b, j as f64 * PI / CHEB_ORDER as f64)
    }

    /// Barycentric interpolation on the Chebyshev-Lobatto nodes.
    fn interpolate(&self, x: f64) -> f64 {
        let (mut num, mut den) = (0.0, 0.0);
        for j in 0..=CHEB_ORDER {
            let d = x - self.node(j);
            if d == 0.0 {
                return self.values[j];
            }
            let mut w = if j % 2 == 0 { 1.0 } else { -1.0 };
            if j == 0 || j == CHEB_ORDER {
                w *= 0.5;
            }
            num += w / d * self.values[j];
            den += w / d;
        }
        num / den
    }

    /// Derivatives of the interpolant at `b` (first array) and `a`, from its
    /// Chebyshev series.
    fn endpoint_derivatives(&self) -> ([f64; CHEB_ORDER + 1], [f64; CHEB_ORDER + 1]) {
        const N: usize = CHEB_ORDER;
        let mut c = [0.0; N + 1];
        for (k, ck) in c.iter_mut().enumerate() {
            let mut sum = 0.0;
            for (j, v) in self.values.iter().enumerate() {
                let half = if j == 0 || j == N { 0.5 } else { 1.0 };
                sum += half * v * ((k * j) as f64 * PI / N as f64).cos();
            }
            *ck = 2.0 * sum / N as f64;
        }
        c[0] *= 0.5;
        c[N] *= 0.5;
        let (mut at_b, mut at_a) = ([0.0; N + 1], [0.0; N + 1]);
        let scale = 2.0 / (self.b - self.a);
        let mut factor = 1.0;
        for order in 0..=N {
            at_b[order] = factor * c.iter().sum::<f64>();
            at_a[order] = factor
                * c.iter()
                    .enumerate()
                    .map(|(k, ck)| if k % 2 == 0 { *ck } else { -ck })
                    .sum::<f64>();
            let mut d = [0.0; N + 2];
            for k in (1..=N).rev() {
                d[k - 1] = d[k + 1] + 2.0 * k as f64 * c[k];
            }
            d[0] *= 0.5;
            c.copy_from_slice(&d[..=N]);
            factor *= scale;
        }
        at_b[0] = self.values[0];
        at_a[0] = self.values[N];
        (at_b, at_a)
    }
}

/// `[B(x) cos(xt) + A(x) sin(xt)]`, the antiderivative of `p(x) cos(xt)`
/// from repeated integration by parts; `derivs` holds `p^{(k)}(x)`.
fn cosine_antiderivative(derivs: &[f64; CHEB_ORDER + 1], x: f64, t: f64) -> f64 {
    let (mut even, mut odd) = (0.0, 0.0);
    let mut tk = t;
    for (k, d) in derivs.iter().enumerate() {
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            even += sign * d / tk;
        } else {
            odd += sign * d / tk;
        }
        tk *= t;
    }
    let (sin, cos) = (x * t).sin_cos();
    odd * cos + even * sin
}

/// Piecewise Chebyshev interpolant of `C(ω)` with exact-enough product
/// quadrature against `cos(ωt)`; the cost of each `t` is independent of the
/// cost of evaluating `C`.
#[derive(Debug, Clone)]
pub struct CosineTransform {
    panels: Vec<ChebPanel>,
    /// Endpoint derivatives of each panel, `(at b, at a)`.
    ends: Vec<([f64; CHEB_ORDER + 1], [f64; CHEB_ORDER + 1])>,
    atom: Option<f64>,
    low_cut: f64,
    low_value: f64,
    s: f64,
    tolerance: f64,
}

impl CosineTransform {
    const MAX_PANELS: usize = 20_000;
    /// Above this `t (b - a)` each integration-by-parts term is no larger
    /// than the previous one (Markov's inequality), so the exact series is
    /// used instead of subdividing.
    const PARTS_THRESHOLD: f64 = (2 * CHEB_ORDER * CHEB_ORDER) as f64;

    pub fn new(spec: &Spectrum) -> Result<Self> {
        if let Some(w) = spec.atom() {
            return Ok(CosineTransform {
                panels: Vec::new(),
                ends: Vec::new(),
                atom: Some(w),
                low_cut: 0.0,
                low_value: 0.0,
                s: spec.bath.s,
                tolerance: 0.0,
            });
        }
        let lo = spec.low_cut(0.0);
        let hi = OMEGA_C - EDGE_GAP;
        let mut cuts: Vec<f64> = Vec::new();
        let mut x = lo;
        while x < 0.5 {
            cuts.push(x);
            x *= 2.0;
        }
        cuts.extend((1..=11).map(|k| 1.0 - 0.5 * 10f64.powi(-k + 1)));
        cuts.extend(spec.breaks());
        cuts.push(hi);
        cuts.retain(|&c| c >= lo && c <= hi);
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();

        let mut pending: Vec<(f64, f64)> = cuts.windows(2).map(|w| (w[0], w[1])).collect();
        let mut scale = match spec.pole {
            Some(w0) => spec.correlation(w0)?,
            None => 0.0,
        };
        let mut panels = Vec::new();
        let abs_tol = |scale: f64| 1e-10 * scale;
        while !pending.is_empty() {
            let sampled = pending
                .par_iter()
                .map(|&(a, b)| sample_panel(spec, a, b))
                .collect::<Result<Vec<_>>>()?;
            for (panel, _) in &sampled {
                scale = panel.values.iter().fold(scale, |m, v| m.max(v.abs()));
            }
            let mut next = Vec::new();
            for (panel, worst) in sampled {
                let narrow = panel.b - panel.a <= 1e-12 * panel.b;
                if worst <= abs_tol(scale) || narrow {
                    panels.push(panel);
                } else {
                    let m = 0.5 * (panel.a + panel.b);
                    next.push((panel.a, m));
                    next.push((m, panel.b));
                }
            }
            if panels.len() + next.len() > Self::MAX_PANELS {
                return Err(Error::Accuracy {
                    estimate: f64::NAN,
                    error: scale,
                });
            }
            pending = next;
        }
        panels.sort_by(|p, q| p.a.total_cmp(&q.a));
        let ends = panels.iter().map(ChebPanel::endpoint_derivatives).collect();
        Ok(CosineTransform {
            panels,
            ends,
            atom: None,
            low_cut: lo,
            low_value: spec.correlation(lo)?,
            s: spec.bath.s,
            tolerance: abs_tol(scale),
        })
    }

    /// `∫ C(ω) cos(ωt) dω`.
    pub fn eval(&self, t: f64) -> Result<Estimate> {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::domain(format!("time must be finite and non-negative (got {t})")));
        }
        if let Some(w) = self.atom {
            return Ok(Estimate {
                value: (w * t).cos(),
                error: 0.0,
            });
        }
        let head = self.low_value * self.low_cut / (self.s + 1.0);
        let mut total = Estimate {
            value: head,
            error: 1e-3 * head + self.tolerance * (OMEGA_C - self.low_cut),
        };
        for (panel, (at_b, at_a)) in self.panels.iter().zip(&self.ends) {
            let width = panel.b - panel.a;
            if width * t >= Self::PARTS_THRESHOLD {
                let value = cosine_antiderivative(at_b, panel.b, t)
                    - cosine_antiderivative(at_a, panel.a, t);
                total = total
                    + Estimate {
                        value,
                        error: f64::EPSILON * at_b[0].abs().max(at_a[0].abs()) / t,
                    };
                continue;
            }
            let m = (width * t / PI).ceil().max(1.0) as usize;
            let h = (panel.b - panel.a) / m as f64;
            let f = |x: f64| panel.interpolate(x) * (x * t).cos();
            for k in 0..m {
                let a = panel.a + k as f64 * h;
                let b = if k + 1 == m { panel.b } else { a + h };
                let p = quad::kronrod21(&f, a, b)?;
                total = total
                    + Estimate {
                        value: p.value,
                        error: p.error,
                    };
            }
        }
        Ok(total)
    }

    pub fn panel_count(&self) -> usize {
        self.panels.len()
    }
}

/// Sample `C` on the panel nodes; also return the worst interpolation error
/// at the interleaved Chebyshev points.
fn sample_panel(spec: &Spectrum, a: f64, b: f64) -> Result<(ChebPanel, f64)> {
    let mut values = [0.0; CHEB_ORDER + 1];
    for (j, v) in values.iter_mut().enumerate() {
        *v = spec.correlation(cheb_node(a, b, j as f64 * PI / CHEB_ORDER as f64))?;
    }
    let panel = ChebPanel { a, b, values };
    let mut worst: f64 = 0.0;
    for j in [0usize, 3, 7, 11, 15] {
        let x = cheb_node(a, b, (j as f64 + 0.5) * PI / CHEB_ORDER as f64);
        worst = worst.max((panel.interpolate(x) - spec.correlation(x)?).abs());
    }
    Ok((panel, worst))
}

/// Coherence classification and Wigner-Weisskopf parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DynamicsResult {
    pub bath: BathSpec,
    pub renorm: RenormResult,
    pub omega0: Option<f64>,
    /// `γ(Δ_r) = α π ω_s^{1-s} Δ_r^s / 2`.
    pub gamma_decay: f64,
    pub coherence: Coherence,
    pub spectrum: Spectrum,
}

pub fn analyze(bath: &BathSpec, sys: &SystemSpec) -> Result<DynamicsResult> {
    let spectrum = Spectrum::from_params(bath, sys)?;
    Ok(DynamicsResult {
        bath: *bath,
        renorm: spectrum.renorm,
        omega0: spectrum.omega0()?,
        gamma_decay: spectrum.damping(spectrum.delta_r()),
        coherence: spectrum.coherence(),
        spectrum,
    })
}

/// Renormalized oscillation frequency `ω_0`, absent when there is no pole.
pub fn omega0_solve(bath: &BathSpec, renorm: &RenormResult) -> Result<Option<f64>> {
    Spectrum::new(bath, renorm)?.omega0()
}

/// `P(t)` at several times. Coherent points use `cos(ω_0 t) e^{-γ t}`;
/// incoherent points fall back to the spectral cosine transform.
pub fn p_curve(dynamics: &DynamicsResult, times: &[f64]) -> Result<Vec<Estimate>> {
    if let Some(t) = times.iter().find(|t| !(**t >= 0.0 && t.is_finite())) {
        return Err(Error::domain(format!("time must be finite and non-negative (got {t})")));
    }
    match (dynamics.coherence, dynamics.omega0) {
        (Coherence::Coherent, Some(w0)) => Ok(times
            .iter()
            .map(|&t| Estimate {
                value: (w0 * t).cos() * (-dynamics.gamma_decay * t.abs()).exp(),
                error: 0.0,
            })
            .collect()),
        _ => {
            let ct = dynamics.spectrum.cosine_transform()?;
            times.par_iter().map(|&t| ct.eval(t)).collect()
        }
    }
}

pub fn p_of_t(t: f64, dynamics: &DynamicsResult) -> Result<f64> {
    Ok(p_curve(dynamics, &[t])?[0].value)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurveKind {
    ChiIm,
    SOmega,
    COmega,
    RCurve,
    GammaCurve,
}

impl CurveKind {
    pub fn label(&self) -> &'static str {
        match self {
            CurveKind::ChiIm => "chi_im",
            CurveKind::SOmega => "s_omega",
            CurveKind::COmega => "c_omega",
            CurveKind::RCurve => "r_omega",
            CurveKind::GammaCurve => "gamma_omega",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralCurve {
    pub omegas: Vec<f64>,
    pub values: Vec<f64>,
    pub kind: CurveKind,
}

pub fn sample_curve(spec: &Spectrum, kind: CurveKind, omegas: &[f64]) -> Result<SpectralCurve> {
    let values = omegas
        .par_iter()
        .map(|&w| match kind {
            CurveKind::ChiIm => spec.chi_im(w),
            CurveKind::SOmega => spec.s_of_omega(w),
            CurveKind::COmega => spec.correlation(w),
            CurveKind::RCurve => spec.level_shift(w),
            CurveKind::GammaCurve => Ok(spec.damping(w)),
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(SpectralCurve {
        omegas: omegas.to_vec(),
        values,
        kind,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spectrum(s: f64, alpha: f64, ws: f64, delta: f64) -> Spectrum {
        Spectrum::from_params(&BathSpec::new(s, alpha, ws).unwrap(), &SystemSpec::new(delta).unwrap())
            .unwrap()
    }

    #[test]
    fn integration_by_parts_matches_closed_form() {
        let (a, b) = (0.1, 0.3);
        let mut values = [0.0; CHEB_ORDER + 1];
        for (j, v) in values.iter_mut().enumerate() {
            *v = cheb_node(a, b, j as f64 * PI / CHEB_ORDER as f64).exp();
        }
        let panel = ChebPanel { a, b, values };
        let (at_b, at_a) = panel.endpoint_derivatives();
        assert!((at_b[3] - b.exp()).abs() < 1e-6 * b.exp());
        for t in [3e3, 1e5, 1e7] {
            let got = cosine_antiderivative(&at_b, b, t) - cosine_antiderivative(&at_a, a, t);
            // Re[e^{(1+it)x} / (1+it)] between the limits.
            let anti = |x: f64| x.exp() * ((x * t).cos() + t * (x * t).sin()) / (1.0 + t * t);
            let exact = anti(b) - anti(a);
            assert!((got - exact).abs() < 1e-12 / t, "t {t}: {got} vs {exact}");
        }
    }

    #[test]
    fn weak_coupling_pole_near_delta_r() {
        let sp = spectrum(0.5, 0.01, 0.01, 0.1);
        let w0 = sp.pole.unwrap();
        assert!((w0 - sp.delta_r()).abs() < 0.05 * sp.delta_r());
        assert!(sp.pole_residual(w0).unwrap().abs() < 1e-10);
        assert_eq!(sp.coherence(), Coherence::Coherent);
    }

    #[test]
    fn sum_rule_and_shiba() {
        let sp = spectrum(0.5, 0.05, 0.01, 0.1);
        assert!((sp.sum_rule().unwrap() - 1.0).abs() < 1e-5);
        assert!((sp.shiba_ratio().unwrap() - 1.0).abs() < 1e-4);
    }

    #[test]
    fn chi_im_is_even() {
        let sp = spectrum(0.7, 0.1, 0.01, 0.1);
        for w in [1e-4, 0.03, 0.2, 0.9] {
            let (p, m) = (sp.chi_im(w).unwrap(), sp.chi_im(-w).unwrap());
            assert!((p - m).abs() <= 1e-12 * p.abs(), "{w}: {p} {m}");
        }
        assert_eq!(sp.chi_im(0.0).unwrap(), 0.0);
    }

    #[test]
    fn s_low_frequency_limit() {
        let sp = spectrum(0.5, 0.05, 0.01, 0.1);
        let s = sp.s_of_omega(1e-6).unwrap();
        let lim = sp.s_zero_limit().unwrap();
        assert!((s / lim - 1.0).abs() < 1e-3, "{s} {lim}");
        assert!(sp.s_of_omega(0.0).is_err());
        assert!(sp.s_of_omega(1.0).is_err());
    }

    #[test]
    fn cosine_transform_at_zero_time_is_the_sum_rule() {
        let sp = spectrum(0.8, 0.05, 0.01, 0.1);
        let ct = sp.cosine_transform().unwrap();
        let c0 = ct.eval(0.0).unwrap();
        assert!((c0.value - sp.sum_rule().unwrap()).abs() < 1e-7, "{c0:?}");
    }

    #[test]
    fn wigner_weisskopf_envelope() {
        let b = BathSpec::new(0.5, 0.05, 0.01).unwrap();
        let d = analyze(&b, &SystemSpec::new(0.1).unwrap()).unwrap();
        assert_eq!(p_of_t(0.0, &d).unwrap(), 1.0);
        let t = 3.0;
        let expect = (d.omega0.unwrap() * t).cos() * (-d.gamma_decay * t).exp();
        assert!((p_of_t(t, &d).unwrap() - expect).abs() < 1e-15);
        assert!(p_of_t(-1.0, &d).is_err());
    }

    #[test]
    fn free_system_limits() {
        let sp = spectrum(0.7, 0.0, 0.01, 0.2);
        assert!((sp.pole.unwrap() - 0.2).abs() < 1e-14);
        assert_eq!(sp.sum_rule().unwrap(), 1.0);
        assert!((sp.chi0().unwrap() - 2.5).abs() < 1e-12);
        assert!((sp.shiba_ratio().unwrap() - 1.0).abs() < 1e-12);
        let t = PI / 0.2;
        assert!((sp.c_of_t(t).unwrap().value + 1.0).abs() < 1e-12);
    }

    #[test]
    fn localized_point_is_rejected() {
        let b = BathSpec::new(0.5, 5.0, 0.01).unwrap();
        assert!(analyze(&b, &SystemSpec::new(0.1).unwrap()).is_err());
    }
}
