//! Zero-temperature spin-boson model with a power-law bath, treated by
//! perturbation theory after a variational unitary transformation.
//!
//! Frequencies are in units of the bath cutoff `ω_c = 1`.

pub mod bath;
pub mod cli;
pub mod criticality;
pub mod dynamics;
pub mod error;
pub mod oracle;
pub mod quad;
pub mod renorm;
pub mod roots;
pub mod selfenergy;

pub use bath::{spectral_density, validate, BathSpec, RawParams, SystemSpec};
pub use criticality::{
    alpha_c_numeric, alpha_c_ohmic_finite, alpha_c_scaling, alpha_c_star_numeric,
    alpha_c_star_ohmic_scaling, phase_diagram, PhaseDiagram, PhasePoint,
};
pub use dynamics::{analyze, Coherence, CurveKind, DynamicsResult, SpectralCurve, Spectrum};
pub use error::{Error, Result};
pub use oracle::{discretize, solve_levels, DiscreteBath, EigenLevel};
pub use quad::Estimate;
pub use renorm::{alpha_l, classify_phase, solve_eta, xi, Phase, RenormResult};
pub use selfenergy::{gamma_of, r_quadrature, r_series, SelfEnergyPoint};
