//! Python bindings: bath and spectrum objects plus the boundary searches.

use pyo3::exceptions::{PyOSError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use spinboson::bath::DEFAULT_OMEGA_S;
use spinboson::{criticality, dynamics, oracle, renorm, selfenergy, Error};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Validation { .. } | Error::Domain(_) | Error::Parse { .. } => PyValueError::new_err(e.to_string()),
        Error::Io(_) | Error::Json(_) => PyOSError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

trait IntoPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for spinboson::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(to_py)
    }
}

/// Power-law bath `J(ω) = 2 α ω_s^{1-s} ω^s` below the cutoff `ω_c = 1`.
#[pyclass(frozen, module = "spinboson_py")]
struct Bath {
    inner: spinboson::BathSpec,
}

#[pymethods]
impl Bath {
    #[new]
    #[pyo3(signature = (s, alpha, omega_s = DEFAULT_OMEGA_S))]
    fn new(s: f64, alpha: f64, omega_s: f64) -> PyResult<Self> {
        Ok(Bath {
            inner: spinboson::BathSpec::new(s, alpha, omega_s).py()?,
        })
    }

    #[getter]
    fn s(&self) -> f64 {
        self.inner.s
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.alpha
    }

    #[getter]
    fn omega_s(&self) -> f64 {
        self.inner.omega_s
    }

    fn spectral_density(&self, omega: f64) -> PyResult<f64> {
        spinboson::spectral_density(omega, &self.inner).py()
    }

    fn total_weight(&self) -> f64 {
        self.inner.total_weight()
    }

    fn __repr__(&self) -> String {
        format!("Bath(s={}, alpha={}, omega_s={})", self.inner.s, self.inner.alpha, self.inner.omega_s)
    }
}

fn system(delta: f64) -> PyResult<spinboson::SystemSpec> {
    spinboson::SystemSpec::new(delta).py()
}

/// Converged dressing factor.
#[pyclass(frozen, get_all, module = "spinboson_py")]
struct Renorm {
    delta: f64,
    eta: f64,
    delta_r: f64,
    delocalized: bool,
    iterations: usize,
    residual: f64,
}

impl From<renorm::RenormResult> for Renorm {
    fn from(r: renorm::RenormResult) -> Self {
        Renorm {
            delta: r.delta,
            eta: r.eta,
            delta_r: r.delta_r,
            delocalized: r.is_delocalized(),
            iterations: r.iterations,
            residual: r.residual,
        }
    }
}

#[pymethods]
impl Renorm {
    fn __repr__(&self) -> String {
        format!("Renorm(eta={}, delta_r={}, delocalized={})", self.eta, self.delta_r, self.delocalized)
    }
}

#[pyfunction]
fn solve_eta(bath: &Bath, delta: f64) -> PyResult<Renorm> {
    Ok(renorm::solve_eta(&bath.inner, &system(delta)?).py()?.into())
}

/// Susceptibility and correlation spectrum at one delocalized point.
#[pyclass(frozen, module = "spinboson_py")]
struct Spectrum {
    inner: dynamics::Spectrum,
}

#[pymethods]
impl Spectrum {
    #[new]
    fn new(bath: &Bath, delta: f64) -> PyResult<Self> {
        Ok(Spectrum {
            inner: dynamics::Spectrum::from_params(&bath.inner, &system(delta)?).py()?,
        })
    }

    #[getter]
    fn eta(&self) -> f64 {
        self.inner.renorm.eta
    }

    #[getter]
    fn delta_r(&self) -> f64 {
        self.inner.delta_r()
    }

    /// `Δ_r + R(0)`; positive when the dynamics is coherent.
    #[getter]
    fn zero_shift(&self) -> f64 {
        self.inner.zero_shift()
    }

    #[getter]
    fn pole(&self) -> Option<f64> {
        self.inner.pole
    }

    #[getter]
    fn coherent(&self) -> bool {
        self.inner.coherence() == dynamics::Coherence::Coherent
    }

    fn level_shift(&self, omega: f64) -> PyResult<f64> {
        self.inner.level_shift(omega).py()
    }

    fn damping(&self, omega: f64) -> f64 {
        self.inner.damping(omega)
    }

    fn correlation(&self, omega: f64) -> PyResult<f64> {
        self.inner.correlation(omega).py()
    }

    fn chi_im(&self, omega: f64) -> PyResult<f64> {
        self.inner.chi_im(omega).py()
    }

    fn s_of_omega(&self, omega: f64) -> PyResult<f64> {
        self.inner.s_of_omega(omega).py()
    }

    fn chi0(&self) -> PyResult<f64> {
        self.inner.chi0().py()
    }

    fn shiba_ratio(&self) -> PyResult<f64> {
        self.inner.shiba_ratio().py()
    }

    fn sum_rule(&self) -> PyResult<f64> {
        self.inner.sum_rule().py()
    }

    fn s_peaks(&self) -> PyResult<Vec<(f64, f64)>> {
        self.inner.s_peaks().py()
    }

    /// `C(t)` at each time, from one shared interpolant of `C(ω)`.
    fn c_of_t(&self, times: Vec<f64>) -> PyResult<Vec<f64>> {
        let ct = self.inner.cosine_transform().py()?;
        times.into_iter().map(|t| ct.eval(t).map(|e| e.value).py()).collect()
    }
}

/// Coherence classification with the decay of `P(t)`.
#[pyclass(frozen, module = "spinboson_py")]
struct Dynamics {
    inner: dynamics::DynamicsResult,
}

#[pymethods]
impl Dynamics {
    #[new]
    fn new(bath: &Bath, delta: f64) -> PyResult<Self> {
        Ok(Dynamics {
            inner: dynamics::analyze(&bath.inner, &system(delta)?).py()?,
        })
    }

    #[getter]
    fn omega0(&self) -> Option<f64> {
        self.inner.omega0
    }

    #[getter]
    fn gamma(&self) -> f64 {
        self.inner.gamma_decay
    }

    #[getter]
    fn coherent(&self) -> bool {
        self.inner.coherence == dynamics::Coherence::Coherent
    }

    fn p(&self, times: Vec<f64>) -> PyResult<Vec<f64>> {
        Ok(dynamics::p_curve(&self.inner, &times).py()?.into_iter().map(|e| e.value).collect())
    }
}

#[pyfunction]
fn r_series(bath: &Bath, omega: f64, delta_r: f64) -> PyResult<f64> {
    selfenergy::r_series(omega, &bath.inner, delta_r).py()
}

#[pyfunction]
fn r_quadrature(bath: &Bath, omega: f64, delta_r: f64) -> PyResult<f64> {
    selfenergy::r_quadrature(omega, &bath.inner, delta_r).py()
}

#[pyfunction]
fn gamma_of(bath: &Bath, omega: f64, delta_r: f64) -> f64 {
    selfenergy::gamma_of(omega, &bath.inner, delta_r)
}

#[pyfunction]
#[pyo3(signature = (s, delta, omega_s = DEFAULT_OMEGA_S))]
fn alpha_l(s: f64, delta: f64, omega_s: f64) -> PyResult<f64> {
    renorm::alpha_l(s, omega_s, delta).py()
}

#[pyfunction]
#[pyo3(signature = (s, delta, omega_s = DEFAULT_OMEGA_S))]
fn alpha_c(s: f64, delta: f64, omega_s: f64) -> PyResult<f64> {
    criticality::alpha_c_numeric(s, omega_s, delta).py()
}

#[pyfunction]
#[pyo3(signature = (s, delta, omega_s = DEFAULT_OMEGA_S))]
fn alpha_c_star(s: f64, delta: f64, omega_s: f64) -> PyResult<f64> {
    criticality::alpha_c_star_numeric(s, omega_s, delta).py()
}

/// Closed-form Ohmic scaling-limit crossover, returned as `(x, α_c*)`.
#[pyfunction]
fn alpha_c_star_ohmic() -> PyResult<(f64, f64)> {
    criticality::alpha_c_star_ohmic_scaling().py()
}

#[pyfunction]
#[pyo3(signature = (s, deltas, omega_s = DEFAULT_OMEGA_S))]
fn phase_diagram<'py>(py: Python<'py>, s: f64, deltas: Vec<f64>, omega_s: f64) -> PyResult<Bound<'py, PyDict>> {
    let d = criticality::phase_diagram(s, omega_s, &deltas).py()?;
    let out = PyDict::new(py);
    let points = d
        .points
        .iter()
        .map(|p| {
            let row = PyDict::new(py);
            row.set_item("delta", p.delta)?;
            row.set_item("alpha_l", p.alpha_l)?;
            row.set_item("alpha_c", p.alpha_c)?;
            row.set_item("alpha_c_star", p.alpha_c_star)?;
            row.set_item("failures", p.failures.clone())?;
            Ok(row)
        })
        .collect::<PyResult<Vec<_>>>()?;
    let fits = d
        .fits
        .iter()
        .map(|f| {
            let row = PyDict::new(py);
            row.set_item("boundary", &f.boundary)?;
            row.set_item("exponent", f.exponent)?;
            row.set_item("prefactor", f.prefactor)?;
            row.set_item("residual", f.residual)?;
            Ok(row)
        })
        .collect::<PyResult<Vec<_>>>()?;
    out.set_item("points", points)?;
    out.set_item("fits", fits)?;
    Ok(out)
}

/// The sixteen reference rows as dictionaries.
#[pyfunction]
fn table1(py: Python<'_>) -> PyResult<Vec<Bound<'_, PyDict>>> {
    spinboson::cli::table1()
        .py()?
        .iter()
        .map(|r| {
            let row = PyDict::new(py);
            row.set_item("s", r.s)?;
            row.set_item("omega_s", r.omega_s)?;
            row.set_item("delta_over_omega_s", r.delta_over_omega_s)?;
            row.set_item("alpha", r.alpha)?;
            row.set_item("chi0", r.chi0)?;
            row.set_item("limit", r.limit)?;
            row.set_item("shiba_ratio", r.shiba_ratio)?;
            row.set_item("sum_rule", r.sum_rule)?;
            Ok(row)
        })
        .collect()
}

/// Discretized-bath `P(t)` next to the continuum pole result.
#[pyfunction]
#[pyo3(signature = (bath, delta, times, n_modes = 2000))]
fn oracle_check<'py>(
    py: Python<'py>,
    bath: &Bath,
    delta: f64,
    times: Vec<f64>,
    n_modes: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let d = dynamics::analyze(&bath.inner, &system(delta)?).py()?;
    let db = oracle::discretize(&bath.inner, &d.renorm, n_modes).py()?;
    let levels = oracle::solve_levels(&db).py()?;
    let discrete = times
        .iter()
        .map(|&t| oracle::p_of_t_discrete(&levels, &d.renorm, t))
        .collect::<spinboson::Result<Vec<f64>>>()
        .py()?;
    let pole: Vec<f64> = dynamics::p_curve(&d, &times).py()?.into_iter().map(|e| e.value).collect();
    let out = PyDict::new(py);
    out.set_item("levels", levels.len())?;
    out.set_item("completeness", oracle::completeness(&levels))?;
    out.set_item("p_discrete", discrete)?;
    out.set_item("p_pole", pole)?;
    Ok(out)
}

#[pymodule]
fn spinboson_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<Bath>()?;
    m.add_class::<Renorm>()?;
    m.add_class::<Spectrum>()?;
    m.add_class::<Dynamics>()?;
    m.add_function(wrap_pyfunction!(solve_eta, m)?)?;
    m.add_function(wrap_pyfunction!(r_series, m)?)?;
    m.add_function(wrap_pyfunction!(r_quadrature, m)?)?;
    m.add_function(wrap_pyfunction!(gamma_of, m)?)?;
    m.add_function(wrap_pyfunction!(alpha_l, m)?)?;
    m.add_function(wrap_pyfunction!(alpha_c, m)?)?;
    m.add_function(wrap_pyfunction!(alpha_c_star, m)?)?;
    m.add_function(wrap_pyfunction!(alpha_c_star_ohmic, m)?)?;
    m.add_function(wrap_pyfunction!(phase_diagram, m)?)?;
    m.add_function(wrap_pyfunction!(table1, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_check, m)?)?;
    Ok(())
}
