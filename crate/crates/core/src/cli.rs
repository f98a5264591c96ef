//! Command-line front end: config parsing, subcommand dispatch and CSV/JSON
//! writers.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::bath::{validate, BathSpec, RawParams, SystemSpec, DEFAULT_OMEGA_S};
use crate::criticality::{self, PhaseDiagram};
use crate::dynamics::{self, analyze, Spectrum};
use crate::error::{Error, Result};
use crate::oracle;
use crate::renorm::solve_eta;
use crate::roots;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Renormalized tunneling and phase.
    Eta,
    /// P(t) and C(t) on a time grid.
    Dynamics,
    /// R, gamma, C, chi'' and S on a frequency grid.
    Spectrum,
    /// Static susceptibility, Shiba ratio and sum rule for one point.
    Shiba,
    /// Sweep of the three critical couplings over a tunneling grid.
    PhaseDiagram,
    /// Compare the discretized-bath P(t) with the continuum results.
    OracleCheck {
        /// Also write the (E, x^2) levels to this CSV file.
        #[arg(long)]
        levels: Option<PathBuf>,
    },
    /// The sixteen reference parameter rows.
    Table1,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Eta => "eta",
            Command::Dynamics => "dynamics",
            Command::Spectrum => "spectrum",
            Command::Shiba => "shiba",
            Command::PhaseDiagram => "phase-diagram",
            Command::OracleCheck { .. } => "oracle-check",
            Command::Table1 => "table1",
        }
    }
}

/// Parameter and grid settings; every field may come from the config file
/// or a flag, flags winning.
#[derive(Debug, Clone, Default, PartialEq, Args)]
pub struct Settings {
    #[arg(long, global = true)]
    pub s: Option<f64>,
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    /// Auxiliary scale in units of the cutoff (default 0.01).
    #[arg(long, global = true)]
    pub omega_s: Option<f64>,
    /// Bare tunneling in units of the cutoff.
    #[arg(long, global = true)]
    pub delta: Option<f64>,
    /// Bare tunneling as a multiple of omega_s.
    #[arg(long, global = true)]
    pub delta_over_omega_s: Option<f64>,
    #[arg(long, global = true)]
    pub t_max: Option<f64>,
    #[arg(long, global = true)]
    pub n_t: Option<usize>,
    #[arg(long, global = true)]
    pub omega_min: Option<f64>,
    #[arg(long, global = true)]
    pub omega_max: Option<f64>,
    #[arg(long, global = true)]
    pub n_omega: Option<usize>,
    #[arg(long, global = true)]
    pub delta_min: Option<f64>,
    #[arg(long, global = true)]
    pub delta_max: Option<f64>,
    #[arg(long, global = true)]
    pub per_decade: Option<usize>,
    #[arg(long, global = true)]
    pub n_modes: Option<usize>,
}

impl Settings {
    /// Overlay `other` on `self`; set fields in `other` win.
    pub fn merged(&self, other: &Settings) -> Settings {
        macro_rules! pick {
            ($($f:ident),*) => { Settings { $($f: other.$f.or(self.$f)),* } };
        }
        pick!(
            s,
            alpha,
            omega_s,
            delta,
            delta_over_omega_s,
            t_max,
            n_t,
            omega_min,
            omega_max,
            n_omega,
            delta_min,
            delta_max,
            per_decade,
            n_modes
        )
    }

    fn set(&mut self, key: &str, value: &str, line: usize) -> Result<bool> {
        let float = || {
            value.parse::<f64>().map_err(|_| Error::Parse {
                line,
                message: format!("malformed number `{value}` for `{key}`"),
            })
        };
        let count = || {
            value.parse::<usize>().map_err(|_| Error::Parse {
                line,
                message: format!("malformed integer `{value}` for `{key}`"),
            })
        };
        macro_rules! assign {
            ($field:ident, $parse:expr) => {{
                let previous = self.$field.replace($parse?);
                Ok(previous.is_some())
            }};
        }
        match key {
            "s" => assign!(s, float()),
            "alpha" => assign!(alpha, float()),
            "omega_s" => assign!(omega_s, float()),
            "delta" => assign!(delta, float()),
            "delta_over_omega_s" => assign!(delta_over_omega_s, float()),
            "t_max" => assign!(t_max, float()),
            "n_t" => assign!(n_t, count()),
            "omega_min" => assign!(omega_min, float()),
            "omega_max" => assign!(omega_max, float()),
            "n_omega" => assign!(n_omega, count()),
            "delta_min" => assign!(delta_min, float()),
            "delta_max" => assign!(delta_max, float()),
            "per_decade" => assign!(per_decade, count()),
            "n_modes" => assign!(n_modes, count()),
            _ => Err(Error::Parse {
                line,
                message: format!("unknown key `{key}`"),
            }),
        }
    }

    pub fn omega_s(&self) -> f64 {
        self.omega_s.unwrap_or(DEFAULT_OMEGA_S)
    }

    /// Raw model parameters, converting `delta_over_omega_s` if given.
    pub fn raw_params(&self) -> Result<RawParams> {
        let delta = match (self.delta, self.delta_over_omega_s) {
            (Some(_), Some(_)) => {
                return Err(Error::Validation {
                    field: "delta",
                    reason: "give either delta or delta_over_omega_s, not both".into(),
                })
            }
            (Some(d), None) => Some(d),
            (None, Some(r)) => Some(r * self.omega_s()),
            (None, None) => None,
        };
        Ok(RawParams {
            s: self.s,
            alpha: self.alpha,
            omega_s: self.omega_s,
            delta,
        })
    }

    pub fn model(&self) -> Result<(BathSpec, SystemSpec)> {
        validate(&self.raw_params()?)
    }
}

/// Parsed config text plus any warnings (duplicate keys).
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedConfig {
    pub settings: Settings,
    pub warnings: Vec<String>,
}

/// Parse `key = value` lines; `#` starts a comment. Duplicate keys keep the
/// last value and produce a warning.
pub fn parse_config(text: &str) -> Result<LoadedConfig> {
    let mut settings = Settings::default();
    let mut warnings = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(Error::Parse {
                line,
                message: format!("expected `key = value`, got `{content}`"),
            });
        };
        let (key, value) = (key.trim(), value.trim());
        if settings.set(key, value, line)? {
            let msg = format!("line {line}: duplicate key `{key}`, last value wins");
            log::warn!("{msg}");
            warnings.push(msg);
        }
    }
    Ok(LoadedConfig { settings, warnings })
}

pub fn load_config(path: &Path) -> Result<LoadedConfig> {
    parse_config(&std::fs::read_to_string(path)?)
}

#[derive(Debug, Parser)]
#[command(name = "spinboson", version, about = "Zero-temperature sub-Ohmic spin-boson solver")]
pub struct Cli {
    /// Key/value config file; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file (stdout when absent).
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[command(flatten)]
    pub settings: Settings,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub settings: Settings,
    pub output: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<(RunConfig, Vec<String>)> {
        let (base, warnings) = match &cli.config {
            Some(path) => {
                let loaded = load_config(path)?;
                (loaded.settings, loaded.warnings)
            }
            None => (Settings::default(), Vec::new()),
        };
        Ok((
            RunConfig {
                command: cli.command,
                settings: base.merged(&cli.settings),
                output: cli.output,
                format: cli.format,
            },
            warnings,
        ))
    }
}

/// A file (or stdout) produced by a run.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub path: Option<PathBuf>,
    pub content: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub artifacts: Vec<Artifact>,
    /// Per-point failures in sweeps; the run still succeeds.
    pub failures: Vec<String>,
}

pub fn num(x: f64) -> String {
    format!("{x:.8e}")
}

fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// `#`-prefixed header with the tool version and every setting in use.
fn header(cfg: &RunConfig, extra: &[(&str, String)]) -> String {
    let mut h = format!("# spinboson {VERSION}\n# command = {}\n", cfg.command.name());
    let s = &cfg.settings;
    let mut line = |k: &str, v: String| h.push_str(&format!("# {k} = {v}\n"));
    if let Ok(raw) = s.raw_params() {
        for (k, v) in [("s", raw.s), ("alpha", raw.alpha), ("delta", raw.delta)] {
            if let Some(v) = v {
                line(k, v.to_string());
            }
        }
    }
    line("omega_s", s.omega_s().to_string());
    line("omega_c", "1".into());
    for (k, v) in extra {
        line(k, v.clone());
    }
    h
}

fn csv(header: String, columns: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header;
    out.push_str(&columns.join(","));
    out.push('\n');
    for r in rows {
        out.push_str(&r.join(","));
        out.push('\n');
    }
    out
}

fn json_text(v: &Value) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn require_positive(field: &'static str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Validation {
            field,
            reason: format!("{field} must be positive (got {v})"),
        })
    }
}

fn require_count(field: &'static str, n: usize, min: usize) -> Result<usize> {
    if n >= min {
        Ok(n)
    } else {
        Err(Error::Validation {
            field,
            reason: format!("{field} must be at least {min} (got {n})"),
        })
    }
}

/// One row of the reference table: `(s, ω_s, Δ/ω_s, α)`.
pub type TableRow = (f64, f64, f64, f64);

pub const TABLE1_ROWS: [TableRow; 16] = [
    (1.0, 1.0, 0.01, 0.1),
    (1.0, 1.0, 0.05, 0.1),
    (1.0, 1.0, 0.1, 0.1),
    (1.0, 1.0, 0.2, 0.1),
    (1.0, 1.0, 0.1, 0.3),
    (1.0, 1.0, 0.1, 0.4),
    (1.0, 1.0, 0.2, 0.5),
    (0.9, 1.0, 0.1, 0.1),
    (0.9, 1.0, 0.05, 0.1),
    (0.9, 1.0, 0.2, 0.15),
    (0.8, 1.0, 0.05, 0.1),
    (0.8, 1.0, 0.1, 0.1),
    (0.8, 0.1, 1.0, 0.1),
    (0.6, 1.0, 0.1, 0.01),
    (0.5, 1.0, 0.2, 0.05),
    (0.5, 0.1, 1.0, 0.1),
];

/// Susceptibility report for one parameter point.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ShibaRow {
    pub s: f64,
    pub omega_s: f64,
    pub delta_over_omega_s: f64,
    pub alpha: f64,
    pub chi0: f64,
    pub limit: f64,
    pub shiba_ratio: f64,
    pub sum_rule: f64,
}

pub const SHIBA_COLUMNS: [&str; 8] = [
    "s",
    "omega_s",
    "delta_over_omega_s",
    "alpha",
    "chi0",
    "limit",
    "R",
    "C0",
];

pub fn shiba_row(bath: &BathSpec, sys: &SystemSpec) -> Result<ShibaRow> {
    let spec = Spectrum::from_params(bath, sys)?;
    Ok(ShibaRow {
        s: bath.s,
        omega_s: bath.omega_s,
        delta_over_omega_s: sys.delta / bath.omega_s,
        alpha: bath.alpha,
        chi0: spec.chi0()?,
        limit: spec.low_frequency_limit()?,
        shiba_ratio: spec.shiba_ratio()?,
        sum_rule: spec.sum_rule()?,
    })
}

impl ShibaRow {
    fn cells(&self) -> Vec<String> {
        [
            self.s,
            self.omega_s,
            self.delta_over_omega_s,
            self.alpha,
            self.chi0,
            self.limit,
            self.shiba_ratio,
            self.sum_rule,
        ]
        .iter()
        .map(|&v| num(v))
        .collect()
    }
}

pub fn table1() -> Result<Vec<ShibaRow>> {
    TABLE1_ROWS
        .par_iter()
        .map(|&(s, ws, ratio, alpha)| {
            shiba_row(&BathSpec::new(s, alpha, ws)?, &SystemSpec::new(ratio * ws)?)
        })
        .collect()
}

fn sidecar_path(output: &Path) -> PathBuf {
    output.with_extension("json")
}

fn diagram_json(d: &PhaseDiagram) -> Value {
    json!({
        "version": VERSION,
        "s": d.s,
        "omega_s": d.omega_s,
        "fits": d.fits,
        "failures": d.points.iter().filter(|p| !p.failures.is_empty()).map(|p| json!({
            "delta": p.delta,
            "messages": p.failures,
        })).collect::<Vec<_>>(),
    })
}

/// Execute one subcommand and return the files it produces.
pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    let st = &cfg.settings;
    let single = |content: String| Outcome {
        artifacts: vec![Artifact {
            path: cfg.output.clone(),
            content,
        }],
        failures: Vec::new(),
    };
    match &cfg.command {
        Command::Eta => {
            let (bath, sys) = st.model()?;
            let r = solve_eta(&bath, &sys)?;
            Ok(single(match cfg.format {
                Format::Json => json_text(&json!({
                    "version": VERSION, "bath": bath, "system": sys, "renorm": r,
                }))?,
                Format::Csv => csv(
                    header(cfg, &[]),
                    &["delta", "eta", "delta_r", "phase", "iterations", "residual"],
                    &[vec![
                        num(r.delta),
                        num(r.eta),
                        num(r.delta_r),
                        r.phase.to_string(),
                        r.iterations.to_string(),
                        num(r.residual),
                    ]],
                ),
            }))
        }
        Command::Dynamics => {
            let (bath, sys) = st.model()?;
            let d = analyze(&bath, &sys)?;
            let t_max = require_positive("t_max", st.t_max.unwrap_or(20.0 / d.renorm.delta_r))?;
            let n_t = require_count("n_t", st.n_t.unwrap_or(201), 2)?;
            let times = roots::linspace(0.0, t_max, n_t);
            let p = dynamics::p_curve(&d, &times)?;
            let ct = d.spectrum.cosine_transform()?;
            let c = times
                .par_iter()
                .map(|&t| ct.eval(t))
                .collect::<Result<Vec<_>>>()?;
            let flagged = c.iter().filter(|e| e.error > 1e-6).count();
            if flagged > 0 {
                log::warn!("{flagged} C(t) samples have error estimates above 1e-6");
            }
            let extra = [
                ("t_max", t_max.to_string()),
                ("n_t", n_t.to_string()),
                ("eta", num(d.renorm.eta)),
                ("omega0", opt_num(d.omega0)),
                ("gamma", num(d.gamma_decay)),
                ("coherence", d.coherence.to_string()),
            ];
            Ok(single(match cfg.format {
                Format::Json => json_text(&json!({
                    "version": VERSION, "bath": bath, "system": sys, "renorm": d.renorm,
                    "omega0": d.omega0, "gamma": d.gamma_decay, "coherence": d.coherence,
                    "t": times, "p": p.iter().map(|e| e.value).collect::<Vec<_>>(),
                    "c": c.iter().map(|e| e.value).collect::<Vec<_>>(),
                    "c_error": c.iter().map(|e| e.error).collect::<Vec<_>>(),
                }))?,
                Format::Csv => {
                    let rows: Vec<Vec<String>> = times
                        .iter()
                        .zip(p.iter().zip(&c))
                        .map(|(t, (p, c))| vec![num(*t), num(p.value), num(c.value), num(c.error)])
                        .collect();
                    csv(header(cfg, &extra), &["t", "p", "c", "c_error"], &rows)
                }
            }))
        }
        Command::Spectrum => {
            let (bath, sys) = st.model()?;
            let spec = Spectrum::from_params(&bath, &sys)?;
            let lo = require_positive("omega_min", st.omega_min.unwrap_or(1e-4))?;
            let hi = st.omega_max.unwrap_or(0.99);
            if !(hi > lo && hi < 1.0) {
                return Err(Error::Validation {
                    field: "omega_max",
                    reason: format!("need omega_min < omega_max < 1 (got {lo}, {hi})"),
                });
            }
            let n = require_count("n_omega", st.n_omega.unwrap_or(200), 2)?;
            let grid = roots::logspace(lo, hi, n);
            let rows = grid
                .par_iter()
                .map(|&w| {
                    Ok([
                        w,
                        spec.level_shift(w)?,
                        spec.damping(w),
                        spec.correlation(w)?,
                        spec.chi_im(w)?,
                        spec.s_of_omega(w)?,
                    ])
                })
                .collect::<Result<Vec<[f64; 6]>>>()?;
            let peaks = spec.s_peaks()?;
            let extra = [
                ("eta", num(spec.renorm.eta)),
                ("r0", num(spec.r0)),
                ("omega0", opt_num(spec.pole)),
                ("s_zero_limit", spec.s_zero_limit().map(num).unwrap_or_default()),
                (
                    "s_peaks",
                    peaks.iter().map(|p| num(p.0)).collect::<Vec<_>>().join(" "),
                ),
            ];
            let cols = ["omega", "r", "gamma", "c", "chi_im", "s_omega"];
            Ok(single(match cfg.format {
                Format::Json => {
                    let mut obj = json!({
                        "version": VERSION, "bath": bath, "system": sys, "renorm": spec.renorm,
                        "r0": spec.r0, "omega0": spec.pole, "s_peaks": peaks,
                    });
                    for (i, c) in cols.iter().enumerate() {
                        obj[*c] = json!(rows.iter().map(|r| r[i]).collect::<Vec<_>>());
                    }
                    json_text(&obj)?
                }
                Format::Csv => csv(
                    header(cfg, &extra),
                    &cols,
                    &rows
                        .iter()
                        .map(|r| r.iter().map(|&v| num(v)).collect())
                        .collect::<Vec<_>>(),
                ),
            }))
        }
        Command::Shiba => {
            let (bath, sys) = st.model()?;
            let row = shiba_row(&bath, &sys)?;
            Ok(single(match cfg.format {
                Format::Json => json_text(&json!({"version": VERSION, "row": row}))?,
                Format::Csv => csv(header(cfg, &[]), &SHIBA_COLUMNS, &[row.cells()]),
            }))
        }
        Command::Table1 => {
            let rows = table1()?;
            Ok(single(match cfg.format {
                Format::Json => json_text(&json!({"version": VERSION, "rows": rows}))?,
                Format::Csv => csv(
                    format!("# spinboson {VERSION}\n# command = table1\n# omega_c = 1\n"),
                    &SHIBA_COLUMNS,
                    &rows.iter().map(ShibaRow::cells).collect::<Vec<_>>(),
                ),
            }))
        }
        Command::PhaseDiagram => {
            let s = st.s.ok_or(Error::Validation {
                field: "s",
                reason: "s required".into(),
            })?;
            let lo = require_positive("delta_min", st.delta_min.unwrap_or(1e-4))?;
            let hi = st.delta_max.unwrap_or(1e-1);
            if !(hi > lo && hi < 1.0) {
                return Err(Error::Validation {
                    field: "delta_max",
                    reason: format!("need delta_min < delta_max < 1 (got {lo}, {hi})"),
                });
            }
            let per = require_count(
                "per_decade",
                st.per_decade.unwrap_or(criticality::DEFAULT_PER_DECADE),
                1,
            )?;
            let grid = criticality::delta_grid(lo, hi, per);
            let d = criticality::phase_diagram(s, st.omega_s(), &grid)?;
            let failures: Vec<String> = d
                .points
                .iter()
                .flat_map(|p| p.failures.iter().map(move |m| format!("delta = {}: {m}", p.delta)))
                .collect();
            for f in &failures {
                log::warn!("{f}");
            }
            let side = diagram_json(&d);
            let mut artifacts = Vec::new();
            match cfg.format {
                Format::Json => {
                    let mut full = side.clone();
                    full["points"] = json!(d.points);
                    artifacts.push(Artifact {
                        path: cfg.output.clone(),
                        content: json_text(&full)?,
                    });
                }
                Format::Csv => {
                    let mut extra = vec![
                        ("delta_min", lo.to_string()),
                        ("delta_max", hi.to_string()),
                        ("per_decade", per.to_string()),
                    ];
                    for f in &d.fits {
                        extra.push(("fit", format!("{} exponent {} residual {}", f.boundary, num(f.exponent), num(f.residual))));
                    }
                    let rows: Vec<Vec<String>> = d
                        .points
                        .iter()
                        .map(|p| {
                            vec![num(p.delta), opt_num(p.alpha_l), opt_num(p.alpha_c), opt_num(p.alpha_c_star)]
                        })
                        .collect();
                    artifacts.push(Artifact {
                        path: cfg.output.clone(),
                        content: csv(
                            header(cfg, &extra),
                            &["delta", "alpha_l", "alpha_c", "alpha_c_star"],
                            &rows,
                        ),
                    });
                    if let Some(out) = &cfg.output {
                        artifacts.push(Artifact {
                            path: Some(sidecar_path(out)),
                            content: json_text(&side)?,
                        });
                    }
                }
            }
            Ok(Outcome {
                artifacts,
                failures,
            })
        }
        Command::OracleCheck { levels } => {
            let (bath, sys) = st.model()?;
            let d = analyze(&bath, &sys)?;
            let n_modes = require_count("n_modes", st.n_modes.unwrap_or(2000), 2)?;
            let db = oracle::discretize(&bath, &d.renorm, n_modes)?;
            let lv = oracle::solve_levels(&db)?;
            let t_max = require_positive("t_max", st.t_max.unwrap_or(10.0 / d.renorm.delta_r))?;
            let n_t = require_count("n_t", st.n_t.unwrap_or(401), 2)?;
            let times = roots::linspace(0.0, t_max, n_t);
            let pole = dynamics::p_curve(&d, &times)?;
            let ct = d.spectrum.cosine_transform()?;
            let rows = times
                .par_iter()
                .zip(&pole)
                .map(|(&t, p)| Ok([t, oracle::p_of_t_discrete(&lv, &d.renorm, t)?, p.value, ct.eval(t)?.value]))
                .collect::<Result<Vec<[f64; 4]>>>()?;
            let sup = |j: usize| rows.iter().map(|r| (r[1] - r[j]).abs()).fold(0.0, f64::max);
            let completeness = oracle::completeness(&lv);
            let mut artifacts = Vec::new();
            if let Some(path) = levels {
                let mut buf = Vec::new();
                oracle::write_levels(&lv, &mut buf)?;
                artifacts.push(Artifact {
                    path: Some(path.clone()),
                    content: String::from_utf8(buf).expect("ascii output"),
                });
            }
            let summary = [
                ("n_modes", n_modes.to_string()),
                ("levels", lv.len().to_string()),
                ("completeness", num(completeness)),
                ("sup_discrete_vs_pole", num(sup(2))),
                ("sup_discrete_vs_spectral", num(sup(3))),
                ("t_max", t_max.to_string()),
                ("n_t", n_t.to_string()),
            ];
            let content = match cfg.format {
                Format::Json => json_text(&json!({
                    "version": VERSION, "bath": bath, "system": sys,
                    "summary": summary.iter().map(|(k, v)| (k.to_string(), json!(v))).collect::<serde_json::Map<_, _>>(),
                    "t": rows.iter().map(|r| r[0]).collect::<Vec<_>>(),
                    "p_discrete": rows.iter().map(|r| r[1]).collect::<Vec<_>>(),
                    "p_pole": rows.iter().map(|r| r[2]).collect::<Vec<_>>(),
                    "p_spectral": rows.iter().map(|r| r[3]).collect::<Vec<_>>(),
                }))?,
                Format::Csv => csv(
                    header(cfg, &summary),
                    &["t", "p_discrete", "p_pole", "p_spectral"],
                    &rows
                        .iter()
                        .map(|r| r.iter().map(|&v| num(v)).collect())
                        .collect::<Vec<_>>(),
                ),
            };
            artifacts.insert(
                0,
                Artifact {
                    path: cfg.output.clone(),
                    content,
                },
            );
            Ok(Outcome {
                artifacts,
                failures: Vec::new(),
            })
        }
    }
}

/// Write artifacts to their files, or to `stdout` when they have no path.
pub fn write_outcome<W: std::io::Write>(outcome: &Outcome, stdout: &mut W) -> Result<()> {
    for a in &outcome.artifacts {
        match &a.path {
            Some(p) => std::fs::write(p, &a.content)?,
            None => stdout.write_all(a.content.as_bytes())?,
        }
    }
    Ok(())
}
