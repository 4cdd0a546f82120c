//! Flat key-value run configuration with sweep support and figure presets.
//!
//! The format is line-oriented UTF-8 text: `#` starts a comment, every other
//! non-empty line is `key = value`. Sweeps use `sweep.<param> = start:stop:count`
//! or a comma-separated list. Unknown keys are rejected with their line
//! number. The same `key = value` lines are embedded (behind `# `) in every
//! output file's preamble, so a result file reproduces its own configuration.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use casimir_neq_core::constants::EV_TO_RAD_S;
use casimir_neq_core::material::{
    builtin, ingest_optical_table_auto, DielectricModel, DrudeParams,
};
use thiserror::Error;

/// Directory override for optical-data files referenced by relative paths.
pub const DATA_DIR_ENV: &str = "CASIMIR_NEQ_DATA_DIR";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: key `{key}`: {reason}")]
    BadValue {
        line: usize,
        key: String,
        reason: String,
    },
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Malformed { line: usize, text: String },
    #[error("missing required keys: {0}")]
    MissingKeys(String),
    #[error("at most 3 swept parameters per run, got {0}")]
    TooManySweeps(usize),
    #[error("unknown preset `{0}`, expected fig2 or fig3")]
    UnknownPreset(String),
    #[error("cannot read `{path}`: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("optical table `{path}`: {source}")]
    Table {
        path: String,
        #[source]
        source: casimir_neq_core::material::MaterialError,
    },
}

/// What the run computes at each grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunMode {
    DeltaF,
    Equilibrium,
    NeqPotential,
    Spectral,
    Diagnostics,
}

impl RunMode {
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "delta_f" => Self::DeltaF,
            "equilibrium" => Self::Equilibrium,
            "neq_potential" => Self::NeqPotential,
            "spectral" => Self::Spectral,
            "diagnostics" => Self::Diagnostics,
            _ => return None,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::DeltaF => "delta_f",
            Self::Equilibrium => "equilibrium",
            Self::NeqPotential => "neq_potential",
            Self::Spectral => "spectral",
            Self::Diagnostics => "diagnostics",
        }
    }
}

/// Metal model for the sphere, overlayer, and Au sector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelChoice {
    Drude,
    Plasma,
    Tabulated(String),
}

impl ModelChoice {
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "drude" => Self::Drude,
            "plasma" => Self::Plasma,
            other => Self::Tabulated(other.strip_prefix("tabulated:")?.to_string()),
        })
    }

    pub fn name(&self) -> String {
        match self {
            Self::Drude => "drude".into(),
            Self::Plasma => "plasma".into(),
            Self::Tabulated(path) => format!("tabulated:{path}"),
        }
    }
}

/// Plate sector selected by the single-sector modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sector {
    Au,
    Si,
}

/// Output format.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// A sweepable parameter, in canonical (emission) order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SweepParam {
    SeparationNm,
    T1K,
    T2K,
    OverlayerNm,
    SphereRadiusUm,
    OmegaRadS,
    Model,
}

impl SweepParam {
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "separation_nm" => Self::SeparationNm,
            "t1_k" => Self::T1K,
            "t2_k" => Self::T2K,
            "overlayer_nm" => Self::OverlayerNm,
            "sphere_radius_um" => Self::SphereRadiusUm,
            "omega_rad_s" => Self::OmegaRadS,
            "model" => Self::Model,
            _ => return None,
        })
    }

    pub fn key(&self) -> &'static str {
        match self {
            Self::SeparationNm => "separation_nm",
            Self::T1K => "t1_k",
            Self::T2K => "t2_k",
            Self::OverlayerNm => "overlayer_nm",
            Self::SphereRadiusUm => "sphere_radius_um",
            Self::OmegaRadS => "omega_rad_s",
            Self::Model => "model",
        }
    }
}

/// Values of one swept parameter.
#[derive(Debug, Clone, PartialEq)]
pub enum SweepValues {
    Numbers(Vec<f64>),
    Models(Vec<ModelChoice>),
}

impl SweepValues {
    pub fn len(&self) -> usize {
        match self {
            Self::Numbers(v) => v.len(),
            Self::Models(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn render(&self) -> String {
        match self {
            Self::Numbers(v) => v
                .iter()
                .map(|x| format!("{x}"))
                .collect::<Vec<_>>()
                .join(","),
            Self::Models(v) => v
                .iter()
                .map(|m| m.name())
                .collect::<Vec<_>>()
                .join(","),
        }
    }
}

/// Fully resolved run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: RunMode,
    pub model: ModelChoice,
    pub separation_nm: f64,
    pub sphere_radius_um: f64,
    pub overlayer_nm: f64,
    pub t1_k: f64,
    pub t2_k: f64,
    pub sector: Sector,
    pub omega_rad_s: f64,
    /// Optional silicon-sector table path; the built-in table when empty.
    pub si_table: Option<String>,
    /// Drude tail for user-supplied tabulated files, in eV.
    pub lowfreq_plasma_ev: f64,
    pub lowfreq_gamma_ev: f64,
    pub matsubara_rtol: f64,
    /// 0 means the separation/temperature-derived default.
    pub matsubara_max_terms: usize,
    pub neq_rtol: f64,
    pub omega_window_factor: f64,
    pub dissipation_floor: f64,
    pub max_subdivisions: usize,
    /// Sweeps in canonical parameter order.
    pub sweeps: Vec<(SweepParam, SweepValues)>,
    pub out: Option<String>,
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            mode: RunMode::DeltaF,
            model: ModelChoice::Drude,
            separation_nm: 300.0,
            sphere_radius_um: 150.0,
            overlayer_nm: 100.0,
            t1_k: 300.0,
            t2_k: 300.0,
            sector: Sector::Si,
            omega_rad_s: 2.0e12,
            si_table: None,
            lowfreq_plasma_ev: 8.9,
            lowfreq_gamma_ev: 0.035,
            matsubara_rtol: 1e-9,
            matsubara_max_terms: 0,
            neq_rtol: 1e-6,
            omega_window_factor: 50.0,
            dissipation_floor: 1e-4,
            max_subdivisions: 2000,
            sweeps: Vec::new(),
            out: None,
            format: OutputFormat::Csv,
        }
    }
}

/// Figure-reproduction presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Differential force vs separation, Drude gold, T₂ = 300 K,
    /// T₁ ∈ {300, 325, 350} K, a ∈ [200, 1000] nm.
    Fig2,
    /// Same sweep with the dissipationless plasma model.
    Fig3,
}

impl Preset {
    pub fn parse(s: &str) -> Result<Self, ConfigError> {
        match s {
            "fig2" => Ok(Self::Fig2),
            "fig3" => Ok(Self::Fig3),
            other => Err(ConfigError::UnknownPreset(other.to_string())),
        }
    }

    pub fn apply(self, cfg: &mut RunConfig) {
        cfg.mode = RunMode::DeltaF;
        cfg.model = match self {
            Self::Fig2 => ModelChoice::Drude,
            Self::Fig3 => ModelChoice::Plasma,
        };
        cfg.sphere_radius_um = 150.0;
        cfg.overlayer_nm = 100.0;
        cfg.t2_k = 300.0;
        cfg.sweeps = vec![
            (
                SweepParam::SeparationNm,
                SweepValues::Numbers(linspace(200.0, 1000.0, 17)),
            ),
            (
                SweepParam::T1K,
                SweepValues::Numbers(vec![300.0, 325.0, 350.0]),
            ),
        ];
    }
}

fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![start];
    }
    (0..count)
        .map(|i| start + (stop - start) * i as f64 / (count - 1) as f64)
        .collect()
}

/// Parse configuration text, applying any `figure:` preset first and the
/// remaining keys on top of it.
pub fn parse_run_config(source: &str) -> Result<RunConfig, ConfigError> {
    let mut entries: Vec<(usize, String, String)> = Vec::new();
    let mut preset: Option<Preset> = None;
    let mut mode_given = false;

    for (idx, raw) in source.lines().enumerate() {
        let line_no = idx + 1;
        let text = raw.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let Some((key, value)) = text.split_once('=') else {
            return Err(ConfigError::Malformed {
                line: line_no,
                text: text.to_string(),
            });
        };
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if key == "figure" {
            preset = Some(Preset::parse(&value)?);
        } else {
            if key == "mode" {
                mode_given = true;
            }
            entries.push((line_no, key, value));
        }
    }

    if preset.is_none() && entries.is_empty() {
        return Err(ConfigError::MissingKeys(
            "mode (or a `figure:` preset)".into(),
        ));
    }
    if preset.is_none() && !mode_given {
        return Err(ConfigError::MissingKeys("mode".into()));
    }

    let mut cfg = RunConfig::default();
    if let Some(p) = preset {
        p.apply(&mut cfg);
    }

    for (line, key, value) in entries {
        apply_key(&mut cfg, line, &key, &value)?;
    }

    validate(&cfg)?;
    Ok(cfg)
}

/// Load and parse a configuration file.
pub fn load_run_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_run_config(&text)
}

fn apply_key(cfg: &mut RunConfig, line: usize, key: &str, value: &str) -> Result<(), ConfigError> {
    let bad = |reason: String| ConfigError::BadValue {
        line,
        key: key.to_string(),
        reason,
    };
    let positive = |value: &str| -> Result<f64, ConfigError> {
        let v: f64 = value
            .parse()
            .map_err(|_| bad(format!("cannot parse `{value}` as a number")))?;
        if !(v > 0.0) || !v.is_finite() {
            return Err(bad(format!("must be positive, got {value}")));
        }
        Ok(v)
    };

    if let Some(param) = key.strip_prefix("sweep.") {
        let param = SweepParam::parse(param).ok_or_else(|| ConfigError::UnknownKey {
            line,
            key: key.to_string(),
        })?;
        let values = parse_sweep_values(param, value).map_err(bad)?;
        if values.is_empty() {
            return Err(bad("sweep has no values".into()));
        }
        cfg.sweeps.retain(|(p, _)| *p != param);
        cfg.sweeps.push((param, values));
        cfg.sweeps.sort_by_key(|(p, _)| *p);
        return Ok(());
    }

    match key {
        "mode" => {
            cfg.mode = RunMode::parse(value)
                .ok_or_else(|| bad(format!("unknown mode `{value}`")))?;
        }
        "model" => {
            cfg.model = ModelChoice::parse(value)
                .ok_or_else(|| bad(format!("unknown model `{value}`")))?;
        }
        "separation_nm" => cfg.separation_nm = positive(value)?,
        "sphere_radius_um" => cfg.sphere_radius_um = positive(value)?,
        "overlayer_nm" => cfg.overlayer_nm = positive(value)?,
        "t1_k" => cfg.t1_k = positive(value)?,
        "t2_k" => cfg.t2_k = positive(value)?,
        "omega_rad_s" => cfg.omega_rad_s = positive(value)?,
        "sector" => {
            cfg.sector = match value {
                "au" => Sector::Au,
                "si" => Sector::Si,
                _ => return Err(bad(format!("unknown sector `{value}`, expected au or si"))),
            };
        }
        "si_table" => cfg.si_table = Some(value.to_string()),
        "lowfreq_plasma_ev" => cfg.lowfreq_plasma_ev = positive(value)?,
        "lowfreq_gamma_ev" => {
            let v: f64 = value
                .parse()
                .map_err(|_| bad(format!("cannot parse `{value}` as a number")))?;
            if !(v >= 0.0) || !v.is_finite() {
                return Err(bad(format!("must be non-negative, got {value}")));
            }
            cfg.lowfreq_gamma_ev = v;
        }
        "matsubara_rtol" => cfg.matsubara_rtol = positive(value)?,
        "matsubara_max_terms" => {
            cfg.matsubara_max_terms = value
                .parse()
                .map_err(|_| bad(format!("cannot parse `{value}` as a count")))?;
        }
        "neq_rtol" => cfg.neq_rtol = positive(value)?,
        "omega_window_factor" => cfg.omega_window_factor = positive(value)?,
        "dissipation_floor" => cfg.dissipation_floor = positive(value)?,
        "max_subdivisions" => {
            let v: usize = value
                .parse()
                .map_err(|_| bad(format!("cannot parse `{value}` as a count")))?;
            if v == 0 {
                return Err(bad("must be at least 1".into()));
            }
            cfg.max_subdivisions = v;
        }
        "out" => cfg.out = Some(value.to_string()),
        "format" => {
            cfg.format = match value {
                "csv" => OutputFormat::Csv,
                "json" => OutputFormat::Json,
                _ => return Err(bad(format!("unknown format `{value}`, expected csv or json"))),
            };
        }
        _ => {
            return Err(ConfigError::UnknownKey {
                line,
                key: key.to_string(),
            })
        }
    }
    Ok(())
}

fn parse_sweep_values(param: SweepParam, value: &str) -> Result<SweepValues, String> {
    if param == SweepParam::Model {
        let models = value
            .split(',')
            .map(str::trim)
            .map(|tok| ModelChoice::parse(tok).ok_or_else(|| format!("unknown model `{tok}`")))
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(SweepValues::Models(models));
    }
    let numbers = if value.contains(':') {
        let parts: Vec<&str> = value.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("expected start:stop:count, got `{value}`"));
        }
        let start: f64 = parts[0]
            .trim()
            .parse()
            .map_err(|_| format!("bad start `{}`", parts[0]))?;
        let stop: f64 = parts[1]
            .trim()
            .parse()
            .map_err(|_| format!("bad stop `{}`", parts[1]))?;
        let count: usize = parts[2]
            .trim()
            .parse()
            .map_err(|_| format!("bad count `{}`", parts[2]))?;
        if count == 0 {
            return Err("count must be at least 1".into());
        }
        linspace(start, stop, count)
    } else {
        value
            .split(',')
            .map(str::trim)
            .map(|tok| tok.parse::<f64>().map_err(|_| format!("bad number `{tok}`")))
            .collect::<Result<Vec<_>, _>>()?
    };
    for &v in &numbers {
        if !(v > 0.0) || !v.is_finite() {
            return Err(format!("sweep values must be positive, got {v}"));
        }
    }
    Ok(SweepValues::Numbers(numbers))
}

fn validate(cfg: &RunConfig) -> Result<(), ConfigError> {
    if cfg.sweeps.len() > 3 {
        return Err(ConfigError::TooManySweeps(cfg.sweeps.len()));
    }
    Ok(())
}

/// Render the resolved configuration as parseable `key = value` lines, in a
/// fixed order. Parsing the result reproduces the configuration exactly.
pub fn render_run_config(cfg: &RunConfig) -> String {
    let mut out = String::new();
    let mut kv = |k: &str, v: String| writeln!(out, "{k} = {v}").unwrap();
    kv("mode", cfg.mode.name().into());
    kv("model", cfg.model.name());
    kv("separation_nm", format!("{}", cfg.separation_nm));
    kv("sphere_radius_um", format!("{}", cfg.sphere_radius_um));
    kv("overlayer_nm", format!("{}", cfg.overlayer_nm));
    kv("t1_k", format!("{}", cfg.t1_k));
    kv("t2_k", format!("{}", cfg.t2_k));
    kv(
        "sector",
        match cfg.sector {
            Sector::Au => "au".into(),
            Sector::Si => "si".into(),
        },
    );
    kv("omega_rad_s", format!("{}", cfg.omega_rad_s));
    if let Some(path) = &cfg.si_table {
        kv("si_table", path.clone());
    }
    kv("lowfreq_plasma_ev", format!("{}", cfg.lowfreq_plasma_ev));
    kv("lowfreq_gamma_ev", format!("{}", cfg.lowfreq_gamma_ev));
    kv("matsubara_rtol", format!("{}", cfg.matsubara_rtol));
    kv(
        "matsubara_max_terms",
        format!("{}", cfg.matsubara_max_terms),
    );
    kv("neq_rtol", format!("{}", cfg.neq_rtol));
    kv(
        "omega_window_factor",
        format!("{}", cfg.omega_window_factor),
    );
    kv("dissipation_floor", format!("{}", cfg.dissipation_floor));
    kv("max_subdivisions", format!("{}", cfg.max_subdivisions));
    for (param, values) in &cfg.sweeps {
        kv(&format!("sweep.{}", param.key()), values.render());
    }
    if let Some(path) = &cfg.out {
        kv("out", path.clone());
    }
    kv(
        "format",
        match cfg.format {
            OutputFormat::Csv => "csv".into(),
            OutputFormat::Json => "json".into(),
        },
    );
    out
}

/// Resolve a data-file path against [`DATA_DIR_ENV`] when it is relative.
pub fn resolve_data_path(path: &str) -> PathBuf {
    let p = PathBuf::from(path);
    if p.is_relative() {
        if let Ok(dir) = std::env::var(DATA_DIR_ENV) {
            return PathBuf::from(dir).join(p);
        }
    }
    p
}

/// Instantiate the metal model named by a [`ModelChoice`].
pub fn build_metal_model(
    choice: &ModelChoice,
    lowfreq_plasma_ev: f64,
    lowfreq_gamma_ev: f64,
) -> Result<DielectricModel, ConfigError> {
    Ok(match choice {
        ModelChoice::Drude => DielectricModel::gold_drude(),
        ModelChoice::Plasma => DielectricModel::gold_plasma(),
        ModelChoice::Tabulated(path) => {
            let resolved = resolve_data_path(path);
            let text = fs::read_to_string(&resolved).map_err(|source| ConfigError::Io {
                path: resolved.display().to_string(),
                source,
            })?;
            let tail = DrudeParams::new(
                lowfreq_plasma_ev * EV_TO_RAD_S,
                lowfreq_gamma_ev * EV_TO_RAD_S,
            )
            .map_err(|source| ConfigError::Table {
                path: resolved.display().to_string(),
                source,
            })?;
            let table = ingest_optical_table_auto(std::io::Cursor::new(text), tail).map_err(
                |source| ConfigError::Table {
                    path: resolved.display().to_string(),
                    source,
                },
            )?;
            DielectricModel::Tabulated(table)
        }
    })
}

/// Instantiate the silicon-sector model.
pub fn build_silicon_model(cfg: &RunConfig) -> Result<DielectricModel, ConfigError> {
    match &cfg.si_table {
        None => Ok(builtin::silicon_table()),
        Some(path) => build_metal_model(
            &ModelChoice::Tabulated(path.clone()),
            cfg.lowfreq_plasma_ev,
            cfg.lowfreq_gamma_ev,
        ),
    }
}
