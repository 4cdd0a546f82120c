//! Dielectric response models: Drude and plasma metals, vacuum, ideal
//! mirrors, and tabulated optical data with Drude low-frequency extrapolation.
//!
//! Every model provides the complex permittivity ε(ω) on the real frequency
//! axis and the real-valued permittivity ε(iξ) on the imaginary axis. For
//! tabulated data the imaginary-axis values are produced through the
//! Kramers-Kronig quadrature
//!
//! ```text
//! ε(iξ) = 1 + (2/π) ∫₀^∞ dω ω·Im ε(ω) / (ω² + ξ²)
//! ```
//!
//! with the Drude tail below the table integrated in closed form and an
//! ω⁻³ high-frequency closure matched at the last row.

use std::io::BufRead;

use num_complex::Complex64;
use thiserror::Error;

use crate::constants::{EV_TO_RAD_S, SPEED_OF_LIGHT};
use crate::quadrature::{self, AdaptiveSpec};

/// Errors from material construction and evaluation.
#[derive(Debug, Error)]
pub enum MaterialError {
    #[error("frequency must be positive, got {0:e} rad/s")]
    NonPositiveFrequency(f64),
    #[error("plasma frequency must be positive, got {0:e} rad/s")]
    InvalidPlasmaFrequency(f64),
    #[error("relaxation rate must be non-negative, got {0:e} rad/s")]
    InvalidRelaxationRate(f64),
    #[error("optical table ingestion failed at line {line}: {reason}")]
    Ingest { line: usize, reason: String },
    #[error("optical table needs at least 2 distinct rows, got {0}")]
    TooFewRows(usize),
    #[error("failed to read optical data: {0}")]
    Io(#[from] std::io::Error),
}

/// Drude-model parameters: ε(ω) = 1 − ω_p²/[ω(ω + iγ)].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrudeParams {
    /// Plasma frequency ω_p, rad/s.
    pub plasma_frequency: f64,
    /// Relaxation rate γ, rad/s. Zero gives the dissipationless plasma model.
    pub relaxation_rate: f64,
}

impl DrudeParams {
    pub fn new(plasma_frequency: f64, relaxation_rate: f64) -> Result<Self, MaterialError> {
        if !(plasma_frequency > 0.0) {
            return Err(MaterialError::InvalidPlasmaFrequency(plasma_frequency));
        }
        if !(relaxation_rate >= 0.0) {
            return Err(MaterialError::InvalidRelaxationRate(relaxation_rate));
        }
        Ok(Self {
            plasma_frequency,
            relaxation_rate,
        })
    }

    /// Gold, ω_p = 8.9 eV/ħ, γ = 0.035 eV/ħ.
    pub fn gold() -> Self {
        Self {
            plasma_frequency: 8.9 * EV_TO_RAD_S,
            relaxation_rate: 0.035 * EV_TO_RAD_S,
        }
    }

    fn eps_real_axis(&self, omega: f64) -> Complex64 {
        let wp2 = self.plasma_frequency * self.plasma_frequency;
        let denom = Complex64::new(omega * omega, omega * self.relaxation_rate);
        Complex64::new(1.0, 0.0) - wp2 / denom
    }

    fn eps_imag_axis(&self, xi: f64) -> f64 {
        let wp2 = self.plasma_frequency * self.plasma_frequency;
        1.0 + wp2 / (xi * (xi + self.relaxation_rate))
    }

    fn eps_upper_half_plane(&self, z: Complex64) -> Complex64 {
        let wp2 = self.plasma_frequency * self.plasma_frequency;
        Complex64::new(1.0, 0.0) - wp2 / (z * (z + Complex64::new(0.0, self.relaxation_rate)))
    }
}

/// One tabulated row: angular frequency and complex permittivity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableRow {
    /// Angular frequency, rad/s.
    pub omega: f64,
    /// Re ε(ω).
    pub eps_re: f64,
    /// Im ε(ω), ≥ 0.
    pub eps_im: f64,
}

/// Column convention of an optical data stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    /// Rows carry (frequency, n, k); ε = (n + ik)².
    RefractiveIndex,
    /// Rows carry (frequency, Re ε, Im ε).
    Permittivity,
}

/// Frequency unit of an optical data stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrequencyUnit {
    /// Photon energies in eV; converted via 1 eV/ħ.
    ElectronVolt,
    /// Angular frequencies in rad/s.
    RadPerSecond,
}

/// Validated optical data table with a Drude low-frequency tail.
#[derive(Debug, Clone, PartialEq)]
pub struct OpticalTable {
    rows: Vec<TableRow>,
    low_freq_model: DrudeParams,
    provenance: Option<String>,
    lossless: bool,
}

impl OpticalTable {
    /// Build from already-converted rows; sorts ascending and merges
    /// duplicate frequencies by averaging.
    pub fn new(mut rows: Vec<TableRow>, low_freq_model: DrudeParams) -> Result<Self, MaterialError> {
        for (i, row) in rows.iter().enumerate() {
            if !row.omega.is_finite() || !row.eps_re.is_finite() || !row.eps_im.is_finite() {
                return Err(MaterialError::Ingest {
                    line: i + 1,
                    reason: "non-finite value".into(),
                });
            }
            if row.omega <= 0.0 {
                return Err(MaterialError::Ingest {
                    line: i + 1,
                    reason: format!("frequency must be positive, got {:e}", row.omega),
                });
            }
            if row.eps_im < 0.0 {
                return Err(MaterialError::Ingest {
                    line: i + 1,
                    reason: format!("Im eps must be non-negative, got {:e}", row.eps_im),
                });
            }
        }
        rows.sort_by(|a, b| a.omega.total_cmp(&b.omega));
        let mut merged: Vec<TableRow> = Vec::with_capacity(rows.len());
        for row in rows {
            match merged.last_mut() {
                Some(last) if last.omega == row.omega => {
                    last.eps_re = 0.5 * (last.eps_re + row.eps_re);
                    last.eps_im = 0.5 * (last.eps_im + row.eps_im);
                }
                _ => merged.push(row),
            }
        }
        if merged.len() < 2 {
            return Err(MaterialError::TooFewRows(merged.len()));
        }
        let lossless =
            low_freq_model.relaxation_rate == 0.0 && merged.iter().all(|r| r.eps_im == 0.0);
        Ok(Self {
            rows: merged,
            low_freq_model,
            provenance: None,
            lossless,
        })
    }

    pub fn with_provenance(mut self, provenance: impl Into<String>) -> Self {
        self.provenance = Some(provenance.into());
        self
    }

    pub fn rows(&self) -> &[TableRow] {
        &self.rows
    }

    pub fn low_freq_model(&self) -> DrudeParams {
        self.low_freq_model
    }

    pub fn provenance(&self) -> Option<&str> {
        self.provenance.as_deref()
    }

    fn omega_min(&self) -> f64 {
        self.rows.first().expect("at least 2 rows").omega
    }

    fn omega_max(&self) -> f64 {
        self.rows.last().expect("at least 2 rows").omega
    }

    /// Im ε interpolated inside the table: log-log power law between rows,
    /// falling back to linear where an endpoint vanishes.
    fn interp_im(&self, omega: f64, seg: usize) -> f64 {
        let lo = self.rows[seg];
        let hi = self.rows[seg + 1];
        if lo.eps_im > 0.0 && hi.eps_im > 0.0 {
            let p = (hi.eps_im / lo.eps_im).ln() / (hi.omega / lo.omega).ln();
            lo.eps_im * (omega / lo.omega).powf(p)
        } else {
            let t = (omega - lo.omega) / (hi.omega - lo.omega);
            lo.eps_im + t * (hi.eps_im - lo.eps_im)
        }
    }

    fn interp_re(&self, omega: f64, seg: usize) -> f64 {
        let lo = self.rows[seg];
        let hi = self.rows[seg + 1];
        let t = (omega / lo.omega).ln() / (hi.omega / lo.omega).ln();
        lo.eps_re + t * (hi.eps_re - lo.eps_re)
    }

    fn segment_of(&self, omega: f64) -> usize {
        match self
            .rows
            .binary_search_by(|row| row.omega.total_cmp(&omega))
        {
            Ok(i) => i.min(self.rows.len() - 2),
            Err(i) => i.saturating_sub(1).min(self.rows.len() - 2),
        }
    }

    fn eps_real_axis(&self, omega: f64) -> Complex64 {
        if omega < self.omega_min() {
            return self.low_freq_model.eps_real_axis(omega);
        }
        if omega > self.omega_max() {
            // ε → 1 closure: Re like 1/ω², Im like 1/ω³ matched at the last row.
            let last = *self.rows.last().expect("at least 2 rows");
            let ratio = last.omega / omega;
            let re = 1.0 + (last.eps_re - 1.0) * ratio * ratio;
            let im = last.eps_im * ratio * ratio * ratio;
            return Complex64::new(re, im);
        }
        let seg = self.segment_of(omega);
        Complex64::new(self.interp_re(omega, seg), self.interp_im(omega, seg))
    }

    /// Kramers-Kronig continuation onto the imaginary axis.
    fn eps_imag_axis(&self, xi: f64) -> f64 {
        let w1 = self.omega_min();
        let wn = self.omega_max();

        // Drude tail below the table: γ ω_p² ∫₀^{w1} dω/((ω²+γ²)(ω²+ξ²)).
        let gamma = self.low_freq_model.relaxation_rate;
        let wp2 = self.low_freq_model.plasma_frequency.powi(2);
        let low = if gamma > 0.0 {
            gamma * wp2 * lorentzian_pair_integral(w1, gamma, xi)
        } else {
            0.0
        };

        // Table body, segment by segment.
        let spec = AdaptiveSpec::new(1e-9, 0.0, 60);
        let mut body = 0.0;
        for seg in 0..self.rows.len() - 1 {
            let (a, b) = (self.rows[seg].omega, self.rows[seg + 1].omega);
            if self.rows[seg].eps_im == 0.0 && self.rows[seg + 1].eps_im == 0.0 {
                continue;
            }
            let piece = quadrature::integrate(
                |w| w * self.interp_im(w, seg) / (w * w + xi * xi),
                a,
                b,
                &spec,
            )
            .map(|r| r.value)
            // A hard panel inside one table segment still yields a usable
            // partial estimate at far better than table accuracy.
            .unwrap_or_else(|e| e.partial);
            body += piece;
        }

        // ω⁻³ closure above the table: Im ε = Im ε_N (ω_N/ω)³, whose
        // contribution collapses to Im ε_N · h(ξ/ω_N).
        let im_n = self.rows.last().expect("at least 2 rows").eps_im;
        let high = im_n * inverse_quartic_tail(xi / wn);

        1.0 + std::f64::consts::FRAC_2_PI * (low + body + high)
    }
}

/// ∫₀^W dω / ((ω²+γ²)(ω²+ξ²)), stable for ξ ≈ γ.
fn lorentzian_pair_integral(upper: f64, gamma: f64, xi: f64) -> f64 {
    let g2 = gamma * gamma;
    let x2 = xi * xi;
    if (x2 - g2).abs() > 1e-6 * (x2 + g2) {
        ((upper / gamma).atan() / gamma - (upper / xi).atan() / xi) / (x2 - g2)
    } else {
        // Degenerate limit ξ → γ evaluated at the midpoint scale.
        let m = 0.5 * (x2 + g2);
        let s = m.sqrt();
        (upper / s).atan() / (2.0 * m * s) + upper / (2.0 * m * (m + upper * upper))
    }
}

/// h(r) = ∫_1^∞ dx / (x²(x²+r²)); the ω⁻³ tail reduces to Im ε_N · h(ξ/ω_N)/ω_N.
fn inverse_quartic_tail(r: f64) -> f64 {
    if r < 0.25 {
        let r2 = r * r;
        // 1/3 − r²/5 + r⁴/7 − r⁶/9 + r⁸/11 − r¹⁰/13
        let mut acc = 0.0;
        let mut pow = 1.0;
        for (k, sign) in [(3.0, 1.0), (5.0, -1.0), (7.0, 1.0), (9.0, -1.0), (11.0, 1.0), (13.0, -1.0)]
        {
            acc += sign * pow / k;
            pow *= r2;
        }
        acc
    } else {
        (1.0 - r.atan() / r) / (r * r)
    }
}

/// Low-frequency (static) character of a model, used for exact ξ → 0 limits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StaticResponse {
    /// ε ≡ 1.
    Vacuum,
    /// ε(iξ) → σ/ξ with conductivity scale σ = ω_p²/γ (rad/s).
    DrudeConductor { sigma_scale: f64 },
    /// ε(iξ) diverges like ω_p²/ξ².
    PlasmaMetal { plasma_frequency: f64 },
    /// Perfect reflector.
    Mirror,
}

/// A material's permittivity on the real and imaginary frequency axes.
#[derive(Debug, Clone, PartialEq)]
pub enum DielectricModel {
    Drude(DrudeParams),
    /// Dissipationless plasma: Drude with γ = 0.
    Plasma(DrudeParams),
    Tabulated(OpticalTable),
    /// ε ≡ 1 everywhere.
    Vacuum,
    /// Formal ε → ∞ limit; reflection amplitudes are ±1 by polarization.
    IdealMirror,
}

impl DielectricModel {
    pub fn drude(plasma_frequency: f64, relaxation_rate: f64) -> Result<Self, MaterialError> {
        Ok(Self::Drude(DrudeParams::new(plasma_frequency, relaxation_rate)?))
    }

    pub fn plasma(plasma_frequency: f64) -> Result<Self, MaterialError> {
        Ok(Self::Plasma(DrudeParams::new(plasma_frequency, 0.0)?))
    }

    /// Gold with the default Drude parameters.
    pub fn gold_drude() -> Self {
        Self::Drude(DrudeParams::gold())
    }

    /// Gold conduction electrons as a dissipationless plasma.
    pub fn gold_plasma() -> Self {
        Self::Plasma(DrudeParams {
            relaxation_rate: 0.0,
            ..DrudeParams::gold()
        })
    }

    /// Complex permittivity ε(ω) on the real frequency axis, ω > 0.
    pub fn permittivity_real_axis(&self, omega: f64) -> Result<Complex64, MaterialError> {
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(MaterialError::NonPositiveFrequency(omega));
        }
        Ok(match self {
            Self::Drude(p) | Self::Plasma(p) => p.eps_real_axis(omega),
            Self::Tabulated(t) => t.eps_real_axis(omega),
            Self::Vacuum => Complex64::new(1.0, 0.0),
            Self::IdealMirror => Complex64::new(f64::INFINITY, 0.0),
        })
    }

    /// Real permittivity ε(iξ) on the imaginary frequency axis, ξ > 0.
    pub fn permittivity_imag_axis(&self, xi: f64) -> Result<f64, MaterialError> {
        if !(xi > 0.0) || !xi.is_finite() {
            return Err(MaterialError::NonPositiveFrequency(xi));
        }
        Ok(match self {
            Self::Drude(p) | Self::Plasma(p) => p.eps_imag_axis(xi),
            Self::Tabulated(t) => t.eps_imag_axis(xi),
            Self::Vacuum => 1.0,
            Self::IdealMirror => f64::INFINITY,
        })
    }

    /// Permittivity slightly off the real axis, Im z > 0. Used by the
    /// vanishing-dissipation regularization for lossless models; tabulated
    /// data falls back to the real-axis value at Re z.
    pub(crate) fn permittivity_upper_half_plane(&self, z: Complex64) -> Complex64 {
        match self {
            Self::Drude(p) | Self::Plasma(p) => p.eps_upper_half_plane(z),
            Self::Tabulated(t) => t.eps_real_axis(z.re),
            Self::Vacuum => Complex64::new(1.0, 0.0),
            Self::IdealMirror => Complex64::new(f64::INFINITY, 0.0),
        }
    }

    /// Field-amplitude decay length δ = c / (ω · Im √ε(ω)) in meters.
    /// Lossless transparent media give infinity; the ideal mirror gives zero.
    pub fn penetration_depth(&self, omega: f64) -> Result<f64, MaterialError> {
        if let Self::IdealMirror = self {
            if !(omega > 0.0) || !omega.is_finite() {
                return Err(MaterialError::NonPositiveFrequency(omega));
            }
            return Ok(0.0);
        }
        let eps = self.permittivity_real_axis(omega)?;
        let im_n = eps.sqrt().im;
        Ok(if im_n > 0.0 {
            SPEED_OF_LIGHT / (omega * im_n)
        } else {
            f64::INFINITY
        })
    }

    /// True when the model has no absorption anywhere on the real axis.
    pub fn is_lossless(&self) -> bool {
        match self {
            Self::Drude(p) => p.relaxation_rate == 0.0,
            Self::Plasma(_) | Self::Vacuum | Self::IdealMirror => true,
            Self::Tabulated(t) => t.lossless,
        }
    }

    /// Exact ξ → 0 character on the imaginary axis.
    pub fn static_response(&self) -> StaticResponse {
        let from_drude = |p: &DrudeParams| {
            if p.relaxation_rate > 0.0 {
                StaticResponse::DrudeConductor {
                    sigma_scale: p.plasma_frequency * p.plasma_frequency / p.relaxation_rate,
                }
            } else {
                StaticResponse::PlasmaMetal {
                    plasma_frequency: p.plasma_frequency,
                }
            }
        };
        match self {
            Self::Vacuum => StaticResponse::Vacuum,
            Self::IdealMirror => StaticResponse::Mirror,
            Self::Drude(p) | Self::Plasma(p) => from_drude(p),
            Self::Tabulated(t) => from_drude(&t.low_freq_model),
        }
    }
}

/// Parse an optical data stream into a validated table.
///
/// The stream is UTF-8 text: `#` starts a comment, a `units: eV|rad_s` header
/// is mandatory, an optional `format: nk|eps` header must agree with the
/// `format` argument, and an optional `provenance:` header is recorded on the
/// table. Data rows are whitespace-separated triples.
pub fn ingest_optical_table<R: BufRead>(
    source: R,
    format: TableFormat,
    low_freq_model: DrudeParams,
) -> Result<OpticalTable, MaterialError> {
    let mut unit: Option<FrequencyUnit> = None;
    let mut provenance: Option<String> = None;
    let mut rows: Vec<(usize, TableRow)> = Vec::new();

    for (idx, line) in source.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        if let Some(value) = text.strip_prefix("units:") {
            unit = Some(match value.trim() {
                "eV" => FrequencyUnit::ElectronVolt,
                "rad_s" => FrequencyUnit::RadPerSecond,
                other => {
                    return Err(MaterialError::Ingest {
                        line: line_no,
                        reason: format!("unknown unit `{other}`, expected eV or rad_s"),
                    })
                }
            });
            continue;
        }
        if let Some(value) = text.strip_prefix("format:") {
            let declared = match value.trim() {
                "nk" => TableFormat::RefractiveIndex,
                "eps" => TableFormat::Permittivity,
                other => {
                    return Err(MaterialError::Ingest {
                        line: line_no,
                        reason: format!("unknown format `{other}`, expected nk or eps"),
                    })
                }
            };
            if declared != format {
                return Err(MaterialError::Ingest {
                    line: line_no,
                    reason: "format header disagrees with the requested format".into(),
                });
            }
            continue;
        }
        if let Some(value) = text.strip_prefix("provenance:") {
            provenance = Some(value.trim().to_string());
            continue;
        }
        if text.contains(':') && text.split_whitespace().count() != 3 {
            return Err(MaterialError::Ingest {
                line: line_no,
                reason: format!("unknown header `{text}`"),
            });
        }

        let unit = unit.ok_or(MaterialError::Ingest {
            line: line_no,
            reason: "data row before the mandatory `units:` header".into(),
        })?;
        let fields: Vec<&str> = text.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(MaterialError::Ingest {
                line: line_no,
                reason: format!("expected 3 columns, got {}", fields.len()),
            });
        }
        let parse = |s: &str| -> Result<f64, MaterialError> {
            let v: f64 = s.parse().map_err(|_| MaterialError::Ingest {
                line: line_no,
                reason: format!("cannot parse `{s}` as a number"),
            })?;
            if !v.is_finite() {
                return Err(MaterialError::Ingest {
                    line: line_no,
                    reason: format!("non-finite value `{s}`"),
                });
            }
            Ok(v)
        };
        let freq = parse(fields[0])?;
        let v1 = parse(fields[1])?;
        let v2 = parse(fields[2])?;
        let omega = match unit {
            FrequencyUnit::ElectronVolt => freq * EV_TO_RAD_S,
            FrequencyUnit::RadPerSecond => freq,
        };
        if omega <= 0.0 {
            return Err(MaterialError::Ingest {
                line: line_no,
                reason: format!("frequency must be positive, got {freq}"),
            });
        }
        let (eps_re, eps_im) = match format {
            TableFormat::RefractiveIndex => {
                if v2 < 0.0 {
                    return Err(MaterialError::Ingest {
                        line: line_no,
                        reason: format!("extinction coefficient k must be non-negative, got {v2}"),
                    });
                }
                (v1 * v1 - v2 * v2, 2.0 * v1 * v2)
            }
            TableFormat::Permittivity => {
                if v2 < 0.0 {
                    return Err(MaterialError::Ingest {
                        line: line_no,
                        reason: format!("Im eps must be non-negative, got {v2}"),
                    });
                }
                (v1, v2)
            }
        };
        rows.push((
            line_no,
            TableRow {
                omega,
                eps_re,
                eps_im,
            },
        ));
    }

    if unit.is_none() {
        return Err(MaterialError::Ingest {
            line: 0,
            reason: "missing mandatory `units:` header".into(),
        });
    }
    let table = OpticalTable::new(rows.into_iter().map(|(_, r)| r).collect(), low_freq_model)?;
    Ok(match provenance {
        Some(p) => table.with_provenance(p),
        None => table,
    })
}

/// Parse an optical data stream whose `format:` header names the column
/// convention.
pub fn ingest_optical_table_auto<R: BufRead>(
    source: R,
    low_freq_model: DrudeParams,
) -> Result<OpticalTable, MaterialError> {
    let mut text = String::new();
    let mut src = source;
    src.read_to_string(&mut text)?;
    let format = text
        .lines()
        .enumerate()
        .find_map(|(i, l)| {
            let l = l.trim();
            l.strip_prefix("format:").map(|v| (i + 1, v.trim().to_string()))
        })
        .ok_or(MaterialError::Ingest {
            line: 0,
            reason: "missing `format:` header".into(),
        })?;
    let fmt = match format.1.as_str() {
        "nk" => TableFormat::RefractiveIndex,
        "eps" => TableFormat::Permittivity,
        other => {
            return Err(MaterialError::Ingest {
                line: format.0,
                reason: format!("unknown format `{other}`, expected nk or eps"),
            })
        }
    };
    ingest_optical_table(std::io::Cursor::new(text), fmt, low_freq_model)
}

/// Tables shipped with the crate.
pub mod builtin {
    use super::*;

    /// Gold optical table generated from the default Drude parameters.
    pub fn gold_table() -> DielectricModel {
        let data = include_str!("../data/au_drude.dat");
        let table = ingest_optical_table_auto(std::io::Cursor::new(data), DrudeParams::gold())
            .expect("embedded gold table is valid");
        DielectricModel::Tabulated(table)
    }

    /// High-resistivity silicon table generated from a two-oscillator Lorentz
    /// model plus a weak free-carrier tail; see the file header for the
    /// parameters and their provenance.
    pub fn silicon_table() -> DielectricModel {
        let data = include_str!("../data/si_lorentz.dat");
        // Weak free-carrier tail: resistivity ~10 kΩ·cm.
        let tail = DrudeParams::new(1.063e11, 1.0e13).expect("valid tail parameters");
        let table = ingest_optical_table_auto(std::io::Cursor::new(data), tail)
            .expect("embedded silicon table is valid");
        DielectricModel::Tabulated(table)
    }
}
