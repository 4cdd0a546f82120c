//! Equilibrium Casimir free energy and pressure per unit area between two
//! planar reflectors, by Matsubara summation and transverse-wavevector
//! quadrature.
//!
//! The free energy is
//!
//! ```text
//! F(T) = (k_B T / 2π) Σ'_l ∫₀^∞ dk⊥ k⊥ Σ_j log[1 − e^{−2aq_l} R⁽¹⁾_j R⁽²⁾_j]
//! ```
//!
//! with q_l = √(ξ_l²/c² + k⊥²), ξ_l = 2πl k_B T/ħ, the l = 0 term at half
//! weight, and j running over TE and TM. The k⊥ integral is evaluated in the
//! substitution u = 2aq_l, which makes the integrand separation-independent
//! in shape; the pressure differentiates the integrand analytically in a.
//!
//! The l = 0 term never approaches ξ → 0 numerically: it is assembled from
//! the analytic static limits of the reflection amplitudes, which carry the
//! physically decisive Drude/plasma TE distinction.

use thiserror::Error;

use crate::constants::{BOLTZMANN, HBAR, SPEED_OF_LIGHT};
use crate::optics::{Frequency, OpticsError, Polarization, Reflector};
use crate::quadrature::{self, AdaptiveSpec, QuadratureFailure};

/// Point beyond which e^{−u} is below 1e-18 and the k⊥ tail is cut.
const U_TAIL: f64 = 45.0;

#[derive(Debug, Error)]
pub enum LifshitzError {
    #[error(
        "Matsubara sum did not converge within {terms} terms \
         (partial value {partial:e})"
    )]
    MatsubaraNotConverged { partial: f64, terms: usize },
    #[error("k-perp quadrature failed on Matsubara term {term}: {source}")]
    Quadrature {
        term: usize,
        #[source]
        source: QuadratureFailure,
    },
    #[error(transparent)]
    Optics(#[from] OpticsError),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

/// Two reflectors in thermal equilibrium at separation `separation`.
#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumConfig {
    pub reflector1: Reflector,
    pub reflector2: Reflector,
    /// Gap width a > 0, m.
    pub separation: f64,
    /// Common temperature T > 0, K.
    pub temperature: f64,
}

impl EquilibriumConfig {
    fn validate(&self) -> Result<(), LifshitzError> {
        if !(self.separation > 0.0) || !self.separation.is_finite() {
            return Err(LifshitzError::InvalidConfig(format!(
                "separation must be positive, got {:e} m",
                self.separation
            )));
        }
        if !(self.temperature > 0.0) || !self.temperature.is_finite() {
            return Err(LifshitzError::InvalidConfig(format!(
                "temperature must be positive, got {:e} K",
                self.temperature
            )));
        }
        Ok(())
    }
}

/// Truncation controls for the Matsubara sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatsubaraSpec {
    /// The sum stops once consecutive terms drop below this fraction of the
    /// accumulated magnitude.
    pub relative_tolerance: f64,
    /// Hard cap on the number of l ≥ 1 terms.
    pub max_terms: usize,
}

impl MatsubaraSpec {
    pub fn new(relative_tolerance: f64, max_terms: usize) -> Self {
        Self {
            relative_tolerance,
            max_terms: max_terms.max(1),
        }
    }

    /// Default controls: rtol = 1e-9 and max_terms = max(200, 20·c/(2aξ₁)),
    /// tracking the e^{−2aξ_l/c} decay of the terms.
    pub fn auto(separation: f64, temperature: f64) -> Self {
        let xi1 = matsubara_frequency(temperature, 1);
        let scale = SPEED_OF_LIGHT / (2.0 * separation * xi1);
        Self::new(1e-9, (20.0 * scale).ceil().max(200.0) as usize)
    }
}

/// Matsubara frequency ξ_l = 2π l k_B T / ħ in rad/s.
pub fn matsubara_frequency(temperature: f64, index: usize) -> f64 {
    2.0 * std::f64::consts::PI * index as f64 * BOLTZMANN * temperature / HBAR
}

/// Free energy evaluation with convergence diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumEvaluation {
    /// J/m² for the free energy, N/m² for the pressure.
    pub value: f64,
    /// Number of l ≥ 1 Matsubara terms summed.
    pub terms_used: usize,
    /// Total integrand evaluations across all k⊥ quadratures.
    pub evaluations: usize,
    /// Magnitude of the last summed term relative to the total.
    pub truncation_estimate: f64,
}

/// Which a-derivative order of the Lifshitz integrand to sum.
#[derive(Clone, Copy, PartialEq)]
enum Observable {
    FreeEnergy,
    Pressure,
}

/// Equilibrium Casimir free energy per unit area, J/m². Negative values mean
/// attraction for identical reflectors.
pub fn free_energy_per_area(
    cfg: &EquilibriumConfig,
    spec: &MatsubaraSpec,
) -> Result<f64, LifshitzError> {
    Ok(free_energy_detailed(cfg, spec)?.value)
}

/// Free energy with term-count and evaluation diagnostics.
pub fn free_energy_detailed(
    cfg: &EquilibriumConfig,
    spec: &MatsubaraSpec,
) -> Result<SumEvaluation, LifshitzError> {
    matsubara_sum(cfg, spec, Observable::FreeEnergy)
}

/// Equilibrium Casimir pressure −∂F/∂a per unit area, N/m². The integrand is
/// differentiated analytically; negative pressure means attraction.
pub fn pressure_per_area(
    cfg: &EquilibriumConfig,
    spec: &MatsubaraSpec,
) -> Result<f64, LifshitzError> {
    Ok(pressure_detailed(cfg, spec)?.value)
}

/// Pressure with term-count and evaluation diagnostics.
pub fn pressure_detailed(
    cfg: &EquilibriumConfig,
    spec: &MatsubaraSpec,
) -> Result<SumEvaluation, LifshitzError> {
    matsubara_sum(cfg, spec, Observable::Pressure)
}

/// The l = 0 half-weight term of the free energy, J/m², built from the
/// analytic ξ → 0 limits of the reflection amplitudes.
pub fn zero_frequency_term(cfg: &EquilibriumConfig) -> Result<f64, LifshitzError> {
    cfg.validate()?;
    Ok(zero_term(cfg, Observable::FreeEnergy, &mut 0)?)
}

/// The l = 0 half-weight term of the pressure, N/m².
pub fn zero_frequency_pressure_term(cfg: &EquilibriumConfig) -> Result<f64, LifshitzError> {
    cfg.validate()?;
    Ok(zero_term(cfg, Observable::Pressure, &mut 0)?)
}

fn zero_term(
    cfg: &EquilibriumConfig,
    observable: Observable,
    evaluations: &mut usize,
) -> Result<f64, LifshitzError> {
    let a = cfg.separation;
    let prefactor = BOLTZMANN * cfg.temperature / (4.0 * std::f64::consts::PI);
    let quad_spec = AdaptiveSpec::new(1e-10, 0.0, 200);
    let integral = quadrature::integrate(
        |u| {
            let kperp = u / (2.0 * a);
            let mut sum = 0.0;
            for pol in Polarization::BOTH {
                let r1 = cfg.reflector1.static_amplitude(pol, kperp);
                let r2 = cfg.reflector2.static_amplitude(pol, kperp);
                sum += log_term(u, r1 * r2, observable);
            }
            u * sum
        },
        0.0,
        U_TAIL,
        &quad_spec,
    )
    .map_err(|source| LifshitzError::Quadrature { term: 0, source })?;
    *evaluations += integral.evaluations;
    Ok(prefactor * jacobian(a, observable) * integral.value)
}

/// Integrand factor: log[1 − e^{−u}r] for the free energy, or its analytic
/// a-derivative u·e^{−u}r/(1 − e^{−u}r) (in u-units) for the pressure.
fn log_term(u: f64, r_product: f64, observable: Observable) -> f64 {
    let x = (-u).exp() * r_product;
    match observable {
        Observable::FreeEnergy => (-x).ln_1p(),
        Observable::Pressure => u * x / (1.0 - x),
    }
}

/// u-substitution Jacobian including the pressure's extra −1/a.
fn jacobian(a: f64, observable: Observable) -> f64 {
    let base = 1.0 / (4.0 * a * a);
    match observable {
        Observable::FreeEnergy => base,
        Observable::Pressure => -base / a,
    }
}

fn matsubara_sum(
    cfg: &EquilibriumConfig,
    spec: &MatsubaraSpec,
    observable: Observable,
) -> Result<SumEvaluation, LifshitzError> {
    cfg.validate()?;
    let a = cfg.separation;
    let prefactor = BOLTZMANN * cfg.temperature / (2.0 * std::f64::consts::PI);

    let mut evaluations = 0usize;
    let mut accumulated = zero_term(cfg, observable, &mut evaluations)?;

    let mut small_streak = 0usize;
    for l in 1..=spec.max_terms {
        let xi = matsubara_frequency(cfg.temperature, l);
        let freq = Frequency::Imaginary(xi);
        let r1 = cfg.reflector1.resolve(freq)?;
        let r2 = cfg.reflector2.resolve(freq)?;

        let xi_c = xi / SPEED_OF_LIGHT;
        let u_min = 2.0 * a * xi_c;
        let inner_spec = AdaptiveSpec::new(
            0.1 * spec.relative_tolerance,
            1e-3 * spec.relative_tolerance * accumulated.abs(),
            200,
        );
        let integral = quadrature::integrate(
            |u| {
                let q = u / (2.0 * a);
                let kperp = (q * q - xi_c * xi_c).max(0.0).sqrt();
                let mut sum = 0.0;
                for pol in Polarization::BOTH {
                    // Amplitudes are exactly real on the imaginary axis.
                    let r1 = r1.amplitude(pol, kperp).re;
                    let r2 = r2.amplitude(pol, kperp).re;
                    sum += log_term(u, r1 * r2, observable);
                }
                u * sum
            },
            u_min,
            u_min + U_TAIL,
            &inner_spec,
        )
        .map_err(|source| LifshitzError::Quadrature { term: l, source })?;
        evaluations += integral.evaluations;

        let term = prefactor * jacobian(a, observable) * integral.value;
        accumulated += term;
        let last_relative = if accumulated != 0.0 {
            (term / accumulated).abs()
        } else if term == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };

        // Two consecutive negligible terms guard against an accidental zero.
        if last_relative <= spec.relative_tolerance {
            small_streak += 1;
            if small_streak >= 2 {
                return Ok(SumEvaluation {
                    value: accumulated,
                    terms_used: l,
                    evaluations,
                    truncation_estimate: last_relative,
                });
            }
        } else {
            small_streak = 0;
        }
    }

    Err(LifshitzError::MatsubaraNotConverged {
        partial: accumulated,
        terms: spec.max_terms,
    })
}
