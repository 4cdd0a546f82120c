//! Antisymmetric non-equilibrium interaction potential between two planar
//! reflectors held at different temperatures, and the total out-of-equilibrium
//! potential assembled from it.
//!
//! The antisymmetric part is the real-frequency double integral
//!
//! ```text
//! Ū(T₁,T₂) = ħ/(4π²) ∫₀^∞ dω [n(ω,T₁) − n(ω,T₂)] ∫₀^∞ dk⊥ k⊥ Σ_j
//!            Im log(1 − e^{2iak_z} R⁽¹⁾_j R⁽²⁾_j) · W_j(ω,k⊥)
//! ```
//!
//! where the weight W is (|R₂|² − |R₁|²)/(1 − |R₁R₂|²) for propagating waves
//! (k⊥ < ω/c) and Im(R₁R₂*)/Im(R₁R₂) for evanescent waves (k⊥ > ω/c). The
//! inner integral is split exactly at the light line; the propagating branch
//! integrates in k_z and the evanescent branch in t = 2a√(k⊥² − ω²/c²), so
//! both endpoints are regular and the evanescent tail cuts off at e^{−t}.
//!
//! For strictly lossless reflectors both weights are 0/0 on the real axis;
//! they are then evaluated at ω(1 + iη) with one Richardson extrapolation
//! step η → 0, the vanishing-dissipation prescription.

use num_complex::Complex64;
use thiserror::Error;

use crate::constants::{BOLTZMANN, HBAR, SPEED_OF_LIGHT};
use crate::lifshitz::{
    free_energy_per_area, EquilibriumConfig, LifshitzError, MatsubaraSpec,
};
use crate::optics::{Frequency, OpticsError, Polarization, Reflector, ResolvedReflector};
use crate::quadrature::{self, AdaptiveSpec, QuadratureFailure};

/// Evanescent tail cut: e^{−t} < 1e-18 beyond t ≈ 41.5.
const T_TAIL: f64 = 45.0;

#[derive(Debug, Error)]
pub enum NeqError {
    #[error("quadrature budget exhausted in the {channel} channel: {source}")]
    Quadrature {
        channel: &'static str,
        #[source]
        source: QuadratureFailure,
    },
    #[error(transparent)]
    Optics(#[from] OpticsError),
    #[error(transparent)]
    Lifshitz(#[from] LifshitzError),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

/// Temperatures of the two bodies: body 1 is the plate side, body 2 the
/// sphere side. The ordering is part of the contract of every operation here.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalPair {
    /// Plate temperature T₁ > 0, K.
    pub t1: f64,
    /// Sphere temperature T₂ > 0, K.
    pub t2: f64,
}

impl ThermalPair {
    pub fn new(t1: f64, t2: f64) -> Self {
        Self { t1, t2 }
    }

    pub fn swapped(self) -> Self {
        Self {
            t1: self.t2,
            t2: self.t1,
        }
    }

    fn validate(&self) -> Result<(), NeqError> {
        if !(self.t1 > 0.0) || !(self.t2 > 0.0) || !self.t1.is_finite() || !self.t2.is_finite() {
            return Err(NeqError::InvalidConfig(format!(
                "temperatures must be positive, got ({}, {}) K",
                self.t1, self.t2
            )));
        }
        Ok(())
    }

    fn max(&self) -> f64 {
        self.t1.max(self.t2)
    }

    fn min(&self) -> f64 {
        self.t1.min(self.t2)
    }
}

/// Controls for the (ω, k⊥) double quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeqQuadratureSpec {
    /// Relative tolerance per channel.
    pub relative_tolerance: f64,
    /// ω cutoff in multiples of k_B·max(T₁,T₂)/ħ.
    pub omega_window_factor: f64,
    /// Dissipation regularizer for lossless models, as a fraction of ω.
    pub dissipation_floor: f64,
    /// Subdivision budget for the outer ω pass (the inner k⊥ passes use a
    /// fixed fraction of it).
    pub max_subdivisions: usize,
}

impl Default for NeqQuadratureSpec {
    fn default() -> Self {
        Self {
            relative_tolerance: 1e-6,
            omega_window_factor: 50.0,
            dissipation_floor: 1e-4,
            max_subdivisions: 2000,
        }
    }
}

impl NeqQuadratureSpec {
    fn validate(&self) -> Result<(), NeqError> {
        let ok = self.relative_tolerance > 0.0
            && self.relative_tolerance < 1.0
            && self.omega_window_factor > 0.0
            && self.dissipation_floor > 0.0
            && self.max_subdivisions > 0;
        if ok {
            Ok(())
        } else {
            Err(NeqError::InvalidConfig(
                "quadrature controls must all be positive".into(),
            ))
        }
    }

    fn omega_window(&self, temps: &ThermalPair) -> (f64, f64) {
        let lo = 1e-6 * BOLTZMANN * temps.min() / HBAR;
        let hi = self.omega_window_factor * BOLTZMANN * temps.max() / HBAR;
        (lo, hi)
    }
}

/// The antisymmetric potential split by wave character and polarization.
/// The total is the exact sum of the four channels.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NeqBreakdown {
    pub propagating_te: f64,
    pub propagating_tm: f64,
    pub evanescent_te: f64,
    pub evanescent_tm: f64,
    pub total: f64,
}

impl NeqBreakdown {
    fn assemble(channels: [f64; 4]) -> Self {
        let [propagating_te, propagating_tm, evanescent_te, evanescent_tm] = channels;
        Self {
            propagating_te,
            propagating_tm,
            evanescent_te,
            evanescent_tm,
            total: propagating_te + propagating_tm + evanescent_te + evanescent_tm,
        }
    }
}

/// Quadrature effort and achieved-accuracy diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NeqDiagnostics {
    /// Total inner-integrand evaluations across channels.
    pub evaluations: usize,
    /// Outer ω-panel bisections summed over channels.
    pub subdivisions: usize,
    /// Largest channel error estimate relative to the total magnitude.
    pub achieved_tolerance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Branch {
    Propagating,
    Evanescent,
}

const CHANNELS: [(Branch, Polarization, &str); 4] = [
    (Branch::Propagating, Polarization::TE, "propagating TE"),
    (Branch::Propagating, Polarization::TM, "propagating TM"),
    (Branch::Evanescent, Polarization::TE, "evanescent TE"),
    (Branch::Evanescent, Polarization::TM, "evanescent TM"),
];

/// Mean thermal photon number n(ω,T) = 1/(e^{ħω/k_BT} − 1), evaluated with
/// expm1 so the ħω ≪ k_BT regime keeps full precision.
pub fn bose_occupation(omega: f64, temperature: f64) -> f64 {
    1.0 / (HBAR * omega / (BOLTZMANN * temperature)).exp_m1()
}

/// Antisymmetric non-equilibrium potential Ū(T₁,T₂) in J/m², per channel.
///
/// `reflector1` is the body at T₁ (plate side), `reflector2` the body at T₂.
pub fn neq_antisymmetric_potential(
    reflector1: &Reflector,
    reflector2: &Reflector,
    separation: f64,
    temps: ThermalPair,
    spec: &NeqQuadratureSpec,
) -> Result<NeqBreakdown, NeqError> {
    Ok(neq_antisymmetric_detailed(reflector1, reflector2, separation, temps, spec)?.0)
}

/// As [`neq_antisymmetric_potential`], with quadrature diagnostics.
pub fn neq_antisymmetric_detailed(
    reflector1: &Reflector,
    reflector2: &Reflector,
    separation: f64,
    temps: ThermalPair,
    spec: &NeqQuadratureSpec,
) -> Result<(NeqBreakdown, NeqDiagnostics), NeqError> {
    temps.validate()?;
    spec.validate()?;
    if !(separation > 0.0) || !separation.is_finite() {
        return Err(NeqError::InvalidConfig(format!(
            "separation must be positive, got {separation:e} m"
        )));
    }

    let pair = PairEvaluator::new(reflector1, reflector2, separation, spec);

    let mut channels = [0.0; 4];
    let mut diag = NeqDiagnostics::default();
    let mut max_abs_error = 0.0_f64;
    for (i, (branch, pol, name)) in CHANNELS.into_iter().enumerate() {
        let (value, error) = if pair.lossless_pair {
            // Strictly lossless bodies: both weights are 0/0 on the real
            // axis. Evaluate the whole channel at ω(1 + iη) and ω(1 + iη/2)
            // and extrapolate η → 0 with one Richardson step. Extrapolating
            // whole channels (not points) keeps the sweeping cavity-mode
            // steps of the two η offsets from beating against each other.
            let eta = spec.dissipation_floor;
            let full = pair.channel(branch, pol, name, &temps, spec, Some(eta), &mut diag)?;
            let half = pair.channel(branch, pol, name, &temps, spec, Some(0.5 * eta), &mut diag)?;
            (2.0 * half.0 - full.0, 2.0 * half.1 + full.1)
        } else {
            pair.channel(branch, pol, name, &temps, spec, None, &mut diag)?
        };
        channels[i] = value;
        max_abs_error = max_abs_error.max(error);
    }

    let breakdown = NeqBreakdown::assemble(channels);
    diag.achieved_tolerance = if breakdown.total != 0.0 {
        max_abs_error / breakdown.total.abs()
    } else {
        max_abs_error
    };
    Ok((breakdown, diag))
}

/// Total out-of-equilibrium potential
/// U(T₁,T₂) = ½[F(T₁) + F(T₂)] + Ū(T₁,T₂) in J/m².
pub fn neq_total_potential(
    reflector1: &Reflector,
    reflector2: &Reflector,
    separation: f64,
    temps: ThermalPair,
    matsubara: &MatsubaraSpec,
    spec: &NeqQuadratureSpec,
) -> Result<f64, NeqError> {
    temps.validate()?;
    let equilibrium_at = |t: f64| -> Result<f64, NeqError> {
        let cfg = EquilibriumConfig {
            reflector1: reflector1.clone(),
            reflector2: reflector2.clone(),
            separation,
            temperature: t,
        };
        Ok(free_energy_per_area(&cfg, matsubara)?)
    };
    let average = 0.5 * (equilibrium_at(temps.t1)? + equilibrium_at(temps.t2)?);
    let antisymmetric =
        neq_antisymmetric_potential(reflector1, reflector2, separation, temps, spec)?;
    Ok(average + antisymmetric.total)
}

/// ω-integrand of the antisymmetric potential per channel, J·s/m²: the
/// occupation difference times the inner k⊥ integral and the ħ/4π² prefactor.
pub fn neq_spectral_density(
    reflector1: &Reflector,
    reflector2: &Reflector,
    separation: f64,
    temps: ThermalPair,
    omega: f64,
    spec: &NeqQuadratureSpec,
) -> Result<NeqBreakdown, NeqError> {
    temps.validate()?;
    spec.validate()?;
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(NeqError::InvalidConfig(format!(
            "frequency must be positive, got {omega:e} rad/s"
        )));
    }
    let pair = PairEvaluator::new(reflector1, reflector2, separation, spec);
    let occupation = bose_occupation(omega, temps.t1) - bose_occupation(omega, temps.t2);
    let prefactor = HBAR / (4.0 * std::f64::consts::PI * std::f64::consts::PI);
    let mut channels = [0.0; 4];
    if occupation != 0.0 {
        for (i, (branch, pol, _)) in CHANNELS.into_iter().enumerate() {
            let inner = if pair.lossless_pair {
                let eta = spec.dissipation_floor;
                let full = pair.inner_integral(branch, pol, omega, 0.0, Some(eta), &mut 0);
                let half = pair.inner_integral(branch, pol, omega, 0.0, Some(0.5 * eta), &mut 0);
                2.0 * half - full
            } else {
                pair.inner_integral(branch, pol, omega, 0.0, None, &mut 0)
            };
            channels[i] = prefactor * occupation * inner;
        }
    }
    Ok(NeqBreakdown::assemble(channels))
}

/// Inner-integral evaluator for one reflector pair at one separation.
struct PairEvaluator<'a> {
    reflector1: &'a Reflector,
    reflector2: &'a Reflector,
    separation: f64,
    /// Both bodies strictly lossless: real-axis weights are 0/0 and every
    /// point is evaluated through the η regularization instead.
    lossless_pair: bool,
    inner_spec: AdaptiveSpec,
}

impl<'a> PairEvaluator<'a> {
    fn new(
        reflector1: &'a Reflector,
        reflector2: &'a Reflector,
        separation: f64,
        spec: &NeqQuadratureSpec,
    ) -> Self {
        Self {
            reflector1,
            reflector2,
            separation,
            lossless_pair: reflector1.is_lossless() && reflector2.is_lossless(),
            inner_spec: AdaptiveSpec::new(
                0.1 * spec.relative_tolerance,
                0.0,
                (spec.max_subdivisions / 4).max(100),
            ),
        }
    }

    /// One channel: a scale probe followed by the adaptive outer pass in
    /// ln ω, with amplitudes evaluated on the real axis (`eta` = None) or at
    /// ω(1 + iη). Returns the channel value (with the ħ/4π² prefactor) and
    /// its absolute error estimate.
    #[allow(clippy::too_many_arguments)]
    fn channel(
        &self,
        branch: Branch,
        pol: Polarization,
        name: &'static str,
        temps: &ThermalPair,
        spec: &NeqQuadratureSpec,
        eta: Option<f64>,
        diag: &mut NeqDiagnostics,
    ) -> Result<(f64, f64), NeqError> {
        let (omega_lo, omega_hi) = spec.omega_window(temps);
        let (ln_lo, ln_hi) = (omega_lo.ln(), omega_hi.ln());
        let mut evaluations = 0usize;

        // Scale probe: the outer integrand's peak magnitude sets absolute
        // floors for both quadrature levels. Without them the outer pass
        // chases inner noise wherever the channel integrand suffers internal
        // cancellation.
        let mut peak = 0.0_f64;
        for j in 0..24 {
            let ln_omega = ln_lo + (ln_hi - ln_lo) * (j as f64 + 0.5) / 24.0;
            let omega = ln_omega.exp();
            let occupation = bose_occupation(omega, temps.t1) - bose_occupation(omega, temps.t2);
            if occupation == 0.0 {
                continue;
            }
            let inner = self.inner_probe(branch, pol, omega, eta, &mut evaluations);
            peak = peak.max((omega * occupation * inner).abs());
        }
        if peak == 0.0 {
            diag.evaluations += evaluations;
            return Ok((0.0, 0.0));
        }
        let outer_spec = AdaptiveSpec::new(
            spec.relative_tolerance,
            0.1 * spec.relative_tolerance * peak,
            spec.max_subdivisions,
        );
        // Per-point absolute budget handed to the inner quadratures, three
        // decades below the outer target so inner noise cannot stall it.
        let point_floor = 1e-4 * spec.relative_tolerance * peak;

        let outer = quadrature::integrate(
            |ln_omega| {
                let omega = ln_omega.exp();
                let occupation =
                    bose_occupation(omega, temps.t1) - bose_occupation(omega, temps.t2);
                if occupation == 0.0 {
                    return 0.0;
                }
                let inner_floor = point_floor / (omega * occupation.abs());
                let inner =
                    self.inner_integral(branch, pol, omega, inner_floor, eta, &mut evaluations);
                omega * occupation * inner
            },
            ln_lo,
            ln_hi,
            &outer_spec,
        )
        .map_err(|source| NeqError::Quadrature {
            channel: name,
            source,
        })?;

        diag.evaluations += evaluations;
        diag.subdivisions += outer.subdivisions;
        let prefactor = HBAR / (4.0 * std::f64::consts::PI * std::f64::consts::PI);
        Ok((prefactor * outer.value, prefactor * outer.error_estimate))
    }

    /// ∫ dk⊥ k⊥ Im log(1 − e^{2iak_z}R₁R₂) W over one branch, one
    /// polarization, converged to the given absolute floor.
    fn inner_integral(
        &self,
        branch: Branch,
        pol: Polarization,
        omega: f64,
        absolute_floor: f64,
        eta: Option<f64>,
        evaluations: &mut usize,
    ) -> f64 {
        let spec = AdaptiveSpec {
            absolute_tolerance: absolute_floor,
            ..self.inner_spec
        };
        self.run_inner(branch, pol, omega, &spec, eta, evaluations)
    }

    /// Coarse inner evaluation for the channel scale probe.
    fn inner_probe(
        &self,
        branch: Branch,
        pol: Polarization,
        omega: f64,
        eta: Option<f64>,
        evaluations: &mut usize,
    ) -> f64 {
        let spec = AdaptiveSpec {
            relative_tolerance: 1e-3,
            max_subdivisions: 60,
            ..self.inner_spec
        };
        self.run_inner(branch, pol, omega, &spec, eta, evaluations)
    }

    fn run_inner(
        &self,
        branch: Branch,
        pol: Polarization,
        omega: f64,
        spec: &AdaptiveSpec,
        eta: Option<f64>,
        evaluations: &mut usize,
    ) -> f64 {
        let amplitudes = self.resolve_at(match eta {
            None => Frequency::Real(omega),
            Some(eta) => Frequency::OffAxis(Complex64::new(omega, eta * omega)),
        });
        let result = match branch {
            Branch::Propagating => self.propagating(&amplitudes, pol, omega, spec, evaluations),
            Branch::Evanescent => self.evanescent(&amplitudes, pol, omega, spec, evaluations),
        };
        // The integrand is bounded; a budget-exhausted partial estimate is
        // still usable at inner tolerance scale.
        result.unwrap_or_else(|failure| failure.partial)
    }

    fn resolve_at(&self, freq: Frequency) -> AmplitudePair {
        let r1 = self
            .reflector1
            .resolve(freq)
            .expect("frequency validated upstream");
        let r2 = self
            .reflector2
            .resolve(freq)
            .expect("frequency validated upstream");
        AmplitudePair(r1, r2)
    }

    /// Propagating branch: k⊥ dk⊥ = −k_z dk_z absorbs the light-line square
    /// root, and k_z runs on a logarithmic scale because the metallic
    /// response concentrates the integrand within k_z ≲ (ω/c)/√|ε|, decades
    /// below the branch width at thermal frequencies. The neglected
    /// [0, 1e-10·ω/c] sliver is suppressed as k_z².
    fn propagating(
        &self,
        amplitudes: &AmplitudePair,
        pol: Polarization,
        omega: f64,
        spec: &AdaptiveSpec,
        evaluations: &mut usize,
    ) -> Result<f64, QuadratureFailure> {
        let w_c = omega / SPEED_OF_LIGHT;
        let two_a = 2.0 * self.separation;
        let result = quadrature::integrate_seeded(
            |s| {
                *evaluations += 1;
                let kz = s.exp();
                let kperp = ((w_c - kz) * (w_c + kz)).max(0.0).sqrt();
                let phase = Complex64::from_polar(1.0, two_a * kz);
                kz * kz * amplitudes.point(pol, kperp, |r1, r2| propagating_point(r1, r2, phase))
            },
            &log_seeds((1e-10 * w_c).ln(), w_c.ln(), &[]),
            spec,
        )?;
        Ok(result.value)
    }

    /// Evanescent branch: integrate in t = 2a√(k⊥² − ω²/c²), again on a
    /// logarithmic scale, with the tail cut at e^{−t} < 1e-18;
    /// k⊥ dk⊥ = t dt/(2a)². The Jacobian lives inside the integrand so a
    /// budget-exhausted partial value carries it too.
    fn evanescent(
        &self,
        amplitudes: &AmplitudePair,
        pol: Polarization,
        omega: f64,
        spec: &AdaptiveSpec,
        evaluations: &mut usize,
    ) -> Result<f64, QuadratureFailure> {
        let w_c = omega / SPEED_OF_LIGHT;
        let two_a = 2.0 * self.separation;
        let jacobian = 1.0 / (two_a * two_a);

        // Panels cluster around each body's surface-mode ridge.
        let mut extra: Vec<f64> = Vec::new();
        if pol == Polarization::TM {
            for kappa in amplitudes.surface_mode_kappas() {
                let t_ridge = two_a * kappa;
                if t_ridge > 0.0 && t_ridge < T_TAIL {
                    let s_ridge = t_ridge.ln();
                    extra.extend([s_ridge - 0.7, s_ridge - 0.1, s_ridge + 0.1, s_ridge + 0.7]);
                }
            }
        }

        let result = quadrature::integrate_seeded(
            |s| {
                *evaluations += 1;
                let t = s.exp();
                let kappa = t / two_a;
                let kperp = (w_c * w_c + kappa * kappa).sqrt();
                let decay = (-t).exp();
                jacobian
                    * t
                    * t
                    * amplitudes.point(pol, kperp, |r1, r2| evanescent_point(r1, r2, decay))
            },
            &log_seeds((1e-10 * T_TAIL).ln(), T_TAIL.ln(), &extra),
            spec,
        )?;
        Ok(result.value)
    }
}

/// Initial panels for a log-variable inner integral: eight uniform panels
/// plus any extra breakpoints (surface-mode ridges), sorted and clamped.
fn log_seeds(s_min: f64, s_max: f64, extra: &[f64]) -> Vec<f64> {
    let mut seeds: Vec<f64> = (0..=8)
        .map(|i| s_min + (s_max - s_min) * i as f64 / 8.0)
        .collect();
    seeds.extend(
        extra
            .iter()
            .copied()
            .filter(|s| *s > s_min && *s < s_max),
    );
    seeds.sort_by(f64::total_cmp);
    seeds.dedup();
    seeds
}

/// The two bodies' reflection amplitudes frozen at one frequency.
struct AmplitudePair(ResolvedReflector, ResolvedReflector);

impl AmplitudePair {
    /// Surface-mode ridge positions of the two bodies, where known.
    fn surface_mode_kappas(&self) -> impl Iterator<Item = f64> {
        [self.0.surface_mode_kappa(), self.1.surface_mode_kappa()]
            .into_iter()
            .flatten()
    }

    fn point(
        &self,
        pol: Polarization,
        kperp: f64,
        f: impl Fn(Complex64, Complex64) -> f64,
    ) -> f64 {
        f(self.0.amplitude(pol, kperp), self.1.amplitude(pol, kperp))
    }
}

/// Im log(1 − phase·R₁R₂) · (|R₂|² − |R₁|²)/(1 − |R₁R₂|²).
fn propagating_point(r1: Complex64, r2: Complex64, phase: Complex64) -> f64 {
    let product = r1 * r2;
    let im_log = (Complex64::new(1.0, 0.0) - phase * product).arg();
    let num = r2.norm_sqr() - r1.norm_sqr();
    if num == 0.0 {
        return 0.0;
    }
    let den = 1.0 - product.norm_sqr();
    if den == 0.0 {
        // Exactly unimodular product with distinct magnitudes cannot occur
        // for passive media; treat the measure-zero rounding hit as null.
        return 0.0;
    }
    im_log * num / den
}

/// Im log(1 − decay·R₁R₂) · Im(R₁R₂*)/Im(R₁R₂).
///
/// Where Im(R₁R₂) crosses zero the weight and the Im log vanish together;
/// evaluating the ratio directly amplifies rounding noise like one over the
/// distance to the crossing, so the 0/0 is collapsed analytically instead:
/// for Re(1 − decay·R₁R₂) > 0 the product equals
/// −num·decay/v · atan(w)/w with v = 1 − decay·Re(R₁R₂), w = −decay·Im(R₁R₂)/v.
fn evanescent_point(r1: Complex64, r2: Complex64, decay: f64) -> f64 {
    let product = r1 * r2;
    let num = (r1 * r2.conj()).im;
    if num == 0.0 {
        // Identical bodies (num is exactly zero by conjugate symmetry), or
        // both amplitudes exactly real: the vanishing-dissipation limit of
        // the integrand is zero.
        return 0.0;
    }
    let v = 1.0 - decay * product.re;
    let u = -decay * product.im;
    if v > 0.0 {
        let w = u / v;
        return -num * decay / v * atan_over_x(w);
    }
    // Beyond the fold (Re ≤ 0) the log's imaginary part is O(π) and no
    // longer vanishes with the weight denominator; evaluate directly.
    let im_log = Complex64::new(v, u).arg();
    let den = product.im;
    if im_log == 0.0 || den == 0.0 {
        return 0.0;
    }
    im_log * num / den
}

/// atan(x)/x, stable through x → 0.
fn atan_over_x(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 3.0 + x2 * x2 / 5.0
    } else {
        x.atan() / x
    }
}
