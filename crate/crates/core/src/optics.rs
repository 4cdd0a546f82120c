//! Normal wavevectors, Fresnel coefficients, and layered-stack reflection
//! amplitudes on the real and imaginary frequency axes.
//!
//! The square-root branch is fixed by Im k_z ≥ 0 everywhere; on the imaginary
//! axis the wavevector is built from the explicitly real form
//! q = √(ε ξ²/c² + k⊥²) so amplitudes stay exactly real there. The layer
//! phase factor e^{2iwk_z} then has modulus ≤ 1 by construction and never
//! overflows, however thick the layer.

use std::sync::atomic::{AtomicU64, Ordering};

use num_complex::Complex64;
use thiserror::Error;

use crate::constants::SPEED_OF_LIGHT;
use crate::material::{DielectricModel, MaterialError, StaticResponse};

#[derive(Debug, Error)]
pub enum OpticsError {
    #[error(transparent)]
    Material(#[from] MaterialError),
    #[error("transverse wavevector must be non-negative and finite, got {0:e}")]
    InvalidTransverseWavevector(f64),
    #[error("overlayer thickness must be positive, got {0:e} m")]
    InvalidThickness(f64),
}

/// Field polarization relative to the plane of incidence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarization {
    TE,
    TM,
}

impl Polarization {
    pub const BOTH: [Polarization; 2] = [Polarization::TE, Polarization::TM];
}

/// Frequency argument of the optical response.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Frequency {
    /// Real-axis angular frequency ω > 0, rad/s.
    Real(f64),
    /// Imaginary-axis frequency ξ > 0 (ω = iξ), rad/s.
    Imaginary(f64),
    /// Frequency in the upper half plane; used by the vanishing-dissipation
    /// regularization for lossless media.
    OffAxis(Complex64),
}

impl Frequency {
    fn validate(&self) -> Result<(), OpticsError> {
        let ok = match self {
            Frequency::Real(w) | Frequency::Imaginary(w) => w.is_finite() && *w > 0.0,
            Frequency::OffAxis(z) => z.is_finite() && z.norm_sqr() > 0.0 && z.im >= 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(MaterialError::NonPositiveFrequency(match self {
                Frequency::Real(w) | Frequency::Imaginary(w) => *w,
                Frequency::OffAxis(z) => z.re,
            })
            .into())
        }
    }
}

/// In-plane wavevector modulus and the frequency it belongs to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransverseKinematics {
    pub frequency: Frequency,
    /// k⊥ ≥ 0, 1/m.
    pub kperp: f64,
}

impl TransverseKinematics {
    pub fn new(frequency: Frequency, kperp: f64) -> Result<Self, OpticsError> {
        frequency.validate()?;
        if !kperp.is_finite() || kperp < 0.0 {
            return Err(OpticsError::InvalidTransverseWavevector(kperp));
        }
        Ok(Self { frequency, kperp })
    }

    pub fn real_axis(omega: f64, kperp: f64) -> Result<Self, OpticsError> {
        Self::new(Frequency::Real(omega), kperp)
    }

    pub fn imaginary_axis(xi: f64, kperp: f64) -> Result<Self, OpticsError> {
        Self::new(Frequency::Imaginary(xi), kperp)
    }
}

/// A planar reflector: a half-space, a coated half-space, or a perfect mirror.
#[derive(Debug, Clone, PartialEq)]
pub enum Reflector {
    HalfSpace(DielectricModel),
    Overlayer {
        layer: DielectricModel,
        /// Layer thickness w > 0, m.
        thickness: f64,
        substrate: DielectricModel,
    },
    /// r_TE = −1, r_TM = +1 at all arguments.
    IdealMirror,
}

impl Reflector {
    pub fn half_space(material: DielectricModel) -> Self {
        Self::HalfSpace(material)
    }

    pub fn overlayer(
        layer: DielectricModel,
        thickness: f64,
        substrate: DielectricModel,
    ) -> Result<Self, OpticsError> {
        if !(thickness > 0.0) || !thickness.is_finite() {
            return Err(OpticsError::InvalidThickness(thickness));
        }
        Ok(Self::Overlayer {
            layer,
            thickness,
            substrate,
        })
    }

    /// True when no constituent material absorbs on the real axis.
    pub fn is_lossless(&self) -> bool {
        match self {
            Self::HalfSpace(m) => m.is_lossless(),
            Self::Overlayer {
                layer, substrate, ..
            } => layer.is_lossless() && substrate.is_lossless(),
            Self::IdealMirror => true,
        }
    }

    /// Evaluate every material permittivity once at `frequency`, producing a
    /// cheap per-k⊥ amplitude evaluator for inner quadrature loops.
    pub fn resolve(&self, frequency: Frequency) -> Result<ResolvedReflector, OpticsError> {
        frequency.validate()?;
        let kind = match self {
            Self::HalfSpace(m) => ResolvedKind::HalfSpace {
                eps: Eps::resolve(m, frequency)?,
            },
            Self::Overlayer {
                layer,
                thickness,
                substrate,
            } => ResolvedKind::Overlayer {
                eps_layer: Eps::resolve(layer, frequency)?,
                thickness: *thickness,
                eps_substrate: Eps::resolve(substrate, frequency)?,
            },
            Self::IdealMirror => ResolvedKind::Mirror,
        };
        Ok(ResolvedReflector { frequency, kind })
    }

    /// Exact ξ → 0 limit of the imaginary-axis reflection amplitude against
    /// vacuum, from the analytic static character of each material.
    pub fn static_amplitude(&self, pol: Polarization, kperp: f64) -> f64 {
        match self {
            Self::IdealMirror => mirror_amplitude(pol),
            Self::HalfSpace(m) => static_halfspace(m.static_response(), pol, kperp),
            Self::Overlayer {
                layer,
                thickness,
                substrate,
            } => {
                let layer_static = layer.static_response();
                if layer_static == StaticResponse::Mirror {
                    return mirror_amplitude(pol);
                }
                let r_top = static_halfspace(layer_static, pol, kperp);
                let r_bottom = static_interface(layer_static, substrate.static_response(), pol, kperp);
                let attenuation = (-2.0 * thickness * static_q(layer_static, kperp)).exp();
                (r_top + attenuation * r_bottom) / (1.0 + attenuation * r_top * r_bottom)
            }
        }
    }
}

fn mirror_amplitude(pol: Polarization) -> f64 {
    match pol {
        Polarization::TE => -1.0,
        Polarization::TM => 1.0,
    }
}

/// ξ → 0 limit of q = √(ε ξ²/c² + k⊥²) for each static character.
fn static_q(response: StaticResponse, kperp: f64) -> f64 {
    match response {
        StaticResponse::Vacuum | StaticResponse::DrudeConductor { .. } => kperp,
        StaticResponse::PlasmaMetal { plasma_frequency } => {
            let wp_c = plasma_frequency / SPEED_OF_LIGHT;
            (kperp * kperp + wp_c * wp_c).sqrt()
        }
        StaticResponse::Mirror => f64::INFINITY,
    }
}

/// Divergence rank of ε(iξ) as ξ → 0; higher rank dominates a TM interface.
fn static_rank(response: StaticResponse) -> u8 {
    match response {
        StaticResponse::Vacuum => 0,
        StaticResponse::DrudeConductor { .. } => 1,
        StaticResponse::PlasmaMetal { .. } => 2,
        StaticResponse::Mirror => 3,
    }
}

fn static_halfspace(response: StaticResponse, pol: Polarization, kperp: f64) -> f64 {
    static_interface(StaticResponse::Vacuum, response, pol, kperp)
}

/// ξ → 0 limit of the Fresnel amplitude for an a|b interface.
fn static_interface(
    a: StaticResponse,
    b: StaticResponse,
    pol: Polarization,
    kperp: f64,
) -> f64 {
    let qa = static_q(a, kperp);
    let qb = static_q(b, kperp);
    match pol {
        Polarization::TE => {
            if static_rank(b) == 3 {
                return -1.0;
            }
            if static_rank(a) == 3 {
                return 1.0;
            }
            (qa - qb) / (qa + qb)
        }
        Polarization::TM => {
            use std::cmp::Ordering::*;
            match static_rank(b).cmp(&static_rank(a)) {
                Greater => 1.0,
                Less => -1.0,
                Equal => match (a, b) {
                    (StaticResponse::Vacuum, StaticResponse::Vacuum) => 0.0,
                    (
                        StaticResponse::DrudeConductor { sigma_scale: sa },
                        StaticResponse::DrudeConductor { sigma_scale: sb },
                    ) => (sb * qa - sa * qb) / (sb * qa + sa * qb),
                    (
                        StaticResponse::PlasmaMetal { plasma_frequency: pa },
                        StaticResponse::PlasmaMetal { plasma_frequency: pb },
                    ) => {
                        let (wa, wb) = (pa * pa, pb * pb);
                        (wb * qa - wa * qb) / (wb * qa + wa * qb)
                    }
                    // Two mirrors facing each other have no transmitted field
                    // to reflect; the interface amplitude is immaterial.
                    _ => 0.0,
                },
            }
        }
    }
}

/// Permittivity of one medium at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Eps {
    Value(Complex64),
    Mirror,
}

impl Eps {
    fn resolve(model: &DielectricModel, frequency: Frequency) -> Result<Self, OpticsError> {
        if let DielectricModel::IdealMirror = model {
            return Ok(Eps::Mirror);
        }
        Ok(Eps::Value(match frequency {
            Frequency::Real(w) => model.permittivity_real_axis(w)?,
            Frequency::Imaginary(xi) => Complex64::new(model.permittivity_imag_axis(xi)?, 0.0),
            Frequency::OffAxis(z) => model.permittivity_upper_half_plane(z),
        }))
    }
}

/// Count of degenerate kinematic points (vanishing Fresnel denominators)
/// resolved by a small transverse-wavevector offset.
static DEGENERATE_NUDGES: AtomicU64 = AtomicU64::new(0);

/// Number of degenerate kinematic points encountered so far in this process.
pub fn degenerate_kinematics_count() -> u64 {
    DEGENERATE_NUDGES.load(Ordering::Relaxed)
}

/// A reflector with its permittivities frozen at one frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedReflector {
    frequency: Frequency,
    kind: ResolvedKind,
}

#[derive(Debug, Clone, PartialEq)]
enum ResolvedKind {
    HalfSpace {
        eps: Eps,
    },
    Overlayer {
        eps_layer: Eps,
        thickness: f64,
        eps_substrate: Eps,
    },
    Mirror,
}

impl ResolvedReflector {
    /// Transverse wavevector κ = √(k⊥² − ω²/c²) of the vacuum/surface TM
    /// mode at this frequency, when the outermost medium supports one
    /// (Re ε < −1). Quadratures seed panels there: the mode is a sharp ridge
    /// just above the light line that a coarse panel samples right past.
    pub fn surface_mode_kappa(&self) -> Option<f64> {
        let eps = match &self.kind {
            ResolvedKind::HalfSpace { eps: Eps::Value(e) } => *e,
            ResolvedKind::Overlayer {
                eps_layer: Eps::Value(e),
                ..
            } => *e,
            _ => return None,
        };
        if eps.re >= -1.0 {
            return None;
        }
        let omega = frequency_scale(self.frequency);
        // κ² = −(ω/c)²/(1 + ε) for the bound TM mode of a single interface.
        let kappa = (omega / SPEED_OF_LIGHT)
            * (-Complex64::new(1.0, 0.0) / (Complex64::new(1.0, 0.0) + eps)).sqrt();
        (kappa.re.is_finite() && kappa.re > 0.0).then_some(kappa.re)
    }

    /// Reflection amplitude against vacuum at transverse wavevector `kperp`.
    pub fn amplitude(&self, pol: Polarization, kperp: f64) -> Complex64 {
        match &self.kind {
            ResolvedKind::Mirror => Complex64::new(mirror_amplitude(pol), 0.0),
            ResolvedKind::HalfSpace { eps } => {
                fresnel_resolved(pol, Eps::Value(VACUUM), *eps, self.frequency, kperp)
            }
            ResolvedKind::Overlayer {
                eps_layer,
                thickness,
                eps_substrate,
            } => {
                let r_top = fresnel_resolved(pol, Eps::Value(VACUUM), *eps_layer, self.frequency, kperp);
                let r_bottom =
                    fresnel_resolved(pol, *eps_layer, *eps_substrate, self.frequency, kperp);
                let kz_layer = match eps_layer {
                    Eps::Value(eps) => normal_wavevector_from_eps(*eps, self.frequency, kperp),
                    // A mirror layer hides the substrate entirely.
                    Eps::Mirror => return r_top,
                };
                // e^{2iw k_z}: |·| = e^{−2w Im k_z} ≤ 1 because Im k_z ≥ 0.
                let phase = (Complex64::new(0.0, 2.0 * thickness) * kz_layer).exp();
                let num = r_top + phase * r_bottom;
                let den = Complex64::new(1.0, 0.0) + phase * r_top * r_bottom;
                if den.norm_sqr() == 0.0 {
                    DEGENERATE_NUDGES.fetch_add(1, Ordering::Relaxed);
                    return self.amplitude_nudged(pol, kperp);
                }
                num / den
            }
        }
    }

    fn amplitude_nudged(&self, pol: Polarization, kperp: f64) -> Complex64 {
        let nudged = if kperp > 0.0 {
            kperp * (1.0 + 1e-9)
        } else {
            1e-9 * frequency_scale(self.frequency) / SPEED_OF_LIGHT
        };
        self.amplitude(pol, nudged)
    }
}

const VACUUM: Complex64 = Complex64::new(1.0, 0.0);

fn frequency_scale(frequency: Frequency) -> f64 {
    match frequency {
        Frequency::Real(w) | Frequency::Imaginary(w) => w,
        Frequency::OffAxis(z) => z.norm(),
    }
}

/// k_z = √(ε ω²/c² − k⊥²) with Im k_z ≥ 0; for a real positive radicand the
/// positive real root; on the imaginary axis the exactly real i·q form.
fn normal_wavevector_from_eps(eps: Complex64, frequency: Frequency, kperp: f64) -> Complex64 {
    match frequency {
        Frequency::Imaginary(xi) => {
            let xi_c = xi / SPEED_OF_LIGHT;
            // ε(iξ) ≥ 1, so the radicand is positive and q is real.
            let q = (eps.re * xi_c * xi_c + kperp * kperp).sqrt();
            Complex64::new(0.0, q)
        }
        Frequency::Real(w) => {
            let w_c = w / SPEED_OF_LIGHT;
            let mut radicand = eps * (w_c * w_c) - kperp * kperp;
            if radicand.im == 0.0 {
                // Normalize −0.0 so the principal branch lands on Im ≥ 0.
                radicand.im = 0.0;
            }
            let kz = radicand.sqrt();
            if kz.im < 0.0 {
                -kz
            } else {
                kz
            }
        }
        Frequency::OffAxis(z) => {
            let z_c = z / SPEED_OF_LIGHT;
            let kz = (eps * z_c * z_c - kperp * kperp).sqrt();
            if kz.im < 0.0 {
                -kz
            } else {
                kz
            }
        }
    }
}

fn fresnel_resolved(
    pol: Polarization,
    eps_a: Eps,
    eps_b: Eps,
    frequency: Frequency,
    kperp: f64,
) -> Complex64 {
    match (eps_a, eps_b) {
        (Eps::Mirror, Eps::Mirror) => Complex64::new(0.0, 0.0),
        (_, Eps::Mirror) => Complex64::new(mirror_amplitude(pol), 0.0),
        (Eps::Mirror, _) => Complex64::new(-mirror_amplitude(pol), 0.0),
        (Eps::Value(ea), Eps::Value(eb)) => {
            let kza = normal_wavevector_from_eps(ea, frequency, kperp);
            let kzb = normal_wavevector_from_eps(eb, frequency, kperp);
            let (num, den) = match pol {
                Polarization::TE => (kza - kzb, kza + kzb),
                Polarization::TM => (eb * kza - ea * kzb, eb * kza + ea * kzb),
            };
            if den.norm_sqr() == 0.0 {
                DEGENERATE_NUDGES.fetch_add(1, Ordering::Relaxed);
                let nudged = if kperp > 0.0 {
                    kperp * (1.0 + 1e-9)
                } else {
                    1e-9 * frequency_scale(frequency) / SPEED_OF_LIGHT
                };
                return fresnel_resolved(pol, eps_a, eps_b, frequency, nudged);
            }
            num / den
        }
    }
}

/// k_z inside `material` at the given kinematics, branch Im k_z ≥ 0.
pub fn normal_wavevector(
    material: &DielectricModel,
    kin: &TransverseKinematics,
) -> Result<Complex64, OpticsError> {
    kin.frequency.validate()?;
    match Eps::resolve(material, kin.frequency)? {
        Eps::Value(eps) => Ok(normal_wavevector_from_eps(eps, kin.frequency, kin.kperp)),
        Eps::Mirror => Ok(match kin.frequency {
            Frequency::Imaginary(_) => Complex64::new(0.0, f64::INFINITY),
            _ => Complex64::new(f64::INFINITY, 0.0),
        }),
    }
}

/// Fresnel reflection amplitude for an a|b interface.
pub fn fresnel(
    pol: Polarization,
    medium_a: &DielectricModel,
    medium_b: &DielectricModel,
    kin: &TransverseKinematics,
) -> Result<Complex64, OpticsError> {
    kin.frequency.validate()?;
    let ea = Eps::resolve(medium_a, kin.frequency)?;
    let eb = Eps::resolve(medium_b, kin.frequency)?;
    Ok(fresnel_resolved(pol, ea, eb, kin.frequency, kin.kperp))
}

/// Reflection amplitude of a reflector against vacuum.
pub fn reflection_amplitude(
    reflector: &Reflector,
    pol: Polarization,
    kin: &TransverseKinematics,
) -> Result<Complex64, OpticsError> {
    Ok(reflector.resolve(kin.frequency)?.amplitude(pol, kin.kperp))
}
