//! Sphere-plate observables of the differential measurement: the proximity
//! force approximation, the two-sector force difference ΔF, and the
//! overlayer filter-window diagnostic.
//!
//! The plate is divided into an Au sector and a Si sector, both covered by a
//! thin metallic overlayer. ΔF is the difference of the sphere-plate force
//! over the two sectors; for identical overlayer and Au-sector materials the
//! Au-sector plane-parallel problem collapses to a homogeneous half-space and
//! its antisymmetric non-equilibrium part vanishes identically, so ΔF tracks
//! the non-equilibrium potential over the Si sector.

use std::fmt;

use crate::constants::{BOLTZMANN, HBAR, SPEED_OF_LIGHT};
use crate::lifshitz::{free_energy_detailed, EquilibriumConfig, MatsubaraSpec};
use crate::material::{DielectricModel, MaterialError};
use crate::noneq::{
    neq_antisymmetric_detailed, NeqError, NeqQuadratureSpec, ThermalPair,
};
use crate::optics::Reflector;

/// Geometry, materials, and temperatures of the differential setup.
#[derive(Debug, Clone, PartialEq)]
pub struct ApparatusConfig {
    /// Sphere radius R, m.
    pub sphere_radius: f64,
    /// Sphere-plate gap a, m.
    pub separation: f64,
    /// Overlayer thickness w, m.
    pub overlayer_thickness: f64,
    pub sphere_material: DielectricModel,
    pub overlayer_material: DielectricModel,
    pub sector_au_material: DielectricModel,
    pub sector_si_material: DielectricModel,
    pub temps: ThermalPair,
}

impl ApparatusConfig {
    /// The default geometry: R = 150 μm, a = 300 nm, w = 100 nm, Drude gold
    /// sphere/overlayer/sector over the built-in silicon table, both bodies
    /// at 300 K.
    pub fn default_geometry() -> Self {
        Self {
            sphere_radius: 150e-6,
            separation: 300e-9,
            overlayer_thickness: 100e-9,
            sphere_material: DielectricModel::gold_drude(),
            overlayer_material: DielectricModel::gold_drude(),
            sector_au_material: DielectricModel::gold_drude(),
            sector_si_material: crate::material::builtin::silicon_table(),
            temps: ThermalPair::new(300.0, 300.0),
        }
    }

    fn validate(&self) -> Result<(), NeqError> {
        for (name, v) in [
            ("sphere radius", self.sphere_radius),
            ("separation", self.separation),
            ("overlayer thickness", self.overlayer_thickness),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(NeqError::InvalidConfig(format!(
                    "{name} must be positive, got {v:e} m"
                )));
            }
        }
        Ok(())
    }

    /// Non-fatal diagnostics: the proximity force approximation needs R ≫ a.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.sphere_radius < 100.0 * self.separation {
            out.push(format!(
                "sphere radius {:.3e} m is less than 100x the separation {:.3e} m; \
                 the proximity force approximation degrades",
                self.sphere_radius, self.separation
            ));
        }
        out
    }

    /// Plane-parallel reflector for the sphere side.
    pub fn sphere_reflector(&self) -> Reflector {
        Reflector::half_space(self.sphere_material.clone())
    }

    /// Plane-parallel reflector seen over the Au sector: the overlayer on the
    /// Au sector material, collapsed to a half-space when they are identical.
    pub fn au_sector_reflector(&self) -> Reflector {
        self.sector_reflector(&self.sector_au_material)
    }

    /// Plane-parallel reflector seen over the Si sector.
    pub fn si_sector_reflector(&self) -> Reflector {
        self.sector_reflector(&self.sector_si_material)
    }

    fn sector_reflector(&self, substrate: &DielectricModel) -> Reflector {
        if *substrate == self.overlayer_material {
            Reflector::half_space(self.overlayer_material.clone())
        } else {
            Reflector::Overlayer {
                layer: self.overlayer_material.clone(),
                thickness: self.overlayer_thickness,
                substrate: substrate.clone(),
            }
        }
    }
}

/// The differential force and its decomposition, all in newtons. Negative
/// forces are attractive (toward the plate).
///
/// Two identities hold exactly by construction:
/// `delta_f = f_over_si − f_over_au` and
/// `delta_f = equilibrium_part + antisymmetric_part`
/// (`f_over_si` is assembled as `f_over_au + delta_f`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaFResult {
    /// ΔF = F_Si − F_Au.
    pub delta_f: f64,
    /// Sphere-plate force over the Au sector.
    pub f_over_au: f64,
    /// Sphere-plate force over the Si sector.
    pub f_over_si: f64,
    /// 2πR × difference of the equilibrium-average potentials.
    pub equilibrium_part: f64,
    /// 2πR × difference of the antisymmetric potentials.
    pub antisymmetric_part: f64,
    /// |ΔF − 2πR·Ū_Si|: quality of the single-sector approximation.
    pub residual: f64,
}

/// Per-sector quadrature effort and accuracy.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SectorDiagnostics {
    /// Matsubara terms used (maximum over the two temperatures).
    pub matsubara_terms: usize,
    /// Inner-integrand evaluations of the non-equilibrium quadrature.
    pub neq_evaluations: usize,
    /// Outer ω-panel bisections of the non-equilibrium quadrature.
    pub neq_subdivisions: usize,
    /// Channel error estimate relative to the antisymmetric total.
    pub achieved_tolerance: f64,
}

/// ΔF with per-sector diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaFEvaluation {
    pub result: DeltaFResult,
    pub au_sector: SectorDiagnostics,
    pub si_sector: SectorDiagnostics,
}

/// Proximity force approximation: sphere-plate force 2πR·U from the
/// plane-parallel unit-area potential U. Valid for R ≫ a; linear in R.
pub fn pfa_force(sphere_radius: f64, potential: f64) -> f64 {
    2.0 * std::f64::consts::PI * sphere_radius * potential
}

/// Thermal wavelength ħc/(k_B T) in meters.
pub fn thermal_wavelength(temperature: f64) -> f64 {
    HBAR * SPEED_OF_LIGHT / (BOLTZMANN * temperature)
}

struct SectorPotentials {
    equilibrium_average: f64,
    antisymmetric: f64,
    diagnostics: SectorDiagnostics,
}

/// Plane-parallel potentials for one plate sector against the sphere side.
fn sector_potentials(
    plate: &Reflector,
    sphere: &Reflector,
    separation: f64,
    temps: ThermalPair,
    matsubara: &MatsubaraSpec,
    neq_spec: &NeqQuadratureSpec,
) -> Result<SectorPotentials, NeqError> {
    let equilibrium_at = |t: f64| {
        free_energy_detailed(
            &EquilibriumConfig {
                reflector1: plate.clone(),
                reflector2: sphere.clone(),
                separation,
                temperature: t,
            },
            matsubara,
        )
    };
    let eq1 = equilibrium_at(temps.t1)?;
    let eq2 = equilibrium_at(temps.t2)?;
    let (neq, neq_diag) =
        neq_antisymmetric_detailed(plate, sphere, separation, temps, neq_spec)?;
    Ok(SectorPotentials {
        equilibrium_average: 0.5 * (eq1.value + eq2.value),
        antisymmetric: neq.total,
        diagnostics: SectorDiagnostics {
            matsubara_terms: eq1.terms_used.max(eq2.terms_used),
            neq_evaluations: neq_diag.evaluations,
            neq_subdivisions: neq_diag.subdivisions,
            achieved_tolerance: neq_diag.achieved_tolerance,
        },
    })
}

/// The differential sphere-plate force ΔF(T₁,T₂) with its decomposition into
/// equilibrium-average and antisymmetric parts.
pub fn delta_f(
    cfg: &ApparatusConfig,
    matsubara: &MatsubaraSpec,
    neq_spec: &NeqQuadratureSpec,
) -> Result<DeltaFEvaluation, NeqError> {
    cfg.validate()?;
    let sphere = cfg.sphere_reflector();
    let plate_au = cfg.au_sector_reflector();
    let plate_si = cfg.si_sector_reflector();

    // The two sector evaluations are independent; run them concurrently.
    let (au, si) = std::thread::scope(|scope| {
        let au = scope.spawn(|| {
            sector_potentials(&plate_au, &sphere, cfg.separation, cfg.temps, matsubara, neq_spec)
        });
        let si = scope.spawn(|| {
            sector_potentials(&plate_si, &sphere, cfg.separation, cfg.temps, matsubara, neq_spec)
        });
        (
            au.join().expect("sector evaluation panicked"),
            si.join().expect("sector evaluation panicked"),
        )
    });
    let (au, si) = (au?, si?);

    let radius = cfg.sphere_radius;
    let equilibrium_part =
        pfa_force(radius, si.equilibrium_average) - pfa_force(radius, au.equilibrium_average);
    let antisymmetric_part =
        pfa_force(radius, si.antisymmetric) - pfa_force(radius, au.antisymmetric);
    let delta_f = equilibrium_part + antisymmetric_part;
    let f_over_au = pfa_force(radius, au.equilibrium_average + au.antisymmetric);
    let f_over_si = f_over_au + delta_f;
    let residual = (delta_f - pfa_force(radius, si.antisymmetric)).abs();

    Ok(DeltaFEvaluation {
        result: DeltaFResult {
            delta_f,
            f_over_au,
            f_over_si,
            equilibrium_part,
            antisymmetric_part,
            residual,
        },
        au_sector: au.diagnostics,
        si_sector: si.diagnostics,
    })
}

/// Overlayer filter-window diagnostic: the thickness must exceed the
/// penetration depth of gap-frequency photons (ω_c = c/2a) yet stay below
/// that of thermal photons (ω_T = 0.05 k_B max(T)/ħ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterWindowReport {
    /// Penetration depth at the gap frequency c/(2a), m.
    pub delta_0: f64,
    /// Penetration depth at the thermal frequency, m.
    pub delta_thermal: f64,
    /// Overlayer thickness w, m.
    pub thickness: f64,
    /// δ₀ < w < δ_T.
    pub satisfied: bool,
    /// w/δ₀; should be well above 1.
    pub lower_margin: f64,
    /// δ_T/w; should be well above 1.
    pub upper_margin: f64,
}

impl fmt::Display for FilterWindowReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "filter window {}: delta_0 = {:.3e} m < w = {:.3e} m < delta_T = {:.3e} m \
             (margins {:.2}x below, {:.2}x above)",
            if self.satisfied { "satisfied" } else { "violated" },
            self.delta_0,
            self.thickness,
            self.delta_thermal,
            self.lower_margin,
            self.upper_margin,
        )
    }
}

/// Evaluate the δ₀ ≪ w ≪ δ_T window for the configured overlayer.
pub fn filter_window_check(cfg: &ApparatusConfig) -> Result<FilterWindowReport, MaterialError> {
    let omega_gap = SPEED_OF_LIGHT / (2.0 * cfg.separation);
    let omega_thermal = 0.05 * BOLTZMANN * cfg.temps.t1.max(cfg.temps.t2) / HBAR;
    let delta_0 = cfg.overlayer_material.penetration_depth(omega_gap)?;
    let delta_thermal = cfg.overlayer_material.penetration_depth(omega_thermal)?;
    let w = cfg.overlayer_thickness;
    Ok(FilterWindowReport {
        delta_0,
        delta_thermal,
        thickness: w,
        satisfied: delta_0 < w && w < delta_thermal,
        lower_margin: w / delta_0,
        upper_margin: delta_thermal / w,
    })
}
