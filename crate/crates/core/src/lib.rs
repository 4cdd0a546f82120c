//! Casimir-Lifshitz forces between planar material stacks, in and out of
//! thermal equilibrium.
//!
//! The crate evaluates
//!
//! - equilibrium Casimir free energies and pressures per unit area by
//!   Matsubara summation over imaginary frequencies ([`lifshitz`]),
//! - the antisymmetric non-equilibrium potential between bodies held at
//!   different temperatures by real-frequency quadrature ([`noneq`]),
//! - the differential sphere-plate force ΔF measured over a two-sector
//!   (Au/Si) plate under a thin metallic overlayer ([`apparatus`]),
//!
//! on top of layered Fresnel optics ([`optics`]) and dielectric response
//! models with Kramers-Kronig continuation ([`material`]).

pub mod apparatus;
pub mod constants;
pub mod lifshitz;
pub mod material;
pub mod noneq;
pub mod optics;
pub mod quadrature;

pub use apparatus::{ApparatusConfig, DeltaFResult, FilterWindowReport};
pub use lifshitz::{EquilibriumConfig, MatsubaraSpec};
pub use material::{DielectricModel, DrudeParams, MaterialError, OpticalTable};
pub use noneq::{NeqBreakdown, NeqQuadratureSpec, ThermalPair};
pub use optics::{Frequency, Polarization, Reflector, TransverseKinematics};
