//! Timing probe for the non-equilibrium quadrature.
use std::time::Instant;

use casimir_neq_core::material::DielectricModel;
use casimir_neq_core::noneq::{neq_antisymmetric_detailed, NeqQuadratureSpec, ThermalPair};
use casimir_neq_core::optics::Reflector;

fn main() {
    let plasma_a = Reflector::half_space(DielectricModel::gold_plasma());
    let plasma_b = Reflector::half_space(DielectricModel::plasma(6.0e15).unwrap());
    let temps = ThermalPair::new(350.0, 300.0);
    let spec = NeqQuadratureSpec::default();
    let start = Instant::now();
    match neq_antisymmetric_detailed(&plasma_a, &plasma_b, 300e-9, temps, &spec) {
        Ok((b, d)) => println!(
            "{:?}  total {:.6e} (eTE {:.4e} eTM {:.4e} pTE {:.4e} pTM {:.4e})  evals {} subdiv {}",
            start.elapsed(),
            b.total,
            b.evanescent_te,
            b.evanescent_tm,
            b.propagating_te,
            b.propagating_tm,
            d.evaluations,
            d.subdivisions
        ),
        Err(e) => println!("{:?}  ERROR: {e}", start.elapsed()),
    }
}
