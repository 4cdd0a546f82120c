//! Non-equilibrium potential checks: occupation numbers, the exact nulls and
//! antisymmetry of the two-temperature potential, channel structure, the
//! dense-grid oracle, and the lossless regularization.

use casimir_neq_core::constants::{BOLTZMANN, HBAR};
use casimir_neq_core::lifshitz::{free_energy_per_area, EquilibriumConfig, MatsubaraSpec};
use casimir_neq_core::material::{builtin, DielectricModel};
use casimir_neq_core::noneq::{
    bose_occupation, neq_antisymmetric_potential, neq_spectral_density, neq_total_potential,
    NeqBreakdown, NeqQuadratureSpec, ThermalPair,
};
use casimir_neq_core::optics::Reflector;
use casimir_neq_reference::neq_dense_grid;

fn fig2_plate() -> Reflector {
    Reflector::overlayer(
        DielectricModel::gold_drude(),
        100e-9,
        builtin::silicon_table(),
    )
    .unwrap()
}

fn gold_sphere() -> Reflector {
    Reflector::half_space(DielectricModel::gold_drude())
}

#[test]
fn bose_occupation_anchors() {
    // ħω/k_BT = ln 2 gives occupation exactly 1.
    let t = 300.0;
    let omega = BOLTZMANN * t / HBAR * std::f64::consts::LN_2;
    assert!((bose_occupation(omega, t) - 1.0).abs() < 1e-14);

    // Small-argument accuracy: compare against the series
    // 1/(e^x − 1) with e^x − 1 = x(1 + x/2 + x²/6 + x³/24).
    let x = 1e-8_f64;
    let omega = x * BOLTZMANN * t / HBAR;
    let reference = 1.0 / (x * (1.0 + x * (0.5 + x * (1.0 / 6.0 + x / 24.0))));
    let rel = (bose_occupation(omega, t) - reference).abs() / reference;
    assert!(rel < 1e-12, "relative error {rel:e}");

    // Equal temperatures cancel pointwise.
    assert_eq!(bose_occupation(1e13, 300.0) - bose_occupation(1e13, 300.0), 0.0);
}

#[test]
fn equal_temperatures_null_every_channel() {
    let spec = NeqQuadratureSpec::default();
    let result = neq_antisymmetric_potential(
        &fig2_plate(),
        &gold_sphere(),
        300e-9,
        ThermalPair::new(320.0, 320.0),
        &spec,
    )
    .unwrap();
    assert_eq!(result.total, 0.0);
    assert_eq!(result.propagating_te, 0.0);
    assert_eq!(result.propagating_tm, 0.0);
    assert_eq!(result.evanescent_te, 0.0);
    assert_eq!(result.evanescent_tm, 0.0);
}

#[test]
fn identical_reflectors_null_exactly() {
    let spec = NeqQuadratureSpec::default();
    for a in [200e-9, 500e-9, 1000e-9] {
        let result = neq_antisymmetric_potential(
            &gold_sphere(),
            &gold_sphere(),
            a,
            ThermalPair::new(350.0, 300.0),
            &spec,
        )
        .unwrap();
        assert_eq!(result.total, 0.0, "identical bodies at a = {a:e}");
    }
}

#[test]
fn temperature_swap_flips_the_sign_exactly() {
    let spec = NeqQuadratureSpec::default();
    let temps = ThermalPair::new(350.0, 300.0);
    let forward =
        neq_antisymmetric_potential(&fig2_plate(), &gold_sphere(), 300e-9, temps, &spec).unwrap();
    let backward = neq_antisymmetric_potential(
        &fig2_plate(),
        &gold_sphere(),
        300e-9,
        temps.swapped(),
        &spec,
    )
    .unwrap();
    assert_eq!(forward.total.to_bits(), (-backward.total).to_bits());
    assert_eq!(
        forward.evanescent_te.to_bits(),
        (-backward.evanescent_te).to_bits()
    );
}

#[test]
fn channels_add_up_exactly() {
    let spec = NeqQuadratureSpec::default();
    let r = neq_antisymmetric_potential(
        &fig2_plate(),
        &gold_sphere(),
        300e-9,
        ThermalPair::new(350.0, 300.0),
        &spec,
    )
    .unwrap();
    let sum = r.propagating_te + r.propagating_tm + r.evanescent_te + r.evanescent_tm;
    assert_eq!(r.total.to_bits(), sum.to_bits());
}

/// The differential-measurement configuration is dominated by evanescent TE
/// waves with spectral weight concentrated at low frequency.
#[test]
fn evanescent_te_dominates_the_signal() {
    let spec = NeqQuadratureSpec::default();
    let temps = ThermalPair::new(350.0, 300.0);
    let r = neq_antisymmetric_potential(&fig2_plate(), &gold_sphere(), 300e-9, temps, &spec)
        .unwrap();
    assert!(
        r.evanescent_te.abs() >= 0.5 * r.total.abs(),
        "evanescent TE {:e} vs total {:e}",
        r.evanescent_te,
        r.total
    );

    let low = neq_spectral_density(&fig2_plate(), &gold_sphere(), 300e-9, temps, 2e12, &spec)
        .unwrap();
    let high = neq_spectral_density(&fig2_plate(), &gold_sphere(), 300e-9, temps, 2e14, &spec)
        .unwrap();
    assert!(
        low.evanescent_te.abs() >= 10.0 * high.evanescent_te.abs(),
        "spectral density must concentrate at thermal frequencies: {:e} vs {:e}",
        low.evanescent_te,
        high.evanescent_te
    );
}

#[test]
fn spectral_density_edges() {
    let spec = NeqQuadratureSpec::default();
    let equal = neq_spectral_density(
        &fig2_plate(),
        &gold_sphere(),
        300e-9,
        ThermalPair::new(300.0, 300.0),
        2e12,
        &spec,
    )
    .unwrap();
    assert_eq!(equal.total, 0.0);

    let temps = ThermalPair::new(350.0, 300.0);
    let peak = neq_spectral_density(&fig2_plate(), &gold_sphere(), 300e-9, temps, 2e12, &spec)
        .unwrap();
    let far = neq_spectral_density(
        &fig2_plate(),
        &gold_sphere(),
        300e-9,
        temps,
        100.0 * BOLTZMANN * 350.0 / HBAR,
        &spec,
    )
    .unwrap();
    assert!(far.total.abs() < 1e-12 * peak.total.abs());
}

/// Quick dense-oracle sanity at reduced resolution; the acceptance suite runs
/// the full ≥2000×2000 comparison.
#[test]
fn coarse_dense_grid_oracle_agreement() {
    let spec = NeqQuadratureSpec::default();
    let temps = ThermalPair::new(350.0, 300.0);
    let fast = neq_antisymmetric_potential(&fig2_plate(), &gold_sphere(), 300e-9, temps, &spec)
        .unwrap();
    let oracle = neq_dense_grid(&fig2_plate(), &gold_sphere(), 300e-9, temps, 50.0, 600, 600);
    let rel = ((fast.total - oracle.total()) / oracle.total()).abs();
    assert!(
        rel < 0.02,
        "adaptive {:e} vs coarse oracle {:e} (rel {rel:e})",
        fast.total,
        oracle.total()
    );
}

/// U(T,T) collapses to the equilibrium free energy exactly, and the
/// symmetrized two-temperature potential is the average of the equilibrium
/// values.
#[test]
fn total_potential_reductions() {
    let plate = fig2_plate();
    let sphere = gold_sphere();
    let a = 300e-9;
    let m_spec = MatsubaraSpec::auto(a, 300.0);
    let n_spec = NeqQuadratureSpec::default();

    let u_eq = neq_total_potential(&plate, &sphere, a, ThermalPair::new(300.0, 300.0), &m_spec, &n_spec)
        .unwrap();
    let f_eq = free_energy_per_area(
        &EquilibriumConfig {
            reflector1: plate.clone(),
            reflector2: sphere.clone(),
            separation: a,
            temperature: 300.0,
        },
        &m_spec,
    )
    .unwrap();
    assert_eq!(u_eq.to_bits(), f_eq.to_bits());

    let temps = ThermalPair::new(350.0, 300.0);
    let u_12 = neq_total_potential(&plate, &sphere, a, temps, &m_spec, &n_spec).unwrap();
    let u_21 = neq_total_potential(&plate, &sphere, a, temps.swapped(), &m_spec, &n_spec).unwrap();
    let f_350 = free_energy_per_area(
        &EquilibriumConfig {
            reflector1: plate.clone(),
            reflector2: sphere.clone(),
            separation: a,
            temperature: 350.0,
        },
        &m_spec,
    )
    .unwrap();
    let average = 0.5 * (f_350 + f_eq);
    let symmetrized = 0.5 * (u_12 + u_21);
    assert!(
        ((symmetrized - average) / average).abs() < 1e-12,
        "½[U(T₁,T₂)+U(T₂,T₁)] = {symmetrized:e} vs ½[F(T₁)+F(T₂)] = {average:e}"
    );
}

/// Identical materials: the total potential is the plain equilibrium average.
#[test]
fn gold_pair_total_is_equilibrium_average() {
    let sphere = gold_sphere();
    let a = 300e-9;
    let m_spec = MatsubaraSpec::auto(a, 300.0);
    let n_spec = NeqQuadratureSpec::default();
    let temps = ThermalPair::new(350.0, 300.0);
    let u = neq_total_potential(&sphere, &sphere, a, temps, &m_spec, &n_spec).unwrap();
    let f_at = |t: f64| {
        free_energy_per_area(
            &EquilibriumConfig {
                reflector1: sphere.clone(),
                reflector2: sphere.clone(),
                separation: a,
                temperature: t,
            },
            &m_spec,
        )
        .unwrap()
    };
    let average = 0.5 * (f_at(350.0) + f_at(300.0));
    assert_eq!(u.to_bits(), average.to_bits());
}

/// Halving the dissipation floor moves the lossless-pair result by less than
/// the quadrature tolerance: the η → 0 limit is reached.
#[test]
fn regularizer_independence_for_lossless_pair() {
    let plasma_a = Reflector::half_space(DielectricModel::gold_plasma());
    let plasma_b = Reflector::half_space(DielectricModel::plasma(6.0e15).unwrap());
    let temps = ThermalPair::new(350.0, 300.0);
    let base = NeqQuadratureSpec::default();
    let halved = NeqQuadratureSpec {
        dissipation_floor: base.dissipation_floor / 2.0,
        ..base
    };
    let u_base =
        neq_antisymmetric_potential(&plasma_a, &plasma_b, 300e-9, temps, &base).unwrap();
    let u_half =
        neq_antisymmetric_potential(&plasma_a, &plasma_b, 300e-9, temps, &halved).unwrap();
    let rel = ((u_base.total - u_half.total) / u_half.total).abs();
    assert!(
        rel < 10.0 * base.relative_tolerance,
        "eta dependence {rel:e}: {:e} vs {:e}",
        u_base.total,
        u_half.total
    );
    assert!(u_base.total.is_finite());
}

/// A three-configuration antisymmetry sweep; the full randomized suite runs
/// in the acceptance tests.
#[test]
fn antisymmetry_quick_sweep() {
    let spec = NeqQuadratureSpec::default();
    let configs: [(Reflector, Reflector, f64); 3] = [
        (fig2_plate(), gold_sphere(), 250e-9),
        (
            Reflector::half_space(builtin::silicon_table()),
            gold_sphere(),
            400e-9,
        ),
        (
            Reflector::half_space(DielectricModel::gold_plasma()),
            Reflector::half_space(builtin::gold_table()),
            600e-9,
        ),
    ];
    for (r1, r2, a) in &configs {
        let temps = ThermalPair::new(340.0, 290.0);
        let fwd = neq_antisymmetric_potential(r1, r2, *a, temps, &spec).unwrap();
        let bwd = neq_antisymmetric_potential(r1, r2, *a, temps.swapped(), &spec).unwrap();
        let scale = fwd.total.abs().max(bwd.total.abs()).max(1e-300);
        assert!(
            (fwd.total + bwd.total).abs() / scale < 1e-10,
            "antisymmetry violated: {:e} + {:e}",
            fwd.total,
            bwd.total
        );
    }
}

#[test]
fn breakdown_default_is_zero() {
    let b = NeqBreakdown::default();
    assert_eq!(b.total, 0.0);
}
