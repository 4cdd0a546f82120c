//! Equilibrium free-energy and pressure checks: analytic ideal-mirror
//! anchors, the dense-grid oracle, derivative consistency, and the
//! zero-frequency term's Drude/plasma distinction.

use casimir_neq_core::constants::{BOLTZMANN, ZETA_3};
use casimir_neq_core::lifshitz::{
    free_energy_per_area, matsubara_frequency, pressure_per_area, zero_frequency_term,
    EquilibriumConfig, LifshitzError, MatsubaraSpec,
};
use casimir_neq_core::material::{builtin, DielectricModel, DrudeParams};
use casimir_neq_core::optics::Reflector;
use casimir_neq_reference::{
    ideal_casimir_energy, ideal_casimir_pressure, ideal_mirror_zero_term,
    lifshitz_dense_drude_pair,
};

fn config(r1: Reflector, r2: Reflector, a: f64, t: f64) -> EquilibriumConfig {
    EquilibriumConfig {
        reflector1: r1,
        reflector2: r2,
        separation: a,
        temperature: t,
    }
}

fn gold_pair(a: f64, t: f64) -> EquilibriumConfig {
    config(
        Reflector::half_space(DielectricModel::gold_drude()),
        Reflector::half_space(DielectricModel::gold_drude()),
        a,
        t,
    )
}

fn mirror_pair(a: f64, t: f64) -> EquilibriumConfig {
    config(Reflector::IdealMirror, Reflector::IdealMirror, a, t)
}

#[test]
fn matsubara_frequency_anchors() {
    let xi1 = matsubara_frequency(300.0, 1);
    assert!(
        (xi1 - 2.46e14).abs() / 2.46e14 < 0.01,
        "xi_1(300 K) = {xi1:e}"
    );
    assert_eq!(matsubara_frequency(300.0, 0), 0.0);
    assert_eq!(matsubara_frequency(600.0, 1), 2.0 * matsubara_frequency(300.0, 1));
}

/// Near zero temperature the ideal-mirror pair reproduces the T = 0 law
/// −π²ħc/(720a³); lowering T from 1 K to 0.5 K moves the value by < 0.1%.
#[test]
fn ideal_mirror_energy_approaches_zero_temperature_law() {
    let a = 300e-9;
    let spec = MatsubaraSpec::new(1e-9, 60_000);
    let f1 = free_energy_per_area(&mirror_pair(a, 1.0), &spec).unwrap();
    let exact = ideal_casimir_energy(a);
    assert!(
        ((f1 - exact) / exact).abs() < 5e-3,
        "F(1 K) = {f1:e} vs {exact:e}"
    );
    let f_half = free_energy_per_area(&mirror_pair(a, 0.5), &spec).unwrap();
    assert!(((f_half - f1) / f1).abs() < 1e-3);
}

#[test]
fn ideal_mirror_pressure_approaches_zero_temperature_law() {
    let a = 300e-9;
    let spec = MatsubaraSpec::new(1e-9, 60_000);
    let p = pressure_per_area(&mirror_pair(a, 1.0), &spec).unwrap();
    let exact = ideal_casimir_pressure(a);
    assert!(
        ((p - exact) / exact).abs() < 5e-3,
        "P(1 K) = {p:e} vs {exact:e}"
    );
    assert!(p < 0.0, "ideal mirrors attract");
}

#[test]
fn vacuum_reflector_gives_exactly_zero() {
    let cfg = config(
        Reflector::half_space(DielectricModel::Vacuum),
        Reflector::IdealMirror,
        300e-9,
        300.0,
    );
    let spec = MatsubaraSpec::auto(300e-9, 300.0);
    assert_eq!(free_energy_per_area(&cfg, &spec).unwrap(), 0.0);
    assert_eq!(pressure_per_area(&cfg, &spec).unwrap(), 0.0);
}

/// Gold-gold free energy against the dense fixed-grid trapezoid oracle with
/// 10⁴ Matsubara terms.
#[test]
fn gold_pair_matches_dense_oracle() {
    let (a, t) = (300e-9, 300.0);
    let p = DrudeParams::gold();
    let oracle = lifshitz_dense_drude_pair(
        p.plasma_frequency,
        p.relaxation_rate,
        p.plasma_frequency,
        p.relaxation_rate,
        a,
        t,
        10_000,
        4_000,
    );
    let fast = free_energy_per_area(&gold_pair(a, t), &MatsubaraSpec::auto(a, t)).unwrap();
    let rel = ((fast - oracle) / oracle).abs();
    assert!(
        rel < 1e-3,
        "fast {fast:e} vs oracle {oracle:e} (rel {rel:e})"
    );
    assert!(fast < 0.0, "metallic plates attract");
}

/// The analytic pressure agrees with a central finite difference of the free
/// energy to 0.1%.
#[test]
fn pressure_is_the_separation_derivative() {
    let (a, t) = (300e-9, 300.0);
    let spec = MatsubaraSpec::new(1e-10, 2_000);
    let da = 0.1e-9;
    let f_plus = free_energy_per_area(&gold_pair(a + da, t), &spec).unwrap();
    let f_minus = free_energy_per_area(&gold_pair(a - da, t), &spec).unwrap();
    let fd = -(f_plus - f_minus) / (2.0 * da);
    let analytic = pressure_per_area(&gold_pair(a, t), &spec).unwrap();
    let rel = ((analytic - fd) / analytic).abs();
    assert!(
        rel < 1e-3,
        "analytic {analytic:e} vs finite difference {fd:e} (rel {rel:e})"
    );
}

/// The l = 0 term: Drude conductors keep only TM (−k_BTζ(3)/(16πa²) for unit
/// TM reflection), the plasma model adds a negative TE contribution, and the
/// ideal mirror doubles the TM value.
#[test]
fn zero_frequency_term_distinguishes_models() {
    let (a, t) = (300e-9, 300.0);
    let tm_only = -BOLTZMANN * t * ZETA_3 / (16.0 * std::f64::consts::PI * a * a);

    let drude = zero_frequency_term(&gold_pair(a, t)).unwrap();
    assert!(
        ((drude - tm_only) / tm_only).abs() < 1e-8,
        "Drude l=0 {drude:e} vs TM-only closed form {tm_only:e}"
    );

    let plasma_pair = config(
        Reflector::half_space(DielectricModel::gold_plasma()),
        Reflector::half_space(DielectricModel::gold_plasma()),
        a,
        t,
    );
    let plasma = zero_frequency_term(&plasma_pair).unwrap();
    let te_part = plasma - tm_only;
    assert!(
        te_part < 0.0,
        "plasma TE static contribution must be attractive, got {te_part:e}"
    );

    let mirror = zero_frequency_term(&mirror_pair(a, t)).unwrap();
    let closed = ideal_mirror_zero_term(a, t);
    assert!(
        ((mirror - closed) / closed).abs() < 1e-8,
        "mirror l=0 {mirror:e} vs closed form {closed:e}"
    );
}

#[test]
fn free_energy_magnitude_decreases_with_separation() {
    let spec = MatsubaraSpec::new(1e-9, 2_000);
    let mut prev = f64::INFINITY;
    for a_nm in [200.0, 300.0, 500.0, 700.0, 1000.0] {
        let f = free_energy_per_area(&gold_pair(a_nm * 1e-9, 300.0), &spec)
            .unwrap()
            .abs();
        assert!(f < prev, "|F| must decrease with a, got {f:e} at {a_nm} nm");
        prev = f;
    }
}

/// Tightening the truncation controls moves the result by less than the
/// original tolerance.
#[test]
fn truncation_is_honest() {
    let (a, t) = (300e-9, 300.0);
    let loose = MatsubaraSpec::auto(a, t);
    let tight = MatsubaraSpec::new(loose.relative_tolerance / 10.0, loose.max_terms * 2);
    let f_loose = free_energy_per_area(&gold_pair(a, t), &loose).unwrap();
    let f_tight = free_energy_per_area(&gold_pair(a, t), &tight).unwrap();
    assert!(((f_loose - f_tight) / f_tight).abs() < loose.relative_tolerance * 10.0);
}

/// Away from the l = 0 TE discontinuity, a barely dissipative Drude metal and
/// the plasma model agree to 0.5%.
#[test]
fn drude_approaches_plasma_outside_the_zero_mode() {
    let (a, t) = (300e-9, 300.0);
    let spec = MatsubaraSpec::new(1e-10, 2_000);
    let weak_drude = config(
        Reflector::half_space(DielectricModel::drude(DrudeParams::gold().plasma_frequency, 1e9).unwrap()),
        Reflector::half_space(DielectricModel::drude(DrudeParams::gold().plasma_frequency, 1e9).unwrap()),
        a,
        t,
    );
    let plasma = config(
        Reflector::half_space(DielectricModel::gold_plasma()),
        Reflector::half_space(DielectricModel::gold_plasma()),
        a,
        t,
    );
    let f_drude = free_energy_per_area(&weak_drude, &spec).unwrap()
        - zero_frequency_term(&weak_drude).unwrap();
    let f_plasma =
        free_energy_per_area(&plasma, &spec).unwrap() - zero_frequency_term(&plasma).unwrap();
    let rel = ((f_drude - f_plasma) / f_plasma).abs();
    assert!(rel < 5e-3, "l>0 sums differ by {rel:e}");
}

/// The formula is symmetric under exchanging the two reflectors, bit for bit.
#[test]
fn reflector_exchange_symmetry_is_exact() {
    let coated = Reflector::overlayer(
        DielectricModel::gold_drude(),
        100e-9,
        builtin::silicon_table(),
    )
    .unwrap();
    let bare = Reflector::half_space(DielectricModel::gold_drude());
    let spec = MatsubaraSpec::new(1e-9, 1_000);
    let f_ab = free_energy_per_area(&config(coated.clone(), bare.clone(), 300e-9, 300.0), &spec)
        .unwrap();
    let f_ba =
        free_energy_per_area(&config(bare, coated, 300e-9, 300.0), &spec).unwrap();
    assert_eq!(f_ab.to_bits(), f_ba.to_bits());
}

#[test]
fn exhausted_term_budget_reports_partial_value() {
    let err = free_energy_per_area(&mirror_pair(300e-9, 1.0), &MatsubaraSpec::new(1e-9, 3))
        .unwrap_err();
    match err {
        LifshitzError::MatsubaraNotConverged { partial, terms } => {
            assert_eq!(terms, 3);
            assert!(partial < 0.0);
        }
        other => panic!("expected truncation error, got {other}"),
    }
}
