//! Regenerates the optical data tables shipped in `data/`.
//!
//! Both files are synthetic: the gold table is sampled from the Drude model
//! with the crate's default parameters, the silicon table from a
//! two-oscillator Lorentz model plus a weak free-carrier tail. Absolute
//! values may differ by a few percent from handbook (e.g. Palik) tables; the
//! generating formulas and parameters below are the provenance.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use casimir_neq_core::constants::EV_TO_RAD_S;

/// Gold: ε(ω) = 1 − ω_p²/(ω(ω+iγ)), ω_p = 8.9 eV/ħ, γ = 0.035 eV/ħ.
const AU_PLASMA_EV: f64 = 8.9;
const AU_GAMMA_EV: f64 = 0.035;

/// Silicon Lorentz oscillators (strength, center eV, width eV): chosen so
/// that ε(0) = 11.68 and the visible-range index is ~4, with the absorption
/// edge near 3.4 eV.
const SI_OSCILLATORS: [(f64, f64, f64); 2] = [(8.10, 3.40, 0.20), (2.58, 4.30, 0.45)];
/// Weak free-carrier tail for high-resistivity silicon (ρ ≈ 10 kΩ·cm):
/// ω_p = 1.063e11 rad/s, γ = 1.0e13 rad/s.
const SI_TAIL_PLASMA: f64 = 1.063e11;
const SI_TAIL_GAMMA: f64 = 1.0e13;

fn log_grid(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    let decades = (hi / lo).log10();
    let n = (decades * per_decade as f64).ceil() as usize + 1;
    (0..n)
        .map(|i| lo * 10f64.powf(decades * i as f64 / (n - 1) as f64))
        .collect()
}

fn gold_eps(omega: f64) -> (f64, f64) {
    let wp = AU_PLASMA_EV * EV_TO_RAD_S;
    let gamma = AU_GAMMA_EV * EV_TO_RAD_S;
    let denom = omega * omega + gamma * gamma;
    let re = 1.0 - wp * wp / denom;
    let im = wp * wp * gamma / (omega * denom);
    (re, im)
}

fn silicon_eps(omega: f64) -> (f64, f64) {
    let mut re = 1.0;
    let mut im = 0.0;
    for (strength, center_ev, width_ev) in SI_OSCILLATORS {
        let w0 = center_ev * EV_TO_RAD_S;
        let g = width_ev * EV_TO_RAD_S;
        let d_re = w0 * w0 - omega * omega;
        let d_im = g * omega;
        let den = d_re * d_re + d_im * d_im;
        re += strength * w0 * w0 * d_re / den;
        im += strength * w0 * w0 * d_im / den;
    }
    // Free-carrier tail.
    let den = omega * omega + SI_TAIL_GAMMA * SI_TAIL_GAMMA;
    re -= SI_TAIL_PLASMA * SI_TAIL_PLASMA / den;
    im += SI_TAIL_PLASMA * SI_TAIL_PLASMA * SI_TAIL_GAMMA / (omega * den);
    (re, im)
}

fn write_table(
    path: &Path,
    header: &str,
    provenance: &str,
    grid: &[f64],
    eps: impl Fn(f64) -> (f64, f64),
) {
    let mut out = String::new();
    out.push_str(header);
    writeln!(out, "provenance: {provenance}").unwrap();
    out.push_str("units: rad_s\nformat: eps\n");
    for &omega in grid {
        let (re, im) = eps(omega);
        writeln!(out, "{omega:.9e} {re:.9e} {im:.9e}").unwrap();
    }
    fs::write(path, out).unwrap();
    println!("wrote {}", path.display());
}

fn main() {
    let data_dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");

    write_table(
        &data_dir.join("au_drude.dat"),
        "# Gold optical data, synthetic.\n\
         # Generated by examples/regenerate_tables.rs from the Drude model\n\
         # eps(w) = 1 - wp^2/(w(w + i*gamma)), wp = 8.9 eV/hbar, gamma = 0.035 eV/hbar.\n\
         # No interband contributions are included.\n",
        "synthetic Drude model, wp=8.9 eV, gamma=0.035 eV, no interband terms",
        &log_grid(1.0e11, 3.0e16, 32),
        gold_eps,
    );

    write_table(
        &data_dir.join("si_lorentz.dat"),
        "# High-resistivity silicon optical data, synthetic.\n\
         # Generated by examples/regenerate_tables.rs from a two-oscillator Lorentz\n\
         # model (S, E0/eV, G/eV) = (8.10, 3.40, 0.20), (2.58, 4.30, 0.45), static\n\
         # eps(0) = 11.68, plus a weak free-carrier Drude tail with\n\
         # wp = 1.063e11 rad/s, gamma = 1.0e13 rad/s (resistivity ~10 kOhm.cm).\n\
         # Absolute values may differ by a few percent from handbook tables.\n",
        "synthetic two-oscillator Lorentz model for c-Si plus weak free-carrier tail (rho ~ 10 kOhm.cm)",
        &log_grid(1.0e7, 3.0e16, 48),
        silicon_eps,
    );
}
