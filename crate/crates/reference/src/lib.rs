//! Independent reference implementations for test comparisons.
//!
//! Everything here is deliberately written the slow, obvious way: dense
//! fixed-grid trapezoid sums, closed forms, and scalar re-derivations that
//! do not share quadrature or summation machinery with the fast paths they
//! are used to check. Test-only; never used by the library itself.

use casimir_neq_core::constants::{BOLTZMANN, HBAR, SPEED_OF_LIGHT, ZETA_3};
use casimir_neq_core::noneq::ThermalPair;
use casimir_neq_core::optics::{Frequency, Polarization, Reflector};

/// Dense trapezoid Kramers-Kronig transform:
/// ε(iξ) = 1 + (2/π) ∫ dω ω·Im ε(ω)/(ω² + ξ²), with a Drude tail below
/// `omega_lo` and an ω⁻³ tail above `omega_hi`, both summed numerically on
/// extended grids rather than in closed form.
pub fn kramers_kronig_trapezoid(
    im_eps: impl Fn(f64) -> f64,
    omega_lo: f64,
    omega_hi: f64,
    tail_plasma: f64,
    tail_gamma: f64,
    xi: f64,
    points: usize,
) -> f64 {
    let integrand = |w: f64, im: f64| w * im / (w * w + xi * xi);

    // Table body on a dense log grid.
    let mut body = 0.0;
    let ln_lo = omega_lo.ln();
    let ln_hi = omega_hi.ln();
    let mut prev_w = omega_lo;
    let mut prev_f = integrand(omega_lo, im_eps(omega_lo));
    for i in 1..points {
        let w = (ln_lo + (ln_hi - ln_lo) * i as f64 / (points - 1) as f64).exp();
        let f = integrand(w, im_eps(w));
        body += 0.5 * (f + prev_f) * (w - prev_w);
        prev_w = w;
        prev_f = f;
    }

    // Drude tail below the grid, trapezoid on a log grid down to ω_lo·1e-9.
    let mut low = 0.0;
    if tail_gamma > 0.0 {
        let drude_im = |w: f64| {
            tail_plasma * tail_plasma * tail_gamma / (w * (w * w + tail_gamma * tail_gamma))
        };
        let lo2 = omega_lo * 1e-9;
        let mut prev_w = lo2;
        let mut prev_f = integrand(lo2, drude_im(lo2));
        for i in 1..points {
            let w = lo2 * (omega_lo / lo2).powf(i as f64 / (points - 1) as f64);
            let f = integrand(w, drude_im(w));
            low += 0.5 * (f + prev_f) * (w - prev_w);
            prev_w = w;
            prev_f = f;
        }
        // The remaining [0, lo2] piece where the integrand tends to the
        // constant σ/(γ²+ξ²)·... ≈ ωp²γ/(γ²ξ²)·ω⁰; approximate linearly.
        low += prev_w.min(lo2) * integrand(lo2, drude_im(lo2));
    }

    // ω⁻³ tail above the grid out to where it is negligible.
    let im_hi = im_eps(omega_hi);
    let mut high = 0.0;
    let hi2 = omega_hi * 1e6;
    let mut pw = omega_hi;
    let mut pf = integrand(omega_hi, im_hi);
    for i in 1..points {
        let w = omega_hi * (hi2 / omega_hi).powf(i as f64 / (points - 1) as f64);
        let f = integrand(w, im_hi * (omega_hi / w).powi(3));
        high += 0.5 * (f + pf) * (w - pw);
        pw = w;
        pf = f;
    }

    1.0 + std::f64::consts::FRAC_2_PI * (low + body + high)
}

/// Scalar re-derivation of the imaginary-axis Fresnel amplitudes for a
/// vacuum | Drude-metal interface, in plain real arithmetic.
pub fn fresnel_imag_axis_drude_scalar(
    plasma_frequency: f64,
    relaxation_rate: f64,
    xi: f64,
    kperp: f64,
) -> (f64, f64) {
    let eps = 1.0 + plasma_frequency * plasma_frequency / (xi * (xi + relaxation_rate));
    let xi_c = xi / SPEED_OF_LIGHT;
    let q0 = (xi_c * xi_c + kperp * kperp).sqrt();
    let qm = (eps * xi_c * xi_c + kperp * kperp).sqrt();
    let r_te = (q0 - qm) / (q0 + qm);
    let r_tm = (eps * q0 - qm) / (eps * q0 + qm);
    (r_te, r_tm)
}

/// Ideal-mirror Casimir free energy per unit area at T = 0: −π²ħc/(720a³).
pub fn ideal_casimir_energy(separation: f64) -> f64 {
    -std::f64::consts::PI.powi(2) * HBAR * SPEED_OF_LIGHT / (720.0 * separation.powi(3))
}

/// Ideal-mirror Casimir pressure at T = 0: −π²ħc/(240a⁴).
pub fn ideal_casimir_pressure(separation: f64) -> f64 {
    -std::f64::consts::PI.powi(2) * HBAR * SPEED_OF_LIGHT / (240.0 * separation.powi(4))
}

/// Closed-form l = 0 half-weight free-energy term for an ideal-mirror pair:
/// both polarizations reflect fully, each contributing −k_BTζ(3)/(16πa²).
pub fn ideal_mirror_zero_term(separation: f64, temperature: f64) -> f64 {
    -BOLTZMANN * temperature * ZETA_3 / (8.0 * std::f64::consts::PI * separation * separation)
}

/// Dense fixed-grid Lifshitz free energy for two Drude half-spaces:
/// `n_terms` Matsubara terms, trapezoid over u = 2aq with `n_u` points, and
/// the TM-only closed-form l = 0 term (Drude: r_TE(0) = 0, r_TM(0) = 1).
pub fn lifshitz_dense_drude_pair(
    plasma1: f64,
    gamma1: f64,
    plasma2: f64,
    gamma2: f64,
    separation: f64,
    temperature: f64,
    n_terms: usize,
    n_u: usize,
) -> f64 {
    let a = separation;
    let kt = BOLTZMANN * temperature;
    let u_span = 45.0;

    // l = 0: TM only, R₁R₂ = 1, ∫ u ln(1 − e^{−u}) du = −ζ(3).
    let mut total = -kt * ZETA_3 / (16.0 * std::f64::consts::PI * a * a);

    for l in 1..=n_terms {
        let xi = 2.0 * std::f64::consts::PI * l as f64 * kt / HBAR;
        let eps1 = 1.0 + plasma1 * plasma1 / (xi * (xi + gamma1));
        let eps2 = 1.0 + plasma2 * plasma2 / (xi * (xi + gamma2));
        let xi_c = xi / SPEED_OF_LIGHT;
        let u_min = 2.0 * a * xi_c;

        let f_at = |u: f64| {
            let q = u / (2.0 * a);
            let k2 = (q * q - xi_c * xi_c).max(0.0);
            let q1 = (k2 + eps1 * xi_c * xi_c).sqrt();
            let q2 = (k2 + eps2 * xi_c * xi_c).sqrt();
            let te = ((q - q1) / (q + q1)) * ((q - q2) / (q + q2));
            let tm = ((eps1 * q - q1) / (eps1 * q + q1)) * ((eps2 * q - q2) / (eps2 * q + q2));
            let e = (-u).exp();
            u * ((1.0 - e * te).ln() + (1.0 - e * tm).ln())
        };

        let h = u_span / (n_u - 1) as f64;
        let mut sum = 0.5 * (f_at(u_min) + f_at(u_min + u_span));
        for i in 1..n_u - 1 {
            sum += f_at(u_min + i as f64 * h);
        }
        total += kt / (2.0 * std::f64::consts::PI) / (4.0 * a * a) * sum * h;
    }
    total
}

/// Per-channel dense-grid value of the antisymmetric potential.
#[derive(Debug, Clone, Copy, Default)]
pub struct DenseNeqBreakdown {
    pub propagating_te: f64,
    pub propagating_tm: f64,
    pub evanescent_te: f64,
    pub evanescent_tm: f64,
}

impl DenseNeqBreakdown {
    pub fn total(&self) -> f64 {
        self.propagating_te + self.propagating_tm + self.evanescent_te + self.evanescent_tm
    }
}

/// Dense fixed-grid trapezoid evaluation of the antisymmetric potential:
/// log-spaced ω grid of `n_omega` points times linear k⊥ grids of `n_k`
/// points per branch. Requires at least one lossy body (no η path).
///
/// Reflection amplitudes come from the optics layer (validated separately
/// against scalar re-derivations); everything else — occupation numbers,
/// branch split, weights, Im log, grids, sums — is written out here.
pub fn neq_dense_grid(
    reflector1: &Reflector,
    reflector2: &Reflector,
    separation: f64,
    temps: ThermalPair,
    omega_window_factor: f64,
    n_omega: usize,
    n_k: usize,
) -> DenseNeqBreakdown {
    assert!(
        !(reflector1.is_lossless() && reflector2.is_lossless()),
        "dense oracle handles lossy configurations only"
    );
    let a = separation;
    let t_max = temps.t1.max(temps.t2);
    let t_min = temps.t1.min(temps.t2);
    let omega_lo = 1e-6 * BOLTZMANN * t_min / HBAR;
    let omega_hi = omega_window_factor * BOLTZMANN * t_max / HBAR;

    let occupation = |w: f64, t: f64| 1.0 / (HBAR * w / (BOLTZMANN * t)).exp_m1();

    // Outer trapezoid in ln ω.
    let ln_lo = omega_lo.ln();
    let ln_hi = omega_hi.ln();
    let d_ln = (ln_hi - ln_lo) / (n_omega - 1) as f64;

    let mut channels = DenseNeqBreakdown::default();
    let mut prev: Option<[f64; 4]> = None;
    for i in 0..n_omega {
        let omega = (ln_lo + d_ln * i as f64).exp();
        let dn = occupation(omega, temps.t1) - occupation(omega, temps.t2);
        let r1 = reflector1.resolve(Frequency::Real(omega)).expect("valid");
        let r2 = reflector2.resolve(Frequency::Real(omega)).expect("valid");
        let w_c = omega / SPEED_OF_LIGHT;

        // Inner trapezoids: k⊥ linear on [0, ω/c] and [ω/c, k_max].
        let mut inner = [0.0_f64; 4];
        let h_prop = w_c / (n_k - 1) as f64;
        for j in 0..n_k {
            let kperp = h_prop * j as f64;
            let kz = ((w_c - kperp) * (w_c + kperp)).max(0.0).sqrt();
            let phase = num_complex::Complex64::from_polar(1.0, 2.0 * a * kz);
            let trapez = if j == 0 || j == n_k - 1 { 0.5 } else { 1.0 };
            for (c, pol) in [Polarization::TE, Polarization::TM].into_iter().enumerate() {
                let amp1 = r1.amplitude(pol, kperp);
                let amp2 = r2.amplitude(pol, kperp);
                let num = amp2.norm_sqr() - amp1.norm_sqr();
                let den = 1.0 - (amp1 * amp2).norm_sqr();
                if num == 0.0 || den == 0.0 {
                    continue;
                }
                let im_log = (num_complex::Complex64::new(1.0, 0.0) - phase * amp1 * amp2).arg();
                inner[c] += trapez * kperp * im_log * num / den * h_prop;
            }
        }

        let kappa_max = 45.0 / (2.0 * a);
        let k_hi = (w_c * w_c + kappa_max * kappa_max).sqrt();
        let h_evan = (k_hi - w_c) / (n_k - 1) as f64;
        for j in 0..n_k {
            let kperp = w_c + h_evan * j as f64;
            let kappa = ((kperp - w_c) * (kperp + w_c)).max(0.0).sqrt();
            let decay = (-2.0 * a * kappa).exp();
            let trapez = if j == 0 || j == n_k - 1 { 0.5 } else { 1.0 };
            for (c, pol) in [Polarization::TE, Polarization::TM].into_iter().enumerate() {
                let amp1 = r1.amplitude(pol, kperp);
                let amp2 = r2.amplitude(pol, kperp);
                let num = (amp1 * amp2.conj()).im;
                let den = (amp1 * amp2).im;
                let product = amp1 * amp2;
                let one_minus =
                    num_complex::Complex64::new(1.0 - decay * product.re, -decay * product.im);
                let im_log = one_minus.arg();
                if num == 0.0 || im_log == 0.0 {
                    continue;
                }
                let contribution = if den != 0.0 {
                    im_log * num / den
                } else {
                    -decay * num / one_minus.re
                };
                inner[2 + c] += trapez * kperp * contribution * h_evan;
            }
        }

        // ω·dn·inner is the ln ω integrand.
        let row = [
            omega * dn * inner[0],
            omega * dn * inner[1],
            omega * dn * inner[2],
            omega * dn * inner[3],
        ];
        if let Some(p) = prev {
            channels.propagating_te += 0.5 * (p[0] + row[0]) * d_ln;
            channels.propagating_tm += 0.5 * (p[1] + row[1]) * d_ln;
            channels.evanescent_te += 0.5 * (p[2] + row[2]) * d_ln;
            channels.evanescent_tm += 0.5 * (p[3] + row[3]) * d_ln;
        }
        prev = Some(row);
    }

    let prefactor = HBAR / (4.0 * std::f64::consts::PI * std::f64::consts::PI);
    DenseNeqBreakdown {
        propagating_te: prefactor * channels.propagating_te,
        propagating_tm: prefactor * channels.propagating_tm,
        evanescent_te: prefactor * channels.evanescent_te,
        evanescent_tm: prefactor * channels.evanescent_tm,
    }
}
