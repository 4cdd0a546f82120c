//! Physical constants (CODATA 2018 exact values) and unit conversions.

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e8;

/// Boltzmann constant, J/K.
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Elementary charge, C (1 eV in joules).
pub const ELECTRON_VOLT: f64 = 1.602_176_634e-19;

/// Angular frequency of a 1 eV photon: 1 eV/ħ ≈ 1.519267e15 rad/s.
pub const EV_TO_RAD_S: f64 = ELECTRON_VOLT / HBAR;

/// Apéry's constant ζ(3).
pub const ZETA_3: f64 = 1.202_056_903_159_594_2;

/// Angular frequency (rad/s) of a photon with energy `ev` in electron volts.
#[inline]
pub fn ev_to_rad_s(ev: f64) -> f64 {
    ev * EV_TO_RAD_S
}

/// Thermal frequency scale k_B T / ħ in rad/s.
#[inline]
pub fn thermal_frequency(temperature: f64) -> f64 {
    BOLTZMANN * temperature / HBAR
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ev_conversion_matches_defining_constants() {
        // 1 eV/ħ = 1.602176634e-19 / 1.054571817e-34
        assert!((EV_TO_RAD_S - 1.519_267_448_810e15).abs() / EV_TO_RAD_S < 1e-9);
        assert!((ev_to_rad_s(8.9) - 1.352_148e16).abs() / 1.352_148e16 < 1e-6);
    }

    #[test]
    fn thermal_frequency_scale_at_room_temperature() {
        let f = thermal_frequency(300.0);
        assert!((f - 3.927_6e13).abs() / f < 1e-4);
    }
}
