//! Diffuse scattering cross-sections: first-order small-perturbation theory
//! for the rough fluid-fluid interface, and a constant volume scattering
//! strength for the sediment body.

use std::f64::consts::{LN_10, PI};

use num_complex::Complex64;

use crate::scene::{SedimentProperties, WaterProperties};

/// Anything that can supply a bistatic interface cross-section per unit
/// area. Grazing angles are measured from the interface plane.
pub trait InterfaceScattering: Sync {
    fn cross_section(
        &self,
        sediment: &SedimentProperties,
        water: &WaterProperties,
        frequency: f64,
        incident_grazing: f64,
        scattered_grazing: f64,
        bistatic_azimuth: f64,
    ) -> f64;
}

/// First-order perturbation theory over the power-law roughness spectrum
/// `W(K) = w2 (K^2 + K0^2)^(-gamma/2)`.
///
/// With `outer_scale = 0` this is the pure power law. A positive outer
/// scale `K0` rolls the spectrum off at wavelengths longer than `2 pi / K0`
/// so that the total roughness variance is finite, which keeps the
/// cross-section bounded at normal incidence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmallPerturbation {
    /// rad/m
    pub outer_scale: f64,
}

impl SmallPerturbation {
    pub const POWER_LAW: SmallPerturbation = SmallPerturbation { outer_scale: 0.0 };

    /// Outer scale that makes the spectrum integrate to the given RMS
    /// roughness: `h^2 = 2 pi w2 K0^(2-gamma) / (gamma - 2)`.
    /// Zero roughness yields `None`: a flat interface does not scatter.
    pub fn from_rms_roughness(sediment: &SedimentProperties, rms_roughness: f64) -> Option<Self> {
        if !(rms_roughness > 0.0) {
            return None;
        }
        let g = sediment.spectral_exponent;
        let w2 = sediment.spectral_strength;
        let base = rms_roughness * rms_roughness * (g - 2.0) / (2.0 * PI * w2);
        Some(SmallPerturbation {
            outer_scale: base.powf(1.0 / (2.0 - g)),
        })
    }

    pub fn spectrum(&self, sediment: &SedimentProperties, k: f64) -> f64 {
        let k2 = k * k + self.outer_scale * self.outer_scale;
        sediment.spectral_strength * k2.powf(-0.5 * sediment.spectral_exponent)
    }
}

/// Sediment wavenumber with attenuation as its imaginary part.
fn sediment_wavenumber(sediment: &SedimentProperties, frequency: f64) -> Complex64 {
    let alpha_np = sediment.attenuation_db_per_m(frequency) * LN_10 / 20.0;
    Complex64::new(2.0 * PI * frequency / sediment.sound_speed, alpha_np)
}

/// Vertical wavenumber with non-negative imaginary part.
fn vertical(k: Complex64, horizontal: f64) -> Complex64 {
    let q = (k * k - horizontal * horizontal).sqrt();
    if q.im < 0.0 {
        -q
    } else {
        q
    }
}

impl InterfaceScattering for SmallPerturbation {
    fn cross_section(
        &self,
        sediment: &SedimentProperties,
        water: &WaterProperties,
        frequency: f64,
        incident_grazing: f64,
        scattered_grazing: f64,
        bistatic_azimuth: f64,
    ) -> f64 {
        if frequency <= 0.0 || sediment.spectral_strength <= 0.0 {
            return 0.0;
        }
        let a = sediment.density / water.density;
        let k1 = 2.0 * PI * frequency / water.sound_speed;
        let k2 = sediment_wavenumber(sediment, frequency);
        let (ci, cs) = (incident_grazing.cos(), scattered_grazing.cos());
        let (kx_i, kx_s) = (k1 * ci, k1 * cs);
        let ki_dot_ks = kx_i * kx_s * bistatic_azimuth.cos();
        let delta2 = (kx_i * kx_i + kx_s * kx_s - 2.0 * ki_dot_ks).max(0.0);
        let q1i = k1 * incident_grazing.sin();
        let q1s = k1 * scattered_grazing.sin();
        let q2i = vertical(k2, kx_i);
        let q2s = vertical(k2, kx_s);
        let ti = 2.0 * a * q1i / (a * q1i + q2i);
        let ts = 2.0 * a * q1s / (a * q1s + q2s);
        let b = k1 * k1 - k2 * k2 / a - (1.0 - 1.0 / a) * (ki_dot_ks - q2i * q2s / a);
        let w = self.spectrum(sediment, delta2.sqrt());
        if !w.is_finite() {
            return f64::INFINITY;
        }
        0.25 * (ti * ts).norm_sqr() * b.norm_sqr() * w
    }
}

/// Bistatic interface cross-section per unit area from the pure power-law
/// spectrum of the sediment's roughness parameters.
pub fn interface_scattering_cross_section(
    sediment: &SedimentProperties,
    water: &WaterProperties,
    frequency: f64,
    incident_grazing: f64,
    scattered_grazing: f64,
    bistatic_azimuth: f64,
) -> f64 {
    SmallPerturbation::POWER_LAW.cross_section(
        sediment,
        water,
        frequency,
        incident_grazing,
        scattered_grazing,
        bistatic_azimuth,
    )
}

/// Scattering cross-section of a volume cell, m^2.
pub fn volume_cross_section(sediment: &SedimentProperties, cell_volume: f64) -> f64 {
    10f64.powf(sediment.volume_scattering_strength / 10.0) * cell_volume
}
