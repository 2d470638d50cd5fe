//! Plane-wave reflection and transmission at a flat fluid-fluid boundary and
//! the Eckart roughness correction for the coherent field.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::scene::{SedimentProperties, WaterProperties};

/// Density and sound speed of a fluid half-space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fluid {
    pub density: f64,
    pub sound_speed: f64,
}

impl Fluid {
    pub fn impedance(&self) -> f64 {
        self.density * self.sound_speed
    }
}

impl From<&WaterProperties> for Fluid {
    fn from(w: &WaterProperties) -> Self {
        Fluid {
            density: w.density,
            sound_speed: w.sound_speed,
        }
    }
}

impl From<&SedimentProperties> for Fluid {
    fn from(s: &SedimentProperties) -> Self {
        Fluid {
            density: s.density,
            sound_speed: s.sound_speed,
        }
    }
}

/// Cosine of the transmitted angle; imaginary (positive) beyond critical.
fn transmitted_cosine(upper: Fluid, lower: Fluid, incidence: f64) -> Complex64 {
    let n = lower.sound_speed / upper.sound_speed;
    let s = n * incidence.sin();
    let arg = Complex64::new(1.0 - s * s, 0.0);
    let c = arg.sqrt();
    if c.im < 0.0 {
        -c
    } else {
        c
    }
}

/// Rayleigh pressure reflection coefficient for a plane wave in `upper`
/// hitting `lower`, incidence measured from the vertical. Real below the
/// critical angle, unit-magnitude complex beyond it.
pub fn reflection_coefficient(upper: Fluid, lower: Fluid, incidence: f64) -> Complex64 {
    let c1 = incidence.cos();
    let c2 = transmitted_cosine(upper, lower, incidence);
    let z1 = upper.impedance();
    let z2 = lower.impedance();
    (z2 * c1 - z1 * c2) / (z2 * c1 + z1 * c2)
}

/// Pressure transmission coefficient `1 + R` from `upper` into `lower`.
pub fn transmission_coefficient(upper: Fluid, lower: Fluid, incidence: f64) -> Complex64 {
    let c1 = incidence.cos();
    let c2 = transmitted_cosine(upper, lower, incidence);
    let z1 = upper.impedance();
    let z2 = lower.impedance();
    2.0 * z2 * c1 / (z2 * c1 + z1 * c2)
}

/// Fraction of incident power flux carried across the boundary.
pub fn transmitted_power_fraction(upper: Fluid, lower: Fluid, incidence: f64) -> f64 {
    let t = transmission_coefficient(upper, lower, incidence);
    let c2 = transmitted_cosine(upper, lower, incidence);
    t.norm_sqr() * upper.impedance() / lower.impedance() * c2.re / incidence.cos()
}

/// Water-to-sediment reflection coefficient.
pub fn flat_reflection_coeff(
    water: &WaterProperties,
    sediment: &SedimentProperties,
    incidence_from_vertical: f64,
) -> Complex64 {
    reflection_coefficient(water.into(), sediment.into(), incidence_from_vertical)
}

/// Water-to-sediment pressure transmission coefficient.
pub fn transmission_coeff(
    water: &WaterProperties,
    sediment: &SedimentProperties,
    incidence_from_vertical: f64,
) -> Complex64 {
    transmission_coefficient(water.into(), sediment.into(), incidence_from_vertical)
}

/// Sediment-to-water pressure transmission coefficient for a ray arriving
/// from below at `refraction_from_vertical`.
pub fn transmission_coeff_upward(
    water: &WaterProperties,
    sediment: &SedimentProperties,
    refraction_from_vertical: f64,
) -> Complex64 {
    transmission_coefficient(sediment.into(), water.into(), refraction_from_vertical)
}

/// Coherent reflection coefficient of a rough interface:
/// `R * exp(-2 (k h cos(theta))^2)`, `k` the water wavenumber.
pub fn eckart_coherent_coeff(
    flat_r: Complex64,
    frequency: f64,
    rms_roughness: f64,
    incidence_from_vertical: f64,
    c_water: f64,
) -> Complex64 {
    let k = 2.0 * PI * frequency / c_water;
    let g = k * rms_roughness * incidence_from_vertical.cos();
    flat_r * (-2.0 * g * g).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn water() -> WaterProperties {
        WaterProperties::default()
    }

    #[test]
    fn normal_incidence_values() {
        let silt = flat_reflection_coeff(&water(), &SedimentProperties::very_fine_silt(), 0.0);
        let sand = flat_reflection_coeff(&water(), &SedimentProperties::medium_sand(), 0.0);
        // (Z2 - Z1) / (Z2 + Z1)
        let z1 = 1000.0 * 1480.0;
        let zs = 1147.0 * 1476.0;
        let zd = 1845.0 * 1767.0;
        assert!((silt.re - (zs - z1) / (zs + z1)).abs() < 1e-12);
        assert!((silt.re - 0.067).abs() < 0.001);
        assert!((sand.re - (zd - z1) / (zd + z1)).abs() < 1e-12);
        assert!((sand.re - 0.375).abs() < 0.001);
        assert_eq!(silt.im, 0.0);
    }

    #[test]
    fn identical_media() {
        let f = Fluid {
            density: 1000.0,
            sound_speed: 1480.0,
        };
        for &a in &[0.0, 0.4, 1.2] {
            assert!(reflection_coefficient(f, f, a).norm() < 1e-15);
            assert!((transmission_coefficient(f, f, a) - 1.0).norm() < 1e-15);
        }
    }

    #[test]
    fn energy_balance_below_critical() {
        let w = Fluid::from(&water());
        let s = Fluid::from(&SedimentProperties::medium_sand());
        let critical = (1480.0f64 / 1767.0).asin();
        for i in 0..50 {
            let a = critical * i as f64 / 50.0;
            let r = reflection_coefficient(w, s, a);
            let tp = transmitted_power_fraction(w, s, a);
            assert!((1.0 - r.norm_sqr() - tp).abs() < 1e-12, "angle {a}");
        }
        // total reflection beyond critical
        let r = reflection_coefficient(w, s, critical + 0.1);
        assert!((r.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_way_transmission_product() {
        let w = water();
        let sand = SedimentProperties::medium_sand();
        let inc: f64 = 0.5;
        let refr = ((1767.0 / 1480.0) * inc.sin()).asin();
        let down = transmission_coeff(&w, &sand, inc);
        let up = transmission_coeff_upward(&w, &sand, refr);
        let r = flat_reflection_coeff(&w, &sand, inc);
        assert!(((down * up).re - (1.0 - r.norm_sqr())).abs() < 1e-12);
    }

    #[test]
    fn eckart_limits() {
        let r = Complex64::new(0.375, 0.0);
        assert_eq!(eckart_coherent_coeff(r, 27e3, 0.0, 0.3, 1480.0), r);
        let grazing = eckart_coherent_coeff(r, 27e3, 0.01, std::f64::consts::FRAC_PI_2, 1480.0);
        assert!((grazing - r).norm() < 1e-12);
        let factor =
            eckart_coherent_coeff(Complex64::new(1.0, 0.0), 27_000.0, 0.01, 0.0, 1480.0).re;
        let k = 2.0 * PI * 27_000.0 / 1480.0;
        assert!((factor - (-2.0 * (k * 0.01) * (k * 0.01)).exp()).abs() < 1e-15);
        assert!((factor - 0.072).abs() < 0.002);
    }
}
