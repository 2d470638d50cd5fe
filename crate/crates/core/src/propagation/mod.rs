//! Geometric acoustics: refracted two-media paths, losses, boundary
//! coefficients, piston directivity, image-source multipath and ambient
//! noise.

mod directivity;
mod images;
mod interface;
mod noise;
mod refraction;

pub use directivity::{bessel_j1, piston_directivity, Aperture};
pub use images::{enumerate_image_sources, Boundary, ImageSource, SURFACE_REFLECTION};
pub use interface::{
    eckart_coherent_coeff, flat_reflection_coeff, reflection_coefficient, transmission_coeff,
    transmission_coeff_upward, transmission_coefficient, transmitted_power_fraction, Fluid,
};
pub use noise::ambient_noise_psd;
pub(crate) use refraction::solve_crossing;
pub use refraction::{
    layer_reflection_path, path_between, refracted_path, straight_path, Evanescent, RayPath,
};

use crate::geom::Vec3;
use crate::scene::{SedimentProperties, WaterProperties};

/// A transducer at a world position with its piston aperture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Element {
    pub position: Vec3,
    pub aperture: Aperture,
}

/// Pressure amplitude at 1 m, Pa, for a source level in dB re 1 uPa @ 1 m.
pub fn source_amplitude(source_level_db: f64) -> f64 {
    10f64.powf(source_level_db / 20.0) * 1e-6
}

/// One-way spherical spreading loss, dB.
pub fn spreading_loss_db(range: f64) -> f64 {
    20.0 * range.log10()
}

/// Absorption along a path: water and sediment segments at their own
/// attenuation rates, dB.
pub fn absorption_db(
    path: &RayPath,
    frequency: f64,
    water: &WaterProperties,
    sediment: &SedimentProperties,
) -> f64 {
    water.absorption * path.water_length
        + sediment.attenuation_db_per_m(frequency) * path.sediment_length
}

/// Amplitude factor corresponding to a loss in dB.
#[inline]
pub fn db_to_amplitude(loss_db: f64) -> f64 {
    10f64.powf(-loss_db / 20.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Vec3;

    #[test]
    fn source_level_to_pascal() {
        assert!((source_amplitude(120.0) - 1.0).abs() < 1e-12);
        assert!((source_amplitude(190.0) - 3162.2776601683795).abs() < 1e-9);
    }

    #[test]
    fn spreading() {
        assert_eq!(spreading_loss_db(1.0), 0.0);
        assert!((spreading_loss_db(10.0) - 20.0).abs() < 1e-12);
    }

    #[test]
    fn sediment_absorption() {
        let sand = SedimentProperties::medium_sand();
        let w = WaterProperties::default();
        let one = straight_path(
            Vec3::new(0.0, 0.0, 0.5),
            Vec3::new(0.0, 0.0, 1.5),
            1767.0,
            true,
        );
        assert!((absorption_db(&one, 20e3, &w, &sand) - 10.0).abs() < 1e-12);
        let two = straight_path(
            Vec3::new(0.0, 0.0, 0.5),
            Vec3::new(0.0, 0.0, 2.5),
            1767.0,
            true,
        );
        assert!((absorption_db(&two, 40e3, &w, &sand) - 40.0).abs() < 1e-12);
        let water_only = straight_path(
            Vec3::new(0.0, 0.0, -2.0),
            Vec3::new(0.0, 0.0, -1.0),
            1480.0,
            false,
        );
        assert_eq!(absorption_db(&water_only, 40e3, &w, &sand), 0.0);
    }
}
