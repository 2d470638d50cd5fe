//! The composite level of a point response: the chain of deterministic
//! factors between projector, scatterer and receiver, each taken from the
//! propagation services so the decomposition can be checked factor by
//! factor.

use num_complex::Complex64;

use super::cross_section::{volume_cross_section, InterfaceScattering, SmallPerturbation};
use super::{PointScatterer, ScattererKind};
use crate::geom::Vec3;
use crate::propagation::{
    absorption_db, db_to_amplitude, eckart_coherent_coeff, enumerate_image_sources,
    flat_reflection_coeff, piston_directivity, refracted_path, source_amplitude, straight_path,
    transmission_coeff, transmission_coeff_upward, Element, ImageSource, RayPath,
};
use crate::scene::Scenario;

/// One propagation leg between a transducer (or one of its images) and a
/// point in the scene.
#[derive(Debug, Clone, PartialEq)]
pub struct Leg {
    pub path: RayPath,
    /// Image order used for the leg; 0 is the direct path.
    pub order: u32,
    pub directivity: f64,
    /// Product of boundary reflection factors of the image.
    pub boundary: Complex64,
    /// Amplitude factor of water and sediment absorption.
    pub absorption: f64,
    /// Water-to-sediment transmission (buried points only, else 1).
    pub transmission_down: Complex64,
    /// Sediment-to-water transmission (buried points only, else 1).
    pub transmission_up: Complex64,
    /// Unit vector at the point, pointing back along the ray toward the
    /// transducer.
    pub toward_element: Vec3,
}

impl Leg {
    pub fn travel_time(&self) -> f64 {
        self.path.travel_time
    }

    pub fn length(&self) -> f64 {
        self.path.length()
    }

    /// Angle above the interface plane of the ray at the point, rad.
    pub fn grazing(&self) -> f64 {
        (-self.toward_element.z).clamp(-1.0, 1.0).asin()
    }
}

/// Straight path in water for points above the interface, refracted path
/// for points at or below it. `None` when the image cannot reach the point.
pub(crate) fn image_path(image: &ImageSource, point: Vec3, s: &Scenario) -> Option<RayPath> {
    if !image.reaches(point) {
        return None;
    }
    let (cw, cs) = (s.water.sound_speed, s.sediment.sound_speed);
    if point.z < 0.0 {
        Some(straight_path(image.position, point, cw, false))
    } else {
        refracted_path(image.position, point, cw, cs).ok()
    }
}

/// Coherent seabed reflection coefficient at an incidence from vertical.
pub fn seabed_coefficient(s: &Scenario, frequency: f64, incidence: f64) -> Complex64 {
    let flat = flat_reflection_coeff(&s.water, &s.sediment, incidence);
    eckart_coherent_coeff(
        flat,
        frequency,
        s.geometry.interface_rms_roughness,
        incidence,
        s.water.sound_speed,
    )
}

/// Leg from `element` via `image` to `point`.
pub fn leg(
    element: &Element,
    image: &ImageSource,
    point: Vec3,
    s: &Scenario,
    frequency: f64,
) -> Option<Leg> {
    let path = image_path(image, point, s)?;
    let departure = path.departure();
    let directivity =
        piston_directivity(element.aperture, frequency, s.water.sound_speed, departure);
    let boundary = if image.order == 0 {
        Complex64::new(1.0, 0.0)
    } else {
        image.boundary_factor(seabed_coefficient(s, frequency, path.incidence))
    };
    let absorption = db_to_amplitude(absorption_db(&path, frequency, &s.water, &s.sediment));
    let (down, up) = if point.z > 0.0 {
        (
            transmission_coeff(&s.water, &s.sediment, path.incidence),
            transmission_coeff_upward(&s.water, &s.sediment, path.refraction),
        )
    } else {
        (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0))
    };
    Some(Leg {
        order: image.order,
        directivity,
        boundary,
        absorption,
        transmission_down: down,
        transmission_up: up,
        toward_element: -path.arrival(),
        path,
    })
}

/// Direct (order 0) leg.
pub fn direct_leg(element: &Element, point: Vec3, s: &Scenario, frequency: f64) -> Option<Leg> {
    let image = &enumerate_image_sources(element.position, &s.geometry, 0)[0];
    leg(element, image, point, s, frequency)
}

/// Every leg from `element` to `point` up to the multipath order.
pub fn legs(
    element: &Element,
    images: &[ImageSource],
    point: Vec3,
    s: &Scenario,
    frequency: f64,
) -> Vec<Leg> {
    images
        .iter()
        .filter_map(|im| leg(element, im, point, s, frequency))
        .collect()
}

/// Bistatic azimuth between the incident and scattered horizontal
/// directions; pi for backscatter.
pub fn bistatic_azimuth(tx: &Leg, rx: &Leg) -> f64 {
    // Incident travel direction is opposite to `toward_element` of the
    // transmit leg; scattered travel direction is `toward_element` of the
    // receive leg.
    let (ix, iy) = (-tx.toward_element.x, -tx.toward_element.y);
    let (sx, sy) = (rx.toward_element.x, rx.toward_element.y);
    let ni = ix.hypot(iy);
    let ns = sx.hypot(sy);
    if ni < 1e-12 || ns < 1e-12 {
        return std::f64::consts::PI;
    }
    ((ix * sx + iy * sy) / (ni * ns)).clamp(-1.0, 1.0).acos()
}

/// Deterministic scattering amplitude sqrt(sigma * measure) of a diffuse
/// scatterer for a given pair of legs, m.
pub fn scattering_amplitude(
    sc: &PointScatterer,
    tx: &Leg,
    rx: &Leg,
    s: &Scenario,
    model: &dyn InterfaceScattering,
    frequency: f64,
) -> f64 {
    let sigma = match sc.kind {
        ScattererKind::Interface => {
            model.cross_section(
                &s.sediment,
                &s.water,
                frequency,
                tx.grazing(),
                rx.grazing(),
                bistatic_azimuth(tx, rx),
            ) * sc.patch_measure
        }
        ScattererKind::Volume => volume_cross_section(&s.sediment, sc.patch_measure),
    };
    sigma.max(0.0).sqrt()
}

/// Amplitude of a point response with scattering length `scattering` (m)
/// along a pair of legs, excluding the stochastic factor.
pub fn pair_amplitude(source: f64, tx: &Leg, rx: &Leg, scattering: Complex64) -> Complex64 {
    let real = source * tx.directivity * rx.directivity * tx.absorption * rx.absorption
        / (tx.length() * rx.length());
    scattering * real * tx.transmission_down * rx.transmission_up * tx.boundary * rx.boundary
}

/// The individual factors of a direct-path composite level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelFactors {
    /// Pa at 1 m.
    pub source: f64,
    pub tx_directivity: f64,
    pub rx_directivity: f64,
    /// sqrt(sigma * measure), m.
    pub scattering: f64,
    /// 1 / (r_tx r_rx), 1/m^2.
    pub spreading: f64,
    /// Two-way absorption amplitude factor.
    pub absorption: f64,
    /// Two-way interface transmission (1 for points in the water or on the
    /// interface).
    pub transmission: Complex64,
    pub stochastic: Complex64,
}

impl LevelFactors {
    pub fn product(&self) -> Complex64 {
        self.transmission
            * self.stochastic
            * (self.source
                * self.tx_directivity
                * self.rx_directivity
                * self.scattering
                * self.spreading
                * self.absorption)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompositeLevel {
    /// Complex pressure amplitude factor at the receiver, Pa.
    pub amplitude: Complex64,
    /// Two-way travel time, s.
    pub delay: f64,
    /// False when no ray joins the scatterer and an element; the amplitude
    /// is then zero.
    pub reachable: bool,
    pub factors: Option<LevelFactors>,
}

impl CompositeLevel {
    const UNREACHABLE: CompositeLevel = CompositeLevel {
        amplitude: Complex64::new(0.0, 0.0),
        delay: f64::NAN,
        reachable: false,
        factors: None,
    };
}

/// Interface scattering model implied by the scene: perturbation theory
/// with the spectrum rolled off to match the configured RMS roughness.
/// A perfectly smooth interface has no diffuse return.
pub fn scene_interface_model(s: &Scenario) -> SmallPerturbation {
    SmallPerturbation::from_rms_roughness(&s.sediment, s.geometry.interface_rms_roughness)
        .unwrap_or(SmallPerturbation {
            outer_scale: f64::INFINITY,
        })
}

/// Direct-path composite level of a diffuse scatterer between a projector
/// and a receiver.
pub fn composite_level(
    sc: &PointScatterer,
    tx: &Element,
    rx: &Element,
    s: &Scenario,
    frequency: f64,
) -> CompositeLevel {
    composite_level_with(&scene_interface_model(s), sc, tx, rx, s, frequency)
}

pub fn composite_level_with(
    model: &dyn InterfaceScattering,
    sc: &PointScatterer,
    tx: &Element,
    rx: &Element,
    s: &Scenario,
    frequency: f64,
) -> CompositeLevel {
    let (Some(lt), Some(lr)) = (
        direct_leg(tx, sc.position, s, frequency),
        direct_leg(rx, sc.position, s, frequency),
    ) else {
        return CompositeLevel::UNREACHABLE;
    };
    let factors = LevelFactors {
        source: source_amplitude(s.waveform.source_level),
        tx_directivity: lt.directivity,
        rx_directivity: lr.directivity,
        scattering: scattering_amplitude(sc, &lt, &lr, s, model, frequency),
        spreading: 1.0 / (lt.length() * lr.length()),
        absorption: lt.absorption * lr.absorption,
        transmission: lt.transmission_down * lr.transmission_up,
        stochastic: sc.stochastic_factor,
    };
    CompositeLevel {
        amplitude: factors.product(),
        delay: lt.travel_time() + lr.travel_time(),
        reachable: true,
        factors: Some(factors),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::propagation::{transmitted_power_fraction, Aperture, Fluid};
    use crate::scene::SedimentProperties;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn scene() -> Scenario {
        let mut s = Scenario::design_study(SedimentProperties::medium_sand());
        s.water.absorption = 0.002;
        s
    }

    fn element(p: Vec3) -> Element {
        Element {
            position: p,
            aperture: Aperture::Rectangular {
                width_x: 0.091,
                width_y: 0.091,
            },
        }
    }

    fn interface_point(x: f64, y: f64, measure: f64) -> PointScatterer {
        PointScatterer {
            position: Vec3::new(x, y, 0.0),
            kind: ScattererKind::Interface,
            patch_measure: measure,
            stochastic_factor: Complex64::new(1.0, 0.0),
        }
    }

    #[test]
    fn nadir_interface_scatterer_hand_composed() {
        let s = scene();
        let f = 25e3;
        let e = element(Vec3::new(0.0, 0.0, -2.0));
        let sc = interface_point(0.0, 0.0, 0.004);
        let lvl = composite_level(&sc, &e, &e, &s, f);
        let sigma = scene_interface_model(&s).cross_section(
            &s.sediment,
            &s.water,
            f,
            FRAC_PI_2,
            FRAC_PI_2,
            PI,
        );
        let src = 10f64.powf(s.waveform.source_level / 20.0) * 1e-6;
        let want =
            src * (sigma * 0.004).sqrt() / (2.0 * 2.0) * 10f64.powf(-2.0 * 0.002 * 2.0 / 20.0);
        assert!((lvl.amplitude.norm() / want - 1.0).abs() < 1e-12);
        assert!((lvl.delay - 4.0 / 1480.0).abs() < 1e-15);
    }

    #[test]
    fn zero_stochastic_factor_silences() {
        let s = scene();
        let e = element(Vec3::new(0.0, 0.0, -2.0));
        let mut sc = interface_point(0.3, 0.1, 0.004);
        sc.stochastic_factor = Complex64::new(0.0, 0.0);
        assert_eq!(
            composite_level(&sc, &e, &e, &s, 25e3).amplitude,
            Complex64::new(0.0, 0.0)
        );
    }

    #[test]
    fn buried_factor_isolation() {
        let mut s = scene();
        s.sediment.attenuation_at_ref = 0.0;
        let f = 25e3;
        let tx = element(Vec3::new(0.0, 0.0, -2.0));
        let rx = element(Vec3::new(0.2, 0.1, -2.0));
        let sc = PointScatterer {
            position: Vec3::new(0.4, 0.3, 0.5),
            kind: ScattererKind::Volume,
            patch_measure: 0.002,
            stochastic_factor: Complex64::new(0.6, -0.8),
        };
        let lvl = composite_level(&sc, &tx, &rx, &s, f);
        let fac = lvl.factors.unwrap();
        let lt = direct_leg(&tx, sc.position, &s, f).unwrap();
        let lr = direct_leg(&rx, sc.position, &s, f).unwrap();
        // Same formula as for a scatterer on the interface, evaluated with
        // the refracted geometry and unit transmission.
        let src = source_amplitude(s.waveform.source_level);
        let water_only = src
            * lt.directivity
            * lr.directivity
            * (0.01f64 * 0.002).sqrt()
            * 10f64.powf(-0.002 * (lt.path.water_length + lr.path.water_length) / 20.0)
            / (lt.length() * lr.length());
        let ratio = lvl.amplitude / (fac.transmission * sc.stochastic_factor);
        assert!((ratio.re / water_only - 1.0).abs() < 1e-12);
        assert!(ratio.im.abs() < 1e-12 * water_only);
    }

    #[test]
    fn two_way_transmission_matches_power_fraction() {
        let s = scene();
        let tx = element(Vec3::new(0.0, 0.0, -2.0));
        let p = Vec3::new(0.5, 0.0, 0.7);
        let l = direct_leg(&tx, p, &s, 25e3).unwrap();
        let two_way = (l.transmission_down * l.transmission_up).re;
        let frac = transmitted_power_fraction(
            Fluid::from(&s.water),
            Fluid::from(&s.sediment),
            l.path.incidence,
        );
        assert!((two_way - frac).abs() < 1e-12);
    }

    #[test]
    fn reciprocity_of_pair_amplitude() {
        let s = scene();
        let a = element(Vec3::new(0.0, 0.0, -2.0));
        let b = element(Vec3::new(0.3, -0.2, -2.0));
        let sc = interface_point(0.7, 0.4, 0.004);
        let ab = composite_level(&sc, &a, &b, &s, 25e3).amplitude;
        let ba = composite_level(&sc, &b, &a, &s, 25e3).amplitude;
        assert!(ab.norm() > 0.0);
        assert!((ab - ba).norm() < 1e-12 * ab.norm());
    }

    #[test]
    fn backscatter_azimuth_is_pi() {
        let s = scene();
        let e = element(Vec3::new(0.0, 0.0, -2.0));
        let l = direct_leg(&e, Vec3::new(1.0, 0.5, 0.0), &s, 25e3).unwrap();
        assert!((bistatic_azimuth(&l, &l) - PI).abs() < 1e-12);
    }
}
