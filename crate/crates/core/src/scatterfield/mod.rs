//! Point-scatterer realization of the diffuse environment: interface and
//! volume scatterers with deterministic levels and random complex factors.

mod cross_section;
mod level;

pub use cross_section::{
    interface_scattering_cross_section, volume_cross_section, InterfaceScattering,
    SmallPerturbation,
};
pub(crate) use level::image_path;
pub use level::{
    bistatic_azimuth, composite_level, composite_level_with, direct_leg, leg, legs, pair_amplitude,
    scattering_amplitude, scene_interface_model, seabed_coefficient, CompositeLevel, Leg,
    LevelFactors,
};

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geom::Vec3;
use crate::scene::Scenario;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScattererKind {
    Interface,
    Volume,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointScatterer {
    pub position: Vec3,
    pub kind: ScattererKind,
    /// Area (interface, m^2) or volume (m^3) represented by the scatterer.
    pub patch_measure: f64,
    /// Unit-variance circular complex Gaussian draw.
    pub stochastic_factor: Complex64,
}

/// Axis-aligned box, m.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub min: Vec3,
    pub max: Vec3,
}

impl Bounds {
    pub fn new(min: Vec3, max: Vec3) -> Self {
        Bounds { min, max }
    }

    pub fn area(&self) -> f64 {
        (self.max.x - self.min.x).max(0.0) * (self.max.y - self.min.y).max(0.0)
    }

    pub fn volume(&self) -> f64 {
        self.area() * (self.max.z - self.min.z.max(0.0)).max(0.0)
    }

    pub fn contains(&self, p: Vec3) -> bool {
        p.x >= self.min.x
            && p.x <= self.max.x
            && p.y >= self.min.y
            && p.y <= self.max.y
            && p.z >= self.min.z
            && p.z <= self.max.z
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScattererField {
    pub scatterers: Vec<PointScatterer>,
    /// Horizontal generation area, with `min.z = 0` and `max.z` the volume
    /// truncation depth.
    pub extent: Bounds,
    pub interface_density: f64,
    pub volume_density: f64,
    pub seed: u64,
}

impl ScattererField {
    pub fn empty(extent: Bounds, seed: u64) -> Self {
        ScattererField {
            scatterers: Vec::new(),
            extent,
            interface_density: 0.0,
            volume_density: 0.0,
            seed,
        }
    }

    pub fn len(&self) -> usize {
        self.scatterers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scatterers.is_empty()
    }

    pub fn count(&self, kind: ScattererKind) -> usize {
        self.scatterers.iter().filter(|s| s.kind == kind).count()
    }

    pub fn total_measure(&self, kind: ScattererKind) -> f64 {
        self.scatterers
            .iter()
            .filter(|s| s.kind == kind)
            .map(|s| s.patch_measure)
            .sum()
    }
}

/// Horizontal radius around a projector beyond which a scatterer at depth
/// `z` is outside the transmit cone.
pub fn cone_radius(s: &Scenario, z: f64) -> f64 {
    (s.geometry.sensor_altitude + z.max(0.0)) * s.scatterers.max_incidence_deg.to_radians().tan()
}

/// Extent covering every scatterer that any transmit event of the survey
/// can ensonify.
pub fn footprint_extent(s: &Scenario) -> Bounds {
    let depth = if s.scatterers.volume {
        s.scatterers.volume_depth
    } else {
        0.0
    };
    let reach = cone_radius(s, depth) + s.array.horizontal_radius();
    let x0 = s.track.start[0];
    let x1 = x0 + (s.track.ping_count.saturating_sub(1)) as f64 * s.track.along_track_advance;
    let y = s.track.start[1];
    Bounds::new(
        Vec3::new(x0 - reach, y - reach, 0.0),
        Vec3::new(x1 + reach, y + reach, depth),
    )
}

/// Expected-scatterer bookkeeping for one resolution cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellOccupancy {
    /// Pulse-limited annulus at nadir on the interface, m^2.
    pub interface_cell: f64,
    /// Pulse-limited shell at mid truncation depth, m^3.
    pub volume_cell: f64,
    pub interface_expected: f64,
    pub volume_expected: f64,
}

/// Size of a range-resolution cell for the configured bandwidth, and the
/// number of scatterers expected in it.
pub fn cell_occupancy(s: &Scenario) -> CellOccupancy {
    let b = s.waveform.bandwidth();
    let h = s.geometry.sensor_altitude;
    let dw = s.water.sound_speed / (2.0 * b);
    let interface_cell = PI * ((h + dw).powi(2) - h * h);
    let ds = s.sediment.sound_speed / (2.0 * b);
    let r = h * s.sediment.sound_speed / s.water.sound_speed + 0.5 * s.scatterers.volume_depth;
    let volume_cell = 2.0 * PI * r * ds * ds;
    CellOccupancy {
        interface_cell,
        volume_cell,
        interface_expected: interface_cell * s.scatterers.interface_density,
        volume_expected: volume_cell * s.scatterers.volume_density,
    }
}

/// Rejects densities that leave a resolution cell with fewer than one
/// expected scatterer, and warns below the configured minimum.
pub fn check_density(s: &Scenario) -> Result<CellOccupancy> {
    let occ = cell_occupancy(s);
    let checks = [
        (
            s.scatterers.interface,
            "scatterers.interface_density",
            occ.interface_expected,
        ),
        (
            s.scatterers.volume,
            "scatterers.volume_density",
            occ.volume_expected,
        ),
    ];
    for (enabled, field, expected) in checks {
        if !enabled {
            continue;
        }
        if expected < 1.0 {
            return Err(Error::Config(format!(
                "{field}: {expected:.3} scatterers expected per resolution cell (need >= 1)"
            )));
        }
        if expected < s.scatterers.min_per_cell {
            log::warn!(
                "{field}: {expected:.2} scatterers per resolution cell, below the minimum of {}",
                s.scatterers.min_per_cell
            );
        }
    }
    Ok(occ)
}

/// SplitMix64 finalizer, used to derive independent sub-seeds.
pub fn mix_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Unit-variance circular complex Gaussian.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) * FRAC_1_SQRT_2
}

#[derive(Debug, Clone, Copy)]
struct Tile {
    ix: usize,
    iy: usize,
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

fn tiles(extent: &Bounds, size: f64) -> Vec<Tile> {
    let nx = ((extent.max.x - extent.min.x) / size).ceil().max(0.0) as usize;
    let ny = ((extent.max.y - extent.min.y) / size).ceil().max(0.0) as usize;
    let mut out = Vec::with_capacity(nx * ny);
    for ix in 0..nx {
        for iy in 0..ny {
            let x0 = extent.min.x + ix as f64 * size;
            let y0 = extent.min.y + iy as f64 * size;
            out.push(Tile {
                ix,
                iy,
                x0,
                x1: (x0 + size).min(extent.max.x),
                y0,
                y1: (y0 + size).min(extent.max.y),
            });
        }
    }
    out
}

fn poisson_count<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> usize {
    if !(mean > 0.0) {
        return 0;
    }
    let d = Poisson::new(mean).expect("positive finite mean");
    d.sample(rng) as usize
}

fn generate_tile(
    tile: Tile,
    seed: u64,
    interface_density: f64,
    volume_density: f64,
    depth: f64,
) -> Vec<PointScatterer> {
    let stream = ((tile.ix as u64) << 32) ^ tile.iy as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, stream));
    let area = (tile.x1 - tile.x0) * (tile.y1 - tile.y0);
    let mut out = Vec::new();
    let n_i = poisson_count(interface_density * area, &mut rng);
    for _ in 0..n_i {
        let x = tile.x0 + rng.random::<f64>() * (tile.x1 - tile.x0);
        let y = tile.y0 + rng.random::<f64>() * (tile.y1 - tile.y0);
        out.push(PointScatterer {
            position: Vec3::new(x, y, 0.0),
            kind: ScattererKind::Interface,
            patch_measure: area / n_i as f64,
            stochastic_factor: complex_gaussian(&mut rng),
        });
    }
    let vol = area * depth;
    let n_v = poisson_count(volume_density * vol, &mut rng);
    for _ in 0..n_v {
        let x = tile.x0 + rng.random::<f64>() * (tile.x1 - tile.x0);
        let y = tile.y0 + rng.random::<f64>() * (tile.y1 - tile.y0);
        // (0, depth]
        let z = depth * (1.0 - rng.random::<f64>());
        out.push(PointScatterer {
            position: Vec3::new(x, y, z),
            kind: ScattererKind::Volume,
            patch_measure: vol / n_v as f64,
            stochastic_factor: complex_gaussian(&mut rng),
        });
    }
    out
}

/// Realizes the scatterer field over `extent`. Each square tile draws from
/// its own stream derived from `seed`, so the result does not depend on
/// how many workers generate it.
pub fn generate_field(s: &Scenario, extent: Bounds, seed: u64) -> Result<ScattererField> {
    check_density(s)?;
    let cfg = &s.scatterers;
    let interface_density = if cfg.interface {
        cfg.interface_density
    } else {
        0.0
    };
    let volume_density = if cfg.volume { cfg.volume_density } else { 0.0 };
    let depth = (extent.max.z - extent.min.z.max(0.0)).max(0.0);
    let list = tiles(&extent, cfg.tile_size);
    let parts: Vec<Vec<PointScatterer>> = list
        .par_iter()
        .map(|t| generate_tile(*t, seed, interface_density, volume_density, depth))
        .collect();
    let scatterers: Vec<PointScatterer> = parts.into_iter().flatten().collect();
    Ok(ScattererField {
        scatterers,
        extent,
        interface_density,
        volume_density,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::SedimentProperties;

    fn scenario() -> Scenario {
        let mut s = Scenario::design_study(SedimentProperties::medium_sand());
        s.scatterers.volume = false;
        s
    }

    #[test]
    fn poisson_count_interface() {
        let s = scenario();
        let ext = Bounds::new(Vec3::ZERO, Vec3::new(10.0, 4.0, 0.0));
        let f = generate_field(&s, ext, 42).unwrap();
        let n = f.count(ScattererKind::Interface) as f64;
        assert!((n - 10_000.0).abs() < 3.0 * 100.0, "{n}");
        assert!((f.total_measure(ScattererKind::Interface) / 40.0 - 1.0).abs() < 1e-3);
        for p in &f.scatterers {
            assert_eq!(p.position.z, 0.0);
            assert!(ext.contains(p.position));
        }
    }

    #[test]
    fn volume_measures_tile_extent() {
        let mut s = scenario();
        s.scatterers.volume = true;
        let ext = Bounds::new(Vec3::new(-1.5, -1.0, 0.0), Vec3::new(1.7, 1.3, 1.0));
        let f = generate_field(&s, ext, 3).unwrap();
        assert!((f.total_measure(ScattererKind::Volume) / ext.volume() - 1.0).abs() < 1e-3);
        for p in f
            .scatterers
            .iter()
            .filter(|p| p.kind == ScattererKind::Volume)
        {
            assert!(p.position.z > 0.0 && p.position.z <= 1.0);
        }
    }

    #[test]
    fn deterministic() {
        let s = scenario();
        let ext = Bounds::new(Vec3::ZERO, Vec3::new(3.0, 2.0, 0.0));
        let a = generate_field(&s, ext, 9).unwrap();
        let b = generate_field(&s, ext, 9).unwrap();
        assert_eq!(a, b);
        let c = generate_field(&s, ext, 10).unwrap();
        assert_ne!(a.scatterers, c.scatterers);
    }

    #[test]
    fn empty_extent() {
        let s = scenario();
        let ext = Bounds::new(Vec3::ZERO, Vec3::new(0.0, 2.0, 0.0));
        assert!(generate_field(&s, ext, 1).unwrap().is_empty());
    }

    #[test]
    fn sparse_density_rejected() {
        let mut s = scenario();
        s.scatterers.interface_density = 1.0;
        let ext = Bounds::new(Vec3::ZERO, Vec3::new(1.0, 1.0, 0.0));
        assert!(matches!(generate_field(&s, ext, 1), Err(Error::Config(_))));
    }

    #[test]
    fn default_cells_hold_ten() {
        let s = Scenario::design_study(SedimentProperties::medium_sand());
        let occ = cell_occupancy(&s);
        assert!(occ.interface_expected >= 10.0);
        assert!(occ.volume_expected >= 10.0);
    }

    #[test]
    fn stochastic_factor_unit_variance() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 200_000;
        let p: f64 = (0..n)
            .map(|_| complex_gaussian(&mut rng).norm_sqr())
            .sum::<f64>()
            / n as f64;
        assert!((p - 1.0).abs() < 0.01);
    }
}
