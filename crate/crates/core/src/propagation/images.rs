//! Method of images between the flat air-water surface (z = -D) and the
//! sediment-water interface (z = 0).

use num_complex::Complex64;

use crate::geom::Vec3;
use crate::scene::SceneGeometry;

/// Pressure-release flat sea surface.
pub const SURFACE_REFLECTION: f64 = -1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Surface,
    Bottom,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImageSource {
    pub position: Vec3,
    pub order: u32,
    /// Reflections in the order a ray leaving the real element meets them.
    pub bounces: Vec<Boundary>,
    pub surface_factor: f64,
}

impl ImageSource {
    pub fn surface_bounces(&self) -> u32 {
        self.bounces
            .iter()
            .filter(|b| **b == Boundary::Surface)
            .count() as u32
    }

    pub fn bottom_bounces(&self) -> u32 {
        self.bounces
            .iter()
            .filter(|b| **b == Boundary::Bottom)
            .count() as u32
    }

    /// Whether the unfolded straight path from this image can end at
    /// `field`. Points at or below the interface are reachable only when the
    /// last reflection is at the surface.
    pub fn reaches(&self, field: Vec3) -> bool {
        match self.bounces.last() {
            None | Some(Boundary::Surface) => true,
            Some(Boundary::Bottom) => field.z < 0.0,
        }
    }

    /// Product of the boundary reflection factors. Every bounce of an
    /// unfolded path meets its plane at the same incidence, so one seabed
    /// coefficient serves all bottom bounces.
    pub fn boundary_factor(&self, bottom_coefficient: Complex64) -> Complex64 {
        let s = self.surface_factor.powi(self.surface_bounces() as i32);
        bottom_coefficient.powu(self.bottom_bounces()) * s
    }

    /// Boundary loss in dB for a given seabed coefficient.
    pub fn accumulated_loss_db(&self, bottom_coefficient: Complex64) -> f64 {
        -20.0 * self.boundary_factor(bottom_coefficient).norm().log10()
    }
}

fn reflect(p: Vec3, b: Boundary, geometry: &SceneGeometry) -> Vec3 {
    match b {
        Boundary::Surface => p.mirror_z(geometry.surface_z()),
        Boundary::Bottom => p.mirror_z(0.0),
    }
}

/// The element itself (order 0) plus, for each order n >= 1, the two images
/// whose bounce sequences alternate starting at the surface or the bottom.
pub fn enumerate_image_sources(
    position: Vec3,
    geometry: &SceneGeometry,
    max_order: u32,
) -> Vec<ImageSource> {
    let mut out = vec![ImageSource {
        position,
        order: 0,
        bounces: Vec::new(),
        surface_factor: SURFACE_REFLECTION,
    }];
    for order in 1..=max_order {
        for first in [Boundary::Surface, Boundary::Bottom] {
            let mut bounces = Vec::with_capacity(order as usize);
            let mut next = first;
            let mut p = position;
            for _ in 0..order {
                p = reflect(p, next, geometry);
                bounces.push(next);
                next = match next {
                    Boundary::Surface => Boundary::Bottom,
                    Boundary::Bottom => Boundary::Surface,
                };
            }
            out.push(ImageSource {
                position: p,
                order,
                bounces,
                surface_factor: SURFACE_REFLECTION,
            });
        }
    }
    out
}
