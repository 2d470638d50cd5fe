use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{Pose, Vec3};
use crate::propagation::{Aperture, Element};

/// Center-to-center spacing of the hydrophone modules.
pub const RECEIVER_PITCH: f64 = 0.091;
/// Cross-track spacing of the projectors on the modeled array.
pub const PROJECTOR_PITCH: f64 = 0.229;
pub const DEFAULT_PROJECTOR_DIAMETER: f64 = 0.10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Receiver {
    pub id: u32,
    pub offset: Vec3,
    /// Rectangular piston aperture, (along-track, cross-track) in meters.
    pub element_width: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Projector {
    pub id: u32,
    pub offset: Vec3,
    /// Circular piston diameter in meters.
    pub aperture_diameter: f64,
}

/// Receive and transmit element layout in the platform body frame. The pose
/// of a transmit event refers to `anchor`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArrayGeometry {
    pub receivers: Vec<Receiver>,
    pub projectors: Vec<Projector>,
    pub anchor: Vec3,
}

fn receiver_grid(
    rows_along: usize,
    cols_cross: usize,
    x0: f64,
    first_id: u32,
) -> impl Iterator<Item = Receiver> {
    let y_center = (cols_cross as f64 - 1.0) / 2.0;
    (0..rows_along).flat_map(move |i| {
        (0..cols_cross).map(move |j| Receiver {
            id: first_id + (i * cols_cross + j) as u32,
            offset: Vec3::new(
                x0 + i as f64 * RECEIVER_PITCH,
                (j as f64 - y_center) * RECEIVER_PITCH,
                0.0,
            ),
            element_width: [RECEIVER_PITCH, RECEIVER_PITCH],
        })
    })
}

fn projector_line(count: usize, x: f64, pitch: f64) -> Vec<Projector> {
    let c = (count as f64 - 1.0) / 2.0;
    (0..count)
        .map(|k| Projector {
            id: k as u32,
            offset: Vec3::new(x, (k as f64 - c) * pitch, 0.0),
            aperture_diameter: DEFAULT_PROJECTOR_DIAMETER,
        })
        .collect()
}

fn centroid(receivers: &[Receiver]) -> Vec3 {
    let n = receivers.len().max(1) as f64;
    let sum = receivers.iter().fold(Vec3::ZERO, |acc, r| acc + r.offset);
    sum * (1.0 / n)
}

fn with_receivers(receivers: Vec<Receiver>, projectors: Vec<Projector>) -> ArrayGeometry {
    let anchor = centroid(&receivers);
    ArrayGeometry {
        receivers,
        projectors,
        anchor,
    }
}

/// 4 (along) x 8 (cross) receivers at 9.1 cm, five projectors forward of the
/// receive grid at 22.9 cm cross-track spacing.
pub fn build_modeled_array() -> ArrayGeometry {
    let receivers: Vec<_> = receiver_grid(4, 8, 0.0, 0).collect();
    with_receivers(
        receivers,
        projector_line(5, 4.0 * RECEIVER_PITCH, PROJECTOR_PITCH),
    )
}

/// Six eight-channel modules as a 4 (along) x 12 (cross) grid, with the same
/// five forward projectors. This is the 48-channel layout behind the per-ping
/// series tallies of the design study.
pub fn build_modeled_array_48() -> ArrayGeometry {
    let receivers: Vec<_> = receiver_grid(4, 12, 0.0, 0).collect();
    with_receivers(
        receivers,
        projector_line(5, 4.0 * RECEIVER_PITCH, PROJECTOR_PITCH),
    )
}

/// Fielded 80-channel layout: the 4x12 rear section plus a 4x8 section
/// forward of it, and six projectors ahead of the receive array.
///
/// The projector placement is not dimensioned anywhere; they sit one pitch
/// ahead of the forward section at 0.2 m cross-track spacing.
pub fn build_field_array() -> ArrayGeometry {
    let mut receivers: Vec<_> = receiver_grid(4, 12, 0.0, 0).collect();
    receivers.extend(receiver_grid(4, 8, 4.0 * RECEIVER_PITCH, 48));
    with_receivers(receivers, projector_line(6, 9.0 * RECEIVER_PITCH, 0.2))
}

impl ArrayGeometry {
    pub fn receiver_count(&self) -> usize {
        self.receivers.len()
    }

    pub fn projector_count(&self) -> usize {
        self.projectors.len()
    }

    pub fn receiver_positions(&self, pose: &Pose) -> Vec<Vec3> {
        self.receivers
            .iter()
            .map(|r| pose.transform(r.offset - self.anchor))
            .collect()
    }

    pub fn projector_position(&self, pose: &Pose, tx: usize) -> Vec3 {
        pose.transform(self.projectors[tx].offset - self.anchor)
    }

    pub fn receiver_elements(&self, pose: &Pose) -> Vec<Element> {
        self.receivers
            .iter()
            .map(|r| Element {
                position: pose.transform(r.offset - self.anchor),
                aperture: Aperture::Rectangular {
                    width_x: r.element_width[0],
                    width_y: r.element_width[1],
                },
            })
            .collect()
    }

    pub fn projector_element(&self, pose: &Pose, tx: usize) -> Element {
        Element {
            position: self.projector_position(pose, tx),
            aperture: Aperture::Circular {
                diameter: self.projectors[tx].aperture_diameter,
            },
        }
    }

    /// Edge-to-edge extent of the receive apertures, (along, cross) in meters.
    pub fn receiver_extent(&self) -> (f64, f64) {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for r in &self.receivers {
            let c = [r.offset.x, r.offset.y];
            for a in 0..2 {
                lo[a] = lo[a].min(c[a] - r.element_width[a] / 2.0);
                hi[a] = hi[a].max(c[a] + r.element_width[a] / 2.0);
            }
        }
        (hi[0] - lo[0], hi[1] - lo[1])
    }

    /// Largest distance from the anchor to any element, horizontal plane.
    pub fn horizontal_radius(&self) -> f64 {
        let r = self
            .receivers
            .iter()
            .map(|e| e.offset)
            .chain(self.projectors.iter().map(|p| p.offset));
        r.map(|o| o.horizontal_distance(self.anchor))
            .fold(0.0, f64::max)
    }

    pub fn validate(&self) -> Result<()> {
        if self.receivers.is_empty() {
            return Err(Error::validation(
                "array.receivers",
                "at least one receiver required",
            ));
        }
        if self.projectors.is_empty() {
            return Err(Error::validation(
                "array.projectors",
                "at least one projector required",
            ));
        }
        let mut ids: Vec<u32> = self.receivers.iter().map(|r| r.id).collect();
        ids.sort_unstable();
        if ids.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::validation(
                "array.receivers",
                "receiver ids must be unique",
            ));
        }
        let mut ids: Vec<u32> = self.projectors.iter().map(|p| p.id).collect();
        ids.sort_unstable();
        if ids.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::validation(
                "array.projectors",
                "projector ids must be unique",
            ));
        }
        let z0 = self.receivers[0].offset.z;
        let all_planar = self
            .receivers
            .iter()
            .map(|r| r.offset.z)
            .chain(self.projectors.iter().map(|p| p.offset.z))
            .all(|z| z == z0);
        if !all_planar {
            return Err(Error::validation(
                "array",
                "all elements must share the same z offset",
            ));
        }
        for r in &self.receivers {
            if !(r.element_width[0] > 0.0 && r.element_width[1] > 0.0) || !r.offset.is_finite() {
                return Err(Error::validation(
                    format!("array.receivers[{}]", r.id),
                    "element_width must be > 0 and offset finite",
                ));
            }
        }
        for p in &self.projectors {
            if !(p.aperture_diameter > 0.0) || !p.offset.is_finite() {
                return Err(Error::validation(
                    format!("array.projectors[{}]", p.id),
                    "aperture_diameter must be > 0 and offset finite",
                ));
            }
        }
        Ok(())
    }
}
