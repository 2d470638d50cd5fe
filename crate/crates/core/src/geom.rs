//! Small fixed-size vector math for the world frame.
//!
//! Frame: x along-track, y cross-track, z depth (positive down) with the
//! sediment-water interface at z = 0 and the air-water surface at
//! z = -water_depth.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3::new(0.0, 0.0, 0.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    #[inline]
    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    /// Unit vector; the zero vector maps to straight down.
    #[inline]
    pub fn normalized(self) -> Vec3 {
        let n = self.norm();
        if n > 0.0 {
            self * (1.0 / n)
        } else {
            Vec3::new(0.0, 0.0, 1.0)
        }
    }

    #[inline]
    pub fn horizontal_distance(self, o: Vec3) -> f64 {
        (self.x - o.x).hypot(self.y - o.y)
    }

    #[inline]
    pub fn distance(self, o: Vec3) -> f64 {
        (self - o).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Mirror about the horizontal plane `z = plane_z`.
    #[inline]
    pub fn mirror_z(self, plane_z: f64) -> Vec3 {
        Vec3::new(self.x, self.y, 2.0 * plane_z - self.z)
    }
}

impl From<[f64; 3]> for Vec3 {
    fn from(a: [f64; 3]) -> Self {
        Vec3::new(a[0], a[1], a[2])
    }
}

impl From<Vec3> for [f64; 3] {
    fn from(v: Vec3) -> Self {
        [v.x, v.y, v.z]
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    #[inline]
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Vec3 {
    #[inline]
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    #[inline]
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    #[inline]
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    #[inline]
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// Platform position and attitude. Angles in radians, applied yaw-pitch-roll
/// (z, then y, then x) to element offsets.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Pose {
    pub position: Vec3,
    pub roll: f64,
    pub pitch: f64,
    pub yaw: f64,
}

impl Pose {
    pub fn at(position: Vec3) -> Self {
        Pose {
            position,
            ..Pose::default()
        }
    }

    /// World position of a body-frame offset.
    pub fn transform(&self, offset: Vec3) -> Vec3 {
        if self.roll == 0.0 && self.pitch == 0.0 && self.yaw == 0.0 {
            return self.position + offset;
        }
        let (sr, cr) = self.roll.sin_cos();
        let (sp, cp) = self.pitch.sin_cos();
        let (sy, cy) = self.yaw.sin_cos();
        let Vec3 { x, y, z } = offset;
        // Rx(roll)
        let (y1, z1) = (cr * y - sr * z, sr * y + cr * z);
        // Ry(pitch)
        let (x2, z2) = (cp * x + sp * z1, -sp * x + cp * z1);
        // Rz(yaw)
        let (x3, y3) = (cy * x2 - sy * y1, sy * x2 + cy * y1);
        self.position + Vec3::new(x3, y3, z2)
    }

    pub fn to_array(&self) -> [f64; 6] {
        [
            self.position.x,
            self.position.y,
            self.position.z,
            self.roll,
            self.pitch,
            self.yaw,
        ]
    }

    pub fn from_array(a: [f64; 6]) -> Self {
        Pose {
            position: Vec3::new(a[0], a[1], a[2]),
            roll: a[3],
            pitch: a[4],
            yaw: a[5],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn yaw_quarter_turn_maps_x_to_y() {
        let pose = Pose {
            yaw: std::f64::consts::FRAC_PI_2,
            ..Pose::at(Vec3::new(1.0, 0.0, -2.0))
        };
        let p = pose.transform(Vec3::new(1.0, 0.0, 0.0));
        assert!((p.x - 1.0).abs() < 1e-12);
        assert!((p.y - 1.0).abs() < 1e-12);
        assert!((p.z + 2.0).abs() < 1e-12);
    }

    #[test]
    fn mirror_about_surface() {
        let p = Vec3::new(0.0, 0.0, -2.0).mirror_z(-2.5);
        assert_eq!(p.z, -3.0);
    }
}
