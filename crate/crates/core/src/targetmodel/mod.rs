//! Rigid-target point responses from large-ka target-strength formulas.
//!
//! Propagation to and from buried targets (refraction, absorption,
//! interface transmission) is applied by the same factor chain as the
//! diffuse scatterers; here only the target's own scattering length and its
//! effective scattering center are computed.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geom::Vec3;
use crate::propagation::path_between;
use crate::scene::{SedimentProperties, TargetKind, TargetSpec, WaterProperties};

/// Lowest target strength reported, dB; deep aspect nulls clamp here.
pub const TS_FLOOR_DB: f64 = -120.0;

/// Target strength of a large rigid sphere: `20 log10(a / 2)`.
pub fn sphere_ts(radius: f64) -> f64 {
    20.0 * (radius / 2.0).log10()
}

/// Broadside target strength of a finite rigid cylinder:
/// `10 log10(a L^2 / (2 lambda))`. Valid for ka >> 1.
pub fn cylinder_ts(radius: f64, length: f64, wavelength: f64) -> f64 {
    10.0 * (radius * length * length / (2.0 * wavelength)).log10()
}

/// Amplitude taper of a cylinder away from broadside:
/// `sinc^2((k L / 2) sin(aspect))`.
pub fn cylinder_aspect_taper(length: f64, wavelength: f64, aspect: f64) -> f64 {
    let x = PI * length / wavelength * aspect.sin();
    let s = if x.abs() < 1e-9 { 1.0 } else { x.sin() / x };
    s * s
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetEcho {
    /// Effective scattering center, m.
    pub center: Vec3,
    /// Target strength for this geometry and frequency, dB.
    pub ts: f64,
    pub kind: TargetKind,
}

impl TargetEcho {
    /// Scattering length `10^(TS/20)`, m.
    pub fn amplitude(&self) -> f64 {
        10f64.powf(self.ts / 20.0)
    }
}

/// Unit vector at `point` pointing back along the ray toward `from`.
fn direction_toward(
    from: Vec3,
    point: Vec3,
    water: &WaterProperties,
    sediment: &SedimentProperties,
) -> Vec3 {
    if point.z < 0.0 || from.z >= 0.0 {
        return (from - point).normalized();
    }
    match path_between(from, point, water.sound_speed, sediment.sound_speed) {
        Ok(p) => -p.arrival(),
        Err(_) => (from - point).normalized(),
    }
}

/// Echoes of one target for a transmit position `tx` and receive position
/// `rx` (elements or their images).
pub fn target_echoes(
    t: &TargetSpec,
    tx: Vec3,
    rx: Vec3,
    frequency: f64,
    water: &WaterProperties,
    sediment: &SedimentProperties,
) -> Result<Vec<TargetEcho>> {
    let speed = if t.is_buried() {
        sediment.sound_speed
    } else {
        water.sound_speed
    };
    let wavelength = speed / frequency;
    let echo = match t.kind {
        TargetKind::Point => TargetEcho {
            center: t.position,
            ts: t.fixed_ts_override.ok_or_else(|| {
                Error::validation("target.fixed_ts_override", "required for point targets")
            })?,
            kind: TargetKind::Point,
        },
        TargetKind::Sphere => TargetEcho {
            center: t.position,
            ts: t.fixed_ts_override.unwrap_or_else(|| sphere_ts(t.radius)),
            kind: TargetKind::Sphere,
        },
        TargetKind::Cylinder => {
            let yaw = t
                .yaw
                .ok_or_else(|| Error::validation("target.yaw", "cylinder orientation undefined"))?;
            let length = t
                .length
                .ok_or_else(|| Error::validation("target.length", "required for cylinders"))?;
            let axis = Vec3::new(yaw.cos(), yaw.sin(), 0.0);
            let a = direction_toward(tx, t.position, water, sediment);
            let b = direction_toward(rx, t.position, water, sediment);
            let bisector = (a + b).normalized();
            let along = bisector.dot(axis).clamp(-1.0, 1.0);
            let aspect = along.asin();
            let broadside = t
                .fixed_ts_override
                .unwrap_or_else(|| cylinder_ts(t.radius, length, wavelength));
            let taper = cylinder_aspect_taper(length, wavelength, aspect);
            let ts = if taper > 0.0 {
                (broadside + 20.0 * taper.log10()).max(TS_FLOOR_DB)
            } else {
                TS_FLOOR_DB
            };
            let perp = bisector - axis * along;
            let center = if perp.norm() > 1e-12 {
                t.position + perp.normalized() * t.radius
            } else {
                t.position
            };
            TargetEcho {
                center,
                ts,
                kind: TargetKind::Cylinder,
            }
        }
    };
    Ok(vec![echo])
}
