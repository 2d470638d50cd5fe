//! Closed-form checks: target-strength table and survey bookkeeping.

use crate::beamform::default_grid;
use crate::scene::{survey_tally, Scenario, SedimentProperties};
use crate::targetmodel::{cylinder_ts, sphere_ts};

/// Sphere radius of the reference table, m.
pub const SPHERE_RADIUS: f64 = 0.051;
/// Cylinder radius of the reference table, m.
pub const CYLINDER_RADIUS: f64 = 0.076;
pub const SHORT_CYLINDER_LENGTH: f64 = 0.305;
pub const LONG_CYLINDER_LENGTH: f64 = 0.610;
/// Tabulated broadside strength of the short cylinder, dB; the wavelength
/// of the table is recovered from it.
pub const SHORT_CYLINDER_TS: f64 = -11.9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetStrengthTable {
    pub sphere: f64,
    /// Wavelength implied by the short-cylinder entry, m.
    pub wavelength: f64,
    pub short_cylinder: f64,
    pub long_cylinder: f64,
}

/// Recomputes the reference table: the wavelength comes from inverting the
/// broadside formula at the short-cylinder entry, then both cylinders are
/// evaluated with it.
pub fn target_strength_table() -> TargetStrengthTable {
    let a = CYLINDER_RADIUS;
    let l = SHORT_CYLINDER_LENGTH;
    let wavelength = a * l * l / (2.0 * 10f64.powf(SHORT_CYLINDER_TS / 10.0));
    TargetStrengthTable {
        sphere: sphere_ts(SPHERE_RADIUS),
        wavelength,
        short_cylinder: cylinder_ts(a, SHORT_CYLINDER_LENGTH, wavelength),
        long_cylinder: cylinder_ts(a, LONG_CYLINDER_LENGTH, wavelength),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bookkeeping {
    /// Default image dimensions (x, y, z) = (along, cross, depth).
    pub grid_dims: [usize; 3],
    pub series: usize,
}

/// Default image dimensions and survey tally of the design-study scene.
pub fn bookkeeping() -> Bookkeeping {
    let s = Scenario::design_study(SedimentProperties::medium_sand());
    Bookkeeping {
        grid_dims: default_grid(&s).dims,
        series: survey_tally(&s).series,
    }
}
