//! Reduced scenes used by the validation experiments.

use std::f64::consts::FRAC_PI_2;

use crate::geom::Vec3;
use crate::scene::{
    build_modeled_array_48, ArrayGeometry, Scenario, SedimentProperties, TargetSpec, TxSchedule,
};

/// Center projector and one corner receiver of the 48-channel array: a
/// bistatic pair with the array's own apertures.
pub fn single_pair_array() -> ArrayGeometry {
    let full = build_modeled_array_48();
    let center = full.projectors.len() / 2;
    ArrayGeometry {
        receivers: vec![full.receivers[0].clone()],
        projectors: vec![full.projectors[center].clone()],
        anchor: full.anchor,
    }
}

/// The forward-most cross-track row of the 48-channel receive grid (12
/// elements at one pitch) and the center projector.
pub fn cross_track_line_array() -> ArrayGeometry {
    let full = build_modeled_array_48();
    let x0 = full
        .receivers
        .iter()
        .map(|r| r.offset.x)
        .fold(f64::NEG_INFINITY, f64::max);
    let mut receivers: Vec<_> = full
        .receivers
        .iter()
        .filter(|r| (r.offset.x - x0).abs() < 1e-9)
        .cloned()
        .collect();
    receivers.sort_by(|a, b| a.offset.y.total_cmp(&b.offset.y));
    let center = full.projectors.len() / 2;
    ArrayGeometry {
        receivers,
        projectors: vec![full.projectors[center].clone()],
        anchor: full.anchor,
    }
}

/// Diffuse-only scene for the ensemble reverberation check: one pair,
/// no multipath, no specular return, no noise, a shallow volume layer.
pub fn single_pair_scene(sediment: SedimentProperties) -> Scenario {
    let mut s = Scenario::design_study(sediment);
    s.array = single_pair_array();
    s.track.ping_count = 1;
    s.track.tx_schedule = TxSchedule::RoundRobin;
    s.propagation.max_order = 0;
    s.propagation.coherent_reflection = false;
    s.noise.enabled = false;
    s.scatterers.max_incidence_deg = 45.0;
    s.scatterers.volume_depth = 0.5;
    // The shallow layer holds about 7 scatterers per range cell; the
    // ensemble average does not need the image-quality minimum.
    s.scatterers.min_per_cell = 5.0;
    s
}

/// Narrowband interface-only scene for the coherence check.
pub fn vcz_scene(
    center_frequency: f64,
    bandwidth: f64,
    duration: f64,
    max_incidence_deg: f64,
) -> Scenario {
    let mut s = Scenario::design_study(SedimentProperties::medium_sand());
    s.array = cross_track_line_array();
    s.track.ping_count = 1;
    s.track.tx_schedule = TxSchedule::RoundRobin;
    s.propagation.max_order = 0;
    s.propagation.coherent_reflection = false;
    s.noise.enabled = false;
    s.scatterers.volume = false;
    s.scatterers.max_incidence_deg = max_incidence_deg;
    s.waveform.f_start = center_frequency - bandwidth / 2.0;
    s.waveform.f_stop = center_frequency + bandwidth / 2.0;
    s.waveform.duration = duration;
    s
}

/// Flat bottom, no sub-bottom scatterers: the interface and its surface
/// multiples are the only returns.
pub fn multipath_scene(
    ping_count: usize,
    interface_density: f64,
    max_incidence_deg: f64,
) -> Scenario {
    let mut s = Scenario::design_study(SedimentProperties::medium_sand());
    s.track.ping_count = ping_count;
    s.scatterers.volume = false;
    s.scatterers.interface_density = interface_density;
    s.scatterers.max_incidence_deg = max_incidence_deg;
    s.noise.enabled = false;
    s
}

/// Along-track position of the middle location of a track.
pub fn track_middle(s: &Scenario) -> f64 {
    s.track.start[0]
        + 0.5 * (s.track.ping_count.saturating_sub(1)) as f64 * s.track.along_track_advance
}

/// Buried cylinder (cross-track axis) under the middle of the track.
pub fn contrast_scene(sediment: SedimentProperties, cfg: &super::ContrastConfig) -> Scenario {
    let mut s = Scenario::design_study(sediment);
    s.track.ping_count = cfg.ping_count;
    s.scatterers.interface_density = cfg.interface_density;
    s.scatterers.volume_density = cfg.volume_density;
    s.scatterers.volume_depth = cfg.volume_depth;
    s.scatterers.max_incidence_deg = cfg.max_incidence_deg;
    s.propagation.max_order = cfg.max_order;
    s.rng_seed = cfg.seed;
    let x = track_middle(&s);
    s.targets = vec![TargetSpec::cylinder(
        cfg.radius,
        cfg.length,
        Vec3::new(x, 0.0, cfg.burial_depth),
        FRAC_PI_2,
    )];
    s
}

/// Quiet scene holding a single point target.
pub fn psf_scene(target: Vec3, ping_count: usize) -> Scenario {
    let mut s = Scenario::design_study(SedimentProperties::medium_sand());
    s.track.ping_count = ping_count;
    s.scatterers.interface = false;
    s.scatterers.volume = false;
    s.propagation.coherent_reflection = false;
    s.propagation.max_order = 0;
    s.noise.enabled = false;
    s.targets = vec![TargetSpec::point(target, -10.0)];
    s
}

/// Small but complete scene (every echo family, noise on) for the
/// worker-count equivalence check.
pub fn determinism_scene() -> Scenario {
    let mut s = Scenario::design_study(SedimentProperties::medium_sand());
    s.track.ping_count = 2;
    s.scatterers.interface_density = 40.0;
    s.scatterers.volume_density = 150.0;
    s.scatterers.volume_depth = 0.5;
    s.scatterers.max_incidence_deg = 30.0;
    s.propagation.max_order = 1;
    let x = track_middle(&s);
    s.targets = vec![TargetSpec::sphere(0.1, Vec3::new(x, 0.0, 0.4))];
    s
}
