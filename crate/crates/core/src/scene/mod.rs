//! World model: media, layering, arrays, survey track, targets.

mod array;
mod config;

pub use array::{
    build_field_array, build_modeled_array, build_modeled_array_48, ArrayGeometry, Projector,
    Receiver, DEFAULT_PROJECTOR_DIAMETER, PROJECTOR_PITCH, RECEIVER_PITCH,
};
pub use config::{load_scenario, parse_scenario, scenario_hash, serialize_scenario};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{Pose, Vec3};
use crate::synth::WaveformConfig;

/// Frequency at which sediment attenuation coefficients are referenced.
pub const ATTENUATION_REFERENCE_HZ: f64 = 20_000.0;

/// Geoacoustic parameter set for one sediment type.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SedimentProperties {
    /// kg/m^3
    pub density: f64,
    /// m/s
    pub sound_speed: f64,
    /// dB/m at 20 kHz
    pub attenuation_at_ref: f64,
    /// Roughness spectrum prefactor w2, m^(4 - gamma)
    pub spectral_strength: f64,
    /// Roughness spectrum exponent gamma
    pub spectral_exponent: f64,
    /// dB re 1 m^-1
    pub volume_scattering_strength: f64,
}

impl SedimentProperties {
    pub const fn medium_sand() -> Self {
        SedimentProperties {
            density: 1845.0,
            sound_speed: 1767.0,
            attenuation_at_ref: 10.0,
            spectral_strength: 1.410e-4,
            spectral_exponent: 3.25,
            volume_scattering_strength: -20.0,
        }
    }

    pub const fn very_fine_silt() -> Self {
        SedimentProperties {
            density: 1147.0,
            sound_speed: 1476.0,
            attenuation_at_ref: 1.4,
            spectral_strength: 1.638e-5,
            spectral_exponent: 3.25,
            volume_scattering_strength: -28.6,
        }
    }

    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "medium_sand" => Some(Self::medium_sand()),
            "very_fine_silt" => Some(Self::very_fine_silt()),
            _ => None,
        }
    }

    /// Attenuation in dB/m, scaled linearly in frequency from the 20 kHz value.
    pub fn attenuation_db_per_m(&self, frequency: f64) -> f64 {
        self.attenuation_at_ref * frequency / ATTENUATION_REFERENCE_HZ
    }

    pub fn validate(&self, section: &str) -> Result<()> {
        let f = |name: &str| format!("{section}.{name}");
        if !(self.density > 0.0) {
            return Err(Error::validation(f("density"), "must be > 0"));
        }
        if !(self.sound_speed > 0.0) {
            return Err(Error::validation(f("sound_speed"), "must be > 0"));
        }
        if !(self.attenuation_at_ref >= 0.0) || !self.attenuation_at_ref.is_finite() {
            return Err(Error::validation(f("attenuation_at_ref"), "must be >= 0"));
        }
        if !(self.spectral_strength > 0.0) || !self.spectral_strength.is_finite() {
            return Err(Error::validation(f("spectral_strength"), "must be > 0"));
        }
        if !(self.spectral_exponent > 2.0 && self.spectral_exponent < 4.0) {
            return Err(Error::validation(
                f("spectral_exponent"),
                "must lie strictly between 2 and 4",
            ));
        }
        if !self.volume_scattering_strength.is_finite() {
            return Err(Error::validation(
                f("volume_scattering_strength"),
                "must be finite",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WaterProperties {
    pub density: f64,
    pub sound_speed: f64,
    /// dB/m, frequency independent over the band.
    pub absorption: f64,
}

impl Default for WaterProperties {
    fn default() -> Self {
        WaterProperties {
            density: 1000.0,
            sound_speed: 1480.0,
            absorption: 0.0,
        }
    }
}

impl WaterProperties {
    pub fn validate(&self) -> Result<()> {
        if !(self.density > 0.0) {
            return Err(Error::validation("water.density", "must be > 0"));
        }
        if !(self.sound_speed > 0.0) {
            return Err(Error::validation("water.sound_speed", "must be > 0"));
        }
        if !(self.absorption >= 0.0) {
            return Err(Error::validation("water.absorption", "must be >= 0"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuriedLayer {
    pub depth_below_interface: f64,
    pub lower_medium: SedimentProperties,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SceneGeometry {
    pub water_depth: f64,
    /// Height of the array above the sediment-water interface.
    pub sensor_altitude: f64,
    pub interface_rms_roughness: f64,
    pub buried_layer: Option<BuriedLayer>,
}

impl SceneGeometry {
    /// z of the air-water surface.
    pub fn surface_z(&self) -> f64 {
        -self.water_depth
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.water_depth > 0.0) {
            return Err(Error::validation("geometry.water_depth", "must be > 0"));
        }
        if !(self.sensor_altitude > 0.0 && self.sensor_altitude < self.water_depth) {
            return Err(Error::validation(
                "geometry.sensor_altitude",
                format!(
                    "must satisfy 0 < sensor_altitude < water_depth ({} m)",
                    self.water_depth
                ),
            ));
        }
        if !(self.interface_rms_roughness >= 0.0) {
            return Err(Error::validation(
                "geometry.interface_rms_roughness",
                "must be >= 0",
            ));
        }
        if let Some(layer) = &self.buried_layer {
            if !(layer.depth_below_interface > 0.0) {
                return Err(Error::validation(
                    "geometry.buried_layer.depth_below_interface",
                    "must be > 0",
                ));
            }
            layer
                .lower_medium
                .validate("geometry.buried_layer.lower_medium")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetKind {
    Sphere,
    Cylinder,
    Point,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetSpec {
    pub kind: TargetKind,
    #[serde(default)]
    pub radius: f64,
    /// Cylinders only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length: Option<f64>,
    pub position: Vec3,
    /// Rotation of the cylinder axis about z in radians; yaw 0 points the
    /// axis along x.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub yaw: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed_ts_override: Option<f64>,
}

impl TargetSpec {
    pub fn sphere(radius: f64, position: Vec3) -> Self {
        TargetSpec {
            kind: TargetKind::Sphere,
            radius,
            length: None,
            position,
            yaw: None,
            fixed_ts_override: None,
        }
    }

    pub fn cylinder(radius: f64, length: f64, position: Vec3, yaw: f64) -> Self {
        TargetSpec {
            kind: TargetKind::Cylinder,
            radius,
            length: Some(length),
            position,
            yaw: Some(yaw),
            fixed_ts_override: None,
        }
    }

    pub fn point(position: Vec3, ts: f64) -> Self {
        TargetSpec {
            kind: TargetKind::Point,
            radius: 0.0,
            length: None,
            position,
            yaw: None,
            fixed_ts_override: Some(ts),
        }
    }

    pub fn is_buried(&self) -> bool {
        self.position.z >= 0.0
    }

    pub fn validate(&self, field: &str) -> Result<()> {
        if !self.position.is_finite() {
            return Err(Error::validation(
                format!("{field}.position"),
                "must be finite",
            ));
        }
        match self.kind {
            TargetKind::Point => {
                if self.fixed_ts_override.map_or(true, |t| !t.is_finite()) {
                    return Err(Error::validation(
                        format!("{field}.fixed_ts_override"),
                        "point targets need a finite target strength",
                    ));
                }
            }
            TargetKind::Sphere => {
                if !(self.radius > 0.0) {
                    return Err(Error::validation(format!("{field}.radius"), "must be > 0"));
                }
            }
            TargetKind::Cylinder => {
                if !(self.radius > 0.0) {
                    return Err(Error::validation(format!("{field}.radius"), "must be > 0"));
                }
                if !self.length.is_some_and(|l| l > 0.0) {
                    return Err(Error::validation(format!("{field}.length"), "must be > 0"));
                }
                if !self.yaw.is_some_and(f64::is_finite) {
                    return Err(Error::validation(
                        format!("{field}.yaw"),
                        "cylinders need an orientation",
                    ));
                }
            }
        }
        if let Some(ts) = self.fixed_ts_override {
            if !ts.is_finite() {
                return Err(Error::validation(
                    format!("{field}.fixed_ts_override"),
                    "must be finite",
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TxSchedule {
    /// One projector per location, cycling through the projectors.
    RoundRobin,
    /// Every projector fires once at every location.
    AllTxPerLocation,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Track {
    pub ping_count: usize,
    pub along_track_advance: f64,
    pub tx_schedule: TxSchedule,
    /// Horizontal (x, y) of the first location.
    pub start: [f64; 2],
}

impl Default for Track {
    fn default() -> Self {
        Track {
            ping_count: 1,
            along_track_advance: RECEIVER_PITCH,
            tx_schedule: TxSchedule::AllTxPerLocation,
            start: [0.0, 0.0],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseConfig {
    pub enabled: bool,
    pub sea_state: u8,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        NoiseConfig {
            enabled: true,
            sea_state: 3,
        }
    }
}

/// Point-scatterer realization parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScattererConfig {
    pub interface: bool,
    pub volume: bool,
    /// scatterers / m^2
    pub interface_density: f64,
    /// scatterers / m^3
    pub volume_density: f64,
    /// Volume scatterers are generated for 0 < z <= volume_depth.
    pub volume_depth: f64,
    /// Minimum expected scatterers per resolution cell; fewer logs a warning,
    /// fewer than one is an error.
    pub min_per_cell: f64,
    /// Side of the square generation tiles, m.
    pub tile_size: f64,
    /// Scatterers whose incidence from any element would exceed this angle
    /// from vertical are left out of a transmit event, degrees.
    pub max_incidence_deg: f64,
}

impl Default for ScattererConfig {
    fn default() -> Self {
        ScattererConfig {
            interface: true,
            volume: true,
            interface_density: 250.0,
            volume_density: 500.0,
            volume_depth: 3.0,
            min_per_cell: 10.0,
            tile_size: 1.0,
            max_incidence_deg: 60.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PropagationConfig {
    /// Highest image order per propagation leg; 0 disables multipath.
    pub max_order: u32,
    /// Include the coherent (specular) interface reflection and its multiples.
    pub coherent_reflection: bool,
}

impl Default for PropagationConfig {
    fn default() -> Self {
        PropagationConfig {
            max_order: 2,
            coherent_reflection: true,
        }
    }
}

/// Full simulation description.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub geometry: SceneGeometry,
    pub water: WaterProperties,
    pub sediment: SedimentProperties,
    pub array: ArrayGeometry,
    pub track: Track,
    pub waveform: WaveformConfig,
    pub noise: NoiseConfig,
    pub scatterers: ScattererConfig,
    pub propagation: PropagationConfig,
    pub targets: Vec<TargetSpec>,
    pub rng_seed: u64,
}

impl Scenario {
    /// The simulated design-study scene: 2 m altitude in 2.5 m of water,
    /// 1 cm interface roughness, 48-channel array, 51 locations with all five
    /// projectors firing at each.
    pub fn design_study(sediment: SedimentProperties) -> Self {
        Scenario {
            geometry: SceneGeometry {
                water_depth: 2.5,
                sensor_altitude: 2.0,
                interface_rms_roughness: 0.01,
                buried_layer: None,
            },
            water: WaterProperties::default(),
            sediment,
            array: build_modeled_array_48(),
            track: Track {
                ping_count: 51,
                ..Track::default()
            },
            waveform: WaveformConfig::default(),
            noise: NoiseConfig::default(),
            scatterers: ScattererConfig::default(),
            propagation: PropagationConfig::default(),
            targets: Vec::new(),
            rng_seed: 1,
        }
    }

    pub fn sensor_z(&self) -> f64 {
        -self.geometry.sensor_altitude
    }

    pub fn validate(&self) -> Result<()> {
        self.geometry.validate()?;
        self.water.validate()?;
        self.sediment.validate("sediment")?;
        self.array.validate()?;
        self.waveform.validate()?;
        if self.track.ping_count < 1 {
            return Err(Error::validation("track.ping_count", "must be >= 1"));
        }
        if !(self.track.along_track_advance > 0.0) {
            return Err(Error::validation(
                "track.along_track_advance",
                "must be > 0",
            ));
        }
        if self.noise.sea_state > 6 {
            return Err(Error::validation("noise.sea_state", "must be in 0..=6"));
        }
        let sc = &self.scatterers;
        if !(sc.interface_density >= 0.0) || !(sc.volume_density >= 0.0) {
            return Err(Error::validation("scatterers", "densities must be >= 0"));
        }
        if !(sc.volume_depth > 0.0) {
            return Err(Error::validation("scatterers.volume_depth", "must be > 0"));
        }
        if !(sc.tile_size > 0.0) {
            return Err(Error::validation("scatterers.tile_size", "must be > 0"));
        }
        if !(sc.max_incidence_deg > 0.0 && sc.max_incidence_deg < 90.0) {
            return Err(Error::validation(
                "scatterers.max_incidence_deg",
                "must lie in (0, 90)",
            ));
        }
        if !(sc.min_per_cell >= 0.0) {
            return Err(Error::validation("scatterers.min_per_cell", "must be >= 0"));
        }
        for (i, t) in self.targets.iter().enumerate() {
            t.validate(&format!("targets.{i}"))?;
        }
        Ok(())
    }
}

/// One transmit event along the track.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransmitEvent {
    /// Sequential index over all transmit events.
    pub event_index: usize,
    /// Index of the along-track location.
    pub location_index: usize,
    pub tx_id: usize,
    pub pose: Pose,
}

/// Transmit events along a straight +x track.
pub fn ping_poses(s: &Scenario) -> Vec<TransmitEvent> {
    let n_tx = s.array.projector_count();
    let z = s.sensor_z();
    let pose_at = |loc: usize| {
        Pose::at(Vec3::new(
            s.track.start[0] + loc as f64 * s.track.along_track_advance,
            s.track.start[1],
            z,
        ))
    };
    match s.track.tx_schedule {
        TxSchedule::RoundRobin => (0..s.track.ping_count)
            .map(|loc| TransmitEvent {
                event_index: loc,
                location_index: loc,
                tx_id: loc % n_tx,
                pose: pose_at(loc),
            })
            .collect(),
        TxSchedule::AllTxPerLocation => (0..s.track.ping_count)
            .flat_map(|loc| (0..n_tx).map(move |tx| (loc, tx)))
            .enumerate()
            .map(|(event_index, (loc, tx))| TransmitEvent {
                event_index,
                location_index: loc,
                tx_id: tx,
                pose: pose_at(loc),
            })
            .collect(),
    }
}

/// Bookkeeping of how many element-level series a survey produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SurveyTally {
    pub locations: usize,
    pub transmit_events: usize,
    pub receivers: usize,
    /// (tx, rx, location) series over the whole survey.
    pub series: usize,
    /// Location x receiver series for a single transmitter.
    pub series_per_transmitter: usize,
}

pub fn survey_tally(s: &Scenario) -> SurveyTally {
    let events = ping_poses(s).len();
    let receivers = s.array.receiver_count();
    SurveyTally {
        locations: s.track.ping_count,
        transmit_events: events,
        receivers,
        series: events * receivers,
        series_per_transmitter: s.track.ping_count * receivers,
    }
}
