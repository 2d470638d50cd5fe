//! Scenario file format: TOML with the sections `[geometry] [water]
//! [sediment] [array] [track] [waveform] [noise] [scatterers]
//! [propagation] [targets.N]` plus a top-level `rng_seed`. Unknown keys are
//! rejected.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{
    build_field_array, build_modeled_array, build_modeled_array_48, ArrayGeometry, BuriedLayer,
    NoiseConfig, Projector, PropagationConfig, Receiver, ScattererConfig, Scenario, SceneGeometry,
    SedimentProperties, TargetSpec, Track, WaterProperties,
};
use crate::error::{Error, Result};
use crate::geom::Vec3;
use crate::synth::WaveformConfig;

const DEFAULT_RMS_ROUGHNESS: f64 = 0.01;
const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum SeedValue {
    Int(i64),
    Text(String),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rng_seed: Option<SeedValue>,
    geometry: GeometryFile,
    #[serde(default)]
    water: WaterProperties,
    sediment: SedimentFile,
    #[serde(default)]
    array: ArrayFile,
    #[serde(default)]
    track: Track,
    #[serde(default)]
    waveform: WaveformConfig,
    #[serde(default)]
    noise: NoiseConfig,
    #[serde(default)]
    scatterers: ScattererConfig,
    #[serde(default)]
    propagation: PropagationConfig,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    targets: BTreeMap<String, TargetSpec>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeometryFile {
    water_depth: f64,
    sensor_altitude: f64,
    #[serde(default = "default_roughness")]
    interface_rms_roughness: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    buried_layer: Option<BuriedLayerFile>,
}

fn default_roughness() -> f64 {
    DEFAULT_RMS_ROUGHNESS
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BuriedLayerFile {
    depth_below_interface: f64,
    lower_medium: SedimentFile,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SedimentFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    density: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sound_speed: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    attenuation_at_ref: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    spectral_strength: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    spectral_exponent: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    volume_scattering_strength: Option<f64>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArrayFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    anchor: Option<Vec3>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    receivers: Option<Vec<Receiver>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    projectors: Option<Vec<Projector>>,
}

impl SedimentFile {
    fn resolve(&self, section: &str) -> Result<SedimentProperties> {
        let base = match &self.preset {
            Some(name) => Some(SedimentProperties::preset(name).ok_or_else(|| {
                Error::validation(
                    format!("{section}.preset"),
                    format!("unknown preset `{name}` (expected medium_sand or very_fine_silt)"),
                )
            })?),
            None => None,
        };
        let pick = |v: Option<f64>, from_base: fn(&SedimentProperties) -> f64, name: &str| {
            v.or(base.as_ref().map(from_base)).ok_or_else(|| {
                Error::validation(format!("{section}.{name}"), "missing (no preset given)")
            })
        };
        let s = SedimentProperties {
            density: pick(self.density, |b| b.density, "density")?,
            sound_speed: pick(self.sound_speed, |b| b.sound_speed, "sound_speed")?,
            attenuation_at_ref: pick(
                self.attenuation_at_ref,
                |b| b.attenuation_at_ref,
                "attenuation_at_ref",
            )?,
            spectral_strength: pick(
                self.spectral_strength,
                |b| b.spectral_strength,
                "spectral_strength",
            )?,
            spectral_exponent: pick(
                self.spectral_exponent,
                |b| b.spectral_exponent,
                "spectral_exponent",
            )?,
            volume_scattering_strength: pick(
                self.volume_scattering_strength,
                |b| b.volume_scattering_strength,
                "volume_scattering_strength",
            )?,
        };
        s.validate(section)?;
        Ok(s)
    }

    fn explicit(s: &SedimentProperties) -> Self {
        SedimentFile {
            preset: None,
            density: Some(s.density),
            sound_speed: Some(s.sound_speed),
            attenuation_at_ref: Some(s.attenuation_at_ref),
            spectral_strength: Some(s.spectral_strength),
            spectral_exponent: Some(s.spectral_exponent),
            volume_scattering_strength: Some(s.volume_scattering_strength),
        }
    }
}

impl ArrayFile {
    fn resolve(&self) -> Result<ArrayGeometry> {
        let base = match self.preset.as_deref() {
            None if self.receivers.is_some() && self.projectors.is_some() => None,
            None | Some("modeled_48") => Some(build_modeled_array_48()),
            Some("modeled") => Some(build_modeled_array()),
            Some("field") => Some(build_field_array()),
            Some(other) => {
                return Err(Error::validation(
                    "array.preset",
                    format!("unknown preset `{other}` (expected modeled, modeled_48 or field)"),
                ))
            }
        };
        let receivers = match (&self.receivers, &base) {
            (Some(r), _) => r.clone(),
            (None, Some(b)) => b.receivers.clone(),
            (None, None) => unreachable!(),
        };
        let projectors = match (&self.projectors, &base) {
            (Some(p), _) => p.clone(),
            (None, Some(b)) => b.projectors.clone(),
            (None, None) => unreachable!(),
        };
        let anchor = match (self.anchor, &base) {
            (Some(a), _) => a,
            (None, Some(b)) if self.receivers.is_none() => b.anchor,
            _ => {
                let n = receivers.len().max(1) as f64;
                receivers.iter().fold(Vec3::ZERO, |a, r| a + r.offset) * (1.0 / n)
            }
        };
        let a = ArrayGeometry {
            receivers,
            projectors,
            anchor,
        };
        a.validate()?;
        Ok(a)
    }
}

fn parse_seed(v: &Option<SeedValue>) -> Result<u64> {
    match v {
        None => Ok(DEFAULT_SEED),
        Some(SeedValue::Int(i)) if *i >= 0 => Ok(*i as u64),
        Some(SeedValue::Int(_)) => Err(Error::validation("rng_seed", "must be non-negative")),
        Some(SeedValue::Text(t)) => t.trim().parse::<u64>().map_err(|e| {
            Error::validation("rng_seed", format!("not a 64-bit unsigned integer: {e}"))
        }),
    }
}

/// Parse and validate scenario text. `origin` names the source in errors.
pub fn parse_scenario(text: &str, origin: &str) -> Result<Scenario> {
    let file: ScenarioFile = toml::from_str(text).map_err(|e| Error::Parse {
        origin: origin.to_string(),
        message: e.to_string(),
    })?;

    let sediment = file.sediment.resolve("sediment")?;
    let buried_layer = match &file.geometry.buried_layer {
        Some(l) => Some(BuriedLayer {
            depth_below_interface: l.depth_below_interface,
            lower_medium: l
                .lower_medium
                .resolve("geometry.buried_layer.lower_medium")?,
        }),
        None => None,
    };
    let mut targets = Vec::with_capacity(file.targets.len());
    let mut keyed: Vec<(usize, &TargetSpec)> = Vec::new();
    for (k, t) in &file.targets {
        let idx = k.parse::<usize>().map_err(|_| {
            Error::validation(format!("targets.{k}"), "target sections must be numbered")
        })?;
        keyed.push((idx, t));
    }
    keyed.sort_by_key(|(i, _)| *i);
    for (_, t) in keyed {
        targets.push(t.clone());
    }

    let scenario = Scenario {
        geometry: SceneGeometry {
            water_depth: file.geometry.water_depth,
            sensor_altitude: file.geometry.sensor_altitude,
            interface_rms_roughness: file.geometry.interface_rms_roughness,
            buried_layer,
        },
        water: file.water,
        sediment,
        array: file.array.resolve()?,
        track: file.track,
        waveform: file.waveform,
        noise: file.noise,
        scatterers: file.scatterers,
        propagation: file.propagation,
        targets,
        rng_seed: parse_seed(&file.rng_seed)?,
    };
    scenario.validate()?;
    Ok(scenario)
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_scenario(&text, &path.display().to_string())
}

/// Canonical text form with every default written out.
pub fn serialize_scenario(s: &Scenario) -> String {
    let seed = if s.rng_seed <= i64::MAX as u64 {
        SeedValue::Int(s.rng_seed as i64)
    } else {
        SeedValue::Text(s.rng_seed.to_string())
    };
    let file = ScenarioFile {
        rng_seed: Some(seed),
        geometry: GeometryFile {
            water_depth: s.geometry.water_depth,
            sensor_altitude: s.geometry.sensor_altitude,
            interface_rms_roughness: s.geometry.interface_rms_roughness,
            buried_layer: s.geometry.buried_layer.map(|l| BuriedLayerFile {
                depth_below_interface: l.depth_below_interface,
                lower_medium: SedimentFile::explicit(&l.lower_medium),
            }),
        },
        water: s.water,
        sediment: SedimentFile::explicit(&s.sediment),
        array: ArrayFile {
            preset: None,
            anchor: Some(s.array.anchor),
            receivers: Some(s.array.receivers.clone()),
            projectors: Some(s.array.projectors.clone()),
        },
        track: s.track,
        waveform: s.waveform,
        noise: s.noise,
        scatterers: s.scatterers,
        propagation: s.propagation,
        targets: s
            .targets
            .iter()
            .enumerate()
            .map(|(i, t)| (i.to_string(), t.clone()))
            .collect(),
    };
    toml::to_string(&file).expect("scenario serializes to TOML")
}

/// Stable 64-bit digest of the canonical scenario text.
pub fn scenario_hash(s: &Scenario) -> u64 {
    let digest = Sha256::digest(serialize_scenario(s).as_bytes());
    let mut b = [0u8; 8];
    b.copy_from_slice(&digest[..8]);
    u64::from_le_bytes(b)
}
