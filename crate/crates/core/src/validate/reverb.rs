//! Ensemble mean-square reverberation against the sonar-equation
//! prediction built from the same scattering cross-sections.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::scenes::single_pair_scene;
use crate::error::{Error, Result};
use crate::geom::Vec3;
use crate::scatterfield::{
    composite_level_with, cone_radius, footprint_extent, generate_field, mix_seed,
    scene_interface_model, PointScatterer, ScattererKind,
};
use crate::scene::{ping_poses, Scenario, SedimentProperties};
use crate::synth::{Components, Synthesizer};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SonarEquationConfig {
    pub seeds: usize,
    pub base_seed: u64,
    /// Averaging window of the level comparison, s.
    pub window: f64,
    /// Fraction of the reverberation interval compared, centered.
    pub central_fraction: f64,
    /// Radial, azimuthal and depth steps of the prediction quadrature.
    pub radial_steps: usize,
    pub azimuth_steps: usize,
    pub depth_steps: usize,
}

impl Default for SonarEquationConfig {
    fn default() -> Self {
        SonarEquationConfig {
            seeds: 200,
            base_seed: 0,
            window: 0.5e-3,
            central_fraction: 0.8,
            radial_steps: 240,
            azimuth_steps: 180,
            depth_steps: 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReverbComparison {
    /// Window centers, s after transmission.
    pub times: Vec<f64>,
    pub simulated_db: Vec<f64>,
    pub predicted_db: Vec<f64>,
    /// Compared span, s.
    pub interval: (f64, f64),
}

impl ReverbComparison {
    fn errors(&self) -> impl Iterator<Item = f64> + '_ {
        self.simulated_db
            .iter()
            .zip(&self.predicted_db)
            .map(|(a, b)| a - b)
    }

    pub fn max_abs_error_db(&self) -> f64 {
        self.errors().fold(0.0, |m, e| m.max(e.abs()))
    }

    pub fn mean_error_db(&self) -> f64 {
        self.errors().sum::<f64>() / self.simulated_db.len().max(1) as f64
    }
}

/// Deterministic prediction of the mean-square pressure of the diffuse
/// return, per record sample:
/// `0.5 * sum_q |A_q|^2 env^2(t - tau_q)` over a polar quadrature of the
/// ensonified interface disk and volume layer, where `A_q` is the composite
/// level of a unit-variance patch of area (volume) equal to the cell.
/// Also returns the earliest and latest diffuse delay.
pub fn predicted_mean_square(
    s: &Scenario,
    cfg: &SonarEquationConfig,
    start_time: f64,
    samples: usize,
) -> (Vec<f64>, f64, f64) {
    let event = ping_poses(s)[0];
    let tx = s.array.projector_element(&event.pose, event.tx_id);
    let rx = s.array.receiver_elements(&event.pose)[0];
    let f = s.waveform.center_frequency();
    let model = scene_interface_model(s);
    let fs = s.waveform.sample_rate;

    let mut layers: Vec<(f64, f64, ScattererKind)> = Vec::new();
    if s.scatterers.interface {
        layers.push((0.0, 1.0, ScattererKind::Interface));
    }
    if s.scatterers.volume {
        let dz = s.scatterers.volume_depth / cfg.depth_steps as f64;
        for k in 0..cfg.depth_steps {
            layers.push(((k as f64 + 0.5) * dz, dz, ScattererKind::Volume));
        }
    }
    let contributions: Vec<(f64, f64)> = layers
        .par_iter()
        .flat_map_iter(|&(z, thickness, kind)| {
            let radius = cone_radius(s, z);
            let dr = radius / cfg.radial_steps as f64;
            let dphi = 2.0 * PI / cfg.azimuth_steps as f64;
            let tx = &tx;
            let rx = &rx;
            let model = &model;
            (0..cfg.radial_steps).flat_map(move |i| {
                let r = (i as f64 + 0.5) * dr;
                (0..cfg.azimuth_steps).filter_map(move |j| {
                    let phi = (j as f64 + 0.5) * dphi;
                    let p = PointScatterer {
                        position: Vec3::new(
                            tx.position.x + r * phi.cos(),
                            tx.position.y + r * phi.sin(),
                            z,
                        ),
                        kind,
                        patch_measure: r * dr * dphi * thickness,
                        stochastic_factor: Complex64::new(1.0, 0.0),
                    };
                    let c = composite_level_with(model, &p, tx, rx, s, f);
                    c.reachable.then(|| (c.delay, c.amplitude.norm_sqr()))
                })
            })
        })
        .collect();

    let tmin = contributions
        .iter()
        .map(|c| c.0)
        .fold(f64::INFINITY, f64::min);
    let tmax = contributions
        .iter()
        .map(|c| c.0)
        .fold(f64::NEG_INFINITY, f64::max);
    // Bin delays finely, then spread each bin with the pulse envelope.
    let sub = 16.0;
    let nb = ((tmax - tmin) * fs * sub).ceil() as usize + 1;
    let mut bins = vec![0.0; nb];
    for &(d, w) in &contributions {
        bins[((d - tmin) * fs * sub).round() as usize] += w;
    }
    let wf = &s.waveform;
    let out = (0..samples)
        .into_par_iter()
        .map(|n| {
            let t = start_time + n as f64 / fs;
            let mut acc = 0.0;
            for (b, &w) in bins.iter().enumerate() {
                if w == 0.0 {
                    continue;
                }
                let u = t - (tmin + b as f64 / (fs * sub));
                if u < 0.0 || u > wf.duration {
                    continue;
                }
                let e = wf.envelope(u);
                acc += w * e * e;
            }
            0.5 * acc
        })
        .collect();
    (out, tmin, tmax)
}

/// Runs the ensemble on the single-pair sand scene and compares windowed
/// mean-square levels over the central part of the reverberation interval.
pub fn sonar_equation_experiment(cfg: &SonarEquationConfig) -> Result<ReverbComparison> {
    let s = single_pair_scene(SedimentProperties::medium_sand());
    sonar_equation_on(&s, cfg)
}

pub(crate) fn sonar_equation_on(
    s: &Scenario,
    cfg: &SonarEquationConfig,
) -> Result<ReverbComparison> {
    if cfg.seeds == 0 {
        return Err(Error::validation("seeds", "must be >= 1"));
    }
    let synth = Synthesizer::new(s)?;
    let event = ping_poses(s)[0];
    let extent = footprint_extent(s);
    let comps = Components {
        scatterers: true,
        ..Components::NONE
    };
    let n = synth.sample_count();
    let runs: Vec<Vec<f64>> = (0..cfg.seeds as u64)
        .into_par_iter()
        .map(|i| {
            let field = generate_field(s, extent, mix_seed(cfg.base_seed, i))?;
            let rec = synth.ping_components(&field, &event, 0, comps)?;
            let x = &rec.real().expect("raw record")[0];
            Ok(x.iter().map(|v| v * v).collect())
        })
        .collect::<Result<_>>()?;
    let mut simulated = vec![0.0; n];
    for r in &runs {
        for (a, b) in simulated.iter_mut().zip(r) {
            *a += b;
        }
    }
    for a in simulated.iter_mut() {
        *a /= cfg.seeds as f64;
    }
    let start = synth.window().start;
    let (predicted, tmin, tmax) = predicted_mean_square(s, cfg, start, n);
    let t_end = tmax + s.waveform.duration;
    let trim = 0.5 * (1.0 - cfg.central_fraction) * (t_end - tmin);
    let interval = (tmin + trim, t_end - trim);
    let fs = s.waveform.sample_rate;
    let w = ((cfg.window * fs).round() as usize).max(1);
    let first = ((interval.0 - start) * fs).ceil().max(0.0) as usize;
    let last = (((interval.1 - start) * fs).floor() as usize).min(n);
    let db = |v: f64| 10.0 * v.log10();
    let mut out = ReverbComparison {
        times: Vec::new(),
        simulated_db: Vec::new(),
        predicted_db: Vec::new(),
        interval,
    };
    let mut k = first;
    while k + w <= last {
        let sim: f64 = simulated[k..k + w].iter().sum::<f64>() / w as f64;
        let pre: f64 = predicted[k..k + w].iter().sum::<f64>() / w as f64;
        out.times.push(start + (k as f64 + 0.5 * w as f64) / fs);
        out.simulated_db.push(db(sim));
        out.predicted_db.push(db(pre));
        k += w;
    }
    if out.times.is_empty() {
        return Err(Error::Numerical(
            "no comparison window fits the interval".into(),
        ));
    }
    Ok(out)
}
