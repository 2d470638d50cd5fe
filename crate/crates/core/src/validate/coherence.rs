//! Spatial coherence of the diffuse interface return across a cross-track
//! receiver line, compared with the Fourier transform of the ensonified
//! intensity footprint.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::scenes::vcz_scene;
use crate::error::{Error, Result};
use crate::geom::Vec3;
use crate::propagation::Element;
use crate::scatterfield::{
    composite_level_with, cone_radius, footprint_extent, generate_field, mix_seed,
    scene_interface_model, PointScatterer, ScattererKind,
};
use crate::scene::{ping_poses, Scenario};
use crate::synth::{Components, Synthesizer};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VczConfig {
    pub seeds: usize,
    pub base_seed: u64,
    /// Largest receiver separation compared, in elements.
    pub max_separation: usize,
    pub center_frequency: f64,
    pub bandwidth: f64,
    pub duration: f64,
    pub max_incidence_deg: f64,
    pub radial_steps: usize,
    pub azimuth_steps: usize,
}

impl Default for VczConfig {
    fn default() -> Self {
        VczConfig {
            seeds: 500,
            base_seed: 0,
            max_separation: 8,
            center_frequency: 25e3,
            bandwidth: 1e3,
            duration: 4e-3,
            max_incidence_deg: 30.0,
            radial_steps: 300,
            azimuth_steps: 360,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceComparison {
    /// Mean coherence magnitude at separations 1..=max, simulated.
    pub measured: Vec<f64>,
    /// Footprint-transform prediction at the same separations (pair form).
    pub predicted: Vec<f64>,
    /// Prediction with a single footprint seen from the pair midpoint.
    pub predicted_shared: Vec<f64>,
}

fn rms(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len().max(1) as f64;
    (a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>() / n).sqrt()
}

impl CoherenceComparison {
    /// RMS deviation of the measured curve from the pair-form prediction.
    pub fn rms_error(&self) -> f64 {
        rms(&self.measured, &self.predicted)
    }

    /// RMS deviation from the shared-footprint prediction.
    pub fn shared_rms_error(&self) -> f64 {
        rms(&self.measured, &self.predicted_shared)
    }
}

/// Coherence predicted for a receiver pair from the ensonified footprint:
/// `|sum w(p) exp(-i k d u(p))| / norm`, with `u` the cross-track
/// direction sine of `p` seen from the pair midpoint and `d` the
/// separation.
///
/// Returns two forms. The pair form weights each footprint cell by
/// `|A_a(p)| |A_b(p)|` and normalizes by `sqrt(sum |A_a|^2 sum |A_b|^2)`,
/// which allows each receiver to see a different bistatic cross-section.
/// The shared form uses one footprint `|A_m(p)|^2` observed at the
/// midpoint, the textbook statement of the theorem.
fn footprint_coherence(
    s: &Scenario,
    cfg: &VczConfig,
    tx: &Element,
    a: &Element,
    b: &Element,
) -> (f64, f64) {
    let f = s.waveform.center_frequency();
    let k = 2.0 * PI * f / s.water.sound_speed;
    let model = scene_interface_model(s);
    let radius = cone_radius(s, 0.0);
    let dr = radius / cfg.radial_steps as f64;
    let dphi = 2.0 * PI / cfg.azimuth_steps as f64;
    let mid = Element {
        position: (a.position + b.position) * 0.5,
        aperture: a.aperture,
    };
    let separation = a.position.distance(b.position);
    let zero = Complex64::new(0.0, 0.0);
    let sums = (0..cfg.radial_steps)
        .into_par_iter()
        .map(|i| {
            let r = (i as f64 + 0.5) * dr;
            let mut acc = (zero, 0.0, 0.0, zero, 0.0);
            for j in 0..cfg.azimuth_steps {
                let phi = (j as f64 + 0.5) * dphi;
                let p = PointScatterer {
                    position: Vec3::new(
                        tx.position.x + r * phi.cos(),
                        tx.position.y + r * phi.sin(),
                        0.0,
                    ),
                    kind: ScattererKind::Interface,
                    patch_measure: r * dr * dphi,
                    stochastic_factor: Complex64::new(1.0, 0.0),
                };
                let la = composite_level_with(&model, &p, tx, a, s, f);
                let lb = composite_level_with(&model, &p, tx, b, s, f);
                let lm = composite_level_with(&model, &p, tx, &mid, s, f);
                if !(la.reachable && lb.reachable && lm.reachable) {
                    continue;
                }
                let v = p.position - mid.position;
                let kernel = Complex64::from_polar(1.0, -k * separation * v.y / v.norm());
                let (ia, ib, im) = (
                    la.amplitude.norm_sqr(),
                    lb.amplitude.norm_sqr(),
                    lm.amplitude.norm_sqr(),
                );
                acc.0 += kernel * (ia * ib).sqrt();
                acc.1 += ia;
                acc.2 += ib;
                acc.3 += kernel * im;
                acc.4 += im;
            }
            acc
        })
        .reduce(
            || (zero, 0.0, 0.0, zero, 0.0),
            |x, y| (x.0 + y.0, x.1 + y.1, x.2 + y.2, x.3 + y.3, x.4 + y.4),
        );
    (
        sums.0.norm() / (sums.1 * sums.2).sqrt(),
        sums.3.norm() / sums.4,
    )
}

/// Ensemble coherence of the narrowband interface return on a 12-element
/// cross-track line against the footprint-transform prediction.
pub fn vcz_experiment(cfg: &VczConfig) -> Result<CoherenceComparison> {
    if cfg.seeds == 0 {
        return Err(Error::validation("seeds", "must be >= 1"));
    }
    let s = vcz_scene(
        cfg.center_frequency,
        cfg.bandwidth,
        cfg.duration,
        cfg.max_incidence_deg,
    );
    let synth = Synthesizer::new(&s)?;
    let event = ping_poses(&s)[0];
    let extent = footprint_extent(&s);
    let comps = Components {
        scatterers: true,
        ..Components::NONE
    };
    let nrx = s.array.receiver_count();
    if cfg.max_separation + 1 > nrx {
        return Err(Error::validation(
            "max_separation",
            "exceeds the receiver line",
        ));
    }
    let zero = || vec![Complex64::new(0.0, 0.0); nrx * nrx];
    let runs: Vec<Vec<Complex64>> = (0..cfg.seeds as u64)
        .into_par_iter()
        .map(|i| {
            let field = generate_field(&s, extent, mix_seed(cfg.base_seed, i))?;
            let y = synth.ping_analytic(&field, &event, comps)?;
            let mut r = zero();
            for a in 0..nrx {
                for b in a..nrx {
                    r[a * nrx + b] = y[a].iter().zip(&y[b]).map(|(p, q)| p * q.conj()).sum();
                }
            }
            Ok(r)
        })
        .collect::<Result<_>>()?;
    let mut r = zero();
    for run in &runs {
        for (a, b) in r.iter_mut().zip(run) {
            *a += b;
        }
    }

    let rxs = s.array.receiver_elements(&event.pose);
    let tx = s.array.projector_element(&event.pose, event.tx_id);
    let mut measured = Vec::with_capacity(cfg.max_separation);
    let mut predicted = Vec::with_capacity(cfg.max_separation);
    let mut predicted_shared = Vec::with_capacity(cfg.max_separation);
    for d in 1..=cfg.max_separation {
        let mut m = 0.0;
        let mut p = 0.0;
        let mut q = 0.0;
        let pairs = nrx - d;
        for a in 0..pairs {
            let b = a + d;
            let norm = (r[a * nrx + a].re * r[b * nrx + b].re).sqrt();
            m += r[a * nrx + b].norm() / norm;
            let (pair, shared) = footprint_coherence(&s, cfg, &tx, &rxs[a], &rxs[b]);
            p += pair;
            q += shared;
        }
        measured.push(m / pairs as f64);
        predicted.push(p / pairs as f64);
        predicted_shared.push(q / pairs as f64);
    }
    Ok(CoherenceComparison {
        measured,
        predicted,
        predicted_shared,
    })
}
