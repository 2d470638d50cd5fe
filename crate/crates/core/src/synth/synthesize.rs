//! Element-level time-series assembly.

use std::sync::Arc;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use super::delay::{FractionalDelay, TAPS};
use super::record::{PingRecord, Series};
use super::waveform::{make_waveform, Waveform};
use crate::error::{Error, Result};
use crate::geom::Vec3;
use crate::propagation::{
    ambient_noise_psd, db_to_amplitude, enumerate_image_sources, piston_directivity, straight_path,
    Boundary, Element, ImageSource,
};
use crate::scatterfield::{
    cone_radius, footprint_extent, generate_field, image_path, leg, legs, mix_seed, pair_amplitude,
    scattering_amplitude, scene_interface_model, seabed_coefficient, Leg, PointScatterer,
    ScattererField, SmallPerturbation,
};
use crate::scene::{ping_poses, Scenario, TargetSpec, TransmitEvent};
use crate::targetmodel::target_echoes;

const FIELD_STREAM: u64 = 0xF1E1_D000;
const PING_STREAM: u64 = 0x9146_0000;

/// Seed of the scatterer field of a scenario.
pub fn field_seed(s: &Scenario) -> u64 {
    mix_seed(s.rng_seed, FIELD_STREAM)
}

/// Seed of the noise draws of one transmit event.
pub fn ping_seed(s: &Scenario, event_index: usize) -> u64 {
    mix_seed(s.rng_seed, PING_STREAM + event_index as u64)
}

/// Time span covered by every receiver series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecordWindow {
    /// s after transmission
    pub start: f64,
    pub end: f64,
    /// True when the length comes from an explicit configuration value.
    pub fixed: bool,
}

impl RecordWindow {
    pub fn sample_count(&self, sample_rate: f64) -> usize {
        ((self.end - self.start) * sample_rate).ceil() as usize + 1
    }
}

/// Starts one pulse length before the nadir interface echo and ends one
/// pulse length after the latest arrival any scatterer, target or image in
/// the transmit cone can produce.
pub fn record_window(s: &Scenario) -> RecordWindow {
    let cw = s.water.sound_speed;
    let wf = &s.waveform;
    let start = (2.0 * s.geometry.sensor_altitude / cw - wf.duration).max(0.0);
    if let Some(d) = wf.record_duration {
        return RecordWindow {
            start,
            end: start + d,
            fixed: true,
        };
    }
    let m = s.propagation.max_order;
    let spread = 2.0 * s.array.horizontal_radius();
    let element = Vec3::new(0.0, 0.0, s.sensor_z());
    let images = enumerate_image_sources(element, &s.geometry, m);
    let mut depths = vec![0.0];
    if s.scatterers.volume {
        depths.push(s.scatterers.volume_depth);
    }
    depths.extend(s.targets.iter().map(|t| t.position.z + t.radius));
    let mut leg_max: f64 = 0.0;
    for z in depths {
        let p = Vec3::new(cone_radius(s, z) + spread, 0.0, z);
        for im in &images {
            if let Some(path) = image_path(im, p, s) {
                leg_max = leg_max.max(path.travel_time);
            }
        }
    }
    let mut two_way = 2.0 * leg_max;
    if s.propagation.coherent_reflection {
        let rx = Vec3::new(spread, 0.0, element.z);
        for im in specular_images(element, s) {
            two_way = two_way.max(im.position.distance(rx) / cw);
        }
    }
    RecordWindow {
        start,
        end: two_way + wf.duration + 2.0 * TAPS as f64 / wf.sample_rate,
        fixed: false,
    }
}

/// Images of the projector whose unfolded path to a receiver touches the
/// seabed: the specular reflection and its multiples.
fn specular_images(tx: Vec3, s: &Scenario) -> Vec<ImageSource> {
    let order = 2 * s.propagation.max_order + 1;
    enumerate_image_sources(tx, &s.geometry, order)
        .into_iter()
        .filter(|im| im.bounces.contains(&Boundary::Bottom))
        .collect()
}

/// Which echo families to include in a synthesized record.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Components {
    pub scatterers: bool,
    pub targets: bool,
    pub specular: bool,
    pub noise: bool,
}

impl Components {
    pub const ALL: Components = Components {
        scatterers: true,
        targets: true,
        specular: true,
        noise: true,
    };
    pub const NONE: Components = Components {
        scatterers: false,
        targets: false,
        specular: false,
        noise: false,
    };

    /// The families the scenario enables.
    pub fn from_scenario(s: &Scenario) -> Self {
        Components {
            scatterers: s.scatterers.interface || s.scatterers.volume,
            targets: true,
            specular: s.propagation.coherent_reflection,
            noise: s.noise.enabled,
        }
    }
}

struct Subband {
    frequency: f64,
    /// FFT of the unit analytic pulse restricted to this band.
    spectrum: Vec<Complex64>,
}

/// Reusable per-scenario synthesis state: pulse spectra, FFT plans, record
/// window and the interface scattering model.
pub struct Synthesizer<'a> {
    s: &'a Scenario,
    waveform: Waveform,
    window: RecordWindow,
    n: usize,
    fft_len: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    subbands: Vec<Subband>,
    delay: FractionalDelay,
    model: SmallPerturbation,
    noise_sigma: f64,
}

impl<'a> Synthesizer<'a> {
    pub fn new(s: &'a Scenario) -> Result<Self> {
        let waveform = make_waveform(&s.waveform)?;
        let window = record_window(s);
        let fs = s.waveform.sample_rate;
        let n = window.sample_count(fs);
        let fft_len = (n + waveform.analytic.len() + TAPS).next_power_of_two();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(fft_len);
        let inverse = planner.plan_fft_inverse(fft_len);
        let mut full = vec![Complex64::new(0.0, 0.0); fft_len];
        full[..waveform.analytic.len()].copy_from_slice(&waveform.analytic);
        forward.process(&mut full);
        let centers = s.waveform.subband_centers();
        let nb = centers.len();
        let width = s.waveform.bandwidth() / nb as f64;
        let subbands = centers
            .iter()
            .enumerate()
            .map(|(j, &fc)| {
                let spectrum = if nb == 1 {
                    full.clone()
                } else {
                    full.iter()
                        .enumerate()
                        .map(|(k, v)| {
                            let f = if k <= fft_len / 2 {
                                k as f64
                            } else {
                                k as f64 - fft_len as f64
                            } * fs
                                / fft_len as f64;
                            let band = ((f - s.waveform.f_start) / width).floor();
                            let band = band.clamp(0.0, (nb - 1) as f64) as usize;
                            if band == j {
                                *v
                            } else {
                                Complex64::new(0.0, 0.0)
                            }
                        })
                        .collect()
                };
                Subband {
                    frequency: fc,
                    spectrum,
                }
            })
            .collect();
        let noise_sigma = if s.noise.enabled {
            let nl = ambient_noise_psd(s.waveform.center_frequency(), s.noise.sea_state)?;
            (10f64.powf(nl / 10.0) * 1e-12 * fs / 2.0).sqrt()
        } else {
            0.0
        };
        Ok(Synthesizer {
            s,
            waveform,
            window,
            n,
            fft_len,
            forward,
            inverse,
            subbands,
            delay: FractionalDelay::new(),
            model: scene_interface_model(s),
            noise_sigma,
        })
    }

    pub fn waveform(&self) -> &Waveform {
        &self.waveform
    }

    pub fn window(&self) -> RecordWindow {
        self.window
    }

    pub fn sample_count(&self) -> usize {
        self.n
    }

    /// Standard deviation of the ambient noise samples, Pa.
    pub fn noise_sigma(&self) -> f64 {
        self.noise_sigma
    }

    fn in_cone(&self, tx: Vec3, p: Vec3) -> bool {
        p.horizontal_distance(tx) <= cone_radius(self.s, p.z)
    }

    fn place(&self, buf: &mut [Complex64], delay: f64, amp: Complex64) -> Result<()> {
        let w = &self.window;
        if delay < w.start || delay + self.s.waveform.duration > w.end {
            return Err(Error::RecordLength {
                delay,
                start: w.start,
                end: w.end,
            });
        }
        let p = (delay - w.start) * self.s.waveform.sample_rate;
        self.delay.place(buf, p, amp);
        Ok(())
    }

    /// Synthesizes every enabled echo family of the scenario.
    pub fn ping(
        &self,
        field: &ScattererField,
        event: &TransmitEvent,
        seed: u64,
    ) -> Result<PingRecord> {
        self.ping_components(field, event, seed, Components::from_scenario(self.s))
    }

    pub fn ping_components(
        &self,
        field: &ScattererField,
        event: &TransmitEvent,
        seed: u64,
        comps: Components,
    ) -> Result<PingRecord> {
        let s = self.s;
        let series: Vec<Vec<f64>> = self.with_context(field, event, comps, |ctx, rxs| {
            rxs.par_iter()
                .enumerate()
                .map(|(ri, rx)| self.receiver_series(ctx, rx, ri, seed, comps.noise))
                .collect::<Result<_>>()
        })?;
        Ok(PingRecord {
            ping_index: event.event_index,
            location_index: event.location_index,
            tx_id: event.tx_id,
            pose: event.pose,
            sample_rate: s.waveform.sample_rate,
            start_time: self.window.start,
            sample_count: self.n,
            seed,
            series: Series::Real(series),
        })
    }

    /// Noise-free complex series of every receiver; the real part of each
    /// equals the echo part of the pressure record.
    pub fn ping_analytic(
        &self,
        field: &ScattererField,
        event: &TransmitEvent,
        comps: Components,
    ) -> Result<Vec<Vec<Complex64>>> {
        self.with_context(field, event, comps, |ctx, rxs| {
            rxs.par_iter()
                .map(|rx| self.receiver_analytic(ctx, rx))
                .collect::<Result<_>>()
        })
    }

    /// Arrivals at every receiver, evaluated at the first sub-band
    /// frequency, in synthesis order. Noise is not an arrival and is ignored.
    pub fn arrivals(
        &self,
        field: &ScattererField,
        event: &TransmitEvent,
        comps: Components,
    ) -> Result<Vec<Vec<Arrival>>> {
        let s = self.s;
        self.with_context(field, event, comps, |ctx, rxs| {
            rxs.iter()
                .map(|rx| {
                    let images =
                        enumerate_image_sources(rx.position, &s.geometry, s.propagation.max_order);
                    let mut out = Vec::new();
                    self.visit_arrivals(ctx, rx, &images, 0, |delay, amplitude| {
                        out.push(Arrival { delay, amplitude });
                        Ok(())
                    })?;
                    Ok(out)
                })
                .collect()
        })
    }

    fn with_context<R>(
        &self,
        field: &ScattererField,
        event: &TransmitEvent,
        comps: Components,
        body: impl FnOnce(&PingContext<'_>, &[Element]) -> R,
    ) -> R {
        let s = self.s;
        let tx = s.array.projector_element(&event.pose, event.tx_id);
        let rxs = s.array.receiver_elements(&event.pose);
        let tx_images = enumerate_image_sources(tx.position, &s.geometry, s.propagation.max_order);
        let candidates: Vec<&PointScatterer> = if comps.scatterers {
            field
                .scatterers
                .iter()
                .filter(|p| self.in_cone(tx.position, p.position))
                .collect()
        } else {
            Vec::new()
        };
        let tx_legs: Vec<Vec<Vec<Leg>>> = self
            .subbands
            .iter()
            .map(|b| {
                candidates
                    .par_iter()
                    .map(|p| legs(&tx, &tx_images, p.position, s, b.frequency))
                    .collect()
            })
            .collect();
        let targets: Vec<&TargetSpec> = if comps.targets {
            s.targets
                .iter()
                .filter(|t| self.in_cone(tx.position, t.position))
                .collect()
        } else {
            Vec::new()
        };
        let specular = if comps.specular {
            specular_images(tx.position, s)
        } else {
            Vec::new()
        };
        let ctx = PingContext {
            tx: &tx,
            tx_images: &tx_images,
            candidates: &candidates,
            tx_legs: &tx_legs,
            targets: &targets,
            specular: &specular,
        };
        body(&ctx, &rxs)
    }

    /// Calls `emit(delay, amplitude)` for every arrival at one receiver in
    /// a fixed order: scatterers, targets, then specular reflections.
    fn visit_arrivals<F>(
        &self,
        ctx: &PingContext<'_>,
        rx: &Element,
        rx_images: &[ImageSource],
        band: usize,
        mut emit: F,
    ) -> Result<()>
    where
        F: FnMut(f64, Complex64) -> Result<()>,
    {
        let s = self.s;
        let src = self.waveform.source_amplitude;
        let f = self.subbands[band].frequency;
        for (ci, p) in ctx.candidates.iter().enumerate() {
            let tls = &ctx.tx_legs[band][ci];
            if tls.is_empty() {
                continue;
            }
            let rls = legs(rx, rx_images, p.position, s, f);
            for a in tls {
                for b in &rls {
                    let sa = scattering_amplitude(p, a, b, s, &self.model, f);
                    let amp = pair_amplitude(src, a, b, sa.into()) * p.stochastic_factor;
                    emit(a.travel_time() + b.travel_time(), amp)?;
                }
            }
        }
        for t in ctx.targets {
            for ti in ctx.tx_images {
                for ri in rx_images {
                    let echoes =
                        target_echoes(t, ti.position, ri.position, f, &s.water, &s.sediment)?;
                    for e in echoes {
                        let (Some(a), Some(b)) =
                            (leg(ctx.tx, ti, e.center, s, f), leg(rx, ri, e.center, s, f))
                        else {
                            continue;
                        };
                        let amp = pair_amplitude(src, &a, &b, e.amplitude().into());
                        emit(a.travel_time() + b.travel_time(), amp)?;
                    }
                }
            }
        }
        for im in ctx.specular {
            let path = straight_path(im.position, rx.position, s.water.sound_speed, false);
            let dir = path.departure();
            let d_tx = piston_directivity(ctx.tx.aperture, f, s.water.sound_speed, dir);
            let d_rx = piston_directivity(rx.aperture, f, s.water.sound_speed, dir);
            let boundary = im.boundary_factor(seabed_coefficient(s, f, path.incidence));
            let absorption = db_to_amplitude(s.water.absorption * path.length());
            let amp = boundary * (src * d_tx * d_rx * absorption / path.length());
            emit(path.travel_time, amp)?;
        }
        Ok(())
    }

    /// Noise-free complex series of one receiver: the echoes convolved with
    /// the analytic pulse. Its real part is the pressure record.
    fn receiver_analytic(&self, ctx: &PingContext<'_>, rx: &Element) -> Result<Vec<Complex64>> {
        let s = self.s;
        let rx_images = enumerate_image_sources(rx.position, &s.geometry, s.propagation.max_order);
        let mut out = vec![Complex64::new(0.0, 0.0); self.n];
        for (j, band) in self.subbands.iter().enumerate() {
            let mut buf = vec![Complex64::new(0.0, 0.0); self.fft_len];
            let mut touched = false;
            self.visit_arrivals(ctx, rx, &rx_images, j, |delay, amp| {
                touched = true;
                self.place(&mut buf, delay, amp)
            })?;
            if !touched {
                continue;
            }
            self.forward.process(&mut buf);
            for (v, w) in buf.iter_mut().zip(&band.spectrum) {
                *v *= w;
            }
            self.inverse.process(&mut buf);
            let scale = 1.0 / self.fft_len as f64;
            for (o, v) in out.iter_mut().zip(&buf) {
                *o += v * scale;
            }
        }
        Ok(out)
    }

    fn receiver_series(
        &self,
        ctx: &PingContext<'_>,
        rx: &Element,
        rx_index: usize,
        seed: u64,
        noise: bool,
    ) -> Result<Vec<f64>> {
        let mut out: Vec<f64> = self
            .receiver_analytic(ctx, rx)?
            .iter()
            .map(|c| c.re)
            .collect();
        if noise && self.noise_sigma > 0.0 {
            let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, rx_index as u64));
            for o in out.iter_mut() {
                let g: f64 = StandardNormal.sample(&mut rng);
                *o += self.noise_sigma * g;
            }
        }
        Ok(out)
    }
}

/// One echo arriving at a receiver before convolution with the pulse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arrival {
    /// Two-way travel time, s.
    pub delay: f64,
    /// Complex pressure amplitude, Pa.
    pub amplitude: Complex64,
}

struct PingContext<'c> {
    tx: &'c Element,
    tx_images: &'c [ImageSource],
    candidates: &'c [&'c PointScatterer],
    tx_legs: &'c [Vec<Vec<Leg>>],
    targets: &'c [&'c TargetSpec],
    specular: &'c [ImageSource],
}

/// One transmit event of `s` over a realized field.
pub fn synthesize_ping(
    s: &Scenario,
    field: &ScattererField,
    event: &TransmitEvent,
    seed: u64,
) -> Result<PingRecord> {
    Synthesizer::new(s)?.ping(field, event, seed)
}

/// The scatterer field the survey of `s` uses.
pub fn survey_field(s: &Scenario) -> Result<ScattererField> {
    if s.scatterers.interface || s.scatterers.volume {
        generate_field(s, footprint_extent(s), field_seed(s))
    } else {
        Ok(ScattererField::empty(footprint_extent(s), field_seed(s)))
    }
}

/// Runs the whole survey, handing records to `sink` in transmit order.
/// Events are synthesized in parallel batches; the output does not depend
/// on the number of workers.
pub fn simulate_survey_with<F>(s: &Scenario, mut sink: F) -> Result<ScattererField>
where
    F: FnMut(PingRecord) -> Result<()>,
{
    s.validate()?;
    let field = survey_field(s)?;
    let synth = Synthesizer::new(s)?;
    let events = ping_poses(s);
    let batch = rayon::current_num_threads().max(1);
    for chunk in events.chunks(batch) {
        let records: Vec<PingRecord> = chunk
            .par_iter()
            .map(|e| synth.ping(&field, e, ping_seed(s, e.event_index)))
            .collect::<Result<_>>()?;
        for r in records {
            sink(r)?;
        }
    }
    Ok(field)
}

/// Collects every record of the survey in memory.
pub fn simulate_survey(s: &Scenario) -> Result<Vec<PingRecord>> {
    let mut out = Vec::new();
    simulate_survey_with(s, |r| {
        out.push(r);
        Ok(())
    })?;
    Ok(out)
}
