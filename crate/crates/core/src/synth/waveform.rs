//! Linear-FM transmit waveform.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::propagation::source_amplitude;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WaveformConfig {
    pub f_start: f64,
    pub f_stop: f64,
    /// s
    pub duration: f64,
    /// Hz
    pub sample_rate: f64,
    /// dB re 1 uPa @ 1 m
    pub source_level: f64,
    /// Total fraction of the pulse under a raised-cosine taper, split
    /// equally between both ends; 0 gives a rectangular envelope.
    pub taper_fraction: f64,
    /// Number of sub-bands over which frequency-dependent factors are
    /// evaluated; 1 evaluates everything at the band center.
    pub subbands: usize,
    /// Fixed record length, s. When absent the record spans every echo the
    /// scene can produce.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub record_duration: Option<f64>,
}

impl Default for WaveformConfig {
    fn default() -> Self {
        WaveformConfig {
            f_start: 10e3,
            f_stop: 40e3,
            duration: 0.010,
            sample_rate: 200e3,
            source_level: 190.0,
            taper_fraction: 0.1,
            subbands: 1,
            record_duration: None,
        }
    }
}

impl WaveformConfig {
    pub fn bandwidth(&self) -> f64 {
        (self.f_stop - self.f_start).abs()
    }

    pub fn center_frequency(&self) -> f64 {
        0.5 * (self.f_start + self.f_stop)
    }

    pub fn time_bandwidth(&self) -> f64 {
        self.duration * self.bandwidth()
    }

    /// Number of samples in the pulse.
    pub fn sample_count(&self) -> usize {
        (self.duration * self.sample_rate).round().max(1.0) as usize
    }

    /// Pulse envelope at time `t` after the pulse start (unit peak, zero
    /// outside the pulse).
    pub fn envelope(&self, t: f64) -> f64 {
        if !(0.0..=self.duration).contains(&t) {
            return 0.0;
        }
        envelope(t, self.duration, self.taper_fraction)
    }

    /// Centers of the configured sub-bands, Hz.
    pub fn subband_centers(&self) -> Vec<f64> {
        let n = self.subbands.max(1);
        let w = (self.f_stop - self.f_start) / n as f64;
        (0..n)
            .map(|j| self.f_start + (j as f64 + 0.5) * w)
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        let band = 1e3..=100e3;
        if !(band.contains(&self.f_start) && band.contains(&self.f_stop)) {
            return Err(Error::validation(
                "waveform.f_start",
                "band must lie within 1-100 kHz",
            ));
        }
        if !(self.f_stop > self.f_start) {
            return Err(Error::validation("waveform.f_stop", "must exceed f_start"));
        }
        if !(self.duration > 0.0) {
            return Err(Error::validation("waveform.duration", "must be > 0"));
        }
        if !(self.sample_rate > 2.0 * self.f_stop) {
            return Err(Error::validation(
                "waveform.sample_rate",
                format!(
                    "{} Hz violates Nyquist for f_stop = {} Hz",
                    self.sample_rate, self.f_stop
                ),
            ));
        }
        if !self.source_level.is_finite() {
            return Err(Error::validation("waveform.source_level", "must be finite"));
        }
        if !(0.0..=1.0).contains(&self.taper_fraction) {
            return Err(Error::validation(
                "waveform.taper_fraction",
                "must lie in [0, 1]",
            ));
        }
        if self.subbands < 1 {
            return Err(Error::validation("waveform.subbands", "must be >= 1"));
        }
        if let Some(d) = self.record_duration {
            if !(d > 0.0) {
                return Err(Error::validation("waveform.record_duration", "must be > 0"));
            }
        }
        Ok(())
    }
}

/// Sampled pulse.
#[derive(Debug, Clone, PartialEq)]
pub struct Waveform {
    pub config: WaveformConfig,
    /// Transmitted pressure at 1 m, Pa; peak equals the source amplitude.
    pub samples: Vec<f64>,
    /// Complex chirp with unit peak envelope; `samples` is its real part
    /// scaled by `source_amplitude`.
    pub analytic: Vec<Complex64>,
    /// Pa at 1 m.
    pub source_amplitude: f64,
}

impl Waveform {
    /// Real replica with unit peak envelope.
    pub fn replica(&self) -> Vec<f64> {
        self.analytic.iter().map(|c| c.re).collect()
    }

    /// Energy of the unit replica, sum of squares.
    pub fn replica_energy(&self) -> f64 {
        self.analytic.iter().map(|c| c.re * c.re).sum()
    }
}

fn envelope(t: f64, duration: f64, taper_fraction: f64) -> f64 {
    let ramp = 0.5 * taper_fraction * duration;
    if ramp <= 0.0 {
        return 1.0;
    }
    let edge = t.min(duration - t);
    if edge >= ramp {
        1.0
    } else {
        0.5 * (1.0 - (PI * edge.max(0.0) / ramp).cos())
    }
}

pub fn make_waveform(config: &WaveformConfig) -> Result<Waveform> {
    config.validate()?;
    let n = config.sample_count();
    let rate = (config.f_stop - config.f_start) / config.duration;
    let amp = source_amplitude(config.source_level);
    let analytic: Vec<Complex64> = (0..n)
        .map(|i| {
            let t = i as f64 / config.sample_rate;
            let phase = 2.0 * PI * (config.f_start * t + 0.5 * rate * t * t);
            Complex64::from_polar(envelope(t, config.duration, config.taper_fraction), phase)
        })
        .collect();
    let samples = analytic.iter().map(|c| amp * c.re).collect();
    Ok(Waveform {
        config: *config,
        samples,
        analytic,
        source_amplitude: amp,
    })
}
