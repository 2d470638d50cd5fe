//! Pulse compression.

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::record::{PingRecord, Series};
use super::waveform::Waveform;
use crate::error::{Error, Result};

/// Correlates every receiver series with the unit replica and returns the
/// analytic (positive-frequency) result on the same time axis: a lone echo
/// starting at delay `tau` peaks at `tau`.
pub fn matched_filter(rec: &PingRecord, w: &Waveform) -> Result<PingRecord> {
    if rec.sample_rate != w.config.sample_rate {
        return Err(Error::validation(
            "sample_rate",
            format!(
                "record at {} Hz, replica at {} Hz",
                rec.sample_rate, w.config.sample_rate
            ),
        ));
    }
    let Series::Real(raw) = &rec.series else {
        return Err(Error::validation(
            "series",
            "record is already pulse-compressed",
        ));
    };
    let n = rec.sample_count;
    let replica = w.replica();
    let len = (n + replica.len()).next_power_of_two();
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(len);
    let inv = planner.plan_fft_inverse(len);
    let mut wspec = vec![Complex64::new(0.0, 0.0); len];
    for (d, v) in wspec.iter_mut().zip(&replica) {
        d.re = *v;
    }
    fwd.process(&mut wspec);
    // Conjugate replica spectrum times the analytic-signal mask.
    let half = len / 2;
    let filter: Vec<Complex64> = wspec
        .iter()
        .enumerate()
        .map(|(k, v)| {
            let g = match k {
                0 => 1.0,
                k if k < half => 2.0,
                k if k == half => 1.0,
                _ => 0.0,
            };
            v.conj() * (g / len as f64)
        })
        .collect();
    let out = raw
        .iter()
        .map(|x| {
            let mut buf = vec![Complex64::new(0.0, 0.0); len];
            for (d, v) in buf.iter_mut().zip(x) {
                d.re = *v;
            }
            fwd.process(&mut buf);
            for (b, h) in buf.iter_mut().zip(&filter) {
                *b *= h;
            }
            inv.process(&mut buf);
            buf.truncate(n);
            buf
        })
        .collect();
    Ok(PingRecord {
        series: Series::Analytic(out),
        ..rec.clone()
    })
}
