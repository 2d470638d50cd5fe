//! Deep-water wind-driven ambient noise spectra.
//!
//! Anchor points are a reading of the Knudsen curves as reproduced in
//! Urick's deep-water ambient noise figure: spectrum level at 1 kHz per sea
//! state, falling 17 dB per decade (5 dB per octave) to 100 kHz. Thermal
//! noise is not included.

use crate::error::{Error, Result};

/// dB re 1 uPa^2/Hz at 1 kHz for sea states 0 through 6.
const LEVEL_AT_1KHZ: [f64; 7] = [44.5, 55.0, 61.5, 64.5, 66.5, 68.5, 70.0];
const SLOPE_DB_PER_DECADE: f64 = -17.0;

/// Anchor frequencies of the piecewise-linear (log f) curve, Hz.
const ANCHORS_HZ: [f64; 3] = [1_000.0, 10_000.0, 100_000.0];

fn anchors(sea_state: u8) -> [(f64, f64); 3] {
    let l0 = LEVEL_AT_1KHZ[sea_state as usize];
    ANCHORS_HZ.map(|f| (f.log10(), l0 + SLOPE_DB_PER_DECADE * (f / 1_000.0).log10()))
}

/// Ambient noise spectrum level, dB re 1 uPa^2/Hz.
pub fn ambient_noise_psd(frequency: f64, sea_state: u8) -> Result<f64> {
    if !(1_000.0..=100_000.0).contains(&frequency) {
        return Err(Error::validation(
            "frequency",
            format!("{frequency} Hz outside the 1-100 kHz ambient noise band"),
        ));
    }
    if sea_state as usize >= LEVEL_AT_1KHZ.len() {
        return Err(Error::validation("sea_state", "must be in 0..=6"));
    }
    let pts = anchors(sea_state);
    let x = frequency.log10();
    let seg = pts.windows(2).find(|w| x <= w[1].0).unwrap_or(&pts[1..3]);
    let (x0, y0) = seg[0];
    let (x1, y1) = seg[1];
    Ok(y0 + (y1 - y0) * (x - x0) / (x1 - x0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monotone_decreasing() {
        let mut prev = f64::INFINITY;
        for i in 0..=100 {
            let f = 1_000.0 * 100f64.powf(i as f64 / 100.0);
            let l = ambient_noise_psd(f, 3).unwrap();
            assert!(l < prev);
            prev = l;
        }
    }

    #[test]
    fn octave_slope() {
        let d = ambient_noise_psd(20e3, 3).unwrap() - ambient_noise_psd(40e3, 3).unwrap();
        assert!((d - 17.0 * 2f64.log10()).abs() < 1e-9);
        assert!((d - 5.1).abs() < 0.05);
    }

    #[test]
    fn sea_state_ordering() {
        for f in [1e3, 25e3, 90e3] {
            assert!(ambient_noise_psd(f, 0).unwrap() < ambient_noise_psd(f, 3).unwrap());
        }
    }

    #[test]
    fn out_of_band() {
        assert!(ambient_noise_psd(500.0, 3).is_err());
        assert!(ambient_noise_psd(150e3, 3).is_err());
    }
}
