//! Band-limited fractional-delay impulse placement.

use std::f64::consts::PI;

use num_complex::Complex64;

/// Lanczos lobes; the kernel spans `2 * LOBES` samples.
const LOBES: usize = 8;
pub(crate) const TAPS: usize = 2 * LOBES;
const PHASES: usize = 1024;

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-12 {
        1.0
    } else {
        (PI * x).sin() / (PI * x)
    }
}

fn lanczos(x: f64) -> f64 {
    if x.abs() >= LOBES as f64 {
        0.0
    } else {
        sinc(x) * sinc(x / LOBES as f64)
    }
}

/// Tabulated Lanczos kernel: for a fractional offset `frac` in [0, 1) the
/// taps apply to samples `floor(p) - (LOBES - 1) ..= floor(p) + LOBES`.
#[derive(Debug, Clone)]
pub(crate) struct FractionalDelay {
    table: Vec<[f64; TAPS]>,
}

impl FractionalDelay {
    pub(crate) fn new() -> Self {
        let table = (0..=PHASES)
            .map(|p| {
                let frac = p as f64 / PHASES as f64;
                let mut taps = [0.0; TAPS];
                for (k, t) in taps.iter_mut().enumerate() {
                    let offset = k as f64 - (LOBES as f64 - 1.0);
                    *t = lanczos(frac - offset);
                }
                taps
            })
            .collect();
        FractionalDelay { table }
    }

    /// Adds an impulse of complex weight `w` at fractional sample position
    /// `p`; taps outside the buffer are dropped.
    pub(crate) fn place(&self, buffer: &mut [Complex64], p: f64, w: Complex64) {
        let base = p.floor();
        let frac = p - base;
        let phase = (frac * PHASES as f64).round() as usize;
        let taps = &self.table[phase];
        let first = base as i64 - (LOBES as i64 - 1);
        let n = buffer.len() as i64;
        for (k, t) in taps.iter().enumerate() {
            let i = first + k as i64;
            if i >= 0 && i < n {
                buffer[i as usize] += w * *t;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_position_is_a_unit_impulse() {
        let d = FractionalDelay::new();
        let mut b = vec![Complex64::new(0.0, 0.0); 40];
        d.place(&mut b, 20.0, Complex64::new(2.0, 0.0));
        for (i, v) in b.iter().enumerate() {
            let want = if i == 20 { 2.0 } else { 0.0 };
            assert!((v.re - want).abs() < 1e-12);
        }
    }

    #[test]
    fn taps_sum_near_one() {
        let d = FractionalDelay::new();
        for p in [10.25, 10.5, 10.9] {
            let mut b = vec![Complex64::new(0.0, 0.0); 40];
            d.place(&mut b, p, Complex64::new(1.0, 0.0));
            let s: f64 = b.iter().map(|v| v.re).sum();
            assert!((s - 1.0).abs() < 0.01, "{s}");
        }
    }
}
