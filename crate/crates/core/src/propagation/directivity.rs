//! Unbaffled piston beam patterns. Elements face +z (down); the pattern
//! depends only on the in-plane direction cosines, so upward-going multipath
//! legs see the mirror-image response.

use std::f64::consts::PI;

use crate::geom::Vec3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Aperture {
    /// Widths along x and y, m.
    Rectangular {
        width_x: f64,
        width_y: f64,
    },
    Circular {
        diameter: f64,
    },
}

#[inline]
fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Bessel function of the first kind, order one.
pub fn bessel_j1(x: f64) -> f64 {
    let ax = x.abs();
    if ax < 8.0 {
        let y = x * x;
        let num = x
            * (72362614232.0
                + y * (-7895059235.0
                    + y * (242396853.1
                        + y * (-2972611.439 + y * (15704.48260 + y * (-30.16036606))))));
        let den = 144725228442.0
            + y * (2300535178.0 + y * (18583304.74 + y * (99447.43394 + y * (376.9991397 + y))));
        num / den
    } else {
        let z = 8.0 / ax;
        let y = z * z;
        let xx = ax - 2.356194491;
        let p = 1.0
            + y * (0.183105e-2
                + y * (-0.3516396496e-4 + y * (0.2457520174e-5 + y * (-0.240337019e-6))));
        let q = 0.04687499995
            + y * (-0.2002690873e-3
                + y * (0.8449199096e-5 + y * (-0.88228987e-6 + y * 0.105787412e-6)));
        let ans = (0.636619772 / ax).sqrt() * (xx.cos() * p - z * xx.sin() * q);
        if x < 0.0 {
            -ans
        } else {
            ans
        }
    }
}

/// Far-field amplitude response in [0, 1] toward unit `direction`.
pub fn piston_directivity(aperture: Aperture, frequency: f64, c: f64, direction: Vec3) -> f64 {
    let k = 2.0 * PI * frequency / c;
    match aperture {
        Aperture::Rectangular { width_x, width_y } => {
            (sinc(0.5 * k * width_x * direction.x) * sinc(0.5 * k * width_y * direction.y)).abs()
        }
        Aperture::Circular { diameter } => {
            let st = direction.x.hypot(direction.y);
            let x = 0.5 * k * diameter * st;
            if x < 1e-8 {
                1.0
            } else {
                (2.0 * bessel_j1(x) / x).abs()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PIXEL: Aperture = Aperture::Rectangular {
        width_x: 0.091,
        width_y: 0.091,
    };

    #[test]
    fn broadside_is_unity() {
        let down = Vec3::new(0.0, 0.0, 1.0);
        assert_eq!(piston_directivity(PIXEL, 27e3, 1480.0, down), 1.0);
        assert_eq!(
            piston_directivity(Aperture::Circular { diameter: 0.1 }, 27e3, 1480.0, down),
            1.0
        );
    }

    #[test]
    fn first_null_of_rectangular_element() {
        let lambda: f64 = 1480.0 / 27_000.0;
        let s = lambda / 0.091;
        assert!((s.asin().to_degrees() - 37.0).abs() < 0.5);
        let dir = Vec3::new(s, 0.0, (1.0 - s * s).sqrt());
        assert!(piston_directivity(PIXEL, 27e3, 1480.0, dir) < 1e-12);
        let near = Vec3::new(0.9 * s, 0.0, (1.0 - 0.81 * s * s).sqrt());
        assert!(piston_directivity(PIXEL, 27e3, 1480.0, near) > 0.0);
    }

    #[test]
    fn zero_frequency_is_omnidirectional() {
        for &d in &[
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(0.6, 0.0, 0.8),
            Vec3::new(0.0, 0.6, -0.8),
        ] {
            assert_eq!(piston_directivity(PIXEL, 0.0, 1480.0, d), 1.0);
            assert_eq!(
                piston_directivity(Aperture::Circular { diameter: 0.1 }, 0.0, 1480.0, d),
                1.0
            );
        }
    }

    #[test]
    fn circular_first_null() {
        // 2 J1(x)/x first zero at x = 3.8317
        let x0 = 3.831705970;
        assert!(bessel_j1(x0).abs() < 1e-7);
        assert!((bessel_j1(1.0) - 0.4400505857).abs() < 1e-7);
        assert!((bessel_j1(10.0) - 0.0434727462).abs() < 1e-7);
    }

    #[test]
    fn patterns_bounded() {
        for i in 0..100 {
            let t = i as f64 * 0.0314;
            let d = Vec3::new(t.sin(), 0.3 * t.cos(), t.cos()).normalized();
            for ap in [PIXEL, Aperture::Circular { diameter: 0.1 }] {
                let v = piston_directivity(ap, 35e3, 1480.0, d);
                assert!((0.0..=1.0).contains(&v));
            }
        }
    }
}
