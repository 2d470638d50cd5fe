//! Fermat ray paths across the flat sediment-water interface at z = 0.

use crate::geom::Vec3;

/// Straight or refracted ray between two points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayPath {
    pub start: Vec3,
    pub end: Vec3,
    /// Interface crossing for refracted paths.
    pub crossing: Option<Vec3>,
    pub water_length: f64,
    pub sediment_length: f64,
    /// One-way travel time, s.
    pub travel_time: f64,
    /// Angle from vertical of the water segment, rad.
    pub incidence: f64,
    /// Angle from vertical of the sediment segment, rad.
    pub refraction: f64,
}

impl RayPath {
    pub fn length(&self) -> f64 {
        self.water_length + self.sediment_length
    }

    /// Unit direction leaving `start`.
    pub fn departure(&self) -> Vec3 {
        match self.crossing {
            Some(c) => (c - self.start).normalized(),
            None => (self.end - self.start).normalized(),
        }
    }

    /// Unit direction arriving at `end`. A path ending on the interface
    /// arrives along its water segment.
    pub fn arrival(&self) -> Vec3 {
        match self.crossing {
            Some(c) if self.sediment_length > 0.0 => (self.end - c).normalized(),
            Some(c) => (c - self.start).normalized(),
            None => (self.end - self.start).normalized(),
        }
    }
}

/// No real ray joins the two points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("no real refracted ray (evanescent)")]
pub struct Evanescent;

const CROSSING_TOLERANCE: f64 = 1e-12;

/// Horizontal offset `u` of the crossing from the water point, for a water
/// point at height `a` above the interface, a sediment point at depth `b`, and
/// horizontal separation `l`. Solves sin(i)/c1 = sin(r)/c2 by bracketed Newton.
pub(crate) fn solve_crossing(a: f64, b: f64, l: f64, c1: f64, c2: f64) -> Option<f64> {
    if !(a.is_finite() && b.is_finite() && l.is_finite()) || a < 0.0 || b < 0.0 || l < 0.0 {
        return None;
    }
    if l == 0.0 {
        return Some(0.0);
    }
    if b == 0.0 {
        return Some(l);
    }
    if a == 0.0 {
        return Some(0.0);
    }
    // g(u) = sin(i)/c1 - sin(r)/c2 is strictly increasing on [0, l] with
    // g(0) < 0 < g(l), so a root always exists.
    let g = |u: f64| {
        let v = l - u;
        let s1 = u / (u * u + a * a).sqrt();
        let s2 = v / (v * v + b * b).sqrt();
        s1 / c1 - s2 / c2
    };
    let dg = |u: f64| {
        let v = l - u;
        let r1 = (u * u + a * a).sqrt();
        let r2 = (v * v + b * b).sqrt();
        a * a / (c1 * r1 * r1 * r1) + b * b / (c2 * r2 * r2 * r2)
    };
    let (mut lo, mut hi) = (0.0, l);
    // Equal-speed straight line as the starting point.
    let mut u = l * a / (a + b);
    for _ in 0..100 {
        let gu = g(u);
        if gu == 0.0 {
            return Some(u);
        }
        if gu < 0.0 {
            lo = u;
        } else {
            hi = u;
        }
        let step = gu / dg(u);
        let mut next = u - step;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        if (next - u).abs() < CROSSING_TOLERANCE || hi - lo < CROSSING_TOLERANCE {
            return Some(next);
        }
        u = next;
    }
    Some(u)
}

/// Minimum-time path from a point in the water (z < 0) to a point in the
/// sediment (z >= 0).
///
/// For two points in different half-spaces a real Fermat path always exists;
/// `Evanescent` is returned only when the inputs are not a valid water /
/// sediment pair (non-finite or on the wrong sides).
pub fn refracted_path(
    p_water: Vec3,
    p_sed: Vec3,
    c_water: f64,
    c_sed: f64,
) -> Result<RayPath, Evanescent> {
    if !(p_water.z < 0.0 && p_sed.z >= 0.0) || !p_water.is_finite() || !p_sed.is_finite() {
        return Err(Evanescent);
    }
    let a = -p_water.z;
    let b = p_sed.z;
    let l = p_water.horizontal_distance(p_sed);
    let u = solve_crossing(a, b, l, c_water, c_sed).ok_or(Evanescent)?;
    let (ex, ey) = if l > 0.0 {
        ((p_sed.x - p_water.x) / l, (p_sed.y - p_water.y) / l)
    } else {
        (0.0, 0.0)
    };
    let crossing = Vec3::new(p_water.x + ex * u, p_water.y + ey * u, 0.0);
    let water_length = (u * u + a * a).sqrt();
    let v = l - u;
    let sediment_length = (v * v + b * b).sqrt();
    Ok(RayPath {
        start: p_water,
        end: p_sed,
        crossing: Some(crossing),
        water_length,
        sediment_length,
        travel_time: water_length / c_water + sediment_length / c_sed,
        incidence: u.atan2(a),
        refraction: v.atan2(b),
    })
}

/// Straight path within one medium.
pub fn straight_path(a: Vec3, b: Vec3, speed: f64, in_sediment: bool) -> RayPath {
    let d = a.distance(b);
    let angle = a.horizontal_distance(b).atan2((b.z - a.z).abs());
    RayPath {
        start: a,
        end: b,
        crossing: None,
        water_length: if in_sediment { 0.0 } else { d },
        sediment_length: if in_sediment { d } else { 0.0 },
        travel_time: d / speed,
        incidence: if in_sediment { 0.0 } else { angle },
        refraction: if in_sediment { angle } else { 0.0 },
    }
}

/// Path between any two points of the two-medium half-spaces, in either
/// order. Refracted paths are returned oriented from `a` to `b`.
pub fn path_between(a: Vec3, b: Vec3, c_water: f64, c_sed: f64) -> Result<RayPath, Evanescent> {
    match (a.z < 0.0, b.z < 0.0) {
        (true, true) => Ok(straight_path(a, b, c_water, false)),
        (false, false) => Ok(straight_path(a, b, c_sed, true)),
        (true, false) => refracted_path(a, b, c_water, c_sed),
        (false, true) => {
            let mut p = refracted_path(b, a, c_water, c_sed)?;
            std::mem::swap(&mut p.start, &mut p.end);
            Ok(p)
        }
    }
}

/// Path from a water point down to a flat reflector at depth `layer_depth`
/// below the interface and back up to another water point. Returns the
/// one-way-equivalent quantities: total water length, total sediment length,
/// travel time, and the water incidence angle.
pub fn layer_reflection_path(
    tx: Vec3,
    rx: Vec3,
    layer_depth: f64,
    c_water: f64,
    c_sed: f64,
) -> Option<RayPath> {
    if !(tx.z < 0.0 && rx.z < 0.0 && layer_depth > 0.0) {
        return None;
    }
    let (at, ar) = (-tx.z, -rx.z);
    let l = tx.horizontal_distance(rx);
    let cmax = c_water.max(c_sed);
    // Horizontal offset as a function of ray parameter p; increasing on
    // [0, 1/cmax).
    let offset = |p: f64| {
        let s1 = p * c_water;
        let s2 = p * c_sed;
        (at + ar) * s1 / (1.0 - s1 * s1).sqrt() + 2.0 * layer_depth * s2 / (1.0 - s2 * s2).sqrt()
    };
    let (mut lo, mut hi) = (0.0, 1.0 / cmax);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if offset(mid) < l {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-16 / cmax {
            break;
        }
    }
    let p = 0.5 * (lo + hi);
    let s1 = p * c_water;
    let s2 = p * c_sed;
    let c1 = (1.0 - s1 * s1).sqrt();
    let c2 = (1.0 - s2 * s2).sqrt();
    let water_length = (at + ar) / c1;
    let sediment_length = 2.0 * layer_depth / c2;
    Some(RayPath {
        start: tx,
        end: rx,
        crossing: None,
        water_length,
        sediment_length,
        travel_time: water_length / c_water + sediment_length / c_sed,
        incidence: s1.asin(),
        refraction: s2.asin(),
    })
}
