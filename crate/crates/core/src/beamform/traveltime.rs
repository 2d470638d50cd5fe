//! One-way travel times from an element to every voxel.
//!
//! For a flat interface the time depends only on the element depth, the
//! voxel depth and their horizontal distance, so each voxel depth level gets
//! a cubic Hermite table over horizontal distance with exact node slopes
//! (the slope of time versus horizontal distance is the ray parameter).

use crate::geom::Vec3;
use crate::propagation::solve_crossing;
use crate::scene::Scenario;

use super::grid::VoxelGrid;

/// How per-voxel times are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CachePolicy {
    /// Hermite tables per depth level, built once and shared.
    #[default]
    Tabulated,
    /// Root-finding for every voxel.
    Exact,
}

/// Straight rays at one speed, or Fermat paths across the interface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RayModel {
    Refracted,
    /// Straight line at the given speed everywhere.
    Straight {
        speed: f64,
    },
}

const MAX_STEP: f64 = 0.02;
const MIN_STEP: f64 = 0.001;

/// Exact one-way time from an element above the interface to a point, and
/// its derivative with respect to horizontal distance.
fn refracted_time(a: f64, b: f64, rho: f64, cw: f64, cs: f64) -> (f64, f64) {
    let u = solve_crossing(a, b, rho, cw, cs).unwrap_or(0.0);
    let r1 = (u * u + a * a).sqrt();
    let v = rho - u;
    let r2 = (v * v + b * b).sqrt();
    let slope = if r1 > 0.0 { u / (r1 * cw) } else { 0.0 };
    (r1 / cw + r2 / cs, slope)
}

#[derive(Debug, Clone)]
enum Level {
    /// Straight water path to a voxel at this vertical offset.
    Water { dz: f64 },
    Refracted {
        a: f64,
        b: f64,
        step: f64,
        t: Vec<f64>,
        m: Vec<f64>,
    },
}

/// Time tables for one element depth over the depth levels of a grid.
#[derive(Debug, Clone)]
pub struct DepthTable {
    pub element_z: f64,
    max_rho: f64,
    cw: f64,
    cs: f64,
    levels: Vec<Level>,
}

/// True for voxels treated as in the water: everything above the interface
/// and the layer within half a spacing below it.
pub fn is_water_voxel(z: f64, dz: f64) -> bool {
    z < 0.5 * dz
}

impl DepthTable {
    pub fn new(grid: &VoxelGrid, element_z: f64, max_rho: f64, s: &Scenario) -> Self {
        let (cw, cs) = (s.water.sound_speed, s.sediment.sound_speed);
        let a = -element_z;
        let dz = grid.spacing[2];
        let levels = (0..grid.dims[2])
            .map(|k| {
                let z = grid.axis_coordinate(2, k);
                if is_water_voxel(z, dz) || a <= 0.0 {
                    return Level::Water { dz: z - element_z };
                }
                let b = z;
                let step = (0.25 * b.min(a)).clamp(MIN_STEP, MAX_STEP);
                let n = (max_rho / step).ceil() as usize + 2;
                let mut t = Vec::with_capacity(n);
                let mut m = Vec::with_capacity(n);
                for i in 0..n {
                    let (ti, mi) = refracted_time(a, b, i as f64 * step, cw, cs);
                    t.push(ti);
                    m.push(mi);
                }
                Level::Refracted { a, b, step, t, m }
            })
            .collect();
        DepthTable {
            element_z,
            max_rho,
            cw,
            cs,
            levels,
        }
    }

    /// One-way time to depth level `k` at horizontal distance `rho`.
    #[inline]
    pub fn time(&self, k: usize, rho: f64) -> f64 {
        match &self.levels[k] {
            Level::Water { dz } => (rho * rho + dz * dz).sqrt() / self.cw,
            Level::Refracted { a, b, step, t, m } => {
                let x = rho / step;
                let i = x as usize;
                if i + 1 >= t.len() || rho > self.max_rho {
                    return refracted_time(*a, *b, rho, self.cw, self.cs).0;
                }
                let s = x - i as f64;
                let s2 = s * s;
                let s3 = s2 * s;
                let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
                let h10 = s3 - 2.0 * s2 + s;
                let h01 = -2.0 * s3 + 3.0 * s2;
                let h11 = s3 - s2;
                h00 * t[i] + h10 * step * m[i] + h01 * t[i + 1] + h11 * step * m[i + 1]
            }
        }
    }
}

/// Exact one-way time from `element` to `voxel` under a ray model, with the
/// near-interface layer treated as water.
pub fn exact_time(element: Vec3, voxel: Vec3, dz: f64, model: RayModel, s: &Scenario) -> f64 {
    match model {
        RayModel::Straight { speed } => element.distance(voxel) / speed,
        RayModel::Refracted => {
            let (cw, cs) = (s.water.sound_speed, s.sediment.sound_speed);
            if is_water_voxel(voxel.z, dz) || element.z >= 0.0 {
                element.distance(voxel) / cw
            } else {
                refracted_time(
                    -element.z,
                    voxel.z,
                    element.horizontal_distance(voxel),
                    cw,
                    cs,
                )
                .0
            }
        }
    }
}

/// Per-voxel one-way times from one element, z fastest.
#[derive(Debug, Clone)]
pub struct TravelTimeTable {
    pub grid: VoxelGrid,
    pub element: Vec3,
    pub times: Vec<f64>,
}

impl TravelTimeTable {
    pub fn time(&self, i: usize, j: usize, k: usize) -> f64 {
        self.times[self.grid.index(i, j, k)]
    }
}

/// Largest horizontal distance between `element` and any voxel column.
pub(crate) fn max_horizontal_distance(grid: &VoxelGrid, element: Vec3) -> f64 {
    let x0 = grid.origin.x;
    let x1 = grid.axis_coordinate(0, grid.dims[0].saturating_sub(1));
    let y0 = grid.origin.y;
    let y1 = grid.axis_coordinate(1, grid.dims[1].saturating_sub(1));
    let dx = (element.x - x0).abs().max((element.x - x1).abs());
    let dy = (element.y - y0).abs().max((element.y - y1).abs());
    dx.hypot(dy)
}

pub fn travel_time_table(
    grid: &VoxelGrid,
    element: Vec3,
    s: &Scenario,
    policy: CachePolicy,
) -> TravelTimeTable {
    let dz = grid.spacing[2];
    let mut times = Vec::with_capacity(grid.len());
    match policy {
        CachePolicy::Exact => {
            for idx in 0..grid.len() {
                let [i, j, k] = grid.unindex(idx);
                times.push(exact_time(
                    element,
                    grid.world(i, j, k),
                    dz,
                    RayModel::Refracted,
                    s,
                ));
            }
        }
        CachePolicy::Tabulated => {
            let table = DepthTable::new(grid, element.z, max_horizontal_distance(grid, element), s);
            for idx in 0..grid.len() {
                let [i, j, k] = grid.unindex(idx);
                let p = grid.world(i, j, k);
                times.push(table.time(k, element.horizontal_distance(p)));
            }
        }
    }
    TravelTimeTable {
        grid: *grid,
        element,
        times,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beamform::make_grid;
    use crate::propagation::refracted_path;
    use crate::scene::SedimentProperties;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn scenario() -> Scenario {
        Scenario::design_study(SedimentProperties::medium_sand())
    }

    #[test]
    fn table_matches_direct_evaluation() {
        let s = scenario();
        let grid = make_grid(Vec3::new(-3.0, -1.0, -0.5), [6.0, 2.0, 2.5], 0.02).unwrap();
        let element = Vec3::new(0.13, 0.07, -2.0);
        let table = DepthTable::new(
            &grid,
            element.z,
            max_horizontal_distance(&grid, element),
            &s,
        );
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let i = rng.random_range(0..grid.dims[0]);
            let j = rng.random_range(0..grid.dims[1]);
            let k = rng.random_range(0..grid.dims[2]);
            let p = grid.world(i, j, k);
            let got = table.time(k, element.horizontal_distance(p));
            let want = if is_water_voxel(p.z, 0.02) {
                element.distance(p) / 1480.0
            } else {
                refracted_path(element, p, 1480.0, 1767.0)
                    .unwrap()
                    .travel_time
            };
            assert!((got - want).abs() < 1e-9, "{p:?}: {got} vs {want}");
        }
    }

    #[test]
    fn water_voxels_are_straight() {
        let s = scenario();
        let grid = make_grid(Vec3::new(-1.0, -1.0, -1.0), [2.0, 2.0, 0.5], 0.1).unwrap();
        let e = Vec3::new(0.0, 0.0, -2.0);
        let t = travel_time_table(&grid, e, &s, CachePolicy::Tabulated);
        let p = grid.world(3, 4, 2);
        assert!((t.time(3, 4, 2) - e.distance(p) / 1480.0).abs() < 1e-15);
    }

    #[test]
    fn mirrored_elements_mirror_tables() {
        let s = scenario();
        let grid = make_grid(Vec3::new(-1.0, -1.0, 0.0), [2.0, 2.0, 1.0], 0.1).unwrap();
        let a = travel_time_table(&grid, Vec3::new(0.0, 0.3, -2.0), &s, CachePolicy::Tabulated);
        let b = travel_time_table(
            &grid,
            Vec3::new(0.0, -0.3, -2.0),
            &s,
            CachePolicy::Tabulated,
        );
        let ny = grid.dims[1];
        for i in 0..grid.dims[0] {
            for j in 0..ny {
                for k in 0..grid.dims[2] {
                    // y = -1 + 0.1 j mirrors to y = -1 + 0.1 (20 - j), outside
                    // the grid for j = 0.
                    if j == 0 {
                        continue;
                    }
                    let jm = 20 - j;
                    assert!((a.time(i, j, k) - b.time(i, jm, k)).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn exact_policy_agrees() {
        let s = scenario();
        let grid = make_grid(Vec3::new(-1.0, -0.5, 0.0), [2.0, 1.0, 1.0], 0.1).unwrap();
        let e = Vec3::new(0.05, 0.0, -2.0);
        let a = travel_time_table(&grid, e, &s, CachePolicy::Tabulated);
        let b = travel_time_table(&grid, e, &s, CachePolicy::Exact);
        for (x, y) in a.times.iter().zip(&b.times) {
            assert!((x - y).abs() < 1e-9);
        }
    }
}
