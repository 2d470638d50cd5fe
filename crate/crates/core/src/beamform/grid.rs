use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geom::Vec3;
use crate::scene::Scenario;

/// Voxel spacing of the default image grid, m.
pub const DEFAULT_SPACING: f64 = 0.02;
/// Default image box: along-track, cross-track and depth extents, m.
pub const DEFAULT_EXTENT: [f64; 3] = [15.0, 2.0, 2.0];

/// Regular voxel lattice. Voxel `(i, j, k)` sits at
/// `origin + (i dx, j dy, k dz)`; values are stored with `k` (depth)
/// varying fastest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VoxelGrid {
    pub origin: Vec3,
    pub spacing: [f64; 3],
    /// Voxel counts along x, y, z.
    pub dims: [usize; 3],
}

impl VoxelGrid {
    pub fn len(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dims[1] + j) * self.dims[2] + k
    }

    #[inline]
    pub fn unindex(&self, idx: usize) -> [usize; 3] {
        let k = idx % self.dims[2];
        let j = (idx / self.dims[2]) % self.dims[1];
        let i = idx / (self.dims[1] * self.dims[2]);
        [i, j, k]
    }

    #[inline]
    pub fn world(&self, i: usize, j: usize, k: usize) -> Vec3 {
        Vec3::new(
            self.origin.x + i as f64 * self.spacing[0],
            self.origin.y + j as f64 * self.spacing[1],
            self.origin.z + k as f64 * self.spacing[2],
        )
    }

    /// Coordinate of index `n` along `axis` (0 = x, 1 = y, 2 = z).
    pub fn axis_coordinate(&self, axis: usize, n: usize) -> f64 {
        let o = [self.origin.x, self.origin.y, self.origin.z][axis];
        o + n as f64 * self.spacing[axis]
    }

    /// Nearest index along `axis` for a world coordinate, if inside the
    /// grid (half a spacing of slack at both ends).
    pub fn nearest_index(&self, axis: usize, coord: f64) -> Option<usize> {
        let o = [self.origin.x, self.origin.y, self.origin.z][axis];
        let f = ((coord - o) / self.spacing[axis]).round();
        if f >= 0.0 && (f as usize) < self.dims[axis] {
            Some(f as usize)
        } else {
            None
        }
    }

    /// Nearest voxel of a world point, if inside the grid.
    pub fn locate(&self, p: Vec3) -> Option<[usize; 3]> {
        Some([
            self.nearest_index(0, p.x)?,
            self.nearest_index(1, p.y)?,
            self.nearest_index(2, p.z)?,
        ])
    }

    pub fn same_lattice(&self, other: &VoxelGrid) -> bool {
        self.dims == other.dims && self.spacing == other.spacing && self.origin == other.origin
    }
}

/// Grid of `round(extent / spacing)` voxels per axis starting at `min`.
pub fn make_grid(min: Vec3, extent: [f64; 3], spacing: f64) -> Result<VoxelGrid> {
    if !(spacing > 0.0) || !spacing.is_finite() {
        return Err(Error::validation("spacing", "must be > 0"));
    }
    let mut dims = [0usize; 3];
    for a in 0..3 {
        if !(extent[a] > 0.0) {
            return Err(Error::validation(
                "extent",
                "must be positive on every axis",
            ));
        }
        if spacing > extent[a] {
            return Err(Error::validation(
                "spacing",
                format!("{spacing} m exceeds the {} m extent", extent[a]),
            ));
        }
        dims[a] = (extent[a] / spacing).round() as usize;
    }
    Ok(VoxelGrid {
        origin: min,
        spacing: [spacing; 3],
        dims,
    })
}

/// The default 15 m x 2 m x 2 m image tile under the track start, 2 cm
/// voxels: along-track from the first location, cross-track centered on the
/// track, depth from the interface down.
pub fn default_grid(s: &Scenario) -> VoxelGrid {
    let min = Vec3::new(
        s.track.start[0],
        s.track.start[1] - DEFAULT_EXTENT[1] / 2.0,
        0.0,
    );
    make_grid(min, DEFAULT_EXTENT, DEFAULT_SPACING).expect("default grid is valid")
}

#[derive(Debug, Clone, PartialEq)]
pub enum VolumeData {
    Complex(Vec<Complex64>),
    Real(Vec<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Provenance {
    pub scenario_hash: u64,
    /// First and last transmit-event index contributing, if any.
    pub ping_range: Option<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VoxelVolume {
    pub grid: VoxelGrid,
    pub data: VolumeData,
    pub provenance: Provenance,
}

impl VoxelVolume {
    pub fn zeros(grid: VoxelGrid) -> Self {
        VoxelVolume {
            grid,
            data: VolumeData::Complex(vec![Complex64::new(0.0, 0.0); grid.len()]),
            provenance: Provenance::default(),
        }
    }

    pub fn real(grid: VoxelGrid, values: Vec<f64>, provenance: Provenance) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        VoxelVolume {
            grid,
            data: VolumeData::Real(values),
            provenance,
        }
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn is_complex(&self) -> bool {
        matches!(self.data, VolumeData::Complex(_))
    }

    pub fn complex_values(&self) -> Option<&[Complex64]> {
        match &self.data {
            VolumeData::Complex(v) => Some(v),
            VolumeData::Real(_) => None,
        }
    }

    pub fn real_values(&self) -> Option<&[f64]> {
        match &self.data {
            VolumeData::Real(v) => Some(v),
            VolumeData::Complex(_) => None,
        }
    }

    /// |v|^2 per voxel (square of real values for real volumes).
    pub fn intensity(&self) -> Vec<f64> {
        match &self.data {
            VolumeData::Complex(v) => v.iter().map(|c| c.norm_sqr()).collect(),
            VolumeData::Real(v) => v.iter().map(|x| x * x).collect(),
        }
    }

    /// Index and value of the largest-magnitude voxel.
    pub fn peak(&self) -> Option<([usize; 3], f64)> {
        let mags: Vec<f64> = match &self.data {
            VolumeData::Complex(v) => v.iter().map(|c| c.norm()).collect(),
            VolumeData::Real(v) => v.clone(),
        };
        let (idx, val) = mags.iter().enumerate().fold(
            None,
            |best: Option<(usize, f64)>, (i, &m)| match best {
                Some((_, b)) if b >= m => best,
                _ => Some((i, m)),
            },
        )?;
        Some((self.grid.unindex(idx), val))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn design_study_cube() {
        let g = make_grid(Vec3::ZERO, [15.0, 2.0, 2.0], 0.02).unwrap();
        assert_eq!(g.dims, [750, 100, 100]);
        assert_eq!(g.len(), 7_500_000);
    }

    #[test]
    fn small_grid() {
        let g = make_grid(Vec3::ZERO, [1.0, 1.0, 1.0], 0.5).unwrap();
        assert_eq!(g.dims, [2, 2, 2]);
    }

    #[test]
    fn degenerate() {
        assert!(make_grid(Vec3::ZERO, [1.0, 1.0, 1.0], 2.0).is_err());
        assert!(make_grid(Vec3::ZERO, [1.0, 1.0, 1.0], 0.0).is_err());
        assert!(make_grid(Vec3::ZERO, [1.0, 1.0, 1.0], -0.1).is_err());
    }

    #[test]
    fn mapping_bijective() {
        let g = make_grid(Vec3::new(-1.0, 2.0, 0.0), [0.3, 0.2, 0.1], 0.02).unwrap();
        for idx in 0..g.len() {
            let [i, j, k] = g.unindex(idx);
            assert_eq!(g.index(i, j, k), idx);
            assert_eq!(g.locate(g.world(i, j, k)), Some([i, j, k]));
        }
    }
}
