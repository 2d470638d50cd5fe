//! Volume post-processing: depth gain, median background normalization,
//! dynamic range compression, projections and slices.

mod median;

use rayon::prelude::*;

use crate::beamform::{VolumeData, VoxelGrid, VoxelVolume};
use crate::error::{Error, Result};

use median::{window, SlidingMedian};

/// Gain applied to the sand imagery, dB per meter of sediment depth.
pub const DEFAULT_DEPTH_GAIN: f64 = 10.0;

/// Scales every voxel at sediment depth `z >= 0` by `rate * z` dB.
pub fn depth_gain(v: &VoxelVolume, rate_db_per_m: f64) -> VoxelVolume {
    let g = &v.grid;
    let factor: Vec<f64> = (0..g.dims[2])
        .map(|k| {
            let z = g.axis_coordinate(2, k);
            if z > 0.0 {
                10f64.powf(rate_db_per_m * z / 20.0)
            } else {
                1.0
            }
        })
        .collect();
    let nz = g.dims[2].max(1);
    let data = match &v.data {
        VolumeData::Complex(x) => VolumeData::Complex(
            x.iter()
                .enumerate()
                .map(|(i, c)| c * factor[i % nz])
                .collect(),
        ),
        VolumeData::Real(x) => VolumeData::Real(
            x.iter()
                .enumerate()
                .map(|(i, r)| r * factor[i % nz])
                .collect(),
        ),
    };
    VoxelVolume {
        grid: v.grid,
        data,
        provenance: v.provenance,
    }
}

/// Median window in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MedianKernel {
    pub along: f64,
    pub cross: f64,
    pub depth: f64,
}

impl Default for MedianKernel {
    fn default() -> Self {
        MedianKernel {
            along: 1.2,
            cross: 0.2,
            depth: 0.1,
        }
    }
}

impl MedianKernel {
    /// Window size in voxels per axis (x, y, z).
    pub fn voxels(&self, grid: &VoxelGrid) -> Result<[usize; 3]> {
        let m = [self.along, self.cross, self.depth];
        let mut n = [0usize; 3];
        for a in 0..3 {
            let v = (m[a] / grid.spacing[a]).round();
            if !(v >= 3.0) {
                return Err(Error::validation(
                    "kernel",
                    format!(
                        "{} m on axis {a} is {v} voxels at {} m spacing; at least 3 required",
                        m[a], grid.spacing[a]
                    ),
                ));
            }
            n[a] = v as usize;
        }
        Ok(n)
    }
}

/// Per-voxel median of the intensity |v|^2 over the kernel window, the
/// window shrinking at the grid borders. Returns a real intensity volume.
pub fn median_background(v: &VoxelVolume, kernel: MedianKernel) -> Result<VoxelVolume> {
    let n = kernel.voxels(&v.grid)?;
    let g = v.grid;
    let [nx, ny, nz] = g.dims;
    let power = v.intensity();
    let at = |i: usize, j: usize, k: usize| power[g.index(i, j, k)];
    // One x-line per (j, k); the window slides along x, adding and removing
    // y-z planes of the box.
    let lines: Vec<Vec<f64>> = (0..ny * nz)
        .into_par_iter()
        .map(|jk| {
            let (j, k) = (jk / nz, jk % nz);
            let (j0, j1) = window(j, n[1], ny);
            let (k0, k1) = window(k, n[2], nz);
            let mut med = SlidingMedian::new();
            let mut out = Vec::with_capacity(nx);
            let mut hi = None::<usize>;
            for i in 0..nx {
                let (i0, i1) = window(i, n[0], nx);
                let start = hi.map_or(i0, |h| h + 1);
                for x in start..=i1 {
                    for y in j0..=j1 {
                        for z in k0..=k1 {
                            med.insert(at(x, y, z));
                        }
                    }
                }
                hi = Some(i1);
                out.push(med.median());
                // Drop the plane that leaves the window at the next step.
                if i + 1 < nx && window(i + 1, n[0], nx).0 > i0 {
                    for y in j0..=j1 {
                        for z in k0..=k1 {
                            med.remove(at(i0, y, z));
                        }
                    }
                }
            }
            out
        })
        .collect();
    let mut values = vec![0.0; g.len()];
    for (jk, line) in lines.iter().enumerate() {
        let (j, k) = (jk / nz, jk % nz);
        for (i, m) in line.iter().enumerate() {
            values[g.index(i, j, k)] = *m;
        }
    }
    Ok(VoxelVolume::real(g, values, v.provenance))
}

/// Value at percentile `p` (0..=100) with linear interpolation between
/// order statistics.
pub fn percentile(values: &[f64], p: f64) -> f64 {
    let mut s: Vec<f64> = values.iter().copied().filter(|v| v.is_finite()).collect();
    if s.is_empty() {
        return f64::NAN;
    }
    s.sort_by(f64::total_cmp);
    let pos = (p / 100.0).clamp(0.0, 1.0) * (s.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    s[lo] + (pos - lo as f64) * (s[hi] - s[lo])
}

/// Lower bound applied to both the image and the background intensity:
/// the 1st percentile of the image intensity, or its smallest positive
/// value when that percentile is zero.
fn intensity_floor(power: &[f64]) -> f64 {
    let p1 = percentile(power, 1.0);
    if p1 > 0.0 {
        return p1;
    }
    power
        .iter()
        .copied()
        .filter(|&x| x > 0.0)
        .fold(f64::INFINITY, f64::min)
}

/// Intensity over background in dB. Both are floored at the image's
/// low-percentile intensity so that anechoic regions stay finite; an
/// all-zero image gives 0 dB everywhere.
pub fn normalize(v: &VoxelVolume, bg: &VoxelVolume) -> Result<VoxelVolume> {
    if !v.grid.same_lattice(&bg.grid) {
        return Err(Error::GridMismatch(
            "image and background grids differ".into(),
        ));
    }
    let b = bg
        .real_values()
        .ok_or_else(|| Error::validation("background", "must be a real intensity volume"))?;
    let power = v.intensity();
    let floor = intensity_floor(&power);
    let values = if floor.is_finite() {
        power
            .iter()
            .zip(b)
            .map(|(p, q)| 10.0 * (p.max(floor) / q.max(floor)).log10())
            .collect()
    } else {
        vec![0.0; power.len()]
    };
    Ok(VoxelVolume::real(v.grid, values, v.provenance))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrcParams {
    /// Percentile mapped to 0.
    pub p_low: f64,
    /// Percentile mapped to 1.
    pub p_high: f64,
    pub gamma: f64,
}

impl Default for DrcParams {
    fn default() -> Self {
        DrcParams {
            p_low: 50.0,
            p_high: 99.9,
            gamma: 0.5,
        }
    }
}

/// Input values mapped to 0 and 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrcBounds {
    pub low: f64,
    pub high: f64,
}

fn real_input(v: &VoxelVolume) -> Result<&[f64]> {
    v.real_values()
        .ok_or_else(|| Error::validation("volume", "dynamic range compression needs a real volume"))
}

pub fn drc_bounds(v: &VoxelVolume, params: DrcParams) -> Result<DrcBounds> {
    let x = real_input(v)?;
    Ok(DrcBounds {
        low: percentile(x, params.p_low),
        high: percentile(x, params.p_high),
    })
}

/// Clip to the bounds, map affinely to [0, 1], then apply `x^gamma`.
pub fn drc_map(x: f64, bounds: DrcBounds, gamma: f64) -> f64 {
    if !(bounds.high > bounds.low) {
        return 0.5;
    }
    let u = ((x - bounds.low) / (bounds.high - bounds.low)).clamp(0.0, 1.0);
    u.powf(gamma)
}

pub fn drc_with_bounds(v: &VoxelVolume, bounds: DrcBounds, gamma: f64) -> Result<VoxelVolume> {
    let x = real_input(v)?;
    if !(bounds.high > bounds.low) {
        log::warn!(
            "degenerate dynamic range ({} .. {}); output set to 0.5",
            bounds.low,
            bounds.high
        );
    }
    let values = x.iter().map(|&x| drc_map(x, bounds, gamma)).collect();
    Ok(VoxelVolume::real(v.grid, values, v.provenance))
}

/// Percentile clip plus gamma map of a real (dB) volume into [0, 1].
pub fn drc(v: &VoxelVolume, params: DrcParams) -> Result<VoxelVolume> {
    let b = drc_bounds(v, params)?;
    drc_with_bounds(v, b, params.gamma)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        }
    }

    pub fn parse(s: &str) -> Option<Axis> {
        match s.trim() {
            "x" | "X" => Some(Axis::X),
            "y" | "Y" => Some(Axis::Y),
            "z" | "Z" => Some(Axis::Z),
            _ => None,
        }
    }

    /// Image (row, column) axes of a plane normal to `self`: depth runs
    /// down the rows when present, along-track across the columns.
    pub fn image_axes(self) -> (Axis, Axis) {
        match self {
            Axis::X => (Axis::Z, Axis::Y),
            Axis::Y => (Axis::Z, Axis::X),
            Axis::Z => (Axis::Y, Axis::X),
        }
    }
}

/// World coordinates of an image axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisAnnotation {
    pub axis: Axis,
    pub origin: f64,
    pub spacing: f64,
    pub count: usize,
}

impl AxisAnnotation {
    fn of(grid: &VoxelGrid, axis: Axis) -> Self {
        let a = axis.index();
        AxisAnnotation {
            axis,
            origin: grid.axis_coordinate(a, 0),
            spacing: grid.spacing[a],
            count: grid.dims[a],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProductKind {
    Mip,
    /// Plane at voxel `index` whose world coordinate is `coordinate`.
    Slice {
        index: usize,
        coordinate: f64,
    },
}

/// 2D image cut from or projected out of a volume, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageProduct {
    pub kind: ProductKind,
    /// Axis projected out or held fixed.
    pub axis: Axis,
    pub rows: AxisAnnotation,
    pub cols: AxisAnnotation,
    pub data: Vec<f64>,
}

impl ImageProduct {
    pub fn width(&self) -> usize {
        self.cols.count
    }

    pub fn height(&self) -> usize {
        self.rows.count
    }

    pub fn at(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.cols.count + col]
    }

    /// `mip` or `slice` plus the axis name.
    pub fn label(&self) -> String {
        match self.kind {
            ProductKind::Mip => format!("mip_{}", self.axis.name()),
            ProductKind::Slice { index, .. } => format!("slice_{}_{index}", self.axis.name()),
        }
    }
}

/// Magnitude for complex volumes, the value itself for real ones.
fn scalar_values(v: &VoxelVolume) -> Vec<f64> {
    match &v.data {
        VolumeData::Complex(x) => x.iter().map(|c| c.norm()).collect(),
        VolumeData::Real(x) => x.clone(),
    }
}

fn project(v: &VoxelVolume, axis: Axis, kind: ProductKind) -> ImageProduct {
    let g = &v.grid;
    let values = scalar_values(v);
    let (ra, ca) = axis.image_axes();
    let (nr, nc) = (g.dims[ra.index()], g.dims[ca.index()]);
    let depth = g.dims[axis.index()];
    let mut data = vec![0.0; nr * nc];
    for r in 0..nr {
        for c in 0..nc {
            let mut idx = [0usize; 3];
            idx[ra.index()] = r;
            idx[ca.index()] = c;
            let value = match kind {
                ProductKind::Mip => (0..depth)
                    .map(|d| {
                        idx[axis.index()] = d;
                        values[g.index(idx[0], idx[1], idx[2])]
                    })
                    .fold(f64::NEG_INFINITY, f64::max),
                ProductKind::Slice { index, .. } => {
                    idx[axis.index()] = index;
                    values[g.index(idx[0], idx[1], idx[2])]
                }
            };
            data[r * nc + c] = value;
        }
    }
    ImageProduct {
        kind,
        axis,
        rows: AxisAnnotation::of(g, ra),
        cols: AxisAnnotation::of(g, ca),
        data,
    }
}

/// Maximum over `axis` (magnitude for complex volumes).
pub fn mip(v: &VoxelVolume, axis: Axis) -> ImageProduct {
    project(v, axis, ProductKind::Mip)
}

/// Nearest voxel plane normal to `axis` at world coordinate `coord`.
pub fn slice(v: &VoxelVolume, axis: Axis, coord: f64) -> Result<ImageProduct> {
    let a = axis.index();
    let index = v.grid.nearest_index(a, coord).ok_or_else(|| {
        Error::validation(
            "slice",
            format!("{} = {coord} m lies outside the grid", axis.name()),
        )
    })?;
    let coordinate = v.grid.axis_coordinate(a, index);
    Ok(project(v, axis, ProductKind::Slice { index, coordinate }))
}
