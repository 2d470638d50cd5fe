//! Time-domain backprojection.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::grid::{Provenance, VolumeData, VoxelGrid, VoxelVolume};
use super::traveltime::{exact_time, max_horizontal_distance, DepthTable, RayModel};
use crate::error::{Error, Result};
use crate::geom::Vec3;
use crate::scene::{ping_poses, scenario_hash, Scenario};
use crate::synth::PingRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Interpolation {
    #[default]
    Linear,
    Nearest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Normalization {
    /// Divide each voxel by the number of (tx, rx, ping) pairs that
    /// contributed to it.
    #[default]
    PairCount,
    /// Plain coherent sum.
    None,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BackprojectOptions {
    pub rays: RayModel,
    pub interpolation: Interpolation,
    pub normalization: Normalization,
    /// Frequency used to baseband and remodulate the data; defaults to the
    /// waveform band center.
    pub center_frequency: Option<f64>,
}

impl Default for BackprojectOptions {
    fn default() -> Self {
        BackprojectOptions {
            rays: RayModel::Refracted,
            interpolation: Interpolation::Linear,
            normalization: Normalization::PairCount,
            center_frequency: None,
        }
    }
}

/// Coherent image plus the number of contributing pairs per voxel.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamformResult {
    pub volume: VoxelVolume,
    pub coverage: Vec<u32>,
}

/// Streaming accumulator: pings are added one at a time and each voxel sums
/// its contributions in ping order, then receiver order, whatever the number
/// of worker threads.
pub struct Backprojector<'a> {
    s: &'a Scenario,
    grid: VoxelGrid,
    opts: BackprojectOptions,
    omega: f64,
    sample_rate: Option<f64>,
    tables: BTreeMap<u64, DepthTable>,
    max_rho: f64,
    sum: Vec<Complex64>,
    coverage: Vec<u32>,
    ping_range: Option<(usize, usize)>,
}

impl<'a> Backprojector<'a> {
    pub fn new(grid: &VoxelGrid, s: &'a Scenario, opts: BackprojectOptions) -> Self {
        let fc = opts
            .center_frequency
            .unwrap_or_else(|| s.waveform.center_frequency());
        // Horizontal reach of every element of the scenario's track.
        let reach = s.array.horizontal_radius();
        let max_rho = ping_poses(s)
            .iter()
            .map(|e| max_horizontal_distance(grid, e.pose.position) + reach)
            .fold(0.0, f64::max);
        Backprojector {
            s,
            grid: *grid,
            opts,
            omega: 2.0 * PI * fc,
            sample_rate: None,
            tables: BTreeMap::new(),
            max_rho,
            sum: vec![Complex64::new(0.0, 0.0); grid.len()],
            coverage: vec![0; grid.len()],
            ping_range: None,
        }
    }

    /// Builds the time table for an element depth on first use; lookups
    /// beyond the tabulated reach fall back to exact evaluation.
    fn ensure_table(&mut self, z: f64, reach: f64) {
        if !self.tables.contains_key(&z.to_bits()) {
            let rho = self.max_rho.max(reach);
            self.tables
                .insert(z.to_bits(), DepthTable::new(&self.grid, z, rho, self.s));
        }
    }

    pub fn add_ping(&mut self, rec: &PingRecord) -> Result<()> {
        let data = rec.analytic().ok_or_else(|| {
            Error::validation(
                "ping",
                "backprojection needs pulse-compressed analytic records",
            )
        })?;
        match self.sample_rate {
            None => self.sample_rate = Some(rec.sample_rate),
            Some(fs) if fs != rec.sample_rate => {
                return Err(Error::GridMismatch(format!(
                    "ping {} sampled at {} Hz, earlier pings at {fs} Hz",
                    rec.ping_index, rec.sample_rate
                )))
            }
            _ => {}
        }
        if data.len() != self.s.array.receiver_count() {
            return Err(Error::GridMismatch(format!(
                "ping {} has {} receivers, the array has {}",
                rec.ping_index,
                data.len(),
                self.s.array.receiver_count()
            )));
        }
        let tx = self.s.array.projector_position(&rec.pose, rec.tx_id);
        let rxs = self.s.array.receiver_positions(&rec.pose);
        if self.opts.rays == RayModel::Refracted {
            for p in rxs.iter().chain(std::iter::once(&tx)) {
                let reach = max_horizontal_distance(&self.grid, *p);
                self.ensure_table(p.z, reach);
            }
        }
        // Baseband copies: y(t) exp(-i w t).
        let fs = rec.sample_rate;
        let base: Vec<Vec<Complex64>> = data
            .iter()
            .map(|series| {
                series
                    .iter()
                    .enumerate()
                    .map(|(n, v)| {
                        let t = rec.time_of(n);
                        v * Complex64::from_polar(1.0, -self.omega * t)
                    })
                    .collect()
            })
            .collect();
        let ctx = PingGeometry {
            tx,
            rxs: &rxs,
            base: &base,
            start: rec.start_time,
            fs,
            samples: rec.sample_count,
        };
        let grid = self.grid;
        let slab = grid.dims[1] * grid.dims[2];
        if slab > 0 {
            let this = &*self;
            let results: Vec<(Vec<Complex64>, Vec<u32>)> = (0..grid.dims[0])
                .into_par_iter()
                .map(|i| this.slab_contributions(&ctx, i))
                .collect();
            for (i, (vals, cov)) in results.into_iter().enumerate() {
                let off = i * slab;
                for (d, v) in self.sum[off..off + slab].iter_mut().zip(&vals) {
                    *d += v;
                }
                for (d, c) in self.coverage[off..off + slab].iter_mut().zip(&cov) {
                    *d += c;
                }
            }
        }
        self.ping_range = Some(match self.ping_range {
            None => (rec.ping_index, rec.ping_index),
            Some((a, b)) => (a.min(rec.ping_index), b.max(rec.ping_index)),
        });
        Ok(())
    }

    fn time(&self, element: Vec3, p: Vec3, k: usize) -> f64 {
        match self.opts.rays {
            RayModel::Refracted => match self.tables.get(&element.z.to_bits()) {
                Some(t) => t.time(k, element.horizontal_distance(p)),
                None => exact_time(element, p, self.grid.spacing[2], self.opts.rays, self.s),
            },
            RayModel::Straight { .. } => {
                exact_time(element, p, self.grid.spacing[2], self.opts.rays, self.s)
            }
        }
    }

    /// Contribution of one ping to the x-slab `i`: for each voxel, the
    /// receivers are summed in order.
    fn slab_contributions(&self, g: &PingGeometry<'_>, i: usize) -> (Vec<Complex64>, Vec<u32>) {
        let grid = &self.grid;
        let (ny, nz) = (grid.dims[1], grid.dims[2]);
        let mut vals = vec![Complex64::new(0.0, 0.0); ny * nz];
        let mut cov = vec![0u32; ny * nz];
        let mut t_tx = vec![0.0; ny * nz];
        for j in 0..ny {
            for k in 0..nz {
                t_tx[j * nz + k] = self.time(g.tx, grid.world(i, j, k), k);
            }
        }
        let last = (g.samples as f64) - 1.0;
        for (r, rx) in g.rxs.iter().enumerate() {
            let series = &g.base[r];
            for j in 0..ny {
                for k in 0..nz {
                    let p = grid.world(i, j, k);
                    let tau = t_tx[j * nz + k] + self.time(*rx, p, k);
                    let x = (tau - g.start) * g.fs;
                    if !(x >= 0.0 && x <= last) {
                        continue;
                    }
                    let v = match self.opts.interpolation {
                        Interpolation::Nearest => series[x.round() as usize],
                        Interpolation::Linear => {
                            let n0 = x.floor() as usize;
                            let f = x - n0 as f64;
                            if n0 + 1 < series.len() {
                                series[n0] * (1.0 - f) + series[n0 + 1] * f
                            } else {
                                series[n0]
                            }
                        }
                    };
                    vals[j * nz + k] += v * Complex64::from_polar(1.0, self.omega * tau);
                    cov[j * nz + k] += 1;
                }
            }
        }
        (vals, cov)
    }

    pub fn finish(self) -> BeamformResult {
        let mut values = self.sum;
        if self.opts.normalization == Normalization::PairCount {
            for (v, &c) in values.iter_mut().zip(&self.coverage) {
                if c > 0 {
                    *v /= c as f64;
                }
            }
        }
        BeamformResult {
            volume: VoxelVolume {
                grid: self.grid,
                data: VolumeData::Complex(values),
                provenance: Provenance {
                    scenario_hash: scenario_hash(self.s),
                    ping_range: self.ping_range,
                },
            },
            coverage: self.coverage,
        }
    }
}

struct PingGeometry<'g> {
    tx: Vec3,
    rxs: &'g [Vec3],
    base: &'g [Vec<Complex64>],
    start: f64,
    fs: f64,
    samples: usize,
}

/// Backprojects pulse-compressed records onto `grid`.
pub fn backproject<'p, I>(
    pings: I,
    grid: &VoxelGrid,
    s: &Scenario,
    opts: BackprojectOptions,
) -> Result<BeamformResult>
where
    I: IntoIterator<Item = &'p PingRecord>,
{
    let mut bp = Backprojector::new(grid, s, opts);
    for p in pings {
        bp.add_ping(p)?;
    }
    Ok(bp.finish())
}
