//! Experiments that run the full simulate → compress → backproject chain.

use std::collections::VecDeque;

use super::scenes::{contrast_scene, multipath_scene, psf_scene, track_middle};
use crate::beamform::{
    make_grid, BackprojectOptions, Backprojector, BeamformResult, RayModel, VoxelGrid, VoxelVolume,
};
use crate::error::{Error, Result};
use crate::geom::Vec3;
use crate::imageproc::{depth_gain, median_background, normalize, MedianKernel};
use crate::scene::{Scenario, SedimentProperties};
use crate::synth::{make_waveform, matched_filter, simulate_survey_with};

/// Simulates the survey of `s`, compresses every record and backprojects
/// it into `grid` as it arrives.
pub(crate) fn image_survey(
    s: &Scenario,
    grid: &VoxelGrid,
    opts: BackprojectOptions,
) -> Result<BeamformResult> {
    let w = make_waveform(&s.waveform)?;
    let mut bp = Backprojector::new(grid, s, opts);
    simulate_survey_with(s, |rec| bp.add_ping(&matched_filter(&rec, &w)?))?;
    Ok(bp.finish())
}

/// Mean intensity of every depth plane, `(z, mean |v|^2)`.
pub fn depth_profile(v: &VoxelVolume) -> Vec<(f64, f64)> {
    let g = v.grid;
    let inten = v.intensity();
    let mut acc = vec![0.0; g.dims[2]];
    for (idx, x) in inten.iter().enumerate() {
        acc[idx % g.dims[2]] += x;
    }
    let per = (g.dims[0] * g.dims[1]) as f64;
    acc.iter()
        .enumerate()
        .map(|(k, a)| (g.axis_coordinate(2, k), a / per))
        .collect()
}

/// Depth of the strongest sample of `profile` in `[lo, hi]`, refined by a
/// parabola through its neighbors.
fn ridge_depth(profile: &[(f64, f64)], lo: f64, hi: f64) -> Option<f64> {
    let (k, _) = profile
        .iter()
        .enumerate()
        .filter(|(_, (z, _))| *z >= lo && *z <= hi)
        .max_by(|a, b| a.1 .1.total_cmp(&b.1 .1))?;
    let z = profile[k].0;
    if k == 0 || k + 1 >= profile.len() {
        return Some(z);
    }
    let (a, b, c) = (profile[k - 1].1, profile[k].1, profile[k + 1].1);
    let den = a - 2.0 * b + c;
    let shift = if den.abs() > 0.0 {
        0.5 * (a - c) / den
    } else {
        0.0
    };
    Some(z + shift.clamp(-0.5, 0.5) * (profile[1].0 - profile[0].0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultipathConfig {
    pub ping_count: usize,
    pub interface_density: f64,
    pub max_incidence_deg: f64,
    pub seed: u64,
    /// Half-widths of the imaged box around the track middle, m.
    pub half_along: f64,
    pub half_cross: f64,
    pub max_depth: f64,
    pub spacing: f64,
}

impl Default for MultipathConfig {
    fn default() -> Self {
        MultipathConfig {
            ping_count: 11,
            interface_density: 40.0,
            max_incidence_deg: 45.0,
            seed: 0,
            half_along: 0.25,
            half_cross: 0.2,
            max_depth: 3.5,
            spacing: 0.02,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultipathOutcome {
    /// Apparent depth of the strongest return in 0.3-0.9 m, m.
    pub first_ridge: f64,
    /// Apparent depth of the strongest return in 2.5-3.4 m, m.
    pub second_ridge: f64,
    /// Nadir apparent depths from the extra unfolded path length.
    pub predicted_first: f64,
    pub predicted_second: f64,
    pub profile: Vec<(f64, f64)>,
}

/// Images a flat, sub-bottom-free seabed and locates the surface-multiple
/// ridges in the mean depth profile.
pub fn multipath_experiment(cfg: &MultipathConfig) -> Result<MultipathOutcome> {
    let mut s = multipath_scene(cfg.ping_count, cfg.interface_density, cfg.max_incidence_deg);
    s.rng_seed = cfg.seed;
    let x = track_middle(&s);
    let grid = make_grid(
        Vec3::new(x - cfg.half_along, s.track.start[1] - cfg.half_cross, 0.0),
        [2.0 * cfg.half_along, 2.0 * cfg.half_cross, cfg.max_depth],
        cfg.spacing,
    )?;
    let r = image_survey(&s, &grid, BackprojectOptions::default())?;
    let profile = depth_profile(&r.volume);
    let missing = || Error::Numerical("multipath search window outside the image".into());
    let first_ridge = ridge_depth(&profile, 0.3, 0.9).ok_or_else(missing)?;
    let second_ridge = ridge_depth(&profile, 2.5, 3.4).ok_or_else(missing)?;
    let g = &s.geometry;
    let ratio = s.sediment.sound_speed / s.water.sound_speed;
    // One surface bounce on one leg adds twice the sensor-to-surface gap;
    // a bottom-surface pair on one leg adds twice the water depth.
    let predicted_first = (g.water_depth - g.sensor_altitude) * ratio;
    let predicted_second = g.water_depth * ratio;
    Ok(MultipathOutcome {
        first_ridge,
        second_ridge,
        predicted_first,
        predicted_second,
        profile,
    })
}

/// Ratio in dB between the intensity peak at `peak` and the strongest
/// voxel outside its main lobe within `half` voxels on every axis. The
/// main lobe is every voxel reachable from the peak by steps that never
/// increase intensity.
pub fn highest_sidelobe_db(v: &VoxelVolume, peak: [usize; 3], half: usize) -> f64 {
    let g = v.grid;
    let inten = v.intensity();
    let lo: Vec<usize> = (0..3).map(|a| peak[a].saturating_sub(half)).collect();
    let hi: Vec<usize> = (0..3)
        .map(|a| (peak[a] + half).min(g.dims[a] - 1))
        .collect();
    let inside = |p: [usize; 3]| (0..3).all(|a| p[a] >= lo[a] && p[a] <= hi[a]);
    let mut lobe = vec![false; g.len()];
    let mut queue = VecDeque::from([peak]);
    lobe[g.index(peak[0], peak[1], peak[2])] = true;
    while let Some(p) = queue.pop_front() {
        let here = inten[g.index(p[0], p[1], p[2])];
        for d in 0..27usize {
            let off = [d / 9, (d / 3) % 3, d % 3];
            if off == [1, 1, 1] {
                continue;
            }
            let mut q = [0usize; 3];
            let mut ok = true;
            for a in 0..3 {
                let c = p[a] as isize + off[a] as isize - 1;
                if c < 0 || c as usize >= g.dims[a] {
                    ok = false;
                    break;
                }
                q[a] = c as usize;
            }
            if !ok || !inside(q) {
                continue;
            }
            let qi = g.index(q[0], q[1], q[2]);
            if !lobe[qi] && inten[qi] <= here {
                lobe[qi] = true;
                queue.push_back(q);
            }
        }
    }
    let mut side: f64 = 0.0;
    for i in lo[0]..=hi[0] {
        for j in lo[1]..=hi[1] {
            for k in lo[2]..=hi[2] {
                let idx = g.index(i, j, k);
                if !lobe[idx] {
                    side = side.max(inten[idx]);
                }
            }
        }
    }
    let top = inten[g.index(peak[0], peak[1], peak[2])];
    if side > 0.0 {
        10.0 * (top / side).log10()
    } else {
        f64::INFINITY
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsfConfig {
    pub ping_count: usize,
    pub spacing: f64,
    /// Sidelobe search half-width, voxels.
    pub neighborhood: usize,
    /// Depth of the in-water point, m (negative).
    pub water_depth: f64,
    /// Depth of the buried point, m.
    pub burial_depth: f64,
}

impl Default for PsfConfig {
    fn default() -> Self {
        PsfConfig {
            ping_count: 11,
            spacing: 0.02,
            neighborhood: 20,
            water_depth: -0.6,
            burial_depth: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsfOutcome {
    /// Largest per-axis distance between the peak and the true voxel.
    pub water_offset_voxels: f64,
    pub sidelobe_db: f64,
    pub refracted_offset_voxels: f64,
    pub straight_offset_voxels: f64,
    /// Straight-ray peak depth minus true depth, m.
    pub straight_depth_shift: f64,
}

fn offset_voxels(r: &BeamformResult, truth: Vec3) -> Result<(f64, [usize; 3])> {
    let g = r.volume.grid;
    let (peak, _) = r
        .volume
        .peak()
        .ok_or_else(|| Error::Numerical("empty image".into()))?;
    let t = g
        .locate(truth)
        .ok_or_else(|| Error::GridMismatch("target outside the image".into()))?;
    let d = (0..3)
        .map(|a| (peak[a] as f64 - t[a] as f64).abs())
        .fold(0.0, f64::max);
    Ok((d, peak))
}

fn cube(center: Vec3, half: [f64; 3], spacing: f64) -> Result<VoxelGrid> {
    make_grid(
        Vec3::new(center.x - half[0], center.y - half[1], center.z - half[2]),
        [2.0 * half[0], 2.0 * half[1], 2.0 * half[2]],
        spacing,
    )
}

/// Point responses of an in-water and a buried point target.
pub fn psf_experiment(cfg: &PsfConfig) -> Result<PsfOutcome> {
    let h = cfg.spacing;
    let probe = psf_scene(Vec3::new(0.0, 0.0, 0.0), cfg.ping_count);
    let x = (track_middle(&probe) / h).round() * h;
    let wet = Vec3::new(x, 2.0 * h, cfg.water_depth);
    let s = psf_scene(wet, cfg.ping_count);
    let half = cfg.neighborhood as f64 * h;
    let grid = cube(wet, [half; 3], h)?;
    let r = image_survey(&s, &grid, BackprojectOptions::default())?;
    let (water_offset_voxels, peak) = offset_voxels(&r, wet)?;
    let sidelobe_db = highest_sidelobe_db(&r.volume, peak, cfg.neighborhood);

    let buried = Vec3::new(x, 0.0, cfg.burial_depth);
    let s = psf_scene(buried, cfg.ping_count);
    let grid = cube(buried, [0.2, 0.2, 0.5], h)?;
    let bent = image_survey(&s, &grid, BackprojectOptions::default())?;
    let (refracted_offset_voxels, _) = offset_voxels(&bent, buried)?;
    let straight = BackprojectOptions {
        rays: RayModel::Straight {
            speed: s.water.sound_speed,
        },
        ..Default::default()
    };
    let flat = image_survey(&s, &grid, straight)?;
    let (straight_offset_voxels, sp) = offset_voxels(&flat, buried)?;
    let straight_depth_shift = grid.axis_coordinate(2, sp[2]) - buried.z;
    Ok(PsfOutcome {
        water_offset_voxels,
        sidelobe_db,
        refracted_offset_voxels,
        straight_offset_voxels,
        straight_depth_shift,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContrastConfig {
    pub seed: u64,
    pub ping_count: usize,
    pub interface_density: f64,
    pub volume_density: f64,
    pub volume_depth: f64,
    pub max_incidence_deg: f64,
    pub max_order: u32,
    pub radius: f64,
    pub length: f64,
    pub burial_depth: f64,
    pub gain_db_per_m: f64,
    pub spacing: f64,
}

impl Default for ContrastConfig {
    fn default() -> Self {
        ContrastConfig {
            seed: 0,
            ping_count: 21,
            interface_density: 60.0,
            volume_density: 200.0,
            volume_depth: 1.6,
            max_incidence_deg: 40.0,
            max_order: 1,
            radius: 0.1575,
            length: 0.61,
            burial_depth: 1.0,
            gain_db_per_m: 10.0,
            spacing: 0.02,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContrastOutcome {
    /// Normalized level of the strongest voxel near the target, dB.
    pub contrast_db: f64,
    pub peak: Vec3,
}

/// Images the buried cylinder, applies depth gain and median-background
/// normalization, and reports the target peak above background.
pub fn contrast_experiment(cfg: &ContrastConfig, silt: bool) -> Result<ContrastOutcome> {
    let sediment = if silt {
        SedimentProperties::very_fine_silt()
    } else {
        SedimentProperties::medium_sand()
    };
    let s = contrast_scene(sediment, cfg);
    let t = s.targets[0].position;
    let kernel = MedianKernel::default();
    // Wide enough for the along-track median window, plus a margin.
    let half = [0.5 * kernel.along + 0.1, 0.3, 0.5];
    let grid = cube(t, half, cfg.spacing)?;
    let r = image_survey(&s, &grid, BackprojectOptions::default())?;
    let gained = depth_gain(&r.volume, cfg.gain_db_per_m);
    let bg = median_background(&gained, kernel)?;
    let n = normalize(&gained, &bg)?;
    let vals = n
        .real_values()
        .ok_or_else(|| Error::Numerical("normalized volume is not real".into()))?;
    let g = n.grid;
    let mut best = (f64::NEG_INFINITY, t);
    for (idx, v) in vals.iter().enumerate() {
        let [i, j, k] = g.unindex(idx);
        let p = g.world(i, j, k);
        let near = (p.x - t.x).abs() <= 0.2
            && (p.y - t.y).abs() <= 0.5 * cfg.length
            && p.z >= t.z - cfg.radius - 0.1
            && p.z <= t.z + 0.1;
        if near && *v > best.0 {
            best = (*v, p);
        }
    }
    Ok(ContrastOutcome {
        contrast_db: best.0,
        peak: best.1,
    })
}
