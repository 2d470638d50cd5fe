//! Worker-count equivalence of simulation and beamforming output bytes.

use super::imaging::image_survey;
use super::scenes::{determinism_scene, track_middle};
use crate::beamform::{make_grid, BackprojectOptions};
use crate::error::{Error, Result};
use crate::geom::Vec3;
use crate::io::{encode_ping, encode_volume};
use crate::synth::simulate_survey_with;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeterminismConfig {
    /// Worker counts whose outputs are compared.
    pub workers: [usize; 2],
}

impl Default for DeterminismConfig {
    fn default() -> Self {
        DeterminismConfig { workers: [1, 8] }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DeterminismOutcome {
    pub ping_files: usize,
    pub identical_files: usize,
    pub pings_identical: bool,
    pub volume_identical: bool,
}

fn run(workers: usize) -> Result<(Vec<Vec<u8>>, Vec<u8>)> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Numerical(format!("thread pool: {e}")))?;
    pool.install(|| {
        let s = determinism_scene();
        let mut files = Vec::new();
        simulate_survey_with(&s, |rec| {
            files.push(encode_ping(&rec));
            Ok(())
        })?;
        let x = track_middle(&s);
        let grid = make_grid(Vec3::new(x - 0.2, -0.2, -0.1), [0.4, 0.4, 0.8], 0.02)?;
        let r = image_survey(&s, &grid, BackprojectOptions::default())?;
        Ok((files, encode_volume(&r.volume)))
    })
}

/// Simulates and beamforms the same small scene with two worker counts
/// and compares the serialized outputs byte for byte.
pub fn determinism_experiment(cfg: &DeterminismConfig) -> Result<DeterminismOutcome> {
    let (pa, va) = run(cfg.workers[0])?;
    let (pb, vb) = run(cfg.workers[1])?;
    let identical_files = pa.iter().zip(&pb).filter(|(a, b)| a == b).count();
    Ok(DeterminismOutcome {
        ping_files: pa.len(),
        identical_files,
        pings_identical: pa.len() == pb.len() && identical_files == pa.len(),
        volume_identical: va == vb,
    })
}
