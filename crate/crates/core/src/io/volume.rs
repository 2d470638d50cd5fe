//! Volume files with a text sidecar.
//!
//! Layout: magic (8 bytes), version u32, dims 3 x u64 (x, y, z), origin
//! 3 x f64, spacing 3 x f64, value kind u8 (0 complex, 1 real), scenario
//! hash u64, ping range flag u8 then first and last u64, then the values
//! with z varying fastest as f32 (re, im) pairs or f32 reals.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use num_complex::Complex64;

use super::binary::{read_all, write_all, Decoder, Encoder};
use crate::beamform::{Provenance, VolumeData, VoxelGrid, VoxelVolume};
use crate::error::Result;
use crate::geom::Vec3;

pub const VOLUME_MAGIC: &[u8; 8] = b"SBSVOL\0\0";
pub const VOLUME_VERSION: u32 = 1;

/// `volume.sbv` -> `volume.sbv.txt`
pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".txt");
    PathBuf::from(s)
}

fn sidecar(v: &VoxelVolume) -> String {
    let g = &v.grid;
    let mut s = String::new();
    let kind = if v.is_complex() { "complex" } else { "real" };
    let _ = writeln!(s, "format=volume");
    let _ = writeln!(s, "version={VOLUME_VERSION}");
    let _ = writeln!(s, "dims_xyz={} {} {}", g.dims[0], g.dims[1], g.dims[2]);
    let _ = writeln!(s, "origin_m={} {} {}", g.origin.x, g.origin.y, g.origin.z);
    let _ = writeln!(
        s,
        "spacing_m={} {} {}",
        g.spacing[0], g.spacing[1], g.spacing[2]
    );
    let _ = writeln!(s, "value_kind={kind}");
    let _ = writeln!(s, "layout=z_fastest f32_le");
    let _ = writeln!(s, "scenario_hash={:016x}", v.provenance.scenario_hash);
    match v.provenance.ping_range {
        Some((a, b)) => {
            let _ = writeln!(s, "ping_range={a} {b}");
        }
        None => {
            let _ = writeln!(s, "ping_range=none");
        }
    }
    s
}

/// Serialized binary volume, without the sidecar.
pub fn encode_volume(v: &VoxelVolume) -> Vec<u8> {
    let g = &v.grid;
    let mut e = Encoder::default();
    e.raw(VOLUME_MAGIC);
    e.u32(VOLUME_VERSION);
    for d in g.dims {
        e.u64(d as u64);
    }
    for o in [g.origin.x, g.origin.y, g.origin.z] {
        e.f64(o);
    }
    for s in g.spacing {
        e.f64(s);
    }
    e.u8(if v.is_complex() { 0 } else { 1 });
    e.u64(v.provenance.scenario_hash);
    match v.provenance.ping_range {
        Some((a, b)) => {
            e.u8(1);
            e.u64(a as u64);
            e.u64(b as u64);
        }
        None => {
            e.u8(0);
            e.u64(0);
            e.u64(0);
        }
    }
    match &v.data {
        VolumeData::Complex(x) => {
            for c in x {
                e.f32(c.re as f32);
                e.f32(c.im as f32);
            }
        }
        VolumeData::Real(x) => {
            for r in x {
                e.f32(*r as f32);
            }
        }
    }
    e.bytes
}

/// Writes the binary volume and its `.txt` sidecar.
pub fn write_volume(path: &Path, v: &VoxelVolume) -> Result<()> {
    write_all(path, &encode_volume(v))?;
    write_all(&sidecar_path(path), sidecar(v).as_bytes())
}

pub fn read_volume(path: &Path) -> Result<VoxelVolume> {
    let bytes = read_all(path)?;
    let mut d = Decoder::new(&bytes, path);
    if d.take(8)? != VOLUME_MAGIC {
        return Err(d.error("not a volume file (bad magic)"));
    }
    let version = d.u32()?;
    if version != VOLUME_VERSION {
        return Err(d.error(format!("unsupported volume version {version}")));
    }
    let dims = [
        d.count("dimension")?,
        d.count("dimension")?,
        d.count("dimension")?,
    ];
    let origin = Vec3::new(d.f64()?, d.f64()?, d.f64()?);
    let spacing = [d.f64()?, d.f64()?, d.f64()?];
    if spacing.iter().any(|s| !(*s > 0.0 && s.is_finite())) {
        return Err(d.error("spacing must be positive"));
    }
    let kind = d.u8()?;
    let scenario_hash = d.u64()?;
    let has_range = d.u8()?;
    let (a, b) = (d.count("ping index")?, d.count("ping index")?);
    let grid = VoxelGrid {
        origin,
        spacing,
        dims,
    };
    let n = dims
        .iter()
        .try_fold(1usize, |acc, &x| acc.checked_mul(x))
        .filter(|&n| n <= bytes.len())
        .ok_or_else(|| d.error("implausible dimensions"))?;
    let data = match kind {
        0 => VolumeData::Complex(
            (0..n)
                .map(|_| Ok(Complex64::new(d.f32()?.into(), d.f32()?.into())))
                .collect::<Result<_>>()?,
        ),
        1 => VolumeData::Real(
            (0..n)
                .map(|_| d.f32().map(f64::from))
                .collect::<Result<_>>()?,
        ),
        k => return Err(d.error(format!("unknown value kind {k}"))),
    };
    d.finish()?;
    Ok(VoxelVolume {
        grid,
        data,
        provenance: Provenance {
            scenario_hash,
            ping_range: (has_range != 0).then_some((a, b)),
        },
    })
}
