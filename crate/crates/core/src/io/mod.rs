//! File formats: ping records, volumes, graymaps, scatterer dumps and run
//! manifests. Binary formats are little-endian.

mod binary;
mod manifest;
mod pgm;
mod ping;
mod volume;

pub use manifest::{read_index, write_index, IndexEntry, RunManifest};
pub use pgm::{write_image, PgmDepth};
pub use ping::{encode_ping, ping_file_name, read_ping, write_ping, PING_MAGIC, PING_VERSION};
pub use volume::{
    encode_volume, read_volume, sidecar_path, write_volume, VOLUME_MAGIC, VOLUME_VERSION,
};

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::scatterfield::{ScattererField, ScattererKind};

/// Writes a scatterer field as a one-line text header followed by records of
/// seven little-endian 32-bit floats: x, y, z, kind (0 interface, 1 volume),
/// patch measure, and the real and imaginary stochastic factor.
pub fn write_scatterers(path: &Path, field: &ScattererField) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    let mut bytes = format!("count={} seed={}\n", field.len(), field.seed).into_bytes();
    for p in &field.scatterers {
        let kind = match p.kind {
            ScattererKind::Interface => 0.0,
            ScattererKind::Volume => 1.0,
        };
        for v in [
            p.position.x,
            p.position.y,
            p.position.z,
            kind,
            p.patch_measure,
            p.stochastic_factor.re,
            p.stochastic_factor.im,
        ] {
            bytes.extend_from_slice(&(v as f32).to_le_bytes());
        }
    }
    w.write_all(&bytes)
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beamform::{make_grid, Provenance, VolumeData, VoxelVolume};
    use crate::geom::{Pose, Vec3};
    use crate::imageproc::{mip, Axis};
    use crate::synth::{PingRecord, Series};
    use num_complex::Complex64;

    fn record(series: Series, n: usize) -> PingRecord {
        PingRecord {
            ping_index: 12,
            location_index: 2,
            tx_id: 2,
            pose: Pose::at(Vec3::new(0.5, -0.1, -2.0)),
            sample_rate: 200e3,
            start_time: 1.25e-3,
            sample_count: n,
            seed: 0xDEAD_BEEF,
            series,
        }
    }

    #[test]
    fn ping_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let raw = record(Series::Real(vec![vec![0.5, -1.25, 3.0]; 2]), 3);
        let path = dir.path().join(ping_file_name(12));
        write_ping(&path, &raw).unwrap();
        assert_eq!(read_ping(&path).unwrap(), raw);
        let c = record(
            Series::Analytic(vec![vec![Complex64::new(1.5, -2.0); 4]; 3]),
            4,
        );
        write_ping(&path, &c).unwrap();
        assert_eq!(read_ping(&path).unwrap(), c);
    }

    #[test]
    fn corrupt_ping_names_the_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.sbp");
        let raw = record(Series::Real(vec![vec![0.5; 8]; 2]), 8);
        write_ping(&path, &raw).unwrap();
        let bytes = std::fs::read(&path).unwrap();
        std::fs::write(&path, &bytes[..bytes.len() - 3]).unwrap();
        let err = read_ping(&path).unwrap_err();
        assert!(matches!(err, Error::Format { .. }));
        assert!(err.to_string().contains("bad.sbp"));
        std::fs::write(&path, b"garbage").unwrap();
        assert!(read_ping(&path).is_err());
    }

    #[test]
    fn volume_round_trip_with_sidecar() {
        let dir = tempfile::tempdir().unwrap();
        let g = make_grid(Vec3::new(1.0, -1.0, 0.0), [0.06, 0.04, 0.1], 0.02).unwrap();
        let v = VoxelVolume {
            grid: g,
            data: VolumeData::Complex(
                (0..g.len())
                    .map(|i| Complex64::new(i as f64, -0.5 * i as f64))
                    .collect(),
            ),
            provenance: Provenance {
                scenario_hash: 77,
                ping_range: Some((0, 9)),
            },
        };
        let path = dir.path().join("v.sbv");
        write_volume(&path, &v).unwrap();
        assert_eq!(read_volume(&path).unwrap(), v);
        let side = std::fs::read_to_string(sidecar_path(&path)).unwrap();
        assert!(side.contains("dims_xyz=3 2 5"));
        let r = VoxelVolume::real(g, vec![0.25; g.len()], Provenance::default());
        write_volume(&path, &r).unwrap();
        assert_eq!(read_volume(&path).unwrap(), r);
    }

    #[test]
    fn graymap_header_and_size() {
        let dir = tempfile::tempdir().unwrap();
        let g = make_grid(Vec3::ZERO, [0.1, 0.06, 0.04], 0.02).unwrap();
        let v = VoxelVolume::real(g, vec![0.5; g.len()], Provenance::default());
        let img = mip(&v, Axis::Z);
        let path = dir.path().join("m.pgm");
        write_image(&path, &img, PgmDepth::Eight).unwrap();
        let b = std::fs::read(&path).unwrap();
        let header = b"P5\n5 3\n255\n";
        assert_eq!(&b[..header.len()], header);
        assert_eq!(b.len(), header.len() + 15);
        assert_eq!(b[header.len()], 128);
        write_image(&path, &img, PgmDepth::Sixteen).unwrap();
        assert_eq!(
            std::fs::read(&path).unwrap().len(),
            b"P5\n5 3\n65535\n".len() + 30
        );
        assert!(sidecar_path(&path).exists());
    }

    #[test]
    fn index_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let e = vec![IndexEntry {
            file: ping_file_name(0),
            ping_index: 0,
            location_index: 0,
            tx_id: 0,
            seed: 5,
        }];
        let path = dir.path().join("index.txt");
        write_index(&path, 1, &e).unwrap();
        assert_eq!(read_index(&path).unwrap(), e);
    }

    #[test]
    fn scatterer_dump_size() {
        let dir = tempfile::tempdir().unwrap();
        let extent = crate::scatterfield::Bounds::new(Vec3::ZERO, Vec3::new(1.0, 1.0, 0.0));
        let field = crate::scatterfield::ScattererField::empty(extent, 3);
        let path = dir.path().join("f.bin");
        write_scatterers(&path, &field).unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), b"count=0 seed=3\n");
    }
}
