//! One binary file per transmit event.
//!
//! Layout: magic (8 bytes), version u32, ping index u64, location index
//! u64, tx id u32, pose (x, y, z, roll, pitch, yaw) 6 x f64, sample rate
//! f64, start time f64, seed u64, series kind u8 (0 raw, 1 analytic),
//! receiver count u32, sample count u64, then per receiver the samples as
//! f32 (raw) or f32 (re, im) pairs (analytic).

use std::path::Path;

use num_complex::Complex64;

use super::binary::{read_all, write_all, Decoder, Encoder};
use crate::error::Result;
use crate::geom::Pose;
use crate::synth::{PingRecord, Series};

pub const PING_MAGIC: &[u8; 8] = b"SBSPING\0";
pub const PING_VERSION: u32 = 1;

/// `ping_000042.sbp`
pub fn ping_file_name(ping_index: usize) -> String {
    format!("ping_{ping_index:06}.sbp")
}

/// Serialized ping file contents.
pub fn encode_ping(rec: &PingRecord) -> Vec<u8> {
    let mut e = Encoder::default();
    e.raw(PING_MAGIC);
    e.u32(PING_VERSION);
    e.u64(rec.ping_index as u64);
    e.u64(rec.location_index as u64);
    e.u32(rec.tx_id as u32);
    for v in rec.pose.to_array() {
        e.f64(v);
    }
    e.f64(rec.sample_rate);
    e.f64(rec.start_time);
    e.u64(rec.seed);
    match &rec.series {
        Series::Real(s) => {
            e.u8(0);
            e.u32(s.len() as u32);
            e.u64(rec.sample_count as u64);
            for x in s.iter().flatten() {
                e.f32(*x as f32);
            }
        }
        Series::Analytic(s) => {
            e.u8(1);
            e.u32(s.len() as u32);
            e.u64(rec.sample_count as u64);
            for c in s.iter().flatten() {
                e.f32(c.re as f32);
                e.f32(c.im as f32);
            }
        }
    }
    e.bytes
}

pub fn write_ping(path: &Path, rec: &PingRecord) -> Result<()> {
    write_all(path, &encode_ping(rec))
}

pub fn read_ping(path: &Path) -> Result<PingRecord> {
    let bytes = read_all(path)?;
    let mut d = Decoder::new(&bytes, path);
    if d.take(8)? != PING_MAGIC {
        return Err(d.error("not a ping record (bad magic)"));
    }
    let version = d.u32()?;
    if version != PING_VERSION {
        return Err(d.error(format!("unsupported ping record version {version}")));
    }
    let ping_index = d.count("ping index")?;
    let location_index = d.count("location index")?;
    let tx_id = d.u32()? as usize;
    let mut pose = [0.0; 6];
    for v in pose.iter_mut() {
        *v = d.f64()?;
    }
    let sample_rate = d.f64()?;
    let start_time = d.f64()?;
    let seed = d.u64()?;
    let kind = d.u8()?;
    let rx = d.u32()? as usize;
    let n = d.count("sample count")?;
    let series = match kind {
        0 => Series::Real(
            (0..rx)
                .map(|_| (0..n).map(|_| d.f32().map(f64::from)).collect())
                .collect::<Result<_>>()?,
        ),
        1 => Series::Analytic(
            (0..rx)
                .map(|_| {
                    (0..n)
                        .map(|_| Ok(Complex64::new(d.f32()?.into(), d.f32()?.into())))
                        .collect()
                })
                .collect::<Result<_>>()?,
        ),
        k => return Err(d.error(format!("unknown series kind {k}"))),
    };
    d.finish()?;
    if !(sample_rate > 0.0 && sample_rate.is_finite()) {
        return Err(d.error(format!("invalid sample rate {sample_rate}")));
    }
    Ok(PingRecord {
        ping_index,
        location_index,
        tx_id,
        pose: Pose::from_array(pose),
        sample_rate,
        start_time,
        sample_count: n,
        seed,
        series,
    })
}
