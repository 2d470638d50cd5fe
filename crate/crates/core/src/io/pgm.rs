//! Binary graymaps with a text sidecar describing the axes.

use std::fmt::Write as _;
use std::path::Path;

use super::binary::write_all;
use super::volume::sidecar_path;
use crate::error::Result;
use crate::imageproc::{ImageProduct, ProductKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PgmDepth {
    #[default]
    Eight,
    Sixteen,
}

impl PgmDepth {
    fn max(self) -> u32 {
        match self {
            PgmDepth::Eight => 255,
            PgmDepth::Sixteen => 65535,
        }
    }
}

/// Writes an image whose values lie in [0, 1] (values outside are
/// clipped) as a binary PGM, plus `<path>.txt` with the world axes.
pub fn write_image(path: &Path, img: &ImageProduct, depth: PgmDepth) -> Result<()> {
    let max = depth.max();
    let mut bytes = format!("P5\n{} {}\n{}\n", img.width(), img.height(), max).into_bytes();
    for &v in &img.data {
        let q = (v.clamp(0.0, 1.0) * max as f64).round() as u32;
        match depth {
            PgmDepth::Eight => bytes.push(q as u8),
            PgmDepth::Sixteen => bytes.extend_from_slice(&(q as u16).to_be_bytes()),
        }
    }
    write_all(path, &bytes)?;
    let mut s = String::new();
    let _ = writeln!(s, "product={}", img.label());
    match img.kind {
        ProductKind::Mip => {
            let _ = writeln!(s, "projected_axis={}", img.axis.name());
        }
        ProductKind::Slice { index, coordinate } => {
            let _ = writeln!(s, "slice_axis={}", img.axis.name());
            let _ = writeln!(s, "slice_index={index}");
            let _ = writeln!(s, "slice_coordinate_m={coordinate}");
        }
    }
    for (name, a) in [("rows", img.rows), ("cols", img.cols)] {
        let _ = writeln!(
            s,
            "{name}_axis={} origin_m={} spacing_m={} count={}",
            a.axis.name(),
            a.origin,
            a.spacing,
            a.count
        );
    }
    let _ = writeln!(s, "value_range=0 1 maps to 0 {max}");
    write_all(&sidecar_path(path), s.as_bytes())
}
