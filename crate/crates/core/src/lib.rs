//! Simulation of element-level sub-bottom sonar time series over layered
//! sediment scenes, 3D time-domain backprojection, and volumetric image
//! post-processing.
//!
//! Coordinates: x along-track, y cross-track, z positive downward with the
//! sediment-water interface at z = 0 and the sea surface at
//! z = -water_depth.

pub mod beamform;
pub mod cli;
pub mod error;
pub mod geom;
pub mod imageproc;
pub mod io;
pub mod propagation;
pub mod scatterfield;
pub mod scene;
pub mod synth;
pub mod targetmodel;
pub mod validate;

pub use error::{Error, Result};
