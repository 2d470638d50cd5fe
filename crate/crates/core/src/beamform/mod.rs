//! 3D time-domain backprojection onto a voxel grid.

mod backproject;
mod grid;
mod traveltime;

pub use backproject::{
    backproject, BackprojectOptions, Backprojector, BeamformResult, Interpolation, Normalization,
};
pub use grid::{
    default_grid, make_grid, Provenance, VolumeData, VoxelGrid, VoxelVolume, DEFAULT_EXTENT,
    DEFAULT_SPACING,
};
pub use traveltime::{
    exact_time, is_water_voxel, travel_time_table, CachePolicy, DepthTable, RayModel,
    TravelTimeTable,
};

#[cfg(test)]
mod tests;
