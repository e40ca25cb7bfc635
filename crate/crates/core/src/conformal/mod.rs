//! Numerical Riemann maps of polygonal domains and the conformal rounding
//! retraction for non-convex configurations.

mod disk_map;
mod pipeline;
mod shrink;

pub use disk_map::{
    build_disk_map, build_disk_map_with, map_forward, map_inverse, DiskMap, BOUNDARY_TOL, TAU_E,
};
pub use pipeline::{
    conformal_retract, conformal_retract_detailed, ConformalRetraction, StageDiagnostics,
    FOLLOWER_BUDGET,
};
pub use shrink::{
    boundary_angles, rounding_h, shrink_phi, shrink_supremum, solve_shrink_parameter,
    ShrinkParameter, BOUNDARY_SAMPLES, TAU_T, TIME_GRID,
};
