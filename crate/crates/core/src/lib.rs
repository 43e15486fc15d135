//! Bidirectional motion planning on spheres and topological complexity bounds.

pub mod geometry;
pub mod bounds;
pub mod cli;
pub mod cohomology;
pub mod planners;
pub mod verify;
