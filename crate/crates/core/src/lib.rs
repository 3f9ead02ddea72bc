//! Small ε-nets for disk ranges over planar point sets.
//!
//! The builder samples the input, triangulates the sample, and refines every
//! Delaunay edge whose pair of empty disks still holds at least `εn` points.
//! An independent brute-force oracle decides whether a candidate set is an
//! ε-net.

pub mod csstats;
pub mod dataio;
pub mod delaunay;
pub mod depth;
pub mod eps;
pub mod error;
pub mod geom;
pub mod netbuilder;
pub mod oracle;
pub mod rng;

pub use error::{Error, Result};
