//! Multi-fold colourings of the plane distance graphs `G[a,b]`: points are
//! adjacent when their distance lies in the closed interval `[a, b]`.
//!
//! Colourings are unions of hexagon grid layers with periodic colour
//! tables. They can be verified exactly over one period, sampled, saved to
//! JSON spec files, and used as transmitter schedules.

pub mod bounds;
pub mod constructions;
pub mod geometry;
pub mod verifier;
pub mod scheduler;
pub mod specfile;
pub mod tables;
