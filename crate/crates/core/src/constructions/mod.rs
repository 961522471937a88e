//! Explicit j-fold colourings of `G[a,b]` built from hexagon grids.
//!
//! Colour ids are dense in `[0, k)`. Constructions that name colours by a
//! pair `(row, column)` encode them as `row * column_period + column`.

pub(crate) mod colouring;
mod density;
mod fixed;
mod lattice;

pub use colouring::{
    ColourMap, ColourSet, ColouringError, Interval, Layer, PeriodicColouring, Provenance,
};
pub use density::construct_density;
pub use fixed::{classic_seven, fold2_twelve, fold3_sixteen, fold7_thirtyseven, FOLD7_STENCIL};
pub use lattice::{
    construct_2nm, construct_nm, construct_nm_with_periods, nm_colour_count, nm_periods,
    two_nm_colour_count, two_nm_periods,
};

/// Ceiling that ignores float noise just above an integer.
pub(crate) fn ceil_tol(v: f64) -> u64 {
    (v - 1e-9).ceil().max(0.0) as u64
}
