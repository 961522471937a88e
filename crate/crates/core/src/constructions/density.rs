//! Colouring from the dense periodic set: the width-`s/n` hexagon tiling,
//! with colour class `(q mod n, r mod n)` made of the cells that are fully
//! inside the copies of `A` centred on the spacing-`s` lattice.

use super::colouring::{ColourMap, ColouringError, Interval, Layer, PeriodicColouring, Provenance};
use super::lattice::rescale;
use crate::bounds::{density_tiling, BoundsError};

/// `|H|`-fold colouring of `G[a,b]` with `n^2` colours, where `H` is the
/// set of tiling cells contained in `A` (for `b/a`).
pub fn construct_density(interval: Interval, n: u32) -> Result<PeriodicColouring, ColouringError> {
    let tiling = density_tiling(interval.ratio(), n).map_err(|e| match e {
        BoundsError::BadB(b) => ColouringError::BadInterval(1.0, b),
        BoundsError::Infeasible { n, min } => ColouringError::Infeasible { n, min },
    })?;
    let n_i = n as i64;
    // Cell (q, r) takes colour (q, r) mod n from each copy of A whose
    // contained cells include it, i.e. the copies centred at the cell
    // minus each contained offset.
    let stencil: Vec<(i64, i64)> = tiling.cells.iter().map(|c| (c.q, c.r)).collect();
    let map = ColourMap::stencil_from_fn(n, n, stencil, |q, r| {
        (q.rem_euclid(n_i) * n_i + r.rem_euclid(n_i)) as u32
    });
    let k = n.checked_mul(n).ok_or_else(|| ColouringError::Parameter("too many colours".into()))?;
    let prov = Provenance::new("density").with("b", interval.ratio()).with("n", n);
    let unit = PeriodicColouring::new(Interval::unit(interval.ratio())?, k, vec![Layer::new(tiling.grid, map)], prov)?;
    rescale(unit, interval)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::count_contained_hexagons;

    #[test]
    fn fold_equals_contained_count() {
        for n in [5u32, 8, 12] {
            let c = construct_density(Interval::unit(1.0).unwrap(), n).unwrap();
            let h = count_contained_hexagons(1.0, n).unwrap();
            assert_eq!(c.j(), h.h_n);
            assert_eq!(c.k(), n * n);
        }
    }

    #[test]
    fn too_small_n_rejected() {
        assert!(matches!(
            construct_density(Interval::unit(1.0).unwrap(), 3),
            Err(ColouringError::Infeasible { .. })
        ));
    }
}
