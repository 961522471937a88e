//! The special-purpose colourings of the unit-distance graph `G[1,1]`.

use super::colouring::{ColourMap, Interval, Layer, PeriodicColouring, Provenance};
use crate::geometry::{HexGrid, Point};

const SQRT3: f64 = 1.732_050_807_568_877_2;

fn unit_interval() -> Interval {
    Interval::unit(1.0).expect("valid")
}

fn half_grid(offset: Point) -> HexGrid {
    HexGrid::new(0.5, offset).expect("valid grid")
}

/// The classic 7-colouring: diameter-1 hexagons, same-coloured cells on the
/// index-7 sublattice spanned by axial `(2, 1)` and `(-1, 3)`.
pub fn classic_seven() -> PeriodicColouring {
    let map = ColourMap::from_fn(7, 7, |q, r| (q + 5 * r).rem_euclid(7) as u32);
    PeriodicColouring::new(
        unit_interval(),
        7,
        vec![Layer::new(half_grid(Point::ORIGIN), map)],
        Provenance::new("classic7"),
    )
    .expect("valid colouring")
}

/// 2-fold colouring with 12 colours. Each row carries three colours cycling
/// along it, the row colour sets repeat every four rows, and same-coloured
/// cells are stacked vertically. The second layer is the first moved by
/// `(3 sqrt(3)/4, -3/2)`.
pub fn fold2_twelve() -> PeriodicColouring {
    // floor(r/2) keeps same-coloured cells of rows r and r+4 vertically aligned
    let map = ColourMap::from_fn(3, 12, |q, r| {
        (3 * r.rem_euclid(4) + (q + r.div_euclid(2)).rem_euclid(3)) as u32
    });
    let shift = Point::new(3.0 * SQRT3 / 4.0, -1.5);
    let layers = vec![
        Layer::new(half_grid(Point::ORIGIN), map.clone()),
        Layer::new(half_grid(shift), map),
    ];
    PeriodicColouring::new(unit_interval(), 12, layers, Provenance::new("fold2")).expect("valid colouring")
}

/// 3-fold colouring with 16 colours: four colours per row, four row classes,
/// and two more copies moved by `(sqrt(3), -1)` and `(2 sqrt(3), -2)`.
pub fn fold3_sixteen() -> PeriodicColouring {
    let map = ColourMap::from_fn(4, 4, |q, r| (4 * r.rem_euclid(4) + q.rem_euclid(4)) as u32);
    let layers = (0..3)
        .map(|i| {
            let shift = Point::new(SQRT3, -1.0) * i as f64;
            Layer::new(half_grid(shift), map.clone())
        })
        .collect();
    PeriodicColouring::new(unit_interval(), 16, layers, Provenance::new("fold3")).expect("valid colouring")
}

/// Axial offsets of a 7-hexagon flower (a cell and its six neighbours).
pub const FOLD7_STENCIL: [(i64, i64); 7] = [(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)];

/// 7-fold colouring with 37 colours on hexagons of side `1/(2 sqrt 7)`.
///
/// Colour 0 covers flowers centred on the index-37 sublattice spanned by
/// axial `(4, 3)` and its 60-degree rotation `(-3, 7)`; colour `i` is colour 0
/// moved by `i` cells to the right. The map `(q, r) -> q + 11 r (mod 37)`
/// vanishes on that sublattice and sends one step right to 1, so a cell's
/// colours are `q + 11 r - f (mod 37)` over the flower offsets `f`.
pub fn fold7_thirtyseven() -> PeriodicColouring {
    let side = 1.0 / (2.0 * 7f64.sqrt());
    let map = ColourMap::stencil_from_fn(37, 37, FOLD7_STENCIL.to_vec(), |q, r| {
        (q + 11 * r).rem_euclid(37) as u32
    });
    let grid = HexGrid::new(side, Point::ORIGIN).expect("valid grid");
    PeriodicColouring::new(unit_interval(), 37, vec![Layer::new(grid, map)], Provenance::new("fold7"))
        .expect("valid colouring")
}
