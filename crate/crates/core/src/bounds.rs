//! Fractional chromatic upper bound for `G[1,b]` from a dense periodic set.
//!
//! The set `A` is the intersection of a disk of diameter 1 with a concentric
//! pointy-top hexagon whose apothem is `sqrt(1 - x^2) / 2`, so that each of
//! the six flat sides is a chord of length `x` and each of the six arcs has
//! length `y = pi/6 - asin(x)`. Copies of `A` on a triangular lattice with
//! spacing `s = b + sqrt(1 - x^2)` sit exactly `b` apart across their flat
//! sides. The density is best when `y = b * x`.

use crate::geometry::{ConvexPolygon, HexCell, HexGrid, Point};
use std::f64::consts::PI;
use thiserror::Error;

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Slack allowed on the containment constraints of `A`.
const CONTAIN_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundsError {
    #[error("b must be a finite number >= 1, got {0}")]
    BadB(f64),
    #[error("n = {n} is too small: the shrunken region is empty (need n > {min:.4})")]
    Infeasible { n: u32, min: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityBound {
    pub b: f64,
    /// Chord length of each flat side of `A`; root of `b x = pi/6 - asin x`.
    pub x: f64,
    /// Arc length of each curved side of `A`.
    pub y: f64,
    /// Spacing of neighbouring copies of `A`.
    pub s: f64,
    pub area_a: f64,
    pub bound: f64,
}

impl DensityBound {
    /// Distance from the centre of `A` to its flat sides.
    pub fn apothem(&self) -> f64 {
        (1.0 - self.x * self.x).sqrt() / 2.0
    }

    /// Upper bound written as lattice cell area over the area of `A`.
    pub fn density_bound(&self) -> f64 {
        self.s * self.s * (SQRT3 / 2.0) / self.area_a
    }

    /// The bound before substituting `y = b x`.
    pub fn area_form(&self) -> f64 {
        let x = self.x;
        2.0 * SQRT3 * self.s * self.s / (PI - 6.0 * x.asin() + 3.0 * (2.0 * x.asin()).sin())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HCount {
    pub n: u32,
    /// Cells of the width-`s/n` tiling fully inside one copy of `A`.
    pub h_n: u32,
    pub lower: f64,
    /// `n^2 / h_n`.
    pub ratio: f64,
}

fn check_b(b: f64) -> Result<(), BoundsError> {
    if b.is_finite() && b >= 1.0 {
        Ok(())
    } else {
        Err(BoundsError::BadB(b))
    }
}

/// Root of `b x + asin(x) = pi/6` on `(0, 1/2)`: bisection, then one Newton
/// step.
pub fn solve_x(b: f64) -> Result<f64, BoundsError> {
    check_b(b)?;
    let f = |x: f64| b * x + x.asin() - PI / 6.0;
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let x = 0.5 * (lo + hi);
    let polished = x - f(x) / (b + 1.0 / (1.0 - x * x).sqrt());
    Ok(if polished > lo && polished < hi { polished } else { x })
}

pub fn chi_f_upper(b: f64) -> Result<DensityBound, BoundsError> {
    let x = solve_x(b)?;
    let root = (1.0 - x * x).sqrt();
    let y = PI / 6.0 - x.asin();
    let s = b + root;
    let area_a = 0.25 * (PI - 6.0 * x.asin() + 6.0 * x * root);
    let bound = (SQRT3 / 3.0) * s / x;
    Ok(DensityBound { b, x, y, s, area_a, bound })
}

fn check_n(bound: &DensityBound, n: u32) -> Result<(), BoundsError> {
    let min = 2.0 * bound.s;
    if (n as f64) > min {
        Ok(())
    } else {
        Err(BoundsError::Infeasible { n, min })
    }
}

/// Area lower bound on the number of contained cells:
/// `sqrt(3) (n/s - 2)^2 (b x + x sqrt(1 - x^2))`.
pub fn h_lower_bound(b: f64, n: u32) -> Result<f64, BoundsError> {
    let db = chi_f_upper(b)?;
    check_n(&db, n)?;
    let shrink = n as f64 / db.s - 2.0;
    Ok(SQRT3 * shrink * shrink * (b * db.x + db.x * (1.0 - db.x * db.x).sqrt()))
}

/// The closed set `A` centred at the origin.
#[derive(Clone, Copy, Debug)]
pub struct SetA {
    pub radius: f64,
    pub apothem: f64,
}

impl SetA {
    pub fn for_bound(db: &DensityBound) -> Self {
        SetA { radius: 0.5, apothem: db.apothem() }
    }

    /// Outward normals of the flat sides (0, 60, ..., 300 degrees).
    fn normals() -> [Point; 6] {
        [0, 1, 2, 3, 4, 5].map(|k| {
            let t = k as f64 * PI / 3.0;
            Point::new(t.cos(), t.sin())
        })
    }

    pub fn contains_point(&self, p: Point) -> bool {
        p.norm() <= self.radius + CONTAIN_TOL
            && Self::normals().iter().all(|nv| nv.dot(p) <= self.apothem + CONTAIN_TOL)
    }

    /// Convex polygons lie in the (convex) set iff all their vertices do.
    pub fn contains_polygon(&self, poly: &ConvexPolygon) -> bool {
        poly.vertices().iter().all(|&v| self.contains_point(v))
    }
}

/// The width-`s/n` tiling aligned so that one cell's left edge lies on the
/// left flat side of `A`, and the cells fully contained in `A`.
#[derive(Clone, Debug)]
pub struct DensityTiling {
    pub bound: DensityBound,
    pub n: u32,
    pub grid: HexGrid,
    pub cells: Vec<HexCell>,
}

pub fn density_tiling(b: f64, n: u32) -> Result<DensityTiling, BoundsError> {
    let db = chi_f_upper(b)?;
    check_n(&db, n)?;
    let width = db.s / n as f64;
    let side = width / SQRT3;
    let offset = Point::new(-db.apothem() + width / 2.0, 0.0);
    let grid = HexGrid::new(side, offset).expect("positive side");
    let a = SetA::for_bound(&db);
    let mut cells: Vec<HexCell> = grid
        .cells_within(Point::ORIGIN, a.radius)
        .into_iter()
        .filter(|&c| a.contains_polygon(&grid.cell_polygon(c)))
        .collect();
    cells.sort_unstable_by_key(|c| (c.r, c.q));
    if cells.is_empty() {
        return Err(BoundsError::Infeasible { n, min: 2.0 * db.s });
    }
    Ok(DensityTiling { bound: db, n, grid, cells })
}

pub fn count_contained_hexagons(b: f64, n: u32) -> Result<HCount, BoundsError> {
    let t = density_tiling(b, n)?;
    let h_n = t.cells.len() as u32;
    Ok(HCount {
        n,
        h_n,
        lower: h_lower_bound(b, n)?,
        ratio: (n as f64).powi(2) / h_n as f64,
    })
}
