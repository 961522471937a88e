//! Pointy-top hexagonal grids, half-open cell ownership and distances between
//! convex polygons.
//!
//! Cell ownership rule: a cell owns its open interior, the three open edges on
//! its right (upper-right, vertical right, lower-right) and the upper-right and
//! lower-right vertices. The top vertex is shared with the north-west
//! neighbour, which owns it as its lower-right vertex; the bottom vertex goes
//! to the south-west neighbour as its upper-right vertex. Every point of the
//! plane is owned by exactly one cell.
//!
//! Ownership is decided in "band" coordinates. With `(fq, fr)` the fractional
//! axial coordinates of a point, the three bands are `2fq + fr`, `fq + 2fr`
//! and `fq - fr`; cell `(q, r)` owns the point iff each band value `v` with
//! cell value `c` satisfies `c - 1 < v <= c + 1`.

use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

/// Distance comparison tolerance shared by geometry and verification.
pub const TOL: f64 = 1e-9;

/// Band values within this distance of an integer are treated as lying on
/// the boundary (measured in band units, i.e. relative to the cell size).
const SNAP: f64 = 1e-9;

const SQRT3: f64 = 1.732_050_807_568_877_2;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("hexagon side must be positive and finite, got {0}")]
    BadSide(f64),
    #[error("point coordinates must be finite")]
    NonFinite,
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("polygon is not convex and counter-clockwise")]
    NotConvex,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    pub fn lerp(self, o: Point, t: f64) -> Point {
        self + (o - self) * t
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, k: f64) -> Point {
        Point::new(self.x * k, self.y * k)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// Axial coordinates of a cell within a particular grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HexCell {
    pub q: i64,
    pub r: i64,
}

impl HexCell {
    pub const fn new(q: i64, r: i64) -> Self {
        HexCell { q, r }
    }

    /// The six edge-sharing neighbours, counter-clockwise from east.
    pub fn neighbours(self) -> [HexCell; 6] {
        const D: [(i64, i64); 6] = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)];
        D.map(|(dq, dr)| HexCell::new(self.q + dq, self.r + dr))
    }
}

/// A tiling of the plane by regular pointy-top hexagons.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HexGrid {
    side: f64,
    offset: Point,
}

impl HexGrid {
    pub fn new(side: f64, offset: Point) -> Result<Self, GeometryError> {
        if !(side.is_finite() && side > 0.0) {
            return Err(GeometryError::BadSide(side));
        }
        if !offset.is_finite() {
            return Err(GeometryError::NonFinite);
        }
        Ok(HexGrid { side, offset })
    }

    pub fn side(&self) -> f64 {
        self.side
    }

    pub fn offset(&self) -> Point {
        self.offset
    }

    /// Horizontal distance between neighbouring centres, `sqrt(3) * side`.
    pub fn width(&self) -> f64 {
        SQRT3 * self.side
    }

    pub fn q_step(&self) -> Point {
        Point::new(SQRT3 * self.side, 0.0)
    }

    pub fn r_step(&self) -> Point {
        Point::new(SQRT3 * self.side / 2.0, 1.5 * self.side)
    }

    /// Lattice vector `q * q_step + r * r_step`.
    pub fn lattice_vector(&self, q: i64, r: i64) -> Point {
        self.q_step() * q as f64 + self.r_step() * r as f64
    }

    pub fn translated(&self, v: Point) -> HexGrid {
        HexGrid { side: self.side, offset: self.offset + v }
    }

    pub fn scaled(&self, k: f64) -> HexGrid {
        HexGrid { side: self.side * k, offset: self.offset * k }
    }

    pub fn center(&self, c: HexCell) -> Point {
        self.offset + self.lattice_vector(c.q, c.r)
    }

    /// Fractional axial coordinates of `p`.
    pub fn fractional(&self, p: Point) -> (f64, f64) {
        let d = p - self.offset;
        let fr = d.y / (1.5 * self.side);
        let fq = d.x / (SQRT3 * self.side) - fr / 2.0;
        (fq, fr)
    }

    fn bands(&self, p: Point) -> [f64; 3] {
        let (fq, fr) = self.fractional(p);
        let a = snap(2.0 * fq + fr);
        let b = snap(fq + 2.0 * fr);
        let c = snap(a - b);
        [a, b, c]
    }

    fn owns_bands(c: HexCell, bands: &[f64; 3]) -> bool {
        let centre = [2 * c.q + c.r, c.q + 2 * c.r, c.q - c.r];
        bands.iter().zip(centre).all(|(&v, k)| {
            let k = k as f64;
            v > k - 1.0 && v <= k + 1.0
        })
    }

    /// The unique cell owning `p`.
    pub fn cell_of(&self, p: Point) -> HexCell {
        let bands = self.bands(p);
        let (fq, fr) = self.fractional(p);
        let (q0, r0) = (fq.round() as i64, fr.round() as i64);
        for dr in -1..=1 {
            for dq in -1..=1 {
                let c = HexCell::new(q0 + dq, r0 + dr);
                if Self::owns_bands(c, &bands) {
                    return c;
                }
            }
        }
        // Only reachable through inconsistent rounding of the band values;
        // fall back to the nearest centre.
        let mut best = HexCell::new(q0, r0);
        let mut best_d = f64::INFINITY;
        for dr in -1..=1 {
            for dq in -1..=1 {
                let c = HexCell::new(q0 + dq, r0 + dr);
                let d = self.center(c).dist(p);
                if d < best_d {
                    best_d = d;
                    best = c;
                }
            }
        }
        best
    }

    /// Whether `c` owns `p` under the half-open rule.
    pub fn cell_membership(&self, c: HexCell, p: Point) -> bool {
        Self::owns_bands(c, &self.bands(p))
    }

    /// The closed hexagon of `c`, vertices counter-clockwise starting at the top.
    pub fn cell_polygon(&self, c: HexCell) -> ConvexPolygon {
        let o = self.center(c);
        let s = self.side;
        let h = SQRT3 * s / 2.0;
        ConvexPolygon {
            vertices: vec![
                o + Point::new(0.0, s),
                o + Point::new(-h, s / 2.0),
                o + Point::new(-h, -s / 2.0),
                o + Point::new(0.0, -s),
                o + Point::new(h, -s / 2.0),
                o + Point::new(h, s / 2.0),
            ],
        }
    }

    /// All cells whose centre lies within `radius` of `p`.
    pub fn cells_within(&self, p: Point, radius: f64) -> Vec<HexCell> {
        let (fq, fr) = self.fractional(p);
        let dr = (radius / (1.5 * self.side)).ceil() as i64 + 1;
        let dq = (radius / (SQRT3 * self.side)).ceil() as i64 + dr + 1;
        let (qc, rc) = (fq.round() as i64, fr.round() as i64);
        let mut out = Vec::new();
        for r in rc - dr..=rc + dr {
            for q in qc - dq..=qc + dq {
                let c = HexCell::new(q, r);
                if self.center(c).dist(p) <= radius {
                    out.push(c);
                }
            }
        }
        out
    }

    pub fn cell_area(&self) -> f64 {
        1.5 * SQRT3 * self.side * self.side
    }
}

fn snap(v: f64) -> f64 {
    let r = v.round();
    if (v - r).abs() <= SNAP {
        r
    } else {
        v
    }
}

/// A closed convex polygon with counter-clockwise vertices. Degenerate
/// one- and two-vertex polygons (points, segments) are allowed through
/// [`ConvexPolygon::point`] and [`ConvexPolygon::segment`].
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexPolygon {
    vertices: Vec<Point>,
}

impl ConvexPolygon {
    pub fn new(vertices: Vec<Point>) -> Result<Self, GeometryError> {
        if vertices.len() < 3 {
            return Err(GeometryError::TooFewVertices(vertices.len()));
        }
        if vertices.iter().any(|v| !v.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        let n = vertices.len();
        for i in 0..n {
            let (a, b, c) = (vertices[i], vertices[(i + 1) % n], vertices[(i + 2) % n]);
            if (b - a).cross(c - b) < -TOL {
                return Err(GeometryError::NotConvex);
            }
        }
        Ok(ConvexPolygon { vertices })
    }

    pub fn point(p: Point) -> Self {
        ConvexPolygon { vertices: vec![p] }
    }

    pub fn segment(p: Point, q: Point) -> Self {
        ConvexPolygon { vertices: vec![p, q] }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn centroid(&self) -> Point {
        let n = self.vertices.len() as f64;
        self.vertices.iter().fold(Point::ORIGIN, |acc, &v| acc + v) * (1.0 / n)
    }

    pub fn area(&self) -> f64 {
        let n = self.vertices.len();
        if n < 3 {
            return 0.0;
        }
        (0..n)
            .map(|i| self.vertices[i].cross(self.vertices[(i + 1) % n]))
            .sum::<f64>()
            / 2.0
    }

    /// Edges as vertex pairs; a point yields one zero-length edge.
    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.vertices.len();
        let count = if n >= 3 { n } else { 1 };
        (0..count).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Closed containment test. Degenerate polygons contain nothing but
    /// their own vertices.
    pub fn contains(&self, p: Point) -> bool {
        let n = self.vertices.len();
        if n < 3 {
            return self
                .edges()
                .any(|(a, b)| point_segment_distance(p, a, b) == 0.0);
        }
        (0..n).all(|i| {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            (b - a).cross(p - a) >= 0.0
        })
    }

    pub fn translated(&self, v: Point) -> ConvexPolygon {
        ConvexPolygon { vertices: self.vertices.iter().map(|&p| p + v).collect() }
    }
}

/// Closest point to `p` on segment `ab`.
pub fn closest_on_segment(p: Point, a: Point, b: Point) -> Point {
    let ab = b - a;
    let len2 = ab.dot(ab);
    if len2 == 0.0 {
        return a;
    }
    let t = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    a + ab * t
}

pub fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    p.dist(closest_on_segment(p, a, b))
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b - a).cross(c - a)
}

fn on_segment(a: Point, b: Point, p: Point) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

fn segments_intersect(p1: Point, p2: Point, q1: Point, q2: Point) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment(q1, q2, p1))
        || (d2 == 0.0 && on_segment(q1, q2, p2))
        || (d3 == 0.0 && on_segment(p1, p2, q1))
        || (d4 == 0.0 && on_segment(p1, p2, q2))
}

pub fn segment_distance(p1: Point, p2: Point, q1: Point, q2: Point) -> f64 {
    if segments_intersect(p1, p2, q1, q2) {
        return 0.0;
    }
    point_segment_distance(p1, q1, q2)
        .min(point_segment_distance(p2, q1, q2))
        .min(point_segment_distance(q1, p1, p2))
        .min(point_segment_distance(q2, p1, p2))
}

/// Whether the closed polygons share a point.
pub fn polygons_intersect(p: &ConvexPolygon, q: &ConvexPolygon) -> bool {
    if p.vertices.iter().any(|&v| q.contains(v)) || q.vertices.iter().any(|&v| p.contains(v)) {
        return true;
    }
    p.edges()
        .any(|(a, b)| q.edges().any(|(c, d)| segments_intersect(a, b, c, d)))
}

/// Euclidean distance between the closed polygons; zero iff they intersect.
pub fn polygon_min_distance(p: &ConvexPolygon, q: &ConvexPolygon) -> f64 {
    if polygons_intersect(p, q) {
        return 0.0;
    }
    let mut best = f64::INFINITY;
    for (a, b) in p.edges() {
        for (c, d) in q.edges() {
            best = best.min(segment_distance(a, b, c, d));
        }
    }
    best
}

/// Largest distance between points of the two polygons (always attained at
/// a vertex pair).
pub fn polygon_max_distance(p: &ConvexPolygon, q: &ConvexPolygon) -> f64 {
    p.vertices
        .iter()
        .flat_map(|&a| q.vertices.iter().map(move |&b| a.dist(b)))
        .fold(0.0, f64::max)
}

/// Point pairs `(p, q)` with `p` in `pp`, `q` in `qq` attaining the minimum
/// distance `d` up to `tol`. Where two parallel edges attain it along a
/// segment, the segment's end pairs and midpoint pair are returned.
pub fn closest_pairs(pp: &ConvexPolygon, qq: &ConvexPolygon, d: f64, tol: f64) -> Vec<(Point, Point)> {
    let mut out: Vec<(Point, Point)> = Vec::new();
    for (a, b) in pp.edges() {
        for (c, e) in qq.edges() {
            if segment_distance(a, b, c, e) > d + tol {
                continue;
            }
            let mut local = Vec::new();
            for &v in &[a, b] {
                let f = closest_on_segment(v, c, e);
                if v.dist(f) <= d + tol {
                    local.push((v, f));
                }
            }
            for &v in &[c, e] {
                let f = closest_on_segment(v, a, b);
                if v.dist(f) <= d + tol {
                    local.push((f, v));
                }
            }
            dedup_pairs(&mut local);
            if local.len() >= 2 {
                let (p0, q0) = local[0];
                let (p1, q1) = local[local.len() - 1];
                local.push((p0.lerp(p1, 0.5), q0.lerp(q1, 0.5)));
            }
            out.extend(local);
        }
    }
    dedup_pairs(&mut out);
    out
}

/// Vertex pairs attaining the maximum distance `d` up to `tol`.
pub fn farthest_pairs(pp: &ConvexPolygon, qq: &ConvexPolygon, d: f64, tol: f64) -> Vec<(Point, Point)> {
    let mut out = Vec::new();
    for &a in &pp.vertices {
        for &b in &qq.vertices {
            if a.dist(b) >= d - tol {
                out.push((a, b));
            }
        }
    }
    out
}

fn dedup_pairs(v: &mut Vec<(Point, Point)>) {
    let mut out: Vec<(Point, Point)> = Vec::with_capacity(v.len());
    for &(p, q) in v.iter() {
        if !out.iter().any(|&(a, b)| a.dist(p) <= 1e-12 && b.dist(q) <= 1e-12) {
            out.push((p, q));
        }
    }
    *v = out;
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn grid() -> HexGrid {
        HexGrid::new(0.5, Point::ORIGIN).unwrap()
    }

    #[test]
    fn origin_belongs_to_origin_cell() {
        assert_eq!(grid().cell_of(Point::ORIGIN), HexCell::new(0, 0));
    }

    #[test]
    fn top_vertex_owned_by_north_west_neighbour() {
        let g = grid();
        let p = Point::new(0.0, 0.5);
        let owners: Vec<_> = [HexCell::new(0, 0), HexCell::new(-1, 1), HexCell::new(0, 1)]
            .into_iter()
            .filter(|&c| g.cell_membership(c, p))
            .collect();
        assert_eq!(owners, vec![HexCell::new(-1, 1)]);
        assert_eq!(g.cell_of(p), HexCell::new(-1, 1));
    }

    #[test]
    fn borders_follow_right_side_rule() {
        let g = grid();
        let c = HexCell::new(0, 0);
        let poly = g.cell_polygon(c);
        let v = poly.vertices();
        // top, upper-left, lower-left, bottom, lower-right, upper-right
        assert!(!g.cell_membership(c, v[0]));
        assert!(!g.cell_membership(c, v[1]));
        assert!(!g.cell_membership(c, v[2]));
        assert!(!g.cell_membership(c, v[3]));
        assert!(g.cell_membership(c, v[4]));
        assert!(g.cell_membership(c, v[5]));
        // left vertical edge belongs to the west neighbour
        let left_mid = v[1].lerp(v[2], 0.5);
        assert!(!g.cell_membership(c, left_mid));
        assert!(g.cell_membership(HexCell::new(-1, 0), left_mid));
        for (a, b) in [(v[0], v[5]), (v[5], v[4]), (v[4], v[3])] {
            assert!(g.cell_membership(c, a.lerp(b, 0.3)));
        }
        for (a, b) in [(v[0], v[1]), (v[2], v[3])] {
            assert!(!g.cell_membership(c, a.lerp(b, 0.3)));
        }
    }

    #[test]
    fn antipodal_vertices_are_split() {
        for g in [grid(), HexGrid::new(0.37, Point::new(0.1, -2.3)).unwrap()] {
            let c = HexCell::new(3, -2);
            let v = g.cell_polygon(c).vertices().to_vec();
            for i in 0..3 {
                let both = g.cell_membership(c, v[i]) && g.cell_membership(c, v[i + 3]);
                assert!(!both, "pair {i} owned twice");
            }
        }
    }

    #[test]
    fn polygon_shape() {
        let g = grid();
        let poly = g.cell_polygon(HexCell::new(0, 0));
        assert!((poly.vertices()[0].y - 0.5).abs() < 1e-15);
        assert!((polygon_max_distance(&poly, &poly) - 1.0).abs() < 1e-12);
        assert!((poly.area() - 1.5 * SQRT3 * 0.25).abs() < 1e-12);
        let s7 = 1.0 / (2.0 * 7f64.sqrt());
        let g7 = HexGrid::new(s7, Point::ORIGIN).unwrap();
        let p7 = g7.cell_polygon(HexCell::new(2, 5));
        let c7 = g7.center(HexCell::new(2, 5));
        for v in p7.vertices() {
            assert!((v.dist(c7) - s7).abs() < 1e-12);
        }
    }

    #[test]
    fn min_distance_examples() {
        let g = grid();
        let a = g.cell_polygon(HexCell::new(0, 0));
        let b = g.cell_polygon(HexCell::new(1, 0));
        let c = g.cell_polygon(HexCell::new(2, 0));
        assert_eq!(polygon_min_distance(&a, &b), 0.0);
        assert!((polygon_min_distance(&a, &c) - SQRT3 / 2.0).abs() < 1e-12);
        let p = ConvexPolygon::point(Point::new(0.0, 0.0));
        let q = ConvexPolygon::point(Point::new(3.0, 4.0));
        assert!((polygon_max_distance(&p, &q) - 5.0).abs() < 1e-12);
        assert!((polygon_min_distance(&p, &q) - 5.0).abs() < 1e-12);
    }

    #[test]
    fn max_distance_matches_vertex_brute_force() {
        let g = grid();
        let a = g.cell_polygon(HexCell::new(0, 0));
        let b = g.cell_polygon(HexCell::new(1, 0));
        let mut brute: f64 = 0.0;
        for &u in a.vertices() {
            for &v in b.vertices() {
                brute = brute.max(u.dist(v));
            }
        }
        assert_eq!(polygon_max_distance(&a, &b), brute);
        // far vertices (-sqrt3/4, 1/4) and (5sqrt3/4, -1/4)
        let expected = (SQRT3).hypot(0.5);
        assert!((brute - expected).abs() < 1e-12);
    }

    #[test]
    fn partition_against_nearby_cells() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let grids = [grid(), HexGrid::new(0.31, Point::new(0.2, -0.7)).unwrap()];
        for g in grids {
            for _ in 0..20_000 {
                let p = Point::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
                let owners: Vec<_> = g
                    .cells_within(p, 2.0 * g.side())
                    .into_iter()
                    .filter(|&c| g.cell_membership(c, p))
                    .collect();
                assert_eq!(owners, vec![g.cell_of(p)]);
                // off-boundary points belong to the nearest centre
                let nearest = g
                    .cells_within(p, 2.0 * g.side())
                    .into_iter()
                    .min_by(|&a, &b| g.center(a).dist(p).total_cmp(&g.center(b).dist(p)))
                    .unwrap();
                assert_eq!(nearest, owners[0]);
            }
        }
    }

    #[test]
    fn closest_pairs_parallel_edges() {
        let g = grid();
        let a = g.cell_polygon(HexCell::new(0, 0));
        let c = g.cell_polygon(HexCell::new(2, 0));
        let d = polygon_min_distance(&a, &c);
        let pairs = closest_pairs(&a, &c, d, TOL);
        // end pairs of the facing vertical edges plus the midpoint pair
        assert_eq!(pairs.len(), 3);
        for (p, q) in pairs {
            assert!((p.dist(q) - d).abs() < 1e-12);
        }
    }

    #[test]
    fn bad_inputs_rejected() {
        assert!(HexGrid::new(0.0, Point::ORIGIN).is_err());
        assert!(HexGrid::new(f64::NAN, Point::ORIGIN).is_err());
        assert!(ConvexPolygon::new(vec![Point::ORIGIN, Point::new(1.0, 0.0)]).is_err());
        let cw = vec![Point::new(0.0, 0.0), Point::new(0.0, 1.0), Point::new(1.0, 1.0), Point::new(1.0, 0.0)];
        assert!(ConvexPolygon::new(cw).is_err());
    }
}
