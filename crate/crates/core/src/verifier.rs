//! Certificates that a periodic colouring is a valid j-fold colouring of
//! `G[a,b]`: no two same-coloured owned points at a distance in `[a, b]`.
//!
//! The exact check enumerates same-coloured cell pairs with the first cell
//! in one period of its layer. Each pair is classified from the closed-cell
//! distance range `[d_min, d_max]`. Touching cases (within [`TOL`] of `a` or
//! `b`) are decided by ownership of the attaining point pairs.

use crate::constructions::colouring::first_common;
use crate::constructions::PeriodicColouring;
use crate::geometry::{
    closest_pairs, farthest_pairs, polygon_max_distance, polygon_min_distance, HexCell, HexGrid, Point, TOL,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

/// Sampled pairs per independently seeded chunk.
const CHUNK: u64 = 1 << 16;

/// Stored findings are capped; counts stay exact.
const MAX_FINDINGS: usize = 1000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error("colouring is invalid ({violations} violating cell pairs); separation is undefined")]
    Invalid { violations: u64 },
    #[error("colouring has no same-coloured pair reaching distance a")]
    NoPairs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PairStatus {
    Safe,
    BoundaryResolved,
    Violation,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CellRef {
    pub layer: usize,
    pub q: i64,
    pub r: i64,
}

impl CellRef {
    fn cell(&self) -> HexCell {
        HexCell::new(self.q, self.r)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellPairFinding {
    pub cells: (CellRef, CellRef),
    /// Smallest colour shared by the two cells.
    pub colour: u32,
    pub d_min: f64,
    pub d_max: f64,
    pub status: PairStatus,
    /// Two owned points, one per cell, at a distance in `[a, b]`.
    pub witness: Option<(Point, Point)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub mode: String,
    pub valid: bool,
    /// Smallest `d_min` over same-coloured pairs that reach beyond `a`
    /// (exact mode only).
    pub min_same_colour_separation: Option<f64>,
    pub pairs_checked: u64,
    pub violations: u64,
    pub boundary_resolved: u64,
    /// Violations and boundary cases, sorted by first cell and colour.
    pub findings: Vec<CellPairFinding>,
    pub findings_truncated: bool,
    /// Centre-distance radius of the exact enumeration.
    pub enumeration_radius: Option<f64>,
    pub window: Option<f64>,
    pub seed: Option<u64>,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Colour sets of one layer over its own periods, indexed like the label
/// table.
struct LayerColours {
    pq: i64,
    pr: i64,
    sets: Vec<Vec<u32>>,
}

impl LayerColours {
    fn new(c: &PeriodicColouring, layer: usize) -> Self {
        let map = &c.layers()[layer].colours;
        let (pq, pr) = (map.period_q() as i64, map.period_r() as i64);
        let mut sets = Vec::with_capacity((pq * pr) as usize);
        for r in 0..pr {
            for q in 0..pq {
                sets.push(c.cell_colours(layer, HexCell::new(q, r)));
            }
        }
        LayerColours { pq, pr, sets }
    }

    fn get(&self, c: HexCell) -> &[u32] {
        &self.sets[(c.r.rem_euclid(self.pr) * self.pq + c.q.rem_euclid(self.pq)) as usize]
    }
}

struct Chunk {
    pairs: u64,
    min_sep: f64,
    violations: u64,
    boundary: u64,
    findings: Vec<CellPairFinding>,
}

struct PairGeometry<'a> {
    g1: &'a HexGrid,
    c1: HexCell,
    g2: &'a HexGrid,
    c2: HexCell,
}

impl PairGeometry<'_> {
    fn owned(&self, p: Point, q: Point) -> bool {
        self.g1.cell_membership(self.c1, p) && self.g2.cell_membership(self.c2, q)
    }

    /// Owned points in the interiors with distance `target`, found by
    /// bisection along the segment joining a closest pair to a farthest
    /// pair (both pulled slightly inside their cells).
    fn interior_witness(&self, near: (Point, Point), far: (Point, Point), target: f64) -> (Point, Point) {
        let (o1, o2) = (self.g1.center(self.c1), self.g2.center(self.c2));
        let pull = |p: Point, o: Point| p + (o - p) * 1e-7;
        let (n1, n2) = (pull(near.0, o1), pull(near.1, o2));
        let (f1, f2) = (pull(far.0, o1), pull(far.1, o2));
        let at = |t: f64| (n1.lerp(f1, t), n2.lerp(f2, t));
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let (p, q) = at(mid);
            if p.dist(q) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        at(0.5 * (lo + hi))
    }
}

fn classify(
    pg: &PairGeometry<'_>,
    a: f64,
    b: f64,
) -> (f64, f64, PairStatus, Option<(Point, Point)>) {
    let p1 = pg.g1.cell_polygon(pg.c1);
    let p2 = pg.g2.cell_polygon(pg.c2);
    let d_min = polygon_min_distance(&p1, &p2);
    let d_max = polygon_max_distance(&p1, &p2);
    if d_min > b + TOL || d_max < a - TOL {
        return (d_min, d_max, PairStatus::Safe, None);
    }
    if d_min < b - TOL && d_max > a + TOL {
        let near = closest_pairs(&p1, &p2, d_min, TOL)
            .first()
            .copied()
            .unwrap_or((pg.g1.center(pg.c1), pg.g2.center(pg.c2)));
        let far = farthest_pairs(&p1, &p2, d_max, TOL)[0];
        let target = 0.5 * (a.max(d_min) + b.min(d_max));
        let w = pg.interior_witness(near, far, target);
        return (d_min, d_max, PairStatus::Violation, Some(w));
    }
    let mut attaining = Vec::new();
    if (d_min - b).abs() <= TOL {
        attaining.extend(closest_pairs(&p1, &p2, d_min, TOL));
    }
    if (d_max - a).abs() <= TOL {
        attaining.extend(farthest_pairs(&p1, &p2, d_max, TOL));
    }
    match attaining.into_iter().find(|&(p, q)| pg.owned(p, q)) {
        Some(w) => (d_min, d_max, PairStatus::Violation, Some(w)),
        None => (d_min, d_max, PairStatus::BoundaryResolved, None),
    }
}

/// Exact verification with the default enumeration radius `b + 4 s`
/// (`b` plus two cell diameters).
pub fn verify_exact(c: &PeriodicColouring) -> VerificationReport {
    verify_exact_with_radius(c, 0.0)
}

/// Exact verification with the enumeration radius enlarged by `extra`.
pub fn verify_exact_with_radius(c: &PeriodicColouring, extra: f64) -> VerificationReport {
    let (a, b) = (c.interval().a(), c.interval().b());
    let radius = b + 4.0 * c.side() + extra.max(0.0);
    let (pq, pr) = c.periods();
    let nl = c.layers().len();
    let colours: Vec<LayerColours> = (0..nl).map(|l| LayerColours::new(c, l)).collect();
    let reps: Vec<(usize, i64)> = (0..nl).flat_map(|l| (0..pr as i64).map(move |r| (l, r))).collect();

    let chunks: Vec<Chunk> = reps
        .par_iter()
        .map(|&(l1, r)| {
            let mut out = Chunk { pairs: 0, min_sep: f64::INFINITY, violations: 0, boundary: 0, findings: Vec::new() };
            let g1 = &c.layers()[l1].grid;
            for q in 0..pq as i64 {
                let c1 = HexCell::new(q, r);
                let set1 = colours[l1].get(c1);
                let o1 = g1.center(c1);
                for l2 in l1..nl {
                    let g2 = &c.layers()[l2].grid;
                    for c2 in g2.cells_within(o1, radius) {
                        if l2 == l1 && (c2.r - c1.r, c2.q - c1.q) < (0, 0) {
                            continue;
                        }
                        let Some(colour) = first_common(set1, colours[l2].get(c2)) else {
                            continue;
                        };
                        out.pairs += 1;
                        let pg = PairGeometry { g1, c1, g2, c2 };
                        let (d_min, d_max, status, witness) = classify(&pg, a, b);
                        if d_max > a + TOL {
                            out.min_sep = out.min_sep.min(d_min);
                        }
                        match status {
                            PairStatus::Safe => continue,
                            PairStatus::Violation => out.violations += 1,
                            PairStatus::BoundaryResolved => out.boundary += 1,
                        }
                        out.findings.push(CellPairFinding {
                            cells: (CellRef { layer: l1, q: c1.q, r: c1.r }, CellRef { layer: l2, q: c2.q, r: c2.r }),
                            colour,
                            d_min,
                            d_max,
                            status,
                            witness,
                        });
                    }
                }
            }
            out
        })
        .collect();

    let mut report = empty_report("exact");
    report.enumeration_radius = Some(radius);
    let mut min_sep = f64::INFINITY;
    for ch in chunks {
        report.pairs_checked += ch.pairs;
        report.violations += ch.violations;
        report.boundary_resolved += ch.boundary;
        min_sep = min_sep.min(ch.min_sep);
        report.findings.extend(ch.findings);
    }
    finish(&mut report);
    report.min_same_colour_separation = min_sep.is_finite().then_some(min_sep);
    report
}

fn empty_report(mode: &str) -> VerificationReport {
    VerificationReport {
        mode: mode.to_string(),
        valid: true,
        min_same_colour_separation: None,
        pairs_checked: 0,
        violations: 0,
        boundary_resolved: 0,
        findings: Vec::new(),
        findings_truncated: false,
        enumeration_radius: None,
        window: None,
        seed: None,
    }
}

fn finish(report: &mut VerificationReport) {
    report.valid = report.violations == 0;
    // violations first so truncation never hides them
    report.findings.sort_by(|x, y| {
        (x.status != PairStatus::Violation, x.cells.0, x.colour, x.cells.1)
            .cmp(&(y.status != PairStatus::Violation, y.cells.0, y.colour, y.cells.1))
    });
    if report.findings.len() > MAX_FINDINGS {
        report.findings.truncate(MAX_FINDINGS);
        report.findings_truncated = true;
    }
    report.findings.sort_by_key(|x| (x.cells.0, x.colour, x.cells.1));
}

/// Smallest closed-cell distance between same-coloured cells whose
/// farthest points are more than `a` apart. Pairs lying entirely within
/// distance `a` (a cell with itself, cells of one small figure) are left
/// out since they cannot realise a forbidden distance other than `a`
/// itself, which the ownership analysis settles.
pub fn min_same_colour_separation(c: &PeriodicColouring) -> Result<f64, VerifyError> {
    let report = verify_exact(c);
    if !report.valid {
        return Err(VerifyError::Invalid { violations: report.violations });
    }
    report.min_same_colour_separation.ok_or(VerifyError::NoPairs)
}

/// Random pairs `(p, p + d u)` with `p` uniform in the `window`-wide square
/// centred at the origin, `d` uniform in `[a, b]` and `u` a uniform
/// direction. Any pair with overlapping colour sets is a violation.
pub fn verify_sampled(c: &PeriodicColouring, window: f64, samples: u64, seed: u64) -> VerificationReport {
    let (a, b) = (c.interval().a(), c.interval().b());
    let half = window.abs() / 2.0;
    let chunks = samples.div_ceil(CHUNK);
    let results: Vec<(u64, Vec<CellPairFinding>)> = (0..chunks)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i);
            let n = CHUNK.min(samples - i * CHUNK);
            let mut bad = 0u64;
            let mut found = Vec::new();
            for _ in 0..n {
                let p = Point::new(rng.gen_range(-half..=half), rng.gen_range(-half..=half));
                let d = if b > a { rng.gen_range(a..=b) } else { a };
                let t = rng.gen_range(0.0..2.0 * PI);
                let p2 = p + Point::new(t.cos(), t.sin()) * d;
                let (s1, s2) = (c.colours_at(p), c.colours_at(p2));
                if let Some(colour) = s1.first_common(&s2) {
                    bad += 1;
                    if found.len() < MAX_FINDINGS {
                        found.push(sample_finding(c, p, p2, colour));
                    }
                }
            }
            (bad, found)
        })
        .collect();
    let mut report = empty_report("sampled");
    report.window = Some(window);
    report.seed = Some(seed);
    report.pairs_checked = samples;
    for (bad, found) in results {
        report.violations += bad;
        report.findings.extend(found);
    }
    finish(&mut report);
    report
}

fn sample_finding(c: &PeriodicColouring, p: Point, p2: Point, colour: u32) -> CellPairFinding {
    let locate = |x: Point| {
        let layer = (0..c.layers().len())
            .find(|&l| {
                let cell = c.layers()[l].grid.cell_of(x);
                c.layers()[l].colours.colours(cell).any(|k| k == colour)
            })
            .unwrap_or(0);
        let cell = c.layers()[layer].grid.cell_of(x);
        CellRef { layer, q: cell.q, r: cell.r }
    };
    let d = p.dist(p2);
    CellPairFinding {
        cells: (locate(p), locate(p2)),
        colour,
        d_min: d,
        d_max: d,
        status: PairStatus::Violation,
        witness: Some((p, p2)),
    }
}

/// Whether a witness pair really is a same-coloured owned pair at a
/// distance in `[a, b]` (within `TOL`).
pub fn check_witness(c: &PeriodicColouring, f: &CellPairFinding) -> bool {
    let Some((p, q)) = f.witness else {
        return false;
    };
    let (a, b) = (c.interval().a(), c.interval().b());
    let d = p.dist(q);
    let g = |r: &CellRef| c.layers()[r.layer].grid;
    d >= a - TOL
        && d <= b + TOL
        && g(&f.cells.0).cell_membership(f.cells.0.cell(), p)
        && g(&f.cells.1).cell_membership(f.cells.1.cell(), q)
        && c.colours_at(p).contains(f.colour)
        && c.colours_at(q).contains(f.colour)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{classic_seven, fold2_twelve, fold3_sixteen, fold7_thirtyseven};

    #[test]
    fn classic_seven_is_valid() {
        let r = verify_exact(&classic_seven());
        assert!(r.valid, "{:?}", r.findings.first());
        // every cell with itself touches distance 1 at antipodal vertices
        assert!(r.findings.iter().any(|f| f.cells.0 == f.cells.1 && f.status == PairStatus::BoundaryResolved));
        assert!(r.min_same_colour_separation.unwrap() > 1.0);
    }

    #[test]
    fn fold2_gap() {
        let r = verify_exact(&fold2_twelve());
        assert!(r.valid);
        let sep = r.min_same_colour_separation.unwrap();
        assert!((sep - 5.0 * 3f64.sqrt() / 8.0).abs() < 1e-9, "{sep}");
    }

    #[test]
    fn fold3_touches_at_one() {
        let c = fold3_sixteen();
        let r = verify_exact(&c);
        assert!(r.valid, "{:?}", r.findings.iter().find(|f| f.status == PairStatus::Violation));
        assert!(r
            .findings
            .iter()
            .any(|f| f.cells.0.layer != f.cells.1.layer && (f.d_min - 1.0).abs() < 1e-9));
        assert!((min_same_colour_separation(&c).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn fold7_separation() {
        let s = min_same_colour_separation(&fold7_thirtyseven()).unwrap();
        assert!((s - 31f64.sqrt() / (2.0 * 7f64.sqrt())).abs() < 1e-9, "{s}");
    }

    #[test]
    fn perturbed_fold2_has_checked_witness() {
        let mut c = fold2_twelve();
        c.translate_layer(1, Point::new(-0.3, 0.0)).unwrap();
        let r = verify_exact(&c);
        assert!(!r.valid);
        let v: Vec<_> = r.findings.iter().filter(|f| f.status == PairStatus::Violation).collect();
        assert!(!v.is_empty());
        for f in v {
            assert!(check_witness(&c, f), "{f:?}");
        }
    }

    #[test]
    fn duplicated_label_is_caught() {
        let mut c = classic_seven();
        let colour = c.cell_colours(0, HexCell::new(0, 0))[0];
        c.set_label(0, 1, 0, colour).unwrap();
        let r = verify_exact(&c);
        assert!(!r.valid);
        assert!(min_same_colour_separation(&c).is_err());
        let s = verify_sampled(&c, 20.0, 100_000, 3);
        assert!(!s.valid);
        assert!(s.findings.iter().all(|f| check_witness(&c, f)));
    }

    #[test]
    fn sampled_is_deterministic_and_handles_zero() {
        let c = fold3_sixteen();
        let r0 = verify_sampled(&c, 20.0, 0, 1);
        assert!(r0.valid && r0.pairs_checked == 0);
        let r1 = verify_sampled(&c, 20.0, 200_000, 9);
        assert!(r1.valid);
        assert_eq!(r1, verify_sampled(&c, 20.0, 200_000, 9));
    }

    #[test]
    fn radius_growth_is_idempotent() {
        let c = fold2_twelve();
        let base = verify_exact(&c);
        let period = c.period_vectors()[0].norm().max(c.period_vectors()[1].norm());
        let grown = verify_exact_with_radius(&c, period);
        assert_eq!(base.valid, grown.valid);
        assert_eq!(base.min_same_colour_separation, grown.min_same_colour_separation);
        assert_eq!(base.violations, grown.violations);
        assert_eq!(base.boundary_resolved, grown.boundary_resolved);
    }

    #[test]
    fn report_json_names_statuses() {
        let j = verify_exact(&fold3_sixteen()).to_json();
        assert!(j.contains("BOUNDARY_RESOLVED"));
    }
}
