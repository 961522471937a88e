//! Conflict-free transmission schedules from a colouring of `G[1,2]`.
//!
//! Transmitters share a range of 1. Two transmitters conflict when they are
//! more than 1 apart, at most 2 apart, and some third transmitter is within
//! range of both. Every conflict edge is an edge of `G[1,2]`, so the colour
//! sets of a valid j-fold colouring are disjoint on conflicting transmitters
//! and can serve directly as time slots.

use crate::constructions::{Interval, PeriodicColouring};
use crate::geometry::Point;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScheduleError {
    #[error("duplicate transmitter id {0:?}")]
    DuplicateId(String),
    #[error("transmitter {0:?} has a non-finite position")]
    NonFinite(String),
    #[error("colouring interval [{a}, {b}] does not contain [1, 2]")]
    IntervalTooNarrow { a: f64, b: f64 },
    #[error("schedule fails validation against the conflict graph")]
    Invalid,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Transmitter {
    pub id: String,
    pub position: Point,
}

impl Transmitter {
    pub fn new(id: impl Into<String>, x: f64, y: f64) -> Self {
        Transmitter { id: id.into(), position: Point::new(x, y) }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConflictGraph {
    vertices: Vec<Transmitter>,
    /// Index pairs `(i, j)` with `i < j`, sorted.
    edges: Vec<(usize, usize)>,
}

impl ConflictGraph {
    pub fn vertices(&self) -> &[Transmitter] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Edges as id pairs, each ordered lexicographically.
    pub fn edge_ids(&self) -> BTreeSet<(String, String)> {
        self.edges
            .iter()
            .map(|&(i, j)| {
                let (a, b) = (self.vertices[i].id.clone(), self.vertices[j].id.clone());
                if a <= b {
                    (a, b)
                } else {
                    (b, a)
                }
            })
            .collect()
    }
}

/// Conflict graph of `transmitters`. Candidate pairs and common neighbours
/// come from a bucket grid of cell size 1.
pub fn build_conflict_graph(transmitters: Vec<Transmitter>) -> Result<ConflictGraph, ScheduleError> {
    let mut seen = BTreeSet::new();
    for t in &transmitters {
        if !t.position.is_finite() {
            return Err(ScheduleError::NonFinite(t.id.clone()));
        }
        if !seen.insert(t.id.as_str()) {
            return Err(ScheduleError::DuplicateId(t.id.clone()));
        }
    }
    let key = |p: Point| (p.x.floor() as i64, p.y.floor() as i64);
    let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (i, t) in transmitters.iter().enumerate() {
        buckets.entry(key(t.position)).or_default().push(i);
    }
    let near = |p: Point, reach: i64| {
        let (bx, by) = key(p);
        let mut out = Vec::new();
        for dx in -reach..=reach {
            for dy in -reach..=reach {
                if let Some(v) = buckets.get(&(bx + dx, by + dy)) {
                    out.extend_from_slice(v);
                }
            }
        }
        out
    };
    let pos: Vec<Point> = transmitters.iter().map(|t| t.position).collect();
    let mut edges: Vec<(usize, usize)> = (0..pos.len())
        .into_par_iter()
        .flat_map_iter(|u| {
            let in_range: Vec<usize> = near(pos[u], 1).into_iter().filter(|&w| w != u && pos[u].dist(pos[w]) <= 1.0).collect();
            near(pos[u], 2)
                .into_iter()
                .filter(|&v| v > u)
                .filter(|&v| {
                    let d = pos[u].dist(pos[v]);
                    d > 1.0 && d <= 2.0 && in_range.iter().any(|&w| w != v && pos[v].dist(pos[w]) <= 1.0)
                })
                .map(|v| (u, v))
                .collect::<Vec<_>>()
        })
        .collect();
    edges.sort_unstable();
    Ok(ConflictGraph { vertices: transmitters, edges })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub j: u32,
    pub k: u32,
    /// Sorted slot indices per transmitter id.
    pub slots: BTreeMap<String, Vec<u32>>,
    /// `k / j`: cycle duration per unit of airtime.
    pub cycle_length: f64,
}

impl Schedule {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("schedule serializes")
    }
}

/// Slots of each transmitter are the colours of its position.
pub fn schedule_from_colouring(g: &ConflictGraph, c: &PeriodicColouring) -> Result<Schedule, ScheduleError> {
    let iv = c.interval();
    let needed = Interval::new(1.0, 2.0).expect("valid");
    if !iv.contains_interval(&needed) {
        return Err(ScheduleError::IntervalTooNarrow { a: iv.a(), b: iv.b() });
    }
    let slots = g
        .vertices
        .iter()
        .map(|t| (t.id.clone(), c.colours_at(t.position).as_slice().to_vec()))
        .collect();
    Ok(Schedule { j: c.j(), k: c.k(), slots, cycle_length: c.ratio() })
}

/// Every transmitter holds exactly `j` distinct slots below `k`, and
/// conflicting transmitters share none.
pub fn validate_schedule(s: &Schedule, g: &ConflictGraph) -> bool {
    if s.slots.len() != g.vertices.len() {
        return false;
    }
    let mut sets = Vec::with_capacity(g.vertices.len());
    for t in &g.vertices {
        let Some(v) = s.slots.get(&t.id) else {
            return false;
        };
        let set: BTreeSet<u32> = v.iter().copied().collect();
        if set.len() != v.len() || set.len() != s.j as usize || set.iter().any(|&x| x >= s.k) {
            return false;
        }
        sets.push(set);
    }
    g.edges.iter().all(|&(u, v)| sets[u].is_disjoint(&sets[v]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{construct_nm, fold3_sixteen};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn brute_force(ts: &[Transmitter]) -> BTreeSet<(String, String)> {
        let mut out = BTreeSet::new();
        for u in 0..ts.len() {
            for v in u + 1..ts.len() {
                let d = ts[u].position.dist(ts[v].position);
                if !(d > 1.0 && d <= 2.0) {
                    continue;
                }
                let common = (0..ts.len()).any(|w| {
                    w != u
                        && w != v
                        && ts[u].position.dist(ts[w].position) <= 1.0
                        && ts[v].position.dist(ts[w].position) <= 1.0
                });
                if common {
                    let (a, b) = (ts[u].id.clone(), ts[v].id.clone());
                    out.insert(if a <= b { (a, b) } else { (b, a) });
                }
            }
        }
        out
    }

    fn collinear() -> Vec<Transmitter> {
        vec![Transmitter::new("a", 0.0, 0.0), Transmitter::new("b", 1.0, 0.0), Transmitter::new("c", 2.0, 0.0)]
    }

    #[test]
    fn collinear_triple() {
        let g = build_conflict_graph(collinear()).unwrap();
        assert_eq!(g.edges(), &[(0, 2)]);
        let c = construct_nm(Interval::unit(2.0).unwrap(), 3, 3).unwrap();
        let s = schedule_from_colouring(&g, &c).unwrap();
        assert!(validate_schedule(&s, &g));
        assert!((s.cycle_length - 100.0 / 9.0).abs() < 1e-12);
        let (a, cc) = (&s.slots["a"], &s.slots["c"]);
        assert!(a.iter().all(|x| !cc.contains(x)));
    }

    #[test]
    fn far_pair_and_empty() {
        let g = build_conflict_graph(vec![Transmitter::new("a", 0.0, 0.0), Transmitter::new("b", 3.0, 0.0)]).unwrap();
        assert!(g.edges().is_empty());
        let g = build_conflict_graph(vec![]).unwrap();
        let c = construct_nm(Interval::unit(2.0).unwrap(), 3, 3).unwrap();
        let s = schedule_from_colouring(&g, &c).unwrap();
        assert!(s.slots.is_empty() && validate_schedule(&s, &g));
    }

    #[test]
    fn rejects_bad_inputs() {
        let dup = vec![Transmitter::new("a", 0.0, 0.0), Transmitter::new("a", 1.0, 0.0)];
        assert_eq!(build_conflict_graph(dup), Err(ScheduleError::DuplicateId("a".into())));
        let g = build_conflict_graph(collinear()).unwrap();
        assert!(matches!(
            schedule_from_colouring(&g, &fold3_sixteen()),
            Err(ScheduleError::IntervalTooNarrow { .. })
        ));
    }

    #[test]
    fn mutations_fail_validation() {
        let g = build_conflict_graph(collinear()).unwrap();
        let c = construct_nm(Interval::unit(2.0).unwrap(), 3, 3).unwrap();
        let s = schedule_from_colouring(&g, &c).unwrap();
        let mut clash = s.clone();
        let first_a = clash.slots["a"][0];
        clash.slots.get_mut("c").unwrap()[0] = first_a;
        assert!(!validate_schedule(&clash, &g));
        let mut short = s.clone();
        short.slots.get_mut("b").unwrap().pop();
        assert!(!validate_schedule(&short, &g));
    }

    #[test]
    fn matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..5 {
            let ts: Vec<Transmitter> = (0..200)
                .map(|i| Transmitter::new(format!("t{i}"), rng.gen_range(0.0..10.0), rng.gen_range(0.0..10.0)))
                .collect();
            let g = build_conflict_graph(ts.clone()).unwrap();
            assert_eq!(g.edge_ids(), brute_force(&ts));
        }
    }
}
