use crate::geometry::{HexCell, HexGrid, Point};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ColouringError {
    #[error("interval needs 0 < a <= b (finite), got [{0}, {1}]")]
    BadInterval(f64, f64),
    #[error("a colouring needs at least one layer")]
    NoLayers,
    #[error("colour table of {got} entries does not match periods {period_q}x{period_r}")]
    TableSize { period_q: u32, period_r: u32, got: usize },
    #[error("periods must be positive")]
    ZeroPeriod,
    #[error("stencil must be non-empty and free of duplicates")]
    BadStencil,
    #[error("colour {colour} out of range for k = {k}")]
    ColourOutOfRange { colour: u32, k: u32 },
    #[error("all layers must share one hexagon side (layer {0} differs)")]
    MixedSides(usize),
    #[error("layer index {0} out of range")]
    NoSuchLayer(usize),
    #[error("parameter out of range: {0}")]
    Parameter(String),
    #[error("the shrunken density region is empty for n = {n} (need n > {min:.4} and at least one contained cell)")]
    Infeasible { n: u32, min: f64 },
    #[error(transparent)]
    Geometry(#[from] crate::geometry::GeometryError),
}

/// The closed distance interval `[a, b]` of the graph `G[a,b]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    a: f64,
    b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self, ColouringError> {
        if !(a.is_finite() && b.is_finite() && a > 0.0 && b >= a) {
            return Err(ColouringError::BadInterval(a, b));
        }
        Ok(Interval { a, b })
    }

    /// `[1, b]`.
    pub fn unit(b: f64) -> Result<Self, ColouringError> {
        Interval::new(1.0, b)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// `b / a`: the graph is isomorphic to `G[1, b/a]`.
    pub fn ratio(&self) -> f64 {
        self.b / self.a
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.a <= other.a && self.b >= other.b
    }
}

/// Sorted, duplicate-free set of colour ids.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ColourSet(Vec<u32>);

impl ColourSet {
    pub fn from_unsorted(mut ids: Vec<u32>) -> Self {
        ids.sort_unstable();
        ids.dedup();
        ColourSet(ids)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn contains(&self, c: u32) -> bool {
        self.0.binary_search(&c).is_ok()
    }

    /// Smallest shared colour, if any.
    pub fn first_common(&self, other: &ColourSet) -> Option<u32> {
        first_common(&self.0, &other.0)
    }

    pub fn is_disjoint(&self, other: &ColourSet) -> bool {
        self.first_common(other).is_none()
    }
}

pub(crate) fn first_common(a: &[u32], b: &[u32]) -> Option<u32> {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return Some(a[i]),
        }
    }
    None
}

/// Doubly periodic cell colouring of one grid.
///
/// A base label is stored for each residue `(q mod period_q, r mod period_r)`.
/// Cell `(q, r)` receives the labels of the cells `(q - dq, r - dr)` for every
/// stencil offset `(dq, dr)`. A plain colour table is the one-offset stencil
/// `[(0, 0)]`; larger stencils describe patterns such as a 7-hexagon flower
/// carrying one colour.
#[derive(Clone, Debug, PartialEq)]
pub struct ColourMap {
    period_q: u32,
    period_r: u32,
    labels: Vec<u32>,
    stencil: Vec<(i64, i64)>,
}

impl ColourMap {
    pub fn new(
        period_q: u32,
        period_r: u32,
        labels: Vec<u32>,
        stencil: Vec<(i64, i64)>,
    ) -> Result<Self, ColouringError> {
        if period_q == 0 || period_r == 0 {
            return Err(ColouringError::ZeroPeriod);
        }
        if labels.len() != period_q as usize * period_r as usize {
            return Err(ColouringError::TableSize { period_q, period_r, got: labels.len() });
        }
        let mut sorted = stencil.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if stencil.is_empty() || sorted.len() != stencil.len() {
            return Err(ColouringError::BadStencil);
        }
        Ok(ColourMap { period_q, period_r, labels, stencil })
    }

    /// One colour per cell, given by `f(q mod period_q, r mod period_r)`.
    pub fn from_fn(period_q: u32, period_r: u32, f: impl Fn(i64, i64) -> u32) -> Self {
        Self::stencil_from_fn(period_q, period_r, vec![(0, 0)], f)
    }

    pub fn stencil_from_fn(
        period_q: u32,
        period_r: u32,
        stencil: Vec<(i64, i64)>,
        f: impl Fn(i64, i64) -> u32,
    ) -> Self {
        let mut labels = Vec::with_capacity(period_q as usize * period_r as usize);
        for r in 0..period_r as i64 {
            for q in 0..period_q as i64 {
                labels.push(f(q, r));
            }
        }
        ColourMap::new(period_q, period_r, labels, stencil).expect("well-formed colour map")
    }

    pub fn period_q(&self) -> u32 {
        self.period_q
    }

    pub fn period_r(&self) -> u32 {
        self.period_r
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn stencil(&self) -> &[(i64, i64)] {
        &self.stencil
    }

    /// Number of colours each cell receives.
    pub fn fold(&self) -> usize {
        self.stencil.len()
    }

    fn index(&self, q: i64, r: i64) -> usize {
        let qm = q.rem_euclid(self.period_q as i64) as usize;
        let rm = r.rem_euclid(self.period_r as i64) as usize;
        qm + self.period_q as usize * rm
    }

    pub fn label(&self, q: i64, r: i64) -> u32 {
        self.labels[self.index(q, r)]
    }

    pub fn set_label(&mut self, q: i64, r: i64, colour: u32) {
        let i = self.index(q, r);
        self.labels[i] = colour;
    }

    pub fn colours(&self, c: HexCell) -> impl Iterator<Item = u32> + '_ {
        self.stencil.iter().map(move |&(dq, dr)| self.label(c.q - dq, c.r - dr))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Layer {
    pub grid: HexGrid,
    pub colours: ColourMap,
}

impl Layer {
    pub fn new(grid: HexGrid, colours: ColourMap) -> Self {
        Layer { grid, colours }
    }
}

/// Construction name and parameters, kept for spec files and reports.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Provenance {
    pub method: String,
    pub params: BTreeMap<String, String>,
}

impl Provenance {
    pub fn new(method: &str) -> Self {
        Provenance { method: method.to_string(), params: BTreeMap::new() }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }
}

/// A j-fold colouring of the plane built from layered hexagon grids.
///
/// Each point receives the union of the colour sets of the cells owning it,
/// one per layer. All layers share a hexagon side, so the colouring is
/// invariant under `period_q * q_step` and `period_r * r_step` where the
/// periods are the least common multiples over the layers.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodicColouring {
    interval: Interval,
    k: u32,
    j: u32,
    layers: Vec<Layer>,
    periods: (u32, u32),
    period_vectors: [Point; 2],
    provenance: Provenance,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

impl PeriodicColouring {
    pub fn new(
        interval: Interval,
        k: u32,
        layers: Vec<Layer>,
        provenance: Provenance,
    ) -> Result<Self, ColouringError> {
        let first = layers.first().ok_or(ColouringError::NoLayers)?;
        let side = first.grid.side();
        let mut pq = 1u64;
        let mut pr = 1u64;
        let mut j = 0u32;
        for (i, layer) in layers.iter().enumerate() {
            if (layer.grid.side() - side).abs() > 1e-12 * side {
                return Err(ColouringError::MixedSides(i));
            }
            if let Some(&bad) = layer.colours.labels().iter().find(|&&c| c >= k) {
                return Err(ColouringError::ColourOutOfRange { colour: bad, k });
            }
            pq = lcm(pq, layer.colours.period_q() as u64);
            pr = lcm(pr, layer.colours.period_r() as u64);
            j += layer.colours.fold() as u32;
        }
        let (pq, pr) = (
            u32::try_from(pq).map_err(|_| ColouringError::Parameter("period overflow".into()))?,
            u32::try_from(pr).map_err(|_| ColouringError::Parameter("period overflow".into()))?,
        );
        let g = first.grid;
        let period_vectors = [g.lattice_vector(pq as i64, 0), g.lattice_vector(0, pr as i64)];
        Ok(PeriodicColouring { interval, k, j, layers, periods: (pq, pr), period_vectors, provenance })
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn j(&self) -> u32 {
        self.j
    }

    /// `k / j`.
    pub fn ratio(&self) -> f64 {
        self.k as f64 / self.j as f64
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn side(&self) -> f64 {
        self.layers[0].grid.side()
    }

    /// Common axial periods `(period_q, period_r)`.
    pub fn periods(&self) -> (u32, u32) {
        self.periods
    }

    pub fn period_vectors(&self) -> [Point; 2] {
        self.period_vectors
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Colours of cell `c` of layer `layer`, sorted.
    pub fn cell_colours(&self, layer: usize, c: HexCell) -> Vec<u32> {
        let mut v: Vec<u32> = self.layers[layer].colours.colours(c).collect();
        v.sort_unstable();
        v
    }

    /// The colour set of point `p`: the union over layers of the owning
    /// cells' colours.
    pub fn colours_at(&self, p: Point) -> ColourSet {
        let mut ids = Vec::with_capacity(self.j as usize);
        for layer in &self.layers {
            let c = layer.grid.cell_of(p);
            ids.extend(layer.colours.colours(c));
        }
        ColourSet::from_unsorted(ids)
    }

    /// The same colouring with the plane scaled by `factor` (interval and
    /// geometry both scale).
    pub fn scaled(&self, factor: f64) -> Result<Self, ColouringError> {
        let interval = Interval::new(self.interval.a * factor, self.interval.b * factor)?;
        let layers = self
            .layers
            .iter()
            .map(|l| Layer::new(l.grid.scaled(factor), l.colours.clone()))
            .collect();
        PeriodicColouring::new(interval, self.k, layers, self.provenance.clone())
    }

    /// Drops one layer; the result is a `(j - fold)`-fold colouring with the
    /// same palette.
    pub fn without_layer(&self, idx: usize) -> Result<Self, ColouringError> {
        if idx >= self.layers.len() {
            return Err(ColouringError::NoSuchLayer(idx));
        }
        let mut layers = self.layers.clone();
        layers.remove(idx);
        let prov = self.provenance.clone().with("dropped_layer", idx);
        PeriodicColouring::new(self.interval, self.k, layers, prov)
    }

    /// Overwrites the base label at `(q, r)` of one layer (and hence at
    /// every periodic copy).
    pub fn set_label(&mut self, layer: usize, q: i64, r: i64, colour: u32) -> Result<(), ColouringError> {
        if colour >= self.k {
            return Err(ColouringError::ColourOutOfRange { colour, k: self.k });
        }
        let l = self.layers.get_mut(layer).ok_or(ColouringError::NoSuchLayer(layer))?;
        l.colours.set_label(q, r, colour);
        Ok(())
    }

    /// Moves one layer's grid by `v`.
    pub fn translate_layer(&mut self, layer: usize, v: Point) -> Result<(), ColouringError> {
        let l = self.layers.get_mut(layer).ok_or(ColouringError::NoSuchLayer(layer))?;
        l.grid = l.grid.translated(v);
        Ok(())
    }
}
