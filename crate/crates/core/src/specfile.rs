//! JSON colouring spec files.
//!
//! Reals are stored as decimal strings with 17 significant digits, which
//! round-trip `f64` exactly, so save -> load -> save is byte-identical.
//! Pair colours `(row, column)` are stored as `row * column_period + column`
//! (the column and row periods are listed in the provenance parameters).

use crate::constructions::{ColourMap, ColouringError, Interval, Layer, PeriodicColouring, Provenance};
use crate::geometry::{HexGrid, Point};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

pub const SPEC_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("malformed spec JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported spec version {0} (expected {SPEC_VERSION})")]
    Version(u32),
    #[error("field {field}: {value:?} is not a finite decimal")]
    Real { field: String, value: String },
    #[error("invalid colouring: {0}")]
    Colouring(#[from] ColouringError),
    #[error("geometry: {0}")]
    Geometry(#[from] crate::geometry::GeometryError),
    #[error("stored {field} = {stored} disagrees with the layers ({derived})")]
    Mismatch { field: &'static str, stored: String, derived: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayerSpec {
    pub side: String,
    pub offset: [String; 2],
    pub period_q: u32,
    pub period_r: u32,
    /// Axial offsets `(dq, dr)`: cell `(q, r)` carries the labels of cells
    /// `(q - dq, r - dr)`.
    pub stencil: Vec<[i64; 2]>,
    /// Row-major labels, index `q + period_q * r`.
    pub labels: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProvenanceSpec {
    pub method: String,
    pub params: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ColouringSpecFile {
    pub version: u32,
    pub interval: [String; 2],
    pub j: u32,
    pub k: u32,
    pub layers: Vec<LayerSpec>,
    pub period_vectors: [[String; 2]; 2],
    pub provenance: ProvenanceSpec,
}

pub fn fmt_real(v: f64) -> String {
    format!("{v:.16e}")
}

fn parse_real(field: &str, s: &str) -> Result<f64, SpecError> {
    match s.trim().parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(SpecError::Real { field: field.to_string(), value: s.to_string() }),
    }
}

fn fmt_point(p: Point) -> [String; 2] {
    [fmt_real(p.x), fmt_real(p.y)]
}

impl ColouringSpecFile {
    pub fn from_colouring(c: &PeriodicColouring) -> Self {
        let layers = c
            .layers()
            .iter()
            .map(|l| LayerSpec {
                side: fmt_real(l.grid.side()),
                offset: fmt_point(l.grid.offset()),
                period_q: l.colours.period_q(),
                period_r: l.colours.period_r(),
                stencil: l.colours.stencil().iter().map(|&(q, r)| [q, r]).collect(),
                labels: l.colours.labels().to_vec(),
            })
            .collect();
        let [v1, v2] = c.period_vectors();
        ColouringSpecFile {
            version: SPEC_VERSION,
            interval: [fmt_real(c.interval().a()), fmt_real(c.interval().b())],
            j: c.j(),
            k: c.k(),
            layers,
            period_vectors: [fmt_point(v1), fmt_point(v2)],
            provenance: ProvenanceSpec {
                method: c.provenance().method.clone(),
                params: c.provenance().params.clone(),
            },
        }
    }

    /// Rebuilds the colouring, re-checking its invariants and the stored
    /// derived fields (`j`, period vectors).
    pub fn to_colouring(&self) -> Result<PeriodicColouring, SpecError> {
        if self.version != SPEC_VERSION {
            return Err(SpecError::Version(self.version));
        }
        let interval =
            Interval::new(parse_real("interval[0]", &self.interval[0])?, parse_real("interval[1]", &self.interval[1])?)?;
        let mut layers = Vec::with_capacity(self.layers.len());
        for (i, l) in self.layers.iter().enumerate() {
            let side = parse_real(&format!("layers[{i}].side"), &l.side)?;
            let offset = Point::new(
                parse_real(&format!("layers[{i}].offset[0]"), &l.offset[0])?,
                parse_real(&format!("layers[{i}].offset[1]"), &l.offset[1])?,
            );
            let stencil = l.stencil.iter().map(|&[q, r]| (q, r)).collect();
            let map = ColourMap::new(l.period_q, l.period_r, l.labels.clone(), stencil)?;
            layers.push(Layer::new(HexGrid::new(side, offset)?, map));
        }
        let provenance = Provenance { method: self.provenance.method.clone(), params: self.provenance.params.clone() };
        let c = PeriodicColouring::new(interval, self.k, layers, provenance)?;
        if c.j() != self.j {
            return Err(SpecError::Mismatch { field: "j", stored: self.j.to_string(), derived: c.j().to_string() });
        }
        let derived = c.period_vectors().map(fmt_point);
        if derived != self.period_vectors {
            return Err(SpecError::Mismatch {
                field: "period_vectors",
                stored: format!("{:?}", self.period_vectors),
                derived: format!("{derived:?}"),
            });
        }
        Ok(c)
    }
}

pub fn save_spec(c: &PeriodicColouring) -> String {
    let mut s = serde_json::to_string_pretty(&ColouringSpecFile::from_colouring(c)).expect("spec serializes");
    s.push('\n');
    s
}

pub fn load_spec(text: &str) -> Result<PeriodicColouring, SpecError> {
    let spec: ColouringSpecFile = serde_json::from_str(text)?;
    spec.to_colouring()
}
