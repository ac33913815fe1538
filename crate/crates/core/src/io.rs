//! JSON documents for configurations, incidence data and triangulations.
//!
//! Floats are written with 17 significant digits so that a write, read, write
//! cycle reproduces the same bytes.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::value::RawValue;
use thiserror::Error;

use crate::config::{contact_graph, ConfigError, DiskConfiguration, IncidenceData};
use crate::geom::Disk;
use crate::solver::{SolverError, Triangulation};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum DocError {
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("schema error: {0}")]
    Schema(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

/// Shortest exponent form with 17 significant digits.
pub fn format_f64(x: f64) -> String {
    if x == 0.0 {
        return "0.0000000000000000e0".to_string();
    }
    format!("{x:.16e}")
}

fn ser17<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if !x.is_finite() {
        return Err(serde::ser::Error::custom("non-finite number"));
    }
    RawValue::from_string(format_f64(*x)).map_err(serde::ser::Error::custom)?.serialize(s)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiskRecord {
    pub id: u32,
    #[serde(serialize_with = "ser17")]
    pub cx: f64,
    #[serde(serialize_with = "ser17")]
    pub cy: f64,
    #[serde(serialize_with = "ser17")]
    pub r: f64,
}

/// An edge `[i, j, theta]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeRecord(pub u32, pub u32, pub f64);

impl Serialize for EdgeRecord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeTuple;
        let mut t = s.serialize_tuple(3)?;
        t.serialize_element(&self.0)?;
        t.serialize_element(&self.1)?;
        let raw = RawValue::from_string(format_f64(self.2)).map_err(serde::ser::Error::custom)?;
        t.serialize_element(&raw)?;
        t.end()
    }
}

impl<'de> Deserialize<'de> for EdgeRecord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let (i, j, theta): (serde_json::Value, serde_json::Value, f64) = Deserialize::deserialize(d)?;
        let id = |v: serde_json::Value| {
            v.as_u64().and_then(|x| u32::try_from(x).ok()).ok_or_else(|| D::Error::custom("edge ids must be non-negative integers"))
        };
        Ok(EdgeRecord(id(i)?, id(j)?, theta))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IncidenceRecord {
    pub edges: Vec<EdgeRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriangulationRecord {
    pub faces: Vec<[u32; 3]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub boundary: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDocument {
    pub schema_version: u32,
    #[serde(default)]
    pub disks: Vec<DiskRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub incidence: Option<IncidenceRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub triangulation: Option<TriangulationRecord>,
}

impl ConfigDocument {
    pub fn from_json(text: &str) -> Result<Self, DocError> {
        let doc: ConfigDocument = serde_json::from_str(text)?;
        doc.validate()?;
        Ok(doc)
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("finite document");
        s.push('\n');
        s
    }

    pub fn validate(&self) -> Result<(), DocError> {
        let bad = |m: String| Err(DocError::Schema(m));
        if self.schema_version != SCHEMA_VERSION {
            return bad(format!("unsupported schema_version {}", self.schema_version));
        }
        let mut ids = BTreeSet::new();
        for d in &self.disks {
            if !ids.insert(d.id) {
                return bad(format!("duplicate disk id {}", d.id));
            }
            if !(d.r > 0.0 && d.r.is_finite() && d.cx.is_finite() && d.cy.is_finite()) {
                return bad(format!("disk {} needs finite center and positive radius", d.id));
            }
        }
        if let Some(inc) = &self.incidence {
            let mut seen = BTreeSet::new();
            for e in &inc.edges {
                if !(0.0..PI).contains(&e.2) {
                    return bad(format!("edge {}-{} angle {} outside [0, π)", e.0, e.1, e.2));
                }
                if e.0 == e.1 || !seen.insert(IncidenceData::key(e.0, e.1)) {
                    return bad(format!("edge {}-{} repeated or a loop", e.0, e.1));
                }
            }
        }
        Ok(())
    }

    /// Disks sorted by id and edges by key, with each edge written smaller id first.
    pub fn canonicalized(&self) -> ConfigDocument {
        let mut doc = self.clone();
        doc.disks.sort_by_key(|d| d.id);
        if let Some(inc) = &mut doc.incidence {
            for e in inc.edges.iter_mut() {
                let (i, j) = IncidenceData::key(e.0, e.1);
                *e = EdgeRecord(i, j, e.2);
            }
            inc.edges.sort_by_key(|e| (e.0, e.1));
        }
        doc
    }

    pub fn from_configuration(c: &DiskConfiguration) -> ConfigDocument {
        ConfigDocument {
            schema_version: SCHEMA_VERSION,
            disks: c.iter().map(|(id, d)| DiskRecord { id, cx: d.center.x, cy: d.center.y, r: d.radius }).collect(),
            incidence: None,
            triangulation: None,
        }
    }

    /// The configuration together with its realized incidence data.
    pub fn with_incidence(c: &DiskConfiguration) -> Result<ConfigDocument, DocError> {
        let mut doc = ConfigDocument::from_configuration(c);
        doc.incidence = Some(IncidenceRecord::from_data(&contact_graph(c)?));
        Ok(doc)
    }

    pub fn configuration(&self) -> Result<DiskConfiguration, DocError> {
        let items = self.disks.iter().map(|d| (d.id, Disk::at(d.cx, d.cy, d.r))).collect();
        Ok(DiskConfiguration::new(items)?)
    }

    /// Incidence data from the document, or `None` when absent.
    pub fn incidence_data(&self) -> Option<IncidenceData> {
        let inc = self.incidence.as_ref()?;
        let mut vertices: BTreeSet<u32> = self.disks.iter().map(|d| d.id).collect();
        let edges = inc
            .edges
            .iter()
            .map(|e| {
                vertices.insert(e.0);
                vertices.insert(e.1);
                (IncidenceData::key(e.0, e.1), e.2)
            })
            .collect();
        Some(IncidenceData { vertices: vertices.into_iter().collect(), edges })
    }

    pub fn triangulation(&self) -> Result<Option<Triangulation>, DocError> {
        let Some(rec) = &self.triangulation else { return Ok(None) };
        let n = rec.faces.iter().flatten().copied().max().map_or(0, |m| m as usize + 1);
        let t = Triangulation::new(n, rec.faces.clone())?;
        if !rec.boundary.is_empty() {
            let want: BTreeSet<u32> = rec.boundary.iter().copied().collect();
            let got: BTreeSet<u32> = t.boundary.iter().copied().collect();
            if want != got {
                return Err(DocError::Schema("boundary does not match the faces".into()));
            }
        }
        Ok(Some(t))
    }
}

impl IncidenceRecord {
    pub fn from_data(g: &IncidenceData) -> IncidenceRecord {
        IncidenceRecord { edges: g.edges.iter().map(|(&(i, j), &t)| EdgeRecord(i, j, t)).collect() }
    }
}
