//! JSON interchange format for curves:
//! `{"kind": "open"|"closed", "nodes": [[x, y], ...], "corners": [{"index": i, "angle": a}]}`.

use serde::{Deserialize, Serialize};

use crate::{ClosedCurve, Corner, GeometryError, OpenCurve, Vec2};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveKind {
    Open,
    Closed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveDocument {
    pub kind: CurveKind,
    pub nodes: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub corners: Vec<Corner>,
}

/// Parses and validates a curve document.
pub fn parse_curve(text: &str) -> Result<CurveDocument, GeometryError> {
    let doc: CurveDocument =
        serde_json::from_str(text).map_err(|e| GeometryError::InvalidDocument(e.to_string()))?;
    match doc.kind {
        CurveKind::Open => {
            if !doc.corners.is_empty() {
                return Err(GeometryError::InvalidDocument("open curves carry no corners".into()));
            }
            doc.to_open()?;
        }
        CurveKind::Closed => {
            doc.to_closed()?;
        }
    }
    Ok(doc)
}

impl CurveDocument {
    pub fn from_open(curve: &OpenCurve) -> Self {
        CurveDocument {
            kind: CurveKind::Open,
            nodes: curve.nodes().iter().map(|&p| p.into()).collect(),
            corners: Vec::new(),
        }
    }

    pub fn from_closed(curve: &ClosedCurve) -> Self {
        CurveDocument {
            kind: CurveKind::Closed,
            nodes: curve.nodes().iter().map(|&p| p.into()).collect(),
            corners: curve.corners().to_vec(),
        }
    }

    fn points(&self) -> Vec<Vec2> {
        self.nodes.iter().copied().map(Vec2::from).collect()
    }

    pub fn to_open(&self) -> Result<OpenCurve, GeometryError> {
        if self.kind != CurveKind::Open {
            return Err(GeometryError::InvalidDocument("expected an open curve".into()));
        }
        OpenCurve::new(self.points())
    }

    pub fn to_closed(&self) -> Result<ClosedCurve, GeometryError> {
        if self.kind != CurveKind::Closed {
            return Err(GeometryError::InvalidDocument("expected a closed curve".into()));
        }
        ClosedCurve::new(self.points(), self.corners.clone())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("curve documents always serialise")
    }
}
