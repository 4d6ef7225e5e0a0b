//! JSON description of support curves, e.g.
//! `{"kind":"circle","center":[0,0],"radius":4}` or
//! `{"kind":"line","point":[0,0],"direction":[-1,0]}`.

use apcsf_geometry::Vec2;
use serde::{Deserialize, Serialize};

use crate::{SupportCurve, SupportError, SupportKind};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum SupportDocument {
    Circle {
        center: [f64; 2],
        radius: f64,
    },
    Ellipse {
        center: [f64; 2],
        semi_axes: [f64; 2],
        #[serde(default)]
        rotation: f64,
    },
    Line {
        #[serde(default)]
        point: [f64; 2],
        #[serde(default = "default_direction")]
        direction: [f64; 2],
    },
    Table {
        nodes: Vec<[f64; 2]>,
    },
}

fn default_direction() -> [f64; 2] {
    [-1.0, 0.0]
}

impl SupportDocument {
    pub fn build(&self) -> Result<SupportCurve, SupportError> {
        match self {
            SupportDocument::Circle { center, radius } => SupportCurve::circle((*center).into(), *radius),
            SupportDocument::Ellipse { center, semi_axes, rotation } => {
                SupportCurve::ellipse((*center).into(), semi_axes[0], semi_axes[1], *rotation)
            }
            SupportDocument::Line { point, direction } => SupportCurve::line((*point).into(), (*direction).into()),
            SupportDocument::Table { nodes } => {
                SupportCurve::table(&nodes.iter().copied().map(Vec2::from).collect::<Vec<_>>())
            }
        }
    }

    pub fn describe(support: &SupportCurve) -> Self {
        match support.kind() {
            SupportKind::Circle { center, radius } => SupportDocument::Circle { center: (*center).into(), radius: *radius },
            SupportKind::Ellipse { center, a, b, rotation } => {
                SupportDocument::Ellipse { center: (*center).into(), semi_axes: [*a, *b], rotation: *rotation }
            }
            SupportKind::Line { point, direction } => {
                SupportDocument::Line { point: (*point).into(), direction: (*direction).into() }
            }
            SupportKind::Table(t) => SupportDocument::Table { nodes: t.samples().iter().map(|&p| p.into()).collect() },
        }
    }
}

/// Parses and builds a support description.
pub fn parse_support(text: &str) -> Result<SupportCurve, SupportError> {
    let doc: SupportDocument = serde_json::from_str(text).map_err(|e| SupportError::InvalidDocument(e.to_string()))?;
    doc.build()
}
