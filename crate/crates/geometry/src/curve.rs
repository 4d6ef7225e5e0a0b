use serde::{Deserialize, Serialize};

use crate::{GeometryError, Vec2};

/// Consecutive nodes closer than this multiple of the curve length are degenerate.
pub const EPSILON_REGULAR_FACTOR: f64 = 1e-9;

const MIN_NODES: usize = 4;

/// Ordered open polyline; the parameter increases from endpoint `a` (first
/// node) to endpoint `b` (last node).
#[derive(Clone, Debug, PartialEq)]
pub struct OpenCurve {
    nodes: Vec<Vec2>,
}

/// A declared tangent discontinuity of a closed curve.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Corner {
    pub index: usize,
    /// Exterior angle in (−π, π].
    pub angle: f64,
}

/// Closed polygon; the last node connects back to the first.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedCurve {
    nodes: Vec<Vec2>,
    corners: Vec<Corner>,
}

pub fn edge_lengths(nodes: &[Vec2]) -> Vec<f64> {
    nodes.windows(2).map(|w| w[0].distance(w[1])).collect()
}

/// Shoelace sum over an implicitly closed node list.
pub fn signed_area_of(nodes: &[Vec2]) -> f64 {
    let n = nodes.len();
    if n < 3 {
        return 0.0;
    }
    let mut acc = 0.0;
    for i in 0..n {
        acc += nodes[i].cross(nodes[(i + 1) % n]);
    }
    0.5 * acc
}

fn check_nodes(nodes: &[Vec2], closed: bool) -> Result<(), GeometryError> {
    if nodes.len() < MIN_NODES {
        return Err(GeometryError::DegenerateCurve(format!(
            "{} nodes, need at least {MIN_NODES}",
            nodes.len()
        )));
    }
    if let Some(i) = nodes.iter().position(|p| !p.is_finite()) {
        return Err(GeometryError::DegenerateCurve(format!(
            "non-finite coordinate at node {i}"
        )));
    }
    let mut h = edge_lengths(nodes);
    if closed {
        h.push(nodes[nodes.len() - 1].distance(nodes[0]));
    }
    let total: f64 = h.iter().sum();
    let eps = EPSILON_REGULAR_FACTOR * total;
    if !(total > 0.0) || !total.is_finite() {
        return Err(GeometryError::DegenerateCurve("zero length".into()));
    }
    if let Some(i) = h.iter().position(|&d| !(d > eps)) {
        return Err(GeometryError::DegenerateCurve(format!(
            "nodes {i} and {} coincide (spacing {:.3e})",
            (i + 1) % nodes.len(),
            h[i]
        )));
    }
    Ok(())
}

impl OpenCurve {
    pub fn new(nodes: Vec<Vec2>) -> Result<Self, GeometryError> {
        check_nodes(&nodes, false)?;
        Ok(OpenCurve { nodes })
    }

    pub fn from_points(points: &[[f64; 2]]) -> Result<Self, GeometryError> {
        Self::new(points.iter().copied().map(Vec2::from).collect())
    }

    pub fn nodes(&self) -> &[Vec2] {
        &self.nodes
    }

    pub fn into_nodes(self) -> Vec<Vec2> {
        self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn first(&self) -> Vec2 {
        self.nodes[0]
    }

    pub fn last(&self) -> Vec2 {
        self.nodes[self.nodes.len() - 1]
    }

    pub fn length(&self) -> f64 {
        edge_lengths(&self.nodes).iter().sum()
    }

    /// The same curve traversed from `b` to `a`.
    pub fn reversed(&self) -> OpenCurve {
        let mut nodes = self.nodes.clone();
        nodes.reverse();
        OpenCurve { nodes }
    }

    pub fn map(&self, f: impl Fn(Vec2) -> Vec2) -> Result<OpenCurve, GeometryError> {
        OpenCurve::new(self.nodes.iter().map(|&p| f(p)).collect())
    }
}

impl ClosedCurve {
    pub fn new(nodes: Vec<Vec2>, corners: Vec<Corner>) -> Result<Self, GeometryError> {
        check_nodes(&nodes, true)?;
        for c in &corners {
            if c.index >= nodes.len() {
                return Err(GeometryError::DegenerateCurve(format!(
                    "corner index {} out of range",
                    c.index
                )));
            }
            let pi = std::f64::consts::PI;
            if !(c.angle > -pi && c.angle <= pi) {
                return Err(GeometryError::DegenerateCurve(format!(
                    "corner angle {} outside (-pi, pi]",
                    c.angle
                )));
            }
        }
        Ok(ClosedCurve { nodes, corners })
    }

    pub fn smooth(nodes: Vec<Vec2>) -> Result<Self, GeometryError> {
        Self::new(nodes, Vec::new())
    }

    pub fn nodes(&self) -> &[Vec2] {
        &self.nodes
    }

    pub fn corners(&self) -> &[Corner] {
        &self.corners
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn length(&self) -> f64 {
        let n = self.nodes.len();
        edge_lengths(&self.nodes).iter().sum::<f64>() + self.nodes[n - 1].distance(self.nodes[0])
    }

    pub fn reversed(&self) -> ClosedCurve {
        let n = self.nodes.len();
        let mut nodes = self.nodes.clone();
        nodes.reverse();
        let corners = self
            .corners
            .iter()
            .map(|c| Corner {
                index: n - 1 - c.index,
                // π is the only representable value of ±π.
                angle: if c.angle == std::f64::consts::PI { c.angle } else { -c.angle },
            })
            .collect();
        ClosedCurve { nodes, corners }
    }
}
