use apcsf_geometry::{signed_area_of, turning_number, ClosedCurve, Vec2};
use apcsf_support::{contact_report, AnchoredCurve, SupportCurve, SupportKind, ANGLE_TOLERANCE};

use crate::LineError;

/// The double δ of an open curve γ on a line: γ followed by its mirror image
/// traversed backwards. With `N = γ.len() − 1` the double has `2N` nodes, node
/// `i` and node `(2N − i) mod 2N` are mirror partners, and nodes `0` and `N`
/// (the endpoints of γ) lie on the line.
#[derive(Clone, Debug)]
pub struct ReflectedCurve {
    closed: ClosedCurve,
    index: i64,
    area: f64,
    line: SupportCurve,
    reoriented: bool,
}

/// Mirror image of `p` across the line of `support`.
pub fn mirror(support: &SupportCurve, p: Vec2) -> Vec2 {
    match support.kind() {
        SupportKind::Line { point, direction } => p.reflect_across(*point, *direction),
        _ => p,
    }
}

pub(crate) fn line_of(anchored: &AnchoredCurve) -> Result<SupportCurve, LineError> {
    if anchored.support().is_line() {
        Ok(anchored.support().clone())
    } else {
        Err(LineError::NotLine)
    }
}

/// Reflects an anchored curve across its line support. The result is oriented
/// so that its index `m` is positive; reorienting reverses the node order about
/// node 0, which also flips the sign of the stored area.
pub fn reflect(anchored: &AnchoredCurve) -> Result<ReflectedCurve, LineError> {
    let line = line_of(anchored)?;
    let (report, _) = contact_report(anchored.curve(), &line)?;
    let tol = line.contact_tolerance();
    for (end, d) in [('a', report.distance_a), ('b', report.distance_b)] {
        if !(d <= tol) {
            return Err(LineError::OffLine { end, distance: d });
        }
    }
    for (end, angle) in [('a', report.angle_a), ('b', report.angle_b)] {
        if !(angle <= ANGLE_TOLERANCE) {
            return Err(LineError::NotPerpendicular { end, angle });
        }
    }
    let half = anchored.curve().nodes();
    let n = half.len() - 1;
    let mut nodes = Vec::with_capacity(2 * n);
    nodes.extend_from_slice(half);
    for i in (1..n).rev() {
        nodes.push(mirror(&line, half[i]));
    }
    ReflectedCurve::from_double(nodes, line)
}

impl ReflectedCurve {
    /// Wraps a mirror-symmetric double (node layout as for [`reflect`]),
    /// reorienting it if its index is negative.
    pub fn from_double(mut nodes: Vec<Vec2>, line: SupportCurve) -> Result<Self, LineError> {
        let mut closed = ClosedCurve::smooth(nodes.clone())?;
        let mut index = turning_number(&closed)?;
        let reoriented = index < 0;
        if reoriented {
            let m = nodes.len();
            nodes = (0..m).map(|i| nodes[(m - i) % m]).collect();
            closed = ClosedCurve::smooth(nodes)?;
            index = -index;
        }
        if index % 2 == 0 {
            return Err(LineError::EvenIndex { m: index });
        }
        let area = signed_area_of(closed.nodes());
        Ok(ReflectedCurve { closed, index, area, line, reoriented })
    }

    pub fn closed(&self) -> &ClosedCurve {
        &self.closed
    }

    /// The index (turning number) m, odd and positive.
    pub fn index(&self) -> i64 {
        self.index
    }

    /// Oriented area A(δ) after orienting δ so that m > 0.
    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn length(&self) -> f64 {
        self.closed.length()
    }

    pub fn line(&self) -> &SupportCurve {
        &self.line
    }

    /// Whether the node order was reversed to make m positive.
    pub fn reoriented(&self) -> bool {
        self.reoriented
    }

    /// `N`, the node count of the original half minus one.
    pub fn half_count(&self) -> usize {
        self.closed.len() / 2
    }

    /// Largest distance between a node and the mirror image of its partner.
    pub fn symmetry_defect(&self) -> f64 {
        symmetry_defect(self.closed.nodes(), &self.line)
    }

    /// The original open curve (from `a` to `b`) inside a node list of this
    /// double's layout.
    pub fn upper_half(&self, nodes: &[Vec2]) -> Vec<Vec2> {
        upper_half(nodes, self.reoriented)
    }
}

pub fn symmetry_defect(nodes: &[Vec2], line: &SupportCurve) -> f64 {
    let m = nodes.len();
    (0..m).map(|i| nodes[i].distance(mirror(line, nodes[(m - i) % m]))).fold(0.0, f64::max)
}

/// Replaces each node by the average of itself and the mirror image of its
/// partner; nodes on the axis are projected onto it. Returns the largest move.
pub fn resymmetrize(nodes: &mut [Vec2], line: &SupportCurve) -> f64 {
    let m = nodes.len();
    let old = nodes.to_vec();
    let mut moved: f64 = 0.0;
    for i in 0..m {
        let target = (old[i] + mirror(line, old[(m - i) % m])) * 0.5;
        moved = moved.max(target.distance(old[i]));
        nodes[i] = target;
    }
    moved
}

pub(crate) fn upper_half(nodes: &[Vec2], reoriented: bool) -> Vec<Vec2> {
    let m = nodes.len();
    let n = m / 2;
    if reoriented {
        (0..=n).map(|i| nodes[(m - i) % m]).collect()
    } else {
        nodes[..=n].to_vec()
    }
}
