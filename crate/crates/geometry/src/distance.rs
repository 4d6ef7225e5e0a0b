use crate::Vec2;

fn point_segment_distance(p: Vec2, a: Vec2, b: Vec2) -> f64 {
    let d = b - a;
    let len2 = d.norm_sq();
    let u = if len2 > 0.0 { ((p - a).dot(d) / len2).clamp(0.0, 1.0) } else { 0.0 };
    p.distance(a + d * u)
}

/// Distance from `p` to the polyline through `nodes` (closed if `closed`).
pub fn distance_to_polyline(p: Vec2, nodes: &[Vec2], closed: bool) -> f64 {
    let n = nodes.len();
    if n == 1 {
        return p.distance(nodes[0]);
    }
    let edges = if closed { n } else { n - 1 };
    (0..edges).map(|i| point_segment_distance(p, nodes[i], nodes[(i + 1) % n])).fold(f64::INFINITY, f64::min)
}

/// Symmetric Hausdorff distance between two polylines, measured from the nodes
/// of each to the segments of the other. Quadratic in the node counts.
pub fn hausdorff_distance(a: &[Vec2], b: &[Vec2], closed: bool) -> f64 {
    let one_way = |x: &[Vec2], y: &[Vec2]| x.iter().map(|p| distance_to_polyline(*p, y, closed)).fold(0.0, f64::max);
    one_way(a, b).max(one_way(b, a))
}
