//! Plain SVG renderings: Σ in grey, curves in blue, the short piece dashed.

use std::fmt::Write;

use apcsf_geometry::Vec2;
use apcsf_support::{SupportCurve, SupportKind};

/// A fixed window in curve coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Viewport {
    pub min: Vec2,
    pub max: Vec2,
}

const CANVAS: f64 = 800.0;

impl Viewport {
    /// The bounding box of all given curves, padded by 5%, and of Σ if it is closed.
    pub fn fit<'a>(curves: impl IntoIterator<Item = &'a [Vec2]>, support: &SupportCurve) -> Viewport {
        let mut min = Vec2::new(f64::INFINITY, f64::INFINITY);
        let mut max = Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        let mut add = |p: Vec2| {
            min = Vec2::new(min.x.min(p.x), min.y.min(p.y));
            max = Vec2::new(max.x.max(p.x), max.y.max(p.y));
        };
        for c in curves {
            c.iter().copied().for_each(&mut add);
        }
        if support.is_closed() {
            support_polyline(support, None).into_iter().for_each(&mut add);
        }
        if !(min.x.is_finite() && max.x.is_finite()) {
            return Viewport { min: Vec2::new(-1.0, -1.0), max: Vec2::new(1.0, 1.0) };
        }
        let pad = 0.05 * (max.x - min.x).max(max.y - min.y).max(1e-9);
        Viewport { min: Vec2::new(min.x - pad, min.y - pad), max: Vec2::new(max.x + pad, max.y + pad) }
    }

    fn scale(&self) -> f64 {
        CANVAS / (self.max.x - self.min.x).max(self.max.y - self.min.y)
    }

    fn map(&self, p: Vec2) -> (f64, f64) {
        let s = self.scale();
        ((p.x - self.min.x) * s, (self.max.y - p.y) * s)
    }
}

fn support_polyline(support: &SupportCurve, view: Option<&Viewport>) -> Vec<Vec2> {
    match (support.kind(), support.period()) {
        (SupportKind::Line { point, direction }, _) => {
            let reach = view.map_or(1.0, |v| (v.max - v.min).norm() + (v.min - *point).norm() + (v.max - *point).norm());
            vec![*point - *direction * reach, *point + *direction * reach]
        }
        (_, Some(period)) => (0..=512).map(|i| support.point(period * i as f64 / 512.0)).collect(),
        _ => Vec::new(),
    }
}

fn path(view: &Viewport, pts: &[Vec2]) -> String {
    let mut d = String::new();
    for (i, p) in pts.iter().enumerate() {
        let (x, y) = view.map(*p);
        let _ = write!(d, "{}{x:.2},{y:.2}", if i == 0 { "M" } else { " L" });
    }
    d
}

/// One frame: Σ, the curve and, when available, the short piece.
pub fn render(view: &Viewport, support: &SupportCurve, curves: &[&[Vec2]], short_piece: Option<&[Vec2]>) -> String {
    let w = CANVAS;
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{w}\" viewBox=\"0 0 {w} {w}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    );
    let sigma = support_polyline(support, Some(view));
    let _ = writeln!(out, "<path d=\"{}\" fill=\"none\" stroke=\"#888888\" stroke-width=\"1.5\"/>", path(view, &sigma));
    if let Some(piece) = short_piece {
        let _ = writeln!(
            out,
            "<path d=\"{}\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"2\" stroke-dasharray=\"6 4\"/>",
            path(view, piece)
        );
    }
    for c in curves {
        let _ = writeln!(out, "<path d=\"{}\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\"/>", path(view, c));
    }
    out.push_str("</svg>\n");
    out
}
