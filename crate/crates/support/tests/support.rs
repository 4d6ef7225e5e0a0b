use std::f64::consts::{PI, TAU};

use apcsf_geometry::{signed_area, OpenCurve, Vec2};
use apcsf_support::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn close(a: Vec2, b: Vec2, tol: f64) -> bool {
    a.distance(b) < tol
}

/// Arc of the circle orthogonal to Σ = circle(0, r_sigma), centred on the
/// positive y-axis, running outside Σ from the right intersection to the left.
fn orthogonal_arc(r_sigma: f64, rho: f64, n: usize) -> OpenCurve {
    let d = (r_sigma * r_sigma + rho * rho).sqrt();
    let c = Vec2::new(0.0, d);
    // the two circles meet at (±ρR/d, R²/d)
    let right = Vec2::new(rho * r_sigma / d, r_sigma * r_sigma / d);
    let a0 = (right - c).angle();
    let a1 = PI - a0;
    let nodes = (0..n)
        .map(|i| c + Vec2::from_angle(a0 + (a1 - a0) * i as f64 / (n - 1) as f64) * rho)
        .collect();
    OpenCurve::new(nodes).unwrap()
}

#[test]
fn evaluate_examples() {
    let c = SupportCurve::circle(Vec2::ZERO, 2.0).unwrap();
    let s = c.evaluate(0.0);
    assert!(close(s.point, Vec2::new(2.0, 0.0), 1e-15));
    assert!(close(s.inner_normal, Vec2::new(-1.0, 0.0), 1e-15));
    assert_eq!(s.inner_normal, s.tangent.perp());

    let line = SupportCurve::x_axis();
    for x in [-3.0, 0.0, 2.5] {
        let s = line.evaluate(x);
        assert!(close(s.point, Vec2::new(-x, 0.0), 1e-15));
        // τ(a) = −ν_Σ must be e₂
        assert!(close(-s.inner_normal, Vec2::new(0.0, 1.0), 1e-15));
    }

    let e = SupportCurve::ellipse(Vec2::ZERO, 2.0, 1.0, 0.0).unwrap();
    let s = e.evaluate(0.0);
    assert!(close(s.point, Vec2::new(2.0, 0.0), 1e-15));
    assert!((s.curvature - 2.0).abs() < 1e-12);
}

#[test]
fn widths() {
    for r in [0.5, 1.0, 4.0] {
        let c = SupportCurve::circle(Vec2::new(1.0, -2.0), r).unwrap();
        assert!((c.minimum_width().unwrap() - 2.0 * r).abs() < 1e-6);
    }
    let line = SupportCurve::x_axis();
    assert_eq!(line.minimum_width(), Err(SupportError::UnsupportedForLine));
    assert_eq!(line.width_or_infinity(), f64::INFINITY);
}

/// Brute force over discretised antipodal pairs: for each of `n` samples find
/// the sample whose tangent is most nearly opposite and measure the distance
/// between the two parallel supporting lines.
fn brute_force_width(support: &SupportCurve, n: usize) -> f64 {
    let period = support.period().unwrap();
    let samples: Vec<SupportSample> = (0..n).map(|i| support.evaluate(period * i as f64 / n as f64)).collect();
    let angles: Vec<f64> = samples.iter().map(|s| s.tangent.angle().rem_euclid(TAU)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| angles[i].total_cmp(&angles[j]));
    let sorted: Vec<f64> = order.iter().map(|&i| angles[i]).collect();
    let mut best = f64::INFINITY;
    for i in 0..n {
        let target = (angles[i] + PI).rem_euclid(TAU);
        let k = sorted.partition_point(|&a| a < target);
        for cand in [k % n, (k + n - 1) % n] {
            let j = order[cand];
            let w = (samples[i].point - samples[j].point).dot(samples[i].inner_normal).abs();
            best = best.min(w);
        }
    }
    best
}

#[test]
fn ellipse_width_matches_brute_force_oracle() {
    let e = SupportCurve::ellipse(Vec2::new(0.3, 0.1), 2.0, 1.0, 0.4).unwrap();
    let oracle = brute_force_width(&e, 100_000);
    assert!((oracle - 2.0).abs() < 1e-4, "oracle {oracle}");
    assert!((e.minimum_width().unwrap() - oracle).abs() < 1e-4);
    assert!((e.minimum_width().unwrap() - 2.0).abs() < 1e-4);
}

#[test]
fn table_support_reproduces_a_circle() {
    let nodes: Vec<Vec2> = (0..64).map(|i| Vec2::from_angle(-TAU * i as f64 / 64.0) * 3.0).collect();
    let t = SupportCurve::table(&nodes).unwrap();
    let SupportKind::Table(table) = t.kind() else { panic!() };
    assert!(table.samples().len() >= TABLE_MIN_SAMPLES);
    assert!((t.minimum_width().unwrap() - 6.0).abs() < 1e-4);
    for i in 0..50 {
        let s = t.evaluate(t.period().unwrap() * i as f64 / 50.0);
        assert!((s.curvature - 1.0 / 3.0).abs() < 1e-3);
        // inner normal points to the centre
        assert!(s.inner_normal.dot(-s.point.normalized()) > 0.999);
    }
    let (_, q) = t.project(Vec2::new(0.0, 5.0)).unwrap();
    assert!(close(q, Vec2::new(0.0, 3.0), 1e-5));
    let bumpy: Vec<Vec2> = (0..64)
        .map(|i| {
            let a = TAU * i as f64 / 64.0;
            Vec2::from_angle(a) * (1.0 + 0.5 * (5.0 * a).cos())
        })
        .collect();
    assert!(matches!(SupportCurve::table(&bumpy), Err(SupportError::InvalidSupport(_))));
}

#[test]
fn short_piece_examples() {
    let c = SupportCurve::circle(Vec2::ZERO, 1.0).unwrap();
    let arc = c.short_piece(0.0, PI / 4.0).unwrap();
    assert!((arc.normal_turning - PI / 4.0).abs() < 1e-12);
    assert!((arc.length() - PI / 4.0).abs() < 1e-6);
    assert!(arc.forward);
    let back = c.short_piece(PI / 4.0, 0.0).unwrap();
    assert!(!back.forward && (back.length() - PI / 4.0).abs() < 1e-6);

    let point = c.short_piece(1.0, 1.0).unwrap();
    assert!(point.degenerate && point.samples.len() == 1 && point.length() == 0.0);

    assert_eq!(c.short_piece(0.0, PI), Err(SupportError::AntipodalEndpoints));
}

#[test]
fn short_piece_and_complement_cover_the_support() {
    let e = SupportCurve::ellipse(Vec2::ZERO, 2.0, 1.0, 0.2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let (u, v) = (rng.gen_range(0.0..TAU), rng.gen_range(0.0..TAU));
        let Ok(arc) = e.short_piece(u, v) else { continue };
        // complement: the arc from v back to u the long way round
        let long_turn = TAU - arc.normal_turning;
        assert!((arc.normal_turning + long_turn - TAU).abs() < 1e-6);
        assert!(arc.normal_turning < PI);
        let rev = e.short_piece(v, u).unwrap();
        assert!((rev.length() - arc.length()).abs() < 1e-9);
        let perimeter: f64 = {
            let n = 200_000;
            (0..n).map(|i| e.point(TAU * i as f64 / n as f64).distance(e.point(TAU * (i + 1) as f64 / n as f64))).sum()
        };
        let steps = 20_000;
        let (from, span) = if arc.forward { (v, (u - v).rem_euclid(TAU)) } else { (u, (v - u).rem_euclid(TAU)) };
        let comp: Vec<Vec2> = (0..=steps).map(|i| e.point(from + span * i as f64 / steps as f64)).collect();
        let comp_len: f64 = comp.windows(2).map(|w| w[0].distance(w[1])).sum();
        assert!((arc.length() + comp_len - perimeter).abs() < 1e-5);
    }
}

#[test]
fn projections() {
    let c = SupportCurve::circle(Vec2::ZERO, 1.0).unwrap();
    let (t, q) = c.project(Vec2::new(2.0, 0.0)).unwrap();
    assert!(t.abs() < 1e-15 && close(q, Vec2::new(1.0, 0.0), 1e-15));
    let (s, q) = SupportCurve::x_axis().project(Vec2::new(3.0, 5.0)).unwrap();
    assert!(close(q, Vec2::new(3.0, 0.0), 1e-15) && (s + 3.0).abs() < 1e-15);
    let e = SupportCurve::ellipse(Vec2::ZERO, 2.0, 1.0, 0.0).unwrap();
    let (_, q) = e.project(Vec2::new(0.0, 3.0)).unwrap();
    assert!(close(q, Vec2::new(0.0, 1.0), 1e-12));
    assert_eq!(c.project(Vec2::ZERO), Err(SupportError::ProjectionDiverged));
    // off-axis projection is orthogonal
    let p = Vec2::new(1.7, 2.3);
    let (t, q) = e.project(p).unwrap();
    assert!((p - q).dot(e.evaluate(t).tangent).abs() < 1e-12);
}

#[test]
fn half_disk_area_on_a_line() {
    let nodes: Vec<Vec2> = (0..400).map(|i| Vec2::from_angle(PI * i as f64 / 399.0)).collect();
    let anchored = AnchoredCurve::anchor(OpenCurve::new(nodes).unwrap(), SupportCurve::x_axis()).unwrap();
    let arc = anchored.short_piece().unwrap();
    assert_eq!(arc.samples.len(), 2);
    assert!((anchored.enclosed_area().unwrap() - PI / 2.0).abs() < 1e-3);
    let rev = anchored.reversed();
    let (a, b) = (anchored.enclosed_area().unwrap(), rev.enclosed_area().unwrap());
    assert!((a + b).abs() < 1e-13);
}

#[test]
fn orthogonal_arc_is_anchored_and_encloses_the_lens() {
    let sigma = SupportCurve::circle(Vec2::ZERO, 4.0).unwrap();
    let anchored = AnchoredCurve::anchor(orthogonal_arc(4.0, 1.0, 300), sigma).unwrap();
    let report = anchored.contact();
    assert!(report.max_angle() < ANGLE_TOLERANCE);
    // lens between two orthogonal circles (radii 4 and 1, centre distance √17)
    let (r, rho) = (4.0f64, 1.0f64);
    let d = (r * r + rho * rho).sqrt();
    let a1 = (rho / d).asin(); // half angle subtended at the centre of Σ
    let a2 = (r / d).asin(); // half angle at the arc centre
    let lens = rho * rho * a2 + r * r * a1 - r * rho;
    let outside = PI * rho * rho - lens;
    let area = anchored.enclosed_area().unwrap();
    assert!((area - outside).abs() < 1e-4, "{area} vs {outside}");
    // the outer arc spans π + 2·atan(ρ/R) as seen from its centre
    assert!((anchored.total_curvature() - (PI + 2.0 * (rho / r).atan())).abs() < 1e-9);
}

#[test]
fn enclosed_area_equals_signed_area_of_closing_curve() {
    let sigma = SupportCurve::ellipse(Vec2::new(0.1, -0.2), 5.0, 4.0, 0.3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checked = 0;
    for _ in 0..40 {
        let pa = rng.gen_range(0.0..TAU);
        let pb = pa + rng.gen_range(-1.0..1.0);
        let a = sigma.evaluate(pa);
        let b = sigma.evaluate(pb);
        // cubic Hermite from a (leaving outward) to b (arriving inward)
        let k = 3.0;
        let nodes: Vec<Vec2> = (0..200)
            .map(|i| {
                let t = i as f64 / 199.0;
                let (h00, h10, h01, h11) =
                    (2.0 * t * t * t - 3.0 * t * t + 1.0, t * t * t - 2.0 * t * t + t, -2.0 * t * t * t + 3.0 * t * t, t * t * t - t * t);
                a.point * h00 + (-a.inner_normal) * (k * h10) + b.point * h01 + b.inner_normal * (k * h11)
            })
            .collect();
        let Ok(curve) = OpenCurve::new(nodes) else { continue };
        let Ok(anchored) = AnchoredCurve::anchor(curve, sigma.clone()) else { continue };
        let arc = anchored.short_piece().unwrap();
        let closed = closing_curve(&anchored, &arc).unwrap();
        assert!((enclosed_area(&anchored, &arc).unwrap() - signed_area(&closed)).abs() < 1e-12);
        checked += 1;
    }
    assert!(checked >= 30, "only {checked} configurations were valid");
}

#[test]
fn enclosed_area_is_rigid_motion_invariant() {
    let sigma = SupportCurve::circle(Vec2::ZERO, 4.0).unwrap();
    let base = AnchoredCurve::anchor(orthogonal_arc(4.0, 1.3, 200), sigma).unwrap();
    let a0 = base.enclosed_area().unwrap();
    for (th, shift) in [(0.7, Vec2::new(1.0, 2.0)), (-2.0, Vec2::new(-3.0, 0.5))] {
        let m = |p: Vec2| Vec2::new(f64::cos(th) * p.x - f64::sin(th) * p.y, f64::sin(th) * p.x + f64::cos(th) * p.y) + shift;
        let moved_sigma = SupportCurve::circle(shift, 4.0).unwrap();
        let moved = AnchoredCurve::anchor(base.curve().map(m).unwrap(), moved_sigma).unwrap();
        assert!((moved.enclosed_area().unwrap() - a0).abs() < 1e-10);
    }
}

#[test]
fn mismatched_arc_is_rejected() {
    let sigma = SupportCurve::circle(Vec2::ZERO, 4.0).unwrap();
    let anchored = AnchoredCurve::anchor(orthogonal_arc(4.0, 1.0, 100), sigma.clone()).unwrap();
    let wrong = sigma.short_piece(0.1, 0.2).unwrap();
    assert!(matches!(enclosed_area(&anchored, &wrong), Err(SupportError::MismatchedEndpoints { .. })));
}

#[test]
fn non_perpendicular_curves_are_rejected() {
    // a chord-like arc leaving the x-axis at 45 degrees
    let nodes: Vec<Vec2> = (0..50)
        .map(|i| {
            let t = PI / 4.0 + PI / 2.0 * i as f64 / 49.0;
            Vec2::new(t.cos(), t.sin() - (PI / 4.0).sin())
        })
        .collect();
    let err = AnchoredCurve::new(OpenCurve::new(nodes).unwrap(), SupportCurve::x_axis()).unwrap_err();
    assert!(matches!(err, SupportError::NotPerpendicular { .. }));
}

#[test]
fn support_documents() {
    let c = parse_support(r#"{"kind":"circle","center":[0,0],"radius":4}"#).unwrap();
    assert!((c.minimum_width().unwrap() - 8.0).abs() < 1e-9);
    let l = parse_support(r#"{"kind":"line"}"#).unwrap();
    assert!(l.is_line());
    let e = parse_support(r#"{"kind":"ellipse","center":[0,0],"semi_axes":[2,1]}"#).unwrap();
    assert!((e.minimum_width().unwrap() - 2.0).abs() < 1e-6);
    for bad in [
        r#"{"kind":"circle","center":[0,0],"radius":-1}"#,
        r#"{"kind":"ellipse","center":[0,0],"semi_axes":[1,2]}"#,
        r#"{"kind":"line","direction":[0,0]}"#,
        r#"{"kind":"table","nodes":[[0,0],[1,0]]}"#,
        r#"{"kind":"blob"}"#,
    ] {
        assert!(parse_support(bad).is_err(), "{bad}");
    }
    let doc = SupportDocument::describe(&c);
    assert_eq!(doc, SupportDocument::Circle { center: [0.0, 0.0], radius: 4.0 });
}

#[test]
fn corrector_restores_contact_after_a_perturbation() {
    let sigma = SupportCurve::circle(Vec2::ZERO, 4.0).unwrap();
    let anchored = AnchoredCurve::anchor(orthogonal_arc(4.0, 1.0, 120), sigma.clone()).unwrap();
    let mut nodes = anchored.curve().nodes().to_vec();
    let n = nodes.len();
    nodes[0] += Vec2::new(0.01, 0.02);
    nodes[1] += Vec2::new(-0.003, 0.0);
    nodes[n - 1] += Vec2::new(0.0, -0.01);
    enforce_contact(&mut nodes, &sigma).unwrap();
    let fixed = AnchoredCurve::new(OpenCurve::new(nodes).unwrap(), sigma).unwrap();
    assert!(fixed.contact().max_angle() < 1e-8);
}

#[test]
fn corrector_rotation_leaves_the_area_alone() {
    let sigma = SupportCurve::circle(Vec2::ZERO, 4.0).unwrap();
    let anchored = AnchoredCurve::anchor(orthogonal_arc(4.0, 1.0, 200), sigma.clone()).unwrap();
    let area = anchored.enclosed_area().unwrap();
    // Tilt the first few nodes about the (fixed) endpoint: only the angle is off.
    let mut nodes = anchored.curve().nodes().to_vec();
    let q = nodes[0];
    let (s, c) = 0.01f64.sin_cos();
    for p in nodes.iter_mut().take(6).skip(1) {
        let r = *p - q;
        *p = q + Vec2::new(c * r.x - s * r.y, s * r.x + c * r.y);
    }
    let tilted = AnchoredCurve::from_parts(OpenCurve::new(nodes.clone()).unwrap(), sigma.clone(), anchored.endpoint_params());
    let tilted_area = tilted.enclosed_area().unwrap();
    enforce_contact(&mut nodes, &sigma).unwrap();
    let fixed = AnchoredCurve::new(OpenCurve::new(nodes).unwrap(), sigma).unwrap();
    assert!(fixed.contact().max_angle() < 1e-8);
    assert!((fixed.enclosed_area().unwrap() - tilted_area).abs() < 1e-9 * area.abs(), "{} vs {}", fixed.enclosed_area().unwrap(), tilted_area);
}
