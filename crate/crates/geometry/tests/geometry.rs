use std::f64::consts::PI;

use apcsf_geometry::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn arc(r: f64, t0: f64, t1: f64, n: usize) -> Vec<Vec2> {
    (0..n)
        .map(|i| {
            let t = t0 + (t1 - t0) * i as f64 / (n - 1) as f64;
            Vec2::new(r * t.cos(), r * t.sin())
        })
        .collect()
}

fn ring(r: f64, n: usize, ccw: bool) -> Vec<Vec2> {
    let s = if ccw { 1.0 } else { -1.0 };
    (0..n).map(|i| Vec2::from_angle(s * 2.0 * PI * i as f64 / n as f64) * r).collect()
}

// Independent area oracle: sum of signed triangle areas of a fan from node 0,
// each triangle evaluated with its own determinant.
fn fan_area(p: &[Vec2]) -> f64 {
    let mut a = 0.0;
    for i in 1..p.len() - 1 {
        let (o, b, c) = (p[0], p[i], p[i + 1]);
        a += 0.5 * ((b.x - o.x) * (c.y - o.y) - (c.x - o.x) * (b.y - o.y));
    }
    a
}

#[test]
fn circle_frames_have_reciprocal_radius_curvature() {
    // a closed circle treated as an open curve: one extra node overlaps the start
    let nodes = arc(2.0, 0.0, 2.0 * PI * 256.0 / 255.0, 257);
    let fr = frames(&OpenCurve::new(nodes).unwrap()).unwrap();
    for f in &fr {
        assert!((f.curvature - 0.5).abs() < 1e-3, "{}", f.curvature);
    }
}

#[test]
fn straight_segment_frames() {
    let nodes: Vec<Vec2> = (0..16).map(|i| Vec2::new(i as f64 / 15.0, 0.0)).collect();
    for f in frames(&OpenCurve::new(nodes).unwrap()).unwrap() {
        assert!(f.curvature.abs() < 1e-12);
        assert!((f.tangent - Vec2::new(1.0, 0.0)).norm() < 1e-12);
        assert!((f.normal - Vec2::new(0.0, 1.0)).norm() < 1e-12);
    }
}

#[test]
fn half_circle_has_unit_curvature_and_exact_normals() {
    let c = OpenCurve::new(arc(1.0, 0.0, PI, 128)).unwrap();
    for f in frames(&c).unwrap() {
        assert!((f.curvature - 1.0).abs() < 1e-3);
        assert!((f.tangent.norm() - 1.0).abs() < 1e-12);
        assert_eq!(f.normal, f.tangent.perp());
    }
}

#[test]
fn frame_weights_sum_to_length() {
    let c = OpenCurve::new(arc(1.3, 0.2, 2.9, 77)).unwrap();
    let w: f64 = frames(&c).unwrap().iter().map(|f| f.arclength_weight).sum();
    assert!((w - c.length()).abs() < 1e-12);
}

#[test]
fn lengths() {
    let seg: Vec<Vec2> = (0..9).map(|i| Vec2::new(3.0, 4.0) * (i as f64 / 8.0)).collect();
    assert!((length(&OpenCurve::new(seg).unwrap()) - 5.0).abs() < 1e-12);
    let circle = ClosedCurve::smooth(ring(1.0, 1024, true)).unwrap();
    assert!((circle.length() - 2.0 * PI).abs() < 1e-4);
}

fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b))
    }
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (l, r) = (simpson(f, a, m), simpson(f, m, b));
        if depth == 0 || (l + r - whole).abs() < 15.0 * tol {
            l + r + (l + r - whole) / 15.0
        } else {
            rec(f, a, m, l, 0.5 * tol, depth - 1) + rec(f, m, b, r, 0.5 * tol, depth - 1)
        }
    }
    rec(f, a, b, simpson(f, a, b), tol, 50)
}

#[test]
fn half_grim_reaper_length_matches_quadrature() {
    let ymax = PI / 2.0 - 0.1;
    let nodes: Vec<Vec2> = (0..512)
        .map(|i| {
            let y = ymax * i as f64 / 511.0;
            Vec2::new(-y.cos().ln(), y)
        })
        .collect();
    let quad = adaptive_simpson(&|y: f64| (1.0 + y.tan().powi(2)).sqrt(), 0.0, ymax, 1e-12);
    assert!((length(&OpenCurve::new(nodes).unwrap()) - quad).abs() < 1e-4);
}

#[test]
fn total_curvature_examples() {
    let half = OpenCurve::new(arc(1.0, 0.0, PI, 128)).unwrap();
    assert!((total_curvature(&half) - PI).abs() < 1e-3);
    let seg: Vec<Vec2> = (0..10).map(|i| Vec2::new(i as f64, 2.0 * i as f64)).collect();
    assert!(total_curvature(&OpenCurve::new(seg).unwrap()).abs() < 1e-12);
    assert!((total_curvature(&half.reversed()) + PI).abs() < 1e-3);
}

#[test]
fn signed_area_examples() {
    let square = ClosedCurve::smooth(vec![
        Vec2::new(0.0, 0.0),
        Vec2::new(1.0, 0.0),
        Vec2::new(1.0, 1.0),
        Vec2::new(0.0, 1.0),
    ])
    .unwrap();
    assert_eq!(signed_area(&square), 1.0);
    let cw = ClosedCurve::smooth(ring(1.0, 512, false)).unwrap();
    assert!((signed_area(&cw) + PI).abs() < 1e-3);
}

#[test]
fn figure_eight_area_vanishes() {
    // Gerono lemniscate x = cos t, y = sin t cos t; the lobes are traversed in
    // opposite senses and meet at the origin (t = π/2, 3π/2).
    let n = 400;
    let pts: Vec<Vec2> = (0..n)
        .map(|i| {
            let t = 2.0 * PI * i as f64 / n as f64;
            Vec2::new(t.cos(), t.sin() * t.cos())
        })
        .collect();
    let curve = ClosedCurve::smooth(pts.clone()).unwrap();
    // lobe oracle: fan-triangulate each lobe from the crossing point
    let q = n / 4;
    let mut right: Vec<Vec2> = vec![Vec2::ZERO];
    right.extend(pts[3 * q + 1..].iter().copied());
    right.extend(pts[..q].iter().copied());
    let mut left: Vec<Vec2> = vec![Vec2::ZERO];
    left.extend(pts[q + 1..3 * q].iter().copied());
    let oracle = fan_area(&right) + fan_area(&left);
    assert!(fan_area(&right) > 0.1 && fan_area(&left) < -0.1);
    assert!(oracle.abs() < 1e-6);
    assert!(signed_area(&curve).abs() < 1e-6);
}

fn random_star(rng: &mut ChaCha8Rng) -> Vec<Vec2> {
    let n = rng.gen_range(3..40);
    let mut angles: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..2.0 * PI)).collect();
    angles.sort_by(f64::total_cmp);
    angles.dedup_by(|a, b| (*a - *b).abs() < 1e-3);
    let c = Vec2::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
    let mut pts: Vec<Vec2> =
        angles.iter().map(|&t| c + Vec2::from_angle(t) * rng.gen_range(0.2..3.0)).collect();
    if rng.gen_bool(0.5) {
        pts.reverse();
    }
    pts
}

#[test]
fn shoelace_agrees_with_fan_triangulation_on_random_simple_polygons() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    while checked < 500 {
        let pts = random_star(&mut rng);
        if pts.len() < 4 {
            continue;
        }
        let curve = ClosedCurve::smooth(pts.clone()).unwrap();
        assert!((signed_area(&curve) - fan_area(&pts)).abs() < 1e-12);
        checked += 1;
    }
}

#[test]
fn turning_numbers() {
    let c = ClosedCurve::smooth(ring(1.0, 64, true)).unwrap();
    assert_eq!(turning_number(&c).unwrap(), 1);
    let twice: Vec<Vec2> = (0..128)
        .map(|i| Vec2::from_angle(4.0 * PI * i as f64 / 128.0) * (1.0 + 0.01 * (i as f64 / 128.0 * 2.0 * PI).sin()))
        .collect();
    assert_eq!(turning_number(&ClosedCurve::smooth(twice).unwrap()).unwrap(), 2);
    // upper semicircle doubled by its mirror image
    let mut full = arc(1.0, 0.0, PI, 65);
    let mirror: Vec<Vec2> = full[1..64].iter().rev().map(|p| Vec2::new(p.x, -p.y)).collect();
    full.extend(mirror);
    let m = turning_number(&ClosedCurve::smooth(full).unwrap()).unwrap();
    assert_eq!(m, 1);
    assert_eq!(m % 2, 1);
}

#[test]
fn square_with_declared_corners() {
    let sq = vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(1.0, 1.0), Vec2::new(0.0, 1.0)];
    let corners = (0..4).map(|index| Corner { index, angle: PI / 2.0 }).collect();
    let c = ClosedCurve::new(sq, corners).unwrap();
    assert_eq!(turning_number(&c).unwrap(), 1);
    assert_eq!(turning_number(&c.reversed()).unwrap(), -1);
}

#[test]
fn inconsistent_corner_is_rejected() {
    let sq = vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(1.0, 1.0), Vec2::new(0.0, 1.0)];
    let corners = vec![Corner { index: 0, angle: -PI / 2.0 + 0.8 }];
    let c = ClosedCurve::new(sq, corners).unwrap();
    assert!(matches!(turning_number(&c), Err(GeometryError::NonIntegerTurning { .. })));
}

#[test]
fn convexity() {
    assert!(is_convex(&OpenCurve::new(arc(1.0, 0.0, PI, 128)).unwrap(), 1e-9));
    let sine: Vec<Vec2> =
        (0..100).map(|i| i as f64 / 99.0).map(|x| Vec2::new(x, (2.0 * PI * x).sin())).collect();
    assert!(!is_convex(&OpenCurve::new(sine).unwrap(), 1e-9));
}

#[test]
fn degenerate_curves_are_rejected() {
    let dup = vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(2.0, 0.0)];
    assert!(matches!(OpenCurve::new(dup), Err(GeometryError::DegenerateCurve(_))));
    let short = vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(2.0, 0.0)];
    assert!(OpenCurve::new(short).is_err());
    let nan = vec![Vec2::new(0.0, 0.0), Vec2::new(f64::NAN, 0.0), Vec2::new(1.0, 0.0), Vec2::new(2.0, 0.0)];
    assert!(OpenCurve::new(nan).is_err());
}

#[test]
fn rigid_motions_preserve_curvature_and_area() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let base: Vec<Vec2> = (0..60)
        .map(|i| {
            let t = i as f64 / 59.0 * 4.0;
            Vec2::new(t.cos() * (1.0 + 0.3 * t), t.sin() * (1.0 + 0.1 * t * t))
        })
        .collect();
    let curve = OpenCurve::new(base.clone()).unwrap();
    let k0 = node_curvatures(&curve);
    for _ in 0..20 {
        let th = rng.gen_range(0.0..2.0 * PI);
        let shift = Vec2::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let rot = |p: Vec2| Vec2::new(th.cos() * p.x - th.sin() * p.y, th.sin() * p.x + th.cos() * p.y) + shift;
        let moved = curve.map(rot).unwrap();
        for (a, b) in k0.iter().zip(node_curvatures(&moved)) {
            assert!((a - b).abs() < 1e-10);
        }
        let closed_a = ClosedCurve::smooth(base.clone()).unwrap();
        let closed_b = ClosedCurve::smooth(moved.nodes().to_vec()).unwrap();
        assert!((signed_area(&closed_a) - signed_area(&closed_b)).abs() < 1e-10);
        let mirrored = ClosedCurve::smooth(base.iter().map(|p| Vec2::new(-p.x, p.y)).collect()).unwrap();
        assert!((signed_area(&closed_a) + signed_area(&mirrored)).abs() < 1e-12);
    }
}

#[test]
fn closed_total_turning_is_two_pi_times_index() {
    let pts: Vec<Vec2> = (0..300)
        .map(|i| {
            let t = 2.0 * PI * i as f64 / 300.0;
            Vec2::from_angle(t) * (1.0 + 0.3 * (3.0 * t).cos())
        })
        .collect();
    let c = ClosedCurve::smooth(pts).unwrap();
    let raw = turning_number_raw(&c);
    assert!((raw * 2.0 * PI - 2.0 * PI * turning_number(&c).unwrap() as f64).abs() < 1e-9);
}

#[test]
fn endpoint_curvature_converges_at_second_order_on_circles() {
    for r in [0.5, 1.0, 2.0] {
        let err = |n: usize| {
            let k = node_curvatures(&OpenCurve::new(arc(r, 0.3, 2.5, n)).unwrap());
            k.iter().map(|k| (k - 1.0 / r).abs()).fold(0.0, f64::max)
        };
        let (e1, e2) = (err(64), err(128));
        assert!(e1 / e2 >= 2.0, "r = {r}: {e1} -> {e2}");
    }
}

#[test]
fn document_round_trip() {
    let c = OpenCurve::new(arc(1.0, 0.0, PI, 16)).unwrap();
    let text = CurveDocument::from_open(&c).to_json();
    let back = parse_curve(&text).unwrap().to_open().unwrap();
    assert_eq!(back, c);
    let sq = ClosedCurve::new(
        vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(1.0, 1.0), Vec2::new(0.0, 1.0)],
        vec![Corner { index: 2, angle: PI / 2.0 }],
    )
    .unwrap();
    let back = parse_curve(&CurveDocument::from_closed(&sq).to_json()).unwrap().to_closed().unwrap();
    assert_eq!(back, sq);
}

#[test]
fn malformed_documents_are_errors() {
    for text in [
        "",
        "{}",
        r#"{"kind":"open","nodes":[[0,0],[1,0]]}"#,
        r#"{"kind":"spiral","nodes":[]}"#,
        r#"{"kind":"open","nodes":[[0,0],[1,0],[2,0],[3,0]],"corners":[{"index":1,"angle":1.0}]}"#,
        r#"{"kind":"closed","nodes":[[0,0],[1,0],[1,1],[0,1]],"corners":[{"index":9,"angle":1.0}]}"#,
    ] {
        assert!(parse_curve(text).is_err(), "{text}");
    }
}

proptest::proptest! {
    #[test]
    fn area_flips_with_orientation_and_ignores_translation(
        radii in proptest::collection::vec(0.2f64..3.0, 4..40),
        shift in (-10.0f64..10.0, -10.0f64..10.0),
    ) {
        let n = radii.len();
        let pts: Vec<Vec2> = radii.iter().enumerate().map(|(i, r)| Vec2::from_angle(2.0 * PI * i as f64 / n as f64) * *r).collect();
        let curve = ClosedCurve::smooth(pts.clone()).unwrap();
        let a = signed_area(&curve);
        proptest::prop_assert!(a > 0.0);
        proptest::prop_assert!((signed_area(&curve.reversed()) + a).abs() < 1e-12);
        let moved = ClosedCurve::smooth(pts.iter().map(|p| *p + Vec2::new(shift.0, shift.1)).collect()).unwrap();
        proptest::prop_assert!((signed_area(&moved) - a).abs() < 1e-9);
        proptest::prop_assert_eq!(turning_number(&curve).unwrap(), 1);
    }
}
