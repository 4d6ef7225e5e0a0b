//! End-to-end acceptance suite. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line, whatever the outcome; the
//! process exits non-zero if any criterion fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use apcsf_cli::shapes::{perpendicular_arc, ArcParams};
use apcsf_cli::{generate_example, ExampleName};
use apcsf_flow::{boundary_identity_residual, resample_anchored, run, FlowConfig, Outcome, Run};
use apcsf_geometry::{hausdorff_distance, signed_area, ClosedCurve, OpenCurve, Vec2};
use apcsf_line::{reflect, run_reflected};
use apcsf_singularity::{
    analyze, check_criterion, grim_reaper, grim_reaper_fit, Analysis, CriterionCase, RescaledCurve, Side, TailConfig,
    TypeVerdict,
};
use apcsf_support::{AnchoredCurve, SupportCurve, SupportSample};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

/// Relative area drift between the first and last monitor.
fn area_drift(r: &Run) -> f64 {
    let m = &r.trajectory.monitors;
    ((m.last().unwrap().area - m[0].area) / m[0].area).abs()
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

/// The arc of the circle of radius ρ orthogonal to the circle of radius `r`.
fn orthogonal_arc(r: f64, rho: f64, n: usize, bump: f64) -> AnchoredCurve {
    let sigma = SupportCurve::circle(Vec2::ZERO, r).unwrap();
    perpendicular_arc(&sigma, &ArcParams { radius: rho, bump, at: PI / 2.0, nodes: n }).unwrap()
}

/// Blow-up runs of one example at N = 400 and, for Examples One and Three, N = 800.
struct ExampleRuns {
    name: ExampleName,
    initial: AnchoredCurve,
    coarse: Run,
    coarse_analysis: Result<Analysis, String>,
    fine: Option<(Run, Result<Analysis, String>)>,
}

fn example_runs(name: ExampleName, refine: bool) -> ExampleRuns {
    let initial = generate_example(name).unwrap();
    let go = |n: usize| {
        let config = FlowConfig { node_count: n, ..FlowConfig::blowup() };
        let r = run(&initial, &config).unwrap();
        let a = analyze(&r, &TailConfig::default()).map_err(|e| e.to_string());
        (r, a)
    };
    let (coarse, coarse_analysis) = go(400);
    let fine = refine.then(|| go(800));
    ExampleRuns { name, initial, coarse, coarse_analysis, fine }
}

fn is_blowup(r: &Run) -> bool {
    matches!(r.outcome, Outcome::CurvatureBlowup { .. })
}

fn growth(r: &Run) -> f64 {
    let m = &r.trajectory.monitors;
    m.last().unwrap().kappa_max / m[0].kappa_max
}

fn conservation() -> Verdict {
    let stationary = |n: usize| {
        let config = FlowConfig { node_count: n, t_end: 1.0, ..FlowConfig::default() };
        timed(|| area_drift(&run(&orthogonal_arc(4.0, 1.0, n, 0.0), &config).unwrap()))
    };
    let one = generate_example(ExampleName::One).unwrap();
    let loop_run = |n: usize| {
        // Same time-step rule at both resolutions, so the comparison isolates N.
        let config = FlowConfig { node_count: n, kappa_stop_factor: 10.0, dt_safety: 2e-4, ..FlowConfig::blowup() };
        timed(|| {
            let r = run(&one, &config).unwrap();
            (is_blowup(&r), area_drift(&r))
        })
    };
    let ((s400, t1), (s800, t2)) = (stationary(400), stationary(800));
    let (((b400, e400), t3), ((b800, e800), t4)) = (loop_run(400), loop_run(800));
    let slowest = [t1, t2, t3, t4].into_iter().max().unwrap();
    let pass = s400 <= 1e-3
        && s800 <= 0.5 * s400
        && b400
        && b800
        && e400 <= 1e-3
        && e800 <= 0.5 * e400
        && slowest <= Duration::from_secs(60);
    verdict(
        pass,
        format!(
            "stationary arc {s400:.2e} -> {s800:.2e}; example one to 10x kappa {e400:.2e} -> {e800:.2e}; slowest run {:.1}s",
            slowest.as_secs_f64()
        ),
    )
}

fn monotonicity(runs: &[&Run]) -> Verdict {
    let mut worst: f64 = f64::NEG_INFINITY;
    for r in runs {
        let m = &r.trajectory.monitors;
        let l0 = m[0].length;
        for w in m.windows(2) {
            worst = worst.max((w[1].length - w[0].length) / l0);
        }
    }
    verdict(worst <= 1e-8, format!("{} runs, largest per-step relative increase of L {worst:.2e}", runs.len()))
}

fn curvature_pinning(examples: &[ExampleRuns]) -> Verdict {
    let mut pass = true;
    let mut parts = Vec::new();
    for ex in examples {
        let m = &ex.coarse.trajectory.monitors;
        let total0 = m[0].total_curvature;
        let l = (total0 / (2.0 * PI)).floor() as i64 + 1;
        let (lo, hi) = ((2 * l - 2) as f64 * PI, (2 * l) as f64 * PI);
        let margin = m.iter().map(|x| (x.total_curvature - lo).min(hi - x.total_curvature)).fold(f64::INFINITY, f64::min);
        let short = m[0].length < ex.initial.support().minimum_width().unwrap();
        pass &= short && margin >= 0.05;
        parts.push(format!("{} l={l} margin {margin:.3}", ex.name));
    }
    verdict(pass, parts.join(", "))
}

fn criterion_verdicts() -> Verdict {
    let mut pass = true;
    let mut parts = Vec::new();
    let mut slowest = Duration::ZERO;
    let mut check = |label: &str, curve: &AnchoredCurve, ok: &dyn Fn(&apcsf_singularity::CriterionVerdict) -> bool| {
        let (v, t) = timed(|| check_criterion(curve).unwrap());
        slowest = slowest.max(t);
        let good = ok(&v);
        pass &= good;
        parts.push(format!(
            "{label}: {:?} q={} predicted={}{}",
            v.case,
            v.quotient.map_or("-".into(), |q| format!("{q:.3}")),
            v.predicted_singularity,
            if v.reoriented { " (reoriented)" } else { "" }
        ));
    };
    let one = generate_example(ExampleName::One).unwrap();
    check("one", &one, &|v| {
        v.case == CriterionCase::PositiveAreaQuotient
            && v.predicted_singularity
            && v.l == 2
            && v.quotient.is_some_and(|q| q < 4.5 * PI)
    });
    let three = generate_example(ExampleName::Three).unwrap();
    check("three", &three, &|v| v.case == CriterionCase::NegativeArea && v.predicted_singularity);
    let four = generate_example(ExampleName::Four).unwrap();
    check("four", &four, &|v| v.case == CriterionCase::NegativeArea && v.predicted_singularity && v.reoriented);
    // An embedded arc of index one has L²/A ≈ 2π, far above the threshold π.
    let arc = orthogonal_arc(4.0, 1.0, 400, 0.0);
    check("oversized arc", &arc, &|v| !v.predicted_singularity);
    pass &= slowest <= Duration::from_secs(1);
    verdict(pass, format!("{}; slowest {:.0} ms", parts.join(", "), slowest.as_secs_f64() * 1e3))
}

fn analysis(a: &Result<Analysis, String>) -> Option<&Analysis> {
    a.as_ref().ok()
}

fn finite_time_blowup(one: &ExampleRuns, three: &ExampleRuns) -> Verdict {
    let mut pass = true;
    let mut parts = Vec::new();
    for ex in [one, three] {
        let (fine, fine_analysis) = ex.fine.as_ref().unwrap();
        let blow = is_blowup(&ex.coarse) && is_blowup(fine);
        let g = growth(&ex.coarse).min(growth(fine));
        let (t400, t800) = match (analysis(&ex.coarse_analysis), analysis(fine_analysis)) {
            (Some(a), Some(b)) => (a.report.t_est, b.report.t_est),
            _ => (f64::NAN, f64::NAN),
        };
        let rel = ((t800 - t400) / t400).abs();
        pass &= blow && g >= 100.0 && rel <= 0.05;
        parts.push(format!("{}: growth {g:.0}x, T {t400:.6e} / {t800:.6e} ({:.2}%)", ex.name, rel * 100.0));
    }
    verdict(pass, parts.join(", "))
}

fn rate_floor(examples: &[ExampleRuns]) -> Verdict {
    let mut pass = true;
    let mut parts = Vec::new();
    for ex in examples.iter().filter(|e| is_blowup(&e.coarse)) {
        let floor = analysis(&ex.coarse_analysis).map_or(f64::NAN, |a| a.report.rate_floor);
        pass &= floor >= 0.2;
        parts.push(format!("{} {floor:.3}", ex.name));
    }
    verdict(pass && !parts.is_empty(), format!("min kappa_max^2 (T-t) over the tail: {}", parts.join(", ")))
}

fn type_two(one: &ExampleRuns, three: &ExampleRuns) -> Verdict {
    let mut pass = true;
    let mut parts = Vec::new();
    for ex in [one, three] {
        let Some(a) = analysis(&ex.coarse_analysis) else {
            pass = false;
            parts.push(format!("{}: no analysis", ex.name));
            continue;
        };
        let r = &a.report.rate_series;
        let ratio = r.iter().map(|x| x.1).fold(f64::NEG_INFINITY, f64::max) / r[0].1;
        pass &= a.report.type_verdict == TypeVerdict::TypeII && ratio >= 4.0;
        parts.push(format!("{}: {:?}, growth {ratio:.2}x", ex.name, a.report.type_verdict));
    }
    verdict(pass, parts.join(", "))
}

fn hamilton_and_grim(three: &ExampleRuns) -> Verdict {
    let template = grim_reaper(512, -1.2, 1.2).unwrap();
    let self_test = grim_reaper_fit(&RescaledCurve::from_nodes(template.nodes().to_vec(), [None, None]).unwrap()).unwrap();
    let Some(a) = analysis(&three.coarse_analysis) else {
        return verdict(false, "example three could not be analysed".into());
    };
    let Some(last) = a.stages.last() else {
        return verdict(false, format!("no rescaled frames ({:?})", a.report.blowup_note));
    };
    let kmax = last.frame.curve.max_abs_curvature();
    let Some(fit) = a.report.grim_fit.as_ref() else {
        return verdict(false, "no grim reaper fit".into());
    };
    let pass = (kmax - 1.0).abs() <= 1e-6 && fit.residual <= 0.1 && self_test.residual <= 1e-3;
    verdict(
        pass,
        format!(
            "{} frames, last max|k| {kmax:.9}, residual {:.4} ({}), template self-test {:.1e}",
            a.stages.len(),
            fit.residual,
            if fit.side == Side::Interior { "interior" } else { "boundary" },
            self_test.residual
        ),
    )
}

fn l2_rate(examples: &[ExampleRuns]) -> Verdict {
    let mut pass = true;
    let mut parts = Vec::new();
    for ex in examples.iter().filter(|e| is_blowup(&e.coarse)) {
        match analysis(&ex.coarse_analysis) {
            Some(a) => {
                pass &= a.report.l2.holds;
                parts.push(format!("{} C={:.3} slope={:.3}", ex.name, a.report.l2.constant, a.report.l2.slope));
            }
            None => {
                pass = false;
                parts.push(format!("{}: no analysis", ex.name));
            }
        }
    }
    verdict(pass && !parts.is_empty(), parts.join(", "))
}

/// Polar curve r(φ), φ ∈ [0, Φ], anchored on the x-axis.
fn polar(r: impl Fn(f64) -> f64, phi_end: f64, n: usize) -> AnchoredCurve {
    let nodes = (0..n).map(|i| Vec2::from_angle(phi_end * i as f64 / (n - 1) as f64) * r(phi_end * i as f64 / (n - 1) as f64));
    AnchoredCurve::anchor(OpenCurve::new(nodes.collect()).unwrap(), SupportCurve::x_axis()).unwrap()
}

fn line_mode() -> Verdict {
    let initial = polar(|phi| 1.0 + 0.1 * (2.0 * phi).cos(), PI, 400);
    let times = [0.1, 0.25, 0.5, 0.75, 1.0];
    let config = FlowConfig { t_end: 1.0, snapshot_times: times[..4].to_vec(), ..FlowConfig::default() };
    let start = resample_anchored(&initial, 400, config.redistribution_weight).unwrap();
    let half = run(&start, &config).unwrap();
    let doubled = run_reflected(&reflect(&start).unwrap(), &config).unwrap();
    let mut worst: f64 = 0.0;
    for t in times {
        let a = half.trajectory.snapshots.iter().find(|s| (s.time - t).abs() < 1e-12);
        let b = doubled.snapshot_at(t);
        worst = match (a, b) {
            (Some(a), Some(b)) => worst.max(hausdorff_distance(&a.nodes, &doubled.upper_half(b), false)),
            _ => f64::INFINITY,
        };
    }

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut odd = 0;
    for _ in 0..100 {
        let k = rng.gen_range(0..3usize);
        let phi_end = PI * (2 * k + 1) as f64;
        let c: Vec<f64> = (0..4).map(|_| rng.gen_range(-0.15..0.15)).collect();
        let r = |phi: f64| 1.0 + c.iter().enumerate().map(|(j, a)| a * ((j + 1) as f64 * PI * phi / phi_end).cos()).sum::<f64>();
        let m = reflect(&polar(r, phi_end, 300 * (k + 1))).map(|d| d.index()).unwrap_or(0);
        if m.rem_euclid(2) == 1 {
            odd += 1;
        }
    }
    verdict(worst <= 1e-3 && odd == 100, format!("Hausdorff on [0, 1] {worst:.2e}; odd index on {odd}/100 random curves"))
}

fn fan_area(p: &[Vec2]) -> f64 {
    let o = p[0];
    (1..p.len() - 1).map(|i| 0.5 * (p[i] - o).cross(p[i + 1] - o)).sum()
}

/// Star-shaped polygon around a random centre: simple by construction.
fn random_star(rng: &mut ChaCha8Rng) -> Vec<Vec2> {
    let n = rng.gen_range(4..40);
    let mut angles: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..2.0 * PI)).collect();
    angles.sort_by(f64::total_cmp);
    angles.dedup_by(|a, b| (*a - *b).abs() < 1e-3);
    let c = Vec2::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
    let mut p: Vec<Vec2> = angles.iter().map(|&t| c + Vec2::from_angle(t) * rng.gen_range(0.2..3.0)).collect();
    if rng.gen_bool(0.5) {
        p.reverse();
    }
    p
}

/// Antipodal sweep: for each sample, the sample with the most nearly opposite
/// tangent, and the gap between the two parallel supporting lines.
fn brute_force_width(support: &SupportCurve, n: usize) -> f64 {
    let period = support.period().unwrap();
    let samples: Vec<SupportSample> = (0..n).map(|i| support.evaluate(period * i as f64 / n as f64)).collect();
    let angle = |s: &SupportSample| s.tangent.angle().rem_euclid(2.0 * PI);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| angle(&samples[i]).total_cmp(&angle(&samples[j])));
    let sorted: Vec<f64> = order.iter().map(|&i| angle(&samples[i])).collect();
    let mut best = f64::INFINITY;
    for s in &samples {
        let k = sorted.partition_point(|&a| a < (angle(s) + PI).rem_euclid(2.0 * PI));
        for cand in [k % n, (k + n - 1) % n] {
            best = best.min((s.point - samples[order[cand]].point).dot(s.inner_normal).abs());
        }
    }
    best
}

fn oracles() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut shoelace: f64 = 0.0;
    let mut polygons = 0;
    while polygons < 500 {
        let p = random_star(&mut rng);
        if p.len() < 4 {
            continue;
        }
        shoelace = shoelace.max((signed_area(&ClosedCurve::smooth(p.clone()).unwrap()) - fan_area(&p)).abs());
        polygons += 1;
    }

    let ellipse = SupportCurve::ellipse(Vec2::ZERO, 2.0, 1.0, 0.0).unwrap();
    let width = ellipse.minimum_width().unwrap();
    let sweep = brute_force_width(&ellipse, 100_000);

    let sigma = SupportCurve::ellipse(Vec2::new(0.1, -0.2), 5.0, 4.0, 0.3).unwrap();
    let mut concat: f64 = 0.0;
    let mut curves = 0;
    while curves < 30 {
        let pa = rng.gen_range(0.0..2.0 * PI);
        let (a, b) = (sigma.evaluate(pa), sigma.evaluate(pa + rng.gen_range(-1.0..1.0)));
        // cubic Hermite leaving Σ outward at a and arriving inward at b
        let nodes: Vec<Vec2> = (0..200)
            .map(|i| {
                let t = i as f64 / 199.0;
                let (t2, t3) = (t * t, t * t * t);
                a.point * (2.0 * t3 - 3.0 * t2 + 1.0)
                    + (-a.inner_normal) * (3.0 * (t3 - 2.0 * t2 + t))
                    + b.point * (3.0 * t2 - 2.0 * t3)
                    + b.inner_normal * (3.0 * (t3 - t2))
            })
            .collect();
        let Ok(anchored) = OpenCurve::new(nodes).map_err(|_| ()).and_then(|c| AnchoredCurve::anchor(c, sigma.clone()).map_err(|_| ()))
        else {
            continue;
        };
        let arc = anchored.short_piece().unwrap();
        let mut joined = anchored.curve().nodes().to_vec();
        joined.extend_from_slice(&arc.samples[1..arc.samples.len() - 1]);
        let oracle = signed_area(&ClosedCurve::smooth(joined).unwrap());
        concat = concat.max((anchored.enclosed_area().unwrap() - oracle).abs());
        curves += 1;
    }

    let pass = shoelace <= 1e-12 && (width - 2.0).abs() <= 1e-4 && (sweep - width).abs() <= 1e-4 && concat <= 1e-12;
    verdict(
        pass,
        format!(
            "shoelace vs fan {shoelace:.1e} ({polygons} polygons); ellipse width {width:.8} vs sweep {sweep:.8}; enclosed area vs concatenation {concat:.1e} ({curves} curves)"
        ),
    )
}

fn boundary_identity() -> Verdict {
    let arc = orthogonal_arc(4.0, 1.0, 2000, 0.15);
    let residual = |n: usize| {
        let config = FlowConfig { node_count: n, t_end: 0.05, dt_safety: 1e-4, ..FlowConfig::default() };
        let r = run(&arc, &config).unwrap();
        let (a, b) = boundary_identity_residual(&r.final_state).unwrap();
        a.abs().max(b.abs())
    };
    let (r1, r2) = (residual(100), residual(200));
    verdict(r1 / r2 >= 1.8, format!("residual {r1:.3e} -> {r2:.3e} (ratio {:.2})", r1 / r2))
}

fn main() {
    let mut results: Vec<(u32, &str, Verdict)> = Vec::new();
    let mut report = |id: u32, title: &'static str, v: Verdict| {
        println!("{} criterion {id:>2} {title}: {}", if v.pass { "PASS" } else { "FAIL" }, v.detail);
        results.push((id, title, v));
    };

    report(1, "conservation", conservation());

    let examples: Vec<ExampleRuns> =
        ExampleName::ALL.iter().map(|&n| example_runs(n, matches!(n, ExampleName::One | ExampleName::Three))).collect();
    let (one, three) = (&examples[0], &examples[2]);
    let mut all_runs: Vec<&Run> = examples.iter().map(|e| &e.coarse).collect();
    all_runs.extend(examples.iter().filter_map(|e| e.fine.as_ref().map(|f| &f.0)));

    report(2, "length monotonicity", monotonicity(&all_runs));
    report(3, "total curvature pinning", curvature_pinning(&examples));
    report(4, "criterion verdicts", criterion_verdicts());
    report(5, "finite-time blow-up", finite_time_blowup(one, three));
    report(6, "rate floor", rate_floor(&examples));
    report(7, "type II", type_two(one, three));
    report(8, "Hamilton blow-up and grim reaper", hamilton_and_grim(three));
    report(9, "L2 rate", l2_rate(&examples));
    report(10, "line mode", line_mode());
    report(11, "oracle equivalences", oracles());
    report(12, "boundary identity", boundary_identity());

    let failed: Vec<u32> = results.iter().filter(|r| !r.2.pass).map(|r| r.0).collect();
    if failed.is_empty() {
        println!("acceptance: all {} criteria pass", results.len());
    } else {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}
