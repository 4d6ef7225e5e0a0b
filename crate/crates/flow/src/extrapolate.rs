/// Least-squares fit of `1/κ_max² ≈ slope·(T − t)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SingularTimeFit {
    pub t_est: f64,
    /// One-sigma uncertainty of `t_est` from the fit residuals.
    pub uncertainty: f64,
    pub slope: f64,
    /// Index of the first sample used.
    pub window_start: usize,
}

/// Fits `T` over the samples whose κ_max is within the last decade of the
/// final value. Residuals are taken relative to `1/κ_max²`, which keeps the
/// smallest (latest) values from being swamped. Returns `None` if κ_max has not
/// grown tenfold over the series or the fit is degenerate.
pub fn fit_singular_time(times: &[f64], kappa_max: &[f64]) -> Option<SingularTimeFit> {
    let n = times.len().min(kappa_max.len());
    if n < 3 {
        return None;
    }
    let last = kappa_max[n - 1];
    let first = kappa_max[..n].iter().copied().fold(f64::INFINITY, f64::min);
    if !(last >= 10.0 * first) {
        return None;
    }
    let mut start = n - 1;
    while start > 0 && kappa_max[start - 1] >= 0.1 * last {
        start -= 1;
    }
    fit_window(&times[start..n], &kappa_max[start..n]).map(|mut f| {
        f.window_start = start;
        f
    })
}

/// The relative-weighted fit over every given sample.
pub fn fit_window(times: &[f64], kappa_max: &[f64]) -> Option<SingularTimeFit> {
    let n = times.len();
    if n < 3 {
        return None;
    }
    // y = slope·T − slope·t; divide by y: 1 = (slope·T)/y − slope·t/y.
    let (mut s11, mut s12, mut s22, mut r1, mut r2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (&t, &k) in times.iter().zip(kappa_max) {
        let y = 1.0 / (k * k);
        let (x1, x2) = (-t / y, 1.0 / y);
        s11 += x1 * x1;
        s12 += x1 * x2;
        s22 += x2 * x2;
        r1 += x1;
        r2 += x2;
    }
    let det = s11 * s22 - s12 * s12;
    if !(det.abs() > 0.0) {
        return None;
    }
    let slope = (s22 * r1 - s12 * r2) / det;
    let intercept = (s11 * r2 - s12 * r1) / det;
    if !(slope > 0.0) {
        return None;
    }
    let t_est = intercept / slope;
    let rss: f64 = times
        .iter()
        .zip(kappa_max)
        .map(|(&t, &k)| {
            let y = 1.0 / (k * k);
            let r = 1.0 - (slope * (t_est - t)) / y;
            r * r
        })
        .sum();
    let sigma2 = if n > 2 { rss / (n - 2) as f64 } else { 0.0 };
    let (c11, c12, c22) = (sigma2 * s22 / det, -sigma2 * s12 / det, sigma2 * s11 / det);
    let (g1, g2) = (-intercept / (slope * slope), 1.0 / slope);
    let var = g1 * g1 * c11 + 2.0 * g1 * g2 * c12 + g2 * g2 * c22;
    Some(SingularTimeFit { t_est, uncertainty: var.max(0.0).sqrt(), slope, window_start: 0 })
}
