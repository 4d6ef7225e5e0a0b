//! Tridiagonal solvers and cubic splines used for support tables and node
//! redistribution.

use apcsf_geometry::Vec2;

/// Solves a tridiagonal system in place (Thomas algorithm). `lower[0]` and
/// `upper[n-1]` are ignored. Returns `None` on a zero pivot.
pub fn solve_tridiagonal(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &mut [f64]) -> Option<()> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut b = diag[0];
    if b == 0.0 {
        return None;
    }
    rhs[0] /= b;
    for i in 1..n {
        c[i - 1] = upper[i - 1] / b;
        b = diag[i] - lower[i] * c[i - 1];
        if b == 0.0 || !b.is_finite() {
            return None;
        }
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / b;
    }
    for i in (0..n - 1).rev() {
        rhs[i] -= c[i] * rhs[i + 1];
    }
    Some(())
}

/// Solves a cyclic tridiagonal system: row `i` reads
/// `lower[i]·x[i-1] + diag[i]·x[i] + upper[i]·x[i+1] = rhs[i]` with indices
/// taken modulo `n`. Uses the Sherman–Morrison correction; needs `n ≥ 3`.
pub fn solve_cyclic_tridiagonal(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &mut [f64]) -> Option<()> {
    let n = diag.len();
    let alpha = upper[n - 1];
    let beta = lower[0];
    let gamma = -diag[0];
    let mut d = diag.to_vec();
    d[0] -= gamma;
    d[n - 1] -= alpha * beta / gamma;
    solve_tridiagonal(lower, &d, upper, rhs)?;
    let mut u = vec![0.0; n];
    u[0] = gamma;
    u[n - 1] = alpha;
    solve_tridiagonal(lower, &d, upper, &mut u)?;
    let fact = (rhs[0] + beta * rhs[n - 1] / gamma) / (1.0 + u[0] + beta * u[n - 1] / gamma);
    for i in 0..n {
        rhs[i] -= fact * u[i];
    }
    Some(())
}

/// Cubic spline through plane points with knots `s` (strictly increasing).
#[derive(Clone, Debug)]
pub struct CubicSpline2 {
    s: Vec<f64>,
    p: Vec<Vec2>,
    m: Vec<Vec2>,
    periodic: bool,
}

impl CubicSpline2 {
    /// Natural spline (zero second derivative at both ends).
    pub fn natural(s: Vec<f64>, p: Vec<Vec2>) -> Option<Self> {
        let n = p.len();
        if n < 3 || s.len() != n {
            return None;
        }
        let mut lower = vec![0.0; n];
        let mut diag = vec![1.0; n];
        let mut upper = vec![0.0; n];
        let mut rx = vec![0.0; n];
        let mut ry = vec![0.0; n];
        for i in 1..n - 1 {
            let (h0, h1) = (s[i] - s[i - 1], s[i + 1] - s[i]);
            lower[i] = h0 / 6.0;
            diag[i] = (h0 + h1) / 3.0;
            upper[i] = h1 / 6.0;
            let r = (p[i + 1] - p[i]) / h1 - (p[i] - p[i - 1]) / h0;
            rx[i] = r.x;
            ry[i] = r.y;
        }
        solve_tridiagonal(&lower, &diag, &upper, &mut rx)?;
        solve_tridiagonal(&lower, &diag, &upper, &mut ry)?;
        let m = rx.into_iter().zip(ry).map(|(x, y)| Vec2::new(x, y)).collect();
        Some(CubicSpline2 { s, p, m, periodic: false })
    }

    /// Periodic spline through a closed node list; `s` holds the knot of each
    /// node and `period` the parameter length of the whole loop.
    pub fn periodic(s: Vec<f64>, p: Vec<Vec2>, period: f64) -> Option<Self> {
        let n = p.len();
        if n < 3 || s.len() != n {
            return None;
        }
        let h = |i: usize| if i + 1 < n { s[i + 1] - s[i] } else { period - s[n - 1] + s[0] };
        let mut lower = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut upper = vec![0.0; n];
        let mut rx = vec![0.0; n];
        let mut ry = vec![0.0; n];
        for i in 0..n {
            let (h0, h1) = (h((i + n - 1) % n), h(i));
            lower[i] = h0 / 6.0;
            diag[i] = (h0 + h1) / 3.0;
            upper[i] = h1 / 6.0;
            let r = (p[(i + 1) % n] - p[i]) / h1 - (p[i] - p[(i + n - 1) % n]) / h0;
            rx[i] = r.x;
            ry[i] = r.y;
        }
        solve_cyclic_tridiagonal(&lower, &diag, &upper, &mut rx)?;
        solve_cyclic_tridiagonal(&lower, &diag, &upper, &mut ry)?;
        let mut s = s;
        let mut p = p;
        let mut m: Vec<Vec2> = rx.into_iter().zip(ry).map(|(x, y)| Vec2::new(x, y)).collect();
        // closing knot so evaluation never has to wrap
        s.push(s[0] + period);
        p.push(p[0]);
        m.push(m[0]);
        Some(CubicSpline2 { s, p, m, periodic: true })
    }

    pub fn knots(&self) -> &[f64] {
        &self.s
    }

    pub fn start(&self) -> f64 {
        self.s[0]
    }

    pub fn end(&self) -> f64 {
        self.s[self.s.len() - 1]
    }

    fn locate(&self, t: f64) -> (usize, f64) {
        let t = if self.periodic {
            let period = self.end() - self.start();
            self.start() + (t - self.start()).rem_euclid(period)
        } else {
            t.clamp(self.start(), self.end())
        };
        let k = match self.s.binary_search_by(|v| v.total_cmp(&t)) {
            Ok(k) => k.min(self.s.len() - 2),
            Err(k) => k.saturating_sub(1).min(self.s.len() - 2),
        };
        (k, t)
    }

    /// Position, first and second derivative at parameter `t`.
    pub fn eval_derivatives(&self, t: f64) -> (Vec2, Vec2, Vec2) {
        let (k, t) = self.locate(t);
        let h = self.s[k + 1] - self.s[k];
        let a = (self.s[k + 1] - t) / h;
        let b = (t - self.s[k]) / h;
        let (p0, p1, m0, m1) = (self.p[k], self.p[k + 1], self.m[k], self.m[k + 1]);
        let pos = p0 * a + p1 * b + (m0 * (a * a * a - a) + m1 * (b * b * b - b)) * (h * h / 6.0);
        let d1 = (p1 - p0) / h + (m1 * (3.0 * b * b - 1.0) - m0 * (3.0 * a * a - 1.0)) * (h / 6.0);
        let d2 = m0 * a + m1 * b;
        (pos, d1, d2)
    }

    pub fn eval(&self, t: f64) -> Vec2 {
        self.eval_derivatives(t).0
    }
}
