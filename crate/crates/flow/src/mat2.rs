use std::ops::{Add, Mul, Sub};

use apcsf_geometry::Vec2;

/// 2×2 matrix, row major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Mat2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Mat2 {
    pub const ZERO: Mat2 = Mat2 { a: 0.0, b: 0.0, c: 0.0, d: 0.0 };

    pub fn scalar(s: f64) -> Mat2 {
        Mat2 { a: s, b: 0.0, c: 0.0, d: s }
    }

    /// Reflection `I − 2nnᵀ` across the line orthogonal to the unit vector `n`.
    pub fn reflection(n: Vec2) -> Mat2 {
        Mat2 { a: 1.0 - 2.0 * n.x * n.x, b: -2.0 * n.x * n.y, c: -2.0 * n.x * n.y, d: 1.0 - 2.0 * n.y * n.y }
    }

    pub fn scale(self, s: f64) -> Mat2 {
        Mat2 { a: self.a * s, b: self.b * s, c: self.c * s, d: self.d * s }
    }

    pub fn inverse(self) -> Option<Mat2> {
        let det = self.a * self.d - self.b * self.c;
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        Some(Mat2 { a: self.d / det, b: -self.b / det, c: -self.c / det, d: self.a / det })
    }

    pub fn apply(self, v: Vec2) -> Vec2 {
        Vec2::new(self.a * v.x + self.b * v.y, self.c * v.x + self.d * v.y)
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, o: Mat2) -> Mat2 {
        Mat2 { a: self.a + o.a, b: self.b + o.b, c: self.c + o.c, d: self.d + o.d }
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, o: Mat2) -> Mat2 {
        Mat2 { a: self.a - o.a, b: self.b - o.b, c: self.c - o.c, d: self.d - o.d }
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        Mat2 {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }
}

/// Block Thomas algorithm for `L[i]·x[i-1] + D[i]·x[i] + U[i]·x[i+1] = r[i]`.
pub(crate) fn solve_block_tridiagonal(lower: &[Mat2], diag: &[Mat2], upper: &[Mat2], rhs: &[Vec2]) -> Option<Vec<Vec2>> {
    let n = diag.len();
    let mut cp = vec![Mat2::ZERO; n];
    let mut dp = vec![Vec2::ZERO; n];
    let inv = diag[0].inverse()?;
    cp[0] = inv * upper[0];
    dp[0] = inv.apply(rhs[0]);
    for i in 1..n {
        let inv = (diag[i] - lower[i] * cp[i - 1]).inverse()?;
        cp[i] = inv * upper[i];
        dp[i] = inv.apply(rhs[i] - lower[i].apply(dp[i - 1]));
    }
    let mut x = dp;
    for i in (0..n - 1).rev() {
        x[i] = x[i] - cp[i].apply(x[i + 1]);
    }
    Some(x)
}
