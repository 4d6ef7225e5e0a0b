use apcsf_geometry::Vec2;

use crate::discrete::discretize;
use crate::{FlowError, FlowState};

const STENCIL: usize = 5;

/// Curvature and its arclength derivative at the first of `pts`, from the
/// interpolating quartic through five nodes written as a graph over the
/// prescribed end tangent `u`.
fn endpoint_jet(pts: &[Vec2], u: Vec2) -> (f64, f64) {
    let v = u.perp();
    let o = pts[0];
    let xi: Vec<f64> = pts.iter().map(|p| (*p - o).dot(u)).collect();
    let eta: Vec<f64> = pts.iter().map(|p| (*p - o).dot(v)).collect();
    // η(ξ) = Σ c_k ξ^k; solve the Vandermonde system.
    let mut a = [[0.0; STENCIL + 1]; STENCIL];
    for r in 0..STENCIL {
        let mut pw = 1.0;
        for c in 0..STENCIL {
            a[r][c] = pw;
            pw *= xi[r];
        }
        a[r][STENCIL] = eta[r];
    }
    let c = gauss(a);
    let (d1, d2, d3) = (c[1], 2.0 * c[2], 6.0 * c[3]);
    let q = 1.0 + d1 * d1;
    let kappa = d2 / q.powf(1.5);
    let dk_dxi = d3 / q.powf(1.5) - 3.0 * d1 * d2 * d2 / q.powf(2.5);
    (kappa, dk_dxi / q.sqrt())
}

fn gauss<const N: usize, const M: usize>(mut a: [[f64; M]; N]) -> [f64; N] {
    for col in 0..N {
        let piv = (col..N).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        a.swap(col, piv);
        for r in col + 1..N {
            let f = a[r][col] / a[col][col];
            for c in col..M {
                a[r][c] -= f * a[col][c];
            }
        }
    }
    let mut x = [0.0; N];
    for r in (0..N).rev() {
        let mut s = a[r][N];
        for c in r + 1..N {
            s -= a[r][c] * x[c];
        }
        x[r] = s / a[r][r];
    }
    x
}

/// Endpoint curvature data used by the boundary identity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EndpointJets {
    pub kappa_a: f64,
    pub kappa_s_a: f64,
    pub kappa_b: f64,
    pub kappa_s_b: f64,
    pub kappa_bar: f64,
    pub sigma_curvature_a: f64,
    pub sigma_curvature_b: f64,
}

pub fn endpoint_jets(state: &FlowState) -> Result<EndpointJets, FlowError> {
    let anchored = &state.anchored;
    let p = anchored.curve().nodes();
    let n = p.len();
    let (ta, tb) = anchored.boundary_tangents();
    let (kappa_a, kappa_s_a) = endpoint_jet(&p[..STENCIL], ta);
    let tail: Vec<Vec2> = p[n - STENCIL..].iter().rev().copied().collect();
    let (kr, kr_s) = endpoint_jet(&tail, -tb);
    let params = anchored.endpoint_params();
    let support = anchored.support();
    Ok(EndpointJets {
        kappa_a,
        kappa_s_a,
        // Reversal flips the sign of κ and of d/ds, so ∂sκ is unchanged.
        kappa_b: -kr,
        kappa_s_b: kr_s,
        kappa_bar: discretize(anchored)?.kappa_bar,
        sigma_curvature_a: support.evaluate(params[0]).curvature,
        sigma_curvature_b: support.evaluate(params[1]).curvature,
    })
}

/// `res_a = ∂sκ(a) − (κ(a) − κ̄)κ_Σ(γ(a))` and
/// `res_b = ∂sκ(b) + (κ(b) − κ̄)κ_Σ(γ(b))`, with endpoint derivatives from
/// one-sided five-node stencils.
pub fn boundary_identity_residual(state: &FlowState) -> Result<(f64, f64), FlowError> {
    let j = endpoint_jets(state)?;
    Ok((
        j.kappa_s_a - (j.kappa_a - j.kappa_bar) * j.sigma_curvature_a,
        j.kappa_s_b + (j.kappa_b - j.kappa_bar) * j.sigma_curvature_b,
    ))
}
