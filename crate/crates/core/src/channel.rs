//! The noisy Gaussian channel mapping the inertial two-mode state onto the
//! accelerated observers: sigma -> M sigma M^T + N with the beta-free
//! simplification M = alpha_I 1 (+) alpha_II 1, N = (1 - alpha_I^2) 1 (+)
//! (1 - alpha_II^2) 1. The beta-inclusive M is available as a diagnostic for
//! bounding the simplification error, but cannot be applied: the matching
//! noise matrix has no closed form here.

use crate::error::{Error, Result};
use crate::gaussian::CovarianceMatrix4;
use crate::overlap::OverlapCoefficients;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelKind {
    Simplified,
    FullMDiagnostic,
}

/// The (M, N) pair defining the Gaussian map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianChannel {
    m_matrix: [[f64; 4]; 4],
    n_matrix: [[f64; 4]; 4],
    kind: ChannelKind,
}

impl GaussianChannel {
    pub fn m_matrix(&self) -> [[f64; 4]; 4] {
        self.m_matrix
    }

    pub fn n_matrix(&self) -> [[f64; 4]; 4] {
        self.n_matrix
    }

    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    /// Channel action sigma -> M sigma M^T + N on second moments and
    /// x -> M x on first moments. Simplified channels only.
    pub fn apply(&self, state: &CovarianceMatrix4) -> Result<CovarianceMatrix4> {
        if self.kind != ChannelKind::Simplified {
            return Err(Error::Domain {
                op: "GaussianChannel::apply",
                detail: "full-M diagnostic channels have no matching noise matrix".into(),
            });
        }
        let m = &self.m_matrix;
        let sigma = state.entries();
        let mut ms = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = 0.0;
                for (k, sk) in sigma.iter().enumerate() {
                    acc += m[i][k] * sk[j];
                }
                ms[i][j] = acc;
            }
        }
        let mut out = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = 0.0;
                for k in 0..4 {
                    acc += ms[i][k] * m[j][k];
                }
                out[i][j] = acc + self.n_matrix[i][j];
            }
        }
        // Symmetrize away the last-ulp asymmetry of the triple product.
        for i in 0..4 {
            for j in (i + 1)..4 {
                let v = 0.5 * (out[i][j] + out[j][i]);
                out[i][j] = v;
                out[j][i] = v;
            }
        }
        let moments = state.first_moments();
        let mut new_moments = [0.0; 4];
        for i in 0..4 {
            for (k, &mk) in moments.iter().enumerate() {
                new_moments[i] += m[i][k] * mk;
            }
        }
        Ok(CovarianceMatrix4::from_entries(out)?.with_first_moments(new_moments))
    }
}

/// Simplified channel from the two alpha coefficients, each in (0, 1].
pub fn build_simplified(alpha_i: f64, alpha_ii: f64) -> Result<GaussianChannel> {
    for (name, a) in [("alpha_I", alpha_i), ("alpha_II", alpha_ii)] {
        if !a.is_finite() || a <= 0.0 || a > 1.0 {
            return Err(Error::Domain {
                op: "build_simplified",
                detail: format!("{name} must lie in (0, 1], got {a}"),
            });
        }
    }
    let mut m_matrix = [[0.0; 4]; 4];
    let mut n_matrix = [[0.0; 4]; 4];
    for i in 0..4 {
        let a = if i < 2 { alpha_i } else { alpha_ii };
        m_matrix[i][i] = a;
        n_matrix[i][i] = 1.0 - a * a;
    }
    Ok(GaussianChannel {
        m_matrix,
        n_matrix,
        kind: ChannelKind::Simplified,
    })
}

/// Verbatim beta-inclusive M built from the Re/Im combinations of
/// alpha -/+ beta per observer block. Diagnostic only.
pub fn build_full_m(
    coeffs_i: &OverlapCoefficients,
    coeffs_ii: &OverlapCoefficients,
) -> [[f64; 4]; 4] {
    let mut m = [[0.0; 4]; 4];
    for (block, coeffs) in [(0, coeffs_i), (2, coeffs_ii)] {
        let a = coeffs.alpha();
        let b = coeffs.beta();
        let diff = a - b;
        let sum = a + b;
        m[block][block] = diff.re;
        m[block][block + 1] = -sum.im;
        m[block + 1][block] = diff.im;
        m[block + 1][block + 1] = sum.re;
    }
    m
}

/// Closed-form output state of the simplified channel on a two-mode squeezed
/// vacuum: blocks diag(X, X), diag(Z, Z) and off-diagonal diag(Y, -Y) with
/// X = a_I^2 cosh 2r - a_I^2 + 1, Y = a_I a_II sinh 2r, Z likewise for a_II.
pub fn output_tmsv_closed_form(alpha_i: f64, alpha_ii: f64, r: f64) -> CovarianceMatrix4 {
    let c = (2.0 * r).cosh();
    let s = (2.0 * r).sinh();
    let x = alpha_i * alpha_i * c - alpha_i * alpha_i + 1.0;
    let y = alpha_i * alpha_ii * s;
    let z = alpha_ii * alpha_ii * c - alpha_ii * alpha_ii + 1.0;
    CovarianceMatrix4::from_entries([
        [x, 0.0, y, 0.0],
        [0.0, x, 0.0, -y],
        [y, 0.0, z, 0.0],
        [0.0, -y, 0.0, z],
    ])
    .expect("closed-form state is symmetric")
}
