//! Two-mode Gaussian state algebra in the quadrature ordering
//! (q1, p1, q2, p2), vacuum normalized to the identity: covariance matrices,
//! symplectic spectra, entropy, occupations and the coherence measure.

use crate::error::{Error, Result};

/// Slack on the physicality bound nu_minus >= 1.
pub const PHYSICALITY_TOL: f64 = 1e-9;

/// Occupation-number convention entering the coherence measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    /// Verbatim n_i = (sigma_ii + sigma_jj)/4; the vacuum then carries
    /// half a quantum per mode and a nonzero coherence offset.
    Paper,
    /// n_i = (sigma_ii + sigma_jj - 2)/4, zero for the vacuum. Default.
    Physical,
}

impl Convention {
    pub fn label(self) -> &'static str {
        match self {
            Convention::Paper => "paper",
            Convention::Physical => "physical",
        }
    }
}

impl std::str::FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(Convention::Paper),
            "physical" => Ok(Convention::Physical),
            other => Err(Error::Parse(format!(
                "unknown convention {other:?} (expected \"paper\" or \"physical\")"
            ))),
        }
    }
}

/// Real symmetric 4x4 covariance matrix with first moments (pinned to zero
/// throughout the pipeline, carried for the channel action).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceMatrix4 {
    entries: [[f64; 4]; 4],
    first_moments: [f64; 4],
}

impl CovarianceMatrix4 {
    /// Build from entries; they must be exactly symmetric as stored.
    pub fn from_entries(entries: [[f64; 4]; 4]) -> Result<Self> {
        for i in 0..4 {
            for j in (i + 1)..4 {
                if entries[i][j] != entries[j][i] {
                    return Err(Error::Unphysical {
                        detail: format!(
                            "asymmetric entries at ({i},{j}): {} vs {}",
                            entries[i][j], entries[j][i]
                        ),
                    });
                }
            }
            if !entries[i].iter().all(|v| v.is_finite()) {
                return Err(Error::Unphysical {
                    detail: format!("non-finite row {i}"),
                });
            }
        }
        Ok(CovarianceMatrix4 {
            entries,
            first_moments: [0.0; 4],
        })
    }

    pub fn identity() -> Self {
        let mut entries = [[0.0; 4]; 4];
        for (i, row) in entries.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        CovarianceMatrix4 {
            entries,
            first_moments: [0.0; 4],
        }
    }

    pub fn entries(&self) -> [[f64; 4]; 4] {
        self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.entries[i][j]
    }

    pub fn first_moments(&self) -> [f64; 4] {
        self.first_moments
    }

    pub fn with_first_moments(mut self, moments: [f64; 4]) -> Self {
        self.first_moments = moments;
        self
    }

    /// Seminorm invariant Delta = det A + det B + 2 det C of the 2x2 blocks.
    pub fn block_invariant(&self) -> f64 {
        let m = &self.entries;
        let det_a = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        let det_b = m[2][2] * m[3][3] - m[2][3] * m[3][2];
        let det_c = m[0][2] * m[1][3] - m[0][3] * m[1][2];
        det_a + det_b + 2.0 * det_c
    }

    pub fn determinant(&self) -> f64 {
        det4(&self.entries)
    }

    /// Both symplectic eigenvalues are at least 1 - [`PHYSICALITY_TOL`].
    pub fn is_physical(&self) -> bool {
        symplectic_eigenvalues(self)
            .map(|s| s.nu_minus() >= 1.0 - PHYSICALITY_TOL)
            .unwrap_or(false)
    }
}

fn det4(m: &[[f64; 4]; 4]) -> f64 {
    // LU with partial pivoting; cofactor expansion loses too many digits on
    // strongly squeezed matrices whose determinant is near 1 while entries
    // are large.
    let mut a = *m;
    let mut det = 1.0;
    for col in 0..4 {
        let pivot = (col..4)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        if a[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det *= a[col][col];
        for row in (col + 1)..4 {
            let factor = a[row][col] / a[col][col];
            for k in col..4 {
                a[row][k] -= factor * a[col][k];
            }
        }
    }
    det
}

/// Symplectic spectrum nu_minus <= nu_plus of a physical covariance matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymplecticSpectrum {
    nu_minus: f64,
    nu_plus: f64,
}

impl SymplecticSpectrum {
    pub fn nu_minus(&self) -> f64 {
        self.nu_minus
    }

    pub fn nu_plus(&self) -> f64 {
        self.nu_plus
    }
}

/// Covariance matrix of the two-mode squeezed vacuum with squeezing r:
/// diagonal blocks cosh(2r) I, off-diagonal diag(sinh 2r, -sinh 2r).
pub fn two_mode_squeezed_vacuum(r: f64) -> CovarianceMatrix4 {
    assert!(
        r >= 0.0 && r.is_finite(),
        "squeezing must be finite and >= 0"
    );
    let c = (2.0 * r).cosh();
    let s = (2.0 * r).sinh();
    CovarianceMatrix4 {
        entries: [
            [c, 0.0, s, 0.0],
            [0.0, c, 0.0, -s],
            [s, 0.0, c, 0.0],
            [0.0, -s, 0.0, c],
        ],
        first_moments: [0.0; 4],
    }
}

/// Closed-form symplectic eigenvalues 2 nu^2 = Delta -/+ sqrt(Delta^2 - 4 det sigma).
pub fn symplectic_eigenvalues(sigma: &CovarianceMatrix4) -> Result<SymplecticSpectrum> {
    let (delta, disc) = match standard_form(sigma) {
        // For diag(a,a) / diag(b,b) / diag(c1,-c2) states the discriminant
        // factors exactly; the generic subtraction would cancel completely
        // at purity and cost seven digits.
        Some((a, b, c1, c2)) => (
            a * a + b * b - 2.0 * c1 * c2,
            (a - b) * (a - b) * (a + b) * (a + b) + 4.0 * (b * c1 - a * c2) * (a * c1 - b * c2),
        ),
        None => {
            let delta = sigma.block_invariant();
            (delta, delta * delta - 4.0 * sigma.determinant())
        }
    };
    // Tolerate roundoff at the natural scale of the operands, reject genuine
    // violations.
    let scale = (delta * delta)
        .max(4.0 * sigma.determinant().abs())
        .max(1.0);
    if disc < -1e-9 * scale {
        return Err(Error::Unphysical {
            detail: format!("Delta^2 - 4 det sigma = {disc:.3e} < 0"),
        });
    }
    let root = disc.max(0.0).sqrt();
    let lo = 0.5 * (delta - root);
    let hi = 0.5 * (delta + root);
    if lo < -1e-9 {
        return Err(Error::Unphysical {
            detail: format!("negative squared eigenvalue {lo:.3e}"),
        });
    }
    Ok(SymplecticSpectrum {
        nu_minus: lo.max(0.0).sqrt(),
        nu_plus: hi.max(0.0).sqrt(),
    })
}

/// Matches the standard-form sparsity diag(a,a) blocks with off-diagonal
/// diag(c1, -c2), the shape every state in this pipeline takes.
fn standard_form(sigma: &CovarianceMatrix4) -> Option<(f64, f64, f64, f64)> {
    let m = &sigma.entries;
    let zeros = [(0usize, 1usize), (0, 3), (1, 2), (2, 3)];
    if zeros.iter().any(|&(i, j)| m[i][j] != 0.0) {
        return None;
    }
    if m[0][0] != m[1][1] || m[2][2] != m[3][3] {
        return None;
    }
    Some((m[0][0], m[2][2], m[0][2], -m[1][3]))
}

/// Entropy contribution of one symplectic eigenvalue, base-2 logs; continuous
/// at nu = 1 where it vanishes.
fn entropy_term(nu: f64) -> f64 {
    let nu = nu.max(1.0);
    let p = 0.5 * (nu + 1.0);
    let m = 0.5 * (nu - 1.0);
    let mut s = p * p.log2();
    if m > 0.0 {
        s -= m * m.log2();
    }
    s
}

/// Von Neumann entropy S = f(nu_minus) + f(nu_plus) in bits.
pub fn von_neumann_entropy(sigma: &CovarianceMatrix4) -> Result<f64> {
    let spectrum = symplectic_eigenvalues(sigma)?;
    Ok(entropy_term(spectrum.nu_minus) + entropy_term(spectrum.nu_plus))
}

/// Mean occupation of each mode from the diagonal pairs, in the requested
/// convention. The physical convention clamps sub-vacuum diagonals to zero.
pub fn mean_occupations(sigma: &CovarianceMatrix4, convention: Convention) -> (f64, f64) {
    let raw1 = 0.25 * (sigma.entry(0, 0) + sigma.entry(1, 1));
    let raw2 = 0.25 * (sigma.entry(2, 2) + sigma.entry(3, 3));
    match convention {
        Convention::Paper => (raw1, raw2),
        Convention::Physical => {
            let shift = |n: f64| {
                let v = n - 0.5;
                if v < 0.0 {
                    eprintln!(
                        "warning: sub-vacuum diagonal pair (n = {n}); clamping occupation to 0"
                    );
                    0.0
                } else {
                    v
                }
            };
            (shift(raw1), shift(raw2))
        }
    }
}

fn occupation_bracket(n: f64) -> f64 {
    let mut v = (n + 1.0) * (n + 1.0).log2();
    if n > 0.0 {
        v -= n * n.log2();
    }
    v
}

/// Gaussian relative-entropy coherence
/// C = -S(sigma) + sum_i [(n_i + 1) log2(n_i + 1) - n_i log2 n_i]
/// for zero first moments.
pub fn coherence(sigma: &CovarianceMatrix4, convention: Convention) -> Result<f64> {
    debug_assert!(
        sigma.first_moments().iter().all(|&m| m == 0.0),
        "coherence assumes zero first moments"
    );
    let s = von_neumann_entropy(sigma)?;
    let (n1, n2) = mean_occupations(sigma, convention);
    let c = -s + occupation_bracket(n1) + occupation_bracket(n2);
    Ok(match convention {
        // The measure is non-negative; snap the roundoff residue at C = 0.
        Convention::Physical if c < 0.0 && c > -1e-9 => 0.0,
        _ => c,
    })
}
