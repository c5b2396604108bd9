//! Williamson-spectrum oracle: Cholesky-conjugate the symplectic form and
//! diagonalize the resulting Hermitian matrix with Jacobi rotations. Also
//! provides random physical covariance matrices built from explicit
//! symplectic factors.

use num_complex::Complex64;
use wedgesim_core::gaussian::CovarianceMatrix4;
use wedgesim_core::rng::SplitMix64;

type M4 = [[f64; 4]; 4];

const OMEGA: M4 = [
    [0.0, 1.0, 0.0, 0.0],
    [-1.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
    [0.0, 0.0, -1.0, 0.0],
];

fn matmul(a: &M4, b: &M4) -> M4 {
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let mut acc = 0.0;
            for (k, bk) in b.iter().enumerate() {
                acc += a[i][k] * bk[j];
            }
            out[i][j] = acc;
        }
    }
    out
}

fn transpose(a: &M4) -> M4 {
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = a[j][i];
        }
    }
    out
}

fn cholesky(a: &M4) -> M4 {
    let mut l = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..=i {
            let mut s = a[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            if i == j {
                assert!(s > 0.0, "matrix not positive definite");
                l[i][j] = s.sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    l
}

/// Eigenvalues of a 4x4 complex Hermitian matrix by cyclic Jacobi rotations.
fn hermitian_eigenvalues(mut h: [[Complex64; 4]; 4]) -> [f64; 4] {
    for _ in 0..60 {
        let mut off = 0.0;
        for p in 0..4 {
            for q in (p + 1)..4 {
                off += h[p][q].norm_sqr();
            }
        }
        if off < 1e-28 {
            break;
        }
        for p in 0..4 {
            for q in (p + 1)..4 {
                let hpq = h[p][q];
                if hpq.norm() < 1e-18 {
                    continue;
                }
                // Unitary 2x2 rotation annihilating h[p][q].
                let app = h[p][p].re;
                let aqq = h[q][q].re;
                let phase = hpq / hpq.norm();
                let theta = 0.5 * (2.0 * hpq.norm()).atan2(aqq - app);
                let (s, c) = theta.sin_cos();
                let cp = Complex64::new(c, 0.0);
                let sp = phase * s;
                // Apply G^dagger H G with G = [[c, s*phase],[-s*conj(phase), c]].
                let mut g = [[Complex64::new(0.0, 0.0); 4]; 4];
                for (i, row) in g.iter_mut().enumerate() {
                    row[i] = Complex64::new(1.0, 0.0);
                }
                g[p][p] = cp;
                g[p][q] = sp;
                g[q][p] = -sp.conj();
                g[q][q] = cp;
                let mut hg = [[Complex64::new(0.0, 0.0); 4]; 4];
                for i in 0..4 {
                    for j in 0..4 {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for k in 0..4 {
                            acc += h[i][k] * g[k][j];
                        }
                        hg[i][j] = acc;
                    }
                }
                let mut next = [[Complex64::new(0.0, 0.0); 4]; 4];
                for i in 0..4 {
                    for j in 0..4 {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for k in 0..4 {
                            acc += g[k][i].conj() * hg[k][j];
                        }
                        next[i][j] = acc;
                    }
                }
                h = next;
            }
        }
    }
    let mut eig = [h[0][0].re, h[1][1].re, h[2][2].re, h[3][3].re];
    eig.sort_by(|a, b| a.partial_cmp(b).unwrap());
    eig
}

/// Symplectic spectrum of sigma through i L^T Omega L: Hermitian, eigenvalues
/// come in +/- nu pairs.
pub fn williamson_oracle(sigma: &CovarianceMatrix4) -> (f64, f64) {
    let m = sigma.entries();
    let l = cholesky(&m);
    let b = matmul(&transpose(&l), &matmul(&OMEGA, &l));
    let mut h = [[Complex64::new(0.0, 0.0); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            h[i][j] = Complex64::new(0.0, b[i][j]);
        }
    }
    let eig = hermitian_eigenvalues(h);
    let mut mods: Vec<f64> = eig.iter().map(|e| e.abs()).collect();
    mods.sort_by(|a, b| a.partial_cmp(b).unwrap());
    (0.5 * (mods[0] + mods[1]), 0.5 * (mods[2] + mods[3]))
}

fn embed2(block: [[f64; 2]; 2], mode: usize) -> M4 {
    let mut out = [[0.0; 4]; 4];
    for (i, row) in out.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let o = 2 * mode;
    out[o][o] = block[0][0];
    out[o][o + 1] = block[0][1];
    out[o + 1][o] = block[1][0];
    out[o + 1][o + 1] = block[1][1];
    out
}

fn rotation(theta: f64, mode: usize) -> M4 {
    let (s, c) = theta.sin_cos();
    embed2([[c, s], [-s, c]], mode)
}

fn squeezer(r: f64, mode: usize) -> M4 {
    embed2([[r.exp(), 0.0], [0.0, (-r).exp()]], mode)
}

fn beam_splitter(theta: f64) -> M4 {
    let (s, c) = theta.sin_cos();
    [
        [c, 0.0, s, 0.0],
        [0.0, c, 0.0, s],
        [-s, 0.0, c, 0.0],
        [0.0, -s, 0.0, c],
    ]
}

/// Random physical covariance matrix S D S^T with S a product of rotations,
/// squeezers and a beam splitter, and D = diag(nu1, nu1, nu2, nu2).
pub fn random_physical_sigma(rng: &mut SplitMix64) -> CovarianceMatrix4 {
    use std::f64::consts::PI;
    let nu1 = 1.0 + 3.0 * rng.next_f64();
    let nu2 = 1.0 + 3.0 * rng.next_f64();
    let s = [
        rotation(rng.uniform(-PI, PI), 0),
        rotation(rng.uniform(-PI, PI), 1),
        beam_splitter(rng.uniform(-PI, PI)),
        squeezer(rng.uniform(-1.2, 1.2), 0),
        squeezer(rng.uniform(-1.2, 1.2), 1),
        rotation(rng.uniform(-PI, PI), 0),
        rotation(rng.uniform(-PI, PI), 1),
    ];
    let mut sym = s[0];
    for factor in &s[1..] {
        sym = matmul(&sym, factor);
    }
    let mut d = [[0.0; 4]; 4];
    d[0][0] = nu1;
    d[1][1] = nu1;
    d[2][2] = nu2;
    d[3][3] = nu2;
    let sigma = matmul(&sym, &matmul(&d, &transpose(&sym)));
    // Symmetrize away the last-ulp asymmetry from the triple product.
    let mut entries = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            entries[i][j] = 0.5 * (sigma[i][j] + sigma[j][i]);
        }
    }
    CovarianceMatrix4::from_entries(entries).expect("constructed sigma is symmetric")
}

/// Random passive (orthogonal symplectic) transformation: rotations and a
/// beam splitter only.
pub fn random_passive_symplectic(rng: &mut SplitMix64) -> M4 {
    use std::f64::consts::PI;
    let s = [
        rotation(rng.uniform(-PI, PI), 0),
        rotation(rng.uniform(-PI, PI), 1),
        beam_splitter(rng.uniform(-PI, PI)),
        rotation(rng.uniform(-PI, PI), 0),
        rotation(rng.uniform(-PI, PI), 1),
    ];
    let mut sym = s[0];
    for factor in &s[1..] {
        sym = matmul(&sym, factor);
    }
    sym
}

/// Conjugate sigma by a symplectic matrix.
pub fn conjugate(sigma: &CovarianceMatrix4, s: &M4) -> CovarianceMatrix4 {
    let m = matmul(s, &matmul(&sigma.entries(), &transpose(s)));
    let mut entries = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            entries[i][j] = 0.5 * (m[i][j] + m[j][i]);
        }
    }
    CovarianceMatrix4::from_entries(entries).expect("conjugated sigma is symmetric")
}
