//! Shared test oracles, deliberately independent of the library kernels:
//! log-gamma through the Stirling asymptotic series instead of Lanczos, the
//! unscaled Bessel series instead of the scaled one, and an iterative Jacobi
//! eigensolver instead of the closed-form symplectic spectrum.

#![allow(dead_code)]

use num_complex::Complex64;

pub mod symplectic;

/// Bernoulli numbers B_2..B_14 for the Stirling tail.
const BERNOULLI: [f64; 7] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
];

/// Principal-branch log Gamma via the Stirling series with an upward shift,
/// accurate to ~1e-14 relative. Panics on poles (oracle use only).
pub fn stirling_log_gamma(z: Complex64) -> Complex64 {
    assert!(
        !(z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()),
        "oracle called at a pole: {z}"
    );
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.re < 12.0 {
        shift += w.ln();
        w += 1.0;
    }
    let mut tail = Complex64::new(0.0, 0.0);
    let mut zpow = w;
    for (n, &b) in BERNOULLI.iter().enumerate() {
        let k = 2.0 * (n as f64 + 1.0);
        tail += b / (k * (k - 1.0) * zpow);
        zpow *= w * w;
    }
    let half_ln_2pi = 0.5 * (2.0 * std::f64::consts::PI).ln();
    (w - 0.5) * w.ln() - w + half_ln_2pi + tail - shift
}

/// Unscaled I_{i nu}(z), each term exponentiated from logs with Stirling
/// gammas: term_k = exp[(2k + i nu) ln(z/2) - ln k! - ln Gamma(k+1+i nu)].
/// Overflows for nu beyond ~200 (that is the point of the scaled kernel);
/// fine as an oracle below that.
pub fn unscaled_bessel_inu(nu: f64, z: f64) -> Complex64 {
    let ln_half_z = (0.5 * z).ln();
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..400 {
        let kf = k as f64;
        let log_term = Complex64::new(2.0 * kf, nu) * ln_half_z
            - log_gamma_real(kf + 1.0)
            - stirling_log_gamma(Complex64::new(kf + 1.0, nu));
        let term = log_term.exp();
        sum += term;
        if k > 3 && term.norm() < 1e-18 * sum.norm() {
            break;
        }
    }
    sum
}

/// ln Gamma for positive real arguments via the complex oracle.
pub fn log_gamma_real(x: f64) -> f64 {
    stirling_log_gamma(Complex64::new(x, 0.0)).re
}
