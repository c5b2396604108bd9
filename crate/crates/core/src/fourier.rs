//! Plain O(N^2) discrete Fourier transform with a precomputed twiddle table.
//! Grids here are a few thousand points, used only when decomposing Cauchy
//! data into plane waves, so a full FFT dependency is not warranted.

use num_complex::Complex64;

fn transform(input: &[Complex64], sign: f64) -> Vec<Complex64> {
    let n = input.len();
    let step = sign * 2.0 * std::f64::consts::PI / n as f64;
    let table: Vec<Complex64> = (0..n)
        .map(|t| Complex64::from_polar(1.0, step * t as f64))
        .collect();
    (0..n)
        .map(|j| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (m, &v) in input.iter().enumerate() {
                acc += v * table[(j * m) % n];
            }
            acc
        })
        .collect()
}

pub(crate) fn dft(input: &[Complex64]) -> Vec<Complex64> {
    transform(input, -1.0)
}

pub(crate) fn idft(input: &[Complex64]) -> Vec<Complex64> {
    let n = input.len() as f64;
    transform(input, 1.0).into_iter().map(|v| v / n).collect()
}

/// Physical wavenumber of each DFT bin for grid spacing `step` (bins above
/// N/2 alias to negative k).
pub(crate) fn wavenumbers(n: usize, step: f64) -> Vec<f64> {
    let dk = 2.0 * std::f64::consts::PI / (n as f64 * step);
    (0..n)
        .map(|j| {
            let j_signed = if j <= n / 2 {
                j as i64
            } else {
                j as i64 - n as i64
            };
            j_signed as f64 * dk
        })
        .collect()
}
