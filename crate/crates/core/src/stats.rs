//! Order statistics used by the scan analysis: medians, quantile edges and
//! Spearman rank correlation with average-rank tie handling.

/// Median with the usual midpoint convention for even counts. Panics on an
/// empty slice.
pub fn median(values: &[f64]) -> f64 {
    assert!(!values.is_empty(), "median of empty slice");
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

/// Edges splitting `values` into `bins` equal-count groups: `bins + 1`
/// boundaries, the first and last being the extremes.
pub fn quantile_edges(values: &[f64], bins: usize) -> Vec<f64> {
    assert!(bins >= 1 && !values.is_empty());
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len();
    (0..=bins)
        .map(|b| {
            if b == 0 {
                sorted[0]
            } else if b == bins {
                sorted[n - 1]
            } else {
                let pos = b as f64 / bins as f64 * (n - 1) as f64;
                let i = pos.floor() as usize;
                let t = pos - i as f64;
                sorted[i] * (1.0 - t) + sorted[(i + 1).min(n - 1)] * t
            }
        })
        .collect()
}

/// Fractional ranks (1-based) with ties sharing their average rank.
fn ranks(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
    let mut out = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            out[idx] = avg;
        }
        i = j + 1;
    }
    out
}

/// Spearman rank correlation of two equal-length samples. Returns 0 for
/// degenerate (constant) inputs.
pub fn spearman(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len(), "sample length mismatch");
    let n = xs.len();
    if n < 2 {
        return 0.0;
    }
    let rx = ranks(xs);
    let ry = ranks(ys);
    let mean = (n as f64 + 1.0) / 2.0;
    let mut cov = 0.0;
    let mut var_x = 0.0;
    let mut var_y = 0.0;
    for i in 0..n {
        let dx = rx[i] - mean;
        let dy = ry[i] - mean;
        cov += dx * dy;
        var_x += dx * dx;
        var_y += dy * dy;
    }
    if var_x == 0.0 || var_y == 0.0 {
        return 0.0;
    }
    cov / (var_x * var_y).sqrt()
}
