//! Composite Gauss-Legendre quadrature with global bisection refinement.
//!
//! The overlap integrands are smooth oscillations under a rapidly decaying
//! envelope, so fixed-order panels pinned to a fraction of the oscillation
//! period converge almost immediately; the driver halves the panel width
//! until every accumulated component is stable.

use crate::error::{Error, Result};

/// Points per panel used by the overlap engine.
pub const PANEL_POINTS: usize = 16;

/// Gauss-Legendre rule on [-1, 1], nodes by Newton iteration on P_n.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 2, "rule needs at least two points");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            weights[i] = w;
            nodes[n - 1 - i] = x;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Accumulate K integrand components over one panel [a, b].
    pub fn panel<const K: usize>(
        &self,
        a: f64,
        b: f64,
        f: &mut impl FnMut(f64) -> [f64; K],
    ) -> [f64; K] {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut acc = [0.0; K];
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            let vals = f(mid + half * x);
            for (a_k, v_k) in acc.iter_mut().zip(vals) {
                *a_k += w * v_k;
            }
        }
        for a_k in &mut acc {
            *a_k *= half;
        }
        acc
    }
}

/// Value and derivative of the Legendre polynomial P_n at x.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Composite rule: `panels` equal panels over [lo, hi].
pub fn composite<const K: usize>(
    rule: &GaussLegendre,
    lo: f64,
    hi: f64,
    panels: usize,
    f: &mut impl FnMut(f64) -> [f64; K],
) -> [f64; K] {
    let width = (hi - lo) / panels as f64;
    let mut acc = [0.0; K];
    for p in 0..panels {
        let a = lo + p as f64 * width;
        let b = if p + 1 == panels { hi } else { a + width };
        let vals = rule.panel(a, b, f);
        for (a_k, v_k) in acc.iter_mut().zip(vals) {
            *a_k += v_k;
        }
    }
    acc
}

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureOutcome<const K: usize> {
    pub values: [f64; K],
    /// Bisection levels beyond the initial layout.
    pub levels: u32,
    /// Panels used at the final level.
    pub panels: usize,
    /// Integrand evaluations across all levels.
    pub evaluations: u64,
}

/// Halve the panel width until `converged(prev, cur)` holds between two
/// consecutive levels.
pub fn adaptive_bisect<const K: usize>(
    rule: &GaussLegendre,
    lo: f64,
    hi: f64,
    initial_panels: usize,
    max_levels: u32,
    converged: impl Fn(&[f64; K], &[f64; K]) -> bool,
    mut f: impl FnMut(f64) -> [f64; K],
) -> Result<QuadratureOutcome<K>> {
    assert!(hi > lo, "empty integration domain");
    let mut panels = initial_panels.max(1);
    let mut evaluations = 0u64;
    let mut prev: Option<[f64; K]> = None;
    for level in 0..=max_levels {
        let cur = composite(rule, lo, hi, panels, &mut f);
        evaluations += (panels * rule.nodes.len()) as u64;
        if let Some(p) = prev {
            if converged(&p, &cur) {
                return Ok(QuadratureOutcome {
                    values: cur,
                    levels: level,
                    panels,
                    evaluations,
                });
            }
        }
        prev = Some(cur);
        panels *= 2;
    }
    let last = prev.unwrap_or([0.0; K]);
    Err(Error::QuadratureDivergence {
        levels: max_levels,
        panels: panels / 2,
        last_change: last.iter().fold(0.0, |m, v| v.abs().max(m)),
    })
}
