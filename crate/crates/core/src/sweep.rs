//! Deterministic orchestration of the three numerical experiments: the
//! coherence surface over two accelerations, the mismatch sweeps, and the
//! randomized scan of squeezed states with its median contour. Work is
//! partitioned by record index with one counter-based RNG stream per index,
//! so results are bit-identical for any worker count.

use std::path::PathBuf;

use rayon::prelude::*;

use crate::channel::output_tmsv_closed_form;
use crate::contour::{marching_squares, ContourGrid};
use crate::error::{Error, Result};
use crate::gaussian::{coherence, symplectic_eigenvalues, Convention};
use crate::mismatch::pair_mismatch;
use crate::modes::{ModeSpec, Region};
use crate::overlap::{compute_overlaps, OverlapCache, OverlapCoefficients};
use crate::rng::SplitMix64;
use crate::stats;

/// Attempt cap per record before declaring the sampler starved.
const MAX_ATTEMPTS: u32 = 10_000;
/// Bins with fewer records than this are flagged and left out of the
/// contour field.
pub const MIN_BIN_OCCUPANCY: usize = 10;

/// Waveform parameters shared by both observers of one state.
#[derive(Debug, Clone, Copy)]
pub struct WaveformParams {
    pub width: f64,
    pub omega0: f64,
    pub mass: f64,
}

/// Configuration of the randomized scan.
#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub seed: u64,
    pub count: usize,
    pub r_range: (f64, f64),
    pub accel_range: (f64, f64),
    pub width_range: (f64, f64),
    pub omega0_range: (f64, f64),
    pub mass: f64,
    pub convention: Convention,
    pub workers: usize,
    pub cache_dir: Option<PathBuf>,
}

impl Default for ScanConfig {
    /// Reference configuration: 2000 states, squeezing in [1, 3],
    /// accelerations in [0.01, 0.2] per observer, width in [1, 3], central
    /// frequency in [4, 6], mass 0.1, rejection on the regime guards.
    fn default() -> Self {
        ScanConfig {
            seed: 42,
            count: 2000,
            r_range: (1.0, 3.0),
            accel_range: (0.01, 0.2),
            width_range: (1.0, 3.0),
            omega0_range: (4.0, 6.0),
            mass: 0.1,
            convention: Convention::Physical,
            workers: std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1),
            cache_dir: None,
        }
    }
}

impl ScanConfig {
    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::InvalidConfig("count must be positive".into()));
        }
        if self.workers == 0 {
            return Err(Error::InvalidConfig("workers must be >= 1".into()));
        }
        if self.mass < 0.0 || !self.mass.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "mass must be finite and >= 0, got {}",
                self.mass
            )));
        }
        for (name, (lo, hi)) in [
            ("r_range", self.r_range),
            ("accel_range", self.accel_range),
            ("width_range", self.width_range),
            ("omega0_range", self.omega0_range),
        ] {
            if !lo.is_finite() || !hi.is_finite() || lo > hi {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be an ordered finite interval, got [{lo}, {hi}]"
                )));
            }
        }
        if self.r_range.0 < 0.0 {
            return Err(Error::InvalidConfig("squeezing must be >= 0".into()));
        }
        if self.accel_range.0 <= 0.0 || self.width_range.0 <= 0.0 {
            return Err(Error::InvalidConfig(
                "accelerations and widths must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// One sampled state of the scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRecord {
    pub index: usize,
    pub r: f64,
    pub accel_i: f64,
    pub accel_ii: f64,
    pub width: f64,
    pub omega0: f64,
    pub alpha_i: f64,
    pub alpha_ii: f64,
    pub mismatch: f64,
    pub coherence: f64,
}

fn record_overlaps(cache: Option<&OverlapCache>, spec: &ModeSpec) -> Result<OverlapCoefficients> {
    match cache {
        Some(c) => c.get_or_compute(spec),
        None => compute_overlaps(spec),
    }
}

fn scan_record(
    config: &ScanConfig,
    cache: Option<&OverlapCache>,
    index: usize,
) -> Result<ScanRecord> {
    let mut rng = SplitMix64::stream(config.seed, index as u64);
    for _attempt in 0..MAX_ATTEMPTS {
        // Draw order is part of the reproducibility contract:
        // r, accel_I, accel_II, width, omega0; reject and redraw all five.
        let r = rng.uniform(config.r_range.0, config.r_range.1);
        let accel_i = rng.uniform(config.accel_range.0, config.accel_range.1);
        let accel_ii = rng.uniform(config.accel_range.0, config.accel_range.1);
        let width = rng.uniform(config.width_range.0, config.width_range.1);
        let omega0 = rng.uniform(config.omega0_range.0, config.omega0_range.1);
        let spec_i = ModeSpec::new(Region::I, accel_i, width, omega0, config.mass);
        let spec_ii = ModeSpec::new(Region::II, accel_ii, width, omega0, config.mass);
        let (Ok(spec_i), Ok(spec_ii)) = (spec_i, spec_ii) else {
            continue;
        };
        let coeffs_i = record_overlaps(cache, &spec_i)?;
        let coeffs_ii = record_overlaps(cache, &spec_ii)?;
        let alpha_i = coeffs_i.alpha().re;
        let alpha_ii = coeffs_ii.alpha().re;
        let mismatch = pair_mismatch(&spec_i, &spec_ii)?;
        let sigma = output_tmsv_closed_form(alpha_i, alpha_ii, r);
        let spectrum = symplectic_eigenvalues(&sigma)?;
        if spectrum.nu_minus() < 1.0 - crate::gaussian::PHYSICALITY_TOL {
            return Err(Error::Unphysical {
                detail: format!(
                    "record {index}: output state nu_minus = {}",
                    spectrum.nu_minus()
                ),
            });
        }
        let coherence = coherence(&sigma, config.convention)?;
        return Ok(ScanRecord {
            index,
            r,
            accel_i,
            accel_ii,
            width,
            omega0,
            alpha_i,
            alpha_ii,
            mismatch,
            coherence,
        });
    }
    Err(Error::SamplingStarvation {
        index,
        attempts: MAX_ATTEMPTS,
    })
}

/// Run the randomized scan. Records are index-partitioned across the
/// requested workers; output order and content are independent of the
/// scheduling.
pub fn random_scan(config: &ScanConfig) -> Result<Vec<ScanRecord>> {
    config.validate()?;
    let cache = config.cache_dir.as_ref().map(OverlapCache::new);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("could not build worker pool: {e}")))?;
    pool.install(|| {
        (0..config.count)
            .into_par_iter()
            .map(|i| scan_record(config, cache.as_ref(), i))
            .collect()
    })
}

/// One point of the coherence surface.
#[derive(Debug, Clone, Copy)]
pub struct SurfacePoint {
    pub accel_i: f64,
    pub accel_ii: f64,
    pub coherence: f64,
    pub guards_ok: bool,
}

/// Coherence of the transported squeezed vacuum over a grid of observer
/// accelerations at fixed waveform. Points are row-major (accel_I outer).
/// Alphas are computed once per distinct acceleration per side.
pub fn coherence_surface(
    accels_i: &[f64],
    accels_ii: &[f64],
    r: f64,
    waveform: &WaveformParams,
    convention: Convention,
) -> Result<Vec<SurfacePoint>> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::InvalidConfig(format!(
            "squeezing must be finite and >= 0, got {r}"
        )));
    }
    let side = |accels: &[f64], region: Region| -> Result<Vec<(f64, bool)>> {
        accels
            .par_iter()
            .map(|&accel| {
                let spec = ModeSpec::relaxed(
                    region,
                    accel,
                    waveform.width,
                    waveform.omega0,
                    waveform.mass,
                )?;
                let coeffs = compute_overlaps(&spec)?;
                Ok((coeffs.alpha().re, spec.satisfies_guards()))
            })
            .collect()
    };
    let alphas_i = side(accels_i, Region::I)?;
    let alphas_ii = side(accels_ii, Region::II)?;
    let mut points = Vec::with_capacity(alphas_i.len() * alphas_ii.len());
    for (ai, &(alpha_i, ok_i)) in accels_i.iter().zip(&alphas_i) {
        for (aii, &(alpha_ii, ok_ii)) in accels_ii.iter().zip(&alphas_ii) {
            let sigma = output_tmsv_closed_form(alpha_i, alpha_ii, r);
            points.push(SurfacePoint {
                accel_i: *ai,
                accel_ii: *aii,
                coherence: coherence(&sigma, convention)?,
                guards_ok: ok_i && ok_ii,
            });
        }
    }
    Ok(points)
}

/// Evenly spaced grid helper for the surface and curve sweeps.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 1);
    if n == 1 {
        return vec![lo];
    }
    let step = (hi - lo) / (n - 1) as f64;
    (0..n).map(|i| lo + i as f64 * step).collect()
}

/// Median-contour extraction result.
#[derive(Debug)]
pub struct ContourOutcome {
    /// Iso-level: the global median coherence.
    pub level: f64,
    /// Polyline vertices in the (r, mismatch) plane.
    pub polylines: Vec<Vec<(f64, f64)>>,
    /// Bins dropped for insufficient occupancy.
    pub flagged_bins: usize,
}

/// Contour of the global median coherence over the binned (r, mismatch)
/// plane. Bin medians form the marching-squares field; under-occupied bins
/// are flagged and leave gaps.
pub fn median_contour(
    records: &[ScanRecord],
    r_bins: usize,
    m_bins: usize,
) -> Result<ContourOutcome> {
    if records.is_empty() {
        return Err(Error::InvalidConfig("no records to contour".into()));
    }
    if r_bins < 2 || m_bins < 2 {
        return Err(Error::InvalidConfig("need at least 2 bins per axis".into()));
    }
    let coherences: Vec<f64> = records.iter().map(|rec| rec.coherence).collect();
    let level = stats::median(&coherences);
    let r_lo = records
        .iter()
        .map(|rec| rec.r)
        .fold(f64::INFINITY, f64::min);
    let r_hi = records
        .iter()
        .map(|rec| rec.r)
        .fold(f64::NEG_INFINITY, f64::max);
    let m_lo = records
        .iter()
        .map(|rec| rec.mismatch)
        .fold(f64::INFINITY, f64::min);
    let m_hi = records
        .iter()
        .map(|rec| rec.mismatch)
        .fold(f64::NEG_INFINITY, f64::max);
    if !(r_hi > r_lo) || !(m_hi > m_lo) {
        // Degenerate cloud: no spread, no contour.
        return Ok(ContourOutcome {
            level,
            polylines: Vec::new(),
            flagged_bins: r_bins * m_bins,
        });
    }
    let mut cells: Vec<Vec<f64>> = vec![Vec::new(); r_bins * m_bins];
    for rec in records {
        let bi = bin_index(rec.r, r_lo, r_hi, r_bins);
        let bj = bin_index(rec.mismatch, m_lo, m_hi, m_bins);
        cells[bj * r_bins + bi].push(rec.coherence);
    }
    let mut flagged = 0usize;
    let values: Vec<Option<f64>> = cells
        .iter()
        .map(|cell| {
            if cell.len() >= MIN_BIN_OCCUPANCY {
                Some(stats::median(cell))
            } else {
                if !cell.is_empty() {
                    flagged += 1;
                }
                None
            }
        })
        .collect();
    let centers = |lo: f64, hi: f64, n: usize| -> Vec<f64> {
        let w = (hi - lo) / n as f64;
        (0..n).map(|i| lo + (i as f64 + 0.5) * w).collect()
    };
    let grid = ContourGrid {
        xs: centers(r_lo, r_hi, r_bins),
        ys: centers(m_lo, m_hi, m_bins),
        values,
    };
    Ok(ContourOutcome {
        level,
        polylines: marching_squares(&grid, level),
        flagged_bins: flagged,
    })
}

fn bin_index(v: f64, lo: f64, hi: f64, bins: usize) -> usize {
    let t = (v - lo) / (hi - lo);
    ((t * bins as f64) as usize).min(bins - 1)
}
