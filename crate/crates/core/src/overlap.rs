//! Bogolyubov overlaps between the inertial and accelerated packets on the
//! shared t = 0 surface, evaluated by one fused adaptive quadrature pass:
//!
//!   alpha = Omega_0 C C' integral psi phi (1 + x0/x) dx,
//!   beta  = Omega_0 C C' integral psi phi (1 - x0/x) dx,
//!
//! with C, C' the Klein-Gordon normalization constants accumulated in the
//! same pass. The weights (1 +/- x0/x) follow from d_t phi = -i Omega_0 phi
//! and d_t psi = -i Omega_0 (x0/x) psi at eta = t = 0; the (1 - x0/x) weight
//! vanishing at the packet center is what makes beta orders of magnitude
//! smaller than alpha.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::modes::{initial_panels, ModeSpec, OutputModulation, Region};
use crate::quad::{self, GaussLegendre, PANEL_POINTS};
use crate::ENGINE_VERSION;

/// Default relative tolerance of the overlap quadrature.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Stamp describing the fixed discretization choices baked into the engine;
/// part of every cache key.
pub const GRID_POLICY: &str = "support1e-12 floor0.02 gl16 tenth-period";

/// Bogolyubov pair (alpha, beta) for one packet at one acceleration. Kept
/// complex so the full beta-inclusive channel matrix can consume them,
/// although the real-profile phase convention makes both real.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapCoefficients {
    alpha: Complex64,
    beta: Complex64,
    spec: ModeSpec,
    quadrature_tol: f64,
}

impl OverlapCoefficients {
    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn beta(&self) -> Complex64 {
        self.beta
    }

    pub fn spec(&self) -> &ModeSpec {
        &self.spec
    }

    pub fn quadrature_tol(&self) -> f64 {
        self.quadrature_tol
    }

    /// Coefficients with prescribed real values, for channel diagnostics and
    /// tests that do not need the quadrature.
    pub fn synthetic(alpha: f64, beta: f64) -> Self {
        let spec =
            ModeSpec::relaxed(Region::I, 0.1, 2.0, 5.0, 0.1).expect("reference spec is hard-valid");
        OverlapCoefficients {
            alpha: Complex64::new(alpha, 0.0),
            beta: Complex64::new(beta, 0.0),
            spec,
            quadrature_tol: 0.0,
        }
    }
}

/// Overlaps at the default tolerance.
pub fn compute_overlaps(spec: &ModeSpec) -> Result<OverlapCoefficients> {
    compute_overlaps_with_tol(spec, DEFAULT_TOL)
}

/// Overlaps with an explicit quadrature tolerance.
pub fn compute_overlaps_with_tol(spec: &ModeSpec, tol: f64) -> Result<OverlapCoefficients> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::InvalidConfig(format!(
            "quadrature tolerance must be positive, got {tol}"
        )));
    }
    crate::modes::check_resolution_budget(spec)?;
    let modulation = OutputModulation::new(spec)?;
    let (lo, hi) = spec.support();
    let x0 = spec.x0();
    let k0 = spec.wavenumber();
    let rule = GaussLegendre::new(PANEL_POINTS);
    let panels = initial_panels(spec, lo, hi);
    let mut failure = None;
    // Components: integral phi^2, integral psi^2 (x0/x), integral psi phi
    // (1 + x0/x), integral psi phi (1 - x0/x). Region signs square away.
    let out = quad::adaptive_bisect(
        &rule,
        lo,
        hi,
        panels,
        22,
        |prev: &[f64; 4], cur: &[f64; 4]| {
            let norm_ok = (0..2).all(|i| (prev[i] - cur[i]).abs() <= tol * cur[i].abs());
            let alpha_ok = (prev[2] - cur[2]).abs() <= tol * cur[2].abs().max(f64::MIN_POSITIVE);
            let beta_scale = cur[3].abs().max(cur[2].abs());
            let beta_ok = (prev[3] - cur[3]).abs() <= tol * beta_scale;
            norm_ok && alpha_ok && beta_ok
        },
        |x| {
            let phi = spec.envelope(x) * (k0 * (x - x0)).sin();
            let psi = match modulation.eval(x) {
                Ok(g) => spec.envelope(x) * g,
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            };
            let w = x0 / x;
            [
                phi * phi,
                psi * psi * w,
                psi * phi * (1.0 + w),
                psi * phi * (1.0 - w),
            ]
        },
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    let [i_phi, i_psi, i_plus, i_minus] = out.values;
    if !(i_phi > 0.0) || !(i_psi > 0.0) {
        return Err(Error::Numeric {
            op: "compute_overlaps",
            detail: format!("non-positive norm integrals {i_phi}, {i_psi}"),
        });
    }
    let two_omega = 2.0 * spec.omega0();
    let c_in = 1.0 / (two_omega * i_phi).sqrt();
    let c_out = 1.0 / (two_omega * i_psi).sqrt();
    let scale = spec.omega0() * c_in * c_out;
    let alpha = scale * i_plus;
    let beta = scale * i_minus;
    if !alpha.is_finite() || !beta.is_finite() {
        return Err(Error::Numeric {
            op: "compute_overlaps",
            detail: format!("non-finite coefficients alpha = {alpha}, beta = {beta}"),
        });
    }
    if alpha.abs() <= 0.0 || alpha.abs() > 1.0 + 1e-9 {
        return Err(Error::Numeric {
            op: "compute_overlaps",
            detail: format!("|alpha| = {} outside (0, 1]", alpha.abs()),
        });
    }
    if alpha * alpha - beta * beta > 1.0 + 1e-6 {
        return Err(Error::Numeric {
            op: "compute_overlaps",
            detail: format!(
                "|alpha|^2 - |beta|^2 = {} above 1",
                alpha * alpha - beta * beta
            ),
        });
    }
    Ok(OverlapCoefficients {
        alpha: Complex64::new(alpha, 0.0),
        beta: Complex64::new(beta, 0.0),
        spec: *spec,
        quadrature_tol: tol,
    })
}

/// One entry of an overlap-versus-acceleration curve.
#[derive(Debug)]
pub struct CurveEntry {
    pub accel: f64,
    pub guards_ok: bool,
    pub result: Result<OverlapCoefficients>,
}

/// Overlaps along a list of accelerations at fixed waveform parameters.
/// Entries whose spec fails a hard precondition carry the error; guard
/// violations are computed and flagged (the reference sweeps deliberately
/// extend past the guard boundary).
pub fn overlap_curve(base: &ModeSpec, accels: &[f64]) -> Vec<CurveEntry> {
    accels
        .iter()
        .map(|&accel| {
            match ModeSpec::relaxed(
                base.region(),
                accel,
                base.width(),
                base.omega0(),
                base.mass(),
            ) {
                Ok(spec) => CurveEntry {
                    accel,
                    guards_ok: spec.satisfies_guards(),
                    result: compute_overlaps(&spec),
                },
                Err(e) => CurveEntry {
                    accel,
                    guards_ok: false,
                    result: Err(e),
                },
            }
        })
        .collect()
}

/// How a cached lookup was satisfied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CacheOutcome {
    Hit,
    Miss,
    /// Entry existed but was corrupt or stale; recomputed and overwritten.
    Recovered,
}

/// One-file-per-key overlap store with atomic writes (temp file + rename),
/// safe under concurrent writers.
#[derive(Debug, Clone)]
pub struct OverlapCache {
    dir: PathBuf,
}

static TEMP_COUNTER: AtomicU64 = AtomicU64::new(0);

impl OverlapCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        OverlapCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Fetch or compute the overlaps for `spec` at the default tolerance.
    pub fn get_or_compute(&self, spec: &ModeSpec) -> Result<OverlapCoefficients> {
        self.get_or_compute_with_outcome(spec, DEFAULT_TOL)
            .map(|(c, _)| c)
    }

    pub fn get_or_compute_with_outcome(
        &self,
        spec: &ModeSpec,
        tol: f64,
    ) -> Result<(OverlapCoefficients, CacheOutcome)> {
        let key = canonical_key(spec, tol);
        let path = self.dir.join(format!("overlap-{:016x}.txt", fnv1a(&key)));
        let mut outcome = CacheOutcome::Miss;
        match fs::read_to_string(&path) {
            Ok(text) => match parse_entry(&text, &key, spec, tol) {
                Ok(coeffs) => return Ok((coeffs, CacheOutcome::Hit)),
                Err(e) => {
                    eprintln!(
                        "warning: discarding unusable cache entry {}: {e}",
                        path.display()
                    );
                    outcome = CacheOutcome::Recovered;
                }
            },
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
            Err(e) => return Err(e.into()),
        }
        let coeffs = compute_overlaps_with_tol(spec, tol)?;
        self.store(&path, &key, &coeffs)?;
        Ok((coeffs, outcome))
    }

    fn store(&self, path: &Path, key: &str, coeffs: &OverlapCoefficients) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let mut body = String::new();
        body.push_str("wedgesim overlap cache entry\n");
        let _ = writeln!(body, "{key}");
        let _ = writeln!(body, "alpha_re = {:.16e}", coeffs.alpha.re);
        let _ = writeln!(body, "alpha_im = {:.16e}", coeffs.alpha.im);
        let _ = writeln!(body, "beta_re = {:.16e}", coeffs.beta.re);
        let _ = writeln!(body, "beta_im = {:.16e}", coeffs.beta.im);
        let tmp = self.dir.join(format!(
            ".tmp-{}-{}",
            std::process::id(),
            TEMP_COUNTER.fetch_add(1, Ordering::Relaxed)
        ));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(body.as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, path)?;
        Ok(())
    }
}

/// Canonical key block: every field that influences the numbers.
fn canonical_key(spec: &ModeSpec, tol: f64) -> String {
    format!(
        "engine_version = {ENGINE_VERSION}\n\
         region = {}\n\
         accel = {:.16e}\n\
         width = {:.16e}\n\
         omega0 = {:.16e}\n\
         mass = {:.16e}\n\
         grid_policy = {GRID_POLICY}\n\
         quadrature_tol = {:.16e}",
        spec.region().label(),
        spec.accel(),
        spec.width(),
        spec.omega0(),
        spec.mass(),
        tol,
    )
}

fn parse_entry(
    text: &str,
    expected_key: &str,
    spec: &ModeSpec,
    tol: f64,
) -> Result<OverlapCoefficients> {
    let mut lines = text.lines();
    if lines.next() != Some("wedgesim overlap cache entry") {
        return Err(Error::Parse("missing cache header".into()));
    }
    let rest: Vec<&str> = lines.collect();
    let key_lines = expected_key.lines().count();
    if rest.len() < key_lines + 4 {
        return Err(Error::Parse("truncated cache entry".into()));
    }
    let stored_key = rest[..key_lines].join("\n");
    if stored_key != expected_key {
        return Err(Error::Parse(
            "key mismatch (stale or colliding entry)".into(),
        ));
    }
    let mut values = [0.0f64; 4];
    for (slot, (line, name)) in rest[key_lines..key_lines + 4]
        .iter()
        .zip(["alpha_re", "alpha_im", "beta_re", "beta_im"])
        .enumerate()
        .map(|(i, (l, n))| (i, (*l, n)))
    {
        let prefix = format!("{name} = ");
        let value = line
            .strip_prefix(&prefix)
            .ok_or_else(|| Error::Parse(format!("missing field {name}")))?;
        values[slot] = value
            .parse::<f64>()
            .map_err(|e| Error::Parse(format!("bad {name}: {e}")))?;
    }
    Ok(OverlapCoefficients {
        alpha: Complex64::new(values[0], values[1]),
        beta: Complex64::new(values[2], values[3]),
        spec: *spec,
        quadrature_tol: tol,
    })
}

/// FNV-1a over the canonical key; collisions are survivable because the key
/// block is verified on read.
fn fnv1a(s: &str) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for b in s.as_bytes() {
        hash ^= *b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

/// Convenience wrapper: overlaps through a cache directory.
pub fn cached_overlaps(
    spec: &ModeSpec,
    cache_dir: impl Into<PathBuf>,
) -> Result<OverlapCoefficients> {
    OverlapCache::new(cache_dir).get_or_compute(spec)
}
