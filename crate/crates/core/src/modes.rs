//! Localized wave packets on the shared t = 0 surface: the inertial packet
//! (Gaussian-in-log envelope times a sinusoid) and its accelerated
//! counterpart (same envelope, Bessel-product modulation), plus gridded
//! sampling, Klein-Gordon normalization and the plane-wave purity tools.
//!
//! Conventions fixed here and relied on everywhere else:
//! * profiles are real at t = 0; the time dependence sits in the momentum
//!   data d_t phi = -i u(x) with u = Omega_0 phi for inertial packets and
//!   u = Omega_0 (x0 / chi) psi for accelerated ones (proper time referenced
//!   to the packet-center trajectory chi = x0 = 1/A);
//! * region II is the mirror of region I with an overall sign flip, so all
//!   numerics run on positive coordinates.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fourier;
use crate::quad::{self, GaussLegendre, PANEL_POINTS};
use crate::special::{self, BesselOrder};

/// Lower coordinate clip keeping evaluations away from the horizon, matching
/// the mismatch grid floor.
pub const GRID_FLOOR: f64 = 0.02;
/// Envelope threshold defining the numeric support: exp(-2 u^2 (x0/L)^2) >= 1e-12.
const ENVELOPE_LOG_CUT: f64 = 27.631021115928547; // ln(1e12)
/// Grid must resolve the oscillation with at least this many points per period.
const POINTS_PER_PERIOD: f64 = 20.0;
/// Coarsest admissible grid spacing.
const MAX_STEP: f64 = 0.01;
/// Frequency-packet guard: omega0 * width >= 5.
pub const MIN_OMEGA_WIDTH: f64 = 5.0;
/// Horizon-distance guard: x0 >= 5 * width.
pub const MIN_HORIZON_RATIO: f64 = 5.0;

/// Rindler wedge hosting the packet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    I,
    II,
}

impl Region {
    pub fn label(self) -> &'static str {
        match self {
            Region::I => "I",
            Region::II => "II",
        }
    }

    fn sign(self) -> f64 {
        match self {
            Region::I => 1.0,
            Region::II => -1.0,
        }
    }
}

/// Full parameterization of one localized packet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSpec {
    region: Region,
    accel: f64,
    width: f64,
    omega0: f64,
    mass: f64,
}

impl ModeSpec {
    /// Construct with both the hard preconditions and the regime guards
    /// (omega0 * width >= 5, 1/accel >= 5 * width) enforced.
    pub fn new(region: Region, accel: f64, width: f64, omega0: f64, mass: f64) -> Result<Self> {
        let spec = Self::relaxed(region, accel, width, omega0, mass)?;
        if !spec.satisfies_guards() {
            return Err(Error::InvalidSpec(format!(
                "regime guards violated: omega0*width = {:.4} (needs >= {MIN_OMEGA_WIDTH}), \
                 1/accel = {:.4} vs 5*width = {:.4}",
                omega0 * width,
                1.0 / accel,
                MIN_HORIZON_RATIO * width,
            )));
        }
        Ok(spec)
    }

    /// Construct with only the hard preconditions (accel, width > 0,
    /// omega0 > mass >= 0, all finite). Sweeps that deliberately step outside
    /// the guard region use this and record the flag.
    pub fn relaxed(region: Region, accel: f64, width: f64, omega0: f64, mass: f64) -> Result<Self> {
        for (name, v) in [
            ("accel", accel),
            ("width", width),
            ("omega0", omega0),
            ("mass", mass),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidSpec(format!(
                    "{name} must be finite, got {v}"
                )));
            }
        }
        if accel <= 0.0 || width <= 0.0 {
            return Err(Error::InvalidSpec(format!(
                "accel and width must be > 0, got accel = {accel}, width = {width}"
            )));
        }
        if mass < 0.0 {
            return Err(Error::InvalidSpec(format!("mass must be >= 0, got {mass}")));
        }
        if omega0 <= mass {
            return Err(Error::InvalidSpec(format!(
                "omega0 must exceed the field mass, got omega0 = {omega0}, mass = {mass}"
            )));
        }
        Ok(ModeSpec {
            region,
            accel,
            width,
            omega0,
            mass,
        })
    }

    pub fn region(&self) -> Region {
        self.region
    }

    pub fn accel(&self) -> f64 {
        self.accel
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Packet center x0 = 1/A.
    pub fn x0(&self) -> f64 {
        1.0 / self.accel
    }

    /// Sinusoid wavenumber sqrt(omega0^2 - mass^2).
    pub fn wavenumber(&self) -> f64 {
        (self.omega0 * self.omega0 - self.mass * self.mass).sqrt()
    }

    /// Bessel order omega0 / accel of the accelerated modulation.
    pub fn bessel_order(&self) -> Result<BesselOrder> {
        BesselOrder::new(self.omega0 / self.accel)
    }

    /// True when the packet sits in the regime the channel derivation
    /// assumes. Violations are survivable numerically; results outside the
    /// guard region are diagnostics.
    pub fn satisfies_guards(&self) -> bool {
        self.omega0 * self.width >= MIN_OMEGA_WIDTH && self.x0() >= MIN_HORIZON_RATIO * self.width
    }

    /// Gaussian-in-log envelope shared by both packets.
    pub fn envelope(&self, x: f64) -> f64 {
        let u = self.x0() / self.width * (x / self.x0()).ln();
        (-2.0 * u * u).exp()
    }

    /// Half-width of the envelope support in the log coordinate.
    fn log_half_support(&self) -> f64 {
        self.width / self.x0() * (ENVELOPE_LOG_CUT / 2.0).sqrt()
    }

    /// Coordinate interval where the envelope exceeds the support threshold,
    /// floored at [`GRID_FLOOR`].
    pub fn support(&self) -> (f64, f64) {
        let u = self.log_half_support();
        let lo = (self.x0() * (-u).exp()).max(GRID_FLOOR);
        let hi = (self.x0() * u.exp()).max(lo + 4.0 * MAX_STEP);
        (lo, hi)
    }
}

/// Unnormalized inertial profile at t = 0: envelope times
/// sin(sqrt(omega0^2 - m^2) (x - x0)), region II mirrored with a sign flip.
pub fn input_profile(spec: &ModeSpec, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            op: "input_profile",
            detail: format!("coordinate must be finite and > 0, got {x}"),
        });
    }
    let s = (spec.wavenumber() * (x - spec.x0())).sin();
    Ok(spec.region.sign() * spec.envelope(x) * s)
}

/// Cached accelerated-side modulation: the Bessel product with the reference
/// factor S(m x0; nu) hoisted out of the per-point loop.
#[derive(Debug, Clone)]
pub struct OutputModulation {
    order: BesselOrder,
    s_ref: Complex64,
    x0: f64,
    mass: f64,
}

impl OutputModulation {
    pub fn new(spec: &ModeSpec) -> Result<Self> {
        let order = spec.bessel_order()?;
        let s_ref = special::scaled_bessel(order, spec.mass * spec.x0())?;
        Ok(OutputModulation {
            order,
            s_ref,
            x0: spec.x0(),
            mass: spec.mass,
        })
    }

    /// g(chi) up to the positive prefactor absorbed by normalization. The
    /// log ratio ln(chi/x0) is formed mass-free, so the massless limit is
    /// exact rather than 0/0.
    pub fn eval(&self, chi: f64) -> Result<f64> {
        let s = special::scaled_bessel(self.order, self.mass * chi)?;
        Ok(special::modulation_im(
            self.order.value(),
            self.s_ref,
            s,
            (chi / self.x0).ln(),
        ))
    }
}

/// Unnormalized accelerated profile at t = 0: envelope times the Bessel
/// product modulation, region II mirrored with a sign flip.
pub fn output_profile(spec: &ModeSpec, chi: f64) -> Result<f64> {
    if !(chi > 0.0) || !chi.is_finite() {
        return Err(Error::Domain {
            op: "output_profile",
            detail: format!("coordinate must be finite and > 0, got {chi}"),
        });
    }
    let modulation = OutputModulation::new(spec)?;
    Ok(spec.region.sign() * spec.envelope(chi) * modulation.eval(chi)?)
}

/// Uniform grid covering the envelope support with the oscillation resolved
/// by at least [`POINTS_PER_PERIOD`] points and spacing never above
/// [`MAX_STEP`].
pub fn build_grid(spec: &ModeSpec) -> Vec<f64> {
    let (points, _) = build_grid_with_step(spec);
    points
}

/// Largest sample count any single packet may demand. Guarded packets use a
/// few thousand points; only parameters far outside the modelled regime
/// (width or support enormously exceeding 1/accel) get near this.
const MAX_SAMPLES: f64 = 4_000_000.0;

pub(crate) fn build_grid_with_step(spec: &ModeSpec) -> (Vec<f64>, f64) {
    // The infallible grid builder coarsens the step at the cap instead of
    // exhausting memory; the fallible constructors reject such parameters
    // up front via check_resolution_budget.
    let (lo, hi) = spec.support();
    let step = natural_step(spec);
    let n = (((hi - lo) / step).ceil().min(MAX_SAMPLES) as usize).max(1) + 1;
    let actual = (hi - lo) / (n - 1) as f64;
    let points = (0..n).map(|i| lo + i as f64 * actual).collect();
    (points, actual)
}

fn natural_step(spec: &ModeSpec) -> f64 {
    let period = 2.0 * std::f64::consts::PI / spec.wavenumber();
    MAX_STEP.min(period / POINTS_PER_PERIOD)
}

/// Refuse packets whose envelope support cannot be resolved with a sane
/// sample count (reachable only far outside the guard region, e.g. width
/// many times 1/accel, where the log-support grows like exp(width*accel)).
pub(crate) fn check_resolution_budget(spec: &ModeSpec) -> Result<()> {
    let (lo, hi) = spec.support();
    let demand = (hi - lo) / natural_step(spec);
    if !demand.is_finite() || demand > MAX_SAMPLES {
        return Err(Error::Numeric {
            op: "mode sampling",
            detail: format!(
                "envelope support [{lo:.3e}, {hi:.3e}] needs ~{demand:.1e} samples; \
                 parameters are far outside the modelled regime"
            ),
        });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeKind {
    Input,
    Output,
}

impl ModeKind {
    fn label(self) -> &'static str {
        match self {
            ModeKind::Input => "input",
            ModeKind::Output => "output",
        }
    }
}

/// One packet sampled on its grid, unit Klein-Gordon norm, together with the
/// momentum data u(x) (d_t mode = -i u at t = 0).
#[derive(Debug, Clone)]
pub struct SampledMode {
    spec: ModeSpec,
    kind: ModeKind,
    grid: Vec<f64>,
    step: f64,
    values: Vec<f64>,
    momentum: Vec<f64>,
    norm_constant: f64,
}

impl SampledMode {
    /// Inertial packet: sampled, projected onto positive frequencies (the
    /// zero-frequency cutoff implemented as a full projection) and
    /// normalized.
    pub fn input(spec: &ModeSpec) -> Result<Self> {
        let raw = Self::input_raw(spec)?;
        raw.project_positive_frequency()
    }

    /// Inertial packet without the projection, for spectrum diagnostics.
    pub fn input_raw(spec: &ModeSpec) -> Result<Self> {
        check_resolution_budget(spec)?;
        let (grid, step) = build_grid_with_step(spec);
        let mut values = Vec::with_capacity(grid.len());
        for &x in &grid {
            values.push(input_profile(spec, x)?);
        }
        let momentum = values.iter().map(|v| spec.omega0 * v).collect();
        let mut mode = SampledMode {
            spec: *spec,
            kind: ModeKind::Input,
            grid,
            step,
            values,
            momentum,
            norm_constant: 1.0,
        };
        mode.normalize()?;
        Ok(mode)
    }

    /// Accelerated packet, sampled and normalized. No projection is applied:
    /// the regime guards stand in for Rindler-side purity.
    pub fn output(spec: &ModeSpec) -> Result<Self> {
        check_resolution_budget(spec)?;
        let (grid, step) = build_grid_with_step(spec);
        let modulation = OutputModulation::new(spec)?;
        let sign = spec.region.sign();
        let x0 = spec.x0();
        let mut values = Vec::with_capacity(grid.len());
        let mut momentum = Vec::with_capacity(grid.len());
        for &chi in &grid {
            let v = sign * spec.envelope(chi) * modulation.eval(chi)?;
            values.push(v);
            momentum.push(spec.omega0 * (x0 / chi) * v);
        }
        let mut mode = SampledMode {
            spec: *spec,
            kind: ModeKind::Output,
            grid,
            step,
            values,
            momentum,
            norm_constant: 1.0,
        };
        mode.normalize()?;
        Ok(mode)
    }

    pub fn spec(&self) -> &ModeSpec {
        &self.spec
    }

    pub fn kind(&self) -> ModeKind {
        self.kind
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn momentum(&self) -> &[f64] {
        &self.momentum
    }

    /// Scale factor from the unnormalized analytic profile to the stored
    /// values (C for input packets, C' for output ones).
    pub fn norm_constant(&self) -> f64 {
        self.norm_constant
    }

    /// Klein-Gordon self-norm 2 integral(values * momentum) by the trapezoid
    /// rule; the envelope is far below roundoff at the grid ends, so the
    /// rule converges spectrally here.
    pub fn kg_norm(&self) -> Result<f64> {
        let norm = 2.0 * trapezoid(&self.values, &self.momentum, self.step);
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::Numeric {
                op: "kg_norm",
                detail: format!("non-positive norm {norm}"),
            });
        }
        Ok(norm)
    }

    fn normalize(&mut self) -> Result<()> {
        let norm = self.kg_norm()?;
        let scale = 1.0 / norm.sqrt();
        for v in &mut self.values {
            *v *= scale;
        }
        for u in &mut self.momentum {
            *u *= scale;
        }
        self.norm_constant *= scale;
        Ok(())
    }

    /// Fraction of the Klein-Gordon content carried by negative-frequency
    /// plane waves in the Cauchy data. Input packets only.
    pub fn positive_frequency_residual(&self) -> Result<f64> {
        if self.kind != ModeKind::Input {
            return Err(Error::UnsupportedMode {
                op: "positive_frequency_residual",
                kind: self.kind.label(),
            });
        }
        let (pos, neg) = self.frequency_content();
        let total = pos + neg;
        if !(total > 0.0) {
            return Err(Error::Numeric {
                op: "positive_frequency_residual",
                detail: "mode has no spectral content".into(),
            });
        }
        Ok(neg / total)
    }

    fn spectral_split(&self) -> (Vec<Complex64>, Vec<Complex64>, Vec<f64>) {
        let phi: Vec<Complex64> = self
            .values
            .iter()
            .map(|&v| Complex64::new(v, 0.0))
            .collect();
        let u: Vec<Complex64> = self
            .momentum
            .iter()
            .map(|&v| Complex64::new(v, 0.0))
            .collect();
        let phi_t = fourier::dft(&phi);
        let u_t = fourier::dft(&u);
        let ks = fourier::wavenumbers(self.grid.len(), self.step);
        let mass = self.spec.mass;
        let mut a = vec![Complex64::new(0.0, 0.0); ks.len()];
        let mut b = vec![Complex64::new(0.0, 0.0); ks.len()];
        let mut omegas = vec![0.0; ks.len()];
        for (j, &k) in ks.iter().enumerate() {
            let omega = (k * k + mass * mass).sqrt();
            omegas[j] = omega;
            if omega < 1e-12 {
                continue; // zero-frequency bin carries no propagating content
            }
            a[j] = (omega * phi_t[j] + u_t[j]) / (2.0 * omega);
            b[j] = (omega * phi_t[j] - u_t[j]) / (2.0 * omega);
        }
        (a, b, omegas)
    }

    fn frequency_content(&self) -> (f64, f64) {
        let (a, b, omegas) = self.spectral_split();
        let mut pos = 0.0;
        let mut neg = 0.0;
        for j in 0..a.len() {
            pos += omegas[j] * a[j].norm_sqr();
            neg += omegas[j] * b[j].norm_sqr();
        }
        (pos, neg)
    }

    /// Drop the negative-frequency amplitudes, resynthesize the t = 0 data
    /// and renormalize. Idempotent; the result's residual is at roundoff.
    pub fn project_positive_frequency(&self) -> Result<SampledMode> {
        if self.kind != ModeKind::Input {
            return Err(Error::UnsupportedMode {
                op: "project_positive_frequency",
                kind: self.kind.label(),
            });
        }
        let (a, _, omegas) = self.spectral_split();
        let weighted: Vec<Complex64> = a.iter().zip(&omegas).map(|(aj, &om)| aj * om).collect();
        let values: Vec<f64> = fourier::idft(&a).iter().map(|v| v.re).collect();
        let momentum: Vec<f64> = fourier::idft(&weighted).iter().map(|v| v.re).collect();
        let mut mode = SampledMode {
            spec: self.spec,
            kind: ModeKind::Input,
            grid: self.grid.clone(),
            step: self.step,
            values,
            momentum,
            norm_constant: self.norm_constant,
        };
        mode.normalize()?;
        Ok(mode)
    }
}

fn trapezoid(a: &[f64], b: &[f64], step: f64) -> f64 {
    let n = a.len();
    let mut acc = 0.0;
    for i in 0..n {
        acc += a[i] * b[i];
    }
    acc -= 0.5 * (a[0] * b[0] + a[n - 1] * b[n - 1]);
    acc * step
}

/// Both packets of one spec with unit Klein-Gordon norm, evaluable at
/// arbitrary coordinates. The normalization constants come from adaptive
/// quadrature over the envelope support, so they are grid-free.
#[derive(Debug, Clone)]
pub struct NormalizedModes {
    spec: ModeSpec,
    modulation: OutputModulation,
    input_constant: f64,
    output_constant: f64,
}

impl NormalizedModes {
    pub fn new(spec: &ModeSpec) -> Result<Self> {
        check_resolution_budget(spec)?;
        let modulation = OutputModulation::new(spec)?;
        let (lo, hi) = spec.support();
        let rule = GaussLegendre::new(PANEL_POINTS);
        let x0 = spec.x0();
        let k0 = spec.wavenumber();
        let sign = spec.region.sign();
        let panels = initial_panels(spec, lo, hi);
        let mut failure = None;
        let out = quad::adaptive_bisect(
            &rule,
            lo,
            hi,
            panels,
            22,
            |prev: &[f64; 2], cur: &[f64; 2]| {
                prev.iter()
                    .zip(cur)
                    .all(|(p, c)| (p - c).abs() <= 1e-8 * c.abs().max(f64::MIN_POSITIVE))
            },
            |x| {
                let phi = sign * spec.envelope(x) * (k0 * (x - x0)).sin();
                let psi = match modulation.eval(x) {
                    Ok(g) => sign * spec.envelope(x) * g,
                    Err(e) => {
                        failure.get_or_insert(e);
                        0.0
                    }
                };
                [phi * phi, psi * psi * (x0 / x)]
            },
        )?;
        if let Some(e) = failure {
            return Err(e);
        }
        let [i_in, i_out] = out.values;
        let two_omega = 2.0 * spec.omega0;
        if !(i_in > 0.0) || !(i_out > 0.0) {
            return Err(Error::Numeric {
                op: "NormalizedModes::new",
                detail: format!("non-positive norm integrals {i_in}, {i_out}"),
            });
        }
        Ok(NormalizedModes {
            spec: *spec,
            modulation,
            input_constant: 1.0 / (two_omega * i_in).sqrt(),
            output_constant: 1.0 / (two_omega * i_out).sqrt(),
        })
    }

    pub fn spec(&self) -> &ModeSpec {
        &self.spec
    }

    /// Normalization constant C of the inertial packet.
    pub fn input_constant(&self) -> f64 {
        self.input_constant
    }

    /// Normalization constant C' of the accelerated packet.
    pub fn output_constant(&self) -> f64 {
        self.output_constant
    }

    pub fn input_at(&self, x: f64) -> Result<f64> {
        Ok(self.input_constant * input_profile(&self.spec, x)?)
    }

    pub fn output_at(&self, chi: f64) -> Result<f64> {
        if !(chi > 0.0) || !chi.is_finite() {
            return Err(Error::Domain {
                op: "output_at",
                detail: format!("coordinate must be finite and > 0, got {chi}"),
            });
        }
        let g = self.modulation.eval(chi)?;
        Ok(self.output_constant * self.spec.region.sign() * self.spec.envelope(chi) * g)
    }
}

/// Initial panel count resolving the faster of the two local oscillations
/// (sinusoid wavenumber k0, Bessel phase nu/chi at the left edge) with ten
/// panels per period.
pub(crate) fn initial_panels(spec: &ModeSpec, lo: f64, hi: f64) -> usize {
    let k_osc = spec.wavenumber().max(spec.omega0 / spec.accel / lo);
    let width = 2.0 * std::f64::consts::PI / k_osc / 10.0;
    (((hi - lo) / width).ceil() as usize).max(4)
}
