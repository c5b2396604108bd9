//! Simulation of localized two-mode Gaussian states carried from an inertial
//! frame to a pair of uniformly accelerated observers.
//!
//! The pipeline: build the inertial and accelerated wave packets on the
//! shared t = 0 surface ([`modes`]), compute their Bogolyubov overlaps by
//! adaptive quadrature ([`overlap`]), assemble the resulting noisy Gaussian
//! channel ([`channel`]), and evaluate Gaussian coherence of the transported
//! two-mode squeezed vacuum ([`gaussian`]). [`mismatch`] quantifies the
//! packet shape difference and [`sweep`] orchestrates the deterministic
//! parameter scans.
//!
//! ```
//! use wedgesim_core::channel::output_tmsv_closed_form;
//! use wedgesim_core::gaussian::{coherence, two_mode_squeezed_vacuum, Convention};
//! use wedgesim_core::modes::{ModeSpec, Region};
//! use wedgesim_core::overlap::compute_overlaps;
//!
//! # fn main() -> wedgesim_core::Result<()> {
//! // One observer per wedge, both at proper acceleration 0.1.
//! let spec_i = ModeSpec::new(Region::I, 0.1, 2.0, 5.0, 0.1)?;
//! let spec_ii = ModeSpec::new(Region::II, 0.1, 2.0, 5.0, 0.1)?;
//! let alpha_i = compute_overlaps(&spec_i)?.alpha().re;
//! let alpha_ii = compute_overlaps(&spec_ii)?.alpha().re;
//!
//! // Transported squeezed vacuum loses coherence relative to the input.
//! let observed = coherence(
//!     &output_tmsv_closed_form(alpha_i, alpha_ii, 1.0),
//!     Convention::Physical,
//! )?;
//! let prepared = coherence(&two_mode_squeezed_vacuum(1.0), Convention::Physical)?;
//! assert!(observed > 0.0 && observed < prepared);
//! # Ok(())
//! # }
//! ```

pub mod channel;
pub mod contour;
pub mod error;
pub mod gaussian;
pub mod mismatch;
pub mod modes;
pub mod overlap;
pub mod quad;
pub mod rng;
pub mod special;
pub mod stats;
pub mod sweep;

mod fourier;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Version stamp for cache entries and output provenance headers. Bump when
/// a numeric kernel changes in a way that invalidates stored results.
pub const ENGINE_VERSION: u32 = 1;
