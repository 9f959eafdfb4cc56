//! Sharp Hardy constants for the weighted Dirac quadratic form
//! `Q_b(u) = ∫ |x|^{-b} |(σ·∇)u|² dx` on `R^n ∖ {0}`.
//!
//! The crate is organized bottom-up:
//!
//! * [`clifford`]: exact Hermitian generators of the Clifford relations.
//! * [`angular`]: exact polynomial-spinor calculus for `σ·∇`, the angular
//!   operator `L` and `Δ_S`, and the brute-force spectrum of `L`.
//! * [`constants`]: closed forms for `c_b`, mode coefficients and weights.
//! * [`radial`]: per-mode 1-D eigenproblems on log-radial grids.
//! * [`oracle`]: Cartesian quadrature cross-checks of the radial reduction.
//! * [`suite`]: the pinned verification battery behind `full-suite`.

// `!(x > 0.0)` deliberately rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod angular;
pub mod clifford;
pub mod constants;
pub mod error;
pub mod oracle;
pub mod profile;
pub mod radial;
pub mod report;
pub mod stats;
pub mod suite;

pub use angular::{AngularSpectrum, PolySpinor};
pub use clifford::{build_generators, verify_clifford, CliffordRep};
pub use constants::{hardy_constant, HardyConstantReport, RemainderVariant, RemainderWeights};
pub use error::{Error, Result};
pub use radial::{EigenResult, ModeProblem, RadialGrid};
pub use report::{CaseRecord, VerificationReport};
