//! Discrete bound-state energies of three-body Coulomb systems.
//!
//! The three-body problem is reduced to a pair of one-dimensional radial
//! problems with an inverse-power potential `A/r^(κ+1)`. The reduction is
//! only possible when the particle triangle admits a configuration where the
//! charge-weighted sums `Σ Z_ij / r_ij^k` vanish; [`geometry`] decides that.
//! [`kappa0`] then produces the Coulombic (`κ = 0`) spectrum in closed form,
//! and [`kappa1`] handles the `r^-2` transition potential with a hard-core
//! cut-off radius.
//!
//! Everything numeric is generic over [`Real`], with `f64` aliases exported
//! at the crate root for the common case.
//!
//! ```
//! use coulomb3::{kappa0, Exponent, System};
//!
//! let helium = System::new([-1, -1, 2], [1.0, 1.0, 7294.299536]).unwrap();
//! let e = kappa0::energy_kappa0(&helium, 1, 1, Exponent::Infinite).unwrap();
//! assert!((e + 2.914048).abs() < 1e-6);
//! ```

// `!(x > 0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod geometry;
pub mod kappa0;
pub mod kappa1;
pub mod scalar;
pub mod specfun;
pub mod system;

pub use geometry::{Exponent, FeasibilityReport, GeometrySolution, Rejection, SignCase};
pub use scalar::Real;
pub use system::{Arrangement, KineticCoefficients, PairCouplings, SystemError, ThreeBodySystem};

/// Double-precision three-body system.
pub type System = ThreeBodySystem<f64>;
/// Double-precision kinetic coefficients.
pub type Coefficients = KineticCoefficients<f64>;
/// Double-precision geometry solution.
pub type Geometry = GeometrySolution<f64>;
/// Double-precision spectrum entry.
pub type SpectrumEntry = kappa0::SpectrumEntry<f64>;
/// Double-precision `κ = 1` match.
pub type Kappa1Match = kappa1::Kappa1Match<f64>;
/// Double-precision matching scan.
pub type ScanCurve = kappa1::ScanCurve<f64>;
