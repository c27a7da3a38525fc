//! Exact upper and lower bounds on the gap between the arithmetic and
//! geometric means, `E X - exp E ln X`, of a nonnegative random variable.
//!
//! The bounds are expressed through the variance `V` of `sqrt(X)` and the
//! mean squared distances `E`, `F` of `sqrt(X)` from the bottom and top of
//! its support:
//!
//! ```text
//! min(2V, FV/(F-V))  <=  E X - exp E ln X  <=  max(2V, E)
//! ```
//!
//! Both sides are sharp and are attained (or approached) by two-point laws of
//! `sqrt(X)`; the [`extremal`] module constructs those laws and the
//! [`verify`] module runs seeded falsification campaigns against every
//! statement.
//!
//! ```
//! use amgm_core::{bounds::check_bounds, stats::uniform_from_values};
//!
//! let d = uniform_from_values(&[1.0, 9.0]).unwrap();
//! let b = check_bounds(&d).unwrap();
//! assert!((b.gap - 2.0).abs() < 1e-12);
//! assert!(b.equality_case);
//! ```

pub mod bounds;
pub mod error;
pub mod extremal;
pub mod par;
pub mod quadrature;
pub mod stats;
pub mod verify;

pub use bounds::{check_bounds, BoundResult};
pub use error::{Error, Result};
pub use extremal::{MixtureSpec, TwoPointSpec};
pub use stats::{DiscreteDistribution, ExtReal, MomentSummary};
pub use verify::{CampaignConfig, VerificationReport};
