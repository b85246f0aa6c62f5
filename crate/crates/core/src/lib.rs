//! Single-local-oscillator multimode homodyne tomography.
//!
//! - [`specfun`]: Laguerre polynomials, `Phi(2, 1/2; z)`, Gauss-Laguerre rules.
//! - [`kernels`]: unbiased estimators mapping one homodyne outcome to an
//!   observable.
//! - [`states`]: twin-beam and GHZ reference states, their exact statistics,
//!   and samplers.
//! - [`engine`]: single-pass, partitioned averaging with standard errors.

pub mod engine;
pub mod error;
pub mod kernels;
pub mod rng;
pub mod specfun;
pub mod states;

pub use error::{Error, Result};
