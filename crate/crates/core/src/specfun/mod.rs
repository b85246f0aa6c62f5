//! Special functions and quadrature behind the estimator kernels.

mod kernel;
mod kummer;
mod laguerre;
mod quadrature;
pub mod reference;

pub use kernel::{kernel_integral, kernel_integral_half};
pub use kummer::kummer_phi;
pub use laguerre::laguerre;
pub use quadrature::{gauss_laguerre, QuadratureRule, DEFAULT_ORDER, MAX_ORDER};

pub(crate) use kernel::symmetric_part;
pub(crate) use kummer::kummer_phi_unchecked;
pub(crate) use laguerre::{laguerre_sequence, laguerre_unchecked};
