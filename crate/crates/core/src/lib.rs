//! Whitney extension of finite data on the line for homogeneous Sobolev
//! spaces `L^m_p(ℝ)`, together with the trace-norm functionals that
//! characterize the restrictions of such functions to finite sets.
//!
//! The pipeline is: [`knots`] picks interpolation nodes `S_x` for each data
//! point, [`jets`] turns them into a Whitney field `x ↦ P_x`, and
//! [`extension`] glues the field with two-point Hermite polynomials across
//! the gaps. [`functionals`] computes the discrete quantities that the
//! seminorm of the extension is compared against; [`oracle`] provides the
//! exact minimal-energy interpolant for `p = 2`.

pub mod divdiff;
pub mod error;
pub mod extension;
pub mod functionals;
pub mod jets;
pub mod knots;
pub mod oracle;
pub mod poly;
pub mod quadrature;
pub mod suite;
pub mod tolerances;

pub use divdiff::SampledFunction;
pub use error::{Error, Result};
pub use extension::{whitney_extend, ExtensionResult};
pub use poly::{LocalPolynomial, PiecewisePolynomial, Polynomial};
pub use tolerances::Tolerances;
