//! Arbitrary-precision laboratory for rational approximation with free poles.
//!
//! The crate computes classical and multipoint Padé approximants, type I
//! Hermite–Padé polynomials and linear Chebyshev–Padé (Frobenius)
//! approximants of multivalued model functions, extracts their zeros and
//! poles, and solves the scalar and vector logarithmic equilibrium problems
//! that predict where those zeros accumulate.

pub mod chebpade;
pub mod equilibrium;
pub mod error;
pub mod expcli;
pub mod functions;
pub mod hermite;
pub mod numkernel;
pub mod pade;
pub mod record;
pub mod roots;

pub use error::{Error, Result};
