//! Arbitrary-precision numeric substrate: scalars, polynomials in monomial and
//! Chebyshev bases, Laurent tails at infinity, homogeneous linear solves and
//! trapezoid-rule contour quadrature.

mod laurent;
mod linalg;
mod poly;
mod precision;
mod quadrature;

pub use laurent::{laurent_mul, LaurentTail, TailValue};
pub use linalg::{nullspace_vector, CMatrix, NullSpace};
pub use poly::{cheb_product, convert_basis, Basis, BigPolynomial};
pub use precision::{cabs, cmag2, decimal, parse_real, PrecisionCtx, PrecisionMeta};
pub use quadrature::{
    chebyshev_nodes, circle_nodes, contour_integrate, contour_integrate_adaptive, Circle,
    ContourOutcome,
};

pub use rug::{Complex, Float};
pub(crate) use poly::largest_index;
