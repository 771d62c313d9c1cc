//! Model functions: Markov and Nikishin Cauchy transforms, class (L)
//! products over the inverse Zhukovskii map, and their expansions at
//! infinity and on `[-1, 1]`.

mod eval;
mod expand;
mod spec;

pub use eval::{evaluate, inv_phi, phi, sqrt_z2m1, BoundFunction};
pub use expand::{cheb_coeffs, cheb_coeffs_with, laurent_coeffs, laurent_coeffs_with};
pub use spec::{ratio_sum, ComplexParam, Decimal, FunctionSpec, Ratio, Segment};
