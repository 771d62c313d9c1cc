//! Laurent coefficients at infinity of the model functions.

use padelab::functions::{laurent_coeffs, Decimal, FunctionSpec, Segment};
use padelab::numkernel::PrecisionCtx;

fn main() -> padelab::Result<()> {
    let ctx = PrecisionCtx::new(256)?;
    let specs = [
        FunctionSpec::InvSqrt,
        FunctionSpec::markov_arcsine(2, 3)?,
        FunctionSpec::nikishin(Segment::unit(), Segment::new(2, 3)?)?,
        FunctionSpec::figure_class_l(Decimal::new("1.5")?, Decimal::new("0.2")?, Decimal::new("1.2")?)?,
    ];
    for spec in &specs {
        let tail = laurent_coeffs(spec, 8, &ctx)?;
        println!("{}", spec.label());
        for (k, c) in tail.coeffs().iter().enumerate() {
            println!("  c{k:<2} = {:+.15e} {:+.15e}i", c.real().to_f64(), c.imag().to_f64());
        }
    }
    Ok(())
}
