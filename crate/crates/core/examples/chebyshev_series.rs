//! Chebyshev coefficients of functions analytic on [-1, 1] and their
//! geometric decay.

use padelab::functions::{cheb_coeffs, ComplexParam, FunctionSpec};
use padelab::numkernel::PrecisionCtx;

fn main() -> padelab::Result<()> {
    let ctx = PrecisionCtx::new(256)?;
    let markov = FunctionSpec::markov_arcsine(2, 3)?;
    // 1 / (2 - x)
    let pole = FunctionSpec::simple_pole(ComplexParam::real(2), ComplexParam::real(-1));
    for spec in [&markov, &pole] {
        let c = cheb_coeffs(spec, 20, &ctx)?;
        println!("{}", spec.label());
        for k in (0..=20).step_by(4) {
            let ratio = if k > 0 {
                (c[k].real().to_f64() / c[k - 1].real().to_f64()).abs()
            } else {
                f64::NAN
            };
            println!("  c{k:<2} = {:+.12e}   |c_k / c_(k-1)| = {ratio:.6}", c[k].real().to_f64());
        }
    }
    println!("1/(2 - x) decays like (2 - sqrt 3)^k = {:.6}^k", 2.0 - 3f64.sqrt());
    Ok(())
}
