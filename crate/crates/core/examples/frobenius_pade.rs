//! Linear Chebyshev–Padé (Frobenius) approximants from Chebyshev
//! coefficients, and the weighted variant computed from samples.

use padelab::chebpade::{frobenius_pade, weighted_chebpade};
use padelab::functions::{cheb_coeffs, FunctionSpec};
use padelab::numkernel::{cabs, Complex, PrecisionCtx};

fn main() -> padelab::Result<()> {
    let ctx = PrecisionCtx::new(256)?;
    let spec = FunctionSpec::markov_arcsine(2, 3)?;
    let f = spec.bind(&ctx)?;
    let x = ctx.complex(0.3);
    let exact = f.eval(&x)?;
    for n in [2, 4, 8] {
        let c = cheb_coeffs(&spec, 3 * n, &ctx)?;
        let a = frobenius_pade(&c, n, &ctx)?;
        let w = weighted_chebpade(|z| f.eval(z), |_| Ok(ctx.one()), n, &ctx)?;
        let ea = cabs(&Complex::with_val(ctx.bits(), &exact - a.eval(&x))).to_f64();
        let ew = cabs(&Complex::with_val(ctx.bits(), &exact - w.eval(&x))).to_f64();
        println!("n = {n}  |f - Phi_n|(0.3) = {ea:.3e}   weighted, w = 1: {ew:.3e}");
    }
    Ok(())
}
