//! The two-point class (L) comparison between the Frobenius approximant of
//! the jump ratio and the Hermite–Padé polynomials of [1, 1/sqrt(z^2-1), f].

use padelab::chebpade::{bridge_class_l, default_probes};
use padelab::functions::{ComplexParam, Ratio};
use padelab::numkernel::PrecisionCtx;

fn main() -> padelab::Result<()> {
    let ctx = PrecisionCtx::new(512)?;
    let probes = default_probes(&ctx);
    for n in [2, 6, 10] {
        let r = bridge_class_l(&ComplexParam::real(2), &ComplexParam::real(3), Ratio::new(1, 2)?, n, &probes, &ctx)?;
        println!(
            "n = {n:2}  |Phi_n - (Q1/Q2 + 1/sqrt(A1 A2))| = {:.3e}   |Phi_n + Q1/Q2| = {:.3e}",
            r.literal_deviation, r.prop1_form_deviation
        );
    }
    Ok(())
}
