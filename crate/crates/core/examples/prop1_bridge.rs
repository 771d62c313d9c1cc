//! Frobenius approximants of a Markov function against the Hermite–Padé
//! ratio -Q1/Q2 of the matching Nikishin pair.

use padelab::chebpade::bridge_prop1;
use padelab::functions::Segment;
use padelab::numkernel::PrecisionCtx;

fn main() -> padelab::Result<()> {
    let ctx = PrecisionCtx::new(512)?;
    let sigma = Segment::new(2, 3)?;
    for n in [2, 5, 10] {
        let r = bridge_prop1(&Segment::unit(), &sigma, n, &ctx)?;
        println!(
            "n = {n:2}  aligned coefficient deviation 2^{:.1}  (Q: {:.2e}, P: {:.2e})",
            r.deviation_log2, r.q_deviation, r.p_deviation
        );
    }
    Ok(())
}
