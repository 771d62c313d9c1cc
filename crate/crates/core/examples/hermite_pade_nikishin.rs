//! Type I Hermite–Padé polynomials of a Nikishin pair and the exact order
//! of the remainder at infinity.

use padelab::functions::{laurent_coeffs, FunctionSpec, Segment};
use padelab::hermite::{hp_remainder_coeffs, hp_type1};
use padelab::numkernel::{cabs, PrecisionCtx};

fn main() -> padelab::Result<()> {
    let (s1, s2) = FunctionSpec::nikishin_pair(Segment::unit(), Segment::new(2, 3)?)?;
    for n in [3, 6, 9, 12] {
        let ctx = PrecisionCtx::for_hermite(n);
        let f1 = laurent_coeffs(&s1, 3 * n + 2, &ctx)?;
        let f2 = laurent_coeffs(&s2, 3 * n + 2, &ctx)?;
        let t = hp_type1(&f1, &f2, n, &ctx)?;
        let rem = hp_remainder_coeffs(&t, &f1, &f2, 2 * n + 2)?;
        let vanishing = (1..=2 * n + 1).map(|k| cabs(rem.coeff(k)).to_f64()).fold(0.0, f64::max);
        println!(
            "n = {n:2}  bits {}  defect order {} (2n+2 = {})  max |r_1..r_2n+1| = {vanishing:.2e}  |r_2n+2| = {:.2e}",
            ctx.bits(),
            t.defect_order,
            2 * n + 2,
            cabs(rem.coeff(2 * n + 2)).to_f64()
        );
    }
    Ok(())
}
