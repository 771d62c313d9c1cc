//! Aberth–Ehrlich zeros of a Chebyshev-basis polynomial and their CSV form.

use padelab::numkernel::{BigPolynomial, PrecisionCtx};
use padelab::roots::{find_roots, ZeroSet};

fn main() -> padelab::Result<()> {
    let ctx = PrecisionCtx::new(256)?;
    let t = BigPolynomial::chebyshev_t(12, &ctx);
    let zeros = find_roots(&t, "T12", &ctx)?;
    println!("backward residual {:.2e}", zeros.residual);
    let csv = zeros.to_csv_string();
    print!("{}", csv.lines().take(4).collect::<Vec<_>>().join("\n"));
    println!("\n...");
    let back = ZeroSet::read_csv(csv.as_bytes(), ctx.bits())?;
    assert_eq!(back.points, zeros.points);
    Ok(())
}
