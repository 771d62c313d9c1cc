//! Padé approximants at infinity of a Markov function: poles on the
//! support and geometric convergence away from it.

use padelab::functions::{laurent_coeffs, FunctionSpec};
use padelab::numkernel::{cabs, Complex, PrecisionCtx};
use padelab::pade::pade_at_infinity;
use padelab::roots::find_roots;

fn main() -> padelab::Result<()> {
    let ctx = PrecisionCtx::new(512)?;
    let spec = FunctionSpec::markov_arcsine(2, 3)?;
    let tail = laurent_coeffs(&spec, 49, &ctx)?;
    let exact = spec.bind(&ctx)?.eval(&ctx.zero())?;
    let mut prev = None;
    for n in (4..=24).step_by(4) {
        let pq = pade_at_infinity(&tail.truncated(2 * n + 1), n, &ctx)?;
        let poles = find_roots(&pq.q, "Q", &ctx)?.to_f64();
        let (lo, hi) = poles.iter().fold((f64::MAX, f64::MIN), |a, p| (a.0.min(p.0), a.1.max(p.0)));
        let err = cabs(&Complex::with_val(ctx.bits(), &exact - pq.eval(&ctx.zero()))).to_f64();
        let ratio = prev.map(|p: f64| format!("ratio {:.4e}", err / p)).unwrap_or_default();
        println!("n = {n:2}  poles in [{lo:.6}, {hi:.6}]  |f(0) - P/Q(0)| = {err:.3e}  {ratio}");
        prev = Some(err);
    }
    Ok(())
}
