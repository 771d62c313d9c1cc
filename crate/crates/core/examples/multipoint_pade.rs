//! Multipoint Padé interpolation on a circle of nodes around the cut and
//! the contour orthogonality of the denominator.

use padelab::functions::FunctionSpec;
use padelab::numkernel::{Circle, PrecisionCtx};
use padelab::pade::{check_contour_orthogonality, multipoint_pade, InterpolationTable};

fn main() -> padelab::Result<()> {
    let ctx = PrecisionCtx::new(512)?;
    let f = FunctionSpec::markov_arcsine(2, 3)?.bind(&ctx)?;
    let contour = Circle::from_f64((2.5, 0.0), 1.0, &ctx);
    for n in [4, 7, 10] {
        let table = InterpolationTable::circle((2.5, 0.0), 3.0, 2 * n, 0.0, &ctx)?;
        let pq = multipoint_pade(|z| f.eval(z), &table, None, n, &ctx)?;
        let ort = check_contour_orthogonality(&pq.q, |z| f.eval(z), &table, &contour, &ctx)?;
        println!(
            "n = {n:2}  node residual {:.2e}  lost {}  max_(k<n) |I_k|/scale {:.2e}  I_n/scale {:.2e}",
            pq.residual.to_f64(),
            pq.lost_count,
            ort.max_relative_below(n),
            ort.relative(n)
        );
    }
    Ok(())
}
