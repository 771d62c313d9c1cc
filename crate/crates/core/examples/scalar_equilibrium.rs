//! Equilibrium measure of a segment, with and without an external field.

use padelab::equilibrium::{energy_and_potentials, solve_scalar, ExternalField};
use padelab::functions::Segment;

fn main() -> padelab::Result<()> {
    let unit = Segment::unit();
    let sol = solve_scalar(&unit, 1.0, ExternalField::Zero, 400)?;
    println!(
        "[-1, 1]: energy {:.6} (log 2 = {:.6}), KKT {:.1e}, {} iterations",
        sol.energy,
        2f64.ln(),
        sol.kkt_residual,
        sol.iterations
    );
    let report = energy_and_potentials(&sol, &[(0.0, 2.0), (3.0, 0.0)]);
    println!("recomputed energy mismatch {:.1e}, U(2i) = {:.6}", report.relative_mismatch, report.potentials[0][0]);

    let field = ExternalField::PointCharge { position: 5.0, charge: 1.0 };
    let pulled = solve_scalar(&unit, 1.0, field, 400)?;
    let c = &pulled.components[0];
    let density = c.density();
    let mid = density.len() / 2;
    println!(
        "charge at 5: density at x = {:+.3} is {:.4}, at x = {:+.3} is {:.4}",
        c.centers[mid / 2],
        density[mid / 2],
        c.centers[mid + mid / 2],
        density[mid + mid / 2]
    );
    Ok(())
}
