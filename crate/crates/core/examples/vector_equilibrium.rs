//! The Nikishin vector equilibrium problem on Delta = [-1, 1] and F = [2, 3]
//! with masses (2, 1), and its density export.

use padelab::equilibrium::{solve_vector, EquilibriumProblem};
use padelab::functions::Segment;

fn main() -> padelab::Result<()> {
    let problem = EquilibriumProblem::nikishin(Segment::unit(), Segment::new(2, 3)?, 300);
    let sol = solve_vector(&problem)?;
    println!("energy {:.6}, KKT {:.1e}", sol.energy, sol.kkt_residual);
    for (name, c) in ["lambda_0", "lambda_1"].iter().zip(&sol.components) {
        let d = c.density();
        println!(
            "{name}: mass {:.3}, constant {:.6}, density near ends {:.3} / {:.3}",
            c.weights.iter().sum::<f64>(),
            c.constant,
            d[d.len() / 10],
            d[d.len() - d.len() / 10]
        );
    }
    let mut csv = Vec::new();
    sol.write_density_csv(&mut csv)?;
    println!("{} density rows", csv.iter().filter(|&&b| b == b'\n').count() - 1);
    Ok(())
}
