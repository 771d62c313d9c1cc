//! Comparing point sets: trimmed Hausdorff distance and logarithmic
//! potentials on a probe circle.

use padelab::roots::{potential_discrepancy, probe_circle, trimmed_hausdorff, DiscreteMeasure};

fn main() -> padelab::Result<()> {
    let n = 200;
    let cheb: Vec<f64> = (0..n)
        .map(|k| (std::f64::consts::PI * (k as f64 + 0.5) / n as f64).cos())
        .collect();
    let uniform: Vec<f64> = (0..n).map(|k| -1.0 + (2 * k + 1) as f64 / n as f64).collect();
    let a: Vec<(f64, f64)> = cheb.iter().map(|&x| (x, 0.0)).collect();
    let mut b: Vec<(f64, f64)> = uniform.iter().map(|&x| (x, 0.0)).collect();
    b.push((40.0, 0.0));
    println!("Hausdorff, no trim: {:.4}", trimmed_hausdorff(&a, &b, 0.0)?);
    println!("Hausdorff, 5% trim: {:.4}", trimmed_hausdorff(&a, &b, 0.05)?);

    let probes = probe_circle(3.0, 64);
    let mu = DiscreteMeasure::on_line(&cheb, vec![1.0 / n as f64; n])?;
    let nu = DiscreteMeasure::on_line(&uniform, vec![1.0 / n as f64; n])?;
    println!("sup |U^mu - U^nu| on |z| = 3: {:.4e}", potential_discrepancy(&mu, &nu, &probes)?);
    Ok(())
}
