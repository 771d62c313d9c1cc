use std::f64::consts::{LN_2, PI};

use padelab::equilibrium::{
    energy_and_potentials, solve_scalar, solve_vector, EquilibriumProblem, EquilibriumSolution, ExternalField,
    NIKISHIN_INTERACTION,
};
use padelab::functions::Segment;
use padelab::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn unit_solution(n: usize) -> EquilibriumSolution {
    solve_scalar(&Segment::unit(), 1.0, ExternalField::Zero, n).unwrap()
}

fn mean(sol: &EquilibriumSolution, a: usize) -> f64 {
    let c = &sol.components[a];
    c.centers.iter().zip(&c.weights).map(|(x, w)| x * w).sum::<f64>() / c.mass
}

#[test]
fn potential_is_flat_on_the_segment_and_matches_green_function_outside() {
    let sol = unit_solution(400);
    let c = &sol.components[0];
    for x in [-0.9, -0.4, 0.0, 0.33, 0.8] {
        assert!((c.potential((x, 0.0)) - LN_2).abs() < 1e-3, "x = {x}");
    }
    // log 2 - log|z + sqrt(z^2 - 1)| off the segment
    for (z, phi) in [((0.0, 2.0), 2.0 + 5f64.sqrt()), ((3.0, 0.0), 3.0 + 8f64.sqrt())] {
        let exact = LN_2 - phi.ln();
        assert!((c.potential(z) - exact).abs() < 1e-5, "z = {z:?}");
    }
}

#[test]
fn recomputed_energy_agrees_with_solver() {
    let sol = solve_vector(&EquilibriumProblem::nikishin(Segment::unit(), Segment::new(2, 3).unwrap(), 200)).unwrap();
    let report = energy_and_potentials(&sol, &[(0.0, 5.0)]);
    assert!(report.relative_mismatch <= 1e-6, "{}", report.relative_mismatch);
    assert_eq!(report.potentials.len(), 2);
}

#[test]
fn random_competitors_do_not_beat_the_minimizer() {
    let problem = EquilibriumProblem::nikishin(Segment::unit(), Segment::new(2, 3).unwrap(), 120);
    let sol = solve_vector(&problem).unwrap();
    let base = energy_and_potentials(&sol, &[]).energy;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for trial in 0..40 {
        let t: f64 = rng.gen_range(0.01..1.0);
        let mut other = sol.clone();
        for c in other.components.iter_mut() {
            let raw: Vec<f64> = (0..c.len()).map(|_| rng.gen::<f64>().powi(4)).collect();
            let total: f64 = raw.iter().sum();
            for (w, r) in c.weights.iter_mut().zip(raw) {
                *w = (1.0 - t) * *w + t * c.mass * r / total;
            }
        }
        let e = energy_and_potentials(&other, &[]).energy;
        assert!(e >= base - 1e-6, "trial {trial}: {e} < {base}");
    }
}

#[test]
fn point_charge_pulls_mass_toward_it() {
    let field = ExternalField::PointCharge { position: 5.0, charge: 1.0 };
    let sol = solve_scalar(&Segment::unit(), 1.0, field, 300).unwrap();
    let c = &sol.components[0];
    assert!(mean(&sol, 0) > 0.05);
    let density = c.density();
    let at = |x: f64| {
        let i = c.centers.iter().position(|&t| t >= x).unwrap();
        density[i]
    };
    assert!(at(0.5) > at(-0.5));
    assert!(sol.kkt_residual <= 1e-3);
}

#[test]
fn decoupled_vector_problem_equals_scalar_solutions() {
    let (delta, f) = (Segment::unit(), Segment::new(2, 3).unwrap());
    let problem = EquilibriumProblem::nikishin(delta.clone(), f.clone(), 200).with_interaction([[1.0, 0.0], [0.0, 1.0]]);
    let sol = solve_vector(&problem).unwrap();
    let parts = [solve_scalar(&delta, 2.0, ExternalField::Zero, 200).unwrap(), solve_scalar(&f, 1.0, ExternalField::Zero, 200).unwrap()];
    let mut energy = 0.0;
    for (a, s) in parts.iter().enumerate() {
        energy += s.energy;
        let (x, y) = (sol.components[a].density(), s.components[0].density());
        let worst = x.iter().zip(&y).map(|(p, q)| (p - q).abs() / q).fold(0.0, f64::max);
        assert!(worst < 1e-2, "component {a}: {worst}");
    }
    assert!((sol.energy - energy).abs() < 1e-4 * energy.abs());
}

#[test]
fn mirrored_problem_has_mirrored_solution() {
    let delta = Segment::unit();
    let right = solve_vector(&EquilibriumProblem::nikishin(delta.clone(), Segment::new(2, 3).unwrap(), 160)).unwrap();
    let left = solve_vector(&EquilibriumProblem::nikishin(delta, Segment::new(-3, -2).unwrap(), 160)).unwrap();
    assert!((right.energy - left.energy).abs() < 1e-5 * right.energy.abs());
    for a in 0..2 {
        let (r, l) = (right.components[a].density(), left.components[a].density());
        let worst = r.iter().zip(l.iter().rev()).map(|(p, q)| (p - q).abs() / p).fold(0.0, f64::max);
        assert!(worst < 1e-2, "component {a}: {worst}");
        assert!((mean(&right, a) + mean(&left, a)).abs() < 1e-4);
    }
    // the first component leans toward the attracting second one
    assert!(mean(&right, 0) > 0.0);
}

#[test]
fn energy_converges_under_grid_refinement() {
    let errors: Vec<f64> = [50, 100, 200].iter().map(|&n| (unit_solution(n).energy - LN_2).abs()).collect();
    assert!(errors.windows(2).all(|w| w[1] < w[0]), "{errors:?}");
}

#[test]
fn dilation_shifts_energy_by_mass_squared_log_factor() {
    let mass = 1.5;
    let small = solve_scalar(&Segment::unit(), mass, ExternalField::Zero, 300).unwrap();
    let large = solve_scalar(&Segment::new(-2, 2).unwrap(), mass, ExternalField::Zero, 300).unwrap();
    let shift = large.energy - small.energy;
    assert!((shift + mass * mass * LN_2).abs() < 1e-4, "{shift}");
}

#[test]
fn density_is_arcsine_on_the_bulk() {
    let sol = unit_solution(400);
    let c = &sol.components[0];
    for (x, d) in c.centers.iter().zip(c.density()) {
        if x.abs() < 0.95 {
            assert!((d - 1.0 / (PI * (1.0 - x * x).sqrt())).abs() < 1e-3, "x = {x}");
        }
    }
}

#[test]
fn vector_potentials_satisfy_equilibrium_conditions() {
    let sol = solve_vector(&EquilibriumProblem::nikishin(Segment::unit(), Segment::new(2, 3).unwrap(), 300)).unwrap();
    let inner = |lo: f64, hi: f64| -> Vec<(f64, f64)> {
        (1..10).map(|i| (lo + (hi - lo) * (0.05 + 0.9 * i as f64 / 10.0), 0.0)).collect()
    };
    for (a, (lo, hi)) in [(-1.0, 1.0), (2.0, 3.0)].into_iter().enumerate() {
        let probes = inner(lo, hi);
        let rep = energy_and_potentials(&sol, &probes);
        let v: Vec<f64> = (0..probes.len())
            .map(|p| (0..2).map(|b| NIKISHIN_INTERACTION[a][b] * rep.potentials[b][p]).sum())
            .collect();
        let spread = v.iter().cloned().fold(f64::MIN, f64::max) - v.iter().cloned().fold(f64::MAX, f64::min);
        assert!(spread < 1e-3, "component {a}: {spread}");
    }
}

#[test]
fn iteration_cap_is_a_solver_failure() {
    let mut problem = EquilibriumProblem::nikishin(Segment::unit(), Segment::new(2, 3).unwrap(), 100);
    problem.options.max_iter = 3;
    assert!(matches!(solve_vector(&problem), Err(Error::NonConvergence(_))));
}

#[test]
fn overlapping_supports_are_rejected() {
    let problem = EquilibriumProblem::nikishin(Segment::unit(), Segment::new(0.5, 3).unwrap(), 100);
    assert!(matches!(solve_vector(&problem), Err(Error::Geometry(_))));
}
