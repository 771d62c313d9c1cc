//! Zero distributions of the Nikishin Hermite–Padé polynomials against the
//! vector equilibrium measures.

use rug::Float;
use serde::Serialize;

use super::EquilibriumSolution;
use crate::error::{Error, Result};
use crate::functions::{laurent_coeffs, FunctionSpec, Segment};
use crate::hermite::{hp_type1, HPTriple};
use crate::numkernel::{Complex, PrecisionCtx};
use crate::roots::{find_roots, potential_discrepancy, zeros_on_segment, DiscreteMeasure, ZeroSet};

/// Comparison of `(1/n) chi(Q_{n,2})` with `lambda_1` and of the normalized
/// zero counting measure of `R_n = Q_{n,1} + Q_{n,2} sigma^` on `Delta` with
/// `lambda_0 / 2`.
#[derive(Clone, Debug, Serialize)]
pub struct ZeroDistributionReport {
    pub n: usize,
    pub q2_discrepancy: f64,
    pub omega_discrepancy: f64,
    pub omega_count: usize,
    pub omega_expected: usize,
    pub omega_warning: Option<String>,
    pub degenerate: bool,
    #[serde(skip)]
    pub q2_zeros: ZeroSet,
    #[serde(skip)]
    pub omega_zeros: ZeroSet,
}

/// `R_n` changes sign at least `2n + 1` times on `Delta`: it is orthogonal
/// to all polynomials of degree `2n` with respect to the arcsine measure.
pub fn expected_omega_count(n: usize) -> usize {
    2 * n + 1
}

pub fn nikishin_zero_check(
    mu: &Segment,
    sigma: &Segment,
    n: usize,
    solution: &EquilibriumSolution,
    probes: &[(f64, f64)],
    ctx: &PrecisionCtx,
) -> Result<ZeroDistributionReport> {
    if solution.components.len() != 2 {
        return Err(Error::InvalidInput("vector equilibrium solution required".into()));
    }
    let (s1, s2) = FunctionSpec::nikishin_pair(mu.clone(), sigma.clone())?;
    let (f1, f2) = rayon::join(
        || laurent_coeffs(&s1, 3 * n + 2, ctx),
        || laurent_coeffs(&s2, 3 * n + 2, ctx),
    );
    let (f1, f2) = (
        f1.map_err(|e| e.in_step("Laurent tail f1"))?,
        f2.map_err(|e| e.in_step("Laurent tail f2"))?,
    );
    let hp = hp_type1(&f1, &f2, n, ctx).map_err(|e| e.in_step("Hermite–Padé system"))?;
    let q2_zeros = find_roots(&hp.q2, "Q2", ctx).map_err(|e| e.in_step("zeros of Q2"))?;
    let omega_zeros = omega_zeros(&hp, sigma, mu, n, ctx).map_err(|e| e.in_step("zeros of R_n"))?;

    let lambda1 = solution.components[1].measure();
    let half_lambda0 = solution.components[0].measure().scaled(0.5);
    let q2_measure = q2_zeros.counting_measure(1.0 / n as f64);
    let q2_discrepancy = potential_discrepancy(&q2_measure, &lambda1, probes)?;
    let xs: Vec<(f64, f64)> = omega_zeros.0.to_f64();
    let omega_measure = DiscreteMeasure::uniform(xs, 1.0)?;
    let omega_discrepancy = potential_discrepancy(&omega_measure, &half_lambda0, probes)?;
    Ok(ZeroDistributionReport {
        n,
        q2_discrepancy,
        omega_discrepancy,
        omega_count: omega_zeros.0.len(),
        omega_expected: expected_omega_count(n),
        omega_warning: omega_zeros.1,
        degenerate: hp.degenerate,
        q2_zeros,
        omega_zeros: omega_zeros.0,
    })
}

fn omega_zeros(
    hp: &HPTriple,
    sigma: &Segment,
    mu: &Segment,
    n: usize,
    ctx: &PrecisionCtx,
) -> Result<(ZeroSet, Option<String>)> {
    let bits = ctx.bits();
    let (lo, hi) = mu.bounds(ctx);
    let jump = FunctionSpec::markov_arcsine(sigma.lo().clone(), sigma.hi().clone())?.bind(ctx)?;
    let r = |x: &Float| -> Result<Float> {
        let z = Complex::with_val(bits, x);
        let v = hp.q1.eval(&z) + hp.q2.eval(&z) * jump.eval(&z)?;
        Ok(v.real().clone())
    };
    let expected = expected_omega_count(n);
    let mut budget = 16 * expected;
    let mut found = zeros_on_segment(r, &lo, &hi, budget, Some(expected), ctx)?;
    for _ in 0..2 {
        if found.warning.is_none() {
            break;
        }
        budget *= 4;
        found = zeros_on_segment(r, &lo, &hi, budget, Some(expected), ctx)?;
    }
    let points = found.zeros.iter().map(|x| Complex::with_val(bits, x)).collect();
    Ok((ZeroSet::new(points, "Omega", n), found.warning))
}
