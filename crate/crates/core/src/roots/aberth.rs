use rug::Float;

use super::ZeroSet;
use crate::error::{Error, Result};
use crate::numkernel::{cabs, convert_basis, Basis, BigPolynomial, Complex, PrecisionCtx};

/// Angular offset of the starting circle, fixed for reproducibility.
const START_OFFSET: f64 = 0.4;

/// Outcome of the simultaneous iteration, converged or not.
#[derive(Clone, Debug)]
pub struct AberthOutcome {
    pub zeros: ZeroSet,
    pub iterations: usize,
    pub converged: bool,
}

/// Roots of `p` by Aberth–Ehrlich iteration followed by Newton polishing.
///
/// Chebyshev-basis input is converted to the monomial basis first with
/// `4 deg` extra bits.
pub fn find_roots(p: &BigPolynomial, source: &str, ctx: &PrecisionCtx) -> Result<ZeroSet> {
    let out = find_roots_partial(p, source, ctx)?;
    if !out.converged {
        return Err(Error::NonConvergence(format!(
            "Aberth iteration for `{source}` (degree {}) hit the cap after {} sweeps; residual {:.3e}",
            out.zeros.points.len(),
            out.iterations,
            out.zeros.residual
        )));
    }
    Ok(out.zeros)
}

/// As [`find_roots`], returning the last iterate when the cap is reached.
pub fn find_roots_partial(p: &BigPolynomial, source: &str, ctx: &PrecisionCtx) -> Result<AberthOutcome> {
    let deg = p.coeffs().len().saturating_sub(1);
    let (coeffs, bits) = match p.basis() {
        Basis::Monomial => (p.coeffs().to_vec(), ctx.bits()),
        Basis::ChebyshevFirstKind => {
            let bits = ctx.bits() + 4 * deg as u32;
            let m = convert_basis(&p.with_prec(bits), Basis::Monomial);
            (m.coeffs().to_vec(), bits)
        }
    };
    let mut a: Vec<Complex> = coeffs.into_iter().map(|c| Complex::with_val(bits, c)).collect();
    let amax = a.iter().map(cabs).fold(Float::with_val(64, 0), |x, y| x.max(&y));
    while a.len() > 1 && cabs(a.last().expect("non-empty")) <= Float::with_val(64, ctx.tol() * &amax) {
        a.pop();
    }
    let n = a.len().saturating_sub(1);
    if n == 0 {
        return Err(Error::InvalidInput(format!("`{source}` has no roots (degree 0)")));
    }
    let work = PrecisionCtx::with_tol(bits, ctx.tol().clone())?;
    let mut z = initial_guesses(&a, bits);
    let mut done = vec![false; n];
    let cap = 200 + 20 * n;
    let mut sweeps = 0;
    while sweeps < cap && done.iter().any(|d| !d) {
        sweeps += 1;
        for k in 0..n {
            if done[k] {
                continue;
            }
            let (pv, dv) = horner_with_derivative(&a, &z[k]);
            if pv.is_zero() {
                done[k] = true;
                continue;
            }
            let w = pv / dv;
            let mut s = Complex::new(bits);
            for (j, zj) in z.iter().enumerate() {
                if j != k {
                    let d = Complex::with_val(bits, &z[k] - zj);
                    s += Complex::with_val(bits, d.recip_ref());
                }
            }
            let den = -Complex::with_val(bits, &w * &s) + 1u32;
            let corr = w / den;
            let small = cabs(&corr) <= Float::with_val(64, work.tol() * (cabs(&z[k]) + 1u32));
            z[k] -= corr;
            if small {
                done[k] = true;
            }
        }
    }
    for zk in z.iter_mut() {
        newton_polish(&a, zk);
    }
    let converged = done.iter().all(|d| *d);
    let out_bits = ctx.bits();
    let z = z.into_iter().map(|c| Complex::with_val(out_bits, c)).collect();
    let mut zs = ZeroSet::new(z, source, n);
    zs.residual = backward_residual(&a, &zs.points);
    zs.sort();
    Ok(AberthOutcome {
        zeros: zs,
        iterations: sweeps,
        converged,
    })
}

/// Points on the circles given by the upper convex hull of
/// `(k, log|a_k|)`, one circle per hull edge, so that roots of very
/// different moduli each get starting points of the right size.
fn initial_guesses(a: &[Complex], bits: u32) -> Vec<Complex> {
    let n = a.len() - 1;
    let logs: Vec<f64> = a
        .iter()
        .map(|c| if c.is_zero() { f64::NEG_INFINITY } else { cabs(c).log2().to_f64() })
        .collect();
    let mut hull: Vec<usize> = Vec::new();
    for k in (0..=n).filter(|&k| logs[k].is_finite()) {
        while hull.len() >= 2 {
            let (i, j) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // drop j if it lies on or below the chord from i to k
            let cross = (logs[j] - logs[i]) * (k - i) as f64 - (logs[k] - logs[i]) * (j - i) as f64;
            if cross <= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(k);
    }
    let mut out = Vec::with_capacity(n);
    if hull[0] > 0 {
        // zero roots
        out.extend((0..hull[0]).map(|_| Complex::new(bits)));
    }
    for w in hull.windows(2) {
        let (i, j) = (w[0], w[1]);
        let m = j - i;
        let r = ((logs[i] - logs[j]) / m as f64).exp2();
        let r = if r.is_finite() && r > 0.0 { r } else { 1.0 };
        for k in 0..m {
            let t = 2.0 * std::f64::consts::PI * k as f64 / m as f64 + START_OFFSET;
            out.push(Complex::with_val(bits, (r * t.cos(), r * t.sin())));
        }
    }
    out
}

fn horner_with_derivative(a: &[Complex], z: &Complex) -> (Complex, Complex) {
    let bits = z.prec().0;
    let mut p = Complex::new(bits);
    let mut d = Complex::new(bits);
    for c in a.iter().rev() {
        d *= z;
        d += &p;
        p *= z;
        p += c;
    }
    (p, d)
}

fn newton_polish(a: &[Complex], z: &mut Complex) {
    let bits = z.prec().0;
    let (mut pv, _) = horner_with_derivative(a, z);
    for _ in 0..3 {
        let (p, d) = horner_with_derivative(a, z);
        if d.is_zero() {
            return;
        }
        let cand = Complex::with_val(bits, &*z - Complex::with_val(bits, &p / &d));
        let (pc, _) = horner_with_derivative(a, &cand);
        if cabs(&pc) < cabs(&pv) {
            *z = cand;
            pv = pc;
        } else {
            return;
        }
    }
}

/// `max_i |p(z_i)| / sum_k |a_k| |z_i|^k`.
pub(crate) fn backward_residual(a: &[Complex], zs: &[Complex]) -> f64 {
    let mut worst = Float::with_val(64, 0);
    for z in zs {
        let (p, _) = horner_with_derivative(a, z);
        let r = cabs(z);
        let mut s = Float::with_val(64, 0);
        let mut rk = Float::with_val(64, 1);
        for c in a {
            s += Float::with_val(64, cabs(c) * &rk);
            rk *= &r;
        }
        if !s.is_zero() {
            worst = worst.max(&(cabs(&p) / s));
        }
    }
    worst.to_f64()
}
