use rayon::prelude::*;
use rug::ops::Pow;
use rug::Float;

use super::InterpolationTable;
use crate::error::{Error, Result};
use crate::functions::Segment;
use crate::numkernel::{cabs, chebyshev_nodes, contour_integrate_adaptive, BigPolynomial, Circle, Complex, PrecisionCtx};

/// Moduli of the moments `int x^k Q(x) dsigma(x)`, `k < n`.
#[derive(Clone, Debug)]
pub struct OrthogonalityReport {
    pub moments: Vec<Float>,
    /// `||Q||_inf max(|c|, |d|)^n`.
    pub scale: Float,
}

impl OrthogonalityReport {
    pub fn max(&self) -> Float {
        self.moments
            .iter()
            .fold(Float::with_val(64, 0), |a, b| a.max(b))
    }

    pub fn max_relative(&self) -> f64 {
        if self.scale.is_zero() {
            return self.max().to_f64();
        }
        (self.max() / &self.scale).to_f64()
    }
}

/// Power moments of `Q` against the normalized arcsine measure on `sigma`,
/// computed with an `nodes`-point Gauss-Chebyshev rule (exact once
/// `nodes >= n`).
pub fn check_power_orthogonality(
    q: &BigPolynomial,
    sigma: &Segment,
    n: usize,
    nodes: usize,
    ctx: &PrecisionCtx,
) -> OrthogonalityReport {
    let bits = ctx.bits();
    let (c, d) = sigma.bounds(ctx);
    let mid = Float::with_val(bits, &c + &d) / 2u32;
    let half = Float::with_val(bits, &d - &c) / 2u32;
    let mut moments = vec![Complex::new(bits); n];
    if n > 0 {
        for (t, _) in chebyshev_nodes(nodes.max(1), ctx) {
            let x = Complex::with_val(bits, Float::with_val(bits, &t * &half) + &mid);
            let mut v = q.eval(&x) / nodes as u32;
            for m in moments.iter_mut() {
                *m += &v;
                v *= &x;
            }
        }
    }
    let r = Float::with_val(64, c.abs_ref()).max(&Float::with_val(64, d.abs_ref()));
    let scale = q.max_abs() * Float::with_val(64, (&r).pow(n as u32));
    OrthogonalityReport {
        moments: moments.iter().map(cabs).collect(),
        scale,
    }
}

/// Contour integrals `(1/2 pi i) \oint Q z^k f / Omega` for `k = 0..=n`.
#[derive(Clone, Debug)]
pub struct ContourOrthogonality {
    pub integrals: Vec<Float>,
    /// Integrand magnitude on the contour for each `k`.
    pub scales: Vec<Float>,
}

impl ContourOrthogonality {
    /// Largest `|I_k| / scale_k` over `k < n`.
    pub fn max_relative_below(&self, n: usize) -> f64 {
        self.integrals
            .iter()
            .zip(&self.scales)
            .take(n)
            .map(|(i, s)| if s.is_zero() { i.to_f64() } else { (i.clone() / s).to_f64() })
            .fold(0.0, f64::max)
    }

    pub fn relative(&self, k: usize) -> f64 {
        (self.integrals[k].clone() / &self.scales[k]).to_f64()
    }
}

/// The first `n` integrals vanish when `Q` is the denominator of the
/// multipoint approximant for `(f, table)` and the circle separates the cut
/// of `f` from every finite node. The `k = n` integral is reported as well.
pub fn check_contour_orthogonality<F>(
    q: &BigPolynomial,
    f: F,
    table: &InterpolationTable,
    circle: &Circle,
    ctx: &PrecisionCtx,
) -> Result<ContourOrthogonality>
where
    F: Fn(&Complex) -> Result<Complex> + Sync,
{
    let bits = ctx.bits();
    let slack = Float::with_val(64, ctx.tol() * (Float::with_val(64, &circle.radius) + 1u32));
    for z in table.finite() {
        if circle.distance(z) <= slack {
            return Err(Error::Geometry(format!(
                "node ({:.6e}, {:.6e}) lies on the contour",
                z.real().to_f64(),
                z.imag().to_f64()
            )));
        }
        if circle.encloses(z) {
            return Err(Error::Geometry(format!(
                "node ({:.6e}, {:.6e}) lies inside the contour",
                z.real().to_f64(),
                z.imag().to_f64()
            )));
        }
    }
    let n = q.degree();
    let out: Vec<(Float, Float)> = (0..=n)
        .into_par_iter()
        .map(|k| {
            let g = |z: &Complex| -> Result<Complex> {
                let mut v = q.eval(z) * f(z)? / table.omega(z);
                for _ in 0..k {
                    v *= z;
                }
                Ok(Complex::with_val(bits, v))
            };
            let o = contour_integrate_adaptive(g, circle, 64, 1 << 16, ctx)?;
            Ok((cabs(&o.value), o.scale))
        })
        .collect::<Result<_>>()?;
    let (integrals, scales) = out.into_iter().unzip();
    Ok(ContourOrthogonality { integrals, scales })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{laurent_coeffs, FunctionSpec};
    use crate::pade::{multipoint_pade, pade_at_infinity};

    #[test]
    fn first_denominator_vanishes_at_the_mean() {
        let ctx = PrecisionCtx::new(256).unwrap();
        let spec = FunctionSpec::markov_arcsine(2, 3).unwrap();
        let tail = laurent_coeffs(&spec, 3, &ctx).unwrap();
        let pq = pade_at_infinity(&tail, 1, &ctx).unwrap();
        let root = -pq.q.coeffs()[0].real().to_f64() / pq.q.coeffs()[1].real().to_f64();
        assert!((root - 2.5).abs() < 1e-15);
        let sigma = Segment::new(2, 3).unwrap();
        assert!(check_power_orthogonality(&pq.q, &sigma, 1, 4, &ctx).max() < 1e-60);
        assert!(check_power_orthogonality(&pq.q, &sigma, 0, 4, &ctx).moments.is_empty());
    }

    #[test]
    fn moments_stable_under_more_nodes() {
        let ctx = PrecisionCtx::new(256).unwrap();
        let spec = FunctionSpec::markov_arcsine(2, 3).unwrap();
        let tail = laurent_coeffs(&spec, 17, &ctx).unwrap();
        let pq = pade_at_infinity(&tail, 8, &ctx).unwrap();
        let sigma = Segment::new(2, 3).unwrap();
        let a = check_power_orthogonality(&pq.q, &sigma, 8, 9, &ctx);
        let b = check_power_orthogonality(&pq.q, &sigma, 8, 18, &ctx);
        assert!(a.max_relative() < ctx.tol_f64());
        assert!(b.max_relative() < ctx.tol_f64());
    }

    #[test]
    fn contour_relations_multipoint() {
        let ctx = PrecisionCtx::new(256).unwrap();
        let spec = FunctionSpec::markov_arcsine(2, 3).unwrap();
        let f = spec.bind(&ctx).unwrap();
        let n = 4;
        let table = InterpolationTable::circle((2.5, 0.0), 3.0, 2 * n, 0.0, &ctx).unwrap();
        let pq = multipoint_pade(|z| f.eval(z), &table, None, n, &ctx).unwrap();
        let circle = Circle::from_f64((2.5, 0.0), 1.0, &ctx);
        let rep = check_contour_orthogonality(&pq.q, |z| f.eval(z), &table, &circle, &ctx).unwrap();
        assert!(rep.max_relative_below(n) < ctx.tol_f64());
        assert!(rep.relative(n) > 1e3 * ctx.tol_f64());
    }

    #[test]
    fn node_inside_contour_is_a_geometry_error() {
        let ctx = PrecisionCtx::new(128).unwrap();
        let table = InterpolationTable::circle((2.5, 0.0), 0.5, 2, 0.0, &ctx).unwrap();
        let circle = Circle::from_f64((2.5, 0.0), 1.0, &ctx);
        let q = BigPolynomial::from_f64(crate::numkernel::Basis::Monomial, &[1.0, 1.0], &ctx);
        let r = check_contour_orthogonality(&q, |z| Ok(z.clone()), &table, &circle, &ctx);
        assert!(matches!(r, Err(Error::Geometry(_))));
    }
}
