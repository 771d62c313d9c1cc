use rayon::prelude::*;
use rug::ops::Pow;
use rug::Float;

use super::spec::{FunctionSpec, Segment};
use crate::error::{Error, Result};
use crate::numkernel::{cabs, chebyshev_nodes, Complex, LaurentTail, PrecisionCtx};

const MAX_NODES: usize = 1 << 18;

/// Laurent coefficients `c_0..=c_order` of `spec` at infinity.
///
/// The coefficients are trapezoid sums of `f(z) z^(k-1)` on `|z| = R` with
/// `R = 2 + 2 r`, where `r` bounds the singular set. The sums for `c_k` lose
/// about `k log2 R` bits, which is added to the working precision.
pub fn laurent_coeffs(spec: &FunctionSpec, order: usize, ctx: &PrecisionCtx) -> Result<LaurentTail> {
    let r = spec.singular_radius();
    if let FunctionSpec::NikishinSecond { mu, sigma } = spec {
        return nikishin_moments(mu, sigma, r, order, ctx);
    }
    let wctx = ctx.widened(guard_bits(order, 2.0 + 2.0 * r));
    let f = spec.bind(&wctx)?;
    laurent_coeffs_with(|z| f.eval(z), r, order, ctx)
}

/// `c_k = int x^(k-1) sigma^(x) dmu(x)` by Gauss-Chebyshev sums on `mu`,
/// doubling the rule until the moments settle.
fn nikishin_moments(mu: &Segment, sigma: &Segment, r: f64, order: usize, ctx: &PrecisionCtx) -> Result<LaurentTail> {
    let wctx = ctx.widened(32);
    let bits = wctx.bits();
    let markov = FunctionSpec::markov_arcsine(sigma.lo().clone(), sigma.hi().clone())?.bind(&wctx)?;
    let (a, b) = mu.bounds(&wctx);
    let mid = Float::with_val(bits, &a + &b) / 2u32;
    let half = Float::with_val(bits, &b - &a) / 2u32;
    let moments = |m: usize| -> Result<Vec<Complex>> {
        let samples: Vec<(Complex, Complex)> = chebyshev_nodes(m, &wctx)
            .into_par_iter()
            .map(|(t, _)| {
                let x = Complex::with_val(bits, Float::with_val(bits, &t * &half) + &mid);
                markov.eval(&x).map(|g| (x, g))
            })
            .collect::<Result<_>>()?;
        let mut c = vec![Complex::new(bits); order + 1];
        for (x, g) in samples {
            let mut v = g;
            for ck in c.iter_mut().skip(1) {
                *ck += &v;
                v *= &x;
            }
        }
        Ok(c.into_iter().map(|ck| ck / m as u32).collect())
    };
    let mut m = (2 * order).max(64).next_power_of_two();
    let mut prev = moments(m)?;
    loop {
        m *= 2;
        let cur = moments(m)?;
        let scale = cur.iter().map(cabs).fold(Float::with_val(64, 0), |a, b| a.max(&b));
        let worst = prev
            .iter()
            .zip(&cur)
            .map(|(a, b)| cabs(&Complex::with_val(bits, a - b)))
            .fold(Float::with_val(64, 0), |a, b| a.max(&b));
        if worst <= Float::with_val(64, ctx.tol() * &scale) {
            let coeffs = cur.into_iter().map(|c| Complex::with_val(ctx.bits(), c)).collect();
            return Ok(LaurentTail::new(coeffs, r));
        }
        if m >= MAX_NODES {
            return Err(Error::NonConvergence(format!(
                "Nikishin moments still changing by {:.3e} at {m} nodes",
                worst.to_f64()
            )));
        }
        prev = cur;
    }
}

fn guard_bits(order: usize, radius: f64) -> u32 {
    (order as f64 * radius.log2()).ceil() as u32 + 32
}

/// Laurent coefficients of an evaluator holomorphic for `|z| > r`.
pub fn laurent_coeffs_with<F>(f: F, r: f64, order: usize, ctx: &PrecisionCtx) -> Result<LaurentTail>
where
    F: Fn(&Complex) -> Result<Complex> + Sync,
{
    let radius = 2.0 + 2.0 * r;
    let wbits = ctx.bits() + guard_bits(order, radius);
    let wctx = ctx.widened(wbits - ctx.bits());
    let ratio = radius / r.max(1e-3);
    let want = (f64::from(ctx.bits()) / ratio.log2()).ceil() as usize + 16;
    let mut n = want.max(2 * order + 2).next_power_of_two();
    let rad = Float::with_val(wbits, radius);

    let mut values = sample_circle(&f, &rad, 2 * n, &wctx)?;
    loop {
        let coarse = trapezoid_coeffs(&values, 2, &rad, order, wbits);
        let fine = trapezoid_coeffs(&values, 1, &rad, order, wbits);
        let scale = values.iter().map(cabs).fold(Float::with_val(64, 0), |a, b| a.max(&b));
        let mut worst = Float::with_val(64, 0);
        let mut rk = Float::with_val(64, 1);
        for (a, b) in coarse.iter().zip(&fine) {
            let d = cabs(&Complex::with_val(wbits, a - b)) / &rk;
            worst = worst.max(&d);
            rk *= radius;
        }
        if worst <= Float::with_val(64, ctx.tol() * &scale) {
            let coeffs = fine
                .into_iter()
                .map(|c| Complex::with_val(ctx.bits(), c))
                .collect();
            return Ok(LaurentTail::new(coeffs, r));
        }
        if 4 * n > MAX_NODES {
            return Err(Error::NonConvergence(format!(
                "Laurent coefficients still changing by {:.3e} at {} nodes",
                worst.to_f64(),
                2 * n
            )));
        }
        n *= 2;
        values = refine_circle(&f, &rad, values, &wctx)?;
    }
}

fn unit_roots(n: usize, bits: u32) -> Vec<Complex> {
    let two_pi = Float::with_val(bits, rug::float::Constant::Pi) * 2u32;
    (0..n)
        .into_par_iter()
        .map(|j| {
            let t = Float::with_val(bits, &two_pi * j as u32) / n as u32;
            let (s, c) = t.sin_cos(Float::new(bits));
            Complex::with_val(bits, (c, s))
        })
        .collect()
}

fn sample_circle<F>(f: &F, rad: &Float, n: usize, ctx: &PrecisionCtx) -> Result<Vec<Complex>>
where
    F: Fn(&Complex) -> Result<Complex> + Sync,
{
    unit_roots(n, ctx.bits())
        .par_iter()
        .map(|w| f(&Complex::with_val(ctx.bits(), w * rad)))
        .collect()
}

/// Interleaves values at the new odd-indexed nodes of the doubled rule.
fn refine_circle<F>(f: &F, rad: &Float, old: Vec<Complex>, ctx: &PrecisionCtx) -> Result<Vec<Complex>>
where
    F: Fn(&Complex) -> Result<Complex> + Sync,
{
    let n = 2 * old.len();
    let roots = unit_roots(n, ctx.bits());
    let odd: Vec<Complex> = (0..old.len())
        .into_par_iter()
        .map(|j| f(&Complex::with_val(ctx.bits(), &roots[2 * j + 1] * rad)))
        .collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(n);
    for (e, o) in old.into_iter().zip(odd) {
        out.push(e);
        out.push(o);
    }
    Ok(out)
}

/// `c_k = R^k / N sum_j f(z_j) w^{jk}` over every `stride`-th sample.
fn trapezoid_coeffs(values: &[Complex], stride: usize, rad: &Float, order: usize, bits: u32) -> Vec<Complex> {
    let sub: Vec<&Complex> = values.iter().step_by(stride).collect();
    let n = sub.len();
    let roots = unit_roots(n, bits);
    (0..=order)
        .into_par_iter()
        .map(|k| {
            let mut s = Complex::new(bits);
            for (j, v) in sub.iter().enumerate() {
                s += Complex::with_val(bits, *v * &roots[(j * k) % n]);
            }
            let rk = Float::with_val(bits, rad.pow(k as u32));
            s * rk / n as u32
        })
        .collect()
}

/// First-kind Chebyshev coefficients `c_0..=c_order` of `spec` on `[-1, 1]`.
pub fn cheb_coeffs(spec: &FunctionSpec, order: usize, ctx: &PrecisionCtx) -> Result<Vec<Complex>> {
    if !spec.analytic_on_unit_interval() {
        return Err(Error::Domain(format!(
            "{} is not holomorphic on [-1, 1]",
            spec.label()
        )));
    }
    let f = spec.bind(&ctx.widened(32))?;
    cheb_coeffs_with(|x| f.eval(x), order, ctx)
}

/// Chebyshev coefficients of an evaluator holomorphic near `[-1, 1]`, by
/// the cosine transform at Gauss-Chebyshev nodes with node doubling.
pub fn cheb_coeffs_with<F>(f: F, order: usize, ctx: &PrecisionCtx) -> Result<Vec<Complex>>
where
    F: Fn(&Complex) -> Result<Complex> + Sync,
{
    let wctx = ctx.widened(32);
    let mut n = (4 * order).max(16).next_power_of_two();
    let mut prev = dct(&f, n, order, &wctx)?;
    loop {
        n *= 2;
        let cur = dct(&f, n, order, &wctx)?;
        let scale = cur.iter().map(cabs).fold(Float::with_val(64, 0), |a, b| a.max(&b));
        let worst = prev
            .iter()
            .zip(&cur)
            .map(|(a, b)| cabs(&Complex::with_val(wctx.bits(), a - b)))
            .fold(Float::with_val(64, 0), |a, b| a.max(&b));
        if worst <= Float::with_val(64, ctx.tol() * &scale) {
            return Ok(cur.into_iter().map(|c| Complex::with_val(ctx.bits(), c)).collect());
        }
        if n >= MAX_NODES {
            return Err(Error::NonConvergence(format!(
                "Chebyshev coefficients still changing by {:.3e} at {n} nodes",
                worst.to_f64()
            )));
        }
        prev = cur;
    }
}

fn dct<F>(f: &F, n: usize, order: usize, ctx: &PrecisionCtx) -> Result<Vec<Complex>>
where
    F: Fn(&Complex) -> Result<Complex> + Sync,
{
    let bits = ctx.bits();
    let pi = ctx.pi();
    // cos(m pi / 2n) for m < 4n; node j has angle (2j + 1) pi / 2n
    let cos: Vec<Float> = (0..4 * n)
        .into_par_iter()
        .map(|m| (Float::with_val(bits, &pi * m as u32) / (2 * n) as u32).cos())
        .collect();
    let values: Vec<Complex> = (0..n)
        .into_par_iter()
        .map(|j| f(&Complex::with_val(bits, &cos[2 * j + 1])))
        .collect::<Result<_>>()?;
    Ok((0..=order)
        .into_par_iter()
        .map(|k| {
            let mut s = Complex::new(bits);
            for (j, v) in values.iter().enumerate() {
                s += Complex::with_val(bits, v * &cos[(k * (2 * j + 1)) % (4 * n)]);
            }
            let w = if k == 0 { 1u32 } else { 2u32 };
            s * w / n as u32
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{inv_phi, ComplexParam, Segment};

    fn ctx() -> PrecisionCtx {
        PrecisionCtx::new(256).unwrap()
    }

    fn re(c: &Complex) -> f64 {
        c.real().to_f64()
    }

    #[test]
    fn nikishin_moments_match_contour_sums() {
        let ctx = ctx();
        let spec = FunctionSpec::nikishin(Segment::new(-0.5, 1).unwrap(), Segment::new(2, 3).unwrap()).unwrap();
        let fast = laurent_coeffs(&spec, 20, &ctx).unwrap();
        let r = spec.singular_radius();
        let f = spec.bind(&ctx.widened(guard_bits(20, 2.0 + 2.0 * r))).unwrap();
        let slow = laurent_coeffs_with(|z| f.eval(z), r, 20, &ctx).unwrap();
        assert!(cabs(fast.coeff(0)) == 0);
        for k in 1..=20 {
            let err = cabs(&Complex::with_val(256, fast.coeff(k) - slow.coeff(k)));
            assert!(err < 1e-70, "k = {k}: {}", err.to_f64());
        }
    }

    #[test]
    fn inv_sqrt_binomial_series() {
        let ctx = ctx();
        let t = laurent_coeffs(&FunctionSpec::InvSqrt, 41, &ctx).unwrap();
        // 1/sqrt(z^2-1) = sum C(2k,k) 4^-k z^{-2k-1}
        let mut b = Float::with_val(256, 1);
        for k in 0..=20usize {
            let got = t.coeff(2 * k + 1);
            let err = cabs(&Complex::with_val(256, got - &b));
            assert!(err < 1e-70, "k = {k}: {}", err.to_f64());
            assert!(cabs(t.coeff(2 * k)) < 1e-70);
            b *= (2 * k + 1) as u32;
            b /= (2 * k + 2) as u32;
        }
    }

    #[test]
    fn inverse_zhukovskii_series() {
        let ctx = ctx();
        let t = laurent_coeffs_with(|z| Ok(inv_phi(z)), 1.0, 5, &ctx).unwrap();
        let want = [0.0, 0.5, 0.0, 0.125, 0.0, 0.0625];
        for (k, w) in want.iter().enumerate() {
            assert!((re(t.coeff(k)) - w).abs() < 1e-60);
        }
    }

    #[test]
    fn markov_two_three_leading_terms() {
        let ctx = ctx();
        let t = laurent_coeffs(&FunctionSpec::markov_arcsine(2, 3).unwrap(), 2, &ctx).unwrap();
        assert!(cabs(t.coeff(0)) < 1e-60);
        assert!((re(t.coeff(1)) - 1.0).abs() < 1e-60);
        assert!((re(t.coeff(2)) - 2.5).abs() < 1e-60);
    }

    #[test]
    fn nikishin_coefficients_are_moments() {
        let ctx = ctx();
        let spec = FunctionSpec::nikishin(Segment::unit(), Segment::new(2, 3).unwrap()).unwrap();
        let t = laurent_coeffs(&spec, 12, &ctx).unwrap();
        // c_k = int x^{k-1} sigma^(x) dmu(x), evaluated by an independent
        // Gauss-Chebyshev rule at a different node count
        let markov = FunctionSpec::markov_arcsine(2, 3).unwrap().bind(&ctx).unwrap();
        let n = 301u32;
        let pi = ctx.pi();
        let mut moments = vec![Float::with_val(256, 0); 12];
        for j in 0..n {
            let x = (Float::with_val(256, &pi * (2 * j + 1)) / (2 * n)).cos();
            let s = markov.eval(&Complex::with_val(256, &x)).unwrap();
            let mut p = Float::with_val(256, s.real()) / n;
            for m in moments.iter_mut() {
                *m += &p;
                p *= &x;
            }
        }
        assert!(cabs(t.coeff(0)) < 1e-60);
        for k in 1..=12 {
            let err = Float::with_val(64, t.coeff(k).real() - &moments[k - 1]).abs();
            assert!(err < 1e-60, "k = {k}: {}", err.to_f64());
        }
    }

    #[test]
    fn chebyshev_of_t3() {
        let ctx = ctx();
        let c = cheb_coeffs_with(
            |x| Ok(Complex::with_val(256, x * x) * x * 4u32 - Complex::with_val(256, x * 3u32)),
            8,
            &ctx,
        )
        .unwrap();
        for (k, ck) in c.iter().enumerate() {
            let want = if k == 3 { 1.0 } else { 0.0 };
            assert!((re(ck) - want).abs() < 1e-70 && ck.imag().to_f64().abs() < 1e-70);
        }
    }

    #[test]
    fn chebyshev_of_simple_pole() {
        let ctx = ctx();
        let spec = FunctionSpec::simple_pole(ComplexParam::real(2), ComplexParam::real(-1));
        let c = cheb_coeffs(&spec, 30, &ctx).unwrap();
        let s3 = Float::with_val(256, 3).sqrt();
        let rho = Float::with_val(256, &s3 + 2u32);
        assert!((Float::with_val(256, c[0].real() - Float::with_val(256, s3.recip_ref()))).abs() < 1e-70);
        for (k, ck) in c.iter().enumerate().skip(1) {
            let want = Float::with_val(256, 2u32) / (Float::with_val(256, (&rho).pow(k as u32)) * &s3);
            let err = Float::with_val(64, ck.real() - &want).abs();
            assert!(err < 1e-70, "k = {k}");
        }
    }

    #[test]
    fn markov_chebyshev_decay_rate() {
        let ctx = ctx();
        let c = cheb_coeffs(&FunctionSpec::markov_arcsine(2, 3).unwrap(), 60, &ctx).unwrap();
        let q = 2.0 - 3f64.sqrt();
        for k in 20..60 {
            let r = re(&c[k + 1]) / re(&c[k]);
            assert!((r / q - 1.0).abs() < 0.05, "k = {k}: ratio {r}");
        }
    }

    #[test]
    fn singular_on_interval_is_rejected() {
        let ctx = ctx();
        assert!(matches!(
            cheb_coeffs(&FunctionSpec::InvSqrt, 4, &ctx),
            Err(Error::Domain(_))
        ));
    }
}
