use std::collections::BTreeMap;

use rug::Float;
use serde::{Deserialize, Serialize};

use super::{frobenius_pade, ChebApproximant};
use crate::error::{Error, Result};
use crate::functions::{
    cheb_coeffs, cheb_coeffs_with, laurent_coeffs, ComplexParam, FunctionSpec, Ratio, Segment,
};
use crate::hermite::{hp_type1, HPTriple};
use crate::numkernel::{
    cabs, convert_basis, decimal, largest_index, Basis, Complex, PrecisionCtx, PrecisionMeta,
};

/// Gauge-free distance between two coefficient vectors.
///
/// Each vector is divided by its largest-modulus entry, then the complex
/// scalar `alpha = <b, a> / <b, b>` that best maps `b` onto `a` is applied;
/// the result is `max_i |a_i - alpha b_i|` for each entry.
pub fn aligned_deviation(a: &[Complex], b: &[Complex]) -> Vec<Float> {
    assert_eq!(a.len(), b.len(), "aligned vectors differ in length");
    let bits = a.iter().chain(b).map(|c| c.prec().0).max().unwrap_or(64);
    let unit = |v: &[Complex]| -> Vec<Complex> {
        match largest_index(v) {
            Some(k) if !v[k].is_zero() => {
                let s = Complex::with_val(bits, v[k].recip_ref());
                v.iter().map(|c| Complex::with_val(bits, c * &s)).collect()
            }
            _ => v.iter().map(|c| Complex::with_val(bits, c)).collect(),
        }
    };
    let (a, b) = (unit(a), unit(b));
    let mut num = Complex::new(bits);
    let mut den = Float::with_val(bits, 0);
    for (x, y) in a.iter().zip(&b) {
        num += Complex::with_val(bits, y.conj_ref()) * x;
        den += Float::with_val(bits, y.norm_ref());
    }
    let alpha = if den.is_zero() { Complex::new(bits) } else { num / den };
    a.iter()
        .zip(&b)
        .map(|(x, y)| cabs(&Complex::with_val(bits, x - Complex::with_val(bits, y * &alpha))))
        .collect()
}

fn max_of(v: &[Float]) -> Float {
    v.iter().fold(Float::with_val(64, 0), |a, b| a.max(b))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BridgeReport {
    pub n: usize,
    /// Joint deviation of `(Q, P)` against `(Q2, -Q1)` after alignment.
    pub deviation: f64,
    pub deviation_log2: f64,
    pub q_deviation: f64,
    pub p_deviation: f64,
    pub precision: PrecisionMeta,
    pub degenerate_cheb: bool,
    pub degenerate_hp: bool,
    pub metadata: BTreeMap<String, String>,
}

/// Compares the Frobenius approximant of `sigma^` with `-Q1/Q2` for the
/// Nikishin pair on `(mu, sigma)`.
pub fn bridge_prop1(mu: &Segment, sigma: &Segment, n: usize, ctx: &PrecisionCtx) -> Result<BridgeReport> {
    bridge_prop1_pair(mu, sigma, sigma, n, ctx)
}

/// As [`bridge_prop1`], with independent `sigma` segments for the Chebyshev
/// side and the Hermite–Padé side.
pub fn bridge_prop1_pair(
    mu: &Segment,
    sigma_cheb: &Segment,
    sigma_hp: &Segment,
    n: usize,
    ctx: &PrecisionCtx,
) -> Result<BridgeReport> {
    if !mu.is_unit() {
        return Err(Error::InvalidInput(format!(
            "Chebyshev coefficients are taken on [-1, 1], got mu on {mu}"
        )));
    }
    let (left, right) = rayon::join(
        || -> Result<ChebApproximant> {
            let f = FunctionSpec::markov_arcsine(sigma_cheb.lo().clone(), sigma_cheb.hi().clone())?;
            let c = cheb_coeffs(&f, 3 * n, ctx).map_err(|e| e.in_step("Chebyshev coefficients"))?;
            frobenius_pade(&c, n, ctx).map_err(|e| e.in_step("Frobenius system"))
        },
        || -> Result<HPTriple> {
            let (s1, s2) = FunctionSpec::nikishin_pair(mu.clone(), sigma_hp.clone())?;
            let f1 = laurent_coeffs(&s1, 3 * n + 2, ctx).map_err(|e| e.in_step("Laurent tail f1"))?;
            let f2 = laurent_coeffs(&s2, 3 * n + 2, ctx).map_err(|e| e.in_step("Laurent tail f2"))?;
            hp_type1(&f1, &f2, n, ctx).map_err(|e| e.in_step("Hermite–Padé system"))
        },
    );
    let (left, right) = (left?, right?);
    let bits = ctx.bits();
    let pad = |v: &[Complex]| -> Vec<Complex> {
        let mut v: Vec<Complex> = v.to_vec();
        v.resize(n + 1, Complex::new(bits));
        v
    };
    let q = convert_basis(&left.q, Basis::Monomial);
    let p = convert_basis(&left.p, Basis::Monomial);
    let mut a = pad(q.coeffs());
    a.extend(pad(p.coeffs()));
    let mut b = pad(right.q2.coeffs());
    b.extend(pad(right.q1.coeffs()).into_iter().map(|c| -c));
    let dev = aligned_deviation(&a, &b);
    let (dq, dp) = dev.split_at(n + 1);
    let joint = max_of(&dev);
    let mut metadata = BTreeMap::new();
    metadata.insert("mu".into(), mu.to_string());
    metadata.insert("sigma_cheb".into(), sigma_cheb.to_string());
    metadata.insert("sigma_hp".into(), sigma_hp.to_string());
    Ok(BridgeReport {
        n,
        deviation: joint.to_f64(),
        deviation_log2: log2(&joint),
        q_deviation: max_of(dq).to_f64(),
        p_deviation: max_of(dp).to_f64(),
        precision: ctx.meta(),
        degenerate_cheb: left.degenerate,
        degenerate_hp: right.degenerate,
        metadata,
    })
}

fn log2(x: &Float) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let (m, e) = x.to_f64_exp();
    f64::from(e) + m.abs().log2()
}

/// 16 points `2 e^{i pi (2j+1)/16}`, off `[-1, 1]` and off the real axis.
pub fn default_probes(ctx: &PrecisionCtx) -> Vec<Complex> {
    (0..16)
        .map(|j| {
            let t = std::f64::consts::PI * (2 * j + 1) as f64 / 16.0;
            ctx.complex((2.0 * t.cos(), 2.0 * t.sin()))
        })
        .collect()
}

/// Chebyshev coefficients of the jump ratio
/// `(f^+ - f^-) / (g^+ - g^-)` on `(-1, 1)` with `g = 1/sqrt(z^2 - 1)`,
/// that is `i sin(t) (F(e^{-it}) - F(e^{it})) / 2` at `x = cos t` for a
/// class (L) function `f = F(1/phi)`.
pub fn jump_ratio_coeffs(spec: &FunctionSpec, order: usize, ctx: &PrecisionCtx) -> Result<Vec<Complex>> {
    let f = spec.bind(&ctx.widened(32))?;
    let bits = f.ctx().bits();
    if !matches!(spec, FunctionSpec::ClassL { .. }) {
        return Err(Error::InvalidInput(format!(
            "jump ratio needs a class (L) function, got {}",
            spec.label()
        )));
    }
    cheb_coeffs_with(
        |x| {
            let x = Float::with_val(bits, x.real());
            let s = Float::with_val(bits, 1u32 - Float::with_val(bits, x.square_ref())).sqrt();
            let up = f.eval_in_w(&Complex::with_val(bits, (&x, -Float::with_val(bits, &s))))?;
            let down = f.eval_in_w(&Complex::with_val(bits, (&x, &s)))?;
            let jump = Complex::with_val(bits, up - down) * s / 2u32;
            Ok(jump * Complex::with_val(bits, (0, 1)))
        },
        order,
        ctx,
    )
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassLReport {
    pub n: usize,
    /// `max |Phi_n - (Q1/Q2 + 1/sqrt(A1 A2))|` over the probes.
    pub literal_deviation: f64,
    /// `max |Phi_n + Q1/Q2|` over the probes.
    pub prop1_form_deviation: f64,
    /// Principal value of `1/sqrt(A1 A2)`.
    pub inv_sqrt_a1a2: (String, String),
    pub sqrt_branch: String,
    pub probes: usize,
    pub precision: PrecisionMeta,
    pub degenerate_cheb: bool,
    pub degenerate_hp: bool,
}

/// Compares the Frobenius approximant of the jump ratio of
/// `f = ((A1 - w)/(A2 - w))^alpha` with the Hermite–Padé polynomials of
/// `[1, 1/sqrt(z^2 - 1), f]`, both in the shifted form
/// `Q1/Q2 + 1/sqrt(A1 A2)` and in the form `-Q1/Q2`.
pub fn bridge_class_l(
    a1: &ComplexParam,
    a2: &ComplexParam,
    alpha: Ratio,
    n: usize,
    probes: &[Complex],
    ctx: &PrecisionCtx,
) -> Result<ClassLReport> {
    let spec = FunctionSpec::class_l(vec![a1.clone(), a2.clone()], vec![alpha, alpha.neg()])?;
    let (left, right) = rayon::join(
        || -> Result<ChebApproximant> {
            let c = jump_ratio_coeffs(&spec, 3 * n, ctx).map_err(|e| e.in_step("jump ratio coefficients"))?;
            frobenius_pade(&c, n, ctx).map_err(|e| e.in_step("Frobenius system"))
        },
        || -> Result<HPTriple> {
            let f1 = laurent_coeffs(&FunctionSpec::InvSqrt, 3 * n + 2, ctx)
                .map_err(|e| e.in_step("Laurent tail f1"))?;
            let f2 = laurent_coeffs(&spec, 3 * n + 2, ctx).map_err(|e| e.in_step("Laurent tail f2"))?;
            hp_type1(&f1, &f2, n, ctx).map_err(|e| e.in_step("Hermite–Padé system"))
        },
    );
    let (left, right) = (left?, right?);
    let bits = ctx.bits();
    let prod = a1.value(ctx) * a2.value(ctx);
    let shift = Complex::with_val(bits, prod.sqrt().recip_ref());
    let mut literal = Float::with_val(64, 0);
    let mut reduced = Float::with_val(64, 0);
    for z in probes {
        let phi = left.eval(z);
        let r = right.q1.eval(z) / right.q2.eval(z);
        let lit = Complex::with_val(bits, &phi - &r) - &shift;
        literal = literal.max(&cabs(&lit));
        reduced = reduced.max(&cabs(&Complex::with_val(bits, &phi + &r)));
    }
    Ok(ClassLReport {
        n,
        literal_deviation: literal.to_f64(),
        prop1_form_deviation: reduced.to_f64(),
        inv_sqrt_a1a2: (decimal(shift.real()), decimal(shift.imag())),
        sqrt_branch: "principal".into(),
        probes: probes.len(),
        precision: ctx.meta(),
        degenerate_cheb: left.degenerate,
        degenerate_hp: right.degenerate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alignment_removes_gauge() {
        let ctx = PrecisionCtx::new(128).unwrap();
        let a: Vec<Complex> = [1.0, -2.0, 0.5].iter().map(|&x| ctx.complex(x)).collect();
        let s = ctx.complex((0.3, -1.1));
        let b: Vec<Complex> = a.iter().map(|x| Complex::with_val(128, x * &s)).collect();
        assert!(max_of(&aligned_deviation(&a, &b)) < 1e-35);
    }

    #[test]
    fn prop1_first_order() {
        let ctx = PrecisionCtx::new(256).unwrap();
        let r = bridge_prop1(&Segment::unit(), &Segment::new(2, 3).unwrap(), 1, &ctx).unwrap();
        assert!(r.deviation < 10.0 * ctx.tol_f64(), "{}", r.deviation);
    }

    #[test]
    fn prop1_detects_mismatch() {
        let ctx = PrecisionCtx::new(256).unwrap();
        let r = bridge_prop1_pair(
            &Segment::unit(),
            &Segment::new(2, 3).unwrap(),
            &Segment::new(2, 3.5).unwrap(),
            4,
            &ctx,
        )
        .unwrap();
        assert!(r.deviation > 1e6 * ctx.tol_f64());
    }

    #[test]
    fn class_l_jump_ratio_form() {
        let ctx = PrecisionCtx::for_hermite(5);
        let r = bridge_class_l(
            &ComplexParam::real(2),
            &ComplexParam::real(3),
            Ratio::new(1, 2).unwrap(),
            5,
            &default_probes(&ctx),
            &ctx,
        )
        .unwrap();
        assert!(r.prop1_form_deviation < 1e2 * ctx.tol_f64(), "{}", r.prop1_form_deviation);
    }
}
