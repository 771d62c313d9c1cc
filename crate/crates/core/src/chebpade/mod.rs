//! Linear Chebyshev–Padé (Frobenius) approximants and their relation to
//! type I Hermite–Padé polynomials.
//!
//! Products are linearized with `T_j T_k = (T_{j+k} + T_{|j-k|}) / 2`. With
//! the coefficient list `c'` equal to `c` except `c'_0 = 2 c_0`, the
//! Chebyshev coefficients of `T_j f` are `(c'_{|k-j|} + c'_{k+j}) / 2` in the
//! same primed convention for every `k >= 0`.

mod bridge;

pub use bridge::{
    aligned_deviation, bridge_class_l, bridge_prop1, bridge_prop1_pair, default_probes,
    jump_ratio_coeffs, BridgeReport, ClassLReport,
};

use std::collections::BTreeMap;

use rayon::prelude::*;
use rug::Float;

use crate::error::{Error, Result};
use crate::numkernel::{
    cabs, chebyshev_nodes, largest_index, nullspace_vector, Basis, BigPolynomial, CMatrix, Complex,
    PrecisionCtx,
};
use crate::record::{ApproximantRecord, PolyRecord};

/// `P / Q` with both polynomials in the Chebyshev basis.
#[derive(Clone, Debug)]
pub struct ChebApproximant {
    pub p: BigPolynomial,
    pub q: BigPolynomial,
    pub n: usize,
    /// `max_{n < k <= 2n} |c_k(Qf)| / (||Q|| max|c|)`.
    pub defect: Float,
    pub degenerate: bool,
    pub nullity: usize,
    pub residual: Float,
}

impl ChebApproximant {
    pub fn eval(&self, z: &Complex) -> Complex {
        self.p.eval(z) / self.q.eval(z)
    }

    pub fn record(&self, kind: &str, ctx: &PrecisionCtx) -> ApproximantRecord {
        let mut polynomials = BTreeMap::new();
        polynomials.insert("P".to_string(), PolyRecord::from(&self.p));
        polynomials.insert("Q".to_string(), PolyRecord::from(&self.q));
        let mut metadata = BTreeMap::new();
        metadata.insert("defect".to_string(), format!("{:.6e}", self.defect.to_f64()));
        ApproximantRecord {
            kind: kind.to_string(),
            n: self.n,
            polynomials,
            defect_order: None,
            degenerate: self.degenerate,
            nullity: self.nullity,
            residual: self.residual.to_f64(),
            precision: ctx.meta(),
            metadata,
        }
    }
}

fn primed(c: &[Complex], len: usize, bits: u32) -> Vec<Complex> {
    (0..len)
        .map(|k| {
            let v = Complex::with_val(bits, &c[k]);
            if k == 0 {
                v * 2u32
            } else {
                v
            }
        })
        .collect()
}

/// Classical coefficient `c_k(Qf)` from the primed list.
fn product_coeff(q: &[Complex], cp: &[Complex], k: usize, bits: u32) -> Complex {
    let mut s = Complex::new(bits);
    for (j, qj) in q.iter().enumerate() {
        let t = Complex::with_val(bits, &cp[k.abs_diff(j)] + &cp[k + j]);
        s += t * qj;
    }
    s /= 2u32;
    if k == 0 {
        s /= 2u32;
    }
    s
}

/// `P = sum_{k <= n} c_k(Qf) T_k`.
pub fn numerator_from(q: &BigPolynomial, c: &[Complex], n: usize, ctx: &PrecisionCtx) -> BigPolynomial {
    let bits = ctx.bits();
    let mut qc: Vec<Complex> = q.coeffs().to_vec();
    qc.resize(n + 1, Complex::new(bits));
    let cp = primed(c, 2 * n + 1, bits);
    let p = (0..=n).map(|k| product_coeff(&qc, &cp, k, bits)).collect();
    BigPolynomial::new(Basis::ChebyshevFirstKind, p, ctx)
}

/// Frobenius approximant from `c_0..=c_{3n}`; later coefficients are ignored.
pub fn frobenius_pade(c: &[Complex], n: usize, ctx: &PrecisionCtx) -> Result<ChebApproximant> {
    if c.len() < 3 * n + 1 {
        return Err(Error::InvalidInput(format!(
            "order-{n} Frobenius approximant needs {} coefficients, got {}",
            3 * n + 1,
            c.len()
        )));
    }
    let bits = ctx.bits();
    let cp = primed(c, 3 * n + 1, bits);
    let rows: Vec<Vec<Complex>> = (n + 1..=2 * n)
        .map(|k| {
            (0..=n)
                .map(|j| Complex::with_val(bits, &cp[k.abs_diff(j)] + &cp[k + j]) / 2u32)
                .collect()
        })
        .collect();
    let mut a = if n == 0 {
        CMatrix::zeros(0, 1, bits)
    } else {
        CMatrix::from_rows(rows)?
    };
    a.equilibrate_rows();
    let ns = nullspace_vector(&a, ctx)?;
    let mut qv = ns.vector;
    let top = largest_index(&qv).expect("nonzero null vector");
    let s = Complex::with_val(bits, qv[top].recip_ref());
    for x in qv.iter_mut() {
        *x *= &s;
    }
    qv[top] = ctx.one();
    let cmax = c[..=3 * n]
        .iter()
        .map(cabs)
        .fold(Float::with_val(64, 0), |a, b| a.max(&b));
    let mut defect = Float::with_val(64, 0);
    for k in n + 1..=2 * n {
        defect = defect.max(&cabs(&product_coeff(&qv, &cp, k, bits)));
    }
    if !cmax.is_zero() {
        defect /= cmax;
    }
    let q = BigPolynomial::new(Basis::ChebyshevFirstKind, qv, ctx);
    let p = numerator_from(&q, c, n, ctx);
    if ns.dim > 1 {
        log::warn!("Frobenius system of order {n} has a {}-dimensional solution space", ns.dim);
    }
    Ok(ChebApproximant {
        p,
        q,
        n,
        defect,
        degenerate: ns.dim > 1,
        nullity: ns.dim,
        residual: ns.residual,
    })
}

/// Weighted variant: `P` and `Q` of degree `<= n` with
/// `int T_k (Qf - P) w dx / sqrt(1 - x^2) = 0` for `k = 0..=2n`, by
/// Gauss-Chebyshev quadrature with node doubling.
pub fn weighted_chebpade<F, W>(f: F, w: W, n: usize, ctx: &PrecisionCtx) -> Result<ChebApproximant>
where
    F: Fn(&Complex) -> Result<Complex> + Sync,
    W: Fn(&Complex) -> Result<Complex> + Sync,
{
    let bits = ctx.bits();
    let mut nodes = (8 * (n + 1)).max(32).next_power_of_two();
    let mut prev = weighted_system(&f, &w, n, nodes, ctx)?;
    let system = loop {
        nodes *= 2;
        let cur = weighted_system(&f, &w, n, nodes, ctx)?;
        let mut worst = Float::with_val(64, 0);
        let mut big = Float::with_val(64, 0);
        for (ra, rb) in prev.iter().zip(&cur) {
            for (a, b) in ra.iter().zip(rb) {
                worst = worst.max(&cabs(&Complex::with_val(bits, a - b)));
                big = big.max(&cabs(b));
            }
        }
        if worst <= Float::with_val(64, ctx.tol() * &big) {
            break cur;
        }
        if nodes >= 1 << 16 {
            return Err(Error::NonConvergence(format!(
                "weighted Chebyshev–Padé quadrature still changing by {:.3e}",
                worst.to_f64()
            )));
        }
        prev = cur;
    };
    let mut a = CMatrix::from_rows(system)?;
    a.equilibrate_rows();
    let ns = nullspace_vector(&a, ctx)?;
    let mut v = ns.vector;
    let mut pv = v.split_off(n + 1);
    let top = largest_index(&v).ok_or_else(|| Error::NonConvergence("zero denominator".into()))?;
    if cabs(&v[top]).is_zero() {
        return Err(Error::NonConvergence("weighted system gave Q = 0".into()));
    }
    let s = Complex::with_val(bits, v[top].recip_ref());
    for x in v.iter_mut().chain(pv.iter_mut()) {
        *x *= &s;
    }
    v[top] = ctx.one();
    Ok(ChebApproximant {
        p: BigPolynomial::new(Basis::ChebyshevFirstKind, pv, ctx),
        q: BigPolynomial::new(Basis::ChebyshevFirstKind, v, ctx),
        n,
        defect: ns.residual.clone(),
        degenerate: ns.dim > 1,
        nullity: ns.dim,
        residual: ns.residual,
    })
}

/// Rows `k = 0..=2n`, columns `q_0..=q_n, p_0..=p_n`; entries are the
/// quadrature sums of `T_k T_j f w` and `-T_k T_j w` divided by `nodes`.
fn weighted_system<F, W>(f: &F, w: &W, n: usize, nodes: usize, ctx: &PrecisionCtx) -> Result<Vec<Vec<Complex>>>
where
    F: Fn(&Complex) -> Result<Complex> + Sync,
    W: Fn(&Complex) -> Result<Complex> + Sync,
{
    let bits = ctx.bits();
    let pts = chebyshev_nodes(nodes, ctx);
    let samples: Vec<(Complex, Complex, Vec<Float>)> = pts
        .par_iter()
        .map(|(x, theta)| {
            let z = Complex::with_val(bits, x);
            let wv = w(&z)?;
            let fw = f(&z)? * &wv;
            let t = (0..=2 * n)
                .map(|k| Float::with_val(bits, theta * k as u32).cos())
                .collect();
            Ok((fw, wv, t))
        })
        .collect::<Result<_>>()?;
    Ok((0..=2 * n)
        .into_par_iter()
        .map(|k| {
            let mut row = vec![Complex::new(bits); 2 * n + 2];
            for (fw, wv, t) in &samples {
                for j in 0..=n {
                    let tt = Float::with_val(bits, &t[k] * &t[j]);
                    row[j] += Complex::with_val(bits, fw * &tt);
                    row[n + 1 + j] -= Complex::with_val(bits, wv * &tt);
                }
            }
            row.into_iter().map(|e| e / nodes as u32).collect()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{cheb_coeffs, ComplexParam, FunctionSpec};

    fn pole(at: f64) -> FunctionSpec {
        FunctionSpec::simple_pole(ComplexParam::real(at), ComplexParam::real(-1))
    }

    #[test]
    fn polynomial_is_a_fixed_point() {
        let ctx = PrecisionCtx::new(256).unwrap();
        let mut c = vec![ctx.zero(); 7];
        c[2] = ctx.one();
        let a = frobenius_pade(&c, 2, &ctx).unwrap();
        assert_eq!(a.q.degree(), 0);
        assert_eq!(a.p.degree(), 2);
        let z = ctx.complex((0.3, 0.4));
        let want = BigPolynomial::chebyshev_t(2, &ctx).eval(&z);
        assert!(cabs(&(a.eval(&z) - want)) < 1e-60);
    }

    #[test]
    fn recovers_type_zero_one_rational() {
        let ctx = PrecisionCtx::new(256).unwrap();
        let spec = pole(3.0);
        let c = cheb_coeffs(&spec, 3, &ctx).unwrap();
        let a = frobenius_pade(&c, 1, &ctx).unwrap();
        let f = spec.bind(&ctx).unwrap();
        for &(x, y) in &[(0.5, 0.0), (-0.9, 0.1), (2.0, 2.0)] {
            let z = ctx.complex((x, y));
            assert!(cabs(&(a.eval(&z) - f.eval(&z).unwrap())) < 1e-60);
        }
    }

    #[test]
    fn closure_of_numerator() {
        let ctx = PrecisionCtx::new(256).unwrap();
        let c = cheb_coeffs(&FunctionSpec::markov_arcsine(2, 3).unwrap(), 18, &ctx).unwrap();
        let a = frobenius_pade(&c, 6, &ctx).unwrap();
        let p = numerator_from(&a.q, &c, 6, &ctx);
        for (x, y) in p.coeffs().iter().zip(a.p.coeffs()) {
            assert_eq!(x, y);
        }
        assert!(a.defect < ctx.tol_f64());
    }

    #[test]
    fn weighted_with_unit_weight_matches_frobenius() {
        let ctx = PrecisionCtx::new(256).unwrap();
        let spec = FunctionSpec::markov_arcsine(2, 3).unwrap();
        let f = spec.bind(&ctx).unwrap();
        let n = 6;
        let c = cheb_coeffs(&spec, 3 * n, &ctx).unwrap();
        let a = frobenius_pade(&c, n, &ctx).unwrap();
        let b = weighted_chebpade(|z| f.eval(z), |_| Ok(ctx.one()), n, &ctx).unwrap();
        for j in 0..16 {
            let t = std::f64::consts::PI * (2 * j + 1) as f64 / 16.0;
            let z = ctx.complex((1.5 * t.cos(), 1.5 * t.sin()));
            let d = cabs(&(a.eval(&z) - b.eval(&z)));
            assert!(d < 10.0 * ctx.tol_f64(), "probe {j}: {}", d.to_f64());
        }
    }

    #[test]
    fn weighted_recovers_rational() {
        let ctx = PrecisionCtx::new(256).unwrap();
        let f = pole(3.0).bind(&ctx).unwrap();
        let w = |x: &Complex| Ok(Complex::with_val(256, x * x) / 4u32 + 1u32);
        let a = weighted_chebpade(|z| f.eval(z), w, 2, &ctx).unwrap();
        assert!(a.residual < ctx.tol_f64());
        let z = ctx.complex((0.1, 0.7));
        assert!(cabs(&(a.eval(&z) - f.eval(&z).unwrap())) < 1e-60);
    }

    #[test]
    fn only_first_3n_plus_1_coefficients_matter() {
        let ctx = PrecisionCtx::new(256).unwrap();
        let n = 5;
        let mut c = cheb_coeffs(&FunctionSpec::markov_arcsine(2, 3).unwrap(), 3 * n + 4, &ctx).unwrap();
        let base = frobenius_pade(&c, n, &ctx).unwrap();
        c[3 * n + 1] += 1u32;
        let same = frobenius_pade(&c, n, &ctx).unwrap();
        assert!(base.q.coeffs().iter().zip(same.q.coeffs()).all(|(a, b)| a == b));
        c[3 * n] += 1u32;
        let moved = frobenius_pade(&c, n, &ctx).unwrap();
        assert!(base.q.coeffs().iter().zip(moved.q.coeffs()).any(|(a, b)| a != b));
    }
}
