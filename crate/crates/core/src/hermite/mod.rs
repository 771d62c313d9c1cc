//! Type I Hermite–Padé polynomials for tuples `[1, f1, f2]` with
//! multiindex `(n - 1, n, n)`.
//!
//! Constants at infinity are split off first, `g_i = f_i - f_i(inf)`, so
//! that the `2n + 1` conditions act on `(Q1, Q2)` alone; `Q0` then follows
//! from the polynomial part of `Q1 g1 + Q2 g2` and the constants.

use std::collections::BTreeMap;

use rug::Float;

use crate::error::{Error, Result};
use crate::numkernel::{
    cabs, nullspace_vector, Basis, BigPolynomial, CMatrix, Complex, LaurentTail, PrecisionCtx,
};
use crate::record::{ApproximantRecord, PolyRecord};

#[derive(Clone, Debug)]
pub struct HPTriple {
    pub q0: BigPolynomial,
    pub q1: BigPolynomial,
    pub q2: BigPolynomial,
    pub n: usize,
    /// Index of the first remainder coefficient that does not vanish.
    pub defect_order: usize,
    pub degenerate: bool,
    pub nullity: usize,
    pub residual: Float,
}

impl HPTriple {
    /// `Q0 + Q1 f1 + Q2 f2` at `z`.
    pub fn form(&self, z: &Complex, f1: &Complex, f2: &Complex) -> Complex {
        let mut s = self.q0.eval(z);
        s += self.q1.eval(z) * f1;
        s += self.q2.eval(z) * f2;
        s
    }

    /// `-Q1 / Q2` at `z`.
    pub fn ratio(&self, z: &Complex) -> Complex {
        -self.q1.eval(z) / self.q2.eval(z)
    }

    pub fn record(&self, kind: &str, ctx: &PrecisionCtx) -> ApproximantRecord {
        let mut polynomials = BTreeMap::new();
        polynomials.insert("Q0".to_string(), PolyRecord::from(&self.q0));
        polynomials.insert("Q1".to_string(), PolyRecord::from(&self.q1));
        polynomials.insert("Q2".to_string(), PolyRecord::from(&self.q2));
        ApproximantRecord {
            kind: kind.to_string(),
            n: self.n,
            polynomials,
            defect_order: Some(self.defect_order),
            degenerate: self.degenerate,
            nullity: self.nullity,
            residual: self.residual.to_f64(),
            precision: ctx.meta(),
            metadata: BTreeMap::new(),
        }
    }
}

fn tail_coeff(t: &LaurentTail, k: usize, bits: u32) -> Complex {
    if k <= t.order() {
        Complex::with_val(bits, t.coeff(k))
    } else {
        Complex::new(bits)
    }
}

/// Type I Hermite–Padé polynomials with `Q0 + Q1 f1 + Q2 f2 = O(z^{-(2n+2)})`.
///
/// `(Q1, Q2)` are normalized so the largest stacked coefficient is one.
pub fn hp_type1(f1: &LaurentTail, f2: &LaurentTail, n: usize, ctx: &PrecisionCtx) -> Result<HPTriple> {
    let need = 3 * n + 2;
    if f1.order() < need || f2.order() < need {
        return Err(Error::InvalidInput(format!(
            "order-{n} Hermite–Padé needs tails to order {need}, got {} and {}",
            f1.order(),
            f2.order()
        )));
    }
    let bits = ctx.bits();
    let g1 = f1.without_constant();
    let g2 = f2.without_constant();
    let rows: Vec<Vec<Complex>> = (1..=2 * n + 1)
        .map(|k| {
            (0..=n)
                .map(|j| tail_coeff(&g1, j + k, bits))
                .chain((0..=n).map(|j| tail_coeff(&g2, j + k, bits)))
                .collect()
        })
        .collect();
    let mut a = CMatrix::from_rows(rows)?;
    a.equilibrate_rows();
    let ns = nullspace_vector(&a, ctx)?;
    let mut v = ns.vector;
    let q2c = v.split_off(n + 1);
    let q1c = v;

    // Q0 = -(c1 Q1 + c2 Q2) - polypart(Q1 g1 + Q2 g2)
    let (c1, c2) = (f1.coeff(0), f2.coeff(0));
    let q0c: Vec<Complex> = (0..=n)
        .map(|i| {
            let mut s = Complex::new(bits);
            s -= Complex::with_val(bits, c1 * &q1c[i]);
            s -= Complex::with_val(bits, c2 * &q2c[i]);
            for j in i + 1..=n {
                s -= Complex::with_val(bits, &q1c[j] * g1.coeff(j - i));
                s -= Complex::with_val(bits, &q2c[j] * g2.coeff(j - i));
            }
            s
        })
        .collect();

    let mut t = HPTriple {
        q0: BigPolynomial::new(Basis::Monomial, q0c, ctx),
        q1: BigPolynomial::new(Basis::Monomial, q1c, ctx),
        q2: BigPolynomial::new(Basis::Monomial, q2c, ctx),
        n,
        defect_order: 0,
        degenerate: ns.dim > 1,
        nullity: ns.dim,
        residual: ns.residual,
    };
    if t.degenerate {
        log::warn!("Hermite–Padé system of order {n} has a {}-dimensional solution space", ns.dim);
    }
    let upto = f1.order().min(f2.order()) - n;
    let rem = hp_remainder_coeffs(&t, f1, f2, upto)?;
    t.defect_order = defect_order(&t, f1, f2, &rem, ctx);
    Ok(t)
}

/// Laurent tail of `Q0 + Q1 f1 + Q2 f2` through `z^{-order}`.
pub fn hp_remainder_coeffs(
    t: &HPTriple,
    f1: &LaurentTail,
    f2: &LaurentTail,
    order: usize,
) -> Result<LaurentTail> {
    let deg = t.q1.coeffs().len().max(t.q2.coeffs().len()).saturating_sub(1);
    if order + deg > f1.order().min(f2.order()) {
        return Err(Error::InvalidInput(format!(
            "remainder to order {order} needs tails to order {}",
            order + deg
        )));
    }
    let bits = f1.coeff(0).prec().0;
    let coeffs = (0..=order)
        .map(|k| {
            let mut s = Complex::new(bits);
            if k == 0 {
                if let Some(c) = t.q0.coeffs().first() {
                    s += c;
                }
            }
            for (j, q) in t.q1.coeffs().iter().enumerate() {
                s += Complex::with_val(bits, q * f1.coeff(j + k));
            }
            for (j, q) in t.q2.coeffs().iter().enumerate() {
                s += Complex::with_val(bits, q * f2.coeff(j + k));
            }
            s
        })
        .collect();
    Ok(LaurentTail::new(coeffs, f1.radius().max(f2.radius())))
}

/// `sum_j |q1_j| |f1_{j+k}| + |q2_j| |f2_{j+k}|`, the size of the terms
/// that cancel in remainder coefficient `k`.
pub fn term_scale(t: &HPTriple, f1: &LaurentTail, f2: &LaurentTail, k: usize) -> Float {
    let mut s = Float::with_val(64, 0);
    for (j, q) in t.q1.coeffs().iter().enumerate() {
        if j + k <= f1.order() {
            s += cabs(q) * cabs(f1.coeff(j + k));
        }
    }
    for (j, q) in t.q2.coeffs().iter().enumerate() {
        if j + k <= f2.order() {
            s += cabs(q) * cabs(f2.coeff(j + k));
        }
    }
    s
}

fn defect_order(t: &HPTriple, f1: &LaurentTail, f2: &LaurentTail, rem: &LaurentTail, ctx: &PrecisionCtx) -> usize {
    for k in 1..=rem.order() {
        let scale = term_scale(t, f1, f2, k);
        if cabs(rem.coeff(k)) > Float::with_val(64, ctx.tol() * &scale) {
            return k;
        }
    }
    rem.order() + 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{laurent_coeffs, FunctionSpec, Segment};

    fn pole_tail(a: f64, order: usize, ctx: &PrecisionCtx) -> LaurentTail {
        let mut coeffs = vec![ctx.zero()];
        let mut p = ctx.one();
        for _ in 1..=order {
            coeffs.push(p.clone());
            p *= a;
        }
        LaurentTail::new(coeffs, a.abs())
    }

    #[test]
    fn two_poles_are_annihilated() {
        let ctx = PrecisionCtx::new(256).unwrap();
        let (a, b) = (0.5, -2.0);
        let (f1, f2) = (pole_tail(a, 8, &ctx), pole_tail(b, 8, &ctx));
        let t = hp_type1(&f1, &f2, 1, &ctx).unwrap();
        // (z - a) f1 = 1 already, so (-1, z - a, 0) and (0, z - a, -(z - b))
        // span the solutions
        assert_eq!(t.nullity, 2);
        assert!(t.degenerate);
        let rem = hp_remainder_coeffs(&t, &f1, &f2, 7).unwrap();
        assert!(rem.coeffs().iter().all(|c| cabs(c) < 1e-60));
        let z = ctx.complex((0.3, 1.7));
        let v1 = Complex::with_val(256, Complex::with_val(256, &z - a).recip_ref());
        let v2 = Complex::with_val(256, Complex::with_val(256, &z - b).recip_ref());
        assert!(cabs(&t.form(&z, &v1, &v2)) < 1e-60);
    }

    #[test]
    fn equal_functions_are_degenerate() {
        let ctx = PrecisionCtx::new(256).unwrap();
        let f = laurent_coeffs(&FunctionSpec::InvSqrt, 11, &ctx).unwrap();
        let t = hp_type1(&f, &f, 3, &ctx).unwrap();
        assert!(t.degenerate);
    }

    #[test]
    fn nikishin_defect_is_exact() {
        let n = 5;
        let ctx = PrecisionCtx::for_hermite(n);
        let (s1, s2) = FunctionSpec::nikishin_pair(Segment::unit(), Segment::new(2, 3).unwrap()).unwrap();
        let f1 = laurent_coeffs(&s1, 3 * n + 2, &ctx).unwrap();
        let f2 = laurent_coeffs(&s2, 3 * n + 2, &ctx).unwrap();
        let t = hp_type1(&f1, &f2, n, &ctx).unwrap();
        assert!(!t.degenerate);
        assert_eq!(t.defect_order, 2 * n + 2);

        let mut broken = t.clone();
        broken.q2 = BigPolynomial::zero(Basis::Monomial);
        let rem = hp_remainder_coeffs(&broken, &f1, &f2, 2 * n + 1).unwrap();
        let first = (1..=2 * n + 1).find(|&k| cabs(rem.coeff(k)) > 1e-30).unwrap();
        assert!(first < 2 * n + 2);
    }

    #[test]
    fn constants_are_absorbed_by_q0() {
        let ctx = PrecisionCtx::new(256).unwrap();
        let n = 3;
        let f1 = laurent_coeffs(&FunctionSpec::InvSqrt, 3 * n + 2, &ctx).unwrap();
        let shifted = FunctionSpec::shifted(
            FunctionSpec::markov_arcsine(2, 3).unwrap(),
            crate::functions::ComplexParam::new(0.75, -0.25),
        );
        let f2 = laurent_coeffs(&shifted, 3 * n + 2, &ctx).unwrap();
        let t = hp_type1(&f1, &f2, n, &ctx).unwrap();
        assert_eq!(t.defect_order, 2 * n + 2);
        let rem = hp_remainder_coeffs(&t, &f1, &f2, 2 * n + 1).unwrap();
        assert!(cabs(rem.coeff(0)) < 1e-60);
    }
}
