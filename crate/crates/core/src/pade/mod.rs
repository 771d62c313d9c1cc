//! Diagonal Padé approximants at infinity and multipoint Padé
//! approximants, with the orthogonality relations their denominators obey.

mod orthogonality;
mod table;

pub use orthogonality::{
    check_contour_orthogonality, check_power_orthogonality, ContourOrthogonality,
    OrthogonalityReport,
};
pub use table::InterpolationTable;

use rayon::prelude::*;
use rug::Float;

use crate::error::{Error, Result};
use crate::numkernel::{
    cabs, nullspace_vector, Basis, BigPolynomial, CMatrix, Complex, LaurentTail, PrecisionCtx,
};
use crate::record::{ApproximantRecord, PolyRecord};

/// Numerator and denominator of a Padé-type approximant in the monomial basis.
#[derive(Clone, Debug)]
pub struct PadePair {
    pub p: BigPolynomial,
    pub q: BigPolynomial,
    pub n: usize,
    /// Finite nodes at which `P` and `Q` vanish together.
    pub lost_count: usize,
    /// Dimension of the solution space; above one the pair is not unique.
    pub nullity: usize,
    /// Largest relative residual of the interpolation conditions.
    pub residual: Float,
}

impl PadePair {
    pub fn eval(&self, z: &Complex) -> Complex {
        self.p.eval(z) / self.q.eval(z)
    }

    pub fn is_degenerate(&self) -> bool {
        self.nullity > 1
    }

    /// Laurent coefficients of `Qf - P` at `z^{-1}, ..., z^{-count}`.
    pub fn remainder_coeffs(&self, tail: &LaurentTail, count: usize) -> Vec<Complex> {
        let q = self.q.coeffs();
        (1..=count)
            .map(|m| {
                let mut s = Complex::new(tail.coeff(0).prec().0);
                for (j, qj) in q.iter().enumerate() {
                    if m + j <= tail.order() {
                        s += Complex::with_val(s.prec().0, qj * tail.coeff(m + j));
                    }
                }
                s
            })
            .collect()
    }

    pub fn record(&self, kind: &str, ctx: &PrecisionCtx) -> ApproximantRecord {
        let mut polynomials = std::collections::BTreeMap::new();
        polynomials.insert("P".to_string(), PolyRecord::from(&self.p));
        polynomials.insert("Q".to_string(), PolyRecord::from(&self.q));
        let mut metadata = std::collections::BTreeMap::new();
        metadata.insert("lost_count".to_string(), self.lost_count.to_string());
        ApproximantRecord {
            kind: kind.to_string(),
            n: self.n,
            polynomials,
            defect_order: None,
            degenerate: self.is_degenerate(),
            nullity: self.nullity,
            residual: self.residual.to_f64(),
            precision: ctx.meta(),
            metadata,
        }
    }
}

/// Divides both polynomials by the largest coefficient of `q`.
fn gauge(p: Vec<Complex>, q: Vec<Complex>, ctx: &PrecisionCtx) -> (BigPolynomial, BigPolynomial) {
    let k = crate::numkernel::largest_index(&q).expect("nonzero denominator");
    let s = Complex::with_val(ctx.bits(), q[k].recip_ref());
    let scale = |v: Vec<Complex>| -> Vec<Complex> { v.into_iter().map(|c| c * &s).collect() };
    let mut q = scale(q);
    q[k] = ctx.one();
    (
        BigPolynomial::new(Basis::Monomial, scale(p), ctx),
        BigPolynomial::new(Basis::Monomial, q, ctx),
    )
}

/// Diagonal Padé approximant at infinity: `deg P, deg Q <= n` with
/// `Qf - P = O(z^{-(n+1)})`.
///
/// `Q` solves the Hankel system `sum_j q_j c_{m+j} = 0`, `m = 1..=n`, and `P`
/// is the polynomial part of `Qf`.
pub fn pade_at_infinity(tail: &LaurentTail, n: usize, ctx: &PrecisionCtx) -> Result<PadePair> {
    if tail.order() < 2 * n + 1 {
        return Err(Error::InvalidInput(format!(
            "order-{n} Padé needs {} Laurent coefficients, got {}",
            2 * n + 2,
            tail.order() + 1
        )));
    }
    let bits = ctx.bits();
    let c = |k: usize| Complex::with_val(bits, tail.coeff(k));
    let rows: Vec<Vec<Complex>> = (1..=n).map(|m| (0..=n).map(|j| c(m + j)).collect()).collect();
    let mut a = if n == 0 {
        CMatrix::zeros(0, 1, bits)
    } else {
        CMatrix::from_rows(rows)?
    };
    a.equilibrate_rows();
    let ns = nullspace_vector(&a, ctx)?;
    let q = ns.vector;
    let p: Vec<Complex> = (0..=n)
        .map(|i| {
            let mut s = Complex::new(bits);
            for j in i..=n {
                s += Complex::with_val(bits, &q[j] * tail.coeff(j - i));
            }
            s
        })
        .collect();
    let (p, q) = gauge(p, q, ctx);
    Ok(PadePair {
        p,
        q,
        n,
        lost_count: 0,
        nullity: ns.dim,
        residual: ns.residual,
    })
}

/// Multipoint Padé approximant, `deg P <= n - 1`, `deg Q <= n`, with
/// `Qf - P` vanishing at every finite node of `table` and to order
/// `table.at_infinity()` at infinity (the coefficients of
/// `z^{n-1}, ..., z^{n - m}` of its Laurent expansion).
///
/// `tail` is required when the table has conditions at infinity; `f` must
/// then vanish there.
pub fn multipoint_pade<F>(
    f: F,
    table: &InterpolationTable,
    tail: Option<&LaurentTail>,
    n: usize,
    ctx: &PrecisionCtx,
) -> Result<PadePair>
where
    F: Fn(&Complex) -> Result<Complex> + Sync,
{
    if table.total() != 2 * n {
        return Err(Error::InvalidInput(format!(
            "table carries {} conditions, order {n} needs {}",
            table.total(),
            2 * n
        )));
    }
    let bits = ctx.bits();
    let m_inf = table.at_infinity();
    if m_inf > 0 {
        let t = tail.ok_or_else(|| {
            Error::InvalidInput("conditions at infinity need a Laurent tail".into())
        })?;
        if t.order() < m_inf {
            return Err(Error::InvalidInput(format!(
                "{m_inf} conditions at infinity need order {m_inf}, tail has {}",
                t.order()
            )));
        }
        if cabs(t.coeff(0)) > *ctx.tol() {
            return Err(Error::InvalidInput(
                "conditions at infinity assume f vanishes there".into(),
            ));
        }
    }
    let values: Vec<Complex> = table
        .finite()
        .par_iter()
        .map(|z| f(z).map_err(|e| e.in_step("evaluate f at node")))
        .collect::<Result<_>>()?;

    // columns: q_0..=q_n, then p_0..p_{n-1}
    let ncols = 2 * n + 1;
    let mut rows = Vec::with_capacity(2 * n);
    for (z, fz) in table.finite().iter().zip(&values) {
        let mut row = Vec::with_capacity(ncols);
        let mut zp = Complex::with_val(bits, 1);
        let mut powers = Vec::with_capacity(n + 1);
        for _ in 0..=n {
            powers.push(zp.clone());
            zp *= z;
        }
        for zj in &powers {
            row.push(Complex::with_val(bits, zj * fz));
        }
        for zj in powers.iter().take(n) {
            row.push(Complex::with_val(bits, -zj));
        }
        rows.push(row);
    }
    if let Some(t) = tail {
        for i in 0..m_inf {
            // coefficient of z^s, s = n - 1 - i, possibly negative
            let s = n as i64 - 1 - i as i64;
            let mut row = vec![Complex::new(bits); ncols];
            for (j, slot) in row.iter_mut().enumerate().take(n + 1) {
                let k = j as i64 - s;
                if k >= 0 {
                    *slot = Complex::with_val(bits, t.coeff(k as usize));
                }
            }
            if s >= 0 {
                row[n + 1 + s as usize] = Complex::with_val(bits, -1);
            }
            rows.push(row);
        }
    }
    let mut a = if rows.is_empty() {
        CMatrix::zeros(0, ncols, bits)
    } else {
        CMatrix::from_rows(rows)?
    };
    a.equilibrate_rows();
    let ns = nullspace_vector(&a, ctx)?;
    let mut v = ns.vector;
    let p_raw = v.split_off(n + 1);
    let (p, q) = gauge(p_raw, v, ctx);

    let mut residual = Float::with_val(64, 0);
    let mut lost = 0;
    let loose = Float::with_val(64, ctx.tol().sqrt_ref());
    for (z, fz) in table.finite().iter().zip(&values) {
        let qz = q.eval(z);
        let pz = p.eval(z);
        let qs = abs_sum(&q, z);
        let ps = abs_sum(&p, z);
        let r = cabs(&Complex::with_val(bits, &qz * fz - &pz));
        let scale = Float::with_val(64, &qs * cabs(fz)) + &ps;
        if !scale.is_zero() {
            residual = residual.max(&(r / &scale));
        }
        if cabs(&qz) <= Float::with_val(64, &loose * &qs) && cabs(&pz) <= Float::with_val(64, &loose * &ps) {
            lost += 1;
        }
    }
    if lost > 0 {
        log::warn!("multipoint Padé of order {n}: interpolation lost at {lost} node(s)");
    }
    Ok(PadePair {
        p,
        q,
        n,
        lost_count: lost,
        nullity: ns.dim,
        residual: if table.finite().is_empty() { ns.residual } else { residual },
    })
}

/// `sum_j |a_j| |z|^j`.
fn abs_sum(p: &BigPolynomial, z: &Complex) -> Float {
    let r = cabs(z);
    let mut s = Float::with_val(64, 0);
    let mut rp = Float::with_val(64, 1);
    for c in p.coeffs() {
        s += Float::with_val(64, cabs(c) * &rp);
        rp *= &r;
    }
    s
}
