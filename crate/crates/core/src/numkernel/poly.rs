use rug::{Complex, Float};
use serde::{Deserialize, Serialize};

use super::precision::{cabs, cmag2, PrecisionCtx};

/// Coefficient basis of a [`BigPolynomial`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Basis {
    Monomial,
    /// First-kind Chebyshev polynomials `T_k` on `[-1, 1]`.
    ChebyshevFirstKind,
}

/// Dense polynomial with arbitrary-precision complex coefficients.
///
/// `coeffs[k]` multiplies `z^k` or `T_k(z)` depending on the basis. Trailing
/// coefficients below `tol * max|coeff|` are trimmed on construction, which
/// defines the reported degree.
#[derive(Clone, Debug)]
pub struct BigPolynomial {
    basis: Basis,
    coeffs: Vec<Complex>,
}

impl BigPolynomial {
    pub fn new(basis: Basis, coeffs: Vec<Complex>, ctx: &PrecisionCtx) -> Self {
        let mut p = BigPolynomial { basis, coeffs };
        p.trim(ctx.tol());
        p
    }

    /// Keeps every coefficient; only exact trailing zeros are dropped.
    pub fn from_coeffs(basis: Basis, coeffs: Vec<Complex>) -> Self {
        let mut p = BigPolynomial { basis, coeffs };
        while p.coeffs.last().is_some_and(|c| c.is_zero()) {
            p.coeffs.pop();
        }
        p
    }

    pub fn from_f64(basis: Basis, coeffs: &[f64], ctx: &PrecisionCtx) -> Self {
        let coeffs = coeffs.iter().map(|&c| ctx.complex(c)).collect();
        Self::new(basis, coeffs, ctx)
    }

    pub fn zero(basis: Basis) -> Self {
        BigPolynomial {
            basis,
            coeffs: Vec::new(),
        }
    }

    /// `T_k` in the Chebyshev basis.
    pub fn chebyshev_t(k: usize, ctx: &PrecisionCtx) -> Self {
        let mut coeffs = vec![ctx.zero(); k + 1];
        coeffs[k] = ctx.one();
        BigPolynomial {
            basis: Basis::ChebyshevFirstKind,
            coeffs,
        }
    }

    /// Monic polynomial with the given zeros, in the monomial basis.
    pub fn from_roots(roots: &[Complex], ctx: &PrecisionCtx) -> Self {
        let mut c = vec![ctx.one()];
        for r in roots {
            let mut next = vec![ctx.zero(); c.len() + 1];
            for (k, ck) in c.iter().enumerate() {
                next[k + 1] += ck;
                next[k] -= Complex::with_val(ctx.bits(), ck * r);
            }
            c = next;
        }
        BigPolynomial {
            basis: Basis::Monomial,
            coeffs: c,
        }
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn coeffs(&self) -> &[Complex] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Degree after trimming; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Largest coefficient modulus (64-bit working precision).
    pub fn max_abs(&self) -> Float {
        self.coeffs
            .iter()
            .map(cabs)
            .fold(Float::with_val(64, 0), |a, b| if b > a { b } else { a })
    }

    pub fn trim(&mut self, rel_tol: &Float) {
        let thresh = Float::with_val(64, self.max_abs() * rel_tol);
        while let Some(last) = self.coeffs.last() {
            if last.is_zero() || (cabs(last) <= thresh && self.coeffs.len() > 1) {
                self.coeffs.pop();
            } else {
                break;
            }
        }
    }

    fn work_prec(&self) -> u32 {
        self.coeffs.iter().map(|c| c.prec().0).max().unwrap_or(64)
    }

    /// Evaluates the polynomial (Horner or Clenshaw) at the precision of
    /// the coefficients or of `z`, whichever is larger.
    pub fn eval(&self, z: &Complex) -> Complex {
        let prec = self.work_prec().max(z.prec().0);
        match self.basis {
            Basis::Monomial => {
                let mut acc = Complex::new(prec);
                for c in self.coeffs.iter().rev() {
                    acc *= z;
                    acc += c;
                }
                acc
            }
            Basis::ChebyshevFirstKind => {
                let n = self.coeffs.len();
                if n == 0 {
                    return Complex::new(prec);
                }
                let two_z = Complex::with_val(prec, z * 2u32);
                let mut b1 = Complex::new(prec);
                let mut b2 = Complex::new(prec);
                for c in self.coeffs[1..].iter().rev() {
                    let mut b0 = Complex::with_val(prec, &two_z * &b1);
                    b0 -= &b2;
                    b0 += c;
                    b2 = std::mem::replace(&mut b1, b0);
                }
                let mut out = Complex::with_val(prec, z * &b1);
                out -= &b2;
                out += &self.coeffs[0];
                out
            }
        }
    }

    pub fn eval_f64(&self, x: f64) -> Complex {
        let z = Complex::with_val(self.work_prec(), x);
        self.eval(&z)
    }

    pub fn scaled(&self, s: &Complex) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| Complex::with_val(c.prec(), c * s))
            .collect();
        BigPolynomial {
            basis: self.basis,
            coeffs,
        }
    }

    /// Divides by the largest-modulus coefficient (lowest index on ties).
    /// Returns the polynomial unchanged if it is zero.
    pub fn normalized(&self) -> (Self, Complex) {
        match largest_index(&self.coeffs) {
            Some(i) => {
                let s = self.coeffs[i].clone();
                let inv = Complex::with_val(s.prec(), 1) / &s;
                (self.scaled(&inv), s)
            }
            None => (self.clone(), Complex::with_val(64, 1)),
        }
    }

    pub fn to_basis(&self, target: Basis) -> Self {
        convert_basis(self, target)
    }

    /// Derivative, monomial basis only (converts first otherwise).
    pub fn derivative(&self) -> Self {
        let m = self.to_basis(Basis::Monomial);
        let coeffs = m
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| Complex::with_val(c.prec(), c * k as u32))
            .collect();
        BigPolynomial::from_coeffs(Basis::Monomial, coeffs)
    }

    /// Rounds every coefficient to `bits` of precision.
    pub fn with_prec(&self, bits: u32) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| Complex::with_val(bits, c))
            .collect();
        BigPolynomial {
            basis: self.basis,
            coeffs,
        }
    }
}

pub(crate) fn largest_index(v: &[Complex]) -> Option<usize> {
    let mut best: Option<(usize, Float)> = None;
    for (i, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let m = cmag2(c);
        match &best {
            Some((_, b)) if m <= *b => {}
            _ => best = Some((i, m)),
        }
    }
    best.map(|(i, _)| i)
}

/// Guard bits used by basis conversion: the change of basis has condition
/// number growing like `(1 + sqrt 2)^deg`.
fn guard_bits(deg: usize) -> u32 {
    (1.3 * deg as f64).ceil() as u32 + 16
}

/// Re-expresses `p` in the `target` basis.
///
/// The result carries `guard_bits(deg)` extra bits of precision so that a
/// round trip reproduces the input to its own precision.
pub fn convert_basis(p: &BigPolynomial, target: Basis) -> BigPolynomial {
    if p.basis == target || p.coeffs.is_empty() {
        return p.clone();
    }
    let n = p.coeffs.len();
    let prec = p.work_prec() + guard_bits(n - 1);
    let coeffs = match target {
        Basis::ChebyshevFirstKind => monomial_to_cheb(&p.coeffs, prec),
        Basis::Monomial => cheb_to_monomial(&p.coeffs, prec),
    };
    BigPolynomial::from_coeffs(target, coeffs)
}

/// Horner in the Chebyshev basis using `x T_0 = T_1`,
/// `x T_k = (T_{k+1} + T_{k-1}) / 2`.
fn monomial_to_cheb(a: &[Complex], prec: u32) -> Vec<Complex> {
    let n = a.len();
    let mut acc: Vec<Complex> = vec![Complex::new(prec); n];
    let mut len = 0usize;
    for c in a.iter().rev() {
        // acc <- x * acc
        let mut next: Vec<Complex> = vec![Complex::new(prec); n];
        for k in 0..len {
            if acc[k].is_zero() {
                continue;
            }
            if k == 0 {
                next[1] += &acc[0];
            } else {
                let half = Complex::with_val(prec, &acc[k] / 2u32);
                next[k + 1] += &half;
                next[k - 1] += &half;
            }
        }
        next[0] += c;
        acc = next;
        len = (len + 1).min(n);
    }
    acc
}

/// Accumulates monomial coefficients of `T_k` via `T_{k+1} = 2x T_k - T_{k-1}`.
fn cheb_to_monomial(c: &[Complex], prec: u32) -> Vec<Complex> {
    let n = c.len();
    let mut out = vec![Complex::new(prec); n];
    // monomial coefficients of T_{k-1}, T_k (integers, exact at this precision)
    let mut t_prev: Vec<Float> = vec![Float::with_val(prec, 1)];
    let mut t_cur: Vec<Float> = vec![Float::new(prec), Float::with_val(prec, 1)];
    out[0] += &c[0];
    if n > 1 {
        out[1] += &c[1];
    }
    for k in 2..n {
        let mut t_next: Vec<Float> = vec![Float::new(prec); k + 1];
        for (j, t) in t_cur.iter().enumerate() {
            t_next[j + 1] += Float::with_val(prec, t * 2u32);
        }
        for (j, t) in t_prev.iter().enumerate() {
            t_next[j] -= t;
        }
        for (j, t) in t_next.iter().enumerate() {
            if !t.is_zero() {
                out[j] += Complex::with_val(prec, &c[k] * t);
            }
        }
        t_prev = std::mem::replace(&mut t_cur, t_next);
    }
    out
}

/// Linearization `T_j T_k = (T_{j+k} + T_{|j-k|}) / 2` as `(index, weight)`
/// pairs, merged when both terms land on the same index.
pub fn cheb_product(j: usize, k: usize) -> Vec<(usize, f64)> {
    if j == 0 || k == 0 {
        return vec![(j + k, 1.0)];
    }
    let hi = j + k;
    let lo = j.abs_diff(k);
    vec![(hi, 0.5), (lo, 0.5)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::ops::Pow;

    fn ctx() -> PrecisionCtx {
        PrecisionCtx::new(256).unwrap()
    }

    fn close(a: &Complex, b: &Complex, tol: f64) -> bool {
        cabs(&Complex::with_val(a.prec(), a - b)).to_f64() <= tol
    }

    #[test]
    fn cube_to_chebyshev() {
        let ctx = ctx();
        let p = BigPolynomial::from_f64(Basis::Monomial, &[0.0, 0.0, 0.0, 1.0], &ctx);
        let c = p.to_basis(Basis::ChebyshevFirstKind);
        let expect = [0.0, 0.75, 0.0, 0.25];
        for (got, want) in c.coeffs().iter().zip(expect) {
            assert!(close(got, &ctx.complex(want), 1e-70));
        }
        for x in [-0.9, -0.2, 0.3, 0.8] {
            let z = ctx.complex(x);
            assert!(close(&p.eval(&z), &c.eval(&z), 1e-70));
        }
    }

    #[test]
    fn t2_to_monomial() {
        let ctx = ctx();
        let m = BigPolynomial::chebyshev_t(2, &ctx).to_basis(Basis::Monomial);
        let expect = [-1.0, 0.0, 2.0];
        for (got, want) in m.coeffs().iter().zip(expect) {
            assert!(close(got, &ctx.complex(want), 1e-70));
        }
    }

    #[test]
    fn cheb_product_examples() {
        assert_eq!(cheb_product(1, 1), vec![(2, 0.5), (0, 0.5)]);
        assert_eq!(cheb_product(0, 7), vec![(7, 1.0)]);
        assert_eq!(cheb_product(3, 5), vec![(8, 0.5), (2, 0.5)]);
        assert_eq!(cheb_product(0, 0), vec![(0, 1.0)]);
    }

    #[test]
    fn clenshaw_matches_cosine_form() {
        let ctx = ctx();
        let t7 = BigPolynomial::chebyshev_t(7, &ctx);
        let x = 0.37_f64;
        let want = (7.0 * x.acos()).cos();
        let got = t7.eval(&ctx.complex(x)).real().to_f64();
        assert!((got - want).abs() < 1e-14);
    }

    #[test]
    fn trimming_defines_degree() {
        let ctx = ctx();
        let tiny = Float::with_val(256, 2).pow(-200);
        let coeffs = vec![ctx.one(), ctx.one(), Complex::with_val(256, tiny)];
        let p = BigPolynomial::new(Basis::Monomial, coeffs, &ctx);
        assert_eq!(p.degree(), 1);
    }

    #[test]
    fn from_roots_vanishes_at_roots() {
        let ctx = ctx();
        let roots = vec![ctx.complex(2), ctx.complex((0.5, 1.0)), ctx.complex(-3)];
        let p = BigPolynomial::from_roots(&roots, &ctx);
        assert_eq!(p.degree(), 3);
        for r in &roots {
            assert!(cabs(&p.eval(r)).to_f64() < 1e-70);
        }
    }
}
