use rug::Complex;

use super::precision::cabs;

/// Truncated expansion `sum_{k=0}^{K} c_k z^{-k}` at infinity.
///
/// `radius` is the modulus of the declared singular set; the series
/// converges for `|z| > radius`.
#[derive(Clone, Debug)]
pub struct LaurentTail {
    coeffs: Vec<Complex>,
    radius: f64,
}

/// Partial sum plus a geometric bound on the discarded remainder.
#[derive(Clone, Debug)]
pub struct TailValue {
    pub value: Complex,
    pub remainder_bound: f64,
}

impl LaurentTail {
    pub fn new(coeffs: Vec<Complex>, radius: f64) -> Self {
        assert!(!coeffs.is_empty(), "a Laurent tail needs at least c_0");
        LaurentTail { coeffs, radius }
    }

    /// The constant `c` as a tail of order `order`.
    pub fn constant(c: Complex, order: usize) -> Self {
        let prec = c.prec();
        let mut coeffs = vec![Complex::new(prec); order + 1];
        coeffs[0] = c;
        LaurentTail { coeffs, radius: 0.0 }
    }

    /// Truncation order `K`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn coeffs(&self) -> &[Complex] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &Complex {
        &self.coeffs[k]
    }

    pub fn truncated(&self, order: usize) -> Self {
        LaurentTail {
            coeffs: self.coeffs[..=order.min(self.order())].to_vec(),
            radius: self.radius,
        }
    }

    /// Tail with `c_0` removed (the function minus its value at infinity).
    pub fn without_constant(&self) -> Self {
        let mut t = self.clone();
        let prec = t.coeffs[0].prec();
        t.coeffs[0] = Complex::new(prec);
        t
    }

    pub fn scaled(&self, s: &Complex) -> Self {
        LaurentTail {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| Complex::with_val(c.prec(), c * s))
                .collect(),
            radius: self.radius,
        }
    }

    pub fn add(&self, other: &LaurentTail) -> Self {
        let k = self.order().min(other.order());
        LaurentTail {
            coeffs: (0..=k)
                .map(|i| Complex::with_val(self.coeffs[i].prec(), &self.coeffs[i] + &other.coeffs[i]))
                .collect(),
            radius: self.radius.max(other.radius),
        }
    }

    /// Partial sum at `z` with the remainder bound
    /// `M (r/|z|)^(K+1) / (1 - r/|z|)`, where `M = max_k |c_k| r^(-k)` and
    /// `r` slightly exceeds the declared radius.
    pub fn eval(&self, z: &Complex) -> TailValue {
        let prec = self.coeffs[0].prec().0.max(z.prec().0);
        let w = Complex::with_val(prec, z.recip_ref());
        let mut acc = Complex::new(prec);
        for c in self.coeffs.iter().rev() {
            acc *= &w;
            acc += c;
        }
        let zabs = cabs(z).to_f64();
        let r = (self.radius * 1.01).max(1e-300);
        let bound = if zabs <= r {
            f64::INFINITY
        } else {
            let q = r / zabs;
            let logm = self
                .coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| log2_abs(c) - k as f64 * r.log2())
                .fold(f64::NEG_INFINITY, f64::max);
            let k1 = (self.order() + 1) as f64;
            (logm + k1 * q.log2()).exp2() / (1.0 - q)
        };
        TailValue {
            value: acc,
            remainder_bound: bound,
        }
    }
}

fn log2_abs(c: &Complex) -> f64 {
    let (m, e) = cabs(c).to_f64_exp();
    m.log2() + f64::from(e)
}

/// Cauchy product truncated at `min(K_a, K_b)`.
pub fn laurent_mul(a: &LaurentTail, b: &LaurentTail) -> LaurentTail {
    let k = a.order().min(b.order());
    let prec = a.coeffs[0].prec().0.max(b.coeffs[0].prec().0);
    let coeffs = (0..=k)
        .map(|n| {
            let mut s = Complex::new(prec);
            for i in 0..=n {
                s += &a.coeffs[i] * &b.coeffs[n - i];
            }
            s
        })
        .collect();
    LaurentTail {
        coeffs,
        radius: a.radius.max(b.radius),
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::PrecisionCtx;

    fn inv_sqrt_tail(ctx: &PrecisionCtx, k: usize) -> LaurentTail {
        // 1/sqrt(z^2-1) = sum C(2m,m) 4^-m z^(-2m-1)
        let mut c = vec![ctx.zero(); k + 1];
        let mut term = ctx.real(1);
        let mut m = 0u32;
        while (2 * m + 1) as usize <= k {
            c[(2 * m + 1) as usize] = Complex::with_val(ctx.bits(), &term);
            term *= 2 * m + 1;
            term /= 2 * m + 2;
            m += 1;
        }
        LaurentTail::new(c, 1.0)
    }

    #[test]
    fn inverse_z_squared() {
        let ctx = PrecisionCtx::new(128).unwrap();
        let mut c = vec![ctx.zero(); 6];
        c[1] = ctx.one();
        let a = LaurentTail::new(c, 0.0);
        let p = laurent_mul(&a, &a);
        for (k, ck) in p.coeffs().iter().enumerate() {
            let want = if k == 2 { 1.0 } else { 0.0 };
            assert_eq!(ck.real().to_f64(), want);
        }
    }

    #[test]
    fn squared_inverse_sqrt_is_geometric() {
        let ctx = PrecisionCtx::new(256).unwrap();
        let a = inv_sqrt_tail(&ctx, 30);
        let sq = laurent_mul(&a, &a);
        // 1/(z^2 - 1) = sum z^(-2k-2)
        for (k, ck) in sq.coeffs().iter().enumerate() {
            let want = if k >= 2 && k % 2 == 0 { 1.0 } else { 0.0 };
            assert!((ck.real().to_f64() - want).abs() < 1e-60, "k = {k}");
        }
    }

    #[test]
    fn unit_constant_is_identity() {
        let ctx = PrecisionCtx::new(128).unwrap();
        let a = inv_sqrt_tail(&ctx, 12);
        let one = LaurentTail::constant(ctx.one(), 12);
        let p = laurent_mul(&a, &one);
        for (x, y) in p.coeffs().iter().zip(a.coeffs()) {
            assert_eq!(x, y);
        }
    }

    #[test]
    fn remainder_bound_covers_truncation() {
        let ctx = PrecisionCtx::new(256).unwrap();
        let a = inv_sqrt_tail(&ctx, 20);
        let z = ctx.complex(4.0);
        let tv = a.eval(&z);
        let exact = 1.0 / (15.0f64).sqrt();
        let err = (tv.value.real().to_f64() - exact).abs();
        assert!(err <= tv.remainder_bound.max(1e-15));
        assert!(tv.remainder_bound < 1e-10);
    }
}
