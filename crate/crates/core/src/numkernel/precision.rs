use rug::float::Constant;
use rug::ops::Pow;
use rug::{Assign, Complex, Float};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Binary precision policy shared by every scalar of a computation.
///
/// `tol` is the acceptance threshold used for rank decisions, trimming and
/// quadrature convergence. It defaults to `2^(-bits/2)`.
#[derive(Clone, Debug)]
pub struct PrecisionCtx {
    bits: u32,
    tol: Float,
}

/// Serializable echo of a [`PrecisionCtx`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrecisionMeta {
    pub bits: u32,
    /// `log2(tol)`, rounded to three decimals.
    pub tol_log2: f64,
}

impl PrecisionCtx {
    pub const MIN_BITS: u32 = 64;

    pub fn new(bits: u32) -> Result<Self> {
        if bits < Self::MIN_BITS {
            return Err(Error::Precision(format!(
                "bits = {bits} is below the minimum of {}",
                Self::MIN_BITS
            )));
        }
        let tol = Float::with_val(64, 2).pow(-(i64::from(bits) / 2));
        Ok(PrecisionCtx { bits, tol })
    }

    pub fn with_tol(bits: u32, tol: Float) -> Result<Self> {
        let mut ctx = Self::new(bits)?;
        if !(tol.is_finite() && tol > 0) {
            return Err(Error::Precision("tol must be positive and finite".into()));
        }
        let floor = Float::with_val(64, 2).pow(-(i64::from(bits) - 8));
        if tol < floor {
            return Err(Error::Precision(format!(
                "tol below 2^(-bits+8) for bits = {bits}"
            )));
        }
        ctx.tol = Float::with_val(64, tol);
        Ok(ctx)
    }

    /// Default precision for an approximation of order `n`: `max(256, 24 n)`.
    pub fn for_order(n: usize) -> Self {
        Self::new(256.max(24 * n as u32)).expect("bits >= 256")
    }

    /// Hermite–Padé systems lose roughly a constant number of bits per order:
    /// `max(256, 32 n)`.
    pub fn for_hermite(n: usize) -> Self {
        Self::new(256.max(32 * n as u32)).expect("bits >= 256")
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn tol(&self) -> &Float {
        &self.tol
    }

    pub fn tol_f64(&self) -> f64 {
        self.tol.to_f64()
    }

    /// Same relative tolerance policy at `bits + extra`.
    pub fn widened(&self, extra: u32) -> Self {
        Self::new(self.bits + extra).expect("widening keeps bits valid")
    }

    pub fn meta(&self) -> PrecisionMeta {
        let (m, e) = self.tol.to_f64_exp();
        let l = f64::from(e) + m.abs().log2();
        PrecisionMeta {
            bits: self.bits,
            tol_log2: (l * 1000.0).round() / 1000.0,
        }
    }

    pub fn real<T>(&self, v: T) -> Float
    where
        Float: Assign<T>,
    {
        Float::with_val(self.bits, v)
    }

    pub fn complex<T>(&self, v: T) -> Complex
    where
        Complex: Assign<T>,
    {
        Complex::with_val(self.bits, v)
    }

    pub fn zero(&self) -> Complex {
        Complex::new(self.bits)
    }

    pub fn one(&self) -> Complex {
        Complex::with_val(self.bits, 1)
    }

    pub fn pi(&self) -> Float {
        Float::with_val(self.bits, Constant::Pi)
    }

    /// Unit roundoff `2^(-bits)`.
    pub fn eps(&self) -> Float {
        Float::with_val(64, 2).pow(-i64::from(self.bits))
    }

    /// Parses a decimal literal at this precision.
    pub fn parse(&self, s: &str) -> Result<Float> {
        parse_real(s, self.bits)
    }
}

pub fn parse_real(s: &str, bits: u32) -> Result<Float> {
    let p = Float::parse(s.trim())
        .map_err(|e| Error::InvalidInput(format!("cannot parse `{s}` as a number: {e}")))?;
    Ok(Float::with_val(bits, p))
}

/// Modulus at 64-bit working precision; keeps the full exponent range.
pub fn cabs(c: &Complex) -> Float {
    Float::with_val(64, c.abs_ref())
}

/// Squared modulus at 32 bits, used for cheap comparisons.
pub fn cmag2(c: &Complex) -> Float {
    Float::with_val(32, c.norm_ref())
}

/// Decimal string carrying every significant digit of `f`.
pub fn decimal(f: &Float) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    let digits = (f64::from(f.prec()) * std::f64::consts::LOG10_2).ceil() as usize + 1;
    f.to_string_radix(10, Some(digits))
}
