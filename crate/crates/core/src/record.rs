//! Serializable form of approximants: coefficients as full-precision decimal
//! strings plus the precision they were computed at.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::numkernel::{decimal, parse_real, Basis, BigPolynomial, Complex, PrecisionMeta};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoeffRecord {
    pub re: String,
    pub im: String,
}

impl CoeffRecord {
    pub fn from_complex(c: &Complex) -> Self {
        CoeffRecord {
            re: decimal(c.real()),
            im: decimal(c.imag()),
        }
    }

    pub fn to_complex(&self, bits: u32) -> Result<Complex> {
        Ok(Complex::with_val(
            bits,
            (parse_real(&self.re, bits)?, parse_real(&self.im, bits)?),
        ))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyRecord {
    pub basis: Basis,
    /// `-1` for the zero polynomial.
    pub degree: i64,
    pub coeffs: Vec<CoeffRecord>,
}

impl From<&BigPolynomial> for PolyRecord {
    fn from(p: &BigPolynomial) -> Self {
        PolyRecord {
            basis: p.basis(),
            degree: if p.is_zero() { -1 } else { p.degree() as i64 },
            coeffs: p.coeffs().iter().map(CoeffRecord::from_complex).collect(),
        }
    }
}

impl PolyRecord {
    pub fn to_polynomial(&self, bits: u32) -> Result<BigPolynomial> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.to_complex(bits))
            .collect::<Result<_>>()?;
        Ok(BigPolynomial::from_coeffs(self.basis, coeffs))
    }
}

/// Polynomials of one approximant with their diagnostics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproximantRecord {
    pub kind: String,
    pub n: usize,
    pub polynomials: BTreeMap<String, PolyRecord>,
    pub defect_order: Option<usize>,
    pub degenerate: bool,
    pub nullity: usize,
    /// Relative residual of the defining linear system.
    pub residual: f64,
    pub precision: PrecisionMeta,
    #[serde(default)]
    pub metadata: BTreeMap<String, String>,
}
