//! Polynomial roots, zeros of real functions on a segment, and the
//! discrete measures and metrics used to compare zero distributions.

mod aberth;
mod measure;
mod segment;

pub use aberth::{find_roots, find_roots_partial, AberthOutcome};
pub use measure::{potential_discrepancy, probe_circle, trimmed_hausdorff, DiscreteMeasure};
pub use segment::{zeros_on_segment, SegmentZeros};

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::{decimal, parse_real, Complex};

/// Zeros of one polynomial with their provenance label.
#[derive(Clone, Debug)]
pub struct ZeroSet {
    pub points: Vec<Complex>,
    pub source: String,
    /// Order of the approximant the polynomial belongs to.
    pub n: usize,
    /// Largest backward residual `|p(z)| / sum |a_k| |z|^k`.
    pub residual: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct CsvRow {
    re: String,
    im: String,
    source: String,
    n: usize,
}

impl ZeroSet {
    pub fn new(points: Vec<Complex>, source: &str, n: usize) -> Self {
        ZeroSet {
            points,
            source: source.to_string(),
            n,
            residual: 0.0,
        }
    }

    /// Sorts by real part, then imaginary part.
    pub fn sort(&mut self) {
        self.points.sort_by(|a, b| {
            a.real()
                .partial_cmp(b.real())
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.imag().partial_cmp(b.imag()).unwrap_or(std::cmp::Ordering::Equal))
        });
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn to_f64(&self) -> Vec<(f64, f64)> {
        self.points
            .iter()
            .map(|z| (z.real().to_f64(), z.imag().to_f64()))
            .collect()
    }

    /// Largest distance from a point to the nearest conjugate of a point.
    pub fn conjugate_pairing_error(&self) -> f64 {
        let pts = self.to_f64();
        pts.iter()
            .map(|&(x, y)| {
                pts.iter()
                    .map(|&(u, v)| (x - u).hypot(y + v))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    }

    /// Counting measure with `weight` per zero.
    pub fn counting_measure(&self, weight: f64) -> DiscreteMeasure {
        let pts = self.to_f64();
        let mass = weight * pts.len() as f64;
        DiscreteMeasure::new(pts.clone(), vec![weight; pts.len()], mass)
            .expect("equal nonnegative weights")
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        if self.points.is_empty() {
            wr.write_record(["re", "im", "source", "n"]).map_err(csv_err)?;
        }
        for z in &self.points {
            wr.serialize(CsvRow {
                re: decimal(z.real()),
                im: decimal(z.imag()),
                source: self.source.clone(),
                n: self.n,
            })
            .map_err(csv_err)?;
        }
        wr.flush().map_err(|e| Error::InvalidInput(e.to_string()))?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii csv")
    }

    /// Reads a single-source CSV written by [`ZeroSet::write_csv`].
    pub fn read_csv<R: Read>(r: R, bits: u32) -> Result<Self> {
        let mut rd = csv::Reader::from_reader(r);
        let mut points = Vec::new();
        let mut source = String::new();
        let mut n = 0;
        for row in rd.deserialize() {
            let row: CsvRow = row.map_err(csv_err)?;
            points.push(Complex::with_val(
                bits,
                (parse_real(&row.re, bits)?, parse_real(&row.im, bits)?),
            ));
            source = row.source;
            n = row.n;
        }
        Ok(ZeroSet::new(points, &source, n))
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::InvalidInput(format!("CSV: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::{Basis, BigPolynomial, PrecisionCtx};

    #[test]
    fn chebyshev_t3_roots() {
        let ctx = PrecisionCtx::new(256).unwrap();
        let p = BigPolynomial::from_f64(Basis::Monomial, &[0.0, -3.0, 0.0, 4.0], &ctx);
        let z = find_roots(&p, "t3", &ctx).unwrap();
        let h = 3f64.sqrt() / 2.0;
        let want = [-h, 0.0, h];
        for (zi, w) in z.to_f64().iter().zip(want) {
            assert!((zi.0 - w).abs() < 1e-15 && zi.1.abs() < 1e-15);
        }
        assert!(z.residual < ctx.tol_f64());
    }

    #[test]
    fn chebyshev_t20_roots_from_chebyshev_basis() {
        let ctx = PrecisionCtx::new(256).unwrap();
        let z = find_roots(&BigPolynomial::chebyshev_t(20, &ctx), "t20", &ctx).unwrap();
        assert_eq!(z.len(), 20);
        let mut want: Vec<f64> = (1..=20)
            .map(|k| ((2 * k - 1) as f64 * std::f64::consts::PI / 40.0).cos())
            .collect();
        want.sort_by(f64::total_cmp);
        for (zi, w) in z.to_f64().iter().zip(want) {
            assert!((zi.0 - w).abs() < 1e-14 && zi.1.abs() < 1e-14);
        }
    }

    #[test]
    fn csv_round_trip() {
        let ctx = PrecisionCtx::new(200).unwrap();
        let third = ctx.complex(1) / ctx.complex(3);
        let zs = ZeroSet::new(vec![third.clone(), Complex::with_val(200, (0.5, -1.25))], "Q2", 7);
        let txt = zs.to_csv_string();
        assert!(txt.starts_with("re,im,source,n\n"));
        let back = ZeroSet::read_csv(txt.as_bytes(), 200).unwrap();
        assert_eq!(back.points, zs.points);
        assert_eq!((back.source.as_str(), back.n), ("Q2", 7));
    }

    #[test]
    fn empty_set_still_has_header() {
        let zs = ZeroSet::new(Vec::new(), "none", 0);
        assert_eq!(zs.to_csv_string(), "re,im,source,n\n");
    }
}
