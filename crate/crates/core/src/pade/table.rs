use rug::Float;

use crate::error::{Error, Result};
use crate::numkernel::{cabs, Complex, PrecisionCtx};

/// Interpolation nodes for a multipoint Padé problem: distinct finite points
/// plus a multiplicity at infinity.
#[derive(Clone, Debug)]
pub struct InterpolationTable {
    nodes: Vec<Complex>,
    at_infinity: usize,
}

impl InterpolationTable {
    pub fn new(nodes: Vec<Complex>, at_infinity: usize, ctx: &PrecisionCtx) -> Result<Self> {
        let scale = nodes
            .iter()
            .map(cabs)
            .fold(Float::with_val(64, 1), |a, b| a.max(&b));
        let slack = Float::with_val(64, ctx.tol() * &scale);
        for (i, a) in nodes.iter().enumerate() {
            for b in &nodes[..i] {
                if cabs(&Complex::with_val(ctx.bits(), a - b)) <= slack {
                    return Err(Error::InvalidInput(format!(
                        "confluent nodes near ({:.6e}, {:.6e})",
                        a.real().to_f64(),
                        a.imag().to_f64()
                    )));
                }
            }
        }
        let nodes = nodes
            .into_iter()
            .map(|z| Complex::with_val(ctx.bits(), z))
            .collect();
        Ok(InterpolationTable { nodes, at_infinity })
    }

    /// All `count` conditions at infinity.
    pub fn infinity(count: usize) -> Self {
        InterpolationTable {
            nodes: Vec::new(),
            at_infinity: count,
        }
    }

    /// `count` equispaced nodes `center + radius e^{2 pi i (j + offset) / count}`.
    pub fn circle(
        center: (f64, f64),
        radius: f64,
        count: usize,
        offset: f64,
        ctx: &PrecisionCtx,
    ) -> Result<Self> {
        let bits = ctx.bits();
        let two_pi = ctx.pi() * 2u32;
        let c = ctx.complex(center);
        let nodes = (0..count)
            .map(|j| {
                let t = Float::with_val(bits, &two_pi * (Float::with_val(bits, j) + offset)) / count as u32;
                let (s, co) = t.sin_cos(Float::new(bits));
                Complex::with_val(bits, (co, s)) * radius + &c
            })
            .collect();
        InterpolationTable::new(nodes, 0, ctx)
    }

    pub fn with_infinity(mut self, count: usize) -> Self {
        self.at_infinity = count;
        self
    }

    pub fn finite(&self) -> &[Complex] {
        &self.nodes
    }

    pub fn at_infinity(&self) -> usize {
        self.at_infinity
    }

    pub fn total(&self) -> usize {
        self.nodes.len() + self.at_infinity
    }

    /// Monic node polynomial over the finite nodes.
    pub fn omega(&self, z: &Complex) -> Complex {
        let mut w = Complex::with_val(z.prec().0, 1);
        for t in &self.nodes {
            w *= Complex::with_val(z.prec().0, z - t);
        }
        w
    }
}
