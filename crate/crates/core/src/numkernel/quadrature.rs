use rayon::prelude::*;
use rug::{Complex, Float};

use super::precision::{cabs, PrecisionCtx};
use crate::error::{Error, Result};

/// Positively oriented circle `|z - center| = radius`.
#[derive(Clone, Debug)]
pub struct Circle {
    pub center: Complex,
    pub radius: Float,
}

impl Circle {
    pub fn new(center: Complex, radius: Float) -> Self {
        Circle { center, radius }
    }

    pub fn from_f64(center: (f64, f64), radius: f64, ctx: &PrecisionCtx) -> Self {
        Circle {
            center: ctx.complex(center),
            radius: ctx.real(radius),
        }
    }

    /// Distance from `z` to the circle.
    pub fn distance(&self, z: &Complex) -> Float {
        let d = cabs(&Complex::with_val(self.center.prec(), z - &self.center));
        (d - Float::with_val(64, &self.radius)).abs()
    }

    pub fn encloses(&self, z: &Complex) -> bool {
        cabs(&Complex::with_val(self.center.prec(), z - &self.center)) < self.radius
    }
}

/// Trapezoid nodes `center + radius e^{2 pi i j / n}`, `j = 0..n`.
pub fn circle_nodes(circle: &Circle, n: usize, ctx: &PrecisionCtx) -> Vec<Complex> {
    let prec = ctx.bits();
    let two_pi = Float::with_val(prec, ctx.pi() * 2u32);
    (0..n)
        .into_par_iter()
        .map(|j| {
            let theta = Float::with_val(prec, &two_pi * j as u32) / n as u32;
            let (s, c) = theta.sin_cos(Float::new(prec));
            let mut z = Complex::with_val(prec, (c, s));
            z *= &circle.radius;
            z += &circle.center;
            z
        })
        .collect()
}

/// Gauss–Chebyshev (first kind) nodes `cos((2j+1) pi / (2n))` together with
/// their angles.
pub fn chebyshev_nodes(n: usize, ctx: &PrecisionCtx) -> Vec<(Float, Float)> {
    let prec = ctx.bits();
    let pi = ctx.pi();
    (0..n)
        .into_par_iter()
        .map(|j| {
            let theta = Float::with_val(prec, &pi * (2 * j + 1) as u32) / (2 * n) as u32;
            let x = Float::with_val(prec, theta.cos_ref());
            (x, theta)
        })
        .collect()
}

/// Outcome of a contour quadrature.
#[derive(Clone, Debug)]
pub struct ContourOutcome {
    /// `(1 / 2 pi i) \oint g`, from the finest rule evaluated.
    pub value: Complex,
    pub nodes: usize,
    /// Change between the last two rules relative to `max |g(z)(z - c)|`.
    pub change: Float,
    /// `max |g(z)(z - c)|` over the finest rule; what `change` is relative to.
    pub scale: Float,
    pub converged: bool,
}

fn trapezoid<G>(g: &G, circle: &Circle, n: usize, ctx: &PrecisionCtx) -> Result<(Complex, Float)>
where
    G: Fn(&Complex) -> Result<Complex> + Sync,
{
    let nodes = circle_nodes(circle, n, ctx);
    let terms: Vec<Complex> = nodes
        .par_iter()
        .map(|z| {
            let mut v = g(z)?;
            v *= Complex::with_val(ctx.bits(), z - &circle.center);
            Ok(v)
        })
        .collect::<Result<_>>()?;
    let mut sum = Complex::new(ctx.bits());
    let mut scale = Float::with_val(64, 0);
    for t in &terms {
        sum += t;
        let a = cabs(t);
        if a > scale {
            scale = a;
        }
    }
    sum /= n as u32;
    Ok((sum, scale))
}

/// Trapezoid rule with `nodes` and `2 * nodes` points on `circle`; the
/// finer value is returned and `converged` records whether the two agree to
/// `tol` relative to the integrand scale.
pub fn contour_integrate<G>(
    g: G,
    circle: &Circle,
    nodes: usize,
    ctx: &PrecisionCtx,
) -> Result<ContourOutcome>
where
    G: Fn(&Complex) -> Result<Complex> + Sync,
{
    if !nodes.is_power_of_two() {
        return Err(Error::InvalidInput(format!(
            "node count {nodes} is not a power of two"
        )));
    }
    let (coarse, _) = trapezoid(&g, circle, nodes, ctx)?;
    let (fine, scale) = trapezoid(&g, circle, 2 * nodes, ctx)?;
    let change = relative_change(&coarse, &fine, &scale);
    let converged = change <= *ctx.tol();
    Ok(ContourOutcome {
        value: fine,
        nodes: 2 * nodes,
        change,
        scale,
        converged,
    })
}

/// Doubles the node count from `start` until two consecutive rules agree or
/// `max_nodes` is exceeded. Non-convergence is an error.
pub fn contour_integrate_adaptive<G>(
    g: G,
    circle: &Circle,
    start: usize,
    max_nodes: usize,
    ctx: &PrecisionCtx,
) -> Result<ContourOutcome>
where
    G: Fn(&Complex) -> Result<Complex> + Sync,
{
    let mut n = start.next_power_of_two();
    let (mut prev, _) = trapezoid(&g, circle, n, ctx)?;
    loop {
        n *= 2;
        let (cur, scale) = trapezoid(&g, circle, n, ctx)?;
        let change = relative_change(&prev, &cur, &scale);
        if change <= *ctx.tol() {
            return Ok(ContourOutcome {
                value: cur,
                nodes: n,
                change,
                scale,
                converged: true,
            });
        }
        if n >= max_nodes {
            return Err(Error::NonConvergence(format!(
                "contour quadrature still changing by {:.3e} at {n} nodes",
                change.to_f64()
            )));
        }
        prev = cur;
    }
}

fn relative_change(a: &Complex, b: &Complex, scale: &Float) -> Float {
    let d = cabs(&Complex::with_val(a.prec(), a - b));
    if scale.is_zero() {
        d
    } else {
        d / scale
    }
}
