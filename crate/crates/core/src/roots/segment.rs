use rug::Float;

use crate::error::{Error, Result};
use crate::numkernel::PrecisionCtx;

/// Sign-change zeros of a real function on `[lo, hi]`.
#[derive(Clone, Debug)]
pub struct SegmentZeros {
    pub zeros: Vec<Float>,
    pub grid: usize,
    /// Set when the count differs from the expected one; suggests a finer grid.
    pub warning: Option<String>,
}

/// Brackets sign changes on a Chebyshev-spaced grid of `budget` interior
/// points and bisects each bracket to `tol`.
pub fn zeros_on_segment<R>(
    r: R,
    lo: &Float,
    hi: &Float,
    budget: usize,
    expected: Option<usize>,
    ctx: &PrecisionCtx,
) -> Result<SegmentZeros>
where
    R: Fn(&Float) -> Result<Float>,
{
    if budget < 2 {
        return Err(Error::InvalidInput("grid needs at least two points".into()));
    }
    if lo >= hi {
        return Err(Error::InvalidInput("empty segment".into()));
    }
    let bits = ctx.bits();
    let mid = Float::with_val(bits, lo + hi) / 2u32;
    let half = Float::with_val(bits, hi - lo) / 2u32;
    let pi = ctx.pi();
    let grid: Vec<Float> = (0..budget)
        .map(|i| {
            let t = Float::with_val(bits, &pi * (2 * i + 1) as u32) / (2 * budget) as u32;
            Float::with_val(bits, &mid - Float::with_val(bits, t.cos() * &half))
        })
        .collect();
    let values = grid.iter().map(&r).collect::<Result<Vec<_>>>()?;
    let mut zeros = Vec::new();
    for i in 0..budget {
        if values[i].is_zero() {
            zeros.push(grid[i].clone());
            continue;
        }
        if i + 1 < budget && !values[i + 1].is_zero() && values[i].is_sign_negative() != values[i + 1].is_sign_negative() {
            zeros.push(bisect(&r, &grid[i], &grid[i + 1], &values[i], ctx)?);
        }
    }
    let warning = match expected {
        Some(e) if e != zeros.len() => {
            let msg = format!(
                "found {} zeros, expected {e}; retry with a grid of {}",
                zeros.len(),
                2 * budget
            );
            log::warn!("{msg}");
            Some(msg)
        }
        _ => None,
    };
    Ok(SegmentZeros {
        zeros,
        grid: budget,
        warning,
    })
}

fn bisect<R>(r: &R, a: &Float, b: &Float, fa: &Float, ctx: &PrecisionCtx) -> Result<Float>
where
    R: Fn(&Float) -> Result<Float>,
{
    let bits = ctx.bits();
    let (mut a, mut b) = (a.clone(), b.clone());
    let neg_a = fa.is_sign_negative();
    for _ in 0..2 * bits {
        let width = Float::with_val(64, &b - &a);
        let scale = Float::with_val(64, a.abs_ref()).max(&Float::with_val(64, b.abs_ref())) + 1u32;
        if width <= Float::with_val(64, ctx.tol() * &scale) {
            break;
        }
        let m = Float::with_val(bits, &a + &b) / 2u32;
        let fm = r(&m)?;
        if fm.is_zero() {
            return Ok(m);
        }
        if fm.is_sign_negative() == neg_a {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(Float::with_val(bits, &a + &b) / 2u32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t5_has_five_zeros() {
        let ctx = PrecisionCtx::new(128).unwrap();
        let one = Float::with_val(128, 1);
        let t5 = |x: &Float| Ok(Float::with_val(128, x.acos_ref()) * 5u32).map(|t| t.cos());
        let z = zeros_on_segment(t5, &(-one.clone()), &one, 64, Some(5), &ctx).unwrap();
        assert_eq!(z.zeros.len(), 5);
        assert!(z.warning.is_none());
        let want = (std::f64::consts::PI / 10.0).cos();
        assert!((z.zeros[4].to_f64() - want).abs() < 1e-30);
    }

    #[test]
    fn no_sign_change_no_zeros() {
        let ctx = PrecisionCtx::new(128).unwrap();
        let one = Float::with_val(128, 1);
        let f = |x: &Float| Ok(Float::with_val(128, x.square_ref()) + 1u32);
        let z = zeros_on_segment(f, &(-one.clone()), &one, 32, Some(1), &ctx).unwrap();
        assert!(z.zeros.is_empty());
        assert!(z.warning.is_some());
    }
}
