use std::sync::OnceLock;

use rug::Float;

use super::spec::{FunctionSpec, Segment};
use crate::error::{Error, Result};
use crate::numkernel::{cabs, chebyshev_nodes, Complex, PrecisionCtx};

/// `sqrt(z - 1) sqrt(z + 1)`, the branch of `sqrt(z^2 - 1)` that behaves
/// like `z` at infinity and is holomorphic off `[-1, 1]`.
pub fn sqrt_z2m1(z: &Complex) -> Complex {
    let p = z.prec().0;
    let a = Complex::with_val(p, z - 1u32).sqrt();
    let b = Complex::with_val(p, z + 1u32).sqrt();
    a * b
}

/// Inverse Zhukovskii map `phi(z) = z + sqrt(z^2 - 1)`, `|phi| > 1` off `[-1, 1]`.
pub fn phi(z: &Complex) -> Complex {
    sqrt_z2m1(z) + z
}

/// `1 / phi(z) = z - sqrt(z^2 - 1)`, computed without cancellation.
pub fn inv_phi(z: &Complex) -> Complex {
    let d = phi(z);
    Complex::with_val(z.prec().0, d.recip_ref())
}

const LEVELS: usize = 14;
const BASE_NODES: usize = 16;

struct NikishinData {
    mid: Float,
    half: Float,
    /// `sigma^` at Gauss-Chebyshev nodes, one lazily filled table per level.
    levels: Vec<OnceLock<Vec<(Complex, Complex)>>>,
    rho_sigma: f64,
}

enum Kernel {
    Markov { c: Float, d: Float },
    Nikishin(Box<NikishinData>),
    ClassL {
        inv_a: Vec<Complex>,
        alpha: Vec<(i64, u64)>,
        at_infinity: Complex,
    },
    InvSqrt,
    Shifted { base: Box<BoundFunction>, constant: Complex },
    Pole { pole: Complex, residue: Complex },
}

/// A [`FunctionSpec`] with its parameters read at a fixed precision.
pub struct BoundFunction {
    spec: FunctionSpec,
    ctx: PrecisionCtx,
    kernel: Kernel,
}

impl FunctionSpec {
    pub fn bind(&self, ctx: &PrecisionCtx) -> Result<BoundFunction> {
        self.validate()?;
        let bits = ctx.bits();
        let kernel = match self {
            FunctionSpec::MarkovArcsine { c, d } => Kernel::Markov {
                c: c.value(ctx),
                d: d.value(ctx),
            },
            FunctionSpec::NikishinSecond { mu, sigma } => {
                let (a, b) = mu.bounds(ctx);
                let mid = Float::with_val(bits, &a + &b) / 2u32;
                let half = Float::with_val(bits, &b - &a) / 2u32;
                Kernel::Nikishin(Box::new(NikishinData {
                    mid,
                    half,
                    levels: (0..LEVELS).map(|_| OnceLock::new()).collect(),
                    rho_sigma: rho_of_segment(mu, sigma),
                }))
            }
            FunctionSpec::ClassL { a, alpha } => {
                let mut log_inf = Complex::new(bits);
                let mut inv_a = Vec::with_capacity(a.len());
                for (aj, al) in a.iter().zip(alpha) {
                    let aj = aj.value(ctx);
                    let l = Complex::with_val(bits, aj.ln_ref());
                    log_inf += l * al.num() / Float::with_val(bits, al.den());
                    inv_a.push(Complex::with_val(bits, aj.recip_ref()));
                }
                Kernel::ClassL {
                    inv_a,
                    alpha: alpha.iter().map(|r| (r.num(), r.den())).collect(),
                    at_infinity: log_inf.exp(),
                }
            }
            FunctionSpec::InvSqrt => Kernel::InvSqrt,
            FunctionSpec::Shifted { base, constant } => Kernel::Shifted {
                base: Box::new(base.bind(ctx)?),
                constant: constant.value(ctx),
            },
            FunctionSpec::SimplePole { pole, residue } => Kernel::Pole {
                pole: pole.value(ctx),
                residue: residue.value(ctx),
            },
        };
        Ok(BoundFunction {
            spec: self.clone(),
            ctx: ctx.clone(),
            kernel,
        })
    }
}

/// Bernstein-ellipse parameter of the nearest `sigma` endpoint seen from `mu`.
fn rho_of_segment(mu: &Segment, sigma: &Segment) -> f64 {
    let (a, b) = mu.to_f64();
    let (c, d) = sigma.to_f64();
    let (m, h) = ((a + b) / 2.0, (b - a) / 2.0);
    [c, d]
        .iter()
        .map(|&e| {
            let t = ((e - m) / h).abs();
            t + (t * t - 1.0).max(0.0).sqrt()
        })
        .fold(f64::INFINITY, f64::min)
}

fn rho_of_point(z: (f64, f64), mid: f64, half: f64) -> f64 {
    bernstein_rho((z.0 - mid) / half, z.1 / half).max(1.0 + 1e-12)
}

/// `|phi(x + iy)|` in double precision.
fn bernstein_rho(x: f64, y: f64) -> f64 {
    let s = ((x - 1.0).hypot(y) + (x + 1.0).hypot(y)) / 2.0;
    s + (s * s - 1.0).max(0.0).sqrt()
}

fn on_segment(z: &Complex, lo: &Float, hi: &Float, tol: &Float) -> bool {
    let (x, y) = (z.real(), z.imag());
    let scale = Float::with_val(64, lo.abs_ref()).max(&Float::with_val(64, hi.abs_ref())) + 1u32;
    let slack = Float::with_val(64, tol * &scale);
    Float::with_val(64, y.abs_ref()) <= slack
        && *x >= Float::with_val(64, lo - &slack)
        && *x <= Float::with_val(64, hi + &slack)
}

impl BoundFunction {
    pub fn spec(&self) -> &FunctionSpec {
        &self.spec
    }

    pub fn ctx(&self) -> &PrecisionCtx {
        &self.ctx
    }

    pub fn value_at_infinity(&self) -> Complex {
        match &self.kernel {
            Kernel::ClassL { at_infinity, .. } => at_infinity.clone(),
            Kernel::Shifted { base, constant } => {
                Complex::with_val(self.ctx.bits(), base.value_at_infinity() + constant)
            }
            _ => self.ctx.zero(),
        }
    }

    pub fn eval(&self, z: &Complex) -> Result<Complex> {
        let bits = self.ctx.bits();
        let z = Complex::with_val(bits, z);
        let tol = self.ctx.tol();
        let unit = (Float::with_val(bits, -1), Float::with_val(bits, 1));
        match &self.kernel {
            Kernel::Markov { c, d } => {
                if on_segment(&z, c, d, tol) {
                    return Err(cut_error(&z, "Markov cut"));
                }
                let a = Complex::with_val(bits, &z - c).sqrt();
                let b = Complex::with_val(bits, &z - d).sqrt();
                let p = a * b;
                Ok(Complex::with_val(bits, p.recip_ref()))
            }
            Kernel::InvSqrt => {
                if on_segment(&z, &unit.0, &unit.1, tol) {
                    return Err(cut_error(&z, "[-1, 1]"));
                }
                let s = sqrt_z2m1(&z);
                Ok(Complex::with_val(bits, s.recip_ref()))
            }
            Kernel::ClassL { .. } => {
                if on_segment(&z, &unit.0, &unit.1, tol) {
                    return Err(cut_error(&z, "[-1, 1]"));
                }
                self.eval_in_w(&inv_phi(&z))
            }
            Kernel::Nikishin(data) => self.eval_nikishin(data, &z),
            Kernel::Shifted { base, constant } => Ok(base.eval(&z)? + constant),
            Kernel::Pole { pole, residue } => {
                let d = Complex::with_val(bits, &z - pole);
                if cabs(&d) <= *tol {
                    return Err(cut_error(&z, "pole"));
                }
                Ok(Complex::with_val(bits, residue / d))
            }
        }
    }

    /// For class (L) specs, the product `prod (A_j - w)^{alpha_j}` as a
    /// function of `w = 1/phi(z)`, valid for `|w| <= 1`.
    pub fn eval_in_w(&self, w: &Complex) -> Result<Complex> {
        let Kernel::ClassL {
            inv_a,
            alpha,
            at_infinity,
        } = &self.kernel
        else {
            return Err(Error::InvalidInput(format!(
                "{} is not a class (L) function",
                self.spec.label()
            )));
        };
        let bits = self.ctx.bits();
        let mut expo = Complex::new(bits);
        for (ia, &(p, q)) in inv_a.iter().zip(alpha) {
            let t = -Complex::with_val(bits, w * ia) + 1u32;
            expo += t.ln() * p / Float::with_val(bits, q);
        }
        Ok(expo.exp() * at_infinity)
    }

    pub fn eval_f64(&self, re: f64, im: f64) -> Result<Complex> {
        self.eval(&Complex::with_val(self.ctx.bits(), (re, im)))
    }

    fn level<'a>(&self, data: &'a NikishinData, l: usize) -> Result<&'a [(Complex, Complex)]> {
        let FunctionSpec::NikishinSecond { sigma, .. } = &self.spec else {
            unreachable!("Nikishin kernel without Nikishin spec")
        };
        Ok(data.levels[l].get_or_init(|| {
            let bits = self.ctx.bits();
            let (c, d) = sigma.bounds(&self.ctx);
            chebyshev_nodes(BASE_NODES << l, &self.ctx)
                .into_iter()
                .map(|(t, _)| {
                    let x = Complex::with_val(bits, Float::with_val(bits, &t * &data.half) + &data.mid);
                    let a = Complex::with_val(bits, &x - &c).sqrt();
                    let b = Complex::with_val(bits, &x - &d).sqrt();
                    let s = a * b;
                    (x, Complex::with_val(bits, s.recip_ref()))
                })
                .collect()
        }))
    }

    fn eval_nikishin(&self, data: &NikishinData, z: &Complex) -> Result<Complex> {
        let bits = self.ctx.bits();
        let (lo, hi) = (
            Float::with_val(bits, &data.mid - &data.half),
            Float::with_val(bits, &data.mid + &data.half),
        );
        if on_segment(z, &lo, &hi, self.ctx.tol()) {
            return Err(cut_error(z, "Nikishin support"));
        }
        let zf = (z.real().to_f64(), z.imag().to_f64());
        let rho = rho_of_point(zf, data.mid.to_f64(), data.half.to_f64()).min(data.rho_sigma);
        let need = f64::from(bits) * std::f64::consts::LN_2 / (2.0 * rho.ln());
        let mut l = 0;
        while l + 1 < LEVELS && ((BASE_NODES << l) as f64) < need {
            l += 1;
        }
        let sum = |l: usize| -> Result<Complex> {
            let nodes = self.level(data, l)?;
            let mut s = Complex::new(bits);
            for (x, g) in nodes {
                let d = Complex::with_val(bits, z - x);
                s += Complex::with_val(bits, g / d);
            }
            Ok(s / nodes.len() as u32)
        };
        let mut prev = sum(l)?;
        while l + 1 < LEVELS {
            l += 1;
            let cur = sum(l)?;
            let diff = cabs(&Complex::with_val(bits, &cur - &prev));
            if diff <= Float::with_val(64, self.ctx.tol() * cabs(&cur)) {
                return Ok(cur);
            }
            prev = cur;
        }
        Err(Error::NonConvergence(format!(
            "Nikishin quadrature at z = ({}, {}) did not settle",
            zf.0, zf.1
        )))
    }
}

fn cut_error(z: &Complex, what: &str) -> Error {
    Error::Domain(format!(
        "z = ({:.6e}, {:.6e}) lies on the {what}",
        z.real().to_f64(),
        z.imag().to_f64()
    ))
}

/// Evaluates the branch of `spec` fixed by the crate's conventions.
pub fn evaluate(spec: &FunctionSpec, z: &Complex, ctx: &PrecisionCtx) -> Result<Complex> {
    spec.bind(ctx)?.eval(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::spec::{ComplexParam, Ratio};

    fn ctx() -> PrecisionCtx {
        PrecisionCtx::new(256).unwrap()
    }

    fn close(a: &Complex, re: f64, im: f64, eps: f64) -> bool {
        (a.real().to_f64() - re).abs() < eps && (a.imag().to_f64() - im).abs() < eps
    }

    #[test]
    fn markov_at_four() {
        let ctx = ctx();
        let f = FunctionSpec::markov_arcsine(2, 3).unwrap().bind(&ctx).unwrap();
        let v = f.eval_f64(4.0, 0.0).unwrap();
        assert!(close(&v, 0.5f64.sqrt(), 0.0, 1e-15));
        // left of the cut the transform of a positive measure is negative
        let v = f.eval_f64(0.0, 0.0).unwrap();
        assert!(close(&v, -1.0 / 6f64.sqrt(), 0.0, 1e-15));
        assert!(f.eval_f64(2.5, 0.0).is_err());
    }

    #[test]
    fn inv_sqrt_at_two() {
        let ctx = ctx();
        let v = evaluate(&FunctionSpec::InvSqrt, &ctx.complex(2), &ctx).unwrap();
        assert!(close(&v, 1.0 / 3f64.sqrt(), 0.0, 1e-15));
        let v = evaluate(&FunctionSpec::InvSqrt, &ctx.complex(-2), &ctx).unwrap();
        assert!(close(&v, -1.0 / 3f64.sqrt(), 0.0, 1e-15));
        assert!(evaluate(&FunctionSpec::InvSqrt, &ctx.complex(0.5), &ctx).is_err());
    }

    #[test]
    fn zhukovskii_branch() {
        let ctx = ctx();
        for &(x, y) in &[(0.3, 0.01), (-0.3, -0.01), (5.0, 0.0), (-2.0, 3.0), (0.0, -1e-3)] {
            let z = ctx.complex((x, y));
            let p = phi(&z);
            assert!(Float::with_val(64, p.abs_ref()) > 1);
            let one = p * (Complex::with_val(256, &z - sqrt_z2m1(&z)));
            assert!(close(&one, 1.0, 0.0, 1e-60));
        }
    }

    #[test]
    fn class_l_limit_at_infinity() {
        let ctx = ctx();
        let spec = FunctionSpec::class_l(
            vec![ComplexParam::real(2), ComplexParam::real(-2)],
            vec![Ratio::integer(1), Ratio::integer(-1)],
        )
        .unwrap();
        let f = spec.bind(&ctx).unwrap();
        assert!(close(&f.value_at_infinity(), -1.0, 0.0, 1e-60));
        let v = f.eval_f64(1e6, 0.0).unwrap();
        // 1/phi(z) ~ 1/(2z); f(w) = (2 - w)/(-2 - w) = -1 + w + O(w^2)
        assert!(close(&v, -1.0 + 0.5e-6, 0.0, 1e-12));
    }

    #[test]
    fn class_l_integer_exponents_are_rational() {
        let ctx = ctx();
        let spec = FunctionSpec::class_l(
            vec![ComplexParam::real(3), ComplexParam::new(0, 2)],
            vec![Ratio::integer(2), Ratio::integer(-2)],
        )
        .unwrap();
        let f = spec.bind(&ctx).unwrap();
        let z = ctx.complex((0.4, 0.9));
        let w = inv_phi(&z);
        let num = Complex::with_val(256, 3 - &w).square();
        let den = Complex::with_val(256, Complex::with_val(256, (0, 2)) - &w).square();
        let want = num / den;
        let got = f.eval(&z).unwrap();
        assert!(cabs(&(got - want)).to_f64() < 1e-60);
    }

    #[test]
    fn nikishin_matches_moment_series_far_away() {
        let ctx = ctx();
        let spec = FunctionSpec::nikishin(Segment::unit(), Segment::new(2, 3).unwrap()).unwrap();
        let f = spec.bind(&ctx).unwrap();
        let z = ctx.complex(50);
        // leading moments from an f64 Gauss-Chebyshev sum
        let v = f.eval(&z).unwrap();
        let markov = FunctionSpec::markov_arcsine(2, 3).unwrap().bind(&ctx).unwrap();
        let n = 4000;
        let mut m = [0.0f64; 6];
        for j in 0..n {
            let x = ((2 * j + 1) as f64 * std::f64::consts::PI / (2 * n) as f64).cos();
            let s = markov.eval_f64(x, 0.0).unwrap().real().to_f64();
            for (k, mk) in m.iter_mut().enumerate() {
                *mk += s * x.powi(k as i32) / n as f64;
            }
        }
        let approx: f64 = m.iter().enumerate().map(|(k, mk)| mk / 50f64.powi(k as i32 + 1)).sum();
        assert!((v.real().to_f64() - approx).abs() < 1e-8);
    }

    #[test]
    fn conjugate_symmetry() {
        let ctx = ctx();
        let spec = FunctionSpec::figure_class_l(
            "1.5".parse::<f64>().unwrap().into(),
            0.2.into(),
            1.2.into(),
        )
        .unwrap();
        let f = spec.bind(&ctx).unwrap();
        let z = ctx.complex((0.7, 0.4));
        let a = f.eval(&z).unwrap();
        let b = f.eval(&Complex::with_val(256, z.conj_ref())).unwrap();
        assert!(cabs(&(a.conj() - b)).to_f64() < 1e-60);
    }
}
