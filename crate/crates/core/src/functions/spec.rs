use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::{parse_real, Complex, Float, PrecisionCtx};

/// Real parameter kept as its decimal literal so it can be read at any
/// precision without first passing through `f64`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "DecimalRepr", into = "String")]
pub struct Decimal(String);

#[derive(Deserialize)]
#[serde(untagged)]
enum DecimalRepr {
    Text(String),
    Int(i64),
    Real(f64),
}

impl TryFrom<DecimalRepr> for Decimal {
    type Error = Error;

    fn try_from(r: DecimalRepr) -> Result<Self> {
        match r {
            DecimalRepr::Text(s) => Decimal::new(&s),
            DecimalRepr::Int(i) => Ok(Decimal::from(i)),
            DecimalRepr::Real(x) => Ok(Decimal::from(x)),
        }
    }
}

impl From<Decimal> for String {
    fn from(d: Decimal) -> String {
        d.0
    }
}

impl Decimal {
    pub fn new(s: &str) -> Result<Self> {
        let v = parse_real(s, 64)?;
        if !v.is_finite() {
            return Err(Error::InvalidInput(format!("`{s}` is not finite")));
        }
        Ok(Decimal(s.trim().to_string()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn value(&self, ctx: &PrecisionCtx) -> Float {
        parse_real(&self.0, ctx.bits()).expect("validated at construction")
    }

    pub fn to_f64(&self) -> f64 {
        parse_real(&self.0, 64).expect("validated").to_f64()
    }
}

impl From<i64> for Decimal {
    fn from(i: i64) -> Self {
        Decimal(i.to_string())
    }
}

impl From<i32> for Decimal {
    fn from(i: i32) -> Self {
        Decimal(i.to_string())
    }
}

impl From<f64> for Decimal {
    /// Shortest round-trip literal, so `0.2` becomes the decimal one fifth.
    fn from(x: f64) -> Self {
        assert!(x.is_finite(), "non-finite parameter");
        Decimal(format!("{x}"))
    }
}

impl fmt::Display for Decimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexParam {
    pub re: Decimal,
    #[serde(default = "zero_decimal")]
    pub im: Decimal,
}

fn zero_decimal() -> Decimal {
    Decimal::from(0)
}

impl ComplexParam {
    pub fn new(re: impl Into<Decimal>, im: impl Into<Decimal>) -> Self {
        ComplexParam {
            re: re.into(),
            im: im.into(),
        }
    }

    pub fn real(re: impl Into<Decimal>) -> Self {
        ComplexParam::new(re, 0)
    }

    pub fn value(&self, ctx: &PrecisionCtx) -> Complex {
        Complex::with_val(ctx.bits(), (self.re.value(ctx), self.im.value(ctx)))
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    pub fn conj(&self) -> Self {
        let im = self.im.as_str();
        let flipped = match im.strip_prefix('-') {
            Some(rest) => rest.to_string(),
            None => format!("-{im}"),
        };
        ComplexParam {
            re: self.re.clone(),
            im: Decimal::new(&flipped).expect("negated literal"),
        }
    }
}

/// Exact rational exponent `num / den`, serialized as `"num/den"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Ratio {
    num: i64,
    den: u64,
}

impl Ratio {
    pub fn new(num: i64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidInput("zero denominator in exponent".into()));
        }
        let g = gcd(num.unsigned_abs(), den).max(1);
        Ok(Ratio {
            num: num / g as i64,
            den: den / g,
        })
    }

    pub fn integer(num: i64) -> Self {
        Ratio { num, den: 1 }
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn neg(&self) -> Self {
        Ratio {
            num: -self.num,
            den: self.den,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn value(&self, ctx: &PrecisionCtx) -> Float {
        Float::with_val(ctx.bits(), self.num) / Float::with_val(ctx.bits(), self.den)
    }
}

/// Exact sum of exponents; `None` on overflow.
pub fn ratio_sum(rs: &[Ratio]) -> Option<(i128, u128)> {
    let mut num: i128 = 0;
    let mut den: u128 = 1;
    for r in rs {
        let rd = u128::from(r.den);
        let g = gcd128(den, rd);
        let l = den.checked_mul(rd / g)?;
        num = num
            .checked_mul((l / den) as i128)?
            .checked_add(i128::from(r.num).checked_mul((l / rd) as i128)?)?;
        den = l;
        let g = gcd128(num.unsigned_abs(), den).max(1);
        num /= g as i128;
        den /= g;
    }
    Some((num, den))
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn gcd128(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd128(b, a % b)
    }
}

impl TryFrom<String> for Ratio {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl std::str::FromStr for Ratio {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("`{s}` is not a rational `p/q`"));
        let s = s.trim();
        match s.split_once('/') {
            Some((p, q)) => {
                let p: i64 = p.trim().parse().map_err(|_| bad())?;
                let q: u64 = q.trim().parse().map_err(|_| bad())?;
                Ratio::new(p, q)
            }
            None => Ok(Ratio::integer(s.parse().map_err(|_| bad())?)),
        }
    }
}

impl From<Ratio> for String {
    fn from(r: Ratio) -> String {
        r.to_string()
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// Real segment `[lo, hi]`, serialized as a two-element array.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "[Decimal; 2]", into = "[Decimal; 2]")]
pub struct Segment {
    lo: Decimal,
    hi: Decimal,
}

impl Segment {
    pub fn new(lo: impl Into<Decimal>, hi: impl Into<Decimal>) -> Result<Self> {
        let (lo, hi) = (lo.into(), hi.into());
        if parse_real(lo.as_str(), 256)? >= parse_real(hi.as_str(), 256)? {
            return Err(Error::InvalidInput(format!("empty segment [{lo}, {hi}]")));
        }
        Ok(Segment { lo, hi })
    }

    /// The reference interval `[-1, 1]`.
    pub fn unit() -> Self {
        Segment {
            lo: Decimal::from(-1),
            hi: Decimal::from(1),
        }
    }

    pub fn lo(&self) -> &Decimal {
        &self.lo
    }

    pub fn hi(&self) -> &Decimal {
        &self.hi
    }

    pub fn bounds(&self, ctx: &PrecisionCtx) -> (Float, Float) {
        (self.lo.value(ctx), self.hi.value(ctx))
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.lo.to_f64(), self.hi.to_f64())
    }

    pub fn is_unit(&self) -> bool {
        let ctx = PrecisionCtx::new(128).expect("valid");
        let (a, b) = self.bounds(&ctx);
        a == -1 && b == 1
    }

    pub fn intersects(&self, other: &Segment) -> bool {
        let ctx = PrecisionCtx::new(256).expect("valid");
        let (a, b) = self.bounds(&ctx);
        let (c, d) = other.bounds(&ctx);
        !(b < c || d < a)
    }

    pub fn max_modulus(&self) -> f64 {
        let (a, b) = self.to_f64();
        a.abs().max(b.abs())
    }

    pub fn mirrored(&self) -> Segment {
        let neg = |d: &Decimal| {
            let s = d.as_str();
            Decimal::new(&match s.strip_prefix('-') {
                Some(r) => r.to_string(),
                None => format!("-{s}"),
            })
            .expect("negated literal")
        };
        Segment {
            lo: neg(&self.hi),
            hi: neg(&self.lo),
        }
    }
}

impl TryFrom<[Decimal; 2]> for Segment {
    type Error = Error;

    fn try_from([lo, hi]: [Decimal; 2]) -> Result<Self> {
        Segment::new(lo, hi)
    }
}

impl From<Segment> for [Decimal; 2] {
    fn from(s: Segment) -> Self {
        [s.lo, s.hi]
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Declarative description of a model function.
///
/// Serialized as `{"variant": "...", "params": {...}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "variant", content = "params", try_from = "RawSpec")]
pub enum FunctionSpec {
    /// Cauchy transform of the normalized arcsine measure on `[c, d]`,
    /// `1 / (sqrt(z - c) sqrt(z - d))`.
    MarkovArcsine { c: Decimal, d: Decimal },
    /// `<mu, sigma>(z) = int sigma^(x) dmu(x) / (z - x)` with arcsine
    /// measures on `mu` and `sigma`.
    NikishinSecond { mu: Segment, sigma: Segment },
    /// `prod_j (A_j - 1/phi(z))^{alpha_j}`.
    ClassL { a: Vec<ComplexParam>, alpha: Vec<Ratio> },
    /// `1 / sqrt(z^2 - 1)`.
    InvSqrt,
    /// `base(z) + constant`.
    Shifted {
        base: Box<FunctionSpec>,
        constant: ComplexParam,
    },
    /// `residue / (z - pole)`.
    SimplePole {
        pole: ComplexParam,
        residue: ComplexParam,
    },
}

#[derive(Deserialize)]
#[serde(tag = "variant", content = "params")]
enum RawSpec {
    MarkovArcsine { c: Decimal, d: Decimal },
    NikishinSecond { mu: Segment, sigma: Segment },
    ClassL { a: Vec<ComplexParam>, alpha: Vec<Ratio> },
    InvSqrt,
    Shifted {
        base: Box<FunctionSpec>,
        constant: ComplexParam,
    },
    SimplePole {
        pole: ComplexParam,
        residue: ComplexParam,
    },
}

impl TryFrom<RawSpec> for FunctionSpec {
    type Error = Error;

    fn try_from(r: RawSpec) -> Result<Self> {
        let s = match r {
            RawSpec::MarkovArcsine { c, d } => FunctionSpec::MarkovArcsine { c, d },
            RawSpec::NikishinSecond { mu, sigma } => FunctionSpec::NikishinSecond { mu, sigma },
            RawSpec::ClassL { a, alpha } => FunctionSpec::ClassL { a, alpha },
            RawSpec::InvSqrt => FunctionSpec::InvSqrt,
            RawSpec::Shifted { base, constant } => FunctionSpec::Shifted { base, constant },
            RawSpec::SimplePole { pole, residue } => FunctionSpec::SimplePole { pole, residue },
        };
        s.validate()?;
        Ok(s)
    }
}

impl FunctionSpec {
    pub fn markov_arcsine(c: impl Into<Decimal>, d: impl Into<Decimal>) -> Result<Self> {
        let s = FunctionSpec::MarkovArcsine {
            c: c.into(),
            d: d.into(),
        };
        s.validate()?;
        Ok(s)
    }

    pub fn nikishin(mu: Segment, sigma: Segment) -> Result<Self> {
        let s = FunctionSpec::NikishinSecond { mu, sigma };
        s.validate()?;
        Ok(s)
    }

    pub fn class_l(a: Vec<ComplexParam>, alpha: Vec<Ratio>) -> Result<Self> {
        let s = FunctionSpec::ClassL { a, alpha };
        s.validate()?;
        Ok(s)
    }

    pub fn shifted(base: FunctionSpec, constant: ComplexParam) -> Self {
        FunctionSpec::Shifted {
            base: Box::new(base),
            constant,
        }
    }

    pub fn simple_pole(pole: ComplexParam, residue: ComplexParam) -> Self {
        FunctionSpec::SimplePole { pole, residue }
    }

    /// The three-point class (L) function used for the figure experiments:
    /// `A_{1,2} = e +- i b`, `A_3`, exponents `(-1/3, -1/3, 2/3)`.
    pub fn figure_class_l(a3: Decimal, e: Decimal, b: Decimal) -> Result<Self> {
        let a1 = ComplexParam { re: e, im: b };
        let a2 = a1.conj();
        FunctionSpec::class_l(
            vec![a1, a2, ComplexParam { re: a3, im: zero_decimal() }],
            vec![Ratio::new(-1, 3)?, Ratio::new(-1, 3)?, Ratio::new(2, 3)?],
        )
    }

    /// `(mu^, <mu, sigma>)` for the Nikishin system on `(mu, sigma)`.
    pub fn nikishin_pair(mu: Segment, sigma: Segment) -> Result<(Self, Self)> {
        let first = FunctionSpec::MarkovArcsine {
            c: mu.lo().clone(),
            d: mu.hi().clone(),
        };
        Ok((first, FunctionSpec::nikishin(mu, sigma)?))
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            FunctionSpec::MarkovArcsine { c, d } => {
                Segment::new(c.clone(), d.clone())?;
            }
            FunctionSpec::NikishinSecond { mu, sigma } => {
                if mu.intersects(sigma) {
                    return Err(Error::InvalidInput(format!(
                        "Nikishin segments {mu} and {sigma} overlap"
                    )));
                }
            }
            FunctionSpec::ClassL { a, alpha } => {
                if a.len() != alpha.len() {
                    return Err(Error::InvalidInput(format!(
                        "{} branch points but {} exponents",
                        a.len(),
                        alpha.len()
                    )));
                }
                if a.len() < 2 {
                    return Err(Error::InvalidInput(
                        "class (L) needs at least two factors".into(),
                    ));
                }
                match ratio_sum(alpha) {
                    Some((0, _)) => {}
                    Some((p, q)) => {
                        return Err(Error::InvalidInput(format!(
                            "exponents sum to {p}/{q}, not 0"
                        )))
                    }
                    None => return Err(Error::InvalidInput("exponent sum overflows".into())),
                }
                let ctx = PrecisionCtx::new(128)?;
                for aj in a {
                    let m = Float::with_val(128, aj.value(&ctx).abs_ref());
                    if m <= 1 {
                        return Err(Error::InvalidInput(format!(
                            "|A| = {} is not greater than 1",
                            m.to_f64()
                        )));
                    }
                }
            }
            FunctionSpec::InvSqrt => {}
            FunctionSpec::Shifted { base, .. } => base.validate()?,
            FunctionSpec::SimplePole { .. } => {}
        }
        Ok(())
    }

    /// Largest modulus of the singular set of the principal branch.
    pub fn singular_radius(&self) -> f64 {
        match self {
            FunctionSpec::MarkovArcsine { c, d } => c.to_f64().abs().max(d.to_f64().abs()),
            FunctionSpec::NikishinSecond { mu, .. } => mu.max_modulus(),
            FunctionSpec::ClassL { .. } | FunctionSpec::InvSqrt => 1.0,
            FunctionSpec::Shifted { base, .. } => base.singular_radius(),
            FunctionSpec::SimplePole { pole, .. } => {
                let (x, y) = pole.to_f64();
                x.hypot(y)
            }
        }
    }

    /// Whether the function is holomorphic on a neighbourhood of `[-1, 1]`.
    pub fn analytic_on_unit_interval(&self) -> bool {
        match self {
            FunctionSpec::MarkovArcsine { c, d } => {
                !Segment::new(c.clone(), d.clone())
                    .expect("validated")
                    .intersects(&Segment::unit())
            }
            FunctionSpec::NikishinSecond { mu, .. } => !mu.intersects(&Segment::unit()),
            FunctionSpec::ClassL { .. } | FunctionSpec::InvSqrt => false,
            FunctionSpec::Shifted { base, .. } => base.analytic_on_unit_interval(),
            FunctionSpec::SimplePole { pole, .. } => {
                let (x, y) = pole.to_f64();
                y != 0.0 || x.abs() > 1.0
            }
        }
    }

    /// True when every parameter is real or comes in conjugate pairs, so
    /// that `f(conj z) = conj f(z)`.
    pub fn is_conjugate_symmetric(&self) -> bool {
        let ctx = PrecisionCtx::new(128).expect("valid");
        let real = |p: &ComplexParam| p.im.value(&ctx).is_zero();
        match self {
            FunctionSpec::MarkovArcsine { .. }
            | FunctionSpec::NikishinSecond { .. }
            | FunctionSpec::InvSqrt => true,
            FunctionSpec::ClassL { a, alpha } => a.iter().zip(alpha).all(|(aj, al)| {
                real(aj)
                    || a.iter()
                        .zip(alpha)
                        .any(|(ak, bk)| bk == al && ak.value(&ctx) == aj.value(&ctx).conj())
            }),
            FunctionSpec::Shifted { base, constant } => {
                real(constant) && base.is_conjugate_symmetric()
            }
            FunctionSpec::SimplePole { pole, residue } => real(pole) && real(residue),
        }
    }

    pub fn label(&self) -> String {
        match self {
            FunctionSpec::MarkovArcsine { c, d } => format!("markov[{c},{d}]"),
            FunctionSpec::NikishinSecond { mu, sigma } => format!("nikishin{mu}{sigma}"),
            FunctionSpec::ClassL { a, .. } => format!("classL{}", a.len()),
            FunctionSpec::InvSqrt => "invsqrt".into(),
            FunctionSpec::Shifted { base, .. } => format!("{}+c", base.label()),
            FunctionSpec::SimplePole { .. } => "pole".into(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape() {
        let s = FunctionSpec::markov_arcsine(2, 3).unwrap();
        let j = serde_json::to_value(&s).unwrap();
        assert_eq!(
            j,
            serde_json::json!({"variant": "MarkovArcsine", "params": {"c": "2", "d": "3"}})
        );
        let back: FunctionSpec = serde_json::from_value(j).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn class_l_round_trip_keeps_exact_exponents() {
        let s = FunctionSpec::figure_class_l(
            Decimal::new("1.5").unwrap(),
            Decimal::new("0.2").unwrap(),
            Decimal::new("1.2").unwrap(),
        )
        .unwrap();
        let txt = serde_json::to_string(&s).unwrap();
        assert!(txt.contains("\"-1/3\""));
        assert!(txt.contains("\"im\":\"-1.2\""));
        let back: FunctionSpec = serde_json::from_str(&txt).unwrap();
        assert_eq!(back, s);
        assert!(s.is_conjugate_symmetric());
    }

    #[test]
    fn class_l_admissibility() {
        let a = vec![ComplexParam::real(2), ComplexParam::real(3)];
        let half = Ratio::new(1, 2).unwrap();
        assert!(FunctionSpec::class_l(a.clone(), vec![half, half.neg()]).is_ok());
        assert!(FunctionSpec::class_l(a.clone(), vec![half, half]).is_err());
        let inside = vec![ComplexParam::real(2), ComplexParam::new(0.6, 0.8)];
        assert!(FunctionSpec::class_l(inside, vec![half, half.neg()]).is_err());
        let bad = r#"{"variant":"ClassL","params":{"a":[{"re":"2"},{"re":"3"}],"alpha":["1/2","1/3"]}}"#;
        assert!(serde_json::from_str::<FunctionSpec>(bad).is_err());
    }

    #[test]
    fn ratio_parsing_reduces() {
        assert!("4/-2".parse::<Ratio>().is_err());
        let r: Ratio = "-4/6".parse().unwrap();
        assert_eq!((r.num(), r.den()), (-2, 3));
        assert!("1/0".parse::<Ratio>().is_err());
    }

    #[test]
    fn numbers_accepted_as_parameters() {
        let s: FunctionSpec =
            serde_json::from_str(r#"{"variant":"MarkovArcsine","params":{"c":2,"d":3.5}}"#).unwrap();
        assert_eq!(s, FunctionSpec::markov_arcsine(2, 3.5).unwrap());
        let s: FunctionSpec = serde_json::from_str(r#"{"variant":"InvSqrt"}"#).unwrap();
        assert_eq!(s, FunctionSpec::InvSqrt);
    }

    #[test]
    fn nikishin_needs_disjoint_segments() {
        let mu = Segment::unit();
        assert!(FunctionSpec::nikishin(mu.clone(), Segment::new(2, 3).unwrap()).is_ok());
        assert!(FunctionSpec::nikishin(mu, Segment::new(0.5, 3).unwrap()).is_err());
        assert!(Segment::new(3, 2).is_err());
    }
}
