use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functions::{ComplexParam, Decimal, FunctionSpec, Ratio, Segment};
use crate::numkernel::PrecisionCtx;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    FigHp,
    FigChe,
    MarkovDemo,
    Prop1Check,
    ClasslCheck,
    EquilibriumCheck,
    InterpDemo,
}

impl Experiment {
    pub const ALL: [Experiment; 7] = [
        Experiment::FigHp,
        Experiment::FigChe,
        Experiment::MarkovDemo,
        Experiment::Prop1Check,
        Experiment::ClasslCheck,
        Experiment::EquilibriumCheck,
        Experiment::InterpDemo,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Experiment::FigHp => "fig-hp",
            Experiment::FigChe => "fig-che",
            Experiment::MarkovDemo => "markov-demo",
            Experiment::Prop1Check => "prop1-check",
            Experiment::ClasslCheck => "classl-check",
            Experiment::EquilibriumCheck => "equilibrium-check",
            Experiment::InterpDemo => "interp-demo",
        }
    }

    fn default_n(self) -> Vec<usize> {
        match self {
            Experiment::FigHp | Experiment::FigChe => vec![30],
            Experiment::MarkovDemo => (1..=6).map(|k| 4 * k).collect(),
            Experiment::Prop1Check | Experiment::ClasslCheck | Experiment::InterpDemo => vec![10],
            Experiment::EquilibriumCheck => vec![40],
        }
    }

    /// Orders above this need `--large`.
    fn desk_limit(self) -> usize {
        60
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.id() == s)
            .ok_or_else(|| {
                let ids: Vec<&str> = Experiment::ALL.iter().map(|e| e.id()).collect();
                Error::Config(format!("unknown experiment `{s}`; expected one of {}", ids.join(", ")))
            })
    }
}

/// Parameters of the three-point class (L) function of the figure runs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FigureParams {
    pub a3: Decimal,
    pub e: Decimal,
    pub b: Decimal,
}

impl Default for FigureParams {
    fn default() -> Self {
        FigureParams {
            a3: Decimal::new("1.5").expect("literal"),
            e: Decimal::new("0.2").expect("literal"),
            b: Decimal::new("1.2").expect("literal"),
        }
    }
}

impl FigureParams {
    pub fn spec(&self) -> Result<FunctionSpec> {
        FunctionSpec::figure_class_l(self.a3.clone(), self.e.clone(), self.b.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NikishinParams {
    pub mu: Segment,
    pub sigma: Segment,
}

impl Default for NikishinParams {
    fn default() -> Self {
        NikishinParams {
            mu: Segment::unit(),
            sigma: Segment::new(2, 3).expect("literal"),
        }
    }
}

/// Two-point class (L) function `((A1 - w)/(A2 - w))^alpha`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassLParams {
    pub a1: ComplexParam,
    pub a2: ComplexParam,
    pub alpha: Ratio,
}

impl Default for ClassLParams {
    fn default() -> Self {
        ClassLParams {
            a1: ComplexParam::real(2),
            a2: ComplexParam::real(3),
            alpha: Ratio::new(1, 2).expect("literal"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeSettings {
    /// Radius of the circle on which potentials are compared.
    pub radius: f64,
    pub count: usize,
    /// Fraction dropped per set in the trimmed Hausdorff distance.
    pub trim: f64,
}

impl Default for ProbeSettings {
    fn default() -> Self {
        ProbeSettings {
            radius: 5.0,
            count: 64,
            trim: 0.05,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeCircle {
    pub center: (f64, f64),
    pub radius: f64,
    /// Radius of the integration circle around the cut, same center.
    pub contour_radius: f64,
}

impl Default for NodeCircle {
    fn default() -> Self {
        NodeCircle {
            center: (2.5, 0.0),
            radius: 3.0,
            contour_radius: 1.0,
        }
    }
}

/// Experiment configuration; [`ExperimentConfig::resolve`] fills every
/// defaulted field so the echoed config re-runs the experiment as is.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub experiment: Option<Experiment>,
    /// Orders of the Hermite–Padé, Frobenius or multipoint runs.
    #[serde(default)]
    pub n: Option<Vec<usize>>,
    /// Padé orders of the figure runs.
    #[serde(default)]
    pub n_pade: Option<Vec<usize>>,
    #[serde(default)]
    pub bits: Option<u32>,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub function: Option<FunctionSpec>,
    #[serde(default)]
    pub figure: FigureParams,
    #[serde(default)]
    pub nikishin: NikishinParams,
    #[serde(default)]
    pub class_l: ClassLParams,
    #[serde(default)]
    pub probes: ProbeSettings,
    #[serde(default)]
    pub nodes: NodeCircle,
    /// Cells per support in the equilibrium solver.
    #[serde(default)]
    pub cells: Option<usize>,
    #[serde(default)]
    pub large: bool,
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment) -> Self {
        ExperimentConfig {
            experiment: Some(experiment),
            ..Default::default()
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn experiment(&self) -> Result<Experiment> {
        self.experiment
            .ok_or_else(|| Error::Config("no experiment selected".into()))
    }

    pub fn orders(&self) -> &[usize] {
        self.n.as_deref().unwrap_or(&[])
    }

    pub fn pade_orders(&self) -> &[usize] {
        self.n_pade.as_deref().unwrap_or(&[])
    }

    pub fn precision(&self) -> Result<PrecisionCtx> {
        PrecisionCtx::new(self.bits.ok_or_else(|| Error::Config("unresolved precision".into()))?)
    }

    /// Fills defaults and validates.
    pub fn resolve(mut self) -> Result<Self> {
        let exp = self.experiment()?;
        if self.n.is_none() {
            self.n = Some(exp.default_n());
        }
        if matches!(exp, Experiment::FigHp | Experiment::FigChe) {
            if self.n_pade.is_none() {
                self.n_pade = Some(vec![20]);
            }
        } else if self.n_pade.as_ref().is_some_and(|v| !v.is_empty()) {
            return Err(Error::Config(format!("n_pade is only used by the figure runs, not {exp}")));
        }
        let orders = self.n.as_ref().expect("set above");
        if orders.is_empty() {
            return Err(Error::Config("the list of orders n is empty".into()));
        }
        let all: Vec<usize> = orders.iter().chain(self.pade_orders()).copied().collect();
        if all.contains(&0) {
            return Err(Error::Config("orders must be at least 1".into()));
        }
        let top = all.iter().copied().max().unwrap_or(1);
        if top > exp.desk_limit() {
            if !self.large {
                return Err(Error::Config(format!(
                    "order {top} exceeds the desk limit {}; pass --large to run it",
                    exp.desk_limit()
                )));
            }
            log::warn!("order {top} requested: expect hours of run time at 2048 bits");
        }
        if self.bits.is_none() {
            self.bits = Some(default_bits(exp, top));
        }
        if self.bits.is_some_and(|b| b < PrecisionCtx::MIN_BITS) {
            return Err(Error::Config(format!("bits must be at least {}", PrecisionCtx::MIN_BITS)));
        }
        if self.out.is_none() {
            self.out = Some(PathBuf::from("padelab-out"));
        }
        if self.function.is_none() {
            self.function = match exp {
                Experiment::FigHp | Experiment::FigChe => Some(self.figure.spec()?),
                Experiment::MarkovDemo | Experiment::InterpDemo => Some(FunctionSpec::markov_arcsine(
                    self.nikishin.sigma.lo().clone(),
                    self.nikishin.sigma.hi().clone(),
                )?),
                _ => None,
            };
        }
        if exp == Experiment::EquilibriumCheck && self.cells.is_none() {
            self.cells = Some(400);
        }
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        let cfg = |e: Error| Error::Config(e.to_string());
        let exp = self.experiment()?;
        if let Some(f) = &self.function {
            f.validate().map_err(cfg)?;
        }
        if matches!(exp, Experiment::InterpDemo) {
            if let Some(f) = &self.function {
                if f.singular_radius() == 0.0 {
                    return Err(Error::Config("interp-demo needs a function with a cut".into()));
                }
            }
            let c = &self.nodes;
            if !(c.radius > 0.0 && c.contour_radius > 0.0 && c.contour_radius < c.radius) {
                return Err(Error::Config(
                    "node circle needs 0 < contour_radius < radius".into(),
                ));
            }
        }
        if matches!(exp, Experiment::Prop1Check | Experiment::EquilibriumCheck)
            && self.nikishin.mu.intersects(&self.nikishin.sigma)
        {
            return Err(Error::Config("Nikishin segments must be disjoint".into()));
        }
        if exp == Experiment::Prop1Check && !self.nikishin.mu.is_unit() {
            return Err(Error::Config("prop1-check needs mu = [-1, 1]".into()));
        }
        if exp == Experiment::ClasslCheck {
            let p = &self.class_l;
            FunctionSpec::class_l(vec![p.a1.clone(), p.a2.clone()], vec![p.alpha, p.alpha.neg()])
                .map_err(cfg)?;
        }
        let p = &self.probes;
        if !(p.radius > 0.0 && p.count > 0 && (0.0..0.5).contains(&p.trim)) {
            return Err(Error::Config("probe settings out of range".into()));
        }
        if self.cells.is_some_and(|c| c < 50) {
            return Err(Error::Config("cells must be at least 50".into()));
        }
        Ok(())
    }
}

fn default_bits(exp: Experiment, top: usize) -> u32 {
    let n = top as u32;
    match exp {
        Experiment::FigHp | Experiment::FigChe | Experiment::EquilibriumCheck => {
            PrecisionCtx::for_hermite(top).bits()
        }
        Experiment::Prop1Check | Experiment::ClasslCheck => 512 * n.div_ceil(10),
        Experiment::MarkovDemo => 512.max(24 * n),
        Experiment::InterpDemo => PrecisionCtx::for_order(top).bits().max(512),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_filled() {
        let c = ExperimentConfig::new(Experiment::FigHp).resolve().unwrap();
        assert_eq!(c.orders(), &[30]);
        assert_eq!(c.pade_orders(), &[20]);
        assert_eq!(c.bits, Some(960));
        assert!(c.function.is_some());
        let again = ExperimentConfig::from_json(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(again.resolve().unwrap(), c);
    }

    #[test]
    fn empty_orders_rejected() {
        let mut c = ExperimentConfig::new(Experiment::Prop1Check);
        c.n = Some(Vec::new());
        assert!(matches!(c.resolve(), Err(Error::Config(_))));
    }

    #[test]
    fn large_orders_are_gated() {
        let mut c = ExperimentConfig::new(Experiment::FigHp);
        c.n = Some(vec![200]);
        assert!(c.clone().resolve().is_err());
        c.large = true;
        assert!(c.resolve().is_ok());
    }

    #[test]
    fn experiment_ids_round_trip() {
        for e in Experiment::ALL {
            assert_eq!(e.id().parse::<Experiment>().unwrap(), e);
            assert_eq!(serde_json::to_string(&e).unwrap(), format!("\"{}\"", e.id()));
        }
        assert!("fig".parse::<Experiment>().is_err());
    }

    #[test]
    fn unknown_fields_rejected() {
        assert!(ExperimentConfig::from_json(r#"{"experiment": "fig-hp", "nn": [3]}"#).is_err());
    }
}
