use crate::error::{Error, Result};

/// Nonnegative weights on finitely many points of the plane.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteMeasure {
    points: Vec<(f64, f64)>,
    weights: Vec<f64>,
    mass: f64,
}

impl DiscreteMeasure {
    /// Checks that the weights are nonnegative and add up to `mass`.
    pub fn new(points: Vec<(f64, f64)>, weights: Vec<f64>, mass: f64) -> Result<Self> {
        if points.len() != weights.len() {
            return Err(Error::InvalidInput(format!(
                "{} points but {} weights",
                points.len(),
                weights.len()
            )));
        }
        if weights.iter().any(|w| !(*w >= 0.0)) {
            return Err(Error::InvalidInput("negative or NaN weight".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - mass).abs() > 1e-9 * mass.abs().max(1.0) {
            return Err(Error::MassMismatch(total, mass));
        }
        Ok(DiscreteMeasure {
            points,
            weights,
            mass,
        })
    }

    /// Equal weights `mass / len`.
    pub fn uniform(points: Vec<(f64, f64)>, mass: f64) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptySet);
        }
        let w = mass / points.len() as f64;
        let weights = vec![w; points.len()];
        DiscreteMeasure::new(points, weights, mass)
    }

    pub fn on_line(xs: &[f64], weights: Vec<f64>) -> Result<Self> {
        let mass = weights.iter().sum();
        DiscreteMeasure::new(xs.iter().map(|&x| (x, 0.0)).collect(), weights, mass)
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn scaled(&self, s: f64) -> DiscreteMeasure {
        DiscreteMeasure {
            points: self.points.clone(),
            weights: self.weights.iter().map(|w| w * s).collect(),
            mass: self.mass * s,
        }
    }

    /// `U(z) = -sum w_i log|z - x_i|`.
    pub fn potential(&self, z: (f64, f64)) -> f64 {
        -self
            .points
            .iter()
            .zip(&self.weights)
            .map(|(&(x, y), w)| w * (z.0 - x).hypot(z.1 - y).ln())
            .sum::<f64>()
    }

    pub fn distance_to(&self, z: (f64, f64)) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .filter(|(_, w)| **w > 0.0)
            .map(|(&(x, y), _)| (z.0 - x).hypot(z.1 - y))
            .fold(f64::INFINITY, f64::min)
    }
}

/// `sup |U^mu - U^nu|` over `probes`.
pub fn potential_discrepancy(mu: &DiscreteMeasure, nu: &DiscreteMeasure, probes: &[(f64, f64)]) -> Result<f64> {
    if (mu.mass - nu.mass).abs() > 1e-9 * mu.mass.abs().max(nu.mass.abs()).max(1.0) {
        return Err(Error::MassMismatch(mu.mass, nu.mass));
    }
    let mut worst = 0.0f64;
    for &z in probes {
        if mu.distance_to(z) < 0.25 || nu.distance_to(z) < 0.25 {
            return Err(Error::Geometry(format!(
                "probe ({}, {}) is within 1/4 of a support",
                z.0, z.1
            )));
        }
        worst = worst.max((mu.potential(z) - nu.potential(z)).abs());
    }
    Ok(worst)
}

/// `count` equispaced points on `|z| = radius`.
pub fn probe_circle(radius: f64, count: usize) -> Vec<(f64, f64)> {
    (0..count)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / count as f64;
            (radius * t.cos(), radius * t.sin())
        })
        .collect()
}

/// Symmetric Hausdorff distance after dropping from each set the
/// `ceil(trim * len)` points farthest from the other set.
pub fn trimmed_hausdorff(a: &[(f64, f64)], b: &[(f64, f64)], trim: f64) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    if !(0.0..0.5).contains(&trim) {
        return Err(Error::InvalidInput(format!("trim {trim} outside [0, 1/2)")));
    }
    let near = |p: (f64, f64), set: &[(f64, f64)]| {
        set.iter()
            .map(|q| (p.0 - q.0).hypot(p.1 - q.1))
            .fold(f64::INFINITY, f64::min)
    };
    let keep = |from: &[(f64, f64)], other: &[(f64, f64)]| -> Vec<(f64, f64)> {
        let mut d: Vec<(usize, f64)> = from.iter().map(|&p| near(p, other)).enumerate().collect();
        // farthest first; ties keep index order
        d.sort_by(|x, y| y.1.total_cmp(&x.1));
        let drop = (trim * from.len() as f64).ceil() as usize;
        let mut kept: Vec<usize> = d.into_iter().skip(drop).map(|(i, _)| i).collect();
        kept.sort_unstable();
        kept.into_iter().map(|i| from[i]).collect()
    };
    let (ka, kb) = (keep(a, b), keep(b, a));
    if ka.is_empty() || kb.is_empty() {
        return Err(Error::EmptySet);
    }
    let h = |x: &[(f64, f64)], y: &[(f64, f64)]| x.iter().map(|&p| near(p, y)).fold(0.0, f64::max);
    Ok(h(&ka, &kb).max(h(&kb, &ka)))
}
