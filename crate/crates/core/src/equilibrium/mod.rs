//! Discretized scalar and vector logarithmic equilibrium problems on real
//! segments.
//!
//! Each support is split into Chebyshev-spaced cells carrying a constant
//! density; the unknowns are the cell masses. The energy
//! `sum_ab M_ab int U^{mu_a} dmu_b + 2 sum_a int psi_a dmu_a` is then an
//! exact quadratic form in those masses and is minimized over the product of
//! scaled simplices by accelerated projected gradient.

mod kernel;
mod nikishin;

use std::fmt;
use std::io::Write;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::functions::Segment;
use crate::roots::DiscreteMeasure;

use kernel::{cell_average, cell_pair, log_segment};

pub use nikishin::{expected_omega_count, nikishin_zero_check, ZeroDistributionReport};

/// Additive external field `psi` on a support.
#[derive(Clone, Default)]
pub enum ExternalField {
    #[default]
    Zero,
    /// `psi(x) = charge * log|x - position|`, i.e. `-charge * U^delta`.
    PointCharge { position: f64, charge: f64 },
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for ExternalField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExternalField::Zero => write!(f, "Zero"),
            ExternalField::PointCharge { position, charge } => {
                write!(f, "PointCharge({charge} at {position})")
            }
            ExternalField::Custom(_) => write!(f, "Custom"),
        }
    }
}

impl ExternalField {
    pub fn custom(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        ExternalField::Custom(Arc::new(f))
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            ExternalField::Zero => 0.0,
            ExternalField::PointCharge { position, charge } => charge * (x - position).abs().ln(),
            ExternalField::Custom(f) => f(x),
        }
    }

    fn cell_averages(&self, edges: &[f64]) -> Vec<f64> {
        match self {
            ExternalField::Zero => vec![0.0; edges.len() - 1],
            _ => edges.windows(2).map(|e| cell_average(|x| self.eval(x), e[0], e[1])).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SolverOptions {
    /// Target KKT residual.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: 1e-5,
            max_iter: 200_000,
        }
    }
}

/// Interaction matrix of the Nikishin vector problem.
pub const NIKISHIN_INTERACTION: [[f64; 2]; 2] = [[1.0, -0.5], [-0.5, 1.0]];

#[derive(Clone, Debug)]
pub struct EquilibriumProblem {
    pub supports: Vec<Segment>,
    pub masses: Vec<f64>,
    pub interaction: [[f64; 2]; 2],
    pub fields: Vec<ExternalField>,
    pub grid: Vec<usize>,
    pub options: SolverOptions,
}

impl EquilibriumProblem {
    pub fn scalar(segment: Segment, mass: f64, field: ExternalField, n: usize) -> Self {
        EquilibriumProblem {
            supports: vec![segment],
            masses: vec![mass],
            interaction: [[1.0, 0.0], [0.0, 1.0]],
            fields: vec![field],
            grid: vec![n],
            options: SolverOptions::default(),
        }
    }

    /// `Delta` and `F` with masses `(2, 1)` and the Nikishin interaction.
    pub fn nikishin(delta: Segment, f: Segment, n: usize) -> Self {
        EquilibriumProblem {
            supports: vec![delta, f],
            masses: vec![2.0, 1.0],
            interaction: NIKISHIN_INTERACTION,
            fields: vec![ExternalField::Zero, ExternalField::Zero],
            grid: vec![n, n],
            options: SolverOptions::default(),
        }
    }

    pub fn with_masses(mut self, masses: Vec<f64>) -> Self {
        self.masses = masses;
        self
    }

    pub fn with_interaction(mut self, m: [[f64; 2]; 2]) -> Self {
        self.interaction = m;
        self
    }

    pub fn with_fields(mut self, fields: Vec<ExternalField>) -> Self {
        self.fields = fields;
        self
    }

    pub fn with_options(mut self, options: SolverOptions) -> Self {
        self.options = options;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.supports.len();
        if !(1..=2).contains(&k) {
            return Err(Error::InvalidInput(format!("{k} supports; one or two are supported")));
        }
        if self.masses.len() != k || self.fields.len() != k || self.grid.len() != k {
            return Err(Error::InvalidInput(
                "masses, fields and grid sizes must match the supports".into(),
            ));
        }
        if let Some(m) = self.masses.iter().find(|m| !(**m > 0.0 && m.is_finite())) {
            return Err(Error::InvalidInput(format!("mass {m} is not positive")));
        }
        if let Some(n) = self.grid.iter().find(|n| **n < 50) {
            return Err(Error::InvalidInput(format!("grid of {n} cells; at least 50 required")));
        }
        if k == 2 {
            if self.supports[0].intersects(&self.supports[1]) {
                return Err(Error::Geometry("supports must be disjoint".into()));
            }
            let m = &self.interaction;
            let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
            if m[0][1] != m[1][0] || !(m[0][0] > 0.0) || !(det > 0.0) {
                return Err(Error::InvalidInput(
                    "interaction must be symmetric positive definite".into(),
                ));
            }
        }
        if !(self.options.tol > 0.0) || self.options.max_iter == 0 {
            return Err(Error::InvalidInput("solver tolerance and iteration cap must be positive".into()));
        }
        Ok(())
    }
}

/// Cell masses on one support.
#[derive(Clone, Debug, Serialize)]
pub struct Component {
    pub lo: f64,
    pub hi: f64,
    pub mass: f64,
    pub edges: Vec<f64>,
    pub centers: Vec<f64>,
    pub weights: Vec<f64>,
    /// Cell averages of the external field.
    pub field: Vec<f64>,
    /// Mean effective potential over the active cells.
    pub constant: f64,
    pub kkt_residual: f64,
}

impl Component {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Cell-averaged densities.
    pub fn density(&self) -> Vec<f64> {
        self.weights
            .iter()
            .zip(self.edges.windows(2))
            .map(|(w, e)| w / (e[1] - e[0]))
            .collect()
    }

    /// Cell masses placed at cell centers.
    pub fn measure(&self) -> DiscreteMeasure {
        let mass = self.weights.iter().sum();
        DiscreteMeasure::new(
            self.centers.iter().map(|&x| (x, 0.0)).collect(),
            self.weights.clone(),
            mass,
        )
        .expect("projected weights are nonnegative")
    }

    /// Logarithmic potential of the piecewise-constant density at `z`.
    pub fn potential(&self, z: (f64, f64)) -> f64 {
        -self
            .weights
            .iter()
            .zip(self.edges.windows(2))
            .map(|(w, e)| w / (e[1] - e[0]) * log_segment(e[0], e[1], z))
            .sum::<f64>()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EquilibriumSolution {
    pub components: Vec<Component>,
    pub interaction: [[f64; 2]; 2],
    pub energy: f64,
    /// Largest per-component KKT residual.
    pub kkt_residual: f64,
    pub iterations: usize,
}

impl EquilibriumSolution {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Columns `component,left,right,center,weight,density`.
    pub fn write_density_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        let err = |e: csv::Error| Error::InvalidInput(format!("CSV: {e}"));
        wr.write_record(["component", "left", "right", "center", "weight", "density"])
            .map_err(err)?;
        for (a, c) in self.components.iter().enumerate() {
            for (i, rho) in c.density().iter().enumerate() {
                wr.write_record([
                    a.to_string(),
                    c.edges[i].to_string(),
                    c.edges[i + 1].to_string(),
                    c.centers[i].to_string(),
                    c.weights[i].to_string(),
                    rho.to_string(),
                ])
                .map_err(err)?;
            }
        }
        wr.flush().map_err(|e| Error::InvalidInput(e.to_string()))?;
        Ok(())
    }
}

/// Recomputed energy and component potentials at probe points.
#[derive(Clone, Debug, Serialize)]
pub struct EnergyReport {
    pub energy: f64,
    pub stored_energy: f64,
    pub relative_mismatch: f64,
    pub probes: Vec<(f64, f64)>,
    /// `potentials[a][j] = U^{lambda_a}(probes[j])`.
    pub potentials: Vec<Vec<f64>>,
}

fn chebyshev_edges(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (m, h) = ((lo + hi) / 2.0, (hi - lo) / 2.0);
    let mut e: Vec<f64> = (0..=n)
        .map(|i| m - h * (std::f64::consts::PI * i as f64 / n as f64).cos())
        .collect();
    e[0] = lo;
    e[n] = hi;
    e
}

/// Row-major `K_ij = int int -log|x-y| / (h_i h_j)` over cells `i` and `j`.
fn kernel_block(ea: &[f64], eb: &[f64]) -> Vec<f64> {
    let nb = eb.len() - 1;
    (0..ea.len() - 1)
        .into_par_iter()
        .flat_map_iter(|i| {
            let (a, b) = (ea[i], ea[i + 1]);
            (0..nb).map(move |j| {
                let (c, d) = (eb[j], eb[j + 1]);
                cell_pair(a, b, c, d) / ((b - a) * (d - c))
            })
        })
        .collect()
}

struct Assembled {
    sizes: Vec<usize>,
    m: [[f64; 2]; 2],
    /// blocks[a][b], with blocks[1][0] the transpose of blocks[0][1].
    blocks: Vec<Vec<Vec<f64>>>,
    field: Vec<Vec<f64>>,
    masses: Vec<f64>,
}

impl Assembled {
    fn new(edges: &[Vec<f64>], m: [[f64; 2]; 2], field: Vec<Vec<f64>>, masses: Vec<f64>) -> Self {
        let k = edges.len();
        let sizes: Vec<usize> = edges.iter().map(|e| e.len() - 1).collect();
        let mut blocks = vec![vec![Vec::new(); k]; k];
        for a in 0..k {
            for b in a..k {
                blocks[a][b] = kernel_block(&edges[a], &edges[b]);
            }
        }
        if k == 2 {
            let (n0, n1) = (sizes[0], sizes[1]);
            let mut t = vec![0.0; n0 * n1];
            for i in 0..n0 {
                for j in 0..n1 {
                    t[j * n0 + i] = blocks[0][1][i * n1 + j];
                }
            }
            blocks[1][0] = t;
        }
        Assembled {
            sizes,
            m,
            blocks,
            field,
            masses,
        }
    }

    /// `(H w)_a = sum_b M_ab K_ab w_b`.
    fn apply(&self, w: &[Vec<f64>]) -> Vec<Vec<f64>> {
        let k = self.sizes.len();
        (0..k)
            .map(|a| {
                let mut out = vec![0.0; self.sizes[a]];
                for b in 0..k {
                    let mab = self.m[a][b];
                    if mab == 0.0 {
                        continue;
                    }
                    let nb = self.sizes[b];
                    for (i, o) in out.iter_mut().enumerate() {
                        let row = &self.blocks[a][b][i * nb..(i + 1) * nb];
                        *o += mab * row.iter().zip(&w[b]).map(|(x, y)| x * y).sum::<f64>();
                    }
                }
                out
            })
            .collect()
    }

    fn energy(&self, w: &[Vec<f64>], hw: &[Vec<f64>]) -> f64 {
        let mut e = 0.0;
        for a in 0..w.len() {
            for i in 0..w[a].len() {
                e += w[a][i] * (hw[a][i] + 2.0 * self.field[a][i]);
            }
        }
        e
    }

    /// Largest eigenvalue of `H` on the zero-mass subspace.
    fn lipschitz(&self) -> f64 {
        let mut v: Vec<Vec<f64>> = self
            .sizes
            .iter()
            .map(|&n| (0..n).map(|i| ((i * 7919 % 1000) as f64 / 1000.0) - 0.5).collect())
            .collect();
        let mut lambda = 0.0;
        for _ in 0..200 {
            center(&mut v);
            let norm = dot(&v, &v).sqrt();
            if norm == 0.0 {
                break;
            }
            v.iter_mut().flatten().for_each(|x| *x /= norm);
            let mut hv = self.apply(&v);
            center(&mut hv);
            let next = dot(&v, &hv);
            v = hv;
            if (next - lambda).abs() <= 1e-6 * next.abs() {
                lambda = next;
                break;
            }
            lambda = next;
        }
        lambda
    }

    fn kkt(&self, w: &[Vec<f64>], hw: &[Vec<f64>]) -> Vec<(f64, f64)> {
        (0..w.len())
            .map(|a| {
                let pot: Vec<f64> = hw[a].iter().zip(&self.field[a]).map(|(h, f)| h + f).collect();
                let cut = 1e-6 * self.masses[a];
                let active: Vec<usize> = (0..w[a].len()).filter(|&i| w[a][i] > cut).collect();
                let mean = active.iter().map(|&i| pot[i]).sum::<f64>() / active.len().max(1) as f64;
                let mut r = 0.0f64;
                for (i, p) in pot.iter().enumerate() {
                    if w[a][i] > cut {
                        r = r.max((p - mean).abs());
                    } else {
                        r = r.max(mean - p);
                    }
                }
                (mean, r)
            })
            .collect()
    }
}

fn dot(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p * q).sum::<f64>())
        .sum()
}

fn center(v: &mut [Vec<f64>]) {
    for c in v.iter_mut() {
        let mean = c.iter().sum::<f64>() / c.len() as f64;
        c.iter_mut().for_each(|x| *x -= mean);
    }
}

/// Euclidean projection onto `{w >= 0, sum w = mass}`.
fn project_simplex(v: &mut [f64], mass: f64) {
    let mut s: Vec<f64> = v.to_vec();
    s.sort_by(|a, b| b.total_cmp(a));
    let mut acc = 0.0;
    let mut theta = 0.0;
    for (k, x) in s.iter().enumerate() {
        acc += x;
        let t = (acc - mass) / (k + 1) as f64;
        if x - t > 0.0 {
            theta = t;
        }
    }
    v.iter_mut().for_each(|x| *x = (*x - theta).max(0.0));
}

fn project(w: &mut [Vec<f64>], masses: &[f64]) {
    for (c, &m) in w.iter_mut().zip(masses) {
        project_simplex(c, m);
    }
}

/// Minimizes `int U^mu dmu + 2 int psi dmu` over measures of the given mass
/// on `segment`, using `n` cells.
pub fn solve_scalar(segment: &Segment, mass: f64, field: ExternalField, n: usize) -> Result<EquilibriumSolution> {
    solve_vector(&EquilibriumProblem::scalar(segment.clone(), mass, field, n))
}

/// Minimizes the vector energy with interaction `M` over the product of
/// mass-constrained measure sets.
pub fn solve_vector(problem: &EquilibriumProblem) -> Result<EquilibriumSolution> {
    problem.validate()?;
    let bounds: Vec<(f64, f64)> = problem.supports.iter().map(Segment::to_f64).collect();
    let edges: Vec<Vec<f64>> = bounds
        .iter()
        .zip(&problem.grid)
        .map(|(&(lo, hi), &n)| chebyshev_edges(lo, hi, n))
        .collect();
    let field: Vec<Vec<f64>> = problem
        .fields
        .iter()
        .zip(&edges)
        .map(|(f, e)| f.cell_averages(e))
        .collect();
    if field.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::Domain("external field is not finite on the support".into()));
    }
    let sys = Assembled::new(&edges, problem.interaction, field, problem.masses.clone());
    let step = 1.0 / (2.0 * sys.lipschitz() * 1.02);

    let mut x: Vec<Vec<f64>> = sys.sizes.iter().map(|&n| vec![0.0; n]).collect();
    project(&mut x, &sys.masses);
    let mut y = x.clone();
    let mut t = 1.0f64;
    let mut iterations = 0;
    let mut report = None;
    while iterations < problem.options.max_iter {
        iterations += 1;
        let hy = sys.apply(&y);
        let mut next: Vec<Vec<f64>> = y
            .iter()
            .zip(&hy)
            .zip(&sys.field)
            .map(|((yc, hc), fc)| {
                yc.iter()
                    .zip(hc)
                    .zip(fc)
                    .map(|((v, h), f)| v - step * 2.0 * (h + f))
                    .collect()
            })
            .collect();
        project(&mut next, &sys.masses);

        // gradient restart keeps the iteration monotone enough to settle
        let mut restart = 0.0;
        for a in 0..x.len() {
            for i in 0..x[a].len() {
                restart += (y[a][i] - next[a][i]) * (next[a][i] - x[a][i]);
            }
        }
        let t_next = if restart > 0.0 {
            1.0
        } else {
            (1.0 + (1.0 + 4.0 * t * t).sqrt()) / 2.0
        };
        let beta = if restart > 0.0 { 0.0 } else { (t - 1.0) / t_next };
        y = next
            .iter()
            .zip(&x)
            .map(|(n, o)| n.iter().zip(o).map(|(a, b)| a + beta * (a - b)).collect())
            .collect();
        x = next;
        t = t_next;

        if iterations % 20 == 0 {
            let hx = sys.apply(&x);
            let kkt = sys.kkt(&x, &hx);
            if kkt.iter().all(|&(_, r)| r <= problem.options.tol) {
                report = Some((hx, kkt));
                break;
            }
        }
    }
    let (hx, kkt) = match report {
        Some(r) => r,
        None => {
            let hx = sys.apply(&x);
            let kkt = sys.kkt(&x, &hx);
            let worst = kkt.iter().map(|k| k.1).fold(0.0, f64::max);
            return Err(Error::NonConvergence(format!(
                "equilibrium KKT residual {worst:.3e} after {iterations} iterations"
            )));
        }
    };
    let energy = sys.energy(&x, &hx);
    let kkt_residual = kkt.iter().map(|k| k.1).fold(0.0, f64::max);
    let components = x
        .into_iter()
        .zip(edges)
        .zip(sys.field)
        .zip(kkt)
        .zip(bounds.iter().zip(&problem.masses))
        .map(|((((weights, edges), field), (constant, r)), (&(lo, hi), &mass))| Component {
            lo,
            hi,
            mass,
            centers: edges.windows(2).map(|e| (e[0] + e[1]) / 2.0).collect(),
            edges,
            weights,
            field,
            constant,
            kkt_residual: r,
        })
        .collect();
    Ok(EquilibriumSolution {
        components,
        interaction: if bounds.len() == 1 { [[1.0, 0.0], [0.0, 1.0]] } else { problem.interaction },
        energy,
        kkt_residual,
        iterations,
    })
}

/// Recomputes the energy from the stored cells and evaluates every
/// component potential at `probes`.
pub fn energy_and_potentials(sol: &EquilibriumSolution, probes: &[(f64, f64)]) -> EnergyReport {
    let k = sol.components.len();
    let mut energy = 0.0;
    for a in 0..k {
        let ca = &sol.components[a];
        for b in 0..k {
            let mab = sol.interaction[a][b];
            if mab == 0.0 {
                continue;
            }
            let cb = &sol.components[b];
            let block = kernel_block(&ca.edges, &cb.edges);
            let nb = cb.len();
            let mut s = 0.0;
            for i in 0..ca.len() {
                let row = &block[i * nb..(i + 1) * nb];
                s += ca.weights[i] * row.iter().zip(&cb.weights).map(|(x, y)| x * y).sum::<f64>();
            }
            energy += mab * s;
        }
        energy += 2.0 * ca.weights.iter().zip(&ca.field).map(|(w, f)| w * f).sum::<f64>();
    }
    let potentials = sol
        .components
        .iter()
        .map(|c| probes.iter().map(|&z| c.potential(z)).collect())
        .collect();
    EnergyReport {
        energy,
        stored_energy: sol.energy,
        relative_mismatch: (energy - sol.energy).abs() / sol.energy.abs().max(f64::MIN_POSITIVE),
        probes: probes.to_vec(),
        potentials,
    }
}

/// Vector energy of discrete measures with self-interaction of each atom
/// omitted.
pub fn discrete_energy(measures: &[DiscreteMeasure], interaction: &[[f64; 2]; 2]) -> f64 {
    let mut e = 0.0;
    for (a, ma) in measures.iter().enumerate() {
        for (b, mb) in measures.iter().enumerate() {
            let mut s = 0.0;
            for (i, (p, wp)) in ma.points().iter().zip(ma.weights()).enumerate() {
                for (j, (q, wq)) in mb.points().iter().zip(mb.weights()).enumerate() {
                    if a == b && i == j {
                        continue;
                    }
                    s -= wp * wq * (p.0 - q.0).hypot(p.1 - q.1).ln();
                }
            }
            e += interaction[a][b] * s;
        }
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplex_projection() {
        let mut v = vec![0.5, 2.0, -1.0];
        project_simplex(&mut v, 1.0);
        assert_eq!(v, vec![0.0, 1.0, 0.0]);
        let mut u = vec![0.0; 4];
        project_simplex(&mut u, 2.0);
        assert_eq!(u, vec![0.5; 4]);
    }

    #[test]
    fn point_masses_energy() {
        let mu0 = DiscreteMeasure::new(vec![(0.0, 0.0)], vec![1.0], 1.0).unwrap();
        let mu1 = DiscreteMeasure::new(vec![(3.0, 0.0)], vec![1.0], 1.0).unwrap();
        let e = discrete_energy(&[mu0, mu1], &NIKISHIN_INTERACTION);
        assert!((e - 3f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_problems() {
        let p = EquilibriumProblem::scalar(Segment::unit(), 1.0, ExternalField::Zero, 20);
        assert!(p.validate().is_err());
        let q = EquilibriumProblem::nikishin(Segment::unit(), Segment::new(0, 2).unwrap(), 60);
        assert!(matches!(q.validate(), Err(Error::Geometry(_))));
        let r = EquilibriumProblem::nikishin(Segment::unit(), Segment::new(2, 3).unwrap(), 60)
            .with_interaction([[1.0, 2.0], [2.0, 1.0]]);
        assert!(r.validate().is_err());
    }

    #[test]
    fn scaled_segment_energy() {
        let sol = solve_scalar(&Segment::new(2, 3).unwrap(), 1.0, ExternalField::Zero, 100).unwrap();
        assert!((sol.energy - 4f64.ln()).abs() < 1e-2);
    }
}
