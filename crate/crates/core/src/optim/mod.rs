//! Metaheuristic constellation design: fitness functions, PSO and GA.
//!
//! Candidates are flat vectors of `2M` reals `[re_0, im_0, re_1, im_1, ...]`
//! searched inside a box; every fitness evaluation works on a unit-energy
//! copy so the box size does not favour any scale.

mod ga;
mod pso;

pub use ga::{ga_optimize, GaConfig};
pub use pso::{pso_optimize, PsoConfig};

use crate::constellation::{make_constellation, normalize_energy, ComplexPoint, Constellation};
use crate::error::{Error, Result};
use crate::metrics::{union_bound_ser, SnrSpec};

/// Point sets whose normalized `d_min` falls below this get [`BARRIER_COST`].
pub const BARRIER_DMIN: f64 = 1e-4;
pub const BARRIER_COST: f64 = 1e9;

/// Switches the optimizers to the energy-aware objective.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyAware {
    pub lambda_papr: f64,
    pub snr_db: f64,
}

/// Weights of `-γ·d_min + α·Σ max(0, τ - d_ij)² + β·max(0, PAPR_dB - cap)²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitnessWeights {
    pub tau: f64,
    pub alpha: f64,
    pub papr_cap_db: f64,
    pub beta: f64,
    pub gamma: f64,
    pub energy: Option<EnergyAware>,
}

impl Default for FitnessWeights {
    fn default() -> Self {
        FitnessWeights { tau: 0.3, alpha: 1.0, papr_cap_db: 3.0, beta: 0.05, gamma: 1.0, energy: None }
    }
}

impl FitnessWeights {
    pub fn validate(&self) -> Result<()> {
        let ok = |x: f64| x >= 0.0 && x.is_finite();
        if !(ok(self.tau) && ok(self.alpha) && ok(self.beta) && ok(self.gamma)) || !self.papr_cap_db.is_finite() {
            return Err(Error::InvalidInput(format!("invalid fitness weights {self:?}")));
        }
        if let Some(e) = self.energy {
            if !ok(e.lambda_papr) || !e.snr_db.is_finite() {
                return Err(Error::InvalidInput(format!("invalid energy-aware weights {e:?}")));
            }
        }
        Ok(())
    }
}

/// Geometry of a candidate after unit-energy scaling.
struct Normalized {
    points: Vec<ComplexPoint>,
    d_min: f64,
}

fn normalized(points: &[ComplexPoint]) -> Option<Normalized> {
    let e = points.iter().map(|p| p.norm_sqr()).sum::<f64>() / points.len() as f64;
    if !(e > 0.0) || !e.is_finite() {
        return None;
    }
    let s = 1.0 / e.sqrt();
    let points: Vec<ComplexPoint> = points.iter().map(|p| p * s).collect();
    let mut d2 = f64::INFINITY;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            d2 = d2.min((points[i] - points[j]).norm_sqr());
        }
    }
    let d_min = d2.sqrt();
    (d_min >= BARRIER_DMIN).then_some(Normalized { points, d_min })
}

fn check_len(points: &[ComplexPoint]) -> Result<()> {
    if points.len() < 2 {
        return Err(Error::InvalidInput(format!("fitness needs at least 2 points, got {}", points.len())));
    }
    Ok(())
}

fn papr_db_unit(points: &[ComplexPoint]) -> f64 {
    let peak = points.iter().map(|p| p.norm_sqr()).fold(0.0, f64::max);
    10.0 * libm::log10(peak)
}

/// Penalized geometric cost; lower is better.
pub fn fitness(points: &[ComplexPoint], w: &FitnessWeights) -> Result<f64> {
    check_len(points)?;
    Ok(geometric_cost(points, w))
}

fn geometric_cost(points: &[ComplexPoint], w: &FitnessWeights) -> f64 {
    let Some(n) = normalized(points) else {
        return BARRIER_COST;
    };
    let p = &n.points;
    let mut spacing = 0.0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            let short = w.tau - (p[i] - p[j]).norm();
            if short > 0.0 {
                spacing += short * short;
            }
        }
    }
    let over = (papr_db_unit(p) - w.papr_cap_db).max(0.0);
    -w.gamma * n.d_min + w.alpha * spacing + w.beta * over * over
}

/// Union-bound SER surrogate plus a linear PAPR regularizer; lower is better.
///
/// `base` contributes only its barrier; the geometric weights are unused.
pub fn energy_aware_fitness(
    points: &[ComplexPoint],
    base: &FitnessWeights,
    lambda_papr: f64,
    snr: SnrSpec,
) -> Result<f64> {
    check_len(points)?;
    let _ = base;
    Ok(energy_cost(points, lambda_papr, snr))
}

fn energy_cost(points: &[ComplexPoint], lambda_papr: f64, snr: SnrSpec) -> f64 {
    let Some(n) = normalized(points) else {
        return BARRIER_COST;
    };
    let peak = n.points.iter().map(|p| p.norm_sqr()).fold(0.0, f64::max);
    let c = make_constellation(n.points, None, "candidate").expect("barrier excludes coincident points");
    union_bound_ser(&c, snr) + lambda_papr * peak
}

/// Cost used by the optimizers, dispatching on `w.energy`.
pub(crate) fn objective(genes: &[f64], w: &FitnessWeights) -> f64 {
    let points = genes_to_points(genes);
    match w.energy {
        None => geometric_cost(&points, w),
        Some(e) => match SnrSpec::from_db(e.snr_db) {
            Ok(snr) => energy_cost(&points, e.lambda_papr, snr),
            Err(_) => BARRIER_COST,
        },
    }
}

pub(crate) fn genes_to_points(genes: &[f64]) -> Vec<ComplexPoint> {
    genes.chunks_exact(2).map(|g| ComplexPoint::new(g[0], g[1])).collect()
}

/// Search settings echoed into the trace.
#[derive(Debug, Clone, PartialEq)]
pub enum OptimizerConfig {
    Pso(PsoConfig),
    Ga(GaConfig),
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerTrace {
    /// Best cost after each iteration or generation; nonincreasing.
    pub best_costs: Vec<f64>,
    /// Best candidate as searched, before normalization.
    pub raw_points: Vec<ComplexPoint>,
    /// Best candidate scaled to unit energy.
    pub constellation: Constellation,
    pub seed: u64,
    pub config: OptimizerConfig,
    pub weights: FitnessWeights,
}

impl OptimizerTrace {
    pub fn best_cost(&self) -> f64 {
        *self.best_costs.last().expect("at least one iteration")
    }
}

pub(crate) fn finish(
    genes: &[f64],
    best_costs: Vec<f64>,
    seed: u64,
    config: OptimizerConfig,
    weights: FitnessWeights,
    label: String,
) -> Result<OptimizerTrace> {
    let raw_points = genes_to_points(genes);
    let constellation = normalize_energy(make_constellation(raw_points.clone(), None, label)?)?;
    Ok(OptimizerTrace { best_costs, raw_points, constellation, seed, config, weights })
}

pub(crate) fn check_order(m: usize) -> Result<()> {
    if m < 2 {
        return Err(Error::InvalidInput(format!("constellation order must be >= 2, got {m}")));
    }
    Ok(())
}
