use rayon::prelude::*;

use super::{check_order, finish, objective, FitnessWeights, OptimizerConfig, OptimizerTrace};
use crate::error::{Error, Result};
use crate::rng::derive_stream;

/// Particle swarm settings.
#[derive(Debug, Clone, PartialEq)]
pub struct PsoConfig {
    pub particles: usize,
    pub iterations: usize,
    /// Inertia at the first iteration, decayed linearly to `inertia_end`.
    pub inertia_start: f64,
    pub inertia_end: f64,
    pub c1: f64,
    pub c2: f64,
    /// Positions are initialised and clipped to `[-bound, bound]`.
    pub bound: f64,
    /// Velocities are initialised in `[-init_velocity, init_velocity]`.
    pub init_velocity: f64,
    pub seed: u64,
}

impl Default for PsoConfig {
    fn default() -> Self {
        PsoConfig {
            particles: 100,
            iterations: 1000,
            inertia_start: 0.9,
            inertia_end: 0.4,
            c1: 1.6,
            c2: 1.6,
            bound: 2.0,
            init_velocity: 0.2,
            seed: 1,
        }
    }
}

impl PsoConfig {
    pub fn validate(&self) -> Result<()> {
        let finite = [self.inertia_start, self.inertia_end, self.c1, self.c2, self.init_velocity]
            .iter()
            .all(|x| x.is_finite() && *x >= 0.0);
        if self.particles == 0 || self.iterations == 0 || !finite || !(self.bound > 0.0 && self.bound.is_finite()) {
            return Err(Error::InvalidInput(format!("invalid PSO configuration {self:?}")));
        }
        Ok(())
    }

    fn inertia(&self, t: usize) -> f64 {
        if self.iterations == 1 {
            return self.inertia_start;
        }
        let frac = t as f64 / (self.iterations - 1) as f64;
        self.inertia_start + (self.inertia_end - self.inertia_start) * frac
    }
}

fn argmin(costs: &[f64]) -> usize {
    let mut best = 0;
    for (i, c) in costs.iter().enumerate() {
        if *c < costs[best] {
            best = i;
        }
    }
    best
}

/// Search `m` points with a global-best particle swarm.
///
/// Per coordinate: `v ← ωv + c1·r1·(p_best - x) + c2·r2·(g_best - x)`,
/// `x ← clip(x + v)`, with fresh `r1, r2 ~ U[0,1)` for every coordinate.
pub fn pso_optimize(m: usize, cfg: &PsoConfig, w: &FitnessWeights) -> Result<OptimizerTrace> {
    check_order(m)?;
    cfg.validate()?;
    w.validate()?;
    let dim = 2 * m;
    let b = cfg.bound;
    let mut rng = derive_stream(cfg.seed, &["pso".into(), m.into()]);

    let mut pos: Vec<Vec<f64>> = (0..cfg.particles)
        .map(|_| (0..dim).map(|_| rng.uniform_in(-b, b)).collect())
        .collect();
    let mut vel: Vec<Vec<f64>> = (0..cfg.particles)
        .map(|_| (0..dim).map(|_| rng.uniform_in(-cfg.init_velocity, cfg.init_velocity)).collect())
        .collect();
    let costs: Vec<f64> = pos.par_iter().map(|x| objective(x, w)).collect();
    let mut pbest = pos.clone();
    let mut pbest_cost = costs;
    let mut g = argmin(&pbest_cost);
    let mut gbest = pbest[g].clone();
    let mut gbest_cost = pbest_cost[g];

    let mut trace = Vec::with_capacity(cfg.iterations);
    for t in 0..cfg.iterations {
        let omega = cfg.inertia(t);
        for (i, (x, v)) in pos.iter_mut().zip(vel.iter_mut()).enumerate() {
            for d in 0..dim {
                let r1 = rng.uniform();
                let r2 = rng.uniform();
                v[d] = omega * v[d] + cfg.c1 * r1 * (pbest[i][d] - x[d]) + cfg.c2 * r2 * (gbest[d] - x[d]);
                x[d] = (x[d] + v[d]).clamp(-b, b);
            }
        }
        let costs: Vec<f64> = pos.par_iter().map(|x| objective(x, w)).collect();
        for (i, c) in costs.into_iter().enumerate() {
            if c < pbest_cost[i] {
                pbest_cost[i] = c;
                pbest[i].clone_from(&pos[i]);
            }
        }
        g = argmin(&pbest_cost);
        if pbest_cost[g] < gbest_cost {
            gbest_cost = pbest_cost[g];
            gbest.clone_from(&pbest[g]);
        }
        trace.push(gbest_cost);
    }
    finish(&gbest, trace, cfg.seed, OptimizerConfig::Pso(cfg.clone()), *w, format!("pso-{m}"))
}
