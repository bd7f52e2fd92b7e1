use rayon::prelude::*;

use super::{check_order, finish, objective, FitnessWeights, OptimizerConfig, OptimizerTrace};
use crate::error::{Error, Result};
use crate::rng::{derive_stream, RngStream};

/// Genetic algorithm settings.
#[derive(Debug, Clone, PartialEq)]
pub struct GaConfig {
    pub population: usize,
    pub generations: usize,
    /// Fraction of the population copied unchanged each generation (rounded up).
    pub elite_fraction: f64,
    pub crossover_prob: f64,
    pub mutation_sigma: f64,
    pub mutation_prob: f64,
    pub jitter: f64,
    pub jitter_prob: f64,
    /// Genes are initialised and clipped to `[-bound, bound]`.
    pub bound: f64,
    pub seed: u64,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            population: 100,
            generations: 1000,
            elite_fraction: 0.1,
            crossover_prob: 1.0,
            mutation_sigma: 0.08,
            mutation_prob: 0.5,
            jitter: 0.15,
            jitter_prob: 0.2,
            bound: 2.0,
            seed: 1,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<()> {
        let prob = |p: f64| (0.0..=1.0).contains(&p);
        let ok = self.population >= 2
            && self.generations >= 1
            && self.elite_fraction > 0.0
            && self.elite_fraction < 1.0
            && prob(self.crossover_prob)
            && prob(self.mutation_prob)
            && prob(self.jitter_prob)
            && self.mutation_sigma >= 0.0
            && self.jitter >= 0.0
            && self.bound > 0.0
            && self.bound.is_finite();
        if !ok {
            return Err(Error::InvalidInput(format!("invalid GA configuration {self:?}")));
        }
        Ok(())
    }

    fn elites(&self) -> usize {
        ((self.elite_fraction * self.population as f64).ceil() as usize).clamp(1, self.population - 1)
    }
}

/// Draw a rank in `0..n` (0 = best) with weight `n - rank`.
fn pick_rank(rng: &mut RngStream, n: usize) -> usize {
    let total = (n * (n + 1) / 2) as u64;
    let mut ticket = rng.below(total);
    for r in 0..n {
        let w = (n - r) as u64;
        if ticket < w {
            return r;
        }
        ticket -= w;
    }
    n - 1
}

/// Search `m` points with a generational GA over `2m` real genes.
///
/// Each generation keeps the elites, then fills the population with
/// children of rank-selected parents: one-point crossover, per-gene Gaussian
/// mutation, per-gene uniform jitter, and clipping to the box.
pub fn ga_optimize(m: usize, cfg: &GaConfig, w: &FitnessWeights) -> Result<OptimizerTrace> {
    check_order(m)?;
    cfg.validate()?;
    w.validate()?;
    let dim = 2 * m;
    let b = cfg.bound;
    let n = cfg.population;
    let n_elite = cfg.elites();
    let mut rng = derive_stream(cfg.seed, &["ga".into(), m.into()]);

    let mut pop: Vec<Vec<f64>> = (0..n).map(|_| (0..dim).map(|_| rng.uniform_in(-b, b)).collect()).collect();
    let mut costs: Vec<f64> = pop.par_iter().map(|g| objective(g, w)).collect();

    let mut trace = Vec::with_capacity(cfg.generations);
    for _ in 0..cfg.generations {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| costs[i].total_cmp(&costs[j]).then(i.cmp(&j)));

        let mut next: Vec<Vec<f64>> = order[..n_elite].iter().map(|&i| pop[i].clone()).collect();
        let mut next_costs: Vec<f64> = order[..n_elite].iter().map(|&i| costs[i]).collect();
        let mut children = Vec::with_capacity(n - n_elite);
        while next.len() + children.len() < n {
            let a = &pop[order[pick_rank(&mut rng, n)]];
            let bp = &pop[order[pick_rank(&mut rng, n)]];
            let mut child = a.clone();
            if rng.uniform() < cfg.crossover_prob {
                let cut = 1 + rng.below((dim - 1) as u64) as usize;
                child[cut..].copy_from_slice(&bp[cut..]);
            }
            for g in child.iter_mut() {
                if rng.uniform() < cfg.mutation_prob {
                    *g += cfg.mutation_sigma * rng.normal();
                }
            }
            for g in child.iter_mut() {
                if rng.uniform() < cfg.jitter_prob {
                    *g += rng.uniform_in(-cfg.jitter, cfg.jitter);
                }
                *g = g.clamp(-b, b);
            }
            children.push(child);
        }
        let child_costs: Vec<f64> = children.par_iter().map(|g| objective(g, w)).collect();
        next.extend(children);
        next_costs.extend(child_costs);
        pop = next;
        costs = next_costs;
        let best = costs.iter().copied().fold(f64::INFINITY, f64::min);
        trace.push(best);
    }
    let best = (0..n).fold(0, |bi, i| if costs[i] < costs[bi] { i } else { bi });
    finish(&pop[best], trace, cfg.seed, OptimizerConfig::Ga(cfg.clone()), *w, format!("ga-{m}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::min_distance;

    fn small(seed: u64) -> GaConfig {
        GaConfig { population: 40, generations: 150, seed, ..GaConfig::default() }
    }

    #[test]
    fn rank_weights_are_linear() {
        let mut rng = derive_stream(5, &[]);
        let n = 4;
        let mut counts = [0usize; 4];
        let draws = 200_000;
        for _ in 0..draws {
            counts[pick_rank(&mut rng, n)] += 1;
        }
        for (r, c) in counts.iter().enumerate() {
            let expect = (n - r) as f64 / 10.0;
            assert!((*c as f64 / draws as f64 - expect).abs() < 0.005);
        }
    }

    #[test]
    fn elite_count_rounds_up() {
        assert_eq!(GaConfig::default().elites(), 10);
        assert_eq!(GaConfig { population: 15, ..GaConfig::default() }.elites(), 2);
    }

    #[test]
    fn trace_nonincreasing_and_deterministic() {
        let w = FitnessWeights::default();
        let a = ga_optimize(8, &small(3), &w).unwrap();
        assert_eq!(a, ga_optimize(8, &small(3), &w).unwrap());
        assert_eq!(a.best_costs.len(), 150);
        assert!(a.best_costs.windows(2).all(|p| p[1] <= p[0]));
    }

    #[test]
    fn no_variation_means_constant_best() {
        let cfg = GaConfig { crossover_prob: 0.0, mutation_prob: 0.0, jitter_prob: 0.0, ..small(2) };
        let t = ga_optimize(8, &cfg, &FitnessWeights::default()).unwrap();
        assert!(t.best_costs.iter().all(|&c| c == t.best_costs[0]));
    }

    #[test]
    fn antipodal_pair_found() {
        let t = ga_optimize(2, &small(1), &FitnessWeights::default()).unwrap();
        assert!(min_distance(&t.constellation) > 1.95);
    }

    #[test]
    fn rejects_bad_config() {
        let w = FitnessWeights::default();
        assert!(ga_optimize(4, &GaConfig { elite_fraction: 1.0, ..small(1) }, &w).is_err());
        assert!(ga_optimize(4, &GaConfig { mutation_prob: 1.5, ..small(1) }, &w).is_err());
    }
}
