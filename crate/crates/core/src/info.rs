//! Monte Carlo mutual information of a discrete input over complex AWGN.

use crate::channel::SymbolSampler;
use crate::constellation::{ComplexPoint, Constellation};
use crate::error::{Error, Result};
use crate::metrics::SnrSpec;
use crate::rng::derive_stream;

const BATCHES: usize = 10;
pub const MIN_MI_SAMPLES: usize = 10_000;

/// An estimate in bits per symbol with its batch-means standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MiEstimate {
    pub bits: f64,
    pub std_error: f64,
}

/// Estimate `I(X;Y)` for `Y = X + N`, `N ~ CN(0, N_0)`, `X` drawn with the
/// constellation's probabilities.
///
/// Each sample contributes `-log2 Σ_x' p(x') exp(-(|y-x'|² - |y-x|²)/N_0)`,
/// the exact log-likelihood ratio of the Gaussian channel, evaluated with a
/// log-sum-exp.
pub fn mutual_information(c: &Constellation, snr: SnrSpec, n_samples: usize, seed: u64) -> Result<MiEstimate> {
    if n_samples < MIN_MI_SAMPLES {
        return Err(Error::InvalidInput(format!(
            "mutual information needs at least {MIN_MI_SAMPLES} samples, got {n_samples}"
        )));
    }
    let n0 = snr.n0();
    let sigma = (n0 / 2.0).sqrt();
    let pts = c.points();
    let log_p: Vec<f64> = c.probs().iter().map(|&p| if p > 0.0 { p.ln() } else { f64::NEG_INFINITY }).collect();
    let sampler = SymbolSampler::new(c);
    let mut stream = derive_stream(seed, &["mutual-information".into(), c.label().into(), snr.db().to_bits().into()]);

    let per_batch = n_samples / BATCHES;
    let mut batch_means = Vec::with_capacity(BATCHES);
    let mut exps = vec![0.0; pts.len()];
    for b in 0..BATCHES {
        let len = if b + 1 == BATCHES { n_samples - per_batch * (BATCHES - 1) } else { per_batch };
        let mut acc = 0.0;
        for _ in 0..len {
            let k = sampler.draw(&mut stream);
            let (a, bq) = stream.normal_pair();
            let noise = ComplexPoint::new(a * sigma, bq * sigma);
            let y = pts[k] + noise;
            let base = noise.norm_sqr();
            let mut peak = f64::NEG_INFINITY;
            for (j, s) in pts.iter().enumerate() {
                let e = log_p[j] - ((y - s).norm_sqr() - base) / n0;
                exps[j] = e;
                peak = peak.max(e);
            }
            let lse = peak + exps.iter().map(|e| (e - peak).exp()).sum::<f64>().ln();
            acc -= lse;
        }
        batch_means.push(acc / len as f64 / std::f64::consts::LN_2);
    }
    let mean = batch_means.iter().sum::<f64>() / BATCHES as f64;
    let var = batch_means.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (BATCHES - 1) as f64;
    Ok(MiEstimate { bits: mean, std_error: (var / BATCHES as f64).sqrt() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schemes::{generate, simulated_catalog, Scheme, SchemeSpec};
    use crate::special::integrate;

    fn snr(db: f64) -> SnrSpec {
        SnrSpec::from_db(db).unwrap()
    }

    #[test]
    fn vanishing_snr_carries_no_information() {
        for spec in simulated_catalog() {
            let c = generate(&spec).unwrap();
            let mi = mutual_information(&c, snr(-40.0), 20_000, 1).unwrap();
            assert!(mi.bits.abs() < 0.02, "{}: {}", spec.label(), mi.bits);
        }
    }

    #[test]
    fn qam16_saturates_at_high_snr() {
        let c = generate(&SchemeSpec::new(Scheme::SquareQam, 16)).unwrap();
        let mi = mutual_information(&c, snr(30.0), 20_000, 2).unwrap();
        assert!((mi.bits - 4.0).abs() < 0.02);
    }

    /// Independent route: BPSK on the real axis sees real noise of variance
    /// N_0/2, so I = 1 - ∫ p(y|+1) log2(1 + exp(-2y/σ²)) dy.
    fn bpsk_oracle(snr_db: f64) -> f64 {
        let s2 = 0.5 * 10f64.powf(-snr_db / 10.0);
        let dens = |y: f64| (-(y - 1.0).powi(2) / (2.0 * s2)).exp() / (2.0 * std::f64::consts::PI * s2).sqrt();
        let f = |y: f64| {
            let t = -2.0 * y / s2;
            // log2(1 + e^t) without overflow
            let l = if t > 30.0 { t } else { t.exp().ln_1p() };
            dens(y) * l / std::f64::consts::LN_2
        };
        1.0 - integrate(f, -20.0, 20.0, 1e-12, 1e-14)
    }

    #[test]
    fn bpsk_matches_quadrature_oracle() {
        let oracle = bpsk_oracle(0.0);
        assert!((oracle - 0.721_451_590_790_389_8).abs() < 1e-9);
        let c = generate(&SchemeSpec::new(Scheme::Bpsk, 2)).unwrap();
        let mi = mutual_information(&c, snr(0.0), 200_000, 3).unwrap();
        assert!((mi.bits - oracle).abs() < 0.01, "{} vs {}", mi.bits, oracle);
    }

    #[test]
    fn bounded_by_capacity() {
        for spec in simulated_catalog() {
            let c = generate(&spec).unwrap();
            for db in [-5.0, 0.0, 5.0, 10.0, 20.0] {
                let s = snr(db);
                let mi = mutual_information(&c, s, 20_000, 4).unwrap();
                let cap = (c.order() as f64).log2().min((1.0 + s.linear()).log2());
                assert!(mi.bits <= cap + 3.0 * mi.std_error + 1e-12, "{} at {db}", spec.label());
            }
        }
    }

    #[test]
    fn deterministic_per_seed_and_rejects_small_n() {
        let c = generate(&SchemeSpec::new(Scheme::Qpsk, 4)).unwrap();
        let a = mutual_information(&c, snr(5.0), 10_000, 9).unwrap();
        let b = mutual_information(&c, snr(5.0), 10_000, 9).unwrap();
        assert_eq!(a, b);
        assert!(mutual_information(&c, snr(5.0), 9_999, 9).is_err());
    }
}
