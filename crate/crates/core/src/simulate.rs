//! Monte Carlo SER estimation and SNR sweeps.
//!
//! Work is split into fixed-size chunks; chunk `i` of a cell draws from the
//! stream keyed by `(seed, scheme label, channel, SNR, i)`. Error counts are
//! summed as integers, so a result depends only on `(seed, n, chunk size)`
//! and never on how many threads ran the chunks.

use rayon::prelude::*;

use crate::channel::{nearest, transmit, ChannelModel, SymbolSampler};
use crate::constellation::Constellation;
use crate::error::{Error, Result};
use crate::metrics::SnrSpec;
use crate::rng::{derive_stream, RngStream};
use crate::schemes::{generate, simulated_catalog, SchemeSpec};

pub const DEFAULT_CHUNK_SIZE: usize = 10_000;
pub const MIN_SYMBOLS: usize = 1_000;
/// Two-sided 95% normal quantile.
const Z95: f64 = 1.96;

/// One SER estimate with its Wald 95% interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SerPoint {
    pub snr_db: f64,
    pub symbols_sent: u64,
    pub symbol_errors: u64,
    pub ser: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u64,
}

impl SerPoint {
    /// Binomial standard error `√(p̂(1-p̂)/N)`.
    pub fn std_error(&self) -> f64 {
        (self.ser * (1.0 - self.ser) / self.symbols_sent as f64).sqrt()
    }

    pub fn half_width(&self) -> f64 {
        Z95 * self.std_error()
    }
}

/// Wald interval `p̂ ± 1.96·√(p̂(1-p̂)/n)`, clamped to `[0, 1]`.
///
/// Known to collapse to a point at `p̂ ∈ {0, 1}`; kept in this form for
/// comparability with published tables.
pub fn confidence_interval(p_hat: f64, n: u64) -> (f64, f64) {
    let hw = Z95 * (p_hat * (1.0 - p_hat) / n as f64).sqrt();
    ((p_hat - hw).max(0.0), (p_hat + hw).min(1.0))
}

fn chunk_stream(seed: u64, label: &str, model: ChannelModel, snr: SnrSpec, chunk: usize) -> RngStream {
    derive_stream(
        seed,
        &[label.into(), model.id().into(), snr.db().to_bits().into(), chunk.into()],
    )
}

fn chunk_errors(c: &Constellation, sampler: &SymbolSampler, model: ChannelModel, snr: SnrSpec, len: usize, s: &mut RngStream) -> u64 {
    let sigma = (snr.n0() / 2.0).sqrt();
    let pts = c.points();
    let sent: Vec<usize> = (0..len).map(|_| sampler.draw(s)).collect();
    let mut errors = 0;
    for &k in &sent {
        let r = transmit(pts[k], model, sigma, s);
        if nearest(r.y, r.h, pts) != k {
            errors += 1;
        }
    }
    errors
}

/// Estimate SER with the default chunk size.
pub fn estimate_ser(c: &Constellation, model: ChannelModel, snr: SnrSpec, n: usize, master_seed: u64) -> Result<SerPoint> {
    estimate_ser_chunked(c, model, snr, n, master_seed, DEFAULT_CHUNK_SIZE)
}

/// Estimate SER from `n` symbols split into chunks of `chunk_size`.
///
/// Chunks run on the current rayon pool.
pub fn estimate_ser_chunked(
    c: &Constellation,
    model: ChannelModel,
    snr: SnrSpec,
    n: usize,
    master_seed: u64,
    chunk_size: usize,
) -> Result<SerPoint> {
    if n < MIN_SYMBOLS {
        return Err(Error::InvalidInput(format!("need at least {MIN_SYMBOLS} symbols, got {n}")));
    }
    if chunk_size == 0 {
        return Err(Error::InvalidInput("chunk size must be positive".into()));
    }
    let sampler = SymbolSampler::new(c);
    let chunks = n.div_ceil(chunk_size);
    let errors: u64 = (0..chunks)
        .into_par_iter()
        .map(|i| {
            let len = chunk_size.min(n - i * chunk_size);
            let mut s = chunk_stream(master_seed, c.label(), model, snr, i);
            chunk_errors(c, &sampler, model, snr, len, &mut s)
        })
        .sum();
    let ser = errors as f64 / n as f64;
    let (ci_low, ci_high) = confidence_interval(ser, n as u64);
    Ok(SerPoint {
        snr_db: snr.db(),
        symbols_sent: n as u64,
        symbol_errors: errors,
        ser,
        ci_low,
        ci_high,
        seed: master_seed,
    })
}

/// Relative SER increase from AWGN to Rayleigh, in percent.
pub fn rayleigh_penalty(ser_awgn: f64, ser_rayleigh: f64) -> Result<f64> {
    if !(ser_awgn > 0.0) {
        return Err(Error::UndefinedPenalty);
    }
    Ok(100.0 * (ser_rayleigh - ser_awgn) / ser_awgn)
}

/// Inclusive SNR grid in dB.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrGrid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl SnrGrid {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        let g = SnrGrid { start, stop, step };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<()> {
        if !(self.step > 0.0) || !self.start.is_finite() || !self.stop.is_finite() || self.stop < self.start {
            return Err(Error::InvalidInput(format!(
                "bad SNR grid {}:{}:{}",
                self.start, self.stop, self.step
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.start + i as f64 * self.step).collect()
    }
}

impl Default for SnrGrid {
    fn default() -> Self {
        SnrGrid { start: -5.0, stop: 50.0, step: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub schemes: Vec<SchemeSpec>,
    pub channels: Vec<ChannelModel>,
    pub snr: SnrGrid,
    pub symbols: usize,
    pub seed: u64,
    pub chunk_size: usize,
    /// Thread count; `None` uses the ambient rayon pool.
    pub workers: Option<usize>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            schemes: simulated_catalog(),
            channels: ChannelModel::ALL.to_vec(),
            snr: SnrGrid::default(),
            symbols: 1_000_000,
            seed: 1,
            chunk_size: DEFAULT_CHUNK_SIZE,
            workers: None,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        self.snr.validate()?;
        if self.symbols < MIN_SYMBOLS {
            return Err(Error::InvalidInput(format!("symbols per point must be >= {MIN_SYMBOLS}")));
        }
        if self.chunk_size == 0 {
            return Err(Error::InvalidInput("chunk size must be positive".into()));
        }
        if self.workers == Some(0) {
            return Err(Error::InvalidInput("workers must be positive".into()));
        }
        if self.schemes.is_empty() || self.channels.is_empty() {
            return Err(Error::InvalidInput("sweep needs at least one scheme and one channel".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub scheme: String,
    pub channel: ChannelModel,
    pub point: SerPoint,
    pub chunk_size: usize,
}

/// A scheme that could not be generated; the sweep continues without it.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeFailure {
    pub scheme: String,
    pub error: Error,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub failures: Vec<SchemeFailure>,
}

/// Run every `(scheme, channel, SNR)` cell of the grid.
///
/// Rows come back ordered by scheme, then channel, then SNR, as listed in
/// the configuration.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepResult> {
    cfg.validate()?;
    match cfg.workers {
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| Error::InvalidInput(e.to_string()))?;
            pool.install(|| sweep_in_pool(cfg))
        }
        None => sweep_in_pool(cfg),
    }
}

fn sweep_in_pool(cfg: &SweepConfig) -> Result<SweepResult> {
    let mut result = SweepResult::default();
    let mut constellations = Vec::new();
    for spec in &cfg.schemes {
        match generate(spec) {
            Ok(c) => constellations.push(c),
            Err(error) => result.failures.push(SchemeFailure { scheme: spec.label(), error }),
        }
    }
    let snrs = cfg.snr.values();
    let mut cells = Vec::new();
    for c in &constellations {
        for &ch in &cfg.channels {
            for &db in &snrs {
                cells.push((c, ch, db));
            }
        }
    }
    let points: Vec<Result<SerPoint>> = cells
        .par_iter()
        .map(|&(c, ch, db)| estimate_ser_chunked(c, ch, SnrSpec::from_db(db)?, cfg.symbols, cfg.seed, cfg.chunk_size))
        .collect();
    for ((c, ch, _), p) in cells.into_iter().zip(points) {
        result.rows.push(SweepRow {
            scheme: c.label().to_string(),
            channel: ch,
            point: p?,
            chunk_size: cfg.chunk_size,
        });
    }
    Ok(result)
}
