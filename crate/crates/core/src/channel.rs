//! Symbol sampling, channel application and ML detection.

use std::fmt;
use std::str::FromStr;

use crate::constellation::{ComplexPoint, Constellation};
use crate::error::{Error, Result};
use crate::metrics::SnrSpec;
use crate::rng::RngStream;

/// Flat channel with perfect receiver CSI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChannelModel {
    /// `h = 1`.
    Awgn,
    /// `h ~ CN(0, 1)`, drawn independently per symbol.
    RayleighFlat,
}

impl ChannelModel {
    pub const ALL: [ChannelModel; 2] = [ChannelModel::Awgn, ChannelModel::RayleighFlat];

    pub fn id(self) -> &'static str {
        match self {
            ChannelModel::Awgn => "awgn",
            ChannelModel::RayleighFlat => "rayleigh",
        }
    }
}

impl fmt::Display for ChannelModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for ChannelModel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "awgn" => Ok(ChannelModel::Awgn),
            "rayleigh" | "rayleigh-flat" => Ok(ChannelModel::RayleighFlat),
            other => Err(Error::InvalidInput(format!("unknown channel `{other}`"))),
        }
    }
}

/// Channel output for one symbol together with the gain seen by the receiver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Received {
    pub y: ComplexPoint,
    pub h: ComplexPoint,
}

/// Cumulative distribution over the stored point order, for inverse-CDF draws.
#[derive(Debug, Clone)]
pub struct SymbolSampler {
    cdf: Vec<f64>,
}

impl SymbolSampler {
    pub fn new(c: &Constellation) -> Self {
        let mut acc = 0.0;
        let cdf = c
            .probs()
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        SymbolSampler { cdf }
    }

    pub fn draw(&self, s: &mut RngStream) -> usize {
        let u = s.uniform();
        // first index whose cumulative mass exceeds u; rounding slack lands on
        // the last index with nonzero mass
        let i = self.cdf.partition_point(|&c| c <= u);
        if i < self.cdf.len() {
            i
        } else {
            let last = self.cdf[self.cdf.len() - 1];
            self.cdf.partition_point(|&c| c < last)
        }
    }
}

/// Draw `n` i.i.d. symbol indices from the constellation's probabilities.
pub fn sample_symbols(c: &Constellation, n: usize, s: &mut RngStream) -> Vec<usize> {
    let sampler = SymbolSampler::new(c);
    (0..n).map(|_| sampler.draw(s)).collect()
}

/// Pass symbols through the channel.
///
/// Per symbol, a Rayleigh gain consumes one Box–Muller pair before the noise
/// consumes another; AWGN consumes only the noise pair.
pub fn apply_channel(
    indices: &[usize],
    c: &Constellation,
    model: ChannelModel,
    snr: SnrSpec,
    s: &mut RngStream,
) -> Vec<Received> {
    let sigma = (snr.n0() / 2.0).sqrt();
    let pts = c.points();
    indices
        .iter()
        .map(|&i| transmit(pts[i], model, sigma, s))
        .collect()
}

#[inline]
pub(crate) fn transmit(x: ComplexPoint, model: ChannelModel, sigma: f64, s: &mut RngStream) -> Received {
    let h = match model {
        ChannelModel::Awgn => ComplexPoint::new(1.0, 0.0),
        ChannelModel::RayleighFlat => {
            let (a, b) = s.normal_pair();
            ComplexPoint::new(a, b) * std::f64::consts::FRAC_1_SQRT_2
        }
    };
    let (nr, ni) = s.normal_pair();
    Received { y: h * x + ComplexPoint::new(nr * sigma, ni * sigma), h }
}

/// ML decision `argmin_k |y - h s_k|²`, ties to the smallest index.
pub fn ml_detect(y: ComplexPoint, h: ComplexPoint, c: &Constellation) -> Result<usize> {
    if h.norm_sqr() == 0.0 {
        return Err(Error::SingularChannel);
    }
    Ok(nearest(y, h, c.points()))
}

#[inline]
pub(crate) fn nearest(y: ComplexPoint, h: ComplexPoint, pts: &[ComplexPoint]) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (k, s) in pts.iter().enumerate() {
        let d = (y - h * s).norm_sqr();
        if d < best_d {
            best_d = d;
            best = k;
        }
    }
    best
}
