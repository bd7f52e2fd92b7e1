//! Geometric and analytic performance metrics.

use std::f64::consts::PI;

use crate::channel::ChannelModel;
use crate::constellation::Constellation;
use crate::error::{Error, Result};
use crate::special::{expect_exponential, q_function};

/// Packing density of the square lattice, `π/4`.
pub const PACKING_SQUARE: f64 = PI / 4.0;

/// Packing density of the hexagonal lattice, `π/(2√3)`; optimal in two dimensions.
pub const PACKING_HEX: f64 = 0.906_899_682_117_108_9;

/// Distances closer than this are merged into one spectrum line.
pub const SPECTRUM_MERGE_TOL: f64 = 1e-9;

/// Per-symbol SNR `γ_s = E_s/N_0` with unit symbol energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrSpec {
    snr_db: f64,
}

impl SnrSpec {
    pub fn from_db(snr_db: f64) -> Result<Self> {
        if !snr_db.is_finite() {
            return Err(Error::InvalidInput(format!("SNR {snr_db} dB is not finite")));
        }
        Ok(SnrSpec { snr_db })
    }

    pub fn db(&self) -> f64 {
        self.snr_db
    }

    /// Linear `γ_s`.
    pub fn linear(&self) -> f64 {
        libm::pow(10.0, self.snr_db / 10.0)
    }

    /// Noise power spectral density `N_0 = 1/γ_s`.
    pub fn n0(&self) -> f64 {
        1.0 / self.linear()
    }

    /// Per-bit SNR `γ_b = γ_s / log2 M`.
    pub fn per_bit(&self, order: usize) -> f64 {
        self.linear() / (order as f64).log2()
    }
}

/// Pairwise distances with multiplicities, ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceSpectrum {
    pub lines: Vec<(f64, usize)>,
}

impl DistanceSpectrum {
    pub fn total_pairs(&self) -> usize {
        self.lines.iter().map(|l| l.1).sum()
    }
}

fn pairwise_distances(c: &Constellation) -> impl Iterator<Item = f64> + '_ {
    let pts = c.points();
    (0..pts.len()).flat_map(move |i| (i + 1..pts.len()).map(move |j| (pts[i] - pts[j]).norm()))
}

/// Smallest pairwise Euclidean distance.
pub fn min_distance(c: &Constellation) -> f64 {
    pairwise_distances(c).fold(f64::INFINITY, f64::min)
}

/// Mean of all `M(M-1)/2` pairwise distances.
pub fn mean_distance(c: &Constellation) -> f64 {
    let m = c.order();
    pairwise_distances(c).sum::<f64>() / (m * (m - 1) / 2) as f64
}

pub fn distance_spectrum(c: &Constellation) -> DistanceSpectrum {
    let mut d: Vec<f64> = pairwise_distances(c).collect();
    d.sort_by(f64::total_cmp);
    let mut lines: Vec<(f64, usize)> = Vec::new();
    for x in d {
        match lines.last_mut() {
            Some((head, count)) if x - *head <= SPECTRUM_MERGE_TOL => *count += 1,
            _ => lines.push((x, 1)),
        }
    }
    DistanceSpectrum { lines }
}

/// `10·log10(max |s_k|² / Σ p_k |s_k|²)` over points with nonzero probability.
pub fn papr_db(c: &Constellation) -> f64 {
    10.0 * libm::log10(papr_linear(c))
}

pub fn papr_linear(c: &Constellation) -> f64 {
    let peak = c
        .points()
        .iter()
        .zip(c.probs())
        .filter(|(_, &p)| p > 0.0)
        .map(|(s, _)| s.norm_sqr())
        .fold(0.0, f64::max);
    peak / c.average_energy()
}

/// Union bound `Σ_i p_i Σ_{j≠i} Q(|s_i - s_j| / √(2 N_0))`.
///
/// Reduces to the usual `1/M` weighting for uniform constellations. Not
/// clamped to 1.
pub fn union_bound_ser(c: &Constellation, snr: SnrSpec) -> f64 {
    let scale = 1.0 / (2.0 * snr.n0()).sqrt();
    let pts = c.points();
    let mut total = 0.0;
    for (i, (si, pi)) in pts.iter().zip(c.probs()).enumerate() {
        let mut row = 0.0;
        for (j, sj) in pts.iter().enumerate() {
            if i != j {
                row += q_function((si - sj).norm() * scale);
            }
        }
        total += pi * row;
    }
    total
}

/// Families with a closed-form AWGN SER reference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AnalyticScheme {
    Bpsk,
    Qpsk,
    Mpsk,
    SquareQam,
}

fn awgn_ser(scheme: AnalyticScheme, m: usize, gamma: f64) -> f64 {
    match scheme {
        AnalyticScheme::Bpsk => q_function((2.0 * gamma).sqrt()),
        AnalyticScheme::Qpsk => {
            let q = q_function(gamma.sqrt());
            2.0 * q - q * q
        }
        AnalyticScheme::Mpsk => 2.0 * q_function((2.0 * gamma).sqrt() * (PI / m as f64).sin()),
        AnalyticScheme::SquareQam => {
            let mf = m as f64;
            let p = 2.0 * (1.0 - 1.0 / mf.sqrt()) * q_function((3.0 * gamma / (mf - 1.0)).sqrt());
            1.0 - (1.0 - p) * (1.0 - p)
        }
    }
}

/// Closed-form SER reference.
///
/// AWGN uses the textbook expressions (exact for BPSK, QPSK and square QAM;
/// the high-SNR approximation for M-PSK). Rayleigh averages the AWGN form over
/// an exponentially distributed instantaneous SNR by adaptive quadrature.
pub fn analytic_ser(scheme: AnalyticScheme, order: usize, snr: SnrSpec, channel: ChannelModel) -> Result<f64> {
    let ok = match scheme {
        AnalyticScheme::Bpsk => order == 2,
        AnalyticScheme::Qpsk => order == 4,
        AnalyticScheme::Mpsk => order >= 2,
        AnalyticScheme::SquareQam => {
            let l = (order as f64).sqrt().round() as usize;
            l * l == order && l >= 2
        }
    };
    if !ok {
        return Err(Error::UnsupportedScheme(format!("{scheme:?} has no closed form for M = {order}")));
    }
    let gamma = snr.linear();
    Ok(match channel {
        ChannelModel::Awgn => awgn_ser(scheme, order, gamma),
        ChannelModel::RayleighFlat => expect_exponential(|g| awgn_ser(scheme, order, gamma * g), 1e-9),
    })
}
