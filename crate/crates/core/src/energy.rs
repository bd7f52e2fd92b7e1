//! Power-amplifier efficiency, energy per delivered symbol and composite scoring.

use std::cmp::Ordering;

use crate::error::{Error, Result};

/// Linear PA with output back-off proportional to PAPR.
///
/// The defaults are illustrative and meant to be overridden.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PaModel {
    pub eta_max: f64,
    /// `OBO_dB = obo_slope · PAPR_dB`.
    pub obo_slope: f64,
    pub p_static: f64,
    pub p_avg: f64,
    pub symbol_rate: f64,
}

impl Default for PaModel {
    fn default() -> Self {
        PaModel { eta_max: 0.6, obo_slope: 1.0, p_static: 0.5, p_avg: 1.0, symbol_rate: 1e6 }
    }
}

impl PaModel {
    pub fn validate(&self) -> Result<()> {
        let positive = [self.eta_max, self.obo_slope, self.p_avg, self.symbol_rate]
            .iter()
            .all(|v| *v > 0.0 && v.is_finite());
        if !positive || self.eta_max > 1.0 || !(self.p_static >= 0.0) {
            return Err(Error::InvalidInput(format!("invalid PA model {self:?}")));
        }
        Ok(())
    }
}

/// `η = η_max · 10^(-obo_slope·PAPR_dB/10)`.
pub fn pa_efficiency(papr_db: f64, pa: &PaModel) -> f64 {
    pa.eta_max * libm::pow(10.0, -pa.obo_slope * papr_db / 10.0)
}

/// `P_cons = P_avg / η + P_static`.
pub fn consumed_power(pa: &PaModel, papr_db: f64) -> f64 {
    pa.p_avg / pa_efficiency(papr_db, pa) + pa.p_static
}

/// `E_succ = P_cons / (R_s (1 - SER))`.
pub fn energy_per_success(p_cons: f64, symbol_rate: f64, ser: f64) -> Result<f64> {
    if ser >= 1.0 {
        return Err(Error::UndefinedEnergy);
    }
    if !(ser >= 0.0) {
        return Err(Error::InvalidInput(format!("SER {ser} outside [0, 1)")));
    }
    Ok(p_cons / (symbol_rate * (1.0 - ser)))
}

/// Power-efficiency term of the composite score: `10^(-PAPR_dB/10)`, i.e.
/// the relative PA efficiency at unit back-off slope.
pub fn power_efficiency_score(papr_db: f64) -> f64 {
    libm::pow(10.0, -papr_db / 10.0)
}

/// Weights of the composite score.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoreWeights {
    pub w_dmin: f64,
    pub w_power: f64,
    pub w_ser: f64,
    /// Reference distance; `None` means the largest `d_min` among the ranked designs.
    pub d_ref: Option<f64>,
}

impl Default for ScoreWeights {
    fn default() -> Self {
        ScoreWeights { w_dmin: 0.35, w_power: 0.25, w_ser: 0.40, d_ref: None }
    }
}

impl ScoreWeights {
    pub fn validate(&self) -> Result<()> {
        let w = [self.w_dmin, self.w_power, self.w_ser];
        if w.iter().any(|x| !(*x >= 0.0)) || (w.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!("weights {w:?} must be nonnegative and sum to 1")));
        }
        if let Some(d) = self.d_ref {
            if !(d > 0.0) {
                return Err(Error::InvalidInput(format!("d_ref {d} must be positive")));
            }
        }
        Ok(())
    }

    /// Rescale so the three weights sum to one.
    pub fn renormalized(self) -> Self {
        let s = self.w_dmin + self.w_power + self.w_ser;
        ScoreWeights { w_dmin: self.w_dmin / s, w_power: self.w_power / s, w_ser: self.w_ser / s, ..self }
    }
}

/// `w_d·min(d_min/d_ref, 1) + w_p·power_efficiency(PAPR) + w_s·(1 - SER)`.
pub fn composite_score(d_min: f64, papr_db: f64, ser_10db: f64, d_ref: f64, w: &ScoreWeights) -> f64 {
    w.w_dmin * (d_min / d_ref).min(1.0) + w.w_power * power_efficiency_score(papr_db) + w.w_ser * (1.0 - ser_10db)
}

/// Derived energy figures for one design.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyReport {
    pub papr_db: f64,
    pub eta: f64,
    pub p_cons: f64,
    pub e_succ: f64,
    pub power_eff_score: f64,
    pub composite: f64,
}

impl EnergyReport {
    pub fn evaluate(d_min: f64, papr_db: f64, ser: f64, d_ref: f64, pa: &PaModel, w: &ScoreWeights) -> Result<Self> {
        pa.validate()?;
        let p_cons = consumed_power(pa, papr_db);
        Ok(EnergyReport {
            papr_db,
            eta: pa_efficiency(papr_db, pa),
            p_cons,
            e_succ: energy_per_success(p_cons, pa.symbol_rate, ser)?,
            power_eff_score: power_efficiency_score(papr_db),
            composite: composite_score(d_min, papr_db, ser, d_ref, w),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DesignEntry {
    pub label: String,
    pub d_min: f64,
    pub papr_db: f64,
    pub ser_10db: f64,
}

impl DesignEntry {
    pub fn new(label: impl Into<String>, d_min: f64, papr_db: f64, ser_10db: f64) -> Self {
        DesignEntry { label: label.into(), d_min, papr_db, ser_10db }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedDesign {
    pub rank: usize,
    pub label: String,
    pub d_min: f64,
    pub papr_db: f64,
    pub ser_10db: f64,
    pub power_eff: f64,
    pub composite: f64,
}

/// Rank designs by descending composite score, ties by label.
pub fn rank_designs(entries: &[DesignEntry], w: &ScoreWeights) -> Result<Vec<RankedDesign>> {
    w.validate()?;
    let d_ref = match w.d_ref {
        Some(d) => d,
        None => entries.iter().map(|e| e.d_min).fold(0.0, f64::max),
    };
    if !(d_ref > 0.0) {
        return Err(Error::InvalidInput("no positive d_min to use as reference".into()));
    }
    let mut ranked: Vec<RankedDesign> = entries
        .iter()
        .map(|e| RankedDesign {
            rank: 0,
            label: e.label.clone(),
            d_min: e.d_min,
            papr_db: e.papr_db,
            ser_10db: e.ser_10db,
            power_eff: power_efficiency_score(e.papr_db),
            composite: composite_score(e.d_min, e.papr_db, e.ser_10db, d_ref, w),
        })
        .collect();
    ranked.sort_by(|a, b| match b.composite.total_cmp(&a.composite) {
        Ordering::Equal => a.label.cmp(&b.label),
        o => o,
    });
    for (i, r) in ranked.iter_mut().enumerate() {
        r.rank = i + 1;
    }
    Ok(ranked)
}
