//! Constellation data model.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A point in the complex baseband plane (in-phase + j·quadrature).
pub type ComplexPoint = Complex64;

/// Two points closer than this are treated as coincident.
pub const DUPLICATE_TOL: f64 = 1e-9;

/// Probability vectors summing to within this of one are accepted and
/// rescaled; anything further off is rejected.
const PROB_SUM_TOL: f64 = 1e-6;

/// Sums this close to one are kept as given, so that probabilities read back
/// from 9-significant-digit files are not perturbed by a rescale.
const PROB_KEEP_TOL: f64 = 1e-8;

/// A labeled set of `M >= 2` distinct points with transmit probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    label: String,
    points: Vec<ComplexPoint>,
    probs: Vec<f64>,
}

impl Constellation {
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn points(&self) -> &[ComplexPoint] {
        &self.points
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Constellation order `M`.
    pub fn order(&self) -> usize {
        self.points.len()
    }

    pub fn is_uniform(&self) -> bool {
        let u = 1.0 / self.points.len() as f64;
        self.probs.iter().all(|&p| p == u)
    }

    /// Probability-weighted average symbol energy `Σ p_k |s_k|²`.
    pub fn average_energy(&self) -> f64 {
        self.points.iter().zip(&self.probs).map(|(s, p)| p * s.norm_sqr()).sum()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
}

/// Build a constellation from raw points, defaulting to uniform probabilities.
///
/// The result is not energy-normalized; see [`normalize_energy`].
pub fn make_constellation(
    points: Vec<ComplexPoint>,
    probs: Option<Vec<f64>>,
    label: impl Into<String>,
) -> Result<Constellation> {
    let m = points.len();
    if m < 2 {
        return Err(Error::DegenerateConstellation(format!("need at least 2 points, got {m}")));
    }
    if let Some(bad) = points.iter().position(|p| !p.re.is_finite() || !p.im.is_finite()) {
        return Err(Error::DegenerateConstellation(format!("point {bad} is not finite")));
    }
    for i in 0..m {
        for j in i + 1..m {
            if (points[i] - points[j]).norm() <= DUPLICATE_TOL {
                return Err(Error::DegenerateConstellation(format!(
                    "points {i} and {j} coincide"
                )));
            }
        }
    }
    let probs = match probs {
        None => vec![1.0 / m as f64; m],
        Some(p) => validate_probs(p, m)?,
    };
    Ok(Constellation { label: label.into(), points, probs })
}

fn validate_probs(p: Vec<f64>, m: usize) -> Result<Vec<f64>> {
    if p.len() != m {
        return Err(Error::InvalidDistribution(format!(
            "{} probabilities for {m} points",
            p.len()
        )));
    }
    if let Some(bad) = p.iter().position(|&x| !x.is_finite() || x < 0.0) {
        return Err(Error::InvalidDistribution(format!("probability {bad} is {}", p[bad])));
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > PROB_SUM_TOL {
        return Err(Error::InvalidDistribution(format!("probabilities sum to {sum}")));
    }
    if (sum - 1.0).abs() <= PROB_KEEP_TOL {
        return Ok(p);
    }
    Ok(p.into_iter().map(|x| x / sum).collect())
}

/// Scale points so that `Σ p_k |s_k|² = 1`; probabilities and order are kept.
pub fn normalize_energy(c: Constellation) -> Result<Constellation> {
    let e = c.average_energy();
    if !(e > 0.0) || !e.is_finite() {
        return Err(Error::DegenerateConstellation(format!("average energy {e}")));
    }
    // Already unit energy to within rounding: leave the points bit-identical.
    if (e - 1.0).abs() <= 4.0 * f64::EPSILON {
        return Ok(c);
    }
    let scale = 1.0 / e.sqrt();
    let Constellation { label, points, probs } = c;
    let points = points.into_iter().map(|s| s * scale).collect();
    Ok(Constellation { label, points, probs })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(re: f64, im: f64) -> ComplexPoint {
        ComplexPoint::new(re, im)
    }

    #[test]
    fn uniform_default_probabilities() {
        let c = make_constellation(vec![pt(1.0, 0.0), pt(-1.0, 0.0)], None, "bpsk").unwrap();
        assert_eq!(c.probs(), &[0.5, 0.5]);
        assert_eq!(c.order(), 2);
    }

    #[test]
    fn coincident_points_rejected() {
        let err = make_constellation(vec![pt(1.0, 0.0), pt(1.0, 0.0)], None, "x").unwrap_err();
        assert!(matches!(err, Error::DegenerateConstellation(_)));
    }

    #[test]
    fn single_point_rejected() {
        assert!(make_constellation(vec![pt(1.0, 0.0)], None, "x").is_err());
    }

    #[test]
    fn bad_distributions_rejected() {
        let pts = vec![pt(1.0, 0.0), pt(-1.0, 0.0)];
        for probs in [vec![0.5], vec![1.5, -0.5], vec![0.3, 0.3], vec![f64::NAN, 1.0]] {
            let err = make_constellation(pts.clone(), Some(probs), "x").unwrap_err();
            assert!(matches!(err, Error::InvalidDistribution(_)));
        }
    }

    #[test]
    fn maxwell_boltzmann_qam_probabilities_sum_to_one() {
        let lambda = 0.1;
        let mut pts = Vec::new();
        for i in [-3.0, -1.0, 1.0, 3.0] {
            for q in [-3.0, -1.0, 1.0, 3.0] {
                pts.push(pt(i, q));
            }
        }
        // direct summation of exp(-λ|x|²)/Z
        let w: Vec<f64> = pts.iter().map(|s: &ComplexPoint| (-lambda * s.norm_sqr()).exp()).collect();
        let z: f64 = w.iter().sum();
        let probs: Vec<f64> = w.iter().map(|x| x / z).collect();
        let c = make_constellation(pts, Some(probs.clone()), "mb").unwrap();
        let sum: f64 = c.probs().iter().sum();
        assert!((sum - 1.0).abs() < 1e-12);
        for (a, b) in c.probs().iter().zip(&probs) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn normalize_scales_to_unit_energy() {
        let c = make_constellation(vec![pt(3.0, 0.0), pt(-3.0, 0.0)], None, "x").unwrap();
        let n = normalize_energy(c).unwrap();
        assert_eq!(n.points(), &[pt(1.0, 0.0), pt(-1.0, 0.0)]);
    }

    #[test]
    fn normalize_qam_grid_min_distance() {
        let mut pts = Vec::new();
        for i in [-3.0, -1.0, 1.0, 3.0] {
            for q in [-3.0, -1.0, 1.0, 3.0] {
                pts.push(pt(i, q));
            }
        }
        let c = normalize_energy(make_constellation(pts, None, "qam").unwrap()).unwrap();
        assert!((c.average_energy() - 1.0).abs() < 1e-12);
        let d = (c.points()[0] - c.points()[1]).norm();
        assert!((d - 2.0 / 10f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn normalize_is_idempotent() {
        let c = make_constellation(vec![pt(0.3, 2.0), pt(-1.0, 0.5), pt(0.0, -1.7)], None, "x").unwrap();
        let once = normalize_energy(c).unwrap();
        let twice = normalize_energy(once.clone()).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn zero_energy_rejected() {
        let c = make_constellation(vec![pt(0.0, 0.0), pt(1.0, 0.0)], Some(vec![1.0, 0.0]), "x").unwrap();
        assert!(matches!(normalize_energy(c), Err(Error::DegenerateConstellation(_))));
    }
}
