//! Deterministic constellation generators.
//!
//! Every generator evaluates its trigonometry through `libm` in a fixed
//! order, so the same [`SchemeSpec`] yields bit-identical points everywhere.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::constellation::{make_constellation, normalize_energy, ComplexPoint, Constellation};
use crate::error::{Error, Result};

/// Golden ratio `(1 + √5) / 2`.
pub const GOLDEN_RATIO: f64 = 1.618_033_988_749_895;

/// Golden angle `2π(1 - 1/φ)` in radians (≈ 137.508°).
pub const GOLDEN_ANGLE: f64 = TAU * (1.0 - 1.0 / GOLDEN_RATIO);

/// Constellation families known to the generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    Bpsk,
    Qpsk,
    Mpsk,
    SquareQam,
    HexLattice,
    Apsk,
    CrossShaped,
    Elliptical,
    CircularAsymmetric,
    StarShaped,
    Triangular,
    HexRing,
    ProbShapedQam,
    DiscGam,
    BellGam,
    FromFile,
}

impl Scheme {
    pub const ALL: [Scheme; 16] = [
        Scheme::Bpsk,
        Scheme::Qpsk,
        Scheme::Mpsk,
        Scheme::SquareQam,
        Scheme::HexLattice,
        Scheme::Apsk,
        Scheme::CrossShaped,
        Scheme::Elliptical,
        Scheme::CircularAsymmetric,
        Scheme::StarShaped,
        Scheme::Triangular,
        Scheme::HexRing,
        Scheme::ProbShapedQam,
        Scheme::DiscGam,
        Scheme::BellGam,
        Scheme::FromFile,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Scheme::Bpsk => "bpsk",
            Scheme::Qpsk => "qpsk",
            Scheme::Mpsk => "mpsk",
            Scheme::SquareQam => "square-qam",
            Scheme::HexLattice => "hex-lattice",
            Scheme::Apsk => "apsk",
            Scheme::CrossShaped => "cross",
            Scheme::Elliptical => "elliptical",
            Scheme::CircularAsymmetric => "circular-asymmetric",
            Scheme::StarShaped => "star",
            Scheme::Triangular => "triangular",
            Scheme::HexRing => "hex-ring",
            Scheme::ProbShapedQam => "prob-shaped-qam",
            Scheme::DiscGam => "disc-gam",
            Scheme::BellGam => "bell-gam",
            Scheme::FromFile => "file",
        }
    }

    /// Parameter keys accepted by the scheme, with a short signature.
    pub fn params(self) -> &'static [(&'static str, &'static str)] {
        match self {
            Scheme::Mpsk => &[("phase", "phase offset in radians, default 0")],
            Scheme::Apsk => &[
                ("rings", "points per ring K_r, summing to M"),
                ("radii", "ring radii rho_r, one per ring"),
                ("offsets", "per-ring phase offsets in radians, default 0"),
            ],
            Scheme::Elliptical => &[
                ("alpha", "in-phase scale of the M-PSK base, default 1.0"),
                ("beta", "quadrature scale of the M-PSK base, default 0.6"),
            ],
            Scheme::CircularAsymmetric => &[("inner_ratio", "inner/outer radius ratio, default 0.5")],
            Scheme::StarShaped => &[("inner_ratio", "inner/outer radius ratio, default 0.5")],
            Scheme::HexRing => &[("outer_radius", "outer ring radius (inner ring = 1), default 2.0")],
            Scheme::ProbShapedQam => {
                &[("lambda", "Maxwell-Boltzmann rate on the odd-integer grid, default 0.1")]
            }
            Scheme::BellGam => &[("lambda", "radial rate; default gives unit raw variance")],
            _ => &[],
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Scheme::Bpsk => "antipodal binary PSK (M = 2)",
            Scheme::Qpsk => "quadrature PSK (M = 4)",
            Scheme::Mpsk => "M points uniformly on the unit circle",
            Scheme::SquareQam => "square QAM on the odd-integer grid (M = L^2)",
            Scheme::HexLattice => "A2 hexagonal lattice truncated to the M lowest-energy points",
            Scheme::Apsk => "concentric rings of uniformly spaced phases",
            Scheme::CrossShaped => "square QAM with corners moved onto the axes",
            Scheme::Elliptical => "M-PSK with anisotropic axis scaling",
            Scheme::CircularAsymmetric => "two rings (M/4 inner, 3M/4 outer) with half-step inner offset",
            Scheme::StarShaped => "M spokes with alternating outer/inner radii",
            Scheme::Triangular => "triangular grid rows filling an upright triangle",
            Scheme::HexRing => "1 + 6 + 9 concentric rings (M = 16)",
            Scheme::ProbShapedQam => "square QAM with Maxwell-Boltzmann probabilities",
            Scheme::DiscGam => "golden-angle spiral, radii sqrt(k/M)",
            Scheme::BellGam => "golden-angle spiral with bell-shaped radii",
            Scheme::FromFile => "points read from a CSV file (index,re,im[,prob])",
        }
    }

    /// Order used when none is given.
    pub fn default_order(self) -> usize {
        match self {
            Scheme::Bpsk => 2,
            Scheme::Qpsk => 4,
            Scheme::FromFile => 0,
            _ => 16,
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        Scheme::ALL
            .into_iter()
            .find(|sc| sc.id() == key)
            .ok_or_else(|| Error::UnsupportedScheme(format!("unknown scheme id `{s}`")))
    }
}

/// Parametric recipe producing a [`Constellation`].
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeSpec {
    pub scheme: Scheme,
    pub order: usize,
    pub params: BTreeMap<String, Vec<f64>>,
    /// CSV source for [`Scheme::FromFile`].
    pub source: Option<PathBuf>,
}

impl SchemeSpec {
    pub fn new(scheme: Scheme, order: usize) -> Self {
        SchemeSpec { scheme, order, params: BTreeMap::new(), source: None }
    }

    pub fn from_file(path: impl Into<PathBuf>) -> Self {
        SchemeSpec { source: Some(path.into()), ..SchemeSpec::new(Scheme::FromFile, 0) }
    }

    pub fn with_param(mut self, key: &str, values: impl Into<Vec<f64>>) -> Self {
        self.params.insert(key.to_string(), values.into());
        self
    }

    /// Label carried by the generated constellation, e.g. `square-qam-16`.
    pub fn label(&self) -> String {
        match (&self.scheme, &self.source) {
            (Scheme::FromFile, Some(p)) => p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "file".into()),
            _ => format!("{}-{}", self.scheme.id(), self.order),
        }
    }

    fn scalar(&self, key: &str, default: f64) -> Result<f64> {
        match self.params.get(key) {
            None => Ok(default),
            Some(v) if v.len() == 1 && v[0].is_finite() => Ok(v[0]),
            Some(v) => Err(Error::InvalidInput(format!("parameter `{key}` expects one value, got {v:?}"))),
        }
    }

    fn check_param_keys(&self) -> Result<()> {
        let allowed = self.scheme.params();
        for key in self.params.keys() {
            if !allowed.iter().any(|(k, _)| k == key) {
                return Err(Error::InvalidInput(format!(
                    "scheme `{}` has no parameter `{key}`",
                    self.scheme
                )));
            }
        }
        Ok(())
    }
}

/// The fourteen families simulated by default sweeps, all at their default order.
pub fn simulated_catalog() -> Vec<SchemeSpec> {
    [
        Scheme::Bpsk,
        Scheme::Qpsk,
        Scheme::Mpsk,
        Scheme::SquareQam,
        Scheme::HexLattice,
        Scheme::CrossShaped,
        Scheme::Elliptical,
        Scheme::CircularAsymmetric,
        Scheme::StarShaped,
        Scheme::Triangular,
        Scheme::HexRing,
        Scheme::ProbShapedQam,
        Scheme::DiscGam,
        Scheme::BellGam,
    ]
    .into_iter()
    .map(|s| SchemeSpec::new(s, s.default_order()))
    .collect()
}

fn polar(r: f64, theta: f64) -> ComplexPoint {
    ComplexPoint::new(r * libm::cos(theta), r * libm::sin(theta))
}

fn unsupported(spec: &SchemeSpec, why: &str) -> Error {
    Error::UnsupportedScheme(format!("{} with M = {}: {why}", spec.scheme, spec.order))
}

fn square_side(spec: &SchemeSpec) -> Result<usize> {
    let m = spec.order;
    let l = (m as f64).sqrt().round() as usize;
    if l * l != m || l < 2 || l % 2 != 0 {
        return Err(unsupported(spec, "M must be an even square (4, 16, 64, ...)"));
    }
    Ok(l)
}

fn qam_grid(l: usize) -> Vec<ComplexPoint> {
    let level = |i: usize| (2 * i) as f64 - (l as f64 - 1.0);
    let mut pts = Vec::with_capacity(l * l);
    for i in 0..l {
        for q in 0..l {
            pts.push(ComplexPoint::new(level(i), level(q)));
        }
    }
    pts
}

fn psk_points(m: usize, phase: f64) -> Vec<ComplexPoint> {
    (0..m).map(|k| polar(1.0, TAU * k as f64 / m as f64 + phase)).collect()
}

/// Generate the (energy-normalized) constellation described by `spec`.
pub fn generate(spec: &SchemeSpec) -> Result<Constellation> {
    spec.check_param_keys()?;
    let m = spec.order;
    if spec.scheme != Scheme::FromFile && m < 2 {
        return Err(unsupported(spec, "M must be at least 2"));
    }
    let label = spec.label();
    let mut probs: Option<Vec<f64>> = None;

    let points: Vec<ComplexPoint> = match spec.scheme {
        Scheme::Bpsk => {
            if m != 2 {
                return Err(unsupported(spec, "BPSK has M = 2"));
            }
            vec![ComplexPoint::new(1.0, 0.0), ComplexPoint::new(-1.0, 0.0)]
        }
        Scheme::Qpsk => {
            if m != 4 {
                return Err(unsupported(spec, "QPSK has M = 4"));
            }
            let a = std::f64::consts::FRAC_1_SQRT_2;
            vec![
                ComplexPoint::new(a, a),
                ComplexPoint::new(-a, a),
                ComplexPoint::new(-a, -a),
                ComplexPoint::new(a, -a),
            ]
        }
        Scheme::Mpsk => psk_points(m, spec.scalar("phase", 0.0)?),
        Scheme::SquareQam => qam_grid(square_side(spec)?),
        Scheme::HexLattice => hex_lattice_points(m),
        Scheme::Apsk => apsk_points(spec)?,
        Scheme::CrossShaped => {
            let l = square_side(spec)?;
            if l < 4 {
                return Err(unsupported(spec, "cross needs M >= 16"));
            }
            let edge = (l - 1) as f64;
            let mut pts: Vec<ComplexPoint> =
                qam_grid(l).into_iter().filter(|p| !(p.re.abs() == edge && p.im.abs() == edge)).collect();
            let reach = (l + 1) as f64;
            pts.extend([
                ComplexPoint::new(reach, 0.0),
                ComplexPoint::new(0.0, reach),
                ComplexPoint::new(-reach, 0.0),
                ComplexPoint::new(0.0, -reach),
            ]);
            pts
        }
        Scheme::Elliptical => {
            let alpha = spec.scalar("alpha", 1.0)?;
            let beta = spec.scalar("beta", 0.6)?;
            if !(alpha > 0.0 && beta > 0.0) {
                return Err(Error::InvalidInput("alpha and beta must be positive".into()));
            }
            psk_points(m, 0.0).into_iter().map(|p| ComplexPoint::new(alpha * p.re, beta * p.im)).collect()
        }
        Scheme::CircularAsymmetric => {
            if m % 4 != 0 {
                return Err(unsupported(spec, "M must be a multiple of 4"));
            }
            let ratio = positive_ratio(spec.scalar("inner_ratio", 0.5)?)?;
            let (n_in, n_out) = (m / 4, 3 * m / 4);
            let step_in = TAU / n_in as f64;
            let mut pts: Vec<ComplexPoint> =
                (0..n_in).map(|k| polar(ratio, step_in * k as f64 + 0.5 * step_in)).collect();
            pts.extend((0..n_out).map(|k| polar(1.0, TAU * k as f64 / n_out as f64)));
            pts
        }
        Scheme::StarShaped => {
            if m % 2 != 0 {
                return Err(unsupported(spec, "M must be even"));
            }
            let ratio = positive_ratio(spec.scalar("inner_ratio", 0.5)?)?;
            (0..m)
                .map(|k| polar(if k % 2 == 0 { 1.0 } else { ratio }, TAU * k as f64 / m as f64))
                .collect()
        }
        Scheme::Triangular => triangular_points(m),
        Scheme::HexRing => {
            if m != 16 {
                return Err(unsupported(spec, "hex-ring is defined for M = 16"));
            }
            let outer = spec.scalar("outer_radius", 2.0)?;
            if !(outer > 1.0) {
                return Err(Error::InvalidInput("outer_radius must exceed 1".into()));
            }
            let mut pts = vec![ComplexPoint::new(0.0, 0.0)];
            pts.extend((0..6).map(|k| polar(1.0, PI / 3.0 * k as f64)));
            pts.extend((0..9).map(|k| polar(outer, TAU * k as f64 / 9.0 + PI / 9.0)));
            pts
        }
        Scheme::ProbShapedQam => {
            let pts = qam_grid(square_side(spec)?);
            let lambda = spec.scalar("lambda", 0.1)?;
            if !(lambda >= 0.0) {
                return Err(Error::InvalidInput("lambda must be nonnegative".into()));
            }
            probs = Some(maxwell_boltzmann(&pts, lambda));
            pts
        }
        Scheme::DiscGam => (1..=m)
            .map(|k| polar((k as f64 / m as f64).sqrt(), k as f64 * GOLDEN_ANGLE))
            .collect(),
        Scheme::BellGam => {
            let tail = |k: usize| -libm::log(1.0 - k as f64 / (m as f64 + 1.0));
            let default_lambda = (1..=m).map(tail).sum::<f64>() / m as f64;
            let lambda = spec.scalar("lambda", default_lambda)?;
            if !(lambda > 0.0) {
                return Err(Error::InvalidInput("lambda must be positive".into()));
            }
            (1..=m).map(|k| polar((tail(k) / lambda).sqrt(), k as f64 * GOLDEN_ANGLE)).collect()
        }
        Scheme::FromFile => {
            let path = spec
                .source
                .as_ref()
                .ok_or_else(|| Error::InvalidInput("file scheme needs a source path".into()))?;
            let c = crate::io::read_constellation_csv(path)?;
            if spec.order != 0 && spec.order != c.order() {
                return Err(unsupported(spec, &format!("file holds {} points", c.order())));
            }
            return normalize_energy(c.with_label(label));
        }
    };

    normalize_energy(make_constellation(points, probs, label)?)
}

fn positive_ratio(r: f64) -> Result<f64> {
    if r > 0.0 && r < 1.0 {
        Ok(r)
    } else {
        Err(Error::InvalidInput(format!("inner_ratio must lie in (0, 1), got {r}")))
    }
}

/// Maxwell-Boltzmann probabilities `exp(-λ|x|²) / Z` over `points`.
pub fn maxwell_boltzmann(points: &[ComplexPoint], lambda: f64) -> Vec<f64> {
    let w: Vec<f64> = points.iter().map(|p| libm::exp(-lambda * p.norm_sqr())).collect();
    let z: f64 = w.iter().sum();
    w.into_iter().map(|x| x / z).collect()
}

fn apsk_points(spec: &SchemeSpec) -> Result<Vec<ComplexPoint>> {
    let m = spec.order;
    let (rings, radii, offsets): (Vec<f64>, Vec<f64>, Vec<f64>) = match spec.params.get("rings") {
        Some(r) => {
            let radii = spec
                .params
                .get("radii")
                .cloned()
                .ok_or_else(|| Error::InvalidInput("apsk needs `radii` alongside `rings`".into()))?;
            let offsets = spec.params.get("offsets").cloned().unwrap_or_else(|| vec![0.0; r.len()]);
            (r.clone(), radii, offsets)
        }
        None => match m {
            16 => (vec![4.0, 12.0], vec![1.0, 2.7], vec![PI / 4.0, PI / 12.0]),
            32 => (vec![4.0, 12.0, 16.0], vec![1.0, 2.64, 4.64], vec![PI / 4.0, PI / 12.0, 0.0]),
            _ => return Err(unsupported(spec, "no default ring layout; pass rings and radii")),
        },
    };
    if rings.len() != radii.len() || rings.len() != offsets.len() || rings.is_empty() {
        return Err(Error::InvalidInput("rings, radii and offsets must have equal length".into()));
    }
    let mut counts = Vec::with_capacity(rings.len());
    for &k in &rings {
        if !(k >= 1.0) || k.fract() != 0.0 {
            return Err(Error::InvalidInput(format!("ring size {k} is not a positive integer")));
        }
        counts.push(k as usize);
    }
    if counts.iter().sum::<usize>() != m {
        return Err(Error::InvalidInput(format!("ring sizes sum to {}, expected {m}", counts.iter().sum::<usize>())));
    }
    if radii.iter().any(|&r| !(r > 0.0)) {
        return Err(Error::InvalidInput("ring radii must be positive".into()));
    }
    let mut pts = Vec::with_capacity(m);
    for ((&k, &rho), &off) in counts.iter().zip(&radii).zip(&offsets) {
        pts.extend((0..k).map(|i| polar(rho, TAU * i as f64 / k as f64 + off)));
    }
    Ok(pts)
}

/// The `m` lowest-energy points of the A2 lattice (unit spacing) around the
/// origin. Shells are filled in order of increasing radius; within a shell
/// points are ordered by angle in `[0, 2π)`, and a partially used shell of
/// size `s` contributes the points at indices `floor(i·s/c)`, `i < c`.
fn hex_lattice_points(m: usize) -> Vec<ComplexPoint> {
    let reach = 2 * ((m as f64).sqrt().ceil() as i64) + 2;
    // Squared norm of i·b1 + j·b2 is the integer i² + ij + j².
    let mut shells: BTreeMap<i64, Vec<(f64, ComplexPoint)>> = BTreeMap::new();
    let half_sqrt3 = 3f64.sqrt() / 2.0;
    for i in -reach..=reach {
        for j in -reach..=reach {
            let n = i * i + i * j + j * j;
            let p = ComplexPoint::new(i as f64 + 0.5 * j as f64, j as f64 * half_sqrt3);
            let mut angle = libm::atan2(p.im, p.re);
            if angle < 0.0 {
                angle += TAU;
            }
            shells.entry(n).or_default().push((angle, p));
        }
    }
    let mut pts = Vec::with_capacity(m);
    for (_, mut shell) in shells {
        let need = m - pts.len();
        if need == 0 {
            break;
        }
        shell.sort_by(|a, b| a.0.total_cmp(&b.0));
        let s = shell.len();
        if s <= need {
            pts.extend(shell.into_iter().map(|(_, p)| p));
        } else {
            pts.extend((0..need).map(|i| shell[i * s / need].1));
        }
    }
    pts
}

/// First `m` points of a triangular grid filled row by row from the apex,
/// with a partial last row centered as closely as the grid allows; the set
/// is then shifted so its centroid is the origin.
fn triangular_points(m: usize) -> Vec<ComplexPoint> {
    let h = 3f64.sqrt() / 2.0;
    let mut pts = Vec::with_capacity(m);
    let mut row = 0usize;
    while pts.len() < m {
        let width = row + 1;
        let take = width.min(m - pts.len());
        let start = (width - take) / 2;
        for j in start..start + take {
            pts.push(ComplexPoint::new(j as f64 - row as f64 / 2.0, -(row as f64) * h));
        }
        row += 1;
    }
    let centroid = pts.iter().sum::<ComplexPoint>() / m as f64;
    pts.into_iter().map(|p| p - centroid).collect()
}
