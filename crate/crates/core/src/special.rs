//! Special functions and quadrature used by the analytic SER references.

/// Gaussian tail probability `Q(x) = P(N(0,1) > x) = erfc(x/sqrt(2))/2`.
///
/// Backed by the `libm` port of the FreeBSD `erfc`, which is accurate to
/// about one ulp, well inside a relative error of 1e-12 over `[0, 8]`.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x * std::f64::consts::FRAC_1_SQRT_2)
}

// Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Globally adaptive Gauss-Kronrod quadrature of `f` over `[a, b]`.
///
/// Subdivides the interval with the largest error estimate until the summed
/// estimate drops below `max(abs_tol, rel_tol * |integral|)`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> f64 {
    const MAX_INTERVALS: usize = 2000;
    let (v, e) = gk15(&f, a, b);
    let mut intervals = vec![(a, b, v, e)];
    loop {
        let total: f64 = intervals.iter().map(|iv| iv.2).sum();
        let err: f64 = intervals.iter().map(|iv| iv.3).sum();
        if err <= abs_tol.max(rel_tol * total.abs()) || intervals.len() >= MAX_INTERVALS {
            return total;
        }
        let (worst, _) = intervals
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, iv)| if iv.3 > acc.1 { (i, iv.3) } else { acc });
        let (lo, hi, _, _) = intervals.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&f, lo, mid);
        let (v2, e2) = gk15(&f, mid, hi);
        intervals.push((lo, mid, v1, e1));
        intervals.push((mid, hi, v2, e2));
    }
}

/// `E[f(G)]` for `G ~ Exp(1)`, i.e. `∫_0^∞ f(g) e^{-g} dg`, with relative
/// error target `rel_tol`.
pub fn expect_exponential<F: Fn(f64) -> f64>(f: F, rel_tol: f64) -> f64 {
    // g = t / (1 - t) maps [0, 1) onto [0, inf); GK nodes never touch t = 1.
    integrate(
        |t| {
            let s = 1.0 - t;
            let g = t / s;
            f(g) * (-g).exp() / (s * s)
        },
        0.0,
        1.0,
        rel_tol,
        1e-300,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values computed with 40-digit arithmetic.
    const Q_REF: [(f64, f64); 11] = [
        (0.0, 0.5),
        (0.5, 0.308_537_538_725_986_896_36),
        (1.0, 0.158_655_253_931_457_051_41),
        (2.0, 0.022_750_131_948_179_207_2),
        (3.0, 0.001_349_898_031_630_094_526_7),
        (4.0, 3.167_124_183_311_992_125_4e-5),
        (4.472_135_954_999_58, 3.872_108_215_522_037_883_4e-6),
        (5.0, 2.866_515_718_791_939_116_7e-7),
        (6.0, 9.865_876_450_376_981_407e-10),
        (7.0, 1.279_812_543_885_835_004_4e-12),
        (8.0, 6.220_960_574_271_784_123_5e-16),
    ];

    #[test]
    fn q_matches_high_precision_reference() {
        for (x, q) in Q_REF {
            let rel = (q_function(x) - q).abs() / q;
            assert!(rel <= 1e-12, "Q({x}) rel err {rel}");
        }
    }

    #[test]
    fn q_symmetry() {
        for x in [0.1, 0.7, 1.3, 2.9] {
            assert!((q_function(x) + q_function(-x) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn integrates_polynomial_and_exponential() {
        let v = integrate(|x| x * x, 0.0, 3.0, 1e-12, 0.0);
        assert!((v - 9.0).abs() < 1e-12);
        let m = expect_exponential(|g| g * g, 1e-10);
        assert!((m - 2.0).abs() < 1e-8);
    }
}
