//! CSV readers and writers for constellations, sweeps, traces, metrics and rankings.
//!
//! Floating-point fields are printed with 9 significant digits in `%.9g`
//! style so that write → read → write is byte-stable.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::channel::ChannelModel;
use crate::constellation::{make_constellation, ComplexPoint, Constellation};
use crate::energy::RankedDesign;
use crate::error::{Error, Result};
use crate::simulate::{SerPoint, SweepRow};

pub const CONSTELLATION_HEADER: [&str; 4] = ["index", "re", "im", "prob"];
pub const SWEEP_HEADER: [&str; 10] =
    ["scheme", "channel", "snr_db", "symbols", "errors", "ser", "ci_low", "ci_high", "seed", "chunk_size"];
pub const TRACE_HEADER: [&str; 2] = ["iteration", "best_cost"];
pub const RANKING_HEADER: [&str; 7] = ["rank", "label", "d_min", "papr_db", "ser_10db", "power_eff", "composite"];
pub const METRICS_HEADER: [&str; 5] = ["scheme", "order", "d_min", "mean_dist", "papr_db"];

/// Format like C's `%.9g`.
pub fn fmt_sig9(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.8e}", x);
    let (mant, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    if !(-4..9).contains(&exp) {
        let mant = strip_zeros(mant);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mant}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (8 - exp).max(0) as usize;
        strip_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn parse_f64(field: &str, what: &str) -> Result<f64> {
    field.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad {what} `{field}`")))
}

fn parse_int<T: std::str::FromStr>(field: &str, what: &str) -> Result<T> {
    field.trim().parse::<T>().map_err(|_| Error::Parse(format!("bad {what} `{field}`")))
}

fn reader<R: Read>(r: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(r)
}

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w)
}

fn check_header(found: &csv::StringRecord, expected: &[&str]) -> Result<()> {
    if found.iter().ne(expected.iter().copied()) {
        return Err(Error::Parse(format!(
            "expected header `{}`, found `{}`",
            expected.join(","),
            found.iter().collect::<Vec<_>>().join(",")
        )));
    }
    Ok(())
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn create(path: &Path) -> Result<File> {
    File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Read `index,re,im[,prob]`. Rows may appear in any order; the index column
/// must be a permutation of `0..M`. Missing probabilities mean uniform.
pub fn parse_constellation_csv<R: Read>(r: R, label: &str) -> Result<Constellation> {
    let mut rd = reader(r);
    let header = rd.headers()?.clone();
    let with_prob = match header.len() {
        3 => {
            check_header(&header, &CONSTELLATION_HEADER[..3])?;
            false
        }
        _ => {
            check_header(&header, &CONSTELLATION_HEADER)?;
            true
        }
    };
    let mut rows: Vec<(usize, ComplexPoint, f64)> = Vec::new();
    for rec in rd.records() {
        let rec = rec?;
        let idx: usize = parse_int(&rec[0], "index")?;
        let p = ComplexPoint::new(parse_f64(&rec[1], "re")?, parse_f64(&rec[2], "im")?);
        let prob = if with_prob { parse_f64(&rec[3], "prob")? } else { 1.0 };
        rows.push((idx, p, prob));
    }
    rows.sort_by_key(|r| r.0);
    if rows.iter().enumerate().any(|(i, r)| r.0 != i) {
        return Err(Error::Parse("index column must enumerate 0..M exactly once".into()));
    }
    let points = rows.iter().map(|r| r.1).collect();
    let probs = with_prob.then(|| rows.iter().map(|r| r.2).collect());
    make_constellation(points, probs, label)
}

/// Read a constellation file; the label is the file stem. Points are taken
/// as written (no renormalization).
pub fn read_constellation_csv(path: &Path) -> Result<Constellation> {
    let label = path.file_stem().and_then(|s| s.to_str()).unwrap_or("file").to_string();
    parse_constellation_csv(open(path)?, &label)
}

pub fn write_constellation<W: Write>(w: W, c: &Constellation) -> Result<()> {
    let mut wr = writer(w);
    wr.write_record(CONSTELLATION_HEADER)?;
    for (i, (p, pr)) in c.points().iter().zip(c.probs()).enumerate() {
        wr.write_record([i.to_string(), fmt_sig9(p.re), fmt_sig9(p.im), fmt_sig9(*pr)])?;
    }
    wr.flush()?;
    Ok(())
}

pub fn write_constellation_csv(path: &Path, c: &Constellation) -> Result<()> {
    write_constellation(create(path)?, c)
}

pub fn write_sweep<W: Write>(w: W, rows: &[SweepRow]) -> Result<()> {
    let mut wr = writer(w);
    wr.write_record(SWEEP_HEADER)?;
    for r in rows {
        let p = &r.point;
        wr.write_record([
            r.scheme.clone(),
            r.channel.id().to_string(),
            fmt_sig9(p.snr_db),
            p.symbols_sent.to_string(),
            p.symbol_errors.to_string(),
            fmt_sig9(p.ser),
            fmt_sig9(p.ci_low),
            fmt_sig9(p.ci_high),
            p.seed.to_string(),
            r.chunk_size.to_string(),
        ])?;
    }
    wr.flush()?;
    Ok(())
}

pub fn parse_sweep_csv<R: Read>(r: R) -> Result<Vec<SweepRow>> {
    let mut rd = reader(r);
    check_header(rd.headers()?, &SWEEP_HEADER)?;
    let mut out = Vec::new();
    for rec in rd.records() {
        let rec = rec?;
        out.push(SweepRow {
            scheme: rec[0].to_string(),
            channel: rec[1].parse::<ChannelModel>().map_err(|e| Error::Parse(e.to_string()))?,
            point: SerPoint {
                snr_db: parse_f64(&rec[2], "snr_db")?,
                symbols_sent: parse_int(&rec[3], "symbols")?,
                symbol_errors: parse_int(&rec[4], "errors")?,
                ser: parse_f64(&rec[5], "ser")?,
                ci_low: parse_f64(&rec[6], "ci_low")?,
                ci_high: parse_f64(&rec[7], "ci_high")?,
                seed: parse_int(&rec[8], "seed")?,
            },
            chunk_size: parse_int(&rec[9], "chunk_size")?,
        });
    }
    Ok(out)
}

pub fn read_sweep_csv(path: &Path) -> Result<Vec<SweepRow>> {
    parse_sweep_csv(open(path)?)
}

pub fn write_sweep_csv(path: &Path, rows: &[SweepRow]) -> Result<()> {
    write_sweep(create(path)?, rows)
}

pub fn write_trace<W: Write>(w: W, best_costs: &[f64]) -> Result<()> {
    let mut wr = writer(w);
    wr.write_record(TRACE_HEADER)?;
    for (i, c) in best_costs.iter().enumerate() {
        wr.write_record([(i + 1).to_string(), fmt_sig9(*c)])?;
    }
    wr.flush()?;
    Ok(())
}

pub fn parse_trace_csv<R: Read>(r: R) -> Result<Vec<f64>> {
    let mut rd = reader(r);
    check_header(rd.headers()?, &TRACE_HEADER)?;
    rd.records().map(|rec| parse_f64(&rec?[1], "best_cost")).collect()
}

/// One row of the geometry metrics table.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRow {
    pub scheme: String,
    pub order: usize,
    pub d_min: f64,
    pub mean_dist: f64,
    pub papr_db: f64,
}

pub fn write_metrics<W: Write>(w: W, rows: &[MetricsRow]) -> Result<()> {
    let mut wr = writer(w);
    wr.write_record(METRICS_HEADER)?;
    for r in rows {
        wr.write_record([
            r.scheme.clone(),
            r.order.to_string(),
            fmt_sig9(r.d_min),
            fmt_sig9(r.mean_dist),
            fmt_sig9(r.papr_db),
        ])?;
    }
    wr.flush()?;
    Ok(())
}

pub fn parse_metrics_csv<R: Read>(r: R) -> Result<Vec<MetricsRow>> {
    let mut rd = reader(r);
    check_header(rd.headers()?, &METRICS_HEADER)?;
    let mut out = Vec::new();
    for rec in rd.records() {
        let rec = rec?;
        out.push(MetricsRow {
            scheme: rec[0].to_string(),
            order: parse_int(&rec[1], "order")?,
            d_min: parse_f64(&rec[2], "d_min")?,
            mean_dist: parse_f64(&rec[3], "mean_dist")?,
            papr_db: parse_f64(&rec[4], "papr_db")?,
        });
    }
    Ok(out)
}

pub fn write_ranking<W: Write>(w: W, rows: &[RankedDesign]) -> Result<()> {
    let mut wr = writer(w);
    wr.write_record(RANKING_HEADER)?;
    for r in rows {
        wr.write_record([
            r.rank.to_string(),
            r.label.clone(),
            fmt_sig9(r.d_min),
            fmt_sig9(r.papr_db),
            fmt_sig9(r.ser_10db),
            fmt_sig9(r.power_eff),
            fmt_sig9(r.composite),
        ])?;
    }
    wr.flush()?;
    Ok(())
}

pub fn parse_ranking_csv<R: Read>(r: R) -> Result<Vec<RankedDesign>> {
    let mut rd = reader(r);
    check_header(rd.headers()?, &RANKING_HEADER)?;
    let mut out = Vec::new();
    for rec in rd.records() {
        let rec = rec?;
        out.push(RankedDesign {
            rank: parse_int(&rec[0], "rank")?,
            label: rec[1].to_string(),
            d_min: parse_f64(&rec[2], "d_min")?,
            papr_db: parse_f64(&rec[3], "papr_db")?,
            ser_10db: parse_f64(&rec[4], "ser_10db")?,
            power_eff: parse_f64(&rec[5], "power_eff")?,
            composite: parse_f64(&rec[6], "composite")?,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schemes::{generate, Scheme, SchemeSpec};
    use proptest::prelude::*;

    #[test]
    fn sig9_matches_printf() {
        // expected strings from C printf("%.9g")
        let cases = [
            (0.0, "0"),
            (1.0, "1"),
            (-2.5, "-2.5"),
            (0.1, "0.1"),
            (1.0 / 3.0, "0.333333333"),
            (0.632_455_532_033_675_9, "0.632455532"),
            (123_456_789.0, "123456789"),
            (1_234_567_890.0, "1.23456789e+09"),
            (3.872_108_215_522_04e-6, "3.87210822e-06"),
            (0.000_123_456_789_1, "0.000123456789"),
            (1e-5, "1e-05"),
            (1e9, "1e+09"),
            (999_999_999.6, "1e+09"),
            (1e300, "1e+300"),
        ];
        for (x, s) in cases {
            assert_eq!(fmt_sig9(x), s, "{x}");
        }
    }

    fn bytes<F: FnOnce(&mut Vec<u8>) -> Result<()>>(f: F) -> Vec<u8> {
        let mut v = Vec::new();
        f(&mut v).unwrap();
        v
    }

    #[test]
    fn constellation_round_trip() {
        let c = generate(&SchemeSpec::new(Scheme::ProbShapedQam, 16)).unwrap();
        let a = bytes(|v| write_constellation(v, &c));
        let back = parse_constellation_csv(a.as_slice(), "x").unwrap();
        let b = bytes(|v| write_constellation(v, &back));
        assert_eq!(a, b);
        assert!(String::from_utf8(a).unwrap().starts_with("index,re,im,prob\n"));
    }

    #[test]
    fn missing_prob_column_is_uniform() {
        let text = "index,re,im\n0,1,0\n1,-1,0\n";
        let c = parse_constellation_csv(text.as_bytes(), "b").unwrap();
        assert_eq!(c.probs(), &[0.5, 0.5]);
    }

    #[test]
    fn shuffled_rows_are_reordered() {
        let text = "index,re,im,prob\n1,-1,0,0.25\n0,1,0,0.75\n";
        let c = parse_constellation_csv(text.as_bytes(), "b").unwrap();
        assert_eq!(c.points()[0], ComplexPoint::new(1.0, 0.0));
        assert_eq!(c.probs()[0], 0.75);
    }

    #[test]
    fn bad_inputs_rejected() {
        assert!(parse_constellation_csv("i,re,im\n0,1,0\n1,2,0\n".as_bytes(), "x").is_err());
        assert!(parse_constellation_csv("index,re,im\n0,1,0\n2,2,0\n".as_bytes(), "x").is_err());
        assert!(parse_constellation_csv("index,re,im\n0,1,0\n1,abc,0\n".as_bytes(), "x").is_err());
        assert!(parse_sweep_csv("scheme,channel\n".as_bytes()).is_err());
    }

    #[test]
    fn trace_round_trip() {
        let t = vec![-0.1, -0.25, -0.25, -0.613_000_1];
        let a = bytes(|v| write_trace(v, &t));
        assert_eq!(parse_trace_csv(a.as_slice()).unwrap(), t);
        assert!(String::from_utf8(a).unwrap().starts_with("iteration,best_cost\n1,-0.1\n"));
    }

    fn sig9(x: f64) -> f64 {
        fmt_sig9(x).parse().unwrap()
    }

    proptest! {
        #[test]
        fn sig9_is_idempotent(x in prop::num::f64::NORMAL | prop::num::f64::SUBNORMAL | prop::num::f64::ZERO) {
            let once = fmt_sig9(x);
            prop_assert_eq!(fmt_sig9(once.parse::<f64>().unwrap()), once);
        }

        #[test]
        fn sig9_keeps_nine_digits(x in -1e6f64..1e6) {
            prop_assume!(x != 0.0);
            prop_assert!(((sig9(x) - x) / x).abs() <= 5e-9);
        }

        #[test]
        fn sweep_round_trip(
            snr in -10.0f64..60.0,
            sent in 1000u64..10_000_000,
            frac in 0.0f64..1.0,
            seed in any::<u64>(),
            chunk in 1usize..100_000,
        ) {
            let errors = (sent as f64 * frac) as u64;
            let ser = errors as f64 / sent as f64;
            let (lo, hi) = crate::simulate::confidence_interval(ser, sent);
            let rows = vec![SweepRow {
                scheme: "square-qam-16".into(),
                channel: ChannelModel::RayleighFlat,
                point: SerPoint { snr_db: snr, symbols_sent: sent, symbol_errors: errors, ser, ci_low: lo, ci_high: hi, seed },
                chunk_size: chunk,
            }];
            let a = bytes(|v| write_sweep(v, &rows));
            let back = parse_sweep_csv(a.as_slice()).unwrap();
            prop_assert_eq!(back[0].point.symbols_sent, sent);
            prop_assert_eq!(back[0].point.seed, seed);
            let b = bytes(|v| write_sweep(v, &back));
            prop_assert_eq!(a, b);
        }

        #[test]
        fn constellation_file_round_trip(raw in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0, 0.01f64..1.0), 2..20)) {
            let pts: Vec<ComplexPoint> = raw.iter().map(|r| ComplexPoint::new(r.0, r.1)).collect();
            let total: f64 = raw.iter().map(|r| r.2).sum();
            let probs: Vec<f64> = raw.iter().map(|r| r.2 / total).collect();
            let Ok(c) = make_constellation(pts, Some(probs), "p") else { return Ok(()); };
            let a = bytes(|v| write_constellation(v, &c));
            let Ok(back) = parse_constellation_csv(a.as_slice(), "p") else { return Ok(()); };
            let b = bytes(|v| write_constellation(v, &back));
            prop_assert_eq!(a, b);
        }

        #[test]
        fn metrics_and_ranking_round_trip(d in 0.01f64..2.0, papr in 0.0f64..8.0, ser in 0.0f64..1.0) {
            let m = vec![MetricsRow { scheme: "disc-gam-16".into(), order: 16, d_min: d, mean_dist: d * 2.0, papr_db: papr }];
            let a = bytes(|v| write_metrics(v, &m));
            let b = bytes(|v| write_metrics(v, &parse_metrics_csv(a.as_slice()).unwrap()));
            prop_assert_eq!(a, b);
            let r = vec![RankedDesign { rank: 1, label: "x".into(), d_min: d, papr_db: papr, ser_10db: ser, power_eff: 0.5, composite: 0.7 }];
            let a = bytes(|v| write_ranking(v, &r));
            let b = bytes(|v| write_ranking(v, &parse_ranking_csv(a.as_slice()).unwrap()));
            prop_assert_eq!(a, b);
        }
    }
}
