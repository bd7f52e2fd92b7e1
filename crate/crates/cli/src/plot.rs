//! Minimal, byte-stable SVG figures.

use std::fmt::Write;

use constkit_core::{derive_stream, papr_db, ChannelModel, Constellation, SweepRow};
use constkit_core::channel::SymbolSampler;

const W: f64 = 640.0;
const H: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 50.0;

const PALETTE: [&str; 16] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
    "#393b79", "#637939", "#8c6d31", "#843c39", "#7b4173", "#3182bd",
];

/// Draws on a fixed canvas with a linear map from data to pixels.
struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    out: String,
}

impl Frame {
    fn new(title: &str, x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
        let _ = writeln!(out, r#"<text x="{:.2}" y="18" text-anchor="middle">{}</text>"#, W / 2.0, escape(title));
        Frame { x0, x1, y0, y1, out }
    }

    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x0) / (self.x1 - self.x0) * (W - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        H - BOTTOM - (y - self.y0) / (self.y1 - self.y0) * (H - TOP - BOTTOM)
    }

    fn axes(&mut self, xlabel: &str, ylabel: &str, xticks: &[(f64, String)], yticks: &[(f64, String)]) {
        let (l, r, t, b) = (LEFT, W - RIGHT, TOP, H - BOTTOM);
        let _ = writeln!(
            self.out,
            r#"<rect x="{l:.2}" y="{t:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
            r - l,
            b - t
        );
        for (v, s) in xticks {
            let x = self.px(*v);
            let _ = writeln!(self.out, r##"<line x1="{x:.2}" y1="{t:.2}" x2="{x:.2}" y2="{b:.2}" stroke="#dddddd"/>"##);
            let _ = writeln!(self.out, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{s}</text>"#, b + 16.0);
        }
        for (v, s) in yticks {
            let y = self.py(*v);
            let _ = writeln!(self.out, r##"<line x1="{l:.2}" y1="{y:.2}" x2="{r:.2}" y2="{y:.2}" stroke="#dddddd"/>"##);
            let _ = writeln!(self.out, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{s}</text>"#, l - 6.0, y + 4.0);
        }
        let _ = writeln!(
            self.out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            (l + r) / 2.0,
            H - 12.0,
            escape(xlabel)
        );
        let _ = writeln!(
            self.out,
            r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">{}</text>"#,
            (t + b) / 2.0,
            (t + b) / 2.0,
            escape(ylabel)
        );
    }

    fn polyline(&mut self, pts: &[(f64, f64)], color: &str) {
        let coords: Vec<String> = pts.iter().map(|(x, y)| format!("{:.2},{:.2}", self.px(*x), self.py(*y))).collect();
        let _ = writeln!(
            self.out,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            coords.join(" ")
        );
    }

    fn legend(&mut self, names: &[String]) {
        let x = W - RIGHT + 12.0;
        for (i, name) in names.iter().enumerate() {
            let y = TOP + 12.0 + 16.0 * i as f64;
            let c = PALETTE[i % PALETTE.len()];
            let _ = writeln!(
                self.out,
                r#"<line x1="{x:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{c}" stroke-width="2"/>"#,
                x + 18.0
            );
            let _ = writeln!(self.out, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, x + 24.0, y + 4.0, escape(name));
        }
    }

    fn finish(mut self) -> String {
        self.out.push_str("</svg>\n");
        self.out
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn linear_ticks(lo: f64, hi: f64, n: usize) -> Vec<(f64, String)> {
    let raw = (hi - lo) / n as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * mag).find(|s| *s >= raw).unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last)
        .map(|k| {
            let v = k as f64 * step;
            let v = if v.abs() < step * 1e-9 { 0.0 } else { v };
            (v, format!("{}", (v * 1e6).round() / 1e6))
        })
        .collect()
}

/// One filled circle per point; axes share a scale so shapes are not distorted.
pub fn scatter(c: &Constellation) -> String {
    let r = c.points().iter().map(|p| p.re.abs().max(p.im.abs())).fold(0.0, f64::max) * 1.15;
    let r = if r > 0.0 { r } else { 1.0 };
    // square plotting area: stretch x range to the wider pixel extent
    let aspect = (W - LEFT - RIGHT) / (H - TOP - BOTTOM);
    let mut f = Frame::new(c.label(), -r * aspect, r * aspect, -r, r);
    let ticks = linear_ticks(-r, r, 6);
    let xticks = linear_ticks(-r * aspect, r * aspect, 8);
    f.axes("in-phase", "quadrature", &xticks, &ticks);
    let m = c.order() as f64;
    for (p, pr) in c.points().iter().zip(c.probs()) {
        let radius = 2.5 + 2.5 * (pr * m).sqrt();
        let _ = writeln!(
            f.out,
            r#"<circle cx="{:.2}" cy="{:.2}" r="{radius:.2}" fill="{}"/>"#,
            f.px(p.re),
            f.py(p.im),
            PALETTE[0]
        );
    }
    f.finish()
}

/// SER against SNR on a log axis, one polyline per scheme for one channel.
/// Zero-error points cannot be drawn on a log axis and are skipped.
pub fn ser_curves(rows: &[SweepRow], channel: ChannelModel) -> String {
    let mut names: Vec<String> = Vec::new();
    for r in rows.iter().filter(|r| r.channel == channel) {
        if !names.contains(&r.scheme) {
            names.push(r.scheme.clone());
        }
    }
    let selected: Vec<&SweepRow> = rows.iter().filter(|r| r.channel == channel).collect();
    let (mut x0, mut x1) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut ymin = 0.0f64;
    for r in &selected {
        x0 = x0.min(r.point.snr_db);
        x1 = x1.max(r.point.snr_db);
        if r.point.ser > 0.0 {
            ymin = ymin.min(r.point.ser.log10().floor());
        }
    }
    if !(x1 > x0) {
        x0 -= 1.0;
        x1 += 1.0;
    }
    let ymin = if ymin < 0.0 { ymin } else { -1.0 };
    let mut f = Frame::new(&format!("SER vs SNR ({channel})"), x0, x1, ymin, 0.0);
    let yticks: Vec<(f64, String)> = (ymin as i64..=0).map(|e| (e as f64, format!("1e{e}"))).collect();
    f.axes("SNR (dB)", "symbol error rate", &linear_ticks(x0, x1, 8), &yticks);
    for (i, name) in names.iter().enumerate() {
        let pts: Vec<(f64, f64)> = selected
            .iter()
            .filter(|r| &r.scheme == name && r.point.ser > 0.0)
            .map(|r| (r.point.snr_db, r.point.ser.log10()))
            .collect();
        f.polyline(&pts, PALETTE[i % PALETTE.len()]);
    }
    f.legend(&names);
    f.finish()
}

pub const PAPR_DRAWS: usize = 100_000;

/// Instantaneous power `|s|²/E_avg` in dB for seeded symbol draws.
pub fn power_samples(c: &Constellation, draws: usize, seed: u64) -> Vec<f64> {
    let e = c.average_energy();
    let sampler = SymbolSampler::new(c);
    let mut s = derive_stream(seed, &["papr-cdf".into(), c.label().into()]);
    (0..draws).map(|_| 10.0 * (c.points()[sampler.draw(&mut s)].norm_sqr() / e).log10()).collect()
}

/// Values closer than this (dB) form one step of the empirical CDF.
const STEP_MERGE_DB: f64 = 1e-9;

/// Corner points of the empirical CDF drawn as a staircase.
pub fn cdf_steps(samples: &[f64]) -> Vec<(f64, f64)> {
    let mut v = samples.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    let mut steps = Vec::new();
    let mut prev = 0.0;
    let mut i = 0;
    while i < v.len() {
        let x = v[i];
        while i < v.len() && v[i] - x <= STEP_MERGE_DB {
            i += 1;
        }
        let cum = i as f64 / n;
        steps.push((x, prev));
        steps.push((x, cum));
        prev = cum;
    }
    steps
}

/// Empirical CDF of instantaneous power, one staircase per constellation.
pub fn papr_cdf(constellations: &[Constellation], seed: u64) -> String {
    let series: Vec<(String, Vec<(f64, f64)>)> = constellations
        .iter()
        .map(|c| (c.label().to_string(), cdf_steps(&power_samples(c, PAPR_DRAWS, seed))))
        .collect();
    let lo = series.iter().flat_map(|s| s.1.first()).map(|p| p.0).fold(f64::INFINITY, f64::min);
    let hi = constellations.iter().map(papr_db).fold(0.0, f64::max);
    let (x0, x1) = ((lo.min(0.0) - 1.0).floor(), (hi + 1.0).ceil());
    let mut f = Frame::new("Instantaneous power CDF", x0, x1, 0.0, 1.0);
    f.axes("power relative to mean (dB)", "CDF", &linear_ticks(x0, x1, 8), &linear_ticks(0.0, 1.0, 5));
    let mut names = Vec::new();
    for (i, (name, steps)) in series.iter().enumerate() {
        let mut pts = vec![(x0, 0.0)];
        pts.extend(steps.iter().copied());
        pts.push((x1, 1.0));
        f.polyline(&pts, PALETTE[i % PALETTE.len()]);
        names.push(name.clone());
    }
    f.legend(&names);
    f.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use constkit_core::{generate, Scheme, SchemeSpec};

    #[test]
    fn psk_power_is_one_step_at_zero() {
        let c = generate(&SchemeSpec::new(Scheme::Mpsk, 16)).unwrap();
        let steps = cdf_steps(&power_samples(&c, 10_000, 1));
        assert_eq!(steps.len(), 2);
        assert!(steps[0].0.abs() < 1e-9);
        assert_eq!((steps[0].1, steps[1].1), (0.0, 1.0));
    }

    #[test]
    fn qam_power_has_three_levels() {
        let c = generate(&SchemeSpec::new(Scheme::SquareQam, 16)).unwrap();
        let steps = cdf_steps(&power_samples(&c, 20_000, 1));
        assert_eq!(steps.len(), 6);
        assert!((steps[5].0 - papr_db(&c)).abs() < 1e-9);
    }

    #[test]
    fn ticks_are_round() {
        let t = linear_ticks(-5.0, 50.0, 8);
        let labels: Vec<&str> = t.iter().map(|x| x.1.as_str()).collect();
        assert_eq!(labels, ["0", "10", "20", "30", "40", "50"]);
        let t = linear_ticks(0.0, 1.0, 5);
        assert_eq!(t[1].1, "0.2");
    }
}
