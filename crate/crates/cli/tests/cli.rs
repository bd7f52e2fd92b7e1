use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use constkit_core::io::{parse_constellation_csv, parse_sweep_csv, parse_trace_csv};
use constkit_core::min_distance;
use sha2::{Digest, Sha256};

fn constkit(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_constkit"))
        .args(args)
        .current_dir(cwd)
        .env_remove("CONSTKIT_SEED")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str], cwd: &Path) -> String {
    let out = constkit(args, cwd);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str], cwd: &Path) -> i32 {
    constkit(args, cwd).status.code().unwrap()
}

fn json(args: &[&str], cwd: &Path) -> serde_json::Value {
    serde_json::from_str(&ok(args, cwd)).unwrap()
}

fn sha(path: &Path) -> String {
    hex::encode(Sha256::digest(fs::read(path).unwrap()))
}

#[test]
fn list_shows_every_family() {
    let dir = tempfile::tempdir().unwrap();
    let text = ok(&["list"], dir.path());
    assert_eq!(text.lines().filter(|l| l.contains("M=")).count(), 16);
    let v = json(&["list", "--json"], dir.path());
    let items = v.as_array().unwrap();
    assert_eq!(items.len(), 16);
    assert_eq!(items.iter().filter(|i| i["simulated"] == true).count(), 14);
    assert!(items.iter().any(|i| i["id"] == "apsk" && i["params"].as_array().unwrap().len() == 3));
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&["list", "--bogus"], dir.path()), 2);
    assert_eq!(code(&["frobnicate"], dir.path()), 2);
    assert_eq!(code(&["sweep", "--snr", "1:2"], dir.path()), 2);
    assert_eq!(code(&["--help"], dir.path()), 0);
}

#[test]
fn metrics_reference_rows() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(&["metrics", "square-qam", "hex-lattice:16", "disc-gam", "--json"], dir.path());
    let rows = v.as_array().unwrap();
    let get = |i: usize, k: &str| rows[i][k].as_f64().unwrap();
    assert!((get(0, "d_min") - 0.632).abs() < 5e-4);
    assert!((get(0, "mean_dist") - 1.355).abs() < 5e-4);
    assert!((get(0, "papr_db") - 2.55).abs() < 5e-3);
    assert!((get(1, "d_min") - 0.667).abs() < 5e-4);
    assert!((get(1, "papr_db") - 2.50).abs() < 5e-3);
    assert!((get(1, "mean_dist") - 1.336).abs() < 0.02);
    assert!((get(2, "papr_db") - 2.75).abs() < 5e-3);
}

#[test]
fn metrics_params_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["metrics", "elliptical", "--param", "beta=0.614", "--out", "m"], dir.path());
    let text = fs::read_to_string(dir.path().join("m/metrics.csv")).unwrap();
    assert!(text.starts_with("scheme,order,d_min,mean_dist,papr_db\nelliptical-16,16,"));
    assert!(dir.path().join("m/metrics.manifest.json").exists());
    assert_eq!(code(&["metrics", "mpsk", "--param", "nope=1"], dir.path()), 3);
}

#[test]
fn unsupported_scheme_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&["metrics", "octagon"], dir.path()), 3);
    assert_eq!(code(&["metrics", "hex-ring:32"], dir.path()), 3);
}

#[test]
fn quick_sweep_has_one_point_per_cell() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["sweep", "--symbols", "1000", "--snr", "10:10:1", "--out", "s"], dir.path());
    let rows = parse_sweep_csv(fs::File::open(dir.path().join("s/sweep.csv")).unwrap()).unwrap();
    assert_eq!(rows.len(), 14 * 2);
    assert!(rows.iter().all(|r| r.point.snr_db == 10.0 && r.point.symbols_sent == 1000));
}

#[test]
fn negative_snr_grid_parses() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["sweep", "--schemes", "bpsk", "--channels", "awgn", "--symbols", "1000", "--snr", "-5:-3:1", "--out", "s"], dir.path());
    let rows = parse_sweep_csv(fs::File::open(dir.path().join("s/sweep.csv")).unwrap()).unwrap();
    assert_eq!(rows.iter().map(|r| r.point.snr_db).collect::<Vec<_>>(), vec![-5.0, -4.0, -3.0]);
}

fn manifest(dir: &Path, verb: &str) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(dir.join(format!("{verb}.manifest.json"))).unwrap()).unwrap()
}

#[test]
fn sweep_is_reproducible_across_runs_and_workers() {
    let dir = tempfile::tempdir().unwrap();
    let base = ["sweep", "--schemes", "square-qam,star", "--snr", "0:12:4", "--symbols", "20000", "--chunk-size", "3000"];
    let mut digests = Vec::new();
    for (i, w) in ["1", "4", "8", "4"].iter().enumerate() {
        let out = format!("run{i}");
        let mut args = base.to_vec();
        args.extend(["--seed", "11", "--workers", w, "--out", &out]);
        ok(&args, dir.path());
        let csv = dir.path().join(&out).join("sweep.csv");
        let m = manifest(&dir.path().join(&out), "sweep");
        assert_eq!(m["outputs"][0]["sha256"], sha(&csv));
        assert_eq!(m["master_seed"], 11);
        for key in ["tool_version", "command_line", "config", "started", "finished"] {
            assert!(!m[key].is_null(), "{key}");
        }
        digests.push(sha(&csv));
    }
    assert!(digests.windows(2).all(|d| d[0] == d[1]));
    let mut args = base.to_vec();
    args.extend(["--seed", "12", "--out", "other"]);
    ok(&args, dir.path());
    assert_ne!(sha(&dir.path().join("other/sweep.csv")), digests[0]);
}

#[test]
fn seed_precedence_flag_file_env() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("run.ini"), "symbols = 1000\nsnr = 10:10:1\nschemes = bpsk\n[sweep]\nseed = 5\n").unwrap();
    let seed_of = |extra: &[&str], env: Option<&str>| {
        let mut args = vec!["sweep", "--channels", "awgn", "--out", "o"];
        args.extend(extra);
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_constkit"));
        cmd.args(&args).current_dir(dir.path()).env_remove("CONSTKIT_SEED");
        if let Some(e) = env {
            cmd.env("CONSTKIT_SEED", e);
        }
        assert!(cmd.output().unwrap().status.success());
        manifest(&dir.path().join("o"), "sweep")["master_seed"].as_u64().unwrap()
    };
    assert_eq!(seed_of(&["--config", "run.ini", "--seed", "9"], Some("3")), 9);
    assert_eq!(seed_of(&["--config", "run.ini"], Some("3")), 5);
    assert_eq!(seed_of(&["--symbols", "1000", "--snr", "10:10:1", "--schemes", "bpsk"], Some("3")), 3);
    assert_eq!(seed_of(&["--symbols", "1000", "--snr", "10:10:1", "--schemes", "bpsk"], None), 1);
}

#[test]
fn unknown_config_key_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.ini"), "symbol = 1000\n").unwrap();
    assert_eq!(code(&["sweep", "--config", "bad.ini"], dir.path()), 2);
    assert_eq!(code(&["sweep", "--config", "missing.ini"], dir.path()), 4);
}

#[test]
fn unwritable_output_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("blocker"), "").unwrap();
    let args = ["sweep", "--schemes", "bpsk", "--symbols", "1000", "--snr", "0:0:1", "--out", "blocker/sub"];
    assert_eq!(code(&args, dir.path()), 4);
}

fn read_points(path: PathBuf) -> constkit_core::Constellation {
    parse_constellation_csv(fs::File::open(path).unwrap(), "x").unwrap()
}

#[test]
fn optimize_pso_16_trace() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["optimize", "pso", "-M", "16", "--seed", "7", "--out", "o"], dir.path());
    let trace = parse_trace_csv(fs::File::open(dir.path().join("o/pso-16.trace.csv")).unwrap()).unwrap();
    assert_eq!(trace.len(), 1000);
    assert!(trace.windows(2).all(|w| w[1] <= w[0]));
    let c = read_points(dir.path().join("o/pso-16.csv"));
    assert_eq!(c.order(), 16);
    assert!((c.average_energy() - 1.0).abs() < 1e-7);
    let m = manifest(&dir.path().join("o"), "optimize");
    assert_eq!(m["outputs"].as_array().unwrap().len(), 2);
}

#[test]
fn optimize_small_orders_reach_optimum() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["optimize", "ga", "-M", "4", "--seed", "1", "--out", "o"], dir.path());
    assert!(min_distance(&read_points(dir.path().join("o/ga-4.csv"))) >= 1.35);
    ok(&["optimize", "pso", "-M", "2", "--out", "o"], dir.path());
    assert!(min_distance(&read_points(dir.path().join("o/pso-2.csv"))) >= 1.95);
}

#[test]
fn optimize_rejects_bad_weights() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&["optimize", "pso", "-M", "4", "--tau", "-0.1"], dir.path()), 2);
    assert_eq!(code(&["optimize", "ga", "-M", "4", "--lambda-papr", "-1"], dir.path()), 2);
}

const PAPER_ROWS: [(&str, f64, f64, f64); 6] = [
    ("Lattice-Based", 0.667, 2.50, 0.217),
    ("16-QAM", 0.632, 2.55, 0.222),
    ("GA-Optimized", 0.616, 3.27, 0.225),
    ("PSO-Optimized", 0.613, 3.68, 0.225),
    ("Probabilistic", 0.585, 2.43, 0.230),
    ("Disc-GAM", 0.549, 2.75, 0.227),
];

fn write_score_inputs(dir: &Path, rows: &[(&str, f64, f64, f64)]) {
    let mut m = String::from("scheme,order,d_min,mean_dist,papr_db\n");
    let mut s = String::from("scheme,channel,snr_db,symbols,errors,ser,ci_low,ci_high,seed,chunk_size\n");
    for (label, d, papr, ser) in rows {
        m += &format!("{label},16,{d},1.3,{papr}\n");
        s += &format!("{label},awgn,10,1000000,{},{ser},{ser},{ser},1,10000\n", (ser * 1e6) as u64);
        s += &format!("{label},rayleigh,10,1000000,1,0.5,0.4,0.6,1,10000\n");
    }
    fs::write(dir.join("metrics.csv"), m).unwrap();
    fs::write(dir.join("sweep.csv"), s).unwrap();
}

#[test]
fn score_ranks_lattice_first() {
    let dir = tempfile::tempdir().unwrap();
    write_score_inputs(dir.path(), &PAPER_ROWS);
    let v = json(&["score", "--metrics", "metrics.csv", "--ser", "sweep.csv", "--json"], dir.path());
    assert_eq!(v[0]["label"], "Lattice-Based");
    assert_eq!(v[0]["rank"], 1);
    ok(&["score", "--metrics", "metrics.csv", "--ser", "sweep.csv", "--out", "r"], dir.path());
    let text = fs::read_to_string(dir.path().join("r/ranking.csv")).unwrap();
    assert!(text.starts_with("rank,label,d_min,papr_db,ser_10db,power_eff,composite\n1,Lattice-Based,"));
}

#[test]
fn score_single_row_is_rank_one() {
    let dir = tempfile::tempdir().unwrap();
    write_score_inputs(dir.path(), &PAPER_ROWS[1..2]);
    let v = json(&["score", "--metrics", "metrics.csv", "--ser", "sweep.csv", "--json"], dir.path());
    assert_eq!(v.as_array().unwrap().len(), 1);
    assert_eq!(v[0]["rank"], 1);
}

#[test]
fn score_dominated_row_never_wins() {
    let dir = tempfile::tempdir().unwrap();
    write_score_inputs(dir.path(), &[("strong", 0.6, 2.0, 0.20), ("weak", 0.55, 2.4, 0.25)]);
    for w in [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"], ["0.2", "0.3", "0.5"]] {
        let v = json(
            &["score", "--metrics", "metrics.csv", "--ser", "sweep.csv", "--json", "--w-dmin", w[0], "--w-power", w[1], "--w-ser", w[2]],
            dir.path(),
        );
        assert_eq!(v[0]["label"], "strong", "{w:?}");
    }
}

#[test]
fn score_missing_label_names_it() {
    let dir = tempfile::tempdir().unwrap();
    write_score_inputs(dir.path(), &PAPER_ROWS[..2]);
    let mut m = fs::read_to_string(dir.path().join("metrics.csv")).unwrap();
    m += "Orphan,16,0.5,1.3,2.0\n";
    fs::write(dir.path().join("metrics.csv"), m).unwrap();
    let out = constkit(&["score", "--metrics", "metrics.csv", "--ser", "sweep.csv"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Orphan"));
    assert_eq!(code(&["score", "--metrics", "metrics.csv", "--ser", "sweep.csv", "--w-ser", "0.9"], dir.path()), 2);
}

#[test]
fn scatter_has_one_circle_per_point() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["optimize", "ga", "-M", "16", "--iterations", "20", "--out", "o"], dir.path());
    ok(&["plot", "scatter", "--input", "o/ga-16.csv", "--out", "p"], dir.path());
    let svg = fs::read_to_string(dir.path().join("p/scatter.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    assert_eq!(svg.matches("<circle").count(), 16);
}

#[test]
fn ser_curves_one_polyline_per_scheme_and_stable_bytes() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["sweep", "--schemes", "square-qam,mpsk", "--channels", "awgn", "--symbols", "1000", "--out", "s"], dir.path());
    let rows = parse_sweep_csv(fs::File::open(dir.path().join("s/sweep.csv")).unwrap()).unwrap();
    assert_eq!(rows.len(), 2 * 56);
    ok(&["plot", "ser-curves", "--input", "s/sweep.csv", "--out", "p1"], dir.path());
    ok(&["plot", "ser-curves", "--input", "s/sweep.csv", "--out", "p2"], dir.path());
    let a = fs::read(dir.path().join("p1/ser-curves.svg")).unwrap();
    assert_eq!(a, fs::read(dir.path().join("p2/ser-curves.svg")).unwrap());
    assert_eq!(String::from_utf8(a).unwrap().matches("<polyline").count(), 2);
}

#[test]
fn psk_power_cdf_is_single_step() {
    let dir = tempfile::tempdir().unwrap();
    let mut csv = String::from("index,re,im\n");
    for k in 0..16 {
        let t = std::f64::consts::TAU * k as f64 / 16.0;
        csv += &format!("{k},{},{}\n", t.cos(), t.sin());
    }
    fs::write(dir.path().join("psk.csv"), csv).unwrap();
    ok(&["plot", "papr-cdf", "--input", "psk.csv", "--out", "p"], dir.path());
    let svg = fs::read_to_string(dir.path().join("p/papr-cdf.svg")).unwrap();
    let line = svg.lines().find(|l| l.starts_with("<polyline")).unwrap();
    let pts: Vec<&str> = line.split("points=\"").nth(1).unwrap().trim_end_matches("\"/>").split(' ').collect();
    // start, bottom of the step, top of the step, end
    assert_eq!(pts.len(), 4);
    let x = |p: &str| p.split(',').next().unwrap().to_string();
    assert_eq!(x(pts[1]), x(pts[2]));
}

#[test]
fn plot_schema_mismatch_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.csv"), "a,b\n1,2\n").unwrap();
    assert_eq!(code(&["plot", "scatter", "--input", "bad.csv"], dir.path()), 3);
    assert_eq!(code(&["plot", "ser-curves", "--input", "bad.csv"], dir.path()), 3);
    assert_eq!(code(&["plot", "scatter", "--input", "absent.csv"], dir.path()), 4);
}
