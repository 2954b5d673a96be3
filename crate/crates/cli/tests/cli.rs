//! End-to-end command-line tests against the built binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn binary() -> &'static str {
    env!("CARGO_BIN_EXE_fluxtrap")
}

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(binary())
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn temp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("fluxtrap_cli_{tag}_{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

/// Parse the numeric cells of a schema'd CSV, skipping comments/header.
fn csv_rows(path: &Path) -> Vec<Vec<f64>> {
    let text = fs::read_to_string(path).unwrap();
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty())
        .skip(1)
        .map(|l| {
            l.split(',')
                .map(|c| c.parse::<f64>().expect("numeric cell"))
                .collect()
        })
        .collect()
}

fn report_value(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("report key {key} missing in:\n{text}"))
        .parse()
        .unwrap()
}

#[test]
fn help_runs_for_every_subcommand() {
    let dir = temp_dir("help");
    for sub in ["fieldmap", "trap", "sweep", "odmr", "ringdown"] {
        let out = run(&[sub, "--help"], &dir);
        assert!(out.status.success(), "{sub} --help failed");
    }
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn fieldmap_minimum_sits_between_the_coils() {
    let dir = temp_dir("map");
    let out = run(
        &[
            "fieldmap",
            "--plane",
            "xz",
            "--grid=-4e-4:4e-4:17,-5e-4:5e-4:21",
            "--out",
            "map.csv",
        ],
        &dir,
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = csv_rows(&dir.join("map.csv"));
    assert_eq!(rows.len(), 17 * 21);
    let (min_row, _) = rows
        .iter()
        .enumerate()
        .min_by(|a, b| a.1[6].partial_cmp(&b.1[6]).unwrap())
        .unwrap();
    let x = rows[min_row][0];
    let z = rows[min_row][2];
    assert!(x.abs() < 2e-4, "minimum at x = {x}");
    assert!(z.abs() < 2e-4, "minimum at z = {z}");
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn fieldmap_is_linear_in_current() {
    let dir = temp_dir("lin");
    fs::write(dir.join("one.ini"), "[trap]\ni_top_a = 0.7\ni_bottom_a = 0.7\n").unwrap();
    fs::write(dir.join("two.ini"), "[trap]\ni_top_a = 1.4\ni_bottom_a = 1.4\n").unwrap();
    for (cfg, out) in [("one.ini", "one.csv"), ("two.ini", "two.csv")] {
        let out = run(
            &[
                "--config",
                cfg,
                "fieldmap",
                "--plane",
                "yz",
                "--grid=-3e-4:3e-4:9,-3e-4:3e-4:9",
                "--out",
                out,
            ],
            &dir,
        );
        assert!(out.status.success());
    }
    let a = csv_rows(&dir.join("one.csv"));
    let b = csv_rows(&dir.join("two.csv"));
    for (ra, rb) in a.iter().zip(&b) {
        for col in 3..7 {
            let expect = 2.0 * ra[col];
            assert!(
                (rb[col] - expect).abs() <= 1e-9 * expect.abs().max(1e-18),
                "current doubling broke linearity: {} vs {}",
                rb[col],
                expect
            );
        }
    }
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn zero_current_map_is_identically_zero() {
    let dir = temp_dir("zero");
    fs::write(dir.join("z.ini"), "[trap]\ni_top_a = 0\ni_bottom_a = 0\n").unwrap();
    let out = run(
        &[
            "--config",
            "z.ini",
            "fieldmap",
            "--plane",
            "xy",
            "--grid=-2e-4:2e-4:5,-2e-4:2e-4:5",
            "--out",
            "z.csv",
        ],
        &dir,
    );
    assert!(out.status.success());
    for row in csv_rows(&dir.join("z.csv")) {
        for col in 3..7 {
            assert_eq!(row[col], 0.0);
        }
    }
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn trap_report_includes_breach_current_when_asked() {
    let dir = temp_dir("trap");
    let out = run(&["trap", "--bc1", "173.5mT", "--out", "report.txt"], &dir);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report = fs::read_to_string(dir.join("report.txt")).unwrap();
    let breach = report_value(&report, "bc1_breach_current_a");
    assert!(breach > 0.1 && breach < 2.0, "breach {breach} A");
    assert!(report.contains("fx_hz="));
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn current_sweep_reports_tight_linearity() {
    let dir = temp_dir("sweep");
    fs::write(dir.join("g0.ini"), "[trap]\ngravity_m_s2 = 0\n").unwrap();
    let out = run(
        &[
            "--config",
            "g0.ini",
            "sweep",
            "--current",
            "0.2:1.7:6",
            "--out",
            "sweep.csv",
            "--report",
            "report.txt",
        ],
        &dir,
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report = fs::read_to_string(dir.join("report.txt")).unwrap();
    for key in ["fx_r2", "fy_r2", "fz_r2"] {
        assert!(report_value(&report, key) > 0.9999);
    }
    let rows = csv_rows(&dir.join("sweep.csv"));
    assert_eq!(rows.len(), 6);
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn separation_sweep_frequencies_fall_as_the_gap_grows() {
    let dir = temp_dir("sep");
    fs::write(dir.join("g0.ini"), "[trap]\ngravity_m_s2 = 0\n").unwrap();
    let out = run(
        &[
            "--config",
            "g0.ini",
            "sweep",
            "--separation",
            "0.4e-3:2.0e-3:5",
            "--out",
            "sep.csv",
        ],
        &dir,
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = csv_rows(&dir.join("sep.csv"));
    assert_eq!(rows.len(), 5);
    for pair in rows.windows(2) {
        for col in 1..4 {
            assert!(
                pair[1][col] < pair[0][col],
                "f should drop from d = {} to {}",
                pair[0][0],
                pair[1][0]
            );
        }
    }
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn odmr_zero_field_dip_sits_at_the_zero_field_splitting() {
    let dir = temp_dir("odmr0");
    let out = run(
        &["odmr", "--mode", "simulate", "--field-t", "0", "--out", "spec.csv"],
        &dir,
    );
    assert!(out.status.success());
    let rows = csv_rows(&dir.join("spec.csv"));
    let min = rows
        .iter()
        .min_by(|a, b| a[1].partial_cmp(&b[1]).unwrap())
        .unwrap();
    assert!(
        (min[0] - 2.877e9).abs() < 1e6,
        "dip at {} Hz, expected 2.877 GHz",
        min[0]
    );
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn odmr_simulate_then_fit_recovers_three_millitesla() {
    let dir = temp_dir("odmr3");
    let out = run(
        &["odmr", "--mode", "simulate", "--field-t", "3e-3", "--out", "spec.csv"],
        &dir,
    );
    assert!(out.status.success());
    let out = run(
        &["odmr", "--mode", "fit", "--input", "spec.csv", "--out", "fit.csv"],
        &dir,
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    let magnitude = report_value(&stdout, "field_magnitude_T");
    assert!(
        (magnitude - 3e-3).abs() <= 0.01 * 3e-3,
        "fitted |B| = {magnitude}"
    );
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn ringdown_fixture_round_trips_through_csv_and_frames() {
    use fluxtrap_dynamics::{render_spot_stack, simulate_ringdown, RingdownSpec, TimeSeries};
    let dir = temp_dir("ring");

    // CSV fixture: f0 = 20 Hz, tau = 10 s
    let spec = RingdownSpec {
        noise_rms: 1e-7,
        seed: 5,
        ..Default::default()
    };
    let ts = simulate_ringdown(&spec).unwrap();
    let mut buf = Vec::new();
    ts.write_csv(&mut buf).unwrap();
    fs::write(dir.join("ring.csv"), &buf).unwrap();

    let out = run(
        &["ringdown", "--input", "ring.csv", "--out", "report.txt", "--psd-out", "psd.csv"],
        &dir,
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report = fs::read_to_string(dir.join("report.txt")).unwrap();
    let q = report_value(&report, "q");
    assert!((q - 628.3).abs() <= 0.03 * 628.3, "q = {q}");
    let f0_csv = report_value(&report, "f0_hz");

    // PSD came out alongside
    let psd_rows = csv_rows(&dir.join("psd.csv"));
    let peak = psd_rows
        .iter()
        .skip(1)
        .max_by(|a, b| a[1].partial_cmp(&b[1]).unwrap())
        .unwrap();
    assert!((peak[0] - 20.0).abs() < 0.5, "PSD peak at {}", peak[0]);

    // frame-stack fixture from a slower, video-rate ringdown
    let video = RingdownSpec {
        f0: 11.0,
        tau: 2.0,
        amplitude: 4.0,
        record_duration: 6.0,
        sample_rate: 150.0,
        ..Default::default()
    };
    let trajectory = simulate_ringdown(&video).unwrap();
    let xs: Vec<f64> = trajectory.samples.iter().map(|&x| 20.0 + x).collect();
    let ys = vec![16.0; xs.len()];
    let stack = render_spot_stack(&xs, &ys, 40, 32, 1.6, 45000.0, 600.0, 150.0, 1.2e-6);
    stack.write_dir(&dir.join("frames")).unwrap();
    // matching direct CSV of the same trajectory, in metres
    let direct = TimeSeries::new(0.0, 1.0 / 150.0, trajectory.samples.clone()).unwrap();
    let mut buf = Vec::new();
    direct.write_csv(&mut buf).unwrap();
    fs::write(dir.join("video.csv"), &buf).unwrap();

    let out = run(&["ringdown", "--input", "frames", "--out", "frames.txt"], &dir);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = run(&["ringdown", "--input", "video.csv", "--out", "video.txt"], &dir);
    assert!(out.status.success());
    let f_frames = report_value(&fs::read_to_string(dir.join("frames.txt")).unwrap(), "f0_hz");
    let f_video = report_value(&fs::read_to_string(dir.join("video.txt")).unwrap(), "f0_hz");
    assert!(
        (f_frames - f_video).abs() <= 5e-3 * f_video,
        "frame path f0 {f_frames} vs csv path {f_video}"
    );
    let _ = f0_csv;
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn constant_series_exits_with_the_no_oscillation_code() {
    let dir = temp_dir("flat");
    let mut csv = String::from("t_s,x_m\n");
    for i in 0..4096 {
        csv.push_str(&format!("{},1.0e-6\n", i as f64 * 1e-3));
    }
    fs::write(dir.join("flat.csv"), csv).unwrap();
    let out = run(&["ringdown", "--input", "flat.csv"], &dir);
    assert_eq!(out.status.code(), Some(6), "{}", String::from_utf8_lossy(&out.stderr));
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn bad_config_exits_two_and_leaves_no_partial_output() {
    let dir = temp_dir("bad");
    fs::write(dir.join("bad.ini"), "[coils]\nmystery_knob = 7\n").unwrap();
    let out = run(
        &[
            "--config",
            "bad.ini",
            "fieldmap",
            "--plane",
            "xy",
            "--grid=-1e-4:1e-4:3,-1e-4:1e-4:3",
            "--out",
            "never.csv",
        ],
        &dir,
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(!dir.join("never.csv").exists());
    assert!(!dir.join("never.csv.tmp").exists());
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn identical_seeds_give_byte_identical_outputs() {
    let dir = temp_dir("det");
    fs::write(
        dir.join("noisy.ini"),
        "[nv]\nnoise_fraction = 0.002\ngrid_points = 801\n[analysis]\nseed = 42\n",
    )
    .unwrap();
    for (threads, name) in [("2", "a"), ("4", "b")] {
        let out = run(
            &[
                "--config",
                "noisy.ini",
                "--threads",
                threads,
                "odmr",
                "--mode",
                "sweep",
                "--sweep-max-a",
                "0.5",
                "--sweep-points",
                "4",
                "--out",
                &format!("heat_{name}.csv"),
            ],
            &dir,
        );
        assert!(out.status.success());
    }
    assert_eq!(
        fs::read(dir.join("heat_a.csv")).unwrap(),
        fs::read(dir.join("heat_b.csv")).unwrap(),
        "heatmaps differ across runs/threads"
    );
    for name in ["m1.csv", "m2.csv"] {
        let out = run(
            &[
                "fieldmap",
                "--plane",
                "xz",
                "--grid=-3e-4:3e-4:9,-3e-4:3e-4:9",
                "--out",
                name,
            ],
            &dir,
        );
        assert!(out.status.success());
    }
    assert_eq!(
        fs::read(dir.join("m1.csv")).unwrap(),
        fs::read(dir.join("m2.csv")).unwrap()
    );
    fs::remove_dir_all(&dir).ok();
}
