mod common;

use std::path::Path;

use common::*;
use luxfield::cli::{EXIT_OK, EXIT_PARTIAL, EXIT_USAGE};
use luxfield_core::Timestamp;

fn ts(offset_s: i64) -> Timestamp {
    Timestamp::from_unix_seconds(DAY_START_S + offset_s)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn decompose_one_file() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_measurement(dir.path(), "a.csv", &sky_and_sun(ts(0), [0.3, -0.5, 0.6], 2.0, 0.5));
    let out = dir.path().join("out");
    let (code, stdout, _) = run(&["decompose", s(&f), "--out", s(&out)]);
    assert_eq!(code, EXIT_OK);
    assert!(stdout.contains("summary.csv"));
    let rows = csv_rows(&out.join("summary.csv"));
    assert_eq!(rows.len(), 1);
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    let rec = &json["records"][0];
    assert_eq!(rec["timestamp"], "2020-09-18T06:30:00Z");
    let d = rec["diffuseness"].as_f64().unwrap();
    assert!(d > 0.0 && d < 1.0);
    assert_eq!(json["settings"]["azimuth_convention"], "compass");
    assert!(!out.join("errors.json").exists());
}

#[test]
fn decompose_continues_past_bad_files() {
    let dir = tempfile::tempdir().unwrap();
    let good = write_measurement(dir.path(), "good.csv", &sky_and_sun(ts(0), [0.0, -0.5, 0.8], 1.0, 0.5));
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "#timestamp=2020-09-18T12:00:00Z\nface,380,385\nx+,1,1\n").unwrap();
    let missing = dir.path().join("missing.csv");
    let out = dir.path().join("out");
    let (code, _, stderr) = run(&["decompose", s(&good), s(&bad), s(&missing), "--out", s(&out)]);
    assert_eq!(code, EXIT_PARTIAL);
    assert!(stderr.contains("bad.csv") && stderr.contains("missing face"));
    assert_eq!(csv_rows(&out.join("summary.csv")).len(), 1);
    let errors: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("errors.json")).unwrap()).unwrap();
    assert_eq!(errors.as_array().unwrap().len(), 2);
}

#[test]
fn usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    assert_eq!(run(&["decompose", "--out", s(&out)]).0, EXIT_USAGE);
    let empty = dir.path().join("empty");
    std::fs::create_dir(&empty).unwrap();
    assert_eq!(run(&["decompose", s(&empty), "--out", s(&out)]).0, EXIT_USAGE);
    assert_eq!(run(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(run(&["render", "x.csv", "--kind", "hologram"]).0, EXIT_USAGE);
    assert_eq!(run(&["decompose", "a.csv", "--cd-metric", "lab"]).0, EXIT_USAGE);
    let (code, stdout, _) = run(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(stdout.contains("timeseries"));
}

fn write_day(dir: &Path, n: usize, constant: bool) {
    for i in 0..n {
        let t = ts(300 * i as i64);
        let m = if constant {
            sky_and_sun(t, [0.2, -0.6, 0.5], 1.0, 0.4)
        } else {
            let phase = i as f64 / (n.max(2) - 1) as f64;
            let alt = (phase * std::f64::consts::PI).sin() * 0.9 + 0.05;
            let az = std::f64::consts::PI * (0.5 + phase);
            let h = (1.0 - alt * alt).sqrt();
            sky_and_sun(t, [h * az.sin(), h * az.cos(), alt], 0.2 + 2.0 * alt, 0.3)
        };
        write_measurement(dir, &format!("m{i:03}.csv"), &m);
    }
}

#[test]
fn timeseries_three_samples() {
    let dir = tempfile::tempdir().unwrap();
    let session = dir.path().join("day");
    std::fs::create_dir(&session).unwrap();
    write_day(&session, 3, false);
    let out = dir.path().join("out");
    let (code, _, stderr) = run(&["timeseries", s(&session), "--window", "early=06:30-06:35", "--out", s(&out)]);
    assert_eq!(code, EXIT_OK, "{stderr}");
    assert_eq!(csv_rows(&out.join("series.csv")).len(), 3);
    let stats = csv_rows(&out.join("stats.csv"));
    // (3 components x 2 quantities + 1 correlation) for each of two windows
    assert_eq!(stats.len(), 14);
    assert!(stats.iter().any(|r| r[0] == "pearson" && r[3] == "all" && r[7] == "3"));
    assert_eq!(csv_rows(&out.join("sunpath.csv")).len(), 3);
    let series_ts = column(&out.join("series.csv"), "timestamp");
    assert!(series_ts.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn constant_session_has_zero_speeds() {
    let dir = tempfile::tempdir().unwrap();
    let session = dir.path().join("day");
    std::fs::create_dir(&session).unwrap();
    write_day(&session, 4, true);
    let out = dir.path().join("out");
    for method in ["local", "range"] {
        let (code, _, _) = run(&["timeseries", s(&session), "--avs-method", method, "--out", s(&out)]);
        assert_eq!(code, EXIT_OK);
        let speeds: Vec<_> = csv_rows(&out.join("stats.csv")).into_iter().filter(|r| r[0] == "average_speed").collect();
        assert_eq!(speeds.len(), 6);
        assert!(speeds.iter().all(|r| r[5] == "0" && r[4] == method));
    }
}

#[test]
fn timeseries_rejects_bad_windows() {
    let dir = tempfile::tempdir().unwrap();
    let session = dir.path().join("day");
    std::fs::create_dir(&session).unwrap();
    write_day(&session, 3, false);
    let out = dir.path().join("out");
    assert_eq!(run(&["timeseries", s(&session), "--window", "x=8:3", "--out", s(&out)]).0, EXIT_USAGE);
    // outside the data range
    let (code, _, stderr) = run(&["timeseries", s(&session), "--window", "late=20:00-21:00", "--out", s(&out)]);
    assert_eq!(code, EXIT_PARTIAL);
    assert!(stderr.contains("late"));
}

fn manifest(dir: &Path, rows: &[(u32, &str, &str)]) -> std::path::PathBuf {
    let mut text = String::from("scene_id,role,path\n");
    for (id, role, p) in rows {
        text.push_str(&format!("{id},{role},{p}\n"));
    }
    let p = dir.join("pairs.csv");
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn compare_identical_pair() {
    let dir = tempfile::tempdir().unwrap();
    let m = sky_and_sun(ts(0), [0.3, -0.5, 0.6], 2.0, 0.5);
    write_measurement(dir.path(), "a.csv", &m);
    let mf = manifest(dir.path(), &[(1, "lit", "a.csv"), (1, "shaded", "a.csv")]);
    let out = dir.path().join("out");
    let (code, _, stderr) = run(&["compare", s(&mf), "--out", s(&out)]);
    assert_eq!(code, EXIT_OK, "{stderr}");
    let p = out.join("comparisons.csv");
    for c in ["symmetric", "scalar", "vector"] {
        assert_eq!(column(&p, &format!("{c}_delta_cct")), ["0"]);
        assert_eq!(column(&p, &format!("{c}_illuminance_ratio")), ["1"]);
        assert_eq!(column(&p, &format!("{c}_color_difference")), ["0"]);
    }
    assert_eq!(column(&p, "delta_diffuseness"), ["0"]);
}

#[test]
fn compare_aggregates_and_unmatched_scenes() {
    let dir = tempfile::tempdir().unwrap();
    let lit = sky_and_sun(ts(0), [0.3, -0.5, 0.6], 2.0, 0.5);
    write_measurement(dir.path(), "lit.csv", &lit);
    write_measurement(dir.path(), "half.csv", &lit.scaled(0.5).unwrap());
    write_measurement(dir.path(), "quarter.csv", &lit.scaled(0.25).unwrap());
    let mf = manifest(
        dir.path(),
        &[(1, "lit", "lit.csv"), (1, "shaded", "half.csv"), (2, "lit", "lit.csv"), (2, "shaded", "quarter.csv"), (3, "lit", "lit.csv")],
    );
    let out = dir.path().join("out");
    let (code, _, stderr) = run(&["compare", s(&mf), "--out", s(&out)]);
    assert_eq!(code, EXIT_PARTIAL);
    assert!(stderr.contains("scene 3"));
    let agg = csv_rows(&out.join("comparison_summary.csv"));
    let ratio = agg.iter().find(|r| r[0] == "scalar_illuminance_ratio").unwrap();
    // ratios 2 and 4: mean 3, sample SD sqrt(2)
    assert_eq!(ratio[1], "3");
    assert_eq!(ratio[2], luxfield::export::fmt_sig(2f64.sqrt()));
    assert_eq!(ratio[3], "2");
}

#[test]
fn compare_rejects_pairs_taken_too_far_apart() {
    let dir = tempfile::tempdir().unwrap();
    write_measurement(dir.path(), "a.csv", &sky_and_sun(ts(0), [0.3, -0.5, 0.6], 2.0, 0.5));
    write_measurement(dir.path(), "b.csv", &sky_and_sun(ts(600), [0.3, -0.5, 0.6], 2.0, 0.5));
    let mf = manifest(dir.path(), &[(4, "lit", "a.csv"), (4, "shaded", "b.csv")]);
    let out = dir.path().join("out");
    assert_eq!(run(&["compare", s(&mf), "--out", s(&out)]).0, EXIT_PARTIAL);
    assert!(csv_rows(&out.join("comparisons.csv")).is_empty());
}

fn decode(path: &Path) -> (u32, u32, Vec<u8>) {
    let bytes = std::fs::read(path).unwrap();
    let mut reader = png::Decoder::new(bytes.as_slice()).read_info().unwrap();
    let mut buf = vec![0; reader.output_buffer_size()];
    let info = reader.next_frame(&mut buf).unwrap();
    buf.truncate(info.buffer_size());
    (info.width, info.height, buf)
}

#[test]
fn render_isotropic_probe_is_a_uniform_disc() {
    let dir = tempfile::tempdir().unwrap();
    let spd = blackbody(6500.0, 1.0);
    let m = cube(core::array::from_fn(|_| spd.clone()), ts(0));
    let f = write_measurement(dir.path(), "iso.csv", &m);
    let out = dir.path().join("out");
    let (code, stdout, _) = run(&["render", s(&f), "--size", "32", "--out", s(&out)]);
    assert_eq!(code, EXIT_OK);
    assert!(stdout.contains("clipped"));
    let (w, h, px) = decode(&out.join("iso_20200918T063000Z_probe.png"));
    assert_eq!((w, h), (32, 32));
    let centre = &px[(16 * 32 + 16) * 3..(16 * 32 + 16) * 3 + 3];
    assert!(centre.iter().any(|c| *c > 0));
    let mut lit = 0;
    for p in px.chunks(3) {
        if p != [0, 0, 0] {
            assert_eq!(p, centre);
            lit += 1;
        }
    }
    assert!((lit as f64 / 1024.0 - std::f64::consts::FRAC_PI_4).abs() < 0.03);
}

#[test]
fn render_kinds_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_measurement(dir.path(), "scene.csv", &sky_and_sun(ts(0), [0.3, -0.5, 0.6], 2.0, 0.5));
    let out = dir.path().join("out");
    let (code, _, _) = run(&["render", s(&f), "--kind", "spectral", "--size", "32", "--bands-nm", "20", "--out", s(&out)]);
    assert_eq!(code, EXIT_OK);
    let pngs: Vec<_> = std::fs::read_dir(&out).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    assert_eq!(pngs.len(), 22);
    assert!(pngs.contains(&"scene_20200918T063000Z_spectral-380-400.png".to_string()));
    assert!(pngs.contains(&"scene_20200918T063000Z_superposed.png".to_string()));
    assert!(pngs.contains(&"scene_20200918T063000Z_luminance-only.png".to_string()));

    let (code, _, _) = run(&["render", s(&f), "--kind", "map", "--size", "32", "--session", "day1", "--out", s(&out)]);
    assert_eq!(code, EXIT_OK);
    let map = out.join("day1_20200918T063000Z_map.png");
    assert_eq!(decode(&map).0, 64);
    let first = std::fs::read(&map).unwrap();
    run(&["render", s(&f), "--kind", "map", "--size", "32", "--session", "day1", "--out", s(&out)]);
    assert_eq!(first, std::fs::read(&map).unwrap());

    assert_eq!(run(&["render", s(&f), "--size", "4", "--out", s(&out)]).0, EXIT_USAGE);
    assert_eq!(run(&["render", s(&f), "--kind", "spectral", "--bands-nm", "500", "--out", s(&out)]).0, EXIT_USAGE);
    let missing = dir.path().join("nope.csv");
    assert_eq!(run(&["render", s(&missing), "--out", s(&out)]).0, luxfield::cli::EXIT_IO);
}

#[test]
fn outputs_are_deterministic_and_inputs_untouched() {
    let dir = tempfile::tempdir().unwrap();
    let session = dir.path().join("day");
    std::fs::create_dir(&session).unwrap();
    write_day(&session, 5, false);
    let before: Vec<Vec<u8>> = luxfield::ingest::list_measurement_files(&session)
        .unwrap()
        .iter()
        .map(|p| std::fs::read(p).unwrap())
        .collect();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for o in [&a, &b] {
        assert_eq!(run(&["timeseries", s(&session), "--out", s(o)]).0, EXIT_OK);
        assert_eq!(run(&["decompose", s(&session), "--out", s(o)]).0, EXIT_OK);
    }
    for name in ["series.csv", "series.json", "stats.csv", "stats.json", "sunpath.csv", "summary.csv", "summary.json"] {
        let x = std::fs::read_to_string(a.join(name)).unwrap();
        let y = std::fs::read_to_string(b.join(name)).unwrap();
        // paths differ only through the session directory, which is shared
        assert_eq!(x, y, "{name}");
    }
    let after: Vec<Vec<u8>> = luxfield::ingest::list_measurement_files(&session)
        .unwrap()
        .iter()
        .map(|p| std::fs::read(p).unwrap())
        .collect();
    assert_eq!(before, after);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_luxfield");
    let status = std::process::Command::new(bin).arg("--version").output().unwrap();
    assert_eq!(status.status.code(), Some(0));
    let status = std::process::Command::new(bin).arg("decompose").output().unwrap();
    assert_eq!(status.status.code(), Some(64));
}
