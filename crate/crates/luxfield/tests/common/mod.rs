#![allow(dead_code)]

use std::path::{Path, PathBuf};

use luxfield::ingest::write_canonical;
use luxfield_core::photometry::planck;
use luxfield_core::{CubicMeasurement, GeoLocation, SpectralDistribution, Timestamp, WavelengthGrid};

/// 2020-09-18T06:30:00Z
pub const DAY_START_S: i64 = 1_600_410_600;

pub fn blackbody(kelvin: f64, scale: f64) -> SpectralDistribution {
    let peak = planck(560.0, kelvin);
    SpectralDistribution::from_fn(WavelengthGrid::CANONICAL, |w| scale * planck(w, kelvin) / peak)
}

pub fn cube(faces: [SpectralDistribution; 6], t: Timestamp) -> CubicMeasurement {
    let delft = GeoLocation::new(52.0116, 4.3571).unwrap();
    CubicMeasurement::new(faces, t, Some(delft), "fixture").unwrap()
}

/// A warm beam from `(east, north, up)` over cooler skylight.
pub fn sky_and_sun(t: Timestamp, sun: [f64; 3], sun_scale: f64, sky_scale: f64) -> CubicMeasurement {
    let beam = blackbody(4500.0, sun_scale);
    let sky = blackbody(9000.0, sky_scale);
    let w = [sun[0].max(0.0), (-sun[0]).max(0.0), sun[1].max(0.0), (-sun[1]).max(0.0), sun[2].max(0.0), (-sun[2]).max(0.0)];
    let sky_w = [0.6, 0.6, 0.6, 0.6, 1.0, 0.25];
    cube(
        core::array::from_fn(|i| beam.scale(w[i]).add(&sky.scale(sky_w[i])).unwrap()),
        t,
    )
}

pub fn write_measurement(dir: &Path, name: &str, m: &CubicMeasurement) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, write_canonical(m)).unwrap();
    p
}

pub fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["luxfield"];
    full.extend_from_slice(args);
    let code = luxfield::cli::run(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

/// Data rows of a CSV export (comment lines and header dropped).
pub fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    let text = std::fs::read_to_string(path).unwrap();
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect()
}

pub fn csv_header(path: &Path) -> Vec<String> {
    let text = std::fs::read_to_string(path).unwrap();
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    r.headers().unwrap().iter().map(String::from).collect()
}

pub fn column(path: &Path, name: &str) -> Vec<String> {
    let idx = csv_header(path).iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
    csv_rows(path).into_iter().map(|r| r[idx].clone()).collect()
}
