//! Reading cubic measurements from disk and writing the canonical format.
//!
//! Canonical files are UTF-8 CSV:
//!
//! ```text
//! #timestamp=2020-09-18T12:00:00Z
//! #lat=52.0116
//! #lon=4.3571
//! #device=CL-500A
//! face,380,385,...,780
//! x+,0.012,0.013,...
//! ...six rows in any order...
//! ```
//!
//! Only `timestamp` is required. Unknown `#key=value` lines and `#` lines
//! without `=` are ignored. Vendor dialects are column-mapped through a
//! [`DialectMapping`] with one wavelength per row.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use chrono::{DateTime, FixedOffset, NaiveTime, SecondsFormat, TimeZone, Utc};
use luxfield_core::decomposition::DecompositionError;
use luxfield_core::session::WindowSpec;
use luxfield_core::{CubicMeasurement, Face, GeoLocation, SpectralDistribution, Timestamp, WavelengthGrid};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("input is not valid UTF-8")]
    NotUtf8,
    #[error("missing header row")]
    MissingHeader,
    #[error("missing face {0}")]
    MissingFace(Face),
    #[error("line {line}: duplicate face {face}")]
    DuplicateFace { face: Face, line: usize },
    #[error("line {line}: malformed wavelength grid: {reason}")]
    MalformedGrid { line: usize, reason: String },
    #[error("line {line}, column {column}: invalid irradiance {value}")]
    InvalidMeasurement { line: usize, column: usize, value: f64 },
    #[error("line {line}, column {column}: {reason}")]
    Malformed { line: usize, column: usize, reason: String },
    #[error("missing metadata key `{0}`")]
    MissingMetadata(&'static str),
    #[error("line {line}: bad value for metadata key `{key}`")]
    BadMetadata { line: usize, key: String },
    #[error("dialect mapping: {0}")]
    Mapping(String),
    #[error(transparent)]
    Decomposition(#[from] DecompositionError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Dialect {
    #[default]
    Canonical,
    Sekonic,
    Konica,
}

/// Column layout of a vendor export: one wavelength per row, one column
/// per face.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DialectMapping {
    #[serde(default = "default_delimiter")]
    pub delimiter: char,
    pub wavelength_column: String,
    /// Face label (`x+`, `x-`, ...) to column header.
    pub faces: BTreeMap<String, String>,
    /// Multiplier bringing values to W·m⁻²·nm⁻¹.
    #[serde(default = "default_scale")]
    pub scale: f64,
}

fn default_delimiter() -> char {
    ','
}

fn default_scale() -> f64 {
    1.0
}

impl DialectMapping {
    /// Built-in layout for a dialect. Firmware versions differ, so real
    /// exports usually need a sidecar mapping.
    pub fn builtin(dialect: Dialect) -> Option<DialectMapping> {
        let (delimiter, wavelength_column) = match dialect {
            Dialect::Canonical => return None,
            Dialect::Sekonic => (',', "Wavelength [nm]"),
            Dialect::Konica => ('\t', "Wavelength(nm)"),
        };
        Some(DialectMapping {
            delimiter,
            wavelength_column: wavelength_column.to_string(),
            faces: Face::ALL.iter().map(|f| (f.label().to_string(), f.label().to_string())).collect(),
            scale: 1.0,
        })
    }

    pub fn from_json(text: &str) -> Result<DialectMapping, IngestError> {
        serde_json::from_str(text).map_err(|e| IngestError::Mapping(e.to_string()))
    }

    fn face_columns(&self) -> Result<[&str; 6], IngestError> {
        let mut cols = [""; 6];
        let mut seen = [false; 6];
        for (label, col) in &self.faces {
            let face = Face::from_label(label).ok_or_else(|| IngestError::Mapping(format!("unknown face `{label}`")))?;
            if seen[face.index()] {
                return Err(IngestError::Mapping(format!("face {face} mapped twice")));
            }
            seen[face.index()] = true;
            cols[face.index()] = col.as_str();
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(IngestError::Mapping(format!("no column for face {}", Face::ALL[i])));
        }
        if !(self.scale.is_finite() && self.scale > 0.0) {
            return Err(IngestError::Mapping(format!("scale must be positive, got {}", self.scale)));
        }
        if !self.delimiter.is_ascii() {
            return Err(IngestError::Mapping("delimiter must be ASCII".into()));
        }
        Ok(cols)
    }
}

#[derive(Debug, Default)]
struct Metadata {
    timestamp: Option<Timestamp>,
    lat: Option<(usize, f64)>,
    lon: Option<(usize, f64)>,
    device: Option<String>,
}

impl Metadata {
    fn take_line(&mut self, line_no: usize, line: &str) -> Result<(), IngestError> {
        let Some((key, value)) = line.trim_start_matches('#').split_once('=') else {
            return Ok(());
        };
        let key = key.trim();
        let value = value.trim();
        let bad = || IngestError::BadMetadata {
            line: line_no,
            key: key.to_string(),
        };
        match key {
            "timestamp" => self.timestamp = Some(parse_timestamp(value).ok_or_else(bad)?),
            "lat" => self.lat = Some((line_no, value.parse().map_err(|_| bad())?)),
            "lon" => self.lon = Some((line_no, value.parse().map_err(|_| bad())?)),
            "device" => self.device = Some(value.to_string()),
            _ => {}
        }
        Ok(())
    }

    fn finish(self, faces: [SpectralDistribution; 6]) -> Result<CubicMeasurement, IngestError> {
        let timestamp = self.timestamp.ok_or(IngestError::MissingMetadata("timestamp"))?;
        let location = match (self.lat, self.lon) {
            (None, None) => None,
            (Some((line, lat)), Some((_, lon))) => Some(GeoLocation::new(lat, lon).map_err(|_| {
                IngestError::BadMetadata {
                    line,
                    key: "lat".into(),
                }
            })?),
            (None, Some(_)) => return Err(IngestError::MissingMetadata("lat")),
            (Some(_), None) => return Err(IngestError::MissingMetadata("lon")),
        };
        Ok(CubicMeasurement::new(faces, timestamp, location, self.device.unwrap_or_default())?)
    }
}

/// Parses an RFC 3339 instant into a UTC timestamp.
pub fn parse_timestamp(s: &str) -> Option<Timestamp> {
    DateTime::parse_from_rfc3339(s.trim())
        .ok()
        .map(|d| Timestamp::from_unix_millis(d.timestamp_millis()))
}

/// RFC 3339 UTC rendering with fractional seconds only when present.
pub fn format_timestamp(t: Timestamp) -> String {
    match Utc.timestamp_millis_opt(t.unix_millis()).single() {
        Some(d) => d.to_rfc3339_opts(SecondsFormat::AutoSi, true),
        None => t.to_string(),
    }
}

/// Compact UTC form used in file names, e.g. `20200918T120000Z`.
pub fn file_stamp(t: Timestamp) -> String {
    match Utc.timestamp_millis_opt(t.unix_millis()).single() {
        Some(d) => d.format("%Y%m%dT%H%M%SZ").to_string(),
        None => t.unix_millis().to_string(),
    }
}

fn strip_bom(text: &str) -> &str {
    text.strip_prefix('\u{feff}').unwrap_or(text)
}

fn parse_value(field: &str, line: usize, column: usize) -> Result<f64, IngestError> {
    let v: f64 = field.trim().parse().map_err(|_| IngestError::Malformed {
        line,
        column,
        reason: format!("`{}` is not a number", field.trim()),
    })?;
    if !v.is_finite() || v < 0.0 {
        return Err(IngestError::InvalidMeasurement { line, column, value: v });
    }
    Ok(v)
}

/// Parses a file in the canonical format.
pub fn parse_canonical(text: &str) -> Result<CubicMeasurement, IngestError> {
    let mut meta = Metadata::default();
    let mut grid: Option<(WavelengthGrid, usize)> = None;
    let mut rows: [Option<Vec<f64>>; 6] = Default::default();

    for (idx, raw) in strip_bom(text).lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('#') {
            meta.take_line(line_no, line)?;
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let Some((g, columns)) = grid else {
            if !fields[0].trim().eq_ignore_ascii_case("face") {
                return Err(IngestError::Malformed {
                    line: line_no,
                    column: 1,
                    reason: "header must start with `face`".into(),
                });
            }
            let wl: Vec<f64> = fields[1..]
                .iter()
                .map(|f| f.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|_| IngestError::MalformedGrid {
                    line: line_no,
                    reason: "wavelength is not a number".into(),
                })?;
            let g = WavelengthGrid::from_wavelengths(&wl).map_err(|e| IngestError::MalformedGrid {
                line: line_no,
                reason: e.to_string(),
            })?;
            grid = Some((g, fields.len()));
            continue;
        };
        let label = fields[0].trim();
        let face = Face::from_label(label).ok_or_else(|| IngestError::Malformed {
            line: line_no,
            column: 1,
            reason: format!("unknown face `{label}`"),
        })?;
        if fields.len() != columns {
            return Err(IngestError::Malformed {
                line: line_no,
                column: fields.len().min(columns) + 1,
                reason: format!("expected {columns} fields, found {}", fields.len()),
            });
        }
        if rows[face.index()].is_some() {
            return Err(IngestError::DuplicateFace { face, line: line_no });
        }
        let values = fields[1..]
            .iter()
            .enumerate()
            .map(|(i, f)| parse_value(f, line_no, i + 2))
            .collect::<Result<Vec<_>, _>>()?;
        debug_assert_eq!(values.len(), g.count());
        rows[face.index()] = Some(values);
    }

    let (g, _) = grid.ok_or(IngestError::MissingHeader)?;
    finish_rows(meta, g, rows)
}

fn finish_rows(meta: Metadata, g: WavelengthGrid, rows: [Option<Vec<f64>>; 6]) -> Result<CubicMeasurement, IngestError> {
    if let Some(i) = rows.iter().position(Option::is_none) {
        return Err(IngestError::MissingFace(Face::ALL[i]));
    }
    let mut faces = Vec::with_capacity(6);
    for r in rows.into_iter().flatten() {
        faces.push(SpectralDistribution::irradiance(g, r).map_err(|e| IngestError::Malformed {
            line: 0,
            column: 0,
            reason: e.to_string(),
        })?);
    }
    let faces: [SpectralDistribution; 6] = faces.try_into().map_err(|_| IngestError::MissingHeader)?;
    meta.finish(faces)
}

/// Parses a vendor export with a wavelength column and one column per face.
pub fn parse_mapped(text: &str, mapping: &DialectMapping) -> Result<CubicMeasurement, IngestError> {
    let columns = mapping.face_columns()?;
    let mut meta = Metadata::default();
    // Blank out metadata lines so the CSV reader keeps original line numbers.
    let mut body = String::with_capacity(text.len());
    for (idx, raw) in strip_bom(text).lines().enumerate() {
        if raw.trim_start().starts_with('#') {
            meta.take_line(idx + 1, raw.trim())?;
        } else {
            body.push_str(raw);
        }
        body.push('\n');
    }

    let mut reader = csv::ReaderBuilder::new()
        .delimiter(mapping.delimiter as u8)
        .trim(csv::Trim::All)
        .flexible(false)
        .from_reader(body.as_bytes());
    let csv_err = |e: csv::Error| {
        let line = e.position().map_or(0, |p| p.line() as usize);
        IngestError::Malformed {
            line,
            column: 0,
            reason: e.to_string(),
        }
    };
    let headers = reader.headers().map_err(csv_err)?.clone();
    if headers.is_empty() || headers.iter().all(str::is_empty) {
        return Err(IngestError::MissingHeader);
    }
    let find = |name: &str| headers.iter().position(|h| h == name);
    let wl_col = find(&mapping.wavelength_column)
        .ok_or_else(|| IngestError::Mapping(format!("no column `{}`", mapping.wavelength_column)))?;
    let mut face_cols = [0usize; 6];
    for (i, name) in columns.iter().enumerate() {
        face_cols[i] = find(name).ok_or(IngestError::MissingFace(Face::ALL[i]))?;
    }

    let mut wavelengths = Vec::new();
    let mut values: [Vec<f64>; 6] = Default::default();
    let mut first_line = 0;
    for record in reader.records() {
        let record = record.map_err(csv_err)?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if first_line == 0 {
            first_line = line;
        }
        let field = |c: usize| record.get(c).unwrap_or("");
        let wl: f64 = field(wl_col).parse().map_err(|_| IngestError::MalformedGrid {
            line,
            reason: format!("`{}` is not a wavelength", field(wl_col)),
        })?;
        wavelengths.push(wl);
        for (i, &c) in face_cols.iter().enumerate() {
            let v = parse_value(field(c), line, c + 1)? * mapping.scale;
            values[i].push(v);
        }
    }
    let g = WavelengthGrid::from_wavelengths(&wavelengths).map_err(|e| IngestError::MalformedGrid {
        line: first_line,
        reason: e.to_string(),
    })?;
    finish_rows(meta, g, values.map(Some))
}

/// Parses raw bytes in `dialect`. Non-canonical dialects use `mapping` or
/// the built-in layout.
pub fn parse_cubic_bytes(
    bytes: &[u8],
    dialect: Dialect,
    mapping: Option<&DialectMapping>,
) -> Result<CubicMeasurement, IngestError> {
    let text = std::str::from_utf8(bytes).map_err(|_| IngestError::NotUtf8)?;
    parse_cubic_csv(text, dialect, mapping)
}

pub fn parse_cubic_csv(
    text: &str,
    dialect: Dialect,
    mapping: Option<&DialectMapping>,
) -> Result<CubicMeasurement, IngestError> {
    match dialect {
        Dialect::Canonical => parse_canonical(text),
        _ => match mapping {
            Some(m) => parse_mapped(text, m),
            None => parse_mapped(text, &DialectMapping::builtin(dialect).expect("vendor dialect")),
        },
    }
}

/// Writes `m` in the canonical format. Floats use the shortest
/// representation that parses back to the same value.
pub fn write_canonical(m: &CubicMeasurement) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "#timestamp={}", format_timestamp(m.timestamp));
    if let Some(loc) = m.location {
        let _ = writeln!(out, "#lat={}", loc.latitude_deg);
        let _ = writeln!(out, "#lon={}", loc.longitude_deg);
    }
    if !m.device.is_empty() {
        let _ = writeln!(out, "#device={}", m.device);
    }
    out.push_str("face");
    for w in m.grid().wavelengths() {
        let _ = write!(out, ",{w}");
    }
    out.push('\n');
    for face in Face::ALL {
        out.push_str(face.label());
        for v in m.face(face).values() {
            let _ = write!(out, ",{v}");
        }
        out.push('\n');
    }
    out
}

/// Reads a sidecar mapping `<file>.mapping.json` if one exists.
pub fn sidecar_mapping(path: &Path) -> Result<Option<DialectMapping>, IngestError> {
    let mut name = path.as_os_str().to_owned();
    name.push(".mapping.json");
    let sidecar = PathBuf::from(name);
    if !sidecar.is_file() {
        return Ok(None);
    }
    let text = std::fs::read_to_string(&sidecar).map_err(|source| IngestError::Io { path: sidecar, source })?;
    DialectMapping::from_json(&text).map(Some)
}

/// Loads one measurement file. An explicit mapping wins over a sidecar.
pub fn load_measurement(
    path: &Path,
    dialect: Dialect,
    mapping: Option<&DialectMapping>,
) -> Result<CubicMeasurement, IngestError> {
    let bytes = std::fs::read(path).map_err(|source| IngestError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    if dialect == Dialect::Canonical {
        return parse_cubic_bytes(&bytes, dialect, None);
    }
    let sidecar = match mapping {
        Some(_) => None,
        None => sidecar_mapping(path)?,
    };
    parse_cubic_bytes(&bytes, dialect, mapping.or(sidecar.as_ref()))
}

const MEASUREMENT_EXTENSIONS: [&str; 3] = ["csv", "txt", "tsv"];

/// Measurement files directly inside `dir`, sorted by path.
pub fn list_measurement_files(dir: &Path) -> Result<Vec<PathBuf>, IngestError> {
    let io = |source| IngestError::Io {
        path: dir.to_path_buf(),
        source,
    };
    let mut files = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(io)? {
        let path = entry.map_err(io)?.path();
        let ext = path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase);
        if path.is_file() && ext.is_some_and(|e| MEASUREMENT_EXTENSIONS.contains(&e.as_str())) {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

#[derive(Debug)]
pub struct FileFailure {
    pub path: PathBuf,
    pub error: IngestError,
}

/// Loads every file, continuing past failures.
pub fn load_all(
    paths: &[PathBuf],
    dialect: Dialect,
    mapping: Option<&DialectMapping>,
) -> (Vec<(PathBuf, CubicMeasurement)>, Vec<FileFailure>) {
    let mut ok = Vec::new();
    let mut failed = Vec::new();
    for p in paths {
        match load_measurement(p, dialect, mapping) {
            Ok(m) => ok.push((p.clone(), m)),
            Err(error) => failed.push(FileFailure { path: p.clone(), error }),
        }
    }
    (ok, failed)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("window `{spec}`: {reason}")]
pub struct WindowSpecError {
    pub spec: String,
    pub reason: String,
}

/// Parses `name=HH:MM-HH:MM[@±HH:MM]` (or `HH:MM-HH:MM` for a window
/// named `window`) on the calendar date of `reference` in the given
/// offset, UTC when omitted.
pub fn parse_window_spec(spec: &str, reference: Timestamp) -> Result<WindowSpec, WindowSpecError> {
    let fail = |reason: &str| WindowSpecError {
        spec: spec.to_string(),
        reason: reason.to_string(),
    };
    let (name, rest) = match spec.split_once('=') {
        Some((n, r)) => (n.trim(), r.trim()),
        None => ("window", spec.trim()),
    };
    if name.is_empty() {
        return Err(fail("empty name"));
    }
    let (range, offset) = match rest.split_once('@') {
        Some((r, o)) => (r.trim(), parse_offset(o.trim()).ok_or_else(|| fail("offset must look like +02:00"))?),
        None => (rest, FixedOffset::east_opt(0).expect("zero offset")),
    };
    let (a, b) = range
        .split_once(['-', '–'])
        .ok_or_else(|| fail("expected HH:MM-HH:MM"))?;
    let parse_time = |s: &str| NaiveTime::parse_from_str(s.trim(), "%H:%M").map_err(|_| fail("times must be HH:MM"));
    let (start, end) = (parse_time(a)?, parse_time(b)?);
    let day = offset
        .timestamp_millis_opt(reference.unix_millis())
        .single()
        .ok_or_else(|| fail("reference time out of range"))?
        .date_naive();
    let at = |t: NaiveTime| {
        offset
            .from_local_datetime(&day.and_time(t))
            .single()
            .map(|d| Timestamp::from_unix_millis(d.timestamp_millis()))
            .ok_or_else(|| fail("time out of range"))
    };
    Ok(WindowSpec {
        name: name.to_string(),
        start: at(start)?,
        end: at(end)?,
    })
}

fn parse_offset(s: &str) -> Option<FixedOffset> {
    let (sign, rest) = match s.as_bytes().first()? {
        b'+' => (1, &s[1..]),
        b'-' => (-1, &s[1..]),
        _ => return None,
    };
    let (h, m) = rest.split_once(':')?;
    let (h, m): (i32, i32) = (h.parse().ok()?, m.parse().ok()?);
    if !(0..24).contains(&h) || !(0..60).contains(&m) {
        return None;
    }
    FixedOffset::east_opt(sign * (h * 3600 + m * 60))
}
