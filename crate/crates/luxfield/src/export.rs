//! CSV and JSON tables for summaries, comparisons and statistics.
//!
//! Every float is written with 9 significant digits. Undefined values are
//! empty CSV cells and JSON `null`. Run settings are echoed as leading
//! `# key=value` lines in CSV and a `settings` object in JSON.
//!
//! Summary columns, in order:
//!
//! | column | unit |
//! |---|---|
//! | `timestamp`, `source` | RFC 3339 UTC, input path |
//! | `{c}_illuminance` | lux |
//! | `{c}_X`, `{c}_Y`, `{c}_Z` | tristimulus, Y in lux |
//! | `{c}_x`, `{c}_y`, `{c}_u_prime`, `{c}_v_prime` | chromaticity |
//! | `{c}_cct`, `{c}_duv` | K, CIE 1960 distance |
//! | `vector_ex`, `vector_ey`, `vector_ez` | photometric vector, lux |
//! | `vector_illuminance_norm` | lux |
//! | `diffuseness`, `diffuseness_spectral` | 0..1 |
//! | `altitude_deg`, `azimuth_deg` | degrees |
//!
//! with `{c}` in `symmetric`, `scalar`, `vector`. The vector component's
//! illuminance integrates the per-wavelength magnitude, while
//! `vector_illuminance_norm` is the norm of the photometric triple.

use std::path::{Path, PathBuf};

use luxfield_core::analysis::{ComparisonRecord, ComponentDelta, ComponentSummary, PhotometricSummary};
use serde_json::{Map, Number, Value};

use crate::ingest::format_timestamp;

#[derive(Debug, thiserror::Error)]
pub enum ExportError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

pub const COMPONENTS: [&str; 3] = ["symmetric", "scalar", "vector"];

/// `%.9g`-style formatting.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return String::new();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    } else {
        format!("{}e{}{:02}", trim_zeros(mantissa), if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// `x` rounded to 9 significant digits.
pub fn round_sig(x: f64) -> f64 {
    fmt_sig(x).parse().unwrap_or(x)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Num(Option<f64>),
    Int(Option<i64>),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Num(Some(x)) => fmt_sig(*x),
            Cell::Int(Some(i)) => i.to_string(),
            Cell::Num(None) | Cell::Int(None) => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Num(Some(x)) => Number::from_f64(round_sig(*x)).map_or(Value::Null, Value::Number),
            Cell::Int(Some(i)) => Value::from(*i),
            Cell::Num(None) | Cell::Int(None) => Value::Null,
        }
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        Cell::Num(v.filter(|x| x.is_finite()))
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Some(v).into()
    }
}

/// Column-stable table with provenance settings.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub settings: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<String>, settings: &[(String, String)]) -> Self {
        Self {
            settings: settings.to_vec(),
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String, ExportError> {
        let mut out = Vec::new();
        for (k, v) in &self.settings {
            out.extend_from_slice(format!("# {k}={v}\n").as_bytes());
        }
        {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(&self.columns)?;
            for r in &self.rows {
                w.write_record(r.iter().map(Cell::csv))?;
            }
            w.flush().map_err(csv::Error::from)?;
        }
        Ok(String::from_utf8(out).expect("csv output is UTF-8"))
    }

    pub fn to_json(&self) -> String {
        let settings: Map<String, Value> = self
            .settings
            .iter()
            .map(|(k, v)| (k.clone(), Value::String(v.clone())))
            .collect();
        let records: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Object(self.columns.iter().cloned().zip(r.iter().map(Cell::json)).collect()))
            .collect();
        let mut root = Map::new();
        root.insert("settings".into(), Value::Object(settings));
        root.insert("records".into(), Value::Array(records));
        let mut s = serde_json::to_string_pretty(&Value::Object(root)).expect("JSON values serialize");
        s.push('\n');
        s
    }

    pub fn write_csv(&self, path: &Path) -> Result<(), ExportError> {
        write(path, self.to_csv()?)
    }

    pub fn write_json(&self, path: &Path) -> Result<(), ExportError> {
        write(path, self.to_json())
    }
}

pub(crate) fn write(path: &Path, contents: impl AsRef<[u8]>) -> Result<(), ExportError> {
    std::fs::write(path, contents).map_err(|source| ExportError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn summary_columns() -> Vec<String> {
    let mut cols = vec!["timestamp".to_string(), "source".to_string()];
    for c in COMPONENTS {
        for q in ["illuminance", "X", "Y", "Z", "x", "y", "u_prime", "v_prime", "cct", "duv"] {
            cols.push(format!("{c}_{q}"));
        }
    }
    for q in [
        "vector_ex",
        "vector_ey",
        "vector_ez",
        "vector_illuminance_norm",
        "diffuseness",
        "diffuseness_spectral",
        "altitude_deg",
        "azimuth_deg",
    ] {
        cols.push(q.into());
    }
    cols
}

fn component_cells(c: &ComponentSummary, out: &mut Vec<Cell>) {
    out.push(c.illuminance.into());
    match c.color {
        Ok(col) => {
            let t = col.tristimulus;
            let ch = col.chromaticity;
            out.extend([t.x, t.y, t.z, ch.x, ch.y, ch.u_prime, ch.v_prime].map(Cell::from));
            match col.cct {
                Ok(cct) => out.extend([cct.kelvin.into(), cct.duv.into()]),
                Err(_) => out.extend([Cell::Num(None), Cell::Num(None)]),
            }
        }
        Err(_) => out.extend((0..9).map(|_| Cell::Num(None))),
    }
}

pub fn summary_cells(source: &str, s: &PhotometricSummary) -> Vec<Cell> {
    let mut out = vec![Cell::Text(format_timestamp(s.timestamp)), Cell::Text(source.to_string())];
    for c in [&s.symmetric, &s.scalar, &s.vector] {
        component_cells(c, &mut out);
    }
    let v = s.vector_photometric;
    out.extend([v.x, v.y, v.z, s.vector_illuminance_norm()].map(Cell::from));
    out.push(s.diffuseness.ok().into());
    out.push(s.diffuseness_spectral.ok().into());
    out.push(s.direction.ok().map(|d| d.altitude_deg).into());
    out.push(s.direction.ok().and_then(|d| d.azimuth_deg).into());
    out
}

/// One row per summary, in the given order.
pub fn summary_table(rows: &[(String, PhotometricSummary)], settings: &[(String, String)]) -> Table {
    let mut t = Table::new(summary_columns(), settings);
    for (source, s) in rows {
        t.push(summary_cells(source, s));
    }
    t
}

pub fn comparison_columns() -> Vec<String> {
    let mut cols = vec!["scene_id".to_string()];
    for c in COMPONENTS {
        for q in ["delta_cct", "illuminance_ratio", "color_difference"] {
            cols.push(format!("{c}_{q}"));
        }
    }
    cols.push("delta_diffuseness".into());
    cols.push("delta_altitude_deg".into());
    cols
}

fn delta_cells(d: &ComponentDelta) -> [Cell; 3] {
    [d.delta_cct_k.into(), d.illuminance_ratio.into(), d.color_difference.into()]
}

pub fn comparison_table(records: &[ComparisonRecord], settings: &[(String, String)]) -> Table {
    let mut t = Table::new(comparison_columns(), settings);
    for r in records {
        let mut row = vec![Cell::Int(Some(i64::from(r.scene_id)))];
        for d in [&r.symmetric, &r.scalar, &r.vector] {
            row.extend(delta_cells(d));
        }
        row.push(r.delta_diffuseness.into());
        row.push(r.delta_altitude_deg.into());
        t.push(row);
    }
    t
}

/// Mean, sample SD and n of every numeric comparison column, skipping
/// undefined entries.
pub fn comparison_aggregate(records: &[ComparisonRecord], settings: &[(String, String)]) -> Table {
    let full = comparison_table(records, &[]);
    let mut t = Table::new(vec!["quantity".into(), "mean".into(), "sd".into(), "n".into()], settings);
    for (i, name) in full.columns.iter().enumerate().skip(1) {
        let vals: Vec<f64> = full
            .rows
            .iter()
            .filter_map(|r| match r[i] {
                Cell::Num(v) => v,
                _ => None,
            })
            .collect();
        t.push(vec![
            Cell::Text(name.clone()),
            luxfield_core::stats::mean(&vals).into(),
            luxfield_core::stats::sample_sd(&vals).into(),
            Cell::Int(Some(vals.len() as i64)),
        ]);
    }
    t
}
