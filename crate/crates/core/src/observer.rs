//! CIE 2-degree observer tables.
//!
//! The embedded table is the CIE 2012 2° XYZ colour-matching functions
//! (CIE 170-2), derived from the CIE 2006 2° LMS cone fundamentals. Its
//! ȳ is the CIE 2008 2° physiologically relevant luminous efficiency
//! function. Native grid: 390–830 nm at 5 nm.

use alloc::vec::Vec;

use crate::spectral::{SpectralDistribution, SpectralError, WavelengthGrid};

/// Plain-text table shipped with the crate: `wavelength,xbar,ybar,zbar` per
/// line, `#` comments allowed.
pub const EMBEDDED_TABLE: &str = include_str!("../data/cie2012_2deg_xyz_5nm.csv");

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ObserverError {
    #[error("line {line}: expected 4 comma-separated numbers")]
    MalformedLine { line: usize },
    #[error("observer table grid: {0}")]
    Grid(#[from] SpectralError),
    #[error("observer table must not contain negative values")]
    Negative,
}

/// The three colour-matching functions on a shared grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ObserverTables {
    pub xbar: SpectralDistribution,
    pub ybar: SpectralDistribution,
    pub zbar: SpectralDistribution,
}

impl ObserverTables {
    pub fn grid(&self) -> &WavelengthGrid {
        self.ybar.grid()
    }
}

/// The embedded CIE 2012 2° tables.
pub fn load_observer_tables() -> ObserverTables {
    parse_observer_tables(EMBEDDED_TABLE).expect("embedded observer table is well formed")
}

/// Parses an observer table in the embedded text format.
pub fn parse_observer_tables(text: &str) -> Result<ObserverTables, ObserverError> {
    let mut wl = Vec::new();
    let mut cols: [Vec<f64>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split(',').map(|f| f.trim().parse::<f64>());
        let mut row = [0.0; 4];
        for slot in row.iter_mut() {
            *slot = match fields.next() {
                Some(Ok(v)) if v.is_finite() => v,
                _ => return Err(ObserverError::MalformedLine { line: n + 1 }),
            };
        }
        if fields.next().is_some() {
            return Err(ObserverError::MalformedLine { line: n + 1 });
        }
        wl.push(row[0]);
        for (c, v) in cols.iter_mut().zip(&row[1..]) {
            if *v < 0.0 {
                return Err(ObserverError::Negative);
            }
            c.push(*v);
        }
    }
    let grid = WavelengthGrid::from_wavelengths(&wl)?;
    let [x, y, z] = cols;
    Ok(ObserverTables {
        xbar: SpectralDistribution::new(grid, x)?,
        ybar: SpectralDistribution::new(grid, y)?,
        zbar: SpectralDistribution::new(grid, z)?,
    })
}
