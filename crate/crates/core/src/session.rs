//! Time-ordered measurement sessions, analysis windows and lit/shade pairs.

use alloc::string::String;
use alloc::vec::Vec;

use crate::decomposition::CubicMeasurement;
use crate::time::Timestamp;

/// Largest allowed acquisition gap between the members of a lit/shade pair.
pub const MAX_PAIR_GAP_S: f64 = 120.0;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SessionError {
    #[error("a session needs at least one measurement")]
    Empty,
    #[error("two measurements share the timestamp {0}")]
    DuplicateTimestamp(Timestamp),
    #[error("window '{name}' lies outside the data range")]
    WindowOutOfRange { name: String },
    #[error("window '{name}' ends before it starts")]
    InvertedWindow { name: String },
    #[error("latitude {0}° is outside [-90, 90]")]
    InvalidLatitude(f64),
    #[error("pair members were taken {gap_s} s apart (limit {MAX_PAIR_GAP_S} s)")]
    PairTooFarApart { gap_s: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeoLocation {
    pub latitude_deg: f64,
    /// East positive.
    pub longitude_deg: f64,
}

impl GeoLocation {
    pub fn new(latitude_deg: f64, longitude_deg: f64) -> Result<Self, SessionError> {
        if !(-90.0..=90.0).contains(&latitude_deg) {
            return Err(SessionError::InvalidLatitude(latitude_deg));
        }
        Ok(Self {
            latitude_deg,
            longitude_deg,
        })
    }
}

/// A requested analysis window, before validation against data.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowSpec {
    pub name: String,
    pub start: Timestamp,
    pub end: Timestamp,
}

/// A validated window inside a session's time span.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeWindow {
    pub name: String,
    pub start: Timestamp,
    pub end: Timestamp,
    /// Strictly inside the session span (touches neither end).
    pub interior: bool,
}

impl TimeWindow {
    pub fn contains(&self, t: Timestamp) -> bool {
        self.start <= t && t <= self.end
    }

    /// A window covering `[start, end]` without session validation.
    pub fn spanning(name: impl Into<String>, start: Timestamp, end: Timestamp) -> Self {
        Self {
            name: name.into(),
            start,
            end,
            interior: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SessionMetadata {
    pub site: String,
    pub device: String,
    /// Free-form sky condition tag, e.g. "sunny" or "cloudy".
    pub sky: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Session {
    measurements: Vec<CubicMeasurement>,
    windows: Vec<TimeWindow>,
    pub metadata: SessionMetadata,
}

impl Session {
    pub fn measurements(&self) -> &[CubicMeasurement] {
        &self.measurements
    }

    pub fn windows(&self) -> &[TimeWindow] {
        &self.windows
    }

    pub fn window(&self, name: &str) -> Option<&TimeWindow> {
        self.windows.iter().find(|w| w.name == name)
    }

    pub fn first_timestamp(&self) -> Timestamp {
        self.measurements[0].timestamp
    }

    pub fn last_timestamp(&self) -> Timestamp {
        self.measurements[self.measurements.len() - 1].timestamp
    }

    /// The whole session as a window named `all`.
    pub fn full_span(&self) -> TimeWindow {
        TimeWindow::spanning("all", self.first_timestamp(), self.last_timestamp())
    }
}

/// Sorts measurements by time and validates the requested windows.
pub fn assemble_session(
    mut measurements: Vec<CubicMeasurement>,
    windows: &[WindowSpec],
    metadata: SessionMetadata,
) -> Result<Session, SessionError> {
    if measurements.is_empty() {
        return Err(SessionError::Empty);
    }
    measurements.sort_by_key(|m| m.timestamp);
    if let Some(w) = measurements.windows(2).find(|w| w[0].timestamp == w[1].timestamp) {
        return Err(SessionError::DuplicateTimestamp(w[0].timestamp));
    }
    let first = measurements[0].timestamp;
    let last = measurements[measurements.len() - 1].timestamp;
    let mut validated = Vec::with_capacity(windows.len());
    for w in windows {
        if w.end < w.start {
            return Err(SessionError::InvertedWindow { name: w.name.clone() });
        }
        if w.start < first || w.end > last {
            return Err(SessionError::WindowOutOfRange { name: w.name.clone() });
        }
        validated.push(TimeWindow {
            name: w.name.clone(),
            start: w.start,
            end: w.end,
            interior: w.start > first && w.end < last,
        });
    }
    Ok(Session {
        measurements,
        windows: validated,
        metadata,
    })
}

/// Lit and shaded measurements of one scene, taken close together in time.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementPair {
    pub lit: CubicMeasurement,
    pub shaded: CubicMeasurement,
    pub scene_id: u32,
}

impl MeasurementPair {
    pub fn new(scene_id: u32, lit: CubicMeasurement, shaded: CubicMeasurement) -> Result<Self, SessionError> {
        let gap_s = lit.timestamp.seconds_since(shaded.timestamp).abs();
        if gap_s > MAX_PAIR_GAP_S {
            return Err(SessionError::PairTooFarApart { gap_s });
        }
        Ok(Self { lit, shaded, scene_id })
    }
}
