//! UTC instants without a calendar dependency.

use core::fmt;

/// A UTC instant stored as whole milliseconds since the Unix epoch.
///
/// Calendar parsing and formatting happen in the IO crate; the core only
/// needs ordering, differences and the Julian day.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Timestamp(i64);

impl Timestamp {
    pub const fn from_unix_millis(ms: i64) -> Self {
        Timestamp(ms)
    }

    pub const fn from_unix_seconds(s: i64) -> Self {
        Timestamp(s * 1000)
    }

    pub const fn unix_millis(self) -> i64 {
        self.0
    }

    pub fn unix_seconds(self) -> f64 {
        self.0 as f64 / 1000.0
    }

    /// Signed difference `self − earlier` in seconds.
    pub fn seconds_since(self, earlier: Timestamp) -> f64 {
        (self.0 - earlier.0) as f64 / 1000.0
    }

    pub fn julian_day(self) -> f64 {
        self.unix_seconds() / 86_400.0 + 2_440_587.5
    }
}

impl fmt::Display for Timestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}ms", self.0)
    }
}
