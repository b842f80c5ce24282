//! Spectral cubic illumination analysis.
//!
//! Six spectral irradiance measurements taken on the faces of a small
//! reference cube are decomposed, wavelength by wavelength, into a light
//! vector, a symmetric component and the light scalar (light density). From
//! those components this crate derives photometric and colorimetric
//! summaries, directional metrics (vector altitude/azimuth, diffuseness),
//! temporal statistics, and first-order shading of Lambertian probes.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, PNG output
//! and the command-line front end live in the `luxfield` crate.

#![no_std]
#![deny(unsafe_code)]
// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod decomposition;
pub mod geometry;
pub mod math;
pub mod observer;
pub mod photometry;
pub mod render;
pub mod session;
pub mod solar;
pub mod spectral;
pub mod stats;
pub mod time;

pub use decomposition::{decompose, CubicMeasurement, Face, LightFieldComponents};
pub use math::Vec3;
pub use observer::{load_observer_tables, ObserverTables};
pub use photometry::{Chromaticity, Colorimeter, Tristimulus};
pub use session::{GeoLocation, Session};
pub use spectral::{SpectralDistribution, SpectralError, WavelengthGrid};
pub use time::Timestamp;
