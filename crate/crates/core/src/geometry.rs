//! Directional metrics of the light vector: altitude, azimuth, diffuseness,
//! and wavelength-resolved vector directions.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::decomposition::LightFieldComponents;
use crate::math::Vec3;
use crate::photometry::Colorimeter;

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("direction undefined for a zero vector")]
    DirectionUndefined,
    #[error("diffuseness undefined for non-positive scalar illuminance")]
    DiffusenessUndefined,
    #[error("invalid band width {0} nm")]
    InvalidBandWidth(f64),
}

/// How azimuth angles are reported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AzimuthConvention {
    /// 0° = North (+y), increasing clockwise through East (+x) at 90°.
    #[default]
    Compass,
    /// 0° = East (+x), increasing counter-clockwise through North (+y) at 90°.
    Mathematical,
}

/// Direction and magnitude of a light vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VectorDirection {
    pub altitude_deg: f64,
    /// `None` when the vector is (numerically) vertical.
    pub azimuth_deg: Option<f64>,
    pub magnitude: f64,
}

impl VectorDirection {
    /// Unit vector pointing along this direction. A missing azimuth is
    /// treated as 0°, which is irrelevant for vertical vectors.
    pub fn unit_vector(&self, convention: AzimuthConvention) -> Vec3 {
        let alt = self.altitude_deg.to_radians();
        let az = self.azimuth_deg.unwrap_or(0.0).to_radians();
        let h = libm::cos(alt);
        let (east, north) = match convention {
            AzimuthConvention::Compass => (libm::sin(az), libm::cos(az)),
            AzimuthConvention::Mathematical => (libm::cos(az), libm::sin(az)),
        };
        Vec3::new(h * east, h * north, libm::sin(alt))
    }
}

fn degrees(rad: f64) -> f64 {
    rad * (180.0 / core::f64::consts::PI)
}

/// Altitude above the horizon and azimuth of a vector given in the
/// East/North/up frame.
pub fn vector_direction(v: Vec3, convention: AzimuthConvention) -> Result<VectorDirection, GeometryError> {
    let magnitude = v.norm();
    if !(magnitude > 0.0) || !magnitude.is_finite() {
        return Err(GeometryError::DirectionUndefined);
    }
    let horizontal = libm::hypot(v.x, v.y);
    let altitude_deg = if horizontal == 0.0 {
        if v.z > 0.0 {
            90.0
        } else {
            -90.0
        }
    } else {
        degrees(libm::atan2(v.z, horizontal))
    };
    let azimuth_deg = if horizontal < 1e-9 * magnitude {
        None
    } else {
        let raw = match convention {
            AzimuthConvention::Compass => libm::atan2(v.x, v.y),
            AzimuthConvention::Mathematical => libm::atan2(v.y, v.x),
        };
        let mut az = degrees(raw);
        if az < 0.0 {
            az += 360.0;
        }
        if az >= 360.0 {
            az -= 360.0;
        }
        Some(az)
    };
    Ok(VectorDirection {
        altitude_deg,
        azimuth_deg,
        magnitude,
    })
}

/// `1 − |E(vector)| / (4·E(scalar))`: 0 for collimated light, 1 for a
/// Ganzfeld.
///
/// The result is clamped to [0, 1]; for nonnegative cube data the bound
/// holds mathematically and the clamp only removes rounding noise.
pub fn diffuseness(vector: Vec3, scalar: f64) -> Result<f64, GeometryError> {
    if !(scalar > 0.0) || !scalar.is_finite() {
        return Err(GeometryError::DiffusenessUndefined);
    }
    Ok((1.0 - vector.norm() / (4.0 * scalar)).clamp(0.0, 1.0))
}

/// Spectral partition used by [`spectral_vector_directions`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Banding {
    /// One band, ȳ-weighted (photometric vector).
    Luminance,
    /// Blue < 490 nm ≤ green < 580 nm ≤ red, radiometric.
    Rgb,
    /// Consecutive bands of the given width starting at the grid start,
    /// radiometric.
    FixedWidth(f64),
    /// One band per grid sample, radiometric.
    PerSample,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BandVector {
    pub label: String,
    pub lower_nm: f64,
    pub upper_nm: f64,
    /// Grid sample indices belonging to the band.
    pub samples: core::ops::Range<usize>,
    /// Band-integrated light vector (lux for luminance banding, W·m⁻² otherwise).
    pub vector: Vec3,
    pub direction: Result<VectorDirection, GeometryError>,
    /// Band-integrated light scalar in the same units as `vector`.
    pub band_power: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralVectorSet {
    pub banding: Banding,
    pub entries: Vec<BandVector>,
}

/// Partitions the samples of `c`'s grid into contiguous bands.
pub fn band_ranges(
    grid: &crate::spectral::WavelengthGrid,
    banding: Banding,
) -> Result<Vec<(String, core::ops::Range<usize>)>, GeometryError> {
    let n = grid.count();
    let mut out = Vec::new();
    let mut push_by_key = |key: &dyn Fn(f64) -> usize, label: &dyn Fn(usize) -> String| {
        let mut start = 0;
        while start < n {
            let k = key(grid.wavelength(start));
            let mut end = start + 1;
            while end < n && key(grid.wavelength(end)) == k {
                end += 1;
            }
            out.push((label(k), start..end));
            start = end;
        }
    };
    match banding {
        Banding::Luminance => out.push((String::from("luminance"), 0..n)),
        Banding::PerSample => push_by_key(&|w| libm::round((w - grid.start_nm()) / grid.step_nm()) as usize, &|k| {
            format!("{}", grid.wavelength(k))
        }),
        Banding::Rgb => push_by_key(
            &|w| {
                if w < 490.0 {
                    0
                } else if w < 580.0 {
                    1
                } else {
                    2
                }
            },
            &|k| String::from(["B", "G", "R"][k]),
        ),
        Banding::FixedWidth(width) => {
            if !(width > 0.0) || !width.is_finite() {
                return Err(GeometryError::InvalidBandWidth(width));
            }
            let start = grid.start_nm();
            let span = grid.end_nm() - start;
            // number of bands; a final sample sitting exactly on the last
            // boundary joins the last band
            let bands = libm::ceil(span / width - 1e-9).max(1.0) as usize;
            push_by_key(
                &|w| (libm::floor((w - start) / width + 1e-9) as usize).min(bands - 1),
                &|k| {
                    let lo = start + k as f64 * width;
                    format!("{}-{}", lo, lo + width)
                },
            );
        }
    }
    Ok(out)
}

/// Light-vector direction per spectral band.
pub fn spectral_vector_directions(
    c: &LightFieldComponents,
    colorimeter: &Colorimeter,
    banding: Banding,
    convention: AzimuthConvention,
) -> Result<SpectralVectorSet, GeometryError> {
    let grid = *c.grid();
    let mut entries = Vec::new();
    if banding == Banding::Luminance {
        let vector = Vec3::new(
            colorimeter.illuminance(&c.vector[0]),
            colorimeter.illuminance(&c.vector[1]),
            colorimeter.illuminance(&c.vector[2]),
        );
        entries.push(BandVector {
            label: String::from("luminance"),
            lower_nm: grid.start_nm(),
            upper_nm: grid.end_nm(),
            samples: 0..grid.count(),
            vector,
            direction: vector_direction(vector, convention),
            band_power: colorimeter.illuminance(&c.scalar),
        });
        return Ok(SpectralVectorSet { banding, entries });
    }

    let weights = grid.trapezoid_weights();
    for (label, range) in band_ranges(&grid, banding)? {
        let mut vector = Vec3::ZERO;
        let mut power = 0.0;
        for i in range.clone() {
            vector = vector + c.vector_at(i) * weights[i];
            power += c.scalar.values()[i] * weights[i];
        }
        let half = 0.5 * grid.step_nm();
        entries.push(BandVector {
            label,
            lower_nm: (grid.wavelength(range.start) - half).max(grid.start_nm()),
            upper_nm: (grid.wavelength(range.end - 1) + half).min(grid.end_nm()),
            samples: range,
            vector,
            direction: vector_direction(vector, convention),
            band_power: power,
        });
    }
    Ok(SpectralVectorSet { banding, entries })
}
