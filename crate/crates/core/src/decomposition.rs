//! First-order light-field decomposition of cubic spectral irradiance.
//!
//! Per wavelength λ and axis a ∈ {x, y, z}:
//!
//! ```text
//! E(λ,a)          = E(λ,a+) − E(λ,a−)                       light-vector component
//! |E(λ,vector)|   = √(E(λ,x)² + E(λ,y)² + E(λ,z)²)
//! ∼E(λ,a)         = (E(λ,a+) + E(λ,a−) − |E(λ,a)|) / 2      = min(E(λ,a+), E(λ,a−))
//! E(λ,symmetric)  = (∼E(λ,x) + ∼E(λ,y) + ∼E(λ,z)) / 3
//! E(λ,scalar)     = E(λ,symmetric) + |E(λ,vector)| / 4
//! ```
//!
//! The cube is oriented geographically: x+ East, y+ North, z+ up.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::math::{fibonacci_sphere, Vec3};
use crate::session::GeoLocation;
use crate::spectral::{SpectralDistribution, SpectralError, WavelengthGrid};
use crate::time::Timestamp;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DecompositionError {
    #[error("face spectra do not share one wavelength grid")]
    GridMismatch,
    #[error("face {face}: sample {index} is negative or not finite ({value})")]
    InvalidMeasurement { face: Face, index: usize, value: f64 },
    #[error("illumination map needs at least 6 directions, got {0}")]
    TooFewDirections(usize),
}

/// Cube face label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Face {
    XPos,
    XNeg,
    YPos,
    YNeg,
    ZPos,
    ZNeg,
}

impl Face {
    /// Canonical order used for storage and files.
    pub const ALL: [Face; 6] = [Face::XPos, Face::XNeg, Face::YPos, Face::YNeg, Face::ZPos, Face::ZNeg];

    pub fn label(self) -> &'static str {
        match self {
            Face::XPos => "x+",
            Face::XNeg => "x-",
            Face::YPos => "y+",
            Face::YNeg => "y-",
            Face::ZPos => "z+",
            Face::ZNeg => "z-",
        }
    }

    /// Accepts `x+`/`x-` style labels; the minus may also be `−` (U+2212).
    pub fn from_label(s: &str) -> Option<Face> {
        let s = s.trim();
        let mut chars = s.chars();
        let axis = chars.next()?.to_ascii_lowercase();
        let sign = chars.next()?;
        if chars.next().is_some() {
            return None;
        }
        let positive = match sign {
            '+' => true,
            '-' | '−' => false,
            _ => return None,
        };
        Some(match (axis, positive) {
            ('x', true) => Face::XPos,
            ('x', false) => Face::XNeg,
            ('y', true) => Face::YPos,
            ('y', false) => Face::YNeg,
            ('z', true) => Face::ZPos,
            ('z', false) => Face::ZNeg,
            _ => return None,
        })
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// Outward normal of the face in the East/North/up frame.
    pub fn normal(self) -> Vec3 {
        match self {
            Face::XPos => Vec3::X,
            Face::XNeg => -Vec3::X,
            Face::YPos => Vec3::Y,
            Face::YNeg => -Vec3::Y,
            Face::ZPos => Vec3::Z,
            Face::ZNeg => -Vec3::Z,
        }
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Six face spectra sharing one grid, with acquisition metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicMeasurement {
    faces: [SpectralDistribution; 6],
    pub timestamp: Timestamp,
    pub location: Option<GeoLocation>,
    pub device: String,
}

impl CubicMeasurement {
    /// Validates that all faces share one grid and are finite and ≥ 0.
    ///
    /// `faces` is indexed by [`Face::index`].
    pub fn new(
        faces: [SpectralDistribution; 6],
        timestamp: Timestamp,
        location: Option<GeoLocation>,
        device: impl Into<String>,
    ) -> Result<Self, DecompositionError> {
        let grid = *faces[0].grid();
        if faces.iter().any(|f| !f.grid().matches(&grid)) {
            return Err(DecompositionError::GridMismatch);
        }
        for face in Face::ALL {
            let values = faces[face.index()].values();
            if let Some(index) = values.iter().position(|v| !(*v >= 0.0) || !v.is_finite()) {
                return Err(DecompositionError::InvalidMeasurement {
                    face,
                    index,
                    value: values[index],
                });
            }
        }
        Ok(Self {
            faces,
            timestamp,
            location,
            device: device.into(),
        })
    }

    /// Same spectrum on all six faces.
    pub fn isotropic(spd: SpectralDistribution, timestamp: Timestamp) -> Result<Self, DecompositionError> {
        let faces = core::array::from_fn(|_| spd.clone());
        Self::new(faces, timestamp, None, "")
    }

    pub fn face(&self, face: Face) -> &SpectralDistribution {
        &self.faces[face.index()]
    }

    pub fn faces(&self) -> &[SpectralDistribution; 6] {
        &self.faces
    }

    pub fn grid(&self) -> &WavelengthGrid {
        self.faces[0].grid()
    }

    /// All faces multiplied by `factor` (≥ 0).
    pub fn scaled(&self, factor: f64) -> Result<Self, DecompositionError> {
        let faces = core::array::from_fn(|i| self.faces[i].scale(factor));
        Self::new(faces, self.timestamp, self.location, self.device.clone())
    }

    /// All faces resampled onto `grid`.
    pub fn resample(&self, grid: &WavelengthGrid) -> Result<Self, SpectralError> {
        let mut faces = Vec::with_capacity(6);
        for f in &self.faces {
            faces.push(f.resample(grid)?);
        }
        let faces: [SpectralDistribution; 6] = faces.try_into().expect("six faces");
        Ok(Self {
            faces,
            timestamp: self.timestamp,
            location: self.location,
            device: self.device.clone(),
        })
    }
}

/// Spectral light vector, symmetric component and light scalar.
#[derive(Debug, Clone, PartialEq)]
pub struct LightFieldComponents {
    /// Signed component spectra E(λ,x), E(λ,y), E(λ,z).
    pub vector: [SpectralDistribution; 3],
    pub vector_magnitude: SpectralDistribution,
    /// Per-axis symmetric sub-components ∼E(λ,x), ∼E(λ,y), ∼E(λ,z).
    pub sub_components: [SpectralDistribution; 3],
    pub symmetric: SpectralDistribution,
    /// Light density (Cuttle's light scalar).
    pub scalar: SpectralDistribution,
}

impl LightFieldComponents {
    pub fn grid(&self) -> &WavelengthGrid {
        self.symmetric.grid()
    }

    /// Light vector at sample `i`.
    pub fn vector_at(&self, i: usize) -> Vec3 {
        Vec3::new(
            self.vector[0].values()[i],
            self.vector[1].values()[i],
            self.vector[2].values()[i],
        )
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            vector: core::array::from_fn(|a| self.vector[a].scale(factor)),
            vector_magnitude: self.vector_magnitude.scale(factor),
            sub_components: core::array::from_fn(|a| self.sub_components[a].scale(factor)),
            symmetric: self.symmetric.scale(factor),
            scalar: self.scalar.scale(factor),
        }
    }
}

/// Decomposes a cubic measurement wavelength by wavelength.
pub fn decompose(m: &CubicMeasurement) -> LightFieldComponents {
    let grid = *m.grid();
    let n = grid.count();
    let mut vector: [Vec<f64>; 3] = core::array::from_fn(|_| Vec::with_capacity(n));
    let mut subs: [Vec<f64>; 3] = core::array::from_fn(|_| Vec::with_capacity(n));
    let mut magnitude = Vec::with_capacity(n);
    let mut symmetric = Vec::with_capacity(n);
    let mut scalar = Vec::with_capacity(n);

    let pairs = [
        (Face::XPos, Face::XNeg),
        (Face::YPos, Face::YNeg),
        (Face::ZPos, Face::ZNeg),
    ];
    for i in 0..n {
        let mut sq = 0.0;
        let mut sub_sum = 0.0;
        for (axis, (pos, neg)) in pairs.iter().enumerate() {
            let p = m.face(*pos).values()[i];
            let q = m.face(*neg).values()[i];
            let e = p - q;
            // (p + q − |p − q|) / 2 is the lesser of the two; `min` keeps it
            // exact and nonnegative.
            let sub = p.min(q);
            vector[axis].push(e);
            subs[axis].push(sub);
            sq += e * e;
            sub_sum += sub;
        }
        let mag = libm::sqrt(sq);
        let sym = sub_sum / 3.0;
        magnitude.push(mag);
        symmetric.push(sym);
        scalar.push(sym + mag / 4.0);
    }

    let wrap = |v: Vec<f64>| SpectralDistribution::from_parts_unchecked(grid, v);
    let [vx, vy, vz] = vector;
    let [sx, sy, sz] = subs;
    LightFieldComponents {
        vector: [wrap(vx), wrap(vy), wrap(vz)],
        vector_magnitude: wrap(magnitude),
        sub_components: [wrap(sx), wrap(sy), wrap(sz)],
        symmetric: wrap(symmetric),
        scalar: wrap(scalar),
    }
}

/// First-order value of the illumination map for direction `dir` at every
/// wavelength: symmetric component plus the clamped cosine lobe of the light
/// vector, `E(λ,sym) + max(0, ω·E(λ,vector))`.
///
/// Averaged over the sphere this recovers the light scalar exactly, since
/// the clamped lobe averages to |E(λ,vector)|/4.
pub fn first_order_value(c: &LightFieldComponents, dir: Vec3) -> Vec<f64> {
    let sym = c.symmetric.values();
    (0..sym.len())
        .map(|i| sym[i] + c.vector_at(i).dot(dir).max(0.0))
        .collect()
}

/// Sphere-sampled first-order reconstruction.
#[derive(Debug, Clone, PartialEq)]
pub struct IlluminationMap {
    grid: WavelengthGrid,
    directions: Vec<Vec3>,
    values: Vec<f64>,
    unclamped: Vec<f64>,
}

impl IlluminationMap {
    pub fn grid(&self) -> &WavelengthGrid {
        &self.grid
    }

    pub fn directions(&self) -> &[Vec3] {
        &self.directions
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    /// Clamped spectrum for direction `k`.
    pub fn spectrum(&self, k: usize) -> &[f64] {
        let n = self.grid.count();
        &self.values[k * n..(k + 1) * n]
    }

    /// Unclamped linear expansion `E(λ,sym) + ω·E(λ,vector)` for direction
    /// `k`; it may be negative opposite the vector.
    pub fn unclamped_spectrum(&self, k: usize) -> &[f64] {
        let n = self.grid.count();
        &self.unclamped[k * n..(k + 1) * n]
    }

    /// Equal-weight mean spectrum over all directions.
    pub fn mean_spectrum(&self) -> Vec<f64> {
        let n = self.grid.count();
        let mut acc = alloc::vec![0.0; n];
        for k in 0..self.len() {
            for (a, v) in acc.iter_mut().zip(self.spectrum(k)) {
                *a += v;
            }
        }
        let inv = 1.0 / self.len() as f64;
        acc.iter_mut().for_each(|a| *a *= inv);
        acc
    }
}

/// Evaluates the first-order map on `n_dirs` Fibonacci-lattice directions.
pub fn reconstruct_first_order(
    c: &LightFieldComponents,
    n_dirs: usize,
) -> Result<IlluminationMap, DecompositionError> {
    if n_dirs < 6 {
        return Err(DecompositionError::TooFewDirections(n_dirs));
    }
    let grid = *c.grid();
    let n = grid.count();
    let directions: Vec<Vec3> = fibonacci_sphere(n_dirs).collect();
    let mut values = Vec::with_capacity(n_dirs * n);
    let mut unclamped = Vec::with_capacity(n_dirs * n);
    let sym = c.symmetric.values();
    for d in &directions {
        for (i, &s) in sym.iter().enumerate() {
            let lobe = c.vector_at(i).dot(*d);
            values.push(s + lobe.max(0.0));
            unclamped.push(s + lobe);
        }
    }
    Ok(IlluminationMap {
        grid,
        directions,
        values,
        unclamped,
    })
}
