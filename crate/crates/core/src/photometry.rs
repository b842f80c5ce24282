//! Photometry and colorimetry of spectra.
//!
//! All spectral integrals use the trapezoidal rule on the canonical
//! 380–780 nm, 5 nm grid with the 683 lm/W luminous efficacy constant, so
//! the Y tristimulus value of an irradiance spectrum is its illuminance in
//! lux. CCT is the temperature of the nearest Planckian-locus point in CIE
//! 1960 (u, v).

use alloc::vec::Vec;

use crate::observer::{load_observer_tables, ObserverTables};
use crate::spectral::{SpectralDistribution, WavelengthGrid};

/// Maximum luminous efficacy, lm/W.
pub const LUMINOUS_EFFICACY: f64 = 683.0;
/// Second radiation constant c₂ in m·K (ITS-90 value used by the CIE).
pub const PLANCK_C2: f64 = 1.4388e-2;
/// CCT search range, kelvin.
pub const CCT_MIN_K: f64 = 1000.0;
pub const CCT_MAX_K: f64 = 30_000.0;
const LOCUS_MARGIN: f64 = 1.05;
/// Largest |Duv| for which a CCT is reported.
pub const DUV_LIMIT: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum PhotometryError {
    #[error("chromaticity undefined for X + Y + Z = 0")]
    UndefinedChromaticity,
    #[error("chromaticity is {duv:.4} Duv from the Planckian locus; CCT undefined")]
    CctUndefined { duv: f64 },
    #[error("CCT hit the search boundary at {kelvin} K")]
    CctOutOfRange { kelvin: f64 },
    #[error("cannot normalize a spectrum with zero illuminance")]
    NormalizationUndefined,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Tristimulus {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Tristimulus {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn scale(self, k: f64) -> Self {
        Self::new(self.x * k, self.y * k, self.z * k)
    }
}

impl core::ops::Add for Tristimulus {
    type Output = Tristimulus;
    fn add(self, o: Tristimulus) -> Tristimulus {
        Tristimulus::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

/// CIE 1931 (x, y) and CIE 1976 (u′, v′) coordinates of one tristimulus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Chromaticity {
    pub x: f64,
    pub y: f64,
    pub u_prime: f64,
    pub v_prime: f64,
}

impl Chromaticity {
    /// CIE 1960 (u, v), the plane used for CCT and Duv.
    pub fn uv1960(&self) -> (f64, f64) {
        (self.u_prime, self.v_prime * 2.0 / 3.0)
    }
}

/// Chromaticity coordinates of a tristimulus value.
pub fn chromaticity(t: Tristimulus) -> Result<Chromaticity, PhotometryError> {
    let sum = t.x + t.y + t.z;
    let denom = t.x + 15.0 * t.y + 3.0 * t.z;
    if !(sum.abs() > 0.0) || !(denom.abs() > 0.0) || !sum.is_finite() {
        return Err(PhotometryError::UndefinedChromaticity);
    }
    Ok(Chromaticity {
        x: t.x / sum,
        y: t.y / sum,
        u_prime: 4.0 * t.x / denom,
        v_prime: 9.0 * t.y / denom,
    })
}

/// Correlated colour temperature with its signed distance from the locus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cct {
    pub kelvin: f64,
    /// Positive above the locus (towards green), negative below.
    pub duv: f64,
}

/// Plane for [`color_difference`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ColorDifferenceMetric {
    #[default]
    XyEuclidean,
    UvEuclidean,
}

/// Euclidean distance between two chromaticities in the chosen plane
/// (`UvEuclidean` uses CIE 1976 u′v′).
pub fn color_difference(a: &Chromaticity, b: &Chromaticity, metric: ColorDifferenceMetric) -> f64 {
    let (dx, dy) = match metric {
        ColorDifferenceMetric::XyEuclidean => (a.x - b.x, a.y - b.y),
        ColorDifferenceMetric::UvEuclidean => (a.u_prime - b.u_prime, a.v_prime - b.v_prime),
    };
    libm::hypot(dx, dy)
}

/// XYZ → linear sRGB (D65), IEC 61966-2-1.
const XYZ_TO_SRGB: [[f64; 3]; 3] = [
    [3.240_454_2, -1.537_138_5, -0.498_531_4],
    [-0.969_266_0, 1.876_010_8, 0.041_556_0],
    [0.055_643_4, -0.204_025_9, 1.057_225_2],
];

/// Unclipped linear sRGB of a tristimulus value.
pub fn xyz_to_linear_srgb(t: Tristimulus) -> [f64; 3] {
    let v = [t.x, t.y, t.z];
    XYZ_TO_SRGB.map(|row| row[0] * v[0] + row[1] * v[1] + row[2] * v[2])
}

/// Applies exposure, clips to [0, 1] and gamma-encodes with a plain power
/// law. Returns the encoded triple and the number of clipped channels.
pub fn encode_linear(rgb: [f64; 3], exposure: f64, gamma: f64) -> ([f64; 3], u32) {
    let mut clipped = 0;
    let out = rgb.map(|c| {
        let v = c * exposure;
        let v = if v > 1.0 {
            clipped += 1;
            1.0
        } else if v < 0.0 || v.is_nan() {
            clipped += 1;
            0.0
        } else {
            v
        };
        libm::pow(v, 1.0 / gamma)
    });
    (out, clipped)
}

/// Tristimulus → gamma-2.2 encoded sRGB in [0, 1].
pub fn xyz_to_srgb(t: Tristimulus, exposure: f64) -> [f64; 3] {
    encode_linear(xyz_to_linear_srgb(t), exposure, 2.2).0
}

/// Relative spectral exitance of a blackbody at `kelvin` for `wavelength_nm`.
///
/// Only ratios matter for chromaticity, so c₁ is dropped.
pub fn planck(wavelength_nm: f64, kelvin: f64) -> f64 {
    let l = wavelength_nm * 1e-9;
    let x = PLANCK_C2 / (l * kelvin);
    // scale keeps values near unity across the visible
    let l_um = wavelength_nm * 1e-3;
    1.0 / (l_um * l_um * l_um * l_um * l_um * libm::expm1(x))
}

/// Colour-matching kernels on the canonical grid plus the Planckian-locus
/// table used for CCT.
#[derive(Debug, Clone)]
pub struct Colorimeter {
    grid: WavelengthGrid,
    /// 683·w·x̄, 683·w·ȳ, 683·w·z̄ (w = trapezoid weight).
    kernels: [Vec<f64>; 3],
    /// (temperature K, u, v) at 1 % mired spacing.
    locus: Vec<(f64, f64, f64)>,
}

impl Default for Colorimeter {
    fn default() -> Self {
        Self::new(&load_observer_tables())
    }
}

impl Colorimeter {
    /// Builds kernels by resampling `tables` onto the canonical grid.
    pub fn new(tables: &ObserverTables) -> Self {
        let grid = WavelengthGrid::CANONICAL;
        let w = grid.trapezoid_weights();
        let kernel = |cmf: &SpectralDistribution| -> Vec<f64> {
            let r = cmf.resample_extrapolating(&grid);
            r.values()
                .iter()
                .zip(&w)
                .map(|(c, w)| LUMINOUS_EFFICACY * c * w)
                .collect()
        };
        let mut me = Self {
            grid,
            kernels: [kernel(&tables.xbar), kernel(&tables.ybar), kernel(&tables.zbar)],
            locus: Vec::new(),
        };
        // the table reaches past the reported range so that points at its
        // ends are bracketed
        let (first, last) = (CCT_MIN_K / LOCUS_MARGIN, CCT_MAX_K * LOCUS_MARGIN);
        let mut t = first;
        loop {
            let (u, v) = me.planck_uv(t);
            me.locus.push((t, u, v));
            if t >= last {
                break;
            }
            // mired decreases by 1 % per step
            t = (t * 1.01).min(last);
        }
        me
    }

    pub fn grid(&self) -> &WavelengthGrid {
        &self.grid
    }

    /// Per-sample weights (683·w·cmf) on the canonical grid, in x̄, ȳ, z̄
    /// order. Dotting them with samples gives X, Y, Z.
    pub fn kernels(&self) -> &[Vec<f64>; 3] {
        &self.kernels
    }

    fn canonical_values<'a>(&self, spd: &'a SpectralDistribution) -> alloc::borrow::Cow<'a, [f64]> {
        if spd.grid().matches(&self.grid) {
            alloc::borrow::Cow::Borrowed(spd.values())
        } else {
            alloc::borrow::Cow::Owned(spd.resample_extrapolating(&self.grid).into_values())
        }
    }

    fn dot(kernel: &[f64], values: &[f64]) -> f64 {
        kernel.iter().zip(values).map(|(k, v)| k * v).sum()
    }

    /// Illuminance in lux (signed for signed spectra).
    ///
    /// Spectra on other grids are resampled onto the canonical grid first.
    pub fn illuminance(&self, spd: &SpectralDistribution) -> f64 {
        let v = self.canonical_values(spd);
        Self::dot(&self.kernels[1], &v)
    }

    pub fn tristimulus(&self, spd: &SpectralDistribution) -> Tristimulus {
        let v = self.canonical_values(spd);
        self.tristimulus_of_samples(&v)
    }

    /// Tristimulus of raw samples already on the canonical grid.
    pub fn tristimulus_of_samples(&self, samples: &[f64]) -> Tristimulus {
        Tristimulus::new(
            Self::dot(&self.kernels[0], samples),
            Self::dot(&self.kernels[1], samples),
            Self::dot(&self.kernels[2], samples),
        )
    }

    /// Scales `spd` so that its Y tristimulus value is 100.
    pub fn normalize_to_y100(&self, spd: &SpectralDistribution) -> Result<SpectralDistribution, PhotometryError> {
        let y = self.illuminance(spd);
        if !(y.abs() > 0.0) || !y.is_finite() {
            return Err(PhotometryError::NormalizationUndefined);
        }
        Ok(spd.scale(100.0 / y))
    }

    /// CIE 1960 (u, v) of a blackbody at `kelvin`.
    pub fn planck_uv(&self, kelvin: f64) -> (f64, f64) {
        let samples: Vec<f64> = self.grid.wavelengths().map(|w| planck(w, kelvin)).collect();
        let t = self.tristimulus_of_samples(&samples);
        let denom = t.x + 15.0 * t.y + 3.0 * t.z;
        (4.0 * t.x / denom, 6.0 * t.y / denom)
    }

    fn locus_distance_sq(&self, kelvin: f64, u: f64, v: f64) -> f64 {
        let (pu, pv) = self.planck_uv(kelvin);
        (u - pu) * (u - pu) + (v - pv) * (v - pv)
    }

    /// Correlated colour temperature of a chromaticity.
    ///
    /// Starts from the nearest locus-table node and refines by golden-section
    /// search on the bracketing interval.
    pub fn cct(&self, c: &Chromaticity) -> Result<Cct, PhotometryError> {
        let (u, v) = c.uv1960();
        if !u.is_finite() || !v.is_finite() {
            return Err(PhotometryError::UndefinedChromaticity);
        }
        let nearest = self
            .locus
            .iter()
            .enumerate()
            .map(|(i, &(_, lu, lv))| (i, (u - lu) * (u - lu) + (v - lv) * (v - lv)))
            .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best })
            .0;
        let lo = self.locus[nearest.saturating_sub(1)].0;
        let hi = self.locus[(nearest + 1).min(self.locus.len() - 1)].0;

        // Golden-section search in mired, where the locus is closer to
        // uniformly parameterized.
        const INV_PHI: f64 = 0.618_033_988_749_894_9;
        let (mut a, mut b) = (1e6 / hi, 1e6 / lo);
        let mut x1 = b - INV_PHI * (b - a);
        let mut x2 = a + INV_PHI * (b - a);
        let mut f1 = self.locus_distance_sq(1e6 / x1, u, v);
        let mut f2 = self.locus_distance_sq(1e6 / x2, u, v);
        while b - a > 1e-7 * b {
            if f1 < f2 {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - INV_PHI * (b - a);
                f1 = self.locus_distance_sq(1e6 / x1, u, v);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + INV_PHI * (b - a);
                f2 = self.locus_distance_sq(1e6 / x2, u, v);
            }
        }
        let kelvin = 1e6 / (0.5 * (a + b));
        let (pu, pv) = self.planck_uv(kelvin);
        let dist = libm::hypot(u - pu, v - pv);
        let duv = if v >= pv { dist } else { -dist };
        if duv.abs() > DUV_LIMIT {
            return Err(PhotometryError::CctUndefined { duv });
        }
        if !(CCT_MIN_K * (1.0 - 1e-6)..=CCT_MAX_K * (1.0 + 1e-6)).contains(&kelvin) {
            return Err(PhotometryError::CctOutOfRange { kelvin });
        }
        Ok(Cct { kelvin, duv })
    }

    /// Tristimulus, chromaticity and CCT of one spectrum.
    pub fn color_summary(&self, spd: &SpectralDistribution) -> Result<ColorSummary, PhotometryError> {
        let tristimulus = self.tristimulus(spd);
        let chromaticity = chromaticity(tristimulus)?;
        Ok(ColorSummary {
            tristimulus,
            chromaticity,
            cct: self.cct(&chromaticity),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ColorSummary {
    pub tristimulus: Tristimulus,
    pub chromaticity: Chromaticity,
    pub cct: Result<Cct, PhotometryError>,
}
