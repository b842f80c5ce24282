//! Per-measurement photometric summaries, lit/shade comparisons, normalized
//! mean spectra and temporal rates.
//!
//! Undefined quantities (a dim twilight sample with no CCT, a vertical
//! vector with no azimuth) are carried as `Err`/`None` fields rather than
//! failing the whole summary.

use alloc::vec::Vec;

use crate::decomposition::{decompose, LightFieldComponents};
use crate::geometry::{self, AzimuthConvention, GeometryError, VectorDirection};
use crate::math::Vec3;
use crate::photometry::{self, ColorDifferenceMetric, ColorSummary, Colorimeter, PhotometryError};
use crate::session::{MeasurementPair, TimeWindow};
use crate::spectral::{SpectralDistribution, SpectralError};
use crate::stats::StatsError;
use crate::time::Timestamp;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error("no spectrum with positive illuminance")]
    NoUsableSpectra,
    #[error("timestamps must be strictly increasing")]
    NonMonotonicTimestamps,
}

/// Photometric and colorimetric description of one component spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComponentSummary {
    /// Illuminance in lux of the component spectrum.
    pub illuminance: f64,
    pub color: Result<ColorSummary, PhotometryError>,
}

impl ComponentSummary {
    pub fn of(colorimeter: &Colorimeter, spd: &SpectralDistribution) -> Self {
        Self {
            illuminance: colorimeter.illuminance(spd),
            color: colorimeter.color_summary(spd),
        }
    }

    pub fn cct_kelvin(&self) -> Option<f64> {
        self.color.ok().and_then(|c| c.cct.ok()).map(|c| c.kelvin)
    }

    pub fn chromaticity(&self) -> Option<photometry::Chromaticity> {
        self.color.ok().map(|c| c.chromaticity)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotometricSummary {
    pub timestamp: Timestamp,
    pub symmetric: ComponentSummary,
    pub scalar: ComponentSummary,
    /// Summary of the per-wavelength vector magnitude spectrum; its
    /// illuminance is the integrated spectral magnitude.
    pub vector: ComponentSummary,
    /// Photometric vector (E(x), E(y), E(z)) in lux.
    pub vector_photometric: Vec3,
    /// Diffuseness from the norm of the photometric vector.
    pub diffuseness: Result<f64, GeometryError>,
    /// Diffuseness from the integrated spectral vector magnitude.
    pub diffuseness_spectral: Result<f64, GeometryError>,
    pub direction: Result<VectorDirection, GeometryError>,
}

impl PhotometricSummary {
    /// Norm of the photometric vector triple, lux.
    pub fn vector_illuminance_norm(&self) -> f64 {
        self.vector_photometric.norm()
    }
}

/// Photometry and geometry of each decomposition component.
pub fn summarize(
    c: &LightFieldComponents,
    t: Timestamp,
    colorimeter: &Colorimeter,
    convention: AzimuthConvention,
) -> PhotometricSummary {
    let symmetric = ComponentSummary::of(colorimeter, &c.symmetric);
    let scalar = ComponentSummary::of(colorimeter, &c.scalar);
    let vector = ComponentSummary::of(colorimeter, &c.vector_magnitude);
    let vector_photometric = Vec3::new(
        colorimeter.illuminance(&c.vector[0]),
        colorimeter.illuminance(&c.vector[1]),
        colorimeter.illuminance(&c.vector[2]),
    );
    let spectral_vec = Vec3::new(0.0, 0.0, vector.illuminance);
    PhotometricSummary {
        timestamp: t,
        symmetric,
        scalar,
        vector,
        vector_photometric,
        diffuseness: geometry::diffuseness(vector_photometric, scalar.illuminance),
        diffuseness_spectral: geometry::diffuseness(spectral_vec, scalar.illuminance),
        direction: geometry::vector_direction(vector_photometric, convention),
    }
}

/// Shade-versus-light differences for one component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComponentDelta {
    /// CCT(shade) − CCT(light), K.
    pub delta_cct_k: Option<f64>,
    /// Illuminance(light) / illuminance(shade).
    pub illuminance_ratio: Option<f64>,
    pub color_difference: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonRecord {
    pub scene_id: u32,
    pub symmetric: ComponentDelta,
    pub scalar: ComponentDelta,
    pub vector: ComponentDelta,
    /// Diffuseness(shade) − diffuseness(light).
    pub delta_diffuseness: Option<f64>,
    /// Altitude(shade) − altitude(light), degrees.
    pub delta_altitude_deg: Option<f64>,
}

fn component_delta(light: &ComponentSummary, shade: &ComponentSummary, metric: ColorDifferenceMetric) -> ComponentDelta {
    let delta_cct_k = match (shade.cct_kelvin(), light.cct_kelvin()) {
        (Some(s), Some(l)) => Some(s - l),
        _ => None,
    };
    let illuminance_ratio = if shade.illuminance > 0.0 && light.illuminance >= 0.0 {
        Some(light.illuminance / shade.illuminance)
    } else {
        None
    };
    let color_difference = match (light.chromaticity(), shade.chromaticity()) {
        (Some(a), Some(b)) => Some(photometry::color_difference(&a, &b, metric)),
        _ => None,
    };
    ComponentDelta {
        delta_cct_k,
        illuminance_ratio,
        color_difference,
    }
}

/// Compares summaries of the lit and shaded members of a scene.
pub fn compare_summaries(
    scene_id: u32,
    light: &PhotometricSummary,
    shade: &PhotometricSummary,
    metric: ColorDifferenceMetric,
) -> ComparisonRecord {
    ComparisonRecord {
        scene_id,
        symmetric: component_delta(&light.symmetric, &shade.symmetric, metric),
        scalar: component_delta(&light.scalar, &shade.scalar, metric),
        vector: component_delta(&light.vector, &shade.vector, metric),
        delta_diffuseness: match (shade.diffuseness, light.diffuseness) {
            (Ok(s), Ok(l)) => Some(s - l),
            _ => None,
        },
        delta_altitude_deg: match (shade.direction, light.direction) {
            (Ok(s), Ok(l)) => Some(s.altitude_deg - l.altitude_deg),
            _ => None,
        },
    }
}

/// Decomposes and compares both members of a pair.
pub fn compare_pair(
    p: &MeasurementPair,
    colorimeter: &Colorimeter,
    metric: ColorDifferenceMetric,
    convention: AzimuthConvention,
) -> ComparisonRecord {
    let light = summarize(&decompose(&p.lit), p.lit.timestamp, colorimeter, convention);
    let shade = summarize(&decompose(&p.shaded), p.shaded.timestamp, colorimeter, convention);
    compare_summaries(p.scene_id, &light, &shade, metric)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeanSpectrum {
    pub mean: SpectralDistribution,
    /// Sample (n − 1) standard deviation; zero for a single member.
    pub sd: SpectralDistribution,
    pub used: usize,
    /// Members skipped for zero illuminance.
    pub skipped: usize,
}

/// Normalizes each spectrum to Y = 100, then takes the pointwise mean and
/// sample standard deviation.
pub fn mean_normalized_spectrum(
    spds: &[SpectralDistribution],
    colorimeter: &Colorimeter,
) -> Result<MeanSpectrum, AnalysisError> {
    let mut normalized = Vec::with_capacity(spds.len());
    let mut skipped = 0;
    for s in spds {
        if let Some(first) = normalized.first() {
            let first: &SpectralDistribution = first;
            if !first.grid().matches(s.grid()) {
                return Err(SpectralError::GridMismatch.into());
            }
        }
        match colorimeter.normalize_to_y100(s) {
            Ok(n) => normalized.push(n),
            Err(_) => skipped += 1,
        }
    }
    let Some(first) = normalized.first() else {
        return Err(AnalysisError::NoUsableSpectra);
    };
    let grid = *first.grid();
    let n = normalized.len();
    let mut column = Vec::with_capacity(n);
    let mut mean = Vec::with_capacity(grid.count());
    let mut sd = Vec::with_capacity(grid.count());
    for i in 0..grid.count() {
        column.clear();
        column.extend(normalized.iter().map(|s| s.values()[i]));
        mean.push(crate::stats::mean(&column).unwrap_or(0.0));
        sd.push(crate::stats::sample_sd(&column).unwrap_or(0.0));
    }
    Ok(MeanSpectrum {
        mean: SpectralDistribution::new(grid, mean)?,
        sd: SpectralDistribution::new(grid, sd)?,
        used: n,
        skipped,
    })
}

/// How [`average_speed`] turns a series into one rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SpeedMethod {
    /// Mean of |Δvalue| / Δt over consecutive in-window pairs.
    #[default]
    Local,
    /// (max − min) / (t_last − t_first) over in-window samples.
    Range,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateQuantity {
    Cct,
    Illuminance,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateSummary {
    pub quantity: RateQuantity,
    pub window: TimeWindow,
    /// Units of the series per second (K/s, lux/s).
    pub average_speed: f64,
    /// In-window samples used.
    pub samples: usize,
}

/// Average speed of change of a time series inside `window`.
///
/// Samples with a non-finite value are dropped before the rate is formed.
pub fn average_speed(
    series: &[(Timestamp, f64)],
    window: &TimeWindow,
    quantity: RateQuantity,
    method: SpeedMethod,
) -> Result<RateSummary, AnalysisError> {
    if series.windows(2).any(|w| w[1].0 <= w[0].0) {
        return Err(AnalysisError::NonMonotonicTimestamps);
    }
    let inside: Vec<(Timestamp, f64)> = series
        .iter()
        .copied()
        .filter(|(t, v)| window.contains(*t) && v.is_finite())
        .collect();
    if inside.len() < 2 {
        return Err(StatsError::InsufficientData {
            needed: 2,
            got: inside.len(),
        }
        .into());
    }
    let average_speed = match method {
        SpeedMethod::Local => {
            let rates: Vec<f64> = inside
                .windows(2)
                .map(|w| (w[1].1 - w[0].1).abs() / w[1].0.seconds_since(w[0].0))
                .collect();
            rates.iter().sum::<f64>() / rates.len() as f64
        }
        SpeedMethod::Range => {
            let (lo, hi) = inside
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (_, v)| (lo.min(*v), hi.max(*v)));
            (hi - lo) / inside[inside.len() - 1].0.seconds_since(inside[0].0)
        }
    };
    Ok(RateSummary {
        quantity,
        window: window.clone(),
        average_speed,
        samples: inside.len(),
    })
}
