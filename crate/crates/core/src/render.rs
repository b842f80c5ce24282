//! First-order shading of Lambertian probes and equal-area square maps.
//!
//! A surface with unit normal n receives, per wavelength,
//! `E(λ,sym) + max(0, n·E(λ,vector))`. Shading produces linear XYZ images;
//! [`encode`] turns them into 8-bit sRGB.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::decomposition::LightFieldComponents;
use crate::geometry::{band_ranges, Banding, GeometryError};
use crate::math::{Rotation, Vec3};
use crate::photometry::{encode_linear, xyz_to_linear_srgb, Colorimeter, Tristimulus};

/// Smallest accepted probe or map dimension.
pub const MIN_SIZE: usize = 16;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RenderError {
    #[error("image dimensions must be at least {MIN_SIZE} px")]
    InvalidSize,
    #[error("gamma must be positive and finite, got {0}")]
    InvalidGamma(f64),
    #[error("banding yields {0} band(s), need at least 2")]
    TooFewBands(usize),
    #[error("pixel buffer has {found} bytes, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("exposure must be positive and finite, got {0}")]
    InvalidExposure(f64),
    #[error("camera view and up directions must be non-zero and not parallel")]
    InvalidCamera,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Exposure applied before clipping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exposure {
    /// Multiplier on linear sRGB.
    Fixed(f64),
    /// Maps the 99th percentile of the per-pixel maximum channel to 1.
    Percentile99,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeRenderConfig {
    /// Width and height in pixels.
    pub size: usize,
    /// Direction the orthographic camera looks along.
    pub view: Vec3,
    /// Approximate image-up direction.
    pub up: Vec3,
    /// Rotate the light field so the photometric vector points at +z.
    pub normalize_vector_up: bool,
    pub exposure: Exposure,
    pub gamma: f64,
}

impl Default for ProbeRenderConfig {
    /// Looking North with up at the zenith, so East is to the right.
    fn default() -> Self {
        Self {
            size: 256,
            view: Vec3::Y,
            up: Vec3::Z,
            normalize_vector_up: false,
            exposure: Exposure::Percentile99,
            gamma: 2.2,
        }
    }
}

/// Linear XYZ image. Pixels outside the mask are background.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearImage {
    pub width: usize,
    pub height: usize,
    pub xyz: Vec<Tristimulus>,
    pub mask: Vec<bool>,
}

impl LinearImage {
    fn blank(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            xyz: vec![Tristimulus::default(); width * height],
            mask: vec![false; width * height],
        }
    }

    pub fn pixel(&self, col: usize, row: usize) -> Tristimulus {
        self.xyz[row * self.width + col]
    }

    /// Pixelwise sum; masks are combined with OR.
    pub fn add(&self, other: &LinearImage) -> Option<LinearImage> {
        if (self.width, self.height) != (other.width, other.height) {
            return None;
        }
        Some(LinearImage {
            width: self.width,
            height: self.height,
            xyz: self.xyz.iter().zip(&other.xyz).map(|(a, b)| *a + *b).collect(),
            mask: self.mask.iter().zip(&other.mask).map(|(a, b)| *a || *b).collect(),
        })
    }

    /// Mean Y over masked pixels.
    pub fn mean_y(&self) -> f64 {
        let (sum, n) = self
            .xyz
            .iter()
            .zip(&self.mask)
            .filter(|(_, m)| **m)
            .fold((0.0, 0usize), |(s, n), (t, _)| (s + t.y, n + 1));
        if n == 0 {
            0.0
        } else {
            sum / n as f64
        }
    }

    /// Exposure that maps the 99th percentile of the per-pixel maximum
    /// linear sRGB channel to 1. Falls back to 1 for dark images.
    pub fn percentile_exposure(&self) -> f64 {
        let mut peaks: Vec<f64> = self
            .xyz
            .iter()
            .zip(&self.mask)
            .filter(|(_, m)| **m)
            .map(|(t, _)| xyz_to_linear_srgb(*t).into_iter().fold(0.0, f64::max))
            .collect();
        if peaks.is_empty() {
            return 1.0;
        }
        peaks.sort_unstable_by(f64::total_cmp);
        let idx = libm::ceil(0.99 * peaks.len() as f64) as usize;
        let p = peaks[idx.saturating_sub(1)];
        if p > 0.0 && p.is_finite() {
            1.0 / p
        } else {
            1.0
        }
    }
}

/// 8-bit sRGB image, row-major RGB triples.
#[derive(Debug, Clone, PartialEq)]
pub struct RenderedImage {
    pub width: usize,
    pub height: usize,
    pub rgb8: Vec<u8>,
    /// Channels clipped at 0 or 1 after exposure.
    pub clipped_channels: u64,
    pub exposure: f64,
}

impl RenderedImage {
    pub fn new(width: usize, height: usize, rgb8: Vec<u8>) -> Result<Self, RenderError> {
        if width == 0 || height == 0 {
            return Err(RenderError::InvalidSize);
        }
        let expected = width * height * 3;
        if rgb8.len() != expected {
            return Err(RenderError::LengthMismatch {
                expected,
                found: rgb8.len(),
            });
        }
        Ok(Self {
            width,
            height,
            rgb8,
            clipped_channels: 0,
            exposure: 1.0,
        })
    }
}

/// Gamma-encodes a linear image. Background pixels are black and do not
/// count towards clipping.
pub fn encode(img: &LinearImage, exposure: Exposure, gamma: f64) -> Result<RenderedImage, RenderError> {
    let k = match exposure {
        Exposure::Fixed(k) => k,
        Exposure::Percentile99 => img.percentile_exposure(),
    };
    if !(k > 0.0) || !k.is_finite() {
        return Err(RenderError::InvalidExposure(k));
    }
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(RenderError::InvalidGamma(gamma));
    }
    let mut rgb8 = Vec::with_capacity(img.xyz.len() * 3);
    let mut clipped = 0u64;
    for (t, m) in img.xyz.iter().zip(&img.mask) {
        if !*m {
            rgb8.extend_from_slice(&[0, 0, 0]);
            continue;
        }
        let (enc, c) = encode_linear(xyz_to_linear_srgb(*t), k, gamma);
        clipped += u64::from(c);
        rgb8.extend(enc.map(|v| libm::round(v * 255.0) as u8));
    }
    let mut out = RenderedImage::new(img.width, img.height, rgb8)?;
    out.clipped_channels = clipped;
    out.exposure = k;
    Ok(out)
}

/// Per-sample colour kernels and vectors on the colorimeter's grid.
struct Shader {
    /// XYZ of the symmetric part restricted to the active samples.
    base: Tristimulus,
    /// (kernel triple, light vector) per active sample.
    lobes: Vec<([f64; 3], Vec3)>,
}

impl Shader {
    fn new(
        c: &LightFieldComponents,
        colorimeter: &Colorimeter,
        rotation: &Rotation,
        active: core::ops::Range<usize>,
        vector_override: Option<&dyn Fn(usize) -> Vec3>,
    ) -> Self {
        let grid = *colorimeter.grid();
        let resampled;
        let c = if c.grid().matches(&grid) {
            c
        } else {
            resampled = LightFieldComponents {
                vector: core::array::from_fn(|a| c.vector[a].resample_extrapolating(&grid)),
                vector_magnitude: c.vector_magnitude.resample_extrapolating(&grid),
                sub_components: core::array::from_fn(|a| c.sub_components[a].resample_extrapolating(&grid)),
                symmetric: c.symmetric.resample_extrapolating(&grid),
                scalar: c.scalar.resample_extrapolating(&grid),
            };
            &resampled
        };
        let k = colorimeter.kernels();
        let sym = c.symmetric.values();
        let mut base = Tristimulus::default();
        let mut lobes = Vec::with_capacity(active.len());
        for i in active {
            let kk = [k[0][i], k[1][i], k[2][i]];
            base = base + Tristimulus::new(kk[0] * sym[i], kk[1] * sym[i], kk[2] * sym[i]);
            let v = match vector_override {
                Some(f) => f(i),
                None => c.vector_at(i),
            };
            lobes.push((kk, rotation.apply(v)));
        }
        Self { base, lobes }
    }

    fn shade(&self, n: Vec3) -> Tristimulus {
        let mut t = [self.base.x, self.base.y, self.base.z];
        for (k, v) in &self.lobes {
            let lobe = n.dot(*v);
            if lobe > 0.0 {
                t[0] += k[0] * lobe;
                t[1] += k[1] * lobe;
                t[2] += k[2] * lobe;
            }
        }
        Tristimulus::new(t[0], t[1], t[2])
    }
}

fn photometric_vector(c: &LightFieldComponents, colorimeter: &Colorimeter) -> Vec3 {
    Vec3::new(
        colorimeter.illuminance(&c.vector[0]),
        colorimeter.illuminance(&c.vector[1]),
        colorimeter.illuminance(&c.vector[2]),
    )
}

fn rotation_for(c: &LightFieldComponents, colorimeter: &Colorimeter, cfg: &ProbeRenderConfig) -> Rotation {
    if !cfg.normalize_vector_up {
        return Rotation::IDENTITY;
    }
    match photometric_vector(c, colorimeter).normalized() {
        Some(d) => Rotation::between(d, Vec3::Z),
        None => Rotation::IDENTITY,
    }
}

/// Camera basis (right, up, view).
fn camera(cfg: &ProbeRenderConfig) -> Result<(Vec3, Vec3, Vec3), RenderError> {
    let view = cfg.view.normalized().ok_or(RenderError::InvalidCamera)?;
    let right = view.cross(cfg.up).normalized().ok_or(RenderError::InvalidCamera)?;
    let up = right.cross(view);
    Ok((right, up, view))
}

/// Surface normal seen at pixel (`col`, `row`) of an orthographic probe
/// image, or `None` off the disc.
pub fn probe_normal(cfg: &ProbeRenderConfig, col: usize, row: usize) -> Option<Vec3> {
    let (right, up, view) = camera(cfg).ok()?;
    let s = cfg.size as f64;
    let u = 2.0 * (col as f64 + 0.5) / s - 1.0;
    let v = 1.0 - 2.0 * (row as f64 + 0.5) / s;
    let r2 = u * u + v * v;
    if r2 > 1.0 {
        return None;
    }
    let w = libm::sqrt(1.0 - r2);
    Some(right * u + up * v - view * w)
}

fn validate(cfg: &ProbeRenderConfig) -> Result<(), RenderError> {
    if cfg.size < MIN_SIZE {
        return Err(RenderError::InvalidSize);
    }
    if !(cfg.gamma > 0.0) || !cfg.gamma.is_finite() {
        return Err(RenderError::InvalidGamma(cfg.gamma));
    }
    if let Exposure::Fixed(k) = cfg.exposure {
        if !(k > 0.0) || !k.is_finite() {
            return Err(RenderError::InvalidExposure(k));
        }
    }
    camera(cfg).map(|_| ())
}

fn shade_probe_with(shader: &Shader, cfg: &ProbeRenderConfig) -> Result<LinearImage, RenderError> {
    validate(cfg)?;
    let mut img = LinearImage::blank(cfg.size, cfg.size);
    for row in 0..cfg.size {
        for col in 0..cfg.size {
            if let Some(n) = probe_normal(cfg, col, row) {
                let i = row * cfg.size + col;
                img.xyz[i] = shader.shade(n);
                img.mask[i] = true;
            }
        }
    }
    Ok(img)
}

/// Linear XYZ image of a Lambertian sphere lit by the first-order field.
pub fn shade_probe(
    c: &LightFieldComponents,
    colorimeter: &Colorimeter,
    cfg: &ProbeRenderConfig,
) -> Result<LinearImage, RenderError> {
    let rot = rotation_for(c, colorimeter, cfg);
    let shader = Shader::new(c, colorimeter, &rot, 0..colorimeter.grid().count(), None);
    shade_probe_with(&shader, cfg)
}

pub fn render_probe(
    c: &LightFieldComponents,
    colorimeter: &Colorimeter,
    cfg: &ProbeRenderConfig,
) -> Result<RenderedImage, RenderError> {
    encode(&shade_probe(c, colorimeter, cfg)?, cfg.exposure, cfg.gamma)
}

/// Direction for a square-map pixel: columns span compass azimuth 0..360°,
/// rows span sin(altitude) from +1 at the top to −1 at the bottom.
pub fn square_map_direction(width: usize, height: usize, col: usize, row: usize) -> Vec3 {
    let az = ((col as f64 + 0.5) / width as f64 * 360.0).to_radians();
    let s = 1.0 - 2.0 * (row as f64 + 0.5) / height as f64;
    let h = libm::sqrt((1.0 - s * s).max(0.0));
    Vec3::new(h * libm::sin(az), h * libm::cos(az), s)
}

/// Equal-area map of the illuminance received from every direction; each
/// pixel is the first-order value for a surface facing that direction.
pub fn shade_square_map(
    c: &LightFieldComponents,
    colorimeter: &Colorimeter,
    width: usize,
    height: usize,
) -> Result<LinearImage, RenderError> {
    if width < MIN_SIZE || height < MIN_SIZE {
        return Err(RenderError::InvalidSize);
    }
    let shader = Shader::new(c, colorimeter, &Rotation::IDENTITY, 0..colorimeter.grid().count(), None);
    let mut img = LinearImage::blank(width, height);
    for row in 0..height {
        for col in 0..width {
            let i = row * width + col;
            img.xyz[i] = shader.shade(square_map_direction(width, height, col, row));
            img.mask[i] = true;
        }
    }
    Ok(img)
}

pub fn render_square_map(
    c: &LightFieldComponents,
    colorimeter: &Colorimeter,
    width: usize,
    height: usize,
    exposure: Exposure,
    gamma: f64,
) -> Result<RenderedImage, RenderError> {
    encode(&shade_square_map(c, colorimeter, width, height)?, exposure, gamma)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BandImage {
    pub label: String,
    pub image: LinearImage,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSuperposition {
    /// One probe per band, each shaded with only its own samples.
    pub bands: Vec<BandImage>,
    /// Sum of the band images; equals the full-spectrum probe.
    pub superposed: LinearImage,
    /// Probe shaded with each sample's vector magnitude along the single
    /// photometric direction, discarding spectral direction differences.
    pub luminance_only: LinearImage,
}

/// Shades one probe per band of `banding` (on the colorimeter's grid).
pub fn render_spectral_superposition(
    c: &LightFieldComponents,
    colorimeter: &Colorimeter,
    banding: Banding,
    cfg: &ProbeRenderConfig,
) -> Result<SpectralSuperposition, RenderError> {
    let rot = rotation_for(c, colorimeter, cfg);
    let grid = *colorimeter.grid();
    let mut bands = Vec::new();
    let mut superposed: Option<LinearImage> = None;
    let ranges = band_ranges(&grid, banding)?;
    if ranges.len() < 2 {
        return Err(RenderError::TooFewBands(ranges.len()));
    }
    for (label, range) in ranges {
        let image = shade_probe_with(&Shader::new(c, colorimeter, &rot, range, None), cfg)?;
        superposed = Some(match superposed {
            None => image.clone(),
            Some(s) => s.add(&image).expect("band images share dimensions"),
        });
        bands.push(BandImage { label, image });
    }
    let superposed = superposed.expect("at least two bands");

    let dir = photometric_vector(c, colorimeter).normalized().unwrap_or(Vec3::ZERO);
    let mag = c.vector_magnitude.resample_extrapolating(&grid);
    let along = move |i: usize| dir * mag.values()[i];
    let luminance_only = shade_probe_with(&Shader::new(c, colorimeter, &rot, 0..grid.count(), Some(&along)), cfg)?;
    Ok(SpectralSuperposition {
        bands,
        superposed,
        luminance_only,
    })
}
