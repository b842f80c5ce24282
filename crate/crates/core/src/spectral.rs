//! Wavelength grids and sampled spectral distributions.
//!
//! All spectra in the crate live on uniform wavelength grids. Resampling is
//! piecewise linear with flat (nearest-endpoint) extrapolation, so it is
//! exact for affine functions of wavelength and reproducible bit-for-bit.

use alloc::vec::Vec;

/// Shortest wavelength a grid may start at, in nm.
pub const MIN_WAVELENGTH_NM: f64 = 300.0;
/// Longest wavelength a grid may reach, in nm.
pub const MAX_WAVELENGTH_NM: f64 = 830.0;

/// Relative tolerance used when comparing grid parameters.
const GRID_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpectralError {
    #[error("invalid wavelength grid: {0}")]
    InvalidGrid(&'static str),
    #[error("expected {expected} samples for the grid, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("sample {index} is not finite")]
    NonFinite { index: usize },
    #[error("sample {index} is negative ({value})")]
    Negative { index: usize, value: f64 },
    #[error("wavelength grids do not match")]
    GridMismatch,
}

/// A uniform wavelength sampling `start_nm + i·step_nm`, `i < count`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavelengthGrid {
    start_nm: f64,
    step_nm: f64,
    count: usize,
}

impl WavelengthGrid {
    /// The canonical analysis grid: 380–780 nm at 5 nm (81 samples).
    pub const CANONICAL: WavelengthGrid = WavelengthGrid {
        start_nm: 380.0,
        step_nm: 5.0,
        count: 81,
    };

    pub fn new(start_nm: f64, step_nm: f64, count: usize) -> Result<Self, SpectralError> {
        if !start_nm.is_finite() || !step_nm.is_finite() {
            return Err(SpectralError::InvalidGrid("non-finite start or step"));
        }
        if step_nm <= 0.0 {
            return Err(SpectralError::InvalidGrid("step must be positive"));
        }
        if count < 2 {
            return Err(SpectralError::InvalidGrid("at least two samples are required"));
        }
        let end = start_nm + (count - 1) as f64 * step_nm;
        if start_nm < MIN_WAVELENGTH_NM - GRID_EPS || end > MAX_WAVELENGTH_NM + GRID_EPS {
            return Err(SpectralError::InvalidGrid("grid must lie within 300–830 nm"));
        }
        Ok(Self { start_nm, step_nm, count })
    }

    /// Builds a grid from explicit, uniformly spaced wavelengths.
    pub fn from_wavelengths(wavelengths: &[f64]) -> Result<Self, SpectralError> {
        let n = wavelengths.len();
        if n < 2 {
            return Err(SpectralError::InvalidGrid("at least two samples are required"));
        }
        if wavelengths.iter().any(|w| !w.is_finite()) {
            return Err(SpectralError::InvalidGrid("non-finite wavelength"));
        }
        if wavelengths.windows(2).any(|w| w[1] <= w[0]) {
            return Err(SpectralError::InvalidGrid("wavelengths must be strictly increasing"));
        }
        let start = wavelengths[0];
        let step = (wavelengths[n - 1] - start) / (n - 1) as f64;
        let tol = 1e-6 * step;
        for (i, &w) in wavelengths.iter().enumerate() {
            if libm::fabs(w - (start + i as f64 * step)) > tol {
                return Err(SpectralError::InvalidGrid("wavelengths are not uniformly spaced"));
            }
        }
        Self::new(start, step, n)
    }

    pub fn start_nm(&self) -> f64 {
        self.start_nm
    }

    pub fn step_nm(&self) -> f64 {
        self.step_nm
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn end_nm(&self) -> f64 {
        self.wavelength(self.count - 1)
    }

    pub fn wavelength(&self, i: usize) -> f64 {
        self.start_nm + i as f64 * self.step_nm
    }

    pub fn wavelengths(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(move |i| self.wavelength(i))
    }

    /// Same sampling up to floating-point noise in the parameters.
    pub fn matches(&self, other: &WavelengthGrid) -> bool {
        self.count == other.count
            && libm::fabs(self.start_nm - other.start_nm) <= GRID_EPS * self.start_nm
            && libm::fabs(self.step_nm - other.step_nm) <= GRID_EPS * self.step_nm
    }

    /// Trapezoidal quadrature weights (nm) over the full grid span.
    pub fn trapezoid_weights(&self) -> Vec<f64> {
        let mut w = alloc::vec![self.step_nm; self.count];
        w[0] = 0.5 * self.step_nm;
        w[self.count - 1] = 0.5 * self.step_nm;
        w
    }

    fn overlaps(&self, other: &WavelengthGrid) -> bool {
        self.start_nm <= other.end_nm() && other.start_nm <= self.end_nm()
    }
}

/// Element-wise operation for [`combine`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CombineOp {
    Add,
    Subtract,
    Scale,
}

/// Right-hand operand for [`combine`].
#[derive(Debug, Clone, Copy)]
pub enum Operand<'a> {
    Spectrum(&'a SpectralDistribution),
    Scalar(f64),
}

/// Sampled spectrum on a uniform grid.
///
/// Values are in W·m⁻²·nm⁻¹ for measured irradiance. Signed values are
/// allowed so the same type can carry light-vector component spectra; use
/// [`SpectralDistribution::irradiance`] for measured inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDistribution {
    grid: WavelengthGrid,
    values: Vec<f64>,
}

impl SpectralDistribution {
    /// A finite, possibly signed spectrum.
    pub fn new(grid: WavelengthGrid, values: Vec<f64>) -> Result<Self, SpectralError> {
        if values.len() != grid.count {
            return Err(SpectralError::LengthMismatch {
                expected: grid.count,
                found: values.len(),
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(SpectralError::NonFinite { index });
        }
        Ok(Self { grid, values })
    }

    /// A measured irradiance spectrum: finite and nonnegative.
    pub fn irradiance(grid: WavelengthGrid, values: Vec<f64>) -> Result<Self, SpectralError> {
        let spd = Self::new(grid, values)?;
        spd.check_nonnegative()?;
        Ok(spd)
    }

    pub fn constant(grid: WavelengthGrid, value: f64) -> Self {
        Self {
            grid,
            values: alloc::vec![value; grid.count],
        }
    }

    pub fn zeros(grid: WavelengthGrid) -> Self {
        Self::constant(grid, 0.0)
    }

    /// Samples `f(λ)` at every grid wavelength.
    pub fn from_fn(grid: WavelengthGrid, f: impl Fn(f64) -> f64) -> Self {
        Self {
            grid,
            values: grid.wavelengths().map(f).collect(),
        }
    }

    pub(crate) fn from_parts_unchecked(grid: WavelengthGrid, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.count);
        Self { grid, values }
    }

    pub fn grid(&self) -> &WavelengthGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn check_nonnegative(&self) -> Result<(), SpectralError> {
        match self.values.iter().position(|&v| v < 0.0) {
            Some(index) => Err(SpectralError::Negative {
                index,
                value: self.values[index],
            }),
            None => Ok(()),
        }
    }

    /// Piecewise-linear value at `wavelength_nm`, flat outside the grid.
    pub fn value_at(&self, wavelength_nm: f64) -> f64 {
        let g = &self.grid;
        let pos = (wavelength_nm - g.start_nm) / g.step_nm;
        let last = g.count - 1;
        if pos <= 0.0 {
            return self.values[0];
        }
        if pos >= last as f64 {
            return self.values[last];
        }
        // Snap to a node when the target coincides with one, so resampling
        // onto the source grid reproduces the samples exactly.
        let nearest = libm::round(pos);
        if libm::fabs(pos - nearest) <= 1e-9 {
            return self.values[nearest as usize];
        }
        let i = pos as usize;
        let t = pos - i as f64;
        let (a, b) = (self.values[i], self.values[i + 1]);
        a + t * (b - a)
    }

    /// Resamples onto `target`; fails only when the two ranges do not overlap.
    pub fn resample(&self, target: &WavelengthGrid) -> Result<Self, SpectralError> {
        if !self.grid.overlaps(target) {
            return Err(SpectralError::GridMismatch);
        }
        Ok(self.resample_extrapolating(target))
    }

    /// Like [`resample`](Self::resample) but never fails: disjoint ranges
    /// yield the nearest endpoint value everywhere.
    pub fn resample_extrapolating(&self, target: &WavelengthGrid) -> Self {
        if self.grid.matches(target) {
            return Self {
                grid: *target,
                values: self.values.clone(),
            };
        }
        Self {
            grid: *target,
            values: target.wavelengths().map(|w| self.value_at(w)).collect(),
        }
    }

    pub fn add(&self, other: &SpectralDistribution) -> Result<Self, SpectralError> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn subtract(&self, other: &SpectralDistribution) -> Result<Self, SpectralError> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, factor: f64) -> Self {
        self.map(|v| v * factor)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip_with(
        &self,
        other: &SpectralDistribution,
        f: impl Fn(f64, f64) -> f64,
    ) -> Result<Self, SpectralError> {
        if !self.grid.matches(&other.grid) {
            return Err(SpectralError::GridMismatch);
        }
        Ok(Self {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    /// Trapezoidal integral over the grid span (value·nm).
    pub fn integrate(&self) -> f64 {
        self.grid
            .trapezoid_weights()
            .iter()
            .zip(&self.values)
            .map(|(w, v)| w * v)
            .sum()
    }
}

/// Element-wise spectrum arithmetic.
///
/// `Add` and `Subtract` need a spectrum on an identical grid; `Scale` needs
/// a scalar.
pub fn combine(
    a: &SpectralDistribution,
    b: Operand<'_>,
    op: CombineOp,
) -> Result<SpectralDistribution, SpectralError> {
    match (op, b) {
        (CombineOp::Add, Operand::Spectrum(s)) => a.add(s),
        (CombineOp::Subtract, Operand::Spectrum(s)) => a.subtract(s),
        (CombineOp::Scale, Operand::Scalar(c)) => Ok(a.scale(c)),
        (CombineOp::Add, Operand::Scalar(c)) => Ok(a.map(|v| v + c)),
        (CombineOp::Subtract, Operand::Scalar(c)) => Ok(a.map(|v| v - c)),
        (CombineOp::Scale, Operand::Spectrum(s)) => a.zip_with(s, |x, y| x * y),
    }
}
