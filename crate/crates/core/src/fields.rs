//! Transverse profiles of leaky modes and their axial evolution.
//!
//! A leaky mode is built from an outgoing wave `exp(-iKx)` in region I
//! (`x < -A`), a standing combination `B exp(iQx) + C exp(-iQx)` in the core
//! and an outgoing wave `D exp(iKx)` in region III (`x > A`). With `K` in the
//! fourth quadrant both exterior pieces grow exponentially with `|x|`, and the
//! profile cannot be normalized by an integral; it is scaled instead so that
//! the largest value of `|phi|` inside the core is 1 and real.

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::curve::check_increasing;
use crate::error::{Error, Result};
use crate::resonances::{residual_in_k, Resonance};
use crate::slab::SlabConfig;

/// Quantization residual above which a mode cannot be matched.
pub const MATCHING_LIMIT: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    /// Interior maximum of `|phi|` equal to 1, taken real and positive.
    InteriorPeak,
}

/// Piecewise modal field of a leaky mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeField {
    pub resonance: Resonance,
    half_width: f64,
    /// Coefficient of `exp(-iKx)` for `x < -A`.
    pub left: Complex64,
    /// Coefficient of `exp(iQx)` in the core.
    pub core_forward: Complex64,
    /// Coefficient of `exp(-iQx)` in the core.
    pub core_backward: Complex64,
    /// Coefficient of `exp(iKx)` for `x > A`.
    pub right: Complex64,
    pub normalization: Normalization,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Region {
    Left,
    Core,
    Right,
}

impl ModeField {
    fn k(&self) -> Complex64 {
        self.resonance.wavenumbers.clad
    }

    fn q(&self) -> Complex64 {
        self.resonance.wavenumbers.core
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    fn region(&self, x: f64) -> Region {
        if x < -self.half_width {
            Region::Left
        } else if x > self.half_width {
            Region::Right
        } else {
            Region::Core
        }
    }

    fn piece(&self, region: Region, x: f64) -> (Complex64, Complex64) {
        let i = Complex64::i();
        match region {
            Region::Left => {
                let e = self.left * (-i * self.k() * x).exp();
                (e, -i * self.k() * e)
            }
            Region::Right => {
                let e = self.right * (i * self.k() * x).exp();
                (e, i * self.k() * e)
            }
            Region::Core => {
                let f = self.core_forward * (i * self.q() * x).exp();
                let b = self.core_backward * (-i * self.q() * x).exp();
                (f + b, i * self.q() * (f - b))
            }
        }
    }

    /// `phi(x)`.
    pub fn value(&self, x: f64) -> Complex64 {
        self.piece(self.region(x), x).0
    }

    /// `phi'(x)`.
    pub fn derivative(&self, x: f64) -> Complex64 {
        self.piece(self.region(x), x).1
    }

    /// `beta = -phi'/phi`, from the piece that contains `x` (the core at `x = +-A`).
    pub fn log_derivative(&self, x: f64) -> Complex64 {
        let (v, d) = self.piece(self.region(x), x);
        -d / v
    }

    /// Relative jumps of value and derivative at `x = -A` and `x = +A`:
    /// `[value(-A), slope(-A), value(+A), slope(+A)]`.
    pub fn matching_residuals(&self) -> [f64; 4] {
        let a = self.half_width;
        let rel = |u: Complex64, v: Complex64| (u - v).norm() / u.norm().max(v.norm());
        let (cl, cdl) = self.piece(Region::Core, -a);
        let (ol, odl) = self.piece(Region::Left, -a);
        let (cr, cdr) = self.piece(Region::Core, a);
        let (or, odr) = self.piece(Region::Right, a);
        [rel(cl, ol), rel(cdl, odl), rel(cr, or), rel(cdr, odr)]
    }

    /// Number of sign changes of `Re phi` inside the core on `samples` points.
    pub fn interior_nodes(&self, samples: usize) -> usize {
        let a = self.half_width;
        let n = samples.max(3);
        let vals: Vec<f64> = (0..n)
            .map(|j| self.value(-a + 2.0 * a * j as f64 / (n - 1) as f64).re)
            .filter(|v| *v != 0.0)
            .collect();
        vals.windows(2).filter(|w| w[0] * w[1] < 0.0).count()
    }
}

/// Solves the outgoing matching problem for a refined resonance.
///
/// The core coefficients come from matching at `x = -A`; the right exterior is
/// fixed by continuity of the value at `x = +A`. The slope at `+A` then agrees
/// only to the accuracy of the root.
pub fn mode_profile(res: &Resonance, cfg: &SlabConfig) -> Result<ModeField> {
    let k = res.wavenumbers.clad;
    let residual = residual_in_k(k, cfg)?.norm();
    if !(residual <= MATCHING_LIMIT) {
        return Err(Error::MatchingFailure {
            residual,
            limit: MATCHING_LIMIT,
        });
    }
    let q = res.wavenumbers.core;
    let a = cfg.half_width();
    let i = Complex64::i();

    let v = (i * k * a).exp();
    let dv = -i * k * v;
    let forward = (v + dv / (i * q)) / 2.0 * (i * q * a).exp();
    let backward = (v - dv / (i * q)) / 2.0 * (-i * q * a).exp();
    let inner = forward * (i * q * a).exp() + backward * (-i * q * a).exp();
    let right = inner * (-i * k * a).exp();

    let mut field = ModeField {
        resonance: *res,
        half_width: a,
        left: Complex64::new(1.0, 0.0),
        core_forward: forward,
        core_backward: backward,
        right,
        normalization: Normalization::InteriorPeak,
    };
    let peak = interior_peak(&field);
    let scale = peak.conj() / peak.norm_sqr();
    field.left *= scale;
    field.core_forward *= scale;
    field.core_backward *= scale;
    field.right *= scale;
    Ok(field)
}

/// Value of `phi` at the location of the largest interior `|phi|`.
fn interior_peak(field: &ModeField) -> Complex64 {
    let a = field.half_width;
    let q = field.q().re.abs().max(1e-3);
    // at least 40 samples per interior wavelength
    let n = ((2.0 * a * q / (2.0 * std::f64::consts::PI) * 40.0).ceil() as usize).max(2001);
    let h = 2.0 * a / (n - 1) as f64;
    let abs2 = |x: f64| field.value(x.clamp(-a, a)).norm_sqr();
    let best = (0..n)
        .map(|j| -a + h * j as f64)
        .max_by(|x, y| abs2(*x).total_cmp(&abs2(*y)))
        .unwrap_or(0.0);
    // golden-section polish within one sample spacing
    let (mut lo, mut hi) = ((best - h).max(-a), (best + h).min(a));
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..60 {
        let x1 = hi - ratio * (hi - lo);
        let x2 = lo + ratio * (hi - lo);
        if abs2(x1) > abs2(x2) {
            hi = x2;
        } else {
            lo = x1;
        }
    }
    field.value(0.5 * (lo + hi))
}

/// Complex field sampled on an `(x, z)` rectangle; rows are `z`, columns are `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldGrid {
    x: Vec<f64>,
    z: Vec<f64>,
    values: Array2<Complex64>,
}

impl FieldGrid {
    pub fn new(x: Vec<f64>, z: Vec<f64>, values: Array2<Complex64>) -> Result<Self> {
        check_increasing(&x)?;
        check_increasing(&z)?;
        if values.dim() != (z.len(), x.len()) {
            return Err(Error::Grid(format!(
                "field matrix is {:?}, grids are {} z by {} x",
                values.dim(),
                z.len(),
                x.len()
            )));
        }
        Ok(Self { x, z, values })
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn z(&self) -> &[f64] {
        &self.z
    }

    pub fn values(&self) -> &Array2<Complex64> {
        &self.values
    }

    /// Field at grid indices `(iz, ix)`.
    pub fn at(&self, iz: usize, ix: usize) -> Complex64 {
        self.values[[iz, ix]]
    }

    pub fn row(&self, iz: usize) -> Vec<Complex64> {
        self.values.row(iz).to_vec()
    }
}

/// `E(x, z) = phi(x) exp(-i eps z)`; the amplitude decays as `exp(-Gamma z / 2)`.
pub fn propagate_mode(field: &ModeField, x_grid: &[f64], z_grid: &[f64]) -> Result<FieldGrid> {
    check_increasing(x_grid)?;
    check_increasing(z_grid)?;
    let eps = field.resonance.eigenvalue.as_complex();
    let profile: Vec<Complex64> = x_grid.iter().map(|&x| field.value(x)).collect();
    let values = Array2::from_shape_fn((z_grid.len(), x_grid.len()), |(iz, ix)| {
        profile[ix] * (-Complex64::i() * eps * z_grid[iz]).exp()
    });
    FieldGrid::new(x_grid.to_vec(), z_grid.to_vec(), values)
}
