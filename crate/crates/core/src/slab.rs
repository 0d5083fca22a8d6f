//! Slab geometry and the optics/quantum dictionary.
//!
//! Everything is dimensionless: transverse lengths are measured in units of
//! `1/k0` and wavenumbers in units of `k0`, so a slab is fully described by
//! its half width `A = k0 a` and core index `U0`. The cladding is vacuum.
//!
//! In the paraxial picture the propagation constant `eps` plays the role of
//! an energy. In the cladding `eps = K^2/2 - 1`, in the core
//! `eps = Q^2/(2 U0) - U0`, which gives `Q^2 = U0 (K^2 + 2 (U0 - 1))`.
//!
//! The weakly guiding assumption `|n - n0| << 1` is not checked; the
//! reference slab (`U0 = 1.5` against vacuum) does not satisfy it.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Refractive index of the cladding (vacuum).
pub const CLAD_INDEX: f64 = 1.0;

/// A homogeneous dielectric slab `|x| <= A` of index `U0` embedded in vacuum.
///
/// Equivalently, a square well of depth `U0 - 1` and width `2A`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlabConfig {
    half_width: f64,
    core_index: f64,
}

impl SlabConfig {
    pub fn new(half_width: f64, core_index: f64) -> Result<Self> {
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::InvalidConfig {
                field: "half_width",
                reason: format!("k0*a must be positive and finite, got {half_width}"),
            });
        }
        if !(core_index.is_finite() && core_index > CLAD_INDEX) {
            return Err(Error::InvalidConfig {
                field: "core_index",
                reason: format!("U0 must exceed the cladding index 1, got {core_index}"),
            });
        }
        Ok(Self {
            half_width,
            core_index,
        })
    }

    /// The slab of the reference table: `k0 a = 30`, `U0 = 1.5`.
    pub fn reference() -> Self {
        Self {
            half_width: 30.0,
            core_index: 1.5,
        }
    }

    /// Dimensionless half width `A = k0 a`.
    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    /// Core refractive index `U0`, also the reference index `n0`.
    pub fn core_index(&self) -> f64 {
        self.core_index
    }

    /// Depth of the equivalent square well, `|1 - U0|`.
    pub fn well_depth(&self) -> f64 {
        (CLAD_INDEX - self.core_index).abs()
    }

    pub fn index_at(&self, x: f64) -> f64 {
        if x.abs() <= self.half_width {
            self.core_index
        } else {
            CLAD_INDEX
        }
    }

    /// `Q^2` as a function of `K`.
    pub fn core_wavenumber_sq(&self, clad: Complex64) -> Complex64 {
        let u0 = self.core_index;
        u0 * (clad * clad + 2.0 * (u0 - 1.0))
    }

    /// Core wavenumber `Q` (principal square root) for a cladding wavenumber `K`.
    pub fn core_wavenumber(&self, clad: Complex64) -> Complex64 {
        self.core_wavenumber_sq(clad).sqrt()
    }
}

/// Complex propagation constant `eps = eps_R - i Gamma/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexEigenvalue {
    re: f64,
    half_width: f64,
}

/// Spectral band of a real propagation constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Band {
    /// `-U0 <= eps < -1`: trapped in the core.
    Guided,
    /// `-1 <= eps < 0`: oscillatory in the cladding.
    Radiation,
    /// Complex `eps` with `Gamma > 0`.
    Leaky,
    /// Outside both bands.
    Outside,
}

impl ComplexEigenvalue {
    pub fn new(re: f64, half_width: f64) -> Result<Self> {
        if !re.is_finite() {
            return Err(Error::Domain {
                quantity: "eps_R",
                value: re,
                domain: "finite reals",
            });
        }
        if !(half_width.is_finite() && half_width >= 0.0) {
            return Err(Error::Domain {
                quantity: "Gamma/2",
                value: half_width,
                domain: "[0, inf)",
            });
        }
        Ok(Self { re, half_width })
    }

    pub fn real(re: f64) -> Result<Self> {
        Self::new(re, 0.0)
    }

    /// Builds the eigenvalue from `eps` as a complex number; requires `Im eps <= 0`.
    pub fn from_complex(eps: Complex64) -> Result<Self> {
        Self::new(eps.re, -eps.im)
    }

    pub fn re(&self) -> f64 {
        self.re
    }

    /// `Gamma / 2`.
    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    /// Full width `Gamma`.
    pub fn width(&self) -> f64 {
        2.0 * self.half_width
    }

    pub fn as_complex(&self) -> Complex64 {
        Complex64::new(self.re, -self.half_width)
    }

    pub fn band(&self, cfg: &SlabConfig) -> Band {
        if self.half_width > 0.0 {
            Band::Leaky
        } else if self.re >= -cfg.core_index() && self.re < -1.0 {
            Band::Guided
        } else if (-1.0..0.0).contains(&self.re) {
            Band::Radiation
        } else {
            Band::Outside
        }
    }
}

/// Cladding (`K`) and core (`Q`) wavenumbers in units of `k0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Wavenumbers {
    pub clad: Complex64,
    pub core: Complex64,
}

impl Wavenumbers {
    /// The propagation constant these wavenumbers belong to, `K^2/2 - 1`.
    pub fn eigenvalue(&self) -> Complex64 {
        eigenvalue_from_clad(self.clad)
    }

    /// True on the guided segment, where the branch rule leaves `K` on the
    /// negative imaginary axis.
    pub fn is_guided(&self) -> bool {
        self.clad.re == 0.0 && self.clad.im < 0.0
    }
}

/// `K = sqrt(2 (eps + 1))` on the branch `Re K >= 0`, `Im K <= 0` when `Re K = 0`.
pub fn clad_wavenumber(eps: Complex64) -> Complex64 {
    let arg = 2.0 * (eps + 1.0);
    let mut k = if arg.im == 0.0 {
        // avoid signed-zero ambiguity on the real axis
        if arg.re >= 0.0 {
            Complex64::new(arg.re.sqrt(), 0.0)
        } else {
            Complex64::new(0.0, (-arg.re).sqrt())
        }
    } else {
        arg.sqrt()
    };
    if k.re < 0.0 || (k.re == 0.0 && k.im > 0.0) {
        k = -k;
    }
    k
}

/// Inverse of [`clad_wavenumber`]: `eps = K^2/2 - 1`.
pub fn eigenvalue_from_clad(clad: Complex64) -> Complex64 {
    clad * clad / 2.0 - 1.0
}

pub fn eigenvalue_to_wavenumbers(eps: ComplexEigenvalue, cfg: &SlabConfig) -> Wavenumbers {
    wavenumbers_of(eps.as_complex(), cfg)
}

/// Same as [`eigenvalue_to_wavenumbers`] for an arbitrary complex `eps`.
pub fn wavenumbers_of(eps: Complex64, cfg: &SlabConfig) -> Wavenumbers {
    let clad = clad_wavenumber(eps);
    Wavenumbers {
        clad,
        core: cfg.core_wavenumber(clad),
    }
}

/// Ray angle `theta = arccos(-eps_R / n)` of a beam with propagation constant `eps_R`.
pub fn beam_slope(eps_r: f64, index: f64) -> Result<f64> {
    if !(index > 0.0) || eps_r.abs() > index || !eps_r.is_finite() {
        return Err(Error::Domain {
            quantity: "eps_R",
            value: eps_r,
            domain: "[-n(x), n(x)] (evanescent otherwise)",
        });
    }
    Ok((-eps_r / index).clamp(-1.0, 1.0).acos())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn config_rejects_bad_values() {
        assert!(SlabConfig::new(0.0, 1.5).is_err());
        assert!(SlabConfig::new(-1.0, 1.5).is_err());
        assert!(SlabConfig::new(30.0, 1.0).is_err());
        assert!(SlabConfig::new(30.0, f64::NAN).is_err());
        let cfg = SlabConfig::new(30.0, 1.5).unwrap();
        assert_eq!(cfg.well_depth(), 0.5);
        assert_eq!(cfg.index_at(30.0), 1.5);
        assert_eq!(cfg.index_at(30.1), 1.0);
    }

    #[test]
    fn eigenvalue_rejects_growing_width() {
        assert!(ComplexEigenvalue::new(-0.5, -1e-3).is_err());
        assert!(ComplexEigenvalue::from_complex(Complex64::new(-0.5, 0.1)).is_err());
    }

    #[test]
    fn band_edge_gives_zero_wavenumber() {
        let cfg = SlabConfig::reference();
        let w = eigenvalue_to_wavenumbers(ComplexEigenvalue::real(-1.0).unwrap(), &cfg);
        assert_eq!(w.clad, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn radiation_point_substitution() {
        let cfg = SlabConfig::reference();
        let w = eigenvalue_to_wavenumbers(ComplexEigenvalue::real(-0.5).unwrap(), &cfg);
        assert_relative_eq!(w.clad.re, 1.0, epsilon = 1e-15);
        assert_eq!(w.clad.im, 0.0);
        assert_relative_eq!(w.core.re, 3f64.sqrt(), epsilon = 1e-15);
        assert_eq!(w.core.im, 0.0);
    }

    #[test]
    fn tabulated_m24_lies_in_fourth_quadrant() {
        let cfg = SlabConfig::reference();
        let eps = ComplexEigenvalue::new(-0.973621, 0.0051042).unwrap();
        let w = eigenvalue_to_wavenumbers(eps, &cfg);
        assert!(w.clad.re > 0.0 && w.clad.im < 0.0);
        let half_sq = w.clad * w.clad / 2.0;
        assert_relative_eq!(half_sq.re, 0.026379, epsilon = 1e-12);
        assert_relative_eq!(half_sq.im, -0.0051042, epsilon = 1e-12);
    }

    #[test]
    fn guided_segment_is_flagged() {
        let cfg = SlabConfig::reference();
        for eps in [-1.4, -1.2, -1.0001] {
            let e = ComplexEigenvalue::real(eps).unwrap();
            let w = eigenvalue_to_wavenumbers(e, &cfg);
            assert_eq!(w.clad.re, 0.0);
            assert!(w.is_guided());
            assert_eq!(e.band(&cfg), Band::Guided);
        }
        let w = eigenvalue_to_wavenumbers(ComplexEigenvalue::real(-0.3).unwrap(), &cfg);
        assert!(!w.is_guided());
        assert!(w.clad.re > 0.0 && w.clad.im == 0.0);
    }

    #[test]
    fn slope_examples() {
        assert_eq!(beam_slope(-1.5, 1.5).unwrap(), 0.0);
        assert_relative_eq!(beam_slope(0.0, 1.5).unwrap(), PI / 2.0);
        assert_relative_eq!(beam_slope(-0.75, 1.5).unwrap(), PI / 3.0, epsilon = 1e-15);
        assert!(beam_slope(-1.6, 1.5).is_err());
    }
}
