//! Fock-Breit-Wigner (Lorentzian) lineshape and the exponential decay law it implies.
//!
//! Units have `hbar = 1`. In the waveguide reading the energy is the propagation
//! constant and time is the axial distance `k0 z`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A resonance line centered at `E0` with full width `Gamma`.
///
/// The lineshape has poles at `E0 +/- i Gamma/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FbwLine {
    center: f64,
    width: f64,
}

/// Lifetime of a line; a zero width is a stable (bound or guided) state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Lifetime {
    Finite(f64),
    Stable,
}

impl Lifetime {
    pub fn finite(self) -> Option<f64> {
        match self {
            Lifetime::Finite(t) => Some(t),
            Lifetime::Stable => None,
        }
    }
}

impl FbwLine {
    pub fn new(center: f64, width: f64) -> Result<Self> {
        if !center.is_finite() {
            return Err(Error::Domain {
                quantity: "E0",
                value: center,
                domain: "finite reals",
            });
        }
        if !(width.is_finite() && width >= 0.0) {
            return Err(Error::Domain {
                quantity: "Gamma",
                value: width,
                domain: "[0, inf)",
            });
        }
        Ok(Self { center, width })
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn half_width(&self) -> f64 {
        self.width / 2.0
    }

    /// `(Gamma/2)^2 / ((E - E0)^2 + (Gamma/2)^2)`.
    ///
    /// For `Gamma = 0` this is the delta-like limit: 1 at `E0`, 0 elsewhere.
    pub fn lineshape(&self, energy: f64) -> f64 {
        let g = self.half_width();
        let d = energy - self.center;
        if g == 0.0 {
            return if d == 0.0 { 1.0 } else { 0.0 };
        }
        g * g / (d * d + g * g)
    }

    /// `C(E) = (Gamma/2) / (E - E0 + i Gamma/2)`, with `|C|^2` equal to the lineshape.
    pub fn fourier_coefficient(&self, energy: f64) -> Complex64 {
        let g = self.half_width();
        let d = energy - self.center;
        if g == 0.0 {
            return if d == 0.0 {
                Complex64::new(0.0, -1.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
        }
        g / Complex64::new(d, g)
    }

    /// `T(t) = (Gamma/2) exp(-i E0 t) exp(-Gamma t / 2)` for `t >= 0`.
    ///
    /// The prefactor `Gamma/2` is kept; use [`survival_probability`](Self::survival_probability)
    /// for the normalized decay law.
    pub fn survival_amplitude(&self, t: f64) -> Result<Complex64> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::Domain {
                quantity: "t",
                value: t,
                domain: "[0, inf) (forward evolution only)",
            });
        }
        let g = self.half_width();
        Ok(g * Complex64::from_polar((-g * t).exp(), -self.center * t))
    }

    /// `|T(t)|^2 / |T(0)|^2 = exp(-Gamma t)`.
    pub fn survival_probability(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::Domain {
                quantity: "t",
                value: t,
                domain: "[0, inf) (forward evolution only)",
            });
        }
        Ok((-self.width * t).exp())
    }

    /// `tau = 1 / Gamma`. In waveguide units this is the axial 1/e intensity
    /// distance `k0 z`.
    pub fn lifetime(&self) -> Lifetime {
        if self.width == 0.0 {
            Lifetime::Stable
        } else {
            Lifetime::Finite(1.0 / self.width)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn peak_and_half_maximum() {
        let line = FbwLine::new(0.3, 0.2).unwrap();
        assert_eq!(line.lineshape(0.3), 1.0);
        assert_relative_eq!(line.lineshape(0.4), 0.5, epsilon = 1e-15);
        assert_relative_eq!(line.lineshape(0.2), 0.5, epsilon = 1e-15);
        assert!(line.lineshape(1e9) < 1e-18);
        assert!(line.lineshape(-1e9) < 1e-18);
    }

    #[test]
    fn zero_width_is_delta_like() {
        let line = FbwLine::new(1.0, 0.0).unwrap();
        assert_eq!(line.lineshape(1.0), 1.0);
        assert_eq!(line.lineshape(1.0 + 1e-12), 0.0);
        assert_eq!(line.fourier_coefficient(2.0), Complex64::new(0.0, 0.0));
        assert_eq!(line.lifetime(), Lifetime::Stable);
        assert!(FbwLine::new(0.0, -1.0).is_err());
    }

    #[test]
    fn coefficient_examples() {
        let line = FbwLine::new(-0.5, 0.04).unwrap();
        let c = line.fourier_coefficient(-0.5);
        assert_relative_eq!(c.re, 0.0, epsilon = 1e-15);
        assert_relative_eq!(c.im, -1.0, epsilon = 1e-15);
        assert_relative_eq!(
            line.fourier_coefficient(-0.48).norm_sqr(),
            0.5,
            epsilon = 1e-15
        );
        // E0 + 5 Gamma: (1/2)^2 / (25 + 1/4) = 1/101
        assert_relative_eq!(
            line.fourier_coefficient(-0.5 + 5.0 * 0.04).norm_sqr(),
            1.0 / 101.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn survival_examples() {
        let line = FbwLine::new(0.7, 0.0102084).unwrap();
        let t0 = line.survival_amplitude(0.0).unwrap();
        assert_eq!(t0, Complex64::new(0.0102084 / 2.0, 0.0));
        let tau = line.lifetime().finite().unwrap();
        let ratio = line.survival_amplitude(tau).unwrap().norm_sqr() / t0.norm_sqr();
        assert_relative_eq!(ratio, (-1.0f64).exp(), epsilon = 1e-14);
        assert!((ratio - 0.3679).abs() < 1e-4);
        assert!(line.survival_amplitude(-1.0).is_err());
    }

    #[test]
    fn lifetime_examples() {
        let tau = FbwLine::new(0.0, 2.0 * 0.0051042)
            .unwrap()
            .lifetime()
            .finite()
            .unwrap();
        assert!((tau - 97.96).abs() < 5e-3);
        assert_eq!(
            FbwLine::new(0.0, 2.0).unwrap().lifetime(),
            Lifetime::Finite(0.5)
        );
    }

    proptest! {
        #[test]
        fn coefficient_modulus_is_lineshape(e0 in -2.0f64..2.0, w in 1e-4f64..1.0, e in -3.0f64..3.0) {
            let line = FbwLine::new(e0, w).unwrap();
            let lhs = line.fourier_coefficient(e).norm_sqr();
            prop_assert!((lhs - line.lineshape(e)).abs() <= 1e-14);
        }

        #[test]
        fn lineshape_is_symmetric(w in 1e-4f64..1.0, d in 0.0f64..3.0) {
            let line = FbwLine::new(0.0, w).unwrap();
            prop_assert_eq!(line.lineshape(d), line.lineshape(-d));
        }

        #[test]
        fn survival_decays_as_exponential(w in 1e-3f64..1.0, t in 0.0f64..50.0, dt in 1e-3f64..5.0) {
            let line = FbwLine::new(0.1, w).unwrap();
            let a = line.survival_amplitude(t).unwrap().norm_sqr();
            let b = line.survival_amplitude(t + dt).unwrap().norm_sqr();
            let g = w / 2.0;
            prop_assert!(b < a);
            prop_assert!((a - g * g * (-w * t).exp()).abs() <= 1e-14 * g * g);
        }
    }
}
