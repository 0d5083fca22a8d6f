//! Leaky-mode eigenvalues of the slab.
//!
//! Closed-form estimates put the `m`-th resonance where the core holds `m`
//! half waves, `2QA = m pi`, with width `Gamma/2 ~ K / (A U0)`. The exact
//! leaky modes are the zeros of the transmission-amplitude denominator
//!
//! ```text
//! f(eps) = cos 2QA - i (K^2 + Q^2) / (2KQ) sin 2QA
//! ```
//!
//! with `K` in the fourth quadrant, i.e. solutions that are purely outgoing
//! on both sides of the slab. They are refined from the estimates by Newton
//! iteration in the `K` variable.

use std::f64::consts::PI;
use std::ops::RangeInclusive;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fbw::FbwLine;
use crate::slab::{
    eigenvalue_from_clad, eigenvalue_to_wavenumbers, ComplexEigenvalue, SlabConfig, Wavenumbers,
};

const NEWTON_MAX_ITER: usize = 100;
const NEWTON_TOL: f64 = 1e-12;
const NEWTON_STEP_TOL: f64 = 1e-14;
/// Residual bound a refined root must meet.
pub const REFINED_RESIDUAL: f64 = 1e-10;
/// Trust radius in units of the seed's full width.
pub const TRUST_WIDTHS: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Approximate,
    Refined,
}

/// One leaky mode of the slab.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Resonance {
    pub mode_index: u32,
    pub eigenvalue: ComplexEigenvalue,
    pub wavenumbers: Wavenumbers,
    /// `|f(eps)|` at the eigenvalue.
    pub residual: f64,
    pub method: Method,
}

impl Resonance {
    pub fn line(&self) -> FbwLine {
        FbwLine::new(self.eigenvalue.re(), self.eigenvalue.width())
            .expect("eigenvalue widths are non-negative")
    }
}

/// Admissible mode indices, `sqrt(2 U0 (U0-1)) < m pi / (2A) < sqrt(2) U0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModeRange {
    pub first: u32,
    pub last: u32,
}

impl ModeRange {
    pub fn is_empty(&self) -> bool {
        self.first > self.last
    }

    pub fn len(&self) -> usize {
        if self.is_empty() {
            0
        } else {
            (self.last - self.first + 1) as usize
        }
    }

    pub fn contains(&self, m: u32) -> bool {
        (self.first..=self.last).contains(&m)
    }

    pub fn indices(&self) -> RangeInclusive<u32> {
        self.first..=self.last
    }
}

pub fn mode_index_range(cfg: &SlabConfig) -> ModeRange {
    let u0 = cfg.core_index();
    let scale = 2.0 * cfg.half_width() / PI;
    let lower = (2.0 * u0 * (u0 - 1.0)).sqrt() * scale;
    let upper = 2f64.sqrt() * u0 * scale;
    let first = (lower.floor() + 1.0).max(1.0);
    let last = upper.ceil() - 1.0;
    if last < first {
        return ModeRange { first: 1, last: 0 };
    }
    ModeRange {
        first: first as u32,
        last: last as u32,
    }
}

/// Closed-form position and half width of mode `m`.
pub fn approximate_eigenvalue(m: u32, cfg: &SlabConfig) -> ComplexEigenvalue {
    let a = cfg.half_width();
    let u0 = cfg.core_index();
    let q = m as f64 * PI / (2.0 * a);
    let eps_r = q * q / (2.0 * u0) - u0;
    let half = (2.0 * (eps_r + 1.0)).max(0.0).sqrt() / (a * u0);
    ComplexEigenvalue::new(eps_r, half).expect("closed-form eigenvalue is finite")
}

pub fn approximate_resonances(cfg: &SlabConfig) -> Vec<Resonance> {
    mode_index_range(cfg)
        .indices()
        .map(|m| {
            let eigenvalue = approximate_eigenvalue(m, cfg);
            let wavenumbers = eigenvalue_to_wavenumbers(eigenvalue, cfg);
            let residual = residual_in_k(wavenumbers.clad, cfg)
                .map(|f| f.norm())
                .unwrap_or(f64::INFINITY);
            Resonance {
                mode_index: m,
                eigenvalue,
                wavenumbers,
                residual,
                method: Method::Approximate,
            }
        })
        .collect()
}

/// The quantization function `f` evaluated at a complex eigenvalue.
pub fn siegert_residual(eps: ComplexEigenvalue, cfg: &SlabConfig) -> Result<Complex64> {
    residual_in_k(eigenvalue_to_wavenumbers(eps, cfg).clad, cfg)
}

/// The quantization function `f` as a function of the cladding wavenumber `K`.
pub fn residual_in_k(k: Complex64, cfg: &SlabConfig) -> Result<Complex64> {
    let q = cfg.core_wavenumber(k);
    if k.norm() == 0.0 || q.norm() == 0.0 {
        return Err(Error::Pole);
    }
    let theta = 2.0 * q * cfg.half_width();
    let g = (k * k + q * q) / (2.0 * k * q);
    Ok(theta.cos() - Complex64::i() * g * theta.sin())
}

/// Refines an approximate resonance into an exact zero of the quantization function.
pub fn refine_resonance(seed: &Resonance, cfg: &SlabConfig) -> Result<Resonance> {
    let mode = seed.mode_index;
    let seed_eps = seed.eigenvalue.as_complex();
    let radius = TRUST_WIDTHS * seed.eigenvalue.width();
    let mut k = seed.wavenumbers.clad;
    let mut f = residual_in_k(k, cfg)?;
    let mut converged = false;
    for _ in 0..NEWTON_MAX_ITER {
        if f.norm() <= NEWTON_TOL {
            converged = true;
            break;
        }
        let h = 1e-6 * k.norm().max(1.0);
        let deriv = (residual_in_k(k + h, cfg)? - residual_in_k(k - h, cfg)?) / (2.0 * h);
        if deriv.norm() == 0.0 || !deriv.is_finite() {
            break;
        }
        let step = f / deriv;
        k -= step;
        f = residual_in_k(k, cfg)?;
        if step.norm() < NEWTON_STEP_TOL {
            converged = true;
            break;
        }
    }
    let residual = f.norm();
    if !converged || !(residual <= REFINED_RESIDUAL) {
        return Err(Error::NoConvergence {
            mode,
            iterations: NEWTON_MAX_ITER,
            residual,
        });
    }
    let eps = eigenvalue_from_clad(k);
    let distance = (eps - seed_eps).norm();
    if !(distance <= radius) || k.re <= 0.0 || k.im > 0.0 {
        return Err(Error::RootJumped {
            mode,
            distance,
            radius,
        });
    }
    let eigenvalue = ComplexEigenvalue::from_complex(eps)?;
    Ok(Resonance {
        mode_index: mode,
        eigenvalue,
        wavenumbers: Wavenumbers {
            clad: k,
            core: cfg.core_wavenumber(k),
        },
        residual,
        method: Method::Refined,
    })
}

/// All leaky modes of the slab, refined.
pub fn refined_resonances(cfg: &SlabConfig) -> Result<Vec<Resonance>> {
    approximate_resonances(cfg)
        .iter()
        .map(|seed| refine_resonance(seed, cfg))
        .collect()
}

/// `(Gamma_n / 2) / (eps_{n+1} - eps_n)` for each adjacent pair.
pub fn narrowness_diagnostic(resonances: &[Resonance]) -> Vec<f64> {
    resonances
        .windows(2)
        .map(|w| w[0].eigenvalue.half_width() / (w[1].eigenvalue.re() - w[0].eigenvalue.re()))
        .collect()
}
