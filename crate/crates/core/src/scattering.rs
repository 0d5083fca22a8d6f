//! Real-energy scattering by the slab: reflection and transmission amplitudes,
//! transmission coefficient and the transmission phase.
//!
//! A plane wave `exp(iKx)` comes in from the left. The amplitudes follow from
//! 2x2 matching matrices at `x = -A` and `x = +A` (continuity of the field
//! and its derivative).
//!
//! The phase `phi(K)` is defined through
//! `t = |t| exp(i (phi + pi/2 - 2 K A))`, so that
//! `phi = -arctan(2KQ cos 2QA / ((K^2 + Q^2) sin 2QA))` modulo `pi`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::curve::{check_increasing, Curve};
use crate::error::{Error, Result};
use crate::fbw::FbwLine;
use crate::slab::{clad_wavenumber, SlabConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScatteringAmplitudes {
    pub r: Complex64,
    pub t: Complex64,
    /// Transmission phase `phi(K)`, continuous in `K`.
    pub phase: f64,
}

impl ScatteringAmplitudes {
    pub fn transmission(&self) -> f64 {
        self.t.norm_sqr()
    }

    pub fn reflection(&self) -> f64 {
        self.r.norm_sqr()
    }
}

#[derive(Debug, Clone, Copy)]
struct Transfer([[Complex64; 2]; 2]);

impl Transfer {
    /// Maps `(a, b)` amplitudes of `exp(+-i k_from x)` to those of `exp(+-i k_to x)` across `x0`.
    fn interface(k_from: Complex64, k_to: Complex64, x0: f64) -> Self {
        let i = Complex64::i();
        let ratio = k_from / k_to;
        let p = (1.0 + ratio) / 2.0;
        let m = (1.0 - ratio) / 2.0;
        let e_from = (i * k_from * x0).exp();
        let e_to = (i * k_to * x0).exp();
        Transfer([
            [p * e_from / e_to, m / (e_from * e_to)],
            [m * e_from * e_to, p * e_to / e_from],
        ])
    }

    fn then(self, next: Transfer) -> Transfer {
        let a = self.0;
        let b = next.0;
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                *cell = b[r][0] * a[0][c] + b[r][1] * a[1][c];
            }
        }
        Transfer(out)
    }
}

fn radiation_wavenumber(eps_r: f64) -> Result<f64> {
    if !(eps_r > -1.0 && eps_r < 0.0) {
        return Err(Error::Domain {
            quantity: "eps_R",
            value: eps_r,
            domain: "(-1, 0) (radiation band)",
        });
    }
    Ok(clad_wavenumber(Complex64::new(eps_r, 0.0)).re)
}

fn core_of(k: f64, cfg: &SlabConfig) -> f64 {
    cfg.core_wavenumber_sq(Complex64::new(k, 0.0)).re.sqrt()
}

/// Reflection and transmission amplitudes for a real `eps_R` in the radiation band.
pub fn transfer_amplitudes(eps_r: f64, cfg: &SlabConfig) -> Result<ScatteringAmplitudes> {
    let k = radiation_wavenumber(eps_r)?;
    amplitudes_at(k, cfg)
}

/// [`transfer_amplitudes`] keyed by the cladding wavenumber `K` in `(0, sqrt 2)`.
pub fn amplitudes_at(k: f64, cfg: &SlabConfig) -> Result<ScatteringAmplitudes> {
    if !(k > 0.0 && k < 2f64.sqrt()) {
        return Err(Error::Domain {
            quantity: "K",
            value: k,
            domain: "(0, sqrt 2) (radiation band)",
        });
    }
    let a = cfg.half_width();
    let q = core_of(k, cfg);
    let kc = Complex64::new(k, 0.0);
    let qc = Complex64::new(q, 0.0);
    let m = Transfer::interface(kc, qc, -a)
        .then(Transfer::interface(qc, kc, a))
        .0;
    let r = -m[1][0] / m[1][1];
    let t = m[0][0] + m[0][1] * r;

    // arg(t) + 2KA is known modulo 2 pi; it stays within pi/2 of 2QA, which fixes the sheet.
    let wrapped = (t * Complex64::from_polar(1.0, 2.0 * k * a)).arg();
    let theta = 2.0 * q * a;
    let lifted = wrapped + 2.0 * PI * ((theta - wrapped) / (2.0 * PI)).round();
    Ok(ScatteringAmplitudes {
        r,
        t,
        phase: lifted - PI / 2.0,
    })
}

pub fn transmission_coefficient(eps_r: f64, cfg: &SlabConfig) -> Result<f64> {
    Ok(transfer_amplitudes(eps_r, cfg)?.transmission())
}

/// The closed-form phase `-arctan(2KQ cos 2QA / ((K^2+Q^2) sin 2QA))`, in `[-pi/2, pi/2]`.
///
/// At `sin 2QA = 0` the arctan argument diverges; the value `-pi/2` is returned,
/// which equals both one-sided limits modulo `pi`.
pub fn closed_form_phase(eps_r: f64, cfg: &SlabConfig) -> Result<f64> {
    let k = radiation_wavenumber(eps_r)?;
    let q = core_of(k, cfg);
    let theta = 2.0 * q * cfg.half_width();
    let s = theta.sin();
    if s == 0.0 {
        return Ok(-PI / 2.0);
    }
    Ok(-(2.0 * k * q * theta.cos() / ((k * k + q * q) * s)).atan())
}

/// Continuous version of [`closed_form_phase`] as a function of `K`.
///
/// Uses `phi + pi/2 = n pi + arctan(g tan(2QA - n pi))` with `n = round(2QA / pi)`
/// and `g = (K^2 + Q^2) / (2KQ)`; at `sin 2QA = 0` this is the two-sided limit.
pub fn continuous_phase_at(k: f64, cfg: &SlabConfig) -> f64 {
    let q = core_of(k, cfg);
    let theta = 2.0 * q * cfg.half_width();
    let n = (theta / PI).round();
    let g = (k * k + q * q) / (2.0 * k * q);
    n * PI + (g * (theta - n * PI).tan()).atan() - PI / 2.0
}

/// Removes jumps of magnitude above `pi/2` by adding multiples of `pi`.
pub fn unwrap_mod_pi(values: &mut [f64]) {
    let mut offset = 0.0;
    for i in 1..values.len() {
        let raw_prev = values[i - 1] - offset;
        let jump = values[i] - raw_prev;
        offset -= PI * (jump / PI).round();
        values[i] += offset;
    }
}

fn reduced_step(from: f64, to: f64) -> f64 {
    let d = to - from;
    d - PI * (d / PI).round()
}

/// Phase increment of the wrapped closed form between `k0` and `k1`,
/// bisecting until every sub-step changes by less than `pi/4`.
fn phase_increment(
    k0: f64,
    p0: f64,
    k1: f64,
    p1: f64,
    cfg: &SlabConfig,
    depth: u32,
) -> Result<f64> {
    let step = reduced_step(p0, p1);
    if step.abs() < PI / 4.0 {
        return Ok(step);
    }
    if depth == 0 {
        return Err(Error::Grid(format!(
            "phase not resolved between K = {k0} and K = {k1}"
        )));
    }
    let km = 0.5 * (k0 + k1);
    let pm = closed_form_phase(km * km / 2.0 - 1.0, cfg)?;
    Ok(phase_increment(k0, p0, km, pm, cfg, depth - 1)?
        + phase_increment(km, pm, k1, p1, cfg, depth - 1)?)
}

/// Transmission coefficient and unwrapped phase over an `eps_R` grid.
///
/// The phase column is the closed form accumulated along increasing `K`, with
/// adaptive refinement wherever neighbouring samples differ by more than `pi/4`.
/// It is anchored to the transfer-matrix phase at the first grid point.
pub fn transmission_curve(cfg: &SlabConfig, eps_grid: &[f64]) -> Result<Curve> {
    check_increasing(eps_grid)?;
    let mut t = Vec::with_capacity(eps_grid.len());
    let mut phase = Vec::with_capacity(eps_grid.len());
    let mut prev: Option<(f64, f64)> = None;
    for &eps in eps_grid {
        let amp = transfer_amplitudes(eps, cfg)?;
        t.push(amp.transmission());
        let k = radiation_wavenumber(eps)?;
        let wrapped = closed_form_phase(eps, cfg)?;
        let value = match prev {
            None => amp.phase,
            Some((kp, wp)) => {
                phase.last().copied().unwrap_or(0.0) + phase_increment(kp, wp, k, wrapped, cfg, 40)?
            }
        };
        phase.push(value);
        prev = Some((k, wrapped));
    }
    Curve::new("eps_R", eps_grid.to_vec())?
        .with_real("T", t)?
        .with_real("phi", phase)
}

/// Sum of the first `count` Lorentzian lines evaluated at `eps`.
pub fn fbw_superposition(eps: f64, lines: &[FbwLine], count: usize) -> f64 {
    lines.iter().take(count).map(|l| l.lineshape(eps)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn eps_at_half_wave(m: f64, cfg: &SlabConfig) -> f64 {
        let q = m * PI / (2.0 * cfg.half_width());
        q * q / (2.0 * cfg.core_index()) - cfg.core_index()
    }

    #[test]
    fn transparent_at_half_wave() {
        let cfg = SlabConfig::reference();
        for m in 24..=40 {
            let eps = eps_at_half_wave(m as f64, &cfg);
            assert_relative_eq!(
                transmission_coefficient(eps, &cfg).unwrap(),
                1.0,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn flux_is_conserved_at_midband() {
        let amp = transfer_amplitudes(-0.5, &SlabConfig::reference()).unwrap();
        assert!((amp.reflection() + amp.transmission() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn matches_closed_form_amplitude() {
        let cfg = SlabConfig::reference();
        for eps in [-0.99, -0.7, -0.31, -0.02] {
            let k = (2.0 * (eps + 1.0f64)).sqrt();
            let q = core_of(k, &cfg);
            let th = 2.0 * q * cfg.half_width();
            let g = (k * k + q * q) / (2.0 * k * q);
            let denom = Complex64::new(th.cos(), -g * th.sin());
            let t = Complex64::from_polar(1.0, -2.0 * k * cfg.half_width()) / denom;
            let amp = transfer_amplitudes(eps, &cfg).unwrap();
            assert!((amp.t - t).norm() < 1e-12, "eps = {eps}");
        }
    }

    #[test]
    fn rejects_outside_radiation_band() {
        let cfg = SlabConfig::reference();
        for eps in [-1.0, 0.0, -1.2, 0.3, f64::NAN] {
            assert!(transfer_amplitudes(eps, &cfg).is_err());
            assert!(closed_form_phase(eps, &cfg).is_err());
        }
    }

    #[test]
    fn transmission_dips_between_peaks() {
        let cfg = SlabConfig::reference();
        let lo = eps_at_half_wave(24.0, &cfg);
        let hi = eps_at_half_wave(25.0, &cfg);
        let mid = -0.9512;
        let t_mid = transmission_coefficient(mid, &cfg).unwrap();
        let t_lo = transmission_coefficient(lo, &cfg).unwrap();
        let t_hi = transmission_coefficient(hi, &cfg).unwrap();
        assert!(t_mid < t_lo && t_mid < t_hi);
        // brute-force oracle: nothing on a fine grid between the peaks exceeds them
        let grid = crate::curve::linspace(lo, hi, 2001).unwrap();
        let peak = grid
            .iter()
            .map(|&e| transmission_coefficient(e, &cfg).unwrap())
            .fold(0.0, f64::max);
        assert!(peak <= t_lo.max(t_hi) + 1e-12);
    }

    #[test]
    fn band_edge_approaches_envelope() {
        // T = 1 / (cos^2 + g^2 sin^2) with g ~ Q/(2K) as K -> 0: transmission vanishes
        // unless 2QA sits on a half wave.
        let cfg = SlabConfig::reference();
        let eps = -1e-6;
        let k = (2.0 * (eps + 1.0f64)).sqrt();
        let q = core_of(k, &cfg);
        let th = 2.0 * q * cfg.half_width();
        let g = (k * k + q * q) / (2.0 * k * q);
        let envelope = 1.0 / (th.cos().powi(2) + g * g * th.sin().powi(2));
        assert_relative_eq!(
            transmission_coefficient(eps, &cfg).unwrap(),
            envelope,
            max_relative = 1e-10
        );
    }

    #[test]
    fn unwrap_removes_pi_jumps() {
        let mut v = vec![1.0, 1.4, 1.4 - PI + 0.1, 1.5 - PI + 0.1 + 0.3];
        unwrap_mod_pi(&mut v);
        assert_relative_eq!(v[2], 1.5, epsilon = 1e-14);
        assert_relative_eq!(v[3], 1.9, epsilon = 1e-14);
    }

    #[test]
    fn curve_phase_tracks_transfer_phase() {
        let cfg = SlabConfig::reference();
        let grid = crate::curve::linspace(-0.999, -0.001, 300).unwrap();
        let curve = transmission_curve(&cfg, &grid).unwrap();
        let phi = curve.real("phi").unwrap();
        for (&eps, &p) in grid.iter().zip(phi) {
            let direct = transfer_amplitudes(eps, &cfg).unwrap().phase;
            assert!((p - direct).abs() < 1e-9, "eps = {eps}: {p} vs {direct}");
        }
    }

    #[test]
    fn superposition_examples() {
        let line = FbwLine::new(-0.5, 0.02).unwrap();
        assert_eq!(fbw_superposition(-0.5, &[line], 1), 1.0);
        assert_relative_eq!(fbw_superposition(-0.49, &[line], 1), 0.5, epsilon = 1e-14);
        assert_relative_eq!(fbw_superposition(-0.51, &[line], 1), 0.5, epsilon = 1e-14);
    }

    proptest! {
        #[test]
        fn unitarity(eps in -0.999f64..-0.001) {
            let amp = transfer_amplitudes(eps, &SlabConfig::reference()).unwrap();
            prop_assert!((amp.reflection() + amp.transmission() - 1.0).abs() <= 1e-12);
        }

        #[test]
        fn phase_agrees_with_closed_form_mod_pi(eps in -0.999f64..-0.001, a in 1.0f64..80.0, u0 in 1.05f64..2.5) {
            let cfg = SlabConfig::new(a, u0).unwrap();
            let lifted = transfer_amplitudes(eps, &cfg).unwrap().phase;
            let closed = closed_form_phase(eps, &cfg).unwrap();
            let turns = (lifted - closed) / PI;
            prop_assert!((turns - turns.round()).abs() < 1e-9);
            let k = (2.0 * (eps + 1.0)).sqrt();
            prop_assert!((lifted - continuous_phase_at(k, &cfg)).abs() < 1e-9);
        }
    }
}
