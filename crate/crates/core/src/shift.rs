//! Longitudinal shifts of packets transmitted through the slab.
//!
//! The axial analogue of the quantum phase time. For a Fourier component of
//! cladding wavenumber `K` the stationary-phase condition gives
//!
//! ```text
//! z_in = -A / K
//! z_t  = (-A + dphi/dK) / K
//! k0 dz = z_t - z_in = (dphi/dK) / K
//! ```
//!
//! With `phi` measured from the `-2KA` plane-wave offset, an empty slab
//! (`U0 -> 1`) gives `dphi/dK = 2A` and the shift reduces to the free
//! traversal `2A/K`; [`ShiftSample::excess_over_free`] is the part due to the
//! slab.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::curve::{check_increasing, local_maxima, Curve};
use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre;
use crate::scattering::amplitudes_at;
use crate::slab::SlabConfig;

const SQRT2: f64 = std::f64::consts::SQRT_2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShiftSample {
    pub eps_r: f64,
    /// `k0 * dz`.
    pub k0_delta_z: f64,
    pub z_in: f64,
    pub z_t: f64,
}

impl ShiftSample {
    pub fn clad_wavenumber(&self) -> f64 {
        (2.0 * (self.eps_r + 1.0)).sqrt()
    }

    /// Shift minus the free traversal `2A/K` of the slab region.
    pub fn excess_over_free(&self, cfg: &SlabConfig) -> f64 {
        self.k0_delta_z - 2.0 * cfg.half_width() / self.clad_wavenumber()
    }
}

fn radiation_k(eps_r: f64) -> Result<f64> {
    if !(eps_r > -1.0 && eps_r < 0.0) {
        return Err(Error::Domain {
            quantity: "eps_R",
            value: eps_r,
            domain: "(-1, 0) (radiation band)",
        });
    }
    Ok((2.0 * (eps_r + 1.0)).sqrt())
}

/// `dphi/dK` by differentiating the closed-form phase.
///
/// With `theta = 2QA` and `g = (K^2 + Q^2)/(2KQ)`,
/// `dphi/dK = (g theta' + g' sin theta cos theta) / (cos^2 theta + g^2 sin^2 theta)`,
/// which is regular where `sin theta = 0`.
pub fn phase_derivative(eps_r: f64, cfg: &SlabConfig) -> Result<f64> {
    Ok(phase_derivative_at(radiation_k(eps_r)?, cfg))
}

/// [`phase_derivative`] keyed by `K`.
pub fn phase_derivative_at(k: f64, cfg: &SlabConfig) -> f64 {
    let a = cfg.half_width();
    let u0 = cfg.core_index();
    let q = (u0 * (k * k + 2.0 * (u0 - 1.0))).sqrt();
    let dq = u0 * k / q;
    let theta = 2.0 * q * a;
    let dtheta = 2.0 * a * dq;
    let g = (k * k + q * q) / (2.0 * k * q);
    let dg = 0.5 / q - k * dq / (2.0 * q * q) + dq / (2.0 * k) - q / (2.0 * k * k);
    let (s, c) = theta.sin_cos();
    (g * dtheta + dg * s * c) / (c * c + g * g * s * s)
}

pub fn longitudinal_shift(eps_r: f64, cfg: &SlabConfig) -> Result<ShiftSample> {
    let k = radiation_k(eps_r)?;
    let dphi = phase_derivative_at(k, cfg);
    let a = cfg.half_width();
    let z_in = -a / k;
    let z_t = (-a + dphi) / k;
    Ok(ShiftSample {
        eps_r,
        k0_delta_z: dphi / k,
        z_in,
        z_t,
    })
}

/// Shift, entry and exit coordinates over an `eps_R` grid.
pub fn shift_curve(cfg: &SlabConfig, eps_grid: &[f64]) -> Result<Curve> {
    check_increasing(eps_grid)?;
    let samples = eps_grid
        .iter()
        .map(|&e| longitudinal_shift(e, cfg))
        .collect::<Result<Vec<_>>>()?;
    Curve::new("eps_R", eps_grid.to_vec())?
        .with_real("k0_delta_z", samples.iter().map(|s| s.k0_delta_z).collect())?
        .with_real("z_in", samples.iter().map(|s| s.z_in).collect())?
        .with_real("z_t", samples.iter().map(|s| s.z_t).collect())
}

/// Shift at fixed `eps_R` as the slab half width `k0 a` varies.
pub fn width_sweep(eps_r: f64, core_index: f64, widths: &[f64]) -> Result<Curve> {
    check_increasing(widths)?;
    let values = widths
        .iter()
        .map(|&a| Ok(longitudinal_shift(eps_r, &SlabConfig::new(a, core_index)?)?.k0_delta_z))
        .collect::<Result<Vec<_>>>()?;
    Curve::new("k0a", widths.to_vec())?.with_real("k0_delta_z", values)
}

/// Number of Gauss-Legendre nodes used for packet synthesis.
pub const PACKET_NODES: usize = 2400;
/// Half extent of the packet support in units of its width.
pub const PACKET_SPAN: f64 = 6.0;
/// Secondary maxima above this fraction of the main peak make the arrival ambiguous.
pub const AMBIGUITY_RATIO: f64 = 0.5;

struct Packet {
    k: Vec<f64>,
    weight: Vec<f64>,
}

impl Packet {
    fn gaussian(center: f64, sigma: f64) -> Self {
        let (x, w) = gauss_legendre(PACKET_NODES);
        let half = PACKET_SPAN * sigma;
        let k: Vec<f64> = x.iter().map(|x| center + half * x).collect();
        let weight = k
            .iter()
            .zip(&w)
            .map(|(k, w)| w * half * (-(k - center).powi(2) / (2.0 * sigma * sigma)).exp())
            .collect();
        Packet { k, weight }
    }

    /// `|E(x, z)|^2` with `E = sum f(K) amp(K) exp(i (K x - eps(K) z))`.
    fn intensity(&self, amp: &[Complex64], x: f64, z: f64) -> f64 {
        self.k
            .iter()
            .zip(&self.weight)
            .zip(amp)
            .map(|((&k, &w), &a)| {
                let eps = k * k / 2.0 - 1.0;
                w * a * Complex64::from_polar(1.0, k * x - eps * z)
            })
            .sum::<Complex64>()
            .norm_sqr()
    }

    /// Axial coordinate of the intensity maximum at fixed `x`.
    fn arrival(&self, amp: &[Complex64], x: f64, z_lo: f64, z_hi: f64, scale: f64) -> Result<f64> {
        let coarse_step = scale / 10.0;
        let n = ((z_hi - z_lo) / coarse_step).ceil() as usize + 1;
        let zs: Vec<f64> = (0..n).map(|j| z_lo + coarse_step * j as f64).collect();
        let vals: Vec<f64> = zs.iter().map(|&z| self.intensity(amp, x, z)).collect();
        let (imax, &vmax) = vals
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .expect("non-empty scan");
        let secondary = local_maxima(&vals)
            .into_iter()
            .filter(|&i| i.abs_diff(imax) > 10)
            .map(|i| vals[i])
            .fold(0.0, f64::max);
        if secondary > AMBIGUITY_RATIO * vmax {
            return Err(Error::PeakAmbiguity {
                ratio: secondary / vmax,
            });
        }
        if imax == 0 || imax == n - 1 {
            return Err(Error::Grid(
                "packet peak at the edge of the scan window".into(),
            ));
        }
        let fine_step = scale / 400.0;
        let center = zs[imax];
        let m = 161;
        let fine: Vec<(f64, f64)> = (0..m)
            .map(|j| {
                let z = center + fine_step * (j as f64 - (m / 2) as f64);
                (z, self.intensity(amp, x, z))
            })
            .collect();
        let (j, _) = fine
            .iter()
            .enumerate()
            .max_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
            .expect("non-empty scan");
        let j = j.clamp(1, m - 2);
        let (y0, y1, y2) = (fine[j - 1].1, fine[j].1, fine[j + 1].1);
        let denom = y0 - 2.0 * y1 + y2;
        let offset = if denom != 0.0 {
            0.5 * (y0 - y2) / denom
        } else {
            0.0
        };
        Ok(fine[j].0 + offset * fine_step)
    }
}

/// Longitudinal shift measured on a synthesized Gaussian packet.
///
/// The transmitted packet `sum f(K) t(K) exp(i (Kx - eps(K) z))` is evaluated
/// at `x = 3A`, the axial position of its intensity peak is located and the
/// arrival of the same packet without slab is subtracted. Adding back the free
/// traversal `2A/K_c` gives a quantity comparable with
/// [`longitudinal_shift`], to which it converges as `sigma_k -> 0`.
pub fn wavepacket_shift(eps_center: f64, sigma_k: f64, cfg: &SlabConfig) -> Result<f64> {
    let kc = radiation_k(eps_center)?;
    if !(sigma_k > 0.0 && sigma_k <= kc / 6.0) {
        return Err(Error::Domain {
            quantity: "sigma_K",
            value: sigma_k,
            domain: "(0, K_c / 6]",
        });
    }
    let lower = kc - PACKET_SPAN * sigma_k;
    let upper = kc + PACKET_SPAN * sigma_k;
    if !(lower > 0.0 && upper < SQRT2) {
        return Err(Error::PacketSupport {
            lower,
            upper,
            cutoff: SQRT2,
        });
    }
    let a = cfg.half_width();
    let packet = Packet::gaussian(kc, sigma_k);
    let slab_amp = packet
        .k
        .iter()
        .map(|&k| Ok(amplitudes_at(k, cfg)?.t))
        .collect::<Result<Vec<_>>>()?;
    let free_amp = vec![Complex64::new(1.0, 0.0); packet.k.len()];

    let x_obs = 3.0 * a;
    let duration = 1.0 / (sigma_k * kc);
    let z_lo = (x_obs - 4.0 * a) / kc - 10.0 * duration;
    let z_hi = (x_obs + 40.0 * a) / kc + 10.0 * duration;
    let z_slab = packet.arrival(&slab_amp, x_obs, z_lo, z_hi, duration)?;
    let z_free = packet.arrival(&free_amp, x_obs, z_lo, z_hi, duration)?;
    Ok(z_slab - z_free + 2.0 * a / kc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_is_entry_to_exit() {
        let cfg = SlabConfig::reference();
        for eps in [-0.97, -0.5, -0.01] {
            let s = longitudinal_shift(eps, &cfg).unwrap();
            assert!((s.k0_delta_z - (s.z_t - s.z_in)).abs() < 1e-12 * s.k0_delta_z.abs().max(1.0));
        }
    }

    #[test]
    fn rejects_outside_band() {
        let cfg = SlabConfig::reference();
        assert!(phase_derivative(-1.0, &cfg).is_err());
        assert!(longitudinal_shift(0.0, &cfg).is_err());
        assert!(wavepacket_shift(0.2, 0.01, &cfg).is_err());
    }

    #[test]
    fn empty_slab_limit_is_free_traversal() {
        let cfg = SlabConfig::new(30.0, 1.0 + 1e-9).unwrap();
        for eps in [-0.9, -0.5, -0.1] {
            let s = longitudinal_shift(eps, &cfg).unwrap();
            assert!((phase_derivative(eps, &cfg).unwrap() - 60.0).abs() < 1e-6);
            assert!(s.excess_over_free(&cfg).abs() < 1e-6);
        }
    }

    #[test]
    fn derivative_matches_transfer_phase_difference() {
        let cfg = SlabConfig::reference();
        let h = 1e-5;
        for eps in [-0.95, -0.7835, -0.4, -0.05] {
            let k = (2.0 * (eps + 1.0f64)).sqrt();
            let phase = |k: f64| amplitudes_at(k, &cfg).unwrap().phase;
            let fd = (-phase(k + 2.0 * h) + 8.0 * phase(k + h) - 8.0 * phase(k - h)
                + phase(k - 2.0 * h))
                / (12.0 * h);
            assert!((fd - phase_derivative(eps, &cfg).unwrap()).abs() < 1e-6);
        }
    }

    #[test]
    fn packet_support_is_checked() {
        let cfg = SlabConfig::reference();
        // K_c = 0.1; sigma above K_c / 6
        assert!(matches!(
            wavepacket_shift(-0.995, 0.02, &cfg),
            Err(Error::Domain { .. })
        ));
        // near the cutoff the upper tail crosses sqrt 2
        assert!(matches!(
            wavepacket_shift(-0.01, 0.05, &cfg),
            Err(Error::PacketSupport { .. })
        ));
    }

    #[test]
    fn empty_slab_packet_has_no_excess() {
        let cfg = SlabConfig::new(30.0, 1.0 + 1e-12).unwrap();
        let eps = -0.6;
        let kc = (2.0 * (eps + 1.0f64)).sqrt();
        let measured = wavepacket_shift(eps, kc / 20.0, &cfg).unwrap();
        assert!((measured - 60.0 / kc).abs() < 1e-3, "{measured}");
    }
}
