//! Leaky modes of a symmetric dielectric slab waveguide, treated as the
//! resonances of a one-dimensional square well.
//!
//! Everything is dimensionless: lengths in units of `1/k0`, wavenumbers in
//! units of `k0`, and the eigenvalue `eps` plays the role of an energy with the
//! axial distance `k0 z` as time.

// `!(x > 0.0)` style guards are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bpm;
pub mod curve;
pub mod error;
pub mod fbw;
pub mod fields;
pub mod quadrature;
pub mod resonances;
pub mod scattering;
pub mod shift;
pub mod slab;

pub use curve::{linspace, Curve, Samples};
pub use error::{Error, Result};
pub use fbw::{FbwLine, Lifetime};
pub use fields::{mode_profile, propagate_mode, FieldGrid, ModeField};
pub use resonances::{
    approximate_resonances, mode_index_range, refine_resonance, refined_resonances, Method,
    ModeRange, Resonance,
};
pub use scattering::{transfer_amplitudes, transmission_curve, ScatteringAmplitudes};
pub use shift::{longitudinal_shift, shift_curve, wavepacket_shift, ShiftSample};
pub use slab::{Band, ComplexEigenvalue, SlabConfig, Wavenumbers};
