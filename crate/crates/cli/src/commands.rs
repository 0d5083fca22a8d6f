//! Subcommand implementations.

use std::fs;
use std::process::ExitCode;

use anyhow::{Context, Result};
use leaky_core::bpm::{
    fit_decay, gaussian_beam, tapered_mode, BpmConfig, KineticModel, Propagator,
};
use leaky_core::scattering::{fbw_superposition, transfer_amplitudes};
use leaky_core::{
    approximate_resonances, mode_profile, propagate_mode, refined_resonances, shift_curve,
    transmission_curve, Error, FbwLine, Method, Resonance, SlabConfig,
};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::grid::GridSpec;
use crate::output::{Report, Table};
use crate::{
    FbwArgs, Kinetic, ModeFieldArgs, Part, PropagateArgs, ResonancesArgs, ShiftArgs, SlabArgs,
    TransmissionArgs,
};

const VALIDATION: u8 = 2;
const NUMERICAL: u8 = 3;

/// Maps an error to the process exit status.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    if let Some(e) = err.downcast_ref::<Error>() {
        return match e {
            Error::InvalidConfig { .. }
            | Error::Domain { .. }
            | Error::Grid(_)
            | Error::PacketSupport { .. } => VALIDATION,
            Error::Pole
            | Error::NoConvergence { .. }
            | Error::RootJumped { .. }
            | Error::MatchingFailure { .. }
            | Error::Instability { .. }
            | Error::NonExponential { .. }
            | Error::PeakAmbiguity { .. } => NUMERICAL,
        };
    }
    if err.downcast_ref::<serde_json::Error>().is_some() {
        return VALIDATION;
    }
    1
}

impl SlabArgs {
    fn config(&self) -> Result<SlabConfig> {
        Ok(SlabConfig::new(self.k0a, self.u0)?)
    }
}

fn method_name(m: Method) -> String {
    match m {
        Method::Approximate => "approximate".into(),
        Method::Refined => "refined".into(),
    }
}

pub fn resonances(args: &ResonancesArgs) -> Result<ExitCode> {
    let cfg = args.slab.config()?;
    let list = if args.refine {
        refined_resonances(&cfg)?
    } else {
        approximate_resonances(&cfg)
    };
    let table = Table::new()
        .int("m", list.iter().map(|r| r.mode_index as i64).collect())
        .real("eps_R", list.iter().map(|r| r.eigenvalue.re()).collect())
        .real(
            "half_gamma",
            list.iter().map(|r| r.eigenvalue.half_width()).collect(),
        )
        .real("residual", list.iter().map(|r| r.residual).collect())
        .text(
            "method",
            list.iter().map(|r| method_name(r.method)).collect(),
        );
    let report = Report::new("resonances", args, table)?.note("modes", list.len());
    report.emit(&args.output)?;
    if list.is_empty() {
        eprintln!(
            "warning: no leaky modes: no integer m satisfies sqrt(2 U0 (U0-1)) < m pi / (2 k0a) < sqrt(2) U0 for k0a = {}, U0 = {}",
            args.slab.k0a, args.slab.u0
        );
        return Ok(ExitCode::from(VALIDATION));
    }
    Ok(ExitCode::SUCCESS)
}

pub fn transmission(args: &TransmissionArgs) -> Result<ExitCode> {
    let cfg = args.slab.config()?;
    let grid = args.eps.points()?;
    let curve = transmission_curve(&cfg, &grid)?;
    let amps = grid
        .iter()
        .map(|&e| transfer_amplitudes(e, &cfg))
        .collect::<leaky_core::Result<Vec<_>>>()?;
    let r: Vec<Complex64> = amps.iter().map(|a| a.r).collect();
    let t: Vec<Complex64> = amps.iter().map(|a| a.t).collect();
    let mut table = Table::from_curve(&curve).complex("r", &r).complex("t", &t);
    if let Some(n) = args.fbw_terms {
        if n == 0 {
            return Err(Error::InvalidConfig {
                field: "fbw-terms",
                reason: "needs at least one term".into(),
            }
            .into());
        }
        let lines: Vec<FbwLine> = approximate_resonances(&cfg)
            .iter()
            .map(Resonance::line)
            .collect();
        let omega = grid
            .iter()
            .map(|&e| fbw_superposition(e, &lines, n))
            .collect();
        table = table.real(&format!("omega_{}", n.min(lines.len())), omega);
    }
    Report::new("transmission", args, table)?.emit(&args.output)?;
    Ok(ExitCode::SUCCESS)
}

pub fn shift(args: &ShiftArgs) -> Result<ExitCode> {
    let table = match (args.eps_fixed, args.k0a_sweep) {
        (Some(eps), Some(widths)) => {
            let curve = leaky_core::shift::width_sweep(eps, args.slab.u0, &widths.points()?)?;
            Table::from_curve(&curve)
        }
        _ => {
            let cfg = args.slab.config()?;
            let grid = args
                .eps
                .unwrap_or(GridSpec::new(-0.999, -0.001, 4096))
                .points()?;
            Table::from_curve(&shift_curve(&cfg, &grid)?)
        }
    };
    Report::new("shift", args, table)?.emit(&args.output)?;
    Ok(ExitCode::SUCCESS)
}

pub fn fbw(args: &FbwArgs) -> Result<ExitCode> {
    let line = FbwLine::new(args.e0, args.gamma)?;
    let grid = args.grid.points()?;
    let table = if args.survival {
        let amp = grid
            .iter()
            .map(|&t| line.survival_amplitude(t))
            .collect::<leaky_core::Result<Vec<_>>>()?;
        let prob = grid
            .iter()
            .map(|&t| line.survival_probability(t))
            .collect::<leaky_core::Result<Vec<_>>>()?;
        Table::new()
            .real("t", grid.clone())
            .complex("T", &amp)
            .real("survival", prob)
    } else {
        let c: Vec<Complex64> = grid.iter().map(|&e| line.fourier_coefficient(e)).collect();
        Table::new()
            .real("E", grid.clone())
            .real("omega", grid.iter().map(|&e| line.lineshape(e)).collect())
            .complex("C", &c)
    };
    let mut report = Report::new("fbw", args, table)?;
    report = match line.lifetime().finite() {
        Some(tau) => report.note("lifetime", tau),
        None => report.note("lifetime", "stable"),
    };
    report.emit(&args.output)?;
    Ok(ExitCode::SUCCESS)
}

fn refined_mode(cfg: &SlabConfig, m: u32) -> Result<Resonance> {
    let range = leaky_core::mode_index_range(cfg);
    if !range.contains(m) {
        return Err(Error::InvalidConfig {
            field: "m",
            reason: if range.is_empty() {
                "the slab supports no leaky modes".into()
            } else {
                format!("must lie in [{}, {}], got {m}", range.first, range.last)
            },
        }
        .into());
    }
    let seed = approximate_resonances(cfg)
        .into_iter()
        .find(|r| r.mode_index == m)
        .expect("index inside the admissible range");
    Ok(leaky_core::refine_resonance(&seed, cfg)?)
}

pub fn mode_field(args: &ModeFieldArgs) -> Result<ExitCode> {
    let cfg = args.slab.config()?;
    let res = refined_mode(&cfg, args.m)?;
    let field = mode_profile(&res, &cfg)?;
    let a = cfg.half_width();
    let x_spec = args.x.unwrap_or(GridSpec::new(-2.0 * a, 2.0 * a, 801));
    let (x, z) = (x_spec.points()?, args.z.points()?);
    let grid = propagate_mode(&field, &x, &z)?;

    let rows = x.len() * z.len();
    let mut zs = Vec::with_capacity(rows);
    let mut xs = Vec::with_capacity(rows);
    let mut vals = Vec::with_capacity(rows);
    for (iz, &zv) in z.iter().enumerate() {
        for (ix, &xv) in x.iter().enumerate() {
            let e = grid.at(iz, ix);
            zs.push(zv);
            xs.push(xv);
            vals.push(match args.part {
                Part::Re => e.re,
                Part::Im => e.im,
                Part::Abs2 => e.norm_sqr(),
            });
        }
    }
    let label = match args.part {
        Part::Re => "re_E",
        Part::Im => "im_E",
        Part::Abs2 => "abs2_E",
    };
    let table = Table::new().real("z", zs).real("x", xs).real(label, vals);
    Report::new("mode-field", args, table)?
        .note("x grid", x_spec)
        .note("eps_R", res.eigenvalue.re())
        .note("half_gamma", res.eigenvalue.half_width())
        .emit(&args.output)?;
    Ok(ExitCode::SUCCESS)
}

fn column_json(x: &[f64], e: &[Complex64]) -> Value {
    json!({
        "x": x,
        "re_E": e.iter().map(|c| c.re).collect::<Vec<_>>(),
        "im_E": e.iter().map(|c| c.im).collect::<Vec<_>>(),
    })
}

fn read_initial(path: &std::path::Path, grid: &[f64], spacing: f64) -> Result<Vec<Complex64>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let doc: Value =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let column = doc.get("initial").unwrap_or(&doc);
    let array = |key: &str| -> Result<Vec<f64>> {
        let values =
            column
                .get(key)
                .and_then(Value::as_array)
                .ok_or_else(|| Error::InvalidConfig {
                    field: "init",
                    reason: format!("missing numeric array '{key}'"),
                })?;
        values
            .iter()
            .map(|v| {
                v.as_f64().ok_or_else(|| {
                    Error::InvalidConfig {
                        field: "init",
                        reason: format!("non-numeric entry in '{key}'"),
                    }
                    .into()
                })
            })
            .collect()
    };
    let (x, re, im) = (array("x")?, array("re_E")?, array("im_E")?);
    if x.len() != grid.len() || re.len() != grid.len() || im.len() != grid.len() {
        return Err(Error::InvalidConfig {
            field: "init",
            reason: format!("field has {} points, the grid has {}", x.len(), grid.len()),
        }
        .into());
    }
    if x.iter()
        .zip(grid)
        .any(|(a, b)| (a - b).abs() > 1e-9 * spacing)
    {
        return Err(Error::InvalidConfig {
            field: "init",
            reason: "stored x grid differs from the propagation grid".into(),
        }
        .into());
    }
    Ok(re
        .into_iter()
        .zip(im)
        .map(|(r, i)| Complex64::new(r, i))
        .collect())
}

pub fn propagate(args: &PropagateArgs) -> Result<ExitCode> {
    let slab = args.slab.config()?;
    let mut cfg = BpmConfig::for_slab(slab);
    if let Some(x) = args.half_domain {
        cfg.half_domain = x;
    }
    cfg.absorber_width = args.absorber_width.unwrap_or(cfg.half_domain / 4.0);
    cfg.nx = args.nx;
    cfg.dz = args.dz;
    cfg.absorber_strength = args.absorber_strength;
    cfg.kinetic = match args.kinetic {
        Kinetic::Local => KineticModel::LocalIndex,
        Kinetic::Reference => KineticModel::Reference(cfg.reference_index),
    };
    let prop = Propagator::new(cfg)?;
    let grid = prop.grid().to_vec();

    let (init, default_z) = match (args.m, args.gaussian, &args.init) {
        (Some(m), _, _) => {
            let res = refined_mode(&slab, m)?;
            let field = mode_profile(&res, &slab)?;
            (tapered_mode(&field, &grid), 5.0 / res.eigenvalue.width())
        }
        (None, true, _) => {
            let waist = args.beam_waist.unwrap_or(slab.half_width());
            if waist.is_nan() || waist <= 0.0 {
                return Err(Error::InvalidConfig {
                    field: "beam-waist",
                    reason: format!("must be positive, got {waist}"),
                }
                .into());
            }
            (
                gaussian_beam(&grid, args.beam_center, waist, args.beam_kx),
                100.0,
            )
        }
        (None, false, Some(path)) => (read_initial(path, &grid, cfg.spacing())?, 100.0),
        (None, false, None) => {
            return Err(Error::InvalidConfig {
                field: "source",
                reason: "one of --m, --gaussian or --init is required".into(),
            }
            .into())
        }
    };
    let z_max = args.z_max.unwrap_or(default_z);
    if !(z_max > 0.0 && z_max.is_finite()) {
        return Err(Error::InvalidConfig {
            field: "z-max",
            reason: format!("must be positive, got {z_max}"),
        }
        .into());
    }
    if args.samples < 3 {
        return Err(Error::InvalidConfig {
            field: "samples",
            reason: "needs at least 3 samples".into(),
        }
        .into());
    }

    let steps = ((z_max / cfg.dz).round() as usize).max(1);
    let every = (steps / args.samples).max(1);
    let mut z = Vec::new();
    let mut power = Vec::new();
    let mut first_step = Vec::new();
    prop.run(&init, steps, |i, col| {
        if i == 1 {
            first_step = col.to_vec();
        }
        if i % every == 0 {
            z.push(i as f64 * cfg.dz);
            power.push(prop.power_within(col, cfg.monitor_half_width));
        }
    })?;

    let table = Table::new()
        .real("z", z.clone())
        .real("P_core", power.clone());
    let mut report = Report::new("propagate", args, table)?
        .note("z_max", z_max)
        .note("steps", steps);
    let decay = match fit_decay(z, power, z_max) {
        Ok(fit) => {
            report = report
                .note("decay_rate", fit.rate)
                .note("r_squared", fit.r_squared);
            json!({ "rate": fit.rate, "r_squared": fit.r_squared, "residual_rms": fit.residual_rms })
        }
        Err(e) => {
            eprintln!("warning: no decay rate: {e}");
            report = report.note("decay_rate", "none");
            Value::Null
        }
    };
    report.extra.insert("decay".into(), decay);
    report
        .extra
        .insert("initial".into(), column_json(&grid, &init));
    report
        .extra
        .insert("first_step".into(), column_json(&grid, &first_step));
    report.emit(&args.output)?;
    Ok(ExitCode::SUCCESS)
}
