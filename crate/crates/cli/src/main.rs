//! `leaky`: resonances, transmission, shifts and propagation of leaky slab modes.
//!
//! Every subcommand writes a table as CSV (default) or JSON. Exit status is 0
//! on success, 2 for invalid input and 3 when a numerical step fails.

mod commands;
mod grid;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use grid::GridSpec;
use output::OutputArgs;

#[derive(Debug, Parser)]
#[command(
    name = "leaky",
    version,
    about = "Leaky modes of a dielectric slab waveguide"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Leaky-mode eigenvalues (closed form, optionally refined)
    Resonances(ResonancesArgs),
    /// Transmission coefficient, amplitudes and phase over an eps_R grid
    Transmission(TransmissionArgs),
    /// Longitudinal shift over an eps_R grid or a slab-width sweep
    Shift(ShiftArgs),
    /// Lorentzian lineshape, Fourier coefficient or survival law of one line
    Fbw(FbwArgs),
    /// Propagated field of one leaky mode on an (x, z) grid
    ModeField(ModeFieldArgs),
    /// Finite-difference beam propagation with core-power decay fit
    Propagate(PropagateArgs),
}

#[derive(Debug, Clone, Copy, Args, Serialize)]
pub struct SlabArgs {
    /// Slab half width k0*a
    #[arg(long, default_value_t = 30.0)]
    pub k0a: f64,

    /// Core refractive index (cladding index is 1)
    #[arg(long, default_value_t = 1.5)]
    pub u0: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct ResonancesArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub slab: SlabArgs,

    /// Refine each closed-form estimate to an exact root
    #[arg(long)]
    pub refine: bool,

    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct TransmissionArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub slab: SlabArgs,

    /// eps_R grid as start:stop:count
    #[arg(long, allow_hyphen_values = true, default_value = "-0.999:-0.001:4096")]
    pub eps: GridSpec,

    /// Also tabulate the sum of this many resonance lineshapes
    #[arg(long)]
    pub fbw_terms: Option<usize>,

    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct ShiftArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub slab: SlabArgs,

    /// eps_R grid as start:stop:count [default: -0.999:-0.001:4096]
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["eps_fixed", "k0a_sweep"])]
    pub eps: Option<GridSpec>,

    /// Fixed eps_R for a width sweep
    #[arg(long, allow_hyphen_values = true, requires = "k0a_sweep")]
    pub eps_fixed: Option<f64>,

    /// k0*a grid for a width sweep at --eps-fixed
    #[arg(long, requires = "eps_fixed")]
    pub k0a_sweep: Option<GridSpec>,

    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct FbwArgs {
    /// Line center E0
    #[arg(long, allow_hyphen_values = true)]
    pub e0: f64,

    /// Full width Gamma
    #[arg(long)]
    pub gamma: f64,

    /// Energy grid (or time grid with --survival) as start:stop:count
    #[arg(long, allow_hyphen_values = true)]
    pub grid: GridSpec,

    /// Tabulate the survival amplitude over a time grid instead
    #[arg(long)]
    pub survival: bool,

    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Part {
    Re,
    Im,
    Abs2,
}

#[derive(Debug, Args, Serialize)]
pub struct ModeFieldArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub slab: SlabArgs,

    /// Mode index
    #[arg(long)]
    pub m: u32,

    /// Transverse grid [default: -2A:2A:801]
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<GridSpec>,

    /// Axial grid
    #[arg(long, default_value = "0:200:401")]
    pub z: GridSpec,

    /// Field component to write
    #[arg(long, value_enum, default_value_t = Part::Re)]
    pub part: Part,

    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kinetic {
    /// Kinetic factor follows the local index
    Local,
    /// Kinetic factor fixed to the reference index
    Reference,
}

#[derive(Debug, Args, Serialize)]
pub struct PropagateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub slab: SlabArgs,

    /// Launch the tapered refined leaky mode with this index
    #[arg(long, group = "source")]
    pub m: Option<u32>,

    /// Launch a Gaussian beam
    #[arg(long, group = "source")]
    pub gaussian: bool,

    /// Launch the initial field stored in a JSON file written by this command
    #[arg(long, group = "source")]
    pub init: Option<PathBuf>,

    /// Gaussian center
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub beam_center: f64,

    /// Gaussian waist [default: k0a]
    #[arg(long)]
    pub beam_waist: Option<f64>,

    /// Gaussian transverse wavenumber
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub beam_kx: f64,

    /// Propagation distance [default: 5/Gamma for a mode, 100 otherwise]
    #[arg(long)]
    pub z_max: Option<f64>,

    /// Half width X of the transverse domain [default: 8A]
    #[arg(long)]
    pub half_domain: Option<f64>,

    /// Transverse grid points
    #[arg(long, default_value_t = 4097)]
    pub nx: usize,

    /// Axial step
    #[arg(long, default_value_t = 0.05)]
    pub dz: f64,

    /// Absorbing layer width [default: X/4]
    #[arg(long)]
    pub absorber_width: Option<f64>,

    /// Absorbing layer strength
    #[arg(long, default_value_t = 0.2)]
    pub absorber_strength: f64,

    /// Kinetic term
    #[arg(long, value_enum, default_value_t = Kinetic::Local)]
    pub kinetic: Kinetic,

    /// Number of power samples recorded along z
    #[arg(long, default_value_t = 2000)]
    pub samples: usize,

    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Resonances(a) => commands::resonances(&a),
        Command::Transmission(a) => commands::transmission(&a),
        Command::Shift(a) => commands::shift(&a),
        Command::Fbw(a) => commands::fbw(&a),
        Command::ModeField(a) => commands::mode_field(&a),
        Command::Propagate(a) => commands::propagate(&a),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(commands::exit_code(&err))
        }
    }
}
