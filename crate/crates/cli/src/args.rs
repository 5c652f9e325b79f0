use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use diatherm::IndexForm;

#[derive(Debug, Parser)]
#[command(
    name = "diatherm",
    version,
    about = "Bound states and vibrational thermodynamics of diatomic molecules"
)]
pub struct Cli {
    /// Catalog file merged over the built-in molecules.
    #[arg(long, global = true, env = "DIATHERM_CATALOG")]
    pub catalog: Option<PathBuf>,

    /// Output file (or directory, for per-molecule output). Defaults to stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Log verbosity: -v info, -vv debug.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Form {
    Published,
    Exact,
}

impl From<Form> for IndexForm {
    fn from(f: Form) -> Self {
        match f {
            Form::Published => IndexForm::Published,
            Form::Exact => IndexForm::Exact,
        }
    }
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Molecule name from the catalog.
    #[arg(value_name = "MOLECULE")]
    pub name: Option<String>,

    #[arg(long = "molecule", conflicts_with = "name", hide_short_help = true)]
    pub molecule_flag: Option<String>,

    /// Deformation q >= 1; comma-separated for several.
    #[arg(long, value_delimiter = ',', default_value = "1.0")]
    pub q: Vec<f64>,

    /// Yukawa strength c >= 0, eV*A.
    #[arg(long, default_value_t = 0.0)]
    pub c: f64,

    /// Index form of eta2.
    #[arg(long = "index-form", value_enum, default_value = "published")]
    pub form: Form,
}

impl ModelArgs {
    pub fn molecule(&self) -> Option<&str> {
        self.name.as_deref().or(self.molecule_flag.as_deref())
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Energy levels E(n, l).
    Spectrum(SpectrumArgs),
    /// lambda_max per molecule against the published column.
    Lambdamax(LambdamaxArgs),
    /// Partition function and thermodynamic functions over a beta or T grid.
    Thermo(ThermoArgs),
    /// Energies against a swept parameter.
    Sweep(SweepArgs),
    /// Normalized radial wave function.
    Wavefunction(WavefunctionArgs),
    /// Verification suite; exit code 1 on any failed check.
    Validate(ValidateArgs),
    /// Fit c to the published energy grid.
    Calibrate(CalibrateArgs),
    /// Literal-formula and normalization diagnostics.
    Diagnostics(DiagnosticsArgs),
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub model: ModelArgs,

    /// Angular momenta, comma-separated.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub l: Vec<u32>,

    /// Levels: `a..b` (inclusive), `k`, or a comma list. Defaults to 0..lambda_max.
    #[arg(long)]
    pub n: Option<String>,

    /// Full six-molecule grid with deviations from the published values.
    #[arg(long)]
    pub table2: bool,
}

#[derive(Debug, Args)]
pub struct LambdamaxArgs {
    /// Molecules (default: whole catalog).
    pub molecules: Vec<String>,

    #[arg(long, default_value = "1.0")]
    pub q: f64,

    #[arg(long, default_value_t = 0.0)]
    pub c: f64,

    #[arg(long, default_value_t = 0)]
    pub l: u32,

    #[arg(long = "index-form", value_enum, default_value = "published")]
    pub form: Form,
}

#[derive(Debug, Args)]
pub struct ThermoArgs {
    /// Molecules; several (or --all) write one file per molecule into --out.
    pub molecules: Vec<String>,

    #[arg(
        long = "molecule",
        conflicts_with = "molecules",
        hide_short_help = true
    )]
    pub molecule_flag: Option<String>,

    /// Every catalog molecule.
    #[arg(long, conflicts_with_all = ["molecules", "molecule_flag"])]
    pub all: bool,

    #[arg(long, value_delimiter = ',', default_value = "1.0")]
    pub q: Vec<f64>,

    #[arg(long, default_value_t = 0.0)]
    pub c: f64,

    #[arg(long, default_value_t = 0)]
    pub l: u32,

    #[arg(long = "index-form", value_enum, default_value = "published")]
    pub form: Form,

    /// Inverse temperature range, 1/eV (log-spaced).
    #[arg(long = "beta-min")]
    pub beta_min: Option<f64>,
    #[arg(long = "beta-max")]
    pub beta_max: Option<f64>,
    #[arg(long = "beta-steps")]
    pub beta_steps: Option<usize>,

    /// Temperature range, K (log-spaced).
    #[arg(long = "temp-min")]
    pub temp_min: Option<f64>,
    #[arg(long = "temp-max")]
    pub temp_max: Option<f64>,
    #[arg(long = "temp-steps")]
    pub temp_steps: Option<usize>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SweepParam {
    Alpha,
    Q,
    #[value(name = "D_e", alias = "de")]
    De,
    C,
}

impl SweepParam {
    pub fn column(self) -> &'static str {
        match self {
            SweepParam::Alpha => "alpha",
            SweepParam::Q => "q",
            SweepParam::De => "D_e",
            SweepParam::C => "c",
        }
    }
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub model: ModelArgs,

    /// Swept parameter.
    #[arg(long, value_enum)]
    pub param: SweepParam,

    #[arg(long)]
    pub from: f64,

    #[arg(long)]
    pub to: f64,

    /// Number of values, endpoints included; 0 gives an empty table.
    #[arg(long, default_value_t = 50)]
    pub steps: usize,

    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub l: Vec<u32>,

    #[arg(long, default_value = "0..3")]
    pub n: String,
}

#[derive(Debug, Args)]
pub struct WavefunctionArgs {
    #[command(flatten)]
    pub model: ModelArgs,

    #[arg(long, default_value_t = 0)]
    pub n: u32,

    #[arg(long, default_value_t = 0)]
    pub l: u32,

    /// Midpoint tolerance of the adaptive grid, relative to the peak.
    #[arg(long, default_value_t = 1e-5)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(value_name = "MOLECULE", default_value = "H2")]
    pub name: String,

    #[arg(long, default_value = "1.0")]
    pub q: f64,

    #[arg(long, default_value_t = 0.0)]
    pub c: f64,

    /// The closed form is exact for the approximated Hamiltonian only with the exact index.
    #[arg(long = "index-form", value_enum, default_value = "exact")]
    pub form: Form,

    /// Use the literal Λ = α·ħ²/2m (negative control).
    #[arg(long = "debug-literal-lambda", hide = true)]
    pub literal_lambda: bool,
}

#[derive(Debug, Args)]
pub struct CalibrateArgs {
    /// Molecules (default: every molecule with published energies).
    pub molecules: Vec<String>,

    /// Evaluate at this c instead of fitting.
    #[arg(long)]
    pub c: Option<f64>,

    #[arg(long = "index-form", value_enum, default_value = "published")]
    pub form: Form,
}

#[derive(Debug, Args)]
pub struct DiagnosticsArgs {
    /// Molecules (default: whole catalog).
    pub molecules: Vec<String>,

    #[arg(long, default_value = "1.0")]
    pub q: f64,

    #[arg(long, default_value_t = 0.0)]
    pub c: f64,
}
