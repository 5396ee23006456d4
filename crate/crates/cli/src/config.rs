use std::f64::consts::PI;
use std::path::PathBuf;

use anyhow::{bail, ensure, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use propagators::{BesselOrder, KernelSelector, PhysParams, QuadratureSpec};

#[derive(Debug, Parser)]
#[command(
    name = "propagators",
    version,
    about = "Propagators of the inverse-square oscillator, with spectral and grid cross-checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Residuals of the disentangling identities in the 2×2 representation.
    Identities(IdentitiesArgs),
    /// Tabulate a propagator over (t, x1, x2).
    Kernel(KernelArgs),
    /// Compare the closed-form half-line kernel with its Hankel integral.
    OracleCompare(OracleArgs),
    /// Evolve a Gaussian packet by kernel quadrature.
    Evolve(EvolveArgs),
    /// Quick run of every check at reduced size.
    Selftest(SelftestArgs),
}

#[derive(Debug, Clone, Args)]
pub struct PhysArgs {
    #[arg(long, default_value_t = 1.0)]
    pub hbar: f64,
    #[arg(long, default_value_t = 1.0)]
    pub mass: f64,
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    /// Bessel order n, with λ = ħ²(n² − 1/4).
    #[arg(long, conflicts_with = "lambda")]
    pub order_n: Option<f64>,
    /// Inverse-square coupling λ >= −ħ²/4.
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
}

impl PhysArgs {
    /// Whether the order was fixed by `--order-n` or `--lambda`.
    pub fn order_given(&self) -> bool {
        self.order_n.is_some() || self.lambda.is_some()
    }

    pub fn params(&self, default_n: f64) -> Result<PhysParams> {
        let p = match (self.order_n, self.lambda) {
            (_, Some(lambda)) => PhysParams::with_lambda(self.hbar, self.mass, self.omega, lambda)?,
            (n, None) => PhysParams::new(
                self.hbar,
                self.mass,
                self.omega,
                BesselOrder::new(n.unwrap_or(default_n))?,
            )?,
        };
        Ok(p)
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub tolerance: Option<f64>,
}

impl OutputArgs {
    pub fn tolerance(&self, default: f64) -> Result<f64> {
        let tol = self.tolerance.unwrap_or(default);
        ensure!(
            tol > 0.0 && tol.is_finite(),
            "--tolerance must be finite and > 0, got {tol}"
        );
        Ok(tol)
    }
}

#[derive(Debug, Clone, Args)]
pub struct TimeArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub t_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub t_steps: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct SpaceArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub x_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub x_max: Option<f64>,
    #[arg(long)]
    pub x_steps: Option<usize>,
}

/// `steps` evenly spaced values from `min` to `max`; a single step is `min`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Range {
    pub fn new(name: &str, min: f64, max: f64, steps: usize) -> Result<Self> {
        ensure!(
            min.is_finite() && max.is_finite(),
            "--{name}-min/--{name}-max must be finite"
        );
        ensure!(
            min <= max,
            "--{name}-min ({min}) exceeds --{name}-max ({max})"
        );
        ensure!(steps >= 1, "--{name}-steps must be >= 1");
        Ok(Range { min, max, steps })
    }

    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.min];
        }
        let h = (self.max - self.min) / (self.steps - 1) as f64;
        (0..self.steps)
            .map(|j| {
                if j + 1 == self.steps {
                    self.max
                } else {
                    self.min + h * j as f64
                }
            })
            .collect()
    }
}

impl TimeArgs {
    pub fn given(&self) -> bool {
        self.t_min.is_some() || self.t_max.is_some() || self.t_steps.is_some()
    }

    pub fn range(&self, default: (f64, f64, usize)) -> Result<Range> {
        Range::new(
            "t",
            self.t_min.unwrap_or(default.0),
            self.t_max.unwrap_or(default.1),
            self.t_steps.unwrap_or(default.2),
        )
    }
}

impl SpaceArgs {
    pub fn given(&self) -> bool {
        self.x_min.is_some() || self.x_max.is_some() || self.x_steps.is_some()
    }

    pub fn range(&self, default: (f64, f64, usize)) -> Result<Range> {
        Range::new(
            "x",
            self.x_min.unwrap_or(default.0),
            self.x_max.unwrap_or(default.1),
            self.x_steps.unwrap_or(default.2),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KernelChoice {
    /// The half-line kernel, with the oscillator when ω > 0.
    Auto,
    Free,
    Sho,
    RadialH0,
    RadialSho,
    /// Difference of line kernels at x2 and −x2.
    Image,
}

impl KernelChoice {
    /// The propagator selected, or `None` for the image formula.
    pub fn selector(self, params: &PhysParams) -> Option<KernelSelector> {
        match self {
            KernelChoice::Auto if params.omega() > 0.0 => Some(KernelSelector::RadialSho),
            KernelChoice::Auto => Some(KernelSelector::RadialH0),
            KernelChoice::Free => Some(KernelSelector::Free),
            KernelChoice::Sho => Some(KernelSelector::Sho),
            KernelChoice::RadialH0 => Some(KernelSelector::RadialH0),
            KernelChoice::RadialSho => Some(KernelSelector::RadialSho),
            KernelChoice::Image => None,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct IdentitiesArgs {
    #[command(flatten)]
    pub phys: PhysArgs,
    #[command(flatten)]
    pub time: TimeArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

impl IdentitiesArgs {
    /// Default sweep: 25 points over `|ωt| <= 0.45π`.
    pub fn time_range(&self, params: &PhysParams) -> Result<Range> {
        let reach = 0.45 * PI
            / if params.omega() > 0.0 {
                params.omega()
            } else {
                1.0
            };
        self.time.range((-reach, reach, 25))
    }
}

#[derive(Debug, Clone, Args)]
pub struct KernelArgs {
    #[command(flatten)]
    pub phys: PhysArgs,
    #[command(flatten)]
    pub time: TimeArgs,
    #[command(flatten)]
    pub space: SpaceArgs,
    #[arg(long, value_enum, default_value_t = KernelChoice::Auto)]
    pub kernel: KernelChoice,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub phys: PhysArgs,
    #[command(flatten)]
    pub time: TimeArgs,
    #[command(flatten)]
    pub space: SpaceArgs,
    #[command(flatten)]
    pub quadrature: QuadratureArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct QuadratureArgs {
    /// Regularization strengths, largest first; comma separated.
    #[arg(long, value_delimiter = ',')]
    pub epsilon_schedule: Option<Vec<f64>>,
    /// Use the largest ε alone, without extrapolating to ε = 0.
    #[arg(long, conflicts_with = "epsilon_schedule")]
    pub no_extrapolation: bool,
}

impl QuadratureArgs {
    pub fn spec(&self) -> Result<QuadratureSpec> {
        let mut spec = QuadratureSpec::default();
        if let Some(schedule) = &self.epsilon_schedule {
            spec.schedule = Some(schedule.clone());
        }
        if self.no_extrapolation {
            spec.extrapolation_levels = 1;
        }
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Debug, Clone, Args)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub phys: PhysArgs,
    /// Output frame times.
    #[command(flatten)]
    pub time: TimeArgs,
    /// Grid window; the half line starts at --x-min 0.
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub x_min: f64,
    #[arg(long, default_value_t = 20.0)]
    pub x_max: f64,
    /// Grid intervals.
    #[arg(long, default_value_t = 4000)]
    pub grid_points: usize,
    /// Crank–Nicolson time step of the grid oracle.
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    #[arg(long, value_enum, default_value_t = KernelChoice::Auto)]
    pub kernel: KernelChoice,
    #[arg(long, default_value_t = 5.0)]
    pub center: f64,
    #[arg(long, default_value_t = 0.5)]
    pub width: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub momentum: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
    pub amplitude: f64,
    /// Bound on the kernel-vs-grid and analytic L² distances.
    #[arg(long, default_value_t = 1e-3)]
    pub oracle_tolerance: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SelftestArgs {
    #[arg(long)]
    pub output: Option<PathBuf>,
}

pub fn reject_image(choice: KernelChoice) -> Result<()> {
    if choice == KernelChoice::Image {
        bail!("--kernel image is only available for the kernel command");
    }
    Ok(())
}
