//! Uniform grids and Crank–Nicolson evolution.

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::params::PhysParams;

/// Fraction of the grid at each open end that is watched for contamination.
pub const EDGE_FRACTION: f64 = 0.05;
/// Largest allowed edge-to-peak amplitude ratio.
pub const EDGE_THRESHOLD: f64 = 1e-8;

/// `points + 1` nodes `x_min + j·dx` with `dx = (x_max − x_min)/points`.
/// `x_min = 0` is the half line with a wall at the origin; `x_min < 0` is a
/// window onto the full line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    x_min: f64,
    x_max: f64,
    points: usize,
    dt: f64,
}

impl GridSpec {
    pub fn half_line(x_max: f64, points: usize, dt: f64) -> Result<Self> {
        Self::line(0.0, x_max, points, dt)
    }

    pub fn line(x_min: f64, x_max: f64, points: usize, dt: f64) -> Result<Self> {
        if points < 16 {
            return Err(domain(format!(
                "grid needs at least 16 points, got {points}"
            )));
        }
        if !(x_min <= 0.0 && x_max > x_min && x_max.is_finite() && x_min.is_finite()) {
            return Err(domain(format!(
                "grid needs x_min <= 0 < x_max, got [{x_min}, {x_max}]"
            )));
        }
        if x_max <= 0.0 {
            return Err(domain(format!("x_max must be > 0, got {x_max}")));
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(domain(format!("dt must be finite and > 0, got {dt}")));
        }
        Ok(GridSpec {
            x_min,
            x_max,
            points,
            dt,
        })
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.points as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        if j == self.points {
            self.x_max
        } else {
            self.x_min + j as f64 * self.dx()
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.points).map(move |j| self.x(j))
    }

    pub fn is_half_line(&self) -> bool {
        self.x_min == 0.0
    }

    /// `dt·ħ/(2m·dx²)`, the ratio that governs Crank–Nicolson phase accuracy.
    pub fn courant(&self, params: &PhysParams) -> f64 {
        self.dt * params.hbar() / (2.0 * params.mass() * self.dx() * self.dx())
    }

    /// Trapezoid weights over the nodes.
    pub fn weights(&self) -> Vec<f64> {
        let dx = self.dx();
        (0..=self.points)
            .map(|j| {
                if j == 0 || j == self.points {
                    0.5 * dx
                } else {
                    dx
                }
            })
            .collect()
    }
}

/// Samples of ψ at every node of a [`GridSpec`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridWavefunction {
    samples: Vec<Complex64>,
    grid: GridSpec,
}

impl GridWavefunction {
    /// Takes ownership of the samples; on a half-line grid `ψ(0)` is set to 0.
    pub fn new(mut samples: Vec<Complex64>, grid: GridSpec) -> Result<Self> {
        if samples.len() != grid.points + 1 {
            return Err(domain(format!(
                "expected {} samples, got {}",
                grid.points + 1,
                samples.len()
            )));
        }
        if samples
            .iter()
            .any(|z| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(domain("wavefunction samples must be finite"));
        }
        if grid.is_half_line() {
            samples[0] = Complex64::new(0.0, 0.0);
        }
        Ok(GridWavefunction { samples, grid })
    }

    pub fn from_fn(grid: GridSpec, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        Self::new(grid.nodes().map(f).collect(), grid)
    }

    pub fn zeros(grid: GridSpec) -> Self {
        GridWavefunction {
            samples: vec![Complex64::new(0.0, 0.0); grid.points + 1],
            grid,
        }
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    /// Trapezoid `(∫|ψ|²)^{1/2}`.
    pub fn norm(&self) -> f64 {
        self.grid
            .weights()
            .iter()
            .zip(&self.samples)
            .map(|(w, z)| w * z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Trapezoid L² distance; both functions must live on the same grid.
    pub fn l2_distance(&self, other: &GridWavefunction) -> Result<f64> {
        if self.grid != other.grid {
            return Err(domain("L² distance needs identical grids"));
        }
        Ok(self
            .grid
            .weights()
            .iter()
            .zip(self.samples.iter().zip(&other.samples))
            .map(|(w, (a, b))| w * (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Largest `|ψ|` within the outer [`EDGE_FRACTION`] of the grid at each
    /// open end, over the peak `|ψ|`; zero for the zero function.
    pub fn edge_ratio(&self) -> f64 {
        let peak = self.max_abs();
        if peak == 0.0 {
            return 0.0;
        }
        let width = ((self.grid.points as f64) * EDGE_FRACTION).ceil() as usize;
        let upper = self.samples[self.samples.len() - width..].iter();
        let lower = if self.grid.is_half_line() {
            [].iter()
        } else {
            self.samples[..width].iter()
        };
        upper.chain(lower).fold(0.0_f64, |m, z| m.max(z.norm())) / peak
    }
}

/// Outcome of [`grid_evolve`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridEvolution {
    pub psi: GridWavefunction,
    pub steps: usize,
    /// Largest relative change of the discrete norm in one step.
    pub max_step_drift: f64,
    /// Largest [`GridWavefunction::edge_ratio`] seen during the run.
    pub edge_ratio: f64,
}

impl GridEvolution {
    /// [`Error::BoundaryContamination`] when the edge ratio exceeded [`EDGE_THRESHOLD`].
    pub fn contamination(&self) -> Option<Error> {
        (self.edge_ratio > EDGE_THRESHOLD).then_some(Error::BoundaryContamination {
            ratio: self.edge_ratio,
            threshold: EDGE_THRESHOLD,
        })
    }
}

/// Crank–Nicolson factorization of `1 + iΔt H/2ħ` with Dirichlet ends.
struct CrankNicolson {
    /// `iΔt/2ħ · H` diagonal and off-diagonal.
    diag: Vec<Complex64>,
    off: Complex64,
    /// Thomas-algorithm modified super-diagonal and pivots.
    upper: Vec<Complex64>,
    pivot: Vec<Complex64>,
}

impl CrankNicolson {
    fn new(grid: &GridSpec, params: &PhysParams, dt: f64) -> Self {
        let hbar = params.hbar();
        let m = params.mass();
        let w = params.omega();
        let n = params.n();
        let dx = grid.dx();
        let kinetic = hbar * hbar / (2.0 * m * dx * dx);
        let coupling = hbar * hbar * (n * n - 0.25) / (2.0 * m);
        let scale = Complex64::new(0.0, dt / (2.0 * hbar));
        let interior = grid.points - 1;
        let diag: Vec<Complex64> = (1..=interior)
            .map(|j| {
                let x = grid.x(j);
                let centrifugal = if coupling == 0.0 {
                    0.0
                } else {
                    coupling / (x * x)
                };
                scale * (2.0 * kinetic + centrifugal + 0.5 * m * w * w * x * x)
            })
            .collect();
        let off = scale * -kinetic;
        let mut upper = vec![Complex64::new(0.0, 0.0); interior];
        let mut pivot = vec![Complex64::new(0.0, 0.0); interior];
        let one = Complex64::new(1.0, 0.0);
        pivot[0] = one + diag[0];
        upper[0] = off / pivot[0];
        for i in 1..interior {
            pivot[i] = one + diag[i] - off * upper[i - 1];
            upper[i] = off / pivot[i];
        }
        CrankNicolson {
            diag,
            off,
            upper,
            pivot,
        }
    }

    /// One step on the interior samples `psi[1..len−1]`.
    fn step(&self, psi: &mut [Complex64], rhs: &mut [Complex64]) {
        let interior = self.diag.len();
        for (i, (r, d)) in rhs.iter_mut().zip(&self.diag).enumerate() {
            *r = psi[i + 1] * (Complex64::new(1.0, 0.0) - d) - self.off * (psi[i] + psi[i + 2]);
        }
        rhs[0] /= self.pivot[0];
        for i in 1..interior {
            rhs[i] = (rhs[i] - self.off * rhs[i - 1]) / self.pivot[i];
        }
        for i in (0..interior - 1).rev() {
            rhs[i] -= self.upper[i] * rhs[i + 1];
        }
        psi[1..=interior].copy_from_slice(rhs);
        psi[0] = Complex64::new(0.0, 0.0);
        psi[interior + 1] = Complex64::new(0.0, 0.0);
    }
}

/// Evolves `psi0` by `t_final` under `H` with Dirichlet ends, in
/// `⌈|t_final|/dt⌉` equal Crank–Nicolson steps.
///
/// Half-line grids need `n >= 1/2`; full-line windows need `n = 1/2`.
pub fn grid_evolve(
    psi0: &GridWavefunction,
    t_final: f64,
    params: &PhysParams,
) -> Result<GridEvolution> {
    let grid = *psi0.grid();
    if !t_final.is_finite() {
        return Err(domain(format!("t_final must be finite, got {t_final}")));
    }
    if grid.is_half_line() && params.n() < 0.5 {
        return Err(domain(format!(
            "the Dirichlet wall needs n >= 1/2 on the half line, got n = {}",
            params.n()
        )));
    }
    if !grid.is_half_line() && params.n() != 0.5 {
        return Err(domain("a grid extending to x < 0 needs n = 1/2"));
    }
    let mut psi = psi0.samples().to_vec();
    let edge_start = psi0.edge_ratio();
    if t_final == 0.0 {
        return Ok(GridEvolution {
            psi: psi0.clone(),
            steps: 0,
            max_step_drift: 0.0,
            edge_ratio: edge_start,
        });
    }
    let steps = (t_final.abs() / grid.dt()).ceil() as usize;
    let solver = CrankNicolson::new(&grid, params, t_final / steps as f64);
    let mut rhs = vec![Complex64::new(0.0, 0.0); grid.points - 1];
    let discrete_norm = |v: &[Complex64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let mut norm = discrete_norm(&psi);
    let mut max_step_drift = 0.0_f64;
    let mut edge_ratio = edge_start;
    let mut current = GridWavefunction::zeros(grid);
    for _ in 0..steps {
        solver.step(&mut psi, &mut rhs);
        let next = discrete_norm(&psi);
        if norm > 0.0 {
            max_step_drift = max_step_drift.max((next - norm).abs() / norm);
        }
        norm = next;
        current.samples.copy_from_slice(&psi);
        edge_ratio = edge_ratio.max(current.edge_ratio());
    }
    Ok(GridEvolution {
        psi: current,
        steps,
        max_step_drift,
        edge_ratio,
    })
}
