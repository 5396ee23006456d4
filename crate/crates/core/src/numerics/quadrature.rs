//! Panel quadrature and the ε-regularized integration used for conditionally
//! convergent k-integrals.
//!
//! A regularized integrand is a family `f_ε(k)` that is absolutely integrable
//! for every `ε > 0` and whose `ε → 0` limit is the integral of interest. The
//! family is integrated at a geometric schedule of `ε` values and the results
//! are extrapolated to `ε = 0` with Neville's polynomial scheme.

use num_complex::Complex64;

use crate::error::{domain, Error, Result};

/// Gauss–Kronrod 21-point abscissae on [-1, 1] (non-negative half, descending).
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

/// Weights of the embedded 10-point Gauss rule (odd Kronrod abscissae).
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Default ε schedule: five halvings starting at 1e-2.
pub const DEFAULT_EPSILON: f64 = 1e-2;
pub const DEFAULT_EXTRAPOLATION_LEVELS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureRule {
    /// Gauss–Kronrod 21 on uniform panels, with the embedded Gauss 10 rule for
    /// the error estimate.
    GaussLegendrePanel,
    /// Composite trapezoid; error estimated from the half-resolution sum.
    Trapezoid,
}

/// Controls evaluation of a regularized integral over `(0, k_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureSpec {
    pub rule: QuadratureRule,
    pub panel_count: usize,
    pub k_max: f64,
    /// Largest regularization strength; the schedule halves it per level.
    pub epsilon: f64,
    pub extrapolation_levels: usize,
    /// Explicit ε values, overriding `epsilon`/`extrapolation_levels`.
    pub schedule: Option<Vec<f64>>,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rule: QuadratureRule::GaussLegendrePanel,
            panel_count: 256,
            k_max: 50.0,
            epsilon: DEFAULT_EPSILON,
            extrapolation_levels: DEFAULT_EXTRAPOLATION_LEVELS,
            schedule: None,
        }
    }
}

impl QuadratureSpec {
    /// A plain integral: a single level at ε = 0.
    pub fn unregularized(k_max: f64, panel_count: usize) -> Self {
        QuadratureSpec {
            k_max,
            panel_count,
            epsilon: 0.0,
            extrapolation_levels: 1,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.k_max > 0.0) || !self.k_max.is_finite() {
            return Err(domain(format!(
                "k_max must be finite and > 0, got {}",
                self.k_max
            )));
        }
        if self.panel_count == 0 {
            return Err(domain("panel_count must be >= 1"));
        }
        if self.extrapolation_levels == 0 {
            return Err(domain("extrapolation_levels must be >= 1"));
        }
        let eps = self.epsilons();
        if eps.is_empty() {
            return Err(domain("empty ε schedule"));
        }
        for (j, &e) in eps.iter().enumerate() {
            if !(0.0..1.0).contains(&e) {
                return Err(domain(format!("ε must lie in [0, 1), got {e}")));
            }
            if eps[..j].contains(&e) {
                return Err(domain(format!("ε schedule repeats the value {e}")));
            }
        }
        Ok(())
    }

    /// The ε values at which the family is integrated, largest first.
    pub fn epsilons(&self) -> Vec<f64> {
        match &self.schedule {
            Some(list) => list.clone(),
            None => (0..self.extrapolation_levels)
                .map(|j| self.epsilon / (1u64 << j) as f64)
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureResult {
    /// Extrapolated `ε → 0` value.
    pub value: Complex64,
    /// Combined quadrature, truncation and extrapolation error estimate.
    pub error_estimate: f64,
    /// `(ε, integral at ε)` for every level.
    pub levels: Vec<(f64, Complex64)>,
    pub truncation_estimate: f64,
}

impl QuadratureResult {
    /// Fails with [`Error::NonConvergence`] when the estimate exceeds `tolerance`.
    pub fn require(self, tolerance: f64) -> Result<Self> {
        if self.error_estimate > tolerance || !self.error_estimate.is_finite() {
            Err(Error::NonConvergence {
                estimate: self.error_estimate,
                tolerance,
            })
        } else {
            Ok(self)
        }
    }
}

/// Integrates `f(k, ε)` over `(0, k_max]` at every scheduled ε and extrapolates
/// to ε = 0.
pub fn integrate_oscillatory<F>(f: F, spec: &QuadratureSpec) -> Result<QuadratureResult>
where
    F: Fn(f64, f64) -> Complex64,
{
    integrate_regularized(
        |k, eps: &[f64], out: &mut [Complex64]| {
            for (slot, &e) in out.iter_mut().zip(eps) {
                *slot = f(k, e);
            }
        },
        spec,
    )
}

/// Batched form of [`integrate_oscillatory`]: `f(k, eps, out)` writes the
/// integrand for every ε at once, so work shared between levels (Bessel
/// factors, say) is done once per node.
pub fn integrate_regularized<F>(f: F, spec: &QuadratureSpec) -> Result<QuadratureResult>
where
    F: Fn(f64, &[f64], &mut [Complex64]),
{
    spec.validate()?;
    let eps = spec.epsilons();
    let levels = eps.len();
    let (sums, errors) = match spec.rule {
        QuadratureRule::GaussLegendrePanel => gk_panels(&f, &eps, spec.k_max, spec.panel_count),
        QuadratureRule::Trapezoid => trapezoid(&f, &eps, spec.k_max, spec.panel_count),
    };

    // Tail beyond k_max: |f(k_max)| · k_max bounds ∫_{k_max}^∞ for integrands
    // decaying at least like 1/k².
    let mut edge = vec![Complex64::new(0.0, 0.0); levels];
    f(spec.k_max, &eps, &mut edge);
    let tails: Vec<f64> = edge.iter().map(|v| v.norm() * spec.k_max).collect();

    let weights = neville_weights(&eps);
    let value: Complex64 = weights.iter().zip(&sums).map(|(w, s)| s * *w).sum();
    let propagated: f64 = weights
        .iter()
        .zip(errors.iter().zip(&tails))
        .map(|(w, (e, t))| w.abs() * (e + t))
        .sum();
    let extrapolation = if levels > 1 {
        let coarse = neville_weights(&eps[..levels - 1]);
        let coarse_value: Complex64 = coarse.iter().zip(&sums).map(|(w, s)| s * *w).sum();
        (value - coarse_value).norm()
    } else {
        0.0
    };
    let truncation_estimate = weights.iter().zip(&tails).map(|(w, t)| w.abs() * t).sum();

    Ok(QuadratureResult {
        value,
        error_estimate: propagated + extrapolation,
        levels: eps.iter().copied().zip(sums).collect(),
        truncation_estimate,
    })
}

/// Lagrange weights evaluating the interpolating polynomial through
/// `nodes` at zero.
pub fn neville_weights(nodes: &[f64]) -> Vec<f64> {
    nodes
        .iter()
        .enumerate()
        .map(|(j, &xj)| {
            nodes
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != j)
                .map(|(_, &xi)| xi / (xi - xj))
                .product()
        })
        .collect()
}

fn gk_panels<F>(f: &F, eps: &[f64], k_max: f64, panels: usize) -> (Vec<Complex64>, Vec<f64>)
where
    F: Fn(f64, &[f64], &mut [Complex64]),
{
    let levels = eps.len();
    let width = k_max / panels as f64;
    let mut sums = vec![Complex64::new(0.0, 0.0); levels];
    let mut errors = vec![0.0; levels];
    let mut panel = GkPanel::new(levels);
    for p in 0..panels {
        let a = p as f64 * width;
        panel.evaluate(f, eps, a, a + width);
        for j in 0..levels {
            sums[j] += panel.kronrod[j];
            errors[j] += panel.error(j);
        }
    }
    (sums, errors)
}

/// Per-panel Gauss–Kronrod accumulators for every ε channel.
struct GkPanel {
    kronrod: Vec<Complex64>,
    gauss: Vec<Complex64>,
    abs_sum: Vec<f64>,
    asc_sum: Vec<f64>,
    values: Vec<Vec<Complex64>>,
    buf: Vec<Complex64>,
    half: f64,
}

impl GkPanel {
    fn new(levels: usize) -> Self {
        GkPanel {
            kronrod: vec![Complex64::new(0.0, 0.0); levels],
            gauss: vec![Complex64::new(0.0, 0.0); levels],
            abs_sum: vec![0.0; levels],
            asc_sum: vec![0.0; levels],
            values: vec![vec![Complex64::new(0.0, 0.0); 21]; levels],
            buf: vec![Complex64::new(0.0, 0.0); levels],
            half: 0.0,
        }
    }

    fn evaluate<F>(&mut self, f: &F, eps: &[f64], a: f64, b: f64)
    where
        F: Fn(f64, &[f64], &mut [Complex64]),
    {
        let center = 0.5 * (a + b);
        self.half = 0.5 * (b - a);
        let levels = eps.len();
        // node order: 0..10 left of center (XGK order), 10 center, 11..20 right
        for (idx, &x) in XGK.iter().enumerate() {
            f(center - self.half * x, eps, &mut self.buf);
            for j in 0..levels {
                self.values[j][idx] = self.buf[j];
            }
            if idx < 10 {
                f(center + self.half * x, eps, &mut self.buf);
                for j in 0..levels {
                    self.values[j][20 - idx] = self.buf[j];
                }
            }
        }
        for j in 0..levels {
            let v = &self.values[j];
            let mut k = v[10] * WGK[10];
            let mut g = Complex64::new(0.0, 0.0);
            let mut abs = v[10].norm() * WGK[10];
            for i in 0..10 {
                let pair = v[i] + v[20 - i];
                k += pair * WGK[i];
                abs += (v[i].norm() + v[20 - i].norm()) * WGK[i];
                if i % 2 == 1 {
                    g += pair * WG[i / 2];
                }
            }
            let mean = k * 0.5;
            let mut asc = (v[10] - mean).norm() * WGK[10];
            for i in 0..10 {
                asc += ((v[i] - mean).norm() + (v[20 - i] - mean).norm()) * WGK[i];
            }
            self.kronrod[j] = k * self.half;
            self.gauss[j] = g * self.half;
            self.abs_sum[j] = abs * self.half;
            self.asc_sum[j] = asc * self.half;
        }
    }

    /// QUADPACK's scaled |K21 − G10| estimate.
    fn error(&self, j: usize) -> f64 {
        let mut err = (self.kronrod[j] - self.gauss[j]).norm();
        let asc = self.asc_sum[j];
        if asc != 0.0 && err != 0.0 {
            err = asc * (200.0 * err / asc).powf(1.5).min(1.0);
        }
        let floor = 50.0 * f64::EPSILON * self.abs_sum[j];
        err.max(floor)
    }
}

fn trapezoid<F>(f: &F, eps: &[f64], k_max: f64, panels: usize) -> (Vec<Complex64>, Vec<f64>)
where
    F: Fn(f64, &[f64], &mut [Complex64]),
{
    let levels = eps.len();
    let h = k_max / panels as f64;
    let mut fine = vec![Complex64::new(0.0, 0.0); levels];
    let mut coarse = vec![Complex64::new(0.0, 0.0); levels];
    let mut buf = vec![Complex64::new(0.0, 0.0); levels];
    for i in 0..=panels {
        let weight = if i == 0 || i == panels { 0.5 } else { 1.0 };
        f(i as f64 * h, eps, &mut buf);
        for j in 0..levels {
            fine[j] += buf[j] * weight;
        }
        if i % 2 == 0 {
            let cw = if i == 0 || i == panels { 0.5 } else { 1.0 };
            for j in 0..levels {
                coarse[j] += buf[j] * cw;
            }
        }
    }
    let sums: Vec<Complex64> = fine.iter().map(|s| s * h).collect();
    // an odd panel count leaves the coarse sum short of k_max; the estimate is then loose
    let errors = fine
        .iter()
        .zip(&coarse)
        .map(|(a, b)| (a * h - b * (2.0 * h)).norm() / 3.0)
        .collect();
    (sums, errors)
}

/// Gauss–Kronrod 21 over `[a, b]` split into `panels` equal panels; returns
/// the value and the summed error estimate.
pub fn integrate_panels<F>(f: F, a: f64, b: f64, panels: usize) -> (Complex64, f64)
where
    F: Fn(f64) -> Complex64,
{
    let eps = [0.0];
    let g = |k: f64, _: &[f64], out: &mut [Complex64]| out[0] = f(k);
    let width = (b - a) / panels.max(1) as f64;
    let mut panel = GkPanel::new(1);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    for p in 0..panels.max(1) {
        let lo = a + p as f64 * width;
        panel.evaluate(&g, &eps, lo, lo + width);
        sum += panel.kronrod[0];
        err += panel.error(0);
    }
    (sum, err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn gaussian_integral_unregularized() {
        let spec = QuadratureSpec::unregularized(10.0, 40);
        let r = integrate_oscillatory(|k, _| Complex64::new((-k * k).exp(), 0.0), &spec).unwrap();
        assert!((r.value.re - PI.sqrt() / 2.0).abs() < 1e-14);
        assert!(r.error_estimate < 1e-10);
    }

    #[test]
    fn trapezoid_gaussian() {
        let spec = QuadratureSpec {
            rule: QuadratureRule::Trapezoid,
            ..QuadratureSpec::unregularized(10.0, 400)
        };
        let r = integrate_oscillatory(|k, _| Complex64::new((-k * k).exp(), 0.0), &spec).unwrap();
        assert!((r.value.re - PI.sqrt() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn fresnel_integral_by_extrapolation() {
        // ∫₀^∞ e^{ik²} dk = (√π/2) e^{iπ/4}, regularized as e^{i(1+iε)k²}
        let spec = QuadratureSpec {
            k_max: 200.0,
            panel_count: 8000,
            ..Default::default()
        };
        let r =
            integrate_oscillatory(|k, e| Complex64::new(-e * k * k, k * k).exp(), &spec).unwrap();
        let want = Complex64::from_polar(PI.sqrt() / 2.0, PI / 4.0);
        assert!((r.value - want).norm() < 1e-8, "{} vs {}", r.value, want);
        assert!(r.error_estimate < 1e-6);
    }

    #[test]
    fn truncation_is_reported_as_non_convergence() {
        let slow = |k: f64, _e: f64| Complex64::new(1.0 / (1.0 + k * k), 0.0);
        let full = QuadratureSpec::unregularized(1e4, 20_000);
        let ok = integrate_oscillatory(slow, &full).unwrap();
        assert!((ok.value.re - PI / 2.0).abs() < 2e-4);
        let halved = QuadratureSpec::unregularized(50.0, 200);
        let err = integrate_oscillatory(slow, &halved).unwrap().require(1e-6);
        assert!(matches!(err, Err(Error::NonConvergence { .. })));
    }

    #[test]
    fn invalid_specs() {
        let bad = [
            QuadratureSpec {
                k_max: 0.0,
                ..Default::default()
            },
            QuadratureSpec {
                panel_count: 0,
                ..Default::default()
            },
            QuadratureSpec {
                epsilon: 1.5,
                ..Default::default()
            },
        ];
        assert!(bad.iter().all(|spec| spec.validate().is_err()));
        let spec = QuadratureSpec {
            schedule: Some(vec![1e-2, 1e-2]),
            ..Default::default()
        };
        assert!(spec.validate().is_err());
    }

    #[test]
    fn neville_weights_reproduce_polynomials() {
        let nodes = [1e-2, 5e-3, 2.5e-3, 1.25e-3];
        let w = neville_weights(&nodes);
        // cubic p(ε) = 2 − 3ε + 5ε² + 7ε³ extrapolates exactly to p(0) = 2
        let p = |e: f64| 2.0 - 3.0 * e + 5.0 * e * e + 7.0 * e * e * e;
        let got: f64 = w.iter().zip(&nodes).map(|(w, &e)| w * p(e)).sum();
        assert!((got - 2.0).abs() < 1e-12);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn panels_of_a_polynomial_are_exact() {
        let (v, e) = integrate_panels(|x| Complex64::new(x.powi(7), 0.0), 0.0, 2.0, 3);
        assert!((v.re - 32.0).abs() < 1e-12);
        assert!(e < 1e-10);
    }
}
