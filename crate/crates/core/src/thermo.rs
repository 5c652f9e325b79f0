//! Vibrational partition function by direct summation and in the leading
//! order Poisson closed form, with the free energy, mean energy, heat
//! capacity and entropy derived from each.
//!
//! With `t = βΛ` and `ρ(x) = η₁/(x+η₂) - (x+η₂)` the Boltzmann factor of
//! level n is `f(n) = e^{tρ(n)²} = e^{-βE_n}`. The closed form is
//!
//! `Z = Σ_i σ_i e^{tρ_i²} h_i(t)`, `h_i = ½ [1 + m(ρ_i) - m(w_i)]`,
//!
//! with `σ = (+1, -1)`, `ρ₁ = ρ(0)`, `ρ₂ = ρ(λ_max+1)`, `w_i = √(4η₁ + ρ_i²)`
//! and `m(c) = D(√t c)/√t`. Exponentials `e^{tρ²}` are carried as
//! [`ScaledExp`] and never evaluated.

use crate::error::{Error, Result};
use crate::quad::{integrate, QuadConfig};
use crate::specfun::{dawson_kernels, signed_log_sum, ScaledExp};
use crate::spectrum::SpectrumConstants;

/// Spectrum constants plus the Poisson endpoints and an inverse-temperature grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermoConfig {
    pub sc: SpectrumConstants,
    /// `ρ(0)`; `Λ ρ₁² = |E₀|`.
    pub rho1: f64,
    /// `ρ(λ_max + 1)`.
    pub rho2: f64,
    /// 1/eV.
    pub beta_grid: Vec<f64>,
}

impl ThermoConfig {
    pub fn new(sc: SpectrumConstants, beta_grid: Vec<f64>) -> Result<Self> {
        let lambda_max = sc
            .lambda_max
            .ok_or(Error::NoBoundStates(sc.lambda_max_cont))?;
        Ok(Self {
            rho1: sc.rho(0.0),
            rho2: sc.rho(f64::from(lambda_max) + 1.0),
            sc,
            beta_grid,
        })
    }

    /// Ground-state energy `-Λ ρ₁²`, eV.
    pub fn ground_energy(&self) -> f64 {
        -self.sc.lambda * self.rho1 * self.rho1
    }

    fn lambda_max(&self) -> u32 {
        self.sc.lambda_max.unwrap_or(0)
    }
}

/// Thermodynamic state at one β, in k_B = 1 units for C and S.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoPoint {
    /// 1/eV.
    pub beta: f64,
    pub z: ScaledExp,
    pub ln_z: f64,
    /// F = -ln Z / β, eV.
    pub free_energy: f64,
    /// U = -∂ln Z/∂β, eV.
    pub mean_energy: f64,
    /// U - E₀, eV.
    pub thermal_energy: f64,
    /// C / k_B.
    pub heat_capacity: f64,
    /// S / k_B = ln Z + βU.
    pub entropy: f64,
    /// The closed-form sum cancelled to below 1e-14 of its largest term.
    pub precision_loss: bool,
}

/// Both evaluations at one grid point; errors are kept per point.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermoSample {
    pub beta: f64,
    pub closed: Result<ThermoPoint>,
    pub exact: Result<ThermoPoint>,
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::Domain(format!(
            "beta must be positive and finite, got {beta}"
        )));
    }
    Ok(())
}

/// Boltzmann factors `e^{-β(E_n - E₀)}` for n = 0..=λ_max.
fn shifted_weights(sc: &SpectrumConstants, beta: f64) -> Vec<(f64, f64)> {
    let e0 = sc.energy_at(0.0);
    (0..=sc.lambda_max.unwrap_or(0))
        .map(|n| {
            let e = sc.energy_at(f64::from(n));
            (e, (-beta * (e - e0)).exp())
        })
        .collect()
}

/// `Σ_n e^{-βE_n}` over the bound levels, with `e^{-βE₀}` carried in the exponent.
pub fn partition_exact(sc: &SpectrumConstants, beta: f64) -> Result<ScaledExp> {
    check_beta(beta)?;
    if sc.lambda_max.is_none() {
        return Err(Error::NoBoundStates(sc.lambda_max_cont));
    }
    let e0 = sc.energy_at(0.0);
    let terms: Vec<ScaledExp> = shifted_weights(sc, beta)
        .into_iter()
        .map(|(_, w)| ScaledExp::new(w, -beta * e0))
        .collect();
    Ok(signed_log_sum(&terms)?.value)
}

/// Thermodynamic functions from the direct sum over levels.
pub fn thermo_exact(sc: &SpectrumConstants, beta: f64) -> Result<ThermoPoint> {
    let z = partition_exact(sc, beta)?;
    let weights = shifted_weights(sc, beta);
    let total: f64 = weights.iter().map(|p| p.1).sum();
    let e0 = sc.energy_at(0.0);
    // Energies relative to E₀ keep the variance free of cancellation.
    let mean_shift = weights.iter().map(|(e, w)| (e - e0) * w).sum::<f64>() / total;
    let variance = weights
        .iter()
        .map(|(e, w)| {
            let d = e - e0 - mean_shift;
            d * d * w
        })
        .sum::<f64>()
        / total;
    let ln_z = z.ln_abs();
    let mean_energy = e0 + mean_shift;
    Ok(ThermoPoint {
        beta,
        z,
        ln_z,
        free_energy: -ln_z / beta,
        mean_energy,
        thermal_energy: mean_shift,
        heat_capacity: beta * beta * variance,
        entropy: ln_z + beta * mean_energy,
        precision_loss: false,
    })
}

/// `h`, `dh/dt`, `d²h/dt²` for one endpoint.
fn endpoint(t: f64, rho: f64, w: f64) -> (f64, f64, f64) {
    let st = t.sqrt();
    let (r0, r1, r2) = dawson_kernels(st * rho);
    let (w0, w1, w2) = dawson_kernels(st * w);
    let h = 0.5 * (1.0 + rho * r0 - w * w0);
    let h1 = 0.5 * (rho * r1 - w * w1) / (2.0 * t);
    let h2 = 0.5 * (rho * r2 - w * w2) / (4.0 * t * t);
    (h, h1, h2)
}

struct ClosedForm {
    z: ScaledExp,
    precision_loss: bool,
    /// d ln Z / dt.
    d1: f64,
    /// d² ln Z / dt².
    d2: f64,
}

fn closed_form(cfg: &ThermoConfig, beta: f64) -> Result<ClosedForm> {
    check_beta(beta)?;
    let t = beta * cfg.sc.lambda;
    let eta1 = cfg.sc.eta1;
    let ends = [(1.0, cfg.rho1), (-1.0, cfg.rho2)];
    let reference = (cfg.rho1 * cfg.rho1).max(cfg.rho2 * cfg.rho2);

    let mut terms = Vec::with_capacity(2);
    let (mut z_s, mut d1_s, mut d2_s) = (0.0, 0.0, 0.0);
    for &(sigma, rho) in &ends {
        let w = (4.0 * eta1 + rho * rho).sqrt();
        let (h, h1, h2) = endpoint(t, rho, w);
        terms.push(ScaledExp::new(sigma * h, t * rho * rho));
        // Weights relative to e^{t ρ_ref²}, at most 1.
        let k = rho * rho - reference;
        let g = sigma * (t * k).exp();
        z_s += g * h;
        d1_s += g * (k * h + h1);
        d2_s += g * (k * k * h + 2.0 * k * h1 + h2);
    }
    let sum = signed_log_sum(&terms)?;
    if !(sum.value.mantissa > 0.0) {
        return Err(Error::NonPositivePartition(sum.value.value()));
    }
    let mean = d1_s / z_s;
    Ok(ClosedForm {
        z: sum.value,
        precision_loss: sum.precision_loss,
        d1: reference + mean,
        d2: d2_s / z_s - mean * mean,
    })
}

/// Leading-order Poisson closed form of the partition function.
pub fn partition_closed(cfg: &ThermoConfig, beta: f64) -> Result<ScaledExp> {
    Ok(closed_form(cfg, beta)?.z)
}

/// F = -ln Z/β from the closed form, eV.
pub fn free_energy(cfg: &ThermoConfig, beta: f64) -> Result<f64> {
    Ok(-partition_closed(cfg, beta)?.ln_abs() / beta)
}

/// U = -∂ln Z/∂β from the closed form, eV.
pub fn mean_energy(cfg: &ThermoConfig, beta: f64) -> Result<f64> {
    Ok(-cfg.sc.lambda * closed_form(cfg, beta)?.d1)
}

/// C/k_B = β² ∂²ln Z/∂β² from the closed form.
pub fn heat_capacity(cfg: &ThermoConfig, beta: f64) -> Result<f64> {
    let t = beta * cfg.sc.lambda;
    Ok(t * t * closed_form(cfg, beta)?.d2)
}

/// S/k_B = ln Z + βU from the closed form.
pub fn entropy(cfg: &ThermoConfig, beta: f64) -> Result<f64> {
    Ok(thermo_closed(cfg, beta)?.entropy)
}

/// All closed-form quantities at one β.
pub fn thermo_closed(cfg: &ThermoConfig, beta: f64) -> Result<ThermoPoint> {
    let cf = closed_form(cfg, beta)?;
    let lambda = cfg.sc.lambda;
    let t = beta * lambda;
    let ln_z = cf.z.ln_abs();
    let mean_energy = -lambda * cf.d1;
    Ok(ThermoPoint {
        beta,
        z: cf.z,
        ln_z,
        free_energy: -ln_z / beta,
        mean_energy,
        thermal_energy: -lambda * (cf.d1 - cfg.rho1 * cfg.rho1),
        heat_capacity: t * t * cf.d2,
        entropy: ln_z + beta * mean_energy,
        precision_loss: cf.precision_loss,
    })
}

/// Closed-form and exact-sum evaluations over the configured β grid.
pub fn thermo_curve(cfg: &ThermoConfig) -> Vec<ThermoSample> {
    cfg.beta_grid
        .iter()
        .map(|&beta| ThermoSample {
            beta,
            closed: thermo_closed(cfg, beta),
            exact: thermo_exact(&cfg.sc, beta),
        })
        .collect()
}

/// `½[f(0) - f(λ_max+1)] + ∫₀^{λ_max+1} f(x) dx` with the integral done by
/// adaptive quadrature; the form the closed expression integrates exactly.
pub fn partition_integral_form(cfg: &ThermoConfig, beta: f64, rel_tol: f64) -> Result<ScaledExp> {
    check_beta(beta)?;
    let t = beta * cfg.sc.lambda;
    let rho1 = cfg.rho1;
    let upper = f64::from(cfg.lambda_max()) + 1.0;
    // f(x) e^{-tρ₁²} with ρ² - ρ₁² factored to keep its relative accuracy.
    let scaled = |x: f64| {
        let r = cfg.sc.rho(x);
        (t * (r - rho1) * (r + rho1)).exp()
    };
    // Near x = 0 the integrand falls off on the scale 1/(2tρ₁|ρ'(0)|).
    let slope = cfg.sc.eta1 / (cfg.sc.eta2 * cfg.sc.eta2) + 1.0;
    let width = 1.0 / (2.0 * t * rho1.abs() * slope).max(1e-300);
    let mut breaks = Vec::new();
    let mut b = width;
    while b < upper {
        breaks.push(b);
        b *= 4.0;
    }
    let qc = QuadConfig {
        abs_tol: 0.0,
        rel_tol,
        max_intervals: 100_000,
        initial_pieces: 16,
    };
    let integral = integrate(scaled, 0.0, upper, &breaks, &qc)?;
    let total = 0.5 * (1.0 - scaled(upper)) + integral.value;
    Ok(ScaledExp::new(total, t * rho1 * rho1))
}
