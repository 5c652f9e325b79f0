//! The verification suite behind `diatherm validate`.

use std::fmt;

use crate::error::Result;
use crate::model::Model;
use crate::oracle::{self, OracleConfig};
use crate::spectrum::{self, IndexForm};
use crate::thermo::{self, ThermoConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationOptions {
    /// Index form the closed-form spectrum is built with.
    pub form: IndexForm,
    /// Replace Λ = α²ħ²/2m by the literal α·ħ²/2m (negative control).
    pub literal_lambda: bool,
    pub ls: Vec<u32>,
    /// Levels checked against Numerov; capped at λ_max.
    pub numerov_levels: u32,
    pub betas: Vec<f64>,
    pub oracle: OracleConfig,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        Self {
            form: IndexForm::Exact,
            literal_lambda: false,
            ls: vec![0, 1, 2],
            numerov_levels: 4,
            betas: vec![0.5, 1.0, 5.0, 20.0, 100.0],
            oracle: OracleConfig::default(),
        }
    }
}

/// Outcome of one check: the worst deviation against its tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub observed: f64,
    pub tolerance: f64,
    pub detail: String,
    /// Errors raised while evaluating; any error fails the check.
    pub errors: Vec<String>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.errors.is_empty() && self.observed.is_finite() && self.observed <= self.tolerance
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "{status} {}: observed {:.3e}, tolerance {:.1e} ({})",
            self.name, self.observed, self.tolerance, self.detail
        )?;
        for e in &self.errors {
            write!(f, "\n    error: {e}")?;
        }
        Ok(())
    }
}

struct Worst {
    value: f64,
    at: String,
    errors: Vec<String>,
}

impl Worst {
    fn new() -> Self {
        Self {
            value: 0.0,
            at: String::new(),
            errors: Vec::new(),
        }
    }

    fn record(&mut self, value: f64, at: impl FnOnce() -> String) {
        if self.at.is_empty() || !(value <= self.value) {
            self.value = value;
            self.at = at();
        }
    }

    fn push_err(&mut self, context: String, e: impl fmt::Display) {
        self.errors.push(format!("{context}: {e}"));
    }

    fn into_check(self, name: &'static str, tolerance: f64) -> Check {
        Check {
            name,
            observed: self.value,
            tolerance,
            detail: if self.at.is_empty() {
                "no samples".into()
            } else {
                format!("worst at {}", self.at)
            },
            errors: self.errors,
        }
    }
}

fn relative(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// Simplified spectrum against the form written in a, b, c directly.
pub fn check_two_forms(model: &Model, opts: &ValidationOptions) -> Check {
    let mut worst = Worst::new();
    for &l in &opts.ls {
        let mut sc = spectrum::constants_with_form(model, l, opts.form);
        if opts.literal_lambda {
            sc = spectrum::with_literal_lambda(&sc);
        }
        for n in 0..=sc.lambda_max.unwrap_or(0) {
            if sc.lambda_max.is_none() {
                break;
            }
            match (
                spectrum::energy(&sc, n),
                spectrum::energy_full_form(model, &sc, n),
            ) {
                (Ok(simple), Ok(full)) => {
                    worst.record(relative(simple.energy, full), || format!("n={n} l={l}"))
                }
                (Err(e), _) | (_, Err(e)) => worst.push_err(format!("n={n} l={l}"), e),
            }
        }
    }
    worst.into_check("two-form energy consistency", 1e-12)
}

/// Closed-form energies against Numerov eigenvalues of the approximated Hamiltonian.
pub fn check_numerov(model: &Model, opts: &ValidationOptions) -> Check {
    let mut worst = Worst::new();
    for &l in &opts.ls {
        let mut sc = spectrum::constants_with_form(model, l, opts.form);
        if opts.literal_lambda {
            sc = spectrum::with_literal_lambda(&sc);
        }
        let Some(top) = sc.lambda_max else {
            worst.push_err(format!("l={l}"), "no bound states");
            continue;
        };
        for n in 0..opts.numerov_levels.min(top + 1) {
            let solved =
                oracle::solve_level(model, n, l, oracle::Hamiltonian::Approximated, &opts.oracle);
            match (solved, spectrum::energy(&sc, n)) {
                (Ok(sol), Ok(level)) => {
                    if sol.n_nodes != n {
                        worst.push_err(format!("n={n} l={l}"), format!("{} nodes", sol.n_nodes));
                    }
                    worst.record(relative(sol.energy, level.energy), || {
                        format!("n={n} l={l}")
                    });
                }
                (Err(e), _) | (_, Err(e)) => worst.push_err(format!("n={n} l={l}"), e),
            }
        }
    }
    worst.into_check("Numerov equivalence (approximated Hamiltonian)", 1e-5)
}

fn thermo_config(model: &Model, opts: &ValidationOptions) -> Result<ThermoConfig> {
    let mut sc = spectrum::constants_with_form(model, 0, opts.form);
    if opts.literal_lambda {
        sc = spectrum::with_literal_lambda(&sc);
    }
    ThermoConfig::new(sc, opts.betas.clone())
}

/// Closed-form partition function against endpoint terms plus quadrature.
pub fn check_poisson(model: &Model, opts: &ValidationOptions) -> Check {
    let mut worst = Worst::new();
    match thermo_config(model, opts) {
        Ok(cfg) => {
            for &beta in &opts.betas {
                let closed = thermo::partition_closed(&cfg, beta);
                let integral = thermo::partition_integral_form(&cfg, beta, 1e-12);
                match (closed, integral) {
                    (Ok(c), Ok(i)) => {
                        worst.record((c.ratio(&i) - 1.0).abs(), || format!("beta={beta}"))
                    }
                    (Err(e), _) | (_, Err(e)) => worst.push_err(format!("beta={beta}"), e),
                }
            }
        }
        Err(e) => worst.push_err("setup".into(), e),
    }
    worst.into_check("Poisson closed form vs quadrature", 1e-8)
}

/// Richardson-extrapolated central difference.
pub fn richardson<F: Fn(f64) -> Result<f64>>(f: F, x: f64, h: f64) -> Result<f64> {
    let d = |h: f64| -> Result<f64> { Ok((f(x + h)? - f(x - h)?) / (2.0 * h)) };
    Ok((4.0 * d(0.5 * h)? - d(h)?) / 3.0)
}

/// Worst relative errors (U, C, S identity, F identity) of the closed-form
/// thermodynamics at `beta`.
pub fn derivative_errors(cfg: &ThermoConfig, beta: f64) -> Result<[f64; 4]> {
    let h = 1e-3 * beta;
    let p = thermo::thermo_closed(cfg, beta)?;
    let ln_z = |b: f64| Ok(thermo::partition_closed(cfg, b)?.ln_abs());
    let u_fd = -richardson(ln_z, beta, h)?;
    let u = |b: f64| thermo::mean_energy(cfg, b);
    let c_fd = -beta * beta * richardson(u, beta, h)?;
    let s = p.ln_z + beta * p.mean_energy;
    let f = -p.ln_z / beta;
    let scale = |x: f64| x.abs().max(1.0);
    Ok([
        relative(p.mean_energy, u_fd),
        relative(p.heat_capacity, c_fd),
        (p.entropy - s).abs() / scale(s),
        (p.free_energy - f).abs() / scale(f),
    ])
}

/// Closed-form U and C against finite differences, plus the S and F identities.
pub fn check_derivatives(model: &Model, opts: &ValidationOptions) -> Vec<Check> {
    let mut worst: Vec<Worst> = (0..4).map(|_| Worst::new()).collect();
    match thermo_config(model, opts) {
        Ok(cfg) => {
            for &beta in &opts.betas {
                match derivative_errors(&cfg, beta) {
                    Ok(errs) => {
                        for (w, e) in worst.iter_mut().zip(errs) {
                            w.record(e, || format!("beta={beta}"));
                        }
                    }
                    Err(e) => worst[0].push_err(format!("beta={beta}"), e),
                }
            }
        }
        Err(e) => worst[0].push_err("setup".into(), e),
    }
    let names = [
        ("U vs Richardson difference of ln Z", 1e-6),
        ("C vs difference of U", 1e-5),
        ("S = ln Z + beta U", 1e-10),
        ("F = -ln Z / beta", 1e-10),
    ];
    worst
        .into_iter()
        .zip(names)
        .map(|(w, (name, tol))| w.into_check(name, tol))
        .collect()
}

/// Every check, in report order.
pub fn validate(model: &Model, opts: &ValidationOptions) -> Vec<Check> {
    let mut checks = vec![
        check_two_forms(model, opts),
        check_numerov(model, opts),
        check_poisson(model, opts),
    ];
    checks.extend(check_derivatives(model, opts));
    checks
}
