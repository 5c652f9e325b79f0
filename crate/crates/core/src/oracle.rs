//! Numerov shooting solver for `-h22m u'' + V(r) u = E u`.
//!
//! Eigenvalues are located by Sturm node counting: the outward solution
//! started from `u(r_min) = 0` has as many sign changes on the grid as there
//! are Dirichlet eigenvalues below the trial energy.

use crate::error::{Error, Result};
use crate::model::Model;
use crate::spectrum::{self, IndexForm};

/// Threshold above which running solutions are rescaled.
const RESCALE: f64 = 1e200;
/// WKB action kept on each side of the classically allowed region.
const TAIL_ACTION: f64 = 40.0;

/// Uniform radial grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    pub r_min: f64,
    pub r_max: f64,
    pub n_points: usize,
}

impl RadialGrid {
    pub fn new(r_min: f64, r_max: f64, n_points: usize) -> Result<Self> {
        if n_points < 1000 {
            return Err(Error::Solver(format!(
                "grid needs at least 1000 points, got {n_points}"
            )));
        }
        if !(r_max > r_min) || !r_min.is_finite() || !r_max.is_finite() {
            return Err(Error::Solver(format!("empty grid [{r_min}, {r_max}]")));
        }
        Ok(Self {
            r_min,
            r_max,
            n_points,
        })
    }

    pub fn spacing(&self) -> f64 {
        (self.r_max - self.r_min) / (self.n_points - 1) as f64
    }

    pub fn r(&self, i: usize) -> f64 {
        self.r_min + self.spacing() * i as f64
    }

    /// Same extent with twice the resolution.
    pub fn refined(&self) -> Self {
        Self {
            n_points: 2 * self.n_points - 1,
            ..*self
        }
    }

    pub fn sample<F>(&self, mut f: F) -> Result<Vec<f64>>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        (0..self.n_points).map(|i| f(self.r(i))).collect()
    }
}

/// A converged eigenpair on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialSolution {
    /// Eigenvalue, eV.
    pub energy: f64,
    pub n_nodes: u32,
    /// Normalized amplitude, `∫u² dr = 1` on the grid.
    pub u: Vec<f64>,
    pub grid: RadialGrid,
    pub converged: bool,
}

/// Which radial Hamiltonian the oracle solves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hamiltonian {
    /// Exponential surrogates for the Yukawa and centrifugal terms.
    Approximated,
    /// True `1/r` Yukawa and `1/r²` centrifugal terms.
    Exact,
}

impl Hamiltonian {
    pub fn potential(self, model: &Model, r: f64, l: u32) -> Result<f64> {
        match self {
            Hamiltonian::Approximated => model.effective_potential(r, l),
            Hamiltonian::Exact => model.exact_radial_potential(r, l),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleConfig {
    /// Points on the first production grid.
    pub initial_points: usize,
    /// Maximum number of grid doublings before giving up.
    pub max_refinements: u32,
    /// Accepted eigenvalue change under grid doubling, eV.
    pub drift_tol: f64,
    /// Bisection width, eV.
    pub energy_tol: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            initial_points: 4000,
            max_refinements: 6,
            drift_tol: 1e-7,
            energy_tol: 1e-10,
        }
    }
}

fn numerov_coefficients(v: &[f64], h22m: f64, energy: f64, h: f64) -> Vec<f64> {
    let s = h * h / (12.0 * h22m);
    v.iter().map(|&vi| 1.0 - s * (vi - energy)).collect()
}

/// Sign changes of the outward solution over the whole grid.
fn count_outward_nodes(w: &[f64]) -> u32 {
    let (mut prev, mut cur) = (0.0, 1e-30);
    let mut nodes = 0;
    for i in 1..w.len() - 1 {
        let next = ((12.0 - 10.0 * w[i]) * cur - w[i - 1] * prev) / w[i + 1];
        if next == 0.0 || next.signum() != cur.signum() {
            nodes += 1;
        }
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE {
            prev /= RESCALE;
            cur /= RESCALE;
        }
    }
    nodes
}

fn integrate_outward(w: &[f64], upto: usize) -> Vec<f64> {
    let mut u = vec![0.0; upto + 1];
    u[1] = 1e-30;
    for i in 1..upto {
        u[i + 1] = ((12.0 - 10.0 * w[i]) * u[i] - w[i - 1] * u[i - 1]) / w[i + 1];
        if u[i + 1].abs() > RESCALE {
            u[..=i + 1].iter_mut().for_each(|x| *x /= RESCALE);
        }
    }
    u
}

fn integrate_inward(w: &[f64], from: usize) -> Vec<f64> {
    let n = w.len();
    let mut u = vec![0.0; n];
    u[n - 2] = 1e-30;
    for i in (from + 1..n - 1).rev() {
        u[i - 1] = ((12.0 - 10.0 * w[i]) * u[i] - w[i + 1] * u[i + 1]) / w[i - 1];
        if u[i - 1].abs() > RESCALE {
            u[i - 1..].iter_mut().for_each(|x| *x /= RESCALE);
        }
    }
    u
}

fn trapezoid_norm(u: &[f64], h: f64) -> f64 {
    let sum: f64 = u.iter().map(|x| x * x).sum();
    let ends = 0.5 * (u[0] * u[0] + u[u.len() - 1] * u[u.len() - 1]);
    ((sum - ends) * h).sqrt()
}

fn sign_changes(u: &[f64]) -> u32 {
    let mut last = 0.0;
    let mut nodes = 0;
    for &x in u {
        if x == 0.0 {
            continue;
        }
        if last != 0.0 && x.signum() != f64::signum(last) {
            nodes += 1;
        }
        last = x;
    }
    nodes
}

/// The `n_target`-th eigenvalue of `-h22m u'' + V u = E u` with Dirichlet
/// ends, refined by node-count bisection inside `bracket`.
pub fn numerov_eigenvalue(
    v: &[f64],
    grid: &RadialGrid,
    h22m: f64,
    n_target: u32,
    bracket: (f64, f64),
) -> Result<RadialSolution> {
    numerov_eigenvalue_tol(
        v,
        grid,
        h22m,
        n_target,
        bracket,
        OracleConfig::default().energy_tol,
    )
}

fn numerov_eigenvalue_tol(
    v: &[f64],
    grid: &RadialGrid,
    h22m: f64,
    n_target: u32,
    bracket: (f64, f64),
    energy_tol: f64,
) -> Result<RadialSolution> {
    if v.len() != grid.n_points {
        return Err(Error::Solver(format!(
            "potential has {} samples for a {}-point grid",
            v.len(),
            grid.n_points
        )));
    }
    let h = grid.spacing();
    let nodes_at = |e: f64| count_outward_nodes(&numerov_coefficients(v, h22m, e, h));
    let (mut lo, mut hi) = bracket;
    if nodes_at(lo) > n_target || nodes_at(hi) <= n_target {
        return Err(Error::Solver(format!(
            "bracket [{lo}, {hi}] eV does not contain eigenvalue {n_target}"
        )));
    }
    let mut iterations = 0;
    while hi - lo > energy_tol * (1.0 + lo.abs().min(hi.abs())) {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if nodes_at(mid) > n_target {
            hi = mid;
        } else {
            lo = mid;
        }
        iterations += 1;
        if iterations > 200 {
            return Err(Error::Solver("bisection did not converge".into()));
        }
    }
    let energy = 0.5 * (lo + hi);
    let w = numerov_coefficients(v, h22m, energy, h);

    // Match at the outermost classical turning point.
    let turning = v
        .iter()
        .rposition(|&vi| vi < energy)
        .unwrap_or(v.len() / 2)
        .clamp(2, v.len() - 3);
    let outward = integrate_outward(&w, turning);
    let mut u = integrate_inward(&w, turning);
    if u[turning] == 0.0 || outward[turning] == 0.0 {
        return Err(Error::Solver("matching amplitude vanished".into()));
    }
    let scale = outward[turning] / u[turning];
    u[turning..].iter_mut().for_each(|x| *x *= scale);
    u[..turning].copy_from_slice(&outward[..turning]);
    let norm = trapezoid_norm(&u, h);
    u.iter_mut().for_each(|x| *x /= norm);
    if u[0].signum() < 0.0 || u.iter().find(|x| **x != 0.0).is_some_and(|x| *x < 0.0) {
        u.iter_mut().for_each(|x| *x = -*x);
    }
    let n_nodes = sign_changes(&u);
    Ok(RadialSolution {
        energy,
        n_nodes,
        u,
        grid: grid.clone(),
        converged: n_nodes == n_target,
    })
}

/// Point where the WKB action `∫√((V-E)/h22m) dr` measured from the wall
/// at `start` reaches [`TAIL_ACTION`]. Steps shrink geometrically toward
/// `limit`, so a pole there is approached but never crossed.
fn wkb_edge<F>(v: &F, h22m: f64, energy: f64, start: f64, limit: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut r = start;
    let mut action = 0.0;
    let mut step = (limit - start) / 2000.0;
    while action < TAIL_ACTION {
        step = if limit < start {
            step.max(0.01 * (limit - r))
        } else {
            step
        };
        let next = r + step;
        if (step < 0.0 && next <= limit) || (step > 0.0 && next >= limit) || step == 0.0 {
            return Ok(limit);
        }
        let excess = (v(0.5 * (r + next))? - energy).max(0.0);
        action += (excess / h22m).sqrt() * step.abs();
        r = next;
    }
    Ok(r)
}

/// Crossing of `V = energy` between `inside` (below) and `outside` (above).
fn crossing<F>(v: &F, energy: f64, mut inside: f64, mut outside: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    for _ in 0..200 {
        let mid = 0.5 * (inside + outside);
        if mid == inside || mid == outside {
            break;
        }
        if v(mid)? < energy {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    Ok(0.5 * (inside + outside))
}

/// Grid enclosing the classically allowed region at `energy` with
/// [`TAIL_ACTION`] of WKB decay on both sides, bounded by `floor` and `cap`.
fn grid_for<F>(
    v: &F,
    h22m: f64,
    energy: f64,
    well: (f64, f64),
    (floor, cap): (f64, f64),
    points: usize,
) -> Result<RadialGrid>
where
    F: Fn(f64) -> Result<f64>,
{
    let (r_bottom, v_bottom) = well;
    let mut wall = r_bottom;
    while v(wall)? < energy {
        wall = floor + 0.5 * (wall - floor);
    }
    let inner = crossing(v, energy, r_bottom, wall)?;
    let mut far = r_bottom + (r_bottom - floor).max(0.5);
    while far < cap && v(far)? < energy {
        far = r_bottom + 2.0 * (far - r_bottom);
    }
    let outer = if far < cap {
        crossing(v, energy, r_bottom, far)?
    } else {
        cap
    };
    let decay = (h22m / (-energy).max(1e-300)).sqrt();
    let tail_cap = cap.min(outer + 200.0 * decay);
    let r_max = if outer < tail_cap {
        wkb_edge(v, h22m, energy, outer, tail_cap)?.max((outer + 10.0 * decay).min(cap))
    } else {
        cap
    };
    let mut r_min = wkb_edge(v, h22m, energy, inner, floor)?;
    if r_min <= floor {
        r_min = floor + 1e-3 * (inner - floor);
    }
    // Keep h²(V - E)/(12 h22m) small at the inner edge so Numerov stays stable.
    loop {
        let h = (r_max - r_min) / (points - 1) as f64;
        if h * h * (v(r_min)? - v_bottom) / (12.0 * h22m) <= 0.25 {
            break;
        }
        r_min += 0.05 * (inner - r_min);
    }
    RadialGrid::new(r_min, r_max, points)
}

/// Bottom of the well of `v` above `floor`, located by a coarse scan.
fn well_bottom<F>(v: &F, floor: f64, span: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let steps = 8000;
    let start = floor + span * 1e-6;
    let mut best = (start, f64::INFINITY);
    for i in 0..=steps {
        let r = start + span * i as f64 / steps as f64;
        let value = v(r)?;
        if value < best.1 {
            best = (r, value);
        }
    }
    Ok(best)
}

/// Solves level `n` of the chosen Hamiltonian, doubling the grid until the
/// eigenvalue moves by less than `cfg.drift_tol`.
pub fn solve_level(
    model: &Model,
    n: u32,
    l: u32,
    hamiltonian: Hamiltonian,
    cfg: &OracleConfig,
) -> Result<RadialSolution> {
    let v = |r: f64| hamiltonian.potential(model, r, l);
    let floor = model.singularity_radius();
    let span = 40.0 / model.alpha();
    let well = well_bottom(&v, floor, span)?;
    let asymptote = v(floor + span)?;

    // Provisional solve across the whole well to learn the grid extent.
    let top = asymptote - 1e-9 * well.1.abs();
    let bounds = (floor, floor + span);
    let rough = grid_for(&v, model.h22m, top, well, bounds, 4 * cfg.initial_points)?;
    let samples = rough.sample(v)?;
    let guess = numerov_eigenvalue_tol(&samples, &rough, model.h22m, n, (well.1, top), 1e-8)?;

    let mut grid = grid_for(
        &v,
        model.h22m,
        guess.energy,
        well,
        bounds,
        cfg.initial_points,
    )?;
    let solve = |grid: &RadialGrid| -> Result<RadialSolution> {
        let samples = grid.sample(v)?;
        let top = samples[grid.n_points - 1].min(asymptote);
        numerov_eigenvalue_tol(&samples, grid, model.h22m, n, (well.1, top), cfg.energy_tol)
    };
    let mut previous = solve(&grid)?;
    for _ in 0..cfg.max_refinements {
        grid = grid.refined();
        let current = solve(&grid)?;
        let drift = (current.energy - previous.energy).abs();
        log::debug!(
            "n={n} l={l} {hamiltonian:?}: {} points, E = {}, drift {drift:e}",
            grid.n_points,
            current.energy
        );
        if drift < cfg.drift_tol {
            return Ok(current);
        }
        previous = current;
    }
    Err(Error::Solver(format!(
        "grid too coarse: eigenvalue {n} still drifting after {} doublings",
        cfg.max_refinements
    )))
}

/// One row of the Pekeris approximation report.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub n: u32,
    pub l: u32,
    /// Closed-form energy with the published index η₂.
    pub analytic_published: f64,
    /// Closed-form energy with the exact index η₂.
    pub analytic_exact: f64,
    pub numerov_approximated: f64,
    pub numerov_exact: f64,
}

impl ReportRow {
    /// Relative deviation of the approximated-Hamiltonian eigenvalue from the closed form.
    pub fn relative_delta(&self, form: IndexForm) -> f64 {
        let analytic = match form {
            IndexForm::Published => self.analytic_published,
            IndexForm::Exact => self.analytic_exact,
        };
        ((self.numerov_approximated - analytic) / analytic).abs()
    }

    /// Exact-Hamiltonian eigenvalue minus the approximated one, eV.
    pub fn approximation_error(&self) -> f64 {
        self.numerov_exact - self.numerov_approximated
    }
}

/// Closed form versus Numerov on both Hamiltonians, one row per (n, l).
pub fn approximation_error_report(
    model: &Model,
    ls: &[u32],
    ns: &[u32],
    cfg: &OracleConfig,
) -> Vec<Result<ReportRow>> {
    let mut rows = Vec::new();
    for &l in ls {
        let published = spectrum::constants_with_form(model, l, IndexForm::Published);
        let exact = spectrum::constants_with_form(model, l, IndexForm::Exact);
        for &n in ns {
            rows.push((|| {
                Ok(ReportRow {
                    n,
                    l,
                    analytic_published: spectrum::energy(&published, n)?.energy,
                    analytic_exact: spectrum::energy(&exact, n)?.energy,
                    numerov_approximated: solve_level(model, n, l, Hamiltonian::Approximated, cfg)?
                        .energy,
                    numerov_exact: solve_level(model, n, l, Hamiltonian::Exact, cfg)?.energy,
                })
            })());
        }
    }
    rows
}
