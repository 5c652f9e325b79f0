//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines always reach the terminal; exits nonzero on any FAIL.

use std::fmt::Write as _;
use std::path::Path;
use std::time::{Duration, Instant};

use diatherm::calibrate::{calibrate, evaluate};
use diatherm::oracle::{solve_level, Hamiltonian, OracleConfig};
use diatherm::reference::{published_energies, published_lambda_max, GRID_N, GRID_Q};
use diatherm::specfun::{dawson, erfi_scaled};
use diatherm::spectrum::{constants, constants_with_form, energy, energy_full_form};
use diatherm::thermo::{partition_closed, partition_integral_form, thermo_closed};
use diatherm::validation::derivative_errors;
use diatherm::{
    builtin_catalog, IndexForm, Model, MoleculeSpec, PhysicalConstants, ThermoConfig, WaveFunction,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

struct Outcome {
    id: &'static str,
    title: &'static str,
    passed: bool,
    detail: String,
    elapsed: Duration,
    budget: Option<Duration>,
}

struct Suite {
    outcomes: Vec<Outcome>,
}

impl Suite {
    fn run<F>(&mut self, id: &'static str, title: &'static str, budget: Option<Duration>, f: F)
    where
        F: FnOnce() -> (bool, String),
    {
        let start = Instant::now();
        let (passed, detail) = f();
        let elapsed = start.elapsed();
        let outcome = Outcome {
            id,
            title,
            passed,
            detail,
            elapsed,
            budget,
        };
        print_outcome(&outcome);
        self.outcomes.push(outcome);
    }
}

fn print_outcome(o: &Outcome) {
    let status = if o.passed { "PASS" } else { "FAIL" };
    let timing = match o.budget {
        Some(b) if o.elapsed > b => format!("{:.2?}, over the {:.0?} budget", o.elapsed, b),
        Some(b) => format!("{:.2?} of {:.0?}", o.elapsed, b),
        None => format!("{:.2?}", o.elapsed),
    };
    println!("{status} [{}] {}: {} ({timing})", o.id, o.title, o.detail);
}

fn molecules() -> Vec<MoleculeSpec> {
    builtin_catalog().entries.into_values().collect()
}

fn molecule(name: &str) -> MoleculeSpec {
    builtin_catalog().get(name).unwrap().clone()
}

fn criterion_1() -> (bool, String) {
    let mut ok = true;
    let mut detail = String::new();
    for mol in molecules() {
        let sc = constants(&Model::new(&mol, 1.0, 0.0).unwrap(), 0);
        let got = sc.lambda_max.map_or(-1, i64::from);
        let want = i64::from(published_lambda_max(&mol.name).unwrap());
        let tol = if mol.name == "H2" { 0 } else { 1 };
        let hit = (got - want).abs() <= tol;
        ok &= hit;
        let _ = write!(
            detail,
            "{}={got}/{want}{} ",
            mol.name,
            if hit { "" } else { "!" }
        );
    }
    (ok, detail.trim_end().to_string())
}

fn criterion_2a() -> (bool, String) {
    let mut worst = (0.0f64, String::new());
    let mut failing = 0;
    let mut per_mol = String::new();
    for mol in molecules() {
        let grid = published_energies(&mol.name).unwrap();
        let mut mol_worst = 0.0f64;
        for (row, &n) in GRID_N.iter().enumerate() {
            for (col, &q) in GRID_Q.iter().enumerate() {
                let sc = constants(&Model::new(&mol, q, 0.0).unwrap(), 0);
                let want = grid[row][col];
                let dev = match energy(&sc, n) {
                    Ok(level) => ((level.energy - want) / want).abs(),
                    Err(_) => f64::INFINITY,
                };
                if !(dev <= 0.01) {
                    failing += 1;
                }
                mol_worst = mol_worst.max(dev);
                if dev > worst.0 {
                    worst = (dev, format!("{} n={n} q={q}", mol.name));
                }
            }
        }
        let _ = write!(per_mol, "{}={:.2}% ", mol.name, 100.0 * mol_worst);
    }
    (
        failing == 0,
        format!(
            "{failing}/180 cells outside 1%; worst {:.2}% at {}; per molecule {}",
            100.0 * worst.0,
            worst.1,
            per_mol.trim_end()
        ),
    )
}

fn criterion_2b() -> (bool, String) {
    let mut ok = true;
    let mut detail = String::new();
    for mol in molecules() {
        match calibrate(&mol, IndexForm::Published, &PhysicalConstants::default()) {
            Ok(fit) => {
                let hit = fit.residual <= fit.residual_at_zero;
                ok &= hit;
                let worst = fit
                    .cells
                    .iter()
                    .map(|c| c.relative.abs())
                    .fold(0.0, f64::max);
                let _ = write!(
                    detail,
                    "{}: c={:.4} worst {:.2}%; ",
                    mol.name,
                    fit.c,
                    100.0 * worst
                );
            }
            Err(e) => {
                ok = false;
                let _ = write!(detail, "{}: {e}; ", mol.name);
            }
        }
    }
    (ok, detail.trim_end_matches("; ").to_string())
}

fn criterion_2_anchors() -> (bool, String) {
    let anchors = [
        ("H2", 1.0, 0, -4.14360),
        ("CO", 1.0, 0, -10.9744),
        ("I2", 2.0, 0, -1.52541),
    ];
    let mut ok = true;
    let mut detail = String::new();
    for (name, q, n, want) in anchors {
        let sc = constants(&Model::new(&molecule(name), q, 0.0).unwrap(), 0);
        let got = energy(&sc, n).unwrap().energy;
        let dev = ((got - want) / want).abs();
        ok &= dev <= 0.01;
        let _ = write!(
            detail,
            "{name}(q={q},n={n}) {got:.5} vs {want} ({:.2}%); ",
            100.0 * dev
        );
    }
    (ok, detail.trim_end_matches("; ").to_string())
}

fn criterion_3() -> (bool, String) {
    let mols = molecules();
    let mut rng = StdRng::seed_from_u64(3);
    let mut worst = 0.0f64;
    let mut draws = 0;
    while draws < 1000 {
        let mol = &mols[rng.gen_range(0..mols.len())];
        let q = rng.gen_range(1.0..=2.0);
        let c = rng.gen_range(0.0..=1.0);
        let l = rng.gen_range(0..=3);
        let model = Model::new(mol, q, c).unwrap();
        let sc = constants(&model, l);
        let Some(top) = sc.lambda_max else { continue };
        let n = rng.gen_range(0..=top);
        let simple = energy(&sc, n).unwrap().energy;
        let full = energy_full_form(&model, &sc, n).unwrap();
        worst = worst.max(((simple - full) / full).abs());
        draws += 1;
    }
    (
        worst < 1e-12,
        format!("worst relative difference {worst:.2e} over {draws} draws (tolerance 1e-12)"),
    )
}

fn criterion_4(form: IndexForm) -> (bool, String) {
    let cfg = OracleConfig::default();
    let mut worst = (0.0f64, String::new());
    let mut errors = Vec::new();
    for name in ["H2", "CO"] {
        for q in [1.0, 2.0] {
            let model = Model::new(&molecule(name), q, 0.0).unwrap();
            for l in 0..=2 {
                let sc = constants_with_form(&model, l, form);
                for n in 0..=3 {
                    let analytic = energy(&sc, n).unwrap().energy;
                    match solve_level(&model, n, l, Hamiltonian::Approximated, &cfg) {
                        Ok(sol) => {
                            let dev = ((sol.energy - analytic) / analytic).abs();
                            if sol.n_nodes != n {
                                errors.push(format!(
                                    "{name} q={q} n={n} l={l}: {} nodes",
                                    sol.n_nodes
                                ));
                            }
                            if dev > worst.0 {
                                worst = (dev, format!("{name} q={q} n={n} l={l}"));
                            }
                        }
                        Err(e) => errors.push(format!("{name} q={q} n={n} l={l}: {e}")),
                    }
                }
            }
        }
    }
    (
        errors.is_empty() && worst.0 < 1e-5,
        format!(
            "{} index form: worst relative deviation {:.2e} at {} (tolerance 1e-5){}",
            form.name(),
            worst.0,
            worst.1,
            if errors.is_empty() {
                String::new()
            } else {
                format!("; errors: {}", errors.join(", "))
            }
        ),
    )
}

fn criterion_5() -> (bool, String) {
    let mols = molecules();
    let mut rng = StdRng::seed_from_u64(5);
    let mut worst = (0.0f64, String::new());
    for _ in 0..50 {
        let mol = &mols[rng.gen_range(0..mols.len())];
        let q = rng.gen_range(1.0..=2.0);
        let beta = rng.gen_range(0.5..=100.0);
        let sc = constants(&Model::new(mol, q, 0.0).unwrap(), 0);
        let cfg = ThermoConfig::new(sc, vec![beta]).unwrap();
        let dev = match (
            partition_closed(&cfg, beta),
            partition_integral_form(&cfg, beta, 1e-12),
        ) {
            (Ok(c), Ok(i)) => (c.ratio(&i) - 1.0).abs(),
            _ => f64::INFINITY,
        };
        if !(dev <= worst.0) {
            worst = (dev, format!("{} q={q:.3} beta={beta:.3}", mol.name));
        }
    }
    (
        worst.0 < 1e-8,
        format!(
            "worst relative difference {:.2e} at {} over 50 draws (tolerance 1e-8)",
            worst.0, worst.1
        ),
    )
}

fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    (0..points)
        .map(|i| lo * (hi / lo).powf(i as f64 / (points - 1) as f64))
        .collect()
}

fn criterion_6() -> (bool, String) {
    let names = ["U", "C", "S", "F"];
    let tols = [1e-6, 1e-5, 1e-10, 1e-10];
    let mut worst: [(f64, String); 4] = std::array::from_fn(|_| (0.0, "every point".to_string()));
    for mol in molecules() {
        let sc = constants(&Model::new(&mol, 1.0, 0.0).unwrap(), 0);
        let cfg = ThermoConfig::new(sc, Vec::new()).unwrap();
        for beta in log_grid(0.5, 100.0, 25) {
            let errs = derivative_errors(&cfg, beta).unwrap_or([f64::INFINITY; 4]);
            for (w, e) in worst.iter_mut().zip(errs) {
                if !(e <= w.0) {
                    *w = (e, format!("{} beta={beta:.3}", mol.name));
                }
            }
        }
    }
    let ok = worst.iter().zip(tols).all(|(w, t)| w.0 <= t);
    let detail = names
        .iter()
        .zip(&worst)
        .zip(tols)
        .map(|((n, w), t)| format!("{n} {:.1e}/{t:.0e} at {}", w.0, w.1))
        .collect::<Vec<_>>()
        .join("; ");
    (ok, detail)
}

fn read_pairs(path: &Path) -> Vec<(f64, f64)> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let (x, y) = l.split_once(',').unwrap();
            (x.parse().unwrap(), y.parse().unwrap())
        })
        .collect()
}

fn criterion_7() -> (bool, String) {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/dawson_reference.csv");
    let pairs = read_pairs(&data);
    let abs_err = pairs
        .iter()
        .map(|&(x, want)| (dawson(x) - want).abs())
        .fold(0.0, f64::max);

    let mut ode = 0.0f64;
    for i in 0..=1000 {
        let x = -50.0 + 0.1 * f64::from(i);
        let h = 1e-3;
        let d = |h: f64| (dawson(x + h) - dawson(x - h)) / (2.0 * h);
        let fd = (4.0 * d(0.5 * h) - d(h)) / 3.0;
        ode = ode.max((fd - (1.0 - 2.0 * x * dawson(x))).abs());
    }

    // erfi(x) e^{-x²} x√π → 1 + 1/(2x²) + 3/(4x⁴) + 15/(8x⁶) + 105/(16x⁸) for large x.
    let mut erfi_dev = 0.0f64;
    let mut finite = true;
    for x in [20.0, 25.0, 26.6, 27.0, 30.0] {
        let v = erfi_scaled(x);
        finite &= v.ln_abs().is_finite() && v.mantissa.is_finite();
        let y = 1.0 / (x * x);
        let series = 1.0 + y * (0.5 + y * (0.75 + y * (1.875 + y * (6.5625 + y * 29.53125))));
        let want = x * x - (x * std::f64::consts::PI.sqrt()).ln() + series.ln();
        erfi_dev = erfi_dev.max((v.ln_abs() - want).abs() / want);
    }
    let ok = abs_err <= 1e-13 && ode < 1e-10 && finite && erfi_dev < 1e-12;
    (
        ok,
        format!(
            "dawson max abs error {abs_err:.1e} on {} points (1e-13); ODE residual {ode:.1e} (1e-10); erfi to x=30 finite={finite}, ln deviation {erfi_dev:.1e}",
            pairs.len()
        ),
    )
}

fn criterion_8() -> (bool, String) {
    let mut ok = true;
    let mut worst_overlap = (0.0f64, String::new());
    let mut node_failures = Vec::new();
    let mut states = 0;
    let (mut ratio_lo, mut ratio_hi) = (f64::INFINITY, 0.0f64);
    for name in ["H2", "LiH"] {
        for q in [1.0, 2.0] {
            let model = Model::new(&molecule(name), q, 0.0).unwrap();
            for l in 0..=1 {
                let sc = constants(&model, l);
                let Some(top) = sc.lambda_max else {
                    ok = false;
                    continue;
                };
                let mut wfs = Vec::new();
                for n in 0..=top {
                    match WaveFunction::new(&model, n, l, IndexForm::Published) {
                        Ok(wf) => {
                            states += 1;
                            let nodes = wf.count_nodes();
                            if nodes != n {
                                node_failures.push(format!("{name} q={q} l={l} n={n}: {nodes}"));
                            }
                            if n <= 3 {
                                let r = wf.normalization_ratio();
                                ratio_lo = ratio_lo.min(r);
                                ratio_hi = ratio_hi.max(r);
                            }
                            wfs.push(wf);
                        }
                        Err(e) => node_failures.push(format!("{name} q={q} l={l} n={n}: {e}")),
                    }
                }
                for (i, a) in wfs.iter().enumerate() {
                    for b in &wfs[i..] {
                        let s = a.overlap(b).unwrap_or(f64::INFINITY);
                        let dev = if a.n == b.n { (s - 1.0).abs() } else { s.abs() };
                        if !(dev <= worst_overlap.0) {
                            worst_overlap = (dev, format!("{name} q={q} l={l} <{}|{}>", a.n, b.n));
                        }
                    }
                }
            }
        }
    }
    ok &= node_failures.is_empty() && worst_overlap.0 <= 1e-6;
    (
        ok,
        format!(
            "{states} states, node mismatches {}; worst overlap deviation {:.1e} at {} (1e-6); analytic/numeric norm ratio for n<=3 in [{ratio_lo:.3}, {ratio_hi:.3}] (informational)",
            if node_failures.is_empty() { "none".to_string() } else { node_failures.join(", ") },
            worst_overlap.0,
            worst_overlap.1
        ),
    )
}

fn interior_maxima(values: &[f64]) -> usize {
    values
        .windows(3)
        .filter(|w| w[1] > w[0] && w[1] >= w[2])
        .count()
}

fn criterion_9() -> (bool, String) {
    let mut failures = Vec::new();
    for mol in molecules() {
        // E rises toward 0 with n and with l.
        let model = Model::new(&mol, 1.0, 0.0).unwrap();
        for l in 0..3 {
            let sc = constants(&model, l);
            let up = constants(&model, l + 1);
            let top = sc.lambda_max.unwrap_or(0).min(up.lambda_max.unwrap_or(0));
            for n in 0..=top {
                let e = energy(&sc, n).unwrap().energy;
                if e >= 0.0 || (n > 0 && e <= energy(&sc, n - 1).unwrap().energy) {
                    failures.push(format!("{} E not rising with n at n={n} l={l}", mol.name));
                }
                if energy(&up, n).unwrap().energy <= e {
                    failures.push(format!("{} E not rising with l at n={n} l={l}", mol.name));
                }
            }
        }
        // |E| grows with D_e.
        let mut last = 0.0;
        for k in 0..10 {
            let mut deeper = mol.clone();
            deeper.d_e = mol.d_e * (0.6 + 0.1 * f64::from(k));
            let sc = constants(&Model::new(&deeper, 1.0, 0.0).unwrap(), 0);
            let e = energy(&sc, 0).unwrap().energy.abs();
            if e <= last {
                failures.push(format!("{} |E0| not growing with D_e", mol.name));
            }
            last = e;
        }
        // Z falls with q at fixed beta.
        let beta = 5.0;
        let mut last_z = f64::INFINITY;
        for k in 0..=10 {
            let q = 1.0 + 0.1 * f64::from(k);
            let sc = constants(&Model::new(&mol, q, 0.0).unwrap(), 0);
            let cfg = ThermoConfig::new(sc, vec![beta]).unwrap();
            let ln_z = partition_closed(&cfg, beta).unwrap().ln_abs();
            if ln_z >= last_z {
                failures.push(format!("{} Z not decreasing in q at q={q:.1}", mol.name));
            }
            last_z = ln_z;
        }
        // Z grows with λ_max, here raised through D_e.
        let mut last = (0u32, f64::NEG_INFINITY);
        for k in 0..10 {
            let mut deeper = mol.clone();
            deeper.d_e = mol.d_e * (0.6 + 0.1 * f64::from(k));
            let sc = constants(&Model::new(&deeper, 1.0, 0.0).unwrap(), 0);
            let lm = sc.lambda_max.unwrap_or(0);
            let cfg = ThermoConfig::new(sc, vec![beta]).unwrap();
            let ln_z = partition_closed(&cfg, beta).unwrap().ln_abs();
            if lm > last.0 && ln_z <= last.1 {
                failures.push(format!("{} Z not growing with lambda_max={lm}", mol.name));
            }
            last = (lm.max(last.0), ln_z);
        }
        // One interior maximum of C on [0.1, 200].
        let sc = constants(&model, 0);
        let betas = log_grid(0.1, 200.0, 400);
        let cfg = ThermoConfig::new(sc, betas.clone()).unwrap();
        let c: Vec<f64> = betas
            .iter()
            .map(|&b| thermo_closed(&cfg, b).map_or(f64::NAN, |p| p.heat_capacity))
            .collect();
        let maxima = interior_maxima(&c);
        let first_last = c[0] < c.iter().cloned().fold(f64::MIN, f64::max)
            && c[c.len() - 1] < c.iter().cloned().fold(f64::MIN, f64::max);
        if maxima != 1 || !first_last || c.iter().any(|x| !x.is_finite()) {
            failures.push(format!("{}: C has {maxima} interior maxima", mol.name));
        }
    }
    (
        failures.is_empty(),
        if failures.is_empty() {
            "E(n), E(l), |E|(D_e), Z(q), Z(lambda_max) monotone and one C maximum for all six molecules".to_string()
        } else {
            failures.join("; ")
        },
    )
}

fn main() {
    let mut suite = Suite {
        outcomes: Vec::new(),
    };
    let s = Duration::from_secs;
    suite.run(
        "1",
        "lambda_max reproduction",
        Some(Duration::from_millis(100)),
        criterion_1,
    );
    suite.run(
        "2",
        "published energy grid within 1% at c = 0",
        Some(s(1)),
        criterion_2a,
    );
    suite.run(
        "2",
        "calibrated c does not increase the residual",
        None,
        criterion_2b,
    );
    suite.run("2", "spot anchors", None, criterion_2_anchors);
    suite.run("3", "two-form consistency", Some(s(1)), criterion_3);
    suite.run("4", "Numerov equivalence", Some(s(60)), || {
        criterion_4(IndexForm::Published)
    });
    suite.run(
        "4",
        "Numerov equivalence, corrected index",
        Some(s(60)),
        || criterion_4(IndexForm::Exact),
    );
    suite.run(
        "5",
        "Poisson closed form vs quadrature",
        Some(s(10)),
        criterion_5,
    );
    suite.run(
        "6",
        "thermodynamic derivatives and identities",
        Some(s(10)),
        criterion_6,
    );
    suite.run("7", "special functions", None, criterion_7);
    suite.run("8", "wave functions", None, criterion_8);
    suite.run("9", "figure trends", Some(s(30)), criterion_9);

    // Fixed-c deviation report accompanies criterion 2.
    let h2 = molecule("H2");
    let fixed = evaluate(
        &h2,
        0.0,
        IndexForm::Published,
        &PhysicalConstants::default(),
    )
    .unwrap();
    println!("note: H2 residual at c = 0 is {:.3e}", fixed.residual);

    let failed: Vec<_> = suite.outcomes.iter().filter(|o| !o.passed).collect();
    println!(
        "acceptance: {} of {} lines passed",
        suite.outcomes.len() - failed.len(),
        suite.outcomes.len()
    );
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
