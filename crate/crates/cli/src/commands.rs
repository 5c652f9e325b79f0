use std::path::Path;

use anyhow::{anyhow, Context as _};
use diatherm::calibrate::{calibrate, evaluate};
use diatherm::reference::{
    published_energies, published_lambda_max, GRID_N, GRID_Q, PUBLISHED_ENERGIES,
};
use diatherm::spectrum::{self, constants_with_form, energy, n_max_literal};
use diatherm::thermo::{thermo_closed, thermo_curve, thermo_exact};
use diatherm::validation::{validate, ValidationOptions};
use diatherm::{
    Catalog, IndexForm, Model, MoleculeSpec, PhysicalConstants, ThermoConfig, WaveFunction,
};

use crate::args::*;
use crate::output::{emit, num, per_molecule_path, sci, Table};
use crate::Failure;

pub struct Context<'a> {
    pub catalog: &'a Catalog,
    pub constants: PhysicalConstants,
    pub out: Option<&'a Path>,
}

impl Context<'_> {
    fn molecule(&self, name: Option<&str>) -> Result<&MoleculeSpec, Failure> {
        let name = name.ok_or_else(|| Failure::usage(anyhow!("a molecule name is required")))?;
        self.catalog.get(name).map_err(Failure::from)
    }

    fn model(&self, mol: &MoleculeSpec, q: f64, c: f64) -> Result<Model, Failure> {
        Model::with_constants(mol, q, c, &self.constants).map_err(Failure::from)
    }

    fn table(&self, command: &str, header: &[&str]) -> Table {
        Table::new(command, self.catalog, &self.constants, header)
    }

    fn emit(&self, table: &Table) -> Result<(), Failure> {
        emit(table, self.out).map_err(Failure::compute)
    }
}

/// `a..b` inclusive, a single integer, or a comma list.
pub fn parse_levels(spec: &str) -> Result<Vec<u32>, Failure> {
    let bad = || {
        Failure::usage(anyhow!(
            "invalid level range `{spec}`: use a..b, k, or a,b,c"
        ))
    };
    if let Some((a, b)) = spec.split_once("..") {
        let a: u32 = a.trim().parse().map_err(|_| bad())?;
        let b: u32 = b
            .trim()
            .trim_start_matches('=')
            .parse()
            .map_err(|_| bad())?;
        if b < a {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    spec.split(',')
        .map(|s| s.trim().parse().map_err(|_| bad()))
        .collect()
}

fn log_grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..steps)
            .map(|i| lo * (hi / lo).powf(i as f64 / (steps - 1) as f64))
            .collect(),
    }
}

fn linear_grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..steps)
            .map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64)
            .collect(),
    }
}

fn model_note(table: &mut Table, q: &[f64], c: f64, form: IndexForm) {
    let qs: Vec<String> = q.iter().map(|x| num(*x)).collect();
    table.note(format!(
        "q={} c={c} eV*A index_form={}",
        qs.join(";"),
        form.name()
    ));
}

pub fn spectrum(ctx: &Context, args: &SpectrumArgs) -> Result<(), Failure> {
    let form = IndexForm::from(args.model.form);
    if args.table2 {
        return grid_report(ctx, args.model.c, form);
    }
    let mol = ctx.molecule(args.model.molecule())?;
    let explicit = args.n.as_deref().map(parse_levels).transpose()?;
    let mut table = ctx.table("spectrum", &["n", "l", "q", "E_eV"]);
    table.molecule(mol);
    model_note(&mut table, &args.model.q, args.model.c, form);
    for &q in &args.model.q {
        let model = ctx.model(mol, q, args.model.c)?;
        for &l in &args.l {
            let sc = constants_with_form(&model, l, form);
            let levels = match &explicit {
                Some(ns) => ns.clone(),
                None => (0..=sc
                    .lambda_max
                    .ok_or_else(|| Failure::compute(anyhow!("no bound states")))?)
                    .collect(),
            };
            for n in levels {
                let e = energy(&sc, n).map_err(Failure::from)?;
                table.push(vec![n.to_string(), l.to_string(), num(q), num(e.energy)]);
            }
        }
    }
    ctx.emit(&table)
}

fn grid_report(ctx: &Context, c: f64, form: IndexForm) -> Result<(), Failure> {
    let mut table = ctx.table(
        "spectrum --table2",
        &[
            "molecule",
            "n",
            "l",
            "q",
            "E_eV",
            "E_published_eV",
            "rel_deviation",
        ],
    );
    table.note(format!("c={c} eV*A index_form={} l=0", form.name()));
    for (name, grid) in PUBLISHED_ENERGIES {
        let mol = ctx.catalog.get(name).map_err(Failure::from)?;
        for (row, &n) in GRID_N.iter().enumerate() {
            for (col, &q) in GRID_Q.iter().enumerate() {
                let sc = constants_with_form(&ctx.model(mol, q, c)?, 0, form);
                let published = grid[row][col];
                let (e, dev) = match energy(&sc, n) {
                    Ok(level) => (
                        num(level.energy),
                        sci((level.energy - published) / published.abs()),
                    ),
                    Err(_) => ("NaN".into(), "NaN".into()),
                };
                table.push(vec![
                    name.to_string(),
                    n.to_string(),
                    "0".into(),
                    num(q),
                    e,
                    num(published),
                    dev,
                ]);
            }
        }
    }
    ctx.emit(&table)
}

pub fn lambdamax(ctx: &Context, args: &LambdamaxArgs) -> Result<(), Failure> {
    let form = IndexForm::from(args.form);
    let names: Vec<String> = if args.molecules.is_empty() {
        ctx.catalog.names().map(str::to_string).collect()
    } else {
        args.molecules.clone()
    };
    let mut table = ctx.table(
        "lambdamax",
        &[
            "molecule",
            "lambda_cont",
            "floor",
            "round",
            "published",
            "match",
            "note",
        ],
    );
    table.note(format!(
        "q={} c={} eV*A l={} index_form={}",
        args.q,
        args.c,
        args.l,
        form.name()
    ));
    for name in names {
        let mol = ctx.molecule(Some(&name))?;
        let sc = constants_with_form(&ctx.model(mol, args.q, args.c)?, args.l, form);
        let cont = sc.lambda_max_cont;
        let floor = sc.lambda_max.map_or("none".to_string(), |v| v.to_string());
        let round = if cont >= 0.0 {
            format!("{}", cont.round())
        } else {
            "none".into()
        };
        let reference =
            published_lambda_max(&name).filter(|_| args.q == 1.0 && args.c == 0.0 && args.l == 0);
        let (reference_s, status, note) = match (reference, sc.lambda_max) {
            (Some(r), Some(f)) => {
                let status = if f == r {
                    "match"
                } else if f.abs_diff(r) <= 1 {
                    "within_1"
                } else {
                    "mismatch"
                };
                let note = if f != r && cont.round() as u32 == r {
                    "mismatch by rounding: the published value is the rounded root"
                } else {
                    ""
                };
                (r.to_string(), status, note)
            }
            (Some(r), None) => (r.to_string(), "mismatch", ""),
            (None, _) => (String::new(), "", ""),
        };
        table.push(vec![
            name.clone(),
            num(cont),
            floor,
            round,
            reference_s,
            status.into(),
            note.into(),
        ]);
    }
    ctx.emit(&table)
}

fn beta_grid(ctx: &Context, args: &ThermoArgs) -> Result<(Vec<f64>, Option<Vec<f64>>), Failure> {
    let beta_given =
        args.beta_min.is_some() || args.beta_max.is_some() || args.beta_steps.is_some();
    let temp_given =
        args.temp_min.is_some() || args.temp_max.is_some() || args.temp_steps.is_some();
    if beta_given && temp_given {
        return Err(Failure::usage(anyhow!(
            "give either a beta range or a temperature range, not both"
        )));
    }
    if temp_given {
        let (lo, hi) = (
            args.temp_min.unwrap_or(300.0),
            args.temp_max.unwrap_or(args.temp_min.unwrap_or(300.0)),
        );
        if !(lo > 0.0 && hi >= lo) {
            return Err(Failure::usage(anyhow!(
                "temperature range must satisfy 0 < min <= max"
            )));
        }
        let temps = log_grid(lo, hi, args.temp_steps.unwrap_or(100));
        let betas = temps
            .iter()
            .map(|&t| ctx.constants.beta_from_temperature(t))
            .collect::<Result<Vec<_>, _>>()
            .map_err(Failure::from)?;
        return Ok((betas, Some(temps)));
    }
    let lo = args.beta_min.unwrap_or(0.1);
    let hi = args
        .beta_max
        .unwrap_or(if args.beta_min.is_some() && args.beta_steps == Some(1) {
            lo
        } else {
            200.0
        });
    if !(lo > 0.0 && hi >= lo) {
        return Err(Failure::usage(anyhow!(
            "beta range must satisfy 0 < min <= max"
        )));
    }
    Ok((log_grid(lo, hi, args.beta_steps.unwrap_or(200)), None))
}

pub fn thermo(ctx: &Context, args: &ThermoArgs) -> Result<(), Failure> {
    let form = IndexForm::from(args.form);
    let names: Vec<String> = if args.all {
        ctx.catalog.names().map(str::to_string).collect()
    } else if let Some(m) = &args.molecule_flag {
        vec![m.clone()]
    } else {
        args.molecules.clone()
    };
    if names.is_empty() {
        return Err(Failure::usage(anyhow!(
            "name at least one molecule or pass --all"
        )));
    }
    let (betas, temps) = beta_grid(ctx, args)?;
    let several_q = args.q.len() > 1;
    let mut header = Vec::new();
    if several_q {
        header.push("q");
    }
    if temps.is_some() {
        header.push("T_K");
    }
    header.extend(["beta", "lnZ_closed", "lnZ_exact", "F", "U", "C", "S"]);

    if names.len() > 1 {
        let dir = ctx
            .out
            .ok_or_else(|| Failure::usage(anyhow!("several molecules need --out <directory>")))?;
        std::fs::create_dir_all(dir)
            .with_context(|| format!("creating {}", dir.display()))
            .map_err(Failure::compute)?;
    }
    for name in &names {
        let mol = ctx.molecule(Some(name))?;
        let mut table = ctx.table("thermo", &header);
        table.molecule(mol);
        model_note(&mut table, &args.q, args.c, form);
        table.note(format!(
            "l={}; F, U, C, S from the closed form; U, F in eV; C, S in units of k_B",
            args.l
        ));
        for &q in &args.q {
            let sc = constants_with_form(&ctx.model(mol, q, args.c)?, args.l, form);
            let cfg = ThermoConfig::new(sc, betas.clone()).map_err(Failure::from)?;
            for (i, sample) in thermo_curve(&cfg).into_iter().enumerate() {
                let closed = sample.closed.map_err(Failure::from)?;
                let exact = sample.exact.map_err(Failure::from)?;
                let mut row = Vec::new();
                if several_q {
                    row.push(num(q));
                }
                if let Some(t) = &temps {
                    row.push(num(t[i]));
                }
                row.extend([
                    num(sample.beta),
                    num(closed.ln_z),
                    num(exact.ln_z),
                    num(closed.free_energy),
                    num(closed.mean_energy),
                    num(closed.heat_capacity),
                    num(closed.entropy),
                ]);
                table.push(row);
            }
        }
        if names.len() > 1 {
            let path = per_molecule_path(ctx.out.unwrap(), "thermo", name);
            emit(&table, Some(&path)).map_err(Failure::compute)?;
        } else {
            ctx.emit(&table)?;
        }
    }
    Ok(())
}

pub fn sweep(ctx: &Context, args: &SweepArgs) -> Result<(), Failure> {
    let form = IndexForm::from(args.model.form);
    let base = ctx.molecule(args.model.molecule())?;
    let levels = parse_levels(&args.n)?;
    let column = args.param.column();
    let mut table = ctx.table("sweep", &[column, "n", "l", "E_eV"]);
    table.molecule(base);
    model_note(&mut table, &args.model.q, args.model.c, form);
    table.note(format!(
        "swept {column} from {} to {} in {} steps",
        args.from, args.to, args.steps
    ));
    let q0 = args.model.q[0];
    let mut skipped = 0;
    for value in linear_grid(args.from, args.to, args.steps) {
        let mut mol = base.clone();
        let (mut q, mut c) = (q0, args.model.c);
        match args.param {
            SweepParam::Alpha => mol.alpha = value,
            SweepParam::De => mol.d_e = value,
            SweepParam::Q => q = value,
            SweepParam::C => c = value,
        }
        let model = ctx.model(&mol, q, c)?;
        for &l in &args.l {
            let sc = constants_with_form(&model, l, form);
            for &n in &levels {
                match energy(&sc, n) {
                    Ok(level) => table.push(vec![
                        num(value),
                        n.to_string(),
                        l.to_string(),
                        num(level.energy),
                    ]),
                    Err(_) => skipped += 1,
                }
            }
        }
    }
    if skipped > 0 {
        log::warn!("{skipped} (value, n, l) points lie above lambda_max and were omitted");
    }
    ctx.emit(&table)
}

pub fn wavefunction(ctx: &Context, args: &WavefunctionArgs) -> Result<(), Failure> {
    let form = IndexForm::from(args.model.form);
    let mol = ctx.molecule(args.model.molecule())?;
    let model = ctx.model(mol, args.model.q[0], args.model.c)?;
    let wf = WaveFunction::new(&model, args.n, args.l, form).map_err(Failure::from)?;
    let mut table = ctx.table("wavefunction", &["r_A", "amplitude"]);
    table.molecule(mol);
    model_note(&mut table, &args.model.q[..1], args.model.c, form);
    table.note(format!(
        "n={} l={} normalization constant (quadrature)={:e} analytic/quadrature ratio={:e} nodes={}",
        args.n,
        args.l,
        wf.norm_numeric,
        wf.normalization_ratio(),
        wf.count_nodes()
    ));
    for (r, u) in wf.adaptive_sample(args.tol) {
        table.push(vec![num(r), num(u)]);
    }
    ctx.emit(&table)
}

pub fn validate_cmd(ctx: &Context, args: &ValidateArgs) -> Result<(), Failure> {
    let mol = ctx.molecule(Some(&args.name))?;
    let model = ctx.model(mol, args.q, args.c)?;
    let opts = ValidationOptions {
        form: args.form.into(),
        literal_lambda: args.literal_lambda,
        ..ValidationOptions::default()
    };
    let checks = validate(&model, &opts);
    let mut text = format!(
        "# diatherm {} validate\n# molecule: {} q={} c={} index_form={}{}\n",
        env!("CARGO_PKG_VERSION"),
        mol.name,
        args.q,
        args.c,
        opts.form.name(),
        if opts.literal_lambda {
            " (literal Lambda)"
        } else {
            ""
        }
    );
    for check in &checks {
        text.push_str(&format!("{check}\n"));
    }
    let failed = checks.iter().filter(|c| !c.passed()).count();
    text.push_str(&format!(
        "{} of {} checks passed\n",
        checks.len() - failed,
        checks.len()
    ));
    match ctx.out {
        Some(p) => std::fs::write(p, &text)
            .with_context(|| format!("writing {}", p.display()))
            .map_err(Failure::compute)?,
        None => print!("{text}"),
    }
    if failed > 0 {
        return Err(Failure::validation(failed));
    }
    Ok(())
}

pub fn calibrate_cmd(ctx: &Context, args: &CalibrateArgs) -> Result<(), Failure> {
    let form = IndexForm::from(args.form);
    let names: Vec<String> = if args.molecules.is_empty() {
        PUBLISHED_ENERGIES
            .iter()
            .map(|(n, _)| n.to_string())
            .collect()
    } else {
        args.molecules.clone()
    };
    let mut table = ctx.table(
        "calibrate",
        &[
            "molecule",
            "c",
            "n",
            "q",
            "E_published_eV",
            "E_model_eV",
            "rel_deviation",
        ],
    );
    table.note(format!(
        "index_form={} l=0; residual = sum of squared relative deviations",
        form.name()
    ));
    for name in names {
        let mol = ctx.molecule(Some(&name))?;
        if published_energies(&name).is_none() {
            return Err(Failure::usage(anyhow!(
                "no published energies for molecule '{name}'"
            )));
        }
        let fit = match args.c {
            Some(c) => evaluate(mol, c, form, &ctx.constants),
            None => calibrate(mol, form, &ctx.constants),
        }
        .map_err(Failure::from)?;
        let summary = format!(
            "{}: c={} eV*A ({}), residual={:e}, residual at c=0: {:e}",
            fit.molecule,
            fit.c,
            if fit.fitted { "fitted" } else { "fixed" },
            fit.residual,
            fit.residual_at_zero
        );
        eprintln!("{summary}");
        table.note(summary);
        for cell in &fit.cells {
            table.push(vec![
                fit.molecule.clone(),
                num(fit.c),
                cell.n.to_string(),
                num(cell.q),
                num(cell.reference),
                num(cell.computed),
                sci(cell.relative),
            ]);
        }
    }
    ctx.emit(&table)
}

pub fn diagnostics(ctx: &Context, args: &DiagnosticsArgs) -> Result<(), Failure> {
    let names: Vec<String> = if args.molecules.is_empty() {
        ctx.catalog.names().map(str::to_string).collect()
    } else {
        args.molecules.clone()
    };
    let mut table = ctx.table("diagnostics", &["molecule", "quantity", "value"]);
    table.note(format!("q={} c={} eV*A l=0", args.q, args.c));
    for name in names {
        let mol = ctx.molecule(Some(&name))?;
        let model = ctx.model(mol, args.q, args.c)?;
        let published = constants_with_form(&model, 0, IndexForm::Published);
        let exact = constants_with_form(&model, 0, IndexForm::Exact);
        let literal = spectrum::with_literal_lambda(&published);
        let mut push = |q: &str, v: f64| table.push(vec![name.clone(), q.to_string(), num(v)]);
        push("Lambda_corrected_eV", published.lambda);
        push("Lambda_literal_eV_A", literal.lambda);
        push("eta1", published.eta1);
        push("eta2_published", published.eta2);
        push("eta2_exact", exact.eta2);
        push("lambda_max_cont_published", published.lambda_max_cont);
        push("lambda_max_cont_exact", exact.lambda_max_cont);
        push("n_max_printed_formula", n_max_literal(&model, 0));
        if let (Ok(p), Ok(e)) = (energy(&published, 0), energy(&exact, 0)) {
            push("E0_published_eV", p.energy);
            push("E0_exact_eV", e.energy);
        }
        for n in 0..=3u32.min(published.lambda_max.unwrap_or(0)) {
            if let Ok(wf) = WaveFunction::new(&model, n, 0, IndexForm::Published) {
                push(&format!("norm_ratio_n{n}"), wf.normalization_ratio());
            }
        }
        if let Ok(cfg) = ThermoConfig::new(published, Vec::new()) {
            for beta in [1.0, 10.0, 100.0] {
                if let (Ok(c), Ok(x)) = (thermo_closed(&cfg, beta), thermo_exact(&cfg.sc, beta)) {
                    push(
                        &format!("lnZ_closed_minus_exact_beta{beta}"),
                        c.ln_z - x.ln_z,
                    );
                }
            }
        }
    }
    ctx.emit(&table)
}
