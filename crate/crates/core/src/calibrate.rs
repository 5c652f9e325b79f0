//! Fit of the Yukawa strength c to the published energy grid.

use crate::error::{Error, Result};
use crate::model::{Model, MoleculeSpec};
use crate::reference::{self, PublishedCell};
use crate::spectrum::{self, IndexForm};
use crate::units::PhysicalConstants;

/// Golden-section stopping width, eV·Å.
pub const C_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct CellDeviation {
    pub n: u32,
    pub q: f64,
    pub reference: f64,
    pub computed: f64,
    /// `(computed - reference) / |reference|`.
    pub relative: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Calibration {
    pub molecule: String,
    pub form: IndexForm,
    /// Fitted (or fixed) Yukawa strength, eV·Å.
    pub c: f64,
    /// Sum of squared relative deviations at `c`.
    pub residual: f64,
    pub residual_at_zero: f64,
    pub cells: Vec<CellDeviation>,
    /// False when `c` was supplied rather than fitted.
    pub fitted: bool,
}

fn deviations(
    mol: &MoleculeSpec,
    c: f64,
    form: IndexForm,
    constants: &PhysicalConstants,
    cells: &[PublishedCell],
) -> Result<Vec<CellDeviation>> {
    cells
        .iter()
        .map(|cell| {
            let model = Model::with_constants(mol, cell.q, c, constants)?;
            let sc = spectrum::constants_with_form(&model, 0, form);
            let computed = spectrum::energy(&sc, cell.n)?.energy;
            Ok(CellDeviation {
                n: cell.n,
                q: cell.q,
                reference: cell.energy,
                computed,
                relative: (computed - cell.energy) / cell.energy.abs(),
            })
        })
        .collect()
}

fn residual_of(cells: &[CellDeviation]) -> f64 {
    cells.iter().map(|d| d.relative * d.relative).sum()
}

fn reference_cells(mol: &MoleculeSpec) -> Result<Vec<PublishedCell>> {
    reference::published_cells(&mol.name).ok_or_else(|| Error::NoReferenceData(mol.name.clone()))
}

/// Per-cell deviations at a fixed c.
pub fn evaluate(
    mol: &MoleculeSpec,
    c: f64,
    form: IndexForm,
    constants: &PhysicalConstants,
) -> Result<Calibration> {
    let cells = reference_cells(mol)?;
    let at_zero = residual_of(&deviations(mol, 0.0, form, constants, &cells)?);
    let devs = deviations(mol, c, form, constants, &cells)?;
    Ok(Calibration {
        molecule: mol.name.clone(),
        form,
        c,
        residual: residual_of(&devs),
        residual_at_zero: at_zero,
        cells: devs,
        fitted: false,
    })
}

/// Minimizes the residual over c ≥ 0 by golden-section search.
pub fn calibrate(
    mol: &MoleculeSpec,
    form: IndexForm,
    constants: &PhysicalConstants,
) -> Result<Calibration> {
    let cells = reference_cells(mol)?;
    let f = |c: f64| {
        deviations(mol, c, form, constants, &cells)
            .map(|d| residual_of(&d))
            .unwrap_or(f64::INFINITY)
    };
    let at_zero = f(0.0);

    // Expand geometrically until the residual turns upward.
    let (mut a, mut mid, mut b) = (0.0, 0.0, 0.25);
    let (mut f_mid, mut f_b) = (at_zero, f(b));
    for _ in 0..40 {
        if f_b > f_mid {
            break;
        }
        a = mid;
        mid = b;
        f_mid = f_b;
        b *= 2.0;
        f_b = f(b);
    }

    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - ratio * (b - a);
    let mut x2 = a + ratio * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while b - a > C_TOLERANCE {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = f(x2);
        }
    }
    let mut c = 0.5 * (a + b);
    if !(f(c) < at_zero) {
        c = 0.0;
    }
    let devs = deviations(mol, c, form, constants, &cells)?;
    log::info!("{}: fitted c = {c} eV·Å", mol.name);
    Ok(Calibration {
        molecule: mol.name.clone(),
        form,
        c,
        residual: residual_of(&devs),
        residual_at_zero: at_zero,
        cells: devs,
        fitted: true,
    })
}
