//! CSV emission with a `#` provenance header.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use diatherm::{Catalog, MoleculeSpec, PhysicalConstants};

/// A table with its provenance lines.
pub struct Table {
    pub provenance: Vec<String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(
        command: &str,
        catalog: &Catalog,
        constants: &PhysicalConstants,
        header: &[&str],
    ) -> Self {
        let provenance = vec![
            format!("diatherm {} {command}", env!("CARGO_PKG_VERSION")),
            format!("catalog: {}", catalog.source),
            format!(
                "constants: hbar_c={} eV*A, amu_energy={} eV, k_B={} eV/K",
                constants.hbar_c, constants.amu_energy, constants.boltzmann
            ),
        ];
        Self {
            provenance,
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.provenance.push(line.into());
    }

    pub fn molecule(&mut self, mol: &MoleculeSpec) {
        self.note(format!(
            "molecule: {} r_e={} A, D_e={} eV, m={} amu, alpha={} 1/A",
            mol.name, mol.r_e, mol.d_e, mol.mass, mol.alpha
        ));
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for line in &self.provenance {
            out.push_str("# ");
            out.push_str(line);
            out.push('\n');
        }
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Writes to `path`, or stdout when absent.
pub fn emit(table: &Table, path: Option<&Path>) -> Result<()> {
    let text = table.render();
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes()).context("writing to stdout")
        }
    }
}

/// Target for molecule `name` when one file per molecule is written.
pub fn per_molecule_path(dir: &Path, stem: &str, name: &str) -> PathBuf {
    dir.join(format!("{stem}_{name}.csv"))
}

/// Shortest round-trip text; exponent form outside [1e-4, 1e15).
pub fn num(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && a.is_finite() && !(1e-4..1e15).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

pub fn sci(x: f64) -> String {
    format!("{x:e}")
}
