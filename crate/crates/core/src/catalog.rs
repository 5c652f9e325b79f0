//! Molecule catalog: the six built-in species and user files in the
//! `name,r_e,D_e,m,alpha` format.

use std::fmt;
use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use indexmap::IndexMap;

use crate::error::{Error, Result};
use crate::model::MoleculeSpec;

pub const HEADER: [&str; 5] = ["name", "r_e", "D_e", "m", "alpha"];

/// Environment variable naming a catalog file.
pub const CATALOG_ENV: &str = "DIATHERM_CATALOG";

/// (name, r_e Å, D_e eV, m amu, α 1/Å).
const BUILTIN: [(&str, f64, f64, f64, f64); 6] = [
    ("H2", 0.7416, 4.74460, 0.503910, 1.61890),
    ("I2", 2.6620, 1.55560, 63.452235, 1.86430),
    ("LiH", 1.5956, 2.51527, 0.880122, 1.12800),
    ("CO", 1.1283, 11.2256, 6.860672, 2.29940),
    ("HCl", 1.2746, 4.61903, 0.980105, 1.86770),
    ("NO", 1.1508, 8.04373, 7.468441, 2.75340),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CatalogSource {
    Builtin,
    File(PathBuf),
}

impl fmt::Display for CatalogSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogSource::Builtin => f.write_str("builtin"),
            CatalogSource::File(p) => write!(f, "{}", p.display()),
        }
    }
}

/// Ordered, case-sensitive map of molecule name to parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Catalog {
    pub entries: IndexMap<String, MoleculeSpec>,
    pub source: CatalogSource,
}

pub fn builtin_catalog() -> Catalog {
    let entries = BUILTIN
        .iter()
        .map(|&(name, r_e, d_e, mass, alpha)| {
            let spec = MoleculeSpec {
                name: name.to_string(),
                r_e,
                d_e,
                mass,
                alpha,
            };
            (name.to_string(), spec)
        })
        .collect();
    Catalog {
        entries,
        source: CatalogSource::Builtin,
    }
}

fn parse_error(path: &Path, line: usize, reason: impl Into<String>) -> Error {
    Error::CatalogParse {
        path: path.to_path_buf(),
        line,
        reason: reason.into(),
    }
}

fn io_error(path: &Path, err: impl fmt::Display) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        reason: err.to_string(),
    }
}

/// Entries of a catalog file alone, without the built-ins.
pub fn read_entries(path: &Path) -> Result<Vec<MoleculeSpec>> {
    let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, line)| (i + 1, line.trim()))
        .filter(|(_, line)| !line.is_empty() && !line.starts_with('#'));
    let (header_line, header) = lines
        .next()
        .ok_or_else(|| parse_error(path, 1, "missing header"))?;
    if header.split(',').map(str::trim).ne(HEADER) {
        return Err(parse_error(
            path,
            header_line,
            format!("expected header `{}`", HEADER.join(",")),
        ));
    }
    let mut specs: Vec<MoleculeSpec> = Vec::new();
    for (line, row) in lines {
        let fields: Vec<&str> = row.split(',').map(str::trim).collect();
        if fields.len() != HEADER.len() {
            return Err(parse_error(
                path,
                line,
                format!("expected {} fields, found {}", HEADER.len(), fields.len()),
            ));
        }
        let mut values = [0.0; 4];
        for (k, value) in values.iter_mut().enumerate() {
            let field = fields[k + 1];
            *value = field.parse().map_err(|_| {
                parse_error(
                    path,
                    line,
                    format!("{}: not a number: `{field}`", HEADER[k + 1]),
                )
            })?;
        }
        let spec = MoleculeSpec {
            name: fields[0].to_string(),
            r_e: values[0],
            d_e: values[1],
            mass: values[2],
            alpha: values[3],
        };
        spec.validate()
            .map_err(|e| parse_error(path, line, e.to_string()))?;
        if specs.iter().any(|s| s.name == spec.name) {
            return Err(parse_error(
                path,
                line,
                format!("duplicate molecule `{}`", spec.name),
            ));
        }
        specs.push(spec);
    }
    Ok(specs)
}

/// Built-ins with the entries of `path` merged on top; file entries shadow
/// built-ins of the same name.
pub fn load_catalog(path: &Path) -> Result<Catalog> {
    let mut catalog = builtin_catalog();
    for spec in read_entries(path)? {
        catalog.entries.insert(spec.name.clone(), spec);
    }
    catalog.source = CatalogSource::File(path.to_path_buf());
    Ok(catalog)
}

/// Explicit path first, then `DIATHERM_CATALOG`, else the built-ins.
pub fn resolve_catalog(explicit: Option<&Path>) -> Result<Catalog> {
    match explicit {
        Some(path) => load_catalog(path),
        None => match std::env::var_os(CATALOG_ENV) {
            Some(path) if !path.is_empty() => load_catalog(Path::new(&path)),
            _ => Ok(builtin_catalog()),
        },
    }
}

impl Catalog {
    pub fn get(&self, name: &str) -> Result<&MoleculeSpec> {
        self.entries
            .get(name)
            .ok_or_else(|| Error::UnknownMolecule(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Writes every entry; shortest round-trip formatting keeps values bit-exact.
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut out =
            String::from("# units: r_e in angstrom, D_e in eV, m in amu, alpha in 1/angstrom\n");
        out.push_str(&HEADER.join(","));
        out.push('\n');
        for spec in self.entries.values() {
            if spec.name.contains(',')
                || spec.name.starts_with('#')
                || spec.name.trim() != spec.name
            {
                return Err(Error::InvalidMolecule {
                    name: spec.name.clone(),
                    reason: "name cannot be stored in the catalog format".into(),
                });
            }
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                spec.name, spec.r_e, spec.d_e, spec.mass, spec.alpha
            ));
        }
        let mut file = File::create(path).map_err(|e| io_error(path, e))?;
        file.write_all(out.as_bytes())
            .map_err(|e| io_error(path, e))
    }
}
