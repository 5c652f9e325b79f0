//! Bound states and vibrational thermodynamics of diatomic molecules under
//! the Yukawa plus four-parameter potential.

pub mod calibrate;
pub mod catalog;
mod dd;
pub mod error;
pub mod model;
pub mod oracle;
pub mod quad;
pub mod reference;
pub mod specfun;
pub mod spectrum;
pub mod thermo;
pub mod units;
pub mod validation;
pub mod wavefunction;

pub use catalog::{builtin_catalog, load_catalog, Catalog, CatalogSource};
pub use error::{Error, Result};
pub use model::{Model, ModelParams, MoleculeSpec};
pub use oracle::{Hamiltonian, OracleConfig, RadialGrid, RadialSolution};
pub use specfun::{LogSum, ScaledExp};
pub use spectrum::{EnergyLevel, IndexForm, SpectrumConstants};
pub use thermo::{ThermoConfig, ThermoPoint, ThermoSample};
pub use units::PhysicalConstants;
pub use validation::{Check, ValidationOptions};
pub use wavefunction::WaveFunction;
