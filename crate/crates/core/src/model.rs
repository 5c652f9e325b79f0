//! The Yukawa plus four-parameter diatomic potential, its exponential
//! surrogate for the 1/r and 1/r² terms, and the resulting effective
//! potential on the physical region r > r0.

use crate::error::{Error, Result};
use crate::units::PhysicalConstants;

/// Relative distance from the pole `exp(2 alpha r) = q` treated as the pole itself.
const POLE_TOLERANCE: f64 = 1e-12;

/// Spectroscopic parameters of a diatomic species.
#[derive(Debug, Clone, PartialEq)]
pub struct MoleculeSpec {
    pub name: String,
    /// Equilibrium bond length, Å.
    pub r_e: f64,
    /// Well depth, eV.
    pub d_e: f64,
    /// Reduced mass, amu.
    pub mass: f64,
    /// Screening parameter, 1/Å.
    pub alpha: f64,
}

impl MoleculeSpec {
    pub fn new(name: impl Into<String>, r_e: f64, d_e: f64, mass: f64, alpha: f64) -> Result<Self> {
        let spec = Self {
            name: name.into(),
            r_e,
            d_e,
            mass,
            alpha,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Checks that every parameter is finite and strictly positive.
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("r_e", self.r_e),
            ("D_e", self.d_e),
            ("m", self.mass),
            ("alpha", self.alpha),
        ];
        for (field, value) in fields {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::InvalidMolecule {
                    name: self.name.clone(),
                    reason: format!("{field} must be finite and > 0, got {value}"),
                });
            }
        }
        if self.name.trim().is_empty() {
            return Err(Error::InvalidMolecule {
                name: self.name.clone(),
                reason: "name must not be empty".into(),
            });
        }
        Ok(())
    }
}

/// Deformation, Yukawa strength and the derived well coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Deformation parameter (dimensionless, >= 1).
    pub q: f64,
    /// Yukawa strength V0, eV·Å.
    pub c: f64,
    /// `D_e (exp(alpha r_e) - 1)^2`, eV.
    pub a: f64,
    /// `2 D_e (exp(alpha r_e) - 1)`, eV.
    pub b: f64,
}

/// Builds the well coefficients `a`, `b` for a molecule at deformation `q`
/// and Yukawa strength `c`.
pub fn derive_well_params(mol: &MoleculeSpec, q: f64, c: f64) -> Result<ModelParams> {
    if !(q >= 1.0) || !q.is_finite() {
        return Err(Error::InvalidDeformation(q));
    }
    if !(c >= 0.0) || !c.is_finite() {
        return Err(Error::Domain(format!(
            "Yukawa strength c must be finite and >= 0, got {c}"
        )));
    }
    let g = (mol.alpha * mol.r_e).exp_m1();
    Ok(ModelParams {
        q,
        c,
        a: mol.d_e * g * g,
        b: 2.0 * mol.d_e * g,
    })
}

/// Radius of the pole of the deformed well, `ln(q) / (2 alpha)`.
pub fn singularity_radius(q: f64, alpha: f64) -> f64 {
    q.ln() / (2.0 * alpha)
}

fn check_pole(r: f64, q: f64, alpha: f64) -> Result<()> {
    let gap = (2.0 * alpha * r).exp() - q;
    if gap.abs() <= POLE_TOLERANCE * q {
        return Err(Error::Pole {
            r,
            r0: singularity_radius(q, alpha),
        });
    }
    Ok(())
}

fn check_physical_region(r: f64, q: f64, alpha: f64) -> Result<()> {
    let r0 = singularity_radius(q, alpha);
    if !(r > r0) || !r.is_finite() {
        return Err(Error::Domain(format!(
            "r = {r} lies outside the physical region r > r0 = {r0}"
        )));
    }
    check_pole(r, q, alpha)
}

/// Full potential `a/(e^{2αr}-q)^2 - b/(e^{2αr}-q) - c e^{-αr}/r`, eV.
pub fn potential(r: f64, p: &ModelParams, alpha: f64) -> Result<f64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!("r must be positive, got {r}")));
    }
    check_pole(r, p.q, alpha)?;
    // (e^{2αr} - q) written through e^{-2αr} keeps large r finite.
    let e = (-2.0 * alpha * r).exp();
    let d = 1.0 - p.q * e;
    let well = p.a * e * e / (d * d) - p.b * e / d;
    Ok(well - p.c * (-alpha * r).exp() / r)
}

/// Exponential surrogates for `1/r` and `1/r²`, valid on r > r0.
pub fn centrifugal_approx(r: f64, alpha: f64, q: f64) -> Result<(f64, f64)> {
    check_physical_region(r, q, alpha)?;
    let e1 = (-alpha * r).exp();
    let d = 1.0 - q * e1 * e1;
    let inv_r = 2.0 * alpha * e1 / d;
    let inv_r2 = 4.0 * alpha * alpha * e1 * e1 / (d * d);
    Ok((inv_r, inv_r2))
}

/// Effective potential with the Yukawa and centrifugal terms replaced by
/// their exponential surrogates, eV. `h22m` is ħ²/2m in eV·Å².
pub fn effective_potential(r: f64, p: &ModelParams, alpha: f64, l: u32, h22m: f64) -> Result<f64> {
    check_physical_region(r, p.q, alpha)?;
    let e = (-2.0 * alpha * r).exp();
    let d = 1.0 - p.q * e;
    let ll = f64::from(l) * f64::from(l + 1);
    let centrifugal = 4.0 * alpha * alpha * h22m * ll * e / (d * d);
    let attraction = (p.b + 2.0 * alpha * p.c) * e / d;
    let repulsion = p.a * e * e / (d * d);
    Ok(centrifugal - attraction + repulsion)
}

/// Radial potential with the true `1/r` Yukawa tail and the true
/// centrifugal barrier `ħ² l(l+1) / (2 m r²)`, eV.
pub fn exact_radial_potential(
    r: f64,
    p: &ModelParams,
    alpha: f64,
    l: u32,
    h22m: f64,
) -> Result<f64> {
    check_physical_region(r, p.q, alpha)?;
    let ll = f64::from(l) * f64::from(l + 1);
    Ok(potential(r, p, alpha)? + h22m * ll / (r * r))
}

/// A molecule together with its model parameters and ħ²/2m.
#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    pub molecule: MoleculeSpec,
    pub params: ModelParams,
    /// ħ²/2m, eV·Å².
    pub h22m: f64,
}

impl Model {
    pub fn new(molecule: &MoleculeSpec, q: f64, c: f64) -> Result<Self> {
        Self::with_constants(molecule, q, c, &PhysicalConstants::default())
    }

    pub fn with_constants(
        molecule: &MoleculeSpec,
        q: f64,
        c: f64,
        constants: &PhysicalConstants,
    ) -> Result<Self> {
        molecule.validate()?;
        Ok(Self {
            molecule: molecule.clone(),
            params: derive_well_params(molecule, q, c)?,
            h22m: constants.hbar2_over_2m(molecule.mass)?,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.molecule.alpha
    }

    pub fn singularity_radius(&self) -> f64 {
        singularity_radius(self.params.q, self.alpha())
    }

    pub fn potential(&self, r: f64) -> Result<f64> {
        potential(r, &self.params, self.alpha())
    }

    pub fn effective_potential(&self, r: f64, l: u32) -> Result<f64> {
        effective_potential(r, &self.params, self.alpha(), l, self.h22m)
    }

    pub fn exact_radial_potential(&self, r: f64, l: u32) -> Result<f64> {
        exact_radial_potential(r, &self.params, self.alpha(), l, self.h22m)
    }

    /// Inner and outer classical turning points of the effective potential at `energy`.
    ///
    /// Requires `min V_eff < energy < 0`.
    pub fn turning_points(&self, l: u32, energy: f64) -> Result<(f64, f64)> {
        let r0 = self.singularity_radius();
        let start = r0 + 1e-6 / self.alpha();
        let v = |r: f64| self.effective_potential(r, l);
        // Coarse scan for the well bottom; V_eff has a single minimum.
        let span = 40.0 / self.alpha();
        let steps = 4000;
        let (mut r_min, mut v_min) = (start, f64::INFINITY);
        for i in 0..=steps {
            let r = start + span * i as f64 / steps as f64;
            let value = v(r)?;
            if value < v_min {
                v_min = value;
                r_min = r;
            }
        }
        if !(energy > v_min && energy < 0.0) {
            return Err(Error::Domain(format!(
                "energy {energy} eV is not inside the well (bottom {v_min} eV)"
            )));
        }
        let crossing = |mut inside: f64, mut outside: f64| -> Result<f64> {
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
        };
        let inner = crossing(r_min, start)?;
        let mut far = r_min + 1.0 / self.alpha();
        while v(far)? < energy {
            far = r_min + 2.0 * (far - r_min);
        }
        let outer = crossing(r_min, far)?;
        Ok((inner, outer))
    }
}
