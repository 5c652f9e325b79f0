//! Analytic bound-state spectrum `E = -Λ (η₁/(n+η₂) - (n+η₂))²` of the
//! effective potential, its derived constants and the vibrational cutoff.

use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::model::Model;

/// A continuous root this close to an integer counts as reaching it.
const INTEGER_SNAP: f64 = 1e-9;

/// Which radical defines η₂.
///
/// `Published` is `½(1 + √(4l(l+1)/q + a/(α²q²h)))`, the index used for the
/// reference tables. `Exact` carries an extra `+1` under the radical and
/// gives the exact eigenvalues of the effective potential.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IndexForm {
    #[default]
    Published,
    Exact,
}

impl IndexForm {
    pub fn name(self) -> &'static str {
        match self {
            IndexForm::Published => "published",
            IndexForm::Exact => "exact",
        }
    }
}

impl std::str::FromStr for IndexForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "published" => Ok(IndexForm::Published),
            "exact" => Ok(IndexForm::Exact),
            other => Err(Error::Domain(format!(
                "unknown index form '{other}' (expected 'published' or 'exact')"
            ))),
        }
    }
}

/// Per-(molecule, model, l) constants of the spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumConstants {
    /// Λ = α² ħ²/2m, eV.
    pub lambda: f64,
    pub eta1: f64,
    pub eta2: f64,
    /// P_l = α q η₂, 1/Å.
    pub p_l: f64,
    pub l: u32,
    pub alpha: f64,
    pub q: f64,
    /// ħ²/2m, eV·Å².
    pub h22m: f64,
    /// √η₁ - η₂.
    pub lambda_max_cont: f64,
    /// Last bound vibrational index; `None` when no level is bound.
    pub lambda_max: Option<u32>,
    /// Largest n with Q_l < 0; identical to `lambda_max`.
    pub n_max: Option<u32>,
    pub form: IndexForm,
    /// η₁ and η₂ carried to double-double precision.
    pub(crate) eta1_dd: Dd,
    pub(crate) eta2_dd: Dd,
}

/// One bound level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyLevel {
    pub n: u32,
    pub l: u32,
    /// eV.
    pub energy: f64,
}

/// Energies on an (l, n) grid; pairs above the cutoff are listed separately.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SpectrumTable {
    pub levels: Vec<EnergyLevel>,
    /// `(n, l)` pairs dropped because n exceeds the last bound level.
    pub omitted: Vec<(u32, u32)>,
}

/// `floor(x)`, except that a value within 1e-9 below an integer rounds up to it.
pub fn integer_cutoff(cont: f64) -> Option<u32> {
    if !(cont > 0.0) {
        return None;
    }
    Some((cont + INTEGER_SNAP).floor() as u32)
}

/// Spectrum constants with the published index.
pub fn constants(model: &Model, l: u32) -> SpectrumConstants {
    constants_with_form(model, l, IndexForm::Published)
}

pub fn constants_with_form(model: &Model, l: u32, form: IndexForm) -> SpectrumConstants {
    let p = &model.params;
    let alpha = model.alpha();
    let h = Dd::new(model.h22m);
    let a2q = Dd::new(alpha) * alpha * p.q;
    let a2q2 = a2q * p.q;
    let attraction = Dd::new(p.b) + Dd::new(2.0 * alpha) * p.c;
    let eta1 = (attraction / a2q + Dd::new(p.a) / a2q2) / (h * 4.0);
    let ll = f64::from(l) * f64::from(l + 1);
    let radicand = Dd::new(4.0 * ll) / Dd::new(p.q) + Dd::new(p.a) / (a2q2 * h);
    let radicand = match form {
        IndexForm::Published => radicand,
        IndexForm::Exact => radicand + 1.0,
    };
    let eta2 = (radicand.sqrt() + 1.0) * 0.5;
    let lambda_max_cont = (eta1.sqrt() - eta2).value();
    let lambda_max = integer_cutoff(lambda_max_cont);
    SpectrumConstants {
        lambda: alpha * alpha * model.h22m,
        eta1: eta1.value(),
        eta2: eta2.value(),
        p_l: (eta2 * alpha * p.q).value(),
        l,
        alpha,
        q: p.q,
        h22m: model.h22m,
        lambda_max_cont,
        lambda_max,
        n_max: lambda_max,
        form,
        eta1_dd: eta1,
        eta2_dd: eta2,
    }
}

/// Replaces Λ by the dimensionally inconsistent `α ħ²/2m`; for negative controls only.
pub fn with_literal_lambda(sc: &SpectrumConstants) -> SpectrumConstants {
    SpectrumConstants {
        lambda: sc.alpha * sc.h22m,
        ..*sc
    }
}

impl SpectrumConstants {
    pub fn has_bound_states(&self) -> bool {
        self.lambda_max.is_some()
    }

    /// Number of bound levels, `lambda_max + 1`.
    pub fn level_count(&self) -> u32 {
        self.lambda_max.map_or(0, |m| m + 1)
    }

    /// `E` at a continuous vibrational index x.
    pub fn energy_at(&self, x: f64) -> f64 {
        let s = self.eta2_dd + x;
        let w = self.eta1_dd / s - s;
        -self.lambda * w.square().value()
    }

    /// `η₁/(x+η₂) - (x+η₂)`, so that `E = -Λ ρ²`.
    pub fn rho(&self, x: f64) -> f64 {
        let s = x + self.eta2;
        self.eta1 / s - s
    }

    fn check_level(&self, n: u32) -> Result<()> {
        match self.lambda_max {
            Some(m) if n <= m => Ok(()),
            other => Err(Error::LevelOutOfRange {
                n,
                lambda_max: other,
            }),
        }
    }
}

/// Energy of level n in the simplified form.
pub fn energy(sc: &SpectrumConstants, n: u32) -> Result<EnergyLevel> {
    sc.check_level(n)?;
    Ok(EnergyLevel {
        n,
        l: sc.l,
        energy: sc.energy_at(f64::from(n)),
    })
}

/// Energy of level n written in terms of `a`, `b`, `c`, P_l and ħ²/2m
/// without Λ, η₁ or η₂.
pub fn energy_full_form(model: &Model, sc: &SpectrumConstants, n: u32) -> Result<f64> {
    sc.check_level(n)?;
    let p = &model.params;
    let alpha = model.alpha();
    let q = Dd::new(p.q);
    let h = Dd::new(model.h22m);
    let aq = Dd::new(alpha) * p.q;
    let a2 = Dd::new(alpha) * alpha;
    let k = aq * f64::from(n) + sc.eta2_dd * aq;
    let attraction = Dd::new(p.b) + Dd::new(2.0 * alpha) * p.c;
    let depth = aq.square() / (h * 4.0) * (attraction / (a2 * q) + Dd::new(p.a) / (a2 * q * q));
    let w = (depth - k.square()) / k;
    Ok((-(h / q.square()) * w.square()).value())
}

/// `Q_l = (1/q) [(αqn + P_l)² - α²q²η₁] / (αqn + P_l)`, 1/Å.
pub fn q_l(sc: &SpectrumConstants, n: f64) -> f64 {
    let aq = Dd::new(sc.alpha) * sc.q;
    let k = aq * n + sc.eta2_dd * aq;
    ((k.square() - aq.square() * sc.eta1_dd) / (k * sc.q)).value()
}

/// The printed closed form of n_max: `-(½ + ½√(4l(l+1)/q + a/(α²q²h) + 1)) + √(α²q² η₁)`.
///
/// It mixes a dimensionless term with one in 1/Å; reported as a diagnostic only.
pub fn n_max_literal(model: &Model, l: u32) -> f64 {
    let exact = constants_with_form(model, l, IndexForm::Exact);
    let aq = model.alpha() * model.params.q;
    (aq * aq * exact.eta1).sqrt() - exact.eta2
}

/// Energies for every `(l, n)` pair, l-major.
pub fn spectrum_table(model: &Model, ls: &[u32], ns: &[u32], form: IndexForm) -> SpectrumTable {
    let mut table = SpectrumTable::default();
    for &l in ls {
        let sc = constants_with_form(model, l, form);
        for &n in ns {
            match energy(&sc, n) {
                Ok(level) => table.levels.push(level),
                Err(_) => table.omitted.push((n, l)),
            }
        }
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::MoleculeSpec;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn molecules() -> Vec<MoleculeSpec> {
        vec![
            MoleculeSpec::new("H2", 0.7416, 4.74460, 0.503910, 1.61890).unwrap(),
            MoleculeSpec::new("I2", 2.6620, 1.55560, 63.452235, 1.86430).unwrap(),
            MoleculeSpec::new("LiH", 1.5956, 2.51527, 0.880122, 1.12800).unwrap(),
            MoleculeSpec::new("CO", 1.1283, 11.2256, 6.860672, 2.29940).unwrap(),
            MoleculeSpec::new("HCl", 1.2746, 4.61903, 0.980105, 1.86770).unwrap(),
            MoleculeSpec::new("NO", 1.1508, 8.04373, 7.468441, 2.75340).unwrap(),
        ]
    }

    fn h2_model(q: f64, c: f64) -> Model {
        Model::new(&molecules()[0], q, c).unwrap()
    }

    #[test]
    fn hydrogen_cutoff_is_eight() {
        let sc = constants(&h2_model(1.0, 0.0), 0);
        assert_eq!(sc.lambda_max, Some(8));
        assert_eq!(sc.n_max, sc.lambda_max);
        assert!((sc.lambda_max_cont - 8.3).abs() < 0.1);
    }

    #[test]
    fn iodine_cutoff_near_fifty_eight() {
        let sc = constants(&Model::new(&molecules()[1], 1.0, 0.0).unwrap(), 0);
        assert!(matches!(sc.lambda_max, Some(57) | Some(58)));
    }

    #[test]
    fn vanishing_well_gives_half_index() {
        let mol = MoleculeSpec::new("weak", 1e-6, 1e-12, 1.0, 1e-3).unwrap();
        let sc = constants(&Model::new(&mol, 1.0, 0.0).unwrap(), 0);
        assert_relative_eq!(sc.eta2, 0.5, max_relative = 1e-6);
    }

    #[test]
    fn hydrogen_ground_state_near_table_value() {
        let e = energy(&constants(&h2_model(1.0, 0.0), 0), 0)
            .unwrap()
            .energy;
        assert!(((e - -4.14360) / 4.14360).abs() < 0.01, "{e}");
    }

    #[test]
    fn continuous_cutoff_has_zero_energy() {
        let sc = constants(&h2_model(1.3, 0.2), 1);
        assert!(sc.energy_at(sc.lambda_max_cont).abs() < 1e-12);
        assert!(q_l(&sc, sc.lambda_max_cont).abs() < 1e-12);
    }

    #[test]
    fn hydrogen_q_l_matches_high_precision_value() {
        let sc = constants(&h2_model(1.0, 0.0), 0);
        let expected = sc.alpha * (sc.eta2 * sc.eta2 - sc.eta1) / sc.eta2;
        assert_relative_eq!(q_l(&sc, 0.0), expected, max_relative = 1e-12);
        assert_relative_eq!(q_l(&sc, 0.0), -31.535995175993317, max_relative = 1e-12);
    }

    #[test]
    fn levels_above_cutoff_are_rejected() {
        let sc = constants(&h2_model(1.0, 0.0), 0);
        let err = energy(&sc, 9).unwrap_err();
        assert!(matches!(
            err,
            Error::LevelOutOfRange {
                n: 9,
                lambda_max: Some(8)
            }
        ));
        assert!(err.to_string().contains("last bound level is n = 8"));
    }

    #[test]
    fn table_flags_omitted_rows() {
        let t = spectrum_table(
            &h2_model(1.0, 0.0),
            &[0],
            &[0, 4, 8, 9, 100],
            IndexForm::Published,
        );
        assert_eq!(t.levels.len(), 3);
        assert_eq!(t.omitted, vec![(9, 0), (100, 0)]);
        assert!(
            spectrum_table(&h2_model(1.0, 0.0), &[0], &[], IndexForm::Published)
                .levels
                .is_empty()
        );
    }

    #[test]
    fn literal_lambda_breaks_the_two_forms() {
        let model = h2_model(1.0, 0.0);
        let sc = with_literal_lambda(&constants(&model, 0));
        let simple = energy(&sc, 0).unwrap().energy;
        let full = energy_full_form(&model, &sc, 0).unwrap();
        assert!(((simple - full) / full).abs() > 0.1);
    }

    #[test]
    fn exact_index_exceeds_published() {
        let model = h2_model(1.0, 0.0);
        let p = constants_with_form(&model, 0, IndexForm::Published);
        let e = constants_with_form(&model, 0, IndexForm::Exact);
        assert!(e.eta2 > p.eta2);
        assert!(e.eta2 - p.eta2 < 0.01);
    }

    #[test]
    fn literal_n_max_is_reported() {
        let v = n_max_literal(&h2_model(1.0, 0.0), 0);
        assert!(v.is_finite());
    }

    #[test]
    fn cutoff_from_stationary_point() {
        for mol in molecules() {
            let sc = constants(&Model::new(&mol, 1.4, 0.0).unwrap(), 0);
            // Bisection on the sign of a central difference of E(x).
            let slope = |x: f64| {
                let h = 1e-6 * (1.0 + x);
                sc.energy_at(x + h) - sc.energy_at(x - h)
            };
            let (mut lo, mut hi) = (0.0, 2.0 * sc.lambda_max_cont + 10.0);
            assert!(slope(lo) > 0.0 && slope(hi) < 0.0);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if slope(mid) > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            assert!(
                (0.5 * (lo + hi) - sc.lambda_max_cont).abs() < 1e-9,
                "{}",
                mol.name
            );
        }
    }

    #[test]
    fn integer_cutoff_snaps_near_integers() {
        assert_eq!(integer_cutoff(8.3), Some(8));
        assert_eq!(integer_cutoff(3.0 - 1e-10), Some(3));
        assert_eq!(integer_cutoff(3.0 - 1e-8), Some(2));
        assert_eq!(integer_cutoff(-0.2), None);
        assert_eq!(integer_cutoff(0.0), None);
    }

    fn arb_model() -> impl Strategy<Value = (Model, u32)> {
        (0usize..6, 1.0f64..2.0, 0.0f64..1.0, 0u32..4)
            .prop_map(|(i, q, c, l)| (Model::new(&molecules()[i], q, c).unwrap(), l))
    }

    proptest! {
        #[test]
        fn two_forms_agree((model, l) in arb_model(), form in prop_oneof![Just(IndexForm::Published), Just(IndexForm::Exact)]) {
            let sc = constants_with_form(&model, l, form);
            for n in 0..=sc.lambda_max.unwrap_or(0).min(30) {
                if sc.lambda_max.is_none() { break; }
                let a = energy(&sc, n).unwrap().energy;
                let b = energy_full_form(&model, &sc, n).unwrap();
                prop_assert!(((a - b) / b).abs() < 1e-12);
            }
        }

        #[test]
        fn levels_rise_with_n_and_l((model, l) in arb_model()) {
            let sc = constants(&model, l);
            let up = constants(&model, l + 1);
            let m = sc.lambda_max.unwrap();
            for n in 0..=m {
                let e = energy(&sc, n).unwrap().energy;
                prop_assert!(e < 0.0);
                prop_assert!(q_l(&sc, f64::from(n)) < 0.0);
                if n < m {
                    prop_assert!(energy(&sc, n + 1).unwrap().energy > e);
                }
                if let Ok(eu) = energy(&up, n) {
                    prop_assert!(eu.energy > e);
                }
            }
        }

        #[test]
        fn levels_deepen_with_yukawa_strength(i in 0usize..6, q in 1.0f64..2.0, c in 0.0f64..1.0, dc in 1e-3f64..0.5) {
            let mol = &molecules()[i];
            let a = constants(&Model::new(mol, q, c).unwrap(), 0);
            let b = constants(&Model::new(mol, q, c + dc).unwrap(), 0);
            prop_assert!(energy(&b, 0).unwrap().energy < energy(&a, 0).unwrap().energy);
        }

        #[test]
        fn levels_deepen_with_well_depth(i in 0usize..6, q in 1.0f64..2.0, scale in 1.01f64..2.0) {
            let mol = molecules()[i].clone();
            let deeper = MoleculeSpec { d_e: mol.d_e * scale, ..mol.clone() };
            let a = constants(&Model::new(&mol, q, 0.0).unwrap(), 0);
            let b = constants(&Model::new(&deeper, q, 0.0).unwrap(), 0);
            prop_assert!(energy(&b, 0).unwrap().energy.abs() > energy(&a, 0).unwrap().energy.abs());
        }
    }
}
