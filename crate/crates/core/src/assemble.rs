//! Group catalog and assembly of the index of `D_W^Γ` on `Γ\G/K`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::charalg::ElementDescriptor;
use crate::indexhigher::{LeviData, LeviSpec};
use crate::indexnonss::{
    lambda_norm, sphere_area, tau_lambda_contribution, tau_n0_contribution, tau_rem_contribution,
    tau_res_contribution, GammaData, NonSsOptions, RankOneData, RankOneSpec,
};
use crate::indexss::{classify_element, tau_central, tau_elliptic_with, tau_hyperbolic, DiracInput, SignConvention};
use crate::rootsys::{validate_pair, PairSpec, SymmetricPair, WeightVec};
use crate::{Error, Result, NEAR_INTEGER_TOL};

const CATALOG: &[(&str, &str)] = &[
    ("su11", include_str!("catalog/su11.json")),
    ("su21", include_str!("catalog/su21.json")),
    ("su31", include_str!("catalog/su31.json")),
    ("su22", include_str!("catalog/su22.json")),
    ("su41", include_str!("catalog/su41.json")),
    ("su32", include_str!("catalog/su32.json")),
    ("so21", include_str!("catalog/so21.json")),
    ("so41", include_str!("catalog/so41.json")),
    ("so61", include_str!("catalog/so61.json")),
];

/// Group file: the root datum plus optional levis and rank-one data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupSpec {
    #[serde(flatten)]
    pub pair: PairSpec,
    #[serde(default)]
    pub aliases: Vec<String>,
    #[serde(default)]
    pub levis: Vec<LeviSpec>,
    #[serde(default)]
    pub rank_one: Option<RankOneSpec>,
    #[serde(default)]
    pub notes: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub pair: SymmetricPair,
    pub rank_one: Option<RankOneData>,
    pub levis: Vec<LeviData>,
    pub notes: Vec<String>,
}

impl CatalogEntry {
    pub fn from_spec(spec: &GroupSpec) -> Result<Self> {
        let pair = spec.pair.build()?;
        if let Err(v) = validate_pair(&pair) {
            let msgs: Vec<String> = v.iter().map(ToString::to_string).collect();
            return Err(Error::InvalidRootDatum(format!("{}: {}", pair.name, msgs.join("; "))));
        }
        let levis = spec.levis.iter().map(|l| LeviData::new(&pair, l)).collect::<Result<_>>()?;
        let rank_one = spec.rank_one.clone().map(|r| RankOneData::new(r, &pair)).transpose()?;
        Ok(CatalogEntry { pair, rank_one, levis, notes: spec.notes.clone() })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: GroupSpec = serde_json::from_str(text).map_err(|e| Error::Parse(format!("group file: {e}")))?;
        Self::from_spec(&spec)
    }

    pub fn levi(&self, name: &str) -> Result<&LeviData> {
        self.levis.iter().find(|l| l.name == name).ok_or_else(|| {
            let names: Vec<&str> = self.levis.iter().map(|l| l.name.as_str()).collect();
            Error::InvalidInput(format!("no levi `{name}` for {} (have: {})", self.pair.name, names.join(", ")))
        })
    }
}

fn catalog_spec(name: &str) -> Option<GroupSpec> {
    CATALOG.iter().find_map(|(_, text)| {
        let spec: GroupSpec = serde_json::from_str(text).expect("bundled catalog file parses");
        (spec.pair.name == name || spec.aliases.iter().any(|a| a == name)).then_some(spec)
    })
}

/// Canonical names of the bundled groups.
pub fn catalog_names() -> Vec<&'static str> {
    CATALOG.iter().map(|(n, _)| *n).collect()
}

pub fn catalog_lookup(name: &str) -> Result<CatalogEntry> {
    let spec = catalog_spec(name).ok_or_else(|| Error::UnknownGroup(name.to_string()))?;
    CatalogEntry::from_spec(&spec)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct AssembleOptions {
    #[serde(default)]
    pub sign_convention: SignConvention,
    #[serde(flatten)]
    pub nonss: NonSsOptions,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabeledTerm {
    pub label: String,
    /// Coefficient the value enters the index with.
    pub coefficient: f64,
    pub value: Complex64,
    pub contribution: Complex64,
}

impl LabeledTerm {
    fn new(label: impl Into<String>, coefficient: f64, value: Complex64) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        LabeledTerm { label: label.into(), coefficient, value: value + zero, contribution: value * coefficient + zero }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndexReport {
    pub group: String,
    pub lambda: WeightVec,
    pub options: AssembleOptions,
    pub terms: Vec<LabeledTerm>,
    pub assembled_index: f64,
    pub imaginary_part: f64,
    pub near_integer: bool,
    pub deviation: f64,
}

/// `τ_γ` for a classified element.
pub fn orbital_value(input: &DiracInput, gamma: &ElementDescriptor, conv: SignConvention) -> Result<Complex64> {
    match gamma {
        ElementDescriptor::Central(_) => tau_central(input, gamma),
        ElementDescriptor::Elliptic(_) => Ok(tau_elliptic_with(input, gamma, conv)?.value),
        ElementDescriptor::Hyperbolic => Ok(tau_hyperbolic(input)),
    }
}

/// The four non-semisimple terms, each with its coefficient in the index.
pub fn nonss_terms(input: &DiracInput, entry: &CatalogEntry, gd: &GammaData, opts: &NonSsOptions) -> Result<Vec<LabeledTerm>> {
    let data = entry
        .rank_one
        .as_ref()
        .ok_or_else(|| Error::NotSupported(format!("{} has no real-rank-one data", entry.pair.name)))?;
    let n0 = tau_n0_contribution(input, data, gd, opts)?;
    let lam = tau_lambda_contribution();
    let lam_coeff = {
        let denom = sphere_area(data.spec.dim_n_lambda as u32) * lambda_norm(input, data, opts.norm);
        if denom > 0.0 {
            gd.c_lambda / denom
        } else {
            0.0
        }
    };
    let res = tau_res_contribution(input, gd)?;
    let rem = tau_rem_contribution(input, data, gd, opts.subscript)?;
    Ok(vec![
        LabeledTerm::new("tau_n0", 1.0, Complex64::new(n0, 0.0)),
        LabeledTerm::new("tau_lambda", lam_coeff, Complex64::new(lam, 0.0)),
        LabeledTerm::new("tau_res", -0.25, Complex64::new(res, 0.0)),
        LabeledTerm::new("tau_rem", 1.0, Complex64::new(rem, 0.0)),
    ])
}

/// `ind(D_W^Γ) = Σ vol·τ_γ + τ_{n₀}-term + τ_λ-term − τ_res/4 + τ_rem`.
pub fn assemble_index(input: &DiracInput, entry: &CatalogEntry, gd: &GammaData, opts: &AssembleOptions) -> Result<IndexReport> {
    gd.validate()?;
    let mut terms = Vec::new();
    for (i, class) in gd.ss_classes.iter().enumerate() {
        let gamma = classify_element(&entry.pair, &class.element)?;
        let v = orbital_value(input, &gamma, opts.sign_convention)?;
        terms.push(LabeledTerm::new(format!("ss[{i}]:{}", gamma.kind()), class.vol, v));
    }
    terms.extend(nonss_terms(input, entry, gd, &opts.nonss)?);
    let total: Complex64 = terms.iter().map(|t| t.contribution).sum();
    let deviation = (total.re - total.re.round()).abs();
    Ok(IndexReport {
        group: entry.pair.name.clone(),
        lambda: input.lambda().clone(),
        options: *opts,
        terms,
        assembled_index: total.re,
        imaginary_part: total.im,
        near_integer: deviation < NEAR_INTEGER_TOL,
        deviation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::indexss::{formal_degree, ElementSpec};
    use crate::indexnonss::SsClass;
    use crate::q::{q, qr};

    #[test]
    fn every_catalog_entry_loads() {
        for name in catalog_names() {
            let e = catalog_lookup(name).unwrap();
            assert_eq!(e.pair.name, name);
            assert!(e.pair.dim_gk % 2 == 0);
        }
        assert_eq!(catalog_lookup("su_2_1").unwrap().pair.name, "su21");
        assert!(matches!(catalog_lookup("xx99"), Err(Error::UnknownGroup(_))));
    }

    #[test]
    fn catalog_shapes() {
        let su11 = catalog_lookup("su11").unwrap();
        assert_eq!((su11.pair.roots.len(), su11.pair.dim_gk), (2, 2));
        let su21 = catalog_lookup("su21").unwrap();
        assert_eq!(su21.pair.dim_gk, 4);
        assert_eq!(su21.pair.compact_positive(), vec![WeightVec::from_ints(&[1, -1, 0])]);
        let so61 = catalog_lookup("so61").unwrap();
        assert_eq!(so61.pair.compact_positive().len(), 6);
        assert!(so61.pair.compact_positive().iter().all(|a| so61.pair.form.norm_sq(a) == q(2)));
        let su41 = catalog_lookup("su41").unwrap();
        for a in su41.pair.compact_positive() {
            assert_eq!(a.coords()[4], q(0));
        }
        assert_eq!(su41.pair.compact_positive().len(), 6);
    }

    #[test]
    fn central_only_assembly() {
        let e = catalog_lookup("su21").unwrap();
        let lambda = WeightVec::new(vec![qr(5, 2), qr(1, 2), q(1)]);
        let input = DiracInput::new(e.pair.clone(), lambda).unwrap();
        let mut gd = GammaData::zero();
        gd.ss_classes.push(SsClass {
            element: ElementSpec { kind: "central".into(), x: Some(vec!["0".into(); 3]) },
            vol: 1.0,
        });
        let r = assemble_index(&input, &e, &gd, &AssembleOptions::default()).unwrap();
        let d = formal_degree(&input.lambda_plus_rho_c(), &e.pair);
        assert_eq!(r.assembled_index, crate::q::to_f64(&d));
        let back: IndexReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, r);
    }
}
