//! Higher orbital integrals `⟨Φ_{P,γ}, ind D_W⟩` for a cuspidal parabolic
//! `P = MA'N'`.
//!
//! For maximal `P` the torus `T` is shared by `G` and `M`, so all weights of
//! `K∩M` live in the same coordinates as those of `K`.

use std::collections::HashSet;

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::charalg::{decompose, eval_character, eval_exp, irr_character, spin_graded_character};
use crate::charalg::{ElementDescriptor, LaurentChar, TorusElement};
use crate::indexss::{formal_degree, tau_elliptic, DiracInput};
use crate::q;
use crate::rootsys::{SymmetricPair, WeightVec};
use crate::weyl::PositiveSystem;
use crate::{Error, Result};

/// Levi specification inside a group file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeviSpec {
    pub name: String,
    /// Indices into the canonical positive roots of `G`.
    pub m_root_indices: Vec<usize>,
    pub maximal: bool,
}

#[derive(Clone, Debug)]
pub struct LeviData {
    pub name: String,
    pub base: SymmetricPair,
    /// `R(M, T)` with inherited positivity and compactness.
    pub m_pair: SymmetricPair,
    pub m_root_indices: Vec<usize>,
    pub maximal: bool,
    /// `dim M/(K∩M)`.
    pub dim_m_km: usize,
}

impl LeviData {
    pub fn new(base: &SymmetricPair, spec: &LeviSpec) -> Result<Self> {
        let positives = base.positive_roots();
        let mut keep: HashSet<WeightVec> = HashSet::new();
        for &i in &spec.m_root_indices {
            let a = positives.get(i).ok_or_else(|| {
                Error::InvalidRootDatum(format!("levi `{}`: root index {i} out of range", spec.name))
            })?;
            keep.insert(a.clone());
            keep.insert(-a);
        }
        for a in &keep {
            for b in &keep {
                if !keep.contains(&base.form.reflect(b, a)) {
                    return Err(Error::InvalidRootDatum(format!(
                        "levi `{}`: roots are not closed under reflections",
                        spec.name
                    )));
                }
            }
        }
        let m_pair = base.sub_pair(format!("{}/{}", base.name, spec.name), |r| keep.contains(&r.vec));
        Ok(LeviData {
            name: spec.name.clone(),
            base: base.clone(),
            dim_m_km: m_pair.dim_gk,
            m_pair,
            m_root_indices: spec.m_root_indices.clone(),
            maximal: spec.maximal,
        })
    }

    /// `P = G`, available when `G` has equal rank.
    pub fn whole(base: &SymmetricPair) -> Result<Self> {
        let n = base.positive_roots().len();
        Self::new(base, &LeviSpec { name: "G".into(), m_root_indices: (0..n).collect(), maximal: true })
    }

    /// `R^+(K∩M, T)` with its Weyl group.
    pub fn km_system(&self) -> Result<PositiveSystem> {
        PositiveSystem::new(self.m_pair.compact_positive(), &self.base.form)
    }

    /// `S = R^+(K,T) ∖ R^+(K∩M,T)`.
    pub fn spin_roots(&self) -> Vec<WeightVec> {
        self.base
            .compact_positive()
            .into_iter()
            .filter(|a| !self.m_pair.is_root(a))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompTerm {
    pub lambda_u: WeightVec,
    pub m_u: i64,
}

/// Graded spinor character `Δ⁺ − Δ⁻` of `𝔨/(𝔨∩𝔪)`.
pub fn knm_spin_character(levi: &LeviData) -> LaurentChar {
    spin_graded_character(&levi.spin_roots(), levi.base.rank)
}

/// `Δ_{𝔨/(𝔨∩𝔪)} ⊗ W|_{K∩M}` as a graded character.
pub fn restricted_product(input: &DiracInput, levi: &LeviData) -> Result<LaurentChar> {
    let w = irr_character(input.lambda(), input.k_system())?;
    Ok(&knm_spin_character(levi) * &w)
}

/// Virtual multiplicities `m_U` of `Δ_{𝔨/(𝔨∩𝔪)} ⊗ W` over `K∩M`, sorted by
/// highest weight.
#[allow(non_snake_case)]
pub fn mU_decomposition(input: &DiracInput, levi: &LeviData) -> Result<Vec<DecompTerm>> {
    if !levi.maximal {
        return Err(Error::RequiresMaximal(levi.name.clone()));
    }
    let product = restricted_product(input, levi)?;
    let mut terms: Vec<DecompTerm> = decompose(&product, &levi.km_system()?)?
        .into_iter()
        .map(|(lambda_u, m_u)| DecompTerm { lambda_u, m_u })
        .collect();
    terms.sort_by(|a, b| a.lambda_u.cmp(&b.lambda_u));
    Ok(terms)
}

/// `Σ m_U χ_U` over `K∩M`, for round-trip checks.
pub fn recombine(terms: &[DecompTerm], levi: &LeviData) -> Result<LaurentChar> {
    let sys = levi.km_system()?;
    let mut acc = LaurentChar::zero(levi.base.rank);
    for t in terms {
        acc = &acc + &irr_character(&t.lambda_u, &sys)?.scale(t.m_u);
    }
    Ok(acc)
}

/// `⟨Φ_{P,γ}, ind D_W⟩`.
pub fn higher_pairing(input: &DiracInput, levi: &LeviData, gamma: &ElementDescriptor) -> Result<Complex64> {
    if !levi.maximal {
        return Ok(Complex64::zero());
    }
    let t = match gamma {
        ElementDescriptor::Hyperbolic => return Ok(Complex64::zero()),
        ElementDescriptor::Central(t) | ElementDescriptor::Elliptic(t) => t,
    };
    let m = &levi.m_pair;
    if !m.equal_rank {
        return Err(Error::RankMismatch(format!("levi `{}` has no compact Cartan", levi.name)));
    }
    if t.rank() != m.rank {
        return Err(Error::InvalidInput(format!("X has {} coordinates, expected {}", t.rank(), m.rank)));
    }
    let terms = mU_decomposition(input, levi)?;
    if t.is_central(m.roots.iter().map(|r| &r.vec)) {
        let rho_n = m.rho_n();
        let rho_c = m.rho_c();
        return Ok(terms
            .iter()
            .map(|u| {
                let d = formal_degree(&(&u.lambda_u + &rho_c), m);
                eval_exp(&(&u.lambda_u - &rho_n), t) * q::to_f64(&d) * u.m_u as f64
            })
            .sum());
    }
    let el = ElementDescriptor::Elliptic(t.clone());
    let mut acc = Complex64::zero();
    for u in &terms {
        let sub = DiracInput::unchecked(m.clone(), u.lambda_u.clone())?;
        acc += tau_elliptic(&sub, &el)?.value * u.m_u as f64;
    }
    Ok(acc)
}

/// Closed form for `γ` regular in `M`:
/// `(−1)^{dim(M/K∩M)/2} χ_{Δ_{𝔨/(𝔨∩𝔪)}}(γ) χ_W(γ) / χ_{Δ_{𝔭∩𝔪}}(γ)`.
pub fn dense_powers_higher(input: &DiracInput, levi: &LeviData, t: &TorusElement) -> Result<Complex64> {
    let chi_w = eval_character(&irr_character(input.lambda(), input.k_system())?, t);
    let chi_s = eval_character(&knm_spin_character(levi), t);
    let pm = spin_graded_character(&levi.m_pair.noncompact_positive(), levi.base.rank);
    let sign = if (levi.dim_m_km / 2) % 2 == 0 { 1.0 } else { -1.0 };
    Ok(chi_s * chi_w / eval_character(&pm, t) * sign)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::indexss::tau;
    use crate::q::{q, qr, Q};
    use crate::rootsys::PairSpec;

    fn su_pq(p: usize, qq: usize, compact: Vec<usize>) -> SymmetricPair {
        let n = p + qq;
        let gram = (0..n).map(|i| (0..n).map(|j| q((i == j) as i64)).collect()).collect();
        let simple = (0..n - 1)
            .map(|i| (0..n).map(|j| q((j == i) as i64 - (j == i + 1) as i64)).collect())
            .collect();
        PairSpec { name: format!("su{p}{qq}"), rank: n, gram, simple_roots: simple, compact_roots: compact, equal_rank: true }
            .build()
            .unwrap()
    }

    fn w(v: &[Q]) -> WeightVec {
        WeightVec::new(v.to_vec())
    }

    #[test]
    fn whole_group_levi() {
        let g = su_pq(2, 1, vec![0]);
        let levi = LeviData::whole(&g).unwrap();
        assert_eq!(knm_spin_character(&levi), LaurentChar::one(3));
        let lambda = w(&[qr(5, 2), qr(1, 2), q(1)]);
        let input = DiracInput::new(g.clone(), lambda.clone()).unwrap();
        assert_eq!(mU_decomposition(&input, &levi).unwrap(), vec![DecompTerm { lambda_u: lambda, m_u: 1 }]);
        for x in [vec![q(0), q(0), q(0)], vec![qr(1, 5), qr(1, 5), qr(-2, 5)], vec![qr(1, 7), qr(2, 7), qr(-3, 7)]] {
            let t = TorusElement::new(x);
            let el = if t.is_central(g.roots.iter().map(|r| &r.vec)) {
                ElementDescriptor::Central(t)
            } else {
                ElementDescriptor::Elliptic(t)
            };
            let a = higher_pairing(&input, &levi, &el).unwrap();
            let b = tau(&input, &el).unwrap();
            assert!((a - b).norm() < 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn a1_inside_a3_spin() {
        let g = su_pq(3, 1, vec![0, 1, 3]);
        let levi = LeviData::new(&g, &LeviSpec { name: "A1c".into(), m_root_indices: vec![0], maximal: true }).unwrap();
        let s = knm_spin_character(&levi);
        assert_eq!(levi.spin_roots().len(), 2);
        assert_eq!(s.len(), 4);
        let input = DiracInput::new(g.clone(), g.rho_n()).unwrap();
        let terms = mU_decomposition(&input, &levi).unwrap();
        assert_eq!(recombine(&terms, &levi).unwrap(), restricted_product(&input, &levi).unwrap());
    }

    #[test]
    fn non_maximal() {
        let g = su_pq(2, 1, vec![0]);
        let levi = LeviData::new(&g, &LeviSpec { name: "P".into(), m_root_indices: vec![], maximal: false }).unwrap();
        let input = DiracInput::new(g.clone(), g.rho_n()).unwrap();
        let el = ElementDescriptor::Central(TorusElement::identity(3));
        assert_eq!(higher_pairing(&input, &levi, &el).unwrap(), Complex64::zero());
        assert_eq!(mU_decomposition(&input, &levi), Err(Error::RequiresMaximal("P".into())));
    }

    #[test]
    fn torus_levi_is_weight_expansion() {
        let g = su_pq(2, 1, vec![0]);
        let levi = LeviData::new(&g, &LeviSpec { name: "T".into(), m_root_indices: vec![], maximal: true }).unwrap();
        let input = DiracInput::new(g.clone(), w(&[qr(5, 2), qr(1, 2), q(1)])).unwrap();
        let terms = mU_decomposition(&input, &levi).unwrap();
        let product = restricted_product(&input, &levi).unwrap();
        assert_eq!(terms.len(), product.len());
        for t in &terms {
            assert_eq!(product.coeff(&t.lambda_u), t.m_u);
        }
        let x = TorusElement::new(vec![qr(1, 11), qr(3, 11), qr(-4, 11)]);
        let v = higher_pairing(&input, &levi, &ElementDescriptor::Central(x.clone())).unwrap();
        let direct: Complex64 = terms.iter().map(|t| eval_exp(&t.lambda_u, &x) * t.m_u as f64).sum();
        assert!((v - direct).norm() < 1e-9);
        assert!((v - dense_powers_higher(&input, &levi, &x).unwrap()).norm() < 1e-9);
    }

    #[test]
    fn rejects_non_closed_roots() {
        let g = su_pq(2, 1, vec![0]);
        let err = LeviData::new(&g, &LeviSpec { name: "bad".into(), m_root_indices: vec![0, 1], maximal: true });
        assert!(matches!(err, Err(Error::InvalidRootDatum(_))));
    }
}
