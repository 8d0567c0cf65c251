//! Non-semisimple contributions for groups of real rank one.
//!
//! All Γ-dependent constants (cusp volume ratios, `l`, residual traces) are
//! user inputs. Group-dependent data comes from the catalog.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::charalg::weyl_dim_rational;
use crate::indexss::{is_singular, DiracInput, ElementSpec};
use crate::q::{self, Q};
use crate::rootsys::{PairSpec, SymmetricPair, WeightVec};
use crate::weyl::{coset_reps, enumerate_weyl, PositiveSystem};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BernoulliConvention {
    /// `B_1 = 1/6, B_2 = 1/30, …`, i.e. `|B_{2n}|` in modern indexing.
    #[default]
    Classical,
    Modern,
}

/// Which norm enters the `τ_{n₀}` term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LambdaNorm {
    /// Norm of the simple restricted root, from the catalog.
    #[default]
    RestrictedRoot,
    /// `√(λ, λ)` for the highest weight of `W`.
    HighestWeight,
}

/// Highest weight of `σ` in the remainder term: `w_M w(λ ± ρ_c)|_{𝔱∩𝔪} − ρ^M`,
/// where `w_M` always makes `w(λ + ρ_c)|_{𝔱∩𝔪}` dominant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Subscript {
    /// `w(λ + ρ_c)`
    #[default]
    Display,
    /// `w(λ − ρ_c)`
    Prose,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct NonSsOptions {
    #[serde(default)]
    pub bernoulli: BernoulliConvention,
    #[serde(default)]
    pub norm: LambdaNorm,
    #[serde(default)]
    pub subscript: Subscript,
}

/// Modern Bernoulli numbers `B_0, …, B_n` with `B_1 = −1/2`.
fn modern_table(n: usize) -> Vec<Q> {
    let mut b = vec![Q::one()];
    for m in 1..=n {
        // Σ_{k=0}^{m} C(m+1, k) B_k = 0
        let mut binom = BigInt::one();
        let mut s = Q::zero();
        for (k, bk) in b.iter().enumerate() {
            s += Q::from_integer(binom.clone()) * bk;
            binom = binom * (m + 1 - k) / (k + 1);
        }
        b.push(-s / Q::from_integer(BigInt::from(m + 1)));
    }
    b
}

pub fn bernoulli(n: usize, conv: BernoulliConvention) -> Q {
    match conv {
        BernoulliConvention::Modern => modern_table(n).swap_remove(n),
        BernoulliConvention::Classical => modern_table(2 * n).swap_remove(2 * n).abs(),
    }
}

/// Area of the unit sphere `S^{d−1} ⊂ ℝ^d`, `2π^{d/2}/Γ(d/2)`.
pub fn sphere_area(d: u32) -> f64 {
    match d {
        0 => 0.0,
        1 => 2.0,
        2 => 2.0 * PI,
        _ => sphere_area(d - 2) * 2.0 * PI / f64::from(d - 2),
    }
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Catalog data attached to a real-rank-one group.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankOneSpec {
    pub dim_n_lambda: usize,
    pub dim_n_2lambda: usize,
    /// `‖λ‖²` for the simple restricted root.
    #[serde(serialize_with = "q::ser_q", deserialize_with = "q::de_q")]
    pub lambda_res_norm_sq: Q,
    /// `n` when `G = SU(2n, 1)`.
    #[serde(default)]
    pub su_family: Option<u32>,
    #[serde(default, with = "opt_q_vec")]
    pub z0: Option<Vec<Q>>,
    #[serde(default, with = "opt_q_vec")]
    pub zvec: Option<Vec<Q>>,
    /// Positive roots whose sign is flipped to get `R^+_0`.
    #[serde(default)]
    pub rplus0_flip: Vec<usize>,
    /// Rows map `i𝔱*` onto `i(𝔱∩𝔪)*`.
    #[serde(default, with = "opt_q_mat")]
    pub restriction: Option<Vec<Vec<Q>>>,
    #[serde(default)]
    pub m_pair: Option<PairSpec>,
    /// Roots of `G` whose reflections generate `W_M ⊂ W_K`.
    #[serde(default)]
    pub wm_root_indices: Vec<usize>,
    #[serde(default)]
    pub real_hyperbolic_dim: Option<u32>,
}

mod opt_q_vec {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Vec<Q>>, s: S) -> std::result::Result<S::Ok, S::Error> {
        v.as_ref().map(|v| v.iter().map(q::format_q).collect::<Vec<_>>()).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Vec<Q>>, D::Error> {
        let v = Option::<Vec<String>>::deserialize(d)?;
        v.map(|v| v.iter().map(|s| q::parse_q(s)).collect::<Result<Vec<_>>>())
            .transpose()
            .map_err(serde::de::Error::custom)
    }
}

mod opt_q_mat {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &Option<Vec<Vec<Q>>>, s: S) -> std::result::Result<S::Ok, S::Error> {
        m.as_ref()
            .map(|m| m.iter().map(|r| r.iter().map(q::format_q).collect::<Vec<_>>()).collect::<Vec<_>>())
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Vec<Vec<Q>>>, D::Error> {
        let m = Option::<Vec<Vec<String>>>::deserialize(d)?;
        m.map(|m| {
            m.iter()
                .map(|r| r.iter().map(|s| q::parse_q(s)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()
        })
        .transpose()
        .map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug)]
pub struct RankOneData {
    pub spec: RankOneSpec,
    pub m_pair: Option<SymmetricPair>,
}

impl RankOneData {
    /// Builds and checks the data against `pair`.
    pub fn new(spec: RankOneSpec, pair: &SymmetricPair) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidRootDatum(format!("rank-one data for {}: {m}", pair.name)));
        if pair.dim_gk != spec.dim_n_lambda + spec.dim_n_2lambda + 1 {
            return bad(format!(
                "dim G/K = {} but dim 𝔫_λ + dim 𝔫_2λ + 1 = {}",
                pair.dim_gk,
                spec.dim_n_lambda + spec.dim_n_2lambda + 1
            ));
        }
        if !spec.lambda_res_norm_sq.is_positive() {
            return bad("‖λ‖² must be positive".into());
        }
        for v in [&spec.z0, &spec.zvec].into_iter().flatten() {
            if v.len() != pair.rank {
                return bad("Z vectors must have the rank of G".into());
            }
        }
        let npos = pair.positive_roots().len();
        if spec.rplus0_flip.iter().chain(&spec.wm_root_indices).any(|&i| i >= npos) {
            return bad("root index out of range".into());
        }
        let m_pair = spec.m_pair.as_ref().map(PairSpec::build).transpose()?;
        if let (Some(r), Some(m)) = (&spec.restriction, &m_pair) {
            if r.len() != m.rank || r.iter().any(|row| row.len() != pair.rank) {
                return bad("restriction matrix has the wrong shape".into());
            }
        }
        Ok(RankOneData { spec, m_pair })
    }

    /// `R^+_0`: `R^+(G,T)` with the listed roots negated.
    pub fn rplus0(&self, pair: &SymmetricPair) -> Vec<WeightVec> {
        pair.positive_roots()
            .into_iter()
            .enumerate()
            .map(|(i, a)| if self.spec.rplus0_flip.contains(&i) { -a } else { a })
            .collect()
    }

    pub fn restrict(&self, mu: &WeightVec) -> Option<WeightVec> {
        self.spec.restriction.as_ref().map(|r| {
            WeightVec::new(r.iter().map(|row| row.iter().zip(mu.coords()).map(|(a, b)| a * b).sum()).collect())
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SsClass {
    pub element: ElementSpec,
    pub vol: f64,
}

/// Constants of `Γ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaData {
    /// Number of `Γ`-conjugacy classes of `Γ`-cuspidal parabolics.
    #[serde(default)]
    pub l: u64,
    #[serde(default)]
    pub cusp_volume_ratios: Option<Vec<f64>>,
    #[serde(rename = "C_lambda", default)]
    pub c_lambda: f64,
    #[serde(rename = "C_2lambda", default)]
    pub c_2lambda: f64,
    #[serde(default)]
    pub ss_classes: Vec<SsClass>,
    #[serde(default)]
    pub residual_traces: Option<Vec<f64>>,
}

impl GammaData {
    /// No classes, no cusps, empty trace lists.
    pub fn zero() -> Self {
        GammaData {
            l: 0,
            cusp_volume_ratios: Some(Vec::new()),
            c_lambda: 0.0,
            c_2lambda: 0.0,
            ss_classes: Vec::new(),
            residual_traces: Some(Vec::new()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.ss_classes.iter().any(|c| !(c.vol >= 0.0)) {
            return Err(Error::InvalidInput("class volumes must be nonnegative".into()));
        }
        if self.cusp_volume_ratios.iter().flatten().any(|r| !(*r >= 0.0)) {
            return Err(Error::InvalidInput("cusp volume ratios must be nonnegative".into()));
        }
        Ok(())
    }
}

/// `C_2(Γ) = Σ_j ratio_j · (2π)^{2n}/(2n)! · B_n`.
pub fn c2_gamma(gd: &GammaData, n: u32, conv: BernoulliConvention) -> Result<f64> {
    let ratios = gd
        .cusp_volume_ratios
        .as_ref()
        .ok_or_else(|| Error::MissingGammaData("cusp_volume_ratios".into()))?;
    let b = q::to_f64(&bernoulli(n as usize, conv));
    let coeff = (2.0 * PI).powi(2 * n as i32) / factorial(2 * n) * b;
    Ok(ratios.iter().sum::<f64>() * coeff)
}

/// `ε(R^+(G,T))`: sign of `∏⟨α, Z_0⟩` over noncompact positive roots.
pub fn epsilon_rplus(data: &RankOneData, pair: &SymmetricPair) -> Result<i64> {
    let z0 = data
        .spec
        .z0
        .as_ref()
        .ok_or_else(|| Error::NotSupported(format!("no Z_0 in the catalog entry for {}", pair.name)))?;
    let mut sign = 1;
    for a in pair.noncompact_positive() {
        let p = a.pair_x(z0);
        if p.is_zero() {
            return Err(Error::DegenerateZ0);
        }
        if p.is_negative() {
            sign = -sign;
        }
    }
    Ok(sign)
}

/// `‖λ‖` under the chosen reading.
pub fn lambda_norm(input: &DiracInput, data: &RankOneData, norm: LambdaNorm) -> f64 {
    match norm {
        LambdaNorm::RestrictedRoot => q::to_f64(&data.spec.lambda_res_norm_sq).sqrt(),
        LambdaNorm::HighestWeight => q::to_f64(&input.pair().form.norm_sq(input.lambda())).sqrt(),
    }
}

/// `dim W` by the Weyl dimension formula over `R^+(K,T)`.
pub fn dim_w(input: &DiracInput) -> Result<f64> {
    let d = crate::charalg::weyl_dim(input.lambda(), input.k_system())?;
    d.to_f64().ok_or_else(|| Error::Internal("dim W overflows".into()))
}

/// Paired `N_{2λ}` orbital term; zero unless `G = SU(2n, 1)`.
pub fn tau_n0_contribution(input: &DiracInput, data: &RankOneData, gd: &GammaData, opts: &NonSsOptions) -> Result<f64> {
    let Some(n) = data.spec.su_family else {
        return Ok(0.0);
    };
    let nf = f64::from(n);
    let shape = 2f64.powi(3 * n as i32 - 3) * (2.0 * nf + 1.0).powi(n as i32) / sphere_area(4 * n);
    let c2 = c2_gamma(gd, n, opts.bernoulli)?;
    let eps = epsilon_rplus(data, input.pair())? as f64;
    Ok(lambda_norm(input, data, opts.norm) * shape * c2 * eps * dim_w(input)?)
}

/// The `τ_λ` term vanishes identically.
pub fn tau_lambda_contribution() -> f64 {
    0.0
}

/// Residual term: zero for regular `λ + ρ_c`, else twice the supplied traces.
pub fn tau_res_contribution(input: &DiracInput, gd: &GammaData) -> Result<f64> {
    if !is_singular(input) {
        return Ok(0.0);
    }
    let traces = gd
        .residual_traces
        .as_ref()
        .ok_or_else(|| Error::MissingGammaData("residual_traces (λ + ρ_c is singular)".into()))?;
    Ok(2.0 * traces.iter().sum::<f64>())
}

/// `k(μ) = ⟨μ, Z⟩`, required to be an integer.
pub fn k_of_mu(mu: &WeightVec, data: &RankOneData) -> Result<i64> {
    let z = data.spec.zvec.as_ref().ok_or_else(|| Error::NotSupported("no Z vector in the catalog entry".into()))?;
    let k = mu.pair_x(z);
    if !k.is_integer() {
        return Err(Error::NonIntegralK(q::format_q(&k)));
    }
    k.to_integer().to_i64().ok_or_else(|| Error::Internal("k(μ) overflows".into()))
}

/// `ε(μ)`: sign of `∏_{α∈R^+_0} (μ, α)`, zero if `μ` is singular.
pub fn epsilon_mu(mu: &WeightVec, data: &RankOneData, pair: &SymmetricPair) -> i64 {
    data.rplus0(pair)
        .iter()
        .map(|a| crate::indexss::sign_of(&pair.form.pair(mu, a)))
        .product()
}

/// One coset of the remainder sum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RemainderTerm {
    pub length: usize,
    pub det: i8,
    pub k: i64,
    /// Highest weight of `σ`.
    pub sigma: WeightVec,
    pub dim_sigma: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RemainderDetail {
    pub value: f64,
    pub epsilon: i64,
    pub terms: Vec<RemainderTerm>,
}

/// Remainder term for regular `λ + ρ_c`.
pub fn tau_rem_contribution(input: &DiracInput, data: &RankOneData, gd: &GammaData, sub: Subscript) -> Result<f64> {
    Ok(tau_rem_detail(input, data, gd, sub)?.value)
}

pub fn tau_rem_detail(input: &DiracInput, data: &RankOneData, gd: &GammaData, sub: Subscript) -> Result<RemainderDetail> {
    let zero = RemainderDetail { value: 0.0, epsilon: 0, terms: Vec::new() };
    if data.spec.real_hyperbolic_dim.is_some_and(|d| d >= 4) {
        return Ok(zero);
    }
    if gd.l == 0 {
        return Ok(zero);
    }
    if is_singular(input) {
        return Err(Error::NotSupported("remainder term for singular λ + ρ_c".into()));
    }
    let pair = input.pair();
    let m_pair = data
        .m_pair
        .as_ref()
        .ok_or_else(|| Error::NotSupported(format!("no M data in the catalog entry for {}", pair.name)))?;
    if data.spec.restriction.is_none() {
        return Err(Error::NotSupported(format!("no restriction map for {}", pair.name)));
    }
    let m_sys = PositiveSystem::new(m_pair.compact_positive(), &m_pair.form)?;
    let positives = pair.positive_roots();
    let wm_roots: Vec<WeightVec> = data.spec.wm_root_indices.iter().map(|&i| positives[i].clone()).collect();
    let w_m = enumerate_weyl(&wm_roots, &pair.form)?;
    let reps = coset_reps(&w_m, &input.k_system().weyl)?;

    let mu = input.lambda_plus_rho_c();
    let epsilon = epsilon_mu(&mu, data, pair);
    let label = match sub {
        Subscript::Display => mu.clone(),
        Subscript::Prose => input.lambda() - &pair.rho_c(),
    };
    let mut sum = 0i64;
    let mut terms = Vec::with_capacity(reps.len());
    for w in &reps {
        let k = k_of_mu(&w.act(&mu), data)?;
        if k == 0 {
            return Err(Error::AmbiguousSign);
        }
        let restricted = data.restrict(&w.act(&mu)).expect("restriction checked above");
        let w_m = m_sys.dominant(&restricted).w;
        let labelled = data.restrict(&w.act(&label)).expect("restriction checked above");
        let sigma = &w_m.act(&labelled) - &m_sys.rho;
        let d = weyl_dim_rational(&sigma, &m_sys);
        if !d.is_integer() {
            return Err(Error::Internal(format!("dim σ for {sigma} is not integral")));
        }
        let dim_sigma = d.to_integer().to_i64().ok_or_else(|| Error::Internal("dim σ overflows".into()))?;
        sum += i64::from(w.det()) * k.signum() * dim_sigma;
        terms.push(RemainderTerm { length: w.length(), det: w.det(), k, sigma, dim_sigma });
    }
    let sign = if (pair.dim_gk / 2) % 2 == 0 { 1.0 } else { -1.0 };
    let value = sign / 2.0 * gd.l as f64 * epsilon as f64 * sum as f64;
    Ok(RemainderDetail { value, epsilon, terms })
}
