//! Root systems with a compact/noncompact grading.
//!
//! Weights live in a fixed ambient rational basis of `i𝔱*` together with an
//! explicit Gram matrix. Torus elements are given in the dual basis, so the
//! pairing `⟨μ, X⟩` is the plain coordinate dot product while `(μ, ν)` goes
//! through the Gram matrix.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::charalg::TorusElement;
use crate::q::{self, format_q, Matrix, Q};
use crate::{Error, Result};

/// Upper bound on the number of roots produced by reflection closure.
pub const ROOT_CLOSURE_BOUND: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightVec(Vec<Q>);

impl WeightVec {
    pub fn new(coords: Vec<Q>) -> Self {
        WeightVec(coords)
    }

    pub fn zero(rank: usize) -> Self {
        WeightVec(vec![Q::zero(); rank])
    }

    pub fn from_ints(v: &[i64]) -> Self {
        WeightVec(v.iter().map(|&x| q::q(x)).collect())
    }

    pub fn parse(s: &str) -> Result<Self> {
        q::parse_q_list(s).map(WeightVec)
    }

    pub fn coords(&self) -> &[Q] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &Q) -> WeightVec {
        WeightVec(self.0.iter().map(|x| x * c).collect())
    }

    pub fn half(&self) -> WeightVec {
        self.scale(&q::qr(1, 2))
    }

    /// Dual pairing `⟨μ, X⟩` with a torus coordinate vector.
    pub fn pair_x(&self, x: &[Q]) -> Q {
        assert_eq!(self.0.len(), x.len(), "weight/torus rank mismatch");
        self.0.iter().zip(x).fold(Q::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(format_q).collect()
    }
}

impl fmt::Display for WeightVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_strings().join(", "))
    }
}

impl Add for &WeightVec {
    type Output = WeightVec;
    fn add(self, rhs: &WeightVec) -> WeightVec {
        assert_eq!(self.0.len(), rhs.0.len(), "weight rank mismatch");
        WeightVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &WeightVec {
    type Output = WeightVec;
    fn sub(self, rhs: &WeightVec) -> WeightVec {
        assert_eq!(self.0.len(), rhs.0.len(), "weight rank mismatch");
        WeightVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Add for WeightVec {
    type Output = WeightVec;
    fn add(self, rhs: WeightVec) -> WeightVec {
        &self + &rhs
    }
}

impl Sub for WeightVec {
    type Output = WeightVec;
    fn sub(self, rhs: WeightVec) -> WeightVec {
        &self - &rhs
    }
}

impl Neg for &WeightVec {
    type Output = WeightVec;
    fn neg(self) -> WeightVec {
        WeightVec(self.0.iter().map(|x| -x).collect())
    }
}

impl Neg for WeightVec {
    type Output = WeightVec;
    fn neg(self) -> WeightVec {
        -&self
    }
}

impl Serialize for WeightVec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        q::ser_q_vec(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for WeightVec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        q::de_q_vec(d).map(WeightVec)
    }
}

/// Positive-definite symmetric form on `i𝔱*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearForm {
    gram: Matrix,
}

impl BilinearForm {
    pub fn new(rows: &[Vec<Q>]) -> Result<Self> {
        let gram = Matrix::from_rows(rows)?;
        if gram.rows() != gram.cols() {
            return Err(Error::InvalidRootDatum("Gram matrix is not square".into()));
        }
        if gram != gram.transpose() {
            return Err(Error::InvalidRootDatum("Gram matrix is not symmetric".into()));
        }
        if !gram.is_positive_definite() {
            return Err(Error::InvalidRootDatum("Gram matrix is not positive definite".into()));
        }
        Ok(BilinearForm { gram })
    }

    pub fn identity(rank: usize) -> Self {
        BilinearForm { gram: Matrix::identity(rank) }
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn pair(&self, a: &WeightVec, b: &WeightVec) -> Q {
        let gb = self.gram.apply(b.coords());
        a.coords().iter().zip(&gb).fold(Q::zero(), |acc, (x, y)| acc + x * y)
    }

    pub fn norm_sq(&self, a: &WeightVec) -> Q {
        self.pair(a, a)
    }

    /// `2(μ, α)/(α, α)`.
    pub fn coroot_pairing(&self, mu: &WeightVec, alpha: &WeightVec) -> Q {
        self.pair(mu, alpha) * q::q(2) / self.norm_sq(alpha)
    }

    pub fn reflect(&self, mu: &WeightVec, alpha: &WeightVec) -> WeightVec {
        mu - &alpha.scale(&self.coroot_pairing(mu, alpha))
    }

    /// Matrix of `s_α` acting on weight coordinates.
    pub fn reflection_matrix(&self, alpha: &WeightVec) -> Matrix {
        let n = self.rank();
        let g_alpha = self.gram.apply(alpha.coords());
        let c = q::q(2) / self.norm_sq(alpha);
        let mut m = Matrix::identity(n);
        for i in 0..n {
            for j in 0..n {
                let x = m.get(i, j) - &c * &alpha.coords()[i] * &g_alpha[j];
                m.set(i, j, x);
            }
        }
        m
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Root {
    pub vec: WeightVec,
    pub positive: bool,
    pub compact: bool,
}

/// A root system `R(G, T)` with positivity and compactness marking.
///
/// Roots are stored positive ones first, in canonical order, followed by
/// their negatives in the same order.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricPair {
    pub name: String,
    pub rank: usize,
    pub form: BilinearForm,
    pub roots: Vec<Root>,
    pub dim_gk: usize,
    pub equal_rank: bool,
}

impl SymmetricPair {
    /// Builds a pair from explicit roots. `dim_gk` is the number of
    /// noncompact roots.
    pub fn from_roots(name: impl Into<String>, form: BilinearForm, roots: Vec<Root>, equal_rank: bool) -> Self {
        let dim_gk = roots.iter().filter(|r| !r.compact).count();
        SymmetricPair { name: name.into(), rank: form.rank(), form, roots, dim_gk, equal_rank }
    }

    /// Generates the root system from simple roots and marks the positive
    /// roots with the given indices (and their negatives) as compact.
    pub fn from_simple_roots(
        name: impl Into<String>,
        form: BilinearForm,
        simple: &[WeightVec],
        compact_indices: &[usize],
        equal_rank: bool,
    ) -> Result<Self> {
        let mut roots = generate_root_system(simple, &form)?;
        let npos = roots.iter().filter(|r| r.positive).count();
        for &i in compact_indices {
            if i >= npos {
                return Err(Error::InvalidRootDatum(format!(
                    "compact root index {i} out of range (only {npos} positive roots)"
                )));
            }
            roots[i].compact = true;
            roots[npos + i].compact = true;
        }
        Ok(Self::from_roots(name, form, roots, equal_rank))
    }

    pub fn positive_roots(&self) -> Vec<WeightVec> {
        self.roots.iter().filter(|r| r.positive).map(|r| r.vec.clone()).collect()
    }

    pub fn compact_positive(&self) -> Vec<WeightVec> {
        self.roots.iter().filter(|r| r.positive && r.compact).map(|r| r.vec.clone()).collect()
    }

    pub fn noncompact_positive(&self) -> Vec<WeightVec> {
        self.roots.iter().filter(|r| r.positive && !r.compact).map(|r| r.vec.clone()).collect()
    }

    pub fn rho(&self) -> WeightVec {
        half_sum(self.rank, self.positive_roots().iter())
    }

    pub fn rho_c(&self) -> WeightVec {
        half_sum(self.rank, self.compact_positive().iter())
    }

    pub fn rho_n(&self) -> WeightVec {
        &self.rho() - &self.rho_c()
    }

    pub fn is_root(&self, v: &WeightVec) -> bool {
        self.roots.iter().any(|r| &r.vec == v)
    }

    pub fn root(&self, v: &WeightVec) -> Option<&Root> {
        self.roots.iter().find(|r| &r.vec == v)
    }

    /// Sub-pair on the roots satisfying `keep`, inheriting all flags.
    pub fn sub_pair(&self, name: impl Into<String>, keep: impl Fn(&Root) -> bool) -> SymmetricPair {
        let roots = self.roots.iter().filter(|r| keep(r)).cloned().collect();
        Self::from_roots(name, self.form.clone(), roots, self.equal_rank)
    }

    /// Is `μ` in the weight lattice of this root system, i.e. is
    /// `2(μ,α)/(α,α)` integral for every root?
    pub fn is_lattice_integral(&self, mu: &WeightVec) -> bool {
        self.roots.iter().filter(|r| r.positive).all(|r| self.form.coroot_pairing(mu, &r.vec).is_integer())
    }
}

/// `(1/2) Σ α` over the given roots.
pub fn half_sum<'a>(rank: usize, roots: impl Iterator<Item = &'a WeightVec>) -> WeightVec {
    roots.fold(WeightVec::zero(rank), |acc, a| &acc + a).half()
}

/// Simple roots of a positive system: the positive roots that are not a sum
/// of two positive roots.
pub fn simple_roots_of(positives: &[WeightVec]) -> Vec<WeightVec> {
    let set: HashSet<&WeightVec> = positives.iter().collect();
    positives
        .iter()
        .filter(|g| {
            !positives.iter().any(|a| {
                let rest = *g - a;
                set.contains(&rest)
            })
        })
        .cloned()
        .collect()
}

/// Closes the simple roots under simple reflections and assigns positivity
/// from the expansion in simple roots.
pub fn generate_root_system(simple: &[WeightVec], form: &BilinearForm) -> Result<Vec<Root>> {
    let rank = form.rank();
    if simple.iter().any(|s| s.rank() != rank) {
        return Err(Error::InvalidRootDatum("simple root length differs from rank".into()));
    }
    if simple.is_empty() {
        return Ok(Vec::new());
    }
    let cols: Vec<Vec<Q>> = simple.iter().map(|s| s.coords().to_vec()).collect();
    let basis = Matrix::from_cols(&cols, rank);
    if basis.rank() != simple.len() {
        return Err(Error::InvalidRootDatum("simple roots are linearly dependent".into()));
    }
    for a in simple {
        for b in simple {
            let c = form.coroot_pairing(a, b);
            if !c.is_integer() {
                return Err(Error::InvalidRootDatum(format!(
                    "Cartan integer 2({a},{b})/({b},{b}) = {} is not integral",
                    format_q(&c)
                )));
            }
        }
    }

    let mut seen: BTreeSet<WeightVec> = simple.iter().cloned().chain(simple.iter().map(|s| -s)).collect();
    let mut frontier: Vec<WeightVec> = seen.iter().cloned().collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for b in &frontier {
            for a in simple {
                let r = form.reflect(b, a);
                if seen.insert(r.clone()) {
                    next.push(r);
                }
            }
        }
        if seen.len() > ROOT_CLOSURE_BOUND {
            return Err(Error::InvalidRootDatum(format!(
                "reflection closure exceeded {ROOT_CLOSURE_BOUND} roots"
            )));
        }
        frontier = next;
    }

    let mut positives: Vec<(Vec<Q>, WeightVec)> = Vec::new();
    for r in &seen {
        let coeffs = basis
            .solve(r.coords())
            .ok_or_else(|| Error::Internal("root outside the span of the simple roots".into()))?;
        if coeffs.iter().any(|c| !c.is_integer()) {
            return Err(Error::InvalidRootDatum(format!("root {r} is not an integral combination of simple roots")));
        }
        let nonneg = coeffs.iter().all(|c| !c.is_negative());
        let nonpos = coeffs.iter().all(|c| !c.is_positive());
        if !nonneg && !nonpos {
            return Err(Error::InvalidRootDatum(format!("root {r} has mixed-sign simple-root coefficients")));
        }
        if nonneg {
            positives.push((coeffs, r.clone()));
        }
    }
    // height ascending, then coefficient vector descending
    positives.sort_by(|(ca, _), (cb, _)| {
        let ha: Q = ca.iter().sum();
        let hb: Q = cb.iter().sum();
        ha.cmp(&hb).then_with(|| cb.cmp(ca))
    });
    let mut roots: Vec<Root> =
        positives.iter().map(|(_, v)| Root { vec: v.clone(), positive: true, compact: false }).collect();
    roots.extend(positives.iter().map(|(_, v)| Root { vec: -v, positive: false, compact: false }));
    Ok(roots)
}

/// Roots `α` with `⟨α, X⟩ ∈ ℤ`, i.e. the root system of the centralizer
/// `G_γ` of `γ = exp(2π√−1·X)`.
pub fn centralizer_subsystem(pair: &SymmetricPair, x: &TorusElement) -> SymmetricPair {
    let name = format!("{}_γ", pair.name);
    pair.sub_pair(name, |r| r.vec.pair_x(x.coords()).is_integer())
}

/// True iff `(μ, α) ≠ 0` for every root.
pub fn is_regular(mu: &WeightVec, pair: &SymmetricPair) -> bool {
    pair.roots.iter().all(|r| !pair.form.pair(mu, &r.vec).is_zero())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    FormNotPositiveDefinite,
    RankMismatch { root: String },
    MissingNegative { root: String },
    PositivityConflict { root: String },
    CompactnessAsymmetric { root: String },
    NotReflectionClosed { alpha: String, beta: String },
    CompactNotClosed { alpha: String, beta: String },
    GradingViolation { alpha: String, beta: String },
    DimensionMismatch { dim_gk: usize, noncompact: usize },
    OddDimension { dim_gk: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::FormNotPositiveDefinite => write!(f, "form is not positive definite"),
            Violation::RankMismatch { root } => write!(f, "root {root} has wrong length"),
            Violation::MissingNegative { root } => write!(f, "negative of {root} is not a root"),
            Violation::PositivityConflict { root } => write!(f, "not exactly one of ±{root} is positive"),
            Violation::CompactnessAsymmetric { root } => write!(f, "±{root} differ in compactness"),
            Violation::NotReflectionClosed { alpha, beta } => write!(f, "s_{alpha}({beta}) is not a root"),
            Violation::CompactNotClosed { alpha, beta } => {
                write!(f, "compact roots {alpha}, {beta} sum to a noncompact root")
            }
            Violation::GradingViolation { alpha, beta } => {
                write!(f, "Z/2 grading fails for {alpha} + {beta}")
            }
            Violation::DimensionMismatch { dim_gk, noncompact } => {
                write!(f, "dim G/K = {dim_gk} but there are {noncompact} noncompact roots")
            }
            Violation::OddDimension { dim_gk } => write!(f, "dim G/K = {dim_gk} is odd"),
        }
    }
}

/// Checks every `SymmetricPair` invariant, collecting all violations.
pub fn validate_pair(pair: &SymmetricPair) -> std::result::Result<(), Vec<Violation>> {
    let mut out = Vec::new();
    let form = &pair.form;
    if !form.gram().is_positive_definite() {
        out.push(Violation::FormNotPositiveDefinite);
    }
    if let Some(r) = pair.roots.iter().find(|r| r.vec.rank() != pair.rank) {
        out.push(Violation::RankMismatch { root: r.vec.to_string() });
        return Err(out);
    }
    for r in &pair.roots {
        match pair.root(&-&r.vec) {
            None => out.push(Violation::MissingNegative { root: r.vec.to_string() }),
            Some(neg) => {
                // each ± pair is reported once
                let first = r.vec > neg.vec;
                if neg.positive == r.positive && first {
                    out.push(Violation::PositivityConflict { root: r.vec.to_string() });
                }
                if neg.compact != r.compact && first {
                    out.push(Violation::CompactnessAsymmetric { root: r.vec.to_string() });
                }
            }
        }
    }
    for a in &pair.roots {
        for b in &pair.roots {
            if !pair.is_root(&form.reflect(&b.vec, &a.vec)) {
                out.push(Violation::NotReflectionClosed { alpha: a.vec.to_string(), beta: b.vec.to_string() });
            }
            let sum = &a.vec + &b.vec;
            if let Some(c) = pair.root(&sum) {
                if a.compact && b.compact && !c.compact {
                    out.push(Violation::CompactNotClosed { alpha: a.vec.to_string(), beta: b.vec.to_string() });
                }
                let parity = (!a.compact) ^ (!b.compact);
                if parity != !c.compact {
                    out.push(Violation::GradingViolation { alpha: a.vec.to_string(), beta: b.vec.to_string() });
                }
            }
        }
    }
    let noncompact = pair.roots.iter().filter(|r| !r.compact).count();
    if pair.dim_gk != noncompact {
        out.push(Violation::DimensionMismatch { dim_gk: pair.dim_gk, noncompact });
    }
    if pair.dim_gk % 2 != 0 {
        out.push(Violation::OddDimension { dim_gk: pair.dim_gk });
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

/// Group specification as read from JSON: `{ "name", "rank", "gram",
/// "simple_roots", "compact_roots" }`, rationals as `"p/q"` strings.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PairSpec {
    pub name: String,
    pub rank: usize,
    #[serde(deserialize_with = "q::de_q_mat", serialize_with = "q::ser_q_mat")]
    pub gram: Vec<Vec<Q>>,
    #[serde(deserialize_with = "q::de_q_mat", serialize_with = "q::ser_q_mat")]
    pub simple_roots: Vec<Vec<Q>>,
    #[serde(default)]
    pub compact_roots: Vec<usize>,
    #[serde(default = "default_true")]
    pub equal_rank: bool,
}

fn default_true() -> bool {
    true
}

impl PairSpec {
    pub fn build(&self) -> Result<SymmetricPair> {
        let form = if self.rank == 0 { BilinearForm::identity(0) } else { BilinearForm::new(&self.gram)? };
        if form.rank() != self.rank {
            return Err(Error::InvalidRootDatum(format!(
                "rank {} does not match {}×{} Gram matrix",
                self.rank,
                form.rank(),
                form.rank()
            )));
        }
        let simple: Vec<WeightVec> = self.simple_roots.iter().cloned().map(WeightVec::new).collect();
        SymmetricPair::from_simple_roots(&self.name, form, &simple, &self.compact_roots, self.equal_rank)
    }
}
