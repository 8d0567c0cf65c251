//! Laurent characters over the weight lattice, their evaluation at torus
//! elements, and the Weyl character machinery.
//!
//! A torus element is written `γ = exp(2π√−1·X)` with `X` rational, so that
//! `e^μ(γ) = exp(2πi⟨μ, X⟩)`. The exponent is reduced mod 1 exactly and
//! only then turned into a complex number.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::q::{self, Q};
use crate::rootsys::WeightVec;
use crate::weyl::{PositiveSystem, WeylElement, WeylGroup};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TorusElement {
    #[serde(rename = "X", serialize_with = "q::ser_q_vec", deserialize_with = "q::de_q_vec")]
    x: Vec<Q>,
}

impl TorusElement {
    pub fn new(x: Vec<Q>) -> Self {
        TorusElement { x }
    }

    pub fn identity(rank: usize) -> Self {
        TorusElement { x: vec![Q::zero(); rank] }
    }

    pub fn coords(&self) -> &[Q] {
        &self.x
    }

    pub fn rank(&self) -> usize {
        self.x.len()
    }

    pub fn pairing(&self, mu: &WeightVec) -> Q {
        mu.pair_x(&self.x)
    }

    /// `⟨α, X⟩ ∈ ℤ` for every root.
    pub fn is_central<'a>(&self, roots: impl IntoIterator<Item = &'a WeightVec>) -> bool {
        roots.into_iter().all(|a| self.pairing(a).is_integer())
    }

    /// Least `N ≥ 1` with `N⟨α, X⟩ ∈ ℤ` for all given roots.
    pub fn order<'a>(&self, roots: impl IntoIterator<Item = &'a WeightVec>) -> BigInt {
        roots.into_iter().fold(BigInt::one(), |acc, a| acc.lcm(self.pairing(a).denom()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ElementDescriptor {
    Central(TorusElement),
    Elliptic(TorusElement),
    Hyperbolic,
}

impl ElementDescriptor {
    pub fn kind(&self) -> &'static str {
        match self {
            ElementDescriptor::Central(_) => "central",
            ElementDescriptor::Elliptic(_) => "elliptic",
            ElementDescriptor::Hyperbolic => "hyperbolic",
        }
    }

    pub fn torus(&self) -> Option<&TorusElement> {
        match self {
            ElementDescriptor::Central(t) | ElementDescriptor::Elliptic(t) => Some(t),
            ElementDescriptor::Hyperbolic => None,
        }
    }
}

/// `exp(2πi·r)`, exact at quarter turns.
pub fn exp_2pi_i(r: &Q) -> Complex64 {
    let f = q::frac(r);
    let four = &f * q::q(4);
    if four.is_integer() {
        return match four.to_integer().to_i64() {
            Some(0) => Complex64::new(1.0, 0.0),
            Some(1) => Complex64::new(0.0, 1.0),
            Some(2) => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    let theta = 2.0 * PI * q::to_f64(&f);
    Complex64::new(theta.cos(), theta.sin())
}

/// `e^μ(γ) = exp(2πi⟨μ, X⟩)`.
pub fn eval_exp(mu: &WeightVec, gamma: &TorusElement) -> Complex64 {
    exp_2pi_i(&gamma.pairing(mu))
}

/// Sign convention for the factors of a Weyl denominator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignConvention {
    /// `∏(1 − e^{−α}(γ))`
    #[default]
    MinusExp,
    /// `∏(1 − e^{α}(γ))`
    PlusExp,
}

/// Integer-coefficient formal sum of weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentChar {
    rank: usize,
    terms: BTreeMap<WeightVec, i64>,
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    weight: WeightVec,
    coeff: i64,
}

impl Serialize for LaurentChar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<TermRepr> =
            self.terms.iter().map(|(w, &c)| TermRepr { weight: w.clone(), coeff: c }).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentChar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<TermRepr>::deserialize(d)?;
        let rank = v.first().map_or(0, |t| t.weight.rank());
        if v.iter().any(|t| t.weight.rank() != rank) {
            return Err(serde::de::Error::custom("character terms of different rank"));
        }
        let mut c = LaurentChar::zero(rank);
        for t in v {
            c.add_term(t.weight, t.coeff);
        }
        Ok(c)
    }
}

impl LaurentChar {
    pub fn zero(rank: usize) -> Self {
        LaurentChar { rank, terms: BTreeMap::new() }
    }

    pub fn one(rank: usize) -> Self {
        Self::monomial(WeightVec::zero(rank), 1)
    }

    pub fn monomial(mu: WeightVec, coeff: i64) -> Self {
        let mut c = Self::zero(mu.rank());
        c.add_term(mu, coeff);
        c
    }

    pub fn from_terms(rank: usize, terms: impl IntoIterator<Item = (WeightVec, i64)>) -> Self {
        let mut c = Self::zero(rank);
        for (w, k) in terms {
            c.add_term(w, k);
        }
        c
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn add_term(&mut self, mu: WeightVec, coeff: i64) {
        assert_eq!(mu.rank(), self.rank, "weight rank mismatch");
        if coeff == 0 {
            return;
        }
        match self.terms.entry(mu) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if *o.get() == 0 {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&WeightVec, i64)> {
        self.terms.iter().map(|(w, &c)| (w, c))
    }

    pub fn coeff(&self, mu: &WeightVec) -> i64 {
        self.terms.get(mu).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sum of coefficients, the (graded) dimension.
    pub fn dimension(&self) -> i64 {
        self.terms.values().sum()
    }

    /// Sum of absolute coefficients.
    pub fn total_dimension(&self) -> i64 {
        self.terms.values().map(|c| c.abs()).sum()
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::from_terms(self.rank, self.terms.iter().map(|(w, &c)| (w.clone(), c * k)))
    }

    pub fn shift(&self, mu: &WeightVec) -> Self {
        Self::from_terms(self.rank, self.terms.iter().map(|(w, &c)| (w + mu, c)))
    }

    pub fn act(&self, w: &WeylElement) -> Self {
        Self::from_terms(self.rank, self.terms.iter().map(|(v, &c)| (w.act(v), c)))
    }

    pub fn is_invariant(&self, group: &WeylGroup) -> bool {
        group.generators().iter().all(|g| &self.act(g) == self)
    }

    pub fn eval(&self, gamma: &TorusElement) -> Complex64 {
        eval_character(self, gamma)
    }
}

impl Add for &LaurentChar {
    type Output = LaurentChar;
    fn add(self, rhs: &LaurentChar) -> LaurentChar {
        let mut out = self.clone();
        for (w, &c) in &rhs.terms {
            out.add_term(w.clone(), c);
        }
        out
    }
}

impl Sub for &LaurentChar {
    type Output = LaurentChar;
    fn sub(self, rhs: &LaurentChar) -> LaurentChar {
        let mut out = self.clone();
        for (w, &c) in &rhs.terms {
            out.add_term(w.clone(), -c);
        }
        out
    }
}

impl Neg for &LaurentChar {
    type Output = LaurentChar;
    fn neg(self) -> LaurentChar {
        self.scale(-1)
    }
}

impl Mul for &LaurentChar {
    type Output = LaurentChar;
    fn mul(self, rhs: &LaurentChar) -> LaurentChar {
        assert_eq!(self.rank, rhs.rank, "character rank mismatch");
        let mut acc: BTreeMap<WeightVec, i64> = BTreeMap::new();
        for (a, &ca) in &self.terms {
            for (b, &cb) in &rhs.terms {
                *acc.entry(a + b).or_insert(0) += ca * cb;
            }
        }
        acc.retain(|_, c| *c != 0);
        LaurentChar { rank: self.rank, terms: acc }
    }
}

/// `Σ coeff · e^μ(γ)`.
pub fn eval_character(chi: &LaurentChar, gamma: &TorusElement) -> Complex64 {
    chi.terms.iter().map(|(w, &c)| eval_exp(w, gamma) * c as f64).sum()
}

/// `Σ_{w∈W} det(w) e^{wμ}`.
pub fn weyl_numerator(mu: &WeightVec, group: &WeylGroup) -> LaurentChar {
    LaurentChar::from_terms(mu.rank(), group.elements().iter().map(|w| (w.act(mu), w.det() as i64)))
}

/// `e^ρ(γ) ∏_{α>0} (1 − e^{∓α}(γ))`.
pub fn weyl_denominator_value(
    gamma: &TorusElement,
    positives: &[WeightVec],
    rho: &WeightVec,
    conv: SignConvention,
) -> Complex64 {
    positives.iter().fold(eval_exp(rho, gamma), |acc, a| {
        let e = match conv {
            SignConvention::MinusExp => eval_exp(&-a, gamma),
            SignConvention::PlusExp => eval_exp(a, gamma),
        };
        acc * (Complex64::new(1.0, 0.0) - e)
    })
}

/// `∏_{α>0} (μ+ρ, α)/(ρ, α)` as an exact rational; no dominance check.
pub fn weyl_dim_rational(mu: &WeightVec, sys: &PositiveSystem) -> Q {
    let shifted = mu + &sys.rho;
    sys.positives.iter().fold(Q::one(), |acc, a| acc * sys.form.pair(&shifted, a) / sys.form.pair(&sys.rho, a))
}

/// Weyl dimension formula.
pub fn weyl_dim(mu: &WeightVec, sys: &PositiveSystem) -> Result<BigInt> {
    if !sys.is_dominant(mu) {
        return Err(Error::NotDominant(mu.to_string()));
    }
    let d = weyl_dim_rational(mu, sys);
    if !d.is_integer() {
        return Err(Error::Internal(format!("Weyl dimension of {mu} is not integral")));
    }
    Ok(d.to_integer())
}

/// Divides by `e^{α/2} − e^{−α/2}`; errors if the division is not exact.
fn divide_by_root_factor(p: &LaurentChar, alpha: &WeightVec, sys: &PositiveSystem) -> Result<LaurentChar> {
    let aa = sys.form.norm_sq(alpha);
    let half = alpha.half();
    // line base -> (exponent -> coefficient), after multiplying by e^{α/2}
    let mut lines: BTreeMap<WeightVec, BTreeMap<BigInt, i64>> = BTreeMap::new();
    for (w, c) in p.terms() {
        let v = w + &half;
        let t = sys.form.pair(&v, alpha) / &aa;
        let n = t.floor().to_integer();
        let base = &v - &alpha.scale(&Q::from_integer(n.clone()));
        lines.entry(base).or_default().insert(n, c);
    }
    let mut out = LaurentChar::zero(p.rank());
    for (base, coeffs) in lines {
        // (t − 1)·Q = P, run from the top degree down
        let lo = coeffs.keys().next().cloned().expect("nonempty line");
        let hi = coeffs.keys().next_back().cloned().expect("nonempty line");
        let mut carry = 0i64;
        let mut n = hi.clone();
        while n > lo {
            carry += coeffs.get(&n).copied().unwrap_or(0);
            let exp: BigInt = &n - BigInt::one();
            if carry != 0 {
                out.add_term(&base + &alpha.scale(&Q::from_integer(exp.clone())), carry);
            }
            n = exp;
        }
        if coeffs.get(&lo).copied().unwrap_or(0) + carry != 0 {
            return Err(Error::Internal(format!("Weyl numerator not divisible by the factor for {alpha}")));
        }
    }
    Ok(out)
}

/// Character of the irreducible with highest weight `μ`, via exact division
/// of the Weyl numerator by the Weyl denominator.
pub fn irr_character(mu: &WeightVec, sys: &PositiveSystem) -> Result<LaurentChar> {
    if !sys.is_dominant(mu) {
        return Err(Error::NotDominant(mu.to_string()));
    }
    let mut chi = weyl_numerator(&(mu + &sys.rho), &sys.weyl);
    for a in &sys.positives {
        chi = divide_by_root_factor(&chi, a, sys)?;
    }
    let expected = weyl_dim_rational(mu, sys);
    if Q::from_integer(chi.dimension().into()) != expected {
        return Err(Error::Internal(format!("character of {mu} has the wrong dimension")));
    }
    Ok(chi)
}

/// Weight multiplicities of the irreducible with highest weight `μ` by
/// Freudenthal's recursion.
pub fn freudenthal_multiplicities(mu: &WeightVec, sys: &PositiveSystem) -> Result<BTreeMap<WeightVec, i64>> {
    if !sys.is_dominant(mu) {
        return Err(Error::NotDominant(mu.to_string()));
    }
    if !sys.is_integral(mu) {
        return Err(Error::InvalidInput(format!("{mu} is not integral for the root system")));
    }
    let form = &sys.form;
    let top = form.norm_sq(&(mu + &sys.rho));
    let top_height = sys.height(mu);
    let mut mult: HashMap<WeightVec, i64> = HashMap::from([(mu.clone(), 1)]);
    let mut level = vec![mu.clone()];
    while !level.is_empty() {
        let mut cands: Vec<WeightVec> =
            level.iter().flat_map(|v| sys.simple.iter().map(move |a| v - a)).collect();
        cands.sort();
        cands.dedup();
        let mut next = Vec::new();
        for nu in cands {
            let denom = &top - form.norm_sq(&(&nu + &sys.rho));
            if !denom.is_positive() {
                continue;
            }
            let mut num = Q::zero();
            for a in &sys.positives {
                let mut k = 1i64;
                loop {
                    let up = &nu + &a.scale(&q::q(k));
                    if sys.height(&up) > top_height {
                        break;
                    }
                    if let Some(&m) = mult.get(&up) {
                        num += Q::from_integer(m.into()) * form.pair(&up, a);
                    }
                    k += 1;
                }
            }
            let m = num * q::q(2) / denom;
            if !m.is_integer() {
                return Err(Error::Internal(format!("non-integral multiplicity at {nu}")));
            }
            let m = m.to_integer().to_i64().ok_or_else(|| Error::Internal("multiplicity overflow".into()))?;
            if m > 0 {
                mult.insert(nu.clone(), m);
                next.push(nu);
            }
        }
        level = next;
    }
    Ok(mult.into_iter().collect())
}

/// Upper bound on leading-term stripping steps in [`decompose`].
pub const DECOMPOSE_STEP_BOUND: usize = 100_000;

/// Writes a Weyl-invariant character as `Σ m_U χ_U` by repeatedly
/// stripping the highest dominant term. Multiplicities may be negative.
pub fn decompose(chi: &LaurentChar, sys: &PositiveSystem) -> Result<Vec<(WeightVec, i64)>> {
    if chi.rank() != sys.rank() {
        return Err(Error::InvalidInput("character rank differs from the root system".into()));
    }
    if !chi.is_invariant(&sys.weyl) {
        return Err(Error::NotInvariant);
    }
    let mut rest = chi.clone();
    let mut out = Vec::new();
    for _ in 0..DECOMPOSE_STEP_BOUND {
        let Some((top, m)) = rest
            .terms()
            .max_by(|(a, _), (b, _)| sys.height(a).cmp(&sys.height(b)).then_with(|| a.cmp(b)))
            .map(|(w, c)| (w.clone(), c))
        else {
            return Ok(out);
        };
        if !sys.is_dominant(&top) {
            return Err(Error::Internal(format!("leading weight {top} is not dominant")));
        }
        let irr = irr_character(&top, sys)?;
        rest = &rest - &irr.scale(m);
        out.push((top, m));
    }
    Err(Error::Internal("decomposition did not terminate".into()))
}

/// `∏_{β∈S} (e^{β/2} − e^{−β/2})`, the graded spinor character `Δ⁺ − Δ⁻`
/// of the span of the root spaces `±S`.
pub fn spin_graded_character(s: &[WeightVec], rank: usize) -> LaurentChar {
    s.iter().fold(LaurentChar::one(rank), |acc, b| {
        let h = b.half();
        let f = LaurentChar::from_terms(rank, [(h.clone(), 1), (-h, -1)]);
        &acc * &f
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q::{q, qr};
    use crate::rootsys::{generate_root_system, BilinearForm};

    fn sys(simple: &[&[i64]], n: usize) -> PositiveSystem {
        let form = BilinearForm::identity(n);
        let simple: Vec<WeightVec> = simple.iter().map(|v| WeightVec::from_ints(v)).collect();
        let pos = generate_root_system(&simple, &form)
            .unwrap()
            .into_iter()
            .filter(|r| r.positive)
            .map(|r| r.vec)
            .collect();
        PositiveSystem::new(pos, &form).unwrap()
    }

    fn a1() -> PositiveSystem {
        // α = (1), (α, α) = 2
        let form = BilinearForm::new(&[vec![q(2)]]).unwrap();
        PositiveSystem::new(vec![WeightVec::from_ints(&[1])], &form).unwrap()
    }

    fn w(v: &[Q]) -> WeightVec {
        WeightVec::new(v.to_vec())
    }

    #[test]
    fn exponentials() {
        let g = TorusElement::new(vec![qr(1, 2)]);
        assert_eq!(eval_exp(&WeightVec::zero(1), &g), Complex64::new(1.0, 0.0));
        assert_eq!(eval_exp(&w(&[q(1)]), &g), Complex64::new(-1.0, 0.0));
        let g3 = TorusElement::new(vec![qr(1, 3)]);
        let z = eval_exp(&w(&[q(1)]), &g3);
        assert!((z.norm() - 1.0).abs() < 1e-12);
        assert!((z - Complex64::from_polar(1.0, 2.0 * PI / 3.0)).norm() < 1e-12);
    }

    #[test]
    fn torus_order_and_centrality() {
        let roots = [w(&[q(1)]), w(&[q(-1)])];
        assert_eq!(TorusElement::new(vec![qr(1, 6)]).order(&roots), BigInt::from(6));
        assert!(TorusElement::new(vec![q(1)]).is_central(&roots));
        assert!(!TorusElement::new(vec![qr(1, 2)]).is_central(&roots));
    }

    #[test]
    fn character_evaluation() {
        let g = TorusElement::new(vec![qr(1, 2)]);
        assert_eq!(eval_character(&LaurentChar::one(1), &g), Complex64::new(1.0, 0.0));
        let c = LaurentChar::from_terms(1, [(w(&[q(1)]), 1), (w(&[q(-1)]), 1)]);
        assert_eq!(eval_character(&c, &g), Complex64::new(-2.0, 0.0));
        // dim-2 irreducible of A1 at a generic point
        let s = a1();
        let v1 = irr_character(&w(&[qr(1, 2)]), &s).unwrap();
        let x = TorusElement::new(vec![qr(2, 7)]);
        let expect = 2.0 * (2.0 * PI * 0.5 * 2.0 / 7.0).cos();
        assert!((eval_character(&v1, &x) - Complex64::new(expect, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn numerators() {
        let triv = PositiveSystem::new(vec![], &BilinearForm::identity(1)).unwrap();
        let mu = w(&[qr(1, 3)]);
        assert_eq!(weyl_numerator(&mu, &triv.weyl), LaurentChar::monomial(mu, 1));
        let s = a1();
        let n = weyl_numerator(&s.rho, &s.weyl);
        assert_eq!(n, LaurentChar::from_terms(1, [(w(&[qr(1, 2)]), 1), (w(&[qr(-1, 2)]), -1)]));
        let s = sys(&[&[1, -1, 0], &[0, 1, -1]], 3);
        let n = weyl_numerator(&s.rho, &s.weyl);
        assert_eq!(n.len(), 6);
        for g in s.weyl.generators() {
            assert_eq!(n.act(g), -&n);
        }
    }

    #[test]
    fn denominators() {
        let s = a1();
        let g = TorusElement::new(vec![qr(1, 2)]);
        let d = weyl_denominator_value(&g, &s.positives, &s.rho, SignConvention::MinusExp);
        assert!((d - Complex64::new(0.0, 2.0)).norm() < 1e-12);
        let e = TorusElement::identity(1);
        assert_eq!(weyl_denominator_value(&e, &s.positives, &s.rho, SignConvention::MinusExp).norm(), 0.0);
        let empty = weyl_denominator_value(&e, &[], &WeightVec::zero(1), SignConvention::MinusExp);
        assert_eq!(empty, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn dimensions() {
        let s = a1();
        assert_eq!(weyl_dim(&WeightVec::zero(1), &s).unwrap(), BigInt::from(1));
        for k in 0..6 {
            assert_eq!(weyl_dim(&w(&[qr(k, 2)]), &s).unwrap(), BigInt::from(k + 1));
        }
        assert!(matches!(weyl_dim(&w(&[q(-1)]), &s), Err(Error::NotDominant(_))));
        let a2 = sys(&[&[1, -1, 0], &[0, 1, -1]], 3);
        let theta = WeightVec::from_ints(&[1, 0, -1]);
        assert_eq!(weyl_dim(&theta, &a2).unwrap(), BigInt::from(8));
    }

    #[test]
    fn irreducible_characters() {
        let s = a1();
        assert_eq!(irr_character(&WeightVec::zero(1), &s).unwrap(), LaurentChar::one(1));
        let v = irr_character(&w(&[qr(1, 2)]), &s).unwrap();
        assert_eq!(v, LaurentChar::from_terms(1, [(w(&[qr(1, 2)]), 1), (w(&[qr(-1, 2)]), 1)]));
        let a2 = sys(&[&[1, -1, 0], &[0, 1, -1]], 3);
        let std = irr_character(&WeightVec::from_ints(&[1, 0, 0]), &a2).unwrap();
        assert_eq!(std.len(), 3);
        assert_eq!(std.dimension(), 3);
        assert!(std.is_invariant(&a2.weyl));
    }

    #[test]
    fn freudenthal_small_cases() {
        let s = a1();
        let m = freudenthal_multiplicities(&WeightVec::zero(1), &s).unwrap();
        assert_eq!(m, BTreeMap::from([(WeightVec::zero(1), 1)]));
        let m = freudenthal_multiplicities(&w(&[q(1)]), &s).unwrap();
        assert_eq!(m, BTreeMap::from([(w(&[q(1)]), 1), (w(&[q(0)]), 1), (w(&[q(-1)]), 1)]));
        let a2 = sys(&[&[1, -1, 0], &[0, 1, -1]], 3);
        let adj = freudenthal_multiplicities(&WeightVec::from_ints(&[1, 0, -1]), &a2).unwrap();
        assert_eq!(adj[&WeightVec::zero(3)], 2);
        assert_eq!(adj.values().sum::<i64>(), 8);
    }

    #[test]
    fn clebsch_gordan() {
        let s = a1();
        let v1 = irr_character(&w(&[qr(1, 2)]), &s).unwrap();
        // brute-force weights of V1 ⊗ V1: {1, 0, 0, −1}
        let mut brute = LaurentChar::zero(1);
        for a in [qr(1, 2), qr(-1, 2)] {
            for b in [qr(1, 2), qr(-1, 2)] {
                brute.add_term(w(&[a.clone() + b]), 1);
            }
        }
        let prod = &v1 * &v1;
        assert_eq!(prod, brute);
        assert_eq!(prod.dimension(), 4);
        let d = decompose(&prod, &s).unwrap();
        assert_eq!(d, vec![(w(&[q(1)]), 1), (WeightVec::zero(1), 1)]);
    }

    #[test]
    fn decompose_rejects_non_invariant() {
        let s = a1();
        let spin = spin_graded_character(&[w(&[q(1)])], 1);
        assert_eq!(decompose(&spin, &s), Err(Error::NotInvariant));
    }

    #[test]
    fn spin_characters() {
        assert_eq!(spin_graded_character(&[], 2), LaurentChar::one(2));
        let a = WeightVec::from_ints(&[1, -1]);
        let s = spin_graded_character(std::slice::from_ref(&a), 2);
        assert_eq!(s, LaurentChar::from_terms(2, [(a.half(), 1), (-a.half(), -1)]));
        assert_eq!(s.total_dimension(), 2);
        let b = WeightVec::from_ints(&[0, 2]);
        let s2 = spin_graded_character(&[a.clone(), b.clone()], 2);
        assert_eq!(s2.len(), 4);
        assert_eq!(s2.total_dimension(), 4);
        assert_eq!(s2.coeff(&(&a + &b).half()), 1);
    }

    #[test]
    fn serde_roundtrip() {
        let c = LaurentChar::from_terms(1, [(w(&[qr(1, 2)]), 3), (w(&[qr(-1, 2)]), -1)]);
        let j = serde_json::to_string(&c).unwrap();
        assert_eq!(j, r#"[{"weight":["-1/2"],"coeff":-1},{"weight":["1/2"],"coeff":3}]"#);
        let back: LaurentChar = serde_json::from_str(&j).unwrap();
        assert_eq!(back, c);
    }
}
