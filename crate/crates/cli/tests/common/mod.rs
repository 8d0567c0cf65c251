//! Helpers shared by the integration tests: sample weights, random torsion
//! elements, and fixture paths.
#![allow(dead_code)]

use std::path::PathBuf;

pub use indexcalc_core::q::qr;
use indexcalc_core::q::{q, Matrix};
use indexcalc_core::rootsys::simple_roots_of;
use indexcalc_core::{BilinearForm, CatalogEntry, ElementDescriptor, SymmetricPair, TorusElement, WeightVec};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

/// Fundamental weights `ω_i` with `2(ω_i, α_j)/(α_j, α_j) = δ_ij`, inside
/// the span of the simple roots.
pub fn fundamental_weights(simple: &[WeightVec], form: &BilinearForm) -> Vec<WeightVec> {
    let n = simple.len();
    let mut c = Matrix::zeros(n, n);
    for (k, a) in simple.iter().enumerate() {
        for (j, b) in simple.iter().enumerate() {
            c.set(k, j, form.coroot_pairing(a, b));
        }
    }
    let inv = c.inverse().expect("Cartan matrix is invertible");
    (0..n)
        .map(|i| (0..n).fold(WeightVec::zero(form.rank()), |acc, k| &acc + &simple[k].scale(inv.get(i, k))))
        .collect()
}

/// Valid highest weights `λ = ρ_n + Σ c_i ω_i`, `|c_i| ≤ bound`, that are
/// `R^+(K,T)`-dominant with `(λ, α^∨) ≤ bound` for every compact positive
/// root. Fixed order.
pub fn sample_lambdas(pair: &SymmetricPair, bound: i64) -> Vec<WeightVec> {
    let omegas = fundamental_weights(&simple_roots_of(&pair.positive_roots()), &pair.form);
    let compact = pair.compact_positive();
    let rho_n = pair.rho_n();
    let span = (2 * bound + 1) as usize;
    let mut out = Vec::new();
    for idx in 0..span.pow(omegas.len() as u32) {
        let mut lambda = rho_n.clone();
        let mut r = idx;
        for w in &omegas {
            let c = (r % span) as i64 - bound;
            r /= span;
            lambda = &lambda + &w.scale(&q(c));
        }
        // λ − ρ_n is integral by construction
        let ok = compact.iter().all(|a| {
            let p = pair.form.coroot_pairing(&lambda, a);
            p >= q(0) && p <= q(bound)
        });
        if ok {
            out.push(lambda);
        }
    }
    out
}

/// Random `X` with coordinates `k/N`, `N ≤ max_den`.
pub fn random_torus(rng: &mut ChaCha8Rng, rank: usize, max_den: i64) -> TorusElement {
    let den = rng.gen_range(2..=max_den);
    TorusElement::new((0..rank).map(|_| qr(rng.gen_range(-den..=den), den)).collect())
}

pub fn is_regular_element(pair: &SymmetricPair, t: &TorusElement) -> bool {
    pair.positive_roots().iter().all(|a| !t.pairing(a).is_integer())
}

/// Random torsion element whose powers generate a dense-enough subgroup:
/// no root pairs integrally with `X`.
pub fn random_regular(rng: &mut ChaCha8Rng, pair: &SymmetricPair) -> TorusElement {
    loop {
        let t = random_torus(rng, pair.rank, 29);
        if is_regular_element(pair, &t) {
            return t;
        }
    }
}

/// Central when every root pairs integrally, elliptic otherwise.
pub fn describe(pair: &SymmetricPair, t: TorusElement) -> ElementDescriptor {
    if t.is_central(pair.roots.iter().map(|r| &r.vec)) {
        ElementDescriptor::Central(t)
    } else {
        ElementDescriptor::Elliptic(t)
    }
}

pub fn entries() -> Vec<CatalogEntry> {
    indexcalc_core::catalog_names().into_iter().map(|n| indexcalc_core::catalog_lookup(n).unwrap()).collect()
}

pub fn run(args: &[&str]) -> (i32, String) {
    indexcalc::run(std::iter::once("indexcalc").chain(args.iter().copied()))
}

pub fn json_run(args: &[&str]) -> serde_json::Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let (code, out) = run(&all);
    assert_eq!(code, 0, "{args:?} failed: {out}");
    serde_json::from_str(&out).unwrap()
}

pub fn value_of(v: &serde_json::Value) -> (f64, f64) {
    (v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}
