//! Finite Weyl groups as exact matrices acting on weight coordinates.

use std::collections::{HashMap, HashSet, VecDeque};

use num_traits::{Signed, Zero};

use crate::charalg::TorusElement;
use crate::q::{Matrix, Q};
use crate::rootsys::{half_sum, simple_roots_of, BilinearForm, WeightVec};
use crate::{Error, Result};

pub const DEFAULT_WEYL_BOUND: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeylElement {
    matrix: Matrix,
    /// Inverse transpose, the action on torus coordinates.
    dual: Matrix,
    length: usize,
    det: i8,
}

impl WeylElement {
    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn length(&self) -> usize {
        self.length
    }

    /// `det(w) = (−1)^ℓ(w)`.
    pub fn det(&self) -> i8 {
        self.det
    }

    pub fn act(&self, mu: &WeightVec) -> WeightVec {
        WeightVec::new(self.matrix.apply(mu.coords()))
    }

    /// `X ↦ wX`, so that `⟨wμ, wX⟩ = ⟨μ, X⟩`.
    pub fn act_torus(&self, x: &TorusElement) -> TorusElement {
        TorusElement::new(self.dual.apply(x.coords()))
    }

    pub fn is_identity(&self) -> bool {
        self.matrix == Matrix::identity(self.matrix.rows())
    }

    /// Sort key used wherever a canonical element is needed: length, then
    /// the matrix entries lexicographically.
    fn key(&self) -> (usize, &Matrix) {
        (self.length, &self.matrix)
    }
}

#[derive(Clone, Debug)]
pub struct WeylGroup {
    elements: Vec<WeylElement>,
    generators: Vec<WeylElement>,
    positives: Vec<WeightVec>,
    index: HashMap<Matrix, usize>,
}

impl WeylGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Elements sorted by length, ties broken by matrix order.
    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }

    pub fn generators(&self) -> &[WeylElement] {
        &self.generators
    }

    pub fn positives(&self) -> &[WeightVec] {
        &self.positives
    }

    pub fn identity(&self) -> &WeylElement {
        &self.elements[0]
    }

    pub fn find(&self, m: &Matrix) -> Option<&WeylElement> {
        self.index.get(m).map(|&i| &self.elements[i])
    }

    pub fn longest(&self) -> &WeylElement {
        self.elements.last().expect("a Weyl group is never empty")
    }
}

fn inversions(m: &Matrix, positives: &[WeightVec], pos_set: &HashSet<&WeightVec>) -> usize {
    positives
        .iter()
        .filter(|a| !pos_set.contains(&WeightVec::new(m.apply(a.coords()))))
        .count()
}

fn make_element(matrix: Matrix, positives: &[WeightVec], pos_set: &HashSet<&WeightVec>) -> Result<WeylElement> {
    let length = inversions(&matrix, positives, pos_set);
    let dual = matrix
        .inverse()
        .ok_or_else(|| Error::Internal("singular Weyl matrix".into()))?
        .transpose();
    let det = if length % 2 == 0 { 1 } else { -1 };
    Ok(WeylElement { matrix, dual, length, det })
}

/// Enumerates the Weyl group generated by the reflections in the given
/// positive roots, with the default size bound.
pub fn enumerate_weyl(positives: &[WeightVec], form: &BilinearForm) -> Result<WeylGroup> {
    enumerate_weyl_bounded(positives, form, DEFAULT_WEYL_BOUND)
}

pub fn enumerate_weyl_bounded(positives: &[WeightVec], form: &BilinearForm, bound: usize) -> Result<WeylGroup> {
    let n = form.rank();
    let pos_set: HashSet<&WeightVec> = positives.iter().collect();
    let simple = simple_roots_of(positives);
    let gens: Vec<Matrix> = simple.iter().map(|a| form.reflection_matrix(a)).collect();

    let mut seen: HashSet<Matrix> = HashSet::new();
    let mut order = Vec::new();
    let mut queue = VecDeque::from([Matrix::identity(n)]);
    seen.insert(Matrix::identity(n));
    while let Some(m) = queue.pop_front() {
        for g in &gens {
            let next = m.mul(g);
            if seen.insert(next.clone()) {
                if seen.len() > bound {
                    return Err(Error::GroupTooLarge { bound });
                }
                queue.push_back(next);
            }
        }
        order.push(m);
    }

    let mut elements = order
        .into_iter()
        .map(|m| make_element(m, positives, &pos_set))
        .collect::<Result<Vec<_>>>()?;
    elements.sort_by(|a, b| a.key().cmp(&b.key()));
    let index = elements.iter().enumerate().map(|(i, e)| (e.matrix.clone(), i)).collect();
    let generators = gens
        .into_iter()
        .map(|m| make_element(m, positives, &pos_set))
        .collect::<Result<Vec<_>>>()?;
    Ok(WeylGroup { elements, generators, positives: positives.to_vec(), index })
}

/// One representative of minimal length per right coset `sub·w`.
pub fn coset_reps(sub: &WeylGroup, whole: &WeylGroup) -> Result<Vec<WeylElement>> {
    for s in sub.elements() {
        if whole.find(&s.matrix).is_none() {
            return Err(Error::NotASubgroup("element of the subgroup is not in the whole group".into()));
        }
    }
    for s in sub.elements() {
        for g in sub.generators() {
            if sub.find(&s.matrix.mul(&g.matrix)).is_none() {
                return Err(Error::NotASubgroup("subset is not closed under composition".into()));
            }
        }
    }
    let mut covered: HashSet<&Matrix> = HashSet::new();
    let mut reps = Vec::new();
    for w in whole.elements() {
        if covered.contains(&w.matrix) {
            continue;
        }
        for s in sub.elements() {
            let sw = s.matrix.mul(&w.matrix);
            let e = whole.find(&sw).ok_or_else(|| Error::NotASubgroup("coset leaves the group".into()))?;
            covered.insert(&e.matrix);
        }
        reps.push(w.clone());
    }
    debug_assert_eq!(reps.len() * sub.order(), whole.order());
    Ok(reps)
}

#[derive(Clone, Debug)]
pub struct DominantRep {
    pub w: WeylElement,
    pub mu_dom: WeightVec,
    pub strict: bool,
}

/// Finds `w` of minimal length with `wμ` dominant for `positives`.
pub fn dominant_representative(
    mu: &WeightVec,
    group: &WeylGroup,
    positives: &[WeightVec],
    form: &BilinearForm,
) -> DominantRep {
    for w in group.elements() {
        let img = w.act(mu);
        if positives.iter().all(|a| !form.pair(&img, a).is_negative()) {
            let strict = positives.iter().all(|a| form.pair(&img, a).is_positive());
            return DominantRep { w: w.clone(), mu_dom: img, strict };
        }
    }
    unreachable!("every weight has a dominant Weyl conjugate")
}

/// A positive system together with its Weyl group and half-sum, the data
/// every character computation needs.
#[derive(Clone, Debug)]
pub struct PositiveSystem {
    pub form: BilinearForm,
    pub positives: Vec<WeightVec>,
    pub simple: Vec<WeightVec>,
    pub rho: WeightVec,
    pub weyl: WeylGroup,
}

impl PositiveSystem {
    pub fn new(positives: Vec<WeightVec>, form: &BilinearForm) -> Result<Self> {
        let weyl = enumerate_weyl(&positives, form)?;
        let simple = simple_roots_of(&positives);
        let rho = half_sum(form.rank(), positives.iter());
        Ok(PositiveSystem { form: form.clone(), positives, simple, rho, weyl })
    }

    pub fn rank(&self) -> usize {
        self.form.rank()
    }

    pub fn is_dominant(&self, mu: &WeightVec) -> bool {
        self.positives.iter().all(|a| !self.form.pair(mu, a).is_negative())
    }

    pub fn is_strictly_dominant(&self, mu: &WeightVec) -> bool {
        self.positives.iter().all(|a| self.form.pair(mu, a).is_positive())
    }

    pub fn is_regular(&self, mu: &WeightVec) -> bool {
        self.positives.iter().all(|a| !self.form.pair(mu, a).is_zero())
    }

    /// Is `2(μ,α)/(α,α)` integral for every positive root?
    pub fn is_integral(&self, mu: &WeightVec) -> bool {
        self.positives.iter().all(|a| self.form.coroot_pairing(mu, a).is_integer())
    }

    pub fn dominant(&self, mu: &WeightVec) -> DominantRep {
        dominant_representative(mu, &self.weyl, &self.positives, &self.form)
    }

    /// `(μ, ρ)`, used to order weights.
    pub fn height(&self, mu: &WeightVec) -> Q {
        self.form.pair(mu, &self.rho)
    }
}
