//! The free coproduct completion `Fam(V)` over a finite lattice `V`.
//!
//! An object is a family `(X_j)_{j∈J}` of lattice elements; a morphism
//! `(X_j) → (Y_k)` is an index function `f` with `X_j ≤ Y_{f j}` (for thin
//! `V` the components carry no further data). Every morphism is a
//! coproduct of *covers*, morphisms into a one-element family, and the
//! descent level of a cover `(X_j) ≤ Y` is decided by:
//!
//! * almost descent iff `J` is non-empty;
//! * descent iff `Z = ⋁_j (Z ∧ X_j)` for every `Z ≤ Y`;
//! * effective descent iff moreover every compatible family `W_j ≤ X_j`
//!   (with `W_j ∧ X_i = X_j ∧ W_i`) satisfies `X_j ∧ ⋁_i W_i = W_j`.

pub mod lattice;

use itertools::Itertools;
use thiserror::Error;

pub use lattice::{LatticeError, LatticeV};

use crate::finbase::{self, Atom, DescentClass, DescentLevel, FinFunction, FinSet, SetError};
use crate::fincat::FinCategory;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamError {
    #[error(transparent)]
    Set(#[from] SetError),
    #[error("fiber table has {found} entries for an index of size {expected}")]
    FiberLength { expected: usize, found: usize },
    #[error("fiber value out of range at {0}")]
    FiberRange(Atom),
    #[error("component at {0} is not an inequality X_j ≤ Y_f(j)")]
    NotBelow(Atom),
    #[error("component at {0} is not a morphism between the right fibers")]
    BadComponent(Atom),
    #[error("codomains differ")]
    CodomainMismatch,
    #[error("a cover needs a one-element codomain, got {0}")]
    NotCover(usize),
    #[error("cover is only {0}, expected descent")]
    NotDescent(DescentLevel),
    #[error("the fiber category has no pullback of {0} and {1}")]
    NoPullback(Atom, Atom),
}

/// A family `(X_j)_{j∈J}`; `fiber[j]` indexes an element of `V` (or an object
/// of the fiber category for the non-thin variant).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamObject {
    pub index: FinSet,
    pub fiber: Vec<usize>,
}

impl FamObject {
    pub fn new(index: FinSet, fiber: Vec<usize>) -> Result<Self, FamError> {
        if index.len() != fiber.len() {
            return Err(FamError::FiberLength {
                expected: index.len(),
                found: fiber.len(),
            });
        }
        Ok(FamObject { index, fiber })
    }

    /// Family indexed by `0..n`.
    pub fn of(fiber: &[usize]) -> Self {
        FamObject {
            index: FinSet::range(fiber.len()),
            fiber: fiber.to_vec(),
        }
    }

    pub fn singleton(y: usize) -> Self {
        FamObject {
            index: FinSet::of(&["*"]),
            fiber: vec![y],
        }
    }

    pub fn len(&self) -> usize {
        self.fiber.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fiber.is_empty()
    }

    fn check(&self, size: usize) -> Result<(), FamError> {
        match self.fiber.iter().position(|&x| x >= size) {
            Some(j) => Err(FamError::FiberRange(self.index.atom(j).clone())),
            None => Ok(()),
        }
    }
}

/// A morphism of `Fam(V)` for thin `V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamMorphism {
    pub dom: FamObject,
    pub cod: FamObject,
    pub index_map: FinFunction,
}

impl FamMorphism {
    pub fn new(v: &LatticeV, dom: FamObject, cod: FamObject, index_map: FinFunction) -> Result<Self, FamError> {
        dom.check(v.len())?;
        cod.check(v.len())?;
        if index_map.dom() != &dom.index || index_map.cod() != &cod.index {
            return Err(FamError::Set(SetError::DomainMismatch(
                "index map does not match the families".into(),
            )));
        }
        if let Some(j) = (0..dom.len()).find(|&j| !v.leq(dom.fiber[j], cod.fiber[index_map.apply(j)])) {
            return Err(FamError::NotBelow(dom.index.atom(j).clone()));
        }
        Ok(FamMorphism { dom, cod, index_map })
    }

    pub fn identity(x: &FamObject) -> Self {
        FamMorphism {
            dom: x.clone(),
            cod: x.clone(),
            index_map: FinFunction::identity(&x.index),
        }
    }
}

/// A morphism into a one-element family: `(X_j)_{j∈J} ≤ Y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cover(FamMorphism);

impl Cover {
    pub fn new(m: FamMorphism) -> Result<Self, FamError> {
        if m.cod.len() != 1 {
            return Err(FamError::NotCover(m.cod.len()));
        }
        Ok(Cover(m))
    }

    /// The cover `(fibers[j])_j ≤ y` indexed by `0..n`.
    pub fn over(v: &LatticeV, fibers: &[usize], y: usize) -> Result<Self, FamError> {
        let dom = FamObject::of(fibers);
        let cod = FamObject::singleton(y);
        let map = FinFunction::new(dom.index.clone(), cod.index.clone(), vec![0; fibers.len()])?;
        Cover::new(FamMorphism::new(v, dom, cod, map)?)
    }

    /// Like [`Cover::over`] with elements given by name.
    pub fn named(v: &LatticeV, fibers: &[&str], y: &str) -> Result<Self, FamError> {
        let fibers: Vec<usize> = fibers.iter().map(|n| v.elem(n)).collect();
        Cover::over(v, &fibers, v.elem(y))
    }

    pub fn morphism(&self) -> &FamMorphism {
        &self.0
    }

    pub fn fibers(&self) -> &[usize] {
        &self.0.dom.fiber
    }

    pub fn target(&self) -> usize {
        self.0.cod.fiber[0]
    }

    pub fn len(&self) -> usize {
        self.0.dom.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.dom.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamPullback {
    pub apex: FamObject,
    pub proj1: FamMorphism,
    pub proj2: FamMorphism,
}

/// Pullback of `m1: A → C ← B: m2`: index pairs over a common `k`, fibers
/// `A_j ∧ B_k`.
pub fn fam_pullback(v: &LatticeV, m1: &FamMorphism, m2: &FamMorphism) -> Result<FamPullback, FamError> {
    if m1.cod != m2.cod {
        return Err(FamError::CodomainMismatch);
    }
    let pb = finbase::pullback(&m1.index_map, &m2.index_map)?;
    let fiber = (0..pb.apex.len())
        .map(|t| v.meet(m1.dom.fiber[pb.proj_f.apply(t)], m2.dom.fiber[pb.proj_g.apply(t)]))
        .collect();
    let apex = FamObject { index: pb.apex, fiber };
    let proj1 = FamMorphism::new(v, apex.clone(), m1.dom.clone(), pb.proj_f)?;
    let proj2 = FamMorphism::new(v, apex.clone(), m2.dom.clone(), pb.proj_g)?;
    Ok(FamPullback { apex, proj1, proj2 })
}

/// A morphism of `Fam(C)` for an arbitrary finite category `C`: index map
/// plus one morphism of `C` per index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatFamMorphism {
    pub dom: FamObject,
    pub cod: FamObject,
    pub index_map: FinFunction,
    pub components: Vec<usize>,
}

impl CatFamMorphism {
    pub fn new(
        c: &FinCategory,
        dom: FamObject,
        cod: FamObject,
        index_map: FinFunction,
        components: Vec<usize>,
    ) -> Result<Self, FamError> {
        dom.check(c.objects().len())?;
        cod.check(c.objects().len())?;
        if components.len() != dom.len() {
            return Err(FamError::FiberLength {
                expected: dom.len(),
                found: components.len(),
            });
        }
        for j in 0..dom.len() {
            let m = components[j];
            if m >= c.morphisms().len() || c.src(m) != dom.fiber[j] || c.tgt(m) != cod.fiber[index_map.apply(j)] {
                return Err(FamError::BadComponent(dom.index.atom(j).clone()));
            }
        }
        Ok(CatFamMorphism {
            dom,
            cod,
            index_map,
            components,
        })
    }
}

/// Pullback in `Fam(C)`: index pairs over a common `k`, fibers the pullbacks
/// in `C` of the components. Fails when `C` lacks one of them.
pub fn fam_pullback_in(
    c: &FinCategory,
    m1: &CatFamMorphism,
    m2: &CatFamMorphism,
) -> Result<(FamObject, CatFamMorphism, CatFamMorphism), FamError> {
    if m1.cod != m2.cod {
        return Err(FamError::CodomainMismatch);
    }
    let pb = finbase::pullback(&m1.index_map, &m2.index_map)?;
    let mut fiber = Vec::new();
    let mut left = Vec::new();
    let mut right = Vec::new();
    for t in 0..pb.apex.len() {
        let (f, g) = (m1.components[pb.proj_f.apply(t)], m2.components[pb.proj_g.apply(t)]);
        let (p, u, w) = c
            .pullback_of(f, g)
            .ok_or_else(|| FamError::NoPullback(c.morphisms().atom(f).clone(), c.morphisms().atom(g).clone()))?;
        fiber.push(p);
        left.push(u);
        right.push(w);
    }
    let apex = FamObject { index: pb.apex, fiber };
    let p1 = CatFamMorphism::new(c, apex.clone(), m1.dom.clone(), pb.proj_f, left)?;
    let p2 = CatFamMorphism::new(c, apex.clone(), m2.dom.clone(), pb.proj_g, right)?;
    Ok((apex, p1, p2))
}

/// Splits `m` into one cover per codomain index, restricting to `f⁻¹(k)`.
pub fn decompose_covers(v: &LatticeV, m: &FamMorphism) -> Vec<Cover> {
    (0..m.cod.len())
        .map(|k| {
            let part = m.index_map.fiber(k);
            let index = FinSet::new(part.iter().map(|&j| m.dom.index.atom(j).clone())).expect("sub-family");
            let dom = FamObject {
                index,
                fiber: part.iter().map(|&j| m.dom.fiber[j]).collect(),
            };
            let cod = FamObject {
                index: FinSet::new([m.cod.index.atom(k).clone()]).expect("one atom"),
                fiber: vec![m.cod.fiber[k]],
            };
            let map = FinFunction::new(dom.index.clone(), cod.index.clone(), vec![0; part.len()]).expect("constant");
            Cover::new(FamMorphism::new(v, dom, cod, map).expect("restriction of a morphism")).expect("one target")
        })
        .collect()
}

/// Coproduct of covers, indices tagged by cover position.
pub fn coproduct(v: &LatticeV, covers: &[Cover]) -> FamMorphism {
    let mut dom_atoms = Vec::new();
    let mut dom_fiber = Vec::new();
    let mut map = Vec::new();
    let mut cod_atoms = Vec::new();
    let mut cod_fiber = Vec::new();
    for (k, c) in covers.iter().enumerate() {
        let tag = Atom::new(k.to_string());
        for (j, &x) in c.fibers().iter().enumerate() {
            dom_atoms.push(Atom::pair(&tag, c.0.dom.index.atom(j)));
            dom_fiber.push(x);
            map.push(k);
        }
        cod_atoms.push(Atom::pair(&tag, c.0.cod.index.atom(0)));
        cod_fiber.push(c.target());
    }
    let dom = FamObject {
        index: FinSet::new(dom_atoms).expect("tagged"),
        fiber: dom_fiber,
    };
    let cod = FamObject {
        index: FinSet::new(cod_atoms).expect("tagged"),
        fiber: cod_fiber,
    };
    let index_map = FinFunction::new(dom.index.clone(), cod.index.clone(), map).expect("in range");
    FamMorphism::new(v, dom, cod, index_map).expect("coproduct of morphisms")
}

/// Isomorphism of morphisms in the arrow category of `Fam(V)`: both are the
/// same multiset of covers, each cover a target and a multiset of fibers.
pub fn fam_isomorphic(a: &FamMorphism, b: &FamMorphism) -> bool {
    let shape = |m: &FamMorphism| -> Vec<(usize, Vec<usize>)> {
        (0..m.cod.len())
            .map(|k| {
                (
                    m.cod.fiber[k],
                    m.index_map
                        .fiber(k)
                        .into_iter()
                        .map(|j| m.dom.fiber[j])
                        .sorted()
                        .collect(),
                )
            })
            .sorted()
            .collect()
    };
    shape(a) == shape(b)
}

/// `⋁ X_j`, flagged when the family is empty (the join is then `⊥`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoverJoin {
    pub value: usize,
    pub empty: bool,
}

pub fn cover_join(v: &LatticeV, c: &Cover) -> CoverJoin {
    CoverJoin {
        value: v.join_all(c.fibers().iter().copied()),
        empty: c.is_empty(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoverOptions {
    /// skip the pullback-stability test when `V` is Heyting, where it
    /// always passes
    pub heyting_shortcut: bool,
}

impl Default for CoverOptions {
    fn default() -> Self {
        CoverOptions { heyting_shortcut: true }
    }
}

pub fn classify_cover_thin(v: &LatticeV, c: &Cover) -> DescentClass {
    classify_cover_thin_with(v, c, CoverOptions::default())
}

pub fn classify_cover_thin_with(v: &LatticeV, c: &Cover, opts: CoverOptions) -> DescentClass {
    let y = c.target();
    let class = |level, certificate: String| DescentClass { level, certificate };
    if c.is_empty() {
        return class(DescentLevel::NotAlmost, format!("empty cover of {}", v.name(y)));
    }
    let join = cover_join(v, c).value;
    if join != y {
        return class(DescentLevel::Almost, format!("⋁X_j = {} ≠ {}", v.name(join), v.name(y)));
    }
    if !(opts.heyting_shortcut && v.is_heyting()) {
        if let Some(z) = stability_failure(v, c) {
            let w = v.join_all(c.fibers().iter().map(|&x| v.meet(z, x)));
            return class(
                DescentLevel::Almost,
                format!("not pullback-stable: ⋁(Z∧X_j) = {} ≠ Z = {}", v.name(w), v.name(z)),
            );
        }
    }
    match gluing_failure(v, c) {
        Some(w) => class(
            DescentLevel::Descent,
            format!("connected datum {} does not glue", render_family(v, &w)),
        ),
        None => class(
            DescentLevel::Effective,
            format!(
                "every connected descent datum glues to ⋁W_j ({} checked)",
                enumerate_connected_descent_data(v, c).len()
            ),
        ),
    }
}

/// Some `Z ≤ Y` with `⋁(Z ∧ X_j) ≠ Z`.
fn stability_failure(v: &LatticeV, c: &Cover) -> Option<usize> {
    (0..v.len())
        .filter(|&z| v.leq(z, c.target()))
        .find(|&z| v.join_all(c.fibers().iter().map(|&x| v.meet(z, x))) != z)
}

fn gluing_failure(v: &LatticeV, c: &Cover) -> Option<Vec<usize>> {
    let xs = c.fibers();
    enumerate_connected_descent_data(v, c).into_iter().find(|w| {
        let glued = v.join_all(w.iter().copied());
        (0..xs.len()).any(|j| v.meet(xs[j], glued) != w[j])
    })
}

fn render_family(v: &LatticeV, w: &[usize]) -> String {
    format!("({})", w.iter().map(|&x| v.name(x).as_str()).join(","))
}

/// All families `W_j ≤ X_j` with `W_j ∧ X_i = X_j ∧ W_i`, lexicographic in
/// element order.
pub fn enumerate_connected_descent_data(v: &LatticeV, c: &Cover) -> Vec<Vec<usize>> {
    let xs = c.fibers();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(xs.len());
    fn rec(v: &LatticeV, xs: &[usize], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let j = cur.len();
        if j == xs.len() {
            out.push(cur.clone());
            return;
        }
        for w in (0..v.len()).filter(|&w| v.leq(w, xs[j])) {
            if (0..j).all(|i| v.meet(w, xs[i]) == v.meet(xs[j], cur[i])) {
                cur.push(w);
                rec(v, xs, cur, out);
                cur.pop();
            }
        }
    }
    rec(v, xs, &mut cur, &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EffectiveCheck {
    pub holds: bool,
    pub data_checked: usize,
    pub counterexample: Option<Vec<usize>>,
}

/// Tests the gluing condition on a cover already known to be descent.
pub fn effective_cover_check(v: &LatticeV, c: &Cover) -> Result<EffectiveCheck, FamError> {
    let level = classify_cover_thin_with(
        v,
        c,
        CoverOptions {
            heyting_shortcut: false,
        },
    )
    .level;
    if level < DescentLevel::Descent {
        return Err(FamError::NotDescent(level));
    }
    let counterexample = gluing_failure(v, c);
    Ok(EffectiveCheck {
        holds: counterexample.is_none(),
        data_checked: enumerate_connected_descent_data(v, c).len(),
        counterexample,
    })
}

/// Descent level of an arbitrary morphism: the weakest level among its
/// covers (an empty codomain gives an isomorphism).
pub fn classify_fam_morphism(v: &LatticeV, m: &FamMorphism) -> DescentClass {
    decompose_covers(v, m)
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let cls = classify_cover_thin(v, c);
            DescentClass {
                level: cls.level,
                certificate: format!("cover at {}: {}", m.cod.index.atom(k), cls.certificate),
            }
        })
        .min_by_key(|c| c.level)
        .unwrap_or(DescentClass {
            level: DescentLevel::Effective,
            certificate: "empty codomain".into(),
        })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamCoequalizer {
    pub quotient: FamObject,
    pub q: FamMorphism,
}

/// Coequalizer of `f, g: A → B`: the set coequalizer of the index maps,
/// each class carrying the least upper bound of its fibers. The bound is
/// found by scanning the order rather than through the join table.
pub fn fam_coequalizer(v: &LatticeV, f: &FamMorphism, g: &FamMorphism) -> Result<FamCoequalizer, FamError> {
    if f.dom != g.dom || f.cod != g.cod {
        return Err(FamError::CodomainMismatch);
    }
    let coeq = finbase::coequalizer(&f.index_map, &g.index_map)?;
    let fiber = (0..coeq.quotient.len())
        .map(|cls| {
            let members: Vec<usize> = coeq.q.fiber(cls).into_iter().map(|k| f.cod.fiber[k]).collect();
            let upper: Vec<usize> = (0..v.len()).filter(|&u| members.iter().all(|&m| v.leq(m, u))).collect();
            *upper
                .iter()
                .find(|&&u| upper.iter().all(|&w| v.leq(u, w)))
                .expect("lattices have joins")
        })
        .collect();
    let quotient = FamObject {
        index: coeq.quotient,
        fiber,
    };
    let q = FamMorphism::new(v, f.cod.clone(), quotient.clone(), coeq.q)?;
    Ok(FamCoequalizer { quotient, q })
}

/// Whether `m` is the coequalizer of its kernel pair, computed directly.
pub fn is_regular_epi_direct(v: &LatticeV, m: &FamMorphism) -> bool {
    let kp = fam_pullback(v, m, m).expect("same codomain");
    let coeq = fam_coequalizer(v, &kp.proj1, &kp.proj2).expect("parallel pair");
    // the induced map quotient → cod must be an isomorphism of families
    let mut induced = vec![None; coeq.quotient.len()];
    for j in 0..m.dom.len() {
        induced[coeq.q.index_map.apply(j)] = Some(m.index_map.apply(j));
    }
    let induced: Vec<usize> = induced.into_iter().map(|k| k.expect("q is surjective")).collect();
    let bijective = induced.iter().copied().sorted().eq(0..m.cod.len());
    bijective && (0..induced.len()).all(|c| coeq.quotient.fiber[c] == m.cod.fiber[induced[c]])
}
