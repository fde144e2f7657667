//! Finite sets and functions, with the pullbacks and coequalizers every other
//! module is built from.
//!
//! Elements are opaque [`Atom`]s compared by string equality. Internally a
//! [`FinFunction`] stores its graph as indices into the codomain, so the
//! limit and colimit constructions here run in time linear in the size of
//! their output.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::descent::{self, Base, BaseMorphism};

/// An opaque element name.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom(String);

impl Atom {
    pub fn new(name: impl Into<String>) -> Self {
        Atom(name.into())
    }

    /// The composite atom `(a,b)` used for pullback apexes.
    pub fn pair(a: &Atom, b: &Atom) -> Self {
        Atom(format!("({},{})", a.0, b.0))
    }

    /// The composite atom `(a,b,c)`.
    pub fn triple(a: &Atom, b: &Atom, c: &Atom) -> Self {
        Atom(format!("({},{},{})", a.0, b.0, c.0))
    }

    /// The composite atom `(a_1,...,a_n)`; the empty tuple is `()`.
    pub fn tuple<'a>(parts: impl IntoIterator<Item = &'a Atom>) -> Self {
        let inner: Vec<&str> = parts.into_iter().map(|a| a.as_str()).collect();
        Atom(format!("({})", inner.join(",")))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Atom {
    fn from(s: &str) -> Self {
        Atom(s.to_string())
    }
}

impl From<String> for Atom {
    fn from(s: String) -> Self {
        Atom(s)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SetError {
    #[error("duplicate atom `{0}`")]
    DuplicateAtom(Atom),
    #[error("unknown atom `{0}`")]
    UnknownAtom(Atom),
    #[error("function is not total: `{0}` has no image")]
    NotTotal(Atom),
    #[error("`{0}` is assigned more than one image")]
    Reassigned(Atom),
    #[error("image index {index} is out of range for a codomain of size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("codomain mismatch: {0}")]
    CodomainMismatch(String),
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
}

/// A finite set of distinct atoms in a fixed order.
#[derive(Clone, Default)]
pub struct FinSet {
    atoms: Vec<Atom>,
    index: HashMap<Atom, usize>,
}

impl FinSet {
    pub fn new(atoms: impl IntoIterator<Item = Atom>) -> Result<Self, SetError> {
        let atoms: Vec<Atom> = atoms.into_iter().collect();
        let mut index = HashMap::with_capacity(atoms.len());
        for (i, a) in atoms.iter().enumerate() {
            if index.insert(a.clone(), i).is_some() {
                return Err(SetError::DuplicateAtom(a.clone()));
            }
        }
        Ok(FinSet { atoms, index })
    }

    pub fn empty() -> Self {
        FinSet::default()
    }

    /// Convenience constructor for literal sets; panics on duplicates.
    pub fn of(names: &[&str]) -> Self {
        FinSet::new(names.iter().map(|s| Atom::from(*s))).expect("duplicate atom in literal set")
    }

    /// The set `{0, 1, ..., n-1}` with decimal atom names.
    pub fn range(n: usize) -> Self {
        FinSet::new((0..n).map(|i| Atom::new(i.to_string()))).expect("decimal names are distinct")
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn atom(&self, i: usize) -> &Atom {
        &self.atoms[i]
    }

    pub fn index_of(&self, a: &Atom) -> Option<usize> {
        self.index.get(a).copied()
    }

    pub fn lookup(&self, name: &str) -> Result<usize, SetError> {
        self.index_of(&Atom::from(name))
            .ok_or_else(|| SetError::UnknownAtom(Atom::from(name)))
    }

    pub fn contains(&self, a: &Atom) -> bool {
        self.index.contains_key(a)
    }
}

impl PartialEq for FinSet {
    fn eq(&self, other: &Self) -> bool {
        self.atoms == other.atoms
    }
}

impl Eq for FinSet {}

impl fmt::Debug for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.atoms.iter().map(|a| a.as_str())).finish()
    }
}

impl fmt::Display for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.atoms.iter().map(|a| a.as_str()).collect();
        write!(f, "{{{}}}", names.join(","))
    }
}

/// A total function between finite sets.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FinFunction {
    dom: FinSet,
    cod: FinSet,
    map: Vec<usize>,
}

impl FinFunction {
    pub fn new(dom: FinSet, cod: FinSet, map: Vec<usize>) -> Result<Self, SetError> {
        if map.len() != dom.len() {
            let missing = dom.atoms().get(map.len()).cloned().unwrap_or_else(|| Atom::from("?"));
            return Err(SetError::NotTotal(missing));
        }
        if let Some(&index) = map.iter().find(|&&j| j >= cod.len()) {
            return Err(SetError::IndexOutOfRange { index, size: cod.len() });
        }
        Ok(FinFunction { dom, cod, map })
    }

    /// Builds a function from its graph given as atom pairs.
    pub fn from_pairs(dom: FinSet, cod: FinSet, pairs: &[(Atom, Atom)]) -> Result<Self, SetError> {
        let mut map = vec![usize::MAX; dom.len()];
        for (a, b) in pairs {
            let i = dom.index_of(a).ok_or_else(|| SetError::UnknownAtom(a.clone()))?;
            let j = cod.index_of(b).ok_or_else(|| SetError::UnknownAtom(b.clone()))?;
            if map[i] != usize::MAX {
                return Err(SetError::Reassigned(a.clone()));
            }
            map[i] = j;
        }
        if let Some(i) = map.iter().position(|&j| j == usize::MAX) {
            return Err(SetError::NotTotal(dom.atom(i).clone()));
        }
        Ok(FinFunction { dom, cod, map })
    }

    /// Literal constructor: `FinFunction::of(&["a","b"], &["*"], &[0, 0])`.
    pub fn of(dom: &[&str], cod: &[&str], map: &[usize]) -> Self {
        FinFunction::new(FinSet::of(dom), FinSet::of(cod), map.to_vec()).expect("invalid literal function")
    }

    pub fn identity(set: &FinSet) -> Self {
        FinFunction {
            dom: set.clone(),
            cod: set.clone(),
            map: (0..set.len()).collect(),
        }
    }

    pub fn dom(&self) -> &FinSet {
        &self.dom
    }

    pub fn cod(&self) -> &FinSet {
        &self.cod
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn table(&self) -> &[usize] {
        &self.map
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &FinFunction) -> Result<FinFunction, SetError> {
        if self.cod != other.dom {
            return Err(SetError::DomainMismatch(format!(
                "cannot compose: codomain {} differs from domain {}",
                self.cod, other.dom
            )));
        }
        Ok(FinFunction {
            dom: self.dom.clone(),
            cod: other.cod.clone(),
            map: self.map.iter().map(|&j| other.map[j]).collect(),
        })
    }

    /// First codomain element not in the image, if any.
    pub fn first_unhit(&self) -> Option<usize> {
        let mut hit = vec![false; self.cod.len()];
        for &j in &self.map {
            hit[j] = true;
        }
        hit.iter().position(|h| !h)
    }

    pub fn is_surjective(&self) -> bool {
        self.first_unhit().is_none()
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.cod.len()];
        self.map.iter().all(|&j| !std::mem::replace(&mut seen[j], true))
    }

    pub fn is_bijective(&self) -> bool {
        self.dom.len() == self.cod.len() && self.is_injective()
    }

    /// Preimage of `j`, in domain order.
    pub fn fiber(&self, j: usize) -> Vec<usize> {
        (0..self.map.len()).filter(|&i| self.map[i] == j).collect()
    }

    /// Every function between two finite sets, in lexicographic order of
    /// their tables.
    pub fn all(dom: &FinSet, cod: &FinSet) -> Vec<FinFunction> {
        all_tables(dom.len(), cod.len())
            .into_iter()
            .map(|map| FinFunction {
                dom: dom.clone(),
                cod: cod.clone(),
                map,
            })
            .collect()
    }
}

impl fmt::Display for FinFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .map
            .iter()
            .enumerate()
            .map(|(i, &j)| format!("{}↦{}", self.dom.atom(i), self.cod.atom(j)))
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// All maps `{0..n} → {0..m}` as tables, lexicographically ordered.
pub(crate) fn all_tables(n: usize, m: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    if m == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur = vec![0; n];
    loop {
        out.push(cur.clone());
        let mut k = n;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            cur[k] += 1;
            if cur[k] < m {
                break;
            }
            cur[k] = 0;
        }
    }
}

/// A pullback cone `apex → A`, `apex → B` over a cospan `A → C ← B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pullback {
    pub apex: FinSet,
    pub proj_f: FinFunction,
    pub proj_g: FinFunction,
}

/// The pullback of `f: A → C` and `g: B → C`, with apex
/// `{(a,b) | f(a) = g(b)}` in lexicographic order.
pub fn pullback(f: &FinFunction, g: &FinFunction) -> Result<Pullback, SetError> {
    if f.cod != g.cod {
        return Err(SetError::CodomainMismatch(format!("{} vs {}", f.cod, g.cod)));
    }
    let mut pairs = Vec::new();
    for a in 0..f.dom.len() {
        for b in 0..g.dom.len() {
            if f.map[a] == g.map[b] {
                pairs.push((a, b));
            }
        }
    }
    let apex = FinSet::new(pairs.iter().map(|&(a, b)| Atom::pair(f.dom.atom(a), g.dom.atom(b))))
        .expect("pair encoding of distinct pairs is injective");
    let proj_f = FinFunction {
        dom: apex.clone(),
        cod: f.dom.clone(),
        map: pairs.iter().map(|p| p.0).collect(),
    };
    let proj_g = FinFunction {
        dom: apex.clone(),
        cod: g.dom.clone(),
        map: pairs.iter().map(|p| p.1).collect(),
    };
    Ok(Pullback { apex, proj_f, proj_g })
}

/// A coequalizer `q: C → C/~`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coequalizer {
    pub quotient: FinSet,
    pub q: FinFunction,
}

/// Union-find with path halving.
pub(crate) struct Partition {
    parent: Vec<usize>,
}

impl Partition {
    pub(crate) fn new(n: usize) -> Self {
        Partition {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // smaller index wins so class order follows element order
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }

    /// Class of each element, numbered by first occurrence.
    pub(crate) fn classes(&mut self) -> (Vec<usize>, Vec<Vec<usize>>) {
        let n = self.parent.len();
        let mut class_of = vec![usize::MAX; n];
        let mut members: Vec<Vec<usize>> = Vec::new();
        let mut root_class: HashMap<usize, usize> = HashMap::new();
        for x in 0..n {
            let r = self.find(x);
            let c = *root_class.entry(r).or_insert_with(|| {
                members.push(Vec::new());
                members.len() - 1
            });
            class_of[x] = c;
            members[c].push(x);
        }
        (class_of, members)
    }
}

/// Names a class of atoms as `{a,b,...}`.
pub(crate) fn class_atom(set: &FinSet, members: &[usize]) -> Atom {
    let names: Vec<&str> = members.iter().map(|&i| set.atom(i).as_str()).collect();
    Atom::new(format!("{{{}}}", names.join(",")))
}

/// The coequalizer of `f, g: A → C`: `C` modulo the equivalence relation
/// generated by `f(a) ~ g(a)`.
pub fn coequalizer(f: &FinFunction, g: &FinFunction) -> Result<Coequalizer, SetError> {
    if f.dom != g.dom {
        return Err(SetError::DomainMismatch(format!("{} vs {}", f.dom, g.dom)));
    }
    if f.cod != g.cod {
        return Err(SetError::CodomainMismatch(format!("{} vs {}", f.cod, g.cod)));
    }
    let mut part = Partition::new(f.cod.len());
    for a in 0..f.dom.len() {
        part.union(f.map[a], g.map[a]);
    }
    let (class_of, members) = part.classes();
    let quotient = FinSet::new(members.iter().map(|m| class_atom(&f.cod, m))).expect("classes are disjoint");
    let q = FinFunction {
        dom: f.cod.clone(),
        cod: quotient.clone(),
        map: class_of,
    };
    Ok(Coequalizer { quotient, q })
}

/// The kernel pair of `p: E → B` truncated at triples.
///
/// Pairs `(x0,x1)` carry `d1 = first` and `d0 = second`; triples
/// `(x0,x1,x2)` carry `d_i` omitting position `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelPairData {
    pub apex: FinSet,
    pub d1: FinFunction,
    pub d0: FinFunction,
    pub diagonal: FinFunction,
    pub triple_apex: FinSet,
    /// `[t_d0, t_d1, t_d2]`: triple apex → apex.
    pub triple_faces: [FinFunction; 3],
}

impl KernelPairData {
    /// Index of the apex element `(x, y)`, if `p(x) = p(y)`.
    pub fn pair_index(&self, x: usize, y: usize) -> Option<usize> {
        let a = Atom::pair(self.d1.cod().atom(x), self.d1.cod().atom(y));
        self.apex.index_of(&a)
    }
}

pub fn kernel_pair(p: &FinFunction) -> KernelPairData {
    let pb = pullback(p, p).expect("a function shares its codomain with itself");
    let n = p.dom.len();
    let diagonal_map: Vec<usize> = (0..n)
        .map(|x| {
            pb.apex
                .index_of(&Atom::pair(p.dom.atom(x), p.dom.atom(x)))
                .expect("diagonal pair present")
        })
        .collect();
    let diagonal = FinFunction {
        dom: p.dom.clone(),
        cod: pb.apex.clone(),
        map: diagonal_map,
    };

    let mut triples = Vec::new();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if p.map[x] == p.map[y] && p.map[y] == p.map[z] {
                    triples.push((x, y, z));
                }
            }
        }
    }
    let triple_apex = FinSet::new(
        triples
            .iter()
            .map(|&(x, y, z)| Atom::triple(p.dom.atom(x), p.dom.atom(y), p.dom.atom(z))),
    )
    .expect("triple encoding is injective");
    let pair_idx = |a: usize, b: usize| {
        pb.apex
            .index_of(&Atom::pair(p.dom.atom(a), p.dom.atom(b)))
            .expect("face of a triple is a pair")
    };
    let face = |sel: &dyn Fn(&(usize, usize, usize)) -> (usize, usize)| FinFunction {
        dom: triple_apex.clone(),
        cod: pb.apex.clone(),
        map: triples
            .iter()
            .map(|t| {
                let (a, b) = sel(t);
                pair_idx(a, b)
            })
            .collect(),
    };
    let triple_faces = [face(&|t| (t.1, t.2)), face(&|t| (t.0, t.2)), face(&|t| (t.0, t.1))];
    KernelPairData {
        apex: pb.apex,
        d1: pb.proj_f,
        d0: pb.proj_g,
        diagonal,
        triple_apex,
        triple_faces,
    }
}

/// Position in the descent hierarchy.
///
/// Variant order is the hierarchy order; `EffectiveUpToBound(B)` sits
/// between `Descent` and `Effective` and records the search bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DescentLevel {
    NotAlmost,
    Almost,
    Descent,
    EffectiveUpToBound(usize),
    Effective,
}

impl DescentLevel {
    pub fn is_almost(self) -> bool {
        self >= DescentLevel::Almost
    }

    pub fn is_descent(self) -> bool {
        self >= DescentLevel::Descent
    }

    /// Effective, or effective as far as the bounded search could see.
    pub fn is_effective_within_bound(self) -> bool {
        matches!(self, DescentLevel::Effective | DescentLevel::EffectiveUpToBound(_))
    }
}

impl fmt::Display for DescentLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DescentLevel::NotAlmost => f.write_str("NotAlmost"),
            DescentLevel::Almost => f.write_str("Almost"),
            DescentLevel::Descent => f.write_str("Descent"),
            DescentLevel::EffectiveUpToBound(b) => write!(f, "EffectiveUpToBound({b})"),
            DescentLevel::Effective => f.write_str("Effective"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescentClass {
    pub level: DescentLevel,
    pub certificate: String,
}

/// Classifies a function in the category of finite sets.
///
/// Effective descent in finite sets is surjectivity; the answer is decided
/// directly and confirmed against the descent-data oracle at `bound`.
pub fn classify_set_function(p: &FinFunction, bound: usize) -> DescentClass {
    let oracle = descent::classify(&BaseMorphism::set_function(p), bound.max(1), bound.max(1));
    let direct = match p.first_unhit() {
        None => DescentClass {
            level: DescentLevel::Effective,
            certificate: format!("surjective; oracle checked {} descent data", oracle.data_checked),
        },
        Some(j) => DescentClass {
            level: DescentLevel::NotAlmost,
            certificate: format!("{} not hit", p.cod.atom(j)),
        },
    };
    debug_assert_eq!(oracle.base, Base::FinSet);
    if oracle.class.level != direct.level {
        return DescentClass {
            level: direct.level.min(oracle.class.level),
            certificate: format!(
                "oracle disagreement: direct {} vs oracle {} ({})",
                direct.level, oracle.class.level, oracle.class.certificate
            ),
        };
    }
    direct
}

#[cfg(test)]
mod tests {
    use super::*;

    fn card_apex(f: &FinFunction, g: &FinFunction) -> usize {
        pullback(f, g).unwrap().apex.len()
    }

    #[test]
    fn pullback_over_terminal_is_product() {
        let f = FinFunction::of(&["a", "b"], &["*"], &[0, 0]);
        let g = FinFunction::of(&["c"], &["*"], &[0]);
        let pb = pullback(&f, &g).unwrap();
        assert_eq!(pb.apex, FinSet::of(&["(a,c)", "(b,c)"]));
    }

    #[test]
    fn pullback_along_identity() {
        let f = FinFunction::identity(&FinSet::of(&["x", "y"]));
        let g = FinFunction::of(&["u"], &["x", "y"], &[0]);
        let pb = pullback(&f, &g).unwrap();
        assert_eq!(pb.apex.len(), 1);
        assert!(pb.proj_g.is_bijective());
    }

    #[test]
    fn pullback_of_two_to_one_fibers() {
        let f = FinFunction::of(&["0", "1", "2"], &["x", "y"], &[0, 0, 1]);
        // brute force: 2*2 pairs over x plus 1 over y
        assert_eq!(card_apex(&f, &f), 5);
    }

    #[test]
    fn pullback_rejects_codomain_mismatch() {
        let f = FinFunction::of(&["a"], &["x"], &[0]);
        let g = FinFunction::of(&["b"], &["y"], &[0]);
        assert!(matches!(pullback(&f, &g), Err(SetError::CodomainMismatch(_))));
    }

    #[test]
    fn coequalizer_single_identification() {
        let f = FinFunction::of(&["0"], &["a", "b"], &[0]);
        let g = FinFunction::of(&["0"], &["a", "b"], &[1]);
        let c = coequalizer(&f, &g).unwrap();
        assert_eq!(c.quotient.len(), 1);
        assert_eq!(c.quotient.atom(0).as_str(), "{a,b}");
    }

    #[test]
    fn coequalizer_of_equal_maps_is_bijective() {
        let f = FinFunction::of(&["0", "1"], &["a", "b", "c"], &[0, 2]);
        let c = coequalizer(&f, &f).unwrap();
        assert!(c.q.is_bijective());
    }

    #[test]
    fn coequalizer_of_kernel_pair_recovers_codomain() {
        let p = FinFunction::of(&["0", "1", "2"], &["x", "y"], &[0, 0, 1]);
        let k = kernel_pair(&p);
        let c = coequalizer(&k.d1, &k.d0).unwrap();
        assert_eq!(c.quotient.len(), 2);
        // the comparison C/~ → cod(p) is well defined and bijective
        for x in 0..3 {
            for y in 0..3 {
                assert_eq!(c.q.apply(x) == c.q.apply(y), p.apply(x) == p.apply(y));
            }
        }
    }

    #[test]
    fn coequalizer_rejects_mismatch() {
        let f = FinFunction::of(&["0"], &["a"], &[0]);
        let g = FinFunction::of(&["1"], &["a"], &[0]);
        assert!(coequalizer(&f, &g).is_err());
    }

    #[test]
    fn kernel_pair_sizes() {
        let p = FinFunction::of(&["0", "1"], &["*"], &[0, 0]);
        let k = kernel_pair(&p);
        assert_eq!(k.apex.len(), 4);
        assert_eq!(k.triple_apex.len(), 8);
        for x in 0..2 {
            let s = k.diagonal.apply(x);
            assert_eq!(k.d0.apply(s), x);
            assert_eq!(k.d1.apply(s), x);
        }
        // faces of (0,1,1): d0 = (1,1), d1 = (0,1), d2 = (0,1)
        let t = k.triple_apex.index_of(&Atom::from("(0,1,1)")).unwrap();
        assert_eq!(k.apex.atom(k.triple_faces[0].apply(t)).as_str(), "(1,1)");
        assert_eq!(k.apex.atom(k.triple_faces[1].apply(t)).as_str(), "(0,1)");
        assert_eq!(k.apex.atom(k.triple_faces[2].apply(t)).as_str(), "(0,1)");
    }

    #[test]
    fn kernel_pair_of_injection_is_diagonal() {
        let p = FinFunction::of(&["a", "b"], &["x", "y", "z"], &[2, 0]);
        let k = kernel_pair(&p);
        assert!(k.diagonal.is_bijective());
    }

    #[test]
    fn literal_classifications() {
        let id = FinFunction::identity(&FinSet::of(&["a", "b"]));
        assert_eq!(classify_set_function(&id, 3).level, DescentLevel::Effective);

        let miss = FinFunction::of(&["0"], &["0", "1"], &[0]);
        let c = classify_set_function(&miss, 3);
        assert_eq!(c.level, DescentLevel::NotAlmost);
        assert_eq!(c.certificate, "1 not hit");

        let collapse = FinFunction::of(&["0", "1"], &["*"], &[0, 0]);
        assert_eq!(classify_set_function(&collapse, 2).level, DescentLevel::Effective);
    }

    #[test]
    fn empty_domain_conventions() {
        let to_empty = FinFunction::new(FinSet::empty(), FinSet::empty(), vec![]).unwrap();
        assert_eq!(classify_set_function(&to_empty, 3).level, DescentLevel::Effective);
        let to_point = FinFunction::new(FinSet::empty(), FinSet::of(&["*"]), vec![]).unwrap();
        assert_eq!(classify_set_function(&to_point, 3).level, DescentLevel::NotAlmost);
    }

    #[test]
    fn level_order_is_total() {
        use DescentLevel::*;
        let chain = [NotAlmost, Almost, Descent, EffectiveUpToBound(3), Effective];
        for w in chain.windows(2) {
            assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn from_pairs_errors() {
        let dom = FinSet::of(&["a", "b"]);
        let cod = FinSet::of(&["x"]);
        let err = FinFunction::from_pairs(dom.clone(), cod.clone(), &[("a".into(), "x".into())]).unwrap_err();
        assert_eq!(err, SetError::NotTotal("b".into()));
        let err = FinFunction::from_pairs(dom, cod, &[("a".into(), "z".into())]).unwrap_err();
        assert_eq!(err, SetError::UnknownAtom("z".into()));
        assert!(FinSet::new(vec![Atom::from("a"), Atom::from("a")]).is_err());
    }
}
