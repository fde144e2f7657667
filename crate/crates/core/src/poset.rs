//! Finite partial orders and monotone maps.
//!
//! Pullbacks are computed on underlying sets with the componentwise order.
//! Coequalizers quotient the underlying set, close the induced relation
//! transitively and then collapse cycles, which is what the universal
//! property in finite posets forces.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use thiserror::Error;

use crate::finbase::{self, class_atom, Atom, FinFunction, FinSet, Partition, SetError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PosetError {
    #[error(transparent)]
    Set(#[from] SetError),
    #[error("order is not antisymmetric: {0} and {1} are distinct but mutually below")]
    NotAntisymmetric(Atom, Atom),
    #[error("order matrix has the wrong size")]
    BadMatrix,
    #[error("map is not monotone: {0} ≤ {1} but the images are not ordered")]
    NotMonotone(Atom, Atom),
    #[error("codomain mismatch: {0}")]
    CodomainMismatch(String),
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
}

/// A finite partially ordered set, with its order stored as a dense
/// reflexive and transitive matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct FinPoset {
    elements: FinSet,
    leq: Vec<bool>,
}

impl FinPoset {
    /// The partial order generated by `relations` (pairs `a ≤ b` by index).
    pub fn generated(elements: FinSet, relations: &[(usize, usize)]) -> Result<Self, PosetError> {
        let n = elements.len();
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for &(a, b) in relations {
            if a >= n || b >= n {
                return Err(PosetError::BadMatrix);
            }
            leq[a * n + b] = true;
        }
        transitive_closure(&mut leq, n);
        Self::from_matrix(elements, leq)
    }

    /// Literal constructor from atom names and covering relations.
    pub fn of(names: &[&str], relations: &[(&str, &str)]) -> Self {
        let elements = FinSet::of(names);
        let rel: Vec<(usize, usize)> = relations
            .iter()
            .map(|(a, b)| (elements.lookup(a).unwrap(), elements.lookup(b).unwrap()))
            .collect();
        FinPoset::generated(elements, &rel).expect("invalid literal poset")
    }

    /// Validates an explicit order matrix.
    pub fn from_matrix(elements: FinSet, leq: Vec<bool>) -> Result<Self, PosetError> {
        let n = elements.len();
        if leq.len() != n * n {
            return Err(PosetError::BadMatrix);
        }
        for i in 0..n {
            if !leq[i * n + i] {
                return Err(PosetError::BadMatrix);
            }
            for j in 0..n {
                if i != j && leq[i * n + j] && leq[j * n + i] {
                    return Err(PosetError::NotAntisymmetric(
                        elements.atom(i).clone(),
                        elements.atom(j).clone(),
                    ));
                }
                for k in 0..n {
                    if leq[i * n + j] && leq[j * n + k] && !leq[i * n + k] {
                        return Err(PosetError::BadMatrix);
                    }
                }
            }
        }
        Ok(FinPoset { elements, leq })
    }

    pub fn discrete(elements: FinSet) -> Self {
        FinPoset::generated(elements, &[]).expect("discrete order is valid")
    }

    /// The chain `names[0] ≤ names[1] ≤ ...`.
    pub fn chain(names: &[&str]) -> Self {
        let rel: Vec<(&str, &str)> = names.windows(2).map(|w| (w[0], w[1])).collect();
        FinPoset::of(names, &rel)
    }

    pub fn elements(&self) -> &FinSet {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i * self.len() + j]
    }

    pub fn matrix(&self) -> &[bool] {
        &self.leq
    }

    pub fn is_discrete(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| (0..n).all(|j| i == j || !self.leq(i, j)))
    }

    /// Strict covering pairs `(a, b)` with `a < b` and nothing in between.
    pub fn hasse(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b && self.leq(a, b) && !(0..n).any(|c| c != a && c != b && self.leq(a, c) && self.leq(c, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Strict pairs `a < b`.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|&(a, b)| a != b && self.leq(a, b))
            .collect()
    }

    pub fn disjoint_union(&self, other: &FinPoset) -> Result<FinPoset, PosetError> {
        let elements = FinSet::new(self.elements.atoms().iter().chain(other.elements.atoms()).cloned())?;
        let off = self.len();
        let mut rel: Vec<(usize, usize)> = self.strict_pairs();
        rel.extend(other.strict_pairs().into_iter().map(|(a, b)| (a + off, b + off)));
        FinPoset::generated(elements, &rel)
    }

    /// The sub-poset on the given elements, in the given order.
    pub fn restrict(&self, keep: &[usize]) -> FinPoset {
        let elements = FinSet::new(keep.iter().map(|&i| self.elements.atom(i).clone())).expect("subset of a set");
        let m = keep.len();
        let mut leq = vec![false; m * m];
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                leq[a * m + b] = self.leq(i, j);
            }
        }
        FinPoset { elements, leq }
    }

    /// A key that is equal for two posets iff they are isomorphic.
    pub fn canonical_key(&self) -> Vec<bool> {
        let n = self.len();
        let mut best: Option<Vec<bool>> = None;
        for perm in (0..n).permutations(n) {
            let mut key = Vec::with_capacity(n * n);
            for i in 0..n {
                for j in 0..n {
                    key.push(self.leq(perm[i], perm[j]));
                }
            }
            if best.as_ref().is_none_or(|b| key < *b) {
                best = Some(key);
            }
        }
        best.unwrap_or_default()
    }

    /// One representative of every isomorphism class of posets with `n`
    /// elements, named `0..n`, in a fixed order.
    pub fn all_up_to_iso(n: usize) -> Vec<FinPoset> {
        let slots: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        // every finite poset admits a labelling along a linear extension
        for mask in 0u64..(1u64 << slots.len()) {
            let mut leq = vec![false; n * n];
            for i in 0..n {
                leq[i * n + i] = true;
            }
            for (k, &(i, j)) in slots.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    leq[i * n + j] = true;
                }
            }
            let transitive =
                (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| !(leq[i * n + j] && leq[j * n + k]) || leq[i * n + k])));
            if !transitive {
                continue;
            }
            let p = FinPoset {
                elements: FinSet::range(n),
                leq,
            };
            if seen.insert(p.canonical_key()) {
                out.push(p);
            }
        }
        out
    }
}

fn transitive_closure(leq: &mut [bool], n: usize) {
    for k in 0..n {
        for i in 0..n {
            if leq[i * n + k] {
                for j in 0..n {
                    if leq[k * n + j] {
                        leq[i * n + j] = true;
                    }
                }
            }
        }
    }
}

impl fmt::Debug for FinPoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FinPoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel: Vec<String> = self
            .hasse()
            .into_iter()
            .map(|(a, b)| format!("{}<{}", self.elements.atom(a), self.elements.atom(b)))
            .collect();
        write!(f, "{} [{}]", self.elements, rel.join(", "))
    }
}

/// An order-preserving map.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MonotoneMap {
    dom: FinPoset,
    cod: FinPoset,
    map: Vec<usize>,
}

impl MonotoneMap {
    pub fn new(dom: FinPoset, cod: FinPoset, map: Vec<usize>) -> Result<Self, PosetError> {
        // reuse the set-level checks for totality and range
        FinFunction::new(dom.elements.clone(), cod.elements.clone(), map.clone())?;
        for (a, b) in dom.strict_pairs() {
            if !cod.leq(map[a], map[b]) {
                return Err(PosetError::NotMonotone(
                    dom.elements.atom(a).clone(),
                    dom.elements.atom(b).clone(),
                ));
            }
        }
        Ok(MonotoneMap { dom, cod, map })
    }

    pub fn of(dom: &FinPoset, cod: &FinPoset, map: &[usize]) -> Self {
        MonotoneMap::new(dom.clone(), cod.clone(), map.to_vec()).expect("invalid literal monotone map")
    }

    /// Literal constructor from atom pairs.
    pub fn from_names(dom: &FinPoset, cod: &FinPoset, pairs: &[(&str, &str)]) -> Self {
        let pairs: Vec<(Atom, Atom)> = pairs.iter().map(|(a, b)| (Atom::from(*a), Atom::from(*b))).collect();
        let f =
            FinFunction::from_pairs(dom.elements.clone(), cod.elements.clone(), &pairs).expect("invalid literal map");
        MonotoneMap::of(dom, cod, f.table())
    }

    /// A function between sets, seen as a map of discrete posets.
    pub fn discrete(f: &FinFunction) -> Self {
        MonotoneMap {
            dom: FinPoset::discrete(f.dom().clone()),
            cod: FinPoset::discrete(f.cod().clone()),
            map: f.table().to_vec(),
        }
    }

    pub fn identity(p: &FinPoset) -> Self {
        MonotoneMap {
            dom: p.clone(),
            cod: p.clone(),
            map: (0..p.len()).collect(),
        }
    }

    pub fn dom(&self) -> &FinPoset {
        &self.dom
    }

    pub fn cod(&self) -> &FinPoset {
        &self.cod
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn table(&self) -> &[usize] {
        &self.map
    }

    pub fn underlying(&self) -> FinFunction {
        FinFunction::new(self.dom.elements.clone(), self.cod.elements.clone(), self.map.clone())
            .expect("monotone maps are total")
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &MonotoneMap) -> Result<MonotoneMap, PosetError> {
        if self.cod != other.dom {
            return Err(PosetError::DomainMismatch(
                "composite of non-matching monotone maps".into(),
            ));
        }
        Ok(MonotoneMap {
            dom: self.dom.clone(),
            cod: other.cod.clone(),
            map: self.map.iter().map(|&j| other.map[j]).collect(),
        })
    }

    pub fn is_surjective(&self) -> bool {
        self.underlying().is_surjective()
    }

    /// Bijective and order-reflecting.
    pub fn is_isomorphism(&self) -> bool {
        let n = self.dom.len();
        self.underlying().is_bijective()
            && (0..n).all(|a| (0..n).all(|b| self.dom.leq(a, b) == self.cod.leq(self.map[a], self.map[b])))
    }

    /// Every monotone map `dom → cod`, lexicographic in the table.
    pub fn all(dom: &FinPoset, cod: &FinPoset) -> Vec<MonotoneMap> {
        let n = dom.len();
        let m = cod.len();
        let mut out = Vec::new();
        if n > 0 && m == 0 {
            return out;
        }
        let mut cur = vec![0usize; n];
        fn rec(k: usize, cur: &mut Vec<usize>, dom: &FinPoset, cod: &FinPoset, out: &mut Vec<MonotoneMap>) {
            if k == dom.len() {
                out.push(MonotoneMap {
                    dom: dom.clone(),
                    cod: cod.clone(),
                    map: cur.clone(),
                });
                return;
            }
            for v in 0..cod.len() {
                let ok =
                    (0..k).all(|i| (!dom.leq(i, k) || cod.leq(cur[i], v)) && (!dom.leq(k, i) || cod.leq(v, cur[i])));
                if ok {
                    cur[k] = v;
                    rec(k + 1, cur, dom, cod, out);
                }
            }
        }
        rec(0, &mut cur, dom, cod, &mut out);
        out
    }
}

impl fmt::Display for MonotoneMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.underlying())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PosetPullback {
    pub apex: FinPoset,
    pub proj_f: MonotoneMap,
    pub proj_g: MonotoneMap,
}

/// Pullback of monotone maps with the componentwise order on the apex.
pub fn pullback(f: &MonotoneMap, g: &MonotoneMap) -> Result<PosetPullback, PosetError> {
    if f.cod != g.cod {
        return Err(PosetError::CodomainMismatch(format!("{} vs {}", f.cod, g.cod)));
    }
    let set_pb = finbase::pullback(&f.underlying(), &g.underlying())?;
    let pf = set_pb.proj_f.table();
    let pg = set_pb.proj_g.table();
    let n = set_pb.apex.len();
    let mut leq = vec![false; n * n];
    for i in 0..n {
        for j in 0..n {
            leq[i * n + j] = f.dom.leq(pf[i], pf[j]) && g.dom.leq(pg[i], pg[j]);
        }
    }
    let apex = FinPoset {
        elements: set_pb.apex,
        leq,
    };
    Ok(PosetPullback {
        proj_f: MonotoneMap {
            dom: apex.clone(),
            cod: f.dom.clone(),
            map: pf.to_vec(),
        },
        proj_g: MonotoneMap {
            dom: apex.clone(),
            cod: g.dom.clone(),
            map: pg.to_vec(),
        },
        apex,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PosetCoequalizer {
    pub quotient: FinPoset,
    pub q: MonotoneMap,
}

/// Coequalizer of `f, g: A → C` in finite posets.
pub fn coequalizer(f: &MonotoneMap, g: &MonotoneMap) -> Result<PosetCoequalizer, PosetError> {
    if f.dom != g.dom {
        return Err(PosetError::DomainMismatch(format!("{} vs {}", f.dom, g.dom)));
    }
    if f.cod != g.cod {
        return Err(PosetError::CodomainMismatch(format!("{} vs {}", f.cod, g.cod)));
    }
    let c = &f.cod;
    let n = c.len();
    let mut part = Partition::new(n);
    for a in 0..f.dom.len() {
        part.union(f.map[a], g.map[a]);
    }
    let (class_of, _) = part.classes();
    let k = class_of.iter().max().map_or(0, |m| m + 1);
    let mut rel = vec![false; k * k];
    for i in 0..k {
        rel[i * k + i] = true;
    }
    for (a, b) in c.strict_pairs() {
        rel[class_of[a] * k + class_of[b]] = true;
    }
    transitive_closure(&mut rel, k);
    // collapse cycles: classes below each other both ways become one
    let mut scc = Partition::new(k);
    for i in 0..k {
        for j in 0..k {
            if rel[i * k + j] && rel[j * k + i] {
                scc.union(i, j);
            }
        }
    }
    let (final_of_class, _) = scc.classes();
    let q_map: Vec<usize> = class_of.iter().map(|&cl| final_of_class[cl]).collect();
    let m = final_of_class.iter().max().map_or(0, |x| x + 1);
    let mut members = vec![Vec::new(); m];
    for (x, &t) in q_map.iter().enumerate() {
        members[t].push(x);
    }
    let mut leq = vec![false; m * m];
    for i in 0..k {
        for j in 0..k {
            if rel[i * k + j] {
                leq[final_of_class[i] * m + final_of_class[j]] = true;
            }
        }
    }
    let elements = FinSet::new(members.iter().map(|mem| class_atom(c.elements(), mem)))?;
    let quotient = FinPoset::from_matrix(elements, leq)?;
    Ok(PosetCoequalizer {
        q: MonotoneMap {
            dom: c.clone(),
            cod: quotient.clone(),
            map: q_map,
        },
        quotient,
    })
}

/// Whether `p` is the coequalizer of its own kernel pair, i.e. a regular
/// epimorphism of finite posets.
pub fn is_regular_epi(p: &MonotoneMap) -> bool {
    let k = pullback(p, p).expect("same codomain");
    let coeq = coequalizer(&k.proj_f, &k.proj_g).expect("parallel pair");
    // induced comparison quotient → cod(p)
    let mut induced = vec![usize::MAX; coeq.quotient.len()];
    for x in 0..p.dom.len() {
        let c = coeq.q.apply(x);
        if induced[c] != usize::MAX && induced[c] != p.apply(x) {
            return false;
        }
        induced[c] = p.apply(x);
    }
    match MonotoneMap::new(coeq.quotient.clone(), p.cod.clone(), induced) {
        Ok(m) => m.is_isomorphism(),
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poset_counts_up_to_iso() {
        let counts: Vec<usize> = (0..=5).map(|n| FinPoset::all_up_to_iso(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 16, 63]);
    }

    #[test]
    fn rejects_cycles() {
        let err = FinPoset::generated(FinSet::of(&["a", "b"]), &[(0, 1), (1, 0)]).unwrap_err();
        assert!(matches!(err, PosetError::NotAntisymmetric(_, _)));
    }

    #[test]
    fn monotone_maps_between_chains() {
        let c2 = FinPoset::chain(&["0", "1"]);
        let c3 = FinPoset::chain(&["a", "b", "c"]);
        // non-decreasing pairs over three values
        assert_eq!(MonotoneMap::all(&c2, &c3).len(), 6);
        assert!(MonotoneMap::new(c2.clone(), c3.clone(), vec![2, 0]).is_err());
    }

    #[test]
    fn coequalizer_collapses_cycles() {
        // identify the ends of the chain 0<1<2: everything collapses
        let c = FinPoset::chain(&["0", "1", "2"]);
        let pt = FinPoset::of(&["*"], &[]);
        let f = MonotoneMap::of(&pt, &c, &[0]);
        let g = MonotoneMap::of(&pt, &c, &[2]);
        let q = coequalizer(&f, &g).unwrap();
        assert_eq!(q.quotient.len(), 1);
    }

    #[test]
    fn coequalizer_universal_property() {
        // C = two chains a<b, c<d; identify b with c
        let c = FinPoset::of(&["a", "b", "c", "d"], &[("a", "b"), ("c", "d")]);
        let pt = FinPoset::of(&["*"], &[]);
        let f = MonotoneMap::of(&pt, &c, &[1]);
        let g = MonotoneMap::of(&pt, &c, &[2]);
        let q = coequalizer(&f, &g).unwrap();
        assert_eq!(q.quotient.len(), 3);
        // every coequalizing map into a small test poset factors uniquely
        for t in (0..=3).flat_map(FinPoset::all_up_to_iso) {
            for h in MonotoneMap::all(&c, &t) {
                if h.apply(1) != h.apply(2) {
                    continue;
                }
                let factorizations = MonotoneMap::all(&q.quotient, &t)
                    .into_iter()
                    .filter(|u| q.q.then(u).unwrap() == h)
                    .count();
                assert_eq!(factorizations, 1);
            }
        }
    }

    #[test]
    fn pullback_universal_property() {
        let b = FinPoset::chain(&["a", "b", "c"]);
        let e = FinPoset::of(&["x", "y", "z"], &[("x", "y")]);
        let f = MonotoneMap::of(&e, &b, &[0, 1, 2]);
        let g = MonotoneMap::of(&b, &b, &[0, 1, 2]);
        let pb = pullback(&f, &g).unwrap();
        for t in (0..=2).flat_map(FinPoset::all_up_to_iso) {
            for u in MonotoneMap::all(&t, &e) {
                for v in MonotoneMap::all(&t, &b) {
                    if u.then(&f).unwrap() != v.then(&g).unwrap() {
                        continue;
                    }
                    let mediating = MonotoneMap::all(&t, &pb.apex)
                        .into_iter()
                        .filter(|m| m.then(&pb.proj_f).unwrap() == u && m.then(&pb.proj_g).unwrap() == v)
                        .count();
                    assert_eq!(mediating, 1);
                }
            }
        }
    }

    #[test]
    fn regular_epis() {
        let b = FinPoset::chain(&["a", "b"]);
        let disc = FinPoset::of(&["x", "y"], &[]);
        // discrete two points onto a chain: not regular
        assert!(!is_regular_epi(&MonotoneMap::of(&disc, &b, &[0, 1])));
        assert!(is_regular_epi(&MonotoneMap::identity(&b)));
    }
}
