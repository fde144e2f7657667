//! Finite categories given by explicit composition tables, functors between
//! them, composable chains, pullbacks and equivalence testing.

use std::collections::HashMap;
use std::fmt;

use itertools::Itertools;
use thiserror::Error;

use crate::finbase::{Atom, FinSet, SetError};
use crate::poset::FinPoset;
use crate::Certified;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CategoryError {
    #[error(transparent)]
    Set(#[from] SetError),
    #[error("unknown object {0}")]
    UnknownObject(String),
    #[error("unknown morphism {0}")]
    UnknownMorphism(String),
    #[error("no identity declared for {0}")]
    MissingIdentity(Atom),
    #[error("identity of {0} is not an endomorphism of it")]
    IdentityNotEndo(Atom),
    #[error("composite {0}∘{1} declared but the pair is not composable")]
    NotComposable(Atom, Atom),
    #[error("composite {0}∘{1} declared twice with different values")]
    ConflictingComposite(Atom, Atom),
    #[error("comp undefined at ({0},{1})")]
    CompositeMissing(Atom, Atom),
    #[error("composite {0}∘{1} has the wrong source or target")]
    CompositeTyping(Atom, Atom),
    #[error("left unit law fails at {0}")]
    LeftUnit(Atom),
    #[error("right unit law fails at {0}")]
    RightUnit(Atom),
    #[error("associativity fails at ({0},{1},{2})")]
    Associativity(Atom, Atom, Atom),
    #[error("chains of length {0} are not supported (at most 3)")]
    ChainLength(usize),
    #[error("functor {0}")]
    Functor(String),
    #[error("codomains differ")]
    CodomainMismatch,
}

/// Unvalidated category description keyed by names.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawCategory {
    pub objects: Vec<String>,
    /// `(name, source, target)`
    pub morphisms: Vec<(String, String, String)>,
    /// `(object, identity morphism)`
    pub identities: Vec<(String, String)>,
    /// `(g, f, g∘f)`
    pub composites: Vec<(String, String, String)>,
}

impl RawCategory {
    pub fn new(objects: &[&str]) -> Self {
        RawCategory {
            objects: objects.iter().map(|s| s.to_string()).collect(),
            ..Default::default()
        }
    }

    pub fn morphism(mut self, name: &str, src: &str, tgt: &str) -> Self {
        self.morphisms.push((name.into(), src.into(), tgt.into()));
        self
    }

    pub fn compose(mut self, g: &str, f: &str, gf: &str) -> Self {
        self.composites.push((g.into(), f.into(), gf.into()));
        self
    }

    /// Adds `id_x` for every object lacking a declared identity, together with
    /// every composite involving an identity that was not given explicitly.
    pub fn with_identities(mut self) -> Self {
        for x in self.objects.clone() {
            if !self.identities.iter().any(|(o, _)| *o == x) {
                let id = format!("id_{x}");
                self.morphisms.push((id.clone(), x.clone(), x.clone()));
                self.identities.push((x, id));
            }
        }
        for (x, id) in self.identities.clone() {
            for (m, s, t) in self.morphisms.clone() {
                if *t == x && !self.composites.iter().any(|(g, f, _)| *g == id && *f == m) {
                    self.composites.push((id.clone(), m.clone(), m.clone()));
                }
                if *s == x && !self.composites.iter().any(|(g, f, _)| *g == m && *f == id) {
                    self.composites.push((m.clone(), id.clone(), m.clone()));
                }
            }
        }
        self
    }
}

/// A finite category with a dense composition table.
#[derive(Clone, PartialEq, Eq)]
pub struct FinCategory {
    objects: FinSet,
    morphisms: FinSet,
    src: Vec<usize>,
    tgt: Vec<usize>,
    ident: Vec<usize>,
    /// `comp[g * m + f] = g∘f` when `src g = tgt f`
    comp: Vec<Option<usize>>,
}

impl fmt::Debug for FinCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FinCategory(objects {}, {} morphisms)",
            self.objects,
            self.morphisms.len()
        )
    }
}

impl fmt::Display for FinCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} objects, {} morphisms", self.objects.len(), self.morphisms.len())
    }
}

pub fn validate_category(raw: &RawCategory) -> Result<FinCategory, CategoryError> {
    let objects = FinSet::new(raw.objects.iter().map(Atom::new))?;
    let morphisms = FinSet::new(raw.morphisms.iter().map(|(m, _, _)| Atom::new(m)))?;
    let obj = |s: &str| {
        objects
            .lookup(s)
            .map_err(|_| CategoryError::UnknownObject(s.to_string()))
    };
    let mor = |s: &str| {
        morphisms
            .lookup(s)
            .map_err(|_| CategoryError::UnknownMorphism(s.to_string()))
    };
    let mut src = Vec::new();
    let mut tgt = Vec::new();
    for (_, s, t) in &raw.morphisms {
        src.push(obj(s)?);
        tgt.push(obj(t)?);
    }
    let mut ident = vec![None; objects.len()];
    for (x, m) in &raw.identities {
        ident[obj(x)?] = Some(mor(m)?);
    }
    let ident: Vec<usize> = ident
        .into_iter()
        .enumerate()
        .map(|(x, i)| i.ok_or_else(|| CategoryError::MissingIdentity(objects.atom(x).clone())))
        .collect::<Result<_, _>>()?;
    let n = morphisms.len();
    let mut comp = vec![None; n * n];
    for (g, f, gf) in &raw.composites {
        let (g, f, gf) = (mor(g)?, mor(f)?, mor(gf)?);
        if src[g] != tgt[f] {
            return Err(CategoryError::NotComposable(
                morphisms.atom(g).clone(),
                morphisms.atom(f).clone(),
            ));
        }
        match comp[g * n + f] {
            Some(old) if old != gf => {
                return Err(CategoryError::ConflictingComposite(
                    morphisms.atom(g).clone(),
                    morphisms.atom(f).clone(),
                ))
            }
            _ => comp[g * n + f] = Some(gf),
        }
    }
    FinCategory::from_parts(objects, morphisms, src, tgt, ident, comp)
}

impl FinCategory {
    /// Validates the axioms, reporting the first violated one.
    pub fn from_parts(
        objects: FinSet,
        morphisms: FinSet,
        src: Vec<usize>,
        tgt: Vec<usize>,
        ident: Vec<usize>,
        comp: Vec<Option<usize>>,
    ) -> Result<FinCategory, CategoryError> {
        let c = FinCategory {
            objects,
            morphisms,
            src,
            tgt,
            ident,
            comp,
        };
        let n = c.morphisms.len();
        let name = |m: usize| c.morphisms.atom(m).clone();
        for x in 0..c.objects.len() {
            let i = c.ident[x];
            if c.src[i] != x || c.tgt[i] != x {
                return Err(CategoryError::IdentityNotEndo(c.objects.atom(x).clone()));
            }
        }
        for g in 0..n {
            for f in 0..n {
                if c.src[g] != c.tgt[f] {
                    continue;
                }
                match c.comp[g * n + f] {
                    None => return Err(CategoryError::CompositeMissing(name(g), name(f))),
                    Some(gf) if c.src[gf] != c.src[f] || c.tgt[gf] != c.tgt[g] => {
                        return Err(CategoryError::CompositeTyping(name(g), name(f)))
                    }
                    _ => {}
                }
            }
        }
        for f in 0..n {
            if c.compose(c.ident[c.tgt[f]], f) != Some(f) {
                return Err(CategoryError::LeftUnit(name(f)));
            }
            if c.compose(f, c.ident[c.src[f]]) != Some(f) {
                return Err(CategoryError::RightUnit(name(f)));
            }
        }
        for h in 0..n {
            for g in (0..n).filter(|&g| c.src[h] == c.tgt[g]) {
                for f in (0..n).filter(|&f| c.src[g] == c.tgt[f]) {
                    let left = c.compose(c.compose(h, g).unwrap(), f);
                    let right = c.compose(h, c.compose(g, f).unwrap());
                    if left != right {
                        return Err(CategoryError::Associativity(name(h), name(g), name(f)));
                    }
                }
            }
        }
        Ok(c)
    }

    /// The raw description this category was built from, up to ordering.
    pub fn to_raw(&self) -> RawCategory {
        let n = self.morphisms.len();
        let name = |m: usize| self.morphisms.atom(m).to_string();
        RawCategory {
            objects: self.objects.atoms().iter().map(|a| a.to_string()).collect(),
            morphisms: (0..n)
                .map(|m| {
                    (
                        name(m),
                        self.objects.atom(self.src[m]).to_string(),
                        self.objects.atom(self.tgt[m]).to_string(),
                    )
                })
                .collect(),
            identities: (0..self.objects.len())
                .map(|x| (self.objects.atom(x).to_string(), name(self.ident[x])))
                .collect(),
            composites: (0..n)
                .flat_map(|g| (0..n).map(move |f| (g, f)))
                .filter_map(|(g, f)| self.comp[g * n + f].map(|gf| (name(g), name(f), name(gf))))
                .collect(),
        }
    }

    /// Category with one object per element and one morphism per pair `a ≤ b`.
    pub fn from_poset(p: &FinPoset) -> FinCategory {
        let names = p.elements();
        let mut raw = RawCategory::new(&names.atoms().iter().map(|a| a.as_str()).collect::<Vec<_>>());
        let arrow = |a: usize, b: usize| {
            if a == b {
                format!("id_{}", names.atom(a))
            } else {
                format!("{}≤{}", names.atom(a), names.atom(b))
            }
        };
        for a in 0..p.len() {
            for b in 0..p.len() {
                if p.leq(a, b) {
                    raw = raw.morphism(&arrow(a, b), names.atom(a).as_str(), names.atom(b).as_str());
                }
            }
        }
        raw.identities = (0..p.len()).map(|a| (names.atom(a).to_string(), arrow(a, a))).collect();
        for a in 0..p.len() {
            for b in 0..p.len() {
                for c in 0..p.len() {
                    if p.leq(a, b) && p.leq(b, c) {
                        raw = raw.compose(&arrow(b, c), &arrow(a, b), &arrow(a, c));
                    }
                }
            }
        }
        validate_category(&raw).expect("posets are categories")
    }

    /// One-object category `*` on a monoid with multiplication `table[a][b] = a·b`
    /// (composition `a∘b = a·b`) and unit `unit`.
    pub fn from_monoid(elements: &[&str], table: &[Vec<usize>], unit: usize) -> Result<FinCategory, CategoryError> {
        let mut raw = RawCategory::new(&["*"]);
        for e in elements {
            raw = raw.morphism(e, "*", "*");
        }
        raw.identities = vec![("*".into(), elements[unit].into())];
        for (a, row) in table.iter().enumerate() {
            for (b, &ab) in row.iter().enumerate() {
                raw = raw.compose(elements[a], elements[b], elements[ab]);
            }
        }
        validate_category(&raw)
    }

    pub fn discrete(objects: &FinSet) -> FinCategory {
        let names: Vec<&str> = objects.atoms().iter().map(|a| a.as_str()).collect();
        validate_category(&RawCategory::new(&names).with_identities()).expect("discrete category")
    }

    pub fn objects(&self) -> &FinSet {
        &self.objects
    }

    pub fn morphisms(&self) -> &FinSet {
        &self.morphisms
    }

    pub fn src(&self, m: usize) -> usize {
        self.src[m]
    }

    pub fn tgt(&self, m: usize) -> usize {
        self.tgt[m]
    }

    pub fn id(&self, x: usize) -> usize {
        self.ident[x]
    }

    pub fn is_identity(&self, m: usize) -> bool {
        self.ident[self.src[m]] == m
    }

    /// `g∘f`, defined when `src g = tgt f`.
    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        self.comp[g * self.morphisms.len() + f]
    }

    pub fn hom(&self, x: usize, y: usize) -> Vec<usize> {
        (0..self.morphisms.len())
            .filter(|&m| self.src[m] == x && self.tgt[m] == y)
            .collect()
    }

    pub fn mor(&self, name: &str) -> usize {
        self.morphisms
            .lookup(name)
            .unwrap_or_else(|_| panic!("no morphism {name}"))
    }

    pub fn obj(&self, name: &str) -> usize {
        self.objects.lookup(name).unwrap_or_else(|_| panic!("no object {name}"))
    }

    pub fn inverse(&self, f: usize) -> Option<usize> {
        self.hom(self.tgt[f], self.src[f]).into_iter().find(|&g| {
            self.compose(g, f) == Some(self.ident[self.src[f]]) && self.compose(f, g) == Some(self.ident[self.tgt[f]])
        })
    }

    pub fn isomorphic(&self, x: usize, y: usize) -> bool {
        self.hom(x, y).into_iter().any(|f| self.inverse(f).is_some())
    }

    pub fn idempotents(&self) -> Vec<usize> {
        (0..self.morphisms.len())
            .filter(|&e| self.src[e] == self.tgt[e] && self.compose(e, e) == Some(e))
            .collect()
    }

    /// Product category with componentwise composition.
    pub fn product(&self, other: &FinCategory) -> FinCategory {
        let objects = pairs_set(&self.objects, &other.objects);
        let morphisms = pairs_set(&self.morphisms, &other.morphisms);
        let (n1, n2) = (self.morphisms.len(), other.morphisms.len());
        let o2 = other.objects.len();
        let mut src = Vec::new();
        let mut tgt = Vec::new();
        for a in 0..n1 {
            for b in 0..n2 {
                src.push(self.src[a] * o2 + other.src[b]);
                tgt.push(self.tgt[a] * o2 + other.tgt[b]);
            }
        }
        let ident = (0..self.objects.len())
            .flat_map(|x| (0..o2).map(move |y| (x, y)))
            .map(|(x, y)| self.ident[x] * n2 + other.ident[y])
            .collect();
        let n = n1 * n2;
        let mut comp = vec![None; n * n];
        for g in 0..n {
            for f in 0..n {
                let (g1, g2, f1, f2) = (g / n2, g % n2, f / n2, f % n2);
                if let (Some(a), Some(b)) = (self.compose(g1, f1), other.compose(g2, f2)) {
                    comp[g * n + f] = Some(a * n2 + b);
                }
            }
        }
        FinCategory::from_parts(objects, morphisms, src, tgt, ident, comp).expect("product of categories")
    }

    /// A pullback of the cospan `f: a → c ← b: g` inside this category,
    /// found by checking the universal property against every cone.
    pub fn pullback_of(&self, f: usize, g: usize) -> Option<(usize, usize, usize)> {
        if self.tgt[f] != self.tgt[g] {
            return None;
        }
        let (a, b) = (self.src[f], self.src[g]);
        let cones = |p: usize| -> Vec<(usize, usize)> {
            self.hom(p, a)
                .into_iter()
                .cartesian_product(self.hom(p, b))
                .filter(|&(u, v)| self.compose(f, u) == self.compose(g, v))
                .collect()
        };
        (0..self.objects.len()).find_map(|p| {
            cones(p).into_iter().find_map(|(u, v)| {
                let universal = (0..self.objects.len()).all(|q| {
                    cones(q).into_iter().all(|(s, t)| {
                        self.hom(q, p)
                            .into_iter()
                            .filter(|&h| self.compose(u, h) == Some(s) && self.compose(v, h) == Some(t))
                            .count()
                            == 1
                    })
                });
                universal.then_some((p, u, v))
            })
        })
    }
}

fn pairs_set(a: &FinSet, b: &FinSet) -> FinSet {
    FinSet::new(
        a.atoms()
            .iter()
            .flat_map(|x| b.atoms().iter().map(move |y| Atom::pair(x, y))),
    )
    .expect("pairs of distinct atoms are distinct")
}

/// A functor between finite categories.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinFunctor {
    dom: FinCategory,
    cod: FinCategory,
    obj_map: Vec<usize>,
    mor_map: Vec<usize>,
}

impl FinFunctor {
    pub fn new(
        dom: FinCategory,
        cod: FinCategory,
        obj_map: Vec<usize>,
        mor_map: Vec<usize>,
    ) -> Result<Self, CategoryError> {
        let err = |s: String| Err(CategoryError::Functor(s));
        if obj_map.len() != dom.objects.len() || mor_map.len() != dom.morphisms.len() {
            return err("tables have the wrong length".into());
        }
        if obj_map.iter().any(|&y| y >= cod.objects.len()) || mor_map.iter().any(|&m| m >= cod.morphisms.len()) {
            return err("maps outside the codomain".into());
        }
        for m in 0..dom.morphisms.len() {
            let fm = mor_map[m];
            if cod.src[fm] != obj_map[dom.src[m]] || cod.tgt[fm] != obj_map[dom.tgt[m]] {
                return err(format!("does not preserve the endpoints of {}", dom.morphisms.atom(m)));
            }
        }
        for x in 0..dom.objects.len() {
            if mor_map[dom.ident[x]] != cod.ident[obj_map[x]] {
                return err(format!("does not preserve the identity of {}", dom.objects.atom(x)));
            }
        }
        let n = dom.morphisms.len();
        for g in 0..n {
            for f in 0..n {
                if let Some(gf) = dom.compose(g, f) {
                    if cod.compose(mor_map[g], mor_map[f]) != Some(mor_map[gf]) {
                        return err(format!(
                            "does not preserve {}∘{}",
                            dom.morphisms.atom(g),
                            dom.morphisms.atom(f)
                        ));
                    }
                }
            }
        }
        Ok(FinFunctor {
            dom,
            cod,
            obj_map,
            mor_map,
        })
    }

    /// Builds from morphism names; objects follow from sources and targets.
    pub fn from_names(dom: &FinCategory, cod: &FinCategory, mors: &[(&str, &str)]) -> Result<Self, CategoryError> {
        let mut mor_map = vec![None; dom.morphisms.len()];
        for (a, b) in mors {
            let a = dom
                .morphisms
                .lookup(a)
                .map_err(|_| CategoryError::UnknownMorphism(a.to_string()))?;
            let b = cod
                .morphisms
                .lookup(b)
                .map_err(|_| CategoryError::UnknownMorphism(b.to_string()))?;
            mor_map[a] = Some(b);
        }
        let mut obj_map = vec![None; dom.objects.len()];
        for (m, fm) in mor_map.iter().enumerate() {
            if let Some(fm) = fm {
                obj_map[dom.src[m]] = Some(cod.src[*fm]);
                obj_map[dom.tgt[m]] = Some(cod.tgt[*fm]);
            }
        }
        let obj_map: Vec<usize> = obj_map
            .into_iter()
            .enumerate()
            .map(|(x, y)| y.ok_or_else(|| CategoryError::Functor(format!("no image for {}", dom.objects.atom(x)))))
            .collect::<Result<_, _>>()?;
        // identities default to identities
        let mor_map = mor_map
            .into_iter()
            .enumerate()
            .map(|(m, fm)| match fm {
                Some(fm) => Ok(fm),
                None if dom.is_identity(m) => Ok(cod.ident[obj_map[dom.src[m]]]),
                None => Err(CategoryError::Functor(format!(
                    "no image for {}",
                    dom.morphisms.atom(m)
                ))),
            })
            .collect::<Result<_, _>>()?;
        FinFunctor::new(dom.clone(), cod.clone(), obj_map, mor_map)
    }

    pub fn identity(c: &FinCategory) -> Self {
        FinFunctor {
            dom: c.clone(),
            cod: c.clone(),
            obj_map: (0..c.objects.len()).collect(),
            mor_map: (0..c.morphisms.len()).collect(),
        }
    }

    /// Constant functor at an object of `cod`.
    pub fn constant(dom: &FinCategory, cod: &FinCategory, y: usize) -> Self {
        FinFunctor::new(
            dom.clone(),
            cod.clone(),
            vec![y; dom.objects.len()],
            vec![cod.ident[y]; dom.morphisms.len()],
        )
        .expect("constant functor")
    }

    pub fn dom(&self) -> &FinCategory {
        &self.dom
    }

    pub fn cod(&self) -> &FinCategory {
        &self.cod
    }

    pub fn obj(&self, x: usize) -> usize {
        self.obj_map[x]
    }

    pub fn mor(&self, m: usize) -> usize {
        self.mor_map[m]
    }

    pub fn obj_table(&self) -> &[usize] {
        &self.obj_map
    }

    pub fn mor_table(&self) -> &[usize] {
        &self.mor_map
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &FinFunctor) -> Result<FinFunctor, CategoryError> {
        if self.cod != other.dom {
            return Err(CategoryError::Functor("composite of non-composable functors".into()));
        }
        Ok(FinFunctor {
            dom: self.dom.clone(),
            cod: other.cod.clone(),
            obj_map: self.obj_map.iter().map(|&x| other.obj_map[x]).collect(),
            mor_map: self.mor_map.iter().map(|&m| other.mor_map[m]).collect(),
        })
    }

    pub fn is_fully_faithful(&self) -> bool {
        self.hom_failure().is_none()
    }

    fn hom_failure(&self) -> Option<(usize, usize)> {
        let d = &self.dom;
        (0..d.objects.len())
            .cartesian_product(0..d.objects.len())
            .find(|&(x, y)| {
                let mut image: Vec<usize> = d.hom(x, y).into_iter().map(|m| self.mor_map[m]).collect();
                let n = image.len();
                image.sort_unstable();
                image.dedup();
                image.len() != n || n != self.cod.hom(self.obj_map[x], self.obj_map[y]).len()
            })
    }
}

/// All composable `n`-tuples of a category, for `n ≤ 3`.
///
/// Each chain is stored in path order, first morphism first, so a 2-chain
/// `[m1, m2]` satisfies `tgt m1 = src m2`. For `n = 0` the entries are
/// one-element vectors of object indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainTable {
    pub n: usize,
    pub chains: Vec<Vec<usize>>,
}

impl ChainTable {
    pub fn len(&self) -> usize {
        self.chains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chains.is_empty()
    }

    pub fn render(&self, c: &FinCategory, chain: &[usize]) -> String {
        let names = if self.n == 0 { c.objects() } else { c.morphisms() };
        format!("({})", chain.iter().map(|&i| names.atom(i).as_str()).join(","))
    }
}

pub fn enumerate_chains(c: &FinCategory, n: usize) -> Result<ChainTable, CategoryError> {
    if n > 3 {
        return Err(CategoryError::ChainLength(n));
    }
    if n == 0 {
        return Ok(ChainTable {
            n,
            chains: (0..c.objects.len()).map(|x| vec![x]).collect(),
        });
    }
    let mut chains: Vec<Vec<usize>> = (0..c.morphisms.len()).map(|m| vec![m]).collect();
    for _ in 1..n {
        chains = chains
            .into_iter()
            .flat_map(|ch| {
                let last = *ch.last().expect("nonempty");
                (0..c.morphisms.len())
                    .filter(move |&m| c.src[m] == c.tgt[last])
                    .map(move |m| {
                        let mut next = ch.clone();
                        next.push(m);
                        next
                    })
            })
            .collect();
    }
    Ok(ChainTable { n, chains })
}

/// Whether `F` is surjective on `n`-chains, naming an unhit chain otherwise.
pub fn chain_surjective(f: &FinFunctor, n: usize) -> Result<Certified, CategoryError> {
    let up = enumerate_chains(&f.dom, n)?;
    let down = enumerate_chains(&f.cod, n)?;
    let mut hit = std::collections::HashSet::new();
    for ch in &up.chains {
        let image: Vec<usize> = ch
            .iter()
            .map(|&i| if n == 0 { f.obj_map[i] } else { f.mor_map[i] })
            .collect();
        hit.insert(image);
    }
    Ok(match down.chains.iter().find(|ch| !hit.contains(*ch)) {
        Some(ch) => Certified::fails(format!("misses {}", down.render(&f.cod, ch))),
        None => Certified::holds(format!("all {} {n}-chains hit", down.len())),
    })
}

/// Chain-surjectivity at levels 1 through 3: morphisms, 2-chains, 3-chains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainReport {
    pub levels: Vec<(usize, Certified)>,
}

impl ChainReport {
    pub fn sufficient(&self) -> bool {
        self.levels.iter().all(|(_, c)| c.holds)
    }

    pub fn first_failure(&self) -> Option<(usize, &Certified)> {
        self.levels.iter().find(|(_, c)| !c.holds).map(|(n, c)| (*n, c))
    }
}

pub fn chain_report(f: &FinFunctor) -> ChainReport {
    ChainReport {
        levels: (1..=3).map(|n| (n, chain_surjective(f, n).expect("n ≤ 3"))).collect(),
    }
}

/// Pullback of two functors with a common codomain, with its projections.
#[derive(Clone, Debug)]
pub struct CategoryPullback {
    pub apex: FinCategory,
    pub proj_f: FinFunctor,
    pub proj_g: FinFunctor,
}

pub fn pullback_category(f: &FinFunctor, g: &FinFunctor) -> Result<CategoryPullback, CategoryError> {
    if f.cod != g.cod {
        return Err(CategoryError::CodomainMismatch);
    }
    let (a, b) = (&f.dom, &g.dom);
    let obj_pairs: Vec<(usize, usize)> = (0..a.objects.len())
        .cartesian_product(0..b.objects.len())
        .filter(|&(x, y)| f.obj_map[x] == g.obj_map[y])
        .collect();
    let mor_pairs: Vec<(usize, usize)> = (0..a.morphisms.len())
        .cartesian_product(0..b.morphisms.len())
        .filter(|&(u, v)| f.mor_map[u] == g.mor_map[v])
        .collect();
    let obj_index: HashMap<(usize, usize), usize> = obj_pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mor_index: HashMap<(usize, usize), usize> = mor_pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let objects = FinSet::new(
        obj_pairs
            .iter()
            .map(|&(x, y)| Atom::pair(a.objects.atom(x), b.objects.atom(y))),
    )
    .expect("distinct");
    let morphisms = FinSet::new(
        mor_pairs
            .iter()
            .map(|&(u, v)| Atom::pair(a.morphisms.atom(u), b.morphisms.atom(v))),
    )
    .expect("distinct");
    let src = mor_pairs
        .iter()
        .map(|&(u, v)| obj_index[&(a.src[u], b.src[v])])
        .collect();
    let tgt = mor_pairs
        .iter()
        .map(|&(u, v)| obj_index[&(a.tgt[u], b.tgt[v])])
        .collect();
    let ident = obj_pairs
        .iter()
        .map(|&(x, y)| mor_index[&(a.ident[x], b.ident[y])])
        .collect();
    let n = mor_pairs.len();
    let mut comp = vec![None; n * n];
    for (i, &(g1, g2)) in mor_pairs.iter().enumerate() {
        for (j, &(f1, f2)) in mor_pairs.iter().enumerate() {
            if let (Some(c1), Some(c2)) = (a.compose(g1, f1), b.compose(g2, f2)) {
                comp[i * n + j] = Some(mor_index[&(c1, c2)]);
            }
        }
    }
    let apex = FinCategory::from_parts(objects, morphisms, src, tgt, ident, comp)?;
    let proj_f = FinFunctor::new(
        apex.clone(),
        a.clone(),
        obj_pairs.iter().map(|p| p.0).collect(),
        mor_pairs.iter().map(|p| p.0).collect(),
    )?;
    let proj_g = FinFunctor::new(
        apex.clone(),
        b.clone(),
        obj_pairs.iter().map(|p| p.1).collect(),
        mor_pairs.iter().map(|p| p.1).collect(),
    )?;
    Ok(CategoryPullback { apex, proj_f, proj_g })
}

#[derive(Clone, Debug)]
pub struct CategoryKernelPair {
    pub apex: FinCategory,
    /// first projection
    pub d1: FinFunctor,
    /// second projection
    pub d0: FinFunctor,
    pub diagonal: FinFunctor,
}

pub fn kernel_pair_functor(f: &FinFunctor) -> CategoryKernelPair {
    let pb = pullback_category(f, f).expect("same codomain");
    let d = &f.dom;
    let find = |names: &FinSet, a: &Atom| names.index_of(&Atom::pair(a, a)).expect("diagonal pair");
    let obj_map = (0..d.objects.len())
        .map(|x| find(pb.apex.objects(), d.objects.atom(x)))
        .collect();
    let mor_map = (0..d.morphisms.len())
        .map(|m| find(pb.apex.morphisms(), d.morphisms.atom(m)))
        .collect();
    let diagonal = FinFunctor::new(d.clone(), pb.apex.clone(), obj_map, mor_map).expect("diagonal is a functor");
    debug_assert!(diagonal
        .then(&pb.proj_f)
        .map(|c| c == FinFunctor::identity(d))
        .unwrap_or(false));
    CategoryKernelPair {
        apex: pb.apex,
        d1: pb.proj_f,
        d0: pb.proj_g,
        diagonal,
    }
}

/// Whether `F` is fully faithful and essentially surjective.
pub fn equivalence_check(f: &FinFunctor) -> Certified {
    let missed =
        (0..f.cod.objects.len()).find(|&y| !(0..f.dom.objects.len()).any(|x| f.cod.isomorphic(f.obj_map[x], y)));
    if let Some(y) = missed {
        return Certified::fails(format!(
            "not essentially surjective: {} has no isomorphic preimage",
            f.cod.objects.atom(y)
        ));
    }
    match f.hom_failure() {
        Some((x, y)) => {
            let names = f.dom.objects();
            Certified::fails(format!("hom ({},{}) not bijective", names.atom(x), names.atom(y)))
        }
        None => Certified::holds("fully faithful and essentially surjective"),
    }
}

/// The slice `c ↓ x`: objects are morphisms into `x`, morphisms are
/// commuting triangles.
pub fn slice_category(c: &FinCategory, x: usize) -> Result<FinCategory, CategoryError> {
    if x >= c.objects.len() {
        return Err(CategoryError::UnknownObject(format!("#{x}")));
    }
    let objs: Vec<usize> = (0..c.morphisms.len()).filter(|&m| c.tgt[m] == x).collect();
    let mut arrows: Vec<(usize, usize, usize)> = Vec::new();
    for (i, &m) in objs.iter().enumerate() {
        for (j, &m2) in objs.iter().enumerate() {
            for h in c.hom(c.src[m], c.src[m2]) {
                if c.compose(m2, h) == Some(m) {
                    arrows.push((h, i, j));
                }
            }
        }
    }
    let index: HashMap<(usize, usize, usize), usize> = arrows.iter().enumerate().map(|(k, &a)| (a, k)).collect();
    let objects = FinSet::new(objs.iter().map(|&m| c.morphisms.atom(m).clone()))?;
    let morphisms = FinSet::new(arrows.iter().map(|&(h, i, j)| {
        Atom::new(format!(
            "{}:{}→{}",
            c.morphisms.atom(h),
            c.morphisms.atom(objs[i]),
            c.morphisms.atom(objs[j])
        ))
    }))?;
    let src = arrows.iter().map(|a| a.1).collect();
    let tgt = arrows.iter().map(|a| a.2).collect();
    let ident = objs
        .iter()
        .enumerate()
        .map(|(i, &m)| index[&(c.ident[c.src[m]], i, i)])
        .collect();
    let n = arrows.len();
    let mut comp = vec![None; n * n];
    for (k, &(g, j, l)) in arrows.iter().enumerate() {
        for (k2, &(f, i, j2)) in arrows.iter().enumerate() {
            if j == j2 {
                let gf = c.compose(g, f).expect("composable in c");
                comp[k * n + k2] = Some(index[&(gf, i, l)]);
            }
        }
    }
    FinCategory::from_parts(objects, morphisms, src, tgt, ident, comp)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn interval() -> FinCategory {
        validate_category(&RawCategory::new(&["0", "1"]).morphism("f", "0", "1").with_identities()).unwrap()
    }

    fn terminal() -> FinCategory {
        validate_category(&RawCategory::new(&["*"]).with_identities()).unwrap()
    }

    #[test]
    fn small_categories_validate() {
        assert_eq!(terminal().morphisms().len(), 1);
        assert_eq!(interval().morphisms().len(), 3);
    }

    #[test]
    fn broken_right_unit_is_named() {
        let mut raw = RawCategory::new(&["0", "1"])
            .morphism("f", "0", "1")
            .morphism("g", "0", "1");
        raw = raw.compose("f", "id_0", "g").with_identities();
        assert_eq!(
            validate_category(&raw).unwrap_err().to_string(),
            "right unit law fails at f"
        );
    }

    #[test]
    fn missing_composite_is_named() {
        let raw = RawCategory::new(&["0", "1", "2"])
            .morphism("f", "0", "1")
            .morphism("g", "1", "2")
            .with_identities();
        assert_eq!(
            validate_category(&raw).unwrap_err().to_string(),
            "comp undefined at (g,f)"
        );
    }

    #[test]
    fn non_associative_monoid_is_rejected() {
        // a·a = e, a·b = a, otherwise left projection; fails (a·a)·b vs a·(a·b)
        let table = vec![vec![0, 1, 2], vec![1, 0, 1], vec![2, 2, 2]];
        let err = FinCategory::from_monoid(&["e", "a", "b"], &table, 0).unwrap_err();
        assert!(matches!(err, CategoryError::Associativity(..)), "{err}");
    }

    #[test]
    fn chain_counts() {
        let c = interval();
        assert_eq!(enumerate_chains(&c, 0).unwrap().len(), 2);
        assert_eq!(enumerate_chains(&c, 1).unwrap().len(), 3);
        assert_eq!(enumerate_chains(&c, 2).unwrap().len(), 4);
        for n in 0..=3 {
            assert_eq!(enumerate_chains(&terminal(), n).unwrap().len(), 1);
        }
        assert_eq!(enumerate_chains(&c, 4).unwrap_err(), CategoryError::ChainLength(4));
    }

    #[test]
    fn discrete_inclusion_misses_f() {
        let two = interval();
        let disc = FinCategory::discrete(&FinSet::of(&["0", "1"]));
        let inc = FinFunctor::from_names(&disc, &two, &[("id_0", "id_0"), ("id_1", "id_1")]).unwrap();
        let r = chain_surjective(&inc, 1).unwrap();
        assert!(!r.holds);
        assert_eq!(r.certificate, "misses (f)");
        assert!(chain_surjective(&inc, 0).unwrap().holds);
    }

    #[test]
    fn product_projection_hits_three_chains() {
        let two = interval();
        let sq = two.product(&two);
        assert_eq!(sq.objects().len(), 4);
        assert_eq!(sq.morphisms().len(), 9);
        let proj = FinFunctor::new(
            sq.clone(),
            two.clone(),
            (0..4).map(|x| x / 2).collect(),
            (0..9).map(|m| m / 3).collect(),
        )
        .unwrap();
        assert!(chain_surjective(&proj, 3).unwrap().holds);
    }

    #[test]
    fn pullbacks_of_functors() {
        let two = interval();
        let one = terminal();
        let bang = FinFunctor::constant(&two, &one, 0);
        let pb = pullback_category(&bang, &bang).unwrap();
        assert_eq!(pb.apex.objects().len(), 4);
        assert_eq!(pb.apex.morphisms().len(), 9);
        let id = FinFunctor::identity(&two);
        let along_id = pullback_category(&id, &id).unwrap();
        assert_eq!(along_id.apex.morphisms().len(), 3);
        // disjoint object images
        let disc = FinCategory::discrete(&FinSet::of(&["0", "1"]));
        let at0 = FinFunctor::constant(&one, &disc, 0);
        let at1 = FinFunctor::constant(&one, &disc, 1);
        let empty = pullback_category(&at0, &at1).unwrap();
        assert!(empty.apex.objects().is_empty());
        assert!(pullback_category(&at0, &bang).is_err());
    }

    #[test]
    fn kernel_pair_of_parallel_collapse() {
        let par = validate_category(
            &RawCategory::new(&["0", "1"])
                .morphism("u", "0", "1")
                .morphism("v", "0", "1")
                .with_identities(),
        )
        .unwrap();
        let two = interval();
        let collapse = FinFunctor::from_names(&par, &two, &[("u", "f"), ("v", "f")]).unwrap();
        let kp = kernel_pair_functor(&collapse);
        let names: Vec<&str> = kp.apex.morphisms().atoms().iter().map(|a| a.as_str()).collect();
        for pair in ["(u,u)", "(u,v)", "(v,u)", "(v,v)"] {
            assert!(names.contains(&pair));
        }
        let id = kernel_pair_functor(&FinFunctor::identity(&two));
        assert!(equivalence_check(&id.diagonal).holds);
    }

    #[test]
    fn equivalences() {
        let two = interval();
        assert!(equivalence_check(&FinFunctor::identity(&two)).holds);
        let iso = validate_category(
            &RawCategory::new(&["a", "b"])
                .morphism("i", "a", "b")
                .morphism("j", "b", "a")
                .compose("j", "i", "id_a")
                .compose("i", "j", "id_b")
                .with_identities(),
        )
        .unwrap();
        let one = terminal();
        assert!(equivalence_check(&FinFunctor::constant(&iso, &one, 0)).holds);
        let disc = FinCategory::discrete(&FinSet::of(&["0", "1"]));
        let r = equivalence_check(&FinFunctor::constant(&disc, &disc, 0));
        assert!(!r.holds);
        assert!(
            r.certificate.starts_with("not essentially surjective"),
            "{}",
            r.certificate
        );
        // the skeleton inclusion is an equivalence but not surjective on objects
        let skel = FinFunctor::constant(&one, &iso, 0);
        assert!(equivalence_check(&skel).holds);
        assert!(!chain_surjective(&skel, 0).unwrap().holds);
    }

    #[test]
    fn slices() {
        let one = terminal();
        assert_eq!(slice_category(&one, 0).unwrap().morphisms().len(), 1);
        let two = interval();
        let s = slice_category(&two, 1).unwrap();
        assert_eq!(s.objects().len(), 2);
        assert_eq!(s.morphisms().len(), 3);
        assert_eq!((0..3).filter(|&m| !s.is_identity(m)).count(), 1);
        assert_eq!(slice_category(&two, 0).unwrap().morphisms().len(), 1);
    }

    #[test]
    fn poset_categories_and_pullbacks_inside() {
        let p = FinPoset::of(&["b", "x", "y", "t"], &[("b", "x"), ("b", "y"), ("x", "t"), ("y", "t")]);
        let c = FinCategory::from_poset(&p);
        // pullback of x → t ← y is the meet b
        let (apex, _, _) = c.pullback_of(c.mor("x≤t"), c.mor("y≤t")).unwrap();
        assert_eq!(c.objects().atom(apex).as_str(), "b");
        assert_eq!(enumerate_chains(&c, 1).unwrap().len(), 9);
    }

    #[test]
    fn raw_round_trip() {
        let c = interval();
        assert_eq!(validate_category(&c.to_raw()).unwrap(), c);
    }
}
