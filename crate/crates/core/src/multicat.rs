//! Finite multicategories internal to finite sets via the free monoid monad.
//!
//! A multimorphism `f` has a list of objects as domain (`dom_list`) and one
//! object as codomain. Composition `f ∘ [L_1, …, L_n]` is defined when the
//! codomains of the `L_i` spell out `dom_list(f)`. The chain objects are
//!
//! * `x₂ = {(f, L)}` with `cod(L) = dom_list(f)` (composable pairs), and
//! * `x₃ = {(f, L, M)}` where each `M_i` is a list composable into `L_i`.
//!
//! Surjectivity of a functor on morphisms, `x₂` and `x₃` is a sufficient
//! condition for effective descent.

use std::collections::HashMap;
use std::fmt;

use itertools::Itertools;
use thiserror::Error;

use crate::finbase::{self, Atom, FinFunction, FinSet, SetError};
use crate::fincat::{chain_report, CategoryError, ChainReport, FinCategory, FinFunctor};
use crate::Certified;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MultiError {
    #[error(transparent)]
    Set(#[from] SetError),
    #[error(transparent)]
    Category(#[from] CategoryError),
    #[error("unknown object {0}")]
    UnknownObject(String),
    #[error("unknown morphism {0}")]
    UnknownMorphism(String),
    #[error("no unit declared for {0}")]
    MissingUnit(Atom),
    #[error("reflexive graph law fails at {0}")]
    ReflexiveGraph(Atom),
    #[error("composite declared for non-matching {0}")]
    NotMatching(String),
    #[error("composite at {0} declared twice with different values")]
    Conflicting(String),
    #[error("comp undefined at {0}")]
    CompositeMissing(String),
    #[error("composite at {0} has the wrong domain list or codomain")]
    CompositeTyping(String),
    #[error("left unit law fails at {0}")]
    LeftUnit(Atom),
    #[error("right unit law fails at {0}")]
    RightUnit(Atom),
    #[error("associativity fails at {0}")]
    Associativity(String),
    #[error("chain objects exist for n = 2 and n = 3, not {0}")]
    ChainLevel(usize),
    #[error("multifunctor {0}")]
    Functor(String),
    #[error("the triangle over the base does not commute")]
    TriangleFails,
}

/// Unvalidated multicategory description keyed by names.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawMulticategory {
    pub objects: Vec<String>,
    /// `(name, domain list, codomain)`
    pub morphisms: Vec<(String, Vec<String>, String)>,
    /// `(object, unit morphism)`
    pub units: Vec<(String, String)>,
    /// `(f, L, f∘L)`
    pub composites: Vec<(String, Vec<String>, String)>,
}

fn strings(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

impl RawMulticategory {
    pub fn new(objects: &[&str]) -> Self {
        RawMulticategory {
            objects: strings(objects),
            ..Default::default()
        }
    }

    pub fn morphism(mut self, name: &str, dom: &[&str], cod: &str) -> Self {
        self.morphisms.push((name.into(), strings(dom), cod.into()));
        self
    }

    pub fn compose(mut self, f: &str, list: &[&str], result: &str) -> Self {
        self.composites.push((f.into(), strings(list), result.into()));
        self
    }

    /// Adds a unit `id_x: [x] → x` for every object lacking one, plus the
    /// composites forced by the unit laws when not given.
    pub fn with_units(mut self) -> Self {
        for x in self.objects.clone() {
            if !self.units.iter().any(|(o, _)| *o == x) {
                let id = format!("id_{x}");
                self.morphisms.push((id.clone(), vec![x.clone()], x.clone()));
                self.units.push((x, id));
            }
        }
        let unit_of: HashMap<String, String> = self.units.iter().cloned().collect();
        for (f, dom, cod) in self.morphisms.clone() {
            let left = (unit_of[&cod].clone(), vec![f.clone()]);
            if !self.composites.iter().any(|(g, l, _)| (g, l) == (&left.0, &left.1)) {
                self.composites.push((left.0, left.1, f.clone()));
            }
            let right: Vec<String> = dom.iter().map(|x| unit_of[x].clone()).collect();
            if !self.composites.iter().any(|(g, l, _)| *g == f && *l == right) {
                self.composites.push((f.clone(), right, f.clone()));
            }
        }
        self
    }
}

/// A validated finite multicategory.
#[derive(Clone, PartialEq, Eq)]
pub struct FinMulticategory {
    objs: FinSet,
    mors: FinSet,
    dom_list: Vec<Vec<usize>>,
    cod: Vec<usize>,
    unit: Vec<usize>,
    comp: HashMap<(usize, Vec<usize>), usize>,
}

impl fmt::Debug for FinMulticategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinMulticategory(objects {}, morphisms {})", self.objs, self.mors)
    }
}

/// An element of a chain object, in the convention `(f, L)` or `(f, L, M)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChainElem {
    Two {
        f: usize,
        list: Vec<usize>,
    },
    Three {
        f: usize,
        list: Vec<usize>,
        inner: Vec<Vec<usize>>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainObject {
    pub n: usize,
    pub elements: Vec<ChainElem>,
}

impl ChainObject {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

pub fn validate_multicategory(raw: &RawMulticategory) -> Result<FinMulticategory, MultiError> {
    let objs = FinSet::new(raw.objects.iter().map(Atom::new))?;
    let mors = FinSet::new(raw.morphisms.iter().map(|(m, _, _)| Atom::new(m)))?;
    let obj = |s: &str| objs.lookup(s).map_err(|_| MultiError::UnknownObject(s.to_string()));
    let mor_names = mors.clone();
    let mor = |s: &str| {
        mor_names
            .lookup(s)
            .map_err(|_| MultiError::UnknownMorphism(s.to_string()))
    };
    let mut dom_list = Vec::new();
    let mut cod = Vec::new();
    for (_, d, c) in &raw.morphisms {
        dom_list.push(d.iter().map(|x| obj(x)).collect::<Result<Vec<_>, _>>()?);
        cod.push(obj(c)?);
    }
    let mut unit = vec![None; objs.len()];
    for (x, m) in &raw.units {
        unit[obj(x)?] = Some(mor(m)?);
    }
    let unit: Vec<usize> = unit
        .into_iter()
        .enumerate()
        .map(|(x, u)| u.ok_or_else(|| MultiError::MissingUnit(objs.atom(x).clone())))
        .collect::<Result<_, _>>()?;
    let mut x = FinMulticategory {
        objs,
        mors,
        dom_list,
        cod,
        unit,
        comp: HashMap::new(),
    };
    for (f, l, r) in &raw.composites {
        let f = mor(f)?;
        let l: Vec<usize> = l.iter().map(|m| mor(m)).collect::<Result<_, _>>()?;
        let r = mor(r)?;
        let key = x.render_pair(f, &l);
        if l.iter().map(|&g| x.cod[g]).collect::<Vec<_>>() != x.dom_list[f] {
            return Err(MultiError::NotMatching(key));
        }
        if let Some(&old) = x.comp.get(&(f, l.clone())) {
            if old != r {
                return Err(MultiError::Conflicting(key));
            }
        }
        x.comp.insert((f, l), r);
    }
    x.check_laws()?;
    Ok(x)
}

impl FinMulticategory {
    fn check_laws(&self) -> Result<(), MultiError> {
        for o in 0..self.objs.len() {
            let u = self.unit[o];
            if self.cod[u] != o || self.dom_list[u] != [o] {
                return Err(MultiError::ReflexiveGraph(self.objs.atom(o).clone()));
            }
        }
        for elem in self.x2() {
            let ChainElem::Two { f, list } = &elem else {
                unreachable!()
            };
            let key = self.render_pair(*f, list);
            let r = *self
                .comp
                .get(&(*f, list.clone()))
                .ok_or_else(|| MultiError::CompositeMissing(key.clone()))?;
            let expected: Vec<usize> = list.iter().flat_map(|&g| self.dom_list[g].clone()).collect();
            if self.dom_list[r] != expected || self.cod[r] != self.cod[*f] {
                return Err(MultiError::CompositeTyping(key));
            }
        }
        for f in 0..self.mors.len() {
            if self.compose(self.unit[self.cod[f]], &[f]) != Some(f) {
                return Err(MultiError::LeftUnit(self.mors.atom(f).clone()));
            }
            let units: Vec<usize> = self.dom_list[f].iter().map(|&o| self.unit[o]).collect();
            if self.compose(f, &units) != Some(f) {
                return Err(MultiError::RightUnit(self.mors.atom(f).clone()));
            }
        }
        for elem in self.x3() {
            let ChainElem::Three { f, list, inner } = &elem else {
                unreachable!()
            };
            let inner_composites: Vec<usize> = list
                .iter()
                .zip(inner)
                .map(|(&g, m)| self.compose(g, m).expect("total on x2"))
                .collect();
            let left = self.compose(*f, &inner_composites);
            let outer = self.compose(*f, list).expect("total on x2");
            let right = self.compose(outer, &inner.concat());
            if left != right {
                return Err(MultiError::Associativity(self.render(&elem)));
            }
        }
        Ok(())
    }

    /// Unary multicategory of a category: `dom_list(m) = [src m]`.
    pub fn from_category(c: &FinCategory) -> FinMulticategory {
        let n = c.morphisms().len();
        let comp = (0..n)
            .cartesian_product(0..n)
            .filter_map(|(f, g)| c.compose(f, g).map(|fg| ((f, vec![g]), fg)))
            .collect();
        FinMulticategory {
            objs: c.objects().clone(),
            mors: c.morphisms().clone(),
            dom_list: (0..n).map(|m| vec![c.src(m)]).collect(),
            cod: (0..n).map(|m| c.tgt(m)).collect(),
            unit: (0..c.objects().len()).map(|x| c.id(x)).collect(),
            comp,
        }
    }

    pub fn to_raw(&self) -> RawMulticategory {
        let o = |x: usize| self.objs.atom(x).to_string();
        let m = |f: usize| self.mors.atom(f).to_string();
        RawMulticategory {
            objects: self.objs.atoms().iter().map(|a| a.to_string()).collect(),
            morphisms: (0..self.mors.len())
                .map(|f| (m(f), self.dom_list[f].iter().map(|&x| o(x)).collect(), o(self.cod[f])))
                .collect(),
            units: (0..self.objs.len()).map(|x| (o(x), m(self.unit[x]))).collect(),
            composites: self
                .comp
                .iter()
                .sorted()
                .map(|((f, l), r)| (m(*f), l.iter().map(|&g| m(g)).collect(), m(*r)))
                .collect(),
        }
    }

    pub fn objects(&self) -> &FinSet {
        &self.objs
    }

    pub fn morphisms(&self) -> &FinSet {
        &self.mors
    }

    pub fn dom_list(&self, f: usize) -> &[usize] {
        &self.dom_list[f]
    }

    pub fn cod(&self, f: usize) -> usize {
        self.cod[f]
    }

    pub fn unit(&self, x: usize) -> usize {
        self.unit[x]
    }

    pub fn compose(&self, f: usize, list: &[usize]) -> Option<usize> {
        self.comp.get(&(f, list.to_vec())).copied()
    }

    pub fn is_unary(&self) -> bool {
        self.dom_list.iter().all(|d| d.len() == 1)
    }

    /// Lists `L` with `cod(L_i) = objs[i]`, lexicographic.
    fn matching_lists(&self, objs: &[usize]) -> Vec<Vec<usize>> {
        objs.iter()
            .map(|&o| (0..self.mors.len()).filter(move |&g| self.cod[g] == o))
            .multi_cartesian_product()
            .collect()
    }

    fn x2(&self) -> Vec<ChainElem> {
        (0..self.mors.len())
            .flat_map(|f| {
                self.matching_lists(&self.dom_list[f])
                    .into_iter()
                    .map(move |list| ChainElem::Two { f, list })
            })
            .collect()
    }

    fn x3(&self) -> Vec<ChainElem> {
        let mut out = Vec::new();
        for elem in self.x2() {
            let ChainElem::Two { f, list } = elem else {
                unreachable!()
            };
            let inner_choices: Vec<Vec<Vec<usize>>> =
                list.iter().map(|&g| self.matching_lists(&self.dom_list[g])).collect();
            for inner in inner_choices.into_iter().multi_cartesian_product() {
                out.push(ChainElem::Three {
                    f,
                    list: list.clone(),
                    inner,
                });
            }
        }
        out
    }

    fn render_list(&self, l: &[usize]) -> String {
        format!("[{}]", l.iter().map(|&g| self.mors.atom(g).as_str()).join(","))
    }

    fn render_pair(&self, f: usize, l: &[usize]) -> String {
        format!("({},{})", self.render_list(l), self.mors.atom(f))
    }

    pub fn render(&self, e: &ChainElem) -> String {
        match e {
            ChainElem::Two { f, list } => self.render_pair(*f, list),
            ChainElem::Three { f, list, inner } => format!(
                "([{}],{})",
                inner.iter().map(|m| self.render_list(m)).join(","),
                self.render_pair(*f, list)
            ),
        }
    }
}

/// The chain object `x₂` or `x₃`, in lexicographic order.
pub fn chain_object(x: &FinMulticategory, n: usize) -> Result<ChainObject, MultiError> {
    let elements = match n {
        2 => x.x2(),
        3 => x.x3(),
        _ => return Err(MultiError::ChainLevel(n)),
    };
    Ok(ChainObject { n, elements })
}

/// Lists over `set` of length exactly `len`, as atoms `[a,b]`.
fn lists_of(set: &FinSet, lengths: &[usize]) -> (FinSet, Vec<Vec<usize>>) {
    let lists: Vec<Vec<usize>> = lengths
        .iter()
        .flat_map(|&len| {
            (0..len)
                .map(|_| 0..set.len())
                .multi_cartesian_product()
                .collect::<Vec<_>>()
        })
        .collect();
    let atoms = lists
        .iter()
        .map(|l| Atom::new(format!("[{}]", l.iter().map(|&i| set.atom(i).as_str()).join(","))));
    (FinSet::new(atoms).expect("distinct lists"), lists)
}

/// `M f` restricted to lists of the given lengths.
fn list_map(f: &FinFunction, lengths: &[usize]) -> FinFunction {
    let (dom, dom_lists) = lists_of(f.dom(), lengths);
    let (cod, cod_lists) = lists_of(f.cod(), lengths);
    let index: HashMap<&Vec<usize>, usize> = cod_lists.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let map = dom_lists
        .iter()
        .map(|l| index[&l.iter().map(|&a| f.apply(a)).collect::<Vec<_>>()])
        .collect();
    FinFunction::new(dom, cod, map).expect("elementwise image")
}

/// `M(A ×_C B) ≅ MA ×_{MC} MB` on lists of length at most `max_len`.
pub fn free_monoid_pullback_check(f: &FinFunction, g: &FinFunction, max_len: usize) -> Result<Certified, SetError> {
    let lengths: Vec<usize> = (0..=max_len).collect();
    let pb = finbase::pullback(f, g)?;
    let (left, left_lists) = lists_of(&pb.apex, &lengths);
    let right = finbase::pullback(&list_map(f, &lengths), &list_map(g, &lengths))?;
    let (_, a_lists) = lists_of(f.dom(), &lengths);
    let (_, b_lists) = lists_of(g.dom(), &lengths);
    let a_index: HashMap<&Vec<usize>, usize> = a_lists.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let b_index: HashMap<&Vec<usize>, usize> = b_lists.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let right_index: HashMap<(usize, usize), usize> = (0..right.apex.len())
        .map(|t| ((right.proj_f.apply(t), right.proj_g.apply(t)), t))
        .collect();
    // unzip a list of pairs into a pair of lists
    let mut hit = vec![false; right.apex.len()];
    for l in &left_lists {
        let firsts: Vec<usize> = l.iter().map(|&t| pb.proj_f.apply(t)).collect();
        let seconds: Vec<usize> = l.iter().map(|&t| pb.proj_g.apply(t)).collect();
        match right_index.get(&(a_index[&firsts], b_index[&seconds])) {
            Some(&t) if !hit[t] => hit[t] = true,
            _ => {
                return Ok(Certified::fails(format!(
                    "unzip is not injective or leaves the pullback at {l:?}"
                )))
            }
        }
    }
    Ok(match hit.iter().position(|h| !h) {
        Some(t) => Certified::fails(format!("{} is not a list of pairs", right.apex.atom(t))),
        None => Certified::holds(format!("{} lists of length ≤ {max_len} on both sides", left.len())),
    })
}

/// `|x₃|` computed as a set-level pullback of `x₂ → M x₁ ← M x₂`, lists
/// restricted to the arities that occur.
pub fn x3_size_via_pullback(x: &FinMulticategory) -> usize {
    let x2 = x.x2();
    let lengths: Vec<usize> = (0..x.mors.len())
        .map(|f| x.dom_list[f].len())
        .sorted()
        .dedup()
        .collect();
    let x2_set = FinSet::range(x2.len());
    let outer = |e: &ChainElem| match e {
        ChainElem::Two { f, .. } => *f,
        ChainElem::Three { .. } => unreachable!(),
    };
    let outer_map = FinFunction::new(x2_set.clone(), x.mors.clone(), x2.iter().map(outer).collect()).expect("outer");
    let m_outer = list_map(&outer_map, &lengths);
    let (_, mor_lists) = lists_of(&x.mors, &lengths);
    let index: HashMap<&Vec<usize>, usize> = mor_lists.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let second = FinFunction::new(
        x2_set,
        m_outer.cod().clone(),
        x2.iter()
            .map(|e| match e {
                ChainElem::Two { list, .. } => index[list],
                ChainElem::Three { .. } => unreachable!(),
            })
            .collect(),
    )
    .expect("lists of occurring length");
    finbase::pullback(&second, &m_outer)
        .expect("common codomain")
        .apex
        .len()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiFunctor {
    dom: FinMulticategory,
    cod: FinMulticategory,
    obj_map: Vec<usize>,
    mor_map: Vec<usize>,
}

impl MultiFunctor {
    pub fn new(
        dom: FinMulticategory,
        cod: FinMulticategory,
        obj_map: Vec<usize>,
        mor_map: Vec<usize>,
    ) -> Result<Self, MultiError> {
        let err = |s: String| Err(MultiError::Functor(s));
        if obj_map.len() != dom.objs.len() || mor_map.len() != dom.mors.len() {
            return err("tables have the wrong length".into());
        }
        if obj_map.iter().any(|&o| o >= cod.objs.len()) || mor_map.iter().any(|&m| m >= cod.mors.len()) {
            return err("maps outside the codomain".into());
        }
        for f in 0..dom.mors.len() {
            let pf = mor_map[f];
            let mapped: Vec<usize> = dom.dom_list[f].iter().map(|&o| obj_map[o]).collect();
            if cod.dom_list[pf] != mapped || cod.cod[pf] != obj_map[dom.cod[f]] {
                return err(format!("does not preserve the type of {}", dom.mors.atom(f)));
            }
        }
        for o in 0..dom.objs.len() {
            if mor_map[dom.unit[o]] != cod.unit[obj_map[o]] {
                return err(format!("does not preserve the unit of {}", dom.objs.atom(o)));
            }
        }
        for ((f, l), r) in dom.comp.iter().sorted() {
            let image: Vec<usize> = l.iter().map(|&g| mor_map[g]).collect();
            if cod.compose(mor_map[*f], &image) != Some(mor_map[*r]) {
                return err(format!("does not preserve the composite at {}", dom.render_pair(*f, l)));
            }
        }
        Ok(MultiFunctor {
            dom,
            cod,
            obj_map,
            mor_map,
        })
    }

    pub fn from_names(
        dom: &FinMulticategory,
        cod: &FinMulticategory,
        objs: &[(&str, &str)],
        mors: &[(&str, &str)],
    ) -> Result<Self, MultiError> {
        let mut obj_map = vec![usize::MAX; dom.objs.len()];
        for (a, b) in objs {
            obj_map[dom.objs.lookup(a)?] = cod.objs.lookup(b)?;
        }
        let mut mor_map = vec![usize::MAX; dom.mors.len()];
        for (a, b) in mors {
            mor_map[dom.mors.lookup(a)?] = cod.mors.lookup(b)?;
        }
        for o in 0..dom.objs.len() {
            if mor_map[dom.unit[o]] == usize::MAX && obj_map[o] != usize::MAX {
                mor_map[dom.unit[o]] = cod.unit[obj_map[o]];
            }
        }
        MultiFunctor::new(dom.clone(), cod.clone(), obj_map, mor_map)
    }

    pub fn identity(x: &FinMulticategory) -> Self {
        MultiFunctor {
            dom: x.clone(),
            cod: x.clone(),
            obj_map: (0..x.objs.len()).collect(),
            mor_map: (0..x.mors.len()).collect(),
        }
    }

    pub fn from_functor(f: &FinFunctor) -> Self {
        MultiFunctor::new(
            FinMulticategory::from_category(f.dom()),
            FinMulticategory::from_category(f.cod()),
            f.obj_table().to_vec(),
            f.mor_table().to_vec(),
        )
        .expect("functors are unary multifunctors")
    }

    pub fn then(&self, other: &MultiFunctor) -> Result<MultiFunctor, MultiError> {
        if self.cod != other.dom {
            return Err(MultiError::Functor("composite of non-composable multifunctors".into()));
        }
        Ok(MultiFunctor {
            dom: self.dom.clone(),
            cod: other.cod.clone(),
            obj_map: self.obj_map.iter().map(|&o| other.obj_map[o]).collect(),
            mor_map: self.mor_map.iter().map(|&m| other.mor_map[m]).collect(),
        })
    }

    pub fn dom(&self) -> &FinMulticategory {
        &self.dom
    }

    pub fn cod(&self) -> &FinMulticategory {
        &self.cod
    }

    fn map_elem(&self, e: &ChainElem) -> ChainElem {
        let m = |l: &Vec<usize>| l.iter().map(|&g| self.mor_map[g]).collect::<Vec<_>>();
        match e {
            ChainElem::Two { f, list } => ChainElem::Two {
                f: self.mor_map[*f],
                list: m(list),
            },
            ChainElem::Three { f, list, inner } => ChainElem::Three {
                f: self.mor_map[*f],
                list: m(list),
                inner: inner.iter().map(m).collect(),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiReport {
    /// surjectivity on objects (implied by level 1)
    pub objects: Certified,
    /// levels 1 (morphisms), 2 (`x₂`), 3 (`x₃`)
    pub levels: Vec<(usize, Certified)>,
}

impl MultiReport {
    pub fn sufficient(&self) -> bool {
        self.levels.iter().all(|(_, c)| c.holds)
    }

    pub fn first_failure(&self) -> Option<(usize, &Certified)> {
        self.levels.iter().find(|(_, c)| !c.holds).map(|(n, c)| (*n, c))
    }
}

fn surjective_on<T: Eq + std::hash::Hash>(
    up: impl Iterator<Item = T>,
    down: &[T],
    render: impl Fn(&T) -> String,
) -> Certified {
    let hit: std::collections::HashSet<T> = up.collect();
    match down.iter().find(|d| !hit.contains(d)) {
        Some(d) => Certified::fails(format!("misses {}", render(d))),
        None => Certified::holds(format!("all {} hit", down.len())),
    }
}

/// Surjectivity of `p` on morphisms, `x₂` and `x₃`: sufficient for
/// effective descent. A failure does not show that `p` is not effective.
pub fn classify_multifunctor(p: &MultiFunctor) -> MultiReport {
    let (d, c) = (&p.dom, &p.cod);
    let objects = surjective_on(
        p.obj_map.iter().copied(),
        &(0..c.objs.len()).collect::<Vec<_>>(),
        |&o| c.objs.atom(o).to_string(),
    );
    let level1 = surjective_on(
        p.mor_map.iter().copied(),
        &(0..c.mors.len()).collect::<Vec<_>>(),
        |&m| c.mors.atom(m).to_string(),
    );
    let level = |n: usize| {
        let up = chain_object(d, n).expect("n is 2 or 3");
        let down = chain_object(c, n).expect("n is 2 or 3");
        surjective_on(up.elements.iter().map(|e| p.map_elem(e)), &down.elements, |e| {
            c.render(e)
        })
    };
    MultiReport {
        objects,
        levels: vec![(1, level1), (2, level(2)), (3, level(3))],
    }
}

/// Surjectivity on morphisms forces surjectivity on objects, since every
/// object is the codomain of its unit. A failure here means the input was
/// not a reflexive graph.
pub fn reflexive_graph_transfer(p: &MultiFunctor) -> Certified {
    let r = classify_multifunctor(p);
    if !r.levels[0].1.holds {
        return Certified::holds("vacuous: not surjective on morphisms");
    }
    if r.objects.holds {
        Certified::holds("surjective on morphisms and on objects")
    } else {
        Certified::fails(format!("surjective on morphisms but {}", r.objects.certificate))
    }
}

/// A morphism of categories over a base `C` (`over_cod ∘ f = over_dom`) is
/// classified by its underlying functor.
pub fn graded_reduction(
    f: &FinFunctor,
    over_dom: &FinFunctor,
    over_cod: &FinFunctor,
) -> Result<ChainReport, MultiError> {
    let composite = f.then(over_cod)?;
    if composite != *over_dom {
        return Err(MultiError::TriangleFails);
    }
    Ok(chain_report(f))
}

/// Chain check on user-supplied chain data: `levels[k]` is the induced map
/// on `(k+1)`-chains.
pub fn enhanced_chain_check(levels: &[FinFunction]) -> Vec<(usize, Certified)> {
    levels
        .iter()
        .enumerate()
        .map(|(k, f)| {
            let c = match f.first_unhit() {
                Some(j) => Certified::fails(format!("misses {}", f.cod().atom(j))),
                None => Certified::holds(format!("all {} hit", f.cod().len())),
            };
            (k + 1, c)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{chain_surjective, validate_category, RawCategory};

    pub(crate) fn id_k() -> FinMulticategory {
        validate_multicategory(
            &RawMulticategory::new(&["*"])
                .morphism("id", &["*"], "*")
                .morphism("k", &[], "*")
                .compose("id", &["id"], "id")
                .compose("id", &["k"], "k")
                .compose("k", &[], "k")
                .tap_units(&[("*", "id")]),
        )
        .unwrap()
    }

    trait TapUnits {
        fn tap_units(self, units: &[(&str, &str)]) -> Self;
    }

    impl TapUnits for RawMulticategory {
        fn tap_units(mut self, units: &[(&str, &str)]) -> Self {
            self.units = units.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
            self
        }
    }

    #[test]
    fn id_k_chain_objects() {
        let x = id_k();
        assert_eq!(chain_object(&x, 2).unwrap().len(), 3);
        assert_eq!(chain_object(&x, 3).unwrap().len(), 4);
        assert_eq!(x3_size_via_pullback(&x), 4);
        assert!(chain_object(&x, 4).is_err());
    }

    #[test]
    fn missing_composite_is_named() {
        let raw = RawMulticategory::new(&["*"])
            .morphism("id", &["*"], "*")
            .morphism("k", &[], "*")
            .compose("id", &["id"], "id")
            .compose("k", &[], "k")
            .tap_units(&[("*", "id")]);
        assert_eq!(
            validate_multicategory(&raw).unwrap_err().to_string(),
            "comp undefined at ([k],id)"
        );
    }

    #[test]
    fn monoids_as_unary_multicategories() {
        // Z/2 as a one-object multicategory
        let raw = RawMulticategory::new(&["*"])
            .morphism("e", &["*"], "*")
            .morphism("s", &["*"], "*")
            .compose("e", &["e"], "e")
            .compose("e", &["s"], "s")
            .compose("s", &["e"], "s")
            .compose("s", &["s"], "e")
            .tap_units(&[("*", "e")]);
        let x = validate_multicategory(&raw).unwrap();
        assert_eq!(chain_object(&x, 2).unwrap().len(), 4);
        // s·e = e breaks the unit law
        let bad = RawMulticategory::new(&["*"])
            .morphism("e", &["*"], "*")
            .morphism("s", &["*"], "*")
            .compose("e", &["e"], "e")
            .compose("e", &["s"], "s")
            .compose("s", &["e"], "e")
            .compose("s", &["s"], "e")
            .tap_units(&[("*", "e")]);
        assert_eq!(
            validate_multicategory(&bad).unwrap_err().to_string(),
            "right unit law fails at s"
        );
    }

    #[test]
    fn with_units_fills_unit_laws() {
        let raw = RawMulticategory::new(&["a", "b"])
            .morphism("m", &["a", "a"], "b")
            .with_units();
        let x = validate_multicategory(&raw).unwrap();
        assert_eq!(x.morphisms().len(), 3);
        assert_eq!(chain_object(&x, 2).unwrap().len(), 4);
    }

    #[test]
    fn free_monoid_is_cartesian_on_small_cospans() {
        let f = FinFunction::of(&["0", "1"], &["*"], &[0, 0]);
        assert!(free_monoid_pullback_check(&f, &f, 0).unwrap().holds);
        let id = FinFunction::identity(&FinSet::of(&["a", "b"]));
        assert!(free_monoid_pullback_check(&id, &id, 2).unwrap().holds);
        // a cospan whose pullback has 5 elements
        let f = FinFunction::of(&["a", "b", "c"], &["x", "y"], &[0, 0, 1]);
        let g = FinFunction::of(&["p", "q", "r"], &["x", "y"], &[0, 1, 1]);
        assert_eq!(finbase::pullback(&f, &g).unwrap().apex.len(), 4);
        let g = FinFunction::of(&["p", "q", "r"], &["x", "y"], &[0, 0, 1]);
        assert_eq!(finbase::pullback(&f, &g).unwrap().apex.len(), 5);
        let r = free_monoid_pullback_check(&f, &g, 2).unwrap();
        assert!(r.holds);
        assert!(r.certificate.starts_with("31 lists"), "{}", r.certificate);
    }

    #[test]
    fn collapsing_parallel_constants() {
        let dom = validate_multicategory(
            &RawMulticategory::new(&["*"])
                .morphism("a", &[], "*")
                .morphism("b", &[], "*")
                .with_units(),
        )
        .unwrap();
        let cod = id_k();
        let p = MultiFunctor::from_names(&dom, &cod, &[("*", "*")], &[("a", "k"), ("b", "k")]).unwrap();
        let r = classify_multifunctor(&p);
        assert!(r.sufficient(), "{r:?}");
        assert!(reflexive_graph_transfer(&p).holds);
    }

    #[test]
    fn unary_inclusion_misses_a_composable_pair() {
        let chain = validate_category(
            &RawCategory::new(&["0", "1", "2"])
                .morphism("f", "0", "1")
                .morphism("g", "1", "2")
                .morphism("gf", "0", "2")
                .compose("g", "f", "gf")
                .with_identities(),
        )
        .unwrap();
        let pieces = validate_category(
            &RawCategory::new(&["0", "1", "1'", "2'", "0''", "2''"])
                .morphism("f", "0", "1")
                .morphism("g", "1'", "2'")
                .morphism("h", "0''", "2''")
                .with_identities(),
        )
        .unwrap();
        let functor =
            crate::fincat::FinFunctor::from_names(&pieces, &chain, &[("f", "f"), ("g", "g"), ("h", "gf")]).unwrap();
        let p = MultiFunctor::from_functor(&functor);
        let r = classify_multifunctor(&p);
        let (n, why) = r.first_failure().unwrap();
        assert_eq!(n, 2);
        assert_eq!(why.certificate, "misses ([f],g)");
        for n in 1..=3 {
            assert_eq!(r.levels[n - 1].1.holds, chain_surjective(&functor, n).unwrap().holds);
        }
    }

    #[test]
    fn graded_reduction_over_a_monoid() {
        let z2 = FinCategory::from_monoid(&["e", "s"], &[vec![0, 1], vec![1, 0]], 0).unwrap();
        let id = FinFunctor::identity(&z2);
        assert!(graded_reduction(&id, &id, &id).unwrap().sufficient());
        let one = FinCategory::from_monoid(&["e"], &[vec![0]], 0).unwrap();
        let to_one = FinFunctor::constant(&z2, &one, 0);
        // Z/2 → 1 over 1 is surjective on every chain level
        assert!(graded_reduction(&to_one, &to_one, &FinFunctor::identity(&one))
            .unwrap()
            .sufficient());
        let r = graded_reduction(&id, &to_one, &FinFunctor::constant(&z2, &z2, 0));
        assert!(r.is_err());
    }

    #[test]
    fn enhanced_checks_report_levels() {
        let onto = FinFunction::of(&["a", "b"], &["x"], &[0, 0]);
        let into = FinFunction::of(&["a"], &["x", "y"], &[0]);
        let r = enhanced_chain_check(&[onto, into]);
        assert!(r[0].1.holds);
        assert_eq!(r[1].1.certificate, "misses y");
    }

    #[test]
    fn raw_round_trip() {
        let x = id_k();
        assert_eq!(validate_multicategory(&x.to_raw()).unwrap(), x);
    }
}
