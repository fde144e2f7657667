//! Brute-force descent oracle over finite sets and finite posets.
//!
//! For a base morphism `p: E → B` this module builds the kernel pair, the
//! comparison functor from bundles over `B` to descent data over `E`, and
//! decides the three descent levels:
//!
//! * almost descent: `p` is a pullback-stable epimorphism;
//! * descent: `p` is a pullback-stable regular epimorphism;
//! * effective descent: additionally every descent datum is, up to
//!   isomorphism, the pullback of a bundle over `B`.
//!
//! Stability is tested against every base morphism into `B` from an object
//! with at most `stability_bound` elements. Effectiveness is tested against
//! every descent datum whose glued total has at most `bound` points.
//!
//! # Normal form of descent data
//!
//! Gluing isomorphisms are fiberwise bijections over the kernel pair, and
//! once reflexivity and transitivity hold every fiber over `x` is canonically
//! identified with the fiber over a chosen representative of `p⁻¹(p x)`.
//! A datum is therefore determined up to isomorphism by
//!
//! * a finite set `F_b` (of size `n_b`) for each `b` in the image of `p`, and
//! * a relation `R_(b,b') ⊆ F_b × F_b'` for each *lifted* 1-chain `b ≤ b'`
//!   (one with some `x ≤ y` upstairs over it),
//!
//! where each `R_(b,b)` is a partial order and `R_(b0,b1) ; R_(b1,b2) ⊆
//! R_(b0,b2)` along every lifted 2-chain. The total of the datum is
//! `{(x, s) | s ∈ F_(p x)}` ordered by `x ≤ y` and `s R t`. Enumeration and
//! isomorphism testing both run on this form; `Σ n_b` is the size measured
//! against `bound`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use itertools::Itertools;
use rayon::prelude::*;
use thiserror::Error;

use crate::finbase::{
    kernel_pair as set_kernel_pair, Atom, DescentClass, DescentLevel, FinFunction, FinSet, KernelPairData,
};
use crate::poset::{self, FinPoset, MonotoneMap};

/// The ambient category of the base morphism.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Base {
    FinSet,
    FinPoset,
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Base::FinSet => f.write_str("FinSet"),
            Base::FinPoset => f.write_str("FinPoset"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DescentError {
    #[error("a FinSet base morphism needs discrete domain and codomain")]
    NotDiscrete,
    #[error("bundle lives over {found}, expected {expected}")]
    WrongBase { expected: String, found: String },
    #[error("bundle projection does not start at its total object")]
    DetachedBundle,
}

/// A morphism `p: E → B` in one of the supported base categories.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseMorphism {
    base: Base,
    map: MonotoneMap,
}

impl BaseMorphism {
    pub fn new(base: Base, map: MonotoneMap) -> Result<Self, DescentError> {
        if base == Base::FinSet && !(map.dom().is_discrete() && map.cod().is_discrete()) {
            return Err(DescentError::NotDiscrete);
        }
        Ok(BaseMorphism { base, map })
    }

    pub fn set_function(f: &FinFunction) -> Self {
        BaseMorphism {
            base: Base::FinSet,
            map: MonotoneMap::discrete(f),
        }
    }

    pub fn poset_map(map: MonotoneMap) -> Self {
        BaseMorphism {
            base: Base::FinPoset,
            map,
        }
    }

    pub fn base(&self) -> Base {
        self.base
    }

    pub fn map(&self) -> &MonotoneMap {
        &self.map
    }

    pub fn dom(&self) -> &FinPoset {
        self.map.dom()
    }

    pub fn cod(&self) -> &FinPoset {
        self.map.cod()
    }

    /// Objects of the base with exactly `n` elements, up to isomorphism.
    fn objects_of_size(&self, n: usize) -> Vec<FinPoset> {
        match self.base {
            Base::FinSet => vec![FinPoset::discrete(FinSet::range(n))],
            Base::FinPoset => FinPoset::all_up_to_iso(n),
        }
    }
}

impl fmt::Display for BaseMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self.map, self.base)
    }
}

/// An object of the slice over some base object: `proj: total → base`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleMorphism {
    pub total: FinPoset,
    pub proj: MonotoneMap,
}

impl BundleMorphism {
    pub fn new(proj: MonotoneMap) -> Self {
        BundleMorphism {
            total: proj.dom().clone(),
            proj,
        }
    }

    pub fn identity(over: &FinPoset) -> Self {
        BundleMorphism::new(MonotoneMap::identity(over))
    }

    pub fn empty(over: &FinPoset) -> Self {
        let empty = FinPoset::discrete(FinSet::empty());
        BundleMorphism::new(MonotoneMap::new(empty, over.clone(), vec![]).expect("empty map is monotone"))
    }
}

impl fmt::Display for BundleMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {}", self.total, self.proj)
    }
}

/// Kernel pair of a base morphism with the componentwise order on pairs and
/// triples.
#[derive(Clone, Debug)]
pub struct KernelPair {
    pub data: KernelPairData,
    pub apex: FinPoset,
    pub triple_apex: FinPoset,
    pairs: Vec<(usize, usize)>,
    pair_index: HashMap<(usize, usize), usize>,
}

impl KernelPair {
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn index(&self, x: usize, y: usize) -> Option<usize> {
        self.pair_index.get(&(x, y)).copied()
    }
}

pub fn kernel_pair(p: &BaseMorphism) -> KernelPair {
    let data = set_kernel_pair(&p.map.underlying());
    let e = p.dom();
    let pairs: Vec<(usize, usize)> = (0..data.apex.len())
        .map(|k| (data.d1.apply(k), data.d0.apply(k)))
        .collect();
    let pair_index = pairs.iter().enumerate().map(|(k, &xy)| (xy, k)).collect();
    let n = pairs.len();
    let mut leq = vec![false; n * n];
    for (i, &(a, b)) in pairs.iter().enumerate() {
        for (j, &(c, d)) in pairs.iter().enumerate() {
            leq[i * n + j] = e.leq(a, c) && e.leq(b, d);
        }
    }
    let apex = FinPoset::from_matrix(data.apex.clone(), leq).expect("componentwise order");
    let triples: Vec<[usize; 3]> = (0..data.triple_apex.len())
        .map(|t| {
            let (x0, x1) = pairs[data.triple_faces[2].apply(t)];
            let (_, x2) = pairs[data.triple_faces[0].apply(t)];
            [x0, x1, x2]
        })
        .collect();
    let m = triples.len();
    let mut tleq = vec![false; m * m];
    for (i, s) in triples.iter().enumerate() {
        for (j, t) in triples.iter().enumerate() {
            tleq[i * m + j] = (0..3).all(|c| e.leq(s[c], t[c]));
        }
    }
    let triple_apex = FinPoset::from_matrix(data.triple_apex.clone(), tleq).expect("componentwise order");
    KernelPair {
        data,
        apex,
        triple_apex,
        pairs,
        pair_index,
    }
}

/// A bundle over the domain of `p` with gluing isomorphisms over the kernel
/// pair.
///
/// `glue[k]` is the bijection over the apex element `k = (x, x')`: its
/// `i`-th entry is the image (an index into the bundle total) of the `i`-th
/// element of the fiber over `x`, fibers listed in increasing index order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescentDatum {
    pub bundle: BundleMorphism,
    pub glue: Vec<Vec<usize>>,
}

impl DescentDatum {
    fn fibers(&self, over: usize) -> Vec<Vec<usize>> {
        let mut fibers = vec![Vec::new(); over];
        for v in 0..self.bundle.total.len() {
            fibers[self.bundle.proj.apply(v)].push(v);
        }
        fibers
    }
}

/// The first equation a candidate descent datum fails.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DatumViolation {
    #[error("bundle is not over the domain of p")]
    WrongBundle,
    #[error("total object is not discrete")]
    NotDiscrete,
    #[error("gluing has {found} components, kernel pair has {expected}")]
    GlueShape { expected: usize, found: usize },
    #[error("gluing is not a bijection at {0}")]
    NotBijective(Atom),
    #[error("gluing is not an order isomorphism between {0} and {1}")]
    NotOrderIso(Atom, Atom),
    #[error("reflexivity fails at {0}")]
    Reflexivity(Atom),
    #[error("transitivity fails at {0}")]
    Transitivity(Atom),
}

/// Precomputed combinatorics of `p` used by the normal form.
struct Shape {
    e_len: usize,
    b_len: usize,
    p: Vec<usize>,
    image: Vec<bool>,
    rep: Vec<Option<usize>>,
    /// lifted 1-chains `(b, b')`, identity pairs included, sorted
    slots: Vec<(usize, usize)>,
    slot_index: HashMap<(usize, usize), usize>,
    /// one chosen lift `(x, y)` per slot
    slot_lift: Vec<(usize, usize)>,
    /// lifted 2-chains as slot triples `(s01, s12, s02)`
    triangles: Vec<(usize, usize, usize)>,
}

impl Shape {
    fn new(p: &BaseMorphism) -> Self {
        let e = p.dom();
        let e_len = e.len();
        let b_len = p.cod().len();
        let map = p.map.table().to_vec();
        let mut image = vec![false; b_len];
        let mut rep = vec![None; b_len];
        for x in 0..e_len {
            image[map[x]] = true;
            rep[map[x]].get_or_insert(x);
        }
        let mut lifts: BTreeMap<(usize, usize), (usize, usize)> = BTreeMap::new();
        for x in 0..e_len {
            for y in 0..e_len {
                if e.leq(x, y) {
                    lifts.entry((map[x], map[y])).or_insert((x, y));
                }
            }
        }
        let slots: Vec<(usize, usize)> = lifts.keys().copied().collect();
        let slot_lift: Vec<(usize, usize)> = lifts.values().copied().collect();
        let slot_index: HashMap<(usize, usize), usize> = slots.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let mut tri = std::collections::BTreeSet::new();
        for x in 0..e_len {
            for y in 0..e_len {
                if !e.leq(x, y) {
                    continue;
                }
                for z in 0..e_len {
                    if e.leq(y, z) {
                        let (b0, b1, b2) = (map[x], map[y], map[z]);
                        tri.insert((slot_index[&(b0, b1)], slot_index[&(b1, b2)], slot_index[&(b0, b2)]));
                    }
                }
            }
        }
        Shape {
            e_len,
            b_len,
            p: map,
            image,
            rep,
            slots,
            slot_index,
            slot_lift,
            triangles: tri.into_iter().collect(),
        }
    }
}

/// A descent datum in normal form.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct NormalDatum {
    sizes: Vec<usize>,
    /// row-major `n_b × n_b'` relation per slot
    rels: Vec<Vec<bool>>,
}

impl NormalDatum {
    fn rel(&self, shape: &Shape, slot: usize, s: usize, t: usize) -> bool {
        let (_, b1) = shape.slots[slot];
        self.rels[slot][s * self.sizes[b1] + t]
    }

    /// Relabelling-invariant key: equal iff the data are isomorphic.
    fn canonical_key(&self, shape: &Shape) -> Vec<u8> {
        // per-element invariants: degrees in every slot touching its fiber
        let mut cells_per_fiber: Vec<Vec<Vec<usize>>> = Vec::with_capacity(shape.b_len);
        for b in 0..shape.b_len {
            let n = self.sizes[b];
            let mut inv: Vec<(Vec<usize>, usize)> = (0..n)
                .map(|s| {
                    let mut sig = Vec::new();
                    for (k, &(b0, b1)) in shape.slots.iter().enumerate() {
                        if b0 == b {
                            sig.push((0..self.sizes[b1]).filter(|&t| self.rel(shape, k, s, t)).count());
                        }
                        if b1 == b {
                            sig.push((0..self.sizes[b0]).filter(|&t| self.rel(shape, k, t, s)).count());
                        }
                    }
                    (sig, s)
                })
                .collect();
            inv.sort();
            let cells: Vec<Vec<usize>> = inv
                .chunk_by(|a, b| a.0 == b.0)
                .map(|chunk| chunk.iter().map(|(_, s)| *s).collect())
                .collect();
            cells_per_fiber.push(cells);
        }
        // refine exhaustively inside cells
        let cell_perms: Vec<Vec<Vec<usize>>> = cells_per_fiber
            .iter()
            .flatten()
            .map(|cell| cell.iter().copied().permutations(cell.len()).collect())
            .collect();
        let mut best: Option<Vec<u8>> = None;
        let choices = if cell_perms.is_empty() {
            vec![Vec::new()]
        } else {
            cell_perms.iter().map(|v| v.iter()).multi_cartesian_product().collect()
        };
        for choice in choices {
            let mut labels: Vec<Vec<usize>> = Vec::with_capacity(shape.b_len);
            let mut it = choice.into_iter();
            for cells in &cells_per_fiber {
                let mut order = Vec::new();
                for _ in cells {
                    order.extend(it.next().expect("one permutation per cell").iter().copied());
                }
                labels.push(order);
            }
            let mut key: Vec<u8> = self.sizes.iter().map(|&n| n as u8).collect();
            for (k, &(b0, b1)) in shape.slots.iter().enumerate() {
                for &s in &labels[b0] {
                    for &t in &labels[b1] {
                        key.push(self.rel(shape, k, s, t) as u8);
                    }
                }
            }
            if best.as_ref().is_none_or(|b| key < *b) {
                best = Some(key);
            }
        }
        best.expect("at least one labelling")
    }

    fn materialize(&self, p: &BaseMorphism, shape: &Shape, kp: &KernelPair) -> DescentDatum {
        let e = p.dom();
        let mut elems: Vec<(usize, usize)> = Vec::new();
        for x in 0..shape.e_len {
            for s in 0..self.sizes[shape.p[x]] {
                elems.push((x, s));
            }
        }
        let index: HashMap<(usize, usize), usize> = elems.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let atoms = elems
            .iter()
            .map(|&(x, s)| Atom::pair(e.elements().atom(x), &Atom::new(s.to_string())));
        let total_set = FinSet::new(atoms).expect("distinct pairs");
        let n = elems.len();
        let mut leq = vec![false; n * n];
        for (i, &(x, s)) in elems.iter().enumerate() {
            for (j, &(y, t)) in elems.iter().enumerate() {
                if e.leq(x, y) {
                    let k = shape.slot_index[&(shape.p[x], shape.p[y])];
                    leq[i * n + j] = self.rel(shape, k, s, t);
                }
            }
        }
        let total = FinPoset::from_matrix(total_set, leq).expect("normal forms describe posets");
        let proj = MonotoneMap::new(total.clone(), e.clone(), elems.iter().map(|v| v.0).collect())
            .expect("projection is monotone");
        let glue = kp
            .pairs()
            .iter()
            .map(|&(x, y)| (0..self.sizes[shape.p[x]]).map(|s| index[&(y, s)]).collect())
            .collect();
        DescentDatum {
            bundle: BundleMorphism { total, proj },
            glue,
        }
    }

    /// Normal form of a validated datum.
    fn of_datum(d: &DescentDatum, shape: &Shape, kp: &KernelPair) -> NormalDatum {
        let fibers = d.fibers(shape.e_len);
        let mut sizes = vec![0; shape.b_len];
        // label of each total element: its position in the representative fiber
        let mut label = vec![0usize; d.bundle.total.len()];
        for b in 0..shape.b_len {
            if let Some(r) = shape.rep[b] {
                sizes[b] = fibers[r].len();
            }
        }
        for x in 0..shape.e_len {
            let r = shape.rep[shape.p[x]].expect("x lies over the image");
            let k = kp.index(x, r).expect("same fiber");
            for (i, &v) in fibers[x].iter().enumerate() {
                let image = d.glue[k][i];
                label[v] = fibers[r]
                    .iter()
                    .position(|&w| w == image)
                    .expect("glue lands in the fiber");
            }
        }
        let rels = shape
            .slots
            .iter()
            .zip(&shape.slot_lift)
            .map(|(&(b0, b1), &(x, y))| {
                let mut rel = vec![false; sizes[b0] * sizes[b1]];
                for &v in &fibers[x] {
                    for &w in &fibers[y] {
                        if d.bundle.total.leq(v, w) {
                            rel[label[v] * sizes[b1] + label[w]] = true;
                        }
                    }
                }
                rel
            })
            .collect();
        NormalDatum { sizes, rels }
    }

    /// Normal form of the comparison datum of a bundle over `cod(p)`.
    fn of_bundle(f: &BundleMorphism, shape: &Shape) -> NormalDatum {
        let mut fibers = vec![Vec::new(); shape.b_len];
        for w in 0..f.total.len() {
            fibers[f.proj.apply(w)].push(w);
        }
        let sizes: Vec<usize> = (0..shape.b_len)
            .map(|b| if shape.image[b] { fibers[b].len() } else { 0 })
            .collect();
        let rels = shape
            .slots
            .iter()
            .map(|&(b0, b1)| {
                let mut rel = Vec::with_capacity(sizes[b0] * sizes[b1]);
                for &v in &fibers[b0] {
                    for &w in &fibers[b1] {
                        rel.push(f.total.leq(v, w));
                    }
                }
                rel
            })
            .collect();
        NormalDatum { sizes, rels }
    }
}

/// Pulls `f` back along `p` and equips it with the canonical gluing
/// `(w, x) ↦ (w, x')`.
pub fn comparison_datum(p: &BaseMorphism, f: &BundleMorphism) -> Result<DescentDatum, DescentError> {
    if f.proj.cod() != p.cod() {
        return Err(DescentError::WrongBase {
            expected: p.cod().to_string(),
            found: f.proj.cod().to_string(),
        });
    }
    if f.proj.dom() != &f.total {
        return Err(DescentError::DetachedBundle);
    }
    let pb = poset::pullback(&f.proj, &p.map).expect("codomains agree");
    let total = pb.apex.clone();
    let proj = pb.proj_g.clone();
    let elems: Vec<(usize, usize)> = (0..total.len())
        .map(|i| (pb.proj_f.apply(i), pb.proj_g.apply(i)))
        .collect();
    let index: HashMap<(usize, usize), usize> = elems.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let kp = kernel_pair(p);
    let mut fibers = vec![Vec::new(); p.dom().len()];
    for (i, &(_, x)) in elems.iter().enumerate() {
        fibers[x].push(i);
    }
    let glue = kp
        .pairs()
        .iter()
        .map(|&(x, y)| fibers[x].iter().map(|&i| index[&(elems[i].0, y)]).collect())
        .collect();
    Ok(DescentDatum {
        bundle: BundleMorphism { total, proj },
        glue,
    })
}

/// Checks that `d` is a descent datum for `p`: the gluing is a fiberwise
/// bijection forming an order isomorphism `d1*(a) ≅ d0*(a)`, restricts to
/// the identity on the diagonal, and satisfies the cocycle condition on
/// triples.
pub fn validate_descent_datum(p: &BaseMorphism, d: &DescentDatum) -> Result<(), DatumViolation> {
    let e = p.dom();
    if d.bundle.proj.cod() != e || d.bundle.proj.dom() != &d.bundle.total {
        return Err(DatumViolation::WrongBundle);
    }
    if p.base == Base::FinSet && !d.bundle.total.is_discrete() {
        return Err(DatumViolation::NotDiscrete);
    }
    let kp = kernel_pair(p);
    let apex_atoms = &kp.data.apex;
    if d.glue.len() != kp.pairs.len() {
        return Err(DatumViolation::GlueShape {
            expected: kp.pairs.len(),
            found: d.glue.len(),
        });
    }
    let fibers = d.fibers(e.len());
    let total = &d.bundle.total;
    let image_of = |k: usize, v: usize| -> usize {
        let (x, _) = kp.pairs[k];
        let i = fibers[x].iter().position(|&w| w == v).expect("v lies over x");
        d.glue[k][i]
    };

    for (k, &(x, y)) in kp.pairs.iter().enumerate() {
        let g = &d.glue[k];
        let mut seen = vec![false; total.len()];
        let ok = g.len() == fibers[x].len()
            && fibers[x].len() == fibers[y].len()
            && g.iter()
                .all(|&w| w < total.len() && d.bundle.proj.apply(w) == y && !std::mem::replace(&mut seen[w], true));
        if !ok {
            return Err(DatumViolation::NotBijective(apex_atoms.atom(k).clone()));
        }
    }
    for k in 0..kp.pairs.len() {
        for l in 0..kp.pairs.len() {
            if !kp.apex.leq(k, l) {
                continue;
            }
            let (x, _) = kp.pairs[k];
            let (y, _) = kp.pairs[l];
            for &v in &fibers[x] {
                for &w in &fibers[y] {
                    if total.leq(v, w) != total.leq(image_of(k, v), image_of(l, w)) {
                        return Err(DatumViolation::NotOrderIso(
                            apex_atoms.atom(k).clone(),
                            apex_atoms.atom(l).clone(),
                        ));
                    }
                }
            }
        }
    }
    for x in 0..e.len() {
        let k = kp.index(x, x).expect("diagonal");
        if d.glue[k] != fibers[x] {
            return Err(DatumViolation::Reflexivity(apex_atoms.atom(k).clone()));
        }
    }
    let faces = &kp.data.triple_faces;
    for t in 0..kp.data.triple_apex.len() {
        let (k01, k12, k02) = (faces[2].apply(t), faces[0].apply(t), faces[1].apply(t));
        let (x0, _) = kp.pairs[k01];
        for &v in &fibers[x0] {
            if image_of(k12, image_of(k01, v)) != image_of(k02, v) {
                return Err(DatumViolation::Transitivity(kp.data.triple_apex.atom(t).clone()));
            }
        }
    }
    Ok(())
}

/// All partial orders on `{0..n}` as row-major matrices.
fn partial_orders(n: usize) -> Vec<Vec<bool>> {
    let off: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|(i, j)| i != j)
        .collect();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << off.len()) {
        let mut m = vec![false; n * n];
        for i in 0..n {
            m[i * n + i] = true;
        }
        for (k, &(i, j)) in off.iter().enumerate() {
            if mask >> k & 1 == 1 {
                m[i * n + j] = true;
            }
        }
        let anti = off.iter().all(|&(i, j)| !(m[i * n + j] && m[j * n + i]));
        let trans = (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| !(m[i * n + j] && m[j * n + k]) || m[i * n + k])));
        if anti && trans {
            out.push(m);
        }
    }
    out
}

fn compose_within(rels: &[Vec<bool>], sizes: &[usize], slots: &[(usize, usize)], tri: (usize, usize, usize)) -> bool {
    let (s01, s12, s02) = tri;
    let (b0, b1) = slots[s01];
    let (_, b2) = slots[s12];
    let (n0, n1, n2) = (sizes[b0], sizes[b1], sizes[b2]);
    for a in 0..n0 {
        for m in 0..n1 {
            if !rels[s01][a * n1 + m] {
                continue;
            }
            for c in 0..n2 {
                if rels[s12][m * n2 + c] && !rels[s02][a * n2 + c] {
                    return false;
                }
            }
        }
    }
    true
}

fn enumerate_normal(p: &BaseMorphism, shape: &Shape, bound: usize) -> Vec<NormalDatum> {
    let image: Vec<usize> = (0..shape.b_len).filter(|&b| shape.image[b]).collect();
    let mut size_vectors = Vec::new();
    let mut cur = vec![0usize; shape.b_len];
    fn sizes_rec(i: usize, left: usize, image: &[usize], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == image.len() {
            out.push(cur.clone());
            return;
        }
        for n in 0..=left {
            cur[image[i]] = n;
            sizes_rec(i + 1, left - n, image, cur, out);
        }
        cur[image[i]] = 0;
    }
    sizes_rec(0, bound, &image, &mut cur, &mut size_vectors);

    // triangles become checkable once their largest slot is assigned
    let mut due: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); shape.slots.len()];
    for &t in &shape.triangles {
        due[t.0.max(t.1).max(t.2)].push(t);
    }
    let mut poset_cache: HashMap<usize, Vec<Vec<bool>>> = HashMap::new();
    let mut out: BTreeMap<Vec<u8>, NormalDatum> = BTreeMap::new();

    for sizes in size_vectors {
        let options: Vec<Vec<Vec<bool>>> = shape
            .slots
            .iter()
            .map(|&(b0, b1)| {
                let (n0, n1) = (sizes[b0], sizes[b1]);
                if b0 == b1 {
                    match p.base {
                        Base::FinSet => vec![identity_rel(n0)],
                        Base::FinPoset => poset_cache.entry(n0).or_insert_with(|| partial_orders(n0)).clone(),
                    }
                } else {
                    let bits = n0 * n1;
                    (0u64..(1u64 << bits))
                        .map(|mask| (0..bits).map(|k| mask >> k & 1 == 1).collect())
                        .collect()
                }
            })
            .collect();
        let mut rels: Vec<Vec<bool>> = vec![Vec::new(); shape.slots.len()];
        fn rec(
            k: usize,
            options: &[Vec<Vec<bool>>],
            due: &[Vec<(usize, usize, usize)>],
            sizes: &[usize],
            shape: &Shape,
            rels: &mut Vec<Vec<bool>>,
            out: &mut BTreeMap<Vec<u8>, NormalDatum>,
        ) {
            if k == options.len() {
                let nd = NormalDatum {
                    sizes: sizes.to_vec(),
                    rels: rels.clone(),
                };
                out.entry(nd.canonical_key(shape)).or_insert(nd);
                return;
            }
            for opt in &options[k] {
                rels[k] = opt.clone();
                if due[k].iter().all(|&t| compose_within(rels, sizes, &shape.slots, t)) {
                    rec(k + 1, options, due, sizes, shape, rels, out);
                }
            }
        }
        rec(0, &options, &due, &sizes, shape, &mut rels, &mut out);
    }
    out.into_values().collect()
}

fn identity_rel(n: usize) -> Vec<bool> {
    (0..n * n).map(|i| i / n.max(1) == i % n.max(1)).collect()
}

/// Every descent datum for `p` whose glued total has at most `bound`
/// points, one per isomorphism class, in canonical order.
pub fn enumerate_descent_data(p: &BaseMorphism, bound: usize) -> Vec<DescentDatum> {
    let shape = Shape::new(p);
    let kp = kernel_pair(p);
    enumerate_normal(p, &shape, bound)
        .iter()
        .map(|nd| nd.materialize(p, &shape, &kp))
        .collect()
}

/// Bundles over `cod(p)` with at most `bound` points, smallest first and then
/// in lexicographic order, indexed by the canonical key of their comparison
/// datum.
struct WitnessTable {
    first: HashMap<Vec<u8>, BundleMorphism>,
}

impl WitnessTable {
    fn build(p: &BaseMorphism, shape: &Shape, bound: usize) -> Self {
        let mut first = HashMap::new();
        for n in 0..=bound {
            for total in p.objects_of_size(n) {
                for proj in MonotoneMap::all(&total, p.cod()) {
                    let f = BundleMorphism::new(proj);
                    let key = NormalDatum::of_bundle(&f, shape).canonical_key(shape);
                    first.entry(key).or_insert(f);
                }
            }
        }
        WitnessTable { first }
    }
}

/// Searches bundles over `cod(p)` with at most `bound` points for one whose
/// comparison datum is isomorphic to `d`. `d` must validate.
pub fn essential_image_witness(p: &BaseMorphism, d: &DescentDatum, bound: usize) -> Option<BundleMorphism> {
    let shape = Shape::new(p);
    let kp = kernel_pair(p);
    let key = NormalDatum::of_datum(d, &shape, &kp).canonical_key(&shape);
    let fiber_sizes = NormalDatum::of_datum(d, &shape, &kp).sizes;
    for n in 0..=bound {
        for total in p.objects_of_size(n) {
            for proj in MonotoneMap::all(&total, p.cod()) {
                let f = BundleMorphism::new(proj);
                let nd = NormalDatum::of_bundle(&f, &shape);
                if nd.sizes == fiber_sizes && nd.canonical_key(&shape) == key {
                    return Some(f);
                }
            }
        }
    }
    None
}

/// Whether two validated descent data for `p` are isomorphic.
pub fn isomorphic_data(p: &BaseMorphism, a: &DescentDatum, b: &DescentDatum) -> bool {
    let shape = Shape::new(p);
    let kp = kernel_pair(p);
    NormalDatum::of_datum(a, &shape, &kp).canonical_key(&shape)
        == NormalDatum::of_datum(b, &shape, &kp).canonical_key(&shape)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleOptions {
    pub bound: usize,
    pub stability_bound: usize,
    pub parallel: bool,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            bound: 3,
            stability_bound: 3,
            parallel: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct OracleVerdict {
    pub base: Base,
    pub class: DescentClass,
    /// outcome of the pullback-stable epimorphism test
    pub faithful_witness: String,
    /// outcome of the pullback-stable regular epimorphism test
    pub full_witness: String,
    /// outcome of the essential image search
    pub image_witness: String,
    pub bound_used: usize,
    pub stability_bound: usize,
    pub data_checked: usize,
    /// a datum outside the essential image, when one was found
    pub counterexample: Option<DescentDatum>,
}

fn first_failure<T: Sync>(items: &[T], parallel: bool, f: impl Fn(&T) -> Option<String> + Sync) -> Option<String> {
    if parallel {
        items.par_iter().find_map_first(&f)
    } else {
        items.iter().find_map(f)
    }
}

/// Decides the descent level of `p` with the default options.
pub fn classify(p: &BaseMorphism, bound: usize, stability_bound: usize) -> OracleVerdict {
    classify_with(
        p,
        OracleOptions {
            bound,
            stability_bound,
            parallel: false,
        },
    )
}

pub fn classify_with(p: &BaseMorphism, opts: OracleOptions) -> OracleVerdict {
    let b = p.cod();
    let mut verdict = OracleVerdict {
        base: p.base,
        class: DescentClass {
            level: DescentLevel::NotAlmost,
            certificate: String::new(),
        },
        faithful_witness: String::new(),
        full_witness: "not reached".into(),
        image_witness: "not reached".into(),
        bound_used: opts.bound,
        stability_bound: opts.stability_bound,
        data_checked: 0,
        counterexample: None,
    };

    let tests: Vec<MonotoneMap> = (0..=opts.stability_bound)
        .flat_map(|n| p.objects_of_size(n))
        .flat_map(|t| MonotoneMap::all(&t, b))
        .collect();
    let pulled = |g: &MonotoneMap| poset::pullback(&p.map, g).expect("common codomain").proj_g;

    // almost descent: pullback-stable epimorphism (= surjection)
    let epi_failure = match p.map.underlying().first_unhit() {
        Some(j) => Some(format!("{} not hit", b.elements().atom(j))),
        None => first_failure(&tests, opts.parallel, |g| {
            let q = pulled(g);
            q.underlying()
                .first_unhit()
                .map(|t| format!("pullback along {} misses {}", g, q.cod().elements().atom(t)))
        }),
    };
    if let Some(why) = epi_failure {
        verdict.faithful_witness = why.clone();
        verdict.class.certificate = why;
        return verdict;
    }
    verdict.faithful_witness = format!(
        "surjective, and surjective after pullback along all {} test maps",
        tests.len()
    );
    verdict.class.level = DescentLevel::Almost;

    // descent: pullback-stable regular epimorphism
    let reg_failure = if !poset::is_regular_epi(&p.map) {
        Some("not the coequalizer of its kernel pair".to_string())
    } else {
        first_failure(&tests, opts.parallel, |g| {
            (!poset::is_regular_epi(&pulled(g)))
                .then(|| format!("pullback along {} from {} is not a regular epimorphism", g, g.dom()))
        })
    };
    if let Some(why) = reg_failure {
        verdict.full_witness = why.clone();
        verdict.class.certificate = why;
        return verdict;
    }
    verdict.full_witness = format!(
        "regular epimorphism, stable under pullback along all {} test maps",
        tests.len()
    );
    verdict.class.level = DescentLevel::Descent;

    if p.map.is_isomorphism() {
        verdict.image_witness = "isomorphism".into();
        verdict.class = DescentClass {
            level: DescentLevel::Effective,
            certificate: "isomorphism".into(),
        };
        return verdict;
    }

    // effective descent: every bounded datum lies in the essential image
    let shape = Shape::new(p);
    let kp = kernel_pair(p);
    let table = WitnessTable::build(p, &shape, opts.bound);
    let data = enumerate_normal(p, &shape, opts.bound);
    verdict.data_checked = data.len();
    let missing = if opts.parallel {
        data.par_iter()
            .find_first(|nd| !table.first.contains_key(&nd.canonical_key(&shape)))
    } else {
        data.iter()
            .find(|nd| !table.first.contains_key(&nd.canonical_key(&shape)))
    };
    match missing {
        Some(nd) => {
            let datum = nd.materialize(p, &shape, &kp);
            let why = format!(
                "descent datum with total {} has no essential-image witness among bundles of size ≤ {}",
                datum.bundle.total, opts.bound
            );
            verdict.image_witness = why.clone();
            verdict.class.certificate = why;
            verdict.counterexample = Some(datum);
        }
        None => {
            verdict.image_witness = format!(
                "all {} descent data with at most {} glued points lie in the essential image",
                data.len(),
                opts.bound
            );
            verdict.class = match p.base {
                Base::FinSet => DescentClass {
                    level: DescentLevel::Effective,
                    certificate: format!(
                        "surjection of finite sets; {} bounded data confirmed in the essential image",
                        data.len()
                    ),
                },
                Base::FinPoset => DescentClass {
                    level: DescentLevel::EffectiveUpToBound(opts.bound),
                    certificate: format!(
                        "no descent datum outside the essential image among {} data with at most {} glued points",
                        data.len(),
                        opts.bound
                    ),
                },
            };
        }
    }
    verdict
}

/// Direct check of the comparison functor on bundles with at most `bound`
/// points: faithfulness and fullness on hom-sets, computed from actual
/// pullbacks rather than from the pullback-stability characterization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComparisonProfile {
    pub faithful: Result<(), String>,
    pub full: Result<(), String>,
    pub bundles: usize,
}

pub fn comparison_functor_check(p: &BaseMorphism, bound: usize) -> ComparisonProfile {
    let b = p.cod();
    let bundles: Vec<BundleMorphism> = (0..=bound)
        .flat_map(|n| p.objects_of_size(n))
        .flat_map(|t| MonotoneMap::all(&t, b))
        .map(BundleMorphism::new)
        .collect();
    let image: Vec<bool> = {
        let mut hit = vec![false; b.len()];
        for x in 0..p.dom().len() {
            hit[p.map.apply(x)] = true;
        }
        hit
    };
    let pulled: Vec<DescentDatum> = bundles
        .iter()
        .map(|f| comparison_datum(p, f).expect("bundle over cod(p)"))
        .collect();
    // pullback element (w, x) ↦ index, per bundle
    let elem_index: Vec<HashMap<(usize, usize), usize>> = bundles
        .iter()
        .map(|f| {
            let pb = poset::pullback(&f.proj, &p.map).expect("same codomain");
            (0..pb.apex.len())
                .map(|i| ((pb.proj_f.apply(i), pb.proj_g.apply(i)), i))
                .collect()
        })
        .collect();

    let mut faithful = Ok(());
    let mut full = Ok(());
    for (i, f) in bundles.iter().enumerate() {
        for (j, g) in bundles.iter().enumerate() {
            // bundle morphisms f → g and their restriction over im p
            let over: Vec<usize> = (0..f.total.len()).filter(|&w| image[f.proj.apply(w)]).collect();
            let mut restrictions: HashMap<Vec<usize>, usize> = HashMap::new();
            for h in MonotoneMap::all(&f.total, &g.total) {
                if (0..f.total.len()).any(|w| g.proj.apply(h.apply(w)) != f.proj.apply(w)) {
                    continue;
                }
                let r: Vec<usize> = over.iter().map(|&w| h.apply(w)).collect();
                *restrictions.entry(r).or_default() += 1;
            }
            if faithful.is_ok() && restrictions.values().any(|&c| c > 1) {
                faithful = Err(format!(
                    "two bundle morphisms {} → {} have the same pullback",
                    f.total, g.total
                ));
            }
            if full.is_err() {
                continue;
            }
            // datum morphisms: fiberwise maps over im p, tested on the pullbacks
            let choices: Vec<Vec<usize>> = over
                .iter()
                .map(|&w| {
                    (0..g.total.len())
                        .filter(|&v| g.proj.apply(v) == f.proj.apply(w))
                        .collect()
                })
                .collect();
            let candidates: Vec<Vec<usize>> = if choices.is_empty() {
                vec![Vec::new()]
            } else {
                choices
                    .iter()
                    .map(|c| c.iter().copied())
                    .multi_cartesian_product()
                    .collect()
            };
            let (src, dst) = (&pulled[i].bundle.total, &pulled[j].bundle.total);
            let src_elems: Vec<(usize, usize)> = elem_index[i]
                .iter()
                .map(|(&k, &v)| (v, k))
                .sorted()
                .map(|(_, k)| k)
                .collect();
            for cand in candidates {
                let h_of = |w: usize| cand[over.iter().position(|&o| o == w).expect("w over the image")];
                let image_idx: Vec<usize> = src_elems.iter().map(|&(w, x)| elem_index[j][&(h_of(w), x)]).collect();
                let monotone = (0..src.len())
                    .all(|a| (0..src.len()).all(|c| !src.leq(a, c) || dst.leq(image_idx[a], image_idx[c])));
                if monotone && !restrictions.contains_key(&cand) {
                    full = Err(format!(
                        "descent-data morphism between pullbacks of {} and {} is not the pullback of a bundle morphism",
                        f.total, g.total
                    ));
                    break;
                }
            }
        }
    }
    ComparisonProfile {
        faithful,
        full,
        bundles: bundles.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn collapse2() -> BaseMorphism {
        BaseMorphism::set_function(&FinFunction::of(&["0", "1"], &["*"], &[0, 0]))
    }

    /// (a'≤b') ⊔ (b''≤c'') → (a≤b≤c)
    fn split_chain() -> BaseMorphism {
        let e = FinPoset::of(&["a'", "b'", "b''", "c''"], &[("a'", "b'"), ("b''", "c''")]);
        let b = FinPoset::chain(&["a", "b", "c"]);
        BaseMorphism::poset_map(MonotoneMap::of(&e, &b, &[0, 1, 1, 2]))
    }

    /// the zigzag b1 > a' < c' > b2 onto a≤b≤c: lifts every 1-chain, not a≤b≤c
    fn zigzag() -> BaseMorphism {
        let e = FinPoset::of(&["a'", "b1", "c'", "b2"], &[("a'", "b1"), ("a'", "c'"), ("b2", "c'")]);
        let b = FinPoset::chain(&["a", "b", "c"]);
        BaseMorphism::poset_map(MonotoneMap::of(&e, &b, &[0, 1, 2, 1]))
    }

    #[test]
    fn kernel_pair_examples() {
        let id = BaseMorphism::set_function(&FinFunction::identity(&FinSet::of(&["a", "b"])));
        assert_eq!(kernel_pair(&id).pairs().len(), 2);
        let k = kernel_pair(&collapse2());
        assert_eq!(k.data.apex.len(), 4);
        assert_eq!(k.data.triple_apex.len(), 8);
        // pairs with equal image: a'; b',b'' (four ordered pairs); c''
        assert_eq!(kernel_pair(&split_chain()).pairs().len(), 6);
    }

    #[test]
    fn comparison_of_identity_bundle_is_p() {
        let p = split_chain();
        let d = comparison_datum(&p, &BundleMorphism::identity(p.cod())).unwrap();
        assert_eq!(d.bundle.total.len(), p.dom().len());
        assert!(validate_descent_datum(&p, &d).is_ok());
        // the total is isomorphic to E over E
        let iso = d.bundle.proj.clone();
        assert!(iso.is_isomorphism());
    }

    #[test]
    fn comparison_on_collapse_glues_by_swap() {
        let p = collapse2();
        let d = comparison_datum(&p, &BundleMorphism::identity(p.cod())).unwrap();
        assert_eq!(d.bundle.total.len(), 2);
        let kp = kernel_pair(&p);
        let k01 = kp.index(0, 1).unwrap();
        // the single point over 0 is carried to the single point over 1
        assert_eq!(d.bundle.proj.apply(d.glue[k01][0]), 1);
        assert!(validate_descent_datum(&p, &d).is_ok());
    }

    #[test]
    fn comparison_of_empty_bundle() {
        let p = split_chain();
        let d = comparison_datum(&p, &BundleMorphism::empty(p.cod())).unwrap();
        assert!(d.bundle.total.is_empty());
        assert!(validate_descent_datum(&p, &d).is_ok());
    }

    #[test]
    fn comparison_rejects_foreign_bundle() {
        let p = collapse2();
        let other = FinPoset::chain(&["u", "v"]);
        assert!(comparison_datum(&p, &BundleMorphism::identity(&other)).is_err());
    }

    #[test]
    fn swapped_diagonal_breaks_reflexivity() {
        let p = collapse2();
        // two points over * pulled back: two points over each of 0, 1
        let two = FinPoset::discrete(FinSet::of(&["u", "v"]));
        let f = BundleMorphism::new(MonotoneMap::of(&two, p.cod(), &[0, 0]));
        let mut d = comparison_datum(&p, &f).unwrap();
        assert!(validate_descent_datum(&p, &d).is_ok());
        let kp = kernel_pair(&p);
        let k00 = kp.index(0, 0).unwrap();
        d.glue[k00].reverse();
        let err = validate_descent_datum(&p, &d).unwrap_err();
        assert_eq!(err, DatumViolation::Reflexivity(Atom::from("(0,0)")));
        assert_eq!(err.to_string(), "reflexivity fails at (0,0)");
    }

    #[test]
    fn identity_with_identity_glue_validates() {
        let p = BaseMorphism::poset_map(MonotoneMap::identity(&FinPoset::chain(&["a", "b"])));
        let d = DescentDatum {
            bundle: BundleMorphism::identity(p.dom()),
            glue: vec![vec![0], vec![1]],
        };
        assert!(validate_descent_datum(&p, &d).is_ok());
    }

    #[test]
    fn broken_cocycle_is_reported() {
        let p = BaseMorphism::set_function(&FinFunction::of(&["0", "1", "2"], &["*"], &[0, 0, 0]));
        let two = FinPoset::discrete(FinSet::of(&["u", "v"]));
        let f = BundleMorphism::new(MonotoneMap::of(&two, p.cod(), &[0, 0]));
        let mut d = comparison_datum(&p, &f).unwrap();
        let kp = kernel_pair(&p);
        // twist γ(0,1) and its inverse γ(1,0) consistently; γ(0,2) untouched
        for (x, y) in [(0, 1), (1, 0)] {
            d.glue[kp.index(x, y).unwrap()].reverse();
        }
        assert!(matches!(
            validate_descent_datum(&p, &d),
            Err(DatumViolation::Transitivity(_))
        ));
    }

    #[test]
    fn enumeration_for_identity_is_bundles() {
        let p = BaseMorphism::set_function(&FinFunction::identity(&FinSet::of(&["a", "b"])));
        // empty, one point over a, one point over b
        assert_eq!(enumerate_descent_data(&p, 1).len(), 3);
    }

    #[test]
    fn enumeration_for_empty_domain() {
        let p = BaseMorphism::set_function(&FinFunction::new(FinSet::empty(), FinSet::of(&["x"]), vec![]).unwrap());
        let data = enumerate_descent_data(&p, 3);
        assert_eq!(data.len(), 1);
        assert!(data[0].bundle.total.is_empty());
    }

    #[test]
    fn enumerated_data_validate_and_are_pairwise_distinct() {
        for p in [collapse2(), split_chain(), zigzag()] {
            let data = enumerate_descent_data(&p, 2);
            for d in &data {
                assert_eq!(validate_descent_datum(&p, d), Ok(()));
            }
            for (i, a) in data.iter().enumerate() {
                for b in &data[i + 1..] {
                    assert!(!isomorphic_data(&p, a, b));
                }
            }
        }
    }

    #[test]
    fn collapse_data_all_come_from_bundles() {
        let p = collapse2();
        let data = enumerate_descent_data(&p, 2);
        // glued fibers of size 0, 1, 2
        assert_eq!(data.len(), 3);
        for d in &data {
            let w = essential_image_witness(&p, d, 2).expect("surjections are effective");
            assert!(isomorphic_data(&p, &comparison_datum(&p, &w).unwrap(), d));
        }
    }

    #[test]
    fn bundle_fast_path_matches_materialized_pullback() {
        for p in [split_chain(), zigzag()] {
            let shape = Shape::new(&p);
            let kp = kernel_pair(&p);
            for n in 0..=3 {
                for t in FinPoset::all_up_to_iso(n) {
                    for proj in MonotoneMap::all(&t, p.cod()) {
                        let f = BundleMorphism::new(proj);
                        let via_datum = NormalDatum::of_datum(&comparison_datum(&p, &f).unwrap(), &shape, &kp);
                        let fast = NormalDatum::of_bundle(&f, &shape);
                        assert_eq!(via_datum.canonical_key(&shape), fast.canonical_key(&shape));
                    }
                }
            }
        }
    }

    #[test]
    fn oracle_on_set_surjection() {
        let v = classify(&collapse2(), 3, 3);
        assert_eq!(v.class.level, DescentLevel::Effective);
        assert!(v.data_checked > 0);
    }

    #[test]
    fn oracle_on_poset_identity() {
        let p = BaseMorphism::poset_map(MonotoneMap::identity(&FinPoset::chain(&["a", "b", "c"])));
        assert_eq!(classify(&p, 3, 3).class.level, DescentLevel::Effective);
    }

    #[test]
    fn split_chain_is_almost_but_not_descent() {
        // a ≤ c has no lift, so pulling back along {a ≤ c} is not regular
        let v = classify(&split_chain(), 3, 3);
        assert_eq!(v.class.level, DescentLevel::Almost);
        assert!(
            v.full_witness.contains("not a regular epimorphism"),
            "{}",
            v.full_witness
        );
        let profile = comparison_functor_check(&split_chain(), 2);
        assert!(profile.faithful.is_ok());
        assert!(profile.full.is_err());
    }

    #[test]
    fn split_chain_data_all_have_witnesses() {
        let p = split_chain();
        for d in enumerate_descent_data(&p, 3) {
            assert!(essential_image_witness(&p, &d, 3).is_some());
        }
    }

    #[test]
    fn zigzag_is_descent_not_effective() {
        let p = zigzag();
        let v = classify(&p, 3, 3);
        assert_eq!(v.class.level, DescentLevel::Descent);
        let bad = v.counterexample.expect("counterexample datum");
        assert_eq!(validate_descent_datum(&p, &bad), Ok(()));
        assert!(essential_image_witness(&p, &bad, 3).is_none());
        // the obstruction needs all three of a, b, c glued in
        assert_eq!(classify(&p, 2, 3).class.level, DescentLevel::EffectiveUpToBound(2));
    }

    #[test]
    fn parallel_and_sequential_agree() {
        for p in [collapse2(), split_chain(), zigzag()] {
            let seq = classify_with(
                &p,
                OracleOptions {
                    parallel: false,
                    ..Default::default()
                },
            );
            let par = classify_with(
                &p,
                OracleOptions {
                    parallel: true,
                    ..Default::default()
                },
            );
            assert_eq!(seq.class, par.class);
            assert_eq!(seq.counterexample, par.counterexample);
        }
    }

    #[test]
    fn non_surjective_is_not_almost() {
        let p = BaseMorphism::set_function(&FinFunction::of(&["0"], &["0", "1"], &[0]));
        let v = classify(&p, 3, 3);
        assert_eq!(v.class.level, DescentLevel::NotAlmost);
        assert_eq!(v.class.certificate, "1 not hit");
        let profile = comparison_functor_check(&p, 2);
        assert!(profile.faithful.is_err());
    }

    #[test]
    fn finset_base_requires_discrete() {
        let m = MonotoneMap::identity(&FinPoset::chain(&["a", "b"]));
        assert_eq!(BaseMorphism::new(Base::FinSet, m), Err(DescentError::NotDiscrete));
    }
}
