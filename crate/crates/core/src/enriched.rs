//! Categories enriched in a finite lattice `V` (with `⊗ = ∧`), and the
//! chain-cover criteria for descent of `V`-functors.
//!
//! For `V = 2` a `V`-category is a preorder and a `V`-functor a monotone
//! map, so the checks here specialize to the finite-poset 2-chain lifting
//! criterion.

use itertools::Itertools;
use thiserror::Error;

use crate::famv::{classify_cover_thin, effective_cover_check, Cover, FamError, FamMorphism, FamObject, LatticeV};
use crate::finbase::{Atom, DescentClass, DescentLevel, FinFunction, FinSet, SetError};
use crate::poset::{FinPoset, MonotoneMap};
use crate::Certified;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VCatError {
    #[error(transparent)]
    Set(#[from] SetError),
    #[error("hom table has {found} entries, expected {expected}")]
    HomShape { expected: usize, found: usize },
    #[error("hom value out of range")]
    HomRange,
    #[error("unit fails at {0}")]
    Unit(Atom),
    #[error("composition fails at ({0},{1},{2})")]
    Composition(Atom, Atom, Atom),
    #[error("V-functor between categories over different lattices")]
    LatticeMismatch,
    #[error("V-functor does not preserve hom({0},{1})")]
    NotFunctorial(Atom, Atom),
    #[error("chain length {0} outside 1..=3")]
    ChainLength(usize),
    #[error("unknown object index {0}")]
    UnknownObject(usize),
    #[error(transparent)]
    Fam(#[from] FamError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VCategory {
    lattice: LatticeV,
    objects: FinSet,
    hom: Vec<usize>,
}

/// Checks `hom(x,x) = ⊤` and `hom(x1,x2) ∧ hom(x0,x1) ≤ hom(x0,x2)`.
pub fn validate_vcategory(lattice: LatticeV, objects: FinSet, hom: Vec<usize>) -> Result<VCategory, VCatError> {
    let n = objects.len();
    if hom.len() != n * n {
        return Err(VCatError::HomShape {
            expected: n * n,
            found: hom.len(),
        });
    }
    if hom.iter().any(|&h| h >= lattice.len()) {
        return Err(VCatError::HomRange);
    }
    if let Some(x) = (0..n).find(|&x| hom[x * n + x] != lattice.top()) {
        return Err(VCatError::Unit(objects.atom(x).clone()));
    }
    for (a, b, c) in (0..n)
        .cartesian_product(0..n)
        .cartesian_product(0..n)
        .map(|((a, b), c)| (a, b, c))
    {
        if !lattice.leq(lattice.meet(hom[b * n + c], hom[a * n + b]), hom[a * n + c]) {
            return Err(VCatError::Composition(
                objects.atom(a).clone(),
                objects.atom(b).clone(),
                objects.atom(c).clone(),
            ));
        }
    }
    Ok(VCategory { lattice, objects, hom })
}

impl VCategory {
    /// A poset as a `2`-category: `hom(x,y) = 1` iff `x ≤ y`.
    pub fn from_poset(p: &FinPoset) -> VCategory {
        let two = LatticeV::two();
        let hom = p
            .matrix()
            .iter()
            .map(|&b| if b { two.top() } else { two.bottom() })
            .collect();
        validate_vcategory(two, p.elements().clone(), hom).expect("posets are 2-categories")
    }

    pub fn lattice(&self) -> &LatticeV {
        &self.lattice
    }

    pub fn objects(&self) -> &FinSet {
        &self.objects
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn hom(&self, x: usize, y: usize) -> usize {
        self.hom[x * self.len() + y]
    }

    pub fn hom_table(&self) -> &[usize] {
        &self.hom
    }

    /// `C(x0,x1) ∧ … ∧ C(x_{n-1},x_n)`.
    pub fn chain_hom(&self, xs: &[usize]) -> usize {
        self.lattice.meet_all(xs.windows(2).map(|w| self.hom(w[0], w[1])))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VFunctor {
    dom: VCategory,
    cod: VCategory,
    obj_map: FinFunction,
}

impl VFunctor {
    pub fn new(dom: VCategory, cod: VCategory, obj_map: FinFunction) -> Result<Self, VCatError> {
        if dom.lattice != cod.lattice {
            return Err(VCatError::LatticeMismatch);
        }
        if obj_map.dom() != &dom.objects || obj_map.cod() != &cod.objects {
            return Err(VCatError::Set(SetError::DomainMismatch("object map".into())));
        }
        for x in 0..dom.len() {
            for y in 0..dom.len() {
                if !dom
                    .lattice
                    .leq(dom.hom(x, y), cod.hom(obj_map.apply(x), obj_map.apply(y)))
                {
                    return Err(VCatError::NotFunctorial(
                        dom.objects.atom(x).clone(),
                        dom.objects.atom(y).clone(),
                    ));
                }
            }
        }
        Ok(VFunctor { dom, cod, obj_map })
    }

    pub fn from_monotone(m: &MonotoneMap) -> VFunctor {
        VFunctor::new(
            VCategory::from_poset(m.dom()),
            VCategory::from_poset(m.cod()),
            m.underlying(),
        )
        .expect("monotone maps are 2-functors")
    }

    pub fn identity(c: &VCategory) -> VFunctor {
        VFunctor {
            dom: c.clone(),
            cod: c.clone(),
            obj_map: FinFunction::identity(&c.objects),
        }
    }

    pub fn dom(&self) -> &VCategory {
        &self.dom
    }

    pub fn cod(&self) -> &VCategory {
        &self.cod
    }

    pub fn obj_map(&self) -> &FinFunction {
        &self.obj_map
    }

    fn lifts(&self, targets: &[usize]) -> Vec<Vec<usize>> {
        targets
            .iter()
            .map(|&y| self.obj_map.fiber(y))
            .multi_cartesian_product()
            .collect()
    }
}

/// The cover `(C(x0,x1) ∧ …)_{x_i ∈ F⁻¹(y_i)} ≤ D(y0,y1) ∧ …` for a chain
/// of `n = targets.len() - 1` steps.
pub fn hom_chain_cover(f: &VFunctor, targets: &[usize]) -> Result<Cover, VCatError> {
    let n = targets.len().saturating_sub(1);
    if !(1..=3).contains(&n) {
        return Err(VCatError::ChainLength(n));
    }
    if let Some(&y) = targets.iter().find(|&&y| y >= f.cod.len()) {
        return Err(VCatError::UnknownObject(y));
    }
    let lifts = f.lifts(targets);
    let index = FinSet::new(
        lifts
            .iter()
            .map(|xs| Atom::tuple(xs.iter().map(|&x| f.dom.objects.atom(x)))),
    )?;
    let fiber = lifts.iter().map(|xs| f.dom.chain_hom(xs)).collect();
    let dom = FamObject::new(index, fiber)?;
    let cod = FamObject::singleton(f.cod.chain_hom(targets));
    let map = FinFunction::new(dom.index.clone(), cod.index.clone(), vec![0; lifts.len()])?;
    Ok(Cover::new(FamMorphism::new(&f.dom.lattice, dom, cod, map)?)?)
}

/// All `len`-tuples over `0..n`, those without repeated neighbours first,
/// each group in lexicographic order.
fn tuples(n: usize, len: usize) -> Vec<Vec<usize>> {
    (0..len)
        .map(|_| 0..n)
        .multi_cartesian_product()
        .sorted_by_key(|t| (t.windows(2).any(|w| w[0] == w[1]), t.clone()))
        .collect()
}

fn render(c: &VCategory, ys: &[usize]) -> String {
    format!("({})", ys.iter().map(|&y| c.objects.atom(y).as_str()).join(","))
}

/// Outcome of one of the three chain conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionOutcome {
    pub holds: bool,
    /// first failing target tuple, rendered, with the cover's class
    pub failure: Option<(String, DescentClass)>,
    pub tuples_checked: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VFunctorReport {
    /// 1-chain covers are effective descent
    pub effective_on_1_chains: ConditionOutcome,
    /// 2-chain covers are descent
    pub descent_on_2_chains: ConditionOutcome,
    /// 3-chain covers are almost descent
    pub almost_on_3_chains: ConditionOutcome,
    pub heyting: bool,
}

impl VFunctorReport {
    pub fn sufficient_for_effective(&self) -> bool {
        self.effective_on_1_chains.holds && self.descent_on_2_chains.holds && self.almost_on_3_chains.holds
    }
}

fn condition(f: &VFunctor, n: usize, level: DescentLevel) -> ConditionOutcome {
    let v = &f.dom.lattice;
    let tuples = tuples(f.cod.len(), n + 1);
    let failure = tuples.iter().find_map(|ys| {
        let cover = hom_chain_cover(f, ys).expect("valid targets");
        let mut class = classify_cover_thin(v, &cover);
        if level == DescentLevel::Effective && class.level == DescentLevel::Effective {
            // cross-check the gluing condition directly
            let check = effective_cover_check(v, &cover).expect("descent cover");
            if !check.holds {
                class.level = DescentLevel::Descent;
            }
        }
        (class.level < level).then(|| (render(&f.cod, ys), class))
    });
    ConditionOutcome {
        holds: failure.is_none(),
        failure,
        tuples_checked: tuples.len(),
    }
}

/// Runs the three chain-cover conditions over every target tuple
/// (repetitions allowed). The conditions are sufficient for effective
/// descent; a failure does not show that `F` is not effective.
pub fn classify_vfunctor(f: &VFunctor) -> VFunctorReport {
    VFunctorReport {
        effective_on_1_chains: condition(f, 1, DescentLevel::Effective),
        descent_on_2_chains: condition(f, 2, DescentLevel::Descent),
        almost_on_3_chains: condition(f, 3, DescentLevel::Almost),
        heyting: f.dom.lattice.is_heyting(),
    }
}

/// For every `(y0,y1,y2)`: the join over lifts of `C(x0,x1) ∧ C(x1,x2)`
/// equals `D(y0,y1) ∧ D(y1,y2)`.
pub fn join_condition_check(f: &VFunctor) -> Certified {
    let v = &f.dom.lattice;
    let n = f.cod.len();
    for ys in tuples(n, 3) {
        let join = v.join_all(f.lifts(&ys).iter().map(|xs| f.dom.chain_hom(xs)));
        let target = f.cod.chain_hom(&ys);
        if join != target {
            return Certified::fails(format!(
                "join over lifts of {} is {}, expected {}",
                render(&f.cod, &ys),
                v.name(join),
                v.name(target)
            ));
        }
    }
    Certified::holds(format!("join condition holds on all {} triples", n * n * n))
}

/// Whether every `a ≤ b ≤ c` downstairs lifts to `a' ≤ b' ≤ c'`.
pub fn poset_chain_lift_check(m: &MonotoneMap) -> Certified {
    let (e, b) = (m.dom(), m.cod());
    let names = b.elements();
    for t in tuples(b.len(), 3) {
        let (x, y, z) = (t[0], t[1], t[2]);
        if !(b.leq(x, y) && b.leq(y, z)) {
            continue;
        }
        let lifted = (0..e.len()).any(|u| {
            m.apply(u) == x
                && (0..e.len())
                    .any(|v| m.apply(v) == y && e.leq(u, v) && (0..e.len()).any(|w| m.apply(w) == z && e.leq(v, w)))
        });
        if !lifted {
            let chain = if x == y && y == z {
                format!("{}", names.atom(x))
            } else {
                format!("{}≤{}≤{}", names.atom(x), names.atom(y), names.atom(z))
            };
            return Certified::fails(format!("no lift of {chain}"));
        }
    }
    Certified::holds("every 2-chain lifts")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn split_chain() -> MonotoneMap {
        let e = FinPoset::of(&["a'", "b'", "b''", "c''"], &[("a'", "b'"), ("b''", "c''")]);
        let b = FinPoset::chain(&["a", "b", "c"]);
        MonotoneMap::of(&e, &b, &[0, 1, 1, 2])
    }

    fn doubled_chain() -> MonotoneMap {
        let e = FinPoset::of(
            &["a1", "b1", "c1", "a2", "b2", "c2"],
            &[("a1", "b1"), ("b1", "c1"), ("a2", "b2"), ("b2", "c2")],
        );
        let b = FinPoset::chain(&["a", "b", "c"]);
        MonotoneMap::of(&e, &b, &[0, 1, 2, 0, 1, 2])
    }

    #[test]
    fn vcategory_validation() {
        let c3 = LatticeV::chain3();
        let (h, t) = (c3.elem("½"), c3.top());
        assert!(validate_vcategory(c3.clone(), FinSet::of(&["x", "y"]), vec![t, h, h, t]).is_ok());
        let err = validate_vcategory(c3.clone(), FinSet::of(&["x", "y"]), vec![t, h, h, c3.bottom()]).unwrap_err();
        assert_eq!(err.to_string(), "unit fails at y");
        let two = LatticeV::two();
        // 2-valued homs: transitivity is required
        let bad = validate_vcategory(
            two.clone(),
            FinSet::of(&["x", "y", "z"]),
            vec![1, 1, 0, 0, 1, 1, 0, 0, 1],
        );
        assert_eq!(bad.unwrap_err().to_string(), "composition fails at (x,y,z)");
    }

    #[test]
    fn chain_covers() {
        let f = VFunctor::from_monotone(&split_chain());
        let cover = hom_chain_cover(&f, &[0, 1, 2]).unwrap();
        assert_eq!(cover.len(), 2);
        assert!(cover.fibers().iter().all(|&x| x == 0));
        let g = VFunctor::from_monotone(&doubled_chain());
        let cover = hom_chain_cover(&g, &[0, 1, 2]).unwrap();
        assert!(cover.fibers().contains(&1));
        let id = VFunctor::identity(&VCategory::from_poset(&FinPoset::chain(&["a", "b", "c"])));
        let cover = hom_chain_cover(&id, &[0, 2]).unwrap();
        assert_eq!(
            classify_cover_thin(id.dom().lattice(), &cover).level,
            DescentLevel::Effective
        );
        assert!(hom_chain_cover(&id, &[0]).is_err());
    }

    #[test]
    fn theorem_conditions() {
        let id = VFunctor::identity(&VCategory::from_poset(&FinPoset::chain(&["a", "b", "c"])));
        assert!(classify_vfunctor(&id).sufficient_for_effective());
        let r = classify_vfunctor(&VFunctor::from_monotone(&split_chain()));
        assert!(!r.sufficient_for_effective());
        assert!(!r.effective_on_1_chains.holds);
        let r = classify_vfunctor(&VFunctor::from_monotone(&doubled_chain()));
        assert!(r.sufficient_for_effective());
    }

    #[test]
    fn split_chain_fails_condition_two_at_abc() {
        // a≤c does not lift either, so the 1-chain condition fails too
        let f = VFunctor::from_monotone(&split_chain());
        let r = classify_vfunctor(&f);
        let (at, class) = r.descent_on_2_chains.failure.clone().unwrap();
        assert_eq!(class.level, DescentLevel::Almost);
        assert_eq!(at, "(a,b,c)");
        let v = LatticeV::two();
        let abc = hom_chain_cover(&f, &[0, 1, 2]).unwrap();
        assert!(classify_cover_thin(&v, &abc).level < DescentLevel::Descent);
    }

    #[test]
    fn join_and_lift_checks() {
        let id = MonotoneMap::identity(&FinPoset::chain(&["a", "b", "c"]));
        assert!(join_condition_check(&VFunctor::from_monotone(&id)).holds);
        assert!(poset_chain_lift_check(&id).holds);
        let split = split_chain();
        assert!(!join_condition_check(&VFunctor::from_monotone(&split)).holds);
        let lift = poset_chain_lift_check(&split);
        assert!(!lift.holds);
        assert_eq!(lift.certificate, "no lift of a≤b≤c");
        assert!(join_condition_check(&VFunctor::from_monotone(&doubled_chain())).holds);
        assert!(poset_chain_lift_check(&doubled_chain()).holds);
    }

    #[test]
    fn non_surjective_map_fails_on_degenerate_chain() {
        let e = FinPoset::chain(&["a"]);
        let b = FinPoset::chain(&["a", "b"]);
        let m = MonotoneMap::of(&e, &b, &[0]);
        assert_eq!(poset_chain_lift_check(&m).certificate, "no lift of a≤a≤b");
    }
}
