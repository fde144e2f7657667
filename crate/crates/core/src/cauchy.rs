//! Karoubi envelopes of finite categories and the fully faithful lax
//! epimorphism classifier.
//!
//! For ordinary categories the Cauchy completion is the idempotent-splitting
//! envelope: objects are pairs `(x, e)` with `e` idempotent on `x`, and a
//! morphism `(x, e) → (y, d)` is an `f: x → y` with `d∘f∘e = f`. A functor
//! is a fully faithful lax epimorphism exactly when the induced functor on
//! envelopes is an equivalence.

use std::collections::{HashMap, HashSet};

use crate::finbase::{Atom, FinSet};
use crate::fincat::{equivalence_check, FinCategory, FinFunctor};
use crate::Certified;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Idempotent {
    pub carrier: usize,
    pub endo: usize,
}

/// An envelope together with the source data of its objects and morphisms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KaroubiCategory {
    pub category: FinCategory,
    /// `idempotents[k]` is the source idempotent behind envelope object `k`.
    pub idempotents: Vec<Idempotent>,
    /// underlying source morphism of each envelope morphism
    pub underlying: Vec<usize>,
    object_index: HashMap<Idempotent, usize>,
    morphism_index: HashMap<(usize, usize, usize), usize>,
}

impl KaroubiCategory {
    pub fn object_of(&self, e: Idempotent) -> Option<usize> {
        self.object_index.get(&e).copied()
    }

    /// The envelope morphism `(a, b, f)` with source morphism `f`.
    pub fn morphism_of(&self, a: usize, b: usize, f: usize) -> Option<usize> {
        self.morphism_index.get(&(a, b, f)).copied()
    }
}

/// Makes `name` unique among `used` by priming it.
fn fresh(mut name: String, used: &mut HashSet<String>) -> Atom {
    while used.contains(&name) {
        name.push('\'');
    }
    used.insert(name.clone());
    Atom::new(name)
}

/// The envelope and its unit `x ↦ (x, id_x)`.
pub fn karoubi_envelope(c: &FinCategory) -> (KaroubiCategory, FinFunctor) {
    let names = |m: usize| c.morphisms().atom(m).clone();
    let mut idempotents = Vec::new();
    for x in 0..c.objects().len() {
        idempotents.push(Idempotent {
            carrier: x,
            endo: c.id(x),
        });
        for e in c.idempotents() {
            if c.src(e) == x && !c.is_identity(e) {
                idempotents.push(Idempotent { carrier: x, endo: e });
            }
        }
    }
    let mut used = HashSet::new();
    let objects: Vec<Atom> = idempotents
        .iter()
        .map(|i| {
            let x = c.objects().atom(i.carrier);
            let name = if c.is_identity(i.endo) {
                x.to_string()
            } else {
                Atom::pair(x, &names(i.endo)).to_string()
            };
            fresh(name, &mut used)
        })
        .collect();

    let mut triples = Vec::new();
    for (a, ia) in idempotents.iter().enumerate() {
        for (b, ib) in idempotents.iter().enumerate() {
            for f in c.hom(ia.carrier, ib.carrier) {
                let dfe = c.compose(ib.endo, f).and_then(|df| c.compose(df, ia.endo));
                if dfe == Some(f) {
                    triples.push((a, b, f));
                }
            }
        }
    }
    let mut used = HashSet::new();
    let morphisms: Vec<Atom> = triples
        .iter()
        .map(|&(a, b, f)| {
            let (ea, eb) = (idempotents[a].endo, idempotents[b].endo);
            let name = if c.is_identity(ea) && c.is_identity(eb) {
                names(f).to_string()
            } else {
                Atom::triple(&names(ea), &names(f), &names(eb)).to_string()
            };
            fresh(name, &mut used)
        })
        .collect();
    let morphism_index: HashMap<(usize, usize, usize), usize> =
        triples.iter().enumerate().map(|(k, &t)| (t, k)).collect();
    let object_index: HashMap<Idempotent, usize> = idempotents.iter().enumerate().map(|(k, &i)| (i, k)).collect();

    let n = triples.len();
    let src: Vec<usize> = triples.iter().map(|t| t.0).collect();
    let tgt: Vec<usize> = triples.iter().map(|t| t.1).collect();
    let ident: Vec<usize> = idempotents
        .iter()
        .enumerate()
        .map(|(a, i)| morphism_index[&(a, a, i.endo)])
        .collect();
    let mut comp = vec![None; n * n];
    for (g, &(b, cc, gm)) in triples.iter().enumerate() {
        for (f, &(a, b2, fm)) in triples.iter().enumerate() {
            if b == b2 {
                let gf = c.compose(gm, fm).expect("composable in the source");
                comp[g * n + f] = Some(morphism_index[&(a, cc, gf)]);
            }
        }
    }
    let category = FinCategory::from_parts(
        FinSet::new(objects).expect("fresh names"),
        FinSet::new(morphisms).expect("fresh names"),
        src,
        tgt,
        ident,
        comp,
    )
    .expect("the envelope is a category");

    let obj_map: Vec<usize> = (0..c.objects().len())
        .map(|x| {
            object_index[&Idempotent {
                carrier: x,
                endo: c.id(x),
            }]
        })
        .collect();
    let mor_map: Vec<usize> = (0..c.morphisms().len())
        .map(|f| morphism_index[&(obj_map[c.src(f)], obj_map[c.tgt(f)], f)])
        .collect();
    let envelope = KaroubiCategory {
        category,
        idempotents,
        underlying: triples.iter().map(|t| t.2).collect(),
        object_index,
        morphism_index,
    };
    let unit = FinFunctor::new(c.clone(), envelope.category.clone(), obj_map, mor_map).expect("the unit is a functor");
    (envelope, unit)
}

/// The induced functor `(x, e) ↦ (p x, p e)` between envelopes.
pub fn karoubi_extend(p: &FinFunctor) -> FinFunctor {
    let (source, _) = karoubi_envelope(p.dom());
    let (target, _) = karoubi_envelope(p.cod());
    extend_between(p, &source, &target)
}

fn extend_between(p: &FinFunctor, source: &KaroubiCategory, target: &KaroubiCategory) -> FinFunctor {
    let obj_map: Vec<usize> = source
        .idempotents
        .iter()
        .map(|i| {
            let image = Idempotent {
                carrier: p.obj(i.carrier),
                endo: p.mor(i.endo),
            };
            target.object_of(image).expect("functors preserve idempotents")
        })
        .collect();
    let sc = &source.category;
    let mor_map: Vec<usize> = (0..sc.morphisms().len())
        .map(|m| {
            let (a, b) = (obj_map[sc.src(m)], obj_map[sc.tgt(m)]);
            target
                .morphism_of(a, b, p.mor(source.underlying[m]))
                .expect("functors preserve d∘f∘e = f")
        })
        .collect();
    FinFunctor::new(sc.clone(), target.category.clone(), obj_map, mor_map).expect("the extension is a functor")
}

/// Whether every idempotent of `c` splits, searching all retractions.
pub fn idempotents_split(c: &FinCategory) -> Certified {
    for e in c.idempotents() {
        let a = c.src(e);
        let splits = (0..c.objects().len()).any(|b| {
            c.hom(a, b).into_iter().any(|r| {
                c.hom(b, a)
                    .into_iter()
                    .any(|s| c.compose(r, s) == Some(c.id(b)) && c.compose(s, r) == Some(e))
            })
        });
        if !splits {
            return Certified::fails(format!("{} does not split", c.morphisms().atom(e)));
        }
    }
    Certified::holds(format!("all {} idempotents split", c.idempotents().len()))
}

/// Whether precomposition with `p` can be shown to be fully faithful.
/// Only fully faithful functors are decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LaxEpiStatus {
    LaxEpi,
    NotLaxEpi,
    Undecided,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaxEpiReport {
    pub ff_lax_epi: Certified,
    pub lax_epi: LaxEpiStatus,
}

/// Fully faithful lax epimorphisms are the functors that become
/// equivalences on envelopes.
pub fn classify_ff_lax_epi(p: &FinFunctor) -> LaxEpiReport {
    let check = equivalence_check(&karoubi_extend(p));
    if check.holds {
        return LaxEpiReport {
            ff_lax_epi: Certified::holds(format!("{} in envelope", check.certificate)),
            lax_epi: LaxEpiStatus::LaxEpi,
        };
    }
    // a fully faithful lax epi is exactly what failed, so a fully faithful p
    // cannot be a lax epi; otherwise nothing is known
    let lax_epi = if p.is_fully_faithful() {
        LaxEpiStatus::NotLaxEpi
    } else {
        LaxEpiStatus::Undecided
    };
    LaxEpiReport {
        ff_lax_epi: Certified::fails(format!("{} in envelope", check.certificate)),
        lax_epi,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{validate_category, RawCategory};

    fn idempotent_monoid() -> FinCategory {
        FinCategory::from_monoid(&["1", "e"], &[vec![0, 1], vec![1, 1]], 0).unwrap()
    }

    #[test]
    fn idempotent_monoid_envelope() {
        let (k, unit) = karoubi_envelope(&idempotent_monoid());
        let env = &k.category;
        assert_eq!(env.objects().len(), 2);
        let split = env.obj("(*,e)");
        let homs: Vec<&str> = env
            .hom(split, split)
            .iter()
            .map(|&m| env.morphisms().atom(m).as_str())
            .collect();
        assert_eq!(homs, ["(e,e,e)"]);
        assert!(unit.is_fully_faithful());
        assert!(idempotents_split(env).holds);
        assert!(!idempotents_split(&idempotent_monoid()).holds);
        assert!(equivalence_check(&karoubi_extend(&unit)).holds);
    }

    #[test]
    fn envelope_of_discrete_is_itself() {
        let d = FinCategory::discrete(&FinSet::of(&["a", "b"]));
        let (k, unit) = karoubi_envelope(&d);
        assert_eq!(k.category, d);
        assert!(equivalence_check(&unit).holds);
    }

    #[test]
    fn extend_identity_and_constant() {
        let m = idempotent_monoid();
        let (k, _) = karoubi_envelope(&m);
        assert_eq!(
            karoubi_extend(&FinFunctor::identity(&m)),
            FinFunctor::identity(&k.category)
        );
        let one = FinCategory::from_monoid(&["1"], &[vec![0]], 0).unwrap();
        let c = karoubi_extend(&FinFunctor::constant(&m, &one, 0));
        assert!(c.obj_table().iter().all(|&o| o == 0));
    }

    #[test]
    fn discrete_into_interval_is_not_ff_lax_epi() {
        let interval =
            validate_category(&RawCategory::new(&["0", "1"]).morphism("u", "0", "1").with_identities()).unwrap();
        let d = FinCategory::discrete(&FinSet::of(&["0", "1"]));
        let p = FinFunctor::new(d, interval.clone(), vec![0, 1], vec![interval.id(0), interval.id(1)]).unwrap();
        let r = classify_ff_lax_epi(&p);
        assert!(!r.ff_lax_epi.holds);
        assert_eq!(r.ff_lax_epi.certificate, "hom (0,1) not bijective in envelope");
        assert_eq!(r.lax_epi, LaxEpiStatus::Undecided);
    }

    #[test]
    fn unit_of_non_split_monoid_is_ff_lax_epi() {
        let (_, unit) = karoubi_envelope(&idempotent_monoid());
        let r = classify_ff_lax_epi(&unit);
        assert!(r.ff_lax_epi.holds);
        assert_eq!(r.lax_epi, LaxEpiStatus::LaxEpi);
        // but the unit is not an equivalence before completion
        assert!(!equivalence_check(&unit).holds);
    }

    #[test]
    fn full_inclusion_missing_a_retract_is_not_lax_epi() {
        // the point into the walking isomorphism is an equivalence; into
        // the interval it is fully faithful but not a lax epi
        let interval =
            validate_category(&RawCategory::new(&["0", "1"]).morphism("u", "0", "1").with_identities()).unwrap();
        let point = FinCategory::discrete(&FinSet::of(&["0"]));
        let p = FinFunctor::new(point, interval.clone(), vec![0], vec![interval.id(0)]).unwrap();
        let r = classify_ff_lax_epi(&p);
        assert!(!r.ff_lax_epi.holds);
        assert_eq!(r.lax_epi, LaxEpiStatus::NotLaxEpi);
    }
}
