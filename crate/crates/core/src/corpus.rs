//! A bundled corpus of small categories (at most 3 objects and 8
//! morphisms) and generators of equivalences between them.

use crate::finbase::{Atom, FinSet};
use crate::fincat::{validate_category, FinCategory, FinFunctor, RawCategory};
use crate::poset::FinPoset;

fn monoid(elements: &[&str], table: &[&[usize]]) -> FinCategory {
    let rows: Vec<Vec<usize>> = table.iter().map(|r| r.to_vec()).collect();
    FinCategory::from_monoid(elements, &rows, 0).expect("bundled monoid")
}

fn raw(r: RawCategory) -> FinCategory {
    validate_category(&r.with_identities()).expect("bundled category")
}

/// Named categories, each with at most 3 objects and 8 morphisms.
pub fn small_categories() -> Vec<(&'static str, FinCategory)> {
    vec![
        ("point", FinCategory::discrete(&FinSet::of(&["0"]))),
        ("discrete-2", FinCategory::discrete(&FinSet::of(&["0", "1"]))),
        ("discrete-3", FinCategory::discrete(&FinSet::of(&["0", "1", "2"]))),
        ("interval", FinCategory::from_poset(&FinPoset::chain(&["0", "1"]))),
        ("chain-3", FinCategory::from_poset(&FinPoset::chain(&["0", "1", "2"]))),
        ("idempotent", monoid(&["1", "e"], &[&[0, 1], &[1, 1]])),
        ("z2", monoid(&["1", "s"], &[&[0, 1], &[1, 0]])),
        ("z3", monoid(&["1", "g", "g2"], &[&[0, 1, 2], &[1, 2, 0], &[2, 0, 1]])),
        // two left zeros: ab = a
        (
            "left-zeros",
            monoid(&["1", "a", "b"], &[&[0, 1, 2], &[1, 1, 1], &[2, 2, 2]]),
        ),
        (
            "walking-iso",
            raw(RawCategory::new(&["0", "1"])
                .morphism("i", "0", "1")
                .morphism("j", "1", "0")
                .compose("j", "i", "id_0")
                .compose("i", "j", "id_1")),
        ),
        (
            "parallel-pair",
            raw(RawCategory::new(&["0", "1"])
                .morphism("f", "0", "1")
                .morphism("g", "0", "1")),
        ),
        (
            "split-idempotent",
            raw(RawCategory::new(&["A", "B"])
                .morphism("r", "A", "B")
                .morphism("s", "B", "A")
                .morphism("e", "A", "A")
                .compose("r", "s", "id_B")
                .compose("s", "r", "e")
                .compose("e", "e", "e")
                .compose("r", "e", "r")
                .compose("e", "s", "s")),
        ),
        (
            "span",
            raw(RawCategory::new(&["0", "1", "2"])
                .morphism("f", "0", "1")
                .morphism("g", "0", "2")),
        ),
        (
            "cospan",
            raw(RawCategory::new(&["0", "1", "2"])
                .morphism("f", "1", "0")
                .morphism("g", "2", "0")),
        ),
        (
            "idempotent-then-arrow",
            raw(RawCategory::new(&["0", "1"])
                .morphism("e", "0", "0")
                .morphism("f", "0", "1")
                .compose("e", "e", "e")
                .compose("f", "e", "f")),
        ),
        (
            "arrow-then-idempotent",
            raw(RawCategory::new(&["0", "1"])
                .morphism("f", "0", "1")
                .morphism("e", "1", "1")
                .compose("e", "e", "e")
                .compose("e", "f", "f")),
        ),
        (
            "idempotent-and-point",
            raw(RawCategory::new(&["0", "1"])
                .morphism("e", "0", "0")
                .compose("e", "e", "e")),
        ),
    ]
}

/// Adds a copy `x'` of `x` isomorphic to it, returning the enlarged
/// category and the equivalence collapsing the copy back onto `x`.
pub fn duplicate_object(c: &FinCategory, x: usize) -> (FinCategory, FinFunctor) {
    let n_obj = c.objects().len();
    let mut copy_name = format!("{}'", c.objects().atom(x));
    while c.objects().contains(&Atom::new(copy_name.as_str())) {
        copy_name.push('\'');
    }
    let objects: Vec<Atom> = c
        .objects()
        .atoms()
        .iter()
        .cloned()
        .chain([Atom::new(copy_name)])
        .collect();
    // the copy has index n_obj and collapses onto x
    let collapse = |o: usize| if o == n_obj { x } else { o };
    let mut triples = Vec::new();
    for a in 0..=n_obj {
        for b in 0..=n_obj {
            for m in c.hom(collapse(a), collapse(b)) {
                triples.push((a, b, m));
            }
        }
    }
    let names: Vec<Atom> = triples
        .iter()
        .map(|&(a, b, m)| {
            let name = c.morphisms().atom(m);
            if a < n_obj && b < n_obj {
                name.clone()
            } else {
                Atom::triple(&objects[a], name, &objects[b])
            }
        })
        .collect();
    let index = |t: (usize, usize, usize)| triples.iter().position(|&u| u == t).expect("closed under composition");
    let n = triples.len();
    let mut comp = vec![None; n * n];
    for (g, &(b, cc, gm)) in triples.iter().enumerate() {
        for (f, &(a, b2, fm)) in triples.iter().enumerate() {
            if b == b2 {
                comp[g * n + f] = Some(index((a, cc, c.compose(gm, fm).expect("composable"))));
            }
        }
    }
    let ident = (0..=n_obj).map(|o| index((o, o, c.id(collapse(o))))).collect();
    let big = FinCategory::from_parts(
        FinSet::new(objects).expect("fresh copy"),
        FinSet::new(names).expect("distinct morphism names"),
        triples.iter().map(|t| t.0).collect(),
        triples.iter().map(|t| t.1).collect(),
        ident,
        comp,
    )
    .expect("duplicating an object gives a category");
    let functor = FinFunctor::new(
        big.clone(),
        c.clone(),
        (0..=n_obj).map(collapse).collect(),
        triples.iter().map(|t| t.2).collect(),
    )
    .expect("the collapse is a functor");
    (big, functor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::equivalence_check;

    #[test]
    fn corpus_respects_size_limits() {
        for (name, c) in small_categories() {
            assert!(c.objects().len() <= 3, "{name}");
            assert!(c.morphisms().len() <= 8, "{name}");
        }
    }

    #[test]
    fn duplicated_objects_collapse_by_equivalence() {
        for (name, c) in small_categories() {
            for x in 0..c.objects().len() {
                let (big, collapse) = duplicate_object(&c, x);
                assert_eq!(big.objects().len(), c.objects().len() + 1);
                assert!(equivalence_check(&collapse).holds, "{name} at {x}");
            }
        }
    }

    #[test]
    fn duplicate_of_point_is_walking_iso() {
        let point = FinCategory::discrete(&FinSet::of(&["0"]));
        let (big, _) = duplicate_object(&point, 0);
        assert_eq!(big.morphisms().len(), 4);
        assert!(big.isomorphic(0, 1));
    }
}
