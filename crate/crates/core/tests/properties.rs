use std::sync::OnceLock;

use descent_core::cauchy::{idempotents_split, karoubi_envelope, karoubi_extend};
use descent_core::corpus::{duplicate_object, small_categories};
use descent_core::descent::{
    classify, comparison_datum, essential_image_witness, validate_descent_datum, BaseMorphism, BundleMorphism,
};
use descent_core::enriched::{join_condition_check, poset_chain_lift_check, VFunctor};
use descent_core::famv::LatticeV;
use descent_core::finbase::{self, DescentLevel, FinFunction, FinSet};
use descent_core::fincat::{enumerate_chains, equivalence_check, FinCategory};
use descent_core::multicat::{chain_object, validate_multicategory, x3_size_via_pullback, FinMulticategory};
use descent_core::poset::{self, FinPoset, MonotoneMap};
use itertools::Itertools;
use proptest::prelude::*;

fn posets() -> &'static [FinPoset] {
    static ALL: OnceLock<Vec<FinPoset>> = OnceLock::new();
    ALL.get_or_init(|| (0..=4).flat_map(FinPoset::all_up_to_iso).collect())
}

fn function(max_dom: usize, max_cod: usize) -> impl Strategy<Value = FinFunction> {
    (0..=max_dom, 1..=max_cod).prop_flat_map(|(m, n)| {
        proptest::collection::vec(0..n, m)
            .prop_map(move |t| FinFunction::new(FinSet::range(m), FinSet::range(n), t).unwrap())
    })
}

/// Two maps into a common codomain.
fn cospan(max: usize) -> impl Strategy<Value = (FinFunction, FinFunction)> {
    (0..=max, 0..=max, 1..=max).prop_flat_map(|(a, b, c)| {
        (proptest::collection::vec(0..c, a), proptest::collection::vec(0..c, b)).prop_map(move |(f, g)| {
            (
                FinFunction::new(FinSet::range(a), FinSet::range(c), f).unwrap(),
                FinFunction::new(FinSet::range(b), FinSet::range(c), g).unwrap(),
            )
        })
    })
}

fn monotone() -> impl Strategy<Value = MonotoneMap> {
    let n = posets().len();
    (0..n, 0..n, any::<prop::sample::Index>()).prop_filter_map("no maps", |(e, b, i)| {
        let maps = MonotoneMap::all(&posets()[e], &posets()[b]);
        (!maps.is_empty()).then(|| maps[i.index(maps.len())].clone())
    })
}

fn cospan_of_posets() -> impl Strategy<Value = (MonotoneMap, MonotoneMap)> {
    let n = posets().len();
    (0..n, 0..n, 0..n, any::<(prop::sample::Index, prop::sample::Index)>()).prop_filter_map(
        "no maps",
        |(a, b, c, (i, j))| {
            let f = MonotoneMap::all(&posets()[a], &posets()[c]);
            let g = MonotoneMap::all(&posets()[b], &posets()[c]);
            (!f.is_empty() && !g.is_empty()).then(|| (f[i.index(f.len())].clone(), g[j.index(g.len())].clone()))
        },
    )
}

fn count_fibers(f: &FinFunction) -> Vec<usize> {
    let mut sizes = vec![0; f.cod().len()];
    for &j in f.table() {
        sizes[j] += 1;
    }
    sizes
}

proptest! {
    #[test]
    fn pullbacks_count_pairs_over_each_point((f, g) in cospan(4)) {
        let pb = finbase::pullback(&f, &g).unwrap();
        let expected: usize = count_fibers(&f).iter().zip(count_fibers(&g)).map(|(a, b)| a * b).sum();
        prop_assert_eq!(pb.apex.len(), expected);
        prop_assert_eq!(pb.proj_f.then(&f).unwrap(), pb.proj_g.then(&g).unwrap());
        let pairs: Vec<(usize, usize)> = (0..pb.apex.len()).map(|i| (pb.proj_f.apply(i), pb.proj_g.apply(i))).collect();
        prop_assert!(pairs.iter().all_unique());
    }

    #[test]
    fn coequalizers_are_universal(m in 0usize..4, c in 1usize..5, seed in any::<(Vec<u8>, Vec<u8>)>()) {
        let pick = |v: &[u8]| (0..m).map(|i| v.get(i).copied().unwrap_or(0) as usize % c).collect::<Vec<_>>();
        let f = FinFunction::new(FinSet::range(m), FinSet::range(c), pick(&seed.0)).unwrap();
        let g = FinFunction::new(FinSet::range(m), FinSet::range(c), pick(&seed.1)).unwrap();
        let q = finbase::coequalizer(&f, &g).unwrap();
        prop_assert!(q.q.is_surjective());
        prop_assert_eq!(f.then(&q.q).unwrap(), g.then(&q.q).unwrap());
        // every h coequalizing f and g is constant on the classes of q
        for h in FinFunction::all(&FinSet::range(c), &FinSet::range(2)) {
            if f.then(&h).unwrap() == g.then(&h).unwrap() {
                for x in 0..c {
                    for y in 0..c {
                        if q.q.apply(x) == q.q.apply(y) {
                            prop_assert_eq!(h.apply(x), h.apply(y));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn kernel_pairs_have_cubic_triples(p in function(5, 4)) {
        let k = finbase::kernel_pair(&p);
        let sizes = count_fibers(&p);
        prop_assert_eq!(k.apex.len(), sizes.iter().map(|s| s * s).sum::<usize>());
        prop_assert_eq!(k.triple_apex.len(), sizes.iter().map(|s| s * s * s).sum::<usize>());
        prop_assert_eq!(k.diagonal.then(&k.d0).unwrap(), FinFunction::identity(p.dom()));
    }

    #[test]
    fn set_functions_are_effective_iff_surjective(p in function(4, 3)) {
        let level = classify(&BaseMorphism::set_function(&p), 3, 3).class.level;
        if p.is_surjective() {
            prop_assert_eq!(level, DescentLevel::Effective);
        } else {
            prop_assert_eq!(level, DescentLevel::NotAlmost);
        }
    }

    #[test]
    fn comparison_data_validate_and_land_in_the_image(p in monotone(), i in any::<prop::sample::Index>()) {
        let p = BaseMorphism::poset_map(p);
        let bundles: Vec<MonotoneMap> = posets().iter().filter(|e| e.len() <= 3).flat_map(|e| MonotoneMap::all(e, p.cod())).collect();
        prop_assume!(!bundles.is_empty());
        let f = BundleMorphism::new(bundles[i.index(bundles.len())].clone());
        let d = comparison_datum(&p, &f).unwrap();
        prop_assert!(validate_descent_datum(&p, &d).is_ok());
        prop_assert!(essential_image_witness(&p, &d, 3).is_some());
    }

    #[test]
    fn poset_pullback_squares_commute((f, g) in cospan_of_posets()) {
        let pb = poset::pullback(&f, &g).unwrap();
        prop_assert_eq!(pb.proj_f.then(&f).unwrap(), pb.proj_g.then(&g).unwrap());
    }

    #[test]
    fn join_condition_over_two_is_chain_lifting(m in monotone()) {
        prop_assert_eq!(join_condition_check(&VFunctor::from_monotone(&m)).holds, poset_chain_lift_check(&m).holds);
    }

    #[test]
    fn poset_chains_are_multichains(i in 0..posets().len(), n in 0usize..=3) {
        let p = &posets()[i];
        let chains = enumerate_chains(&FinCategory::from_poset(p), n).unwrap();
        let multichains = (0..=n)
            .map(|_| 0..p.len())
            .multi_cartesian_product()
            .filter(|xs| xs.windows(2).all(|w| p.leq(w[0], w[1])))
            .count();
        prop_assert_eq!(chains.len(), multichains);
    }
}

#[test]
fn posets_up_to_iso_match_known_counts() {
    let counts: Vec<usize> = (0..=5).map(|n| FinPoset::all_up_to_iso(n).len()).collect();
    assert_eq!(counts, [1, 1, 2, 5, 16, 63]);
}

#[test]
fn finite_lattices_are_heyting_iff_distributive() {
    let mut lattices = 0;
    for n in 1..=6 {
        for p in FinPoset::all_up_to_iso(n) {
            let Ok(v) = LatticeV::from_poset(p) else { continue };
            lattices += 1;
            assert_eq!(v.is_heyting(), v.is_distributive(), "{v:?}");
            for a in 0..v.len() {
                for b in 0..v.len() {
                    assert_eq!(v.meet(a, v.join(a, b)), a);
                    assert_eq!(v.join(a, v.meet(a, b)), a);
                }
            }
        }
    }
    // lattices on 1..6 points up to isomorphism
    assert_eq!(lattices, 1 + 1 + 1 + 2 + 5 + 15);
}

#[test]
fn envelopes_of_duplicated_objects() {
    for (name, c) in small_categories() {
        for x in 0..c.objects().len() {
            let (big, collapse) = duplicate_object(&c, x);
            let (env, unit) = karoubi_envelope(&big);
            assert!(unit.is_fully_faithful(), "{name}");
            assert!(idempotents_split(&env.category).holds, "{name}");
            assert!(equivalence_check(&karoubi_extend(&collapse)).holds, "{name}");
        }
    }
}

fn unary(c: &FinCategory) -> FinMulticategory {
    FinMulticategory::from_category(c)
}

#[test]
fn unary_chain_objects_are_category_chains() {
    for (name, c) in small_categories() {
        let x = unary(&c);
        assert_eq!(validate_multicategory(&x.to_raw()).unwrap(), x, "{name}");
        for n in 2..=3 {
            assert_eq!(
                chain_object(&x, n).unwrap().len(),
                enumerate_chains(&c, n).unwrap().len(),
                "{name} at {n}"
            );
        }
        assert_eq!(x3_size_via_pullback(&x), chain_object(&x, 3).unwrap().len(), "{name}");
    }
}
