//! Algebraic laws of terms and substitutions as property tests.

use ordclass::subst::SubstMap;
use ordclass::term::{add, compare, mul, omega_pow, parse_ord, sort_leaves_desc, AtomTable, EpsLeaf, OrdTerm};
use proptest::prelude::*;
use proptest::sample::{select, subsequence};
use std::cmp::Ordering;

fn term_over(leaves: Vec<EpsLeaf>) -> impl Strategy<Value = OrdTerm> {
    let base = prop_oneof![(0u64..4).prop_map(OrdTerm::nat), select(leaves).prop_map(|e| e.to_term())];
    base.prop_recursive(5, 48, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|x| omega_pow(&x)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| add(&a, &b).unwrap()),
            (inner.clone(), inner).prop_map(|(a, b)| mul(&a, &b).unwrap()),
        ]
    })
}

fn eps_leaves() -> Vec<EpsLeaf> {
    (0..4).map(EpsLeaf::eps).collect()
}

/// A strictly increasing map with one to four pairs, and its domain.
fn map_strategy() -> impl Strategy<Value = (SubstMap, Vec<EpsLeaf>)> {
    (1usize..=4)
        .prop_flat_map(|k| (subsequence((0u64..12).collect::<Vec<_>>(), k), subsequence((0u64..12).collect::<Vec<_>>(), k)))
        .prop_map(|(d, i)| {
            let dom: Vec<EpsLeaf> = d.into_iter().map(EpsLeaf::eps).collect();
            let pairs = dom.iter().cloned().zip(i.into_iter().map(EpsLeaf::eps)).collect();
            (SubstMap::from_pairs(pairs).unwrap(), dom)
        })
}

/// A map with terms over its domain.
fn map_and_terms() -> impl Strategy<Value = (SubstMap, OrdTerm, OrdTerm)> {
    map_strategy().prop_flat_map(|(f, dom)| (Just(f), term_over(dom.clone()), term_over(dom)))
}

fn ep_image(f: &SubstMap, x: &OrdTerm) -> Vec<EpsLeaf> {
    let img = x.ep_set().unwrap().iter().map(|e| f.map_leaf(e).unwrap().unwrap()).collect();
    sort_leaves_desc(img).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn substitution_laws((f, x, y) in map_and_terms()) {
        let (fx, fy) = (f.apply(&x).unwrap(), f.apply(&y).unwrap());
        prop_assert_eq!(compare(&x, &y).unwrap(), compare(&fx, &fy).unwrap());
        let (cx, cfx) = (x.classify(), fx.classify());
        prop_assert_eq!(cx.is_principal, cfx.is_principal);
        prop_assert_eq!(cx.is_epsilon, cfx.is_epsilon);
        prop_assert_eq!(sort_leaves_desc(fx.ep_set().unwrap()).unwrap(), ep_image(&f, &x));
        prop_assert_eq!(f.invert().apply(&fx).unwrap(), x.clone());
        prop_assert_eq!(f.apply(&add(&x, &y).unwrap()).unwrap(), add(&fx, &fy).unwrap());
        prop_assert_eq!(f.apply(&omega_pow(&x)).unwrap(), omega_pow(&fx));
        prop_assert_eq!(f.apply(&mul(&x, &y).unwrap()).unwrap(), mul(&fx, &fy).unwrap());
    }

    #[test]
    fn composition_law((g, gdom) in map_strategy(), t_seed in any::<u64>()) {
        let img: Vec<EpsLeaf> = gdom.iter().map(|e| g.map_leaf(e).unwrap().unwrap()).collect();
        let shift = OrdTerm::nat(t_seed % 3);
        let fpairs: Vec<(EpsLeaf, EpsLeaf)> = img
            .iter()
            .map(|e| match e {
                EpsLeaf::Eps(i) => (e.clone(), EpsLeaf::eps_of(add(i, &shift).unwrap()).unwrap()),
                _ => unreachable!(),
            })
            .collect();
        let f = SubstMap::from_pairs(fpairs).unwrap();
        let fg = f.compose(&g).unwrap();
        for e in &gdom {
            let t = add(&omega_pow(&e.to_term()), &OrdTerm::nat(t_seed % 5)).unwrap();
            prop_assert_eq!(fg.apply(&t).unwrap(), f.apply(&g.apply(&t).unwrap()).unwrap());
        }
    }

    #[test]
    fn composition_on_terms((g, t, _) in map_and_terms()) {
        let f = g.invert();
        prop_assert_eq!(f.compose(&g).unwrap().apply(&t).unwrap(), t.clone());
        prop_assert_eq!(g.compose(&SubstMap::identity()).unwrap().apply(&t).unwrap(), g.apply(&t).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn order_and_arithmetic(
        a in term_over(eps_leaves()),
        b in term_over(eps_leaves()),
        c in term_over(eps_leaves()),
    ) {
        prop_assert_eq!(compare(&a, &b).unwrap(), compare(&b, &a).unwrap().reverse());
        prop_assert_eq!(add(&add(&a, &b).unwrap(), &c).unwrap(), add(&a, &add(&b, &c).unwrap()).unwrap());
        prop_assert_eq!(mul(&mul(&a, &b).unwrap(), &c).unwrap(), mul(&a, &mul(&b, &c).unwrap()).unwrap());
        prop_assert_eq!(
            mul(&a, &add(&b, &c).unwrap()).unwrap(),
            add(&mul(&a, &b).unwrap(), &mul(&a, &c).unwrap()).unwrap()
        );
        if compare(&b, &c).unwrap() == Ordering::Less {
            prop_assert_eq!(compare(&add(&a, &b).unwrap(), &add(&a, &c).unwrap()).unwrap(), Ordering::Less);
        }
        prop_assert!(compare(&add(&a, &b).unwrap(), &b).unwrap() != Ordering::Less);
    }

    #[test]
    fn print_parse_round_trip(a in term_over(eps_leaves())) {
        prop_assert_eq!(parse_ord(&a.to_string(), &AtomTable::default()).unwrap(), a);
    }
}
