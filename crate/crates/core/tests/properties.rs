mod common;

use hinv::chains::Chain;
use hinv::hyperlattice::{self, enumerate, Hyperlattice};
use hinv::isomorphism::{decide_iso, necessary_conditions};
use hinv::quotient::{self, Congruence, CongruenceKind};
use hinv::{Hypertuple, RawSegre, SegreChar};
use proptest::prelude::*;

/// Strictly decreasing parts built from positive gaps, smallest part last.
fn segre() -> impl Strategy<Value = SegreChar> {
    prop::collection::vec(1u32..=3, 1..=4).prop_map(|gaps| {
        let mut parts: Vec<u32> = gaps
            .iter()
            .rev()
            .scan(0, |acc, g| {
                *acc += g;
                Some(*acc)
            })
            .collect();
        parts.reverse();
        SegreChar::new(parts).unwrap()
    })
}

fn with_nodes() -> impl Strategy<Value = (Hyperlattice, usize, usize, usize)> {
    segre().prop_flat_map(|a| {
        let l = enumerate(&a).unwrap();
        let n = l.len();
        (Just(l), 0..n, 0..n, 0..n)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn lattice_axioms((l, x, y, z) in with_nodes()) {
        prop_assert_eq!(l.meet(x, x), x);
        prop_assert_eq!(l.join(x, x), x);
        prop_assert_eq!(l.meet(x, y), l.meet(y, x));
        prop_assert_eq!(l.join(x, y), l.join(y, x));
        prop_assert_eq!(l.meet(x, l.meet(y, z)), l.meet(l.meet(x, y), z));
        prop_assert_eq!(l.join(x, l.join(y, z)), l.join(l.join(x, y), z));
        prop_assert_eq!(l.meet(x, l.join(x, y)), x);
        prop_assert_eq!(l.join(x, l.meet(x, y)), x);
        prop_assert_eq!(l.leq(x, y), l.meet(x, y) == x);
        // hyperlattices are distributive
        prop_assert_eq!(l.meet(x, l.join(y, z)), l.join(l.meet(x, y), l.meet(x, z)));
    }

    #[test]
    fn sons_and_fathers_are_dual((l, x, _y, _z) in with_nodes()) {
        let a = l.alpha();
        let u = l.node(x);
        for s in hyperlattice::sons(a, u).unwrap() {
            prop_assert!(hyperlattice::fathers(a, &s).unwrap().contains(u));
            prop_assert_eq!(hyperlattice::weight(&s) + 1, hyperlattice::weight(u));
        }
        for f in hyperlattice::fathers(a, u).unwrap() {
            prop_assert!(hyperlattice::sons(a, &f).unwrap().contains(u));
            prop_assert_eq!(hyperlattice::weight(&f), hyperlattice::weight(u) + 1);
        }
    }

    #[test]
    fn unique_son_agrees_with_sons((l, x, _y, _z) in with_nodes()) {
        let a = l.alpha();
        let u = l.node(x);
        prop_assume!(!u.is_zero());
        let sons = hyperlattice::sons(a, u).unwrap();
        let unique = hyperlattice::unique_son(a, u).unwrap();
        prop_assert_eq!(unique.is_some(), sons.len() == 1);
        if let Some(s) = unique {
            prop_assert_eq!(&s, &sons[0]);
        }
    }

    #[test]
    fn dual_reverses_order((l, x, y, _z) in with_nodes()) {
        let a = l.alpha();
        let (u, v) = (l.node(x), l.node(y));
        let (du, dv) = (hyperlattice::dual(a, u).unwrap(), hyperlattice::dual(a, v).unwrap());
        prop_assert_eq!(&hyperlattice::dual(a, &du).unwrap(), u);
        prop_assert_eq!(u.le(v), dv.le(&du));
        let sons_of_dual = hyperlattice::fathers(a, &du).unwrap();
        for s in hyperlattice::sons(a, u).unwrap() {
            prop_assert!(sons_of_dual.contains(&hyperlattice::dual(a, &s).unwrap()));
        }
    }

    #[test]
    fn json_round_trip(a in segre()) {
        let l = enumerate(&a).unwrap();
        let back = Hyperlattice::from_json(&l.to_json()).unwrap();
        prop_assert_eq!(back.nodes(), l.nodes());
        prop_assert_eq!(back.covers(), l.covers());
    }

    #[test]
    fn text_round_trips(a in segre()) {
        prop_assert_eq!(&a.to_string().parse::<SegreChar>().unwrap(), &a);
        let l = enumerate(&a).unwrap();
        for u in l.nodes() {
            prop_assert_eq!(&u.to_string().parse::<Hypertuple>().unwrap(), u);
        }
        for c in hinv::chains::special_chains(&l).unwrap() {
            prop_assert_eq!(c.chain.to_string().parse::<Chain>().unwrap(), c.chain);
        }
    }

    #[test]
    fn reduction_is_idempotent(parts in prop::collection::vec(1u32..=6, 1..=6)) {
        let mut parts = parts;
        parts.sort_unstable_by(|a, b| b.cmp(a));
        let raw = RawSegre::new(parts).unwrap();
        let once = hinv::segre::reduce(&raw);
        let again = hinv::segre::reduce(&RawSegre::new(once.segre.parts().to_vec()).unwrap());
        prop_assert!(!again.changed);
        prop_assert_eq!(again.segre, once.segre.clone());
        prop_assert_eq!(once.changed, !raw.is_reduced());
    }

    #[test]
    fn decide_is_reflexive_and_symmetric(a in segre(), b in segre()) {
        prop_assert!(decide_iso(&a, &a).isomorphic);
        prop_assert_eq!(decide_iso(&a, &b).isomorphic, decide_iso(&b, &a).isomorphic);
        if decide_iso(&a, &b).isomorphic {
            let nc = necessary_conditions(&a, &b);
            prop_assert!(nc.dim_ok && nc.card_ok);
        }
    }

    #[test]
    fn congruences_respect_meet_and_join((l, x, y, z) in with_nodes()) {
        let Some(kind) = CongruenceKind::for_alpha(l.alpha()) else {
            return Ok(());
        };
        let c = Congruence::new(kind, l.alpha().clone()).unwrap();
        let f = quotient::factor(&l, &c).unwrap();
        if f.class_of(x) == f.class_of(y) {
            prop_assert_eq!(f.class_of(l.join(x, z)), f.class_of(l.join(y, z)));
            prop_assert_eq!(f.class_of(l.meet(x, z)), f.class_of(l.meet(y, z)));
        }
        // classes are intervals: anything between two members is a member
        let (lo, hi) = (l.meet(x, y), l.join(x, y));
        if f.class_of(lo) == f.class_of(hi) && l.leq(lo, z) && l.leq(z, hi) {
            prop_assert_eq!(f.class_of(z), f.class_of(x));
        }
    }
}
