//! Library reasoning against the naive oracles in `common`.

mod common;

use elq_core::duals::{simulation_dual, DualError};
use elq_core::encode::prune_example;
use elq_core::fitloop::{bounded_fit, FitOptions};
use elq_core::model::{cn, direct_product, ind, rn, unravel, Database, Ontology, PointedDatabase, Signature};
use elq_core::{saturate, sim};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn full() -> Signature {
    Signature::from_parts(common::NAMES.map(cn), common::ROLES.map(rn))
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `q ⊑ p` through evaluation on the tree of `q`.
fn below(q: &elq_core::model::Concept, p: &elq_core::model::Concept) -> bool {
    common::holds(p, &q.to_structure(), 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn evaluation_matches_oracle(seed in any::<u64>()) {
        let mut r = rng(seed);
        let size = r.gen_range(1..=6);
        let p = common::random_db(&mut r, "d", size, &full(), 0.25);
        for _ in 0..10 {
            let q = common::random_concept(&mut r, &full(), 4);
            prop_assert_eq!(sim::holds(&q, &p), common::holds_pointed(&q, &p), "{}", q);
        }
    }

    #[test]
    fn simulation_matches_oracle(seed in any::<u64>()) {
        let mut r = rng(seed);
        let sigma = common::random_signature(&mut r, 5);
        let (n1, n2) = (r.gen_range(1..=5), r.gen_range(1..=5));
        let p1 = common::random_db(&mut r, "a", n1, &full(), 0.3);
        let p2 = common::random_db(&mut r, "b", n2, &full(), 0.3);
        prop_assert_eq!(sim::simulates(&p1, &p2, Some(&sigma)), common::simulates(&p1, &p2, &sigma));
        prop_assert!(sim::simulates(&p1, &p1, Some(&sigma)));
    }

    #[test]
    fn minimize_is_equivalent_and_idempotent(seed in any::<u64>()) {
        let mut r = rng(seed);
        let q = common::random_concept(&mut r, &full(), 6);
        let m = sim::minimize(&q);
        prop_assert!(below(&q, &m) && below(&m, &q));
        prop_assert!(m.size() <= q.size());
        prop_assert_eq!(sim::minimize(&m), m);
    }

    #[test]
    fn product_characterizes_common_queries(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (n1, n2) = (r.gen_range(1..=4), r.gen_range(1..=4));
        let p1 = common::random_db(&mut r, "a", n1, &full(), 0.3);
        let p2 = common::random_db(&mut r, "b", n2, &full(), 0.3);
        let x = direct_product(&p1, &p2);
        let y = direct_product(&p2, &p1);
        prop_assert!(common::simulates(&x, &y, &full()) && common::simulates(&y, &x, &full()));
        for _ in 0..10 {
            let q = common::random_concept(&mut r, &full(), 3);
            let both = common::holds_pointed(&q, &p1) && common::holds_pointed(&q, &p2);
            prop_assert_eq!(common::holds_pointed(&q, &x), both, "{}", q);
        }
    }

    #[test]
    fn unraveling_preserves_shallow_queries(seed in any::<u64>(), depth in 0usize..4) {
        let mut r = rng(seed);
        let size = r.gen_range(1..=4);
        let p = common::random_db(&mut r, "d", size, &full(), 0.35);
        let u = unravel(&p, depth);
        prop_assert!(u.structure().is_tree_from(u.root_index()));
        for _ in 0..10 {
            let q = common::random_concept(&mut r, &full(), 3);
            if q.depth() <= depth {
                prop_assert_eq!(common::holds_pointed(&q, &u), common::holds_pointed(&q, &p), "{}", q);
            }
        }
    }

    #[test]
    fn pruning_keeps_small_queries(seed in any::<u64>(), n in 1usize..5) {
        let mut r = rng(seed);
        let size = r.gen_range(1..=7);
        let p = common::random_db(&mut r, "d", size, &full(), 0.25);
        let pruned = prune_example(&p, n - 1);
        for _ in 0..10 {
            let q = common::random_concept(&mut r, &full(), n - 1);
            prop_assert_eq!(common::holds_pointed(&q, &pruned), common::holds_pointed(&q, &p), "{}", q);
        }
    }

    #[test]
    fn concept_duals_split_databases(seed in any::<u64>()) {
        let mut r = rng(seed);
        let sigma = common::random_signature(&mut r, 5);
        let q = common::random_concept(&mut r, &sigma, 3);
        let dual = elq_core::duals::concept_dual(&q, &sigma);
        for k in 0..20 {
            let size = r.gen_range(1..=4);
            let d = common::random_db(&mut r, &format!("x{k}_"), size, &full(), 0.3);
            let rejected = dual.members.iter().any(|m| common::simulates(&d, m, &sigma));
            prop_assert_eq!(common::holds_pointed(&q, &d), !rejected, "{} on {:?}", q, d.db);
        }
    }

    #[test]
    fn saturation_matches_chase(seed in any::<u64>()) {
        let mut r = rng(seed);
        // arbitrary (not normalized) inclusions
        let mut o = Ontology::new();
        for _ in 0..r.gen_range(0..=4) {
            let l = common::random_concept(&mut r, &full(), 2);
            let rhs = common::random_concept(&mut r, &full(), 2);
            o.add_ci(l, rhs);
        }
        if r.gen_bool(0.5) {
            o.add_ri(rn("r"), rn("s"));
        }
        if r.gen_bool(0.5) {
            let c = common::random_concept(&mut r, &full(), 1);
            o.add_range(rn("s"), c);
        }
        let size = r.gen_range(1..=4);
        let p = common::random_db(&mut r, "d", size, &full(), 0.3);
        let u = PointedDatabase::new(saturate::universal_db(&p.db, &o), p.root);
        let chase = common::Chase::new(&p.db, &o);
        for _ in 0..15 {
            let q = common::random_concept(&mut r, &full(), 3);
            prop_assert_eq!(sim::holds(&q, &u), common::holds(&q, &chase.s, p.root_index()), "{} under\n{}", q, o);
        }
    }

    #[test]
    fn bounded_fit_output_fits(seed in any::<u64>()) {
        let mut r = rng(seed);
        let sigma = common::random_signature(&mut r, 4);
        let e = common::random_examples(&mut r, &sigma, 8);
        let res = bounded_fit(&e, &Ontology::new(), &FitOptions { max_rounds: 5, ..FitOptions::default() }).unwrap();
        if let Some(q) = &res.query {
            prop_assert!(common::fits(q, &e));
            prop_assert!(q.restriction_count() < res.round as usize);
        } else {
            prop_assert!(common::min_fitting_restrictions(&e, &e.signature(), 2).is_none());
        }
    }
}

#[test]
fn cyclic_sources_have_no_finite_dual() {
    let p = PointedDatabase::new(Database::parse("r(a,b)\nr(b,a)").unwrap(), ind("a"));
    let sigma = Signature::from_parts([], [rn("r")]);
    assert_eq!(simulation_dual(&p, &sigma).unwrap_err(), DualError::NoFiniteDual);
    // the cycle is invisible outside Σ
    let other = Signature::from_parts([cn("A")], [rn("s")]);
    assert!(simulation_dual(&p, &other).is_ok());
}

#[test]
fn brute_force_enumerator_counts() {
    // names only: every subset
    let s = Signature::from_parts([cn("A"), cn("B")], []);
    assert_eq!(common::elqs_up_to(&s, 3).len(), 4);
    // one role, no names: rooted trees with up to 4 nodes (1 + 1 + 2 + 4)
    let s = Signature::from_parts([], [rn("r")]);
    assert_eq!(common::elqs_up_to(&s, 3).len(), 8);
}
