//! Randomized cross-checks: the structured computations against their
//! enumeration oracles, and the algebraic laws the library relies on.

use std::collections::BTreeSet;

use proptest::prelude::*;

use metacyclic::{
    product_set, product_set_oracle, sequence_has_zero_product, sequence_zero_product_oracle,
    signed_products, Element, GroupParams, SequenceOverG, Subset, DEFAULT_ORACLE_BUDGET,
};

fn group_strategy(n_max: u32) -> impl Strategy<Value = GroupParams> {
    (2..=n_max).prop_flat_map(|n| {
        (0..n).prop_map(move |m| GroupParams::new(n as i64, m as i64).unwrap())
    })
}

proptest! {
    /// The signed-sum DP equals folding every sign vector explicitly.
    #[test]
    fn signed_products_match_sign_enumeration(
        (g, exps) in group_strategy(16).prop_flat_map(|g| {
            let n = g.n();
            (Just(g), prop::collection::vec(0..n, 0..=8))
        })
    ) {
        let fast = signed_products(&g, &exps).unwrap();
        let n = g.n() as i64;
        let mut expected = BTreeSet::new();
        for mask in 0u32..1 << exps.len() {
            let mut sum = 0i64;
            for (i, &e) in exps.iter().enumerate() {
                let sign = if mask >> i & 1 == 1 { -1 } else { 1 };
                sum += sign * e as i64;
            }
            expected.insert(sum.rem_euclid(n) as u32);
        }
        prop_assert_eq!(fast.exponents(), expected.into_iter().collect::<Vec<_>>());
    }

    /// The product-set DP equals the ordered-word oracle on arbitrary
    /// subsets and product lengths.
    #[test]
    fn product_sets_match_oracle(
        (g, indices, k) in group_strategy(8)
            .prop_flat_map(|g| {
                let order = 2 * g.n();
                (Just(g), prop::collection::btree_set(0..order, 1..=5))
            })
            .prop_flat_map(|(g, indices)| {
                let len = indices.len() as u32;
                (Just(g), Just(indices), 1..=len)
            })
    ) {
        let bits = indices.iter().fold(0u128, |b, &i| b | 1 << i);
        let s = Subset::from_bits(g, bits).unwrap();
        let fast = product_set(&s, k).unwrap();
        let oracle = product_set_oracle(&s, k, DEFAULT_ORACLE_BUDGET).unwrap();
        prop_assert_eq!(fast.bits(), oracle.bits());
    }

    /// The zero-product DP agrees with the permutation-walking oracle on
    /// sequences with repeated terms.
    #[test]
    fn zero_product_dp_matches_oracle(
        (g, mult, k) in group_strategy(5)
            .prop_flat_map(|g| {
                let order = 2 * g.n() as usize;
                let counts = prop_oneof![4 => Just(0u32), 2 => Just(1u32), 1 => Just(2u32)];
                (Just(g), prop::collection::vec(counts, order))
            })
            .prop_filter("sequence length in 1..=6", |(_, mult)| {
                (1..=6).contains(&mult.iter().sum::<u32>())
            })
            .prop_flat_map(|(g, mult)| {
                let len = mult.iter().sum::<u32>();
                (Just(g), Just(mult), 1..=len)
            })
    ) {
        let seq = SequenceOverG::new(g, mult).unwrap();
        let fast = sequence_has_zero_product(&seq, k).unwrap();
        let oracle = sequence_zero_product_oracle(&seq, k, DEFAULT_ORACLE_BUDGET).unwrap();
        prop_assert_eq!(fast, oracle);
    }

    /// Left-to-right products are order-independent in triples whenever
    /// the defining relations are consistent (2m = 0 mod n), which is
    /// the regime every closed-form claim lives in.
    #[test]
    fn multiplication_is_associative_when_relations_hold(
        (g, i, j, l) in (2u32..=32)
            .prop_flat_map(|n| {
                let m = if n % 2 == 0 {
                    prop_oneof![Just(0), Just(n / 2)].boxed()
                } else {
                    Just(0).boxed()
                };
                (Just(n), m)
            })
            .prop_flat_map(|(n, m)| {
                let g = GroupParams::new(n as i64, m as i64).unwrap();
                let order = 2 * n;
                (Just(g), 0..order, 0..order, 0..order)
            })
    ) {
        let u = Element::from_index(i, &g);
        let v = Element::from_index(j, &g);
        let w = Element::from_index(l, &g);
        prop_assert_eq!(g.mul(g.mul(u, v), w), g.mul(u, g.mul(v, w)));
    }

    /// Subset rendering and parsing are inverse to each other.
    #[test]
    fn subset_strings_parse_back(
        (g, mask) in group_strategy(16).prop_flat_map(|g| {
            let order = 2 * g.n();
            (Just(g), 0u128..(1u128 << order))
        })
    ) {
        let s = Subset::from_bits(g, mask).unwrap();
        let text = s.element_strings().join(", ");
        let back = Subset::parse(g, &text).unwrap();
        prop_assert_eq!(back.bits(), s.bits());
    }

    /// Sequence rendering and parsing are inverse to each other.
    #[test]
    fn sequence_strings_parse_back(
        (g, mult) in group_strategy(8).prop_flat_map(|g| {
            let order = 2 * g.n() as usize;
            (Just(g), prop::collection::vec(0u32..=2, order))
        })
    ) {
        let seq = SequenceOverG::new(g, mult).unwrap();
        let text = seq.term_strings().join(", ");
        let back = SequenceOverG::parse(g, &text).unwrap();
        prop_assert_eq!(back.multiplicities(), seq.multiplicities());
    }
}
