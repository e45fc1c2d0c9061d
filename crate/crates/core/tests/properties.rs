use std::collections::BTreeMap;

use num_rational::BigRational;
use proptest::prelude::*;
use qfock::poly::GramValues;
use qfock::{
    enumerate_positive_signs, enumerate_pp, ncpp_counterpart, vacuum_expectation_with_labels,
    verify, Monomial, MultiPoly, NumericGram, SignSequence,
};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn arb_rational() -> impl Strategy<Value = BigRational> {
    (-9i64..=9, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn arb_q() -> impl Strategy<Value = BigRational> {
    (-4i64..=4).prop_map(|n| rat(n, 4))
}

fn arb_monomial() -> impl Strategy<Value = Monomial> {
    let index = (1u32..=3).prop_flat_map(|i| (Just(i), i + 1..=4));
    (0u32..=2, prop::collection::vec(index, 0..=3))
        .prop_map(|(q, gram)| Monomial::new(q, gram).unwrap())
}

fn arb_poly() -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((arb_rational(), arb_monomial()), 0..=4).prop_map(|terms| {
        terms
            .into_iter()
            .fold(MultiPoly::zero(), |acc, (c, m)| acc + MultiPoly::term(c, m))
    })
}

fn arb_gram_values() -> impl Strategy<Value = GramValues> {
    prop::collection::vec(arb_rational(), 6).prop_map(|vals| {
        let keys = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)];
        keys.into_iter().zip(vals).collect::<BTreeMap<_, _>>()
    })
}

fn arb_positive_sign() -> impl Strategy<Value = SignSequence> {
    (1usize..=4).prop_flat_map(|n| {
        let all = enumerate_positive_signs(n).unwrap();
        let len = all.len();
        (0..len).prop_map(move |i| all[i].clone())
    })
}

proptest! {
    #[test]
    fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &MultiPoly::one(), a.clone());
    }

    #[test]
    fn evaluation_is_a_homomorphism(
        a in arb_poly(),
        b in arb_poly(),
        q in arb_q(),
        g in arb_gram_values(),
    ) {
        let ea = a.eval(&q, &g).unwrap();
        let eb = b.eval(&q, &g).unwrap();
        prop_assert_eq!((&a + &b).eval(&q, &g).unwrap(), &ea + &eb);
        prop_assert_eq!((&a * &b).eval(&q, &g).unwrap(), ea * eb);
    }

    #[test]
    fn text_round_trip(a in arb_poly()) {
        let parsed: MultiPoly = a.to_string().parse().unwrap();
        prop_assert_eq!(parsed, a);
    }

    #[test]
    fn json_round_trip(a in arb_poly()) {
        let json = serde_json::to_string(&a).unwrap();
        let back: MultiPoly = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn crossing_number_ignores_relabeling(
        n in 1usize..=4,
        pick in any::<prop::sample::Index>(),
        gaps in prop::collection::vec(1u32..=5, 8),
    ) {
        let all = enumerate_pp(n).unwrap();
        let theta = &all[pick.index(all.len())];
        let image: Vec<u32> = gaps
            .iter()
            .scan(0, |acc, g| { *acc += g; Some(*acc) })
            .collect();
        let moved = theta.relabel(|v| image[v as usize - 1]).unwrap();
        prop_assert_eq!(moved.crossing_number(), theta.crossing_number());
        prop_assert_eq!(moved.tau().as_integers(), theta.tau().as_integers());
    }

    #[test]
    fn prefix_and_suffix_criteria_agree(v in prop::collection::vec(prop::bool::ANY, 0..=12)) {
        let ints: Vec<i64> = v.iter().map(|&b| if b { 1 } else { -1 }).collect();
        let eps = SignSequence::from_values(&ints).unwrap();
        prop_assert_eq!(eps.classify(), eps.classify_by_prefix());
    }

    #[test]
    fn counterpart_round_trips(eps in arb_positive_sign()) {
        let theta = ncpp_counterpart(&eps).unwrap();
        prop_assert_eq!(theta.tau(), eps);
        prop_assert_eq!(theta.crossing_number(), 0);
    }

    // Numeric operator simulation with arbitrary rational test vectors must
    // agree with the P-set polynomial evaluated at their Gram matrix.
    #[test]
    fn numeric_expectation_matches_pset_polynomial(
        eps in arb_positive_sign(),
        q in arb_q(),
        coords in prop::collection::vec(-3i64..=3, 16),
    ) {
        let m = eps.len();
        let vectors: Vec<Vec<BigRational>> = (0..m)
            .map(|i| vec![rat(coords[2 * i], 1), rat(coords[2 * i + 1], 1)])
            .collect();
        let gram = NumericGram::from_vectors(q.clone(), &vectors).unwrap();
        let labels: Vec<u32> = (0..m as u32).collect();
        let numeric = vacuum_expectation_with_labels(&eps, &labels, &gram).unwrap();

        let mut values = GramValues::new();
        for i in 0..m {
            for j in i + 1..m {
                values.insert((i as u32 + 1, j as u32 + 1), gram.matrix()[i][j].clone());
            }
        }
        let symbolic = verify::combinatorial_moment(&eps).unwrap();
        prop_assert_eq!(symbolic.eval(&q, &values).unwrap(), numeric);
    }
}
