mod common;

use fknichols::cyclotomic::{
    cyclotomic_polynomial, embed, rank, CycloMatrix, CyclotomicNumber, ModularSpec, RankMode, RootOfUnity,
};
use proptest::prelude::*;

fn number(conductor: u64) -> impl Strategy<Value = CyclotomicNumber> {
    prop::collection::vec((0..conductor, -3i64..=3), 0..5)
        .prop_map(move |terms| CyclotomicNumber::from_root_counts(conductor, &terms))
}

fn triple() -> impl Strategy<Value = (CyclotomicNumber, CyclotomicNumber, CyclotomicNumber)> {
    (2u64..=24).prop_flat_map(|n| (number(n), number(n), number(n)))
}

fn matrix() -> impl Strategy<Value = CycloMatrix> {
    (prop::sample::select(vec![4u64, 5, 6, 7, 8, 12]), 1usize..=4, 1usize..=4).prop_flat_map(|(n, r, c)| {
        // sparse-ish entries so rank deficiency actually occurs
        let entry = prop_oneof![
            2 => Just(CyclotomicNumber::zero(n)),
            3 => number(n),
        ];
        prop::collection::vec(prop::collection::vec(entry, c), r)
            .prop_map(move |rows| CycloMatrix::new(n, c, rows).unwrap())
    })
}

proptest! {
    #![proptest_config(common::pinned(256, 11))]

    #[test]
    fn field_axioms((a, b, c) in triple()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
        if !a.is_zero() {
            let inv = a.inverse().unwrap();
            prop_assert!((&a * &inv).is_one());
        }
    }

    #[test]
    fn embed_is_multiplicative(n in 1u64..=24, i in 0usize..8, j in 0usize..8, x in -30i64..30, y in -30i64..30) {
        let divisors: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
        let a = RootOfUnity::new(divisors[i % divisors.len()], x);
        let b = RootOfUnity::new(divisors[j % divisors.len()], y);
        let lhs = embed(&a.mul(&b), n).unwrap();
        let rhs = &embed(&a, n).unwrap() * &embed(&b, n).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(common::pinned(50, 12))]

    #[test]
    fn modular_rank_matches_exact(m in matrix()) {
        let exact = rank(&m, RankMode::Exact).unwrap();
        let modular: Vec<usize> = (0..3)
            .map(|k| rank(&m, RankMode::Modular(ModularSpec::find(m.conductor(), k))).unwrap())
            .collect();
        prop_assert!(modular.iter().all(|&r| r <= exact));
        prop_assert!(modular.contains(&exact));
    }
}

#[test]
fn cyclotomic_polynomial_kills_zeta() {
    for n in 1..=24u64 {
        let terms: Vec<(u64, i64)> = cyclotomic_polynomial(n)
            .into_iter()
            .enumerate()
            .map(|(e, c)| (e as u64, c))
            .collect();
        assert!(CyclotomicNumber::from_root_counts(n, &terms).is_zero(), "N = {n}");
    }
}
