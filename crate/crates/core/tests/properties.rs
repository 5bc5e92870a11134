//! Randomised properties of the polynomial layer and the residue sets.

mod common;

use common::*;
use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;
use pseudopoints::arith::ResidueSet;
use pseudopoints::{parse_poly, BivariatePoly};

fn poly_strategy() -> impl Strategy<Value = BivariatePoly> {
    prop::collection::vec(
        (0u32..5, 0u32..5, -1_000_000_000_000i64..1_000_000_000_000),
        0..8,
    )
    .prop_map(BivariatePoly::from_terms)
}

proptest! {
    #[test]
    fn render_then_parse_is_identity(f in poly_strategy()) {
        let text = f.to_string();
        let back = parse_poly(&text).unwrap();
        prop_assert_eq!(back.terms(), f.terms());
        prop_assert_eq!(back.to_string(), text);
    }

    #[test]
    fn specialize_agrees_with_eval(f in poly_strategy(), n in -10_000i64..10_000, m in -10_000i64..10_000) {
        let (n, m) = (BigInt::from(n), BigInt::from(m));
        prop_assert_eq!(f.specialize_u(&n).eval(&m), f.eval(&n, &m));
    }

    #[test]
    fn reduction_commutes_with_eval(f in poly_strategy(), p_index in 0usize..15, n in 0i64..50, m in 0i64..50) {
        let p = primes(50)[p_index];
        let reduced = f.reduce_mod(p).poly;
        let big_p = BigInt::from(p);
        let lhs = f.eval(&BigInt::from(n), &BigInt::from(m)).mod_floor(&big_p);
        let rhs = reduced
            .eval(&BigInt::from(n % p as i64), &BigInt::from(m % p as i64))
            .mod_floor(&big_p);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn residue_sets_round_trip_through_bytes(len in 1u64..300, members in prop::collection::vec(0u64..300, 0..40)) {
        let mut set = ResidueSet::new(len);
        for r in members.into_iter().filter(|&r| r < len) {
            set.insert(r);
        }
        let back = ResidueSet::from_bytes(len, &set.to_bytes()).unwrap();
        prop_assert_eq!(&back, &set);
        prop_assert_eq!(back.iter().count() as u64, set.count());
    }
}

#[test]
fn corpus_round_trips() {
    for text in CORPUS {
        let f = curve(text);
        assert_eq!(parse_poly(&f.to_string()).unwrap(), f);
    }
}

#[test]
fn corpus_reduction_matches_exhaustively_for_small_primes() {
    for text in CORPUS {
        let f = curve(text);
        for p in primes(50) {
            let reduced = f.reduce_mod(p).poly;
            for n in 0..p as i64 {
                for m in 0..p as i64 {
                    assert_eq!(
                        eval_mod(&f, n, m, p),
                        eval_mod(&reduced, n, m, p),
                        "{text} mod {p}"
                    );
                }
            }
        }
    }
}
