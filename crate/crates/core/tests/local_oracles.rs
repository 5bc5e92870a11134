//! Local point counts, the product formula and the exponential-sum
//! identities, each checked against a brute-force oracle.

mod common;

use common::*;
use num_bigint::BigUint;
use pseudopoints::expsum::{
    congruence_count, crt_identity_residuals, exp_sum_global, exp_sum_local, parseval_check,
    PointFibers,
};
use pseudopoints::local::{
    count_points_mod, local_points, local_points_exhaustive, point_count_exponent, primes_pf,
    product_formula_check, weil_check,
};

#[test]
fn local_points_match_the_double_loop() {
    for text in CORPUS {
        let f = curve(text);
        for p in primes(200) {
            let fast = local_points(&f, p).unwrap();
            let slow = local_points_exhaustive(&f, p).unwrap();
            assert_eq!(fast, slow, "{text} mod {p}");
            if p <= 60 {
                let sizes = fibre_sizes(&f, p);
                assert_eq!(fast.root_counts(), sizes, "{text} mod {p}");
                assert_eq!(fast.point_count, sizes.iter().sum::<u64>());
            }
        }
    }
}

#[test]
fn local_data_invariants() {
    for text in CORPUS {
        let f = curve(text);
        for p in primes(200) {
            let d = local_points(&f, p).unwrap();
            let admissible = d.admissible.count();
            assert!(admissible <= d.point_count, "{text} mod {p}");
            assert!(d.point_count <= f.deg_v() as u64 * p, "{text} mod {p}");
            assert_eq!(d.in_pf, d.point_count > 0);
            for fiber in &d.fibers {
                assert_eq!(eval_mod(&f, fiber.u as i64, fiber.witness as i64, p), 0);
                assert!((0..fiber.witness).all(|v| eval_mod(&f, fiber.u as i64, v as i64, p) != 0));
            }
        }
    }
}

#[test]
fn spec_examples_for_local_data() {
    let d = local_points(&curve("V^2 - U^3 - 1"), 5).unwrap();
    assert_eq!(d.point_count, 5);
    assert_eq!(d.admissible.iter().collect::<Vec<_>>(), vec![0, 2, 4]);

    let (global, _) = primes_pf(&curve("V^2 - U^3 - 1"), 10).unwrap();
    assert_eq!(global.primes, vec![2, 3, 5, 7]);
    assert_eq!(global.m_value, BigUint::from(210u32));
}

#[test]
fn pf_matches_oracle() {
    for text in CORPUS {
        let f = curve(text);
        for x in [2, 10, 30, 60] {
            let (global, local) = primes_pf(&f, x).unwrap();
            assert_eq!(global.primes, pf(&f, x), "{text}, x = {x}");
            let m: BigUint = global.primes.iter().map(|&p| BigUint::from(p)).product();
            assert_eq!(global.m_value, m);
            assert!(local.iter().all(|d| d.in_pf));
        }
    }
}

#[test]
fn product_formula_for_every_small_modulus() {
    for text in IDENTITY_CURVES.iter().chain(&CORPUS[3..]) {
        let f = curve(text);
        for x in xs_with_modulus_at_most(&f, 10_000) {
            let check = product_formula_check(&f, x).unwrap();
            assert!(check.equal, "{text}, x = {x}: {check:?}");
            if check.modulus <= 250 {
                assert_eq!(check.lhs, count_points(&f, check.modulus));
            }
        }
    }
}

#[test]
fn product_formula_beyond_the_small_range() {
    // M_f(13) = 30030 for U - V^2; the enumeration is quadratic in M.
    let check = product_formula_check(&curve("U - V^2"), 13).unwrap();
    assert_eq!(check.modulus, 30_030);
    assert!(check.equal);
}

#[test]
fn count_points_mod_matches_double_loop() {
    for text in CORPUS {
        let f = curve(text);
        for q in [6, 10, 15, 30, 42] {
            assert_eq!(
                count_points_mod(&f, q).unwrap(),
                count_points(&f, q),
                "{text} mod {q}"
            );
        }
    }
}

#[test]
fn weil_interval_for_an_elliptic_curve() {
    let f = curve("V^2 - U^3 - U - 1");
    for p in primes(200).into_iter().filter(|&p| p >= 5) {
        let check = weil_check(&f, p, 2.0).unwrap();
        let dev = check.point_count.abs_diff(p);
        assert_eq!(check.passes, dev * dev <= 4 * p);
        assert!(check.passes, "p = {p}: {check:?}");
    }
}

#[test]
fn count_exponent_is_reported() {
    for text in CORPUS {
        let f = curve(text);
        for x in [5, 7, 11] {
            let e = point_count_exponent(&f, x).unwrap();
            assert!(e.ratio.is_finite() && e.c0 >= 0.0, "{text}, x = {x}: {e:?}");
            assert!((e.gap * (x as f64).sqrt() - e.c0).abs() < 1e-12);
        }
    }
}

#[test]
fn gauss_sums_have_magnitude_sqrt_p() {
    let f = curve("U - V^2");
    for p in primes(200).into_iter().skip(1) {
        for a in 1..p as i64 {
            let s = exp_sum_local(&f, p, a).unwrap();
            assert!(
                (s.normalized - 1.0).abs() <= 1e-6,
                "p = {p}, a = {a}: {s:?}"
            );
        }
    }
}

#[test]
fn parseval_on_all_corpus_curves() {
    for text in CORPUS {
        let f = curve(text);
        for p in primes(200) {
            let check = parseval_check(&f, p).unwrap();
            let rhs = p * fibre_sizes_fast(&f, p).iter().map(|r| r * r).sum::<u64>();
            assert_eq!(check.rhs, rhs);
            assert!(
                check.residual <= 1e-6 * check.rhs.max(1) as f64,
                "{text} mod {p}: {check:?}"
            );
        }
    }
}

fn fibre_sizes_fast(f: &pseudopoints::BivariatePoly, p: u64) -> Vec<u64> {
    if p <= 60 {
        fibre_sizes(f, p)
    } else {
        local_points_exhaustive(f, p).unwrap().root_counts()
    }
}

#[test]
fn crt_identity_with_twenty_frequencies() {
    let freqs: Vec<i64> = (0..20).map(|k| k * 7 - 13).collect();
    for text in IDENTITY_CURVES {
        let f = curve(text);
        for x in xs_with_modulus_at_most(&f, 10_000) {
            for check in crt_identity_residuals(&f, x, &freqs).unwrap() {
                assert!(check.residual <= 1e-6, "{text}, x = {x}: {check:?}");
            }
        }
    }
}

#[test]
fn global_sums_match_a_direct_sum() {
    let f = curve("V^2 - U^3 - 1");
    let q = 30;
    let sizes = fibre_sizes(&f, q);
    for a in [-4, 1, 7, 29] {
        let direct: num_complex::Complex64 = sizes
            .iter()
            .enumerate()
            .map(|(u, &r)| {
                let t = 2.0 * std::f64::consts::PI * (a * u as i64) as f64 / q as f64;
                num_complex::Complex64::from_polar(r as f64, t)
            })
            .sum();
        let s = exp_sum_global(&f, q, a).unwrap();
        assert!((s.value - direct).norm() < 1e-9);
        let conj = exp_sum_global(&f, q, -a).unwrap();
        assert!((conj.value - s.value.conj()).norm() < 1e-9);
    }
    assert_eq!(
        PointFibers::global(&f, q).unwrap().total(),
        count_points(&f, q)
    );
}

#[test]
fn congruence_counts() {
    let f = curve("U - V^2");
    let full = congruence_count(&f, 30, 5).unwrap();
    assert_eq!(full.t, count_points(&f, 30));
    assert_eq!(full.t, full.z_count);

    let partial = congruence_count(&f, 6, 5).unwrap();
    let brute = (0..6i64)
        .flat_map(|n| (0..30i64).map(move |m| (n, m)))
        .filter(|&(n, m)| eval_mod(&f, n, m, 30) == 0)
        .count() as u64;
    assert_eq!(partial.t, brute);
    assert_eq!(brute, 9);
}
