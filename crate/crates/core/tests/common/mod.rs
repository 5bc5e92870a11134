//! Brute-force oracles shared by the integration tests. Everything here is
//! written from the definitions, with no use of the library's algorithms
//! beyond parsing and exact evaluation.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{Signed, ToPrimitive, Zero};
use pseudopoints::BivariatePoly;

pub const CORPUS: &[&str] = &[
    "U - V^2",
    "V^2 - U^3 - 1",
    "U^2 + U + V^2 + V + 1",
    "V^2 - U^3 - U - 1",
    "V^3 - U^2 - 2",
    "U*V^2 + V - U^2 + 3",
];

/// The three curves the exact identity checks run on.
pub const IDENTITY_CURVES: &[&str] = &["U - V^2", "V^2 - U^3 - 1", "U^2 + U + V^2 + V + 1"];

pub fn curve(text: &str) -> BivariatePoly {
    text.parse().unwrap()
}

pub fn primes(limit: u64) -> Vec<u64> {
    (2..=limit)
        .filter(|&n| (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0))
        .collect()
}

/// `f(n, m) mod q` by exact evaluation.
pub fn eval_mod(f: &BivariatePoly, n: i64, m: i64, q: u64) -> u64 {
    f.eval(&BigInt::from(n), &BigInt::from(m))
        .mod_floor(&BigInt::from(q))
        .to_u64()
        .unwrap()
}

/// `#{(n, m) mod q : f(n, m) = 0 mod q}` by the double loop.
pub fn count_points(f: &BivariatePoly, q: u64) -> u64 {
    fibre_sizes(f, q).iter().sum()
}

/// `r_q(u)` for every `u` in `[0, q)` by the double loop.
pub fn fibre_sizes(f: &BivariatePoly, q: u64) -> Vec<u64> {
    (0..q as i64)
        .map(|u| (0..q as i64).filter(|&v| eval_mod(f, u, v, q) == 0).count() as u64)
        .collect()
}

/// Primes `p <= x` with a point mod `p`, skipping zero reductions.
pub fn pf(f: &BivariatePoly, x: u64) -> Vec<u64> {
    primes(x)
        .into_iter()
        .filter(|&p| {
            let zero = f
                .terms()
                .values()
                .all(|c| c.mod_floor(&BigInt::from(p)).is_zero());
            !zero && count_points(f, p) > 0
        })
        .collect()
}

pub fn admissible_mod(f: &BivariatePoly, n: u64, p: u64) -> bool {
    (0..p as i64).any(|m| eval_mod(f, (n % p) as i64, m, p) == 0)
}

/// Whether `f(n, V)` has an integer root. The Cauchy radius is scanned
/// exhaustively when it is small; quadratics in `V` with a larger radius use
/// the discriminant instead.
pub fn has_integer_root(f: &BivariatePoly, n: &BigInt) -> bool {
    let coeffs = specialized(f, n);
    assert!(coeffs.iter().any(|c| !c.is_zero()), "zero specialization");
    if coeffs[0].is_zero() {
        return true;
    }
    let d = coeffs.iter().rposition(|c| !c.is_zero()).unwrap();
    if d == 0 {
        return false;
    }
    let lead = coeffs[d].abs();
    let max = coeffs[..d].iter().map(|c| c.abs()).max().unwrap();
    let bound = BigInt::from(1) + max.div_ceil(&lead);
    if let Some(b) = bound.to_i64().filter(|&b| b <= 200_000) {
        return scan_roots(&coeffs, b).next().is_some();
    }
    if coeffs[1..d].iter().all(|c| c.is_zero()) {
        // a V^d + c = 0: V^d = -c / a must be an exact d-th power.
        let (q, r) = (-&coeffs[0]).div_rem(&coeffs[d]);
        if q.is_negative() && d % 2 == 0 {
            return false;
        }
        let root = q.nth_root(d as u32);
        return r.is_zero() && root.pow(d as u32) == q;
    }
    assert_eq!(d, 2, "radius too large to scan for degree {d}");
    let (a, b, c) = (&coeffs[2], &coeffs[1], &coeffs[0]);
    let disc = b * b - BigInt::from(4) * a * c;
    if disc.is_negative() {
        return false;
    }
    let s = disc.sqrt();
    if &s * &s != disc {
        return false;
    }
    let two_a = BigInt::from(2) * a;
    [-b + &s, -b - &s]
        .iter()
        .any(|num| num.mod_floor(&two_a).is_zero())
}

/// Integer roots in `[-b, b]`, increasing.
pub fn scan_roots(coeffs: &[BigInt], b: i64) -> impl Iterator<Item = i64> + '_ {
    (-b..=b).filter(move |&m| horner(coeffs, &BigInt::from(m)).is_zero())
}

pub fn horner(coeffs: &[BigInt], x: &BigInt) -> BigInt {
    coeffs
        .iter()
        .rev()
        .fold(BigInt::zero(), |acc, c| acc * x + c)
}

/// Coefficients of `f(n, V)`, lowest degree first, untrimmed.
pub fn specialized(f: &BivariatePoly, n: &BigInt) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); f.deg_v() as usize + 1];
    for (&(i, j), c) in f.terms() {
        out[j as usize] += c * n.pow(i);
    }
    out
}

/// Every x-pseudopoint of `f` in `[0, ceiling)`.
pub fn pseudopoints(f: &BivariatePoly, x: u64, ceiling: u64) -> Vec<u64> {
    let ps = pf(f, x);
    (0..ceiling)
        .filter(|&n| ps.iter().all(|&p| admissible_mod(f, n, p)))
        .filter(|&n| !has_integer_root(f, &BigInt::from(n)))
        .collect()
}

pub fn is_square(n: u64) -> bool {
    let s = n.sqrt();
    s * s == n
}

/// Euler's criterion by repeated multiplication.
pub fn euler(n: u64, p: u64) -> u64 {
    let mut acc = 1;
    for _ in 0..(p - 1) / 2 {
        acc = acc * (n % p) % p;
    }
    acc
}

/// Smallest nonsquare `n = 1 mod 8` that is a nonzero square mod every odd `p <= x`.
pub fn lehmer(x: u64) -> u64 {
    let odd: Vec<u64> = primes(x).into_iter().filter(|&p| p > 2).collect();
    (1..)
        .step_by(8)
        .find(|&n| !is_square(n) && odd.iter().all(|&p| euler(n, p) == 1))
        .unwrap()
}

/// Smallest `n > 0` that is a power of `g` mod every prime `<= x` but not over the integers.
pub fn pseudopower(g: i64, x: u64) -> u64 {
    let ps = primes(x);
    let is_power = |n: u64| {
        let mut acc = BigInt::from(1);
        loop {
            if acc == BigInt::from(n) {
                return true;
            }
            if acc.abs() > BigInt::from(n) {
                return false;
            }
            acc *= g;
        }
    };
    (1..)
        .find(|&n| {
            !is_power(n)
                && ps.iter().all(|&p| {
                    let gm = g.rem_euclid(p as i64) as u64;
                    let mut acc = 1 % p;
                    (0..=p).any(|_| {
                        let hit = acc == n % p;
                        acc = acc * gm % p;
                        hit
                    })
                })
        })
        .unwrap()
}

/// Every `x >= 2` with `M_f(x) <= limit`, increasing.
pub fn xs_with_modulus_at_most(f: &BivariatePoly, limit: u64) -> Vec<u64> {
    let mut out = Vec::new();
    for x in 2.. {
        let m: u64 = pf(f, x).iter().product();
        if m > limit {
            break;
        }
        out.push(x);
    }
    out
}
