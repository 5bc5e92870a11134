//! Sparse integer polynomials in two variables `U` and `V`.
//!
//! A [`BivariatePoly`] is the curve `f(U, V) = 0` every other module starts
//! from. Coefficients are arbitrary precision; exponents are capped at 32 bits.

mod parse;
mod univariate;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

pub use parse::parse_poly;
pub use univariate::UnivariatePoly;

use crate::error::Error;

/// Exponent pair `(i, j)` for the monomial `U^i V^j`.
pub type Monomial = (u32, u32);

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BivariatePoly {
    terms: BTreeMap<Monomial, BigInt>,
    deg_u: u32,
    deg_v: u32,
    deg_total: u64,
}

impl BivariatePoly {
    pub fn zero() -> Self {
        BivariatePoly {
            terms: BTreeMap::new(),
            deg_u: 0,
            deg_v: 0,
            deg_total: 0,
        }
    }

    /// Builds a polynomial from `(i, j, c)` triples, merging like terms and
    /// dropping zero coefficients.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (u32, u32, C)>,
        C: Into<BigInt>,
    {
        let mut map: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (i, j, c) in terms {
            *map.entry((i, j)).or_default() += c.into();
        }
        map.retain(|_, c| !c.is_zero());
        Self::from_map(map)
    }

    fn from_map(terms: BTreeMap<Monomial, BigInt>) -> Self {
        debug_assert!(terms.values().all(|c| !c.is_zero()));
        let deg_u = terms.keys().map(|&(i, _)| i).max().unwrap_or(0);
        let deg_v = terms.keys().map(|&(_, j)| j).max().unwrap_or(0);
        let deg_total = terms
            .keys()
            .map(|&(i, j)| i as u64 + j as u64)
            .max()
            .unwrap_or(0);
        BivariatePoly {
            terms,
            deg_u,
            deg_v,
            deg_total,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, BigInt> {
        &self.terms
    }

    pub fn coefficient(&self, i: u32, j: u32) -> BigInt {
        self.terms.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn deg_u(&self) -> u32 {
        self.deg_u
    }

    pub fn deg_v(&self) -> u32 {
        self.deg_v
    }

    pub fn deg_total(&self) -> u64 {
        self.deg_total
    }

    /// Exact value of `f(n, m)`.
    pub fn eval(&self, n: &BigInt, m: &BigInt) -> BigInt {
        let u_pows = powers(n, self.deg_u);
        let v_pows = powers(m, self.deg_v);
        self.terms
            .iter()
            .map(|(&(i, j), c)| c * &u_pows[i as usize] * &v_pows[j as usize])
            .sum()
    }

    /// The polynomial `f(n, V)` in the single variable `V`.
    pub fn specialize_u(&self, n: &BigInt) -> UnivariatePoly {
        let u_pows = powers(n, self.deg_u);
        let mut coeffs = vec![BigInt::zero(); self.deg_v as usize + 1];
        for (&(i, j), c) in &self.terms {
            coeffs[j as usize] += c * &u_pows[i as usize];
        }
        UnivariatePoly::new(coeffs)
    }

    /// Coefficient-wise reduction modulo `p` into `[0, p)`.
    ///
    /// `p` is expected to be prime but the reduction itself only needs `p >= 1`.
    pub fn reduce_mod(&self, p: u64) -> Reduction {
        let modulus = BigInt::from(p);
        let reduced: BTreeMap<Monomial, BigInt> = self
            .terms
            .iter()
            .filter_map(|(&k, c)| {
                let r = c.mod_floor(&modulus);
                (!r.is_zero()).then_some((k, r))
            })
            .collect();
        let poly = Self::from_map(reduced);
        let zero = poly.is_zero();
        Reduction {
            flags: ReductionFlags {
                zero,
                deg_u_dropped: !zero && poly.deg_u < self.deg_u,
                deg_v_dropped: !zero && poly.deg_v < self.deg_v,
            },
            poly,
        }
    }

    /// Coefficients reduced into `[0, q)` as machine words, keyed like [`terms`](Self::terms).
    pub fn residues_mod(&self, q: u64) -> Vec<(Monomial, u64)> {
        let modulus = BigInt::from(q);
        self.terms
            .iter()
            .filter_map(|(&k, c)| {
                let r = c.mod_floor(&modulus);
                let r: u64 = r.try_into().expect("residue below a u64 modulus");
                (r != 0).then_some((k, r))
            })
            .collect()
    }
}

fn powers(x: &BigInt, max: u32) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(max as usize + 1);
    let mut acc = BigInt::one();
    for _ in 0..max {
        let next = &acc * x;
        out.push(acc);
        acc = next;
    }
    out.push(acc);
    out
}

/// Result of reducing a polynomial modulo a prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    pub poly: BivariatePoly,
    pub flags: ReductionFlags,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionFlags {
    /// Every coefficient vanished.
    pub zero: bool,
    pub deg_u_dropped: bool,
    pub deg_v_dropped: bool,
}

impl ReductionFlags {
    pub fn any(&self) -> bool {
        self.zero || self.deg_u_dropped || self.deg_v_dropped
    }
}

/// Canonical text: terms in descending `(i, j)` order, `1*` and `^1` omitted.
/// The output parses back to the same polynomial.
impl fmt::Display for BivariatePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (&(i, j), c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            match (idx, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            let mut parts: Vec<String> = Vec::new();
            if !mag.is_one() || (i == 0 && j == 0) {
                parts.push(mag.to_string());
            }
            for (var, e) in [("U", i), ("V", j)] {
                match e {
                    0 => {}
                    1 => parts.push(var.to_string()),
                    _ => parts.push(format!("{var}^{e}")),
                }
            }
            f.write_str(&parts.join("*"))?;
        }
        Ok(())
    }
}

impl FromStr for BivariatePoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_poly(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> BivariatePoly {
        s.parse().unwrap()
    }

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn degrees_are_cached() {
        let f = p("V^2 - U^3 - U - 1");
        assert_eq!((f.deg_u(), f.deg_v(), f.deg_total()), (3, 2, 3));
        let g = p("U^2*V^3 + 7");
        assert_eq!((g.deg_u(), g.deg_v(), g.deg_total()), (2, 3, 5));
        assert_eq!(BivariatePoly::zero().deg_total(), 0);
    }

    #[test]
    fn eval_examples() {
        assert_eq!(p("U - V^2").eval(&big(9), &big(3)), big(0));
        assert_eq!(p("U - V^2").eval(&big(2), &big(1)), big(1));
        assert_eq!(p("V^2 - U^3 - 1").eval(&big(2), &big(3)), big(0));
    }

    #[test]
    fn specialize_examples() {
        let coeffs =
            |f: &str, n: i64| -> Vec<BigInt> { p(f).specialize_u(&big(n)).coefficients().to_vec() };
        assert_eq!(coeffs("U - V^2", 9), vec![big(9), big(0), big(-1)]);
        assert_eq!(coeffs("V^2 - U^3 - 1", 2), vec![big(-9), big(0), big(1)]);
        assert_eq!(coeffs("U - V^2", 0), vec![big(0), big(0), big(-1)]);
    }

    #[test]
    fn reduce_examples() {
        let r = p("3*U - V^2").reduce_mod(3);
        assert_eq!(r.poly, BivariatePoly::from_terms([(0, 2, 2)]));
        assert!(r.flags.deg_u_dropped && !r.flags.zero && !r.flags.deg_v_dropped);

        let r = p("3*U + 3*V").reduce_mod(3);
        assert!(r.flags.zero);
        assert!(r.poly.is_zero());

        let r = p("U - V^2").reduce_mod(5);
        assert_eq!(r.poly, BivariatePoly::from_terms([(1, 0, 1), (0, 2, 4)]));
        assert!(!r.flags.any());
    }

    #[test]
    fn render_is_canonical() {
        assert_eq!(p("-V^2 + U").to_string(), "U - V^2");
        assert_eq!(p("1 + U + V^2 - U^3").to_string(), "-U^3 + U + V^2 + 1");
        assert_eq!(
            p("2*U*V - 3*U^2*V^4 - 1").to_string(),
            "-3*U^2*V^4 + 2*U*V - 1"
        );
        assert_eq!(p("U - U").to_string(), "0");
    }

    #[test]
    fn huge_coefficients_survive() {
        let text = "123456789012345678901234567890*U^2 - 98765432109876543210*V";
        let f = p(text);
        assert_eq!(f.to_string(), text);
        let v = f.eval(&big(10), &big(-1));
        assert_eq!(v.to_string(), "12345678901333333322233333332210");
    }
}
