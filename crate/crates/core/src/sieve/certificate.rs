//! Self-contained proofs that an integer is an x-pseudopoint (or a classical
//! pseudosquare, or a pseudopower).
//!
//! [`verify_certificate`] re-checks a certificate using only the data it
//! carries plus exact integer arithmetic; no local curve data is recomputed.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::roots::{integer_roots, RootExclusion};
use super::SearchMode;
use crate::arith::{is_prime, pow_mod, primes_up_to};
use crate::decimal;
use crate::error::{Error, Result};
use crate::local::primes_pf;
use crate::poly::BivariatePoly;

pub const TOOL_VERSION: &str = concat!("pseudopoints ", env!("CARGO_PKG_VERSION"));

/// `(p, w)`: for curves `f(n, w) = 0 mod p`; for pseudopowers `g^w = n mod p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "(String, String)", try_from = "(String, String)")]
pub struct Witness {
    pub p: u64,
    pub w: BigInt,
}

impl From<Witness> for (String, String) {
    fn from(w: Witness) -> Self {
        (w.p.to_string(), w.w.to_string())
    }
}

impl TryFrom<(String, String)> for Witness {
    type Error = String;

    fn try_from((p, w): (String, String)) -> std::result::Result<Self, Self::Error> {
        Ok(Witness {
            p: p.parse().map_err(|e| format!("witness prime {p:?}: {e}"))?,
            w: w.parse().map_err(|e| format!("witness value {w:?}: {e}"))?,
        })
    }
}

/// The consecutive powers `g^0, g^1, ...` up to the first one exceeding `n`
/// in absolute value; `n` is not among them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerExclusion {
    pub base: i64,
    #[serde(with = "decimal::vec")]
    pub powers: Vec<BigInt>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Exclusion {
    NoIntegerRoot(RootExclusion),
    NotAPower(PowerExclusion),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PseudopointCertificate {
    pub mode: SearchMode,
    /// Canonical curve text; absent for pseudopowers.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve: Option<String>,
    pub x: u64,
    #[serde(with = "decimal")]
    pub n: BigUint,
    pub primes: Vec<u64>,
    pub witnesses: Vec<Witness>,
    pub exclusion: Exclusion,
    pub tool_version: String,
}

/// Consecutive powers of `base` up to the first exceeding `n` in magnitude.
/// Returns `Err(k)` when `n = base^k`.
pub(crate) fn power_exclusion(n: &BigUint, base: i64) -> std::result::Result<PowerExclusion, u32> {
    let n = BigInt::from(n.clone());
    let g = BigInt::from(base);
    let mut powers = Vec::new();
    let mut acc = BigInt::one();
    let mut k = 0;
    loop {
        if acc == n {
            return Err(k);
        }
        let past = acc.abs() > n;
        powers.push(acc.clone());
        if past {
            break;
        }
        acc *= &g;
        k += 1;
    }
    Ok(PowerExclusion { base, powers })
}

fn reject(msg: impl Into<String>) -> Error {
    Error::Certificate(msg.into())
}

fn residue(n: &BigUint, p: u64) -> u64 {
    (n % p).try_into().expect("residue below p")
}

/// Re-checks every claim the certificate makes.
pub fn verify_certificate(cert: &PseudopointCertificate) -> Result<()> {
    let n = &cert.n;
    let n_int = BigInt::from(n.clone());

    if !cert.primes.windows(2).all(|w| w[0] < w[1]) {
        return Err(reject("primes are not strictly increasing"));
    }
    if let Some(&p) = cert.primes.iter().find(|&&p| !is_prime(p) || p > cert.x) {
        return Err(reject(format!("{p} is not a prime <= x = {}", cert.x)));
    }
    let witness_primes: Vec<u64> = cert.witnesses.iter().map(|w| w.p).collect();
    if witness_primes != cert.primes {
        return Err(reject("witnesses do not cover the listed primes"));
    }

    match (&cert.mode, &cert.exclusion) {
        (SearchMode::Plain | SearchMode::Lehmer, Exclusion::NoIntegerRoot(rec)) => {
            let text = cert
                .curve
                .as_deref()
                .ok_or_else(|| reject("curve missing"))?;
            let f: BivariatePoly = text.parse()?;
            for w in &cert.witnesses {
                if !f.eval(&n_int, &w.w).mod_floor(&BigInt::from(w.p)).is_zero() {
                    return Err(reject(format!("f(n, {}) != 0 mod {}", w.w, w.p)));
                }
            }
            if cert.mode == SearchMode::Lehmer {
                if residue(n, 8) != 1 {
                    return Err(reject("n is not 1 mod 8"));
                }
                if let Some(p) = primes_up_to(cert.x)
                    .into_iter()
                    .skip(1)
                    .find(|&p| residue(n, p) == 0)
                {
                    return Err(reject(format!("{p} divides n")));
                }
            }
            let g = f.specialize_u(&n_int);
            if g.coefficients() != rec.coefficients.as_slice() {
                return Err(reject("recorded f(n, V) does not match the curve"));
            }
            for c in &rec.candidates {
                let v = g.eval(&c.m);
                if v != c.value || v.is_zero() {
                    return Err(reject(format!(
                        "candidate {} is a root or misrecorded",
                        c.m
                    )));
                }
            }
            if g.is_zero() || rec.zero_multiplicity != 0 {
                return Err(reject("V = 0 is a root"));
            }
            let recomputed = integer_roots(&g);
            if recomputed.bound != rec.bound || !recomputed.integer_roots().is_empty() {
                return Err(reject("root search finds an integer solution"));
            }
        }
        (SearchMode::Pseudopower { base }, Exclusion::NotAPower(rec)) => {
            if rec.base != *base {
                return Err(reject("exclusion base differs from mode base"));
            }
            if cert.primes != primes_up_to(cert.x) {
                return Err(reject("pseudopower witnesses must cover every prime <= x"));
            }
            for w in &cert.witnesses {
                let k: u64 = (&w.w)
                    .try_into()
                    .map_err(|_| reject("exponent witness out of range"))?;
                let g_mod = base.rem_euclid(w.p as i64) as u64;
                if pow_mod(g_mod, k, w.p) != residue(n, w.p) {
                    return Err(reject(format!("g^{k} != n mod {}", w.p)));
                }
            }
            match power_exclusion(n, *base) {
                Ok(expected) if expected == *rec => {}
                Ok(_) => return Err(reject("recorded powers are wrong")),
                Err(k) => return Err(reject(format!("n = g^{k}"))),
            }
        }
        _ => return Err(reject("exclusion record does not match the mode")),
    }
    Ok(())
}

/// [`verify_certificate`], plus a recomputation of `P_f(x)` to confirm the
/// witnesses cover exactly the right primes.
pub fn verify_certificate_strict(cert: &PseudopointCertificate) -> Result<()> {
    verify_certificate(cert)?;
    if let Some(text) = &cert.curve {
        let f: BivariatePoly = text.parse()?;
        let (global, _) = primes_pf(&f, cert.x)?;
        if global.primes != cert.primes {
            return Err(reject(format!(
                "listed primes {:?} differ from P_f(x) = {:?}",
                cert.primes, global.primes
            )));
        }
    }
    Ok(())
}
