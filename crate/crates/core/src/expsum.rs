//! Exponential sums `S_a(q) = sum over (u, v) in Z_f(q) of e_q(a u)` along the
//! curve, and the identities and bounds they are checked against.
//!
//! Every sum is accumulated in increasing `u`, weighting `e_q(a u)` by the
//! fibre size `r_q(u)`, so results are reproducible bit for bit regardless of
//! how the fibres were computed.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{inv_mod, primes_up_to};
use crate::error::{Error, Result};
use crate::local::{fibers_mod, global_modulus_in_budget, local_points, primes_pf, LocalCurveData};
use crate::poly::BivariatePoly;

/// `e_q(k) = exp(2 pi i k / q)` for `k` already reduced into `[0, q)`.
#[inline]
fn e_q(k: u64, q: u64) -> Complex64 {
    let (s, c) = (TAU * k as f64 / q as f64).sin_cos();
    Complex64::new(c, s)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpSumRecord {
    pub q: u64,
    pub a: i64,
    pub value: Complex64,
    pub magnitude: f64,
    /// `magnitude / sqrt(q)`.
    pub normalized: f64,
}

impl ExpSumRecord {
    fn new(q: u64, a: i64, value: Complex64) -> Self {
        let magnitude = value.norm();
        ExpSumRecord {
            q,
            a,
            value,
            magnitude,
            normalized: magnitude / (q as f64).sqrt(),
        }
    }
}

/// Fibre sizes `r_q(u)` over `u` in `[0, q)`; the point set `Z_f(q)` up to
/// the choice of `v`, which the sums never look at.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointFibers {
    pub q: u64,
    pub counts: Vec<u64>,
}

impl PointFibers {
    pub fn local(data: &LocalCurveData) -> Self {
        PointFibers {
            q: data.p,
            counts: data.root_counts(),
        }
    }

    /// Direct enumeration modulo a squarefree `q`.
    pub fn global(f: &BivariatePoly, q: u64) -> Result<Self> {
        Ok(PointFibers {
            q,
            counts: fibers_mod(f, q)?,
        })
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn exp_sum(&self, a: i64) -> ExpSumRecord {
        let q = self.q;
        let a_red = a.rem_euclid(q as i64) as u64;
        let mut value = Complex64::new(0.0, 0.0);
        // a*u mod q is stepped incrementally; both stay below q <= 2^32.
        let mut phase = 0u64;
        for &r in &self.counts {
            if r != 0 {
                value += e_q(phase, q) * r as f64;
            }
            phase += a_red;
            if phase >= q {
                phase -= q;
            }
        }
        ExpSumRecord::new(q, a, value)
    }

    /// `S_a` for every `a` in `[0, q)`.
    pub fn all_sums(&self) -> Vec<ExpSumRecord> {
        (0..self.q as i64)
            .into_par_iter()
            .map(|a| self.exp_sum(a))
            .collect()
    }
}

/// `S_a(p)` over `Z_f(p)`.
pub fn exp_sum_local(f: &BivariatePoly, p: u64, a: i64) -> Result<ExpSumRecord> {
    Ok(PointFibers::local(&local_points(f, p)?).exp_sum(a))
}

/// `S_a(q)` over `Z_f(q)`, enumerated directly modulo the squarefree `q`.
pub fn exp_sum_global(f: &BivariatePoly, q: u64, a: i64) -> Result<ExpSumRecord> {
    Ok(PointFibers::global(f, q)?.exp_sum(a))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrtCheck {
    pub modulus: u64,
    pub a: i64,
    /// Sum over `Z_f(M_f(x))`.
    pub global: Complex64,
    /// Product over `p in P_f(x)` of the local sums at frequency `a * (M/p)^-1 mod p`.
    pub product: Complex64,
    pub residual: f64,
    /// Product of the local sums all taken at the same frequency `a`.
    pub untwisted_product: Complex64,
    pub untwisted_residual: f64,
}

/// Local frequency `a * (M/p)^-1 mod p` matching `e_M(a u)` under the CRT split.
///
/// Writing `u = sum (M/p) u_p` gives `e_M(a u) = prod e_p(a u_p)`, but then
/// `u = (M/p) u_p mod p`, so the local point is `((M/p) u_p, v)`: reindexing the
/// local sum by `u mod p` turns the frequency into `a (M/p)^-1`.
pub fn crt_local_frequency(a: i64, modulus: u64, p: u64) -> i64 {
    let cofactor = (modulus / p) % p;
    let a_red = a.rem_euclid(p as i64) as u64;
    (a_red * inv_mod(cofactor, p) % p) as i64
}

/// Compares the sum modulo `M_f(x)` with the product of the sums modulo each
/// `p in P_f(x)`, for every frequency in `freqs`.
pub fn crt_identity_residuals(f: &BivariatePoly, x: u64, freqs: &[i64]) -> Result<Vec<CrtCheck>> {
    let (global, local) = primes_pf(f, x)?;
    let modulus = global_modulus_in_budget(&global)?;
    let whole = PointFibers::global(f, modulus)?;
    let parts: Vec<PointFibers> = local.iter().map(PointFibers::local).collect();
    let one = Complex64::new(1.0, 0.0);
    Ok(freqs
        .iter()
        .map(|&a| {
            let lhs = whole.exp_sum(a).value;
            let rhs = parts.iter().fold(one, |acc, fib| {
                acc * fib.exp_sum(crt_local_frequency(a, modulus, fib.q)).value
            });
            let untwisted = parts
                .iter()
                .fold(one, |acc, fib| acc * fib.exp_sum(a).value);
            CrtCheck {
                modulus,
                a,
                global: lhs,
                product: rhs,
                residual: (lhs - rhs).norm(),
                untwisted_product: untwisted,
                untwisted_residual: (lhs - untwisted).norm(),
            }
        })
        .collect())
}

/// Single-frequency form of [`crt_identity_residuals`].
pub fn crt_identity_check(f: &BivariatePoly, x: u64, a: i64) -> Result<CrtCheck> {
    Ok(crt_identity_residuals(f, x, &[a])?.remove(0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BombieriReport {
    pub c_hat: f64,
    /// `(p, a)` attaining `c_hat`.
    pub argmax: (u64, i64),
    /// Largest normalized magnitude at each tested prime, with its frequency.
    pub per_prime: Vec<(u64, i64, f64)>,
}

impl BombieriReport {
    /// Primes whose measured constant exceeds `c`.
    pub fn exceeding(&self, c: f64) -> Vec<u64> {
        self.per_prime
            .iter()
            .filter(|&&(_, _, v)| v > c)
            .map(|&(p, _, _)| p)
            .collect()
    }
}

/// Largest `|S_a(p)| / sqrt(p)` over primes `p in [p_min, p_max]` belonging
/// to `P_f` and frequencies `1 <= a < p`.
///
/// The sums are only `O(sqrt(p))` when `f mod p` has no factor `U - alpha`;
/// that hypothesis is the caller's to ensure; use
/// [`BombieriReport::exceeding`] to spot primes where it looks violated.
pub fn bombieri_constant(f: &BivariatePoly, p_min: u64, p_max: u64) -> Result<BombieriReport> {
    let empty = Error::EmptyPrimeRange { p_min, p_max };
    if p_min > p_max {
        return Err(empty);
    }
    let primes: Vec<u64> = primes_up_to(p_max)
        .into_iter()
        .filter(|&p| p >= p_min)
        .collect();
    let per_prime: Vec<(u64, i64, f64)> = primes
        .into_par_iter()
        .map(|p| -> Result<Option<(u64, i64, f64)>> {
            let data = local_points(f, p)?;
            if !data.in_pf {
                return Ok(None);
            }
            let fibers = PointFibers::local(&data);
            let mut best = (p, 0i64, f64::NEG_INFINITY);
            for a in 1..p as i64 {
                let n = fibers.exp_sum(a).normalized;
                if n > best.2 {
                    best = (p, a, n);
                }
            }
            Ok(Some(best))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();

    let &(p, a, c_hat) = per_prime
        .iter()
        .reduce(|best, cur| if cur.2 > best.2 { cur } else { best })
        .ok_or(empty)?;
    Ok(BombieriReport {
        c_hat,
        argmax: (p, a),
        per_prime,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Parseval {
    pub p: u64,
    /// `sum over a in [0, p) of |S_a|^2`.
    pub lhs: f64,
    /// `p * sum over u of r(u)^2`.
    pub rhs: u64,
    pub residual: f64,
}

/// Orthogonality check `sum_a |S_a|^2 = p * sum_u r(u)^2`.
pub fn parseval_check(f: &BivariatePoly, p: u64) -> Result<Parseval> {
    let fibers = PointFibers::local(&local_points(f, p)?);
    let lhs: f64 = fibers.all_sums().iter().map(|s| s.value.norm_sqr()).sum();
    let rhs = p * fibers.counts.iter().map(|r| r * r).sum::<u64>();
    Ok(Parseval {
        p,
        lhs,
        rhs,
        residual: (lhs - rhs as f64).abs(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CongruenceCount {
    pub modulus: u64,
    pub n_bound: u64,
    /// `#{(n, m) : 0 <= n < N, 0 <= m < M, f(n, m) = 0 mod M}`.
    pub t: u64,
    /// `#Z_f(M)`.
    pub z_count: u64,
    /// `N * #Z_f(M) / M`.
    pub main_term: f64,
    /// `|t - main_term| / sqrt(M)`.
    pub deviation: f64,
}

/// Number of solutions of `f(n, m) = 0 mod M_f(x)` with `n < n_bound`,
/// compared with its equidistribution main term.
pub fn congruence_count(f: &BivariatePoly, n_bound: u64, x: u64) -> Result<CongruenceCount> {
    let (global, _) = primes_pf(f, x)?;
    let modulus = global_modulus_in_budget(&global)?;
    if n_bound == 0 || n_bound > modulus {
        return Err(Error::InvalidConfig(format!(
            "n_bound {n_bound} must lie in [1, M_f(x) = {modulus}]"
        )));
    }
    let counts = fibers_mod(f, modulus)?;
    let t: u64 = counts[..n_bound as usize].iter().sum();
    let z_count: u64 = counts.iter().sum();
    let main_term = if n_bound == modulus {
        z_count as f64
    } else {
        n_bound as f64 * z_count as f64 / modulus as f64
    };
    Ok(CongruenceCount {
        modulus,
        n_bound,
        t,
        z_count,
        main_term,
        deviation: (t as f64 - main_term).abs() / (modulus as f64).sqrt(),
    })
}
