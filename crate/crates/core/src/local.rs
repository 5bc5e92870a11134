//! Per-prime curve data.
//!
//! [`local_points`] enumerates `Z_f(p) = {(u, v) in F_p^2 : f(u, v) = 0}` fibre
//! by fibre: for each `u` the roots of `f(u, V)` are counted, by the quadratic
//! formula when `deg_V f <= 2` and by direct evaluation over all `v` otherwise.
//! [`primes_pf`] keeps the primes `p <= x` with a nonempty `Z_f(p)` and
//! multiplies them into the global modulus `M_f(x)`.

use num_bigint::BigUint;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{inv_mod, is_prime, is_squarefree, primes_up_to, sqrt_mod, ResidueSet};
use crate::error::{Error, Result};
use crate::poly::{BivariatePoly, ReductionFlags};

/// Largest prime accepted by [`local_points`].
pub const PRIME_BUDGET: u64 = 1_000_000;
/// Largest composite modulus accepted by the `O(q^2)` enumerations.
pub const MODULUS_BUDGET: u64 = 1_000_000;

/// Roots of `f(u, V)` above one admissible residue `u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Fiber {
    pub u: u64,
    /// Smallest `v` in `[0, p)` with `f(u, v) = 0 mod p`.
    pub witness: u64,
    /// Number of distinct roots `v` in `[0, p)`.
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalCurveData {
    pub p: u64,
    pub point_count: u64,
    pub admissible: ResidueSet,
    /// One entry per admissible `u`, in increasing `u`.
    pub fibers: Vec<Fiber>,
    pub in_pf: bool,
    pub weil_slack: f64,
    pub flags: ReductionFlags,
}

impl LocalCurveData {
    /// Assembles a record from its fibres, recomputing every derived field.
    pub fn from_fibers(p: u64, fibers: Vec<Fiber>, flags: ReductionFlags) -> Self {
        let mut admissible = ResidueSet::new(p);
        let mut point_count = 0;
        for fiber in &fibers {
            admissible.insert(fiber.u);
            point_count += fiber.count;
        }
        // A zero reduction never joins P_f, whatever was counted.
        let in_pf = point_count > 0 && !flags.zero;
        LocalCurveData {
            p,
            point_count,
            admissible,
            fibers,
            in_pf,
            weil_slack: weil_slack(point_count, p),
            flags,
        }
    }

    /// Whether `f` reduces to the zero polynomial mod `p`.
    pub fn is_degenerate(&self) -> bool {
        self.flags.zero
    }

    /// Smallest root above `u`, if `u mod p` is admissible.
    pub fn witness(&self, u: u64) -> Option<u64> {
        let u = u % self.p;
        self.fibers
            .binary_search_by_key(&u, |f| f.u)
            .ok()
            .map(|i| self.fibers[i].witness)
    }

    /// Dense root counts `r(u)` for `u` in `[0, p)`.
    pub fn root_counts(&self) -> Vec<u64> {
        let mut counts = vec![0; self.p as usize];
        for fiber in &self.fibers {
            counts[fiber.u as usize] = fiber.count;
        }
        counts
    }

    /// `|#Z_f(p) - p| <= c * sqrt(p)`.
    pub fn weil_check(&self, c: f64) -> WeilCheck {
        let dev = self.point_count.abs_diff(self.p) as f64;
        WeilCheck {
            p: self.p,
            point_count: self.point_count,
            // Squared form keeps the comparison exact for integer c.
            passes: dev * dev <= c * c * self.p as f64,
            slack: self.weil_slack,
        }
    }
}

fn weil_slack(count: u64, p: u64) -> f64 {
    count.abs_diff(p) as f64 / (p as f64).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeilCheck {
    pub p: u64,
    pub point_count: u64,
    pub passes: bool,
    pub slack: f64,
}

/// Default constant for the Weil interval: twice the genus bound
/// `(d - 1)(d - 2) / 2` of a plane curve of total degree `d`, at least 2.
pub fn default_weil_constant(f: &BivariatePoly) -> f64 {
    let d = f.deg_total();
    let genus = if d >= 3 { (d - 1) * (d - 2) / 2 } else { 0 };
    2.0 * genus.max(1) as f64
}

/// `f` reduced modulo `q`, laid out for repeated specialisation in `U`.
#[derive(Debug, Clone)]
pub(crate) struct ModCurve {
    q: u64,
    /// `by_v[j][i]` is the coefficient of `U^i V^j` in `[0, q)`.
    by_v: Vec<Vec<u64>>,
}

impl ModCurve {
    pub(crate) fn new(f: &BivariatePoly, q: u64) -> Self {
        assert!(q >= 1 && q <= u32::MAX as u64, "modulus {q} out of range");
        let mut by_v = vec![vec![0; f.deg_u() as usize + 1]; f.deg_v() as usize + 1];
        for ((i, j), c) in f.residues_mod(q) {
            by_v[j as usize][i as usize] = c;
        }
        ModCurve { q, by_v }
    }

    /// Coefficients of `f(u, V) mod q`, lowest degree first, trailing zeros trimmed.
    pub(crate) fn specialize(&self, u: u64) -> Vec<u64> {
        let q = self.q;
        let u = u % q;
        let mut out: Vec<u64> = self
            .by_v
            .iter()
            .map(|row| row.iter().rev().fold(0, |acc, &c| (acc * u + c) % q))
            .collect();
        while out.last() == Some(&0) {
            out.pop();
        }
        out
    }

    pub(crate) fn eval_specialized(coeffs: &[u64], v: u64, q: u64) -> u64 {
        coeffs.iter().rev().fold(0, |acc, &c| (acc * v + c) % q)
    }

    /// Number of `v` in `[0, q)` with `f(u, v) = 0 mod q`, by direct evaluation.
    pub(crate) fn fiber_size(&self, u: u64) -> u64 {
        let g = self.specialize(u);
        if g.is_empty() {
            return self.q;
        }
        (0..self.q)
            .filter(|&v| Self::eval_specialized(&g, v, self.q) == 0)
            .count() as u64
    }
}

/// `(count, smallest)` roots of the polynomial `g` over `F_p`.
fn roots_mod_p(g: &[u64], p: u64) -> (u64, Option<u64>) {
    match g.len() {
        0 => (p, Some(0)),
        1 => (0, None),
        2 => {
            let root = (p - g[0]) % p * inv_mod(g[1], p) % p;
            (1, Some(root))
        }
        3 if p > 2 => {
            let (c, b, a) = (g[0], g[1], g[2]);
            let disc = (b * b % p + p - 4 * a % p * c % p) % p;
            let Some(s) = sqrt_mod(disc, p) else {
                return (0, None);
            };
            let inv2a = inv_mod(2 * a % p, p);
            let neg_b = (p - b) % p;
            let r1 = (neg_b + s) % p * inv2a % p;
            let r2 = (neg_b + p - s) % p * inv2a % p;
            if r1 == r2 {
                (1, Some(r1))
            } else {
                (2, Some(r1.min(r2)))
            }
        }
        _ => {
            let mut count = 0;
            let mut smallest = None;
            for v in 0..p {
                if ModCurve::eval_specialized(g, v, p) == 0 {
                    count += 1;
                    smallest.get_or_insert(v);
                }
            }
            (count, smallest)
        }
    }
}

fn check_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p > PRIME_BUDGET {
        return Err(Error::BudgetExceeded {
            what: "p",
            size: p.to_string(),
            limit: PRIME_BUDGET,
        });
    }
    Ok(())
}

/// Exact local data of `f` at the prime `p`.
///
/// When `f` vanishes identically mod `p` the record has no points, `in_pf`
/// false and `flags.zero` set; callers must keep such primes out of `P_f`.
pub fn local_points(f: &BivariatePoly, p: u64) -> Result<LocalCurveData> {
    check_prime(p)?;
    let reduction = f.reduce_mod(p);
    if reduction.flags.zero {
        return Ok(LocalCurveData::from_fibers(p, Vec::new(), reduction.flags));
    }
    let curve = ModCurve::new(&reduction.poly, p);
    let fibers: Vec<Fiber> = (0..p)
        .into_par_iter()
        .filter_map(|u| {
            let (count, smallest) = roots_mod_p(&curve.specialize(u), p);
            smallest.map(|witness| Fiber { u, witness, count })
        })
        .collect();
    Ok(LocalCurveData::from_fibers(p, fibers, reduction.flags))
}

/// Same record as [`local_points`], computed by the plain double loop over
/// `(u, v)` with no fast paths. Quadratic in `p`.
pub fn local_points_exhaustive(f: &BivariatePoly, p: u64) -> Result<LocalCurveData> {
    check_prime(p)?;
    let reduction = f.reduce_mod(p);
    if reduction.flags.zero {
        return Ok(LocalCurveData::from_fibers(p, Vec::new(), reduction.flags));
    }
    let curve = ModCurve::new(&reduction.poly, p);
    let mut fibers = Vec::new();
    for u in 0..p {
        let g = curve.specialize(u);
        let mut count = 0;
        let mut witness = None;
        for v in 0..p {
            if ModCurve::eval_specialized(&g, v, p) == 0 {
                count += 1;
                witness.get_or_insert(v);
            }
        }
        if let Some(witness) = witness {
            fibers.push(Fiber { u, witness, count });
        }
    }
    Ok(LocalCurveData::from_fibers(p, fibers, reduction.flags))
}

/// `P_f(x)` together with the exact product `M_f(x)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GlobalModulus {
    pub x: u64,
    pub primes: Vec<u64>,
    pub m_value: BigUint,
    pub pi_pf: usize,
    /// Primes `<= x` where `f` reduces to zero; never part of `primes`.
    pub excluded: Vec<u64>,
}

impl GlobalModulus {
    /// `M_f(x)` as a machine word, when it fits.
    pub fn m_u64(&self) -> Option<u64> {
        u64::try_from(&self.m_value).ok()
    }
}

/// Local data for every prime `p <= x`, and the subset forming `P_f(x)`.
pub fn primes_pf(f: &BivariatePoly, x: u64) -> Result<(GlobalModulus, Vec<LocalCurveData>)> {
    if x > PRIME_BUDGET {
        return Err(Error::BudgetExceeded {
            what: "x",
            size: x.to_string(),
            limit: PRIME_BUDGET,
        });
    }
    let all: Vec<LocalCurveData> = primes_up_to(x)
        .into_par_iter()
        .map(|p| local_points(f, p))
        .collect::<Result<_>>()?;

    let mut excluded = Vec::new();
    let mut primes = Vec::new();
    let mut m_value = BigUint::one();
    let mut retained = Vec::new();
    for data in all {
        if data.is_degenerate() {
            log::warn!(
                "{f} vanishes identically mod {}; prime excluded from P_f",
                data.p
            );
            excluded.push(data.p);
        } else if data.in_pf {
            primes.push(data.p);
            m_value *= data.p;
            retained.push(data);
        }
    }
    let global = GlobalModulus {
        x,
        pi_pf: primes.len(),
        primes,
        m_value,
        excluded,
    };
    Ok((global, retained))
}

/// Weil interval check at one prime.
pub fn weil_check(f: &BivariatePoly, p: u64, c: f64) -> Result<WeilCheck> {
    Ok(local_points(f, p)?.weil_check(c))
}

pub(crate) fn check_modulus(q: u64) -> Result<()> {
    if q == 0 || q > MODULUS_BUDGET {
        return Err(Error::BudgetExceeded {
            what: "q",
            size: q.to_string(),
            limit: MODULUS_BUDGET,
        });
    }
    if !is_squarefree(q) {
        return Err(Error::NotSquarefree(q));
    }
    Ok(())
}

/// `r_q(n) = #{m in [0, q) : f(n, m) = 0 mod q}` for every `n` in `[0, q)`,
/// by direct double loop. Requires squarefree `q <= MODULUS_BUDGET`.
pub fn fibers_mod(f: &BivariatePoly, q: u64) -> Result<Vec<u64>> {
    check_modulus(q)?;
    let curve = ModCurve::new(f, q);
    Ok((0..q)
        .into_par_iter()
        .map(|n| curve.fiber_size(n))
        .collect())
}

/// `#Z_f(q)` by direct enumeration of all pairs `(n, m)` in `[0, q)^2`.
pub fn count_points_mod(f: &BivariatePoly, q: u64) -> Result<u64> {
    Ok(fibers_mod(f, q)?.iter().sum())
}

/// Two routes to `#Z_f(M_f(x))`: enumeration modulo `M_f(x)` and the product
/// of the local counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProductFormula {
    pub modulus: u64,
    pub lhs: u64,
    pub rhs: BigUint,
    pub equal: bool,
}

pub fn product_formula_check(f: &BivariatePoly, x: u64) -> Result<ProductFormula> {
    let (global, local) = primes_pf(f, x)?;
    let modulus = global_modulus_in_budget(&global)?;
    let lhs = count_points_mod(f, modulus)?;
    let rhs: BigUint = local.iter().map(|d| BigUint::from(d.point_count)).product();
    Ok(ProductFormula {
        modulus,
        lhs,
        equal: rhs == BigUint::from(lhs),
        rhs,
    })
}

pub(crate) fn global_modulus_in_budget(global: &GlobalModulus) -> Result<u64> {
    match global.m_u64() {
        Some(m) if m <= MODULUS_BUDGET => Ok(m),
        _ => Err(Error::BudgetExceeded {
            what: "M_f(x)",
            size: global.m_value.to_string(),
            limit: MODULUS_BUDGET,
        }),
    }
}

/// Natural logarithm of an arbitrary-size positive integer.
pub fn ln_biguint(v: &BigUint) -> f64 {
    use num_traits::ToPrimitive;
    let bits = v.bits();
    if bits <= 1000 {
        return v.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 1000;
    (v >> shift).to_f64().expect("fits in f64").ln() + shift as f64 * std::f64::consts::LN_2
}

/// How close `#Z_f(M_f(x))` is to `M_f(x)` on a log scale.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountExponent {
    pub x: u64,
    /// `log #Z_f(M_f(x)) / log M_f(x)`.
    pub ratio: f64,
    /// `|ratio - 1|`.
    pub gap: f64,
    /// `gap * sqrt(x)`: the constant needed for `gap <= c0 / sqrt(x)`.
    pub c0: f64,
}

/// Exponent of `#Z_f(M_f(x))` relative to `M_f(x)`, using the product of the
/// local counts for the numerator.
pub fn point_count_exponent(f: &BivariatePoly, x: u64) -> Result<CountExponent> {
    let (global, local) = primes_pf(f, x)?;
    if global.primes.is_empty() {
        return Err(Error::InvalidConfig(format!("P_f({x}) is empty")));
    }
    let count: BigUint = local.iter().map(|d| BigUint::from(d.point_count)).product();
    let ratio = ln_biguint(&count) / ln_biguint(&global.m_value);
    let gap = (ratio - 1.0).abs();
    Ok(CountExponent {
        x,
        ratio,
        gap,
        c0: gap * (x as f64).sqrt(),
    })
}
