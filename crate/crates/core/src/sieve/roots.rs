//! Exact integer-root search for `f(n, V)`.
//!
//! The polynomial is split as `V^k * h(V)`, `h` is reduced to its squarefree
//! part `s`, and the real roots of `s` inside the Cauchy interval are located
//! with a Sturm sequence by bisection over integer endpoints. A cell `(a, a+1]`
//! containing a root can only contain the integer root `a + 1`, which is then
//! tested by exact evaluation. No floating point is involved.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::decimal;
use crate::error::{Error, Result};
use crate::poly::{BivariatePoly, UnivariatePoly};

/// Half-open interval `(lo, hi]` holding exactly one real root.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsolatingInterval {
    #[serde(with = "decimal")]
    pub lo: BigInt,
    #[serde(with = "decimal")]
    pub hi: BigInt,
}

/// An integer tested for being a root, with its exact value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    #[serde(with = "decimal")]
    pub m: BigInt,
    #[serde(with = "decimal")]
    pub value: BigInt,
}

/// Everything the integer-root search looked at.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootExclusion {
    /// `f(n, V)`, lowest degree first.
    #[serde(with = "decimal::vec")]
    pub coefficients: Vec<BigInt>,
    /// Multiplicity of `V = 0` as a root.
    pub zero_multiplicity: usize,
    /// Cauchy bound of the squarefree part: real roots lie in `[-bound, bound]`.
    #[serde(with = "decimal")]
    pub bound: BigInt,
    pub intervals: Vec<IsolatingInterval>,
    pub candidates: Vec<Candidate>,
}

impl RootExclusion {
    /// Integer roots, increasing.
    pub fn integer_roots(&self) -> Vec<BigInt> {
        let mut roots: Vec<BigInt> = self
            .candidates
            .iter()
            .filter(|c| c.value.is_zero())
            .map(|c| c.m.clone())
            .collect();
        roots.sort();
        roots.dedup();
        roots
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.iter().all(|c| !c.value.is_zero())
    }
}

/// Sturm sequence of a squarefree polynomial of positive degree.
struct SturmChain(Vec<UnivariatePoly>);

impl SturmChain {
    fn new(s: &UnivariatePoly) -> Self {
        let mut chain = vec![s.clone(), s.derivative()];
        loop {
            let n = chain.len();
            let (a, b) = (&chain[n - 2], &chain[n - 1]);
            if b.degree().unwrap_or(0) == 0 {
                break;
            }
            let prem = a.pseudo_rem(b);
            if prem.is_zero() {
                break;
            }
            // prem = lc(b)^e * rem; the next member is -rem up to a positive factor.
            let e = a.degree().unwrap() - b.degree().unwrap() + 1;
            let scale_negative = b.leading().unwrap().is_negative() && e % 2 == 1;
            let content = prem.content();
            let next: Vec<BigInt> = prem
                .coefficients()
                .iter()
                .map(|c| {
                    let c = c / &content;
                    if scale_negative {
                        c
                    } else {
                        -c
                    }
                })
                .collect();
            chain.push(UnivariatePoly::new(next));
        }
        SturmChain(chain)
    }

    fn variations(&self, x: &BigInt) -> usize {
        let mut last = 0i8;
        let mut changes = 0;
        for p in &self.0 {
            let s = p.sign_at(x);
            if s == 0 {
                continue;
            }
            if last != 0 && s != last {
                changes += 1;
            }
            last = s;
        }
        changes
    }
}

/// Integer roots of a nonzero polynomial, with the full search record.
pub fn integer_roots(g: &UnivariatePoly) -> RootExclusion {
    assert!(!g.is_zero(), "integer_roots of the zero polynomial");
    let (zero_multiplicity, h) = g.split_zero_root();
    let mut candidates = Vec::new();
    if zero_multiplicity > 0 {
        candidates.push(Candidate {
            m: BigInt::zero(),
            value: BigInt::zero(),
        });
    }

    let s = h.squarefree_part();
    let bound = s.cauchy_bound();
    let mut intervals = Vec::new();

    if s.degree().unwrap_or(0) > 0 {
        let chain = SturmChain::new(&s);
        let lo = -&bound - BigInt::one();
        let hi = bound.clone();
        let (vlo, vhi) = (chain.variations(&lo), chain.variations(&hi));
        // Explicit stack, pushing the upper half first so cells pop in increasing order.
        let mut stack = vec![(lo, hi, vlo, vhi, false)];
        while let Some((lo, hi, vlo, vhi, parent_isolated)) = stack.pop() {
            let count = vlo - vhi;
            if count == 0 {
                continue;
            }
            if count == 1 && !parent_isolated {
                intervals.push(IsolatingInterval {
                    lo: lo.clone(),
                    hi: hi.clone(),
                });
            }
            if &hi - &lo == BigInt::one() {
                let value = g.eval(&hi);
                candidates.push(Candidate { m: hi, value });
                continue;
            }
            let isolated = parent_isolated || count == 1;
            let mid = (&lo + &hi).div_floor(&BigInt::from(2));
            let vmid = chain.variations(&mid);
            stack.push((mid.clone(), hi, vmid, vhi, isolated));
            stack.push((lo, mid, vlo, vmid, isolated));
        }
    }

    candidates.sort_by(|a, b| a.m.cmp(&b.m));
    RootExclusion {
        coefficients: g.coefficients().to_vec(),
        zero_multiplicity,
        bound,
        intervals,
        candidates,
    }
}

/// The root search for `f(n, V)`.
pub fn root_exclusion(f: &BivariatePoly, n: &BigInt) -> Result<RootExclusion> {
    let g = f.specialize_u(n);
    if g.is_zero() {
        return Err(Error::ZeroSpecialization { n: n.clone() });
    }
    Ok(integer_roots(&g))
}

/// Smallest integer `m` with `f(n, m) = 0`, if any.
pub fn integer_solution(f: &BivariatePoly, n: &BigInt) -> Result<Option<BigInt>> {
    Ok(root_exclusion(f, n)?.integer_roots().into_iter().next())
}
