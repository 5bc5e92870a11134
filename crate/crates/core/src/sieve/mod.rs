//! Pseudopoint search.
//!
//! An integer `n` survives the sieve when `n mod p` is admissible for every
//! constraint prime. Survivors are then checked over the integers (no root of
//! `f(n, V)`, or not a power of the base) and certified.
//!
//! The scan runs over fixed-length segments. Within a segment every small
//! modulus strikes out its forbidden residue classes with stride-`p` marking;
//! moduli longer than the segment are tested per surviving position. Batches
//! of segments are sieved in parallel and consumed in increasing order, so
//! the output never depends on the thread count.

mod certificate;
mod roots;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use certificate::{
    verify_certificate, verify_certificate_strict, Exclusion, PowerExclusion,
    PseudopointCertificate, Witness, TOOL_VERSION,
};
pub use roots::{
    integer_roots, integer_solution, root_exclusion, Candidate, IsolatingInterval, RootExclusion,
};

use crate::arith::{primes_up_to, ResidueSet};
use crate::error::{Error, Result};
use crate::local::{ln_biguint, primes_pf, GlobalModulus, LocalCurveData};
use crate::poly::BivariatePoly;

pub const DEFAULT_CHUNK: u64 = 1 << 16;
const SEGMENTS_PER_BATCH: u64 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    /// `n mod p` admissible for every `p in P_f(x)`.
    Plain,
    /// Plain constraints plus `n = 1 mod 8` and `gcd(n, p) = 1` for odd `p <= x`.
    Lehmer,
    /// `n = g^k mod p` for every prime `p <= x`, `n` not a power of `g`.
    Pseudopower { base: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub curve: BivariatePoly,
    pub x: u64,
    /// Exclusive upper end of the scan. `None` picks the mode default.
    pub n_ceiling: Option<BigUint>,
    pub mode: SearchMode,
    pub count_wanted: usize,
    pub chunk: u64,
}

impl SearchConfig {
    pub fn new(curve: BivariatePoly, x: u64) -> Self {
        SearchConfig {
            curve,
            x,
            n_ceiling: None,
            mode: SearchMode::Plain,
            count_wanted: 1,
            chunk: DEFAULT_CHUNK,
        }
    }

    pub fn with_mode(mut self, mode: SearchMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_ceiling(mut self, ceiling: impl Into<BigUint>) -> Self {
        self.n_ceiling = Some(ceiling.into());
        self
    }

    pub fn with_count(mut self, count: usize) -> Self {
        self.count_wanted = count;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.x < 2 {
            return bad(format!("x = {} must be at least 2", self.x));
        }
        if self.n_ceiling.as_ref().is_some_and(|c| c < &BigUint::one()) {
            return bad("ceiling must be at least 1".into());
        }
        if self.chunk == 0 {
            return bad("chunk must be positive".into());
        }
        if self.count_wanted == 0 {
            return bad("count must be positive".into());
        }
        match self.mode {
            SearchMode::Plain | SearchMode::Lehmer if self.curve.deg_v() < 2 => bad(format!(
                "deg_V f = {} but the search needs deg_V f >= 2",
                self.curve.deg_v()
            )),
            SearchMode::Lehmer if self.x < 3 => bad("Lehmer mode needs x >= 3".into()),
            SearchMode::Pseudopower { base } if base.unsigned_abs() < 2 => {
                bad(format!("base {base} must satisfy |g| >= 2"))
            }
            _ => Ok(()),
        }
    }
}

/// Residues allowed modulo one constraint modulus.
#[derive(Debug, Clone)]
struct Constraint {
    modulus: u64,
    allowed: ResidueSet,
}

impl Constraint {
    fn from_data(data: &LocalCurveData) -> Self {
        Constraint {
            modulus: data.p,
            allowed: data.admissible.clone(),
        }
    }
}

/// Combined residue conditions for one search.
#[derive(Debug, Clone)]
pub struct Sieve {
    constraints: Vec<Constraint>,
    period: BigUint,
}

impl Sieve {
    /// Survivors in `[lo, lo + len)`, increasing.
    fn segment(&self, lo: u64, len: u64) -> Vec<u64> {
        let words = len.div_ceil(64) as usize;
        let mut alive = vec![u64::MAX; words];
        if !len.is_multiple_of(64) {
            alive[words - 1] = (1u64 << (len % 64)) - 1;
        }
        let mut large = Vec::new();
        for c in &self.constraints {
            let m = c.modulus;
            if m > len {
                large.push(c);
                continue;
            }
            let base = lo % m;
            for r in 0..m {
                if c.allowed.contains(r) {
                    continue;
                }
                let mut pos = (r + m - base) % m;
                while pos < len {
                    alive[(pos / 64) as usize] &= !(1 << (pos % 64));
                    pos += m;
                }
            }
        }
        let mut out = Vec::new();
        for (w, &word) in alive.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let n = lo + w as u64 * 64 + bits.trailing_zeros() as u64;
                bits &= bits - 1;
                if large.iter().all(|c| c.allowed.contains(n % c.modulus)) {
                    out.push(n);
                }
            }
        }
        out
    }

    /// Every survivor in `[lo, hi)`.
    pub fn survivors(&self, lo: u64, hi: u64) -> Vec<u64> {
        let mut out = Vec::new();
        let mut start = lo;
        while start < hi {
            let len = (hi - start).min(DEFAULT_CHUNK);
            out.extend(self.segment(start, len));
            start += len;
        }
        out
    }

    /// Product of the constraint moduli: the residue pattern repeats with this period.
    pub fn period(&self) -> &BigUint {
        &self.period
    }
}

/// Everything the search needs besides the scan itself.
struct Plan {
    sieve: Sieve,
    global: GlobalModulus,
    local: Vec<LocalCurveData>,
    start: u64,
    ceiling: BigUint,
}

fn plan(config: &SearchConfig) -> Result<Plan> {
    config.validate()?;
    let (global, local, constraints, start) = match config.mode {
        SearchMode::Plain => {
            let (global, local) = primes_pf(&config.curve, config.x)?;
            let cs = local.iter().map(Constraint::from_data).collect();
            (global, local, cs, 0)
        }
        SearchMode::Lehmer => {
            let (global, local) = primes_pf(&config.curve, config.x)?;
            let mut cs: Vec<Constraint> = local.iter().map(Constraint::from_data).collect();
            for p in primes_up_to(config.x).into_iter().skip(1) {
                let mut units = ResidueSet::new(p);
                for r in 1..p {
                    units.insert(r);
                }
                cs.push(Constraint {
                    modulus: p,
                    allowed: units,
                });
            }
            let mut one_mod_8 = ResidueSet::new(8);
            one_mod_8.insert(1);
            cs.push(Constraint {
                modulus: 8,
                allowed: one_mod_8,
            });
            (global, local, cs, 1)
        }
        SearchMode::Pseudopower { base } => {
            let primes = primes_up_to(config.x);
            let cs = primes
                .iter()
                .map(|&p| Constraint {
                    modulus: p,
                    allowed: power_residues(base, p),
                })
                .collect();
            let global = GlobalModulus {
                x: config.x,
                pi_pf: primes.len(),
                m_value: primes.iter().map(|&p| BigUint::from(p)).product(),
                primes,
                excluded: Vec::new(),
            };
            (global, Vec::new(), cs, 1)
        }
    };

    let period = constraints
        .iter()
        .fold(BigUint::one(), |acc, c| acc.lcm(&BigUint::from(c.modulus)));
    let ceiling = match (&config.n_ceiling, config.mode) {
        (Some(c), _) => c.clone(),
        (None, SearchMode::Plain) => global.m_value.clone(),
        // One period can be exhausted by perfect squares or powers
        // (1, 25, 49 below 73 for x = 3), so scan period^2 instead.
        (None, _) => &period * &period,
    };
    Ok(Plan {
        sieve: Sieve {
            constraints,
            period,
        },
        global,
        local,
        start,
        ceiling,
    })
}

/// `{g^k mod p : k >= 0}`.
fn power_residues(base: i64, p: u64) -> ResidueSet {
    let g = base.rem_euclid(p as i64) as u64;
    let mut set = ResidueSet::new(p);
    let mut acc = 1 % p;
    while !set.contains(acc) {
        set.insert(acc);
        acc = acc * g % p;
    }
    set
}

/// Smallest `k` with `g^k = n mod p`.
fn discrete_log(base: i64, n: u64, p: u64) -> u64 {
    let g = base.rem_euclid(p as i64) as u64;
    let target = n % p;
    let mut acc = 1 % p;
    for k in 0..=p {
        if acc == target {
            return k;
        }
        acc = acc * g % p;
    }
    unreachable!("{n} is not a power of {base} mod {p}")
}

/// The residue sieve for a configuration, for inspecting survivors directly.
pub fn build_sieve(config: &SearchConfig) -> Result<Sieve> {
    Ok(plan(config)?.sieve)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchReport {
    pub certificates: Vec<PseudopointCertificate>,
    /// Survivors rejected because they lie on the curve (or are true powers),
    /// counted up to the last certificate or the ceiling.
    pub disqualified: u64,
    pub ceiling: BigUint,
    pub global: GlobalModulus,
}

/// Runs the search, returning whatever was found below the ceiling.
pub fn search(config: &SearchConfig) -> Result<SearchReport> {
    let plan = plan(config)?;
    let end = plan.ceiling.to_u64().unwrap_or(u64::MAX);
    let chunk = config.chunk;

    let mut found: Vec<u64> = Vec::new();
    let mut disqualified = 0;
    let mut lo = plan.start;
    'scan: while lo < end && found.len() < config.count_wanted {
        let segments: Vec<(u64, u64)> = (0..SEGMENTS_PER_BATCH)
            .map_while(|k| {
                let s = lo.checked_add(k.checked_mul(chunk)?)?;
                (s < end).then(|| (s, (end - s).min(chunk)))
            })
            .collect();
        let Some(&(last_lo, last_len)) = segments.last() else {
            break;
        };
        let verdicts: Vec<Vec<(u64, bool)>> = segments
            .par_iter()
            .map(|&(s, len)| {
                plan.sieve
                    .segment(s, len)
                    .into_iter()
                    .map(|n| (n, is_exceptional(config, n)))
                    .collect()
            })
            .collect();
        for (n, ok) in verdicts.into_iter().flatten() {
            if ok {
                found.push(n);
                if found.len() == config.count_wanted {
                    break 'scan;
                }
            } else {
                disqualified += 1;
            }
        }
        lo = last_lo + last_len;
    }

    let certificates = found.iter().map(|&n| certify(config, &plan, n)).collect();
    Ok(SearchReport {
        certificates,
        disqualified,
        ceiling: plan.ceiling,
        global: plan.global,
    })
}

/// True when the sieve survivor `n` has no integer point (or is not a power).
fn is_exceptional(config: &SearchConfig, n: u64) -> bool {
    match config.mode {
        SearchMode::Plain | SearchMode::Lehmer => {
            match integer_solution(&config.curve, &BigInt::from(n)) {
                Ok(root) => root.is_none(),
                // f(n, V) = 0 identically: every m is a solution.
                Err(_) => false,
            }
        }
        SearchMode::Pseudopower { base } => {
            certificate::power_exclusion(&BigUint::from(n), base).is_ok()
        }
    }
}

fn certify(config: &SearchConfig, plan: &Plan, n: u64) -> PseudopointCertificate {
    let n_big = BigUint::from(n);
    let (curve, witnesses, exclusion) = match config.mode {
        SearchMode::Plain | SearchMode::Lehmer => {
            let witnesses = plan
                .local
                .iter()
                .map(|d| Witness {
                    p: d.p,
                    w: BigInt::from(d.witness(n).expect("sieve survivor is admissible")),
                })
                .collect();
            let rec = root_exclusion(&config.curve, &BigInt::from(n))
                .expect("survivor passed the root check");
            (
                Some(config.curve.to_string()),
                witnesses,
                Exclusion::NoIntegerRoot(rec),
            )
        }
        SearchMode::Pseudopower { base } => {
            let witnesses = plan
                .global
                .primes
                .iter()
                .map(|&p| Witness {
                    p,
                    w: BigInt::from(discrete_log(base, n, p)),
                })
                .collect();
            let rec = certificate::power_exclusion(&n_big, base).expect("survivor is not a power");
            (None, witnesses, Exclusion::NotAPower(rec))
        }
    };
    PseudopointCertificate {
        mode: config.mode,
        curve,
        x: config.x,
        n: n_big,
        primes: plan.global.primes.clone(),
        witnesses,
        exclusion,
        tool_version: TOOL_VERSION.to_string(),
    }
}

/// The first `count_wanted` pseudopoints, smallest first. The first one is `N_f(x)`.
pub fn find_pseudopoints(config: &SearchConfig) -> Result<Vec<PseudopointCertificate>> {
    let report = search(config)?;
    if report.certificates.is_empty() {
        return Err(Error::NotFound {
            ceiling: report.ceiling.to_string(),
            disqualified: report.disqualified,
        });
    }
    Ok(report.certificates)
}

fn first(config: SearchConfig) -> Result<PseudopointCertificate> {
    Ok(find_pseudopoints(&config.with_count(1))?.remove(0))
}

/// Smallest nonsquare `n = 1 mod 8` with `(n/p) = 1` for every odd prime `p <= x`.
pub fn lehmer_pseudosquares(x: u64, n_ceiling: Option<BigUint>) -> Result<PseudopointCertificate> {
    let mut config = SearchConfig::new("U - V^2".parse()?, x).with_mode(SearchMode::Lehmer);
    config.n_ceiling = n_ceiling;
    first(config)
}

/// Smallest `n > 0` congruent to a power of `g` modulo every prime `p <= x`
/// without being a power of `g`.
pub fn pseudopowers(g: i64, x: u64, n_ceiling: Option<BigUint>) -> Result<PseudopointCertificate> {
    // The curve is unused in this mode; U - V^2 only satisfies validation.
    let mut config =
        SearchConfig::new("U - V^2".parse()?, x).with_mode(SearchMode::Pseudopower { base: g });
    config.n_ceiling = n_ceiling;
    first(config)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingRow {
    pub x: u64,
    pub pi_pf: usize,
    #[serde(with = "crate::decimal")]
    pub m_value: BigUint,
    #[serde(with = "crate::decimal")]
    pub n: BigUint,
    /// `log N_f(x) / log M_f(x)`.
    pub ratio: f64,
}

/// `N_f(x)` against `M_f(x)` for each `x`.
pub fn scaling_table(f: &BivariatePoly, xs: &[u64]) -> Result<Vec<ScalingRow>> {
    xs.iter()
        .map(|&x| {
            let cert = first(SearchConfig::new(f.clone(), x))?;
            let report_m = primes_pf(f, x)?.0;
            let ratio = ln_biguint(&cert.n) / ln_biguint(&report_m.m_value);
            Ok(ScalingRow {
                x,
                pi_pf: report_m.pi_pf,
                m_value: report_m.m_value,
                n: cert.n,
                ratio,
            })
        })
        .collect()
}
