//! Command-line front end: local curve data, the global modulus,
//! exponential sums, pseudopoint searches, identity checks and scaling rows.
//!
//! [`run`] returns the process exit code: 0 on success, 1 on a domain error
//! (no pseudopoint below the ceiling, a failed check, an exceeded budget),
//! 2 on a usage error.

pub mod cache;
pub mod output;

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use pseudopoints::expsum::{crt_identity_residuals, parseval_check, ExpSumRecord, PointFibers};
use pseudopoints::local::{
    default_weil_constant, local_points, product_formula_check, LocalCurveData,
};
use pseudopoints::sieve::{
    lehmer_pseudosquares, pseudopowers, scaling_table, search, verify_certificate_strict,
    Exclusion, PseudopointCertificate, SearchConfig, SearchMode,
};
use pseudopoints::{arith::primes_up_to, BivariatePoly};
use rayon::prelude::*;

use cache::LocalCache;
use output::{Cell, Format, Table};

/// Tolerance of the floating-point identity checks.
pub const TOLERANCE: f64 = 1e-6;
/// Frequencies used by the CRT identity check in `verify`.
const CRT_FREQUENCIES: std::ops::RangeInclusive<i64> = 1..=20;

#[derive(Debug, Parser)]
#[command(
    name = "pseudopoints",
    version,
    about = "Local solvability of plane curves and pseudopoint search"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Point counts, admissible residues and Weil slack for every prime <= x
    Local {
        #[command(flatten)]
        curve: CurveArgs,
        /// Constant c in |#Z_f(p) - p| <= c sqrt(p); defaults to 2 max(1, genus bound)
        #[arg(long)]
        weil_constant: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// The primes with points and their product M_f(x)
    Mfx {
        #[command(flatten)]
        curve: CurveArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Exponential sums along the curve, per prime or modulo M_f(x)
    Expsum {
        #[command(flatten)]
        curve: CurveArgs,
        /// Frequencies to evaluate (default: every nonzero a mod p, or 1..=20 with --global)
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        a: Vec<i64>,
        /// Sum over Z_f(M_f(x)) instead of each Z_f(p)
        #[arg(long)]
        global: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Smallest x-pseudopoints of a curve
    Search {
        #[command(flatten)]
        curve: CurveArgs,
        #[command(flatten)]
        search: SearchArgs,
        /// Add the classical pseudosquare constraints (n = 1 mod 8, coprime to odd p <= x)
        #[arg(long)]
        lehmer: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Smallest classical (Lehmer) pseudosquare for x
    Pseudosquare {
        #[arg(long)]
        x: u64,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Smallest x-pseudopower to a base
    Pseudopower {
        #[arg(long, allow_negative_numbers = true)]
        base: i64,
        #[arg(long)]
        x: u64,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Re-check certificates, or run the identity checks for a curve
    Verify {
        /// Certificate file (a JSON object or array) produced by search --format json
        #[arg(long, conflicts_with_all = ["curve", "x"])]
        certificate: Option<PathBuf>,
        #[arg(long, value_parser = parse_curve, required_unless_present = "certificate")]
        curve: Option<BivariatePoly>,
        #[arg(long, required_unless_present = "certificate")]
        x: Option<u64>,
        #[arg(long)]
        weil_constant: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// N_f(x) against M_f(x) for several x
    Scaling {
        #[arg(long, value_parser = parse_curve)]
        curve: BivariatePoly,
        /// Comma-separated list of x values
        #[arg(long, value_delimiter = ',', required = true)]
        x: Vec<u64>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Args)]
struct CurveArgs {
    /// Curve f(U, V), e.g. "V^2 - U^3 - 1"
    #[arg(long, value_parser = parse_curve)]
    curve: BivariatePoly,
    #[arg(long)]
    x: u64,
}

#[derive(Debug, Args)]
struct SearchArgs {
    /// Exclusive upper end of the scan (decimal)
    #[arg(long)]
    ceiling: Option<BigUint>,
    /// Number of pseudopoints wanted
    #[arg(long, default_value_t = 1)]
    count: usize,
}

#[derive(Debug, Args)]
struct Common {
    /// Write output here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
    /// Local-data cache file (default: $PSEUDOPOINTS_CACHE_DIR/local-data.jsonl)
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Worker threads (default: all cores)
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: Option<u64>,
}

fn parse_curve(text: &str) -> Result<BivariatePoly, String> {
    text.parse().map_err(|e: pseudopoints::Error| e.to_string())
}

/// Runs one command line (including the program name) and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(Outcome::Success) => 0,
        Ok(Outcome::Failed) => 1,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}

enum Outcome {
    Success,
    /// Output was produced but reports a failure (e.g. a check did not pass).
    Failed,
}

fn execute(command: Command) -> anyhow::Result<Outcome> {
    let common = match &command {
        Command::Local { common, .. }
        | Command::Mfx { common, .. }
        | Command::Expsum { common, .. }
        | Command::Search { common, .. }
        | Command::Pseudosquare { common, .. }
        | Command::Pseudopower { common, .. }
        | Command::Verify { common, .. }
        | Command::Scaling { common, .. } => common,
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = common.jobs {
        builder = builder.num_threads(jobs as usize);
    }
    let pool = builder.build().context("building the worker pool")?;
    let (format, out) = (common.format, common.out.clone());
    let mut cache = match cache::resolve_path(common.cache.as_deref()) {
        Some(path) => {
            let cache = LocalCache::open(&path)
                .with_context(|| format!("reading cache {}", path.display()))?;
            if cache.warnings() > 0 {
                log::warn!("{} corrupt cache line(s) skipped", cache.warnings());
            }
            cache
        }
        None => LocalCache::disabled(),
    };

    let (text, outcome) = pool.install(|| dispatch(command, format, &mut cache))?;
    cache.flush().context("writing the cache")?;
    match out {
        Some(path) => {
            fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{text}"),
    }
    Ok(outcome)
}

fn dispatch(
    command: Command,
    format: Format,
    cache: &mut LocalCache,
) -> anyhow::Result<(String, Outcome)> {
    let table = |t: Table| Ok((t.render(format)?, Outcome::Success));
    match command {
        Command::Local {
            curve: CurveArgs { curve, x },
            weil_constant,
            ..
        } => {
            let c = weil_constant.unwrap_or_else(|| default_weil_constant(&curve));
            let mut t = Table::new(&[
                "p",
                "point_count",
                "admissible",
                "in_pf",
                "degenerate",
                "weil_slack",
                "weil_ok",
            ]);
            for d in local_data(&curve, x, cache)? {
                let weil = d.weil_check(c);
                t.push(vec![
                    d.p.into(),
                    d.point_count.into(),
                    d.admissible.count().into(),
                    d.in_pf.into(),
                    d.is_degenerate().into(),
                    d.weil_slack.into(),
                    weil.passes.into(),
                ]);
            }
            table(t)
        }
        Command::Mfx {
            curve: CurveArgs { curve, x },
            ..
        } => {
            let data = local_data(&curve, x, cache)?;
            let primes: Vec<u64> = data.iter().filter(|d| d.in_pf).map(|d| d.p).collect();
            let excluded: Vec<u64> = data
                .iter()
                .filter(|d| d.is_degenerate())
                .map(|d| d.p)
                .collect();
            let m: BigUint = primes.iter().map(|&p| BigUint::from(p)).product();
            let mut t = Table::new(&["x", "pi_pf", "m_f", "primes", "excluded"]);
            t.push(vec![
                x.into(),
                primes.len().into(),
                Cell::big(m),
                Cell::text(join(&primes)),
                Cell::text(join(&excluded)),
            ]);
            table(t)
        }
        Command::Expsum {
            curve: CurveArgs { curve, x },
            a,
            global,
            ..
        } => {
            let mut t = Table::new(&["q", "a", "re", "im", "magnitude", "normalized"]);
            let mut push = |s: ExpSumRecord| {
                t.push(vec![
                    s.q.into(),
                    s.a.into(),
                    s.value.re.into(),
                    s.value.im.into(),
                    s.magnitude.into(),
                    s.normalized.into(),
                ])
            };
            if global {
                let (global, _) = pseudopoints::local::primes_pf(&curve, x)?;
                let Some(m) = global.m_u64() else {
                    bail!("M_f({x}) = {} is too large to enumerate", global.m_value);
                };
                let freqs = if a.is_empty() {
                    CRT_FREQUENCIES.collect()
                } else {
                    a
                };
                let fibers = PointFibers::global(&curve, m)?;
                for s in freqs.iter().map(|&a| fibers.exp_sum(a)) {
                    push(s);
                }
            } else {
                for d in local_data(&curve, x, cache)?.iter().filter(|d| d.in_pf) {
                    let fibers = PointFibers::local(d);
                    let freqs: Vec<i64> = if a.is_empty() {
                        (1..d.p as i64).collect()
                    } else {
                        a.clone()
                    };
                    for s in freqs.iter().map(|&a| fibers.exp_sum(a)) {
                        push(s);
                    }
                }
            }
            table(t)
        }
        Command::Search {
            curve: CurveArgs { curve, x },
            search: args,
            lehmer,
            ..
        } => {
            let mode = if lehmer {
                SearchMode::Lehmer
            } else {
                SearchMode::Plain
            };
            let mut config = SearchConfig::new(curve, x)
                .with_mode(mode)
                .with_count(args.count);
            config.n_ceiling = args.ceiling;
            let report = search(&config)?;
            if report.certificates.is_empty() {
                return Err(pseudopoints::Error::NotFound {
                    ceiling: report.ceiling.to_string(),
                    disqualified: report.disqualified,
                }
                .into());
            }
            log::info!(
                "{} survivor(s) disqualified by integer points below {}",
                report.disqualified,
                report.certificates.last().unwrap().n
            );
            certificates(&report.certificates, format)
        }
        Command::Pseudosquare {
            x, search: args, ..
        } => single_search(args, |ceiling| lehmer_pseudosquares(x, ceiling), format),
        Command::Pseudopower {
            base,
            x,
            search: args,
            ..
        } => single_search(args, |ceiling| pseudopowers(base, x, ceiling), format),
        Command::Verify {
            certificate: Some(path),
            ..
        } => verify_certificates(&path, format),
        Command::Verify {
            curve: Some(curve),
            x: Some(x),
            weil_constant,
            ..
        } => verify_identities(&curve, x, weil_constant, format),
        Command::Verify { .. } => unreachable!("clap enforces --certificate or --curve/--x"),
        Command::Scaling { curve, x, .. } => {
            let mut t = Table::new(&["x", "pi_pf", "m_f", "n_f", "log_ratio"]);
            for row in scaling_table(&curve, &x)? {
                t.push(vec![
                    row.x.into(),
                    row.pi_pf.into(),
                    Cell::big(row.m_value),
                    Cell::big(row.n),
                    row.ratio.into(),
                ]);
            }
            table(t)
        }
    }
}

fn join(values: &[u64]) -> String {
    values
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

/// Local data for every prime `<= x`, taken from the cache where possible.
fn local_data(
    f: &BivariatePoly,
    x: u64,
    cache: &mut LocalCache,
) -> anyhow::Result<Vec<LocalCurveData>> {
    if x > pseudopoints::local::PRIME_BUDGET {
        return Err(pseudopoints::Error::BudgetExceeded {
            what: "x",
            size: x.to_string(),
            limit: pseudopoints::local::PRIME_BUDGET,
        }
        .into());
    }
    let key = f.to_string();
    let primes = primes_up_to(x);
    let missing: Vec<u64> = primes
        .iter()
        .copied()
        .filter(|&p| cache.get(&key, p).is_none())
        .collect();
    let fresh: Vec<LocalCurveData> = missing
        .par_iter()
        .map(|&p| local_points(f, p))
        .collect::<pseudopoints::Result<_>>()?;
    for d in fresh {
        cache.insert(&key, d);
    }
    Ok(primes
        .iter()
        .map(|&p| cache.get(&key, p).expect("just inserted").clone())
        .collect())
}

fn single_search(
    args: SearchArgs,
    find: impl Fn(Option<BigUint>) -> pseudopoints::Result<PseudopointCertificate>,
    format: Format,
) -> anyhow::Result<(String, Outcome)> {
    if args.count != 1 {
        bail!("--count is only supported by search");
    }
    certificates(&[find(args.ceiling)?], format)
}

fn certificates(
    certs: &[PseudopointCertificate],
    format: Format,
) -> anyhow::Result<(String, Outcome)> {
    let text = match format {
        Format::Json => {
            let mut text = serde_json::to_string_pretty(certs)?;
            text.push('\n');
            text
        }
        Format::Csv => {
            let mut t = Table::new(&["n", "x", "mode", "primes", "witnesses", "exclusion"]);
            for c in certs {
                let witnesses = c
                    .witnesses
                    .iter()
                    .map(|w| format!("{}:{}", w.p, w.w))
                    .collect::<Vec<_>>()
                    .join(" ");
                let exclusion = match &c.exclusion {
                    Exclusion::NoIntegerRoot(r) => format!(
                        "no integer root in [-{}, {}] ({} candidate(s))",
                        r.bound,
                        r.bound,
                        r.candidates.len()
                    ),
                    Exclusion::NotAPower(p) => {
                        format!("not a power of {} ({} powers)", p.base, p.powers.len())
                    }
                };
                t.push(vec![
                    Cell::big(&c.n),
                    c.x.into(),
                    Cell::text(mode_name(&c.mode)),
                    c.primes.len().into(),
                    Cell::text(witnesses),
                    Cell::text(exclusion),
                ]);
            }
            t.render(Format::Csv)?
        }
    };
    Ok((text, Outcome::Success))
}

fn mode_name(mode: &SearchMode) -> String {
    match mode {
        SearchMode::Plain => "plain".into(),
        SearchMode::Lehmer => "lehmer".into(),
        SearchMode::Pseudopower { base } => format!("pseudopower({base})"),
    }
}

fn verify_certificates(
    path: &std::path::Path,
    format: Format,
) -> anyhow::Result<(String, Outcome)> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let certs: Vec<PseudopointCertificate> = match value {
        serde_json::Value::Array(_) => serde_json::from_value(value)?,
        other => vec![serde_json::from_value(other)?],
    };
    if certs.is_empty() {
        bail!("{} holds no certificates", path.display());
    }
    let mut t = Table::new(&["n", "x", "mode", "valid", "detail"]);
    let mut all_ok = true;
    for c in &certs {
        let result = verify_certificate_strict(c);
        all_ok &= result.is_ok();
        t.push(vec![
            Cell::big(&c.n),
            c.x.into(),
            Cell::text(mode_name(&c.mode)),
            result.is_ok().into(),
            Cell::text(result.err().map(|e| e.to_string()).unwrap_or_default()),
        ]);
    }
    Ok((
        t.render(format)?,
        if all_ok {
            Outcome::Success
        } else {
            Outcome::Failed
        },
    ))
}

/// CRT identity, product formula, Parseval and Weil checks for one curve.
fn verify_identities(
    f: &BivariatePoly,
    x: u64,
    weil_constant: Option<f64>,
    format: Format,
) -> anyhow::Result<(String, Outcome)> {
    let c = weil_constant.unwrap_or_else(|| default_weil_constant(f));
    let mut t = Table::new(&["check", "instance", "value", "tolerance", "pass"]);
    let mut all_ok = true;
    let mut push =
        |t: &mut Table, check: &str, instance: String, value: f64, tolerance: f64, pass: bool| {
            all_ok &= pass;
            t.push(vec![
                Cell::text(check),
                Cell::text(instance),
                value.into(),
                tolerance.into(),
                pass.into(),
            ]);
        };

    let freqs: Vec<i64> = CRT_FREQUENCIES.collect();
    for check in crt_identity_residuals(f, x, &freqs)? {
        let instance = format!("M={} a={}", check.modulus, check.a);
        push(
            &mut t,
            "crt_identity",
            instance,
            check.residual,
            TOLERANCE,
            check.residual <= TOLERANCE,
        );
    }

    let product = product_formula_check(f, x)?;
    let instance = format!(
        "M={} count={} product={}",
        product.modulus, product.lhs, product.rhs
    );
    let gap =
        u64::try_from(&product.rhs).map_or(f64::INFINITY, |rhs| rhs.abs_diff(product.lhs) as f64);
    push(&mut t, "product_formula", instance, gap, 0.0, product.equal);

    let (global, local) = pseudopoints::local::primes_pf(f, x)?;
    for &p in &global.primes {
        let check = parseval_check(f, p)?;
        let tol = TOLERANCE * check.rhs.max(1) as f64;
        push(
            &mut t,
            "parseval",
            format!("p={p}"),
            check.residual,
            tol,
            check.residual <= tol,
        );
    }
    for d in local.iter().filter(|d| !d.is_degenerate()) {
        let check = d.weil_check(c);
        let instance = format!("p={} count={}", d.p, d.point_count);
        push(&mut t, "weil", instance, check.slack, c, check.passes);
    }

    let outcome = if all_ok {
        Outcome::Success
    } else {
        Outcome::Failed
    };
    Ok((t.render(format)?, outcome))
}
