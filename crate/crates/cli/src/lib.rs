//! Command-line front end for `wss-core`.
//!
//! Every command renders either an aligned text table or a single JSON
//! object `{schema_version, command, inputs, result, timing_ms}`.
//!
//! Exit codes: 0 success, 1 hypothesis violation, 2 invalid arguments,
//! 3 criteria disagree, 4 factorization budget exhausted.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use wss_core::intmath::{is_prime_u64, FactorBudget, DEFAULT_FACTOR_BUDGET};
use wss_core::lucas::pisano_period;
use wss_core::trinomial::{
    discriminant_resultant, fp_discriminant, is_monogenic_fp, MonogenicityReport, Trinomial,
};
use wss_core::wss::{classify, search, Criterion, SearchConfig, SearchOutcome, WssClassification};
use wss_core::Error;

pub const SCHEMA_VERSION: &str = "1";

/// Largest `p` for which `discriminant` also builds the Sylvester determinant.
pub const RESULTANT_P_LIMIT: u64 = 31;

pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const HYPOTHESIS: i32 = 1;
    pub const INVALID_ARGS: i32 = 2;
    pub const INCONSISTENT: i32 = 3;
    pub const BUDGET: i32 = 4;
}

#[derive(Debug, Parser)]
#[command(
    name = "wss",
    version,
    about = "k-Wall-Sun-Sun primes and monogenicity of x^(2p) - kx^p - 1"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    /// Pollard rho iteration budget for factoring k^2 + 4.
    #[arg(
        long,
        env = "WSS_FACTOR_BUDGET",
        default_value_t = DEFAULT_FACTOR_BUDGET,
        global = true
    )]
    pub factor_budget: u64,

    /// Report `timing_ms` as 0 so JSON output is reproducible byte for byte.
    #[arg(long, global = true)]
    pub no_timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CriterionArg {
    Period,
    Entry,
    Alpha,
    Monogenic,
    All,
}

impl From<CriterionArg> for Criterion {
    fn from(c: CriterionArg) -> Self {
        match c {
            CriterionArg::Period => Criterion::Period,
            CriterionArg::Entry => Criterion::Entry,
            CriterionArg::Alpha => Criterion::Alpha,
            CriterionArg::Monogenic => Criterion::Monogenic,
            CriterionArg::All => Criterion::All,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify one (k, p) by all four criteria.
    Check {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        p: u64,
    },
    /// Scan a range of k and all primes up to a bound.
    Search {
        #[arg(long)]
        k_min: u64,
        #[arg(long)]
        k_max: u64,
        #[arg(long)]
        p_max: u64,
        #[arg(long, value_enum, default_value_t = CriterionArg::Period)]
        criterion: CriterionArg,
        /// Worker threads (default: all cores).
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Monogenicity of x^(2p) - kx^p - 1.
    Monogenic {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        p: u64,
        /// Include the per-prime index verdicts.
        #[arg(long)]
        report: bool,
    },
    /// Period of U_n(k, -1) modulo m.
    Period {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        m: u64,
    },
    /// Discriminant of x^(2p) - kx^p - 1, closed form and resultant.
    Discriminant {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        p: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord<T> {
    pub schema_version: String,
    pub command: String,
    pub inputs: BTreeMap<String, Value>,
    pub result: T,
    pub timing_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub k: u64,
    pub p: u64,
    pub delta: i8,
    pub delta_applicable: bool,
    pub pi_p: u64,
    pub pi_p2: u64,
    pub by_period: bool,
    pub by_entry: bool,
    pub by_alpha: bool,
    pub by_monogenic: bool,
    pub entry_alpha_derived: bool,
    pub consistent: bool,
    pub is_wss: bool,
}

impl From<&WssClassification> for CheckResult {
    fn from(c: &WssClassification) -> Self {
        CheckResult {
            k: c.k,
            p: c.p,
            delta: c.delta,
            delta_applicable: c.delta_applicable,
            pi_p: c.pi_p,
            pi_p2: c.pi_p2,
            by_period: c.by_period,
            by_entry: c.by_entry,
            by_alpha: c.by_alpha,
            by_monogenic: c.by_monogenic,
            entry_alpha_derived: c.entry_alpha_derived,
            consistent: c.consistent,
            is_wss: c.is_wss(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HitRecord {
    pub k: u64,
    pub p: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classification: Option<CheckResult>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedRecord {
    pub k: u64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchResult {
    pub criterion: String,
    pub cells: u64,
    pub hits: Vec<HitRecord>,
    pub skipped: Vec<SkippedRecord>,
}

impl SearchResult {
    fn new(criterion: Criterion, outcome: &SearchOutcome) -> Self {
        SearchResult {
            criterion: criterion.name().into(),
            cells: outcome.cells,
            hits: outcome
                .hits
                .iter()
                .map(|h| HitRecord {
                    k: h.k,
                    p: h.p,
                    classification: h.classification.as_ref().map(CheckResult::from),
                })
                .collect(),
            skipped: outcome
                .skipped
                .iter()
                .map(|s| SkippedRecord {
                    k: s.k,
                    reason: s.reason.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictRecord {
    pub q: u64,
    pub divides_index: bool,
    pub item: u8,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonogenicResult {
    pub trinomial: String,
    /// Decimal string; the value outgrows every fixed-width integer type.
    pub discriminant: String,
    pub monogenic: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdicts: Option<Vec<VerdictRecord>>,
}

impl MonogenicResult {
    fn new(report: &MonogenicityReport, with_verdicts: bool) -> Self {
        MonogenicResult {
            trinomial: report.trinomial.to_string(),
            discriminant: report.discriminant.to_string(),
            monogenic: report.monogenic,
            verdicts: with_verdicts.then(|| {
                report
                    .verdicts
                    .iter()
                    .map(|v| VerdictRecord {
                        q: v.q,
                        divides_index: v.divides_index,
                        item: v.item_used,
                        detail: v.detail.clone(),
                    })
                    .collect()
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodResult {
    pub k: u64,
    pub m: u64,
    pub period: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscriminantResult {
    pub trinomial: String,
    pub closed_form: String,
    /// Absent when `p` exceeds [`RESULTANT_P_LIMIT`].
    #[serde(default)]
    pub resultant: Option<String>,
    #[serde(default)]
    pub agree: Option<bool>,
}

/// A failed command: message for stderr plus exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Failure {
            code: exit::INVALID_ARGS,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::HypothesisViolation { .. } => exit::HYPOTHESIS,
            Error::InternalInconsistency(_) => exit::INCONSISTENT,
            Error::FactorizationIncomplete { .. } => exit::BUDGET,
            _ => exit::INVALID_ARGS,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn require_prime(p: u64) -> Result<(), Failure> {
    if is_prime_u64(p) {
        Ok(())
    } else {
        Err(Failure::invalid(format!("p = {p} is not prime")))
    }
}

fn require_k(k: u64) -> Result<(), Failure> {
    if k == 0 {
        Err(Failure::invalid("k must be at least 1"))
    } else {
        Ok(())
    }
}

fn inputs(pairs: &[(&str, Value)]) -> BTreeMap<String, Value> {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

fn render_json<T: Serialize>(
    command: &str,
    inputs: BTreeMap<String, Value>,
    result: &T,
    timing_ms: f64,
) -> String {
    let record = OutputRecord {
        schema_version: SCHEMA_VERSION.into(),
        command: command.into(),
        inputs,
        result,
        timing_ms,
    };
    let mut s = serde_json::to_string_pretty(&record).expect("payloads serialize");
    s.push('\n');
    s
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn render_check_text(c: &CheckResult) -> String {
    let mut s = String::new();
    let delta = if c.delta_applicable {
        c.delta.to_string()
    } else {
        "n/a (p = 2)".into()
    };
    let derived = if c.entry_alpha_derived {
        " (from period)"
    } else {
        ""
    };
    let _ = writeln!(s, "k                {}", c.k);
    let _ = writeln!(s, "p                {}", c.p);
    let _ = writeln!(s, "delta            {delta}");
    let _ = writeln!(s, "pi(p)            {}", c.pi_p);
    let _ = writeln!(s, "pi(p^2)          {}", c.pi_p2);
    let _ = writeln!(s, "by period        {}", yes_no(c.by_period));
    let _ = writeln!(s, "by entry         {}{derived}", yes_no(c.by_entry));
    let _ = writeln!(s, "by alpha         {}{derived}", yes_no(c.by_alpha));
    let _ = writeln!(s, "by monogenicity  {}", yes_no(c.by_monogenic));
    let _ = writeln!(s, "consistent       {}", yes_no(c.consistent));
    let _ = writeln!(s, "k-Wall-Sun-Sun   {}", yes_no(c.is_wss));
    s
}

fn render_search_text(r: &SearchResult) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "criterion {}  cells {}  hits {}",
        r.criterion,
        r.cells,
        r.hits.len()
    );
    for skip in &r.skipped {
        let _ = writeln!(s, "skipped k={}: {}", skip.k, skip.reason);
    }
    if r.hits.is_empty() {
        let _ = writeln!(s, "no hits");
        return s;
    }
    let _ = writeln!(
        s,
        "{:>8} {:>10} {:>6} {:>10} {:>10}",
        "k", "p", "delta", "pi(p)", "pi(p^2)"
    );
    for h in &r.hits {
        match &h.classification {
            Some(c) => {
                let delta = if c.delta_applicable {
                    c.delta.to_string()
                } else {
                    "-".into()
                };
                let _ = writeln!(
                    s,
                    "{:>8} {:>10} {:>6} {:>10} {:>10}",
                    h.k, h.p, delta, c.pi_p, c.pi_p2
                );
            }
            None => {
                let _ = writeln!(s, "{:>8} {:>10}", h.k, h.p);
            }
        }
    }
    s
}

fn render_monogenic_text(r: &MonogenicResult) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "polynomial    {}", r.trinomial);
    let _ = writeln!(s, "discriminant  {}", r.discriminant);
    let _ = writeln!(s, "monogenic     {}", yes_no(r.monogenic));
    if let Some(verdicts) = &r.verdicts {
        let _ = writeln!(
            s,
            "{:>20} {:>6} {:>14}  detail",
            "q", "item", "divides index"
        );
        for v in verdicts {
            let _ = writeln!(
                s,
                "{:>20} {:>6} {:>14}  {}",
                v.q,
                v.item,
                yes_no(v.divides_index),
                v.detail
            );
        }
    }
    s
}

/// Runs one parsed invocation, writing the rendered result to `out`.
/// Returns the process exit code; failures are described in the `Err` side.
pub fn run(cli: &Cli, out: &mut impl Write) -> Result<i32, Failure> {
    let started = Instant::now();
    let budget = FactorBudget {
        rho_iterations: cli.global.factor_budget,
    };
    let elapsed = || {
        if cli.global.no_timing {
            0.0
        } else {
            (started.elapsed().as_secs_f64() * 1e6).round() / 1e3
        }
    };
    let json = cli.global.format == Format::Json;
    let mut code = exit::SUCCESS;

    let text = match &cli.command {
        Command::Check { k, p } => {
            require_k(*k)?;
            require_prime(*p)?;
            let classification = match classify(*k, *p, budget) {
                Ok(c) => c,
                Err(Error::InternalInconsistency(c)) => {
                    code = exit::INCONSISTENT;
                    *c
                }
                Err(e) => return Err(e.into()),
            };
            let result = CheckResult::from(&classification);
            if json {
                render_json(
                    "check",
                    inputs(&[("k", (*k).into()), ("p", (*p).into())]),
                    &result,
                    elapsed(),
                )
            } else {
                render_check_text(&result)
            }
        }
        Command::Search {
            k_min,
            k_max,
            p_max,
            criterion,
            jobs,
        } => {
            if *k_min == 0 || k_min > k_max {
                return Err(Failure::invalid(format!(
                    "invalid k range: --k-min {k_min} --k-max {k_max}"
                )));
            }
            if *p_max < 2 {
                return Err(Failure::invalid(format!(
                    "--p-max {p_max} leaves no primes"
                )));
            }
            if *jobs == Some(0) {
                return Err(Failure::invalid("--jobs must be at least 1"));
            }
            let criterion = Criterion::from(*criterion);
            let outcome = match search(&SearchConfig {
                k_min: *k_min,
                k_max: *k_max,
                p_max: *p_max,
                criterion,
                jobs: *jobs,
                budget,
            }) {
                Ok(o) => o,
                Err(Error::InternalInconsistency(c)) => {
                    return Err(Failure {
                        code: exit::INCONSISTENT,
                        message: format!("criteria disagree: {c}"),
                    })
                }
                Err(e) => return Err(e.into()),
            };
            let result = SearchResult::new(criterion, &outcome);
            if json {
                // `jobs` is left out of the inputs: output must not depend on it.
                render_json(
                    "search",
                    inputs(&[
                        ("k_min", (*k_min).into()),
                        ("k_max", (*k_max).into()),
                        ("p_max", (*p_max).into()),
                        ("criterion", criterion.name().into()),
                    ]),
                    &result,
                    elapsed(),
                )
            } else {
                render_search_text(&result)
            }
        }
        Command::Monogenic { k, p, report } => {
            require_k(*k)?;
            require_prime(*p)?;
            let r = is_monogenic_fp(*k, *p, budget)?;
            let result = MonogenicResult::new(&r, *report);
            if json {
                render_json(
                    "monogenic",
                    inputs(&[
                        ("k", (*k).into()),
                        ("p", (*p).into()),
                        ("report", (*report).into()),
                    ]),
                    &result,
                    elapsed(),
                )
            } else {
                render_monogenic_text(&result)
            }
        }
        Command::Period { k, m } => {
            require_k(*k)?;
            let period = pisano_period(*k, *m)?;
            let result = PeriodResult {
                k: *k,
                m: *m,
                period,
            };
            if json {
                render_json(
                    "period",
                    inputs(&[("k", (*k).into()), ("m", (*m).into())]),
                    &result,
                    elapsed(),
                )
            } else {
                format!("{period}\n")
            }
        }
        Command::Discriminant { k, p } => {
            require_k(*k)?;
            require_prime(*p)?;
            let t = Trinomial::fp(*k, *p);
            let closed = fp_discriminant(*k, *p);
            let resultant = (*p <= RESULTANT_P_LIMIT).then(|| discriminant_resultant(&t));
            let agree = resultant.as_ref().map(|r| *r == closed);
            if agree == Some(false) {
                code = exit::INCONSISTENT;
            }
            let result = DiscriminantResult {
                trinomial: t.to_string(),
                closed_form: closed.to_string(),
                resultant: resultant.map(|r| r.to_string()),
                agree,
            };
            if json {
                render_json(
                    "discriminant",
                    inputs(&[("k", (*k).into()), ("p", (*p).into())]),
                    &result,
                    elapsed(),
                )
            } else {
                let mut s = String::new();
                let _ = writeln!(s, "polynomial   {}", result.trinomial);
                let _ = writeln!(s, "closed form  {}", result.closed_form);
                match (&result.resultant, result.agree) {
                    (Some(r), Some(a)) => {
                        let _ = writeln!(s, "resultant    {r}");
                        let _ = writeln!(s, "agree        {}", yes_no(a));
                    }
                    _ => {
                        let _ = writeln!(s, "resultant    skipped (p > {RESULTANT_P_LIMIT})");
                    }
                }
                s
            }
        }
    };
    out.write_all(text.as_bytes())
        .map_err(|e| Failure::invalid(format!("cannot write output: {e}")))?;
    Ok(code)
}
