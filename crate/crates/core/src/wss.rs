//! k-Wall-Sun-Sun primes: `π(p^2) = π(p)` for the Lucas sequence `U_n(k, -1)`.
//!
//! Four criteria are evaluated independently:
//!
//! * period: `π(p^2) = π(p)`;
//! * entry: `U_{p - δ_p} ≡ 0 (mod p^2)`, with `δ_p = (k^2+4 / p)`;
//! * alpha: `F_p(α) = 0` in `(Z/p^2 Z)[α]`;
//! * monogenicity: `F_p(x) = x^(2p) - k x^p - 1` is not monogenic.
//!
//! Under the hypotheses checked by [`validate_k`] all four agree, and
//! [`classify`] treats any disagreement as an error.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intmath::{is_prime_u64, is_squarefree, jacobi, primes_up_to, FactorBudget};
use crate::lucas::{lucas_u, period_p_squared, pisano_period};
use crate::quadring::eval_fp_alpha;
use crate::trinomial::is_monogenic_fp;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WssHypotheses {
    pub k: u64,
    /// `(k^2 + 4) / gcd(2, k)^2`.
    pub d_value: u64,
    /// `4 ∤ k`.
    pub four_ok: bool,
    pub squarefree_ok: bool,
}

impl WssHypotheses {
    pub fn holds(&self) -> bool {
        self.four_ok && self.squarefree_ok
    }

    /// Names the first violated hypothesis, if any.
    pub fn violation(&self) -> Option<String> {
        if !self.four_ok {
            Some(format!("k = {} is divisible by 4", self.k))
        } else if !self.squarefree_ok {
            Some(format!(
                "(k^2 + 4)/gcd(2, k)^2 = {} is not squarefree",
                self.d_value
            ))
        } else {
            None
        }
    }

    pub fn require(&self) -> Result<()> {
        match self.violation() {
            Some(reason) => Err(Error::HypothesisViolation { k: self.k, reason }),
            None => Ok(()),
        }
    }
}

fn check_k(k: u64) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if k > u32::MAX as u64 {
        return Err(Error::InvalidArgument(format!("k = {k} exceeds 2^32 - 1")));
    }
    Ok(())
}

fn check_prime(p: u64) -> Result<()> {
    if !is_prime_u64(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    if p >= 1 << 32 {
        return Err(Error::InvalidArgument(format!("p = {p} exceeds 2^32")));
    }
    Ok(())
}

pub fn validate_k(k: u64, budget: FactorBudget) -> Result<WssHypotheses> {
    check_k(k)?;
    let kk4 = k * k + 4;
    let d_value = if k.is_multiple_of(2) { kk4 / 4 } else { kk4 };
    Ok(WssHypotheses {
        k,
        d_value,
        four_ok: !k.is_multiple_of(4),
        squarefree_ok: is_squarefree(&BigUint::from(d_value), budget)?,
    })
}

/// Legendre symbol `(k^2 + 4 / p)` for odd primes `p`.
pub fn delta_p(k: u64, p: u64) -> Result<i8> {
    if p == 2 {
        return Err(Error::InvalidArgument("δ_p is only used for odd p".into()));
    }
    check_prime(p)?;
    jacobi(&(BigInt::from(k) * BigInt::from(k) + 4), &BigInt::from(p))
}

pub fn is_wss_by_period(k: u64, p: u64) -> Result<bool> {
    check_k(k)?;
    check_prime(p)?;
    Ok(period_p_squared(k, p)? == pisano_period(k, p)?)
}

/// `U_{p - δ_p} ≡ 0 (mod p^2)`. When `p | k^2 + 4` (so `δ_p = 0`) an odd
/// prime is never k-Wall-Sun-Sun, and `false` is returned without evaluating.
pub fn is_wss_by_entry(k: u64, p: u64) -> Result<bool> {
    if p == 2 {
        return Err(Error::UnsupportedCriterion("entry"));
    }
    check_k(k)?;
    let delta = delta_p(k, p)?;
    if delta == 0 {
        return Ok(false);
    }
    let index = if delta == 1 { p - 1 } else { p + 1 };
    Ok(lucas_u(k, index, p * p)? == 0)
}

/// `F_p(α) = 0` in `R_{p^2}`.
pub fn is_wss_by_alpha(k: u64, p: u64) -> Result<bool> {
    if p == 2 {
        return Err(Error::UnsupportedCriterion("alpha"));
    }
    check_k(k)?;
    check_prime(p)?;
    Ok(eval_fp_alpha(k, p)?.is_zero())
}

pub fn is_wss_by_monogenicity(k: u64, p: u64, budget: FactorBudget) -> Result<bool> {
    check_k(k)?;
    Ok(!is_monogenic_fp(k, p, budget)?.monogenic)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WssClassification {
    pub k: u64,
    pub p: u64,
    /// `δ_p`; recorded as 0 at `p = 2`, where `delta_applicable` is false.
    pub delta: i8,
    pub delta_applicable: bool,
    pub pi_p: u64,
    pub pi_p2: u64,
    pub by_period: bool,
    pub by_entry: bool,
    pub by_alpha: bool,
    pub by_monogenic: bool,
    /// At `p = 2` the entry and alpha criteria are not defined; their fields
    /// copy `by_period` and this flag is set.
    pub entry_alpha_derived: bool,
    pub consistent: bool,
}

impl WssClassification {
    pub fn is_wss(&self) -> bool {
        self.by_period
    }
}

impl fmt::Display for WssClassification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "k={} p={} δ={} π(p)={} π(p²)={} period={} entry={} alpha={} monogenic={}",
            self.k,
            self.p,
            if self.delta_applicable {
                self.delta.to_string()
            } else {
                "n/a".into()
            },
            self.pi_p,
            self.pi_p2,
            self.by_period,
            self.by_entry,
            self.by_alpha,
            self.by_monogenic
        )
    }
}

/// Runs every applicable criterion (no short-circuiting) and checks agreement.
pub fn classify(k: u64, p: u64, budget: FactorBudget) -> Result<WssClassification> {
    check_k(k)?;
    check_prime(p)?;
    validate_k(k, budget)?.require()?;

    let pi_p = pisano_period(k, p)?;
    let pi_p2 = period_p_squared(k, p)?;
    let by_period = pi_p2 == pi_p;
    let odd = p != 2;
    let (delta, by_entry, by_alpha) = if odd {
        (
            delta_p(k, p)?,
            is_wss_by_entry(k, p)?,
            is_wss_by_alpha(k, p)?,
        )
    } else {
        (0, by_period, by_period)
    };
    let by_monogenic = is_wss_by_monogenicity(k, p, budget)?;
    let consistent = by_period == by_entry && by_period == by_alpha && by_period == by_monogenic;
    let c = WssClassification {
        k,
        p,
        delta,
        delta_applicable: odd,
        pi_p,
        pi_p2,
        by_period,
        by_entry,
        by_alpha,
        by_monogenic,
        entry_alpha_derived: !odd,
        consistent,
    };
    if !consistent {
        return Err(Error::InternalInconsistency(Box::new(c)));
    }
    Ok(c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    Period,
    Entry,
    Alpha,
    Monogenic,
    All,
}

impl Criterion {
    fn needs_hypotheses(self) -> bool {
        matches!(
            self,
            Criterion::Alpha | Criterion::Monogenic | Criterion::All
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            Criterion::Period => "period",
            Criterion::Entry => "entry",
            Criterion::Alpha => "alpha",
            Criterion::Monogenic => "monogenic",
            Criterion::All => "all",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub k_min: u64,
    pub k_max: u64,
    pub p_max: u64,
    pub criterion: Criterion,
    /// Worker threads; `None` uses all available cores.
    pub jobs: Option<usize>,
    pub budget: FactorBudget,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchHit {
    pub k: u64,
    pub p: u64,
    /// Present for [`Criterion::All`].
    pub classification: Option<WssClassification>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedK {
    pub k: u64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub hits: Vec<SearchHit>,
    pub skipped: Vec<SkippedK>,
    /// Number of `(k, p)` cells evaluated.
    pub cells: u64,
}

fn evaluate_cell(k: u64, p: u64, config: &SearchConfig) -> Result<Option<SearchHit>> {
    let hit = |is_hit: bool, classification| {
        is_hit.then_some(SearchHit {
            k,
            p,
            classification,
        })
    };
    // The entry and alpha criteria are undefined at p = 2; use the period there.
    Ok(match (config.criterion, p) {
        (Criterion::Period, _) | (Criterion::Entry | Criterion::Alpha, 2) => {
            hit(is_wss_by_period(k, p)?, None)
        }
        (Criterion::Entry, _) => hit(is_wss_by_entry(k, p)?, None),
        (Criterion::Alpha, _) => hit(is_wss_by_alpha(k, p)?, None),
        (Criterion::Monogenic, _) => hit(is_wss_by_monogenicity(k, p, config.budget)?, None),
        (Criterion::All, _) => {
            let c = classify(k, p, config.budget)?;
            hit(c.is_wss(), Some(c))
        }
    })
}

/// Evaluates the chosen criterion on every `k` in `[k_min, k_max]` and every
/// prime `p <= p_max`. The result is sorted by `(k, p)` and does not depend
/// on the number of workers.
pub fn search(config: &SearchConfig) -> Result<SearchOutcome> {
    if config.k_min == 0 || config.k_min > config.k_max {
        return Err(Error::InvalidArgument(format!(
            "empty or invalid k range [{}, {}]",
            config.k_min, config.k_max
        )));
    }
    if config.p_max < 2 {
        return Err(Error::InvalidArgument(format!(
            "p_max = {} leaves no primes",
            config.p_max
        )));
    }
    check_k(config.k_max)?;
    if config.p_max >= 1 << 32 {
        return Err(Error::InvalidArgument(format!(
            "p_max = {} too large",
            config.p_max
        )));
    }

    let mut skipped = Vec::new();
    let mut ks = Vec::new();
    for k in config.k_min..=config.k_max {
        let hyp = validate_k(k, config.budget)?;
        match hyp.violation() {
            Some(reason) if config.criterion.needs_hypotheses() => {
                skipped.push(SkippedK { k, reason })
            }
            _ => ks.push(k),
        }
    }
    let primes = primes_up_to(config.p_max);
    let cells: Vec<(u64, u64)> = ks
        .iter()
        .flat_map(|&k| primes.iter().map(move |&p| (k, p)))
        .collect();

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = config.jobs {
        builder = builder.num_threads(jobs.max(1));
    }
    let pool = builder
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot start worker pool: {e}")))?;
    let results: Vec<Result<Option<SearchHit>>> = pool.install(|| {
        cells
            .par_iter()
            .map(|&(k, p)| evaluate_cell(k, p, config))
            .collect()
    });

    let mut hits = Vec::new();
    for r in results {
        if let Some(h) = r? {
            hits.push(h);
        }
    }
    hits.sort_by_key(|h| (h.k, h.p));
    Ok(SearchOutcome {
        hits,
        skipped,
        cells: cells.len() as u64,
    })
}
