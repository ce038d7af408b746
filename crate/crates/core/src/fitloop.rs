//! The bounded-fitting driver.

use std::time::{Duration, Instant};

use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::encode::{self, EncodeError, EncodeOptions, RoundResult, RoundStats};
use crate::model::{Concept, LabeledExampleSet, Ontology};
use crate::{saturate, sim};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Schedule {
    /// Rounds 1, 2, 3, …
    #[default]
    Linear,
    /// Rounds 1, 2, 4, 8, … then binary search back to the least
    /// satisfiable round.
    Doubling,
}

impl std::str::FromStr for Schedule {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "linear" => Ok(Schedule::Linear),
            "doubling" => Ok(Schedule::Doubling),
            _ => Err(format!("unknown schedule {s:?}")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct FitOptions {
    pub max_rounds: u32,
    pub timeout: Option<Duration>,
    pub schedule: Schedule,
    pub symmetry: bool,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            max_rounds: 16,
            timeout: None,
            schedule: Schedule::Linear,
            symmetry: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FitStatus {
    Found,
    Exhausted,
    Timeout,
}

impl FitStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            FitStatus::Found => "found",
            FitStatus::Exhausted => "exhausted",
            FitStatus::Timeout => "timeout",
        }
    }
}

#[derive(Clone, Debug)]
pub struct FitResult {
    pub status: FitStatus,
    pub query: Option<Concept>,
    /// Round bound of the returned query (0 when none).
    pub round: u32,
    /// Rounds actually run, in the order run.
    pub stats: Vec<RoundStats>,
    pub wall_time_ms: f64,
    pub note: Option<String>,
}

impl FitResult {
    pub fn rounds(&self) -> usize {
        self.stats.len()
    }

    /// Total solver time over all rounds.
    pub fn solve_ms(&self) -> f64 {
        self.stats.iter().map(|s| s.solve_ms).sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = json!({
            "status": self.status.as_str(),
            "query": self.query.as_ref().map(|q| q.to_string()),
            "rounds": self.rounds(),
            "round": self.round,
            "stats": self.stats,
            "wall_time_ms": self.wall_time_ms,
        });
        if let Some(n) = &self.note {
            v["note"] = json!(n);
        }
        v
    }
}

#[derive(Debug, Error)]
pub enum FitError {
    #[error(transparent)]
    Encode(#[from] EncodeError),
}

/// A positive example that simulates into a negative one: every ELQ true
/// at the positive is true at the negative, so no query fits.
pub fn find_contradiction(e: &LabeledExampleSet) -> Option<(usize, usize)> {
    for (i, p) in e.examples.iter().enumerate().filter(|(_, x)| x.label.is_positive()) {
        for (j, q) in e.examples.iter().enumerate().filter(|(_, x)| !x.label.is_positive()) {
            if sim::simulates(&p.example, &q.example, None) {
                return Some((i, j));
            }
        }
    }
    None
}

struct Run<'a> {
    eo: &'a LabeledExampleSet,
    opts: &'a FitOptions,
    deadline: Option<Instant>,
    stats: Vec<RoundStats>,
}

impl Run<'_> {
    fn round(&mut self, n: u32) -> Result<RoundResult, FitError> {
        if self.deadline.is_some_and(|d| Instant::now() >= d) {
            return Ok(RoundResult::Timeout);
        }
        let (pe, sigma) = encode::prune(self.eo, n as usize);
        let eopts = EncodeOptions {
            symmetry: self.opts.symmetry,
        };
        let (r, st) = encode::solve_round(&pe, &sigma, n, eopts, self.deadline)?;
        self.stats.push(st);
        Ok(r)
    }
}

/// Bounded fitting: solve rounds until one is satisfiable. The returned
/// query is minimized and re-checked against `E_O`.
pub fn bounded_fit(e: &LabeledExampleSet, o: &Ontology, opts: &FitOptions) -> Result<FitResult, FitError> {
    let start = Instant::now();
    let eo = saturate::eliminate_ontology(e, o);
    let mut run = Run {
        eo: &eo,
        opts,
        deadline: opts.timeout.map(|t| start + t),
        stats: Vec::new(),
    };
    let finish = |status, query: Option<Concept>, round, stats, note| FitResult {
        status,
        query,
        round,
        stats,
        wall_time_ms: start.elapsed().as_secs_f64() * 1000.0,
        note,
    };

    if let Some((i, j)) = find_contradiction(&eo) {
        let note = format!("no fitting query: positive example {i} simulates into negative example {j}");
        return Ok(finish(FitStatus::Exhausted, None, 0, Vec::new(), Some(note)));
    }

    let found = match opts.schedule {
        Schedule::Linear => {
            let mut found = None;
            for n in 1..=opts.max_rounds {
                match run.round(n)? {
                    RoundResult::Sat(q) => {
                        found = Some((n, q));
                        break;
                    }
                    RoundResult::Timeout => return Ok(finish(FitStatus::Timeout, None, 0, run.stats, None)),
                    RoundResult::Unsat | RoundResult::Skipped => {}
                }
            }
            found
        }
        Schedule::Doubling => {
            let mut lo = 0;
            let mut hi = None;
            let mut n = 1;
            while n <= opts.max_rounds {
                match run.round(n)? {
                    RoundResult::Sat(q) => {
                        hi = Some((n, q));
                        break;
                    }
                    RoundResult::Timeout => return Ok(finish(FitStatus::Timeout, None, 0, run.stats, None)),
                    _ => lo = n,
                }
                n = if n == opts.max_rounds { n + 1 } else { (2 * n).min(opts.max_rounds) };
            }
            if let Some((mut h, mut q)) = hi {
                while h - lo > 1 {
                    let mid = lo + (h - lo) / 2;
                    match run.round(mid)? {
                        RoundResult::Sat(p) => {
                            h = mid;
                            q = p;
                        }
                        RoundResult::Timeout => return Ok(finish(FitStatus::Timeout, None, 0, run.stats, None)),
                        _ => lo = mid,
                    }
                }
                Some((h, q))
            } else {
                None
            }
        }
    };

    match found {
        None => Ok(finish(FitStatus::Exhausted, None, 0, run.stats, None)),
        Some((n, q)) => {
            let q = sim::minimize(&q);
            if !sim::fits(&q, &eo) {
                return Err(EncodeError::Soundness(q.to_string()).into());
            }
            debug_assert_eq!(q.restriction_count() + 1, n as usize);
            Ok(finish(FitStatus::Found, Some(q), n, run.stats, None))
        }
    }
}
