use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use serde_json::json;

use crate::fitloop::FitStatus;
use crate::model::{Concept, LabeledExampleSet, Signature};
use crate::{par, sim};

use super::{RefineError, Refiner, DEFAULT_ENUMERATION_CAP, DEFAULT_SIZE_CAP};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Operator {
    Rho1,
    Rho2,
}

impl Operator {
    pub fn as_str(self) -> &'static str {
        match self {
            Operator::Rho1 => "rho1",
            Operator::Rho2 => "rho2",
        }
    }
}

impl std::str::FromStr for Operator {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rho1" => Ok(Operator::Rho1),
            "rho2" => Ok(Operator::Rho2),
            _ => Err(format!("unknown operator {s:?}")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Caps {
    pub max_frontier: usize,
    pub max_rounds: usize,
    pub timeout: Option<Duration>,
    pub size_cap: usize,
    pub enumeration_cap: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_frontier: 10_000,
            max_rounds: 64,
            timeout: Some(Duration::from_secs(60)),
            size_cap: DEFAULT_SIZE_CAP,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
        }
    }
}

/// The candidate set `M_i`: reduced queries true at every positive example.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frontier {
    pub round: usize,
    pub queries: Vec<Concept>,
}

#[derive(Clone, Debug)]
pub struct LearnResult {
    pub status: FitStatus,
    pub query: Option<Concept>,
    pub operator: Operator,
    /// Size of every frontier built, the first being `{⊤}`. When a cap
    /// stops the search the last entry is the size that broke it.
    pub frontier_sizes: Vec<usize>,
    pub wall_time_ms: f64,
    pub note: Option<String>,
}

impl LearnResult {
    pub fn rounds(&self) -> usize {
        self.frontier_sizes.len()
    }

    pub fn max_frontier(&self) -> usize {
        self.frontier_sizes.iter().copied().max().unwrap_or(0)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = json!({
            "status": self.status.as_str(),
            "query": self.query.as_ref().map(|q| q.to_string()),
            "operator": self.operator.as_str(),
            "rounds": self.rounds(),
            "frontier_sizes": self.frontier_sizes,
            "max_frontier": self.max_frontier(),
            "wall_time_ms": self.wall_time_ms,
        });
        if let Some(n) = &self.note {
            v["note"] = json!(n);
        }
        v
    }
}

fn preference(q: &Concept) -> (usize, usize, String) {
    (q.size(), q.restriction_count(), q.to_string())
}

/// Breadth-first refinement from `⊤`: return the smallest fitting member
/// of the current frontier, otherwise replace the frontier by the
/// refinements of its members that are still true at every positive.
pub fn bfs_learn(e: &LabeledExampleSet, sigma: &Signature, op: Operator, caps: &Caps) -> LearnResult {
    let start = Instant::now();
    let deadline = caps.timeout.map(|t| start + t);
    let mut refiner = Refiner::with_caps(sigma, caps.size_cap, caps.enumeration_cap);
    let positives: Vec<_> = e.positives().collect();
    let mut sizes = Vec::new();
    let finish = |status, query, sizes, note: Option<String>| LearnResult {
        status,
        query,
        operator: op,
        frontier_sizes: sizes,
        wall_time_ms: start.elapsed().as_secs_f64() * 1000.0,
        note,
    };

    let mut frontier = Frontier {
        round: 1,
        queries: vec![Concept::top()],
    };
    loop {
        sizes.push(frontier.queries.len());
        let fit = par::map(&frontier.queries, |q| sim::fits(q, e));
        let best = frontier
            .queries
            .iter()
            .zip(fit)
            .filter(|(_, f)| *f)
            .map(|(q, _)| q)
            .min_by_key(|q| preference(q));
        if let Some(q) = best {
            return finish(FitStatus::Found, Some(q.clone()), sizes, None);
        }
        if frontier.round >= caps.max_rounds {
            return finish(FitStatus::Exhausted, None, sizes, Some(format!("round cap {} reached", caps.max_rounds)));
        }

        // refinements still true at every positive, checked as they arrive
        // so an oversized frontier is noticed early
        let mut seen = BTreeSet::new();
        let mut queries = Vec::new();
        for q in &frontier.queries {
            let fresh: Vec<Concept> = match refiner.refine(op, q, deadline) {
                Ok(ps) => ps.into_iter().filter(|p| seen.insert(p.clone())).collect(),
                Err(RefineError::Timeout) => return finish(FitStatus::Timeout, None, sizes, None),
                Err(err) => return finish(FitStatus::Exhausted, None, sizes, Some(err.to_string())),
            };
            let keep = par::map(&fresh, |p| positives.iter().all(|x| sim::holds(p, x)));
            queries.extend(fresh.into_iter().zip(keep).filter(|(_, k)| *k).map(|(p, _)| p));
            if queries.len() > caps.max_frontier {
                sizes.push(queries.len());
                let note = format!("frontier cap {} exceeded", caps.max_frontier);
                return finish(FitStatus::Exhausted, None, sizes, Some(note));
            }
            if deadline.is_some_and(|d| Instant::now() >= d) {
                return finish(FitStatus::Timeout, None, sizes, None);
            }
        }
        queries.sort();
        if queries.is_empty() {
            return finish(FitStatus::Exhausted, None, sizes, Some("empty frontier".into()));
        }
        frontier = Frontier {
            round: frontier.round + 1,
            queries,
        };
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ind, Database, Label, PointedDatabase};

    fn pdb(s: &str, root: &str) -> PointedDatabase {
        PointedDatabase::new(Database::parse(s).unwrap(), ind(root))
    }

    fn e0() -> LabeledExampleSet {
        LabeledExampleSet::new()
            .with(pdb("r(a,a)\nA(a)\nB(a)", "a"), Label::Positive)
            .with(pdb("A(a)\nr(a,b)\nB(b)", "a"), Label::Positive)
            .with(pdb("r(a,b)", "b"), Label::Negative)
    }

    #[test]
    fn example_one_with_both_operators() {
        for op in [Operator::Rho1, Operator::Rho2] {
            let e = e0();
            let r = bfs_learn(&e, &e.signature(), op, &Caps::default());
            assert_eq!(r.status, FitStatus::Found);
            assert_eq!(r.query.as_ref().unwrap().to_string(), "A");
            assert_eq!(r.rounds(), 2);
        }
    }

    #[test]
    fn path_target() {
        let e = LabeledExampleSet::new()
            .with(pdb("r(a,b)\nr(b,c)\nr(c,d)", "a"), Label::Positive)
            .with(pdb("r(a,b)\nr(b,c)", "a"), Label::Negative);
        for op in [Operator::Rho1, Operator::Rho2] {
            let r = bfs_learn(&e, &e.signature(), op, &Caps::default());
            assert_eq!(r.query.unwrap().to_string(), "(ex r (ex r (ex r top)))");
        }
    }

    #[test]
    fn frontier_cap_reports_exhausted() {
        let e = LabeledExampleSet::new()
            .with(pdb("r(a,b)\nA(b)\nB(b)\nC(b)", "a"), Label::Positive)
            .with(pdb("r(a,b)\nA(b)\nB(b)", "a"), Label::Negative);
        let caps = Caps {
            max_frontier: 2,
            ..Caps::default()
        };
        let r = bfs_learn(&e, &e.signature(), Operator::Rho2, &caps);
        assert_eq!(r.status, FitStatus::Exhausted);
        assert!(r.note.as_ref().unwrap().contains("frontier cap"));
        assert!(r.to_json()["frontier_sizes"].is_array());
    }

    #[test]
    fn unfittable_hits_round_cap() {
        let e = LabeledExampleSet::new()
            .with(pdb("A(a)", "a"), Label::Positive)
            .with(pdb("A(a)", "a"), Label::Negative);
        let caps = Caps {
            max_rounds: 3,
            ..Caps::default()
        };
        let r = bfs_learn(&e, &e.signature(), Operator::Rho2, &caps);
        assert_eq!(r.status, FitStatus::Exhausted);
    }
}
