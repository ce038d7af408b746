use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;
use serde_json::json;

use crate::fitloop::{bounded_fit, FitOptions};
use crate::model::{Concept, LabeledExampleSet, Label, Ontology, PointedDatabase};
use crate::refine::{bfs_learn, most_specific_product, Caps, Operator};
use crate::{par, saturate, sim};

use super::ExampleDistribution;

type LearnFn = dyn Fn(&LabeledExampleSet, &Ontology) -> Option<Concept> + Send + Sync;

/// A named fitting procedure; `None` means it gave up.
#[derive(Clone)]
pub struct Learner {
    pub name: String,
    f: Arc<LearnFn>,
}

impl std::fmt::Debug for Learner {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Learner({})", self.name)
    }
}

impl Learner {
    pub fn custom(name: &str, f: impl Fn(&LabeledExampleSet, &Ontology) -> Option<Concept> + Send + Sync + 'static) -> Self {
        Learner {
            name: name.to_string(),
            f: Arc::new(f),
        }
    }

    pub fn bounded_fit(opts: FitOptions) -> Self {
        Learner::custom("bounded_fit", move |e, o| bounded_fit(e, o, &opts).ok().and_then(|r| r.query))
    }

    pub fn product(depth: usize) -> Self {
        Learner::custom("product", move |e, o| most_specific_product(&saturate::eliminate_ontology(e, o), depth))
    }

    pub fn refine(op: Operator, caps: Caps) -> Self {
        Learner::custom(&format!("refine-{}", op.as_str()), move |e, o| {
            let eo = saturate::eliminate_ontology(e, o);
            bfs_learn(&eo, &eo.signature(), op, &caps).query
        })
    }

    pub fn learn(&self, e: &LabeledExampleSet, o: &Ontology) -> Option<Concept> {
        (self.f)(e, o)
    }
}

/// A target query with its distribution; support points are labeled by
/// membership of the target w.r.t. the ontology.
#[derive(Clone, Debug)]
pub struct Task {
    pub target: Concept,
    pub ontology: Ontology,
    pub dist: ExampleDistribution,
    pub labels: Vec<bool>,
    saturated: Vec<PointedDatabase>,
}

impl Task {
    pub fn new(target: Concept, ontology: Ontology, dist: ExampleDistribution) -> Self {
        let saturated: Vec<PointedDatabase> = par::map(&dist.points, |p| {
            PointedDatabase::new(saturate::universal_db(&p.db, &ontology), p.root)
        });
        let labels = par::map(&saturated, |p| sim::holds(&target, p));
        Task {
            target,
            ontology,
            dist,
            labels,
            saturated,
        }
    }

    /// The labeled examples at the given support indices (repeats dropped).
    pub fn examples(&self, idx: &[usize]) -> LabeledExampleSet {
        let mut e = LabeledExampleSet::new();
        for &i in idx.iter().collect::<BTreeSet<_>>() {
            e.push(self.dist.points[i].clone(), Label::from_bool(self.labels[i]));
        }
        e
    }

    /// Probability-weighted accuracy of `h` on the support indices `idx`.
    pub fn accuracy_on(&self, h: &Concept, idx: &[usize]) -> f64 {
        let mass: f64 = idx.iter().map(|&i| self.dist.probs[i]).sum();
        let ok = par::map(idx, |&i| sim::holds(h, &self.saturated[i]) == self.labels[i]);
        let hit = idx.iter().zip(ok).filter(|(_, k)| *k).fold(0.0, |acc, (&i, _)| acc + self.dist.probs[i]);
        if mass > 0.0 {
            hit / mass
        } else {
            1.0
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRow {
    pub trial: usize,
    pub m: usize,
    pub learner: String,
    /// Holdout accuracy; `None` when the learner gave up.
    pub accuracy: Option<f64>,
    pub time_ms: f64,
    pub query: Option<String>,
}

/// One trial: draw `m` examples with seed `seed`, learn, and score the
/// hypothesis on the support points not drawn (all points if every one
/// was drawn).
pub fn run_trial(task: &Task, learner: &Learner, m: usize, trial: usize, seed: u64) -> TrialRow {
    let drawn = task.dist.sample(m, seed);
    let e = task.examples(&drawn);
    let seen: BTreeSet<usize> = drawn.into_iter().collect();
    let mut holdout: Vec<usize> = (0..task.dist.len()).filter(|i| !seen.contains(i)).collect();
    if holdout.is_empty() {
        holdout = (0..task.dist.len()).collect();
    }
    let t = Instant::now();
    let h = learner.learn(&e, &task.ontology);
    let time_ms = t.elapsed().as_secs_f64() * 1000.0;
    TrialRow {
        trial,
        m,
        learner: learner.name.clone(),
        accuracy: h.as_ref().map(|h| task.accuracy_on(h, &holdout)),
        time_ms,
        query: h.map(|h| h.to_string()),
    }
}

/// `trials` independent trials per sample size; trial `t` uses seed
/// `seed + t`.
pub fn generalization_experiment(task: &Task, ms: &[usize], learner: &Learner, trials: usize, seed: u64) -> Vec<TrialRow> {
    let mut rows = Vec::new();
    for &m in ms {
        rows.extend(par::map_range(trials, |t| run_trial(task, learner, m, t, seed + t as u64)));
    }
    rows
}

pub fn median(xs: &[f64]) -> Option<f64> {
    if xs.is_empty() {
        return None;
    }
    let mut v = xs.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    let n = v.len();
    Some(if n % 2 == 1 { v[n / 2] } else { (v[n / 2 - 1] + v[n / 2]) / 2.0 })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SummaryRow {
    pub learner: String,
    pub m: usize,
    pub median_accuracy: Option<f64>,
    pub trials: usize,
    pub failed: usize,
}

/// Median accuracy per (learner, m), failed trials excluded and counted.
pub fn summarize(rows: &[TrialRow]) -> Vec<SummaryRow> {
    let keys: BTreeSet<(String, usize)> = rows.iter().map(|r| (r.learner.clone(), r.m)).collect();
    keys.into_iter()
        .map(|(learner, m)| {
            let group: Vec<&TrialRow> = rows.iter().filter(|r| r.learner == learner && r.m == m).collect();
            let acc: Vec<f64> = group.iter().filter_map(|r| r.accuracy).collect();
            SummaryRow {
                median_accuracy: median(&acc),
                trials: group.len(),
                failed: group.len() - acc.len(),
                learner,
                m,
            }
        })
        .collect()
}

pub fn to_csv(rows: &[TrialRow]) -> String {
    let mut s = String::from("trial,m,learner,accuracy,time_ms\n");
    for r in rows {
        let acc = r.accuracy.map(|a| format!("{a:.6}")).unwrap_or_default();
        let _ = writeln!(s, "{},{},{},{},{:.3}", r.trial, r.m, r.learner, acc, r.time_ms);
    }
    s
}

pub fn summary_json(rows: &[TrialRow]) -> serde_json::Value {
    json!({ "schema": 1, "summary": summarize(rows) })
}
