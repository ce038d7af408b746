//! Benchmark generators: the path and conjunction families and random
//! databases with a planted target.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::model::{cn, ind, rn, Concept, ConceptName, Database, Label, LabeledExampleSet, Ontology, PointedDatabase, RoleName, Structure};
use crate::pac::ExampleDistribution;
use crate::refine::Neighbors;
use crate::{saturate, sim};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BenchError {
    #[error("target matches everything")]
    DegenerateTarget,
    #[error("could not generate {0} examples of the requested label")]
    Starved(usize),
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub name: String,
    pub target: Concept,
    pub examples: LabeledExampleSet,
}

/// The unique upper neighbour of `q`, over the signature of `q`.
fn generalization(q: &Concept) -> Concept {
    let mut n = Neighbors::new(&q.signature());
    let up = n.upper(&sim::minimize(q));
    assert_eq!(up.len(), 1, "{q} must have a unique upper neighbour");
    up.into_iter().next().unwrap()
}

/// One positive (the target's own database) and one negative (the
/// database of its upper neighbour).
pub fn instance(name: String, target: Concept) -> Instance {
    let neg = generalization(&target);
    let examples = LabeledExampleSet::new()
        .with(target.to_pointed_db(), Label::Positive)
        .with(neg.to_pointed_db(), Label::Negative);
    assert!(sim::fits(&target, &examples));
    Instance { name, target, examples }
}

fn conj_names(k: usize) -> Concept {
    Concept::new((1..=k).map(|i| cn(&format!("A{i}"))), [])
}

/// `∃r^k.⊤`.
pub fn gen_kpath(k: usize) -> Instance {
    assert!(k >= 1);
    let t = (0..k).fold(Concept::top(), |c, _| Concept::exists(rn("r"), c));
    instance(format!("{k}-path"), t)
}

/// `∃r.(A1 ⊓ … ⊓ Ak)`.
pub fn gen_k1conj(k: usize) -> Instance {
    assert!(k >= 1);
    instance(format!("{k}-1-conj"), Concept::exists(rn("r"), conj_names(k)))
}

/// `∃r.∃r.(A1 ⊓ … ⊓ Ak)`.
pub fn gen_k2conj(k: usize) -> Instance {
    assert!(k >= 1);
    let t = Concept::exists(rn("r"), Concept::exists(rn("r"), conj_names(k)));
    instance(format!("{k}-2-conj"), t)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Counts {
    pub positives: usize,
    pub negatives: usize,
    /// Upper bound on individuals per database.
    pub max_individuals: usize,
}

impl Default for Counts {
    fn default() -> Self {
        Counts {
            positives: 10,
            negatives: 10,
            max_individuals: 12,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Planted {
    pub examples: LabeledExampleSet,
    pub dist: ExampleDistribution,
}

struct Shape {
    concepts: Vec<ConceptName>,
    roles: Vec<RoleName>,
    depth: usize,
    max: usize,
}

/// A rooted random digraph: out-degree at most 3, every node within
/// `depth` of the root, labels from the pool with probability 0.3.
fn random_structure(rng: &mut ChaCha8Rng, shape: &Shape) -> Structure {
    let mut s = Structure::with_nodes(1);
    let mut level = vec![0u32];
    for _ in 0..shape.depth {
        let mut next = Vec::new();
        for &u in &level {
            for _ in 0..rng.gen_range(0..=3) {
                let r = shape.roles[rng.gen_range(0..shape.roles.len())];
                // occasionally point back into the existing graph
                let v = if rng.gen_bool(0.2) {
                    rng.gen_range(0..s.len() as u32)
                } else if s.len() < shape.max {
                    let v = s.add_node();
                    next.push(v);
                    v
                } else {
                    continue;
                };
                s.add_edge(u, r, v);
            }
        }
        level = next;
    }
    for u in s.nodes() {
        for &a in &shape.concepts {
            if rng.gen_bool(0.3) {
                s.add_label(u, a);
            }
        }
    }
    s
}

/// Adds a copy of the tree of `q` below node `u`.
fn plant(s: &mut Structure, u: u32, q: &Concept) {
    for &a in q.names() {
        s.add_label(u, a);
    }
    for (r, c) in q.children() {
        let v = s.add_node();
        s.add_edge(u, *r, v);
        plant(s, v, c);
    }
}

/// Random databases labeled by membership of `target` w.r.t. `o`. Half of
/// the attempts plant the target at the root and half plant one of its
/// upper neighbours, so both labels keep turning up.
pub fn gen_planted(target: &Concept, o: &Ontology, counts: Counts, seed: u64) -> Result<Planted, BenchError> {
    let target = sim::minimize(target);
    if target.is_top() {
        return Err(BenchError::DegenerateTarget);
    }
    let sig = target.signature();
    let mut concepts: Vec<ConceptName> = sig.concepts.iter().copied().collect();
    concepts.extend([cn("Z1"), cn("Z2")]);
    let mut roles: Vec<RoleName> = sig.roles.iter().copied().collect();
    if roles.is_empty() {
        roles.push(rn("r"));
    }
    let shape = Shape {
        concepts,
        roles,
        depth: target.depth() + 1,
        max: counts.max_individuals.max(1),
    };
    let uppers = Neighbors::new(&sig).upper(&target);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut pos, mut neg) = (Vec::new(), Vec::new());
    let limit = 1000 * (counts.positives + counts.negatives + 1);
    for attempt in 0.. {
        if pos.len() >= counts.positives && neg.len() >= counts.negatives {
            break;
        }
        if attempt >= limit {
            return Err(BenchError::Starved(if pos.len() < counts.positives { counts.positives } else { counts.negatives }));
        }
        let mut s = random_structure(&mut rng, &shape);
        if rng.gen_bool(0.5) {
            plant(&mut s, 0, &target);
        } else if !uppers.is_empty() {
            plant(&mut s, 0, &uppers[rng.gen_range(0..uppers.len())]);
        }
        let k = pos.len() + neg.len();
        let db = Database::from_structure(s, |i| ind(&format!("x{k}_{i}")));
        let p = PointedDatabase::new(db, ind(&format!("x{k}_0")));
        let sat = PointedDatabase::new(saturate::universal_db(&p.db, o), p.root);
        if sim::holds(&target, &sat) {
            if pos.len() < counts.positives {
                pos.push(p);
            }
        } else if neg.len() < counts.negatives {
            neg.push(p);
        }
    }
    let mut examples = LabeledExampleSet::new();
    let mut points = Vec::new();
    for (group, label) in [(pos, Label::Positive), (neg, Label::Negative)] {
        for p in group {
            points.push(p.clone());
            examples.push(p, label);
        }
    }
    let dist = ExampleDistribution::uniform(points).map_err(|_| BenchError::Starved(0))?;
    Ok(Planted { examples, dist })
}
