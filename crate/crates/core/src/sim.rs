//! Σ-simulations, query evaluation, subsumption and minimization.

use fixedbitset::FixedBitSet;

use crate::model::{
    Concept, ConceptName, Database, Individual, LabeledExampleSet, PointedDatabase, RoleName, Signature,
    Structure,
};
use crate::par;

/// Restricts which left-hand symbols a simulation must respect. `None`
/// means every symbol counts.
fn keep_label(sigma: Option<&Signature>, a: ConceptName) -> bool {
    sigma.is_none_or(|s| s.has_concept(a))
}

fn keep_role(sigma: Option<&Signature>, r: RoleName) -> bool {
    sigma.is_none_or(|s| s.has_role(r))
}

/// The greatest Σ-simulation between two databases.
#[derive(Clone, Debug)]
pub struct SimulationRelation<'a> {
    pub left: &'a Database,
    pub right: &'a Database,
    pub sigma: Option<Signature>,
    rows: Vec<FixedBitSet>,
}

impl SimulationRelation<'_> {
    pub fn contains_index(&self, a: u32, b: u32) -> bool {
        self.rows[a as usize].contains(b as usize)
    }

    pub fn contains(&self, a: Individual, b: Individual) -> bool {
        match (self.left.index_of(a), self.right.index_of(b)) {
            (Some(i), Some(j)) => self.contains_index(i, j),
            _ => false,
        }
    }

    /// Right-hand elements that simulate `a`.
    pub fn image(&self, a: u32) -> &FixedBitSet {
        &self.rows[a as usize]
    }

    pub fn pairs(&self) -> Vec<(Individual, Individual)> {
        let mut out = Vec::new();
        for (i, row) in self.rows.iter().enumerate() {
            for j in row.ones() {
                out.push((self.left.name(i as u32), self.right.name(j as u32)));
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones(..)).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Greatest Σ-simulation between structures, one bitset row per left node.
///
/// Starts from all label-compatible pairs and deletes pairs that violate
/// the role condition. A left node is rechecked only when the row of one of
/// its successors shrank.
pub fn simulation_rows(s1: &Structure, s2: &Structure, sigma: Option<&Signature>) -> Vec<FixedBitSet> {
    let n1 = s1.len();
    let n2 = s2.len();
    let mut rows: Vec<FixedBitSet> = (0..n1 as u32)
        .map(|a| {
            let mut row = FixedBitSet::with_capacity(n2);
            'right: for b in 0..n2 as u32 {
                for &l in s1.labels(a) {
                    if keep_label(sigma, l) && !s2.has_label(b, l) {
                        continue 'right;
                    }
                }
                row.insert(b as usize);
            }
            row
        })
        .collect();

    let preds = s1.predecessors();
    let mut queued = vec![true; n1];
    let mut work: Vec<u32> = (0..n1 as u32).collect();
    while let Some(a) = work.pop() {
        queued[a as usize] = false;
        let edges: Vec<(RoleName, u32)> = s1
            .succ(a)
            .iter()
            .copied()
            .filter(|&(r, _)| keep_role(sigma, r))
            .collect();
        if edges.is_empty() {
            continue;
        }
        let mut dropped = Vec::new();
        for b in rows[a as usize].ones() {
            let ok = edges.iter().all(|&(r, a2)| {
                s2.succ(b as u32)
                    .iter()
                    .any(|&(q, b2)| q == r && rows[a2 as usize].contains(b2 as usize))
            });
            if !ok {
                dropped.push(b);
            }
        }
        if dropped.is_empty() {
            continue;
        }
        for b in dropped {
            rows[a as usize].set(b, false);
        }
        for &(r, p) in &preds[a as usize] {
            if keep_role(sigma, r) && !queued[p as usize] {
                queued[p as usize] = true;
                work.push(p);
            }
        }
    }
    rows
}

pub fn max_simulation<'a>(
    d1: &'a Database,
    d2: &'a Database,
    sigma: Option<&Signature>,
) -> SimulationRelation<'a> {
    SimulationRelation {
        left: d1,
        right: d2,
        sigma: sigma.cloned(),
        rows: simulation_rows(d1.structure(), d2.structure(), sigma),
    }
}

/// `(D1, a1) ⪯_Σ (D2, a2)`.
pub fn simulates(p1: &PointedDatabase, p2: &PointedDatabase, sigma: Option<&Signature>) -> bool {
    let rows = simulation_rows(p1.structure(), p2.structure(), sigma);
    rows[p1.root_index() as usize].contains(p2.root_index() as usize)
}

/// Nodes of `s` at which `q` holds. Computed bottom-up over the query tree.
pub fn matches(q: &Concept, s: &Structure) -> FixedBitSet {
    let n = s.len();
    let mut m = FixedBitSet::with_capacity(n);
    for u in 0..n as u32 {
        if q.names().iter().all(|&a| s.has_label(u, a)) {
            m.insert(u as usize);
        }
    }
    for (r, c) in q.children() {
        if m.is_clear() {
            break;
        }
        let sub = matches(c, s);
        let mut pre = FixedBitSet::with_capacity(n);
        for u in m.ones() {
            if s.succ(u as u32).iter().any(|&(q, v)| q == *r && sub.contains(v as usize)) {
                pre.insert(u);
            }
        }
        m = pre;
    }
    m
}

/// True if `q` holds at node `u` of `s`.
pub fn holds_at(q: &Concept, s: &Structure, u: u32) -> bool {
    if !q.names().iter().all(|&a| s.has_label(u, a)) {
        return false;
    }
    q.children()
        .iter()
        .all(|(r, c)| s.succ(u).iter().any(|&(q2, v)| q2 == *r && holds_at(c, s, v)))
}

/// The answers `q(D)`, in database order.
pub fn evaluate(q: &Concept, d: &Database) -> Vec<Individual> {
    matches(q, d.structure())
        .ones()
        .map(|i| d.name(i as u32))
        .collect()
}

/// `a_p ∈ q(D_p)`.
pub fn holds(q: &Concept, p: &PointedDatabase) -> bool {
    holds_at(q, p.structure(), p.root_index())
}

/// `q ⊑ p`.
pub fn subsumes(q: &Concept, p: &Concept) -> bool {
    holds_at(p, &q.to_structure(), 0)
}

pub fn equivalent(q: &Concept, p: &Concept) -> bool {
    subsumes(q, p) && subsumes(p, q)
}

pub fn fits(q: &Concept, e: &LabeledExampleSet) -> bool {
    par::all(&e.examples, |x| holds(q, &x.example) == x.label.is_positive())
}

/// Number of examples whose label `q` gets wrong.
pub fn misclassified(q: &Concept, e: &LabeledExampleSet) -> usize {
    par::map(&e.examples, |x| holds(q, &x.example) != x.label.is_positive())
        .into_iter()
        .filter(|&b| b)
        .count()
}

/// An equivalent concept without redundant conjuncts.
///
/// Computes the self-simulation of the query tree once, then walks the tree
/// top-down and drops every existential restriction `∃r.C1` that has a
/// remaining `r`-sibling `∃r.C2` with `C2 ⊑ C1`. Among equivalent siblings
/// the first is kept.
pub fn minimize(q: &Concept) -> Concept {
    let s = q.to_structure();
    let rows = simulation_rows(&s, &s, None);
    rebuild(&s, &rows, 0)
}

fn rebuild(s: &Structure, rows: &[FixedBitSet], u: u32) -> Concept {
    let kids = s.succ(u);
    // preorder numbering makes node ids follow child order
    let mut children = Vec::new();
    for (i, &(r, c1)) in kids.iter().enumerate() {
        let redundant = kids.iter().enumerate().any(|(j, &(q, c2))| {
            j != i
                && q == r
                && rows[c1 as usize].contains(c2 as usize)
                && (j < i || !rows[c2 as usize].contains(c1 as usize))
        });
        if !redundant {
            children.push((r, rebuild(s, rows, c1)));
        }
    }
    Concept::new(s.labels(u).iter().copied(), children)
}
