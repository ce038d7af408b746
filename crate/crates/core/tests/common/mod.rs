//! Test-side oracles. None of them call into the library's reasoning code;
//! they only read its data types.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use elq_core::model::{
    cn, ind, rn, Concept, ConceptName, Database, Label, LabeledExampleSet, Ontology, PointedDatabase, RoleName, Signature,
    Structure,
};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Direct recursive evaluation of `q` at node `u`.
pub fn holds(q: &Concept, s: &Structure, u: u32) -> bool {
    q.names().iter().all(|a| s.labels(u).contains(a))
        && q.children().iter().all(|(r, c)| s.succ(u).iter().any(|&(r2, v)| r2 == *r && holds(c, s, v)))
}

pub fn holds_pointed(q: &Concept, p: &PointedDatabase) -> bool {
    holds(q, p.structure(), p.root_index())
}

pub fn fits(q: &Concept, e: &LabeledExampleSet) -> bool {
    e.examples.iter().all(|x| holds_pointed(q, &x.example) == x.label.is_positive())
}

/// The largest Σ-simulation from `s1` to `s2`, computed by deleting pairs
/// until nothing changes.
pub fn simulation(s1: &Structure, s2: &Structure, sigma: &Signature) -> Vec<Vec<bool>> {
    let mut rel = vec![vec![true; s2.len()]; s1.len()];
    for u in s1.nodes() {
        for v in s2.nodes() {
            let labels_ok = s1.labels(u).iter().filter(|a| sigma.has_concept(**a)).all(|a| s2.labels(v).contains(a));
            rel[u as usize][v as usize] = labels_ok;
        }
    }
    loop {
        let mut changed = false;
        for u in s1.nodes() {
            for v in s2.nodes() {
                if !rel[u as usize][v as usize] {
                    continue;
                }
                let ok = s1.succ(u).iter().filter(|(r, _)| sigma.has_role(*r)).all(|&(r, u2)| {
                    s2.succ(v).iter().any(|&(r2, v2)| r2 == r && rel[u2 as usize][v2 as usize])
                });
                if !ok {
                    rel[u as usize][v as usize] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            return rel;
        }
    }
}

pub fn simulates(p1: &PointedDatabase, p2: &PointedDatabase, sigma: &Signature) -> bool {
    simulation(p1.structure(), p2.structure(), sigma)[p1.root_index() as usize][p2.root_index() as usize]
}

fn subsets<T: Copy>(items: &[T]) -> Vec<Vec<T>> {
    (0..1u32 << items.len())
        .map(|m| items.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, x)| *x).collect())
        .collect()
}

/// Every ELQ over Σ with exactly `e` existential restrictions, up to
/// reordering of conjuncts.
pub fn elqs_with(sigma: &Signature, e: usize, memo: &mut BTreeMap<usize, Vec<Concept>>) -> Vec<Concept> {
    if let Some(v) = memo.get(&e) {
        return v.clone();
    }
    let names: Vec<ConceptName> = sigma.concepts.iter().copied().collect();
    let roles: Vec<RoleName> = sigma.roles.iter().copied().collect();
    // every (role, subtree) child together with the restrictions it uses
    let mut kinds: Vec<(usize, RoleName, Concept)> = Vec::new();
    for k in 1..=e {
        for c in elqs_with(sigma, k - 1, memo) {
            for &r in &roles {
                kinds.push((k, r, c.clone()));
            }
        }
    }
    // multisets of children with total weight e, as non-decreasing index lists
    fn go(kinds: &[(usize, RoleName, Concept)], from: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in from..kinds.len() {
            if kinds[i].0 <= left {
                cur.push(i);
                go(kinds, i, left - kinds[i].0, cur, out);
                cur.pop();
            }
        }
    }
    let mut multisets = Vec::new();
    go(&kinds, 0, e, &mut Vec::new(), &mut multisets);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for ns in subsets(&names) {
        for ms in &multisets {
            let c = Concept::new(ns.iter().copied(), ms.iter().map(|&i| (kinds[i].1, kinds[i].2.clone())));
            if seen.insert(c.to_string()) {
                out.push(c);
            }
        }
    }
    memo.insert(e, out.clone());
    out
}

/// Every ELQ over Σ with at most `max` restrictions, fewest first.
pub fn elqs_up_to(sigma: &Signature, max: usize) -> Vec<Concept> {
    let mut memo = BTreeMap::new();
    (0..=max).flat_map(|e| elqs_with(sigma, e, &mut memo)).collect()
}

/// Fewest restrictions of any ELQ over Σ fitting `e`, searching up to `max`.
pub fn min_fitting_restrictions(e: &LabeledExampleSet, sigma: &Signature, max: usize) -> Option<usize> {
    let mut memo = BTreeMap::new();
    (0..=max).find(|&k| elqs_with(sigma, k, &mut memo).iter().any(|q| fits(q, e)))
}

/// A model of `d` and `o` built by applying the axioms to a growing
/// interpretation. Existential witnesses are shared per (role, filler).
pub struct Chase {
    pub s: Structure,
    witness: BTreeMap<(RoleName, String), u32>,
}

impl Chase {
    pub fn new(d: &Database, o: &Ontology) -> Chase {
        let mut ch = Chase {
            s: d.structure().clone(),
            witness: BTreeMap::new(),
        };
        let mut guard = 0;
        while ch.round(o) {
            guard += 1;
            assert!(guard < 10_000, "chase oracle does not terminate");
        }
        ch
    }

    fn add(&mut self, c: &Concept, u: u32) -> bool {
        let mut changed = false;
        for &a in c.names() {
            changed |= self.s.add_label(u, a);
        }
        for (r, f) in c.children() {
            let key = (*r, f.to_string());
            let w = match self.witness.get(&key) {
                Some(&w) => w,
                None => {
                    let w = self.s.add_node();
                    self.witness.insert(key, w);
                    self.add(f, w);
                    changed = true;
                    w
                }
            };
            changed |= self.s.add_edge(u, *r, w);
        }
        changed
    }

    fn round(&mut self, o: &Ontology) -> bool {
        let mut changed = false;
        for u in self.s.nodes().collect::<Vec<_>>() {
            for (l, r) in &o.concept_inclusions {
                if holds(l, &self.s, u) {
                    changed |= self.add(r, u);
                }
            }
        }
        let edges: Vec<(u32, RoleName, u32)> = self.s.edges().collect();
        for (u, r, v) in edges {
            for &(r1, s1) in &o.role_inclusions {
                if r1 == r {
                    changed |= self.s.add_edge(u, s1, v);
                }
            }
            for (r1, c) in &o.ranges {
                if *r1 == r {
                    changed |= self.add(c, v);
                }
            }
        }
        changed
    }
}

/// Certain answer check through the chase oracle.
pub fn entails(q: &Concept, p: &PointedDatabase, o: &Ontology) -> bool {
    holds(q, &Chase::new(&p.db, o).s, p.root_index())
}

pub fn fits_wrt(q: &Concept, e: &LabeledExampleSet, o: &Ontology) -> bool {
    e.examples.iter().all(|x| entails(q, &x.example, o) == x.label.is_positive())
}

pub const NAMES: [&str; 3] = ["A", "B", "C"];
pub const ROLES: [&str; 2] = ["r", "s"];

/// A random database over the given symbols with individuals `{prefix}0…`.
pub fn random_db(rng: &mut ChaCha8Rng, prefix: &str, size: usize, sigma: &Signature, density: f64) -> PointedDatabase {
    let mut s = Structure::with_nodes(size);
    for u in 0..size as u32 {
        for &a in &sigma.concepts {
            if rng.gen_bool(0.4) {
                s.add_label(u, a);
            }
        }
        for &r in &sigma.roles {
            for v in 0..size as u32 {
                if rng.gen_bool(density) {
                    s.add_edge(u, r, v);
                }
            }
        }
    }
    let db = Database::from_structure(s, |i| ind(&format!("{prefix}{i}")));
    PointedDatabase::new(db, ind(&format!("{prefix}0")))
}

/// A random nonempty signature with at most `max` symbols.
pub fn random_signature(rng: &mut ChaCha8Rng, max: usize) -> Signature {
    loop {
        let k = rng.gen_range(1..=max);
        let mut pool: Vec<(bool, &str)> = NAMES.iter().map(|n| (true, *n)).chain(ROLES.iter().map(|r| (false, *r))).collect();
        let mut sig = Signature::new();
        for _ in 0..k {
            let (c, n) = pool.remove(rng.gen_range(0..pool.len()));
            if c {
                sig.concepts.insert(cn(n));
            } else {
                sig.roles.insert(rn(n));
            }
        }
        if !sig.is_empty() {
            return sig;
        }
    }
}

/// Random examples whose disjoint union has at most `max_adom` individuals.
pub fn random_examples(rng: &mut ChaCha8Rng, sigma: &Signature, max_adom: usize) -> LabeledExampleSet {
    let mut e = LabeledExampleSet::new();
    let mut left = max_adom;
    let count = rng.gen_range(2..=4.min(max_adom));
    for k in 0..count {
        let reserve = count - k - 1;
        let size = rng.gen_range(1..=(left - reserve).min(3));
        left -= size;
        let label = if k == 0 {
            Label::Positive
        } else if k == 1 {
            Label::Negative
        } else {
            Label::from_bool(rng.gen_bool(0.5))
        };
        e.push(random_db(rng, &format!("e{k}_"), size, sigma, 0.35), label);
    }
    e
}

/// A random ELQ over Σ with at most `max_restrictions` restrictions.
pub fn random_concept(rng: &mut ChaCha8Rng, sigma: &Signature, max_restrictions: usize) -> Concept {
    fn go(rng: &mut ChaCha8Rng, names: &[ConceptName], roles: &[RoleName], budget: &mut usize, depth: usize) -> Concept {
        let ns: Vec<ConceptName> = names.iter().copied().filter(|_| rng.gen_bool(0.35)).collect();
        let mut children = Vec::new();
        while *budget > 0 && !roles.is_empty() && depth < 3 && rng.gen_bool(0.5) {
            *budget -= 1;
            let r = roles[rng.gen_range(0..roles.len())];
            children.push((r, go(rng, names, roles, budget, depth + 1)));
        }
        Concept::new(ns, children)
    }
    let names: Vec<ConceptName> = sigma.concepts.iter().copied().collect();
    let roles: Vec<RoleName> = sigma.roles.iter().copied().collect();
    let mut budget = max_restrictions;
    go(rng, &names, &roles, &mut budget, 0)
}

/// A random ontology of at most `max` axioms, each already in normal form.
pub fn random_normalized_ontology(rng: &mut ChaCha8Rng, max: usize) -> Ontology {
    let mut o = Ontology::new();
    let name = |rng: &mut ChaCha8Rng| Concept::name(cn(NAMES[rng.gen_range(0..NAMES.len())]));
    let role = |rng: &mut ChaCha8Rng| rn(ROLES[rng.gen_range(0..ROLES.len())]);
    for _ in 0..rng.gen_range(0..=max) {
        match rng.gen_range(0..7) {
            0 => o.add_ci(name(rng), name(rng)),
            1 => o.add_ci(Concept::conj([name(rng), name(rng)]), name(rng)),
            2 => {
                let r = role(rng);
                o.add_ci(name(rng), Concept::exists(r, name(rng)))
            }
            3 => {
                let r = role(rng);
                o.add_ci(Concept::exists(r, name(rng)), name(rng))
            }
            4 => {
                let r = role(rng);
                o.add_ci(Concept::exists(r, Concept::top()), name(rng))
            }
            5 => {
                let (r, s) = (role(rng), role(rng));
                if r != s {
                    o.add_ri(r, s)
                }
            }
            _ => {
                let r = role(rng);
                o.add_range(r, name(rng))
            }
        }
    }
    o
}

/// A random pointed database whose edges only go forward, rooted at the
/// first individual.
pub fn random_dag(rng: &mut ChaCha8Rng, size: usize, sigma: &Signature) -> PointedDatabase {
    let mut s = Structure::with_nodes(size);
    for u in 0..size as u32 {
        for &a in &sigma.concepts {
            if rng.gen_bool(0.35) {
                s.add_label(u, a);
            }
        }
        for v in u + 1..size as u32 {
            for &r in &sigma.roles {
                if rng.gen_bool(0.4) {
                    s.add_edge(u, r, v);
                }
            }
        }
    }
    PointedDatabase::new(Database::from_structure(s, |i| ind(&format!("p{i}"))), ind("p0"))
}

/// Number of assertions in the part of `p` reachable from the root along
/// Σ-roles, Σ-symbols only.
pub fn reachable_sigma_size(p: &PointedDatabase, sigma: &Signature) -> (usize, bool) {
    let s = p.structure();
    let mut seen = vec![false; s.len()];
    let mut stack = vec![p.root_index()];
    seen[p.root_index() as usize] = true;
    let (mut n, mut indegree) = (0, vec![0usize; s.len()]);
    while let Some(u) = stack.pop() {
        n += s.labels(u).iter().filter(|a| sigma.has_concept(**a)).count();
        for &(r, v) in s.succ(u) {
            if sigma.has_role(r) {
                n += 1;
                indegree[v as usize] += 1;
                if !seen[v as usize] {
                    seen[v as usize] = true;
                    stack.push(v);
                }
            }
        }
    }
    let tree = indegree.iter().all(|&d| d <= 1) && indegree[p.root_index() as usize] == 0;
    (n, tree)
}
