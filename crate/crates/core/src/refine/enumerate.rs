use std::time::Instant;

use crate::model::{Concept, ConceptName, RoleName, Signature};
use crate::sim;

use super::RefineError;

/// Reduced ELQs over a fixed signature, generated by atom count and kept
/// between calls.
///
/// A concept is reduced iff its successors are reduced and no two
/// same-role siblings are comparable; reduced forms are unique, so the
/// canonical ordering makes every equivalence class appear once.
#[derive(Clone, Debug)]
pub struct Enumerator {
    sigma: Signature,
    concepts: Vec<ConceptName>,
    roles: Vec<RoleName>,
    by_atoms: Vec<Vec<Concept>>,
    cap: usize,
    total: usize,
}

impl Enumerator {
    pub fn new(sigma: &Signature, cap: usize) -> Self {
        Enumerator {
            sigma: sigma.clone(),
            concepts: sigma.concepts.iter().copied().collect(),
            roles: sigma.roles.iter().copied().collect(),
            by_atoms: vec![vec![Concept::top()]],
            cap,
            total: 1,
        }
    }

    pub fn signature(&self) -> &Signature {
        &self.sigma
    }

    /// Reduced concepts with exactly `k` atoms.
    pub fn with_atoms(&mut self, k: usize, deadline: Option<Instant>) -> Result<&[Concept], RefineError> {
        while self.by_atoms.len() <= k {
            let next = self.by_atoms.len();
            let level = self.generate(next, deadline)?;
            self.by_atoms.push(level);
        }
        Ok(&self.by_atoms[k])
    }

    /// Reduced concepts of size at most `s` (so `⊤` plus all with ≤ `s`
    /// atoms), smallest first.
    pub fn up_to_size(&mut self, s: usize, deadline: Option<Instant>) -> Result<Vec<Concept>, RefineError> {
        let mut out = Vec::new();
        for k in 0..=s {
            out.extend_from_slice(self.with_atoms(k, deadline)?);
        }
        Ok(out)
    }

    fn generate(&mut self, k: usize, deadline: Option<Instant>) -> Result<Vec<Concept>, RefineError> {
        let mut out = Vec::new();
        let cap = self.cap;
        let mut total = self.total;
        // items (role, child) of weight w = 1 + atoms(child), heaviest first
        let mut items: Vec<(usize, RoleName, &Concept)> = Vec::new();
        for w in (1..=k).rev() {
            for &r in &self.roles {
                for c in &self.by_atoms[w - 1] {
                    items.push((w, r, c));
                }
            }
        }
        let nc = self.concepts.len();
        for t in 0..=nc.min(k) {
            let mut subsets = Vec::new();
            name_subsets(&self.concepts, t, 0, &mut Vec::new(), &mut subsets);
            let rest = k - t;
            let mut chosen: Vec<usize> = Vec::new();
            let mut forests: Vec<Vec<usize>> = Vec::new();
            child_sets(&items, rest, 0, &mut chosen, &mut forests, deadline)?;
            for names in &subsets {
                for f in &forests {
                    let children = f.iter().map(|&i| (items[i].1, items[i].2.clone()));
                    out.push(Concept::new(names.iter().copied(), children));
                    total += 1;
                    if total > cap {
                        return Err(RefineError::EnumerationCap(cap));
                    }
                }
            }
        }
        self.total = total;
        out.sort();
        Ok(out)
    }
}

fn name_subsets(
    names: &[ConceptName],
    t: usize,
    from: usize,
    cur: &mut Vec<ConceptName>,
    out: &mut Vec<Vec<ConceptName>>,
) {
    if cur.len() == t {
        out.push(cur.clone());
        return;
    }
    for i in from..names.len() {
        cur.push(names[i]);
        name_subsets(names, t, i + 1, cur, out);
        cur.pop();
    }
}

/// Sets of distinct items with total weight `rest`, same-role members
/// pairwise incomparable.
fn child_sets(
    items: &[(usize, RoleName, &Concept)],
    rest: usize,
    from: usize,
    chosen: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
    deadline: Option<Instant>,
) -> Result<(), RefineError> {
    if rest == 0 {
        out.push(chosen.clone());
        return Ok(());
    }
    if deadline.is_some_and(|d| Instant::now() >= d) {
        return Err(RefineError::Timeout);
    }
    for i in from..items.len() {
        let (w, r, c) = items[i];
        if w > rest {
            continue;
        }
        let clash = chosen.iter().any(|&j| {
            let (_, r2, c2) = items[j];
            r2 == r && (sim::subsumes(c, c2) || sim::subsumes(c2, c))
        });
        if clash {
            continue;
        }
        chosen.push(i);
        child_sets(items, rest - w, i + 1, chosen, out, deadline)?;
        chosen.pop();
    }
    Ok(())
}
