use crate::model::{Database, LabeledExample, LabeledExampleSet, PointedDatabase, Signature};

/// The part of `p` within `depth` role steps of the root.
pub fn prune_example(p: &PointedDatabase, depth: usize) -> PointedDatabase {
    let s = p.structure();
    let dist = s.distances(p.root_index(), |_| true);
    let keep: Vec<bool> = dist.iter().map(|d| d.is_some_and(|d| d <= depth)).collect();
    let (out, map) = s.restrict(&keep, |_| true, |_, _, _| true);
    let mut names = vec![None; out.len()];
    for (old, new) in map.iter().enumerate() {
        if let Some(k) = new {
            names[*k as usize] = Some(p.db.name(old as u32));
        }
    }
    let db = Database::from_structure(out, |i| names[i as usize].expect("kept individual"));
    PointedDatabase::new(db, p.root)
}

/// Restricts every example to its `n−1`-neighbourhood and computes the
/// learning signature: the symbols shared by all pruned positives, or the
/// union over all pruned examples when there is no positive.
pub fn prune(e: &LabeledExampleSet, n: usize) -> (LabeledExampleSet, Signature) {
    let depth = n.saturating_sub(1);
    let examples: Vec<LabeledExample> = e
        .examples
        .iter()
        .map(|x| LabeledExample {
            example: prune_example(&x.example, depth),
            label: x.label,
        })
        .collect();
    let pruned = LabeledExampleSet { examples };
    let mut sigma: Option<Signature> = None;
    for p in pruned.positives() {
        let s = p.db.signature();
        sigma = Some(match sigma {
            None => s,
            Some(acc) => acc.intersection(&s),
        });
    }
    let sigma = sigma.unwrap_or_else(|| pruned.signature());
    (pruned, sigma)
}
