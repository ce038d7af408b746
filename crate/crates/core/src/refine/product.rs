use crate::model::{Concept, LabeledExampleSet, RoleName};
use crate::sim;

/// Product of two tree-shaped queries: shared names at the root and the
/// products of all same-role child pairs below it.
pub fn tree_product(a: &Concept, b: &Concept) -> Concept {
    let names = a.names().iter().filter(|x| b.names().contains(x)).copied();
    let mut children: Vec<(RoleName, Concept)> = Vec::new();
    for (r, c) in a.children() {
        for (q, d) in b.children() {
            if r == q {
                children.push((*r, tree_product(c, d)));
            }
        }
    }
    Concept::new(names, children)
}

/// The most specific query of depth at most `depth` true at every positive
/// example, if it excludes every negative one. Each positive is unraveled
/// to `depth` and the trees are multiplied one at a time, reducing after
/// every step so the intermediate products stay small.
pub fn most_specific_product(e: &LabeledExampleSet, depth: usize) -> Option<Concept> {
    let mut acc: Option<Concept> = None;
    for p in e.positives() {
        let t = Concept::unravel(p.structure(), p.root_index(), depth);
        acc = Some(sim::minimize(&match acc {
            None => t,
            Some(a) => tree_product(&a, &t),
        }));
    }
    let q = acc?;
    e.negatives().all(|n| !sim::holds(&q, n)).then_some(q)
}
