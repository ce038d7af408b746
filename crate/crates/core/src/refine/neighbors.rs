use std::collections::{HashMap, HashSet};
use std::time::Instant;

use crate::model::{Concept, RoleName, Signature};
use crate::sim;

use super::RefineError;

/// Upper and lower neighbours of reduced concepts over a signature.
///
/// Upper neighbours of `C`: drop one top-level name, or replace one
/// conjunct `∃r.E` by `⊓{∃r.F : F upper neighbour of E}`.
///
/// Lower neighbours of `C`: `C ⊓ A` for a missing name `A`, and
/// `C ⊓ ∃r.D` where no `r`-conjunct `E` of `C` has `E ⊑ D` but every upper
/// neighbour `F` of `D` has some `r`-conjunct `E ⊑ F`. The candidates `D`
/// are lower neighbours of members of the upset of the `r`-conjuncts, so
/// they are found by walking that upset down from `⊤`.
#[derive(Clone, Debug, Default)]
pub struct Neighbors {
    sigma: Signature,
    upper: HashMap<Concept, Vec<Concept>>,
    lower: HashMap<Concept, Vec<Concept>>,
}

fn dedup(v: &mut Vec<Concept>) {
    v.sort();
    v.dedup();
}

impl Neighbors {
    pub fn new(sigma: &Signature) -> Self {
        Neighbors {
            sigma: sigma.clone(),
            ..Neighbors::default()
        }
    }

    /// Upper neighbours of the reduced concept `c`.
    pub fn upper(&mut self, c: &Concept) -> Vec<Concept> {
        if let Some(v) = self.upper.get(c) {
            return v.clone();
        }
        let mut out = Vec::new();
        for (k, _) in c.names().iter().enumerate() {
            let names = c.names().iter().enumerate().filter(|&(i, _)| i != k).map(|(_, &a)| a);
            out.push(Concept::new(names, c.children().iter().cloned()));
        }
        for (k, (r, e)) in c.children().iter().enumerate() {
            let mut children: Vec<(RoleName, Concept)> = c
                .children()
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != k)
                .map(|(_, x)| x.clone())
                .collect();
            for f in self.upper(e) {
                children.push((*r, f));
            }
            out.push(sim::minimize(&Concept::new(c.names().iter().copied(), children)));
        }
        dedup(&mut out);
        self.upper.insert(c.clone(), out.clone());
        out
    }

    /// Lower neighbours of the reduced concept `c` over the signature.
    pub fn lower(&mut self, c: &Concept, deadline: Option<Instant>) -> Result<Vec<Concept>, RefineError> {
        if let Some(v) = self.lower.get(c) {
            return Ok(v.clone());
        }
        if deadline.is_some_and(|d| Instant::now() >= d) {
            return Err(RefineError::Timeout);
        }
        let mut out = Vec::new();
        let sigma = self.sigma.clone();
        for &a in &sigma.concepts {
            if !c.names().contains(&a) {
                let names = c.names().iter().copied().chain([a]);
                out.push(Concept::new(names, c.children().iter().cloned()));
            }
        }
        for &r in &sigma.roles {
            let es: Vec<&Concept> = c.children().iter().filter(|(q, _)| *q == r).map(|(_, e)| e).collect();
            for d in self.fillers(&es, deadline)? {
                let children = c.children().iter().cloned().chain([(r, d)]);
                out.push(sim::minimize(&Concept::new(c.names().iter().copied(), children)));
            }
        }
        dedup(&mut out);
        self.lower.insert(c.clone(), out.clone());
        Ok(out)
    }

    /// The concepts `D` with `E ⋢ D` for all `E ∈ es` whose upper
    /// neighbours all lie in the upset of `es`.
    fn fillers(&mut self, es: &[&Concept], deadline: Option<Instant>) -> Result<Vec<Concept>, RefineError> {
        if es.is_empty() {
            return Ok(vec![Concept::top()]);
        }
        let in_upset = |d: &Concept| es.iter().any(|e| sim::subsumes(e, d));
        let mut seen: HashSet<Concept> = HashSet::from([Concept::top()]);
        let mut queue = vec![Concept::top()];
        let mut out = Vec::new();
        while let Some(x) = queue.pop() {
            for y in self.lower(&x, deadline)? {
                if seen.contains(&y) {
                    continue;
                }
                seen.insert(y.clone());
                if in_upset(&y) {
                    queue.push(y);
                } else if self.upper(&y).iter().all(in_upset) {
                    out.push(y);
                }
            }
        }
        dedup(&mut out);
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{cn, rn};

    fn strs(v: &[Concept]) -> Vec<String> {
        v.iter().map(|c| c.to_string()).collect()
    }

    #[test]
    fn lower_neighbors_of_top() {
        let mut n = Neighbors::new(&Signature::from_parts([cn("A")], [rn("r")]));
        assert_eq!(strs(&n.lower(&Concept::top(), None).unwrap()), vec!["(ex r top)", "A"]);
    }

    #[test]
    fn lower_neighbors_of_name() {
        let mut n = Neighbors::new(&Signature::from_parts([cn("A"), cn("B")], []));
        assert_eq!(strs(&n.lower(&"A".parse().unwrap(), None).unwrap()), vec!["(and A B)"]);
    }

    #[test]
    fn upper_neighbors() {
        let mut n = Neighbors::new(&Signature::from_parts([cn("A"), cn("B")], [rn("r")]));
        let c: Concept = "(ex r (and A B))".parse().unwrap();
        assert_eq!(strs(&n.upper(&c)), vec!["(and (ex r A) (ex r B))"]);
        let c: Concept = "(and A (ex r top))".parse().unwrap();
        assert_eq!(strs(&n.upper(&c)), vec!["(ex r top)", "A"]);
    }

    #[test]
    fn lower_neighbors_below_existential() {
        let mut n = Neighbors::new(&Signature::from_parts([cn("A"), cn("B")], [rn("r")]));
        // ∃r.(A ⊓ B) lies below ∃r.A ⊓ ∃r.B, so it is not a neighbour
        assert_eq!(
            strs(&n.lower(&"(ex r A)".parse().unwrap(), None).unwrap()),
            vec!["(and (ex r (ex r top)) (ex r A))", "(and (ex r A) (ex r B))", "(and A (ex r A))", "(and B (ex r A))"]
        );
    }
}
