//! Ontology elimination for ELHr: normal form, a canonical-witness chase
//! producing the ELQ-universal database, and rewriting of example sets.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::model::{
    Concept, ConceptName, Database, Individual, LabeledExample, LabeledExampleSet, Ontology, RoleName,
    Structure,
};
use crate::par;

/// An ontology in normal form.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NormalizedOntology {
    /// `A1 ⊓ … ⊓ Ak ⊑ B`
    pub ci_conj: Vec<(Vec<ConceptName>, ConceptName)>,
    /// `A ⊑ ∃r.B`
    pub ci_exists_right: Vec<(ConceptName, RoleName, ConceptName)>,
    /// `∃r.A ⊑ B`
    pub ci_exists_left: Vec<(RoleName, ConceptName, ConceptName)>,
    /// Reflexive-transitive closure: each role maps to all its super-roles.
    pub role_hierarchy: BTreeMap<RoleName, BTreeSet<RoleName>>,
    /// `ran(r) ⊑ A`
    pub ranges: Vec<(RoleName, ConceptName)>,
    pub fresh_names: BTreeSet<ConceptName>,
    /// Fresh name standing for `⊤`, if an axiom needed one.
    pub top: Option<ConceptName>,
}

impl NormalizedOntology {
    pub fn is_empty(&self) -> bool {
        self.ci_conj.is_empty()
            && self.ci_exists_right.is_empty()
            && self.ci_exists_left.is_empty()
            && self.ranges.is_empty()
            && self.role_hierarchy.values().all(|s| s.len() <= 1)
    }

    /// Super-roles of `r`, including `r`.
    pub fn super_roles(&self, r: RoleName) -> Vec<RoleName> {
        match self.role_hierarchy.get(&r) {
            Some(s) => s.iter().copied().collect(),
            None => vec![r],
        }
    }

    /// Concept names occurring anywhere, fresh ones included.
    pub fn concept_names(&self) -> BTreeSet<ConceptName> {
        let mut out = BTreeSet::new();
        for (l, b) in &self.ci_conj {
            out.extend(l.iter().copied());
            out.insert(*b);
        }
        for &(a, _, b) in &self.ci_exists_right {
            out.insert(a);
            out.insert(b);
        }
        for &(_, a, b) in &self.ci_exists_left {
            out.insert(a);
            out.insert(b);
        }
        for &(_, a) in &self.ranges {
            out.insert(a);
        }
        out
    }
}

struct Normalizer {
    out: NormalizedOntology,
    counter: usize,
}

impl Normalizer {
    fn fresh(&mut self) -> ConceptName {
        self.counter += 1;
        let x = ConceptName::internal(&format!("#X{}", self.counter));
        self.out.fresh_names.insert(x);
        x
    }

    fn top(&mut self) -> ConceptName {
        if let Some(t) = self.out.top {
            return t;
        }
        let t = ConceptName::internal("#TOP");
        self.out.fresh_names.insert(t);
        self.out.top = Some(t);
        t
    }

    fn conj(&mut self, lhs: Vec<ConceptName>, b: ConceptName) {
        let mut lhs = lhs;
        lhs.sort();
        lhs.dedup();
        if lhs.contains(&b) {
            return;
        }
        let ax = (lhs, b);
        if !self.out.ci_conj.contains(&ax) {
            self.out.ci_conj.push(ax);
        }
    }

    fn exists_right(&mut self, a: ConceptName, r: RoleName, b: ConceptName) {
        let ax = (a, r, b);
        if !self.out.ci_exists_right.contains(&ax) {
            self.out.ci_exists_right.push(ax);
        }
    }

    fn exists_left(&mut self, r: RoleName, a: ConceptName, b: ConceptName) {
        let ax = (r, a, b);
        if !self.out.ci_exists_left.contains(&ax) {
            self.out.ci_exists_left.push(ax);
        }
    }

    /// A name entailing `c`. Single names are used as they are.
    fn rhs_name(&mut self, c: &Concept) -> Option<ConceptName> {
        if c.is_top() {
            return None;
        }
        if c.children().is_empty() && c.names().len() == 1 {
            return Some(c.names()[0]);
        }
        let x = self.fresh();
        self.rhs(x, c);
        Some(x)
    }

    /// Axioms for `a ⊑ c`.
    fn rhs(&mut self, a: ConceptName, c: &Concept) {
        for &b in c.names() {
            self.conj(vec![a], b);
        }
        for (r, e) in c.children() {
            let b = match self.rhs_name(e) {
                Some(b) => b,
                None => self.top(),
            };
            self.exists_right(a, *r, b);
        }
    }

    /// Names whose conjunction is entailed by `c`; empty for `⊤`.
    fn lhs_names(&mut self, c: &Concept) -> Vec<ConceptName> {
        let mut out: Vec<ConceptName> = c.names().to_vec();
        for (r, e) in c.children() {
            let a = self.lhs_name(e);
            let y = self.fresh();
            self.exists_left(*r, a, y);
            out.push(y);
        }
        out
    }

    /// A single name entailed by `c`.
    fn lhs_name(&mut self, c: &Concept) -> ConceptName {
        let l = self.lhs_names(c);
        match l.len() {
            0 => self.top(),
            1 => l[0],
            _ => {
                let x = self.fresh();
                self.conj(l, x);
                x
            }
        }
    }

    fn inclusion(&mut self, c: &Concept, d: &Concept) {
        if d.is_top() {
            return;
        }
        if let ([], [(r, e)]) = (c.names(), c.children()) {
            if let Some(b) = self.rhs_name(d) {
                let a = self.lhs_name(e);
                self.exists_left(*r, a, b);
            }
            return;
        }
        let mut l = self.lhs_names(c);
        if l.is_empty() {
            l.push(self.top());
        }
        if l.len() == 1 {
            self.rhs(l[0], d);
            return;
        }
        if d.children().is_empty() {
            for &b in d.names() {
                self.conj(l.clone(), b);
            }
            return;
        }
        let x = self.fresh();
        self.conj(l, x);
        self.rhs(x, d);
    }
}

pub fn normalize(o: &Ontology) -> NormalizedOntology {
    let mut n = Normalizer {
        out: NormalizedOntology::default(),
        counter: 0,
    };
    for (c, d) in &o.concept_inclusions {
        n.inclusion(c, d);
    }
    for (r, c) in &o.ranges {
        if let Some(a) = n.rhs_name(c) {
            n.out.ranges.push((*r, a));
        }
    }
    n.out.ranges.sort();
    n.out.ranges.dedup();

    let mut roles: BTreeSet<RoleName> = BTreeSet::new();
    for &(r, s) in &o.role_inclusions {
        roles.insert(r);
        roles.insert(s);
    }
    for r in roles {
        let mut sup = BTreeSet::from([r]);
        let mut stack = vec![r];
        while let Some(x) = stack.pop() {
            for &(a, b) in &o.role_inclusions {
                if a == x && sup.insert(b) {
                    stack.push(b);
                }
            }
        }
        n.out.role_hierarchy.insert(r, sup);
    }
    n.out
}

/// The chase state: a structure plus canonical witnesses.
struct Chase<'a> {
    o: &'a NormalizedOntology,
    s: Structure,
    witnesses: HashMap<(RoleName, ConceptName), u32>,
    witness_of: Vec<Option<(RoleName, ConceptName)>>,
}

impl Chase<'_> {
    fn add_edge(&mut self, u: u32, r: RoleName, v: u32) -> bool {
        let mut changed = false;
        for s in self.o.super_roles(r) {
            changed |= self.s.add_edge(u, s, v);
        }
        changed
    }

    /// Concept-name, role-hierarchy and range rules until nothing changes.
    fn close_names(&mut self) -> bool {
        let mut any = false;
        loop {
            let mut changed = false;
            let edges: Vec<(u32, RoleName, u32)> = self.s.edges().collect();
            for &(u, r, v) in &edges {
                changed |= self.add_edge(u, r, v);
                for &(q, a) in &self.o.ranges {
                    if q == r {
                        changed |= self.s.add_label(v, a);
                    }
                }
                for &(q, a, b) in &self.o.ci_exists_left {
                    if q == r && self.s.has_label(v, a) {
                        changed |= self.s.add_label(u, b);
                    }
                }
            }
            for u in 0..self.s.len() as u32 {
                for (l, b) in &self.o.ci_conj {
                    if l.iter().all(|&a| self.s.has_label(u, a)) {
                        changed |= self.s.add_label(u, *b);
                    }
                }
            }
            if !changed {
                return any;
            }
            any = true;
        }
    }

    fn witness(&mut self, r: RoleName, b: ConceptName) -> u32 {
        if let Some(&w) = self.witnesses.get(&(r, b)) {
            return w;
        }
        let w = self.s.add_node();
        self.s.add_label(w, b);
        if let Some(t) = self.o.top {
            self.s.add_label(w, t);
        }
        self.witnesses.insert((r, b), w);
        self.witness_of.push(Some((r, b)));
        w
    }

    fn fire_existentials(&mut self) -> bool {
        let mut changed = false;
        for u in 0..self.s.len() as u32 {
            for &(a, r, b) in &self.o.ci_exists_right {
                if self.s.has_label(u, a) {
                    let w = self.witness(r, b);
                    changed |= self.add_edge(u, r, w);
                }
            }
        }
        changed
    }

    fn run(&mut self) {
        loop {
            self.close_names();
            if !self.fire_existentials() {
                break;
            }
        }
    }
}

/// Saturates a structure; nodes `0..s.len()` keep their indices and
/// witnesses are appended. The second component names the witness behind
/// each appended node. Fresh names are stripped.
pub fn saturate_structure(s: &Structure, o: &NormalizedOntology) -> (Structure, Vec<(RoleName, ConceptName)>) {
    let n = s.len();
    let mut chase = Chase {
        o,
        s: s.clone(),
        witnesses: HashMap::new(),
        witness_of: vec![None; n],
    };
    if let Some(t) = o.top {
        for u in 0..n as u32 {
            chase.s.add_label(u, t);
        }
    }
    chase.run();
    let fresh = &o.fresh_names;
    let keep = vec![true; chase.s.len()];
    let (out, _) = chase.s.restrict(&keep, |a| !fresh.contains(&a), |_, _, _| true);
    let witnesses = chase.witness_of[n..].iter().map(|w| w.expect("witness")).collect();
    (out, witnesses)
}

fn witness_name(r: RoleName, b: ConceptName) -> Individual {
    Individual::internal(&format!("w[{r},{b}]"))
}

/// `U_{D,O}`: answers on `adom(d)` coincide with certain answers of ELQs
/// over the non-fresh signature.
pub fn universal_db(d: &Database, o: &Ontology) -> Database {
    if o.is_empty() {
        return d.clone();
    }
    universal_db_normalized(d, &normalize(o))
}

pub fn universal_db_normalized(d: &Database, no: &NormalizedOntology) -> Database {
    let (s, witnesses) = saturate_structure(d.structure(), no);
    let n = d.adom().len();
    Database::from_structure(s, |i| {
        if (i as usize) < n {
            d.name(i)
        } else {
            let (r, b) = witnesses[i as usize - n];
            witness_name(r, b)
        }
    })
}

/// `E_O`: every example database replaced by its universal database.
pub fn eliminate_ontology(e: &LabeledExampleSet, o: &Ontology) -> LabeledExampleSet {
    if o.is_empty() {
        return e.clone();
    }
    let no = normalize(o);
    let examples = par::map(&e.examples, |x| {
        let db = universal_db_normalized(&x.example.db, &no);
        LabeledExample {
            example: crate::model::PointedDatabase::new(db, x.example.root),
            label: x.label,
        }
    });
    LabeledExampleSet { examples }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{cn, ind, rn, Label, PointedDatabase};
    use crate::sim;

    fn onto(s: &str) -> Ontology {
        Ontology::parse(s).unwrap()
    }

    #[test]
    fn normal_axiom_unchanged() {
        let n = normalize(&onto("CI (ex r A) B"));
        assert_eq!(n.ci_exists_left, vec![(rn("r"), cn("A"), cn("B"))]);
        assert!(n.ci_conj.is_empty());
        assert!(n.fresh_names.is_empty());
    }

    #[test]
    fn nested_rhs_gets_one_fresh_name() {
        let n = normalize(&onto("CI A (ex r (and B C))"));
        assert_eq!(n.fresh_names.len(), 1);
        let x = *n.fresh_names.iter().next().unwrap();
        assert_eq!(n.ci_exists_right, vec![(cn("A"), rn("r"), x)]);
        assert_eq!(n.ci_conj, vec![(vec![x], cn("B")), (vec![x], cn("C"))]);
    }

    #[test]
    fn empty_ontology() {
        assert!(normalize(&Ontology::new()).is_empty());
        let d = Database::parse("A(a)\nr(a,b)").unwrap();
        assert_eq!(universal_db(&d, &Ontology::new()), d);
    }

    #[test]
    fn witness_chain() {
        let d = Database::parse("A(a)").unwrap();
        let u = universal_db(&d, &onto("CI A (ex r B)\nCI B C"));
        let w = witness_name(rn("r"), cn("B"));
        assert!(u.has_concept(cn("A"), ind("a")));
        assert!(u.has_role(rn("r"), ind("a"), w));
        assert!(u.has_concept(cn("B"), w));
        assert!(u.has_concept(cn("C"), w));
        assert_eq!(sim::evaluate(&"(ex r C)".parse().unwrap(), &u), vec![ind("a")]);
    }

    #[test]
    fn role_hierarchy_then_range() {
        let d = Database::parse("r(a,b)").unwrap();
        let u = universal_db(&d, &onto("RI r s\nRANGE s B"));
        assert!(u.has_role(rn("s"), ind("a"), ind("b")));
        assert!(u.has_concept(cn("B"), ind("b")));
        assert_eq!(u.adom().len(), 2);
    }

    #[test]
    fn top_lhs_applies_everywhere() {
        let d = Database::parse("r(a,b)").unwrap();
        let u = universal_db(&d, &onto("CI top A"));
        assert!(u.has_concept(cn("A"), ind("a")));
        assert!(u.has_concept(cn("A"), ind("b")));
        assert!(u.signature().concepts.iter().all(|c| !c.is_internal()));
    }

    #[test]
    fn complex_lhs() {
        let d = Database::parse("r(a,b)\nA(b)\nB(b)\nC(a)").unwrap();
        let u = universal_db(&d, &onto("CI (and C (ex r (and A B))) D"));
        assert!(u.has_concept(cn("D"), ind("a")));
        let d = Database::parse("r(a,b)\nA(b)\nC(a)").unwrap();
        let u = universal_db(&d, &onto("CI (and C (ex r (and A B))) D"));
        assert!(!u.has_concept(cn("D"), ind("a")));
    }

    #[test]
    fn cyclic_witnesses_stay_finite() {
        let d = Database::parse("A(a)").unwrap();
        let u = universal_db(&d, &onto("CI A (ex r A)"));
        assert_eq!(u.adom().len(), 2);
        let q: Concept = "(ex r (ex r (ex r A)))".parse().unwrap();
        assert_eq!(sim::evaluate(&q, &u).len(), 2);
    }

    #[test]
    fn eliminate_adds_consequence() {
        let e = LabeledExampleSet::new().with(
            PointedDatabase::new(Database::parse("A(a)").unwrap(), ind("a")),
            Label::Positive,
        );
        let eo = eliminate_ontology(&e, &onto("CI A B"));
        assert!(eo.examples[0].example.db.has_concept(cn("B"), ind("a")));
        assert_eq!(eo.examples[0].label, Label::Positive);
    }
}
