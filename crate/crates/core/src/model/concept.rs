use std::fmt;
use std::str::FromStr;

use super::parse::parse_concept;
use super::{ind, ConceptName, Database, Individual, ModelError, PointedDatabase, RoleName, Signature, Structure};

/// An EL concept in canonical form: sorted, duplicate-free concept names and
/// existential restrictions sorted by role and serialization.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Concept {
    names: Vec<ConceptName>,
    children: Vec<(RoleName, Concept)>,
}

impl Concept {
    pub fn top() -> Self {
        Concept::default()
    }

    pub fn name(a: ConceptName) -> Self {
        Concept {
            names: vec![a],
            children: Vec::new(),
        }
    }

    pub fn exists(r: RoleName, c: Concept) -> Self {
        Concept {
            names: Vec::new(),
            children: vec![(r, c)],
        }
    }

    /// Builds `A1 ⊓ … ⊓ ∃r1.C1 ⊓ …` and brings it into canonical form.
    /// Repeated names collapse; repeated restrictions are kept so that the
    /// tree shape survives a round trip through [`Concept::to_structure`].
    pub fn new(
        names: impl IntoIterator<Item = ConceptName>,
        children: impl IntoIterator<Item = (RoleName, Concept)>,
    ) -> Self {
        let mut names: Vec<ConceptName> = names.into_iter().collect();
        names.sort();
        names.dedup();
        let mut children: Vec<(RoleName, Concept)> = children.into_iter().collect();
        sort_children(&mut children);
        Concept { names, children }
    }

    /// Conjunction of arbitrary concepts.
    pub fn conj(parts: impl IntoIterator<Item = Concept>) -> Self {
        let mut names = Vec::new();
        let mut children = Vec::new();
        for p in parts {
            names.extend(p.names);
            children.extend(p.children);
        }
        Concept::new(names, children)
    }

    pub fn names(&self) -> &[ConceptName] {
        &self.names
    }

    pub fn children(&self) -> &[(RoleName, Concept)] {
        &self.children
    }

    pub fn is_top(&self) -> bool {
        self.names.is_empty() && self.children.is_empty()
    }

    /// Number of concept-name and role-name occurrences.
    pub fn atoms(&self) -> usize {
        self.names.len()
            + self
                .children
                .iter()
                .map(|(_, c)| 1 + c.atoms())
                .sum::<usize>()
    }

    /// `||C||`: symbol occurrences, with `||⊤|| = 1`.
    pub fn size(&self) -> usize {
        self.atoms().max(1)
    }

    pub fn restriction_count(&self) -> usize {
        self.children
            .iter()
            .map(|(_, c)| 1 + c.restriction_count())
            .sum()
    }

    /// Maximum nesting depth of existential restrictions.
    pub fn depth(&self) -> usize {
        self.children
            .iter()
            .map(|(_, c)| 1 + c.depth())
            .max()
            .unwrap_or(0)
    }

    pub fn signature(&self) -> Signature {
        let mut sig = Signature::new();
        self.collect_signature(&mut sig);
        sig
    }

    fn collect_signature(&self, sig: &mut Signature) {
        sig.concepts.extend(self.names.iter().copied());
        for (r, c) in &self.children {
            sig.roles.insert(*r);
            c.collect_signature(sig);
        }
    }

    /// The tree `D_C` with nodes in preorder; the root is node 0.
    pub fn to_structure(&self) -> Structure {
        let mut s = Structure::new();
        self.build(&mut s);
        s
    }

    fn build(&self, s: &mut Structure) -> u32 {
        let u = s.add_node();
        for &a in &self.names {
            s.add_label(u, a);
        }
        for (r, c) in &self.children {
            let v = c.build(s);
            s.add_edge(u, *r, v);
        }
        u
    }

    /// `(D_C, a_C)` with individuals `a0` (the root), `a1`, … in preorder.
    pub fn to_pointed_db(&self) -> PointedDatabase {
        let db = Database::from_structure(self.to_structure(), node_name);
        PointedDatabase::new(db, node_name(0))
    }

    /// Reads a tree-shaped structure back as a concept. Every node must be
    /// reachable from `root`.
    pub fn from_tree(s: &Structure, root: u32) -> Result<Concept, ModelError> {
        if !s.is_tree_from(root) {
            return Err(ModelError::NotTreeShaped);
        }
        Ok(Concept::unravel(s, root, usize::MAX))
    }

    pub fn from_pointed_db(p: &PointedDatabase) -> Result<Concept, ModelError> {
        Concept::from_tree(p.structure(), p.root_index())
    }

    /// The unraveling of `s` at `root`, truncated at `depth` edges.
    pub fn unravel(s: &Structure, root: u32, depth: usize) -> Concept {
        let children: Vec<(RoleName, Concept)> = if depth == 0 {
            Vec::new()
        } else {
            s.succ(root)
                .iter()
                .map(|&(r, v)| (r, Concept::unravel(s, v, depth - 1)))
                .collect()
        };
        Concept::new(s.labels(root).iter().copied(), children)
    }

    /// Substitutes the subtree at `path` (a sequence of child positions).
    pub fn replace_at(&self, path: &[usize], f: &mut dyn FnMut(&Concept) -> Concept) -> Concept {
        match path.split_first() {
            None => f(self),
            Some((&i, rest)) => {
                let mut children = self.children.clone();
                children[i].1 = children[i].1.replace_at(rest, f);
                Concept::new(self.names.iter().copied(), children)
            }
        }
    }
}

pub(crate) fn node_name(i: u32) -> Individual {
    ind(&format!("a{i}"))
}

fn sort_children(children: &mut [(RoleName, Concept)]) {
    if children.len() > 1 {
        children.sort_by_cached_key(|(r, c)| (r.as_str(), c.to_string()));
    }
}

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items = self.names.len() + self.children.len();
        if items == 0 {
            return f.write_str("top");
        }
        if items > 1 {
            f.write_str("(and")?;
        }
        let mut first = items == 1;
        for a in &self.names {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{a}")?;
        }
        for (r, c) in &self.children {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "(ex {r} {c})")?;
        }
        if items > 1 {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Concept {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_concept(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{cn, rn};

    fn c(s: &str) -> Concept {
        s.parse().unwrap()
    }

    #[test]
    fn canonical_serialization() {
        assert_eq!(c("(and (ex r B) A)").to_string(), "(and A (ex r B))");
        assert_eq!(c("(and A top)").to_string(), "A");
        assert_eq!(c("(and A A)").to_string(), "A");
        assert_eq!(c("(ex r top)").to_string(), "(ex r top)");
        assert_eq!(c("(and (ex s A) (ex r B) (ex r A))").to_string(), "(and (ex r A) (ex r B) (ex s A))");
    }

    #[test]
    fn sizes() {
        assert_eq!(Concept::top().size(), 1);
        assert_eq!(c("(ex r top)").size(), 1);
        assert_eq!(c("(and A (ex r B))").size(), 3);
        assert_eq!(c("(ex r (ex s A))").restriction_count(), 2);
        assert_eq!(c("(and (ex r (ex s A)) (ex r B))").depth(), 2);
    }

    #[test]
    fn pointed_db_of_nested_restriction() {
        let p = c("(ex r (ex s A))").to_pointed_db();
        assert_eq!(p.root, ind("a0"));
        let expected = Database::parse("r(a0,a1)\ns(a1,a2)\nA(a2)\n").unwrap();
        assert_eq!(p.db, expected);
        assert_eq!(p.db.size(), 3);
    }

    #[test]
    fn pointed_db_of_conjunction() {
        let p = c("(and A (ex r B))").to_pointed_db();
        let expected = Database::parse("A(a0)\nr(a0,a1)\nB(a1)\n").unwrap();
        assert_eq!(p.db, expected);
    }

    #[test]
    fn top_has_bare_root() {
        let p = Concept::top().to_pointed_db();
        assert_eq!(p.db.size(), 0);
        assert_eq!(p.db.adom(), &[ind("a0")]);
    }

    #[test]
    fn tree_back_conversion() {
        let db = Database::parse("A(a)").unwrap();
        let p = PointedDatabase::new(db, ind("a"));
        assert_eq!(Concept::from_pointed_db(&p).unwrap(), Concept::name(cn("A")));
        let db = Database::parse("r(a,b)\nB(b)").unwrap();
        let p = PointedDatabase::new(db, ind("a"));
        assert_eq!(Concept::from_pointed_db(&p).unwrap(), Concept::exists(rn("r"), Concept::name(cn("B"))));
        let db = Database::parse("r(a,a)").unwrap();
        let p = PointedDatabase::new(db, ind("a"));
        assert_eq!(Concept::from_pointed_db(&p), Err(ModelError::NotTreeShaped));
    }

    #[test]
    fn unravel_loop() {
        let db = Database::parse("r(a,a)").unwrap();
        let s = db.structure();
        assert_eq!(Concept::unravel(s, 0, 2).to_string(), "(ex r (ex r top))");
        assert_eq!(Concept::unravel(s, 0, 0), Concept::top());
    }
}
