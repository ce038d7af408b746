use std::collections::HashMap;
use std::fmt;

use super::parse::{parse_database_lines, DbLine};
use super::{ConceptName, Individual, ModelError, RoleName, Signature, Structure};

/// A finite set of concept and role assertions over named individuals.
///
/// Individuals may be present without any assertion; the text format writes
/// those as `top(a)`.
#[derive(Clone, Default)]
pub struct Database {
    names: Vec<Individual>,
    index: HashMap<Individual, u32>,
    structure: Structure,
}

impl Database {
    pub fn new() -> Self {
        Self::default()
    }

    /// Wraps an anonymous structure, naming node `i` by `name(i)`.
    pub fn from_structure(structure: Structure, name: impl Fn(u32) -> Individual) -> Self {
        let names: Vec<Individual> = structure.nodes().map(name).collect();
        let index = names
            .iter()
            .enumerate()
            .map(|(i, &n)| (n, i as u32))
            .collect::<HashMap<_, _>>();
        assert_eq!(index.len(), names.len(), "individual names must be distinct");
        Database {
            names,
            index,
            structure,
        }
    }

    pub fn structure(&self) -> &Structure {
        &self.structure
    }

    pub fn into_structure(self) -> Structure {
        self.structure
    }

    pub fn add_individual(&mut self, a: Individual) -> u32 {
        if let Some(&i) = self.index.get(&a) {
            return i;
        }
        let i = self.structure.add_node();
        self.names.push(a);
        self.index.insert(a, i);
        i
    }

    pub fn add_concept(&mut self, c: ConceptName, a: Individual) -> bool {
        let i = self.add_individual(a);
        self.structure.add_label(i, c)
    }

    pub fn add_role(&mut self, r: RoleName, a: Individual, b: Individual) -> bool {
        let i = self.add_individual(a);
        let j = self.add_individual(b);
        self.structure.add_edge(i, r, j)
    }

    pub fn index_of(&self, a: Individual) -> Option<u32> {
        self.index.get(&a).copied()
    }

    pub fn name(&self, i: u32) -> Individual {
        self.names[i as usize]
    }

    pub fn contains(&self, a: Individual) -> bool {
        self.index.contains_key(&a)
    }

    pub fn adom(&self) -> &[Individual] {
        &self.names
    }

    /// `||D||`: one unit per assertion.
    pub fn size(&self) -> usize {
        self.structure.assertion_count()
    }

    pub fn signature(&self) -> Signature {
        self.structure.signature()
    }

    pub fn has_concept(&self, c: ConceptName, a: Individual) -> bool {
        self.index_of(a)
            .is_some_and(|i| self.structure.has_label(i, c))
    }

    pub fn has_role(&self, r: RoleName, a: Individual, b: Individual) -> bool {
        match (self.index_of(a), self.index_of(b)) {
            (Some(i), Some(j)) => self.structure.has_edge(i, r, j),
            _ => false,
        }
    }

    pub fn concept_assertions(&self) -> impl Iterator<Item = (ConceptName, Individual)> + '_ {
        self.structure.nodes().flat_map(move |i| {
            self.structure
                .labels(i)
                .iter()
                .map(move |&c| (c, self.names[i as usize]))
        })
    }

    pub fn role_assertions(&self) -> impl Iterator<Item = (RoleName, Individual, Individual)> + '_ {
        self.structure
            .edges()
            .map(move |(i, r, j)| (r, self.names[i as usize], self.names[j as usize]))
    }

    /// Assertions in canonical order, used for comparison and output.
    fn canonical_lines(&self) -> Vec<String> {
        let mut lines: Vec<(u8, String)> = Vec::new();
        for (c, a) in self.concept_assertions() {
            lines.push((0, format!("{c}({a})")));
        }
        for (r, a, b) in self.role_assertions() {
            lines.push((1, format!("{r}({a},{b})")));
        }
        let mut mentioned = vec![false; self.names.len()];
        for (i, _, j) in self.structure.edges() {
            mentioned[i as usize] = true;
            mentioned[j as usize] = true;
        }
        for i in self.structure.nodes() {
            if !mentioned[i as usize] && self.structure.labels(i).is_empty() {
                lines.push((2, format!("top({})", self.names[i as usize])));
            }
        }
        lines.sort();
        lines.into_iter().map(|(_, s)| s).collect()
    }

    pub fn parse(text: &str) -> Result<Database, ModelError> {
        let mut db = Database::new();
        for line in parse_database_lines(text, 1)? {
            db.apply(line.1);
        }
        Ok(db)
    }

    pub(crate) fn apply(&mut self, line: DbLine) {
        match line {
            DbLine::Concept(c, a) => {
                self.add_concept(c, a);
            }
            DbLine::Role(r, a, b) => {
                self.add_role(r, a, b);
            }
            DbLine::Top(a) => {
                self.add_individual(a);
            }
        }
    }
}

impl PartialEq for Database {
    fn eq(&self, other: &Self) -> bool {
        let mut a: Vec<Individual> = self.names.clone();
        let mut b: Vec<Individual> = other.names.clone();
        a.sort();
        b.sort();
        a == b && self.canonical_lines() == other.canonical_lines()
    }
}

impl Eq for Database {}

impl fmt::Display for Database {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in self.canonical_lines() {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Database {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.canonical_lines().join(", "))
    }
}

/// A database together with a distinguished individual.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PointedDatabase {
    pub db: Database,
    pub root: Individual,
}

impl PointedDatabase {
    /// Builds a pointed database, adding `root` to the domain if needed.
    pub fn new(mut db: Database, root: Individual) -> Self {
        db.add_individual(root);
        PointedDatabase { db, root }
    }

    pub fn root_index(&self) -> u32 {
        self.db
            .index_of(self.root)
            .expect("root is always in the domain")
    }

    pub fn structure(&self) -> &Structure {
        self.db.structure()
    }
}
