//! Symbols, databases, EL concepts, ontologies and labeled examples.

mod concept;
mod database;
mod examples;
mod ontology;
mod ops;
pub mod parse;
mod structure;
mod symbol;

pub use concept::Concept;
pub use database::{Database, PointedDatabase};
pub use examples::{Label, LabeledExample, LabeledExampleSet};
pub use ontology::Ontology;
pub use ops::{concept_to_pointed_db, direct_product, pointed_db_to_concept, product_structure, unravel};
pub use structure::Structure;
pub use symbol::{cn, ind, is_identifier, rn, ConceptName, Individual, RoleName};

use std::collections::BTreeSet;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("invalid identifier {0:?}")]
    BadIdentifier(String),
    #[error("{line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("not tree-shaped")]
    NotTreeShaped,
}

impl ModelError {
    pub(crate) fn syntax(line: usize, column: usize, message: impl Into<String>) -> Self {
        ModelError::Syntax {
            line,
            column,
            message: message.into(),
        }
    }
}

/// A set of concept and role names.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Signature {
    pub concepts: BTreeSet<ConceptName>,
    pub roles: BTreeSet<RoleName>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_parts(
        concepts: impl IntoIterator<Item = ConceptName>,
        roles: impl IntoIterator<Item = RoleName>,
    ) -> Self {
        Signature {
            concepts: concepts.into_iter().collect(),
            roles: roles.into_iter().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.concepts.len() + self.roles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty() && self.roles.is_empty()
    }

    pub fn union(&self, other: &Signature) -> Signature {
        Signature {
            concepts: self.concepts.union(&other.concepts).copied().collect(),
            roles: self.roles.union(&other.roles).copied().collect(),
        }
    }

    pub fn intersection(&self, other: &Signature) -> Signature {
        Signature {
            concepts: self.concepts.intersection(&other.concepts).copied().collect(),
            roles: self.roles.intersection(&other.roles).copied().collect(),
        }
    }

    pub fn extend(&mut self, other: &Signature) {
        self.concepts.extend(other.concepts.iter().copied());
        self.roles.extend(other.roles.iter().copied());
    }

    pub fn is_subset(&self, other: &Signature) -> bool {
        self.concepts.is_subset(&other.concepts) && self.roles.is_subset(&other.roles)
    }

    pub fn has_concept(&self, a: ConceptName) -> bool {
        self.concepts.contains(&a)
    }

    pub fn has_role(&self, r: RoleName) -> bool {
        self.roles.contains(&r)
    }
}
