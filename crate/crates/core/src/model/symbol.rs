use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{OnceLock, RwLock};

use super::ModelError;

/// Process-wide string interner. Ids are dense and assigned in insertion
/// order, so they are not stable across runs; ordering of symbols always goes
/// through the string.
struct Interner {
    strings: Vec<&'static str>,
    ids: HashMap<&'static str, u32>,
}

fn interner() -> &'static RwLock<Interner> {
    static INTERNER: OnceLock<RwLock<Interner>> = OnceLock::new();
    INTERNER.get_or_init(|| {
        RwLock::new(Interner {
            strings: Vec::new(),
            ids: HashMap::new(),
        })
    })
}

fn intern(s: &str) -> u32 {
    if let Some(&id) = interner().read().expect("interner poisoned").ids.get(s) {
        return id;
    }
    let mut guard = interner().write().expect("interner poisoned");
    if let Some(&id) = guard.ids.get(s) {
        return id;
    }
    let leaked: &'static str = Box::leak(s.to_owned().into_boxed_str());
    let id = guard.strings.len() as u32;
    guard.strings.push(leaked);
    guard.ids.insert(leaked, id);
    id
}

fn resolve(id: u32) -> &'static str {
    interner().read().expect("interner poisoned").strings[id as usize]
}

/// Returns true if `s` is a nonempty word over `[A-Za-z0-9_]`.
pub fn is_identifier(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

/// An interned identifier. Equality and hashing use the id, ordering uses the
/// underlying string.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Sym(u32);

impl Sym {
    fn checked(s: &str) -> Result<Sym, ModelError> {
        if is_identifier(s) {
            Ok(Sym(intern(s)))
        } else {
            Err(ModelError::BadIdentifier(s.to_owned()))
        }
    }

    pub fn as_str(self) -> &'static str {
        resolve(self.0)
    }
}

impl Ord for Sym {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.0 == other.0 {
            Ordering::Equal
        } else {
            self.as_str().cmp(other.as_str())
        }
    }
}

impl PartialOrd for Sym {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

macro_rules! symbol_kind {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name(Sym);

        impl $name {
            pub fn new(s: &str) -> Result<Self, ModelError> {
                Sym::checked(s).map($name)
            }

            /// Interns a name that is deliberately outside the identifier
            /// syntax. Such names can never collide with parsed input.
            #[allow(dead_code)]
            pub(crate) fn internal(s: &str) -> Self {
                $name(Sym(intern(s)))
            }

            pub fn as_str(self) -> &'static str {
                self.0.as_str()
            }

            /// True for names created through [`Self::internal`] that
            /// violate the identifier syntax.
            pub fn is_internal(self) -> bool {
                !is_identifier(self.as_str())
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", self.as_str())
            }
        }

        impl std::str::FromStr for $name {
            type Err = ModelError;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                $name::new(s)
            }
        }
    };
}

symbol_kind!(
    /// A concept name (unary predicate).
    ConceptName
);
symbol_kind!(
    /// A role name (binary predicate).
    RoleName
);
symbol_kind!(
    /// An individual name.
    Individual
);

/// Shorthand used throughout tests and generators.
pub fn cn(s: &str) -> ConceptName {
    ConceptName::new(s).expect("valid concept name")
}

pub fn rn(s: &str) -> RoleName {
    RoleName::new(s).expect("valid role name")
}

pub fn ind(s: &str) -> Individual {
    Individual::new(s).expect("valid individual name")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interning_is_injective_per_kind() {
        let a1 = ConceptName::new("A").unwrap();
        let a2 = ConceptName::new("A").unwrap();
        let b = ConceptName::new("B").unwrap();
        assert_eq!(a1, a2);
        assert_ne!(a1, b);
        assert_eq!(a1.as_str(), "A");
    }

    #[test]
    fn ordering_is_lexicographic() {
        // intern in reverse order so ids disagree with string order
        let z = ConceptName::new("zz_order").unwrap();
        let a = ConceptName::new("aa_order").unwrap();
        assert!(a < z);
    }

    #[test]
    fn rejects_bad_identifiers() {
        assert!(ConceptName::new("").is_err());
        assert!(ConceptName::new("a-b").is_err());
        assert!(RoleName::new("r s").is_err());
        assert!(Individual::new("a_1").is_ok());
    }

    #[test]
    fn internal_names_are_flagged() {
        let x = ConceptName::internal("#fresh1");
        assert!(x.is_internal());
        assert!(!cn("A").is_internal());
    }
}
