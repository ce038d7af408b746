use std::fmt;

use super::parse::{strip_comment, tokenize, ConceptParser};
use super::{Concept, ModelError, RoleName, Signature};

/// An ELHr ontology: concept inclusions, role inclusions and range
/// assertions. Each list is kept duplicate-free.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Ontology {
    pub concept_inclusions: Vec<(Concept, Concept)>,
    pub role_inclusions: Vec<(RoleName, RoleName)>,
    pub ranges: Vec<(RoleName, Concept)>,
}

impl Ontology {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.concept_inclusions.is_empty() && self.role_inclusions.is_empty() && self.ranges.is_empty()
    }

    pub fn add_ci(&mut self, lhs: Concept, rhs: Concept) {
        let ax = (lhs, rhs);
        if !self.concept_inclusions.contains(&ax) {
            self.concept_inclusions.push(ax);
        }
    }

    pub fn add_ri(&mut self, r: RoleName, s: RoleName) {
        if !self.role_inclusions.contains(&(r, s)) {
            self.role_inclusions.push((r, s));
        }
    }

    pub fn add_range(&mut self, r: RoleName, c: Concept) {
        let ax = (r, c);
        if !self.ranges.contains(&ax) {
            self.ranges.push(ax);
        }
    }

    pub fn signature(&self) -> Signature {
        let mut sig = Signature::new();
        for (l, r) in &self.concept_inclusions {
            sig.extend(&l.signature());
            sig.extend(&r.signature());
        }
        for &(r, s) in &self.role_inclusions {
            sig.roles.insert(r);
            sig.roles.insert(s);
        }
        for (r, c) in &self.ranges {
            sig.roles.insert(*r);
            sig.extend(&c.signature());
        }
        sig
    }

    /// Parses lines `CI <C> <D>`, `RI <r> <s>` and `RANGE <r> <C>`.
    pub fn parse(text: &str) -> Result<Ontology, ModelError> {
        let mut o = Ontology::new();
        for (k, row) in text.lines().enumerate() {
            let line = k + 1;
            let body = strip_comment(row);
            if body.is_empty() {
                continue;
            }
            // keep columns relative to the raw row
            let lead = row.len() - row.trim_start().len();
            let padded = format!("{}{}", " ".repeat(lead), body);
            let toks = tokenize(&padded, line)?;
            let end = (line, padded.chars().count() + 1);
            let mut p = ConceptParser::new(&toks, end);
            match p.word("CI, RI or RANGE")? {
                "CI" => {
                    let l = p.concept()?;
                    let r = p.concept()?;
                    finish(&p, end)?;
                    o.add_ci(l, r);
                }
                "RI" => {
                    let r = p.role()?;
                    let s = p.role()?;
                    finish(&p, end)?;
                    o.add_ri(r, s);
                }
                "RANGE" => {
                    let r = p.role()?;
                    let c = p.concept()?;
                    finish(&p, end)?;
                    o.add_range(r, c);
                }
                other => {
                    return Err(ModelError::syntax(
                        line,
                        lead + 1,
                        format!("expected CI, RI or RANGE, found {other:?}"),
                    ))
                }
            }
        }
        Ok(o)
    }
}

fn finish(p: &ConceptParser<'_>, end: (usize, usize)) -> Result<(), ModelError> {
    if p.at_end() {
        Ok(())
    } else {
        Err(ModelError::syntax(end.0, end.1, "trailing input after axiom"))
    }
}

impl fmt::Display for Ontology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (l, r) in &self.concept_inclusions {
            writeln!(f, "CI {l} {r}")?;
        }
        for (r, s) in &self.role_inclusions {
            writeln!(f, "RI {r} {s}")?;
        }
        for (r, c) in &self.ranges {
            writeln!(f, "RANGE {r} {c}")?;
        }
        Ok(())
    }
}
