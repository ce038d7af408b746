use std::fmt;

use super::parse::{parse_database_lines, strip_comment};
use super::{Database, Individual, ModelError, PointedDatabase, Signature};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Positive,
    Negative,
}

impl Label {
    pub fn is_positive(self) -> bool {
        self == Label::Positive
    }

    pub fn from_bool(positive: bool) -> Label {
        if positive {
            Label::Positive
        } else {
            Label::Negative
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Label::Positive => '+',
            Label::Negative => '-',
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledExample {
    pub example: PointedDatabase,
    pub label: Label,
}

/// A collection of labeled pointed databases.
///
/// Text format: blocks `example <+|-> <individual>` … `end` whose body is a
/// database in the usual line format.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LabeledExampleSet {
    pub examples: Vec<LabeledExample>,
}

impl LabeledExampleSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, example: PointedDatabase, label: Label) {
        self.examples.push(LabeledExample { example, label });
    }

    pub fn with(mut self, example: PointedDatabase, label: Label) -> Self {
        self.push(example, label);
        self
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    pub fn positives(&self) -> impl Iterator<Item = &PointedDatabase> {
        self.examples
            .iter()
            .filter(|e| e.label.is_positive())
            .map(|e| &e.example)
    }

    pub fn negatives(&self) -> impl Iterator<Item = &PointedDatabase> {
        self.examples
            .iter()
            .filter(|e| !e.label.is_positive())
            .map(|e| &e.example)
    }

    pub fn positive_count(&self) -> usize {
        self.positives().count()
    }

    pub fn signature(&self) -> Signature {
        let mut sig = Signature::new();
        for e in &self.examples {
            sig.extend(&e.example.db.signature());
        }
        sig
    }

    /// The subset with positive labels only.
    pub fn positive_part(&self) -> LabeledExampleSet {
        LabeledExampleSet {
            examples: self
                .examples
                .iter()
                .filter(|e| e.label.is_positive())
                .cloned()
                .collect(),
        }
    }

    pub fn parse(text: &str) -> Result<LabeledExampleSet, ModelError> {
        let mut set = LabeledExampleSet::new();
        let rows: Vec<&str> = text.lines().collect();
        let mut k = 0;
        while k < rows.len() {
            let line = k + 1;
            let body = strip_comment(rows[k]);
            k += 1;
            if body.is_empty() {
                continue;
            }
            let lead = rows[k - 1].len() - rows[k - 1].trim_start().len();
            let parts: Vec<&str> = body.split_whitespace().collect();
            if parts.len() != 3 || parts[0] != "example" {
                return Err(ModelError::syntax(line, lead + 1, "expected 'example <+|-> <individual>'"));
            }
            let label = match parts[1] {
                "+" => Label::Positive,
                "-" => Label::Negative,
                _ => {
                    let col = lead + body.find(parts[1]).unwrap_or(0) + 1;
                    return Err(ModelError::syntax(line, col, "label must be '+' or '-'"));
                }
            };
            let root = Individual::new(parts[2]).map_err(|e| {
                let col = lead + body.rfind(parts[2]).unwrap_or(0) + 1;
                ModelError::syntax(line, col, e.to_string())
            })?;
            let start = k;
            while k < rows.len() && strip_comment(rows[k]) != "end" {
                k += 1;
            }
            if k == rows.len() {
                return Err(ModelError::syntax(rows.len() + 1, 1, "missing 'end'"));
            }
            let block = rows[start..k].join("\n");
            let mut db = Database::new();
            for (_, a) in parse_database_lines(&block, start + 1)? {
                db.apply(a);
            }
            set.push(PointedDatabase::new(db, root), label);
            k += 1;
        }
        Ok(set)
    }
}

impl fmt::Display for LabeledExampleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.examples {
            writeln!(f, "example {} {}", e.label.symbol(), e.example.root)?;
            write!(f, "{}", e.example.db)?;
            writeln!(f, "end")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ind;

    const E0: &str = "\
example + a
r(a,a)
A(a)
B(a)
end
example + a
A(a)
r(a,b)
B(b)
end
example - b
r(a,b)
end
";

    #[test]
    fn parse_example_blocks() {
        let e = LabeledExampleSet::parse(E0).unwrap();
        assert_eq!(e.len(), 3);
        assert_eq!(e.positive_count(), 2);
        assert_eq!(e.negatives().next().unwrap().root, ind("b"));
        assert_eq!(LabeledExampleSet::parse(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn errors_report_lines() {
        match LabeledExampleSet::parse("example + a\nA(a\nend\n") {
            Err(ModelError::Syntax { line: 2, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        match LabeledExampleSet::parse("example * a\nend\n") {
            Err(ModelError::Syntax { line: 1, column: 9, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(LabeledExampleSet::parse("example + a\nA(a)\n").is_err());
    }
}
