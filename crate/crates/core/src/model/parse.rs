//! Text formats: concepts, database lines, ontology lines and example sets.
//!
//! Concept grammar: `C := "top" | NAME | "(and" C C+ ")" | "(ex" NAME C ")"`.
//! Line and column numbers in errors are 1-based.

use super::{Concept, ConceptName, Individual, ModelError, RoleName};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Open,
    Close,
    Word(String),
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

/// Splits `text` into parentheses and words. `line` is the number of the
/// first line of `text`.
pub(crate) fn tokenize(text: &str, line: usize) -> Result<Vec<Token>, ModelError> {
    let mut out = Vec::new();
    for (k, row) in text.lines().enumerate() {
        let line = line + k;
        let chars: Vec<char> = row.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let column = i + 1;
            if c.is_whitespace() {
                i += 1;
            } else if c == '(' {
                out.push(Token { tok: Tok::Open, line, column });
                i += 1;
            } else if c == ')' {
                out.push(Token { tok: Tok::Close, line, column });
                i += 1;
            } else if c.is_ascii_alphanumeric() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                out.push(Token { tok: Tok::Word(word), line, column });
            } else {
                return Err(ModelError::syntax(line, column, format!("unexpected character {c:?}")));
            }
        }
    }
    Ok(out)
}

pub(crate) struct ConceptParser<'a> {
    toks: &'a [Token],
    pos: usize,
    end: (usize, usize),
}

impl<'a> ConceptParser<'a> {
    pub fn new(toks: &'a [Token], end: (usize, usize)) -> Self {
        ConceptParser { toks, pos: 0, end }
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map(|t| (t.line, t.column))
            .unwrap_or(self.end)
    }

    fn err(&self, msg: impl Into<String>) -> ModelError {
        let (l, c) = self.here();
        ModelError::syntax(l, c, msg)
    }

    fn next(&mut self) -> Option<&'a Token> {
        let t = self.toks.get(self.pos);
        self.pos += 1;
        t
    }

    pub fn word(&mut self, what: &str) -> Result<&'a str, ModelError> {
        match self.toks.get(self.pos) {
            Some(Token { tok: Tok::Word(w), .. }) => {
                self.pos += 1;
                Ok(w.as_str())
            }
            _ => Err(self.err(format!("expected {what}"))),
        }
    }

    pub fn role(&mut self) -> Result<RoleName, ModelError> {
        let w = self.word("role name")?;
        RoleName::new(w).map_err(|e| self.err_prev(e))
    }

    fn err_prev(&self, e: ModelError) -> ModelError {
        let t = &self.toks[self.pos - 1];
        ModelError::syntax(t.line, t.column, e.to_string())
    }

    fn expect_close(&mut self) -> Result<(), ModelError> {
        match self.toks.get(self.pos) {
            Some(Token { tok: Tok::Close, .. }) => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err("expected ')'")),
        }
    }

    pub fn concept(&mut self) -> Result<Concept, ModelError> {
        let (line, column) = self.here();
        let Some(tok) = self.next() else {
            return Err(ModelError::syntax(line, column, "expected concept"));
        };
        match &tok.tok {
            Tok::Word(w) if w == "top" => Ok(Concept::top()),
            Tok::Word(w) => ConceptName::new(w)
                .map(Concept::name)
                .map_err(|e| ModelError::syntax(line, column, e.to_string())),
            Tok::Close => Err(ModelError::syntax(line, column, "unexpected ')'")),
            Tok::Open => {
                let op = self.word("'and' or 'ex'")?;
                match op {
                    "and" => {
                        let mut parts = vec![self.concept()?, self.concept()?];
                        while !matches!(self.toks.get(self.pos), Some(Token { tok: Tok::Close, .. }) | None) {
                            parts.push(self.concept()?);
                        }
                        self.expect_close()?;
                        Ok(Concept::conj(parts))
                    }
                    "ex" => {
                        let r = self.role()?;
                        let c = self.concept()?;
                        self.expect_close()?;
                        Ok(Concept::exists(r, c))
                    }
                    other => Err(ModelError::syntax(
                        self.toks[self.pos - 1].line,
                        self.toks[self.pos - 1].column,
                        format!("expected 'and' or 'ex', found {other:?}"),
                    )),
                }
            }
        }
    }
}

fn end_position(text: &str, line: usize) -> (usize, usize) {
    let rows: Vec<&str> = text.lines().collect();
    match rows.last() {
        Some(last) => (line + rows.len() - 1, last.chars().count() + 1),
        None => (line, 1),
    }
}

/// Parses a complete concept from `text`.
pub fn parse_concept(text: &str) -> Result<Concept, ModelError> {
    parse_concept_at(text, 1)
}

pub(crate) fn parse_concept_at(text: &str, line: usize) -> Result<Concept, ModelError> {
    let toks = tokenize(text, line)?;
    let mut p = ConceptParser::new(&toks, end_position(text, line));
    let c = p.concept()?;
    if !p.at_end() {
        return Err(p.err("trailing input after concept"));
    }
    Ok(c)
}

/// One line of a database file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum DbLine {
    Concept(ConceptName, Individual),
    Role(RoleName, Individual, Individual),
    Top(Individual),
}

/// Strips a `#` comment and surrounding whitespace.
pub(crate) fn strip_comment(row: &str) -> &str {
    row.split('#').next().unwrap_or("").trim()
}

pub(crate) fn parse_assertion(row: &str, line: usize) -> Result<DbLine, ModelError> {
    let offset = row.len() - row.trim_start().len();
    let body = strip_comment(row);
    let at = |i: usize| offset + body[..i].chars().count() + 1;
    let Some(open) = body.find('(') else {
        return Err(ModelError::syntax(line, at(0), "expected assertion of the form A(a) or r(a,b)"));
    };
    if !body.ends_with(')') {
        return Err(ModelError::syntax(line, at(body.len()), "expected ')'"));
    }
    let pred = body[..open].trim_end();
    // argument slices with their byte offsets into `body`
    let mut args = Vec::new();
    let mut start = open + 1;
    for (i, ch) in body[..body.len() - 1].char_indices().skip_while(|&(i, _)| i <= open) {
        if ch == ',' {
            args.push((start, &body[start..i]));
            start = i + 1;
        }
    }
    args.push((start, &body[start..body.len() - 1]));
    let arg = |(pos, raw): (usize, &str)| {
        let lead = raw.len() - raw.trim_start().len();
        Individual::new(raw.trim()).map_err(|e| ModelError::syntax(line, at(pos + lead), e.to_string()))
    };
    match args.len() {
        1 if pred == "top" => Ok(DbLine::Top(arg(args[0])?)),
        1 => {
            let c = ConceptName::new(pred).map_err(|e| ModelError::syntax(line, at(0), e.to_string()))?;
            Ok(DbLine::Concept(c, arg(args[0])?))
        }
        2 => {
            let r = RoleName::new(pred).map_err(|e| ModelError::syntax(line, at(0), e.to_string()))?;
            Ok(DbLine::Role(r, arg(args[0])?, arg(args[1])?))
        }
        _ => Err(ModelError::syntax(line, at(open), "expected one or two arguments")),
    }
}

/// Parses database lines; `first_line` is the line number of the first row.
/// Returns each assertion with its line number.
pub(crate) fn parse_database_lines(text: &str, first_line: usize) -> Result<Vec<(usize, DbLine)>, ModelError> {
    let mut out = Vec::new();
    for (k, row) in text.lines().enumerate() {
        if strip_comment(row).is_empty() {
            continue;
        }
        out.push((first_line + k, parse_assertion(row, first_line + k)?));
    }
    Ok(out)
}
