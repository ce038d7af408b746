use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use super::catalog::VarName;
use super::cnf::CnfInstance;
use super::EncodeError;

/// DIMACS text. Comment lines before the header list the round bound, the
/// signature, the domain, the types and every variable:
///
/// ```text
/// c round <n>
/// c concepts <A> <B> ...
/// c roles <r> ...
/// c adom <index> <example> <individual>
/// c type <index> <A> <B> ...
/// c var <int> <name>
/// p cnf <vars> <clauses>
/// ```
pub fn to_dimacs(inst: &CnfInstance) -> String {
    let cat = &inst.catalog;
    let mut out = String::new();
    let _ = writeln!(out, "c round {}", cat.n);
    let join = |it: &mut dyn Iterator<Item = String>| it.collect::<Vec<_>>().join(" ");
    let _ = writeln!(out, "c concepts {}", join(&mut cat.concepts.iter().map(|a| a.to_string())));
    let _ = writeln!(out, "c roles {}", join(&mut cat.roles.iter().map(|r| r.to_string())));
    for (k, (ex, a)) in cat.origin.iter().enumerate() {
        let _ = writeln!(out, "c adom {k} {ex} {a}");
    }
    for (k, t) in cat.types.iter().enumerate() {
        let _ = writeln!(out, "c type {k} {}", join(&mut t.iter().map(|a| a.to_string())));
    }
    out.push_str(&varmap(inst).lines().map(|l| format!("c var {l}\n")).collect::<String>());
    let _ = writeln!(out, "p cnf {} {}", inst.num_vars(), inst.clauses.len());
    for c in &inst.clauses {
        for l in c {
            let _ = write!(out, "{l} ");
        }
        out.push_str("0\n");
    }
    out
}

/// Sidecar lines `<int> <name>`, one per variable.
pub fn varmap(inst: &CnfInstance) -> String {
    let cat = &inst.catalog;
    let mut out = String::new();
    for v in 1..=cat.num_vars() as i32 {
        let name = cat.name(v).expect("cataloged variable");
        let _ = writeln!(out, "{v} {name}");
    }
    out
}

/// Writes `path` and the sidecar `path.varmap`.
pub fn export_dimacs(inst: &CnfInstance, path: &Path) -> Result<(), EncodeError> {
    std::fs::File::create(path)?.write_all(to_dimacs(inst).as_bytes())?;
    let mut side = path.as_os_str().to_owned();
    side.push(".varmap");
    std::fs::write(side, varmap(inst))?;
    Ok(())
}

/// Parses `<int> <name>` lines; also accepts the `c var` comments of
/// [`to_dimacs`].
pub fn parse_varmap(text: &str) -> Result<Vec<(i32, VarName)>, EncodeError> {
    let dimacs = text.contains("p cnf");
    let mut out = Vec::new();
    for line in text.lines() {
        let body = match line.strip_prefix("c var ") {
            Some(b) => b.trim(),
            None if dimacs => continue,
            None => line.trim(),
        };
        if body.is_empty() {
            continue;
        }
        let mut it = body.split_whitespace();
        let v = it
            .next()
            .and_then(|x| x.parse().ok())
            .ok_or_else(|| EncodeError::Format(format!("bad varmap line {line:?}")))?;
        let name = it
            .next()
            .ok_or_else(|| EncodeError::Format(format!("bad varmap line {line:?}")))?
            .parse()?;
        out.push((v, name));
    }
    Ok(out)
}

/// Parses `p cnf` text into variable count and clauses.
pub fn parse_dimacs(text: &str) -> Result<(u32, Vec<Vec<i32>>), EncodeError> {
    let mut vars = None;
    let mut clauses = Vec::new();
    let mut cur = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if let Some(h) = line.strip_prefix("p cnf") {
            let nums: Vec<u32> = h.split_whitespace().filter_map(|x| x.parse().ok()).collect();
            if nums.len() != 2 {
                return Err(EncodeError::Format(format!("bad header {line:?}")));
            }
            vars = Some(nums[0]);
            continue;
        }
        for tok in line.split_whitespace() {
            let x: i32 = tok.parse().map_err(|_| EncodeError::Format(format!("bad literal {tok:?}")))?;
            if x == 0 {
                clauses.push(std::mem::take(&mut cur));
            } else {
                cur.push(x);
            }
        }
    }
    if !cur.is_empty() {
        clauses.push(cur);
    }
    let vars = vars.ok_or_else(|| EncodeError::Format("missing p cnf header".into()))?;
    Ok((vars, clauses))
}

/// Reads a model printed by a solver: `v`-lines (or bare integers) with
/// signed literals. Returns `None` for an `UNSAT` answer.
pub fn parse_model(text: &str, num_vars: u32) -> Result<Option<Vec<bool>>, EncodeError> {
    let mut model = vec![false; num_vars as usize];
    for line in text.lines() {
        let line = line.trim();
        if line.contains("UNSAT") {
            return Ok(None);
        }
        if line.is_empty() || line.starts_with('c') || line.starts_with('s') {
            continue;
        }
        let body = line.strip_prefix('v').unwrap_or(line);
        for tok in body.split_whitespace() {
            let x: i32 = tok.parse().map_err(|_| EncodeError::Format(format!("bad literal {tok:?}")))?;
            let v = x.unsigned_abs() as usize;
            if x > 0 && v <= model.len() {
                model[v - 1] = true;
            }
        }
    }
    Ok(Some(model))
}
