use std::fmt::Write;

use super::{Cnf, VarTag};
use crate::error::{NrdError, Result};

const TAG_PREFIX: &str = "c var ";

/// DIMACS CNF text with one `c var <index> <tag>` comment per variable.
pub fn to_dimacs(cnf: &Cnf) -> String {
    let mut out = String::new();
    for (i, tag) in cnf.registry.iter().enumerate() {
        writeln!(out, "{TAG_PREFIX}{} {tag}", i + 1).unwrap();
    }
    writeln!(out, "p cnf {} {}", cnf.num_vars(), cnf.clauses.len()).unwrap();
    for c in &cnf.clauses {
        for l in c {
            write!(out, "{l} ").unwrap();
        }
        out.push_str("0\n");
    }
    out
}

/// Parses DIMACS CNF; `c var` comments restore the registry, other
/// variables are tagged as auxiliary.
pub fn parse_dimacs(text: &str) -> Result<Cnf> {
    let mut declared: Option<(usize, usize)> = None;
    let mut tags: Vec<(usize, VarTag)> = Vec::new();
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        if let Some(rest) = line.strip_prefix(TAG_PREFIX) {
            let (idx, tag) = rest.split_once(' ').ok_or_else(|| parse_err(lineno, "malformed var comment"))?;
            let idx: usize = idx.parse().map_err(|_| parse_err(lineno, "bad variable index"))?;
            let tag = VarTag::parse(tag).ok_or_else(|| parse_err(lineno, "unknown variable tag"))?;
            tags.push((idx, tag));
            continue;
        }
        if line.starts_with('c') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("p cnf") {
            let nums: Vec<usize> = rest
                .split_whitespace()
                .map(|s| s.parse().map_err(|_| parse_err(lineno, "bad header")))
                .collect::<Result<_>>()?;
            if nums.len() != 2 {
                return Err(parse_err(lineno, "header needs variable and clause counts"));
            }
            declared = Some((nums[0], nums[1]));
            continue;
        }
        let (vars, _) = declared.ok_or_else(|| parse_err(lineno, "clause before header"))?;
        for tok in line.split_whitespace() {
            let l: i32 = tok.parse().map_err(|_| parse_err(lineno, "bad literal"))?;
            if l == 0 {
                clauses.push(std::mem::take(&mut current));
            } else if l.unsigned_abs() as usize > vars {
                return Err(parse_err(lineno, "literal exceeds declared variable count"));
            } else {
                current.push(l);
            }
        }
    }
    if !current.is_empty() {
        clauses.push(current);
    }
    let (vars, count) = declared.ok_or_else(|| NrdError::Parse("missing p cnf header".into()))?;
    if count != clauses.len() {
        log::warn!("header declares {count} clauses, found {}", clauses.len());
    }
    let mut registry: Vec<VarTag> = (1..=vars).map(|v| VarTag::Aux(format!("v{v}"))).collect();
    for (idx, tag) in tags {
        if idx == 0 || idx > vars {
            return Err(NrdError::Parse(format!("var comment for {idx} outside 1..={vars}")));
        }
        registry[idx - 1] = tag;
    }
    Ok(Cnf { clauses, registry })
}

/// Reads a model in SAT-competition output (`s SATISFIABLE` / `v` lines) or
/// as a bare list of signed literals. Unmentioned variables default to false.
pub fn parse_model(text: &str, num_vars: usize) -> Result<Option<Vec<bool>>> {
    let mut model = vec![false; num_vars];
    for line in text.lines() {
        let line = line.trim();
        if line.starts_with("s ") {
            if line.contains("UNSAT") {
                return Ok(None);
            }
            continue;
        }
        if line.starts_with('c') || line.is_empty() {
            continue;
        }
        let body = line.strip_prefix('v').unwrap_or(line);
        for tok in body.split_whitespace() {
            let l: i64 = tok.parse().map_err(|_| NrdError::Parse(format!("bad model literal {tok:?}")))?;
            if l == 0 {
                continue;
            }
            let v = l.unsigned_abs() as usize;
            if v > num_vars {
                return Err(NrdError::Parse(format!("model mentions variable {v} beyond {num_vars}")));
            }
            model[v - 1] = l > 0;
        }
    }
    Ok(Some(model))
}

fn parse_err(lineno: usize, msg: &str) -> NrdError {
    NrdError::Parse(format!("line {}: {msg}", lineno + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_preserves_registry() {
        let mut f = Cnf::new();
        let a = f.add_var(VarTag::X { q: 0, j: 1, d: 2 });
        let b = f.add_var(VarTag::Y { q: 1, q2: 3 });
        f.add_clause(vec![a, -b]);
        f.add_clause(vec![b]);
        let text = to_dimacs(&f);
        assert!(text.contains("p cnf 2 2"));
        assert_eq!(parse_dimacs(&text).unwrap(), f);
    }

    #[test]
    fn models_from_solver_output() {
        assert_eq!(parse_model("s SATISFIABLE\nv 1 -2 3 0\n", 3).unwrap(), Some(vec![true, false, true]));
        assert_eq!(parse_model("s UNSATISFIABLE\n", 3).unwrap(), None);
        assert!(parse_model("v 4 0", 3).is_err());
    }

    #[test]
    fn rejects_clause_before_header() {
        assert!(parse_dimacs("1 2 0\n").is_err());
    }
}
