//! CNF formulas, an embedded CDCL solver, and DIMACS import/export.

mod dimacs;
mod solver;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use dimacs::{parse_dimacs, parse_model, to_dimacs};
pub use solver::{solve, SolveResult, SolverConfig, SolverStats};

/// Meaning of a variable in an encoding.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VarTag {
    /// Output coordinate `j` of `Σ(q)` takes value `d` (`q` indexes the source ambient).
    X { q: usize, j: usize, d: u8 },
    /// `Σ(q) = q′` (`q′` indexes the target ambient).
    Y { q: usize, q2: usize },
    Aux(String),
}

impl fmt::Display for VarTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarTag::X { q, j, d } => write!(f, "x {q} {j} {d}"),
            VarTag::Y { q, q2 } => write!(f, "y {q} {q2}"),
            VarTag::Aux(s) => write!(f, "aux {s}"),
        }
    }
}

impl VarTag {
    pub fn parse(text: &str) -> Option<VarTag> {
        let mut it = text.split_whitespace();
        match it.next()? {
            "x" => Some(VarTag::X { q: it.next()?.parse().ok()?, j: it.next()?.parse().ok()?, d: it.next()?.parse().ok()? }),
            "y" => Some(VarTag::Y { q: it.next()?.parse().ok()?, q2: it.next()?.parse().ok()? }),
            "aux" => Some(VarTag::Aux(it.collect::<Vec<_>>().join(" "))),
            _ => None,
        }
    }
}

/// A CNF formula over variables `1..=num_vars` (DIMACS numbering).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Cnf {
    pub clauses: Vec<Vec<i32>>,
    /// `registry[v - 1]` describes variable `v`.
    pub registry: Vec<VarTag>,
}

impl Cnf {
    pub fn new() -> Self {
        Cnf::default()
    }

    pub fn num_vars(&self) -> usize {
        self.registry.len()
    }

    /// Registers a variable and returns its (positive) DIMACS index.
    pub fn add_var(&mut self, tag: VarTag) -> i32 {
        self.registry.push(tag);
        self.registry.len() as i32
    }

    pub fn add_clause(&mut self, clause: impl Into<Vec<i32>>) {
        let clause = clause.into();
        debug_assert!(clause.iter().all(|&l| l != 0 && l.unsigned_abs() as usize <= self.registry.len()));
        self.clauses.push(clause);
    }

    pub fn tag(&self, var: i32) -> &VarTag {
        &self.registry[var.unsigned_abs() as usize - 1]
    }

    /// Whether `model` (indexed by variable − 1) satisfies every clause.
    pub fn satisfied_by(&self, model: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|&l| model[l.unsigned_abs() as usize - 1] == (l > 0)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tags_round_trip_through_text() {
        for tag in [VarTag::X { q: 3, j: 1, d: 2 }, VarTag::Y { q: 0, q2: 7 }, VarTag::Aux("free text".into())] {
            assert_eq!(VarTag::parse(&tag.to_string()), Some(tag));
        }
    }
}
