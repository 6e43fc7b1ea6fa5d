//! Published tuple maps `Σ` bundled with the crate, with their source,
//! target and index family, plus the BoolBCK coordinate-permutation table.

use std::collections::BTreeMap;

use crate::catalog;
use crate::error::{NrdError, Result};
use crate::predicate::{parse_digits, ConditionalPredicate, IndexFamily, Tuple};
use crate::substructure::SubstructureCertificate;

#[derive(Clone, Copy, Debug)]
pub enum FamilySpec {
    /// Sets in [`IndexFamily::parse`] syntax.
    Sets(&'static str),
    /// `I_j = [r₁] ∖ {i_j}` for the listed 1-indexed `i_j`.
    Complements(&'static [usize]),
    /// No family was stated; every output may read every input.
    Unstated,
}

#[derive(Clone, Copy, Debug)]
pub struct SigmaTable {
    pub name: &'static str,
    pub description: &'static str,
    pub source: &'static str,
    pub target: &'static str,
    pub family: FamilySpec,
    text: &'static str,
}

const TABLES: &[SigmaTable] = &[
    SigmaTable {
        name: "or3-to-3lin",
        description: "OR3 into the 3LIN* conditional predicate via pair projections",
        source: "OR3",
        target: "3LIN",
        family: FamilySpec::Sets("12,13,23"),
        text: include_str!("../data/or3_to_3lin.sigma"),
    },
    SigmaTable {
        name: "r2s2-to-boolbck-drop1",
        description: "R2|S2 into BoolBCK|BoolBCK+ with coordinate 1 projected away",
        source: "R2|S2",
        target: "BoolBCK@~1|BoolBCK+@~1",
        family: FamilySpec::Complements(&[1, 2, 3, 1, 2, 4, 1, 2]),
        text: include_str!("../data/r2s2_to_boolbck_drop1.sigma"),
    },
    SigmaTable {
        name: "r2s2-to-boolbck-drop2",
        description: "R2|S2 into BoolBCK|BoolBCK+ with coordinate 2 projected away",
        source: "R2|S2",
        target: "BoolBCK@~2|BoolBCK+@~2",
        family: FamilySpec::Complements(&[1, 2, 1, 3, 2, 1, 4, 2]),
        text: include_str!("../data/r2s2_to_boolbck_drop2.sigma"),
    },
    SigmaTable {
        name: "r1s1-to-cat5-134",
        description: "R1|S1 into Cat5 projected to coordinates 1,3,4",
        source: "R1|S1",
        target: "P1|Q1",
        family: FamilySpec::Sets("12,23,13"),
        text: include_str!("../data/r1s1_to_cat5_134.sigma"),
    },
    SigmaTable {
        name: "r1s1-to-cat5-124",
        description: "R1|S1 into Cat5 projected to coordinates 1,2,4",
        source: "R1|S1",
        target: "P2|Q2",
        family: FamilySpec::Sets("12,23,13"),
        text: include_str!("../data/r1s1_to_cat5_124.sigma"),
    },
    SigmaTable {
        name: "r2s2-to-cat5-1234",
        description: "R2|S2 into Cat5 projected to coordinates 1,2,3,4",
        source: "R2|S2",
        target: "P3|Q3",
        family: FamilySpec::Sets("234,134,124,123"),
        text: include_str!("../data/r2s2_to_cat5_1234.sigma"),
    },
    SigmaTable {
        name: "cat5-to-boolbck",
        description: "Cat5|Cat5+ into BoolBCK|BoolBCK+",
        source: "Cat5|Cat5+",
        target: "BoolBCK|BoolBCK+",
        family: FamilySpec::Unstated,
        text: include_str!("../data/cat5_to_boolbck.sigma"),
    },
    SigmaTable {
        name: "or2-to-arity4",
        description: "OR2 into an arity-4 Boolean conditional predicate with an empty index set",
        source: "OR2",
        target: "Mixed4|Full2^4",
        family: FamilySpec::Sets("-,1,1,2"),
        text: include_str!("../data/or2_to_arity4.sigma"),
    },
];

const PERMUTATIONS: &str = include_str!("../data/boolbck_coordinate_perms.txt");

pub fn all() -> &'static [SigmaTable] {
    TABLES
}

pub fn names() -> Vec<&'static str> {
    TABLES.iter().map(|t| t.name).collect()
}

pub fn table(name: &str) -> Result<&'static SigmaTable> {
    TABLES
        .iter()
        .find(|t| t.name == name)
        .ok_or_else(|| NrdError::Lookup(format!("{name:?} is not a bundled table (known: {})", names().join(", "))))
}

impl SigmaTable {
    pub fn source(&self) -> Result<ConditionalPredicate> {
        catalog::conditional(self.source)
    }

    pub fn target(&self) -> Result<ConditionalPredicate> {
        catalog::conditional(self.target)
    }

    pub fn family(&self) -> Result<IndexFamily> {
        let r1 = self.source()?.arity();
        let r2 = self.target()?.arity();
        match self.family {
            FamilySpec::Sets(text) => IndexFamily::parse(r1, text),
            FamilySpec::Complements(dropped) => IndexFamily::complements(r1, dropped),
            FamilySpec::Unstated => Ok(IndexFamily::full(r1, r2)),
        }
    }

    pub fn sigma(&self) -> Result<BTreeMap<Tuple, Tuple>> {
        parse_sigma(self.text)
    }

    pub fn certificate(&self) -> Result<SubstructureCertificate> {
        Ok(SubstructureCertificate {
            source: self.source()?,
            target: self.target()?,
            family: self.family()?,
            sigma: self.sigma()?,
        })
    }

    pub fn rows(&self) -> usize {
        self.text.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#')).count()
    }
}

/// Parses `input image` digit-string rows; `#` starts a comment line.
pub fn parse_sigma(text: &str) -> Result<BTreeMap<Tuple, Tuple>> {
    let mut out = BTreeMap::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let mut words = line.split_whitespace();
        let (Some(a), Some(b), None) = (words.next(), words.next(), words.next()) else {
            return Err(NrdError::Parse(format!("expected two words in {line:?}")));
        };
        if out.insert(parse_digits(a)?, parse_digits(b)?).is_some() {
            return Err(NrdError::Parse(format!("duplicate input {a}")));
        }
    }
    Ok(out)
}

/// One row of the BoolBCK coordinate-permutation table: `sigma[j - 1]` is the
/// 1-indexed image of coordinate `j`, `None` at the dropped coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermutationRow {
    pub dropped: usize,
    pub sigma: Vec<Option<usize>>,
}

pub fn coordinate_permutations() -> Result<Vec<PermutationRow>> {
    PERMUTATIONS
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|line| {
            let (head, rest) = line.split_once(':').ok_or_else(|| NrdError::Parse(format!("missing ':' in {line:?}")))?;
            let dropped = head.trim().parse().map_err(|_| NrdError::Parse(format!("bad row index in {line:?}")))?;
            let sigma = rest
                .split_whitespace()
                .map(|w| match w {
                    "-" => Ok(None),
                    _ => w.parse().map(Some).map_err(|_| NrdError::Parse(format!("bad entry {w:?}"))),
                })
                .collect::<Result<_>>()?;
            Ok(PermutationRow { dropped, sigma })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_have_expected_row_counts() {
        let counts: Vec<(&str, usize)> = all().iter().map(|t| (t.name, t.sigma().unwrap().len())).collect();
        assert_eq!(
            counts,
            vec![
                ("or3-to-3lin", 8),
                ("r2s2-to-boolbck-drop1", 36),
                ("r2s2-to-boolbck-drop2", 36),
                ("r1s1-to-cat5-134", 18),
                ("r1s1-to-cat5-124", 18),
                ("r2s2-to-cat5-1234", 36),
                ("cat5-to-boolbck", 6),
                ("or2-to-arity4", 4),
            ]
        );
    }

    #[test]
    fn permutation_rows_cover_three_to_nine() {
        let rows = coordinate_permutations().unwrap();
        assert_eq!(rows.iter().map(|r| r.dropped).collect::<Vec<_>>(), (3..=9).collect::<Vec<_>>());
        assert!(rows.iter().all(|r| r.sigma.len() == 9 && r.sigma[r.dropped - 1].is_none()));
    }

    #[test]
    fn sigma_domains_match_source_ambients() {
        for t in all() {
            let src = t.source().unwrap();
            let keys: Vec<Tuple> = t.sigma().unwrap().into_keys().collect();
            assert_eq!(keys, src.ambient().tuples(), "{}", t.name);
        }
    }
}
