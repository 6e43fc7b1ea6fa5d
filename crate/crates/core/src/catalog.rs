//! Named predicate fixtures.
//!
//! Names resolve through a small expression syntax on top of the registry:
//!
//! * `NAME@134` or `NAME@1,3,4` projects onto the listed 1-indexed coordinates;
//! * `NAME@~2` projects away coordinate 2;
//! * `A|B` builds the conditional predicate with base `A` and ambient `B`.
//!
//! Plain names: `EQ`, `OR<k>`, `1in3`, `C6`, `C6*`, `BoolBCK`, `BoolBCK+`,
//! `Cat5`, `Cat5+`, `3LIN*`, `3LIN*+`, `Mixed4`, `Full<d>^<r>`.
//! Conditional names: `R1|S1`, `R2|S2`, `P1|Q1`, `P2|Q2`, `P3|Q3`, `3LIN`.

use std::fmt;

use crate::error::{NrdError, Result};
use crate::predicate::{ConditionalPredicate, Predicate, Tuple};

/// A catalog lookup result.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Entry {
    Plain(Predicate),
    Conditional(ConditionalPredicate),
}

impl Entry {
    /// Plain predicates are lifted to `P | D^r`.
    pub fn into_conditional(self) -> Result<ConditionalPredicate> {
        match self {
            Entry::Plain(p) => ConditionalPredicate::plain(p),
            Entry::Conditional(c) => Ok(c),
        }
    }

    pub fn into_plain(self) -> Result<Predicate> {
        match self {
            Entry::Plain(p) => Ok(p),
            Entry::Conditional(_) => Err(NrdError::Argument("expected a plain predicate, got a conditional one".into())),
        }
    }
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Entry::Plain(p) => p.fmt(f),
            Entry::Conditional(c) => c.fmt(f),
        }
    }
}

pub const BOOLBCK: [&str; 5] = ["010100001", "001010100", "100001010", "001100010", "010001100"];
pub const BOOLBCK_IDENTITY: &str = "100010001";
pub const CAT5: [&str; 5] = ["01012", "11111", "12201", "22222", "20120"];
pub const THREE_LIN_STAR: [&str; 8] = ["012", "021", "102", "111", "120", "201", "210", "222"];
pub const C6: [&str; 6] = ["00", "01", "10", "12", "21", "22"];

/// Names understood by [`lookup`] without projection or `|` syntax.
pub fn names() -> Vec<&'static str> {
    vec![
        "EQ", "OR2", "OR3", "1in3", "C6", "C6*", "BoolBCK", "BoolBCK+", "Cat5", "Cat5+", "3LIN*", "3LIN*+", "Mixed4",
        "R1|S1", "R2|S2", "P1|Q1", "P2|Q2", "P3|Q3", "3LIN",
    ]
}

/// Resolves a catalog expression.
pub fn lookup(name: &str) -> Result<Entry> {
    let name = name.trim();
    if let Some(c) = named_conditional(name)? {
        return Ok(Entry::Conditional(c));
    }
    if let Some((base, ambient)) = name.split_once('|') {
        let base = lookup(base)?.into_plain()?;
        let ambient = lookup(ambient)?.into_plain()?;
        return Ok(Entry::Conditional(ConditionalPredicate::new(base, ambient)?));
    }
    if let Some((head, coords)) = name.rsplit_once('@') {
        let inner = lookup(head)?;
        let arity = match &inner {
            Entry::Plain(p) => p.arity(),
            Entry::Conditional(c) => c.arity(),
        };
        let coords = parse_coords(coords, arity)?;
        return Ok(match inner {
            Entry::Plain(p) => Entry::Plain(p.project(&coords)?),
            Entry::Conditional(c) => Entry::Conditional(c.project(&coords)?),
        });
    }
    plain(name).map(Entry::Plain)
}

/// [`lookup`] followed by lifting to a conditional predicate.
pub fn conditional(name: &str) -> Result<ConditionalPredicate> {
    lookup(name)?.into_conditional()
}

pub fn predicate(name: &str) -> Result<Predicate> {
    lookup(name)?.into_plain()
}

fn plain(name: &str) -> Result<Predicate> {
    let p = match name {
        "EQ" => Predicate::from_digits(2, &["00", "11"])?,
        "1in3" => Predicate::from_digits(2, &["001", "010", "100"])?,
        "C6" => Predicate::from_digits(3, &C6)?,
        "C6*" => Predicate::from_digits(3, &C6[1..])?,
        "BoolBCK" => Predicate::from_digits(2, &BOOLBCK)?,
        "BoolBCK+" => Predicate::from_digits(2, &with(&BOOLBCK, BOOLBCK_IDENTITY))?,
        "Cat5" => Predicate::from_digits(3, &CAT5)?,
        "Cat5+" => Predicate::from_digits(3, &with(&CAT5, "00000"))?,
        "3LIN*" => Predicate::from_digits(3, &THREE_LIN_STAR)?,
        "3LIN*+" => Predicate::from_digits(3, &with(&THREE_LIN_STAR, "000"))?,
        "Mixed4" => Predicate::from_digits(2, &["0000", "0001", "0110", "1111"])?,
        _ => {
            if let Some(k) = name.strip_prefix("OR") {
                let k: usize = k.parse().map_err(|_| unknown(name))?;
                return or_k(k);
            }
            if let Some(rest) = name.strip_prefix("Full") {
                let (d, r) = rest.split_once('^').ok_or_else(|| unknown(name))?;
                let d = d.parse().map_err(|_| unknown(name))?;
                let r = r.parse().map_err(|_| unknown(name))?;
                return Predicate::full(d, r);
            }
            return Err(unknown(name));
        }
    };
    Ok(p)
}

fn named_conditional(name: &str) -> Result<Option<ConditionalPredicate>> {
    let c = match name {
        "R1|S1" => r1_s1()?,
        "R2|S2" => r2_s2()?,
        "P1|Q1" => conditional("Cat5@134|Cat5+@134")?,
        "P2|Q2" => conditional("Cat5@124|Cat5+@124")?,
        "P3|Q3" => conditional("Cat5@1234|Cat5+@1234")?,
        "3LIN" => conditional("3LIN*|3LIN*+")?,
        _ => return Ok(None),
    };
    Ok(Some(c))
}

/// `OR_k = {0,1}^k ∖ {0^k}`.
pub fn or_k(k: usize) -> Result<Predicate> {
    let full = Predicate::full(2, k)?;
    Predicate::new(2, k, full.tuples().iter().filter(|t| t.iter().any(|&v| v != 0)).cloned())
}

/// `C₆* | C₆`.
pub fn c6() -> Result<ConditionalPredicate> {
    conditional("C6*|C6")
}

/// `(C₆* | C₆) ⊠ ({1,2} | {0,1,2})`.
pub fn r1_s1() -> Result<ConditionalPredicate> {
    let unary = ConditionalPredicate::new(
        Predicate::new(3, 1, [vec![1], vec![2]])?,
        Predicate::full(3, 1)?,
    )?;
    c6()?.box_product(&unary)
}

/// `(C₆* | C₆) ⊠ (C₆* | C₆)`.
pub fn r2_s2() -> Result<ConditionalPredicate> {
    let c = c6()?;
    c.box_product(&c)
}

fn with<'a>(base: &[&'a str], extra: &'a str) -> Vec<&'a str> {
    let mut v = base.to_vec();
    v.push(extra);
    v
}

fn unknown(name: &str) -> NrdError {
    NrdError::Lookup(format!("{name:?} is not a catalog predicate"))
}

/// Parses a 1-indexed coordinate list (`134`, `1,3,4`, `~2`) into 0-indexed coordinates.
pub fn parse_coords(text: &str, arity: usize) -> Result<Vec<usize>> {
    let text = text.trim();
    let (complement, body) = match text.strip_prefix('~') {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let listed: Vec<usize> = if body.contains(',') || arity >= 10 {
        body.split(',')
            .map(|s| s.trim().parse::<usize>().map_err(|e| NrdError::Parse(format!("{s:?}: {e}"))))
            .collect::<Result<_>>()?
    } else {
        body.chars()
            .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(|| NrdError::Parse(format!("bad coordinate {c:?}"))))
            .collect::<Result<_>>()?
    };
    if let Some(&bad) = listed.iter().find(|&&i| i == 0 || i > arity) {
        return Err(NrdError::Argument(format!("coordinate {bad} out of range 1..={arity}")));
    }
    let zero: Vec<usize> = listed.iter().map(|i| i - 1).collect();
    Ok(if complement { (0..arity).filter(|i| !zero.contains(i)).collect() } else { zero })
}

/// The tuple `t` as a digit string; re-exported for CLI printing.
pub fn word(t: &Tuple) -> String {
    crate::predicate::format_tuple(t)
}
