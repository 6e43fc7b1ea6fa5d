//! Finite-domain predicates and the algebra performed on them.
//!
//! Coordinates are 0-indexed throughout the library. Text formats and
//! [`fmt::Display`] implementations print them 1-indexed.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{arg, NrdError, Result};

/// A tuple of domain values.
pub type Tuple = Vec<u8>;

/// A relation `P ⊆ D^r` over the domain `{0, …, d-1}`.
///
/// Tuples are kept sorted and deduplicated, so two predicates are equal
/// exactly when their fields are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PredicateRepr", into = "PredicateRepr")]
pub struct Predicate {
    domain: usize,
    arity: usize,
    tuples: Vec<Tuple>,
}

impl Predicate {
    pub fn new(domain: usize, arity: usize, tuples: impl IntoIterator<Item = Tuple>) -> Result<Self> {
        if domain == 0 || domain > 256 {
            return arg(format!("domain size must lie in 1..=256, got {domain}"));
        }
        if arity == 0 {
            return arg("arity must be positive");
        }
        let mut set = BTreeSet::new();
        for t in tuples {
            if t.len() != arity {
                return arg(format!("tuple {} has length {}, expected {arity}", format_tuple(&t), t.len()));
            }
            if let Some(v) = t.iter().find(|&&v| v as usize >= domain) {
                return arg(format!("value {v} outside domain of size {domain}"));
            }
            set.insert(t);
        }
        Ok(Predicate { domain, arity, tuples: set.into_iter().collect() })
    }

    /// Parses tuples written as digit strings, e.g. `["010", "111"]`.
    pub fn from_digits(domain: usize, words: &[&str]) -> Result<Self> {
        let tuples = words.iter().map(|w| parse_digits(w)).collect::<Result<Vec<_>>>()?;
        let arity = tuples.first().map(Vec::len).unwrap_or(0);
        Predicate::new(domain, arity, tuples)
    }

    /// The full relation `D^r`.
    pub fn full(domain: usize, arity: usize) -> Result<Self> {
        if domain == 0 || arity == 0 {
            return arg("full relation needs positive domain and arity");
        }
        let total = checked_pow(domain, arity)
            .filter(|&n| n <= 1 << 24)
            .ok_or_else(|| NrdError::Argument(format!("{domain}^{arity} tuples is too many to enumerate")))?;
        let tuples = (0..total).map(|code| decode_tuple(code, domain, arity));
        Predicate::new(domain, arity, tuples)
    }

    pub fn domain(&self) -> usize {
        self.domain
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn tuples(&self) -> &[Tuple] {
        &self.tuples
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn contains(&self, t: &[u8]) -> bool {
        self.tuples.binary_search_by(|x| x.as_slice().cmp(t)).is_ok()
    }

    pub fn position(&self, t: &[u8]) -> Option<usize> {
        self.tuples.binary_search_by(|x| x.as_slice().cmp(t)).ok()
    }

    pub fn is_subset(&self, other: &Predicate) -> bool {
        self.same_shape(other) && self.tuples.iter().all(|t| other.contains(t))
    }

    pub fn same_shape(&self, other: &Predicate) -> bool {
        self.domain == other.domain && self.arity == other.arity
    }

    /// `self ∖ other`; shapes must agree.
    pub fn difference(&self, other: &Predicate) -> Result<Predicate> {
        self.require_shape(other)?;
        let tuples = self.tuples.iter().filter(|t| !other.contains(t)).cloned();
        Predicate::new(self.domain, self.arity, tuples)
    }

    pub fn union(&self, other: &Predicate) -> Result<Predicate> {
        self.require_shape(other)?;
        let tuples = self.tuples.iter().chain(other.tuples.iter()).cloned();
        Predicate::new(self.domain, self.arity, tuples)
    }

    /// Nontrivial means neither empty nor the full relation.
    pub fn is_nontrivial(&self) -> bool {
        !self.is_empty()
            && checked_pow(self.domain, self.arity).is_none_or(|n| self.tuples.len() < n)
    }

    fn require_shape(&self, other: &Predicate) -> Result<()> {
        if !self.same_shape(other) {
            return arg(format!(
                "shape mismatch: (d={}, r={}) vs (d={}, r={})",
                self.domain, self.arity, other.domain, other.arity
            ));
        }
        Ok(())
    }

    /// Projection `π_J`: keeps the coordinates in `coords` (ascending order)
    /// and deduplicates.
    pub fn project(&self, coords: &[usize]) -> Result<Predicate> {
        let coords = normalize_coords(coords, self.arity)?;
        let tuples = self.tuples.iter().map(|t| coords.iter().map(|&i| t[i]).collect());
        Predicate::new(self.domain, coords.len(), tuples)
    }

    /// Coordinate permutation `P^σ = {(x_{σ(0)}, …, x_{σ(r-1)}) : x ∈ P}`.
    pub fn permute(&self, sigma: &[usize]) -> Result<Predicate> {
        check_permutation(sigma, self.arity)?;
        let tuples = self.tuples.iter().map(|t| sigma.iter().map(|&s| t[s]).collect());
        Predicate::new(self.domain, self.arity, tuples)
    }

    /// Cartesian product with concatenated tuples.
    pub fn product(&self, other: &Predicate) -> Result<Predicate> {
        if self.domain != other.domain {
            return arg(format!("domain mismatch: {} vs {}", self.domain, other.domain));
        }
        let tuples = self
            .tuples
            .iter()
            .flat_map(|a| other.tuples.iter().map(move |b| [a.as_slice(), b.as_slice()].concat()));
        Predicate::new(self.domain, self.arity + other.arity, tuples)
    }

    /// Re-embeds the predicate into a domain of at least the same size.
    pub fn with_domain(&self, domain: usize) -> Result<Predicate> {
        if domain < self.domain {
            return arg(format!("cannot shrink domain from {} to {domain}", self.domain));
        }
        Predicate::new(domain, self.arity, self.tuples.iter().cloned())
    }

    /// Tuples rendered in digit-string notation (or comma-separated when `d > 10`).
    pub fn words(&self) -> Vec<String> {
        self.tuples.iter().map(|t| format_tuple(t)).collect()
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.words().join(", "))
    }
}

/// Where a tuple falls relative to a conditional predicate `P | Q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    /// In `P`.
    Base,
    /// In `Q ∖ P`.
    Gap,
    /// Outside `Q`.
    Outside,
}

/// A conditional predicate `P | Q` with `P ⊊ Q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ConditionalRepr")]
pub struct ConditionalPredicate {
    base: Predicate,
    ambient: Predicate,
}

#[derive(Deserialize)]
struct ConditionalRepr {
    base: Predicate,
    ambient: Predicate,
}

impl TryFrom<ConditionalRepr> for ConditionalPredicate {
    type Error = NrdError;
    fn try_from(r: ConditionalRepr) -> Result<Self> {
        ConditionalPredicate::new(r.base, r.ambient)
    }
}

impl ConditionalPredicate {
    pub fn new(base: Predicate, ambient: Predicate) -> Result<Self> {
        if !base.same_shape(&ambient) {
            return arg("base and ambient must share domain and arity");
        }
        if !base.is_subset(&ambient) {
            return arg("base must be a subset of the ambient predicate");
        }
        if base.len() == ambient.len() {
            return arg("base must be a strict subset of the ambient predicate");
        }
        Ok(ConditionalPredicate { base, ambient })
    }

    /// `P | D^r`, the ordinary (non-conditional) setting.
    pub fn plain(p: Predicate) -> Result<Self> {
        let full = Predicate::full(p.domain(), p.arity())?;
        ConditionalPredicate::new(p, full)
    }

    pub fn base(&self) -> &Predicate {
        &self.base
    }

    pub fn ambient(&self) -> &Predicate {
        &self.ambient
    }

    pub fn domain(&self) -> usize {
        self.base.domain
    }

    pub fn arity(&self) -> usize {
        self.base.arity
    }

    /// `Q ∖ P`.
    pub fn gap(&self) -> Predicate {
        self.ambient.difference(&self.base).expect("shapes agree by construction")
    }

    pub fn status(&self, t: &[u8]) -> Status {
        if self.base.contains(t) {
            Status::Base
        } else if self.ambient.contains(t) {
            Status::Gap
        } else {
            Status::Outside
        }
    }

    pub fn project(&self, coords: &[usize]) -> Result<ConditionalPredicate> {
        ConditionalPredicate::new(self.base.project(coords)?, self.ambient.project(coords)?)
    }

    pub fn permute(&self, sigma: &[usize]) -> Result<ConditionalPredicate> {
        ConditionalPredicate::new(self.base.permute(sigma)?, self.ambient.permute(sigma)?)
    }

    /// Box product `(P₁ | Q₁) ⊠ (P₂ | Q₂)`: ambient `Q₁ × Q₂`, base
    /// `(P₁ × Q₂) ∪ (Q₁ × P₂)`.
    pub fn box_product(&self, other: &ConditionalPredicate) -> Result<ConditionalPredicate> {
        if self.domain() != other.domain() {
            return arg(format!(
                "box product needs equal domains, got {} and {}",
                self.domain(),
                other.domain()
            ));
        }
        let ambient = self.ambient.product(&other.ambient)?;
        let base = self.base.product(&other.ambient)?.union(&self.ambient.product(&other.base)?)?;
        ConditionalPredicate::new(base, ambient)
    }
}

impl fmt::Display for ConditionalPredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} | {}", self.base, self.ambient)
    }
}


/// Dense status lookup for hot loops: maps the mixed-radix code of a tuple
/// to its [`Status`].
#[derive(Clone, Debug)]
pub struct StatusTable {
    domain: usize,
    arity: usize,
    table: Vec<Status>,
}

impl StatusTable {
    pub fn new(pq: &ConditionalPredicate) -> Result<Self> {
        let (domain, arity) = (pq.domain(), pq.arity());
        let size = checked_pow(domain, arity)
            .filter(|&n| n <= 1 << 26)
            .ok_or_else(|| NrdError::Unsupported(format!("status table for {domain}^{arity} is too large")))?;
        let mut table = vec![Status::Outside; size];
        for t in pq.ambient().tuples() {
            table[encode_tuple(t, domain)] = Status::Gap;
        }
        for t in pq.base().tuples() {
            table[encode_tuple(t, domain)] = Status::Base;
        }
        Ok(StatusTable { domain, arity, table })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn domain(&self) -> usize {
        self.domain
    }

    #[inline]
    pub fn status(&self, t: &[u8]) -> Status {
        self.table[encode_tuple(t, self.domain)]
    }

    /// Status of the tuple `(values[v] : v ∈ vertices)`.
    #[inline]
    pub fn status_of(&self, vertices: &[u32], values: &[u8]) -> Status {
        let mut code = 0usize;
        for &v in vertices.iter().rev() {
            code = code * self.domain + values[v as usize] as usize;
        }
        self.table[code]
    }
}

/// Mixed-radix code with coordinate 0 least significant.
pub fn encode_tuple(t: &[u8], domain: usize) -> usize {
    t.iter().rev().fold(0usize, |acc, &v| acc * domain + v as usize)
}

pub fn decode_tuple(mut code: usize, domain: usize, arity: usize) -> Tuple {
    let mut t = Vec::with_capacity(arity);
    for _ in 0..arity {
        t.push((code % domain) as u8);
        code /= domain;
    }
    t
}

pub(crate) fn checked_pow(base: usize, exp: usize) -> Option<usize> {
    (0..exp).try_fold(1usize, |acc, _| acc.checked_mul(base))
}

/// A sequence `(I₁, …, I_ℓ)` of coordinate subsets of `[r₁]`. Repetition and
/// empty sets are allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexFamily {
    source_arity: usize,
    sets: Vec<Vec<usize>>,
}

impl IndexFamily {
    pub fn new(source_arity: usize, sets: Vec<Vec<usize>>) -> Result<Self> {
        let sets = sets
            .into_iter()
            .map(|s| {
                let mut s = s;
                s.sort_unstable();
                s.dedup();
                if let Some(&bad) = s.iter().find(|&&i| i >= source_arity) {
                    return arg(format!("coordinate {} exceeds source arity {source_arity}", bad + 1));
                }
                Ok(s)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(IndexFamily { source_arity, sets })
    }

    /// Builds a family from 1-indexed coordinate lists.
    pub fn from_one_based(source_arity: usize, sets: &[&[usize]]) -> Result<Self> {
        let sets = sets
            .iter()
            .map(|s| {
                s.iter()
                    .map(|&i| match i.checked_sub(1) {
                        Some(i) => Ok(i),
                        None => arg("coordinates are 1-indexed"),
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        IndexFamily::new(source_arity, sets)
    }

    /// `I_j = [r₁] ∖ {i_j}` for each listed (1-indexed) `i_j`.
    pub fn complements(source_arity: usize, dropped: &[usize]) -> Result<Self> {
        let sets = dropped
            .iter()
            .map(|&d| (1..=source_arity).filter(|&i| i != d).map(|i| i - 1).collect())
            .collect();
        IndexFamily::new(source_arity, sets)
    }

    /// Every slot set to the full coordinate set.
    pub fn full(source_arity: usize, len: usize) -> Self {
        IndexFamily { source_arity, sets: vec![(0..source_arity).collect(); len] }
    }

    /// Singletons `({0}, …, {r-1})`.
    pub fn singletons(arity: usize) -> Self {
        IndexFamily { source_arity: arity, sets: (0..arity).map(|i| vec![i]).collect() }
    }

    /// Parses `"{1,2},{1,3},{}"` or the compact digit form `"12,13,-"`.
    pub fn parse(source_arity: usize, text: &str) -> Result<Self> {
        let text = text.trim();
        let sets: Vec<Vec<usize>> = if text.contains('{') {
            let mut sets = Vec::new();
            let mut rest = text;
            while let Some(open) = rest.find('{') {
                let close = rest[open..]
                    .find('}')
                    .ok_or_else(|| NrdError::Parse(format!("unbalanced braces in {text:?}")))?
                    + open;
                let body = &rest[open + 1..close];
                let set = body
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| s.parse::<usize>().map_err(|e| NrdError::Parse(format!("{s:?}: {e}"))))
                    .collect::<Result<Vec<_>>>()?;
                sets.push(set);
                rest = &rest[close + 1..];
            }
            sets
        } else {
            text.split(',')
                .map(|w| {
                    let w = w.trim();
                    if w == "-" || w.is_empty() {
                        return Ok(Vec::new());
                    }
                    w.chars()
                        .map(|c| {
                            c.to_digit(10)
                                .map(|d| d as usize)
                                .ok_or_else(|| NrdError::Parse(format!("bad coordinate {c:?} in {text:?}")))
                        })
                        .collect()
                })
                .collect::<Result<Vec<_>>>()?
        };
        let refs: Vec<&[usize]> = sets.iter().map(Vec::as_slice).collect();
        IndexFamily::from_one_based(source_arity, &refs)
    }

    pub fn source_arity(&self) -> usize {
        self.source_arity
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn max_set_size(&self) -> usize {
        self.sets.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Coordinatewise `self ⊆ other`.
    pub fn is_subfamily_of(&self, other: &IndexFamily) -> bool {
        self.sets.len() == other.sets.len()
            && self.sets.iter().zip(&other.sets).all(|(a, b)| a.iter().all(|i| b.contains(i)))
    }

    /// Applies a source-coordinate permutation to every set.
    pub fn relabel(&self, sigma: &[usize]) -> IndexFamily {
        let sets = self
            .sets
            .iter()
            .map(|s| {
                let mut t: Vec<usize> = s.iter().map(|&i| sigma[i]).collect();
                t.sort_unstable();
                t
            })
            .collect();
        IndexFamily { source_arity: self.source_arity, sets }
    }

    /// 1-indexed sets, for serialization.
    pub fn to_one_based(&self) -> Vec<Vec<usize>> {
        self.sets.iter().map(|s| s.iter().map(|i| i + 1).collect()).collect()
    }
}

impl fmt::Display for IndexFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .to_one_based()
            .iter()
            .map(|s| format!("{{{}}}", s.iter().map(usize::to_string).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Validates a 0-indexed coordinate subset and returns it sorted.
pub fn normalize_coords(coords: &[usize], arity: usize) -> Result<Vec<usize>> {
    if coords.is_empty() {
        return arg("projection needs a nonempty coordinate set");
    }
    let mut c = coords.to_vec();
    c.sort_unstable();
    c.dedup();
    if let Some(&bad) = c.iter().find(|&&i| i >= arity) {
        return arg(format!("coordinate {} out of range for arity {arity}", bad + 1));
    }
    Ok(c)
}

pub fn check_permutation(sigma: &[usize], arity: usize) -> Result<()> {
    if sigma.len() != arity {
        return arg(format!("permutation has length {}, expected {arity}", sigma.len()));
    }
    let mut seen = vec![false; arity];
    for &s in sigma {
        if s >= arity || std::mem::replace(&mut seen[s], true) {
            return arg(format!("{:?} is not a bijection on {arity} coordinates", one_based(sigma)));
        }
    }
    Ok(())
}

pub fn invert_permutation(sigma: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; sigma.len()];
    for (i, &s) in sigma.iter().enumerate() {
        inv[s] = i;
    }
    inv
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|i| i + 1).collect()
}

/// Parses `"0102"` into `[0, 1, 0, 2]`; also accepts `"0,1,0,2"` for large domains.
pub fn parse_digits(word: &str) -> Result<Tuple> {
    let word = word.trim();
    if word.contains(',') {
        return word
            .split(',')
            .map(|s| s.trim().parse::<u8>().map_err(|e| NrdError::Parse(format!("{s:?}: {e}"))))
            .collect();
    }
    word.chars()
        .map(|c| {
            c.to_digit(10)
                .map(|d| d as u8)
                .ok_or_else(|| NrdError::Parse(format!("bad digit {c:?} in {word:?}")))
        })
        .collect()
}

/// Digit-string notation, falling back to comma separation for values ≥ 10.
pub fn format_tuple(t: &[u8]) -> String {
    if t.iter().all(|&v| v < 10) {
        t.iter().map(|v| char::from(b'0' + v)).collect()
    } else {
        t.iter().map(u8::to_string).collect::<Vec<_>>().join(",")
    }
}

#[derive(Serialize, Deserialize)]
struct PredicateRepr {
    domain: usize,
    arity: usize,
    tuples: Vec<TupleRepr>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum TupleRepr {
    List(Vec<u8>),
    Digits(String),
}

impl TryFrom<PredicateRepr> for Predicate {
    type Error = NrdError;
    fn try_from(r: PredicateRepr) -> Result<Self> {
        let tuples = r
            .tuples
            .into_iter()
            .map(|t| match t {
                TupleRepr::List(v) => Ok(v),
                TupleRepr::Digits(s) => parse_digits(&s),
            })
            .collect::<Result<Vec<_>>>()?;
        Predicate::new(r.domain, r.arity, tuples)
    }
}

impl From<Predicate> for PredicateRepr {
    fn from(p: Predicate) -> Self {
        PredicateRepr {
            domain: p.domain,
            arity: p.arity,
            tuples: p.tuples.into_iter().map(TupleRepr::List).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pred(d: usize, words: &[&str]) -> Predicate {
        Predicate::from_digits(d, words).unwrap()
    }

    #[test]
    fn projection_example() {
        let r = pred(3, &["012", "120", "200"]);
        assert_eq!(r.project(&[0, 2]).unwrap(), pred(3, &["02", "10", "20"]));
    }

    #[test]
    fn full_projection_is_identity() {
        let r = pred(3, &["012", "120", "200"]);
        assert_eq!(r.project(&[0, 1, 2]).unwrap(), r);
    }

    #[test]
    fn projection_rejects_bad_coordinates() {
        let r = pred(2, &["01"]);
        assert!(matches!(r.project(&[]), Err(NrdError::Argument(_))));
        assert!(matches!(r.project(&[2]), Err(NrdError::Argument(_))));
    }

    #[test]
    fn permute_follows_index_map() {
        // σ = (1→2→3→1), output coordinate j reads x_{σ(j)}.
        let p = pred(3, &["012"]);
        let sigma = [1, 2, 0];
        assert_eq!(p.permute(&sigma).unwrap(), pred(3, &["120"]));
        // independent one-liner
        let t = [0u8, 1, 2];
        let by_hand: Vec<u8> = sigma.iter().map(|&s| t[s]).collect();
        assert_eq!(by_hand, vec![1, 2, 0]);
    }

    #[test]
    fn permute_rejects_non_bijection() {
        let p = pred(2, &["01"]);
        assert!(p.permute(&[0, 0]).is_err());
        assert!(p.permute(&[0]).is_err());
    }

    #[test]
    fn conditional_requires_strict_subset() {
        let q = pred(2, &["01", "10"]);
        assert!(ConditionalPredicate::new(q.clone(), q.clone()).is_err());
        assert!(ConditionalPredicate::new(pred(2, &["11"]), q).is_err());
    }

    #[test]
    fn box_product_cardinalities() {
        let a = ConditionalPredicate::new(pred(2, &["1"]), pred(2, &["0", "1"])).unwrap();
        let b = a.box_product(&a).unwrap();
        assert_eq!(b.ambient().len(), 4);
        assert_eq!(b.gap(), pred(2, &["00"]));
    }

    #[test]
    fn box_product_rejects_mixed_domains() {
        let a = ConditionalPredicate::new(pred(2, &["1"]), pred(2, &["0", "1"])).unwrap();
        let b = ConditionalPredicate::new(pred(3, &["1"]), pred(3, &["0", "1"])).unwrap();
        assert!(a.box_product(&b).is_err());
    }

    #[test]
    fn json_accepts_digit_strings_and_lists() {
        let p: Predicate =
            serde_json::from_str(r#"{"domain": 2, "arity": 3, "tuples": ["011", [1,0,0]]}"#).unwrap();
        assert_eq!(p, pred(2, &["011", "100"]));
        let back: Predicate = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn family_parsing() {
        let f = IndexFamily::parse(3, "{1,2},{1,3},{}").unwrap();
        assert_eq!(f.sets(), &[vec![0, 1], vec![0, 2], vec![]]);
        assert_eq!(IndexFamily::parse(3, "12,13,-").unwrap(), f);
        assert_eq!(f.to_string(), "({1,2}, {1,3}, {})");
        assert!(IndexFamily::parse(3, "14").is_err());
    }

    #[test]
    fn status_table_matches_predicate() {
        let pq = ConditionalPredicate::new(pred(3, &["01", "12"]), pred(3, &["00", "01", "12"])).unwrap();
        let table = StatusTable::new(&pq).unwrap();
        for code in 0..9 {
            let t = decode_tuple(code, 3, 2);
            assert_eq!(table.status(&t), pq.status(&t));
        }
    }
}
