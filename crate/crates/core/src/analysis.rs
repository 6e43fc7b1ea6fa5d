//! Balance (closure under odd alternating sums) and the cancellation game.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{arg, NrdError, Result};
use crate::predicate::{decode_tuple, format_tuple, Predicate, Tuple};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BalanceMethod {
    Lattice,
    BoundedClosure,
}

/// An alternating sum `t₁ − t₂ + t₃ − ⋯ + t_{2k+1}` of tuples from `P` that
/// lands on a 0/1 tuple outside `P`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlternatingWitness {
    pub terms: Vec<Tuple>,
    pub result: Tuple,
}

impl AlternatingWitness {
    /// Number of pairs `k` in `2k + 1` terms.
    pub fn k(&self) -> usize {
        self.terms.len() / 2
    }

    /// Recomputes the alternating sum over the integers and checks it against `p`.
    pub fn verify(&self, p: &Predicate) -> bool {
        if self.terms.len().is_multiple_of(2) || self.terms.iter().any(|t| !p.contains(t)) {
            return false;
        }
        let sum = alternating_sum(&self.terms);
        sum.iter().zip(&self.result).all(|(&s, &r)| s == r as i64)
            && sum.len() == self.result.len()
            && self.result.iter().all(|&v| v <= 1)
            && !p.contains(&self.result)
    }

    /// `t₁ − t₂ + ⋯ = result` in digit-string notation.
    pub fn render(&self) -> String {
        let mut s = String::new();
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                s.push_str(if i % 2 == 1 { " - " } else { " + " });
            }
            s.push_str(&format_tuple(t));
        }
        s.push_str(" = ");
        s.push_str(&format_tuple(&self.result));
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BalanceReport {
    pub balanced: bool,
    pub method: BalanceMethod,
    pub witness: Option<AlternatingWitness>,
    /// For the bounded method, the largest `k` examined.
    pub k_max: Option<usize>,
}

fn alternating_sum(terms: &[Tuple]) -> Vec<i64> {
    let r = terms.first().map(Vec::len).unwrap_or(0);
    let mut sum = vec![0i64; r];
    for (i, t) in terms.iter().enumerate() {
        let sign = if i % 2 == 0 { 1 } else { -1 };
        for (s, &v) in sum.iter_mut().zip(t) {
            *s += sign * v as i64;
        }
    }
    sum
}

fn check_boolean(p: &Predicate) -> Result<()> {
    if p.is_empty() {
        return arg("balance is undefined for the empty predicate");
    }
    if p.domain() != 2 {
        return Err(NrdError::Unsupported(format!(
            "balance is defined for Boolean predicates only (domain {})",
            p.domain()
        )));
    }
    if p.arity() > 24 {
        return Err(NrdError::Unsupported(format!("arity {} is too large to enumerate {{0,1}}^r", p.arity())));
    }
    Ok(())
}

/// Decides balance exactly: `P` is balanced iff every 0/1 point of the
/// integer affine lattice spanned by `P` lies in `P`.
pub fn is_balanced_lattice(p: &Predicate) -> Result<BalanceReport> {
    check_boolean(p)?;
    let lattice = AffineLattice::new(p.tuples())?;
    let r = p.arity();
    for code in 0..1usize << r {
        let v: Tuple = (0..r).map(|i| ((code >> (r - 1 - i)) & 1) as u8).collect();
        if p.contains(&v) {
            continue;
        }
        if let Some(lambda) = lattice.coefficients(&v)? {
            let witness = expand_coefficients(p.tuples(), &lambda, v);
            if !witness.verify(p) {
                return Err(NrdError::Internal(format!("lattice witness {} does not verify", witness.render())));
            }
            return Ok(BalanceReport { balanced: false, method: BalanceMethod::Lattice, witness: Some(witness), k_max: None });
        }
    }
    Ok(BalanceReport { balanced: true, method: BalanceMethod::Lattice, witness: None, k_max: None })
}

/// Interleaves positive and negative copies of the tuples into an alternating sequence.
fn expand_coefficients(tuples: &[Tuple], lambda: &[i128], result: Tuple) -> AlternatingWitness {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for (t, &l) in tuples.iter().zip(lambda) {
        let target = if l > 0 { &mut pos } else { &mut neg };
        for _ in 0..l.unsigned_abs() {
            target.push(t.clone());
        }
    }
    let mut terms = Vec::with_capacity(pos.len() + neg.len());
    let mut neg = neg.into_iter();
    for t in pos {
        terms.push(t);
        if let Some(n) = neg.next() {
            terms.push(n);
        }
    }
    AlternatingWitness { terms, result }
}

/// State -> (previous state, subtracted tuple, added tuple).
type Parents = BTreeMap<Vec<i8>, Option<(Vec<i8>, usize, usize)>>;

/// Exhaustive search over alternating sums with up to `2·k_max + 1` terms.
pub fn is_balanced_bounded(p: &Predicate, k_max: usize) -> Result<BalanceReport> {
    check_boolean(p)?;
    if k_max == 0 {
        return arg("k_max must be positive");
    }
    let tuples = p.tuples();
    let mut parent: Parents = BTreeMap::new();
    let mut layer: Vec<Vec<i8>> = Vec::new();
    for t in tuples {
        let s: Vec<i8> = t.iter().map(|&v| v as i8).collect();
        if parent.insert(s.clone(), None).is_none() {
            layer.push(s);
        }
    }
    for k in 1..=k_max {
        let slack = (k_max - k) as i8;
        let mut next = Vec::new();
        for s in &layer {
            for (ai, a) in tuples.iter().enumerate() {
                for (bi, b) in tuples.iter().enumerate() {
                    if ai == bi {
                        continue;
                    }
                    let n: Vec<i8> = s.iter().zip(a).zip(b).map(|((&x, &a), &b)| x - a as i8 + b as i8).collect();
                    if n.iter().any(|&x| x < -slack || x > 1 + slack) || parent.contains_key(&n) {
                        continue;
                    }
                    parent.insert(n.clone(), Some((s.clone(), ai, bi)));
                    next.push(n);
                }
            }
        }
        next.sort();
        for s in &next {
            if s.iter().all(|&x| x == 0 || x == 1) {
                let result: Tuple = s.iter().map(|&x| x as u8).collect();
                if !p.contains(&result) {
                    let witness = reconstruct(&parent, s, tuples, result);
                    return Ok(BalanceReport {
                        balanced: false,
                        method: BalanceMethod::BoundedClosure,
                        witness: Some(witness),
                        k_max: Some(k_max),
                    });
                }
            }
        }
        layer = next;
    }
    Ok(BalanceReport { balanced: true, method: BalanceMethod::BoundedClosure, witness: None, k_max: Some(k_max) })
}

fn reconstruct(
    parent: &Parents,
    end: &[i8],
    tuples: &[Tuple],
    result: Tuple,
) -> AlternatingWitness {
    let mut rev = Vec::new();
    let mut cur = end.to_vec();
    while let Some(Some((prev, a, b))) = parent.get(&cur) {
        rev.push(tuples[*b].clone());
        rev.push(tuples[*a].clone());
        cur = prev.clone();
    }
    rev.push(cur.iter().map(|&x| x as u8).collect());
    rev.reverse();
    AlternatingWitness { terms: rev, result }
}

/// Balance of a named catalog fixture, decided by the lattice method.
pub fn is_balanced_catalog(name: &str) -> Result<BalanceReport> {
    is_balanced_lattice(&crate::catalog::predicate(name)?)
}

/// The integer affine lattice `{Σ λ_t t : Σ λ_t = 1}` spanned by a set of tuples,
/// held as a row Hermite normal form of the difference vectors `t − t₀`
/// together with the unimodular transform that produced it.
#[derive(Clone, Debug)]
pub struct AffineLattice {
    origin: Vec<i128>,
    hnf: Vec<Vec<i128>>,
    transform: Vec<Vec<i128>>,
    pivots: Vec<usize>,
    generators: usize,
}

impl AffineLattice {
    pub fn new(tuples: &[Tuple]) -> Result<Self> {
        let origin: Vec<i128> = tuples.first().ok_or_else(|| NrdError::Argument("no tuples".into()))?.iter().map(|&v| v as i128).collect();
        let rows: Vec<Vec<i128>> = tuples[1..]
            .iter()
            .map(|t| t.iter().zip(&origin).map(|(&v, &o)| v as i128 - o).collect())
            .collect();
        let generators = rows.len();
        let (hnf, transform, pivots) = row_hnf(rows, origin.len())?;
        Ok(AffineLattice { origin, hnf, transform, pivots, generators })
    }

    /// Coefficients `λ` (one per input tuple, summing to 1) expressing `v`,
    /// or `None` when `v` is outside the lattice.
    pub fn coefficients(&self, v: &[u8]) -> Result<Option<Vec<i128>>> {
        let mut residual: Vec<i128> = v.iter().zip(&self.origin).map(|(&x, &o)| x as i128 - o).collect();
        let mut c = vec![0i128; self.pivots.len()];
        for (k, &pc) in self.pivots.iter().enumerate() {
            let h = self.hnf[k][pc];
            if residual[pc] % h != 0 {
                return Ok(None);
            }
            c[k] = residual[pc] / h;
            for (res, &hv) in residual.iter_mut().zip(&self.hnf[k]) {
                *res = checked(res.checked_sub(checked(c[k].checked_mul(hv))?))?;
            }
        }
        if residual.iter().any(|&x| x != 0) {
            return Ok(None);
        }
        let mut lambda = vec![0i128; self.generators + 1];
        for (k, &ck) in c.iter().enumerate() {
            for (g, &u) in self.transform[k].iter().enumerate() {
                lambda[g + 1] = checked(lambda[g + 1].checked_add(checked(ck.checked_mul(u))?))?;
            }
        }
        let rest: i128 = lambda[1..].iter().sum();
        lambda[0] = 1 - rest;
        Ok(Some(lambda))
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

fn checked(x: Option<i128>) -> Result<i128> {
    x.ok_or_else(|| NrdError::Unsupported("integer overflow in lattice arithmetic".into()))
}

pub type Matrix = Vec<Vec<i128>>;

/// Row-style Hermite normal form: returns `(H, U, pivots)` with `U·A = H`,
/// `U` unimodular, and the first `rank` rows of `H` in echelon form with
/// positive pivots.
pub fn row_hnf(mut a: Vec<Vec<i128>>, cols: usize) -> Result<(Matrix, Matrix, Vec<usize>)> {
    let m = a.len();
    let mut u: Vec<Vec<i128>> = (0..m).map(|i| (0..m).map(|j| i128::from(i == j)).collect()).collect();
    let mut pivots = Vec::new();
    let mut p = 0;
    for col in 0..cols {
        if p == m {
            break;
        }
        for i in p + 1..m {
            if a[i][col] == 0 {
                continue;
            }
            let (x, y, g) = ext_gcd(a[p][col], a[i][col]);
            let (s, t) = (a[p][col] / g, a[i][col] / g);
            combine(&mut a, p, i, x, y, -t, s)?;
            combine(&mut u, p, i, x, y, -t, s)?;
        }
        if a[p][col] == 0 {
            continue;
        }
        if a[p][col] < 0 {
            a[p].iter_mut().for_each(|v| *v = -*v);
            u[p].iter_mut().for_each(|v| *v = -*v);
        }
        let h = a[p][col];
        for i in 0..p {
            let f = a[i][col].div_euclid(h);
            if f != 0 {
                combine(&mut a, i, p, 1, -f, 0, 1)?;
                combine(&mut u, i, p, 1, -f, 0, 1)?;
            }
        }
        pivots.push(col);
        p += 1;
    }
    a.truncate(p);
    u.truncate(p);
    Ok((a, u, pivots))
}

/// Replaces rows `(r_i, r_j)` by `(x·r_i + y·r_j, z·r_i + w·r_j)`.
fn combine(a: &mut [Vec<i128>], i: usize, j: usize, x: i128, y: i128, z: i128, w: i128) -> Result<()> {
    for k in 0..a[i].len() {
        let (vi, vj) = (a[i][k], a[j][k]);
        a[i][k] = checked(checked(x.checked_mul(vi))?.checked_add(checked(y.checked_mul(vj))?))?;
        a[j][k] = checked(checked(z.checked_mul(vi))?.checked_add(checked(w.checked_mul(vj))?))?;
    }
    Ok(())
}

/// `(x, y, g)` with `x·a + y·b = g = gcd(a, b) > 0`, for `(a, b) ≠ (0, 0)`.
fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_s, -old_t, -old_r)
    } else {
        (old_s, old_t, old_r)
    }
}

/// Fully reduces a word by repeatedly deleting adjacent equal symbols.
pub fn cancel(word: &[u8]) -> Vec<u8> {
    let mut stack: Vec<u8> = Vec::with_capacity(word.len());
    for &c in word {
        if stack.last() == Some(&c) {
            stack.pop();
        } else {
            stack.push(c);
        }
    }
    stack
}

/// Plays the cancellation game on each row of the matrix whose columns are
/// `columns`. Returns the residual tuple (when every row reduces to a single
/// symbol) and whether it belongs to `p_plus`.
pub fn catalan_matrix_check(p_plus: &Predicate, columns: &[Tuple]) -> Result<(Option<Tuple>, bool)> {
    if columns.len().is_multiple_of(2) {
        return arg(format!("the game needs an odd number of columns, got {}", columns.len()));
    }
    if let Some(c) = columns.iter().find(|c| !p_plus.contains(c)) {
        return arg(format!("column {} is not in the predicate", format_tuple(c)));
    }
    let residual = residual_of(columns, p_plus.arity());
    let member = residual.as_ref().is_some_and(|t| p_plus.contains(t));
    Ok((residual, member))
}

fn residual_of(columns: &[Tuple], arity: usize) -> Option<Tuple> {
    let mut out = Vec::with_capacity(arity);
    let mut row = Vec::with_capacity(columns.len());
    for i in 0..arity {
        row.clear();
        row.extend(columns.iter().map(|c| c[i]));
        match cancel(&row).as_slice() {
            [v] => out.push(*v),
            _ => return None,
        }
    }
    Some(out)
}

/// A column sequence whose row-wise cancellation residual is a tuple outside the predicate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalanViolation {
    pub columns: Vec<Tuple>,
    pub residual: Tuple,
}

/// Enumerates column sequences of odd length `3 ≤ L ≤ max_len` over
/// `p_plus` and reports those whose residual leaves `p_plus`. Sequences with
/// two equal adjacent columns are skipped: they cancel down to a shorter
/// sequence already enumerated.
pub fn catalan_search(p_plus: &Predicate, max_len: usize) -> Result<Vec<CatalanViolation>> {
    if max_len.is_multiple_of(2) {
        return arg(format!("max_len must be odd, got {max_len}"));
    }
    let tuples = p_plus.tuples();
    let mut out = Vec::new();
    for len in (3..=max_len).step_by(2) {
        let found: Vec<Vec<CatalanViolation>> = (0..tuples.len())
            .into_par_iter()
            .map(|first| {
                let mut found = Vec::new();
                let mut seq = vec![first];
                extend_sequence(p_plus, tuples, len, &mut seq, &mut found);
                found
            })
            .collect();
        out.extend(found.into_iter().flatten());
    }
    Ok(out)
}

fn extend_sequence(p: &Predicate, tuples: &[Tuple], len: usize, seq: &mut Vec<usize>, found: &mut Vec<CatalanViolation>) {
    if seq.len() == len {
        let columns: Vec<Tuple> = seq.iter().map(|&i| tuples[i].clone()).collect();
        if let Some(residual) = residual_of(&columns, p.arity()) {
            if !p.contains(&residual) {
                found.push(CatalanViolation { columns, residual });
            }
        }
        return;
    }
    let last = *seq.last().expect("sequence starts nonempty");
    for next in 0..tuples.len() {
        if next == last {
            continue;
        }
        seq.push(next);
        extend_sequence(p, tuples, len, seq, found);
        seq.pop();
    }
}

/// All 0/1 tuples of the given arity in the affine lattice of `p` (for tests and reports).
pub fn lattice_boolean_points(p: &Predicate) -> Result<BTreeSet<Tuple>> {
    check_boolean(p)?;
    let lattice = AffineLattice::new(p.tuples())?;
    let mut out = BTreeSet::new();
    for code in 0..1usize << p.arity() {
        let v = decode_tuple(code, 2, p.arity());
        if lattice.coefficients(&v)?.is_some() {
            out.insert(v);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::predicate;
    use crate::predicate::parse_digits;

    fn d(s: &str) -> Tuple {
        parse_digits(s).unwrap()
    }

    #[test]
    fn or2_lattice_witness_matches_hand_computation() {
        let r = is_balanced_lattice(&predicate("OR2").unwrap()).unwrap();
        assert!(!r.balanced);
        let w = r.witness.unwrap();
        assert_eq!(w.render(), "01 - 11 + 10 = 00");
    }

    #[test]
    fn one_in_three_is_balanced() {
        assert!(is_balanced_lattice(&predicate("1in3").unwrap()).unwrap().balanced);
    }

    #[test]
    fn boolbck_lattice_finds_identity_matrix() {
        let p = predicate("BoolBCK").unwrap();
        let r = is_balanced_lattice(&p).unwrap();
        let w = r.witness.unwrap();
        assert_eq!(w.result, d("100010001"));
        assert!(w.verify(&p));
    }

    #[test]
    fn boolbck_bounded_needs_five_terms() {
        let p = predicate("BoolBCK").unwrap();
        assert!(is_balanced_bounded(&p, 1).unwrap().balanced);
        let r = is_balanced_bounded(&p, 2).unwrap();
        let w = r.witness.unwrap();
        assert_eq!(w.terms.len(), 5);
        assert_eq!(w.result, d("100010001"));
        assert!(w.verify(&p));
    }

    #[test]
    fn plus_fixtures_and_full_square_are_balanced() {
        assert!(is_balanced_catalog("BoolBCK+").unwrap().balanced);
        assert!(!is_balanced_catalog("BoolBCK").unwrap().balanced);
        assert!(is_balanced_catalog("Full2^2").unwrap().balanced);
    }

    #[test]
    fn balance_rejects_bad_inputs() {
        assert!(matches!(is_balanced_lattice(&predicate("C6").unwrap()), Err(NrdError::Unsupported(_))));
        let empty = Predicate::new(2, 2, Vec::<Tuple>::new()).unwrap();
        assert!(matches!(is_balanced_lattice(&empty), Err(NrdError::Argument(_))));
    }

    #[test]
    fn hnf_transform_is_consistent() {
        let a = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
        let (h, u, pivots) = row_hnf(a.clone(), 3).unwrap();
        for (k, row) in h.iter().enumerate() {
            let prod: Vec<i128> = (0..3).map(|c| (0..3).map(|i| u[k][i] * a[i][c]).sum()).collect();
            assert_eq!(&prod, row);
        }
        assert_eq!(pivots.len(), h.len());
        assert!(pivots.iter().enumerate().all(|(k, &c)| h[k][c] > 0));
    }

    #[test]
    fn cancellation_examples() {
        assert_eq!(cancel(&d("0221221")), d("0"));
        assert_eq!(cancel(&[]), Vec::<u8>::new());
        assert_eq!(cancel(&d("00")), Vec::<u8>::new());
    }

    #[test]
    fn matrix_check_trivial_cases() {
        let p = predicate("Cat5+").unwrap();
        let t = d("11111");
        assert_eq!(catalan_matrix_check(&p, std::slice::from_ref(&t)).unwrap(), (Some(t.clone()), true));
        assert_eq!(catalan_matrix_check(&p, &[t.clone(), t.clone(), t.clone()]).unwrap(), (Some(t.clone()), true));
        assert!(catalan_matrix_check(&p, &[t.clone(), t.clone()]).is_err());
        assert!(catalan_matrix_check(&p, &[d("01010")]).is_err());
    }

    #[test]
    fn catalan_search_length_one_is_empty() {
        assert!(catalan_search(&predicate("Cat5").unwrap(), 1).unwrap().is_empty());
        assert!(catalan_search(&predicate("Cat5").unwrap(), 4).is_err());
    }
}
