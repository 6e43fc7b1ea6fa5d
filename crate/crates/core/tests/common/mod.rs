//! Strategies shared by the property suites.

#![allow(dead_code)]

use nrd_core::predicate::decode_tuple;
use nrd_core::{ConditionalPredicate, Predicate};
use proptest::prelude::*;

/// A nonempty predicate over `d^r` drawn from a bit mask of its tuples.
pub fn predicate(d: usize, r: usize) -> impl Strategy<Value = Predicate> {
    let n = d.pow(r as u32);
    proptest::collection::vec(any::<bool>(), n).prop_filter_map("empty predicate", move |mask| {
        let tuples: Vec<_> = (0..n).filter(|&i| mask[i]).map(|i| decode_tuple(i, d, r)).collect();
        (!tuples.is_empty()).then(|| Predicate::new(d, r, tuples).unwrap())
    })
}

/// A conditional predicate `P | Q` with `P` and `Q ∖ P` both nonempty.
pub fn conditional(d: usize, r: usize) -> impl Strategy<Value = ConditionalPredicate> {
    let n = d.pow(r as u32);
    proptest::collection::vec(0u8..3, n).prop_filter_map("degenerate split", move |labels| {
        let pick = |want: &[u8]| -> Vec<_> { (0..n).filter(|&i| want.contains(&labels[i])).map(|i| decode_tuple(i, d, r)).collect() };
        let base = pick(&[1]);
        let ambient = pick(&[1, 2]);
        if base.is_empty() || base.len() == ambient.len() {
            return None;
        }
        ConditionalPredicate::new(Predicate::new(d, r, base).ok()?, Predicate::new(d, r, ambient).ok()?).ok()
    })
}

/// A permutation of `0..r`.
pub fn permutation(r: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..r).collect::<Vec<_>>()).prop_shuffle()
}
