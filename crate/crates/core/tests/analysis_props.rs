mod common;

use std::collections::BTreeSet;

use nrd_core::analysis::{cancel, is_balanced_bounded, is_balanced_lattice, lattice_boolean_points};
use nrd_core::{catalog, Predicate};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Boolean points reachable as alternating sums `t1 - t2 + t3 - ...` of at most `max_terms` tuples.
fn alternating_points(p: &Predicate, max_terms: usize) -> BTreeSet<Vec<u8>> {
    let tuples: Vec<Vec<i64>> = p.tuples().iter().map(|t| t.iter().map(|&x| i64::from(x)).collect()).collect();
    let mut level: BTreeSet<Vec<i64>> = tuples.iter().cloned().collect();
    let mut points: BTreeSet<Vec<i64>> = level.clone();
    for _ in 0..(max_terms - 1) / 2 {
        let mut next = BTreeSet::new();
        for s in &level {
            for a in &tuples {
                for b in &tuples {
                    next.insert(s.iter().zip(a).zip(b).map(|((s, a), b)| s - a + b).collect::<Vec<_>>());
                }
            }
        }
        points.extend(next.iter().cloned());
        level = next;
    }
    points
        .into_iter()
        .filter(|v| v.iter().all(|&x| x == 0 || x == 1))
        .map(|v| v.into_iter().map(|x| x as u8).collect())
        .collect()
}

fn random_cancel(word: &[u8], rng: &mut ChaCha8Rng) -> Vec<u8> {
    let mut w = word.to_vec();
    loop {
        let spots: Vec<usize> = (0..w.len().saturating_sub(1)).filter(|&i| w[i] == w[i + 1]).collect();
        if spots.is_empty() {
            return w;
        }
        let i = spots[rng.gen_range(0..spots.len())];
        w.drain(i..i + 2);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn lattice_never_contradicts_a_bounded_witness(p in (1usize..=5).prop_flat_map(|r| common::predicate(2, r))) {
        let bounded = is_balanced_bounded(&p, 3)?;
        let lattice = is_balanced_lattice(&p)?;
        if let Some(w) = &bounded.witness {
            prop_assert!(w.verify(&p));
            prop_assert!(!lattice.balanced);
        }
        if let Some(w) = &lattice.witness {
            prop_assert!(w.verify(&p));
            prop_assert!(!p.contains(&w.result));
        }
        prop_assert_eq!(lattice.balanced, lattice.witness.is_none());
    }

    #[test]
    fn alternating_sums_stay_in_the_lattice(p in (1usize..=3).prop_flat_map(|r| common::predicate(2, r))) {
        prop_assume!(p.len() <= 4);
        let lattice = lattice_boolean_points(&p)?;
        for point in alternating_points(&p, 7) {
            prop_assert!(lattice.contains(&point), "{:?}", point);
        }
    }

    #[test]
    fn cancellation_is_confluent(word in (1u8..=3).prop_flat_map(|d| proptest::collection::vec(0..d, 0..=15)), seed in any::<u64>()) {
        let stack = cancel(&word);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..10 {
            prop_assert_eq!(random_cancel(&word, &mut rng), stack.clone());
        }
    }
}

#[test]
fn catalog_balance_methods_agree() {
    for name in ["EQ", "OR2", "OR3", "1in3", "C6", "C6*", "BoolBCK", "BoolBCK+"] {
        let p = catalog::predicate(name).unwrap();
        if p.domain() != 2 {
            continue;
        }
        let bounded = is_balanced_bounded(&p, 3).unwrap();
        let lattice = is_balanced_lattice(&p).unwrap();
        if bounded.witness.is_some() {
            assert!(!lattice.balanced, "{name}");
        }
        if let Some(w) = &lattice.witness {
            assert!(w.verify(&p), "{name}");
        }
    }
}
