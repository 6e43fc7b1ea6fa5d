mod common;

use nrd_core::catalog;
use nrd_core::predicate::invert_permutation;
use nrd_core::{ConditionalPredicate, Predicate};
use proptest::prelude::*;

proptest! {
    #[test]
    fn nested_projection_composes(
        p in (2usize..=3, 1usize..=4).prop_flat_map(|(d, r)| common::predicate(d, r)),
        outer in proptest::collection::vec(any::<bool>(), 4),
        inner in proptest::collection::vec(any::<bool>(), 4),
    ) {
        let j: Vec<usize> = (0..p.arity()).filter(|&i| outer[i]).collect();
        let k: Vec<usize> = (0..j.len()).filter(|&i| inner[i]).collect();
        prop_assume!(!k.is_empty());
        let composed: Vec<usize> = k.iter().map(|&i| j[i]).collect();
        prop_assert_eq!(p.project(&j)?.project(&k)?, p.project(&composed)?);
    }

    #[test]
    fn permute_then_inverse_is_identity(
        (p, sigma) in (2usize..=3, 1usize..=4).prop_flat_map(|(d, r)| (common::predicate(d, r), common::permutation(r))),
    ) {
        prop_assert_eq!(p.permute(&sigma)?.permute(&invert_permutation(&sigma))?, p);
    }

    #[test]
    fn box_product_keeps_base_strictly_inside(
        a in (1usize..=2).prop_flat_map(|r| common::conditional(2, r)),
        b in (1usize..=2).prop_flat_map(|r| common::conditional(2, r)),
    ) {
        let c = a.box_product(&b)?;
        prop_assert!(c.base().is_subset(c.ambient()));
        prop_assert!(c.base().len() < c.ambient().len());
        prop_assert_eq!(c.ambient(), &a.ambient().product(b.ambient())?);
        let expected = a.base().product(b.ambient())?.union(&a.ambient().product(b.base())?)?;
        prop_assert_eq!(c.base(), &expected);
    }

    #[test]
    fn predicates_round_trip_through_json(p in (2usize..=3, 1usize..=4).prop_flat_map(|(d, r)| common::predicate(d, r))) {
        let text = serde_json::to_string(&p).unwrap();
        prop_assert_eq!(serde_json::from_str::<Predicate>(&text).unwrap(), p);
    }

    #[test]
    fn catalog_predicates_survive_random_permutations(idx in 0usize..100, seed in any::<u64>()) {
        let names = catalog::names();
        let c = catalog::conditional(names[idx % names.len()])?;
        let mut sigma: Vec<usize> = (0..c.arity()).collect();
        let mut s = seed;
        for i in (1..sigma.len()).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            sigma.swap(i, (s >> 33) as usize % (i + 1));
        }
        prop_assert_eq!(c.permute(&sigma)?.permute(&invert_permutation(&sigma))?, c);
    }
}

#[test]
fn catalog_round_trips_through_json() {
    for name in catalog::names() {
        let c = catalog::conditional(name).unwrap();
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(serde_json::from_str::<ConditionalPredicate>(&text).unwrap(), c, "{name}");
    }
}
