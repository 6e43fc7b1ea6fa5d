mod common;

use nrd_core::sat::{parse_dimacs, solve, to_dimacs};
use nrd_core::substructure::{encode, find_certificate, verify_certificate};
use nrd_core::{Cnf, IndexFamily, SolveResult, SolverConfig, VarTag};
use proptest::prelude::*;

fn cnf(num_vars: usize, clauses: &[Vec<i32>]) -> Cnf {
    let mut f = Cnf::new();
    for v in 0..num_vars {
        f.add_var(VarTag::Aux(format!("v{v}")));
    }
    for c in clauses {
        f.add_clause(c.clone());
    }
    f
}

fn brute_force_sat(num_vars: usize, clauses: &[Vec<i32>]) -> bool {
    (0u32..1 << num_vars).any(|bits| {
        clauses.iter().all(|c| c.iter().any(|&l| (bits >> (l.unsigned_abs() - 1) & 1 == 1) == (l > 0)))
    })
}

/// Random 3-CNF near the satisfiability threshold.
fn three_cnf() -> impl Strategy<Value = (usize, Vec<Vec<i32>>)> {
    (3usize..=16).prop_flat_map(|n| {
        let literal = (1..=n as i32, any::<bool>()).prop_map(|(v, neg)| if neg { -v } else { v });
        let clause = proptest::collection::vec(literal, 3);
        let m = (n as f64 * 4.26).round() as usize;
        (Just(n), proptest::collection::vec(clause, m.saturating_sub(n)..=m + n))
    })
}

fn family(r1: usize, r2: usize) -> impl Strategy<Value = IndexFamily> {
    proptest::collection::vec(proptest::collection::vec(any::<bool>(), r1), r2).prop_map(move |masks| {
        let sets = masks.iter().map(|m| (0..r1).filter(|&i| m[i]).collect()).collect();
        IndexFamily::new(r1, sets).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn solver_agrees_with_truth_tables((n, clauses) in three_cnf()) {
        let f = cnf(n, &clauses);
        match solve(&f, &SolverConfig::default())? {
            SolveResult::Sat(model) => prop_assert!(f.satisfied_by(&model)),
            SolveResult::Unsat => prop_assert!(!brute_force_sat(n, &clauses)),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn dimacs_round_trips((n, clauses) in three_cnf()) {
        let f = cnf(n, &clauses);
        prop_assert_eq!(parse_dimacs(&to_dimacs(&f))?, f);
    }

    #[test]
    fn decoded_certificates_verify_and_re_encode(
        source in common::conditional(2, 2),
        target in common::conditional(2, 2),
        fam in family(2, 2),
    ) {
        let config = SolverConfig::default();
        if let Some(cert) = find_certificate(&source, &target, &fam, &config)? {
            prop_assert!(verify_certificate(&cert)?.ok);
            let again = encode(&cert.source, &cert.target, &cert.family)?;
            prop_assert!(solve(&again.cnf, &config)?.is_sat());
        }
    }

    #[test]
    fn enlarging_a_set_keeps_a_family_satisfiable(
        source in common::conditional(2, 3),
        target in common::conditional(2, 2),
        fam in family(3, 2),
        slot in 0usize..2,
        extra in 0usize..3,
    ) {
        let config = SolverConfig::default();
        if find_certificate(&source, &target, &fam, &config)?.is_some() {
            let mut sets = fam.sets().to_vec();
            sets[slot].push(extra);
            let bigger = IndexFamily::new(3, sets)?;
            prop_assert!(find_certificate(&source, &target, &bigger, &config)?.is_some());
        }
    }
}
