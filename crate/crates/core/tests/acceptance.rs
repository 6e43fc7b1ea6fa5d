//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Exits nonzero when a criterion fails other than the known failure of the
//! `r1s1-to-cat5-124` table, which does not verify as bundled.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use nrd_core::analysis::{cancel, catalan_matrix_check, catalan_search, is_balanced_bounded, is_balanced_lattice};
use nrd_core::checks::CAT5_MATRIX;
use nrd_core::generators::{girth6_witness, partite_girth, ShrinkingKind};
use nrd_core::instance::{check_witnesses, nrd_exact, nrd_exact_exhaustive, verify_nrd, ExactOptions, FindOptions};
use nrd_core::pipeline::{
    argmax_slice, audit_coordinate_permutations, build_family_member, build_plain_lb_instance, conditional_to_plain,
    fit_shrinking, run_pipeline, shrink_point, slice_by_projection,
};
use nrd_core::predicate::{format_tuple, parse_digits};
use nrd_core::substructure::{search_families, source_automorphisms, verify_certificate, FamilySearchOptions};
use nrd_core::{catalog, generators, tables, ConditionalPredicate, NrdCertificate, PartiteHypergraph, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const KNOWN_FAILING_TABLE: &str = "r1s1-to-cat5-124";

type Criterion = fn() -> Result<Verdict>;

struct Verdict {
    ok: bool,
    detail: String,
    /// Failure is the documented table defect and nothing else.
    known: bool,
}

fn verdict(ok: bool, detail: impl Into<String>) -> Result<Verdict> {
    Ok(Verdict { ok, detail: detail.into(), known: false })
}

fn tables_verify() -> Result<Verdict> {
    let names = [
        "or3-to-3lin",
        "r2s2-to-boolbck-drop1",
        "r2s2-to-boolbck-drop2",
        "r1s1-to-cat5-134",
        KNOWN_FAILING_TABLE,
        "r2s2-to-cat5-1234",
    ];
    let start = Instant::now();
    let mut failing = Vec::new();
    let mut details = Vec::new();
    for name in names {
        let t = tables::table(name)?;
        let v = verify_certificate(&t.certificate()?)?;
        if !v.ok {
            failing.push(name);
            details.push(format!("{name}: {}", v.violation.map(|x| x.to_string()).unwrap_or_default()));
        }
    }
    let elapsed = start.elapsed();
    let fast = elapsed < Duration::from_secs(1);
    let detail = format!("{} of {} verify in {elapsed:.2?}; {}", names.len() - failing.len(), names.len(), details.join("; "));
    Ok(Verdict { ok: failing.is_empty() && fast, known: fast && failing == [KNOWN_FAILING_TABLE], detail })
}

fn balance() -> Result<Verdict> {
    let mut ok = true;
    let mut notes = Vec::new();
    for (name, balanced, k) in [("OR2", false, 1), ("1in3", true, 3), ("BoolBCK", false, 2), ("BoolBCK+", true, 3)] {
        let p = catalog::predicate(name)?;
        let lattice = is_balanced_lattice(&p)?;
        let bounded = is_balanced_bounded(&p, k)?;
        ok &= lattice.balanced == balanced && bounded.balanced == balanced;
        if let Some(w) = &bounded.witness {
            ok &= w.verify(&p);
            notes.push(format!("{name}: {} terms -> {}", w.terms.len(), format_tuple(&w.result)));
        }
        match name {
            "OR2" => ok &= bounded.witness.as_ref().is_some_and(|w| w.terms.len() == 3),
            "BoolBCK" => {
                ok &= is_balanced_bounded(&p, 1)?.balanced;
                ok &= bounded
                    .witness
                    .as_ref()
                    .is_some_and(|w| w.terms.len() == 5 && format_tuple(&w.result) == catalog::BOOLBCK_IDENTITY);
            }
            _ => {}
        }
    }
    verdict(ok, notes.join("; "))
}

fn exact_nrd() -> Result<Verdict> {
    let start = Instant::now();
    let eq = catalog::conditional("EQ")?;
    let values = (2..=5).map(|n| Ok((n, nrd_exact(&eq, n, &ExactOptions::default())?.value))).collect::<Result<Vec<_>>>()?;
    let or2 = catalog::conditional("OR2")?;
    let fast = nrd_exact(&or2, 4, &ExactOptions::default())?.value;
    let slow = nrd_exact_exhaustive(&or2, 4, None)?;
    let ok = values.iter().all(|&(n, v)| v == n - 1) && fast == slow && fast == 6 && start.elapsed() < Duration::from_secs(60);
    verdict(ok, format!("EQ {values:?}; OR2 on 4 vertices {fast} (exhaustive {slow})"))
}

fn random_bipartite(rng: &mut ChaCha8Rng) -> Result<PartiteHypergraph> {
    let a = rng.gen_range(1..=5usize);
    let b = rng.gen_range(1..=9 - a);
    let p = rng.gen_range(0.2..0.9);
    let mut edges: Vec<Vec<u32>> = Vec::new();
    for i in 0..a as u32 {
        for j in 0..b as u32 {
            if rng.gen_bool(p) {
                edges.push(vec![i, j]);
            }
        }
    }
    if edges.is_empty() {
        edges.push(vec![0, 0]);
    }
    let parts = vec![(0..a).map(|i| format!("a{i}")).collect(), (0..b).map(|j| format!("b{j}")).collect()];
    PartiteHypergraph::from_local(parts, edges)
}

fn girth_equivalence() -> Result<Verdict> {
    let c6 = catalog::c6()?;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut disagreements, mut girth6) = (0, 0);
    for _ in 0..500 {
        let h = random_bipartite(&mut rng)?;
        let high_girth = partite_girth(&h)?.is_none_or(|g| g >= 6);
        girth6 += usize::from(high_girth);
        let nrd = verify_nrd(h.instance(), &c6, &FindOptions::default())?.is_certified();
        disagreements += usize::from(nrd != high_girth);
    }
    verdict(disagreements == 0, format!("500 graphs, {girth6} of girth at least 6, {disagreements} disagreements"))
}

fn family_rediscovery() -> Result<Verdict> {
    let mut ok = true;
    let mut notes = Vec::new();
    let runs = [
        ("OR3", "3LIN", 2, None),
        ("R2|S2", "BoolBCK@~1|BoolBCK+@~1", 3, Some(3)),
        ("R2|S2", "BoolBCK@~2|BoolBCK+@~2", 3, Some(3)),
    ];
    for (source, target, k, uniform) in runs {
        let start = Instant::now();
        let src = catalog::conditional(source)?;
        let tgt = catalog::conditional(target)?;
        let mut opts = FamilySearchOptions::new(k);
        opts.symmetries = source_automorphisms(&src)?;
        if let Some(size) = uniform {
            opts.uniform_sizes = vec![size];
            opts.mixed = false;
            opts.max_results = Some(1);
        }
        let result = search_families(&src, &tgt, &opts)?;
        let elapsed = start.elapsed();
        let hit = match uniform {
            None => result.found.iter().any(|f| f.family == [vec![1, 2], vec![1, 3], vec![2, 3]]),
            Some(size) => result.found.iter().any(|f| f.family.iter().all(|s| s.len() == size)),
        };
        ok &= hit && elapsed < Duration::from_secs(120);
        let first = result.found.first().map(|f| f.certificate.family.to_string()).unwrap_or_else(|| "none".into());
        notes.push(format!("{source} -> {target}: {first} in {elapsed:.2?}"));
    }
    verdict(ok, notes.join("; "))
}

fn shrinking() -> Result<Verdict> {
    let mut ok = true;
    let mut notes = Vec::new();
    for (kind, target, tolerance) in [(ShrinkingKind::R1S1, 0.25, 0.10), (ShrinkingKind::R2S2, 1.0 / 6.0, 0.12)] {
        for q in [2, 3] {
            let inst = build_family_member(kind, q)?;
            let pq = inst.predicate()?;
            let given = check_witnesses(inst.hypergraph.instance(), &pq, &inst)?.ok();
            let found = verify_nrd(inst.hypergraph.instance(), &pq, &FindOptions::default())?.is_certified();
            ok &= given && found;
        }
        let points = [2, 3, 5].iter().map(|&q| shrink_point(&build_family_member(kind, q)?)).collect::<Result<Vec<_>>>()?;
        let eps = fit_shrinking(&points)?.slope;
        ok &= (eps - target).abs() <= tolerance;
        notes.push(format!("{kind:?} epsilon {eps:.4} (target {target:.4})"));
    }
    verdict(ok, notes.join("; "))
}

fn pipelines() -> Result<Verdict> {
    let mut ok = true;
    let mut notes = Vec::new();
    for (kind, table, target) in [(ShrinkingKind::R2S2, "r2s2-to-boolbck-drop1", 1.2), (ShrinkingKind::R1S1, "r1s1-to-cat5-134", 4.0 / 3.0)] {
        let run = run_pipeline(kind, table, &[2, 3, 5])?;
        ok &= run.points.iter().all(|p| p.verified) && (run.fit.exponent - target).abs() <= 0.15;
        notes.push(format!("{table}: exponent {:.4} (target {target:.4})", run.fit.exponent));
    }
    verdict(ok, notes.join("; "))
}

fn plain_lift() -> Result<Verdict> {
    let pq = catalog::c6()?;
    let h = generators::gen_girth6(2)?.to_partite()?;
    let witnesses = (0..h.num_edges()).map(|e| girth6_witness(&h, e)).collect::<Result<Vec<_>>>()?;
    let base = NrdCertificate { witnesses };
    let lifted = build_plain_lb_instance(h.instance(), &base, 4)?;
    let plain = ConditionalPredicate::plain(conditional_to_plain(&pq)?)?;
    let check = check_witnesses(&lifted.instance, &plain, &lifted)?;
    let total = lifted.instance.num_edges();
    let subsets = lifted.subsets.len();
    let bound = total.div_ceil(subsets);
    let (best, size) = argmax_slice(&lifted.instance, &[2, 3])?.unwrap_or_default();
    let (slice, _) = slice_by_projection(&lifted.instance, &[2, 3], &best)?;
    let ok = check.ok() && size == bound && slice.num_edges() == size && size == h.num_edges();
    verdict(ok, format!("{total} lifted edges over {subsets} subsets; largest slice {size}, pigeonhole bound {bound}"))
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

fn cancellation() -> Result<Verdict> {
    let first = cancel(&parse_digits("0221221")?);
    let cols = CAT5_MATRIX.iter().map(|w| parse_digits(w)).collect::<Result<Vec<_>>>()?;
    let (residual, _) = catalan_matrix_check(&catalog::predicate("Cat5+")?, &cols)?;
    let residual = residual.unwrap_or_default();
    let outside = !catalog::predicate("Cat5")?.contains(&residual);
    let violations = catalan_search(&catalog::predicate("Cat5+")?, 5)?.len();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut confluent = true;
    for _ in 0..1000 {
        let d = rng.gen_range(1..=3u8);
        let len = rng.gen_range(0..=15);
        let word: Vec<u8> = (0..len).map(|_| rng.gen_range(0..d)).collect();
        let stack = cancel(&word);
        confluent &= (0..10).all(|_| random_cancel(&word, &mut rng) == stack);
    }
    let ok = first == [0] && residual == [0; 5] && outside && violations == 0 && confluent;
    verdict(
        ok,
        format!(
            "0221221 -> {}; matrix residual {}; {violations} violations for Cat5+; confluence {}",
            format_tuple(&first),
            format_tuple(&residual),
            if confluent { "holds" } else { "fails" }
        ),
    )
}

fn permutation_audit() -> Result<Verdict> {
    let start = Instant::now();
    let audits = audit_coordinate_permutations()?;
    let elapsed = start.elapsed();
    let certify = audits.iter().filter(|a| a.bijection && !a.certifies.is_empty()).count();
    let anomalies: Vec<_> = audits.iter().filter(|a| !a.bijection).collect();
    let repaired = anomalies.iter().all(|a| !a.repairs.is_empty());
    let ok = audits.len() == 7 && certify >= 6 && anomalies.len() == 1 && anomalies[0].dropped == 6 && repaired && elapsed < Duration::from_secs(30);
    let repairs: Vec<String> = anomalies
        .iter()
        .flat_map(|a| a.repairs.iter().map(|r| format!("{} from [9]\\{{{}}}", r.count, r.from_dropped)))
        .collect();
    verdict(ok, format!("{certify} of {} rows certify; non-bijection repairs: {}; {elapsed:.2?}", audits.len(), repairs.join(", ")))
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 10] = [
        ("bundled tuple-map tables verify", tables_verify),
        ("balance suite", balance),
        ("exact NRD of EQ and OR2", exact_nrd),
        ("C6*|C6 non-redundancy matches girth at least 6", girth_equivalence),
        ("family search rediscovers known families", family_rediscovery),
        ("shrinking instances verify and shrink at the expected rate", shrinking),
        ("reduction pipelines reach the expected exponents", pipelines),
        ("plain lift and slicing", plain_lift),
        ("cancellation suite", cancellation),
        ("coordinate-permutation audit", permutation_audit),
    ];
    let mut unexpected = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = check().unwrap_or_else(|e| Verdict { ok: false, detail: format!("error: {e}"), known: false });
        let tag = if v.ok { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {tag} {name} [{:.1?}]: {}", i + 1, start.elapsed(), v.detail);
        if !v.ok && !v.known {
            unexpected += 1;
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} unexpected failures");
        ExitCode::FAILURE
    }
}
