use std::collections::{BTreeMap, BTreeSet};

use log::warn;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{Instance, PartiteHypergraph};
use crate::error::{arg, Result};
use crate::predicate::{normalize_coords, IndexFamily};

#[derive(Clone, Debug)]
pub struct RPartiteResult {
    pub hypergraph: PartiteHypergraph,
    /// For each kept edge, its index in the input.
    pub kept: Vec<usize>,
    pub kept_fraction: f64,
    /// Fraction of input edges whose vertices received pairwise distinct colours.
    pub distinct_colour_fraction: f64,
    /// The `r⁻ʳ` retention probability of a single colouring for an edge with distinct vertices.
    pub expected_fraction: f64,
    pub empty: bool,
}

/// Random `r`-colouring that keeps an edge when coordinate `i` got colour `i`.
///
/// Vertices that only ever occur in one coordinate are coloured by that
/// coordinate, so an input that is already partite is returned unchanged.
/// The best of `retries` colourings (by edges kept) is returned.
pub fn to_r_partite(h: &Instance, seed: u64, retries: usize) -> RPartiteResult {
    let r = h.arity();
    let n = h.num_vertices();
    let mut positions: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for e in h.edges() {
        for (i, &v) in e.iter().enumerate() {
            positions[v as usize].insert(i);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(Vec<usize>, Vec<usize>, usize)> = None;
    for _ in 0..retries.max(1) {
        let colour: Vec<usize> = positions
            .iter()
            .map(|p| match p.len() {
                1 => *p.iter().next().unwrap(),
                _ => rng.gen_range(0..r),
            })
            .collect();
        let kept: Vec<usize> = h
            .edges()
            .iter()
            .enumerate()
            .filter(|(_, e)| e.iter().enumerate().all(|(i, &v)| colour[v as usize] == i))
            .map(|(k, _)| k)
            .collect();
        let distinct = h
            .edges()
            .iter()
            .filter(|e| e.iter().map(|&v| colour[v as usize]).collect::<BTreeSet<_>>().len() == r)
            .count();
        if best.as_ref().is_none_or(|(k, _, _)| kept.len() > k.len()) {
            best = Some((kept, colour, distinct));
        }
    }
    let (kept, colour, distinct) = best.expect("at least one colouring");
    let mut parts: Vec<Vec<String>> = vec![Vec::new(); r];
    let mut local = vec![0u32; n];
    for v in 0..n {
        local[v] = parts[colour[v]].len() as u32;
        parts[colour[v]].push(h.labels()[v].clone());
    }
    let edges = kept.iter().map(|&k| h.edges()[k].iter().map(|&v| local[v as usize]).collect()).collect();
    let hypergraph = PartiteHypergraph::from_local(parts, edges).expect("colouring respects parts");
    let total = h.num_edges().max(1) as f64;
    RPartiteResult {
        empty: kept.is_empty(),
        kept_fraction: kept.len() as f64 / total,
        distinct_colour_fraction: distinct as f64 / total,
        expected_fraction: (r as f64).powi(-(r as i32)),
        hypergraph,
        kept,
    }
}

/// `π_J H`: keeps the parts in `coords` (0-indexed) and deduplicates projected edges.
pub fn project_instance(h: &PartiteHypergraph, coords: &[usize]) -> Result<PartiteHypergraph> {
    let coords = normalize_coords(coords, h.arity())?;
    let parts: Vec<Vec<String>> = coords.iter().map(|&i| h.part_labels(i).to_vec()).collect();
    let mut seen = BTreeSet::new();
    let mut edges = Vec::new();
    for e in h.edges() {
        let local: Vec<u32> = coords.iter().map(|&i| e[i] - h.part_range(i).start).collect();
        if seen.insert(local.clone()) {
            edges.push(local);
        }
    }
    PartiteHypergraph::from_local(parts, edges)
}

/// The projection hypergraph `pr_I H` with bookkeeping for witness transfer.
#[derive(Clone, Debug)]
pub struct ProjectionHypergraph {
    pub hypergraph: PartiteHypergraph,
    /// Source vertex tuple `π_{I_j} e` represented by each output vertex.
    pub vertex_sources: Vec<Vec<u32>>,
    /// Part index of each output vertex.
    pub vertex_part: Vec<usize>,
    /// For each output edge, the first source edge mapping onto it.
    pub edge_source: Vec<usize>,
    /// Number of source edges merged into an earlier output edge.
    pub merged: usize,
}

/// Builds `pr_I H`: part `j` holds the distinct projections `π_{I_j} e`, and
/// each source edge `e` becomes `(π_{I₁} e, …, π_{I_ℓ} e)`.
pub fn projection_hypergraph(h: &PartiteHypergraph, family: &IndexFamily) -> Result<ProjectionHypergraph> {
    if family.source_arity() != h.arity() {
        return arg(format!("family is over arity {}, instance has arity {}", family.source_arity(), h.arity()));
    }
    let mut part_index: Vec<BTreeMap<Vec<u32>, u32>> = vec![BTreeMap::new(); family.len()];
    for e in h.edges() {
        for (j, set) in family.sets().iter().enumerate() {
            let key: Vec<u32> = set.iter().map(|&i| e[i]).collect();
            let next = part_index[j].len() as u32;
            part_index[j].entry(key).or_insert(next);
        }
    }
    // Renumber each part in sorted key order for determinism.
    let mut parts = Vec::with_capacity(family.len());
    let mut vertex_sources = Vec::new();
    let mut vertex_part = Vec::new();
    for (j, index) in part_index.iter_mut().enumerate() {
        let mut labels = Vec::with_capacity(index.len());
        for (k, (key, slot)) in index.iter_mut().enumerate() {
            *slot = k as u32;
            let inner: Vec<&str> = key.iter().map(|&v| h.instance().labels()[v as usize].as_str()).collect();
            labels.push(format!("I{}({})", j + 1, inner.join(",")));
            vertex_sources.push(key.clone());
            vertex_part.push(j);
        }
        parts.push(labels);
    }
    let mut seen = BTreeSet::new();
    let mut edges = Vec::with_capacity(h.num_edges());
    let mut edge_source = Vec::with_capacity(h.num_edges());
    let mut merged = 0;
    for (k, e) in h.edges().iter().enumerate() {
        let local: Vec<u32> = family
            .sets()
            .iter()
            .enumerate()
            .map(|(j, set)| part_index[j][&set.iter().map(|&i| e[i]).collect::<Vec<u32>>()])
            .collect();
        if seen.insert(local.clone()) {
            edges.push(local);
            edge_source.push(k);
        } else {
            merged += 1;
        }
    }
    if merged > 0 {
        warn!("projection hypergraph merged {merged} colliding edges");
    }
    let hypergraph = PartiteHypergraph::from_local(parts, edges)?;
    Ok(ProjectionHypergraph { hypergraph, vertex_sources, vertex_part, edge_source, merged })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShrinkEntry {
    /// 1-indexed coordinate set.
    pub set: Vec<usize>,
    pub projected: usize,
    pub factor: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShrinkingReport {
    pub edges: usize,
    pub entries: Vec<ShrinkEntry>,
    /// Minimum factor over the reported sets.
    pub lambda: f64,
}

/// Exact projected-edge counts `|π_I E|` and factors `|E| / |π_I E|` for the
/// given sets (0-indexed), or for every nonempty proper subset when `sets` is `None`.
pub fn shrinking_report(h: &PartiteHypergraph, sets: Option<&[Vec<usize>]>) -> Result<ShrinkingReport> {
    let r = h.arity();
    let sets: Vec<Vec<usize>> = match sets {
        Some(s) => s.iter().map(|set| normalize_coords(set, r)).collect::<Result<_>>()?,
        None => (1..(1usize << r) - 1)
            .map(|mask| (0..r).filter(|i| mask >> i & 1 == 1).collect::<Vec<_>>())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect(),
    };
    let mut sets = sets;
    sets.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    let edges = h.num_edges();
    let entries: Vec<ShrinkEntry> = sets
        .iter()
        .map(|set| {
            let projected = h.edges().iter().map(|e| set.iter().map(|&i| e[i]).collect::<Vec<u32>>()).collect::<BTreeSet<_>>().len();
            ShrinkEntry {
                set: set.iter().map(|i| i + 1).collect(),
                projected,
                factor: if projected == 0 { 0.0 } else { edges as f64 / projected as f64 },
            }
        })
        .collect();
    let lambda = entries.iter().map(|e| e.factor).fold(f64::INFINITY, f64::min);
    Ok(ShrinkingReport { edges, entries, lambda: if lambda.is_finite() { lambda } else { 1.0 } })
}
