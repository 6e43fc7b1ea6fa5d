use fixedbitset::FixedBitSet;
use serde::Serialize;

use super::Instance;
use crate::error::{arg, NrdError, Result};
use crate::predicate::{checked_pow, decode_tuple, ConditionalPredicate, Status, StatusTable};

#[derive(Clone, Debug, Default)]
pub struct ExactOptions {
    /// When set, candidate edges are `V₁ × ⋯ × V_r` over disjoint parts of these sizes;
    /// otherwise all of `V^r`.
    pub part_sizes: Option<Vec<usize>>,
    /// Cap on branch-and-bound nodes.
    pub max_nodes: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExactResult {
    pub value: usize,
    #[serde(skip)]
    pub instance: Instance,
    pub nodes: u64,
    pub candidates: usize,
}

const MAX_ASSIGNMENTS: usize = 1 << 20;
const MAX_CANDIDATES: usize = 4096;

/// Per-candidate assignment sets: `base[c]` holds the assignments that
/// `P`-satisfy candidate `c`, `gap[c]` those that send it into `Q ∖ P`.
struct Tables {
    candidates: Vec<Vec<u32>>,
    base: Vec<FixedBitSet>,
    gap: Vec<FixedBitSet>,
    assignments: usize,
    n: usize,
}

impl Tables {
    fn new(pq: &ConditionalPredicate, n: usize, part_sizes: Option<&[usize]>) -> Result<Self> {
        let r = pq.arity();
        let (n, candidates) = match part_sizes {
            None => {
                let count = checked_pow(n, r).filter(|&c| c <= MAX_CANDIDATES).ok_or_else(too_big)?;
                (n, (0..count).map(|code| decode_tuple(code, n, r).into_iter().map(u32::from).collect()).collect::<Vec<Vec<u32>>>())
            }
            Some(sizes) => {
                if sizes.len() != r || sizes.contains(&0) {
                    return arg(format!("need {r} positive part sizes"));
                }
                let total: usize = sizes.iter().sum();
                let mut offsets = vec![0u32];
                for s in sizes {
                    offsets.push(offsets.last().unwrap() + *s as u32);
                }
                let count = sizes.iter().try_fold(1usize, |a, &s| a.checked_mul(s)).filter(|&c| c <= MAX_CANDIDATES).ok_or_else(too_big)?;
                let cands = (0..count)
                    .map(|mut code| {
                        (0..r)
                            .map(|i| {
                                let v = (code % sizes[i]) as u32;
                                code /= sizes[i];
                                offsets[i] + v
                            })
                            .collect()
                    })
                    .collect();
                (total, cands)
            }
        };
        let assignments = checked_pow(pq.domain(), n).filter(|&a| a <= MAX_ASSIGNMENTS).ok_or_else(too_big)?;
        let table = StatusTable::new(pq)?;
        let mut base = vec![FixedBitSet::with_capacity(assignments); candidates.len()];
        let mut gap = vec![FixedBitSet::with_capacity(assignments); candidates.len()];
        let mut values = vec![0u8; n];
        for a in 0..assignments {
            let mut code = a;
            for v in values.iter_mut() {
                *v = (code % pq.domain()) as u8;
                code /= pq.domain();
            }
            for (c, cand) in candidates.iter().enumerate() {
                match table.status_of(cand, &values) {
                    Status::Base => base[c].insert(a),
                    Status::Gap => gap[c].insert(a),
                    Status::Outside => {}
                }
            }
        }
        Ok(Tables { candidates, base, gap, assignments, n })
    }

    fn instance(&self, chosen: &[usize], r: usize) -> Result<Instance> {
        Instance::on_vertices(self.n, r, chosen.iter().map(|&c| self.candidates[c].clone()).collect())
    }
}

fn too_big() -> NrdError {
    NrdError::Unsupported("search space too large for exact computation".into())
}

/// Largest non-redundant instance on `n` vertices, by branch and bound over
/// candidate edges.
///
/// For each chosen edge the search keeps the set of assignments that can
/// still witness it; adding an edge intersects these sets, so a branch dies
/// as soon as some chosen edge loses its last witness. Candidates that no
/// assignment sends into `Q ∖ P` are dropped up front.
pub fn nrd_exact(pq: &ConditionalPredicate, n: usize, opts: &ExactOptions) -> Result<ExactResult> {
    let t = Tables::new(pq, n, opts.part_sizes.as_deref())?;
    let live: Vec<usize> = (0..t.candidates.len()).filter(|&c| !t.gap[c].is_clear()).collect();
    let mut all = FixedBitSet::with_capacity(t.assignments);
    all.insert_range(..);
    let mut state = Search {
        t: &t,
        live: &live,
        best: Vec::new(),
        chosen: Vec::new(),
        witnesses: Vec::new(),
        nodes: 0,
        max_nodes: opts.max_nodes,
    };
    state.branch(0, &all)?;
    let value = state.best.len();
    let nodes = state.nodes;
    let instance = t.instance(&state.best, pq.arity())?;
    Ok(ExactResult { value, instance, nodes, candidates: t.candidates.len() })
}

struct Search<'a> {
    t: &'a Tables,
    live: &'a [usize],
    best: Vec<usize>,
    chosen: Vec<usize>,
    /// Assignments still able to witness each chosen edge, in `chosen` order.
    witnesses: Vec<FixedBitSet>,
    nodes: u64,
    max_nodes: Option<u64>,
}

impl Search<'_> {
    fn branch(&mut self, pos: usize, common: &FixedBitSet) -> Result<()> {
        self.nodes += 1;
        if self.max_nodes.is_some_and(|m| self.nodes > m) {
            return Err(NrdError::Budget { what: "exact NRD branch and bound".into(), lower_bound: Some(self.best.len()) });
        }
        if self.chosen.len() > self.best.len() {
            self.best = self.chosen.clone();
        }
        let addable = self.live[pos..]
            .iter()
            .filter(|&&c| !self.t.gap[c].is_disjoint(common))
            .count();
        if self.chosen.len() + addable <= self.best.len() {
            return Ok(());
        }
        for (offset, &c) in self.live[pos..].iter().enumerate() {
            let mut own = self.t.gap[c].clone();
            own.intersect_with(common);
            if own.is_clear() {
                continue;
            }
            let narrowed: Vec<FixedBitSet> = self
                .witnesses
                .iter()
                .map(|w| {
                    let mut w = w.clone();
                    w.intersect_with(&self.t.base[c]);
                    w
                })
                .collect();
            if narrowed.iter().any(FixedBitSet::is_clear) {
                continue;
            }
            let mut next_common = common.clone();
            next_common.intersect_with(&self.t.base[c]);
            let saved = std::mem::replace(&mut self.witnesses, narrowed);
            self.witnesses.push(own);
            self.chosen.push(c);
            let result = self.branch(pos + offset + 1, &next_common);
            self.chosen.pop();
            self.witnesses = saved;
            result?;
            let remaining = self.live.len() - (pos + offset + 1);
            if self.chosen.len() + remaining <= self.best.len() {
                break;
            }
        }
        Ok(())
    }
}

/// Exhaustive reference: checks every subset of candidates directly.
/// Limited to 24 candidates.
pub fn nrd_exact_exhaustive(pq: &ConditionalPredicate, n: usize, part_sizes: Option<&[usize]>) -> Result<usize> {
    let t = Tables::new(pq, n, part_sizes)?;
    let m = t.candidates.len();
    if m > 24 {
        return Err(NrdError::Unsupported(format!("{m} candidates is too many for exhaustive search")));
    }
    let mut best = 0;
    for subset in 0u32..(1u32 << m) {
        let size = subset.count_ones() as usize;
        if size <= best {
            continue;
        }
        let members: Vec<usize> = (0..m).filter(|&c| subset >> c & 1 == 1).collect();
        let ok = members.iter().all(|&e| {
            (0..t.assignments).any(|a| t.gap[e].contains(a) && members.iter().all(|&f| f == e || t.base[f].contains(a)))
        });
        if ok {
            best = size;
        }
    }
    Ok(best)
}
