use rayon::prelude::*;
use serde::Serialize;

use super::{Instance, NrdCertificate, WitnessSource};
use crate::error::{arg, NrdError, Result};
use crate::predicate::{ConditionalPredicate, Status, StatusTable, Tuple};

#[derive(Clone, Debug, Default)]
pub struct FindOptions {
    /// Cap on search nodes per excluded edge.
    pub max_assignments: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FindOutcome {
    Certified(NrdCertificate),
    /// No assignment violates `edge` (into `Q ∖ P`) while `P`-satisfying all others.
    Redundant { edge: usize },
}

impl FindOutcome {
    pub fn is_certified(&self) -> bool {
        matches!(self, FindOutcome::Certified(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckFailure {
    /// Edge whose witness failed.
    pub edge: usize,
    /// The edge the witness mishandles (equal to `edge` when `edge` itself is not sent into `Q ∖ P`).
    pub offending: usize,
    pub status: Status,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub edges_checked: usize,
    pub failure: Option<CheckFailure>,
}

impl CheckOutcome {
    pub fn ok(&self) -> bool {
        self.failure.is_none()
    }
}

fn check_shapes(h: &Instance, pq: &ConditionalPredicate) -> Result<()> {
    if h.arity() != pq.arity() {
        return arg(format!("instance arity {} does not match predicate arity {}", h.arity(), pq.arity()));
    }
    Ok(())
}

/// Checks the witnesses edge by edge: `ψ_e(e) ∈ Q ∖ P` and `ψ_e(e′) ∈ P` for `e′ ≠ e`.
/// Reports the smallest failing edge.
pub fn check_witnesses(h: &Instance, pq: &ConditionalPredicate, witnesses: &dyn WitnessSource) -> Result<CheckOutcome> {
    check_shapes(h, pq)?;
    let table = StatusTable::new(pq)?;
    let edges = h.edges();
    let n = h.num_vertices();
    let failure = (0..edges.len())
        .into_par_iter()
        .map_init(
            || vec![0u8; n],
            |values, e| {
                witnesses.fill_witness(e, values);
                if values.iter().any(|&v| v as usize >= pq.domain()) {
                    return Some(CheckFailure { edge: e, offending: e, status: Status::Outside });
                }
                for (k, other) in edges.iter().enumerate() {
                    let status = table.status_of(other, values);
                    let ok = if k == e { status == Status::Gap } else { status == Status::Base };
                    if !ok {
                        return Some(CheckFailure { edge: e, offending: k, status });
                    }
                }
                None
            },
        )
        .find_first(Option::is_some)
        .flatten();
    Ok(CheckOutcome { edges_checked: edges.len(), failure })
}

/// Searches for a witness for every edge.
pub fn verify_nrd(h: &Instance, pq: &ConditionalPredicate, opts: &FindOptions) -> Result<FindOutcome> {
    check_shapes(h, pq)?;
    if pq.domain() > 32 {
        return Err(NrdError::Unsupported("witness search supports domains up to 32".into()));
    }
    let ctx = SearchContext::new(h, pq);
    let results: Vec<Result<Option<Vec<u8>>>> = (0..h.num_edges())
        .into_par_iter()
        .map(|e| ctx.find_witness(e, opts.max_assignments))
        .collect();
    let mut witnesses = Vec::with_capacity(results.len());
    for (e, r) in results.into_iter().enumerate() {
        match r? {
            Some(w) => witnesses.push(w),
            None => return Ok(FindOutcome::Redundant { edge: e }),
        }
    }
    Ok(FindOutcome::Certified(NrdCertificate { witnesses }))
}

struct SearchContext<'a> {
    h: &'a Instance,
    base: Vec<Tuple>,
    gap: Vec<Tuple>,
    domain: usize,
    incident: Vec<Vec<usize>>,
    value_order: Vec<u8>,
    default_value: u8,
    /// Whether the base predicate uses every value in every coordinate.
    base_unrestricted: bool,
}

impl<'a> SearchContext<'a> {
    fn new(h: &'a Instance, pq: &ConditionalPredicate) -> Self {
        let mut incident = vec![Vec::new(); h.num_vertices()];
        for (k, e) in h.edges().iter().enumerate() {
            for &v in e {
                if incident[v as usize].last() != Some(&k) {
                    incident[v as usize].push(k);
                }
            }
        }
        let base = pq.base().tuples().to_vec();
        let mut value_order = Vec::new();
        for t in &base {
            for &v in t {
                if !value_order.contains(&v) {
                    value_order.push(v);
                }
            }
        }
        for v in 0..pq.domain() as u8 {
            if !value_order.contains(&v) {
                value_order.push(v);
            }
        }
        let base_unrestricted =
            (0..pq.arity()).all(|i| (0..pq.domain() as u8).all(|v| base.iter().any(|t| t[i] == v)));
        SearchContext {
            h,
            default_value: base.first().map(|t| t[0]).unwrap_or(0),
            base,
            gap: pq.gap().tuples().to_vec(),
            domain: pq.domain(),
            incident,
            value_order,
            base_unrestricted,
        }
    }

    fn allowed(&self, k: usize, excluded: usize) -> &[Tuple] {
        if k == excluded {
            &self.gap
        } else {
            &self.base
        }
    }

    fn find_witness(&self, excluded: usize, budget: Option<u64>) -> Result<Option<Vec<u8>>> {
        let full: u32 = if self.domain == 32 { u32::MAX } else { (1u32 << self.domain) - 1 };
        let mut domains = vec![full; self.h.num_vertices()];
        let mut queue: Vec<usize> = if self.base_unrestricted {
            vec![excluded]
        } else {
            (0..self.h.num_edges()).collect()
        };
        let mut nodes = 0u64;
        if !self.propagate(&mut domains, &mut queue, excluded) {
            return Ok(None);
        }
        let found = self.search(&mut domains, excluded, budget, &mut nodes)?;
        Ok(found.map(|d| {
            d.iter()
                .enumerate()
                .map(|(v, &mask)| {
                    if self.incident[v].is_empty() {
                        self.default_value
                    } else {
                        mask.trailing_zeros() as u8
                    }
                })
                .collect()
        }))
    }

    fn search(&self, domains: &mut [u32], excluded: usize, budget: Option<u64>, nodes: &mut u64) -> Result<Option<Vec<u32>>> {
        let excluded_edge = &self.h.edges()[excluded];
        let pick = (0..domains.len())
            .filter(|&v| !self.incident[v].is_empty() && domains[v].count_ones() > 1)
            .min_by_key(|&v| {
                (
                    domains[v].count_ones(),
                    !excluded_edge.contains(&(v as u32)),
                    std::cmp::Reverse(self.incident[v].len()),
                    v,
                )
            });
        let Some(var) = pick else {
            return Ok(self.satisfies_all(domains, excluded).then(|| domains.to_vec()));
        };
        for &value in &self.value_order {
            if domains[var] & (1 << value) == 0 {
                continue;
            }
            *nodes += 1;
            if budget.is_some_and(|b| *nodes > b) {
                return Err(NrdError::Budget { what: format!("witness search for edge {excluded}"), lower_bound: None });
            }
            let mut next = domains.to_vec();
            next[var] = 1 << value;
            let mut queue = self.incident[var].clone();
            if self.propagate(&mut next, &mut queue, excluded) {
                if let Some(found) = self.search(&mut next, excluded, budget, nodes)? {
                    return Ok(Some(found));
                }
            }
        }
        Ok(None)
    }

    fn satisfies_all(&self, domains: &[u32], excluded: usize) -> bool {
        self.h.edges().iter().enumerate().all(|(k, scope)| {
            let t: Tuple = scope.iter().map(|&v| domains[v as usize].trailing_zeros() as u8).collect();
            self.allowed(k, excluded).binary_search(&t).is_ok()
        })
    }

    /// Generalized arc consistency over the queued constraints. Returns false on a wipe-out.
    fn propagate(&self, domains: &mut [u32], queue: &mut Vec<usize>, excluded: usize) -> bool {
        let mut queued = vec![false; self.h.num_edges()];
        for &k in queue.iter() {
            queued[k] = true;
        }
        while let Some(k) = queue.pop() {
            queued[k] = false;
            let scope = &self.h.edges()[k];
            let mut support = vec![0u32; scope.len()];
            for t in self.allowed(k, excluded) {
                let consistent = scope.iter().enumerate().all(|(i, &v)| {
                    domains[v as usize] & (1 << t[i]) != 0
                        && scope[..i].iter().enumerate().all(|(j, &w)| w != v || t[j] == t[i])
                });
                if consistent {
                    for (s, &x) in support.iter_mut().zip(t) {
                        *s |= 1 << x;
                    }
                }
            }
            for (i, &v) in scope.iter().enumerate() {
                let v = v as usize;
                let narrowed = domains[v] & support[i];
                if narrowed == 0 {
                    return false;
                }
                if narrowed != domains[v] {
                    domains[v] = narrowed;
                    for &other in &self.incident[v] {
                        if other != k && !queued[other] {
                            queued[other] = true;
                            queue.push(other);
                        }
                    }
                }
            }
        }
        true
    }
}
