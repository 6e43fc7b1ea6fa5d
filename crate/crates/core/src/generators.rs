//! Girth-6 bipartite graphs from projective planes and the shrinking
//! instances built from them, with explicit per-edge witnesses.

use std::collections::VecDeque;

use serde::Serialize;

use crate::catalog;
use crate::error::{arg, NrdError, Result};
use crate::instance::{PartiteHypergraph, WitnessSource};
use crate::predicate::ConditionalPredicate;

/// Incidence graph of the projective plane `PG(2, q)` for prime `q`.
#[derive(Clone, Debug)]
pub struct Girth6Graph {
    pub q: usize,
    /// Normalized homogeneous coordinates (first nonzero entry is 1).
    pub points: Vec<[usize; 3]>,
    pub lines: Vec<[usize; 3]>,
    /// `(point, line)` incidences in lexicographic order.
    pub edges: Vec<(u32, u32)>,
    pub girth: usize,
}

impl Girth6Graph {
    pub fn num_vertices(&self) -> usize {
        self.points.len() + self.lines.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// The graph as a 2-partite instance with parts `p0…` and `l0…`.
    pub fn to_partite(&self) -> Result<PartiteHypergraph> {
        self.to_partite_with_prefix("p", "l")
    }

    fn to_partite_with_prefix(&self, left: &str, right: &str) -> Result<PartiteHypergraph> {
        let parts = vec![
            (0..self.points.len()).map(|i| format!("{left}{i}")).collect(),
            (0..self.lines.len()).map(|i| format!("{right}{i}")).collect(),
        ];
        PartiteHypergraph::from_local(parts, self.edges.iter().map(|&(p, l)| vec![p, l]).collect())
    }

    /// Edge list `p<i> l<j>`, one incidence per line.
    pub fn edge_list(&self) -> String {
        self.edges.iter().map(|(p, l)| format!("p{p} l{l}\n")).collect()
    }
}

pub fn is_prime(q: usize) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| !q.is_multiple_of(d))
}

fn projective_points(q: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::with_capacity(q * q + q + 1);
    for a in 0..q {
        for b in 0..q {
            out.push([1, a, b]);
        }
    }
    for b in 0..q {
        out.push([0, 1, b]);
    }
    out.push([0, 0, 1]);
    out.sort_unstable();
    out
}

/// Builds `PG(2, q)` and checks girth ≥ 6 by breadth-first search.
pub fn gen_girth6(q: usize) -> Result<Girth6Graph> {
    if !is_prime(q) {
        return arg(format!("q = {q} is not prime"));
    }
    let points = projective_points(q);
    let lines = points.clone();
    let mut edges = Vec::with_capacity((q + 1) * points.len());
    for (i, p) in points.iter().enumerate() {
        for (j, l) in lines.iter().enumerate() {
            if (p[0] * l[0] + p[1] * l[1] + p[2] * l[2]) % q == 0 {
                edges.push((i as u32, j as u32));
            }
        }
    }
    let n = points.len();
    let girth = girth(2 * n, edges.iter().map(|&(p, l)| (p as usize, n + l as usize)))
        .ok_or_else(|| NrdError::Internal("incidence graph is acyclic".into()))?;
    if girth < 6 {
        return Err(NrdError::Internal(format!("incidence graph of PG(2,{q}) has girth {girth}")));
    }
    Ok(Girth6Graph { q, points, lines, edges, girth })
}

fn adjacency(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for (a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    adj
}

/// Length of a shortest cycle of the simple undirected graph, or `None` if acyclic.
pub fn girth(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Option<usize> {
    let adj = adjacency(n, edges);
    let mut best: Option<usize> = None;
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    for s in 0..n {
        dist.fill(usize::MAX);
        dist[s] = 0;
        parent[s] = usize::MAX;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &w in &adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    queue.push_back(w);
                } else if parent[u] != w {
                    let len = dist[u] + dist[w] + 1;
                    best = Some(best.map_or(len, |b| b.min(len)));
                }
            }
        }
    }
    best
}

/// Girth of a 2-partite instance read as a bipartite graph.
pub fn partite_girth(g: &PartiteHypergraph) -> Result<Option<usize>> {
    if g.arity() != 2 {
        return arg("girth needs a 2-partite instance");
    }
    Ok(girth(g.num_vertices(), g.edges().iter().map(|e| (e[0] as usize, e[1] as usize))))
}

/// Witness for `C₆* | C₆` excluding `edge` of a bipartite graph: vertices at
/// distance 0, 1 and ≥ 2 from the endpoints get 0, 1 and 2. Every other edge
/// lands in `C₆*` whenever the girth is at least 6; the result is checked.
pub fn girth6_witness(g: &PartiteHypergraph, edge: usize) -> Result<Vec<u8>> {
    if g.arity() != 2 {
        return arg("girth-6 witnesses need a 2-partite instance");
    }
    let Some(excluded) = g.edges().get(edge) else {
        return arg(format!("edge {edge} out of range"));
    };
    let adj = adjacency(g.num_vertices(), g.edges().iter().map(|e| (e[0] as usize, e[1] as usize)));
    let mut dist = vec![usize::MAX; g.num_vertices()];
    let mut queue = VecDeque::new();
    for &v in excluded {
        dist[v as usize] = 0;
        queue.push_back(v as usize);
    }
    while let Some(u) = queue.pop_front() {
        if dist[u] >= 2 {
            continue;
        }
        for &w in &adj[u] {
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    let witness: Vec<u8> = dist.iter().map(|&d| d.min(2) as u8).collect();
    for (k, e) in g.edges().iter().enumerate() {
        let pair = (witness[e[0] as usize], witness[e[1] as usize]);
        let ok = if k == edge { pair == (0, 0) } else { matches!(pair, (0, 1) | (1, 0) | (1, 2) | (2, 1) | (2, 2)) };
        if !ok {
            return Err(NrdError::Internal(format!("edge {k} receives {pair:?}; the graph has a cycle shorter than 6")));
        }
    }
    Ok(witness)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShrinkingKind {
    /// `E₁₂ × V₃` against `R₁ | S₁`.
    R1S1,
    /// `E₁₂ × E₃₄` against `R₂ | S₂`.
    R2S2,
}

/// A shrinking instance together with the witnesses from its construction.
#[derive(Clone, Debug)]
pub struct ShrinkingInstance {
    pub kind: ShrinkingKind,
    pub q: usize,
    pub hypergraph: PartiteHypergraph,
    /// Number of vertices in one copy of the girth-6 graph.
    graph_vertices: usize,
    /// Girth-6 witness per graph edge, over the graph's vertices.
    graph_witnesses: Vec<Vec<u8>>,
    /// Edges per row of the product (`|V₃|` or `|E₃₄|`).
    row: usize,
}

impl ShrinkingInstance {
    pub fn predicate(&self) -> Result<ConditionalPredicate> {
        match self.kind {
            ShrinkingKind::R1S1 => catalog::r1_s1(),
            ShrinkingKind::R2S2 => catalog::r2_s2(),
        }
    }

    /// Keeps the first `m` edges; the witnesses of kept edges are unchanged.
    pub fn truncate_to(&self, m: usize) -> ShrinkingInstance {
        ShrinkingInstance { hypergraph: self.hypergraph.truncate_edges(m), ..self.clone() }
    }

    pub fn num_edges(&self) -> usize {
        self.hypergraph.num_edges()
    }
}

impl WitnessSource for ShrinkingInstance {
    fn fill_witness(&self, edge: usize, out: &mut [u8]) {
        let n = self.graph_vertices;
        let (a, b) = (edge / self.row, edge % self.row);
        out[..n].copy_from_slice(&self.graph_witnesses[a]);
        match self.kind {
            ShrinkingKind::R1S1 => {
                for (c, v) in out[n..].iter_mut().enumerate() {
                    *v = u8::from(c != b);
                }
            }
            ShrinkingKind::R2S2 => out[n..].copy_from_slice(&self.graph_witnesses[b]),
        }
    }
}

fn graph_witnesses(g: &Girth6Graph) -> Result<Vec<Vec<u8>>> {
    let h = g.to_partite()?;
    (0..h.num_edges()).map(|e| girth6_witness(&h, e)).collect()
}

/// `E = E₁₂ × V₃` with `E₁₂` the incidences of `PG(2, q)` and `|V₃| = n3`.
/// Edges are ordered by graph edge, then by third vertex.
pub fn build_r1s1_instance(q: usize, n3: usize) -> Result<ShrinkingInstance> {
    if n3 == 0 {
        return arg("the third part needs at least one vertex");
    }
    let g = gen_girth6(q)?;
    let n = g.points.len();
    let parts = vec![
        (0..n).map(|i| format!("p{i}")).collect(),
        (0..n).map(|i| format!("l{i}")).collect(),
        (0..n3).map(|i| format!("z{i}")).collect(),
    ];
    let mut edges = Vec::with_capacity(g.num_edges() * n3);
    for &(p, l) in &g.edges {
        for c in 0..n3 as u32 {
            edges.push(vec![p, l, c]);
        }
    }
    Ok(ShrinkingInstance {
        kind: ShrinkingKind::R1S1,
        q,
        hypergraph: PartiteHypergraph::from_local(parts, edges)?,
        graph_vertices: 2 * n,
        graph_witnesses: graph_witnesses(&g)?,
        row: n3,
    })
}

/// `E = E₁₂ × E₃₄` from two copies of the incidence graph of `PG(2, q)`.
pub fn build_r2s2_instance(q: usize) -> Result<ShrinkingInstance> {
    let g = gen_girth6(q)?;
    let n = g.points.len();
    let labels = |prefix: &str| (0..n).map(|i| format!("{prefix}{i}")).collect::<Vec<_>>();
    let parts = vec![labels("p"), labels("l"), labels("p'"), labels("l'")];
    let mut edges = Vec::with_capacity(g.num_edges() * g.num_edges());
    for &(p, l) in &g.edges {
        for &(p2, l2) in &g.edges {
            edges.push(vec![p, l, p2, l2]);
        }
    }
    Ok(ShrinkingInstance {
        kind: ShrinkingKind::R2S2,
        q,
        hypergraph: PartiteHypergraph::from_local(parts, edges)?,
        graph_vertices: 2 * n,
        graph_witnesses: graph_witnesses(&g)?,
        row: g.num_edges(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{check_witnesses, shrinking_report};

    #[test]
    fn fano_and_order_three_planes() {
        let g = gen_girth6(2).unwrap();
        assert_eq!((g.num_vertices(), g.num_edges(), g.girth), (14, 21, 6));
        let g = gen_girth6(3).unwrap();
        assert_eq!((g.num_vertices(), g.num_edges(), g.girth), (26, 52, 6));
        assert!(gen_girth6(4).is_err());
    }

    #[test]
    fn parameter_identities() {
        for q in [2, 3, 5, 7] {
            let g = gen_girth6(q).unwrap();
            let n = q * q + q + 1;
            assert_eq!(g.num_vertices(), 2 * n);
            assert_eq!(g.num_edges(), (q + 1) * n);
            let mut degree = vec![0; n];
            for &(p, _) in &g.edges {
                degree[p as usize] += 1;
            }
            assert!(degree.iter().all(|&d| d == q + 1));
        }
    }

    #[test]
    fn girth_of_small_graphs() {
        assert_eq!(girth(4, [(0, 1), (1, 2), (2, 3), (3, 0)]), Some(4));
        assert_eq!(girth(3, [(0, 1), (1, 2)]), None);
    }

    #[test]
    fn four_cycle_has_no_girth6_witness() {
        let h = PartiteHypergraph::from_local(
            vec![vec!["a".into(), "b".into()], vec!["c".into(), "d".into()]],
            vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]],
        )
        .unwrap();
        assert!(girth6_witness(&h, 0).is_err());
    }

    #[test]
    fn single_edge_witness_is_zero_zero() {
        let h = PartiteHypergraph::from_local(vec![vec!["a".into()], vec!["b".into()]], vec![vec![0, 0]]).unwrap();
        assert_eq!(girth6_witness(&h, 0).unwrap(), vec![0, 0]);
    }

    #[test]
    fn r1s1_counts_and_witnesses() {
        let inst = build_r1s1_instance(2, 7).unwrap();
        assert_eq!(inst.num_edges(), 147);
        let report = shrinking_report(&inst.hypergraph, Some(&[vec![0, 1], vec![0, 2]])).unwrap();
        assert_eq!(report.entries[0].projected, 21);
        assert!(report.entries[1].projected <= 49);
        let pq = inst.predicate().unwrap();
        assert!(check_witnesses(inst.hypergraph.instance(), &pq, &inst).unwrap().ok());
    }

    #[test]
    fn r2s2_counts_and_witnesses() {
        let inst = build_r2s2_instance(2).unwrap();
        assert_eq!(inst.num_edges(), 441);
        let report = shrinking_report(&inst.hypergraph, None).unwrap();
        for e in report.entries.iter().filter(|e| e.set.len() == 3) {
            assert_eq!(e.projected, 147);
        }
        let pq = inst.predicate().unwrap();
        assert!(check_witnesses(inst.hypergraph.instance(), &pq, &inst).unwrap().ok());
    }

    #[test]
    fn truncation_keeps_witnesses_valid() {
        let inst = build_r1s1_instance(2, 3).unwrap().truncate_to(40);
        assert_eq!(inst.num_edges(), 40);
        let pq = inst.predicate().unwrap();
        assert!(check_witnesses(inst.hypergraph.instance(), &pq, &inst).unwrap().ok());
    }
}
