//! Constraint instances: hypergraphs whose edges are constraint scopes.

mod exact;
mod ops;
mod verify;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{arg, NrdError, Result};

pub use exact::{nrd_exact, nrd_exact_exhaustive, ExactOptions, ExactResult};
pub use ops::{
    project_instance, projection_hypergraph, shrinking_report, to_r_partite, ProjectionHypergraph, RPartiteResult,
    ShrinkEntry, ShrinkingReport,
};
pub use verify::{check_witnesses, verify_nrd, CheckFailure, CheckOutcome, FindOptions, FindOutcome};

/// A hypergraph `(V, E ⊆ V^r)` with labelled vertices and unique edges.
/// Vertices are identified by dense ids `0..labels.len()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    labels: Vec<String>,
    arity: usize,
    edges: Vec<Vec<u32>>,
}

impl Instance {
    pub fn new(labels: Vec<String>, arity: usize, edges: Vec<Vec<u32>>) -> Result<Self> {
        if arity == 0 {
            return arg("arity must be positive");
        }
        let unique: BTreeSet<&String> = labels.iter().collect();
        if unique.len() != labels.len() {
            return arg("vertex labels must be unique");
        }
        let n = labels.len() as u32;
        let mut seen = BTreeSet::new();
        for e in &edges {
            if e.len() != arity {
                return arg(format!("edge of length {} in an arity-{arity} instance", e.len()));
            }
            if e.iter().any(|&v| v >= n) {
                return arg("edge refers to a vertex outside the instance");
            }
            if !seen.insert(e.as_slice()) {
                return arg(format!("duplicate edge {:?}", e.iter().map(|&v| &labels[v as usize]).collect::<Vec<_>>()));
            }
        }
        Ok(Instance { labels, arity, edges })
    }

    /// Builds an instance on vertices `0..n` labelled by their index.
    pub fn on_vertices(n: usize, arity: usize, edges: Vec<Vec<u32>>) -> Result<Self> {
        Instance::new((0..n).map(|i| i.to_string()).collect(), arity, edges)
    }

    /// Builds an instance from labelled edges; vertices are created in order of first appearance.
    pub fn from_labelled_edges(arity: usize, edges: &[Vec<String>]) -> Result<Self> {
        let mut ids: BTreeMap<String, u32> = BTreeMap::new();
        let mut labels = Vec::new();
        let edges = edges
            .iter()
            .map(|e| {
                e.iter()
                    .map(|l| {
                        *ids.entry(l.clone()).or_insert_with(|| {
                            labels.push(l.clone());
                            labels.len() as u32 - 1
                        })
                    })
                    .collect()
            })
            .collect();
        Instance::new(labels, arity, edges)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn num_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn edges(&self) -> &[Vec<u32>] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_id(&self, label: &str) -> Option<u32> {
        self.labels.iter().position(|l| l == label).map(|i| i as u32)
    }

    /// The sub-instance on the listed edges (all vertices kept).
    pub fn with_edges(&self, keep: &[usize]) -> Result<Instance> {
        let edges = keep.iter().map(|&i| self.edges[i].clone()).collect();
        Instance::new(self.labels.clone(), self.arity, edges)
    }

    pub fn to_json(&self) -> InstanceJson {
        InstanceJson {
            parts: None,
            vertices: Some(self.labels.clone()),
            edges: self.labelled_edges(),
        }
    }

    fn labelled_edges(&self) -> Vec<Vec<String>> {
        self.edges.iter().map(|e| e.iter().map(|&v| self.labels[v as usize].clone()).collect()).collect()
    }
}

/// An `r`-partite hypergraph: vertex ids are laid out part by part, and
/// coordinate `i` of every edge lies in part `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartiteHypergraph {
    instance: Instance,
    offsets: Vec<u32>,
}

impl PartiteHypergraph {
    pub fn new(parts: Vec<Vec<String>>, edges: Vec<Vec<u32>>) -> Result<Self> {
        let arity = parts.len();
        let mut offsets = Vec::with_capacity(arity + 1);
        let mut labels = Vec::new();
        offsets.push(0);
        for part in parts {
            labels.extend(part);
            offsets.push(labels.len() as u32);
        }
        for e in &edges {
            for (i, &v) in e.iter().enumerate().take(arity) {
                if v < offsets[i] || v >= offsets[i + 1] {
                    return arg(format!("edge coordinate {} is outside its part", i + 1));
                }
            }
        }
        let instance = Instance::new(labels, arity, edges)?;
        Ok(PartiteHypergraph { instance, offsets })
    }

    /// Builds from per-part local indices: `edges[k][i]` indexes into `parts[i]`.
    pub fn from_local(parts: Vec<Vec<String>>, local_edges: Vec<Vec<u32>>) -> Result<Self> {
        let mut offsets = vec![0u32];
        for p in &parts {
            offsets.push(offsets.last().unwrap() + p.len() as u32);
        }
        let edges = local_edges
            .into_iter()
            .map(|e| e.iter().enumerate().map(|(i, &v)| offsets.get(i).copied().unwrap_or(0) + v).collect())
            .collect();
        PartiteHypergraph::new(parts, edges)
    }

    pub fn from_json(json: &InstanceJson) -> Result<Self> {
        let parts = json
            .parts
            .clone()
            .ok_or_else(|| NrdError::Parse("partite instance JSON needs a \"parts\" field".into()))?;
        let mut ids = BTreeMap::new();
        for (i, part) in parts.iter().enumerate() {
            for (k, label) in part.iter().enumerate() {
                if ids.insert(label.clone(), (i, k)).is_some() {
                    return arg(format!("vertex {label:?} listed twice"));
                }
            }
        }
        let local = json
            .edges
            .iter()
            .map(|e| {
                e.iter()
                    .enumerate()
                    .map(|(i, l)| match ids.get(l) {
                        Some(&(p, k)) if p == i => Ok(k as u32),
                        Some(_) => arg(format!("vertex {l:?} used outside its part")),
                        None => arg(format!("unknown vertex {l:?}")),
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        PartiteHypergraph::from_local(parts, local)
    }

    pub fn to_json(&self) -> InstanceJson {
        InstanceJson {
            parts: Some((0..self.arity()).map(|i| self.part_labels(i).to_vec()).collect()),
            vertices: None,
            edges: self.instance.labelled_edges(),
        }
    }

    pub fn instance(&self) -> &Instance {
        &self.instance
    }

    pub fn into_instance(self) -> Instance {
        self.instance
    }

    pub fn arity(&self) -> usize {
        self.instance.arity
    }

    pub fn edges(&self) -> &[Vec<u32>] {
        &self.instance.edges
    }

    pub fn num_edges(&self) -> usize {
        self.instance.edges.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.instance.labels.len()
    }

    pub fn part_range(&self, i: usize) -> std::ops::Range<u32> {
        self.offsets[i]..self.offsets[i + 1]
    }

    pub fn part_size(&self, i: usize) -> usize {
        (self.offsets[i + 1] - self.offsets[i]) as usize
    }

    pub fn part_sizes(&self) -> Vec<usize> {
        (0..self.arity()).map(|i| self.part_size(i)).collect()
    }

    pub fn part_labels(&self, i: usize) -> &[String] {
        &self.instance.labels[self.offsets[i] as usize..self.offsets[i + 1] as usize]
    }

    /// Keeps the first `m` edges (all vertices kept).
    pub fn truncate_edges(&self, m: usize) -> PartiteHypergraph {
        let mut h = self.clone();
        h.instance.edges.truncate(m);
        h
    }
}

/// JSON form shared by general and partite instances.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parts: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<String>>,
    pub edges: Vec<Vec<String>>,
}

impl InstanceJson {
    /// A general instance; partite JSON is accepted and flattened.
    pub fn to_instance(&self) -> Result<Instance> {
        if self.parts.is_some() {
            return Ok(PartiteHypergraph::from_json(self)?.into_instance());
        }
        let arity = self.edges.first().map(Vec::len).unwrap_or(0);
        match &self.vertices {
            None => Instance::from_labelled_edges(arity, &self.edges),
            Some(vs) => {
                let ids: BTreeMap<&str, u32> = vs.iter().enumerate().map(|(i, l)| (l.as_str(), i as u32)).collect();
                let edges = self
                    .edges
                    .iter()
                    .map(|e| {
                        e.iter()
                            .map(|l| ids.get(l.as_str()).copied().ok_or_else(|| NrdError::Argument(format!("unknown vertex {l:?}"))))
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                Instance::new(vs.clone(), arity, edges)
            }
        }
    }
}

/// Produces the witness assignment `ψ_e` for edge `e` on demand.
pub trait WitnessSource: Sync {
    /// Writes `ψ_edge(v)` into `out[v]` for every vertex `v`.
    fn fill_witness(&self, edge: usize, out: &mut [u8]);
}

/// Explicit per-edge witness assignments.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct NrdCertificate {
    pub witnesses: Vec<Vec<u8>>,
}

impl WitnessSource for NrdCertificate {
    fn fill_witness(&self, edge: usize, out: &mut [u8]) {
        out.copy_from_slice(&self.witnesses[edge]);
    }
}

impl NrdCertificate {
    /// JSON map from edge index to `{vertex label: value}`.
    pub fn to_json(&self, instance: &Instance) -> BTreeMap<usize, BTreeMap<String, u8>> {
        self.witnesses
            .iter()
            .enumerate()
            .map(|(e, w)| (e, instance.labels().iter().cloned().zip(w.iter().copied()).collect()))
            .collect()
    }

    pub fn from_json(instance: &Instance, json: &BTreeMap<usize, BTreeMap<String, u8>>) -> Result<Self> {
        let mut witnesses = Vec::with_capacity(instance.num_edges());
        for e in 0..instance.num_edges() {
            let map = json.get(&e).ok_or_else(|| NrdError::Argument(format!("no witness for edge {e}")))?;
            let w = instance
                .labels()
                .iter()
                .map(|l| map.get(l).copied().ok_or_else(|| NrdError::Argument(format!("witness {e} misses vertex {l:?}"))))
                .collect::<Result<Vec<_>>>()?;
            witnesses.push(w);
        }
        Ok(NrdCertificate { witnesses })
    }
}

/// Restricts a witness source to a subset of edges (witness of new edge `k`
/// is the witness of old edge `keep[k]`).
pub struct SubsetWitness<'a> {
    pub inner: &'a dyn WitnessSource,
    pub keep: &'a [usize],
}

impl WitnessSource for SubsetWitness<'_> {
    fn fill_witness(&self, edge: usize, out: &mut [u8]) {
        self.inner.fill_witness(self.keep[edge], out);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partite_rejects_misplaced_vertices() {
        let parts = vec![vec!["a".into()], vec!["b".into()]];
        assert!(PartiteHypergraph::new(parts.clone(), vec![vec![0, 1]]).is_ok());
        assert!(PartiteHypergraph::new(parts, vec![vec![1, 0]]).is_err());
    }

    #[test]
    fn duplicate_edges_rejected() {
        assert!(Instance::on_vertices(2, 2, vec![vec![0, 1], vec![0, 1]]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let h = PartiteHypergraph::from_local(
            vec![vec!["a1".into(), "a2".into()], vec!["b1".into()]],
            vec![vec![0, 0], vec![1, 0]],
        )
        .unwrap();
        let json = serde_json::to_string(&h.to_json()).unwrap();
        let back: InstanceJson = serde_json::from_str(&json).unwrap();
        assert_eq!(PartiteHypergraph::from_json(&back).unwrap(), h);
    }
}
