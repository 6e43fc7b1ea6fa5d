//! Witness-transferring reductions, exponent fits, the conditional-to-plain
//! construction, slicing, and the coordinate-permutation audit.

use std::collections::BTreeMap;

use log::info;
use serde::Serialize;

use crate::catalog;
use crate::error::{arg, NrdError, Result};
use crate::generators::{build_r1s1_instance, build_r2s2_instance, ShrinkingInstance, ShrinkingKind};
use crate::instance::{
    check_witnesses, projection_hypergraph, shrinking_report, CheckOutcome, Instance, PartiteHypergraph,
    ProjectionHypergraph, WitnessSource,
};
use crate::predicate::{ConditionalPredicate, Predicate};
use crate::substructure::{next_permutation, witnessing_maps, SubstructureCertificate, WitnessingMap};
use crate::tables::{self, PermutationRow};

/// `φ_e(t) = g_j(ψ_e(t))` for a vertex `t` of part `j` of the projection hypergraph.
pub struct TransferredWitness<'a> {
    source: &'a dyn WitnessSource,
    source_vertices: usize,
    projection: &'a ProjectionHypergraph,
    maps: &'a [WitnessingMap],
}

impl<'a> TransferredWitness<'a> {
    pub fn new(
        source: &'a dyn WitnessSource,
        source_vertices: usize,
        projection: &'a ProjectionHypergraph,
        maps: &'a [WitnessingMap],
    ) -> Self {
        TransferredWitness { source, source_vertices, projection, maps }
    }
}

impl WitnessSource for TransferredWitness<'_> {
    fn fill_witness(&self, edge: usize, out: &mut [u8]) {
        let mut psi = vec![0u8; self.source_vertices];
        self.source.fill_witness(self.projection.edge_source[edge], &mut psi);
        for (v, slot) in out.iter_mut().enumerate() {
            let sources = &self.projection.vertex_sources[v];
            *slot = self.maps[self.projection.vertex_part[v]].eval_by(|k| psi[sources[k] as usize]);
        }
    }
}

/// Projection hypergraph of a reduction with its verified transferred witnesses.
#[derive(Debug)]
pub struct Reduction {
    pub projection: ProjectionHypergraph,
    pub maps: Vec<WitnessingMap>,
    pub check: CheckOutcome,
}

impl Reduction {
    pub fn hypergraph(&self) -> &PartiteHypergraph {
        &self.projection.hypergraph
    }

    /// Witness source over the reduced instance, given the source witnesses again.
    pub fn witnesses<'a>(&'a self, source: &'a dyn WitnessSource, source_vertices: usize) -> TransferredWitness<'a> {
        TransferredWitness::new(source, source_vertices, &self.projection, &self.maps)
    }
}

/// Builds `pr_I H` and transfers the witnesses of `h` through the witnessing
/// maps of `cert`; the transferred witnesses are checked against the target.
pub fn apply_reduction(h: &PartiteHypergraph, witnesses: &dyn WitnessSource, cert: &SubstructureCertificate) -> Result<Reduction> {
    if h.arity() != cert.source.arity() {
        return arg(format!("instance arity {} does not match certificate source arity {}", h.arity(), cert.source.arity()));
    }
    let maps = witnessing_maps(cert)?;
    let projection = projection_hypergraph(h, &cert.family)?;
    let transferred = TransferredWitness::new(witnesses, h.num_vertices(), &projection, &maps);
    let check = check_witnesses(projection.hypergraph.instance(), &cert.target, &transferred)?;
    if let Some(f) = &check.failure {
        return Err(NrdError::Internal(format!(
            "transferred witness of edge {} fails on edge {} ({:?}); the source witnesses or certificate are invalid",
            f.edge, f.offending, f.status
        )));
    }
    info!(
        "reduced {} edges onto {} vertices in {} parts",
        projection.hypergraph.num_edges(),
        projection.hypergraph.num_vertices(),
        projection.hypergraph.part_sizes().len()
    );
    Ok(Reduction { projection, maps, check })
}

/// Ordinary least squares of `ln y` on `ln x`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PowerFit {
    pub slope: f64,
    pub intercept: f64,
    /// `ln y − (slope · ln x + intercept)` per point.
    pub residuals: Vec<f64>,
}

pub fn power_law_fit(points: &[(f64, f64)]) -> Result<PowerFit> {
    if points.len() < 2 {
        return arg("a fit needs at least two points");
    }
    if points.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0)) {
        return arg("fit points must be positive");
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let k = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return arg("fit needs at least two distinct x values");
    }
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals = logs.iter().map(|&(x, y)| y - (slope * x + intercept)).collect();
    Ok(PowerFit { slope, intercept, residuals })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExponentFit {
    /// Fitted `m ≈ C · n^exponent`.
    pub exponent: f64,
    /// `ε̂ = 1 − 1/exponent`.
    pub epsilon: f64,
    pub intercept: f64,
    pub residuals: Vec<f64>,
    /// Largest consecutive ratio `m_{i+1} / m_i`.
    pub max_ratio: f64,
}

/// Fits `ln m` against `ln n` over `(n_i, m_i)` with increasing `m_i`.
pub fn fit_exponent(runs: &[(f64, f64)]) -> Result<ExponentFit> {
    if runs.windows(2).any(|w| w[1].1 <= w[0].1) {
        return arg("edge counts must be increasing");
    }
    let fit = power_law_fit(runs)?;
    let max_ratio = runs.windows(2).map(|w| w[1].1 / w[0].1).fold(f64::NAN, f64::max);
    Ok(ExponentFit {
        exponent: fit.slope,
        epsilon: 1.0 - 1.0 / fit.slope,
        intercept: fit.intercept,
        residuals: fit.residuals,
        max_ratio,
    })
}

/// Base `R` of `(P | Q) ⊠ (OR_r | {0,1}^r)` with the Boolean factor lifted to `D`.
pub fn conditional_to_plain(pq: &ConditionalPredicate) -> Result<Predicate> {
    if pq.domain() < 2 {
        return arg("the domain must contain 0 and 1");
    }
    let r = pq.arity();
    let or = catalog::or_k(r)?.with_domain(pq.domain())?;
    let cube = Predicate::full(2, r)?.with_domain(pq.domain())?;
    Ok(pq.box_product(&ConditionalPredicate::new(or, cube)?)?.base().clone())
}

/// The instance `E × (V′ choose r)` for the plain predicate of
/// [`conditional_to_plain`], with its witnesses.
pub struct PlainLbInstance<'a> {
    pub instance: Instance,
    pub subsets: Vec<Vec<u32>>,
    base_vertices: usize,
    source: &'a dyn WitnessSource,
}

impl PlainLbInstance<'_> {
    pub fn fresh_vertices(&self) -> usize {
        self.instance.num_vertices() - self.base_vertices
    }
}

impl WitnessSource for PlainLbInstance<'_> {
    fn fill_witness(&self, edge: usize, out: &mut [u8]) {
        let (a, s) = (edge / self.subsets.len(), edge % self.subsets.len());
        self.source.fill_witness(a, &mut out[..self.base_vertices]);
        out[self.base_vertices..].fill(1);
        for &v in &self.subsets[s] {
            out[self.base_vertices + v as usize] = 0;
        }
    }
}

/// Ascending `r`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, r: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur: Vec<u32> = (0..r as u32).collect();
    if r > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(i) = (0..r).rev().find(|&i| (cur[i] as usize) < n - r + i) else {
            return out;
        };
        cur[i] += 1;
        for k in i + 1..r {
            cur[k] = cur[k - 1] + 1;
        }
    }
}

/// Extends a non-redundant `P | Q` instance by `fresh` new vertices `w0…`:
/// each edge `e` becomes `e ++ s` for every ascending `r`-subset `s`.
pub fn build_plain_lb_instance<'a>(h: &Instance, witnesses: &'a dyn WitnessSource, fresh: usize) -> Result<PlainLbInstance<'a>> {
    let r = h.arity();
    if fresh < r {
        return arg(format!("need at least {r} fresh vertices, got {fresh}"));
    }
    let subsets = combinations(fresh, r);
    let base = h.num_vertices() as u32;
    let mut labels = h.labels().to_vec();
    labels.extend((0..fresh).map(|i| format!("w{i}")));
    let mut edges = Vec::with_capacity(h.num_edges() * subsets.len());
    for e in h.edges() {
        for s in &subsets {
            edges.push(e.iter().copied().chain(s.iter().map(|&v| base + v)).collect());
        }
    }
    Ok(PlainLbInstance {
        instance: Instance::new(labels, 2 * r, edges)?,
        subsets,
        base_vertices: h.num_vertices(),
        source: witnesses,
    })
}

/// Edges whose projection onto `coords` (0-indexed) is the vertex tuple `s`.
pub fn slice_by_projection(h: &Instance, coords: &[usize], s: &[u32]) -> Result<(Instance, Vec<usize>)> {
    let coords = crate::predicate::normalize_coords(coords, h.arity())?;
    if s.len() != coords.len() {
        return arg(format!("slice key has {} entries for {} coordinates", s.len(), coords.len()));
    }
    let keep: Vec<usize> = h
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| coords.iter().zip(s).all(|(&i, &v)| e[i] == v))
        .map(|(k, _)| k)
        .collect();
    Ok((h.with_edges(&keep)?, keep))
}

/// Sizes of all slices `E_s` over the projection onto `coords`.
pub fn slice_sizes(h: &Instance, coords: &[usize]) -> Result<BTreeMap<Vec<u32>, usize>> {
    let coords = crate::predicate::normalize_coords(coords, h.arity())?;
    let mut sizes = BTreeMap::new();
    for e in h.edges() {
        *sizes.entry(coords.iter().map(|&i| e[i]).collect()).or_insert(0) += 1;
    }
    Ok(sizes)
}

/// The largest slice (smallest key on ties) and its size.
pub fn argmax_slice(h: &Instance, coords: &[usize]) -> Result<Option<(Vec<u32>, usize)>> {
    let sizes = slice_sizes(h, coords)?;
    Ok(sizes.into_iter().fold(None, |best, (s, c)| match best {
        Some((_, b)) if b >= c => best,
        _ => Some((s, c)),
    }))
}

/// Outcome of checking one row of the BoolBCK coordinate-permutation table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PermutationAudit {
    pub dropped: usize,
    /// Whether the row is injective with values avoiding a common coordinate.
    pub bijection: bool,
    /// Dropped coordinates `t` for which the row carries `π_{[9]∖{t}}` onto `π_{[9]∖{dropped}}`
    /// for both BoolBCK and BoolBCK+.
    pub certifies: Vec<usize>,
    /// For rows that certify nothing: every replacement bijection found per candidate `t`.
    pub repairs: Vec<PermutationRepair>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PermutationRepair {
    pub from_dropped: usize,
    pub count: usize,
    /// 1-indexed images of the kept coordinates, in ascending order of the coordinate.
    pub first: Option<Vec<usize>>,
}

const PERMUTATION_ARITY: usize = 9;
const AUDIT_TARGETS: [usize; 2] = [1, 2];

fn kept(dropped: usize) -> Vec<usize> {
    (1..=PERMUTATION_ARITY).filter(|&j| j != dropped).collect()
}

/// Positional permutation for a row mapping `j ∈ J_i` to `σ(j) ∈ J_t`, if `σ` is a bijection onto `J_t`.
fn positional(dropped: usize, sigma: &[Option<usize>], from: usize) -> Option<Vec<usize>> {
    let target = kept(from);
    let mut perm = Vec::with_capacity(PERMUTATION_ARITY - 1);
    for j in kept(dropped) {
        let image = sigma[j - 1]?;
        perm.push(target.iter().position(|&t| t == image)?);
    }
    let mut seen = perm.clone();
    seen.sort_unstable();
    seen.dedup();
    (seen.len() == perm.len()).then_some(perm)
}

fn permutation_certifies(dropped: usize, from: usize, perm: &[usize], preds: &[Predicate]) -> Result<bool> {
    let to: Vec<usize> = kept(dropped).iter().map(|j| j - 1).collect();
    let src: Vec<usize> = kept(from).iter().map(|j| j - 1).collect();
    for p in preds {
        if p.project(&src)?.permute(perm)? != p.project(&to)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn audit_permutation_row(row: &PermutationRow) -> Result<PermutationAudit> {
    let preds = [catalog::predicate("BoolBCK")?, catalog::predicate("BoolBCK+")?];
    let mut certifies = Vec::new();
    let mut bijection = false;
    for t in AUDIT_TARGETS {
        if let Some(perm) = positional(row.dropped, &row.sigma, t) {
            bijection = true;
            if permutation_certifies(row.dropped, t, &perm, &preds)? {
                certifies.push(t);
            }
        }
    }
    let mut repairs = Vec::new();
    if certifies.is_empty() {
        for t in AUDIT_TARGETS {
            let target = kept(t);
            let mut perm: Vec<usize> = (0..PERMUTATION_ARITY - 1).collect();
            let (mut count, mut first) = (0, None);
            loop {
                if permutation_certifies(row.dropped, t, &perm, &preds)? {
                    count += 1;
                    first.get_or_insert_with(|| perm.iter().map(|&p| target[p]).collect());
                }
                if !next_permutation(&mut perm) {
                    break;
                }
            }
            repairs.push(PermutationRepair { from_dropped: t, count, first });
        }
    }
    Ok(PermutationAudit { dropped: row.dropped, bijection, certifies, repairs })
}

pub fn audit_coordinate_permutations() -> Result<Vec<PermutationAudit>> {
    tables::coordinate_permutations()?.iter().map(audit_permutation_row).collect()
}

/// Measured `(|E|, λ)` per construction size, with `λ` the minimum shrinking
/// factor over all coordinate sets of size `r − 1`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShrinkPoint {
    pub q: usize,
    pub edges: usize,
    pub lambda: f64,
}

/// Third-part size used for the `E₁₂ × V₃` family: `q + 1`, which balances
/// `|π_{{1,2}} E|` against the other two projections.
pub fn r1s1_third_part(q: usize) -> usize {
    q + 1
}

pub fn build_family_member(kind: ShrinkingKind, q: usize) -> Result<ShrinkingInstance> {
    match kind {
        ShrinkingKind::R1S1 => build_r1s1_instance(q, r1s1_third_part(q)),
        ShrinkingKind::R2S2 => build_r2s2_instance(q),
    }
}

pub fn shrink_point(inst: &ShrinkingInstance) -> Result<ShrinkPoint> {
    let r = inst.hypergraph.arity();
    let sets: Vec<Vec<usize>> = (0..r).map(|d| (0..r).filter(|&i| i != d).collect()).collect();
    let report = shrinking_report(&inst.hypergraph, Some(&sets))?;
    Ok(ShrinkPoint { q: inst.q, edges: report.edges, lambda: report.lambda })
}

/// Fits `λ ≈ C · |E|^ε` over the family.
pub fn fit_shrinking(points: &[ShrinkPoint]) -> Result<PowerFit> {
    power_law_fit(&points.iter().map(|p| (p.edges as f64, p.lambda)).collect::<Vec<_>>())
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelinePoint {
    pub q: usize,
    pub edges: usize,
    pub vertices: usize,
    pub verified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineRun {
    pub table: String,
    pub points: Vec<PipelinePoint>,
    pub fit: ExponentFit,
}

/// Builds the family for each `q`, reduces it through the bundled table and
/// fits the resulting `(vertices, edges)` points.
pub fn run_pipeline(kind: ShrinkingKind, table: &str, qs: &[usize]) -> Result<PipelineRun> {
    let cert = tables::table(table)?.certificate()?;
    let mut points = Vec::with_capacity(qs.len());
    for &q in qs {
        let inst = build_family_member(kind, q)?;
        let red = apply_reduction(&inst.hypergraph, &inst, &cert)?;
        points.push(PipelinePoint {
            q,
            edges: red.hypergraph().num_edges(),
            vertices: red.hypergraph().num_vertices(),
            verified: red.check.ok(),
        });
    }
    let fit = fit_exponent(&points.iter().map(|p| (p.vertices as f64, p.edges as f64)).collect::<Vec<_>>())?;
    Ok(PipelineRun { table: table.to_string(), points, fit })
}

/// Complete `k`-partite instance with `n` vertices per part; `ψ_e` is 0 on
/// `e` and 1 elsewhere, which witnesses non-redundancy for `OR_k`.
pub struct CompleteOrInstance {
    pub hypergraph: PartiteHypergraph,
}

impl CompleteOrInstance {
    pub fn new(k: usize, n: usize) -> Result<Self> {
        let parts: Vec<Vec<String>> = (0..k).map(|i| (0..n).map(|v| format!("v{}_{v}", i + 1)).collect()).collect();
        let edges = (0..n.pow(k as u32))
            .map(|mut code| {
                (0..k)
                    .map(|_| {
                        let v = (code % n) as u32;
                        code /= n;
                        v
                    })
                    .rev()
                    .collect()
            })
            .collect();
        Ok(CompleteOrInstance { hypergraph: PartiteHypergraph::from_local(parts, edges)? })
    }
}

impl WitnessSource for CompleteOrInstance {
    fn fill_witness(&self, edge: usize, out: &mut [u8]) {
        out.fill(1);
        for &v in &self.hypergraph.edges()[edge] {
            out[v as usize] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{verify_nrd, FindOptions, NrdCertificate};

    #[test]
    fn exact_power_law_recovers_exponent() {
        let runs: Vec<(f64, f64)> = [10.0f64, 20.0, 40.0, 80.0].iter().map(|&m: &f64| (m.powf(5.0 / 6.0), m)).collect();
        let fit = fit_exponent(&runs).unwrap();
        assert!((fit.exponent - 1.2).abs() < 1e-9);
        assert!((fit.epsilon - 1.0 / 6.0).abs() < 1e-9);
        assert!(fit_exponent(&runs[..1]).is_err());
    }

    #[test]
    fn c6_lifts_to_twenty_three_tuples() {
        let r = conditional_to_plain(&catalog::c6().unwrap()).unwrap();
        assert_eq!((r.arity(), r.len()), (4, 23));
    }

    #[test]
    fn unary_lift_matches_hand_expansion() {
        let pq = ConditionalPredicate::new(Predicate::new(2, 1, [vec![1]]).unwrap(), Predicate::full(2, 1).unwrap()).unwrap();
        let r = conditional_to_plain(&pq).unwrap();
        assert_eq!(r, Predicate::from_digits(2, &["01", "10", "11"]).unwrap());
    }

    #[test]
    fn combinations_are_lexicographic() {
        assert_eq!(combinations(4, 2), vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(combinations(2, 2), vec![vec![0, 1]]);
        assert!(combinations(1, 2).is_empty());
    }

    #[test]
    fn or3_reduces_to_three_lin() {
        let src = CompleteOrInstance::new(3, 2).unwrap();
        let cert = tables::table("or3-to-3lin").unwrap().certificate().unwrap();
        let red = apply_reduction(&src.hypergraph, &src, &cert).unwrap();
        assert_eq!(red.hypergraph().num_edges(), 8);
        assert_eq!(red.hypergraph().part_sizes(), vec![4, 4, 4]);
        assert!(verify_nrd(red.hypergraph().instance(), &cert.target, &FindOptions::default()).unwrap().is_certified());
    }

    #[test]
    fn plain_instance_witnesses_verify() {
        let pq = catalog::c6().unwrap();
        let h = PartiteHypergraph::from_local(
            vec![vec!["a".into(), "b".into()], vec!["c".into()]],
            vec![vec![0, 0], vec![1, 0]],
        )
        .unwrap();
        let FindOutcome::Certified(cert) = verify_nrd(h.instance(), &pq, &FindOptions::default()).unwrap() else {
            panic!("path is non-redundant");
        };
        let plain = build_plain_lb_instance(h.instance(), &cert, 3).unwrap();
        assert_eq!(plain.instance.num_edges(), 6);
        let r = ConditionalPredicate::plain(conditional_to_plain(&pq).unwrap()).unwrap();
        assert!(check_witnesses(&plain.instance, &r, &plain).unwrap().ok());
        let (s, size) = argmax_slice(&plain.instance, &[2, 3]).unwrap().unwrap();
        assert_eq!((s, size), (vec![3, 4], 2));
        let total: usize = slice_sizes(&plain.instance, &[2, 3]).unwrap().values().sum();
        assert_eq!(total, 6);
        let _: &NrdCertificate = &cert;
    }

    #[test]
    fn full_slice_is_single_edge() {
        let h = CompleteOrInstance::new(2, 2).unwrap();
        let e = h.hypergraph.edges()[2].clone();
        let (slice, keep) = slice_by_projection(h.hypergraph.instance(), &[0, 1], &e).unwrap();
        assert_eq!((slice.num_edges(), keep), (1, vec![2]));
    }

    use crate::instance::FindOutcome;
}
