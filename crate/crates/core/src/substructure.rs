//! Substructure certificates `Σ : Q₁ → Q₂` relative to an index family,
//! their SAT encoding, and the search over index families.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use log::{debug, info};
use serde::{Deserialize, Serialize};

use crate::error::{arg, NrdError, Result};
use crate::predicate::{
    check_permutation, encode_tuple, format_tuple, parse_digits, ConditionalPredicate, IndexFamily, Status, Tuple,
};
use crate::sat::{solve, Cnf, SolveResult, SolverConfig, VarTag};

/// `P₁ | Q₁` is an `I`-substructure of `P₂ | Q₂` via `sigma`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubstructureCertificate {
    pub source: ConditionalPredicate,
    pub target: ConditionalPredicate,
    pub family: IndexFamily,
    pub sigma: BTreeMap<Tuple, Tuple>,
}

#[derive(Serialize, Deserialize)]
struct CertificateJson {
    source: ConditionalPredicate,
    target: ConditionalPredicate,
    family: Vec<Vec<usize>>,
    sigma: BTreeMap<String, String>,
}

impl Serialize for SubstructureCertificate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CertificateJson {
            source: self.source.clone(),
            target: self.target.clone(),
            family: self.family.to_one_based(),
            sigma: self.sigma.iter().map(|(k, v)| (format_tuple(k), format_tuple(v))).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SubstructureCertificate {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = CertificateJson::deserialize(d)?;
        let sets: Vec<&[usize]> = j.family.iter().map(Vec::as_slice).collect();
        let family = IndexFamily::from_one_based(j.source.arity(), &sets).map_err(serde::de::Error::custom)?;
        let sigma = j
            .sigma
            .iter()
            .map(|(k, v)| Ok((parse_digits(k)?, parse_digits(v)?)))
            .collect::<Result<_>>()
            .map_err(serde::de::Error::custom)?;
        Ok(SubstructureCertificate { source: j.source, target: j.target, family, sigma })
    }
}

/// First violated condition of a certificate. Coordinates are 1-indexed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    /// `Σ(x)` is outside the target ambient.
    NotInAmbient { input: String, image: String },
    /// `Σ` does not carry `P₁` into `P₂` and `Q₁ ∖ P₁` into `Q₂ ∖ P₂`.
    Membership { input: String, image: String, input_status: Status, image_status: Status },
    /// `x, y` differ only in `coordinate ∉ I_output` but `Σ(x)_output ≠ Σ(y)_output`.
    Dependence { x: String, y: String, coordinate: usize, output: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotInAmbient { input, image } => write!(f, "Σ({input}) = {image} is outside the target ambient"),
            Violation::Membership { input, image, input_status, image_status } => {
                write!(f, "Σ({input}) = {image}: input is {input_status:?} but image is {image_status:?}")
            }
            Violation::Dependence { x, y, coordinate, output } => write!(
                f,
                "{x} and {y} differ only in coordinate {coordinate}, which output {output} may not read, yet their images differ there"
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verification {
    pub ok: bool,
    pub violation: Option<Violation>,
    /// Whether each output coordinate is a function of its index set on all
    /// of `Q₁` (stronger than the single-coordinate test when `Q₁` is not a product).
    pub fiber_functional: bool,
}

fn check_shapes(source: &ConditionalPredicate, target: &ConditionalPredicate, family: &IndexFamily) -> Result<()> {
    if family.source_arity() != source.arity() {
        return arg(format!("family is over arity {}, source has arity {}", family.source_arity(), source.arity()));
    }
    if family.len() != target.arity() {
        return arg(format!("family has {} sets, target has arity {}", family.len(), target.arity()));
    }
    Ok(())
}

/// Checks both certificate conditions exhaustively over `Q₁`.
pub fn verify_certificate(c: &SubstructureCertificate) -> Result<Verification> {
    check_shapes(&c.source, &c.target, &c.family)?;
    let q1 = c.source.ambient().tuples();
    if c.sigma.len() != q1.len() || q1.iter().any(|q| !c.sigma.contains_key(q)) {
        return arg("Σ must be defined exactly on the source ambient");
    }
    if c.sigma.values().any(|v| v.len() != c.target.arity()) {
        return arg("Σ images must have the target arity");
    }
    let fiber_functional = witnessing_maps(c).is_ok();
    let fail = |v| Ok(Verification { ok: false, violation: Some(v), fiber_functional });
    for q in q1 {
        let img = &c.sigma[q];
        let (si, so) = (c.source.status(q), c.target.status(img));
        if so == Status::Outside {
            return fail(Violation::NotInAmbient { input: format_tuple(q), image: format_tuple(img) });
        }
        if si != so {
            return fail(Violation::Membership {
                input: format_tuple(q),
                image: format_tuple(img),
                input_status: si,
                image_status: so,
            });
        }
    }
    for (a, x) in q1.iter().enumerate() {
        for y in &q1[a + 1..] {
            let Some(i) = single_difference(x, y) else { continue };
            for (j, set) in c.family.sets().iter().enumerate() {
                if !set.contains(&i) && c.sigma[x][j] != c.sigma[y][j] {
                    return fail(Violation::Dependence {
                        x: format_tuple(x),
                        y: format_tuple(y),
                        coordinate: i + 1,
                        output: j + 1,
                    });
                }
            }
        }
    }
    Ok(Verification { ok: true, violation: None, fiber_functional })
}

fn single_difference(x: &[u8], y: &[u8]) -> Option<usize> {
    let mut diff = None;
    for (i, (a, b)) in x.iter().zip(y).enumerate() {
        if a != b {
            if diff.is_some() {
                return None;
            }
            diff = Some(i);
        }
    }
    diff
}

/// `g_j : D₁^{I_j} → D₂`, tabulated on mixed-radix codes of the projected input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessingMap {
    pub set: Vec<usize>,
    domain: usize,
    table: Vec<Option<u8>>,
}

impl WitnessingMap {
    /// `g_j` applied to the full input tuple (reads only coordinates in the set).
    /// Inputs never produced by `Q₁` map to 0.
    #[inline]
    pub fn eval_full(&self, x: &[u8]) -> u8 {
        let code = self.set.iter().rev().fold(0usize, |acc, &i| acc * self.domain + x[i] as usize);
        self.table[code].unwrap_or(0)
    }

    /// `g_j` applied to `value(k)` for the `k`-th coordinate of the set.
    #[inline]
    pub fn eval_by(&self, mut value: impl FnMut(usize) -> u8) -> u8 {
        let code = (0..self.set.len()).rev().fold(0usize, |acc, k| acc * self.domain + value(k) as usize);
        self.table[code].unwrap_or(0)
    }

    /// `g_j` applied to the already projected values.
    #[inline]
    pub fn eval(&self, projected: &[u8]) -> u8 {
        self.table[encode_tuple(projected, self.domain)].unwrap_or(0)
    }
}

/// Derives the witnessing maps from `Σ`; fails when some `Σ(·)_j` is not
/// constant on the fibres of `π_{I_j}` over `Q₁`.
pub fn witnessing_maps(c: &SubstructureCertificate) -> Result<Vec<WitnessingMap>> {
    let d = c.source.domain();
    c.family
        .sets()
        .iter()
        .enumerate()
        .map(|(j, set)| {
            let size = crate::predicate::checked_pow(d, set.len()).ok_or_else(|| NrdError::Unsupported("index set too large".into()))?;
            let mut table = vec![None; size];
            for (x, img) in &c.sigma {
                let code = set.iter().rev().fold(0usize, |acc, &i| acc * d + x[i] as usize);
                match table[code] {
                    None => table[code] = Some(img[j]),
                    Some(v) if v == img[j] => {}
                    Some(_) => {
                        return arg(format!(
                            "output {} is not a function of coordinates {:?}",
                            j + 1,
                            set.iter().map(|i| i + 1).collect::<Vec<_>>()
                        ))
                    }
                }
            }
            Ok(WitnessingMap { set: set.clone(), domain: d, table })
        })
        .collect()
}

/// The SAT encoding of the certificate conditions for a fixed family.
#[derive(Clone, Debug)]
pub struct Encoding {
    pub cnf: Cnf,
    pub source: ConditionalPredicate,
    pub target: ConditionalPredicate,
    pub family: IndexFamily,
    q1: Vec<Tuple>,
    q2: Vec<Tuple>,
    d2: usize,
}

impl Encoding {
    fn x(&self, q: usize, j: usize, d: usize) -> i32 {
        (1 + (q * self.target.arity() + j) * self.d2 + d) as i32
    }

    fn y(&self, q: usize, q2: usize) -> i32 {
        (1 + self.q1.len() * self.target.arity() * self.d2 + q * self.q2.len() + q2) as i32
    }
}

/// Builds the CNF: value variables `x_{q,j,d}`, choice variables `y_{q,q′}`,
/// equality clauses for the dependence condition, channelling clauses,
/// unit clauses forbidding membership mismatches, one at-least-one clause
/// per `q`, and at-most-one-value clauses per `(q, j)`.
pub fn encode(source: &ConditionalPredicate, target: &ConditionalPredicate, family: &IndexFamily) -> Result<Encoding> {
    check_shapes(source, target, family)?;
    let q1 = source.ambient().tuples().to_vec();
    let q2 = target.ambient().tuples().to_vec();
    let r2 = target.arity();
    let d2 = target.domain();
    let mut cnf = Cnf::new();
    for q in 0..q1.len() {
        for j in 0..r2 {
            for d in 0..d2 {
                cnf.add_var(VarTag::X { q, j, d: d as u8 });
            }
        }
    }
    for q in 0..q1.len() {
        for q2i in 0..q2.len() {
            cnf.add_var(VarTag::Y { q, q2: q2i });
        }
    }
    let mut enc = Encoding { cnf, source: source.clone(), target: target.clone(), family: family.clone(), q1, q2, d2 };
    let mut clauses: Vec<Vec<i32>> = Vec::new();
    for (a, x) in enc.q1.iter().enumerate() {
        for (b, y) in enc.q1.iter().enumerate().skip(a + 1) {
            let Some(i) = single_difference(x, y) else { continue };
            for (j, set) in family.sets().iter().enumerate() {
                if set.contains(&i) {
                    continue;
                }
                for d in 0..d2 {
                    clauses.push(vec![-enc.x(a, j, d), enc.x(b, j, d)]);
                    clauses.push(vec![enc.x(a, j, d), -enc.x(b, j, d)]);
                }
            }
        }
    }
    for (a, x) in enc.q1.iter().enumerate() {
        let in_p1 = source.base().contains(x);
        for (b, t) in enc.q2.iter().enumerate() {
            let y = enc.y(a, b);
            if in_p1 != target.base().contains(t) {
                clauses.push(vec![-y]);
                continue;
            }
            for (j, &tv) in t.iter().enumerate() {
                for d in 0..d2 {
                    let lit = enc.x(a, j, d);
                    clauses.push(vec![-y, if d == tv as usize { lit } else { -lit }]);
                }
            }
        }
        clauses.push((0..enc.q2.len()).map(|b| enc.y(a, b)).collect());
        for j in 0..r2 {
            for d in 0..d2 {
                for e in d + 1..d2 {
                    clauses.push(vec![-enc.x(a, j, d), -enc.x(a, j, e)]);
                }
            }
        }
    }
    for c in clauses {
        enc.cnf.add_clause(c);
    }
    Ok(enc)
}

/// Reads `Σ` from the `y` variables and checks it against the `x` variables.
pub fn decode(enc: &Encoding, model: &[bool]) -> Result<SubstructureCertificate> {
    if model.len() != enc.cnf.num_vars() {
        return arg(format!("model has {} values, encoding has {} variables", model.len(), enc.cnf.num_vars()));
    }
    let value = |v: i32| model[v as usize - 1];
    let mut sigma = BTreeMap::new();
    for (a, x) in enc.q1.iter().enumerate() {
        let chosen: Vec<usize> = (0..enc.q2.len()).filter(|&b| value(enc.y(a, b))).collect();
        let &[b] = chosen.as_slice() else {
            return Err(NrdError::Internal(format!(
                "model selects {} images for {}",
                chosen.len(),
                format_tuple(x)
            )));
        };
        let image = &enc.q2[b];
        for (j, &tv) in image.iter().enumerate() {
            for d in 0..enc.d2 {
                if value(enc.x(a, j, d)) != (d == tv as usize) {
                    return Err(NrdError::Internal(format!("x and y variables disagree at {} output {}", format_tuple(x), j + 1)));
                }
            }
        }
        sigma.insert(x.clone(), image.clone());
    }
    Ok(SubstructureCertificate {
        source: enc.source.clone(),
        target: enc.target.clone(),
        family: enc.family.clone(),
        sigma,
    })
}

/// Encodes, solves with the embedded solver, and decodes. `None` means no
/// certificate exists for this family.
pub fn find_certificate(
    source: &ConditionalPredicate,
    target: &ConditionalPredicate,
    family: &IndexFamily,
    config: &SolverConfig,
) -> Result<Option<SubstructureCertificate>> {
    let enc = encode(source, target, family)?;
    match solve(&enc.cnf, config)? {
        SolveResult::Unsat => Ok(None),
        SolveResult::Sat(model) => {
            let cert = decode(&enc, &model)?;
            let v = verify_certificate(&cert)?;
            if !v.ok {
                return Err(NrdError::Internal(format!("decoded certificate fails: {}", v.violation.unwrap())));
            }
            Ok(Some(cert))
        }
    }
}

#[derive(Clone, Debug)]
pub struct FamilySearchOptions {
    pub max_set_size: usize,
    /// Exact set sizes tried in the uniform phase (every slot the same size).
    pub uniform_sizes: Vec<usize>,
    /// Run the mixed-size phase after the uniform one.
    pub mixed: bool,
    pub max_results: Option<usize>,
    pub max_solver_calls: Option<usize>,
    /// Source coordinate permutations; families equivalent under them are searched once.
    pub symmetries: Vec<Vec<usize>>,
    pub solver: SolverConfig,
}

impl FamilySearchOptions {
    pub fn new(max_set_size: usize) -> Self {
        FamilySearchOptions {
            max_set_size,
            uniform_sizes: (0..=max_set_size).collect(),
            mixed: true,
            max_results: None,
            max_solver_calls: None,
            symmetries: Vec::new(),
            solver: SolverConfig::default(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FoundFamily {
    pub family: Vec<Vec<usize>>,
    pub minimal: bool,
    pub certificate: SubstructureCertificate,
}

impl FoundFamily {
    pub fn index_family(&self) -> &IndexFamily {
        &self.certificate.family
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilySearchResult {
    pub found: Vec<FoundFamily>,
    pub solver_calls: usize,
    /// False when a budget stopped the search early.
    pub complete: bool,
}

/// Enumerates index families with sets of size at most `max_set_size`.
///
/// Slots are filled left to right; a partial family is abandoned when its
/// relaxation (unfilled slots set to all of `[r₁]`) is unsatisfiable, which
/// is sound because satisfiability is monotone under enlarging sets. Known
/// satisfiable and unsatisfiable families answer sub/superset queries
/// without solver calls. The uniform phase reports every satisfiable
/// uniform family; the mixed phase reports minimal ones.
pub fn search_families(
    source: &ConditionalPredicate,
    target: &ConditionalPredicate,
    opts: &FamilySearchOptions,
) -> Result<FamilySearchResult> {
    let r1 = source.arity();
    if opts.max_set_size > r1 {
        return arg(format!("set size bound {} exceeds source arity {r1}", opts.max_set_size));
    }
    for s in &opts.symmetries {
        check_permutation(s, r1)?;
    }
    let mut search = FamilySearch {
        source,
        target,
        opts,
        r1,
        r2: target.arity(),
        known_sat: Vec::new(),
        known_unsat: Vec::new(),
        solver_calls: 0,
        found: Vec::new(),
        found_keys: BTreeSet::new(),
        stopped: false,
    };
    let subsets = subsets_up_to(r1, opts.max_set_size);
    for &k in &opts.uniform_sizes {
        if k > opts.max_set_size {
            continue;
        }
        let choices: Vec<Vec<usize>> = subsets.iter().filter(|s| s.len() == k).cloned().collect();
        info!("uniform phase: sets of size {k}");
        search.dfs(&choices, &mut Vec::new(), false)?;
        if search.stopped {
            break;
        }
    }
    if opts.mixed && !search.stopped {
        info!("mixed phase: sets of size at most {}", opts.max_set_size);
        search.dfs(&subsets, &mut Vec::new(), true)?;
    }
    Ok(FamilySearchResult { found: search.found, solver_calls: search.solver_calls, complete: !search.stopped })
}

fn subsets_up_to(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (0u32..1 << n)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect::<Vec<_>>())
        .filter(|s| s.len() <= k)
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    out
}

fn is_subfamily(a: &[Vec<usize>], b: &[Vec<usize>]) -> bool {
    a.iter().zip(b).all(|(x, y)| x.iter().all(|i| y.contains(i)))
}

struct FamilySearch<'a> {
    source: &'a ConditionalPredicate,
    target: &'a ConditionalPredicate,
    opts: &'a FamilySearchOptions,
    r1: usize,
    r2: usize,
    known_sat: Vec<(Vec<Vec<usize>>, SubstructureCertificate)>,
    known_unsat: Vec<Vec<Vec<usize>>>,
    solver_calls: usize,
    found: Vec<FoundFamily>,
    found_keys: BTreeSet<Vec<Vec<usize>>>,
    stopped: bool,
}

impl FamilySearch<'_> {
    /// Satisfiability of a complete family, answered from the frontier when possible.
    fn evaluate(&mut self, sets: &[Vec<usize>]) -> Result<Option<SubstructureCertificate>> {
        if self.known_unsat.iter().any(|u| is_subfamily(sets, u)) {
            return Ok(None);
        }
        if let Some((_, cert)) = self.known_sat.iter().find(|(s, _)| is_subfamily(s, sets)) {
            let mut cert = cert.clone();
            cert.family = IndexFamily::new(self.r1, sets.to_vec())?;
            return Ok(Some(cert));
        }
        if self.opts.max_solver_calls.is_some_and(|m| self.solver_calls >= m) {
            self.stopped = true;
            return Ok(None);
        }
        self.solver_calls += 1;
        let family = IndexFamily::new(self.r1, sets.to_vec())?;
        let result = find_certificate(self.source, self.target, &family, &self.opts.solver)?;
        debug!("solver call {}: {family} -> {}", self.solver_calls, if result.is_some() { "SAT" } else { "UNSAT" });
        match &result {
            Some(cert) => {
                self.known_sat.retain(|(s, _)| !is_subfamily(sets, s));
                self.known_sat.push((sets.to_vec(), cert.clone()));
            }
            None => {
                self.known_unsat.retain(|u| !is_subfamily(u, sets));
                self.known_unsat.push(sets.to_vec());
            }
        }
        Ok(result)
    }

    fn is_minimal(&mut self, sets: &[Vec<usize>]) -> Result<bool> {
        for j in 0..sets.len() {
            for &i in &sets[j] {
                let mut smaller = sets.to_vec();
                smaller[j].retain(|&x| x != i);
                if self.evaluate(&smaller)?.is_some() {
                    return Ok(false);
                }
                if self.stopped {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    fn is_canonical(&self, sets: &[Vec<usize>]) -> bool {
        self.opts.symmetries.iter().all(|sigma| {
            let relabelled: Vec<Vec<usize>> = sets
                .iter()
                .map(|s| {
                    let mut t: Vec<usize> = s.iter().map(|&i| sigma[i]).collect();
                    t.sort_unstable();
                    t
                })
                .collect();
            relabelled.as_slice() >= sets
        })
    }

    fn dfs(&mut self, choices: &[Vec<usize>], partial: &mut Vec<Vec<usize>>, minimal_only: bool) -> Result<()> {
        if self.stopped || self.opts.max_results.is_some_and(|m| self.found.len() >= m) {
            self.stopped = self.stopped || self.opts.max_results.is_some_and(|m| self.found.len() >= m);
            return Ok(());
        }
        if partial.len() == self.r2 {
            return self.leaf(partial, minimal_only);
        }
        let full: Vec<usize> = (0..self.r1).collect();
        for choice in choices {
            partial.push(choice.clone());
            let mut relaxed = partial.clone();
            relaxed.resize(self.r2, full.clone());
            let feasible = if partial.len() == self.r2 { true } else { self.evaluate(&relaxed)?.is_some() };
            if feasible && !self.stopped {
                self.dfs(choices, partial, minimal_only)?;
            }
            partial.pop();
            if self.stopped {
                break;
            }
        }
        Ok(())
    }

    fn leaf(&mut self, sets: &[Vec<usize>], minimal_only: bool) -> Result<()> {
        if self.found_keys.contains(sets) || !self.is_canonical(sets) {
            return Ok(());
        }
        if minimal_only && self.found.iter().any(|f| f.minimal && is_subfamily(f.certificate.family.sets(), sets)) {
            return Ok(());
        }
        let Some(cert) = self.evaluate(sets)? else { return Ok(()) };
        let minimal = self.is_minimal(sets)?;
        if minimal_only && !minimal {
            return Ok(());
        }
        let verified = verify_certificate(&cert)?;
        if !verified.ok {
            return Err(NrdError::Internal("search produced an invalid certificate".into()));
        }
        self.found_keys.insert(sets.to_vec());
        self.found.push(FoundFamily { family: cert.family.to_one_based(), minimal, certificate: cert });
        Ok(())
    }
}

/// For each output coordinate, the inclusion-minimal coordinate sets (0-indexed)
/// whose values determine that output on the domain of `sigma`.
pub fn dependency_analysis(sigma: &BTreeMap<Tuple, Tuple>) -> Result<Vec<Vec<Vec<usize>>>> {
    let Some((first, img)) = sigma.iter().next() else {
        return arg("Σ is empty");
    };
    let (r1, r2) = (first.len(), img.len());
    if r1 > 20 {
        return Err(NrdError::Unsupported("dependency analysis supports arity up to 20".into()));
    }
    let mut subsets: Vec<Vec<usize>> = (0u32..1 << r1).map(|m| (0..r1).filter(|i| m >> i & 1 == 1).collect()).collect();
    subsets.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    let mut out = Vec::with_capacity(r2);
    for j in 0..r2 {
        let mut minimal: Vec<Vec<usize>> = Vec::new();
        for s in &subsets {
            if minimal.iter().any(|m| m.iter().all(|i| s.contains(i))) {
                continue;
            }
            let mut seen: BTreeMap<Vec<u8>, u8> = BTreeMap::new();
            let determined = sigma.iter().all(|(x, y)| {
                let key: Vec<u8> = s.iter().map(|&i| x[i]).collect();
                *seen.entry(key).or_insert(y[j]) == y[j]
            });
            if determined {
                minimal.push(s.clone());
            }
        }
        out.push(minimal);
    }
    Ok(out)
}

/// Coordinate permutations `σ` with `P^σ = P` and `Q^σ = Q`.
pub fn source_automorphisms(pq: &ConditionalPredicate) -> Result<Vec<Vec<usize>>> {
    let r = pq.arity();
    if r > 8 {
        return Err(NrdError::Unsupported("automorphism enumeration supports arity up to 8".into()));
    }
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..r).collect();
    loop {
        if pq.base().permute(&perm)? == *pq.base() && pq.ambient().permute(&perm)? == *pq.ambient() {
            out.push(perm.clone());
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(out)
}

/// Advances to the next permutation in lexicographic order.
pub fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("successor exists");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::tables;

    #[test]
    fn three_lin_table_passes_and_bad_family_fails() {
        let t = tables::table("or3-to-3lin").unwrap();
        let cert = t.certificate().unwrap();
        assert!(verify_certificate(&cert).unwrap().ok);
        let bad = SubstructureCertificate { family: IndexFamily::parse(3, "1,1,2").unwrap(), ..cert };
        let v = verify_certificate(&bad).unwrap();
        assert!(matches!(v.violation, Some(Violation::Dependence { .. })));
    }

    #[test]
    fn variable_count_matches_dimensions() {
        let src = catalog::conditional("OR3").unwrap();
        let tgt = catalog::conditional("3LIN").unwrap();
        let enc = encode(&src, &tgt, &IndexFamily::parse(3, "12,13,23").unwrap()).unwrap();
        assert_eq!(enc.cnf.num_vars(), 8 * 3 * 3 + 8 * 9);
    }

    #[test]
    fn identity_is_found_for_trivial_family() {
        let pq = catalog::conditional("OR2").unwrap();
        let cert = find_certificate(&pq, &pq, &IndexFamily::full(2, 2), &SolverConfig::default()).unwrap();
        assert!(cert.is_some());
    }

    #[test]
    fn constant_maps_cannot_separate_base_from_gap() {
        let pq = catalog::conditional("OR2").unwrap();
        let empty = IndexFamily::new(2, vec![vec![], vec![]]).unwrap();
        let enc = encode(&pq, &pq, &empty).unwrap();
        assert!(!solve(&enc.cnf, &SolverConfig::default()).unwrap().is_sat());
    }

    #[test]
    fn decoded_three_lin_maps_zero_to_zero() {
        let src = catalog::conditional("OR3").unwrap();
        let tgt = catalog::conditional("3LIN").unwrap();
        let cert = find_certificate(&src, &tgt, &IndexFamily::parse(3, "12,13,23").unwrap(), &SolverConfig::default())
            .unwrap()
            .unwrap();
        assert_eq!(cert.sigma[&vec![0, 0, 0]], vec![0, 0, 0]);
    }

    #[test]
    fn dependency_of_identity() {
        let sigma: BTreeMap<Tuple, Tuple> = crate::predicate::Predicate::full(2, 3)
            .unwrap()
            .tuples()
            .iter()
            .map(|t| (t.clone(), t.clone()))
            .collect();
        assert_eq!(dependency_analysis(&sigma).unwrap(), vec![vec![vec![0]], vec![vec![1]], vec![vec![2]]]);
    }

    #[test]
    fn next_permutation_enumerates_all() {
        let mut p = vec![0, 1, 2];
        let mut count = 1;
        while next_permutation(&mut p) {
            count += 1;
        }
        assert_eq!(count, 6);
    }

}
