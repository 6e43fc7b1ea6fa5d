//! `nrd`: command-line access to the non-redundancy toolkit.

mod input;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use nrd_core::analysis::{self, BalanceReport};
use nrd_core::checks::{self, CheckOptions, CheckStatus};
use nrd_core::generators::{self, ShrinkingKind};
use nrd_core::instance::{self, ExactOptions, FindOptions, FindOutcome};
use nrd_core::predicate::{format_tuple, parse_digits};
use nrd_core::sat::{self, SolverConfig};
use nrd_core::substructure::{self, FamilySearchOptions};
use nrd_core::{catalog, pipeline, tables, IndexFamily, NrdError};
use serde::Serialize;
use serde_json::json;

#[derive(Parser)]
#[command(name = "nrd", version, about = "Non-redundancy of constraint satisfaction predicates")]
struct Cli {
    #[command(flatten)]
    config: Config,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Config {
    /// Seed for randomized steps.
    #[arg(long, global = true, env = "NRD_SEED", default_value_t = 0)]
    seed: u64,
    /// Worker threads (0 uses all cores).
    #[arg(long, global = true, env = "NRD_WORKERS", default_value_t = 0)]
    workers: usize,
    /// Conflict limit per SAT call.
    #[arg(long, global = true, env = "NRD_CONFLICT_BUDGET")]
    conflict_budget: Option<u64>,
    /// Node or call limit for searches.
    #[arg(long, global = true, env = "NRD_SEARCH_BUDGET")]
    search_budget: Option<u64>,
    #[arg(long, global = true, env = "NRD_FORMAT", value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Shorthand for `--format json`.
    #[arg(long, global = true, env = "NRD_JSON")]
    json: bool,
    /// More log output on stderr (repeatable).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Predicates are catalog expressions (`BoolBCK`, `Cat5@134`, `C6*|C6`) or `@file.json`.
#[derive(Subcommand)]
enum Command {
    /// List catalog names or print one predicate.
    Catalog { name: Option<String> },
    /// Project a predicate onto 1-indexed coordinates (ascending order).
    Project {
        predicate: String,
        #[arg(long, env = "NRD_COORDS")]
        coords: String,
    },
    /// Permute coordinates: output coordinate j reads input coordinate sigma(j).
    Permute {
        predicate: String,
        /// 1-indexed images sigma(1),...,sigma(r).
        #[arg(long, env = "NRD_SIGMA")]
        sigma: String,
    },
    /// Box product of two conditional predicates: base (P1 x Q2) u (Q1 x P2) inside Q1 x Q2.
    Boxprod { left: String, right: String },
    /// Decide balance (closure under odd alternating sums) of a Boolean predicate.
    Balance {
        predicate: Option<String>,
        #[arg(long, env = "NRD_CATALOG")]
        catalog: Option<String>,
        #[arg(long, env = "NRD_METHOD", value_enum, default_value_t = Method::Lattice)]
        method: Method,
        /// Largest k for the bounded alternating-sum search.
        #[arg(long, env = "NRD_K_MAX", default_value_t = 3)]
        k_max: usize,
    },
    /// Reduce a word by repeatedly deleting adjacent equal symbols.
    Cancel { word: String },
    /// Search column sequences whose row-wise cancellation leaves the predicate.
    CatalanSearch {
        predicate: String,
        #[arg(long, env = "NRD_MAX_LEN", default_value_t = 5)]
        max_len: usize,
    },
    /// Play the cancellation game on the rows of the given columns.
    CatalanCheck {
        predicate: String,
        /// Comma-separated digit-string columns.
        #[arg(long, env = "NRD_COLUMNS")]
        columns: String,
    },
    /// Check that an instance is (conditionally) non-redundant.
    VerifyNrd {
        #[arg(long, env = "NRD_INSTANCE")]
        instance: PathBuf,
        #[arg(long, env = "NRD_PREDICATE")]
        predicate: String,
        /// Check these witnesses instead of searching for them.
        #[arg(long, env = "NRD_WITNESSES")]
        witnesses: Option<PathBuf>,
        /// Write the found witnesses as JSON.
        #[arg(long, env = "NRD_OUT")]
        out: Option<PathBuf>,
    },
    /// Largest non-redundant instance on n vertices (toy sizes).
    NrdExact {
        predicate: String,
        #[arg(long, env = "NRD_N")]
        n: usize,
        /// Restrict to partite instances with these part sizes.
        #[arg(long, env = "NRD_PARTS")]
        parts: Option<String>,
        #[arg(long, env = "NRD_OUT")]
        out: Option<PathBuf>,
    },
    /// Keep the edges that a random colouring makes partite.
    ToRPartite {
        #[arg(long, env = "NRD_INSTANCE")]
        instance: PathBuf,
        #[arg(long, env = "NRD_RETRIES", default_value_t = 1)]
        retries: usize,
        #[arg(long, env = "NRD_OUT")]
        out: Option<PathBuf>,
    },
    /// Find a substructure map (gadget reduction) by SAT, for one family or by family search.
    FindSubstructure(FindArgs),
    /// Check a substructure certificate (bundled table name or @file.json).
    VerifySubstructure {
        certificate: String,
        /// Replace the certificate's family.
        #[arg(long, env = "NRD_FAMILY")]
        family: Option<String>,
    },
    /// Minimal input-coordinate sets each output coordinate of a tuple map depends on.
    Deps { certificate: String },
    /// List the bundled tuple-map tables.
    Tables,
    /// Incidence graph of the projective plane over a prime field (girth 6).
    GenGirth6 {
        #[arg(long, env = "NRD_Q")]
        q: usize,
        /// Write the graph as an edge list.
        #[arg(long, env = "NRD_EMIT_GRAPH")]
        emit_graph: Option<PathBuf>,
        #[arg(long, env = "NRD_OUT")]
        out: Option<PathBuf>,
    },
    /// Build a shrinking instance from girth-6 graphs with its witnesses.
    BuildInstance(BuildArgs),
    /// Project a shrinking instance through a substructure certificate and transfer witnesses.
    Reduce {
        #[command(flatten)]
        build: BuildArgs,
        /// Bundled table name or @certificate.json.
        #[arg(long, env = "NRD_CERTIFICATE")]
        certificate: String,
    },
    /// Projected edge counts and shrinking factors.
    ShrinkReport {
        #[arg(long, env = "NRD_INSTANCE", conflicts_with = "kind")]
        instance: Option<PathBuf>,
        #[command(flatten)]
        build: OptionalBuildArgs,
        /// Coordinate sets like `12,13`; default all nonempty proper subsets.
        #[arg(long, env = "NRD_SETS")]
        sets: Option<String>,
    },
    /// Fit m = C n^a over (n, m) points, or run the reduction pipeline over plane orders.
    Fit {
        /// Points `n:m,n:m,...`.
        #[arg(long, env = "NRD_POINTS")]
        points: Option<String>,
        #[arg(long, env = "NRD_KIND", value_enum, requires = "certificate")]
        kind: Option<Kind>,
        #[arg(long, env = "NRD_CERTIFICATE")]
        certificate: Option<String>,
        #[arg(long, env = "NRD_QS", default_value = "2,3,5")]
        qs: String,
    },
    /// Plain predicate R with (P|Q) x (OR_r | {0,1}^r) = R | S.
    Cond2plain { predicate: String },
    /// Re-verify every bundled construction and table.
    VerifyAll {
        /// Run one group only.
        #[arg(long, env = "NRD_ONLY")]
        only: Option<String>,
        #[arg(long, env = "NRD_FIT_ORDERS", default_value = "2,3,5")]
        fit_orders: String,
        #[arg(long, env = "NRD_SEARCH_ORDERS", default_value = "2,3")]
        search_orders: String,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Lattice,
    Bounded,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    R1s1,
    R2s2,
}

impl From<Kind> for ShrinkingKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::R1s1 => ShrinkingKind::R1S1,
            Kind::R2s2 => ShrinkingKind::R2S2,
        }
    }
}

#[derive(Args)]
struct BuildArgs {
    #[arg(long, env = "NRD_KIND", value_enum)]
    kind: Kind,
    #[arg(long, env = "NRD_Q")]
    q: usize,
    /// Third part size for r1s1 (default q + 1).
    #[arg(long, env = "NRD_N3")]
    n3: Option<usize>,
    /// Keep only the first m edges.
    #[arg(long, env = "NRD_TRUNCATE")]
    truncate: Option<usize>,
    /// Also search for witnesses independently of the constructed ones.
    #[arg(long, env = "NRD_SEARCH")]
    search: bool,
    #[arg(long, env = "NRD_OUT")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OptionalBuildArgs {
    #[arg(long, value_enum)]
    kind: Option<Kind>,
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    n3: Option<usize>,
}

#[derive(Args)]
struct FindArgs {
    #[arg(long, env = "NRD_SOURCE")]
    source: String,
    #[arg(long, env = "NRD_TARGET")]
    target: String,
    /// Solve for this family only (`12,13,23` or `{1,2},{1,3},{2,3}`).
    #[arg(long, env = "NRD_FAMILY")]
    family: Option<String>,
    #[arg(long, env = "NRD_MAX_SET_SIZE", default_value_t = 2)]
    max_set_size: usize,
    /// Sizes tried in the uniform phase (default 0..=max-set-size).
    #[arg(long, env = "NRD_UNIFORM_SIZES")]
    uniform_sizes: Option<String>,
    /// Skip the mixed-size phase.
    #[arg(long, env = "NRD_UNIFORM_ONLY")]
    uniform_only: bool,
    #[arg(long, env = "NRD_MAX_RESULTS", default_value_t = 1000)]
    max_results: usize,
    /// Do not merge families related by source coordinate symmetries.
    #[arg(long, env = "NRD_NO_SYMMETRY")]
    no_symmetry: bool,
    /// Write the CNF for `--family` in DIMACS format.
    #[arg(long, env = "NRD_EXPORT_DIMACS", requires = "family")]
    export_dimacs: Option<PathBuf>,
    /// Decode a model produced by an external solver for `--family`.
    #[arg(long, env = "NRD_MODEL", requires = "family")]
    model: Option<PathBuf>,
    /// Write the certificate JSON.
    #[arg(long, env = "NRD_OUT")]
    out: Option<PathBuf>,
}

struct Output {
    json: bool,
}

impl Output {
    fn emit(&self, text: impl AsRef<str>, value: impl Serialize) -> Result<()> {
        let text = if self.json { serde_json::to_string_pretty(&value)? } else { text.as_ref().to_string() };
        if text.is_empty() {
            return Ok(());
        }
        let mut stdout = std::io::stdout().lock();
        match writeln!(stdout, "{text}") {
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
            r => Ok(r?),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.config.verbose {
        0 => "warn",
        1 => "info",
        2 => "debug",
        _ => "trace",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    if cli.config.workers > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.config.workers).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<NrdError>() {
                Some(NrdError::Budget { .. } | NrdError::Internal(_)) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}

/// Returns whether the requested check passed.
fn run(cli: Cli) -> Result<bool> {
    let cfg = cli.config;
    let out = Output { json: cfg.json || cfg.format == Format::Json };
    let solver = SolverConfig { conflict_budget: cfg.conflict_budget, seed: (cfg.seed != 0).then_some(cfg.seed) };
    match cli.command {
        Command::Catalog { name } => match name {
            None => out.emit(catalog::names().join("\n"), catalog::names())?,
            Some(n) => {
                let c = input::conditional(&n)?;
                out.emit(c.to_string(), &c)?;
            }
        },
        Command::Project { predicate, coords } => {
            let p = input::conditional(&predicate)?;
            let coords = catalog::parse_coords(&coords, p.arity())?;
            let projected = p.project(&coords)?;
            out.emit(projected.to_string(), &projected)?;
        }
        Command::Permute { predicate, sigma } => {
            let p = input::conditional(&predicate)?;
            let sigma: Vec<usize> = input::one_based_list(&sigma)?.iter().map(|i| i - 1).collect();
            let permuted = p.permute(&sigma)?;
            out.emit(permuted.to_string(), &permuted)?;
        }
        Command::Boxprod { left, right } => {
            let product = input::conditional(&left)?.box_product(&input::conditional(&right)?)?;
            out.emit(
                format!("{product}\n|S| = {}, |S \\ R| = {}", product.ambient().len(), product.gap().len()),
                &product,
            )?;
        }
        Command::Balance { predicate, catalog: name, method, k_max } => {
            let spec = predicate.or(name).context("give a predicate or --catalog")?;
            let p = input::plain(&spec)?;
            let mut reports: Vec<BalanceReport> = Vec::new();
            if matches!(method, Method::Lattice | Method::Both) {
                reports.push(analysis::is_balanced_lattice(&p)?);
            }
            if matches!(method, Method::Bounded | Method::Both) {
                reports.push(analysis::is_balanced_bounded(&p, k_max)?);
            }
            let text: Vec<String> = reports
                .iter()
                .map(|r| {
                    let verdict = match (r.balanced, r.k_max) {
                        (true, Some(k)) => format!("balanced up to k={k}"),
                        (true, None) => "balanced".to_string(),
                        (false, _) => "imbalanced".to_string(),
                    };
                    match &r.witness {
                        Some(w) => format!("{verdict}\n{}", w.render()),
                        None => verdict,
                    }
                })
                .collect();
            out.emit(text.join("\n"), &reports)?;
        }
        Command::Cancel { word } => {
            let residual = format_tuple(&analysis::cancel(&parse_digits(&word)?));
            out.emit(&residual, json!({ "word": word, "residual": residual }))?;
        }
        Command::CatalanSearch { predicate, max_len } => {
            let violations = analysis::catalan_search(&input::plain(&predicate)?, max_len)?;
            let text: Vec<String> = violations
                .iter()
                .map(|v| {
                    let cols: Vec<String> = v.columns.iter().map(|c| format_tuple(c)).collect();
                    format!("{} -> {}", cols.join(" "), format_tuple(&v.residual))
                })
                .chain(std::iter::once(format!("{} violations", violations.len())))
                .collect();
            out.emit(text.join("\n"), &violations)?;
        }
        Command::CatalanCheck { predicate, columns } => {
            let p = input::plain(&predicate)?;
            let cols = columns.split(',').map(|w| parse_digits(w.trim())).collect::<nrd_core::Result<Vec<_>>>()?;
            let (residual, member) = analysis::catalan_matrix_check(&p, &cols)?;
            let residual = residual.map(|r| format_tuple(&r)).unwrap_or_default();
            out.emit(
                format!("{residual} {}", if member { "in predicate" } else { "outside predicate" }),
                json!({ "residual": residual, "member": member }),
            )?;
            return Ok(member);
        }
        Command::VerifyNrd { instance: path, predicate, witnesses, out: out_path } => {
            let h = input::instance(&path)?;
            let pq = input::conditional(&predicate)?;
            if let Some(wpath) = witnesses {
                let cert = input::witnesses(&wpath, &h)?;
                let check = instance::check_witnesses(&h, &pq, &cert)?;
                let text = match &check.failure {
                    None => format!("non-redundant: {} witnesses verified", check.edges_checked),
                    Some(f) => format!(
                        "witness for edge {} fails on edge {} ({:?})",
                        f.edge, f.offending, f.status
                    ),
                };
                out.emit(text, &check)?;
                return Ok(check.ok());
            }
            let opts = FindOptions { max_assignments: cfg.search_budget };
            match instance::verify_nrd(&h, &pq, &opts)? {
                FindOutcome::Certified(cert) => {
                    if let Some(p) = out_path {
                        input::write(&p, &serde_json::to_string_pretty(&cert.to_json(&h))?)?;
                    }
                    out.emit(
                        format!("non-redundant: witnesses found for all {} edges", h.num_edges()),
                        json!({ "non_redundant": true, "edges": h.num_edges() }),
                    )?;
                }
                FindOutcome::Redundant { edge } => {
                    out.emit(
                        format!("redundant: edge {edge} has no witness"),
                        json!({ "non_redundant": false, "edge": edge }),
                    )?;
                    return Ok(false);
                }
            }
        }
        Command::NrdExact { predicate, n, parts, out: out_path } => {
            let pq = input::conditional(&predicate)?;
            let part_sizes = parts.as_deref().map(input::usize_list).transpose()?;
            let result = instance::nrd_exact(&pq, n, &ExactOptions { part_sizes, max_nodes: cfg.search_budget })?;
            if let Some(p) = out_path {
                input::write(&p, &serde_json::to_string_pretty(&result.instance.to_json())?)?;
            }
            out.emit(
                format!("NRD = {} ({} candidates, {} nodes)", result.value, result.candidates, result.nodes),
                &result,
            )?;
        }
        Command::ToRPartite { instance: path, retries, out: out_path } => {
            let h = input::instance(&path)?;
            let r = instance::to_r_partite(&h, cfg.seed, retries);
            if let Some(p) = out_path {
                input::write(&p, &serde_json::to_string_pretty(&r.hypergraph.to_json())?)?;
            }
            let summary = json!({
                "kept": r.kept.len(),
                "kept_fraction": r.kept_fraction,
                "distinct_colour_fraction": r.distinct_colour_fraction,
                "expected_fraction": r.expected_fraction,
                "empty": r.empty,
            });
            out.emit(
                format!("kept {} of {} edges (fraction {:.4}, single-colouring expectation {:.4})", r.kept.len(), h.num_edges(), r.kept_fraction, r.expected_fraction),
                summary,
            )?;
        }
        Command::FindSubstructure(args) => return find_substructure(args, &cfg, &out, solver),
        Command::VerifySubstructure { certificate, family } => {
            let mut cert = input::certificate(&certificate)?;
            if let Some(f) = family {
                cert.family = IndexFamily::parse(cert.source.arity(), &f)?;
            }
            let v = substructure::verify_certificate(&cert)?;
            let text = match &v.violation {
                None => format!("valid for family {}", cert.family),
                Some(x) => format!("invalid for family {}: {x}", cert.family),
            };
            out.emit(text, &v)?;
            return Ok(v.ok);
        }
        Command::Deps { certificate } => {
            let cert = input::certificate(&certificate)?;
            let deps = substructure::dependency_analysis(&cert.sigma)?;
            let one_based: Vec<Vec<Vec<usize>>> =
                deps.iter().map(|sets| sets.iter().map(|s| s.iter().map(|i| i + 1).collect()).collect()).collect();
            let text: Vec<String> = one_based.iter().enumerate().map(|(j, sets)| format!("{}: {sets:?}", j + 1)).collect();
            out.emit(text.join("\n"), &one_based)?;
        }
        Command::Tables => {
            let rows: Vec<_> = tables::all()
                .iter()
                .map(|t| json!({ "name": t.name, "source": t.source, "target": t.target, "rows": t.rows(), "description": t.description }))
                .collect();
            let text: Vec<String> = tables::all().iter().map(|t| format!("{:<24} {}", t.name, t.description)).collect();
            out.emit(text.join("\n"), rows)?;
        }
        Command::GenGirth6 { q, emit_graph, out: out_path } => {
            let g = generators::gen_girth6(q)?;
            if let Some(p) = emit_graph {
                input::write(&p, &g.edge_list())?;
            }
            if let Some(p) = out_path {
                input::write(&p, &serde_json::to_string_pretty(&g.to_partite()?.to_json())?)?;
            }
            out.emit(
                format!("PG(2,{q}): {} vertices, {} edges, girth {}", g.num_vertices(), g.num_edges(), g.girth),
                json!({ "q": q, "vertices": g.num_vertices(), "edges": g.num_edges(), "girth": g.girth }),
            )?;
        }
        Command::BuildInstance(args) => {
            let inst = build(&args)?;
            let pq = inst.predicate()?;
            let check = instance::check_witnesses(inst.hypergraph.instance(), &pq, &inst)?;
            let searched = if args.search {
                Some(instance::verify_nrd(inst.hypergraph.instance(), &pq, &FindOptions { max_assignments: cfg.search_budget })?.is_certified())
            } else {
                None
            };
            if let Some(p) = &args.out {
                input::write(p, &serde_json::to_string_pretty(&inst.hypergraph.to_json())?)?;
            }
            let point = pipeline::shrink_point(&inst)?;
            out.emit(
                format!(
                    "{} edges, parts {:?}, lambda {}; constructed witnesses {}{}",
                    inst.num_edges(),
                    inst.hypergraph.part_sizes(),
                    point.lambda,
                    if check.ok() { "verify" } else { "FAIL" },
                    match searched {
                        Some(true) => "; search agrees",
                        Some(false) => "; search finds a redundant edge",
                        None => "",
                    }
                ),
                json!({ "edges": inst.num_edges(), "parts": inst.hypergraph.part_sizes(), "lambda": point.lambda, "witnesses_verified": check.ok(), "search_certified": searched }),
            )?;
            return Ok(check.ok() && searched.unwrap_or(true));
        }
        Command::Reduce { build: args, certificate } => {
            let inst = build(&args)?;
            let cert = input::certificate(&certificate)?;
            let red = pipeline::apply_reduction(&inst.hypergraph, &inst, &cert)?;
            if let Some(p) = &args.out {
                input::write(p, &serde_json::to_string_pretty(&red.hypergraph().to_json())?)?;
            }
            let h = red.hypergraph();
            out.emit(
                format!(
                    "{} edges on {} vertices (parts {:?}); transferred witnesses verify",
                    h.num_edges(),
                    h.num_vertices(),
                    h.part_sizes()
                ),
                json!({ "edges": h.num_edges(), "vertices": h.num_vertices(), "parts": h.part_sizes(), "merged": red.projection.merged, "verified": red.check.ok() }),
            )?;
        }
        Command::ShrinkReport { instance: path, build: b, sets } => {
            let h = match (path, b.kind) {
                (Some(p), _) => input::partite(&p)?,
                (None, Some(kind)) => {
                    let q = b.q.context("--kind needs --q")?;
                    build(&BuildArgs { kind, q, n3: b.n3, truncate: None, search: false, out: None })?.hypergraph
                }
                (None, None) => bail!("give --instance or --kind with --q"),
            };
            let sets = sets
                .map(|s| {
                    IndexFamily::parse(h.arity(), &s).map(|f| f.sets().to_vec())
                })
                .transpose()?;
            let report = instance::shrinking_report(&h, sets.as_deref())?;
            let mut text: Vec<String> = report
                .entries
                .iter()
                .map(|e| format!("{:?}: |pi E| = {}, factor {:.4}", e.set, e.projected, e.factor))
                .collect();
            text.push(format!("|E| = {}, lambda = {:.4}", report.edges, report.lambda));
            out.emit(text.join("\n"), &report)?;
        }
        Command::Fit { points, kind, certificate, qs } => {
            if let Some(kind) = kind {
                let table = certificate.context("--kind needs --certificate")?;
                let run = pipeline::run_pipeline(kind.into(), &table, &input::usize_list(&qs)?)?;
                let mut text: Vec<String> =
                    run.points.iter().map(|p| format!("q={} n={} m={}", p.q, p.vertices, p.edges)).collect();
                text.push(format!("exponent {:.4} (epsilon {:.4})", run.fit.exponent, run.fit.epsilon));
                out.emit(text.join("\n"), &run)?;
            } else {
                let pts = input::points(&points.context("give --points or --kind")?)?;
                let fit = pipeline::fit_exponent(&pts)?;
                out.emit(
                    format!("exponent {:.6} (epsilon {:.6}), max ratio {:.4}", fit.exponent, fit.epsilon, fit.max_ratio),
                    &fit,
                )?;
            }
        }
        Command::Cond2plain { predicate } => {
            let r = pipeline::conditional_to_plain(&input::conditional(&predicate)?)?;
            out.emit(format!("{r}\n{} tuples of arity {}", r.len(), r.arity()), &r)?;
        }
        Command::VerifyAll { only, fit_orders, search_orders } => {
            let opts = CheckOptions {
                only,
                fit_orders: input::usize_list(&fit_orders)?,
                search_orders: input::usize_list(&search_orders)?,
            };
            let report = checks::run_checks(&opts)?;
            let mut text: Vec<String> = report
                .items
                .iter()
                .map(|i| {
                    let tag = match i.status {
                        CheckStatus::Pass => "pass",
                        CheckStatus::Fail => "FAIL",
                        CheckStatus::Anomaly => "anomaly",
                    };
                    format!("{tag:<8} [{}] {}: {}", i.group, i.name, i.detail)
                })
                .collect();
            text.push(format!("{} passed, {} failed, {} anomalies", report.passed, report.failed, report.anomalies));
            out.emit(text.join("\n"), &report)?;
            return Ok(report.ok());
        }
    }
    Ok(true)
}

fn build(args: &BuildArgs) -> Result<generators::ShrinkingInstance> {
    let inst = match args.kind {
        Kind::R1s1 => generators::build_r1s1_instance(args.q, args.n3.unwrap_or(pipeline::r1s1_third_part(args.q)))?,
        Kind::R2s2 => generators::build_r2s2_instance(args.q)?,
    };
    Ok(match args.truncate {
        Some(m) => inst.truncate_to(m),
        None => inst,
    })
}

fn find_substructure(args: FindArgs, cfg: &Config, out: &Output, solver: SolverConfig) -> Result<bool> {
    let source = input::conditional(&args.source)?;
    let target = input::conditional(&args.target)?;
    if let Some(text) = &args.family {
        let family = IndexFamily::parse(source.arity(), text)?;
        let enc = substructure::encode(&source, &target, &family)?;
        if let Some(p) = &args.export_dimacs {
            input::write(p, &sat::to_dimacs(&enc.cnf))?;
            info!("wrote {} variables and {} clauses", enc.cnf.num_vars(), enc.cnf.clauses.len());
        }
        let model = match &args.model {
            Some(p) => {
                let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                sat::parse_model(&text, enc.cnf.num_vars())?
            }
            None => match sat::solve(&enc.cnf, &solver)? {
                sat::SolveResult::Sat(m) => Some(m),
                sat::SolveResult::Unsat => None,
            },
        };
        let Some(model) = model else {
            out.emit(format!("no certificate for family {family}"), json!({ "satisfiable": false }))?;
            return Ok(false);
        };
        if !enc.cnf.satisfied_by(&model) {
            bail!("the model does not satisfy the formula");
        }
        let cert = substructure::decode(&enc, &model)?;
        if let Some(p) = &args.out {
            input::write(p, &serde_json::to_string_pretty(&cert)?)?;
        }
        let rows: Vec<String> = cert.sigma.iter().map(|(k, v)| format!("{} -> {}", format_tuple(k), format_tuple(v))).collect();
        out.emit(format!("certificate for family {family}\n{}", rows.join("\n")), &cert)?;
        return Ok(true);
    }
    let mut opts = FamilySearchOptions::new(args.max_set_size);
    if let Some(s) = &args.uniform_sizes {
        opts.uniform_sizes = input::usize_list(s)?;
    }
    opts.mixed = !args.uniform_only;
    opts.max_results = Some(args.max_results);
    opts.max_solver_calls = cfg.search_budget.map(|b| b as usize);
    opts.solver = solver;
    if !args.no_symmetry {
        opts.symmetries = substructure::source_automorphisms(&source)?;
    }
    let result = substructure::search_families(&source, &target, &opts)?;
    if let (Some(p), Some(first)) = (&args.out, result.found.first()) {
        input::write(p, &serde_json::to_string_pretty(&first.certificate)?)?;
    }
    let mut text: Vec<String> = result
        .found
        .iter()
        .map(|f| format!("{}{}", f.certificate.family, if f.minimal { "" } else { " (not minimal)" }))
        .collect();
    text.push(format!(
        "{} families, {} solver calls{}",
        result.found.len(),
        result.solver_calls,
        if result.complete { "" } else { ", search stopped early" }
    ));
    let summary = json!({
        "families": result.found.iter().map(|f| json!({ "family": f.family, "minimal": f.minimal })).collect::<Vec<_>>(),
        "solver_calls": result.solver_calls,
        "complete": result.complete,
    });
    out.emit(text.join("\n"), summary)?;
    Ok(!result.found.is_empty())
}
