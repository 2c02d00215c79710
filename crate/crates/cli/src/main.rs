//! Command-line front door. Everything prints one document to stdout,
//! JSON or text, and runs byte-identically for identical configurations at
//! any `--threads` setting.
//!
//! Exit codes: 0 ok, 1 budget truncation, 2 coverage-theorem violation
//! (always a bug), 64 usage, 70 internal, 74 I/O or malformed data file.

mod output;
mod setarg;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use pfree_lab::catalog::{Catalog, CatalogError, DEFAULT_ORDER_CAP};
use pfree_lab::chartab;
use pfree_lab::classes::conjugacy_classes;
use pfree_lab::group::Group;
use pfree_lab::pfree;
use pfree_lab::rng::SplitMix64;
use pfree_lab::structure::{self, ReportOptions, StructureError, SweepAnalyses};
use pfree_lab::subgroup;

use output::*;
use setarg::parse_set_arg;

pub const EXIT_OK: i32 = 0;
pub const EXIT_TRUNCATED: i32 = 1;
pub const EXIT_THEOREM_VIOLATION: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_INTERNAL: i32 = 70;
pub const EXIT_IO: i32 = 74;

#[derive(Parser)]
#[command(name = "pfree-lab", version, about = "Finite-group combinatorics laboratory")]
struct Cli {
    /// Output format: json or text.
    #[arg(long, global = true, default_value = "text")]
    format: Format,
    /// Master seed for every randomized routine.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Group order cap (PFREE_LAB_CAP overrides the default).
    #[arg(long, global = true)]
    cap: Option<usize>,
    /// Worker threads, 0 = auto. Results are identical for any value.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Node budget for the exact product-free search.
    #[arg(long, global = true, default_value_t = pfree::DEFAULT_NODE_BUDGET)]
    budget: u64,
    /// Subgroup enumeration budget.
    #[arg(long, global = true, default_value_t = structure::DEFAULT_SUBGROUP_BUDGET)]
    subgroup_budget: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect or validate groups.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Product-free sets: search, exact maximum, constructions, checking.
    #[command(subcommand)]
    Pfree(PfreeCmd),
    /// Irreducible character degrees.
    Degrees {
        spec: String,
        /// Include elapsed milliseconds (off by default: it breaks
        /// byte-identical output).
        #[arg(long)]
        timings: bool,
    },
    /// Quasirandomness parameter d(G).
    Quasirandom { spec: String },
    /// Does A·B·C cover the group?
    Triple { spec: String, a: String, b: String, c: String },
    /// Randomized audits.
    #[command(subcommand)]
    Audit(AuditCmd),
    /// Covering chains for a product-free set.
    #[command(subcommand)]
    Chain(ChainCmd),
    /// Finite-exponent subgroup certificate for a product-free set.
    Finexp {
        spec: String,
        set: String,
        #[arg(long)]
        epsilon: f64,
    },
    /// The four-way equivalence report.
    Report { spec: String },
    /// Run analyses over a comma-separated list of group specs.
    Sweep {
        specs: String,
        /// Comma-separated: d (degrees), pfree.
        #[arg(long, default_value = "d")]
        analyses: String,
    },
}

#[derive(Subcommand)]
enum GroupCmd {
    /// Order, exponent, class data and flags.
    Info { spec: String },
    /// Validate a .cayley file (Latin square, identity, associativity).
    Validate { path: String },
}

#[derive(Subcommand)]
enum PfreeCmd {
    /// Seeded greedy + local-search heuristic.
    Search {
        spec: String,
        #[arg(long, default_value_t = 2000)]
        iters: u64,
        #[arg(long, default_value_t = 4)]
        restarts: u64,
    },
    /// Exact maximum by branch-and-bound.
    Exact { spec: String },
    /// Cyclic construction pulled back through the abelianization.
    Construct { spec: String },
    /// Verify a set file for product-freeness.
    Check { spec: String, set: String },
}

#[derive(Subcommand)]
enum AuditCmd {
    /// Random subsets at the coverage threshold must cube to G.
    Np {
        spec: String,
        #[arg(long, default_value_t = 100)]
        trials: u64,
    },
    /// Observe |A·B|/n over random pairs of a given density.
    Mixing {
        spec: String,
        #[arg(long, default_value_t = 0.3)]
        density: f64,
        #[arg(long, default_value_t = 100)]
        trials: u64,
    },
}

#[derive(Subcommand)]
enum ChainCmd {
    /// Construct a chain certificate from a product-free set.
    Build {
        spec: String,
        set: String,
        #[arg(long, default_value_t = 3)]
        length: usize,
    },
    /// Verify a chain certificate file.
    Verify { spec: String, chain: String },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Io(String),
    Internal(String),
    TheoremViolation(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
            CliError::Internal(_) => EXIT_INTERNAL,
            CliError::TheoremViolation(_) => EXIT_THEOREM_VIOLATION,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Io(m) | CliError::Internal(m) | CliError::TheoremViolation(m) => m,
        }
    }
}

impl From<CatalogError> for CliError {
    fn from(e: CatalogError) -> CliError {
        match e {
            CatalogError::Io { .. } | CatalogError::Cayley(_) => CliError::Io(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<chartab::ChartabError> for CliError {
    fn from(e: chartab::ChartabError) -> CliError {
        CliError::Internal(e.to_string())
    }
}

impl From<StructureError> for CliError {
    fn from(e: StructureError) -> CliError {
        match e {
            StructureError::TheoremViolation { .. } => CliError::TheoremViolation(e.to_string()),
            StructureError::Chartab(inner) => CliError::Internal(inner.to_string()),
        }
    }
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };

    if cli.threads > 0 {
        // Ignore the error when a pool already exists (tests call run twice).
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global();
    }

    match dispatch(&cli) {
        Ok((doc, code)) => {
            println!("{doc}");
            code
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}

fn effective_cap(cli: &Cli) -> usize {
    if let Some(cap) = cli.cap {
        return cap;
    }
    if let Ok(v) = std::env::var("PFREE_LAB_CAP") {
        if let Ok(cap) = v.parse::<usize>() {
            return cap;
        }
    }
    DEFAULT_ORDER_CAP
}

fn report_options(cli: &Cli) -> ReportOptions {
    ReportOptions {
        subgroup_budget: cli.subgroup_budget,
        node_budget: cli.budget,
        seed: cli.seed,
        ..ReportOptions::default()
    }
}

fn render<T: serde::Serialize + TextRender>(cli: &Cli, value: &T) -> String {
    match cli.format {
        Format::Json => serde_json::to_string_pretty(value).expect("serializable output"),
        Format::Text => value.text(),
    }
}

fn dispatch(cli: &Cli) -> Result<(String, i32), CliError> {
    let cat = Catalog::with_cap(effective_cap(cli));
    match &cli.command {
        Command::Group(GroupCmd::Info { spec }) => {
            let g = cat.parse(spec)?;
            let cd = conjugacy_classes(&g);
            let out = GroupInfoOut {
                schema: 1,
                group: spec.clone(),
                order: g.order(),
                exponent: g.exponent(),
                abelian: g.is_abelian(),
                perfect: subgroup::is_perfect(&g),
                classes: cd.num_classes(),
                class_sizes: cd.sizes().to_vec(),
            };
            Ok((render(cli, &out), EXIT_OK))
        }
        Command::Group(GroupCmd::Validate { path }) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))?;
            let out = match Group::from_cayley_text(format!("file:{path}"), &text) {
                Ok(g) => match g.validate(cli.seed) {
                    Ok(v) => ValidateOut {
                        schema: 1,
                        file: path.clone(),
                        valid: true,
                        order: Some(v.order),
                        assoc_mode: Some(assoc_mode_name(&v.assoc)),
                        error: None,
                    },
                    Err(e) => ValidateOut {
                        schema: 1,
                        file: path.clone(),
                        valid: false,
                        order: Some(g.order()),
                        assoc_mode: None,
                        error: Some(e.to_string()),
                    },
                },
                Err(e) => ValidateOut {
                    schema: 1,
                    file: path.clone(),
                    valid: false,
                    order: None,
                    assoc_mode: None,
                    error: Some(e.to_string()),
                },
            };
            Ok((render(cli, &out), EXIT_OK))
        }
        Command::Pfree(PfreeCmd::Search { spec, iters, restarts }) => {
            let g = cat.parse(spec)?;
            let mut best: Option<pfree::PfreeCertificate> = None;
            for r in 0..(*restarts).max(1) {
                let greedy = pfree::greedy_pfree(&g, SplitMix64::derived(cli.seed, r).next_u64());
                let cert = pfree::local_search(&g, &greedy.set, *iters, SplitMix64::derived(cli.seed, 1_000 + r).next_u64());
                if best.as_ref().is_none_or(|b| cert.size > b.size) {
                    best = Some(cert);
                }
            }
            let out = certificate_out(spec, &g, &best.unwrap());
            Ok((render(cli, &out), EXIT_OK))
        }
        Command::Pfree(PfreeCmd::Exact { spec }) => {
            let g = cat.parse(spec)?;
            let cert = pfree::exact_max_pfree(&g, cli.budget);
            let code = if cert.optimal { EXIT_OK } else { EXIT_TRUNCATED };
            let out = certificate_out(spec, &g, &cert);
            Ok((render(cli, &out), code))
        }
        Command::Pfree(PfreeCmd::Construct { spec }) => {
            let g = cat.parse(spec)?;
            match pfree::abelian_pullback(&g) {
                Some(cert) => Ok((render(cli, &certificate_out(spec, &g, &cert)), EXIT_OK)),
                None => {
                    let out = NotFoundOut {
                        schema: 1,
                        group: spec.clone(),
                        found: false,
                        reason: "group is perfect: no abelian quotient to pull back from".into(),
                    };
                    Ok((render(cli, &out), EXIT_OK))
                }
            }
        }
        Command::Pfree(PfreeCmd::Check { spec, set }) => {
            let g = cat.parse(spec)?;
            let a = parse_set_arg(&g, set)?;
            let out = CheckOut {
                schema: 1,
                group: spec.clone(),
                size: a.len(),
                density: ratio_of(&g, a.len()),
                product_free: pfree::is_product_free(&g, &a),
            };
            Ok((render(cli, &out), EXIT_OK))
        }
        Command::Degrees { spec, timings } => {
            let g = cat.parse(spec)?;
            let started = std::time::Instant::now();
            let table = chartab::char_degrees(&g)?;
            let out = DegreesOut {
                schema: 1,
                group: spec.clone(),
                order: g.order(),
                prime: table.prime_used,
                degrees: table.degrees,
                elapsed_ms: timings.then(|| started.elapsed().as_millis() as u64),
            };
            Ok((render(cli, &out), EXIT_OK))
        }
        Command::Quasirandom { spec } => {
            let g = cat.parse(spec)?;
            let table = chartab::char_degrees(&g)?;
            let out = QuasirandomOut {
                schema: 1,
                group: spec.clone(),
                order: g.order(),
                d: table.min_nontrivial().unwrap_or(2),
                prime: table.prime_used,
                degrees: table.degrees,
            };
            Ok((render(cli, &out), EXIT_OK))
        }
        Command::Triple { spec, a, b, c } => {
            let g = cat.parse(spec)?;
            let (sa, sb, sc) = (parse_set_arg(&g, a)?, parse_set_arg(&g, b)?, parse_set_arg(&g, c)?);
            if sa.is_empty() || sb.is_empty() || sc.is_empty() {
                return Err(CliError::Usage("triple needs three nonempty sets".into()));
            }
            let check = structure::triple_product_check(&g, &sa, &sb, &sc);
            let out = TripleOut {
                schema: 1,
                group: spec.clone(),
                sizes: [sa.len(), sb.len(), sc.len()],
                covered: matches!(check, structure::TripleCheck::Covered),
                missing: match check {
                    structure::TripleCheck::Covered => None,
                    structure::TripleCheck::Witness(x) => Some(x),
                },
            };
            Ok((render(cli, &out), EXIT_OK))
        }
        Command::Audit(AuditCmd::Np { spec, trials }) => {
            let g = cat.parse(spec)?;
            let audit = structure::nikolov_pyber_audit(&g, *trials, cli.seed)?;
            let out = NpOut {
                schema: 1,
                group: spec.clone(),
                order: g.order(),
                d: audit.d,
                threshold: audit.threshold,
                trials: audit.trials,
                passes: audit.passes,
                vacuous: audit.vacuous,
                seed: audit.seed,
            };
            Ok((render(cli, &out), EXIT_OK))
        }
        Command::Audit(AuditCmd::Mixing { spec, density, trials }) => {
            let g = cat.parse(spec)?;
            if !(*density > 0.0 && *density <= 1.0) {
                return Err(CliError::Usage("--density must lie in (0, 1]".into()));
            }
            let rep = structure::mixing_audit(&g, *density, *trials, cli.seed);
            let out = MixingOut {
                schema: 1,
                group: spec.clone(),
                order: g.order(),
                density: rep.density,
                subset_size: rep.subset_size,
                trials: rep.trials,
                seed: rep.seed,
                min_ratio: rep.min_ratio,
                mean_ratio: rep.mean_ratio,
            };
            Ok((render(cli, &out), EXIT_OK))
        }
        Command::Chain(ChainCmd::Build { spec, set, length }) => {
            let g = cat.parse(spec)?;
            let a = parse_set_arg(&g, set)?;
            if !pfree::is_product_free(&g, &a) {
                return Err(CliError::Usage("chain build needs a product-free base set".into()));
            }
            let build = structure::chain_construct(&g, &a, (*length).max(1), cli.subgroup_budget);
            let out = ChainBuildOut {
                schema: 1,
                group: spec.clone(),
                found: build.certificate.is_some(),
                truncated: build.truncated,
                base: a.to_indices(),
                k: build.certificate.as_ref().map(|c| c.k),
                sets: build.certificate.as_ref().map(|c| c.sets.iter().map(|s| s.to_indices()).collect()),
            };
            let code = if build.truncated { EXIT_TRUNCATED } else { EXIT_OK };
            Ok((render(cli, &out), code))
        }
        Command::Chain(ChainCmd::Verify { spec, chain }) => {
            let g = cat.parse(spec)?;
            let text = std::fs::read_to_string(chain).map_err(|e| CliError::Io(format!("{chain}: {e}")))?;
            let file: structure::ChainFile =
                serde_json::from_str(&text).map_err(|e| CliError::Io(format!("{chain}: {e}")))?;
            let cert = file.to_certificate(&g).map_err(|e| CliError::Io(format!("{chain}: {e}")))?;
            let violations = structure::verify_chain(&g, &cert, &cert.base);
            let out = ChainVerifyOut {
                schema: 1,
                group: spec.clone(),
                ok: violations.is_empty(),
                violations: violations.iter().map(violation_name).collect(),
            };
            Ok((render(cli, &out), EXIT_OK))
        }
        Command::Finexp { spec, set, epsilon } => {
            let g = cat.parse(spec)?;
            if !(*epsilon > 0.0 && *epsilon < 1.0) {
                return Err(CliError::Usage("--epsilon must lie in (0, 1)".into()));
            }
            let a = parse_set_arg(&g, set)?;
            if !pfree::is_product_free(&g, &a) {
                return Err(CliError::Usage("finexp needs a product-free base set".into()));
            }
            let build = structure::finexp_structure(&g, &a, *epsilon, cli.subgroup_budget);
            let out = match &build.certificate {
                Some(c) => FinexpOut {
                    schema: 1,
                    group: spec.clone(),
                    found: true,
                    truncated: build.truncated,
                    epsilon: *epsilon,
                    subgroup: Some(c.subgroup.to_indices()),
                    index: Some(c.index),
                    coset_rep: Some(c.coset_rep),
                    coset: Some(c.coset.to_indices()),
                    delta: Some(c.delta),
                    missing_fraction: Some(c.missing),
                },
                None => FinexpOut {
                    schema: 1,
                    group: spec.clone(),
                    found: false,
                    truncated: build.truncated,
                    epsilon: *epsilon,
                    subgroup: None,
                    index: None,
                    coset_rep: None,
                    coset: None,
                    delta: None,
                    missing_fraction: None,
                },
            };
            let code = if build.truncated { EXIT_TRUNCATED } else { EXIT_OK };
            Ok((render(cli, &out), code))
        }
        Command::Report { spec } => {
            let g = cat.parse(spec)?;
            let report = structure::equivalence_report(&g, &report_options(cli))?;
            let truncated = !report.notes.is_empty();
            let out = report_out(spec, &report);
            let code = if truncated { EXIT_TRUNCATED } else { EXIT_OK };
            Ok((render(cli, &out), code))
        }
        Command::Sweep { specs, analyses } => {
            let mut flags = SweepAnalyses::default();
            for a in analyses.split(',').filter(|s| !s.is_empty()) {
                match a.trim() {
                    "d" | "degrees" => flags.degrees = true,
                    "pfree" => flags.pfree = true,
                    other => return Err(CliError::Usage(format!("unknown analysis {other:?}"))),
                }
            }
            let spec_list: Vec<String> = specs.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
            if spec_list.is_empty() {
                return Err(CliError::Usage("sweep needs at least one group spec".into()));
            }
            let rows = structure::family_sweep(&cat, &spec_list, flags, &report_options(cli));
            let out = SweepOut { schema: 1, rows };
            Ok((render(cli, &out), EXIT_OK))
        }
    }
}

fn assoc_mode_name(mode: &pfree_lab::group::AssocMode) -> String {
    match mode {
        pfree_lab::group::AssocMode::Full => "full".into(),
        pfree_lab::group::AssocMode::Sampled { triples, seed } => format!("sampled:{triples}:{seed}"),
    }
}

fn violation_name(v: &structure::ChainViolation) -> String {
    serde_json::to_value(v)
        .ok()
        .and_then(|j| match j {
            serde_json::Value::String(s) => Some(s),
            serde_json::Value::Object(m) => m.keys().next().cloned(),
            _ => None,
        })
        .unwrap_or_else(|| format!("{v:?}"))
}

fn certificate_out(spec: &str, g: &Group, cert: &pfree::PfreeCertificate) -> PfreeOut {
    PfreeOut {
        schema: 1,
        group: spec.to_string(),
        order: g.order(),
        method: cert.method,
        size: cert.size,
        density: cert.density,
        optimal: cert.optimal,
        elements: cert.set.to_indices(),
    }
}

fn ratio_of(g: &Group, k: usize) -> pfree_lab::ratio::Ratio {
    pfree_lab::ratio::Ratio::new(k as u64, g.order() as u64)
}

fn report_out(spec: &str, r: &structure::StructureReport) -> ReportOut {
    ReportOut {
        schema: 1,
        group: spec.to_string(),
        order: r.order,
        exponent: r.exponent,
        perfect: r.perfect,
        quasirandom_degree: r.quasirandom_degree,
        degrees: r.degrees.clone(),
        best_pfree: BestPfreeOut {
            method: r.best_pfree.method,
            size: r.best_pfree.size,
            density: r.best_pfree.density,
            optimal: r.best_pfree.optimal,
            elements: r.best_pfree.set.to_indices(),
        },
        min_proper_subgroup_index: r.min_proper_subgroup_index,
        min_nonperfect_subgroup_index: r.min_nonperfect_subgroup_index,
        triple_witness: r.triple_witness.as_ref().map(|w| TripleWitnessOut {
            subgroup_order: w.subgroup_order,
            index: w.index,
            density: w.density,
            missing: w.missing,
        }),
        notes: r.notes.clone(),
    }
}
