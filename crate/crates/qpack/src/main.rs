use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use qpack::constructions::linkage::{linkage_explicit, to_packing_side, LinkageError};
use qpack::constructions::{lifted_mrd, trivial_construction, ConstructionError, TrivialKind};
use qpack::engine::{Database, Engine};
use qpack::ilp::{
    emit_extensive, kramer_mesner_reduce, IlpError, MatrixGroup, DEFAULT_GROUP_CAP,
    DEFAULT_VAR_BUDGET,
};
use qpack::spaces::{
    brute_force_max, is_packing, read_certificate, search_special_spread, write_certificate,
    PackingParams, SpreadSearchError,
};

#[derive(Parser)]
#[command(name = "qpack", version, about = "Bounds, constructions, and verification for subspace packings over finite fields", disable_help_subcommand = true)]
struct Cli {
    /// Emit one JSON object per result line
    #[arg(long, global = true)]
    json: bool,
    /// RNG seed for search subcommands
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Suppress wall-clock fields for byte-identical reruns
    #[arg(long, global = true)]
    deterministic: bool,
    /// Known-values database CSV (also settable via QPACK_DB)
    #[arg(long, global = true)]
    db: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct ParamArgs {
    /// Field order (prime power)
    #[arg(short)]
    q: u32,
    /// Ambient dimension
    #[arg(short)]
    n: u32,
    /// Block dimension
    #[arg(short)]
    k: u32,
    /// Covered dimension
    #[arg(short)]
    t: u32,
    /// Maximum multiplicity per t-subspace
    #[arg(short, long)]
    lambda: u64,
    /// Allow repeated blocks (the A^r quantity)
    #[arg(long)]
    repeated: bool,
}

impl ParamArgs {
    fn parse(&self) -> Result<PackingParams, CliError> {
        PackingParams::new(self.q, self.n, self.k, self.t, self.lambda, self.repeated)
            .map_err(|e| CliError::invalid(format!("invalid parameters: {e}")))
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Best lower and upper bounds with full provenance
    Bound(ParamArgs),
    /// Generate an explicit packing and write its certificate
    Construct {
        #[command(flatten)]
        params: ParamArgs,
        /// trivial-all | take-lambda | exclude-point | disjoint-subspace |
        /// lifted-mrd | linkage | special-spread | auto
        #[arg(long, default_value = "auto")]
        method: String,
        /// Certificate output path
        #[arg(short, long)]
        output: PathBuf,
        /// Enumeration / search budget
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
    },
    /// Check a certificate against the packing condition
    Verify {
        /// Certificate file written by `construct`
        certificate: PathBuf,
        #[arg(short)]
        t: u32,
        #[arg(short, long)]
        lambda: u64,
    },
    /// Exact maximum by branch-and-bound on small instances
    Brute {
        #[command(flatten)]
        params: ParamArgs,
        /// Search-node budget
        #[arg(long, default_value_t = 50_000_000)]
        budget: u64,
    },
    /// Reproduce a reference bound table and report differences
    Tables {
        #[arg(short)]
        q: u32,
        #[arg(short, long)]
        lambda: u64,
        #[arg(long, default_value_t = 8)]
        nmax: u32,
        /// md | csv | tex | json
        #[arg(long, default_value = "md")]
        format: String,
    },
    /// Export the packing ILP (extensive or orbit-reduced) as LP files
    Ilp {
        #[command(flatten)]
        params: ParamArgs,
        /// Model output path (a sidecar .map file is written next to it)
        #[arg(short, long)]
        output: PathBuf,
        /// Add auxiliary rows from derived sub-instance upper bounds
        #[arg(long)]
        aux: bool,
        /// Generator file for an orbit reduction: matrices as rows of
        /// space-separated entries, generators separated by blank lines
        #[arg(long)]
        group: Option<PathBuf>,
        /// Variable budget
        #[arg(long, default_value_t = DEFAULT_VAR_BUDGET)]
        budget: u64,
    },
    /// Validate or dump the known-values database
    Db {
        /// Print the database as CSV
        #[arg(long)]
        dump: bool,
    },
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn invalid(message: String) -> CliError {
        CliError { code: 1, message }
    }

    fn budget(message: String) -> CliError {
        CliError { code: 2, message }
    }
}

impl From<ConstructionError> for CliError {
    fn from(e: ConstructionError) -> CliError {
        match e {
            ConstructionError::BudgetExceeded(_) => CliError::budget(e.to_string()),
            _ => CliError::invalid(e.to_string()),
        }
    }
}

impl From<IlpError> for CliError {
    fn from(e: IlpError) -> CliError {
        match e {
            IlpError::BudgetExceeded(..) | IlpError::GroupTooLarge(_) => {
                CliError::budget(e.to_string())
            }
            _ => CliError::invalid(e.to_string()),
        }
    }
}

fn load_engine(cli: &Cli) -> Result<Engine, CliError> {
    let path = cli
        .db
        .clone()
        .or_else(|| std::env::var_os("QPACK_DB").map(PathBuf::from));
    match path {
        Some(p) => {
            let db = Database::load(&p)
                .map_err(|e| CliError::invalid(format!("database {}: {e}", p.display())))?;
            Ok(Engine::new(db))
        }
        None => Ok(Engine::seeded()),
    }
}

fn emit(json: bool, obj: serde_json::Value, human: &str) {
    if json {
        println!("{obj}");
    } else {
        println!("{human}");
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let started = Instant::now();
    match &cli.cmd {
        Cmd::Bound(args) => {
            let p = args.parse()?;
            let engine = load_engine(cli)?;
            let lower = engine.best_lower(p);
            let upper = engine.best_upper(p);
            if cli.json {
                let mut obj = serde_json::json!({
                    "params": p,
                    "lower": lower.value.to_string(),
                    "upper": upper.value.to_string(),
                    "lower_provenance": lower.prov,
                    "upper_provenance": upper.prov,
                });
                if !cli.deterministic {
                    obj["elapsed_ms"] =
                        serde_json::json!(started.elapsed().as_millis() as u64);
                }
                println!("{obj}");
            } else {
                println!("lower {} ({})", lower.value, lower.prov.rule);
                print!("{}", indent(&lower.prov.render()));
                println!("upper {} ({})", upper.value, upper.prov.rule);
                print!("{}", indent(&upper.prov.render()));
            }
            Ok(())
        }
        Cmd::Construct { params, method, output, budget } => {
            let p = params.parse()?;
            let (collection, rule) = build(p, method, cli.seed, *budget)?;
            let verdict = is_packing(&collection, p.t as usize, p.lambda)
                .map_err(|e| CliError::invalid(e.to_string()))?;
            if !verdict.valid {
                return Err(CliError::invalid(format!(
                    "internal: {rule} produced an invalid packing (max coverage {})",
                    verdict.max_coverage
                )));
            }
            let mut file = std::io::BufWriter::new(
                std::fs::File::create(output)
                    .map_err(|e| CliError::invalid(format!("{}: {e}", output.display())))?,
            );
            write_certificate(&collection, &mut file)
                .map_err(|e| CliError::invalid(format!("writing certificate: {e}")))?;
            file.flush()
                .map_err(|e| CliError::invalid(format!("writing certificate: {e}")))?;
            emit(
                cli.json,
                serde_json::json!({
                    "params": p,
                    "method": rule,
                    "size": collection.cardinality(),
                    "certificate": output.display().to_string(),
                }),
                &format!(
                    "wrote {} blocks ({}) to {}",
                    collection.cardinality(),
                    rule,
                    output.display()
                ),
            );
            Ok(())
        }
        Cmd::Verify { certificate, t, lambda } => {
            let file = std::fs::File::open(certificate)
                .map_err(|e| CliError::invalid(format!("{}: {e}", certificate.display())))?;
            let collection = read_certificate(std::io::BufReader::new(file))
                .map_err(|e| CliError::invalid(format!("bad certificate: {e}")))?;
            let verdict = is_packing(&collection, *t as usize, *lambda)
                .map_err(|e| CliError::invalid(e.to_string()))?;
            emit(
                cli.json,
                serde_json::json!({
                    "valid": verdict.valid,
                    "blocks": collection.cardinality(),
                    "max_coverage": verdict.max_coverage,
                    "repeats": collection.has_repeats(),
                }),
                &format!(
                    "{}: {} blocks, max coverage {} (lambda {})",
                    if verdict.valid { "valid" } else { "INVALID" },
                    collection.cardinality(),
                    verdict.max_coverage,
                    lambda
                ),
            );
            if verdict.valid {
                Ok(())
            } else {
                Err(CliError::invalid("packing condition violated".into()))
            }
        }
        Cmd::Brute { params, budget } => {
            let p = params.parse()?;
            let result = brute_force_max(p, *budget)
                .map_err(|e| CliError::invalid(e.to_string()))?;
            let mut obj = serde_json::json!({
                "params": p,
                "size": result.size,
                "exact": result.exact,
                "nodes": result.nodes,
            });
            if cli.json && !cli.deterministic {
                obj["elapsed_ms"] = serde_json::json!(started.elapsed().as_millis() as u64);
            }
            emit(
                cli.json,
                obj,
                &format!(
                    "{} {} ({} nodes)",
                    if result.exact { "maximum" } else { "best found" },
                    result.size,
                    result.nodes
                ),
            );
            Ok(())
        }
        Cmd::Tables { q, lambda, nmax, format } => {
            let engine = load_engine(cli)?;
            let report = engine
                .reproduce_table(*q, *lambda, *nmax)
                .map_err(|e| CliError::invalid(e.to_string()))?;
            if cli.json {
                println!("{}", report.render_json().trim_end());
            } else {
                print!("{}", report.render(format));
                for f in &report.findings {
                    println!("finding: {f}");
                }
                for n in &report.notes {
                    println!("note: {n}");
                }
            }
            if report.findings.is_empty() {
                Ok(())
            } else {
                Err(CliError::invalid(format!(
                    "{} table findings",
                    report.findings.len()
                )))
            }
        }
        Cmd::Ilp { params, output, aux, group, budget } => {
            let p = params.parse()?;
            let obj = match group {
                None => {
                    let engine = if *aux { Some(load_engine(cli)?) } else { None };
                    let model = emit_extensive(p, engine.as_ref(), output, *budget)?;
                    serde_json::json!({
                        "params": p,
                        "variables": model.num_vars(),
                        "constraints": model.constraints.len(),
                        "model": output.display().to_string(),
                    })
                }
                Some(path) => {
                    let generators = parse_generators(path)?;
                    let g =
                        MatrixGroup::from_generators(p.q, p.n as usize, generators, DEFAULT_GROUP_CAP)?;
                    let (model, reps, stats) = kramer_mesner_reduce(p, &g, *budget)?;
                    model.write_files(output, &reps)?;
                    if !stats.burnside_ok {
                        return Err(CliError::invalid(
                            "orbit count fails the Burnside consistency check".into(),
                        ));
                    }
                    serde_json::json!({
                        "params": p,
                        "group_order": stats.group_order,
                        "variables": model.num_vars(),
                        "constraints": model.constraints.len(),
                        "k_orbit_size_sum": stats.k_size_sum.to_string(),
                        "t_orbit_size_sum": stats.t_size_sum.to_string(),
                        "burnside_ok": stats.burnside_ok,
                        "model": output.display().to_string(),
                    })
                }
            };
            emit(
                cli.json,
                obj.clone(),
                &format!(
                    "wrote {} with {} variables, {} constraints (map: {})",
                    output.display(),
                    obj["variables"],
                    obj["constraints"],
                    output.with_extension("map").display()
                ),
            );
            Ok(())
        }
        Cmd::Db { dump } => {
            let engine = load_engine(cli)?;
            if *dump {
                print!("{}", engine.db().dump());
            } else {
                emit(
                    cli.json,
                    serde_json::json!({ "rows": engine.db().len(), "valid": true }),
                    &format!("database valid: {} rows", engine.db().len()),
                );
            }
            Ok(())
        }
    }
}

fn indent(text: &str) -> String {
    text.lines().map(|l| format!("  {l}\n")).collect()
}

fn build(
    p: PackingParams,
    method: &str,
    seed: u64,
    budget: u64,
) -> Result<(qpack::spaces::PackingCollection, String), CliError> {
    let trivial = |kind| -> Result<_, CliError> {
        let r = trivial_construction(kind, p, budget)?;
        let c = r
            .collection
            .ok_or_else(|| CliError::budget(format!("size {} exceeds budget {budget}", r.size)))?;
        Ok((c, r.method.to_string()))
    };
    match method {
        "trivial-all" => trivial(TrivialKind::All),
        "take-lambda" => trivial(TrivialKind::TakeLambda),
        "exclude-point" => trivial(TrivialKind::ExcludePoint),
        "disjoint-subspace" => trivial(TrivialKind::DisjointSubspace),
        "lifted-mrd" => {
            let delta = (p.k - p.t + 1) as usize;
            let c = lifted_mrd(p.q, p.n as usize, p.k as usize, delta, p.lambda + 1, budget)
                .map_err(|e| CliError::invalid(e.to_string()))?;
            Ok((c, "lifted-mrd".into()))
        }
        "linkage" => {
            let b = qpack::bounds::CoveringParams::from_packing(p);
            let (cover, _trace) = linkage_explicit(b, budget).map_err(|e| match e {
                LinkageError::BudgetExceeded(n) => {
                    CliError::budget(format!("budget of {n} blocks exceeded"))
                }
                other => CliError::invalid(other.to_string()),
            })?;
            let c = to_packing_side(&cover).map_err(|e| CliError::invalid(e.to_string()))?;
            Ok((c, "linkage".into()))
        }
        "special-spread" => {
            if (p.q, p.n, p.k, p.t, p.lambda) != (2, 6, 4, 2, 2) {
                return Err(CliError::invalid(
                    "special-spread is specific to (q,n,k,t,lambda) = (2,6,4,2,2)".into(),
                ));
            }
            let lines = search_special_spread(seed, budget).map_err(|e| match e {
                SpreadSearchError::BudgetExhausted(n) => {
                    CliError::budget(format!("spread search budget exhausted after {n} nodes"))
                }
                other => CliError::invalid(other.to_string()),
            })?;
            let solids = lines.dual().map_err(|e| CliError::invalid(e.to_string()))?;
            Ok((solids, "special-spread".into()))
        }
        "auto" => {
            if let Some(r) = qpack::constructions::exact_rules(p, budget) {
                let method = r.method.to_string();
                if let Some(c) = r.collection {
                    return Ok((c, method));
                }
                return Err(CliError::budget(format!(
                    "size {} exceeds budget {budget}",
                    r.size
                )));
            }
            trivial(TrivialKind::TakeLambda)
        }
        other => Err(CliError::invalid(format!("unknown method {other:?}"))),
    }
}

fn parse_generators(path: &Path) -> Result<Vec<Vec<Vec<u32>>>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))?;
    let mut generators = Vec::new();
    let mut current: Vec<Vec<u32>> = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            if !current.is_empty() {
                generators.push(std::mem::take(&mut current));
            }
            continue;
        }
        let row: Result<Vec<u32>, _> = line.split_whitespace().map(str::parse).collect();
        current.push(row.map_err(|e| CliError::invalid(format!("bad generator entry: {e}")))?);
    }
    if !current.is_empty() {
        generators.push(current);
    }
    Ok(generators)
}

fn main() -> ExitCode {
    // die silently instead of panicking when the consumer closes the pipe
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version requests are successful exits; everything else
            // is a usage error
            if e.use_stderr() {
                let _ = e.print();
                return ExitCode::from(64);
            }
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
