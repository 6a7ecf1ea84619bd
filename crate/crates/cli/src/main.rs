//! Single binary exposing verify / construct / search / catalog /
//! admissible / gdd subcommands with machine-readable output.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or configuration
//! error, 3 unreachable construction.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use snark_designs::actions::ActionSpec;
use snark_designs::construct::{ConstructError, Constructor};
use snark_designs::corpus::{self, CorpusEntry};
use snark_designs::gdd::{CoverBudget, GddProvider, GddType};
use snark_designs::graphs::load_catalog;
use snark_designs::hosts::{admissible_residues, HostSpec};
use snark_designs::search::{local_search_any, SearchBudget, SearchProblem};
use snark_designs::verify::{verify_corpus, Status};

#[derive(Parser)]
#[command(
    name = "snarkdes",
    version,
    about = "Graph-design workbench: decompositions of complete and complete multipartite graphs into fixed cubic graphs"
)]
struct Cli {
    /// Optional config file (default: ./snarkdes.toml when present)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify decomposition files (or the embedded corpus when no paths given)
    Verify(VerifyArgs),
    /// Construct a design of order n for a catalog graph
    Construct(ConstructArgs),
    /// Search for base blocks under a prescribed action
    Search(SearchArgs),
    /// List the graph catalog
    Catalog {
        #[arg(long)]
        json: bool,
    },
    /// Print the admissible orders for designs of a cubic graph on v vertices
    Admissible {
        v: u64,
        #[arg(long)]
        json: bool,
    },
    /// Produce a group divisible design of the given type (e.g. `2^3 4^1 k=3`)
    Gdd(GddArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Files or directories of corpus-format entries
    paths: Vec<PathBuf>,
    #[arg(long)]
    json: bool,
    /// Stop at the first failing entry
    #[arg(long)]
    fail_fast: bool,
    /// Parallel verification jobs (default: available cores)
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct ConstructArgs {
    graph: String,
    n: usize,
    /// Write the decomposition (corpus grammar) to this file
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long)]
    json: bool,
    /// Directory of ingestable .gdd files
    #[arg(long)]
    gdd_path: Option<PathBuf>,
}

#[derive(Args)]
struct SearchArgs {
    graph: String,
    /// Host, e.g. "complete 28" or "multipartite mod 3 over 0..17"
    #[arg(long)]
    host: String,
    /// Action, e.g. "shift 4 mod 28 on 0..27" or "fix INF shift 3 mod 39 on 0..38"
    #[arg(long)]
    action: String,
    /// Number of base blocks
    #[arg(long)]
    blocks: usize,
    /// First seed to try
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// How many consecutive seeds to try
    #[arg(long, default_value_t = 1)]
    seeds: u64,
    #[arg(long)]
    max_steps: Option<u64>,
    #[arg(long)]
    restarts: Option<u64>,
    /// Parallel seed jobs (default: available cores)
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct GddArgs {
    /// Type tokens, e.g. 2^3 4^1 k=3
    #[arg(required = true)]
    ty: Vec<String>,
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Directory of ingestable .gdd files
    #[arg(long)]
    gdd_path: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Default)]
struct Config {
    gdd_path: Option<PathBuf>,
    search_max_steps: Option<u64>,
    search_restarts: Option<u64>,
    jobs: Option<usize>,
}

fn load_config(path: Option<&Path>) -> Result<Config, String> {
    let path = match path {
        Some(p) => p.to_path_buf(),
        None => {
            let default = PathBuf::from("snarkdes.toml");
            if !default.exists() {
                return Ok(Config::default());
            }
            default
        }
    };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let value: toml::Value = text
        .parse()
        .map_err(|e| format!("cannot parse config {}: {e}", path.display()))?;
    let mut cfg = Config::default();
    if let Some(s) = value.get("gdd_path").and_then(|v| v.as_str()) {
        cfg.gdd_path = Some(PathBuf::from(s));
    }
    if let Some(search) = value.get("search") {
        cfg.search_max_steps = search
            .get("max_steps")
            .and_then(|v| v.as_integer())
            .map(|v| v as u64);
        cfg.search_restarts = search
            .get("restarts")
            .and_then(|v| v.as_integer())
            .map(|v| v as u64);
    }
    cfg.jobs = value
        .get("jobs")
        .and_then(|v| v.as_integer())
        .map(|v| v as usize);
    Ok(cfg)
}

fn default_jobs(cfg: &Config, flag: Option<usize>) -> usize {
    flag.or(cfg.jobs)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |p| p.get()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match load_config(cli.config.as_deref()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let code = match cli.command {
        Command::Verify(args) => cmd_verify(args, &cfg),
        Command::Construct(args) => cmd_construct(args, &cfg),
        Command::Search(args) => cmd_search(args, &cfg),
        Command::Catalog { json } => cmd_catalog(json),
        Command::Admissible { v, json } => cmd_admissible(v, json),
        Command::Gdd(args) => cmd_gdd(args, &cfg),
    };
    ExitCode::from(code)
}

fn collect_entry_files(paths: &[PathBuf]) -> Result<Vec<PathBuf>, String> {
    let mut files = Vec::new();
    for p in paths {
        if p.is_dir() {
            let mut inner: Vec<PathBuf> = std::fs::read_dir(p)
                .map_err(|e| format!("cannot read {}: {e}", p.display()))?
                .filter_map(|e| e.ok())
                .map(|e| e.path())
                .filter(|p| p.extension().is_some_and(|x| x == "design"))
                .collect();
            inner.sort();
            files.extend(inner);
        } else {
            files.push(p.clone());
        }
    }
    Ok(files)
}

fn cmd_verify(args: VerifyArgs, cfg: &Config) -> u8 {
    let catalog = load_catalog();
    let owned: Vec<CorpusEntry>;
    let entries: &[CorpusEntry] = if args.paths.is_empty() {
        corpus::load_corpus()
    } else {
        let files = match collect_entry_files(&args.paths) {
            Ok(f) => f,
            Err(e) => {
                eprintln!("error: {e}");
                return 2;
            }
        };
        let mut all = Vec::new();
        for f in files {
            let text = match std::fs::read_to_string(&f) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: cannot read {}: {e}", f.display());
                    return 2;
                }
            };
            match corpus::parse(&text, catalog) {
                Ok(es) => all.extend(es),
                Err(e) => {
                    eprintln!("error: {}: {e}", f.display());
                    return 2;
                }
            }
        }
        owned = all;
        &owned
    };
    let jobs = default_jobs(cfg, args.jobs);
    let run = verify_corpus(entries, catalog, jobs, args.fail_fast);
    let mut config_error = false;
    for (id, result) in &run.results {
        match result {
            Ok(rep) => {
                let status = if rep.status == Status::Pass {
                    "pass"
                } else {
                    "fail"
                };
                if args.json {
                    println!(
                        "{}",
                        json!({
                            "entry": id,
                            "status": status,
                            "copies": rep.copies,
                            "violations": rep.violations.len(),
                        })
                    );
                } else {
                    println!(
                        "entry={id} status={status} copies={} violations={}",
                        rep.copies,
                        rep.violations.len()
                    );
                }
            }
            Err(e) => {
                config_error = true;
                if args.json {
                    println!(
                        "{}",
                        json!({"entry": id, "status": "error", "error": e.to_string()})
                    );
                } else {
                    println!("entry={id} status=error error={e}");
                }
            }
        }
    }
    if !args.json {
        println!(
            "total={} passed={} failed={}",
            run.results.len(),
            run.passed(),
            run.failed()
        );
    }
    if config_error {
        2
    } else if run.all_passed() {
        0
    } else {
        1
    }
}

fn cmd_construct(args: ConstructArgs, cfg: &Config) -> u8 {
    let catalog = load_catalog();
    let provider = GddProvider {
        gdd_path: args.gdd_path.clone().or_else(|| cfg.gdd_path.clone()),
        cover_budget: CoverBudget::default(),
    };
    let mut constructor = Constructor::new(catalog, corpus::load_corpus(), &provider);
    match constructor.construct(&args.graph, args.n) {
        Ok(d) => {
            let copies: u64 = {
                let rep = snark_designs::verify::verify(&d, catalog).expect("verified output");
                rep.copies
            };
            let entry = CorpusEntry {
                id: format!("construct.{}.k{}", args.graph.to_lowercase(), args.n),
                source: "construct".to_string(),
                decomposition: d,
            };
            let text = corpus::render(&entry);
            if let Some(path) = &args.output {
                if let Err(e) = std::fs::write(path, &text) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return 2;
                }
            } else if !args.json {
                print!("{text}");
            }
            if args.json {
                println!(
                    "{}",
                    json!({
                        "graph": args.graph,
                        "n": args.n,
                        "status": "verified",
                        "copies": copies,
                        "blocks": entry.decomposition.blocks.len(),
                    })
                );
            } else {
                eprintln!(
                    "graph={} n={} status=verified copies={copies}",
                    args.graph, args.n
                );
            }
            0
        }
        Err(e @ ConstructError::Inadmissible { .. }) => {
            eprintln!("error: {e}");
            2
        }
        Err(e @ ConstructError::Unreachable { .. }) => {
            eprintln!("error: {e}");
            3
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn cmd_search(args: SearchArgs, cfg: &Config) -> u8 {
    let catalog = load_catalog();
    let host_text = if args.host.starts_with("host ") {
        args.host.clone()
    } else {
        format!("host {}", args.host)
    };
    let host = match HostSpec::parse(&host_text) {
        Ok(h) => h,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let action_text = if args.action.starts_with("action ") {
        args.action.clone()
    } else {
        format!("action a0 {}", args.action)
    };
    let action = match ActionSpec::parse(&action_text, host.n()) {
        Ok((_, a)) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let problem = SearchProblem {
        host,
        graph: args.graph.clone(),
        action,
        block_count: args.blocks,
    };
    let budget = SearchBudget {
        max_steps: args.max_steps.or(cfg.search_max_steps).unwrap_or(2_000_000),
        max_restarts: args.restarts.or(cfg.search_restarts).unwrap_or(u64::MAX),
    };
    let jobs = default_jobs(cfg, args.jobs);
    match local_search_any(
        &problem,
        args.seed..args.seed + args.seeds,
        budget,
        jobs,
        catalog,
    ) {
        Ok(Some((seed, blocks))) => {
            let entry = CorpusEntry {
                id: format!("search.{}.n{}", args.graph.to_lowercase(), problem.host.n()),
                source: "search".to_string(),
                decomposition: snark_designs::verify::Decomposition {
                    host: problem.host.clone(),
                    graph: args.graph.clone(),
                    actions: BTreeMap::from([("a0".to_string(), problem.action.clone())]),
                    blocks,
                    provenance: format!("search seed {seed}"),
                },
            };
            let text = corpus::render(&entry);
            if let Some(path) = &args.output {
                if let Err(e) = std::fs::write(path, &text) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return 2;
                }
            } else if !args.json {
                print!("{text}");
            }
            if args.json {
                println!(
                    "{}",
                    json!({"graph": args.graph, "status": "found", "seed": seed})
                );
            } else {
                eprintln!("graph={} status=found seed={seed}", args.graph);
            }
            0
        }
        Ok(None) => {
            if args.json {
                println!("{}", json!({"graph": args.graph, "status": "exhausted"}));
            } else {
                eprintln!("graph={} status=exhausted", args.graph);
            }
            1
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn cmd_catalog(json: bool) -> u8 {
    for g in load_catalog().iter() {
        if json {
            let spectrum = g.spectrum.as_ref().map(
                |s| json!({"modulus": s.modulus, "residues": s.residues, "excluded": s.excluded}),
            );
            println!(
                "{}",
                json!({
                    "name": g.name,
                    "v": g.v,
                    "e": g.edge_count(),
                    "girth": g.girth(),
                    "spectrum": spectrum,
                })
            );
        } else {
            println!(
                "name={} v={} e={} girth={}",
                g.name,
                g.v,
                g.edge_count(),
                g.girth().map_or("none".to_string(), |x| x.to_string())
            );
        }
    }
    0
}

fn cmd_admissible(v: u64, json: bool) -> u8 {
    match admissible_residues(v) {
        Ok(a) => {
            if json {
                println!(
                    "{}",
                    json!({
                        "v": v,
                        "modulus": a.modulus,
                        "residues": a.residues,
                        "minimum_order": a.minimum_order,
                    })
                );
            } else {
                let residues: Vec<String> = a.residues.iter().map(|r| r.to_string()).collect();
                println!("n \u{2261} {} (mod {})", residues.join(", "), a.modulus);
                println!("n = 1 or n >= {}", a.minimum_order);
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn cmd_gdd(args: GddArgs, cfg: &Config) -> u8 {
    let ty = match GddType::parse(&args.ty.join(" ")) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let provider = GddProvider {
        gdd_path: args.gdd_path.clone().or_else(|| cfg.gdd_path.clone()),
        cover_budget: CoverBudget::default(),
    };
    match provider.provide(&ty) {
        Ok(g) => {
            let text = snark_designs::gdd::render_gdd_file(&g);
            if let Some(path) = &args.output {
                if let Err(e) = std::fs::write(path, &text) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return 2;
                }
            } else if !args.json {
                print!("{text}");
            }
            if args.json {
                println!(
                    "{}",
                    json!({"type": ty.render(), "status": "found", "blocks": g.blocks.len()})
                );
            } else {
                eprintln!(
                    "type={} status=found blocks={}",
                    ty.render(),
                    g.blocks.len()
                );
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            3
        }
    }
}
