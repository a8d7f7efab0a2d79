//! Command-line front end: thin dispatch onto the library.
//!
//! Scores on the command line are written in *half-units* (twice the
//! score), so they are always plain integers: `--score 0,0,0` is the
//! center, `--score -2,0,2` means (-1, 0, 1). Exit codes: 0 success,
//! 2 invalid input, 3 infeasible score (empty fiber), 4 falsified
//! structure check, 5 enumeration cap exceeded.

use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::coupling::verify_contraction;
use crate::dynamics::{
    exact_tv_curve, mixing_time_exact, occupancy_check, tv_csv, WalkKernel, WeightedMetric,
};
use crate::error::{Error, Result};
use crate::interchange::{
    build_interchange_graph, enumerate_fiber, graph_metrics, InterchangeGraph,
};
use crate::networks::{
    classify_network, crystal_statistics, distance_two_pairs, extended_networks_and_crystals,
    interchange_network, NetworkCensus,
};
use crate::signed::{CompleteSignedGraph, RootType, ScoreVector};
use crate::verify::{verify_type, VerifyOptions};

#[derive(Parser, Debug)]
#[command(
    name = "coxeter",
    about = "Coxeter tournaments, interchange multigraphs, and exact mixing verification",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Enumerate the fiber of a score (all tournaments attaining it).
    Fiber(CommonArgs),
    /// Build the interchange multigraph of a fiber (JSON or DOT).
    Graph(CommonArgs),
    /// Classify all two-step networks of a fiber and report crystals.
    Networks(CommonArgs),
    /// Exact TV curve, mixing time, and optional sampled walk.
    Walk(CommonArgs),
    /// Exact coupling contraction table for every adjacent pair.
    Couple(CommonArgs),
    /// Run the full structural check suite for a type and player count.
    Verify(CommonArgs),
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// Root-system type: A, B, C or D.
    #[arg(long = "type", value_name = "TYPE")]
    pub root_type: String,

    /// Player count.
    #[arg(long)]
    pub n: usize,

    /// Score in comma-separated half-units, e.g. `-2,0,2`.
    #[arg(long, allow_hyphen_values = true)]
    pub score: Option<String>,

    /// Seed for all randomized steps.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Sampled walk length for `walk` (0 skips the sampled walk).
    #[arg(long, default_value_t = 0)]
    pub steps: usize,

    /// TV-curve horizon for `walk` (defaults to the exact mixing time).
    #[arg(long)]
    pub horizon: Option<i64>,

    /// Raise the per-type enumeration cap on n.
    #[arg(long)]
    pub cap: Option<usize>,

    /// Output file (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Output format: json, dot or csv (per-command default: json).
    #[arg(long)]
    pub format: Option<String>,

    /// Worker thread count (defaults to available cores; results do not
    /// depend on it).
    #[arg(long)]
    pub threads: Option<usize>,
}

/// Fully resolved run configuration, echoed into every output.
#[derive(Serialize, Debug, Clone)]
pub struct RunConfig {
    pub command: String,
    #[serde(rename = "type")]
    pub root_type: String,
    pub n: usize,
    pub score_halves: Option<Vec<i32>>,
    pub seed: u64,
    pub steps: usize,
    pub horizon: Option<i64>,
    pub cap: Option<usize>,
    pub format: String,
    pub threads: Option<usize>,
}

struct Resolved {
    config: RunConfig,
    root_type: RootType,
    score: Option<ScoreVector>,
}

fn resolve(command: &str, args: &CommonArgs, default_format: &str) -> Result<Resolved> {
    let root_type = RootType::parse(&args.root_type)?;
    let score = match &args.score {
        None => None,
        Some(s) => {
            let halves: std::result::Result<Vec<i32>, _> =
                s.split(',').map(|x| x.trim().parse::<i32>()).collect();
            let halves = halves.map_err(|e| {
                Error::InvalidInput(format!("bad score {s:?}: {e} (use half-unit integers)"))
            })?;
            if halves.len() != args.n {
                return Err(Error::InvalidInput(format!(
                    "score has {} entries but n = {}",
                    halves.len(),
                    args.n
                )));
            }
            Some(ScoreVector::from_halves(halves))
        }
    };
    if let Some(h) = args.horizon {
        if h < 0 {
            return Err(Error::InvalidInput("horizon must be nonnegative".into()));
        }
    }
    let format = args
        .format
        .clone()
        .unwrap_or_else(|| default_format.to_string());
    if !["json", "dot", "csv", "text"].contains(&format.as_str()) {
        return Err(Error::InvalidInput(format!("unknown format {format:?}")));
    }
    if let Some(t) = args.threads {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global();
    }
    Ok(Resolved {
        config: RunConfig {
            command: command.into(),
            root_type: args.root_type.clone(),
            n: args.n,
            score_halves: score.as_ref().map(|s| s.halves().to_vec()),
            seed: args.seed,
            steps: args.steps,
            horizon: args.horizon,
            cap: args.cap,
            format,
            threads: args.threads,
        },
        root_type,
        score,
    })
}

fn emit(args: &CommonArgs, content: &str) -> Result<()> {
    match &args.out {
        None => {
            print!("{content}");
            std::io::stdout().flush()?;
        }
        Some(path) => std::fs::write(path, content)?,
    }
    Ok(())
}

fn json_envelope(config: &RunConfig, result: serde_json::Value) -> String {
    let ts = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis() as u64)
        .unwrap_or(0);
    let doc = serde_json::json!({
        "config": config,
        "meta": { "timestamp_unix_ms": ts },
        "result": result,
    });
    format!("{}\n", serde_json::to_string_pretty(&doc).unwrap())
}

fn csv_header(config: &RunConfig) -> String {
    format!(
        "# command={} type={} n={} score={:?} seed={} format=csv\n",
        config.command, config.root_type, config.n, config.score_halves, config.seed
    )
}

fn need_score(resolved: &Resolved) -> Result<ScoreVector> {
    resolved
        .score
        .clone()
        .ok_or_else(|| Error::InvalidInput("--score is required for this command".into()))
}

fn build_graph_for(resolved: &Resolved, args: &CommonArgs) -> Result<InterchangeGraph> {
    let graph = Arc::new(CompleteSignedGraph::new(resolved.root_type, args.n)?);
    let score = need_score(resolved)?;
    let fiber = enumerate_fiber(&graph, &score, args.cap)?;
    build_interchange_graph(&fiber)
}

/// Run a parsed command; the caller maps errors onto exit codes.
pub fn run(cli: Cli) -> Result<()> {
    match &cli.command {
        Command::Fiber(args) => {
            let resolved = resolve("fiber", args, "json")?;
            let graph = Arc::new(CompleteSignedGraph::new(resolved.root_type, args.n)?);
            let score = need_score(&resolved)?;
            let fiber = enumerate_fiber(&graph, &score, args.cap)?;
            if fiber.is_empty() {
                return Err(Error::InfeasibleScore);
            }
            emit(args, &json_envelope(&resolved.config, fiber.to_json()))
        }
        Command::Graph(args) => {
            let resolved = resolve("graph", args, "json")?;
            let ig = build_graph_for(&resolved, args)?;
            match resolved.config.format.as_str() {
                "dot" => emit(args, &ig.to_dot()),
                _ => {
                    let metrics = graph_metrics(&ig);
                    let result = serde_json::json!({
                        "graph": ig.to_json(),
                        "metrics": metrics,
                    });
                    emit(args, &json_envelope(&resolved.config, result))
                }
            }
        }
        Command::Networks(args) => {
            let resolved = resolve("networks", args, "json")?;
            let ig = build_graph_for(&resolved, args)?;
            let mut census = NetworkCensus::default();
            for (a, b) in distance_two_pairs(&ig) {
                let net = interchange_network(&ig, a, b)?;
                census.count(classify_network(&ig, &net)?.0);
            }
            let (extended, stats) = extended_networks_and_crystals(&ig)?;
            match resolved.config.format.as_str() {
                "csv" => {
                    let mut out = csv_header(&resolved.config);
                    out.push_str(&stats.to_csv(&ig));
                    emit(args, &out)
                }
                _ => {
                    let result = serde_json::json!({
                        "census": census,
                        "extended_networks": extended.len(),
                        "crystals": stats.crystals.len(),
                        "gamma": stats.gamma,
                    });
                    emit(args, &json_envelope(&resolved.config, result))
                }
            }
        }
        Command::Walk(args) => {
            let resolved = resolve("walk", args, "csv")?;
            let ig = Arc::new(build_graph_for(&resolved, args)?);
            let kernel = WalkKernel::new(Arc::clone(&ig));
            let mixing = mixing_time_exact(&kernel)?;
            let horizon = match args.horizon {
                Some(h) => h as usize,
                None => mixing.t_mix,
            };
            let curve = exact_tv_curve(&kernel, horizon)?;
            let occupancy = if args.steps > 0 {
                Some(occupancy_check(&kernel, 0, args.steps, args.seed))
            } else {
                None
            };
            match resolved.config.format.as_str() {
                "json" => {
                    let stats = crystal_statistics(&ig)?;
                    let alpha_min =
                        crate::coupling::verify_all_contractions(&ig, &stats)?;
                    let report = crate::dynamics::FiberDynamicsReport {
                        root_type: resolved.root_type.as_str().into(),
                        n: args.n,
                        s: ig.score.halves().to_vec(),
                        d: ig.degree,
                        gamma: stats.gamma,
                        t_mix: mixing.t_mix,
                        alpha_min,
                        vertex_count: ig.vertex_count(),
                    };
                    let result = serde_json::json!({
                        "report": report,
                        "tau": curve.tau,
                        "tau_error_bound": curve.error_bound,
                        "occupancy": occupancy,
                    });
                    emit(args, &json_envelope(&resolved.config, result))
                }
                _ => {
                    let mut out = csv_header(&resolved.config);
                    out.push_str(&format!("# t_mix={}\n", mixing.t_mix));
                    out.push_str(&tv_csv(&curve));
                    emit(args, &out)
                }
            }
        }
        Command::Couple(args) => {
            let resolved = resolve("couple", args, "csv")?;
            let ig = build_graph_for(&resolved, args)?;
            let stats = crystal_statistics(&ig)?;
            let metric = WeightedMetric::new(&stats);
            let mut records = Vec::new();
            for e in &ig.edges {
                for (u, v) in [(e.u, e.v), (e.v, e.u)] {
                    records.push(verify_contraction(&ig, &stats, &metric, u, v)?);
                }
            }
            match resolved.config.format.as_str() {
                "json" => {
                    let alpha_min = records.iter().map(|r| r.alpha).min();
                    let result = serde_json::json!({
                        "gamma": stats.gamma,
                        "d": ig.degree,
                        "pairs": records,
                        "alpha_min": alpha_min,
                    });
                    emit(args, &json_envelope(&resolved.config, result))
                }
                _ => {
                    let mut out = csv_header(&resolved.config);
                    out.push_str("u,v,case,start_weight,expected_weight,alpha\n");
                    for r in &records {
                        out.push_str(&format!(
                            "{},{},{:?},{},{},{}\n",
                            r.u, r.v, r.case, r.start_weight, r.expected_weight, r.alpha
                        ));
                    }
                    emit(args, &out)
                }
            }
        }
        Command::Verify(args) => {
            let resolved = resolve("verify", args, "text")?;
            let opts = VerifyOptions {
                cap: args.cap,
                seed: args.seed,
                ..VerifyOptions::default()
            };
            let report = verify_type(resolved.root_type, args.n, &opts)?;
            match resolved.config.format.as_str() {
                "json" => emit(
                    args,
                    &json_envelope(&resolved.config, serde_json::json!(report)),
                )?,
                _ => emit(args, &report.render())?,
            }
            if !report.all_passed() {
                return Err(Error::Falsified(
                    "one or more verification checks failed".into(),
                ));
            }
            Ok(())
        }
    }
}
