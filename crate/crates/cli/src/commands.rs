use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context as _, Result};
use serde::Serialize;

use metasketch::algorithms::{write_distances, write_ranks};
use metasketch::analyzer::{
    correlation_report, expected_cost, Algo, BoundsReport, Check, CorrelationRun, Relation,
};
use metasketch::engine::write_csv_all;
use metasketch::graph::{
    degree_cdf, diameter, fit_powerlaw, largest_component, write_edge_list, DEFAULT_EXACT_DIAMETER_CAP,
};
use metasketch::metagraph::{meta_eccentricity, MetaGraphExport};
use metasketch::partition::write_partition;
use metasketch::seed::derive;
use metasketch::{
    bfs_subgraph, bfs_vertex, build_metagraph, meta_stats, pr_subgraph, pr_vertex, validate, ClusterSpec,
    Diameter, DiameterMode, Graph, MetaGraph, MetaStats, Model, PartitionLayout, PowerlawParams, RunOptions,
    ValidationInput,
};

use crate::artifacts::*;
use crate::{
    AlgoArg, Command, Format, InputArgs, ModelArg, PartitionArgs, ReportKind, SimulateArgs, ValidateArgs,
};

/// Raised when `validate` finds failing claims; maps to exit code 1.
#[derive(Debug)]
pub struct ValidationFailed(pub Vec<String>);

impl fmt::Display for ValidationFailed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "validation failed: {}", self.0.join(", "))
    }
}

impl std::error::Error for ValidationFailed {}

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Generate { input, seed, out } => generate(&input, resolve_seed(seed), &out.out),
        Command::Partition {
            graph,
            partition: args,
            seed,
            out,
        } => partition(graph.as_deref(), &args, resolve_seed(seed), &out.out),
        Command::Metagraph { out } => metagraph(&out.out),
        Command::Simulate { simulate: args, out } => simulate(&args, &out.out),
        Command::Validate { validate: args, out } => validate_dir(&args, &out.out),
        Command::Report {
            kind,
            format,
            run_dirs,
            out,
        } => report(kind, format, &run_dirs, &out.out),
        Command::Pipeline {
            input,
            partition: partition_args,
            simulate: simulate_args,
            validate: validate_args,
            seed,
            out,
        } => {
            let out = &out.out;
            let seed = resolve_seed(seed);
            generate(&input, seed, out)?;
            partition(None, &partition_args, seed, out)?;
            metagraph(out)?;
            simulate(&simulate_args, out)?;
            let validated = validate_dir(&validate_args, out);
            report(ReportKind::Runs, Format::Csv, &[], out)?;
            validated
        }
    }
}

/// An omitted seed is drawn from entropy; either way it is persisted in
/// the manifest.
fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(rand::random)
}

fn json_bytes<T: Serialize + ?Sized>(value: &T) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn generate(input: &InputArgs, seed: u64, out: &Path) -> Result<()> {
    let config = RunConfig {
        input: input.input.as_ref().map(|p| p.display().to_string()),
        generator: input.generate.map(|s| s.to_string()),
        seed: Some(seed),
        ..RunConfig::default()
    };
    let mut stage = Stage::new("generate", out, config)?;
    let g = match (&input.input, input.generate) {
        (Some(path), _) => load_graph(&mut stage, path)?,
        (None, Some(spec)) => spec.build(derive(seed, "generate"))?,
        (None, None) => bail!("one of --input or --generate is required"),
    };
    let mut bytes = Vec::new();
    write_edge_list(&g, &mut bytes)?;
    let path = stage.write(GRAPH, &bytes)?;
    stage.finish()?;
    println!("{}: {} vertices, {} edges", path.display(), g.n(), g.edge_count());
    Ok(())
}

fn partition(graph: Option<&Path>, args: &PartitionArgs, seed: u64, out: &Path) -> Result<()> {
    let graph_path = graph.map(Path::to_path_buf).unwrap_or_else(|| out.join(GRAPH));
    let config = RunConfig {
        input: Some(graph_path.display().to_string()),
        strategy: Some(args.strategy.to_string()),
        k: Some(args.machines),
        c: Some(args.cores),
        balance_factor: Some(args.balance_factor),
        seed: Some(seed),
        ..RunConfig::default()
    };
    let mut stage = Stage::new("partition", out, config)?;
    let bytes = stage.read(&graph_path)?;
    let g = metasketch::graph::read_edge_list(bytes.as_slice(), &graph_path.display().to_string())?;
    // Downstream stages read the graph from the output directory.
    if graph_path != out.join(GRAPH) {
        stage.write(GRAPH, &bytes)?;
    }
    let cluster = ClusterSpec::new(args.machines, args.cores)?;
    let layout = args
        .strategy
        .apply(&g, cluster, args.balance_factor, derive(seed, "partition"))?;
    let (mut map, mut sidecar) = (Vec::new(), Vec::new());
    write_partition(&g, &layout, &mut map, &mut sidecar)?;
    sidecar.push(b'\n');
    stage.write(PARTITION_MAP, &map)?;
    stage.write(PARTITION_SIDECAR, &sidecar)?;
    stage.finish()?;
    if layout.over_balance() {
        eprintln!(
            "warning: largest partition has {} vertices, above the balance cap {}",
            layout.max_partition_size(),
            layout.balance_cap()
        );
    }
    println!(
        "{} partitions ({}), sizes {:?}",
        layout.p(),
        layout.strategy(),
        layout.partition_sizes()
    );
    Ok(())
}

/// Graph, layout and meta-graph rebuilt from the directory's artifacts.
fn load_structure(stage: &mut Stage, dir: &Path) -> Result<(Graph, PartitionLayout, MetaGraph)> {
    let g = load_graph(stage, &dir.join(GRAPH))?;
    let layout = load_layout(stage, &g, dir)?;
    let mg = build_metagraph(&g, &layout)?;
    Ok((g, layout, mg))
}

fn metagraph(out: &Path) -> Result<()> {
    let mut stage = Stage::new("metagraph", out, RunConfig::default())?;
    let (g, layout, mg) = load_structure(&mut stage, out)?;
    let mut json = Vec::new();
    mg.write_json(&mut json)?;
    json.push(b'\n');
    stage.write(METAGRAPH, &json)?;
    let stats = meta_stats(&g, &mg, &layout)?;
    let mut csv = Vec::new();
    MetaStats::write_csv(std::slice::from_ref(&stats), &mut csv)?;
    stage.write(META_STATS, &csv)?;
    stage.finish()?;
    print!("{}", String::from_utf8_lossy(&csv));
    Ok(())
}

fn simulate(args: &SimulateArgs, out: &Path) -> Result<()> {
    let algo = match args.algo {
        AlgoArg::Pr => "pr",
        AlgoArg::Bfs => "bfs",
    };
    let models: &[Model] = match args.model {
        ModelArg::Vertex => &[Model::Vertex],
        ModelArg::Subgraph => &[Model::Subgraph],
        ModelArg::Both => &[Model::Vertex, Model::Subgraph],
    };
    let config = RunConfig {
        algorithm: Some(algo.into()),
        model: Some(format!("{:?}", args.model).to_ascii_lowercase()),
        source: args.source.filter(|_| args.algo == AlgoArg::Bfs),
        iterations: (args.algo == AlgoArg::Pr).then_some(args.iterations),
        damping: (args.algo == AlgoArg::Pr).then_some(args.damping),
        ..RunConfig::default()
    };
    let mut stage = Stage::new(
        if args.algo == AlgoArg::Pr {
            "simulate-pr"
        } else {
            "simulate-bfs"
        },
        out,
        config,
    )?;
    let (g, layout, mg) = load_structure(&mut stage, out)?;
    let options = RunOptions {
        max_supersteps: args.max_supersteps,
        threads: None,
    };

    let mut fresh = Vec::new();
    for &model in models {
        let record = match args.algo {
            AlgoArg::Pr => RunRecord::Pr(match model {
                Model::Vertex => pr_vertex(&g, &layout, args.iterations, args.damping, &options)?,
                Model::Subgraph => pr_subgraph(&g, &layout, &mg, args.iterations, args.damping, &options)?,
            }),
            AlgoArg::Bfs => {
                let label = args
                    .source
                    .ok_or_else(|| anyhow!("--source is required for bfs"))?;
                let source = *g
                    .label_index()
                    .get(&label)
                    .ok_or_else(|| anyhow!("source vertex {label} is not in the graph"))?;
                RunRecord::Bfs(match model {
                    Model::Vertex => bfs_vertex(&g, &layout, source, &options)?,
                    Model::Subgraph => bfs_subgraph(&g, &layout, &mg, source, &options)?,
                })
            }
        };
        if record.metrics().truncated {
            eprintln!(
                "warning: {} stopped at --max-supersteps {}",
                record.label(),
                args.max_supersteps
            );
        }
        fresh.push(record);
    }

    // Keep earlier runs on the same graph and layout; replace reruns.
    let provenance = fresh[0].metrics().provenance.clone();
    let mut runs: Vec<RunRecord> = if out.join(METRICS_JSON).is_file() {
        load_runs(None, out)?
    } else {
        Vec::new()
    };
    runs.retain(|r| r.metrics().provenance == provenance && fresh.iter().all(|f| f.label() != r.label()));
    runs.extend(fresh.iter().cloned());
    runs.sort_by_key(RunRecord::label);

    stage.write(METRICS_JSON, &json_bytes(&runs)?)?;
    let labels: Vec<String> = runs.iter().map(RunRecord::label).collect();
    let rows: Vec<_> = runs
        .iter()
        .zip(&labels)
        .map(|(r, label)| {
            let frontier = match r {
                RunRecord::Bfs(b) => Some(b.state.frontier_hist.as_slice()),
                RunRecord::Pr(_) => None,
            };
            (label.as_str(), r.metrics(), frontier)
        })
        .collect();
    let mut csv = Vec::new();
    write_csv_all(&rows, &mut csv)?;
    stage.write(METRICS_CSV, &csv)?;
    for r in &fresh {
        let mut values = Vec::new();
        match r {
            RunRecord::Pr(run) => write_ranks(&g, &run.state.rank, &mut values)?,
            RunRecord::Bfs(run) => write_distances(&g, &run.state.dist, &mut values)?,
        }
        stage.write(&format!("values-{}.tsv", r.label()), &values)?;
    }
    stage.finish()?;
    for r in &fresh {
        let m = r.metrics();
        println!(
            "{}: {} supersteps, {} logical / {} physical messages, makespan {}",
            r.label(),
            m.total_supersteps,
            m.totals.logical_msgs(),
            m.totals.physical_msgs,
            m.makespan_estimate
        );
    }
    Ok(())
}

fn validate_dir(args: &ValidateArgs, out: &Path) -> Result<()> {
    let mut stage = Stage::new("validate", out, RunConfig::default())?;
    let (g, layout, mg) = load_structure(&mut stage, out)?;
    let meta_path = out.join(METAGRAPH);
    let stored: MetaGraphExport = serde_json::from_slice(&stage.read(&meta_path)?)
        .with_context(|| format!("parsing {}", meta_path.display()))?;
    let runs = if out.join(METRICS_JSON).is_file() {
        load_runs(Some(&mut stage), out)?
    } else {
        Vec::new()
    };

    let mut input = ValidationInput::new(&g, &layout, &mg);
    input.hash_seeds = args.hash_seeds;
    input.max_dense_n = args.max_dense_n;
    for r in &runs {
        match r {
            RunRecord::Pr(run) => input.pr_runs.push(run),
            RunRecord::Bfs(run) => input.bfs_runs.push(run),
        }
    }
    let mut checks = validate(&input)?.checks;
    let rebuilt = mg.export();
    let mismatched = (stored != rebuilt) as u8;
    checks.push(Check::compare(
        "metagraph_artifact_matches",
        "plumbing",
        mismatched as f64,
        Relation::Eq,
        0.0,
        0.0,
        format!("{METAGRAPH} against the meta-graph rebuilt from the partition map"),
    ));
    let report = BoundsReport::new(checks);

    let mut json = Vec::new();
    report.write_json(&mut json)?;
    json.push(b'\n');
    stage.write(BOUNDS_JSON, &json)?;
    let text = report.to_text();
    stage.write(BOUNDS_TEXT, text.as_bytes())?;
    stage.finish()?;
    print!("{text}");
    if report.passed() {
        Ok(())
    } else {
        Err(ValidationFailed(report.failures().into_iter().map(String::from).collect()).into())
    }
}

#[derive(Serialize)]
struct GraphReport {
    vertices: usize,
    edges: usize,
    directed_edges: usize,
    mean_degree: f64,
    largest_component: usize,
    diameter: Diameter,
    powerlaw: Option<PowerlawParams>,
}

#[derive(Serialize)]
struct RunSummary {
    label: String,
    algo: String,
    model: String,
    supersteps: usize,
    active_units: usize,
    logical_msgs: usize,
    physical_msgs: usize,
    compute_cost: u64,
    makespan_estimate: u64,
    predicted_cost_per_superstep: u64,
    truncated: bool,
}

fn algo_of(r: &RunRecord) -> Algo {
    match r {
        RunRecord::Pr(_) => Algo::Pr,
        RunRecord::Bfs(_) => Algo::Bfs,
    }
}

/// Cost predicted from the meta-graph alone: PR charges the largest
/// meta-vertex once per superstep; BFS charges it once per wave over the
/// meta-graph, `ecc(source subgraph) + 1` waves.
fn predicted_total(mg: &MetaGraph, r: &RunRecord) -> Result<u64> {
    let per = expected_cost(mg, algo_of(r))?.per_superstep;
    Ok(match r {
        RunRecord::Pr(run) => per * run.state.iterations as u64,
        RunRecord::Bfs(run) => {
            let waves = meta_eccentricity(mg, mg.subgraph_of(run.state.source)) + 1;
            per * waves as u64
        }
    })
}

fn csv_bytes<T: Serialize>(rows: &[T]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    w.into_inner().map_err(|e| anyhow!("{e}"))
}

fn report(kind: ReportKind, format: Format, run_dirs: &[PathBuf], out: &Path) -> Result<()> {
    let config = RunConfig {
        extra: Some(
            [
                ("kind".to_string(), format!("{kind:?}").to_ascii_lowercase()),
                ("format".to_string(), format.extension().to_string()),
            ]
            .into(),
        ),
        ..RunConfig::default()
    };
    let stage_name: &'static str = match kind {
        ReportKind::Graph => "report-graph",
        ReportKind::Degree => "report-degree",
        ReportKind::Meta => "report-meta",
        ReportKind::Runs => "report-runs",
        ReportKind::Correlation => "report-correlation",
    };
    let mut stage = Stage::new(stage_name, out, config)?;
    let bytes = match kind {
        ReportKind::Graph => {
            let g = load_graph(&mut stage, &out.join(GRAPH))?;
            let mode = if g.n() <= DEFAULT_EXACT_DIAMETER_CAP {
                DiameterMode::Exact
            } else {
                DiameterMode::Estimate
            };
            let report = GraphReport {
                vertices: g.n(),
                edges: g.edge_count(),
                directed_edges: g.directed_edge_count(),
                mean_degree: degree_cdf(&g).mean_degree,
                largest_component: largest_component(&g).len(),
                diameter: diameter(&g, mode)?,
                powerlaw: fit_powerlaw(&g),
            };
            match format {
                Format::Json => json_bytes(&report)?,
                Format::Csv => {
                    let mut rows = vec![
                        ("vertices", report.vertices.to_string()),
                        ("edges", report.edges.to_string()),
                        ("directed_edges", report.directed_edges.to_string()),
                        ("mean_degree", format!("{:.6}", report.mean_degree)),
                        ("largest_component", report.largest_component.to_string()),
                        ("diameter", report.diameter.value.to_string()),
                        (
                            "diameter_is_lower_bound",
                            report.diameter.is_lower_bound.to_string(),
                        ),
                    ];
                    if let Some(p) = report.powerlaw {
                        rows.push(("powerlaw_beta", format!("{:.6}", p.exponent_beta)));
                        rows.push(("powerlaw_alpha", format!("{:.6}", p.scale_alpha)));
                    }
                    let mut w = csv::Writer::from_writer(Vec::new());
                    w.write_record(["metric", "value"])?;
                    for (k, v) in rows {
                        w.write_record([k, v.as_str()])?;
                    }
                    w.into_inner().map_err(|e| anyhow!("{e}"))?
                }
            }
        }
        ReportKind::Degree => {
            let g = load_graph(&mut stage, &out.join(GRAPH))?;
            let cdf = degree_cdf(&g);
            match format {
                Format::Json => json_bytes(&cdf)?,
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    w.write_record(["degree", "cumulative_fraction"])?;
                    for (d, f) in &cdf.rows {
                        w.write_record([d.to_string(), format!("{f:.6}")])?;
                    }
                    w.into_inner().map_err(|e| anyhow!("{e}"))?
                }
            }
        }
        ReportKind::Meta => {
            let (g, layout, mg) = load_structure(&mut stage, out)?;
            let stats = meta_stats(&g, &mg, &layout)?;
            match format {
                Format::Json => json_bytes(&stats)?,
                Format::Csv => {
                    let mut csv = Vec::new();
                    MetaStats::write_csv(std::slice::from_ref(&stats), &mut csv)?;
                    csv
                }
            }
        }
        ReportKind::Runs => {
            let (_, _, mg) = load_structure(&mut stage, out)?;
            let runs = load_runs(Some(&mut stage), out)?;
            let rows = runs
                .iter()
                .map(|r| {
                    let m = r.metrics();
                    Ok(RunSummary {
                        label: r.label(),
                        algo: r.algo().into(),
                        model: m.model.to_string(),
                        supersteps: m.total_supersteps,
                        active_units: m.totals.active_units,
                        logical_msgs: m.totals.logical_msgs(),
                        physical_msgs: m.totals.physical_msgs,
                        compute_cost: m.totals.compute_cost,
                        makespan_estimate: m.makespan_estimate,
                        predicted_cost_per_superstep: expected_cost(&mg, algo_of(r))?.per_superstep,
                        truncated: m.truncated,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            match format {
                Format::Json => json_bytes(&rows)?,
                Format::Csv => csv_bytes(&rows)?,
            }
        }
        ReportKind::Correlation => {
            let dirs: Vec<PathBuf> = if run_dirs.is_empty() {
                vec![out.to_path_buf()]
            } else {
                run_dirs.to_vec()
            };
            let mut rows = Vec::new();
            for dir in &dirs {
                let (_, layout, mg) = load_structure(&mut stage, dir)?;
                for r in load_runs(Some(&mut stage), dir)? {
                    if r.metrics().model != Model::Subgraph {
                        continue;
                    }
                    rows.push(CorrelationRun {
                        label: format!("{}/{}/{}", dir.display(), layout.strategy(), r.label()),
                        predicted: predicted_total(&mg, &r)? as f64,
                        simulated: r.metrics().makespan_estimate as f64,
                    });
                }
            }
            let report = correlation_report(&rows)?;
            match format {
                Format::Json => json_bytes(&report)?,
                Format::Csv => {
                    let mut csv = Vec::new();
                    report.write_csv(&mut csv)?;
                    csv
                }
            }
        }
    };
    stage.write(&format!("{stage_name}.{}", format.extension()), &bytes)?;
    stage.finish()?;
    print!("{}", String::from_utf8_lossy(&bytes));
    Ok(())
}
