// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! `netmotif` command line: subgraph censuses, motif scans, scaling fits,
//! centralities and triangle geography over period-stamped edge lists.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use serde_json::{json, Value};

use netmotif::geo::{CenterMethod, Sphere};
use netmotif::ingest::{parse_airports, parse_edges, PeriodSeries};
use netmotif::null::{ClassTarget, NullKind};
use netmotif::pipeline::{run_pipeline, PipelineConfig, RunBundle};
use netmotif::report::{emit_reports, EmitOptions};

#[derive(Parser)]
#[command(
    name = "netmotif",
    version,
    about = "Subgraph analytics for networks observed over time"
)]
struct Cli {
    /// Log progress to stderr (repeat for more detail).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Nested and non-nested subgraph counts per period.
    Census(Common),
    /// z-scores of subgraph counts against a null ensemble.
    Motifs {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        null: NullArgs,
    },
    /// Log-log fits of subgraph counts on edge counts across periods.
    Scaling(Common),
    /// Degree, subgraph and membership centralities with top-k rankings.
    Centrality {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 10)]
        top: usize,
    },
    /// Area and center of every triangle subgraph, plus the area density.
    Spatial {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        geo: GeoArgs,
    },
    /// Every analysis, written to an output directory.
    Pipeline {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        null: NullArgs,
        #[command(flatten)]
        geo: GeoArgs,
        #[arg(long, default_value_t = 10)]
        top: usize,
        /// Also write SVG log-log plots.
        #[arg(long)]
        svg: bool,
    },
}

#[derive(Args)]
struct Common {
    /// CSV with header `period,src,dst`.
    #[arg(long)]
    edges: PathBuf,
    /// CSV with header `label,lat_deg,lon_deg`.
    #[arg(long)]
    airports: Option<PathBuf>,
    /// Restrict to these periods (comma separated).
    #[arg(long, value_delimiter = ',')]
    period: Vec<String>,
    /// Class keys such as `M_7_3,Mt_30_4`.
    #[arg(long, value_delimiter = ',')]
    classes: Vec<String>,
    /// Write report files here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Master seed; generated and recorded when absent.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum NullChoice {
    Gnp,
    Rewire,
    Anneal,
}

impl From<NullChoice> for NullKind {
    fn from(c: NullChoice) -> NullKind {
        match c {
            NullChoice::Gnp => NullKind::Gnp,
            NullChoice::Rewire => NullKind::Rewire,
            NullChoice::Anneal => NullKind::RewireAnneal,
        }
    }
}

#[derive(Args)]
struct NullArgs {
    /// Null ensembles (comma separated).
    #[arg(long = "null", value_enum, value_delimiter = ',')]
    nulls: Vec<NullChoice>,
    #[arg(long, default_value_t = 1000)]
    replications: usize,
    #[arg(long, default_value_t = 100)]
    bootstrap: usize,
    /// Successful switches per rewired replication (default 100 m).
    #[arg(long)]
    rewire_steps: Option<usize>,
}

#[derive(Args)]
struct GeoArgs {
    /// Sphere radius; defaults to the Earth radius in nautical miles.
    #[arg(long)]
    radius: Option<f64>,
    /// Use the normalized mean of unit vectors as the triangle center.
    #[arg(long)]
    vector_center: bool,
    /// KDE bandwidth; Silverman's rule when absent.
    #[arg(long)]
    bandwidth: Option<f64>,
}

fn fail(messages: &[String]) -> ExitCode {
    let errors: Vec<Value> = messages.iter().map(|m| json!({ "message": m })).collect();
    eprintln!("{}", json!({ "errors": errors }));
    ExitCode::FAILURE
}

fn load(common: &Common) -> netmotif::Result<PeriodSeries> {
    let mut series = parse_edges(&common.edges)?;
    if !common.period.is_empty() {
        let missing: Vec<&String> = common
            .period
            .iter()
            .filter(|p| series.get(p).is_none())
            .collect();
        if !missing.is_empty() {
            return Err(netmotif::Error::InvalidArgument(format!(
                "unknown period(s): {}",
                missing
                    .iter()
                    .map(|s| s.as_str())
                    .collect::<Vec<_>>()
                    .join(", ")
            )));
        }
        series.periods.retain(|(p, _)| common.period.contains(p));
    }
    if let Some(path) = &common.airports {
        series.coords = Some(parse_airports(path)?);
    }
    Ok(series)
}

fn targets(keys: &[String]) -> netmotif::Result<Vec<ClassTarget>> {
    keys.iter().map(|k| ClassTarget::parse(k)).collect()
}

fn base_config(common: &Common) -> PipelineConfig {
    let (seed, generated) = match common.seed {
        Some(s) => (s, false),
        None => (
            SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_nanos() as u64),
            true,
        ),
    };
    PipelineConfig {
        seed_generated: generated,
        ..PipelineConfig::census_only(seed)
    }
}

fn apply_null(config: &mut PipelineConfig, null: &NullArgs) {
    config.nulls = null.nulls.iter().map(|&c| c.into()).collect();
    config.replications = null.replications;
    config.bootstrap = null.bootstrap;
    config.rewire_steps = null.rewire_steps;
}

fn apply_geo(config: &mut PipelineConfig, geo: &GeoArgs) {
    if let Some(r) = geo.radius {
        config.sphere = Sphere { radius: r };
    }
    if geo.vector_center {
        config.center = CenterMethod::VectorMean;
    }
    config.kde_bandwidth = geo.bandwidth;
}

fn summary(command: &Command, bundle: &RunBundle) -> Value {
    let periods = &bundle.periods;
    let body: Value = match command {
        Command::Census(_) => periods
            .iter()
            .map(|p| {
                let counts: serde_json::Map<String, Value> =
                    p.census.record().into_iter().map(|(k, v)| (k, json!(v))).collect();
                json!({ "period": p.period, "n": p.census.n, "m": p.census.m, "counts": counts })
            })
            .collect(),
        Command::Motifs { .. } => periods.iter().map(|p| json!({ "period": p.period, "zscores": p.zscores })).collect(),
        Command::Scaling(_) => json!(bundle.scaling),
        Command::Centrality { .. } => periods
            .iter()
            .map(|p| json!({ "period": p.period, "ranking": p.centrality.as_ref().map(|c| &c.ranking) }))
            .collect(),
        Command::Spatial { .. } => periods.iter().map(|p| json!({ "period": p.period, "spatial": p.spatial })).collect(),
        Command::Pipeline { .. } => json!(periods.iter().map(|p| &p.period).collect::<Vec<_>>()),
    };
    json!({ "seed": bundle.config.seed, "seed_generated": bundle.config.seed_generated, "result": body, "errors": bundle.errors })
}

fn run(cli: &Cli) -> netmotif::Result<(Value, Vec<String>)> {
    let (common, svg) = match &cli.command {
        Command::Census(c) | Command::Scaling(c) => (c, false),
        Command::Motifs { common, .. }
        | Command::Centrality { common, .. }
        | Command::Spatial { common, .. } => (common, false),
        Command::Pipeline { common, svg, .. } => (common, *svg),
    };
    let mut series = load(common)?;
    let mut config = base_config(common);
    let keys = targets(&common.classes)?;
    match &cli.command {
        Command::Census(_) => {
            config.extra_classes = keys.into_iter().filter(|t| t.class.b > 4).collect()
        }
        Command::Scaling(_) => {}
        Command::Motifs { null, .. } => {
            apply_null(&mut config, null);
            if config.nulls.is_empty() {
                return Err(netmotif::Error::InvalidArgument(
                    "motifs needs --null".into(),
                ));
            }
            if !keys.is_empty() {
                config.motif_classes = Some(keys);
            }
        }
        Command::Centrality { top, .. } => {
            config.centrality = true;
            config.top_k = *top;
            if !keys.is_empty() {
                config.membership_classes = keys;
            }
        }
        Command::Spatial { geo, .. } => {
            if series.coords.is_none() {
                return Err(netmotif::Error::InvalidArgument(
                    "spatial needs --airports".into(),
                ));
            }
            apply_geo(&mut config, geo);
        }
        Command::Pipeline { null, geo, top, .. } => {
            apply_null(&mut config, null);
            apply_geo(&mut config, geo);
            config.centrality = true;
            config.cliques = true;
            config.top_k = *top;
            if !keys.is_empty() {
                config.motif_classes = Some(keys.clone());
                config.extra_classes = keys.into_iter().filter(|t| t.class.b > 4).collect();
            }
            if common.out.is_none() {
                return Err(netmotif::Error::InvalidArgument(
                    "pipeline needs --out".into(),
                ));
            }
        }
    }
    if !matches!(
        cli.command,
        Command::Spatial { .. } | Command::Pipeline { .. }
    ) {
        series.coords = None;
    }
    if config.seed_generated && !config.nulls.is_empty() {
        info!("no --seed given, using generated seed {}", config.seed);
    }
    let bundle = run_pipeline(&series, &config);
    if let Some(dir) = &common.out {
        let manifest = emit_reports(&bundle, dir, EmitOptions { svg })?;
        info!("wrote {}", manifest.display());
    }
    let mut out = summary(&cli.command, &bundle);
    if let Command::Scaling(_) = &cli.command {
        if !common.classes.is_empty() {
            let wanted: Vec<String> = targets(&common.classes)?
                .iter()
                .map(ClassTarget::key)
                .collect();
            let rows: Vec<_> = bundle
                .scaling
                .iter()
                .filter(|r| wanted.contains(&r.class))
                .collect();
            out["result"] = json!(rows);
        }
    }
    let errors = bundle
        .errors
        .iter()
        .map(|e| format!("period {}: {}", e.period, e.message))
        .collect();
    Ok((out, errors))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(&cli) {
        Ok((out, errors)) => {
            println!("{}", serde_json::to_string_pretty(&out).unwrap_or_default());
            if errors.is_empty() {
                ExitCode::SUCCESS
            } else {
                fail(&errors)
            }
        }
        Err(e) => fail(&[e.to_string()]),
    }
}
