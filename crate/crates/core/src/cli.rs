//! Command-line front end. The binary only calls [`main`].

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::aggregate::{aggregate_inputs, DemandInput, UNKNOWN_ROLE};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::features::export_features;
use crate::plays::{parse_keywords, retrieve, write_hits, BackendRegistry, KeywordMode, PlayIndex, SprintTag};
use crate::roles::{load_roles, momentary_role, write_roles, RoleTimeline};
use crate::rules::{
    assign_match_roles, classify_match, read_classifications, write_classifications, SprintCategory,
};
use crate::sprint::{detect_all_sprints, write_sprints, Sprint};
use crate::synth::{generate_corpus, write_corpus, CorpusSpec};
use crate::tracking::{derive_possession, load_tracking, TrackingFormat, TrackingSequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    /// CSV files.
    Table,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "sprintlab", version, about = "Sprint detection and tactical classification for tracking data")]
pub struct Cli {
    /// TOML configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Override one setting, e.g. `--set detection.tau=5`. Repeatable.
    #[arg(long = "set", value_name = "SECTION.KEY=VALUE", global = true)]
    pub overrides: Vec<String>,
    /// Print the effective configuration and exit.
    #[arg(long, global = true)]
    pub print_config: bool,
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output file, or directory for plays, synth and export-features.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Table)]
    pub format: OutputFormat,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Args)]
pub struct TrackingArgs {
    /// Match directory, `tracking.csv`, or a `.json` sequence.
    #[arg(long)]
    pub tracking: PathBuf,
    /// `tracking-table` or `tracking-json`; guessed from the path if absent.
    #[arg(long)]
    pub tracking_format: Option<String>,
    /// Recompute possession from ball proximity even if the input has it.
    #[arg(long)]
    pub derive_possession: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Detect sprints.
    Detect(TrackingArgs),
    /// Detect and classify sprints, with clause traces.
    Classify {
        #[command(flatten)]
        tracking: TrackingArgs,
        /// Role timeline; computed from positions when absent.
        #[arg(long)]
        roles: Option<PathBuf>,
        /// Where to save computed roles.
        #[arg(long)]
        roles_out: Option<PathBuf>,
    },
    /// Build the role by category demand table from classification files.
    Aggregate {
        /// Classification CSV written by `classify`. Repeatable.
        #[arg(long, required = true)]
        classified: Vec<PathBuf>,
        /// Role timeline; when given it replaces the file's role column.
        #[arg(long)]
        roles: Option<PathBuf>,
    },
    /// Segment plays, build the index and optionally query it.
    Plays {
        #[command(flatten)]
        tracking: TrackingArgs,
        #[arg(long)]
        classified: PathBuf,
        /// Position of the query play in the index.
        #[arg(long)]
        query: Option<usize>,
        /// Required categories, e.g. `PEN,RWB`.
        #[arg(long, default_value = "")]
        keywords: String,
        #[arg(long, default_value = "superset")]
        mode: String,
        #[arg(short, long, default_value_t = 5)]
        k: usize,
        #[arg(long, default_value = crate::plays::BASELINE_ID)]
        backend: String,
    },
    /// Write a labeled synthetic corpus.
    Synth {
        /// TOML corpus spec (`n_per_category`, `seed`, ...).
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Scenes per category; overrides the spec.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Write per-sprint feature tensors.
    ExportFeatures {
        #[command(flatten)]
        tracking: TrackingArgs,
        /// Classification CSV; sprints are classified afresh when absent.
        #[arg(long)]
        classified: Option<PathBuf>,
    },
}

pub fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(1);
        }
    }
}

pub fn effective_config(cli: &Cli) -> Result<Config> {
    let mut cfg = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    for o in &cli.overrides {
        cfg.set(o)?;
    }
    Ok(cfg)
}

/// Runs one invocation. Returns the exit code: 0, or 2 when some records
/// failed but outputs were written.
pub fn run(cli: &Cli) -> Result<i32> {
    let cfg = effective_config(cli)?;
    if cli.print_config {
        print!("{}", cfg.to_toml_string());
        return Ok(0);
    }
    let Some(cmd) = &cli.command else {
        return Err(Error::Config("no subcommand given; see --help".into()));
    };
    let json = cli.format == OutputFormat::Json;
    let ext = if json { "json" } else { "csv" };
    let out = |default: &str| cli.out.clone().unwrap_or_else(|| PathBuf::from(default));
    match cmd {
        Command::Detect(t) => {
            let seq = load(t, &cfg)?;
            let sprints = detect_all_sprints(&seq, &cfg.detection);
            let path = out(&format!("sprints.{ext}"));
            write_sprints(&path, &seq, &sprints, json)?;
            println!("{} sprints -> {}", sprints.len(), path.display());
            Ok(0)
        }
        Command::Classify { tracking, roles, roles_out } => {
            let seq = load(tracking, &cfg)?;
            let timeline = match roles {
                Some(p) => load_roles(p)?,
                None => {
                    log::info!("no roles file given; assigning roles from positions");
                    assign_match_roles(&seq, &cfg)
                }
            };
            if let Some(p) = roles_out {
                write_roles(p, &timeline)?;
            }
            let result = classify_match(&seq, Some(&timeline), &cfg);
            let path = out(&format!("classified.{ext}"));
            write_classifications(&path, &seq, &result, Some(&timeline), json)?;
            println!(
                "{} sprints classified, {} failed -> {}",
                result.sprints.len(),
                result.failures.len(),
                path.display()
            );
            Ok(if result.failures.is_empty() { 0 } else { 2 })
        }
        Command::Aggregate { classified, roles } => {
            let timeline = roles.as_deref().map(load_roles).transpose()?;
            let mut inputs = Vec::new();
            for p in classified {
                inputs.extend(classified_inputs(p, timeline.as_ref())?);
            }
            let table = aggregate_inputs(&inputs);
            let path = out(&format!("demand.{ext}"));
            table.write(&path, json)?;
            println!("{} sprints over {} cells -> {}", table.total_count(), table.cells.len(), path.display());
            Ok(0)
        }
        Command::Plays { tracking, classified, query, keywords, mode, k, backend } => {
            let seq = load(tracking, &cfg)?;
            let registry = BackendRegistry::new(cfg.plays.unmatched_penalty);
            let backend = registry.get(backend)?;
            let tags: Vec<SprintTag> = read_classifications(classified)?
                .into_iter()
                .map(|(s, _, category, _)| SprintTag { period: s.period, start: s.start_s, end: s.end_s, category })
                .collect();
            let index = PlayIndex::build(&seq, &tags, &cfg.plays, backend.id())?;
            let dir = out("plays");
            std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
            index.save(&dir.join("index.json"))?;
            println!("{} plays indexed -> {}", index.len(), dir.join("index.json").display());
            if let Some(q) = query {
                let required = parse_keywords(keywords)?;
                let mode: KeywordMode = mode.parse()?;
                let query = index
                    .plays
                    .get(*q)
                    .ok_or_else(|| Error::Config(format!("query play {q} out of range ({} plays)", index.len())))?;
                let hits = retrieve(&index, &query.trajectory, *k, &required, mode, backend);
                let path = dir.join(format!("hits.{ext}"));
                write_hits(&path, &hits, json)?;
                println!("{} hits -> {}", hits.len(), path.display());
            }
            Ok(0)
        }
        Command::Synth { spec, n } => {
            let mut s = match spec {
                Some(p) => CorpusSpec::load(p)?,
                None => CorpusSpec { seed: cli.seed, ..CorpusSpec::default() },
            };
            if let Some(n) = n {
                s.n_per_category = *n;
            }
            let scenarios = generate_corpus(&s)?;
            let dir = out("corpus");
            write_corpus(&dir, &scenarios)?;
            println!("{} scenarios -> {}", scenarios.len(), dir.display());
            Ok(0)
        }
        Command::ExportFeatures { tracking, classified } => {
            let seq = load(tracking, &cfg)?;
            let (sprints, failed) = match classified {
                Some(p) => (
                    read_classifications(p)?
                        .into_iter()
                        .map(|(s, _, c, _)| (s.to_sprint(), c))
                        .collect::<Vec<(Sprint, SprintCategory)>>(),
                    0,
                ),
                None => {
                    let roles = assign_match_roles(&seq, &cfg);
                    let r = classify_match(&seq, Some(&roles), &cfg);
                    let v = r.sprints.into_iter().map(|c| (c.sprint, c.classification.category)).collect();
                    (v, r.failures.len())
                }
            };
            let dir = out("features");
            let n = export_features(&seq, &sprints, &dir)?;
            println!("{n} tensors -> {}", dir.display());
            Ok(if failed == 0 { 0 } else { 2 })
        }
    }
}

fn load(t: &TrackingArgs, cfg: &Config) -> Result<TrackingSequence> {
    let format = match &t.tracking_format {
        Some(f) => f.parse()?,
        None => TrackingFormat::detect(&t.tracking),
    };
    let seq = load_tracking(&t.tracking, format)?;
    let has_possession = seq.frames.iter().any(|f| f.possession_team.is_some());
    if t.derive_possession || !has_possession {
        if !has_possession {
            log::info!("input carries no possession; deriving it from ball proximity");
        }
        return Ok(derive_possession(&seq, &cfg.tracking));
    }
    Ok(seq)
}

fn classified_inputs(path: &Path, roles: Option<&RoleTimeline>) -> Result<Vec<DemandInput>> {
    Ok(read_classifications(path)?
        .into_iter()
        .map(|(s, role, category, _)| {
            let role = match roles {
                Some(r) => momentary_role(r, &crate::PlayerId::new(s.player_id.clone()), s.period, s.start_s)
                    .map(|r| r.to_string())
                    .unwrap_or_else(|_| UNKNOWN_ROLE.to_string()),
                None if role.is_empty() => UNKNOWN_ROLE.to_string(),
                None => role,
            };
            DemandInput {
                team: s.team_id,
                role,
                category,
                distance: s.distance_m,
                duration: s.end_s - s.start_s,
                peak_speed: s.peak_speed_kmh,
            }
        })
        .collect())
}
