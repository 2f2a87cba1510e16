use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use adscan_core::adview::AdFeatureConfig;
use adscan_core::corpus::{
    analyze_graph, emit_report, run_corpus_dir, AppStatus, Manifest, ManifestEntry, PipelineConfig,
    ReportFormat,
};
use adscan_core::model::UTGraph;
use adscan_core::rules::RuleConfig;
use adscan_core::sim::{
    default_distribution, explore, generate_benchmark, AppModel, ExplorationConfig, FaultConfig,
    Strategy,
};

/// Ad-fraud detection over UI state transition graphs.
#[derive(Parser)]
#[command(name = "adscan", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArgs {
    /// Ad-view feature configuration (JSON), overrides defaults
    #[arg(long, value_name = "FILE")]
    ad_config: Option<PathBuf>,
    /// Fraud-rule configuration (JSON), overrides defaults
    #[arg(long, value_name = "FILE")]
    rule_config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the fraud rules over one UTG document
    Detect {
        /// UTG JSON document
        utg: PathBuf,
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// Explore an app model into a UTG document
    Explore {
        /// App model JSON document
        model: PathBuf,
        #[arg(long, default_value = "ad_first")]
        strategy: String,
        /// Event budget, the app-start event included
        #[arg(long, default_value_t = 60)]
        budget: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the graph here instead of stdout
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Benchmark corpora
    #[command(subcommand)]
    Bench(BenchCommand),
}

#[derive(Subcommand)]
enum BenchCommand {
    /// Generate a labelled benchmark corpus into a directory
    Generate {
        #[arg(long, default_value_t = 50)]
        fraud: u32,
        #[arg(long, default_value_t = 50)]
        clean: u32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
    },
    /// Run detection over a corpus directory and score it
    Run {
        /// Directory of app-model or UTG documents (manifest.json optional)
        dir: PathBuf,
        /// Fault rates as "LOAD,INHERITED" (e.g. 0.05,0.05)
        #[arg(long, value_name = "RATES")]
        faults: Option<String>,
        /// Seed for fault injection
        #[arg(long, default_value_t = 0)]
        fault_seed: u64,
        /// Exploration seed
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Exploration event budget
        #[arg(long, default_value_t = 60)]
        budget: u32,
        /// Worker threads across apps (0 = one per core)
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long, default_value = "text")]
        format: String,
    },
}

fn parse_format(s: &str) -> Result<ReportFormat> {
    match s {
        "json" => Ok(ReportFormat::Json),
        "text" => Ok(ReportFormat::Text),
        other => bail!("unknown format {other:?} (json|text)"),
    }
}

fn load_json<T: serde::de::DeserializeOwned>(path: &Path, what: &str) -> Result<T> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_slice(&bytes).with_context(|| format!("parsing {what} {}", path.display()))
}

fn load_configs(args: &ConfigArgs) -> Result<(AdFeatureConfig, RuleConfig)> {
    let ad_config: AdFeatureConfig = match &args.ad_config {
        Some(path) => load_json(path, "ad config")?,
        None => AdFeatureConfig::default(),
    };
    ad_config
        .validate()
        .map_err(|e| anyhow::anyhow!("ad config: {e}"))?;
    let rule_config: RuleConfig = match &args.rule_config {
        Some(path) => load_json(path, "rule config")?,
        None => RuleConfig::default(),
    };
    rule_config
        .validate()
        .map_err(|e| anyhow::anyhow!("rule config: {e}"))?;
    Ok((ad_config, rule_config))
}

fn parse_fault_rates(s: &str, seed: u64) -> Result<FaultConfig> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        bail!("--faults expects LOAD,INHERITED (e.g. 0.05,0.05)");
    }
    let load: f64 = parts[0].trim().parse().context("bad load-failure rate")?;
    let inherited: f64 = parts[1].trim().parse().context("bad inherited-ad rate")?;
    for rate in [load, inherited] {
        if !(0.0..=1.0).contains(&rate) {
            bail!("fault rates must be in [0, 1]");
        }
    }
    Ok(FaultConfig {
        ad_load_failure_rate: load,
        inherited_ad_rate: inherited,
        seed,
    })
}

// Exit codes: 0 clean run, 1 fraud found, 2 usage/config error, 3 the run
// had per-app failures.
fn run() -> Result<u8> {
    let cli = Cli::parse();
    match cli.command {
        Command::Detect {
            utg,
            config,
            format,
        } => {
            let format = parse_format(&format)?;
            let (ad_config, rule_config) = load_configs(&config)?;
            let bytes =
                std::fs::read(&utg).with_context(|| format!("reading {}", utg.display()))?;
            let graph = UTGraph::deserialize(&bytes)
                .with_context(|| format!("parsing UTG {}", utg.display()))?;
            let cfg = PipelineConfig {
                ad_config,
                rule_config,
                ..PipelineConfig::default()
            };
            let outcome = analyze_graph(&graph, &cfg);
            if outcome.status == AppStatus::Error {
                bail!("analysis failed: {}", outcome.error.unwrap_or_default());
            }
            let fraudulent = outcome.predicted_fraudulent();
            match (&outcome.report, format) {
                (Some(report), ReportFormat::Json) => {
                    std::io::stdout().write_all(&report.to_json())?
                }
                (Some(report), ReportFormat::Text) => {
                    print!("{}", report.render_text())
                }
                (None, _) => println!(
                    "{}: skipped by pre-filter (no ad library or missing network permissions)",
                    outcome.package
                ),
            }
            Ok(u8::from(fraudulent))
        }
        Command::Explore {
            model,
            strategy,
            budget,
            seed,
            out,
        } => {
            let strategy: Strategy = strategy.parse().map_err(|e: String| anyhow::anyhow!(e))?;
            if budget == 0 {
                bail!("--budget must be at least 1");
            }
            let app = AppModel::from_json(
                &std::fs::read(&model).with_context(|| format!("reading {}", model.display()))?,
            )
            .with_context(|| format!("parsing app model {}", model.display()))?;
            let violations = app.validate();
            if !violations.is_empty() {
                bail!("invalid app model: {}", violations.join("; "));
            }
            let cfg = ExplorationConfig {
                strategy,
                event_budget: budget,
                seed,
                ..ExplorationConfig::default()
            };
            let graph = explore(&app, &cfg);
            let bytes = graph.serialize();
            match out {
                Some(path) => std::fs::write(&path, bytes)
                    .with_context(|| format!("writing {}", path.display()))?,
                None => std::io::stdout().write_all(&bytes)?,
            }
            Ok(0)
        }
        Command::Bench(BenchCommand::Generate {
            fraud,
            clean,
            seed,
            out,
        }) => {
            let distribution = scale_distribution(fraud)?;
            let models = generate_benchmark(fraud, clean, &distribution, seed)?;
            std::fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
            let mut manifest = Manifest::default();
            for model in &models {
                let file = format!("{}.json", model.meta.package);
                std::fs::write(out.join(&file), model.to_json())
                    .with_context(|| format!("writing {file}"))?;
                manifest.apps.push(ManifestEntry {
                    file,
                    package: model.meta.package.clone(),
                    label: model.meta.label.clone(),
                });
            }
            let mut bytes = serde_json::to_vec_pretty(&manifest)?;
            bytes.push(b'\n');
            std::fs::write(out.join("manifest.json"), bytes)?;
            eprintln!("wrote {} models to {}", models.len(), out.display());
            Ok(0)
        }
        Command::Bench(BenchCommand::Run {
            dir,
            faults,
            fault_seed,
            seed,
            budget,
            workers,
            config,
            format,
        }) => {
            let format = parse_format(&format)?;
            let (ad_config, rule_config) = load_configs(&config)?;
            if budget == 0 {
                bail!("--budget must be at least 1");
            }
            let cfg = PipelineConfig {
                exploration: ExplorationConfig {
                    event_budget: budget,
                    seed,
                    ..ExplorationConfig::default()
                },
                faults: faults
                    .as_deref()
                    .map(|s| parse_fault_rates(s, fault_seed))
                    .transpose()?,
                ad_config,
                rule_config,
            };
            let run = run_corpus_dir(&dir, &cfg, workers)?;
            std::io::stdout().write_all(&emit_report(&run, format))?;
            if run.metrics.skipped > 0 {
                return Ok(3);
            }
            let any_fraud = run.outcomes.iter().any(|o| o.predicted_fraudulent());
            Ok(u8::from(any_fraud))
        }
    }
}

/// Spread a fraud count over the nine types, mirroring the default
/// distribution's proportions.
fn scale_distribution(fraud: u32) -> Result<BTreeMap<adscan_core::FraudType, u32>> {
    if fraud == 50 {
        return Ok(default_distribution());
    }
    let types = adscan_core::FraudType::ALL;
    let mut d = BTreeMap::new();
    let base = fraud / types.len() as u32;
    let extra = fraud as usize % types.len();
    for (i, t) in types.into_iter().enumerate() {
        let n = base + u32::from(i < extra);
        if n > 0 {
            d.insert(t, n);
        }
    }
    Ok(d)
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
