//! Batch pipeline: pre-filter, per-app analysis, confusion-matrix metrics
//! against ground-truth labels, and report emission.
//!
//! Classification is app-level: an app counts as fraudulent iff its report
//! carries at least one finding. Apps failing the pre-filter are classified
//! clean without analysis. Counts are exact integers; precision/recall are
//! kept as rationals so the arithmetic never drifts.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::adview::{AdFeatureConfig, AD_NETWORK_PREFIXES};
use crate::error::CorpusError;
use crate::model::{AppMeta, UTGraph};
use crate::rules::{check_all, FraudReport, RuleConfig};
use crate::sim::{explore, inject_faults, AppModel, ExplorationConfig, FaultConfig};
use crate::taxonomy::FraudType;

/// Proceed to analysis? Requires both network permissions and at least one
/// detected ad library matching the bundled network prefixes.
pub fn prefilter(meta: &AppMeta) -> bool {
    let has_perm = |p: &str| meta.permissions.iter().any(|q| q == p || q.ends_with(p));
    if !has_perm("INTERNET") || !has_perm("ACCESS_NETWORK_STATE") {
        return false;
    }
    meta.detected_ad_libs
        .iter()
        .any(|lib| AD_NETWORK_PREFIXES.iter().any(|p| lib.starts_with(p)))
}

/// Exact rational, kept unreduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Percentage with two decimals, rounded half away from zero on exact
    /// integer arithmetic.
    pub fn percent(&self) -> String {
        let basis_points = (self.num * 10_000 + self.den / 2) / self.den;
        format!("{}.{:02}%", basis_points / 100, basis_points % 100)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TypeOutcome {
    pub tp: u64,
    #[serde(rename = "fn")]
    pub fn_count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CorpusMetrics {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    #[serde(rename = "fn")]
    pub fn_count: u64,
    /// Apps that could not be processed; excluded from the counts above.
    pub skipped: u64,
    pub per_type: BTreeMap<FraudType, TypeOutcome>,
}

impl CorpusMetrics {
    pub fn from_counts(tp: u64, fp: u64, tn: u64, fn_count: u64) -> Self {
        CorpusMetrics {
            tp,
            fp,
            tn,
            fn_count,
            skipped: 0,
            per_type: BTreeMap::new(),
        }
    }

    pub fn precision(&self) -> Option<Ratio> {
        (self.tp + self.fp > 0).then_some(Ratio {
            num: self.tp,
            den: self.tp + self.fp,
        })
    }

    pub fn recall(&self) -> Option<Ratio> {
        (self.tp + self.fn_count > 0).then_some(Ratio {
            num: self.tp,
            den: self.tp + self.fn_count,
        })
    }

    pub fn analyzed(&self) -> u64 {
        self.tp + self.fp + self.tn + self.fn_count
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AppStatus {
    Analyzed,
    Prefiltered,
    Error,
}

/// Outcome of one app's pipeline run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AppOutcome {
    pub package: String,
    pub status: AppStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<FraudReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<Vec<FraudType>>,
    /// Fault mechanisms injected into this app's model, for error
    /// attribution. Empty when no faults were injected.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fault_mechanisms: Vec<String>,
}

impl AppOutcome {
    pub fn predicted_fraudulent(&self) -> bool {
        self.report.as_ref().is_some_and(|r| r.fraudulent)
    }
}

/// One misclassified app with the fault mechanisms that were active on it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorLogEntry {
    pub package: String,
    /// "false_positive" or "false_negative".
    pub kind: String,
    pub mechanisms: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusRun {
    pub outcomes: Vec<AppOutcome>,
    pub metrics: CorpusMetrics,
    pub error_log: Vec<ErrorLogEntry>,
}

#[derive(Debug, Clone, Default)]
pub struct PipelineConfig {
    pub exploration: ExplorationConfig,
    pub faults: Option<FaultConfig>,
    pub ad_config: AdFeatureConfig,
    pub rule_config: RuleConfig,
}

/// Explore (with optional fault injection) and check one model.
pub fn analyze_model(model: &AppModel, cfg: &PipelineConfig) -> AppOutcome {
    let label = model.meta.label.as_ref().map(|l| l.fraud_types.clone());
    if !prefilter(&model.meta) {
        return AppOutcome {
            package: model.meta.package.clone(),
            status: AppStatus::Prefiltered,
            error: None,
            report: None,
            label,
            fault_mechanisms: Vec::new(),
        };
    }
    let violations = model.validate();
    if !violations.is_empty() {
        return AppOutcome {
            package: model.meta.package.clone(),
            status: AppStatus::Error,
            error: Some(format!("invalid app model: {}", violations.join("; "))),
            report: None,
            label,
            fault_mechanisms: Vec::new(),
        };
    }
    let faulted;
    let model = match &cfg.faults {
        Some(fault_cfg) => {
            faulted = inject_faults(model, fault_cfg);
            &faulted
        }
        None => model,
    };
    let mut mechanisms: Vec<String> = model
        .fault_log
        .iter()
        .map(|f| f.mechanism().to_string())
        .collect();
    mechanisms.sort();
    mechanisms.dedup();

    let graph = explore(model, &cfg.exploration);
    match check_all(&graph, &cfg.rule_config, &cfg.ad_config) {
        Ok(report) => AppOutcome {
            package: model.meta.package.clone(),
            status: AppStatus::Analyzed,
            error: None,
            report: Some(report),
            label,
            fault_mechanisms: mechanisms,
        },
        Err(e) => AppOutcome {
            package: model.meta.package.clone(),
            status: AppStatus::Error,
            error: Some(e.to_string()),
            report: None,
            label,
            fault_mechanisms: mechanisms,
        },
    }
}

/// Check a pre-built graph (no exploration, no faults).
pub fn analyze_graph(graph: &UTGraph, cfg: &PipelineConfig) -> AppOutcome {
    let label = graph.app.label.as_ref().map(|l| l.fraud_types.clone());
    if !prefilter(&graph.app) {
        return AppOutcome {
            package: graph.app.package.clone(),
            status: AppStatus::Prefiltered,
            error: None,
            report: None,
            label,
            fault_mechanisms: Vec::new(),
        };
    }
    match check_all(graph, &cfg.rule_config, &cfg.ad_config) {
        Ok(report) => AppOutcome {
            package: graph.app.package.clone(),
            status: AppStatus::Analyzed,
            error: None,
            report: Some(report),
            label,
            fault_mechanisms: Vec::new(),
        },
        Err(e) => AppOutcome {
            package: graph.app.package.clone(),
            status: AppStatus::Error,
            error: Some(e.to_string()),
            report: None,
            label,
            fault_mechanisms: Vec::new(),
        },
    }
}

fn score(outcomes: Vec<AppOutcome>) -> CorpusRun {
    let mut outcomes = outcomes;
    outcomes.sort_by(|a, b| a.package.cmp(&b.package));

    let mut metrics = CorpusMetrics::default();
    let mut error_log = Vec::new();
    for outcome in &outcomes {
        if outcome.status == AppStatus::Error {
            metrics.skipped += 1;
            continue;
        }
        let Some(label_types) = &outcome.label else {
            continue;
        };
        let labelled_fraud = !label_types.is_empty();
        let predicted = outcome.predicted_fraudulent();
        match (labelled_fraud, predicted) {
            (true, true) => metrics.tp += 1,
            (true, false) => metrics.fn_count += 1,
            (false, true) => metrics.fp += 1,
            (false, false) => metrics.tn += 1,
        }
        if labelled_fraud {
            let found: Vec<FraudType> = outcome
                .report
                .as_ref()
                .map(|r| r.findings.iter().map(|f| f.fraud_type).collect())
                .unwrap_or_default();
            for t in label_types {
                let slot = metrics.per_type.entry(*t).or_default();
                if found.contains(t) {
                    slot.tp += 1;
                } else {
                    slot.fn_count += 1;
                }
            }
        }
        if labelled_fraud != predicted {
            error_log.push(ErrorLogEntry {
                package: outcome.package.clone(),
                kind: if predicted {
                    "false_positive"
                } else {
                    "false_negative"
                }
                .to_string(),
                mechanisms: outcome.fault_mechanisms.clone(),
            });
        }
    }
    CorpusRun {
        outcomes,
        metrics,
        error_log,
    }
}

/// A corpus entry: either a model to explore or a pre-built graph.
#[derive(Debug, Clone)]
pub enum CorpusItem {
    Model(AppModel),
    Graph(UTGraph),
}

fn analyze_item(item: &CorpusItem, cfg: &PipelineConfig) -> AppOutcome {
    match item {
        CorpusItem::Model(m) => analyze_model(m, cfg),
        CorpusItem::Graph(g) => analyze_graph(g, cfg),
    }
}

/// Fan a per-app analysis out over `workers` threads (0 = one per core,
/// 1 = in place). Analysis order does not matter: results are
/// order-normalized afterwards.
#[cfg(feature = "parallel")]
fn map_par<T, F>(items: &[T], f: F, workers: usize) -> Vec<AppOutcome>
where
    T: Sync,
    F: Fn(&T) -> AppOutcome + Sync,
{
    use rayon::prelude::*;
    if workers == 1 {
        return items.iter().map(f).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("pool construction");
    pool.install(|| items.par_iter().map(&f).collect())
}

#[cfg(not(feature = "parallel"))]
fn map_par<T, F>(items: &[T], f: F, _workers: usize) -> Vec<AppOutcome>
where
    F: Fn(&T) -> AppOutcome,
{
    items.iter().map(f).collect()
}

/// Run the pipeline over in-memory models. `workers` > 1 fans out across
/// apps (within-app analysis stays sequential); results are
/// order-normalized by package, so the output is identical either way.
pub fn run_models(models: &[AppModel], cfg: &PipelineConfig, workers: usize) -> CorpusRun {
    score(map_par(models, |m| analyze_model(m, cfg), workers))
}

/// Strictly sequential variant, kept for baseline comparisons.
pub fn run_models_sequential(models: &[AppModel], cfg: &PipelineConfig) -> CorpusRun {
    score(models.iter().map(|m| analyze_model(m, cfg)).collect())
}

/// Run the checker over pre-built graphs, fanning out across apps.
pub fn run_graphs(graphs: &[UTGraph], cfg: &PipelineConfig, workers: usize) -> CorpusRun {
    score(map_par(graphs, |g| analyze_graph(g, cfg), workers))
}

/// Sequential counterpart of [`run_graphs`].
pub fn run_graphs_sequential(graphs: &[UTGraph], cfg: &PipelineConfig) -> CorpusRun {
    score(graphs.iter().map(|g| analyze_graph(g, cfg)).collect())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestEntry {
    pub file: String,
    pub package: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<crate::model::AppLabel>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub apps: Vec<ManifestEntry>,
}

/// Run over a directory of model or graph documents. A `manifest.json`
/// selects the files; without one, every `*.json` in the directory is
/// taken. Unreadable or unparseable files become per-app error entries and
/// the run continues.
pub fn run_corpus_dir(
    dir: &Path,
    cfg: &PipelineConfig,
    workers: usize,
) -> Result<CorpusRun, CorpusError> {
    let manifest_path = dir.join("manifest.json");
    let files: Vec<std::path::PathBuf> = if manifest_path.exists() {
        let bytes = std::fs::read(&manifest_path).map_err(|e| CorpusError::Io {
            path: manifest_path.display().to_string(),
            source: e,
        })?;
        let manifest: Manifest =
            serde_json::from_slice(&bytes).map_err(|e| CorpusError::Config(e.to_string()))?;
        manifest.apps.iter().map(|a| dir.join(&a.file)).collect()
    } else {
        let mut files: Vec<std::path::PathBuf> = std::fs::read_dir(dir)
            .map_err(|e| CorpusError::Io {
                path: dir.display().to_string(),
                source: e,
            })?
            .filter_map(|entry| entry.ok().map(|e| e.path()))
            .filter(|p| p.extension().and_then(|e| e.to_str()) == Some("json"))
            .collect();
        files.sort();
        files
    };

    // Load first (cheap), then analyze (possibly parallel).
    let mut items = Vec::new();
    let mut failures = Vec::new();
    for path in files {
        let name = path.display().to_string();
        match std::fs::read(&path) {
            Err(e) => failures.push((name, format!("unreadable: {e}"))),
            Ok(bytes) => match AppModel::from_json(&bytes) {
                Ok(model) => items.push(CorpusItem::Model(model)),
                Err(_) => match UTGraph::deserialize(&bytes) {
                    Ok(graph) => items.push(CorpusItem::Graph(graph)),
                    Err(e) => failures.push((name, format!("unparseable: {e}"))),
                },
            },
        }
    }

    let mut outcomes = map_par(&items, |i| analyze_item(i, cfg), workers);
    for (path, error) in failures {
        outcomes.push(AppOutcome {
            package: path,
            status: AppStatus::Error,
            error: Some(error),
            report: None,
            label: None,
            fault_mechanisms: Vec::new(),
        });
    }
    Ok(score(outcomes))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportFormat {
    Json,
    Text,
}

/// Render a corpus run. The JSON form is machine-parseable; the text form
/// lays the confusion matrix out as a table with exact percentages.
pub fn emit_report(run: &CorpusRun, format: ReportFormat) -> Vec<u8> {
    match format {
        ReportFormat::Json => {
            let mut out = serde_json::to_vec_pretty(&CorpusReportDoc::new(run))
                .expect("report serialization");
            out.push(b'\n');
            out
        }
        ReportFormat::Text => render_text(run).into_bytes(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatioDoc {
    pub num: u64,
    pub den: u64,
    pub percent: String,
}

impl From<Ratio> for RatioDoc {
    fn from(r: Ratio) -> Self {
        RatioDoc {
            num: r.num,
            den: r.den,
            percent: r.percent(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricsDoc {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    #[serde(rename = "fn")]
    pub fn_count: u64,
    pub skipped: u64,
    pub precision: Option<RatioDoc>,
    pub recall: Option<RatioDoc>,
    pub per_type: BTreeMap<FraudType, TypeOutcome>,
}

/// The machine-parseable corpus report document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusReportDoc {
    pub apps: Vec<AppOutcome>,
    pub metrics: MetricsDoc,
    pub errors: Vec<ErrorLogEntry>,
}

impl CorpusReportDoc {
    pub fn new(run: &CorpusRun) -> Self {
        CorpusReportDoc {
            apps: run.outcomes.clone(),
            metrics: MetricsDoc {
                tp: run.metrics.tp,
                fp: run.metrics.fp,
                tn: run.metrics.tn,
                fn_count: run.metrics.fn_count,
                skipped: run.metrics.skipped,
                precision: run.metrics.precision().map(RatioDoc::from),
                recall: run.metrics.recall().map(RatioDoc::from),
                per_type: run.metrics.per_type.clone(),
            },
            errors: run.error_log.clone(),
        }
    }

    /// Parse an emitted report back, restoring the per-finding config
    /// hashes from each report's top-level hash.
    pub fn from_json(bytes: &[u8]) -> Result<CorpusReportDoc, serde_json::Error> {
        let mut doc: CorpusReportDoc = serde_json::from_slice(bytes)?;
        for outcome in &mut doc.apps {
            if let Some(report) = &mut outcome.report {
                let hash = report.config_hash.clone();
                for finding in &mut report.findings {
                    finding.rule_config_hash = hash.clone();
                }
            }
        }
        Ok(doc)
    }
}

fn render_text(run: &CorpusRun) -> String {
    let m = &run.metrics;
    let mut out = String::new();
    out.push_str(&format!(
        "{} analyzed (skipped: {})\n\n",
        m.analyzed(),
        m.skipped
    ));
    out.push_str("                     predicted fraud   predicted clean\n");
    out.push_str(&format!(
        "labelled fraud       {:>7} TP        {:>7} FN\n",
        m.tp, m.fn_count
    ));
    out.push_str(&format!(
        "labelled clean       {:>7} FP        {:>7} TN\n\n",
        m.fp, m.tn
    ));
    match (m.precision(), m.recall()) {
        (Some(p), Some(r)) => out.push_str(&format!(
            "precision: {}   recall: {}\n",
            p.percent(),
            r.percent()
        )),
        (Some(p), None) => out.push_str(&format!("precision: {}\n", p.percent())),
        (None, Some(r)) => out.push_str(&format!("recall: {}\n", r.percent())),
        (None, None) => {}
    }
    if !m.per_type.is_empty() {
        out.push_str("\nper fraud type (labelled positives):\n");
        for (t, counts) in &m.per_type {
            out.push_str(&format!(
                "  {:<12} tp={:<3} fn={}\n",
                t.to_string(),
                counts.tp,
                counts.fn_count
            ));
        }
    }
    if !run.error_log.is_empty() {
        out.push_str("\nmisclassified apps:\n");
        for e in &run.error_log {
            out.push_str(&format!(
                "  {:<24} {} [{}]\n",
                e.package,
                e.kind,
                e.mechanisms.join(",")
            ));
        }
    }
    for outcome in &run.outcomes {
        if let Some(report) = &outcome.report {
            if report.fraudulent {
                out.push_str(&format!(
                    "\nfraud: {} ({} finding(s))\n",
                    outcome.package,
                    report.findings.len()
                ));
            }
        }
    }
    out
}


#[cfg(test)]
mod report_doc_tests {
    use super::*;
    use crate::sim::generate_benchmark;

    #[test]
    fn json_report_parses_back_to_the_same_document() {
        let models = generate_benchmark(
            9,
            3,
            &FraudType::ALL.into_iter().map(|t| (t, 1)).collect(),
            13,
        )
        .unwrap();
        let run = run_models(&models, &PipelineConfig::default(), 1);
        let bytes = emit_report(&run, ReportFormat::Json);
        let parsed = CorpusReportDoc::from_json(&bytes).unwrap();
        assert_eq!(parsed, CorpusReportDoc::new(&run));
    }
}
