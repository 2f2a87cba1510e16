//! The nine fraud heuristics evaluated over a UTG with detected ad views.
//!
//! Static placement rules (hidden, size, number, overlap) look at one state
//! at a time; dynamic interaction rules (interaction, drive_by, outside,
//! frequent, non_content) need the transition graph. All rules are pure
//! functions; reports are deterministic, sorted by (type, states, views).
//!
//! Hidden and overlap split one dichotomy: a (ad, content) pair yields
//! hidden when the ad is strictly below the content view in z, overlap when
//! it is at or above. Distinct views never share a z in a validated state,
//! so the same-level case collapses into at-or-above.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::adview::{detect_graph_ad_views, AdFeatureConfig, AdKind, DetectedAd};
use crate::error::ModelError;
use crate::geometry::{intersection_area, intersects, union_area, Bounds};
use crate::model::{leaf_views, EventType, ScreenDims, StateKind, UIState, UTGraph, ViewNode};
use crate::taxonomy::FraudType;
use crate::traffic::starts_with_zip_magic;

/// Thresholds and switches for the fraud rules.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleConfig {
    /// Legitimate size-ratio interval per ad kind. The banner interval is
    /// deliberately tighter than the detection-side banner interval so that
    /// oversized banners are detected as ads and then flagged here.
    #[serde(default = "default_banner_size")]
    pub banner_size: [f64; 2],
    #[serde(default = "default_interstitial_size")]
    pub interstitial_size: [f64; 2],
    #[serde(default = "default_full_screen_size")]
    pub full_screen_size: [f64; 2],
    /// Maximum fraction of the screen the union of ad views may cover when
    /// app content is present.
    #[serde(default = "default_number_area_cap")]
    pub number_area_cap: f64,
    /// An interstitial/full-screen state is frequent-ad fraud when its
    /// distinct incoming display edges exceed this (strictly greater).
    #[serde(default = "default_frequent_threshold")]
    pub frequent_threshold: u32,
    /// Content types that count as downloading behaviour for the drive-by
    /// rule, besides the ZIP body magic.
    #[serde(default = "default_download_content_types")]
    pub download_content_types: BTreeSet<String>,
    /// Rules to evaluate; disabling one removes exactly its findings.
    #[serde(default = "default_enabled_rules")]
    pub enabled_rules: BTreeSet<FraudType>,
}

fn default_banner_size() -> [f64; 2] {
    [0.004, 0.005]
}

fn default_interstitial_size() -> [f64; 2] {
    [0.2, 0.8]
}

fn default_full_screen_size() -> [f64; 2] {
    [0.9, 1.0]
}

fn default_number_area_cap() -> f64 {
    0.5
}

fn default_frequent_threshold() -> u32 {
    3
}

fn default_download_content_types() -> BTreeSet<String> {
    [
        "application/vnd.android.package-archive",
        "application/octet-stream",
    ]
    .into_iter()
    .map(String::from)
    .collect()
}

fn default_enabled_rules() -> BTreeSet<FraudType> {
    FraudType::ALL.into_iter().collect()
}

impl Default for RuleConfig {
    fn default() -> Self {
        RuleConfig {
            banner_size: default_banner_size(),
            interstitial_size: default_interstitial_size(),
            full_screen_size: default_full_screen_size(),
            number_area_cap: default_number_area_cap(),
            frequent_threshold: default_frequent_threshold(),
            download_content_types: default_download_content_types(),
            enabled_rules: default_enabled_rules(),
        }
    }
}

impl RuleConfig {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.number_area_cap > 0.0 && self.number_area_cap <= 1.0) {
            return Err(format!(
                "number_area_cap {} must be in (0, 1]",
                self.number_area_cap
            ));
        }
        if self.frequent_threshold < 1 {
            return Err("frequent_threshold must be >= 1".to_string());
        }
        for (name, [lo, hi]) in [
            ("banner_size", self.banner_size),
            ("interstitial_size", self.interstitial_size),
            ("full_screen_size", self.full_screen_size),
        ] {
            if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo > hi {
                return Err(format!(
                    "{name} [{lo}, {hi}] is not a sub-interval of [0, 1]"
                ));
            }
        }
        Ok(())
    }

    fn size_interval(&self, kind: AdKind) -> [f64; 2] {
        match kind {
            AdKind::Banner => self.banner_size,
            AdKind::Interstitial => self.interstitial_size,
            AdKind::FullScreen => self.full_screen_size,
        }
    }

    /// Stable fingerprint of this configuration (FNV-1a over the canonical
    /// JSON encoding).
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("config serialization cannot fail");
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in bytes {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
        format!("{h:016x}")
    }
}

/// Structured evidence attached to a finding. Every number is recomputable
/// from the serialized graph and the rule configuration alone.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Evidence {
    pub summary: String,
    pub metrics: BTreeMap<String, f64>,
}

/// One detected fraud instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FraudFinding {
    #[serde(rename = "type")]
    pub fraud_type: FraudType,
    #[serde(rename = "states")]
    pub state_ids: Vec<String>,
    #[serde(rename = "views")]
    pub view_ids: Vec<String>,
    pub evidence: Evidence,
    /// Fingerprint of the rule config in force. Carried in memory; the JSON
    /// report stores it once at the top level.
    #[serde(skip)]
    pub rule_config_hash: String,
}

/// Per-app aggregate: the app is fraudulent iff at least one finding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FraudReport {
    pub package: String,
    pub fraudulent: bool,
    pub findings: Vec<FraudFinding>,
    pub config_hash: String,
}

impl FraudReport {
    pub fn to_json(&self) -> Vec<u8> {
        let mut out = serde_json::to_vec_pretty(self).expect("report serialization cannot fail");
        out.push(b'\n');
        out
    }

    pub fn from_json(bytes: &[u8]) -> Result<FraudReport, serde_json::Error> {
        let mut report: FraudReport = serde_json::from_slice(bytes)?;
        for finding in &mut report.findings {
            finding.rule_config_hash = report.config_hash.clone();
        }
        Ok(report)
    }

    /// Human-readable rendering of the findings.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("package: {}\n", self.package));
        if self.findings.is_empty() {
            out.push_str("verdict: no ad fraud detected\n");
        } else {
            out.push_str(&format!(
                "verdict: FRAUD ({} finding{})\n",
                self.findings.len(),
                if self.findings.len() == 1 { "" } else { "s" }
            ));
        }
        for f in &self.findings {
            out.push_str(&format!(
                "  [{}] states={} views={} {}\n",
                f.fraud_type,
                f.state_ids.join(","),
                f.view_ids.join(","),
                f.evidence.summary
            ));
        }
        out.push_str(&format!("config: {}\n", self.config_hash));
        out
    }
}

fn ad_ids(ads: &[DetectedAd]) -> BTreeSet<&str> {
    ads.iter().map(|a| a.view_id.as_str()).collect()
}

fn non_ad_leaves<'a>(state: &'a UIState, ads: &[DetectedAd]) -> Vec<&'a ViewNode> {
    let ids = ad_ids(ads);
    leaf_views(state)
        .into_iter()
        .filter(|v| !ids.contains(v.id.as_str()))
        .collect()
}

fn is_interactive(view: &ViewNode) -> bool {
    view.clickable
        && view.is_leaf()
        && (view.class_suffix().contains("Button") || view.class_name.contains("Dialog"))
}

fn finding(
    fraud_type: FraudType,
    state_ids: Vec<String>,
    view_ids: Vec<String>,
    summary: String,
    metrics: &[(&str, f64)],
) -> FraudFinding {
    FraudFinding {
        fraud_type,
        state_ids,
        view_ids,
        evidence: Evidence {
            summary,
            metrics: metrics.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        },
        rule_config_hash: String::new(),
    }
}

/// Ad hidden: an ad view with some non-ad leaf above it (higher z) whose
/// bounds intersect it.
pub fn check_hidden(state: &UIState, ads: &[DetectedAd]) -> Vec<FraudFinding> {
    let content = non_ad_leaves(state, ads);
    let mut findings = Vec::new();
    for ad in ads {
        let Some(ad_node) = state.view_tree.nodes.get(&ad.view_id) else {
            continue;
        };
        let mut coverers: Vec<&ViewNode> = content
            .iter()
            .copied()
            .filter(|w| w.z > ad_node.z && intersects(&ad_node.bounds, &w.bounds))
            .collect();
        if coverers.is_empty() {
            continue;
        }
        coverers.sort_by(|a, b| a.id.cmp(&b.id));
        let max_overlap = coverers
            .iter()
            .map(|w| intersection_area(&ad_node.bounds, &w.bounds))
            .max()
            .unwrap_or(0);
        let mut views = vec![ad.view_id.clone()];
        views.extend(coverers.iter().map(|w| w.id.clone()));
        findings.push(finding(
            FraudType::Hidden,
            vec![state.id.clone()],
            views,
            format!(
                "ad view {} lies under {} non-ad leaf view(s)",
                ad.view_id,
                coverers.len()
            ),
            &[
                ("covering_views", coverers.len() as f64),
                ("max_overlap_area", max_overlap as f64),
            ],
        ));
    }
    findings
}

fn size_ratio(node: &ViewNode, screen: &ScreenDims) -> f64 {
    let b = node.bounds.clamped_to(screen.width, screen.height);
    if screen.area() <= 0 {
        return 0.0;
    }
    b.area() as f64 / screen.area() as f64
}

/// Ad size: an ad view whose screen-area ratio falls outside the
/// legitimate interval for its kind.
pub fn check_size(
    state: &UIState,
    ads: &[DetectedAd],
    screen: &ScreenDims,
    cfg: &RuleConfig,
) -> Vec<FraudFinding> {
    let mut findings = Vec::new();
    for ad in ads {
        let Some(node) = state.view_tree.nodes.get(&ad.view_id) else {
            continue;
        };
        let ratio = size_ratio(node, screen);
        let [lo, hi] = cfg.size_interval(ad.kind);
        if ratio < lo || ratio > hi {
            findings.push(finding(
                FraudType::Size,
                vec![state.id.clone()],
                vec![ad.view_id.clone()],
                format!(
                    "{} ad {} has size ratio {ratio:.6}, outside [{lo}, {hi}]",
                    ad.kind.as_str(),
                    ad.view_id
                ),
                &[("ratio", ratio), ("interval_lo", lo), ("interval_hi", hi)],
            ));
        }
    }
    findings
}

/// Ad number: the union area of all ad views exceeds the cap while app
/// content is present. Overlapping ads are not double-counted. The ad
/// count is reported as evidence only.
pub fn check_number(
    state: &UIState,
    ads: &[DetectedAd],
    screen: &ScreenDims,
    cfg: &RuleConfig,
) -> Vec<FraudFinding> {
    if ads.is_empty() || non_ad_leaves(state, ads).is_empty() {
        return Vec::new();
    }
    let rects: Vec<Bounds> = ads
        .iter()
        .filter_map(|a| state.view_tree.nodes.get(&a.view_id))
        .map(|n| n.bounds.clamped_to(screen.width, screen.height))
        .collect();
    let total = union_area(&rects);
    if screen.area() <= 0 {
        return Vec::new();
    }
    let ratio = total as f64 / screen.area() as f64;
    if ratio <= cfg.number_area_cap {
        return Vec::new();
    }
    let mut views: Vec<String> = ads.iter().map(|a| a.view_id.clone()).collect();
    views.sort();
    vec![finding(
        FraudType::Number,
        vec![state.id.clone()],
        views,
        format!(
            "{} ad views cover {ratio:.4} of the screen, above the {} cap",
            ads.len(),
            cfg.number_area_cap
        ),
        &[
            ("total_ratio", ratio),
            ("ad_count", ads.len() as f64),
            ("cap", cfg.number_area_cap),
        ],
    )]
}

/// Ad overlap: an ad view at or above an intersecting non-ad clickable
/// leaf, forcing interaction through the ad.
pub fn check_overlap(state: &UIState, ads: &[DetectedAd]) -> Vec<FraudFinding> {
    let content = non_ad_leaves(state, ads);
    let mut findings = Vec::new();
    for ad in ads {
        let Some(ad_node) = state.view_tree.nodes.get(&ad.view_id) else {
            continue;
        };
        let mut covered: Vec<&ViewNode> = content
            .iter()
            .copied()
            .filter(|w| w.clickable && ad_node.z >= w.z && intersects(&ad_node.bounds, &w.bounds))
            .collect();
        if covered.is_empty() {
            continue;
        }
        covered.sort_by(|a, b| a.id.cmp(&b.id));
        let mut views = vec![ad.view_id.clone()];
        views.extend(covered.iter().map(|w| w.id.clone()));
        findings.push(finding(
            FraudType::Overlap,
            vec![state.id.clone()],
            views,
            format!(
                "ad view {} sits over {} clickable non-ad view(s)",
                ad.view_id,
                covered.len()
            ),
            &[("overlapped_views", covered.len() as f64)],
        ));
    }
    findings
}

type Detections = BTreeMap<String, Vec<DetectedAd>>;

fn user_transition(t: &crate::model::Transition) -> bool {
    !matches!(t.event.kind, EventType::AppStart)
}

/// Interaction ad: a state with interactive views followed by a state
/// whose ad view covers where those views were, intercepting the tap.
pub fn check_interaction(graph: &UTGraph, detections: &Detections) -> Vec<FraudFinding> {
    let mut seen: BTreeSet<(String, String, String)> = BTreeSet::new();
    let mut findings = Vec::new();
    for t in &graph.transitions {
        if matches!(t.event.kind, EventType::AppStart | EventType::AppExit) {
            continue;
        }
        let (Some(s1), Some(s2)) = (graph.states.get(&t.source), graph.states.get(&t.target))
        else {
            continue;
        };
        let interactive: Vec<&ViewNode> = leaf_views(s1)
            .into_iter()
            .filter(|v| is_interactive(v))
            .collect();
        if interactive.is_empty() {
            continue;
        }
        let Some(ads) = detections.get(&s2.id) else {
            continue;
        };
        for ad in ads {
            let Some(ad_node) = s2.view_tree.nodes.get(&ad.view_id) else {
                continue;
            };
            let mut hit: Vec<&ViewNode> = interactive
                .iter()
                .copied()
                .filter(|v| intersects(&ad_node.bounds, &v.bounds))
                .collect();
            if hit.is_empty() {
                continue;
            }
            if !seen.insert((s1.id.clone(), s2.id.clone(), ad.view_id.clone())) {
                continue;
            }
            hit.sort_by(|a, b| a.id.cmp(&b.id));
            let mut views = vec![ad.view_id.clone()];
            views.extend(hit.iter().map(|v| v.id.clone()));
            findings.push(finding(
                FraudType::Interaction,
                vec![s1.id.clone(), s2.id.clone()],
                views,
                format!(
                    "ad view {} in {} covers {} interactive view(s) of the preceding state {}",
                    ad.view_id,
                    s2.id,
                    hit.len(),
                    s1.id
                ),
                &[("covered_interactive_views", hit.len() as f64)],
            ));
        }
    }
    findings
}

fn is_download_record(record: &crate::model::TrafficRecord, cfg: &RuleConfig) -> bool {
    starts_with_zip_magic(&record.body_magic)
        || cfg
            .download_content_types
            .contains(&record.response_content_type.to_ascii_lowercase())
}

/// Drive-by download: all four conditions hold for a state — it shows ads,
/// an unconfirmed download lands on it, some next state keeps the same
/// activity, and the state was reached by a touch event.
pub fn check_drive_by(
    graph: &UTGraph,
    detections: &Detections,
    cfg: &RuleConfig,
) -> Vec<FraudFinding> {
    let mut findings = Vec::new();
    for (sid, state) in &graph.states {
        let ads = detections.get(sid).map(Vec::as_slice).unwrap_or(&[]);
        if ads.is_empty() {
            continue;
        }
        let downloads: Vec<&crate::model::TrafficRecord> = graph
            .traffic
            .values()
            .filter(|r| r.state_id == *sid && !r.user_initiated && is_download_record(r, cfg))
            .collect();
        if downloads.is_empty() {
            continue;
        }
        let same_activity_next = graph.transitions.iter().any(|t| {
            user_transition(t)
                && t.source == *sid
                && graph
                    .states
                    .get(&t.target)
                    .is_some_and(|next| next.activity == state.activity)
        });
        if !same_activity_next {
            continue;
        }
        let touch_triggered = graph
            .transitions
            .iter()
            .any(|t| t.target == *sid && t.event.kind.is_touch());
        if !touch_triggered {
            continue;
        }
        let mut views: Vec<String> = ads.iter().map(|a| a.view_id.clone()).collect();
        views.sort();
        let traffic_ids: Vec<&str> = downloads.iter().map(|r| r.id.as_str()).collect();
        findings.push(finding(
            FraudType::DriveBy,
            vec![sid.clone()],
            views,
            format!(
                "unconfirmed download ({}) on ad state {} reached by touch, next state keeps the activity",
                traffic_ids.join(","),
                sid
            ),
            &[("download_records", downloads.len() as f64)],
        ));
    }
    findings
}

/// Outside ad: an ad view shown in a state whose activity does not belong
/// to the app (home screen, other apps).
pub fn check_outside(graph: &UTGraph, detections: &Detections) -> Vec<FraudFinding> {
    let mut findings = Vec::new();
    for (sid, state) in &graph.states {
        if state.kind != StateKind::External {
            continue;
        }
        let ads = detections.get(sid).map(Vec::as_slice).unwrap_or(&[]);
        if ads.is_empty() {
            continue;
        }
        let mut views: Vec<String> = ads.iter().map(|a| a.view_id.clone()).collect();
        views.sort();
        findings.push(finding(
            FraudType::Outside,
            vec![sid.clone()],
            views,
            format!(
                "ad shown outside the app environment (activity {})",
                state.activity
            ),
            &[("ad_views", ads.len() as f64)],
        ));
    }
    findings
}

fn big_ads(ads: &[DetectedAd]) -> Vec<&DetectedAd> {
    ads.iter()
        .filter(|a| matches!(a.kind, AdKind::Interstitial | AdKind::FullScreen))
        .collect()
}

/// Frequent ad: an interstitial/full-screen state displayed over more
/// distinct incoming transition edges than the threshold allows. Repeat
/// visits over the same edge count once.
pub fn check_frequent(
    graph: &UTGraph,
    detections: &Detections,
    cfg: &RuleConfig,
) -> Vec<FraudFinding> {
    let mut findings = Vec::new();
    for sid in graph.states.keys() {
        let ads = detections.get(sid).map(Vec::as_slice).unwrap_or(&[]);
        let big = big_ads(ads);
        if big.is_empty() {
            continue;
        }
        let mut edges: BTreeSet<(String, EventType, Option<String>)> = BTreeSet::new();
        for t in &graph.transitions {
            if t.target == *sid && user_transition(t) {
                edges.insert((t.source.clone(), t.event.kind, t.event.view_id.clone()));
            }
        }
        let count = edges.len() as u32;
        if count <= cfg.frequent_threshold {
            continue;
        }
        let mut views: Vec<String> = big.iter().map(|a| a.view_id.clone()).collect();
        views.sort();
        findings.push(finding(
            FraudType::Frequent,
            vec![sid.clone()],
            views,
            format!(
                "ad state {sid} displayed via {count} distinct transitions (threshold {})",
                cfg.frequent_threshold
            ),
            &[
                ("distinct_edges", count as f64),
                ("threshold", cfg.frequent_threshold as f64),
            ],
        ));
    }
    findings
}

const NON_CONTENT_KINDS: [StateKind; 5] = [
    StateKind::Launch,
    StateKind::Login,
    StateKind::Exit,
    StateKind::Error,
    StateKind::Thankyou,
];

/// Non-content ad: interstitial/full-screen ads on launch/login/exit/
/// error/thank-you states, or on a contentless state one transition away
/// from such a state.
pub fn check_non_content(graph: &UTGraph, detections: &Detections) -> Vec<FraudFinding> {
    let mut findings = Vec::new();
    for (sid, state) in &graph.states {
        let ads = detections.get(sid).map(Vec::as_slice).unwrap_or(&[]);
        let big = big_ads(ads);
        if big.is_empty() {
            continue;
        }
        let direct = NON_CONTENT_KINDS.contains(&state.kind);
        let adjacent = if direct {
            false
        } else if non_ad_leaves(state, ads).is_empty() {
            graph.transitions.iter().any(|t| {
                user_transition(t)
                    && ((t.source == *sid
                        && graph
                            .states
                            .get(&t.target)
                            .is_some_and(|o| NON_CONTENT_KINDS.contains(&o.kind)))
                        || (t.target == *sid
                            && graph
                                .states
                                .get(&t.source)
                                .is_some_and(|o| NON_CONTENT_KINDS.contains(&o.kind))))
            })
        } else {
            false
        };
        if !direct && !adjacent {
            continue;
        }
        let mut views: Vec<String> = big.iter().map(|a| a.view_id.clone()).collect();
        views.sort();
        let why = if direct {
            format!("interstitial/full-screen ad on a {:?} state", state.kind)
        } else {
            "interstitial/full-screen ad on a contentless state adjacent to a non-content state"
                .to_string()
        };
        findings.push(finding(
            FraudType::NonContent,
            vec![sid.clone()],
            views,
            why,
            &[("ad_views", big.len() as f64)],
        ));
    }
    findings
}

/// Run every enabled rule over a validated graph and aggregate the
/// findings into a report. Within-app evaluation is sequential so reports
/// are reproducible.
pub fn check_all(
    graph: &UTGraph,
    rule_cfg: &RuleConfig,
    ad_cfg: &AdFeatureConfig,
) -> Result<FraudReport, ModelError> {
    rule_cfg
        .validate()
        .map_err(|e| ModelError::Invalid(vec![format!("rule config: {e}")]))?;
    ad_cfg
        .validate()
        .map_err(|e| ModelError::Invalid(vec![format!("ad config: {e}")]))?;
    let violations = graph.validate();
    if !violations.is_empty() {
        return Err(ModelError::Invalid(violations));
    }

    let detections = detect_graph_ad_views(graph, ad_cfg);
    let mut findings = Vec::new();
    let on = |t: FraudType| rule_cfg.enabled_rules.contains(&t);

    for (sid, state) in &graph.states {
        let ads = detections.get(sid).map(Vec::as_slice).unwrap_or(&[]);
        if on(FraudType::Hidden) {
            findings.extend(check_hidden(state, ads));
        }
        if on(FraudType::Size) {
            findings.extend(check_size(state, ads, &graph.screen, rule_cfg));
        }
        if on(FraudType::Number) {
            findings.extend(check_number(state, ads, &graph.screen, rule_cfg));
        }
        if on(FraudType::Overlap) {
            findings.extend(check_overlap(state, ads));
        }
    }
    if on(FraudType::Interaction) {
        findings.extend(check_interaction(graph, &detections));
    }
    if on(FraudType::DriveBy) {
        findings.extend(check_drive_by(graph, &detections, rule_cfg));
    }
    if on(FraudType::Outside) {
        findings.extend(check_outside(graph, &detections));
    }
    if on(FraudType::Frequent) {
        findings.extend(check_frequent(graph, &detections, rule_cfg));
    }
    if on(FraudType::NonContent) {
        findings.extend(check_non_content(graph, &detections));
    }

    let hash = rule_cfg.hash();
    for f in &mut findings {
        f.rule_config_hash = hash.clone();
    }
    findings.sort_by(|a, b| {
        (a.fraud_type, &a.state_ids, &a.view_ids).cmp(&(b.fraud_type, &b.state_ids, &b.view_ids))
    });

    Ok(FraudReport {
        package: graph.app.package.clone(),
        fraudulent: !findings.is_empty(),
        findings,
        config_hash: hash,
    })
}
