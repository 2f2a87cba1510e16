//! Ad-view identification among the leaf views of ad-relevant states.
//!
//! A state is only inspected when it is gated in: either its own ad-load
//! method traces match a configured signature prefix, or a scroll/drag
//! predecessor in the same graph was gated (ad views carry over when those
//! events do not reload views). Within a gated state a leaf is reported as
//! an ad view iff (string feature OR type feature) AND the placement
//! feature assigns it a kind.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::geometry::Bounds;
use crate::model::{leaf_views, ScreenDims, UIState, UTGraph, ViewNode};

/// Package prefixes of the bundled ad networks. Doubles as the default
/// ad-library match list for the pre-filter and, with a trailing dot, as
/// the default ad-load method signature prefixes.
pub const AD_NETWORK_PREFIXES: [&str; 20] = [
    "com.google.ads",
    "com.adwhirl",
    "com.appbrain",
    "com.dianjin",
    "cn.waps",
    "com.vpon",
    "com.feiwo",
    "com.inmobi",
    "com.baidu.mobads",
    "com.apperhand",
    "com.anzhi",
    "com.startapp",
    "net.youmi",
    "com.tencent.mobwin",
    "com.doodlemobile",
    "com.jumptap",
    "com.adsmogo",
    "com.fyber",
    "com.kuguo",
    "cn.domob",
];

/// English words that contain "ad" as a substring but do not hint at
/// advertising. Identifier tokens matching one of these are not treated as
/// ad hints. Pinned in-repo for reproducibility.
pub const DEFAULT_WHITELIST: [&str; 186] = [
    "abroad",
    "academia",
    "academic",
    "academy",
    "adapt",
    "adaptation",
    "adapter",
    "adaptive",
    "add",
    "added",
    "addendum",
    "adding",
    "addition",
    "additional",
    "address",
    "addressed",
    "addresses",
    "adequate",
    "adhere",
    "adhesive",
    "adjacent",
    "adjective",
    "adjust",
    "adjustable",
    "adjusted",
    "adjustment",
    "admin",
    "administration",
    "administrator",
    "admiral",
    "admire",
    "admission",
    "admit",
    "adolescent",
    "adopt",
    "adopted",
    "adoption",
    "adorable",
    "adore",
    "adrenaline",
    "adult",
    "adults",
    "advance",
    "advanced",
    "advantage",
    "adventure",
    "adverb",
    "advice",
    "advise",
    "advisor",
    "advisory",
    "advocate",
    "ahead",
    "already",
    "arcade",
    "avocado",
    "badge",
    "badges",
    "ballad",
    "blade",
    "bread",
    "breadcrumb",
    "broad",
    "broadband",
    "broadcast",
    "broadcasting",
    "broadly",
    "broadway",
    "bulkhead",
    "cadence",
    "cadet",
    "canada",
    "cascade",
    "circadian",
    "colorado",
    "comrade",
    "crusade",
    "dead",
    "deadline",
    "deadlock",
    "deadly",
    "decade",
    "degrade",
    "download",
    "downloadable",
    "downloaded",
    "downloader",
    "downloading",
    "downloads",
    "dread",
    "dreadful",
    "facade",
    "forehead",
    "gadget",
    "gadgets",
    "gonad",
    "grade",
    "graded",
    "gradient",
    "gradients",
    "gradual",
    "gradually",
    "graduate",
    "graduated",
    "grenade",
    "had",
    "head",
    "headache",
    "header",
    "headers",
    "heading",
    "headline",
    "headphone",
    "headphones",
    "headquarters",
    "headset",
    "instead",
    "ladder",
    "load",
    "loadable",
    "loaded",
    "loader",
    "loaders",
    "loading",
    "loads",
    "madam",
    "made",
    "madly",
    "madness",
    "meadow",
    "monad",
    "myriad",
    "nevada",
    "nomad",
    "nomadic",
    "notepad",
    "overhead",
    "overload",
    "overloaded",
    "pad",
    "padded",
    "padding",
    "pads",
    "parade",
    "paradigm",
    "paradise",
    "paradox",
    "quad",
    "quadrant",
    "quadratic",
    "radar",
    "radial",
    "radiance",
    "radiant",
    "radiation",
    "radiator",
    "radical",
    "radio",
    "radios",
    "radius",
    "read",
    "readability",
    "readable",
    "reader",
    "readers",
    "readily",
    "readiness",
    "reading",
    "readings",
    "readme",
    "readonly",
    "reads",
    "ready",
    "reload",
    "reloaded",
    "reloading",
    "renegade",
    "road",
    "roadmap",
    "roads",
    "roadster",
    "salad",
    "shade",
    "shaded",
    "shadow",
    "shadows",
];

/// Remaining whitelist entries kept separate only to keep rustfmt happy on
/// the long literal above.
pub const DEFAULT_WHITELIST_TAIL: [&str; 26] = [
    "spread",
    "spreads",
    "spreadsheet",
    "squad",
    "steadily",
    "steady",
    "thread",
    "threaded",
    "threading",
    "threads",
    "toad",
    "tornado",
    "trade",
    "traded",
    "trademark",
    "trader",
    "trading",
    "tradition",
    "traditional",
    "tread",
    "treadmill",
    "triad",
    "upgrade",
    "upgraded",
    "upload",
    "workload",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdKind {
    Banner,
    Interstitial,
    FullScreen,
}

impl AdKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            AdKind::Banner => "banner",
            AdKind::Interstitial => "interstitial",
            AdKind::FullScreen => "full_screen",
        }
    }
}

/// Configuration for the string/type/placement features and the trace gate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdFeatureConfig {
    #[serde(default = "default_whitelist")]
    pub whitelist: BTreeSet<String>,
    #[serde(default = "default_ad_type_classes")]
    pub ad_type_classes: BTreeSet<String>,
    #[serde(default = "default_ad_load_signatures")]
    pub ad_load_signatures: BTreeSet<String>,
    /// Area-ratio interval a banner-placed view must fall in to be
    /// detected. Wider than the size rule's banner interval so that
    /// oversized banner ads are still recognized as ads.
    #[serde(default = "default_banner_ratio")]
    pub banner_ratio: [f64; 2],
    #[serde(default = "default_interstitial_ratio")]
    pub interstitial_ratio: [f64; 2],
    #[serde(default = "default_full_ratio")]
    pub full_ratio: [f64; 2],
    /// Maximum horizontal-center offset for interstitials, as a fraction
    /// of screen width.
    #[serde(default = "default_center_tolerance")]
    pub center_tolerance: f64,
    /// Band at the top/bottom of the screen where banners live, as a
    /// fraction of screen height.
    #[serde(default = "default_edge_band")]
    pub edge_band: f64,
}

fn default_whitelist() -> BTreeSet<String> {
    DEFAULT_WHITELIST
        .iter()
        .chain(DEFAULT_WHITELIST_TAIL.iter())
        .map(|w| w.to_string())
        .collect()
}

fn default_ad_type_classes() -> BTreeSet<String> {
    ["ImageView", "WebView", "ViewFlipper"]
        .into_iter()
        .map(String::from)
        .collect()
}

fn default_ad_load_signatures() -> BTreeSet<String> {
    AD_NETWORK_PREFIXES
        .iter()
        .map(|p| format!("{p}."))
        .collect()
}

fn default_banner_ratio() -> [f64; 2] {
    [0.004, 0.09]
}

fn default_interstitial_ratio() -> [f64; 2] {
    [0.2, 0.8]
}

fn default_full_ratio() -> [f64; 2] {
    [0.9, 1.0]
}

fn default_center_tolerance() -> f64 {
    0.05
}

fn default_edge_band() -> f64 {
    0.10
}

impl Default for AdFeatureConfig {
    fn default() -> Self {
        AdFeatureConfig {
            whitelist: default_whitelist(),
            ad_type_classes: default_ad_type_classes(),
            ad_load_signatures: default_ad_load_signatures(),
            banner_ratio: default_banner_ratio(),
            interstitial_ratio: default_interstitial_ratio(),
            full_ratio: default_full_ratio(),
            center_tolerance: default_center_tolerance(),
            edge_band: default_edge_band(),
        }
    }
}

impl AdFeatureConfig {
    /// Intervals must sit inside [0, 1] and be pairwise disjoint so kind
    /// assignment is unambiguous; the whitelist must be non-empty.
    pub fn validate(&self) -> Result<(), String> {
        if self.whitelist.is_empty() {
            return Err("whitelist must not be empty".to_string());
        }
        let mut intervals = [
            ("banner_ratio", self.banner_ratio),
            ("interstitial_ratio", self.interstitial_ratio),
            ("full_ratio", self.full_ratio),
        ];
        for (name, [lo, hi]) in &intervals {
            if !(0.0..=1.0).contains(lo) || !(0.0..=1.0).contains(hi) || lo > hi {
                return Err(format!(
                    "{name} [{lo}, {hi}] is not a sub-interval of [0, 1]"
                ));
            }
        }
        intervals.sort_by(|a, b| a.1[0].total_cmp(&b.1[0]));
        for pair in intervals.windows(2) {
            if pair[1].1[0] <= pair[0].1[1] {
                return Err(format!("{} and {} overlap", pair[0].0, pair[1].0));
            }
        }
        if !(0.0..=1.0).contains(&self.center_tolerance) || !(0.0..=1.0).contains(&self.edge_band) {
            return Err("center_tolerance and edge_band must be in [0, 1]".to_string());
        }
        Ok(())
    }
}

/// A leaf view identified as an ad, with its assigned kind.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetectedAd {
    pub view_id: String,
    pub kind: AdKind,
}

/// Split an identifier into lowercase tokens at non-letter characters and
/// camel-case boundaries ("AdWebview" -> ["ad", "webview"], "ADView" ->
/// ["ad", "view"], "load_button" -> ["load", "button"]).
fn tokens_into(identifier: &str, out: &mut Vec<String>) {
    let chars: Vec<char> = identifier.chars().collect();
    let mut cur = String::new();
    for i in 0..chars.len() {
        let c = chars[i];
        if !c.is_ascii_alphabetic() {
            if !cur.is_empty() {
                out.push(std::mem::take(&mut cur));
            }
            continue;
        }
        if c.is_ascii_uppercase() && !cur.is_empty() {
            let prev = chars[i - 1];
            let boundary = if prev.is_ascii_lowercase() {
                true
            } else {
                // End of an upper-case run: "ADView" splits before "V".
                matches!(chars.get(i + 1), Some(n) if n.is_ascii_lowercase())
            };
            if boundary {
                out.push(std::mem::take(&mut cur));
            }
        }
        cur.push(c.to_ascii_lowercase());
    }
    if !cur.is_empty() {
        out.push(cur);
    }
}

fn identifier_tokens(view: &ViewNode) -> Vec<String> {
    let mut out = Vec::new();
    tokens_into(&view.class_name, &mut out);
    tokens_into(&view.resource_id, &mut out);
    out
}

/// True iff some identifier token contains "ad" and is not whitelisted.
pub fn string_feature(view: &ViewNode, cfg: &AdFeatureConfig) -> bool {
    identifier_tokens(view)
        .iter()
        .any(|t| t.contains("ad") && !cfg.whitelist.contains(t))
}

/// True iff the class name's final segment is one of the ad view classes.
pub fn type_feature(view: &ViewNode, cfg: &AdFeatureConfig) -> bool {
    cfg.ad_type_classes.contains(view.class_suffix())
}

fn in_interval(ratio: f64, interval: [f64; 2]) -> bool {
    interval[0] <= ratio && ratio <= interval[1]
}

/// Assign an ad kind from size and position, or none. Bounds are clamped
/// to the screen first; precedence is full screen, then interstitial, then
/// banner.
pub fn placement_feature(
    view: &ViewNode,
    screen: &ScreenDims,
    cfg: &AdFeatureConfig,
) -> Option<AdKind> {
    placement_of(&view.bounds, screen, cfg)
}

pub fn placement_of(bounds: &Bounds, screen: &ScreenDims, cfg: &AdFeatureConfig) -> Option<AdKind> {
    if screen.area() <= 0 {
        return None;
    }
    let b = bounds.clamped_to(screen.width, screen.height);
    if b.area() <= 0 {
        return None;
    }
    let ratio = b.area() as f64 / screen.area() as f64;
    if in_interval(ratio, cfg.full_ratio) {
        return Some(AdKind::FullScreen);
    }
    let centered = (b.center_x() - screen.width as f64 / 2.0).abs()
        <= cfg.center_tolerance * screen.width as f64;
    if in_interval(ratio, cfg.interstitial_ratio) && centered {
        return Some(AdKind::Interstitial);
    }
    let band = cfg.edge_band * screen.height as f64;
    let near_top = (b.top as f64) <= band;
    let near_bottom = (screen.height - b.bottom) as f64 <= band;
    if in_interval(ratio, cfg.banner_ratio) && (near_top || near_bottom) {
        return Some(AdKind::Banner);
    }
    None
}

/// True iff any recorded ad-load trace starts with a configured signature
/// prefix.
pub fn has_ad_load_trace(state: &UIState, cfg: &AdFeatureConfig) -> bool {
    state.ad_load_traces.iter().any(|trace| {
        cfg.ad_load_signatures
            .iter()
            .any(|sig| trace.starts_with(sig))
    })
}

fn detect_gated(state: &UIState, screen: &ScreenDims, cfg: &AdFeatureConfig) -> Vec<DetectedAd> {
    leaf_views(state)
        .into_iter()
        .filter(|v| string_feature(v, cfg) || type_feature(v, cfg))
        .filter_map(|v| {
            placement_feature(v, screen, cfg).map(|kind| DetectedAd {
                view_id: v.id.clone(),
                kind,
            })
        })
        .collect()
}

/// Detect ad views in one state, gated by the state's own ad-load traces.
/// Result is ordered by descending z.
pub fn detect_ad_views(
    state: &UIState,
    screen: &ScreenDims,
    cfg: &AdFeatureConfig,
) -> Vec<DetectedAd> {
    if !has_ad_load_trace(state, cfg) {
        return Vec::new();
    }
    detect_gated(state, screen, cfg)
}

/// Feature evaluation without the trace gate. The gated result is always a
/// subset of this one.
pub fn detect_ungated(
    state: &UIState,
    screen: &ScreenDims,
    cfg: &AdFeatureConfig,
) -> Vec<DetectedAd> {
    detect_gated(state, screen, cfg)
}

/// The set of state ids that pass the gate in graph context: states with
/// their own matching traces, plus states reachable from a gated state
/// over scroll/drag transitions (which do not reload views, so ad views
/// and their gate carry over).
pub fn gated_states(graph: &UTGraph, cfg: &AdFeatureConfig) -> BTreeSet<String> {
    let mut gated: BTreeSet<String> = graph
        .states
        .values()
        .filter(|s| has_ad_load_trace(s, cfg))
        .map(|s| s.id.clone())
        .collect();
    loop {
        let mut grew = false;
        for t in &graph.transitions {
            if t.event.kind.inherits_views()
                && gated.contains(&t.source)
                && !gated.contains(&t.target)
            {
                gated.insert(t.target.clone());
                grew = true;
            }
        }
        if !grew {
            break;
        }
    }
    gated
}

/// Detect ad views in every state of a graph, honoring the inherited-ad
/// gate across scroll/drag transitions.
pub fn detect_graph_ad_views(
    graph: &UTGraph,
    cfg: &AdFeatureConfig,
) -> BTreeMap<String, Vec<DetectedAd>> {
    let gated = gated_states(graph, cfg);
    graph
        .states
        .values()
        .map(|s| {
            let ads = if gated.contains(&s.id) {
                detect_gated(s, &graph.screen, cfg)
            } else {
                Vec::new()
            };
            (s.id.clone(), ads)
        })
        .collect()
}
