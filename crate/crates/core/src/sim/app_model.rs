//! The synthetic app model that exploration walks.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::SimError;
use crate::geometry::Bounds;
use crate::model::{AppMeta, EventType, HttpMethod, ScreenDims, StateKind};

/// A static (non-ad) view on a screen template. Views without a parent hang
/// off the implicit full-screen root container.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TemplateView {
    pub id: String,
    pub class: String,
    pub resource_id: String,
    #[serde(default)]
    pub text: String,
    pub bounds: Bounds,
    pub z: i64,
    pub clickable: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent: Option<String>,
}

/// An ad slot. `emits_trace` controls whether rendering the screen records
/// an ad-load method trace; `renders_view` whether the ad view node appears
/// in the tree. Fault injection flips these flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdSpec {
    pub id: String,
    pub class: String,
    pub resource_id: String,
    pub bounds: Bounds,
    pub z: i64,
    #[serde(default = "yes")]
    pub emits_trace: bool,
    #[serde(default = "yes")]
    pub renders_view: bool,
    /// Emit an ad-fetch HTTP record when the ad renders.
    #[serde(default)]
    pub fetch_traffic: bool,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrafficSpec {
    pub method: HttpMethod,
    pub url: String,
    pub content_type: String,
    pub length: i64,
    pub body_magic: String,
    pub user_initiated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Effect {
    /// Move to another screen.
    Goto { screen: String },
    /// Record a transfer on the current state, then move.
    Download { traffic: TrafficSpec, to: String },
    /// Leave the app; no new state is produced.
    ExitApp,
}

/// One event handler. `view: None` models screen-level events (back,
/// app exit).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Handler {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub view: Option<String>,
    pub event: EventType,
    pub effect: Effect,
}

/// A view that takes new bounds when an ad slot on the screen fails to
/// load (apps reflow around empty ad containers).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Reflow {
    pub view: String,
    pub bounds: Bounds,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Screen {
    pub activity: String,
    pub kind: StateKind,
    #[serde(default)]
    pub views: Vec<TemplateView>,
    #[serde(default)]
    pub ads: Vec<AdSpec>,
    #[serde(default)]
    pub handlers: Vec<Handler>,
    #[serde(default)]
    pub reflow_on_ad_failure: Vec<Reflow>,
    /// Screens sharing a chain id form a scroll group whose ad views carry
    /// over without reloading.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scroll_chain: Option<String>,
}

/// Injected-fault record kept on the model for error attribution. Purely
/// observational: detection never reads it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FaultAnnotation {
    /// An ad handler kept its load trace but rendered no ad view.
    LoadFailure { screen: String, ad: String },
    /// A scroll chain kept its ad views but lost its load traces.
    InheritedAdSuppressed { chain: String },
}

impl FaultAnnotation {
    /// The detector-error mechanism this fault reproduces.
    pub fn mechanism(&self) -> &'static str {
        match self {
            FaultAnnotation::LoadFailure { .. } => "trace_without_displayed_ad",
            FaultAnnotation::InheritedAdSuppressed { .. } => "inherited_ad_view",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AppModel {
    pub meta: AppMeta,
    pub screen: ScreenDims,
    pub start_screen: String,
    pub screens: BTreeMap<String, Screen>,
    pub seed: u64,
    #[serde(default)]
    pub fault_log: Vec<FaultAnnotation>,
}

impl AppModel {
    /// Canonical JSON encoding; byte-identical for equal models.
    pub fn to_json(&self) -> Vec<u8> {
        let mut out = serde_json::to_vec_pretty(self).expect("model serialization cannot fail");
        out.push(b'\n');
        out
    }

    pub fn from_json(bytes: &[u8]) -> Result<AppModel, SimError> {
        Ok(serde_json::from_slice(bytes)?)
    }

    /// Structural checks: handlers reference existing views, navigation
    /// targets exist, activities line up with the external tag, ids and z
    /// values are unique per screen.
    pub fn validate(&self) -> Vec<String> {
        let mut v = Vec::new();
        if self.meta.package.is_empty() {
            v.push("meta: package is empty".to_string());
        }
        if self.meta.activities.is_empty() {
            v.push("meta: activities list is empty".to_string());
        }
        if !self.screens.contains_key(&self.start_screen) {
            v.push(format!("start_screen {} does not exist", self.start_screen));
        }
        let declared: BTreeSet<&str> = self.meta.activities.iter().map(|a| a.as_str()).collect();

        for (sid, screen) in &self.screens {
            let external = screen.kind == StateKind::External;
            if external == declared.contains(screen.activity.as_str()) {
                v.push(format!(
                    "screen {sid}: activity {} vs external kind mismatch",
                    screen.activity
                ));
            }

            let mut ids = BTreeSet::new();
            let mut zs = BTreeSet::new();
            zs.insert(0i64); // implicit root
            for view in &screen.views {
                if !ids.insert(view.id.as_str()) {
                    v.push(format!("screen {sid}: duplicate view id {}", view.id));
                }
                if !zs.insert(view.z) {
                    v.push(format!(
                        "screen {sid}: duplicate z {} on {}",
                        view.z, view.id
                    ));
                }
                if !view.bounds.is_valid() {
                    v.push(format!("screen {sid}: view {} has invalid bounds", view.id));
                }
                if let Some(parent) = &view.parent {
                    if !screen.views.iter().any(|w| &w.id == parent) {
                        v.push(format!(
                            "screen {sid}: view {} references missing parent {parent}",
                            view.id
                        ));
                    }
                }
            }
            for ad in &screen.ads {
                if !ids.insert(ad.id.as_str()) {
                    v.push(format!("screen {sid}: duplicate ad id {}", ad.id));
                }
                if !zs.insert(ad.z) {
                    v.push(format!(
                        "screen {sid}: duplicate z {} on ad {}",
                        ad.z, ad.id
                    ));
                }
                if !ad.bounds.is_valid() {
                    v.push(format!("screen {sid}: ad {} has invalid bounds", ad.id));
                }
            }
            for (i, handler) in screen.handlers.iter().enumerate() {
                if let Some(view) = &handler.view {
                    if !ids.contains(view.as_str()) {
                        v.push(format!(
                            "screen {sid}: handler {i} references missing view {view}"
                        ));
                    }
                }
                let target = match &handler.effect {
                    Effect::Goto { screen } => Some(screen),
                    Effect::Download { to, .. } => Some(to),
                    Effect::ExitApp => None,
                };
                if let Some(target) = target {
                    if !self.screens.contains_key(target) {
                        v.push(format!(
                            "screen {sid}: handler {i} targets missing screen {target}"
                        ));
                    }
                }
            }
            for reflow in &screen.reflow_on_ad_failure {
                if !ids.contains(reflow.view.as_str()) {
                    v.push(format!(
                        "screen {sid}: reflow references missing view {}",
                        reflow.view
                    ));
                }
                if !reflow.bounds.is_valid() {
                    v.push(format!(
                        "screen {sid}: reflow of {} has invalid bounds",
                        reflow.view
                    ));
                }
            }
        }
        v
    }

    /// The ad-load trace string the model's ad library writes.
    pub fn trace_string(&self) -> String {
        let lib = self
            .meta
            .detected_ad_libs
            .first()
            .map(String::as_str)
            .unwrap_or("com.google.ads");
        format!("{lib}.AdView.loadAd")
    }
}
