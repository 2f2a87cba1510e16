//! UI state transition graph (UTG) data model and its JSON wire format.
//!
//! One document describes one app run: app metadata, the screen dimensions,
//! every captured UI state with its view tree, the transitions between
//! states, and the HTTP traffic records tied to states/views.
//!
//! All types are immutable after construction; operations are pure. Unknown
//! JSON fields are rejected, field order is irrelevant, and serialization is
//! canonical (states, nodes and traffic sorted by id), so
//! serialize . deserialize . serialize is a fixed point.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::geometry::Bounds;
use crate::taxonomy::FraudType;

/// One view in a state's layout. `z` is a global stacking index within the
/// state (larger draws on top); it is global rather than per-sibling because
/// pop-ups escape their containers and cover views across subtree boundaries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ViewNode {
    pub id: String,
    #[serde(rename = "class")]
    pub class_name: String,
    pub resource_id: String,
    pub text: String,
    pub bounds: Bounds,
    pub z: i64,
    pub clickable: bool,
    pub children: Vec<String>,
}

impl ViewNode {
    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    /// Final dot-separated segment of the class name.
    pub fn class_suffix(&self) -> &str {
        self.class_name.rsplit('.').next().unwrap_or("")
    }
}

/// Parent/child hierarchy of one state's views. Exactly one root; the
/// parent/child links form a tree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ViewTree {
    pub root: String,
    #[serde(with = "node_list")]
    pub nodes: BTreeMap<String, ViewNode>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateKind {
    Launch,
    Login,
    Content,
    Exit,
    Error,
    Thankyou,
    External,
}

/// One node of the UTG: a snapshot of the rendered UI, plus the ad-load
/// method traces recorded while in the state and the ids of attached
/// traffic records.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UIState {
    pub id: String,
    pub activity: String,
    pub kind: StateKind,
    pub ad_load_traces: Vec<String>,
    pub traffic_ids: Vec<String>,
    pub view_tree: ViewTree,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventType {
    Click,
    LongClick,
    Scroll,
    Drag,
    Back,
    AppStart,
    AppExit,
}

impl EventType {
    /// Touch events in the drive-by rule's sense.
    pub fn is_touch(&self) -> bool {
        matches!(self, EventType::Click | EventType::LongClick)
    }

    /// Events that keep views from reloading, so ad views carry over.
    pub fn inherits_views(&self) -> bool {
        matches!(self, EventType::Scroll | EventType::Drag)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputEvent {
    #[serde(rename = "type")]
    pub kind: EventType,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub view_id: Option<String>,
}

/// Directed edge of the UTG, labelled with the input event that caused it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Transition {
    pub source: String,
    pub target: String,
    pub event: InputEvent,
}

/// Ground-truth fraud labels, present only on benchmark corpora. Detection
/// never reads them; only the metrics module does.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AppLabel {
    pub fraud_types: Vec<FraudType>,
}

impl AppLabel {
    pub fn is_fraudulent(&self) -> bool {
        !self.fraud_types.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AppMeta {
    pub package: String,
    pub permissions: Vec<String>,
    pub activities: Vec<String>,
    pub detected_ad_libs: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<AppLabel>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum HttpMethod {
    Get,
    Post,
}

/// Summary of one HTTP request/response tied to a state and optionally to
/// the view whose interaction produced it. `body_magic` holds the first 8
/// response bytes hex-encoded; `user_initiated` records whether a
/// confirmation dialog preceded the transfer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrafficRecord {
    pub id: String,
    pub state_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub view_id: Option<String>,
    pub method: HttpMethod,
    pub url: String,
    pub response_content_type: String,
    pub response_length: i64,
    pub body_magic: String,
    pub user_initiated: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScreenDims {
    pub width: i64,
    pub height: i64,
}

impl ScreenDims {
    pub fn area(&self) -> i64 {
        self.width * self.height
    }
}

/// The full UI state transition graph for one app run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UTGraph {
    pub app: AppMeta,
    pub screen: ScreenDims,
    #[serde(with = "state_list")]
    pub states: BTreeMap<String, UIState>,
    pub transitions: Vec<Transition>,
    #[serde(with = "traffic_list")]
    pub traffic: BTreeMap<String, TrafficRecord>,
}

// Maps are stored keyed by id for canonical ordering but travel as JSON
// lists per the wire schema. Deserialization rejects duplicate ids.
macro_rules! id_list_codec {
    ($modname:ident, $ty:ty, $what:literal) => {
        mod $modname {
            use super::*;
            use serde::de::Error as _;
            use serde::ser::SerializeSeq;

            pub fn serialize<S: serde::Serializer>(
                map: &BTreeMap<String, $ty>,
                serializer: S,
            ) -> Result<S::Ok, S::Error> {
                let mut seq = serializer.serialize_seq(Some(map.len()))?;
                for item in map.values() {
                    seq.serialize_element(item)?;
                }
                seq.end()
            }

            pub fn deserialize<'de, D: serde::Deserializer<'de>>(
                deserializer: D,
            ) -> Result<BTreeMap<String, $ty>, D::Error> {
                let items = Vec::<$ty>::deserialize(deserializer)?;
                let mut map = BTreeMap::new();
                for item in items {
                    let id = item.id.clone();
                    if map.insert(id.clone(), item).is_some() {
                        return Err(D::Error::custom(format!(
                            concat!("duplicate ", $what, " id {}"),
                            id
                        )));
                    }
                }
                Ok(map)
            }
        }
    };
}

id_list_codec!(state_list, UIState, "state");
id_list_codec!(node_list, ViewNode, "node");
id_list_codec!(traffic_list, TrafficRecord, "traffic record");

impl UTGraph {
    /// Canonical JSON encoding (UTF-8). Deterministic for a given graph.
    pub fn serialize(&self) -> Vec<u8> {
        let mut out = serde_json::to_vec_pretty(self).expect("UTG serialization cannot fail");
        out.push(b'\n');
        out
    }

    /// Parse a UTG document, rejecting unknown fields and duplicate ids.
    /// Parse errors carry the position reported by the JSON parser.
    pub fn deserialize(bytes: &[u8]) -> Result<UTGraph, ModelError> {
        Ok(serde_json::from_slice(bytes)?)
    }

    pub fn start_state(&self) -> Option<&UIState> {
        self.transitions
            .iter()
            .find(|t| t.event.kind == EventType::AppStart)
            .and_then(|t| self.states.get(&t.target))
    }

    /// Check every structural invariant. Returns one human-readable
    /// violation per breach, each naming the offending entity; an empty
    /// list means the graph is well-formed. Deterministic.
    pub fn validate(&self) -> Vec<String> {
        let mut v = Vec::new();

        if self.app.package.is_empty() {
            v.push("app: package is empty".to_string());
        }
        if self.app.activities.is_empty() {
            v.push("app: activities list is empty".to_string());
        }
        if self.screen.width <= 0 || self.screen.height <= 0 {
            v.push(format!(
                "screen: non-positive dimensions {}x{}",
                self.screen.width, self.screen.height
            ));
        }

        let declared: BTreeSet<&str> = self.app.activities.iter().map(|a| a.as_str()).collect();

        for (sid, state) in &self.states {
            if sid != &state.id {
                v.push(format!("state {sid}: key does not match id {}", state.id));
            }
            validate_tree(sid, &state.view_tree, &mut v);

            let is_declared = declared.contains(state.activity.as_str());
            match (state.kind, is_declared) {
                (StateKind::External, true) => v.push(format!(
                    "state {sid}: kind external but activity {} is declared",
                    state.activity
                )),
                (StateKind::External, false) => {}
                (_, false) => v.push(format!(
                    "state {sid}: activity {} not declared but kind is not external",
                    state.activity
                )),
                (_, true) => {}
            }

            for tid in &state.traffic_ids {
                if !self.traffic.contains_key(tid) {
                    v.push(format!("state {sid}: unknown traffic id {tid}"));
                }
            }
        }

        for (i, t) in self.transitions.iter().enumerate() {
            if !self.states.contains_key(&t.source) {
                v.push(format!("transition {i}: unknown source {}", t.source));
            }
            if !self.states.contains_key(&t.target) {
                v.push(format!("transition {i}: unknown target {}", t.target));
            }
        }

        let starts = self
            .transitions
            .iter()
            .filter(|t| t.event.kind == EventType::AppStart)
            .count();
        if starts != 1 {
            v.push(format!(
                "transitions: expected exactly one app_start event, found {starts}"
            ));
        }

        for (tid, rec) in &self.traffic {
            if tid != &rec.id {
                v.push(format!("traffic {tid}: key does not match id {}", rec.id));
            }
            if !self.states.contains_key(&rec.state_id) {
                v.push(format!("traffic {tid}: unknown state_id {}", rec.state_id));
            }
        }

        v
    }
}

fn validate_tree(sid: &str, tree: &ViewTree, v: &mut Vec<String>) {
    if !tree.nodes.contains_key(&tree.root) {
        v.push(format!("state {sid}: root {} not among nodes", tree.root));
        return;
    }

    for (nid, node) in &tree.nodes {
        if nid != &node.id {
            v.push(format!(
                "state {sid}: node key {nid} does not match id {}",
                node.id
            ));
        }
        if !node.bounds.is_valid() {
            v.push(format!("state {sid}: node {nid} has invalid bounds"));
        }
        for child in &node.children {
            if !tree.nodes.contains_key(child) {
                v.push(format!(
                    "state {sid}: node {nid} references missing child {child}"
                ));
            }
        }
    }

    // z values are unique per state; a clash names both nodes.
    let mut by_z: BTreeMap<i64, &str> = BTreeMap::new();
    for (nid, node) in &tree.nodes {
        if let Some(prev) = by_z.insert(node.z, nid) {
            v.push(format!(
                "state {sid}: nodes {prev} and {nid} share z={}",
                node.z
            ));
        }
    }

    // Every non-root node has exactly one parent.
    let mut parent_count: BTreeMap<&str, usize> = BTreeMap::new();
    for node in tree.nodes.values() {
        for child in &node.children {
            *parent_count.entry(child.as_str()).or_default() += 1;
        }
    }
    for nid in tree.nodes.keys() {
        let n = parent_count.get(nid.as_str()).copied().unwrap_or(0);
        if nid == &tree.root {
            if n != 0 {
                v.push(format!("state {sid}: root {nid} has a parent"));
            }
        } else if n != 1 {
            v.push(format!(
                "state {sid}: node {nid} has {n} parents, expected exactly 1"
            ));
        }
    }

    // Connectivity: walking from the root must reach every node. Together
    // with the single-parent check this rules out cycles.
    let mut reached: BTreeSet<&str> = BTreeSet::new();
    let mut stack = vec![tree.root.as_str()];
    while let Some(nid) = stack.pop() {
        if !reached.insert(nid) {
            continue;
        }
        if let Some(node) = tree.nodes.get(nid) {
            for child in &node.children {
                stack.push(child.as_str());
            }
        }
    }
    for nid in tree.nodes.keys() {
        if !reached.contains(nid.as_str()) {
            v.push(format!("state {sid}: node {nid} unreachable from root"));
        }
    }
}

/// The childless nodes of a state, ordered by descending z. Only leaves are
/// user-manipulable, so every downstream check works on this list.
pub fn leaf_views(state: &UIState) -> Vec<&ViewNode> {
    let mut leaves: Vec<&ViewNode> = state
        .view_tree
        .nodes
        .values()
        .filter(|n| n.is_leaf())
        .collect();
    leaves.sort_by_key(|n| std::cmp::Reverse(n.z));
    leaves
}
