//! Exploration of app models into UI state transition graphs.
//!
//! Breadth-first over (state, event) actions with two dequeue policies:
//! the ad-first strategy pulls actions whose handler loads ads or whose
//! view looks ad-like first, then back/app-exit events (most ads live on
//! the main and exit states), then discovery order; the random baseline
//! draws uniformly with the configured seed. One event advances the
//! virtual clock by `transition_wait` seconds; the walk stops when the
//! event budget (which includes the app-start event) is spent.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::adview::AdFeatureConfig;
use crate::geometry::Bounds;
use crate::model::{
    EventType, InputEvent, TrafficRecord, Transition, UIState, UTGraph, ViewNode, ViewTree,
};

use super::app_model::{AppModel, Effect, Screen, TrafficSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    AdFirst,
    Random,
}

impl std::str::FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ad_first" => Ok(Strategy::AdFirst),
            "random" => Ok(Strategy::Random),
            other => Err(format!("unknown strategy {other:?} (ad_first|random)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplorationConfig {
    #[serde(default = "default_strategy")]
    pub strategy: Strategy,
    /// Total number of input events, the app-start event included.
    #[serde(default = "default_budget")]
    pub event_budget: u32,
    /// Virtual seconds charged per event, modelling ad-load latency.
    #[serde(default = "default_wait")]
    pub transition_wait: u32,
    #[serde(default)]
    pub seed: u64,
}

fn default_strategy() -> Strategy {
    Strategy::AdFirst
}

fn default_budget() -> u32 {
    60
}

fn default_wait() -> u32 {
    5
}

impl Default for ExplorationConfig {
    fn default() -> Self {
        ExplorationConfig {
            strategy: default_strategy(),
            event_budget: default_budget(),
            transition_wait: default_wait(),
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExplorationStats {
    pub events: u64,
    pub elapsed_virtual_seconds: u64,
}

struct PendingAction {
    state_id: String,
    screen_id: String,
    handler_idx: usize,
}

struct Walk<'a> {
    app: &'a AppModel,
    graph: UTGraph,
    screen_to_state: BTreeMap<String, String>,
    pending: Vec<PendingAction>,
    traffic_counter: usize,
    ad_cfg: AdFeatureConfig,
}

pub fn explore(app: &AppModel, cfg: &ExplorationConfig) -> UTGraph {
    explore_with_stats(app, cfg).0
}

pub fn explore_with_stats(app: &AppModel, cfg: &ExplorationConfig) -> (UTGraph, ExplorationStats) {
    assert!(cfg.event_budget >= 1, "event budget must be at least 1");
    let mut walk = Walk {
        app,
        graph: UTGraph {
            app: app.meta.clone(),
            screen: app.screen,
            states: BTreeMap::new(),
            transitions: Vec::new(),
            traffic: BTreeMap::new(),
        },
        screen_to_state: BTreeMap::new(),
        pending: Vec::new(),
        traffic_counter: 0,
        ad_cfg: AdFeatureConfig::default(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    // The app-start event renders the start screen and consumes budget.
    let start_state = walk.render(&app.start_screen);
    walk.graph.transitions.push(Transition {
        source: start_state.clone(),
        target: start_state,
        event: InputEvent {
            kind: EventType::AppStart,
            view_id: None,
        },
    });
    let mut events: u64 = 1;

    while events < u64::from(cfg.event_budget) && !walk.pending.is_empty() {
        let idx = match cfg.strategy {
            Strategy::AdFirst => walk.best_action(),
            Strategy::Random => rng.random_range(0..walk.pending.len()),
        };
        let action = walk.pending.remove(idx);
        walk.execute(&action);
        events += 1;
    }

    let stats = ExplorationStats {
        events,
        elapsed_virtual_seconds: events * u64::from(cfg.transition_wait),
    };
    (walk.graph, stats)
}

impl<'a> Walk<'a> {
    /// Render a screen into a state (once per screen) and enqueue its
    /// actions. Returns the state id.
    fn render(&mut self, screen_id: &str) -> String {
        if let Some(sid) = self.screen_to_state.get(screen_id) {
            return sid.clone();
        }
        let screen = &self.app.screens[screen_id];
        let state_id = format!("s{:03}", self.graph.states.len());
        let state = render_screen(self.app, screen, &state_id);

        // Ad-fetch traffic for rendered slots.
        let mut traffic_ids = Vec::new();
        for ad in &screen.ads {
            if ad.renders_view && ad.fetch_traffic {
                let tid = self.next_traffic_id();
                self.graph.traffic.insert(
                    tid.clone(),
                    TrafficRecord {
                        id: tid.clone(),
                        state_id: state_id.clone(),
                        view_id: Some(ad.id.clone()),
                        method: crate::model::HttpMethod::Get,
                        url: format!("http://ads.example.net/creative/{}", ad.id),
                        response_content_type: "text/html".to_string(),
                        response_length: 4096,
                        body_magic: "3C68746D6C3E0D0A".to_string(),
                        user_initiated: false,
                    },
                );
                traffic_ids.push(tid);
            }
        }
        let mut state = state;
        state.traffic_ids.extend(traffic_ids);
        self.graph.states.insert(state_id.clone(), state);
        self.screen_to_state
            .insert(screen_id.to_string(), state_id.clone());

        for (idx, handler) in screen.handlers.iter().enumerate() {
            if let Some(view) = &handler.view {
                let rendered_view = screen.views.iter().any(|v| &v.id == view)
                    || screen.ads.iter().any(|a| &a.id == view && a.renders_view);
                if !rendered_view {
                    continue;
                }
            }
            self.pending.push(PendingAction {
                state_id: state_id.clone(),
                screen_id: screen_id.to_string(),
                handler_idx: idx,
            });
        }
        state_id
    }

    fn next_traffic_id(&mut self) -> String {
        let tid = format!("t{:03}", self.traffic_counter);
        self.traffic_counter += 1;
        tid
    }

    /// Ad-first ranking: 0 = the handler loads/targets ads or its view is
    /// ad-like, 1 = back/app-exit events (exit-state bias), 2 = the rest.
    /// Ties resolve in discovery order.
    fn action_rank(&self, action: &PendingAction) -> u8 {
        let screen = &self.app.screens[&action.screen_id];
        let handler = &screen.handlers[action.handler_idx];

        let target = match &handler.effect {
            Effect::Goto { screen } => Some(screen),
            Effect::Download { to, .. } => Some(to),
            Effect::ExitApp => None,
        };
        if let Some(target) = target {
            if self.app.screens[target].ads.iter().any(|a| a.renders_view) {
                return 0;
            }
        }
        if let Some(view) = &handler.view {
            if screen.ads.iter().any(|a| &a.id == view) {
                return 0;
            }
            if let Some(v) = screen.views.iter().find(|v| &v.id == view) {
                let node = ViewNode {
                    id: v.id.clone(),
                    class_name: v.class.clone(),
                    resource_id: v.resource_id.clone(),
                    text: v.text.clone(),
                    bounds: v.bounds,
                    z: v.z,
                    clickable: v.clickable,
                    children: Vec::new(),
                };
                if crate::adview::string_feature(&node, &self.ad_cfg)
                    || crate::adview::type_feature(&node, &self.ad_cfg)
                {
                    return 0;
                }
            }
        }
        if matches!(handler.event, EventType::Back | EventType::AppExit) {
            return 1;
        }
        2
    }

    fn best_action(&self) -> usize {
        let mut best = 0;
        let mut best_rank = u8::MAX;
        for (i, action) in self.pending.iter().enumerate() {
            let rank = self.action_rank(action);
            if rank < best_rank {
                best_rank = rank;
                best = i;
                if rank == 0 {
                    break;
                }
            }
        }
        best
    }

    fn execute(&mut self, action: &PendingAction) {
        let screen = &self.app.screens[&action.screen_id];
        let handler = screen.handlers[action.handler_idx].clone();
        match &handler.effect {
            Effect::Goto { screen: target } => {
                let target_state = self.render(target);
                self.push_transition(
                    &action.state_id,
                    &target_state,
                    &handler.event,
                    &handler.view,
                );
            }
            Effect::Download { traffic, to } => {
                self.attach_traffic(&action.state_id, &handler.view, traffic);
                let target_state = self.render(to);
                self.push_transition(
                    &action.state_id,
                    &target_state,
                    &handler.event,
                    &handler.view,
                );
            }
            Effect::ExitApp => {}
        }
    }

    fn attach_traffic(&mut self, state_id: &str, view: &Option<String>, spec: &TrafficSpec) {
        let tid = self.next_traffic_id();
        self.graph.traffic.insert(
            tid.clone(),
            TrafficRecord {
                id: tid.clone(),
                state_id: state_id.to_string(),
                view_id: view.clone(),
                method: spec.method,
                url: spec.url.clone(),
                response_content_type: spec.content_type.clone(),
                response_length: spec.length,
                body_magic: spec.body_magic.clone(),
                user_initiated: spec.user_initiated,
            },
        );
        if let Some(state) = self.graph.states.get_mut(state_id) {
            state.traffic_ids.push(tid);
        }
    }

    fn push_transition(
        &mut self,
        source: &str,
        target: &str,
        event: &EventType,
        view: &Option<String>,
    ) {
        let t = Transition {
            source: source.to_string(),
            target: target.to_string(),
            event: InputEvent {
                kind: *event,
                view_id: view.clone(),
            },
        };
        if !self.graph.transitions.contains(&t) {
            self.graph.transitions.push(t);
        }
    }
}

/// Render one screen template into a UI state.
fn render_screen(app: &AppModel, screen: &Screen, state_id: &str) -> UIState {
    let failed_slot = screen.ads.iter().any(|a| !a.renders_view);
    let reflowed: BTreeMap<&str, Bounds> = if failed_slot {
        screen
            .reflow_on_ad_failure
            .iter()
            .map(|r| (r.view.as_str(), r.bounds))
            .collect()
    } else {
        BTreeMap::new()
    };

    let mut nodes: BTreeMap<String, ViewNode> = BTreeMap::new();
    nodes.insert(
        "root".to_string(),
        ViewNode {
            id: "root".to_string(),
            class_name: "android.widget.FrameLayout".to_string(),
            resource_id: String::new(),
            text: String::new(),
            bounds: Bounds::new(0, 0, app.screen.width, app.screen.height),
            z: 0,
            clickable: false,
            children: Vec::new(),
        },
    );
    for view in &screen.views {
        let bounds = reflowed
            .get(view.id.as_str())
            .copied()
            .unwrap_or(view.bounds);
        nodes.insert(
            view.id.clone(),
            ViewNode {
                id: view.id.clone(),
                class_name: view.class.clone(),
                resource_id: view.resource_id.clone(),
                text: view.text.clone(),
                bounds,
                z: view.z,
                clickable: view.clickable,
                children: Vec::new(),
            },
        );
    }
    for ad in &screen.ads {
        if !ad.renders_view {
            continue;
        }
        nodes.insert(
            ad.id.clone(),
            ViewNode {
                id: ad.id.clone(),
                class_name: ad.class.clone(),
                resource_id: ad.resource_id.clone(),
                text: String::new(),
                bounds: ad.bounds,
                z: ad.z,
                clickable: true,
                children: Vec::new(),
            },
        );
    }

    // Wire up parent links; everything else hangs off the root.
    let ids: Vec<String> = nodes.keys().filter(|k| *k != "root").cloned().collect();
    for id in ids {
        let parent = screen
            .views
            .iter()
            .find(|v| v.id == id)
            .and_then(|v| v.parent.clone())
            .unwrap_or_else(|| "root".to_string());
        nodes
            .get_mut(&parent)
            .expect("validated parent")
            .children
            .push(id);
    }

    let traces = if screen.ads.iter().any(|a| a.emits_trace) {
        vec![app.trace_string()]
    } else {
        Vec::new()
    };

    UIState {
        id: state_id.to_string(),
        activity: screen.activity.clone(),
        kind: screen.kind,
        ad_load_traces: traces,
        traffic_ids: Vec::new(),
        view_tree: ViewTree {
            root: "root".to_string(),
            nodes,
        },
    }
}
