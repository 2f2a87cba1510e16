//! Deterministic graph builders shared by tests and benches.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::geometry::Bounds;
use crate::model::{
    AppMeta, EventType, HttpMethod, InputEvent, ScreenDims, StateKind, TrafficRecord, Transition,
    UIState, UTGraph, ViewNode, ViewTree,
};

pub const SCREEN: ScreenDims = ScreenDims {
    width: 1080,
    height: 1776,
};

pub fn node(
    id: &str,
    class: &str,
    resource_id: &str,
    bounds: Bounds,
    z: i64,
    clickable: bool,
    children: &[&str],
) -> ViewNode {
    ViewNode {
        id: id.to_string(),
        class_name: class.to_string(),
        resource_id: resource_id.to_string(),
        text: String::new(),
        bounds,
        z,
        clickable,
        children: children.iter().map(|c| c.to_string()).collect(),
    }
}

pub fn tree(root: &str, nodes: Vec<ViewNode>) -> ViewTree {
    ViewTree {
        root: root.to_string(),
        nodes: nodes.into_iter().map(|n| (n.id.clone(), n)).collect(),
    }
}

pub fn state(id: &str, activity: &str, kind: StateKind, tree: ViewTree) -> UIState {
    UIState {
        id: id.to_string(),
        activity: activity.to_string(),
        kind,
        ad_load_traces: Vec::new(),
        traffic_ids: Vec::new(),
        view_tree: tree,
    }
}

pub fn meta(package: &str, activities: &[&str]) -> AppMeta {
    AppMeta {
        package: package.to_string(),
        permissions: vec![
            "android.permission.INTERNET".to_string(),
            "android.permission.ACCESS_NETWORK_STATE".to_string(),
        ],
        activities: activities.iter().map(|a| a.to_string()).collect(),
        detected_ad_libs: vec!["com.google.ads".to_string()],
        label: None,
    }
}

pub fn app_start(state_id: &str) -> Transition {
    Transition {
        source: state_id.to_string(),
        target: state_id.to_string(),
        event: InputEvent {
            kind: EventType::AppStart,
            view_id: None,
        },
    }
}

pub fn transition(source: &str, target: &str, kind: EventType, view: Option<&str>) -> Transition {
    Transition {
        source: source.to_string(),
        target: target.to_string(),
        event: InputEvent {
            kind,
            view_id: view.map(|v| v.to_string()),
        },
    }
}

pub fn graph(
    meta: AppMeta,
    states: Vec<UIState>,
    transitions: Vec<Transition>,
    traffic: Vec<TrafficRecord>,
) -> UTGraph {
    UTGraph {
        app: meta,
        screen: SCREEN,
        states: states.into_iter().map(|s| (s.id.clone(), s)).collect(),
        transitions,
        traffic: traffic.into_iter().map(|t| (t.id.clone(), t)).collect(),
    }
}

/// Minimal graph: one root-only state.
pub fn single_state_graph() -> UTGraph {
    let act = "com.example.single.MainActivity";
    let t = tree(
        "root",
        vec![node(
            "root",
            "android.widget.FrameLayout",
            "",
            Bounds::new(0, 0, 1080, 1776),
            0,
            false,
            &[],
        )],
    );
    graph(
        meta("com.example.single", &[act]),
        vec![state("s0", act, StateKind::Content, t)],
        vec![app_start("s0")],
        vec![],
    )
}

/// Two content states joined by a click and a back edge.
pub fn two_state_graph() -> UTGraph {
    let act_main = "com.example.two.MainActivity";
    let act_sub = "com.example.two.DetailActivity";
    let main_tree = tree(
        "root",
        vec![
            node(
                "root",
                "android.widget.FrameLayout",
                "",
                Bounds::new(0, 0, 1080, 1776),
                0,
                false,
                &["title", "btn_open"],
            ),
            node(
                "title",
                "android.widget.TextView",
                "title_text",
                Bounds::new(40, 40, 1040, 120),
                1,
                false,
                &[],
            ),
            node(
                "btn_open",
                "android.widget.Button",
                "btn_open",
                Bounds::new(200, 430, 880, 550),
                2,
                true,
                &[],
            ),
        ],
    );
    let sub_tree = tree(
        "root",
        vec![
            node(
                "root",
                "android.widget.FrameLayout",
                "",
                Bounds::new(0, 0, 1080, 1776),
                0,
                false,
                &["body"],
            ),
            node(
                "body",
                "android.widget.TextView",
                "detail_body",
                Bounds::new(40, 200, 1040, 1500),
                1,
                false,
                &[],
            ),
        ],
    );
    graph(
        meta("com.example.two", &[act_main, act_sub]),
        vec![
            state("s0", act_main, StateKind::Content, main_tree),
            state("s1", act_sub, StateKind::Content, sub_tree),
        ],
        vec![
            app_start("s0"),
            transition("s0", "s1", EventType::Click, Some("btn_open")),
            transition("s1", "s0", EventType::Back, None),
        ],
        vec![],
    )
}

/// Reconstruction of the exit-dialog state with a centered 810x810 pop-up
/// ad view: bounds (135, 520, 945, 1330) on a 1080x1776 screen, custom
/// class "com.pop.is.ar", ad-load trace present.
pub fn fig5_graph() -> UTGraph {
    let act = "com.example.popdemo.MainActivity";
    let t = tree(
        "root",
        vec![
            node(
                "root",
                "android.widget.FrameLayout",
                "",
                Bounds::new(0, 0, 1080, 1776),
                0,
                false,
                &["dialog_panel", "popup"],
            ),
            node(
                "dialog_panel",
                "android.widget.LinearLayout",
                "dialog_panel",
                Bounds::new(90, 700, 990, 1000),
                1,
                false,
                &["dialog_text", "btn_exit", "btn_cancel"],
            ),
            node(
                "dialog_text",
                "android.widget.TextView",
                "dialog_text",
                Bounds::new(140, 720, 940, 790),
                2,
                false,
                &[],
            ),
            node(
                "btn_exit",
                "android.widget.Button",
                "btn_exit",
                Bounds::new(140, 800, 540, 950),
                3,
                true,
                &[],
            ),
            node(
                "btn_cancel",
                "android.widget.Button",
                "btn_cancel",
                Bounds::new(560, 800, 940, 950),
                4,
                true,
                &[],
            ),
            node(
                "popup",
                "com.pop.is.ar",
                "ad_container",
                Bounds::new(135, 520, 945, 1330),
                5,
                true,
                &[],
            ),
        ],
    );
    let mut s = state("s0", act, StateKind::Content, t);
    s.ad_load_traces = vec!["com.google.ads.AdView.loadAd".to_string()];
    graph(
        meta("com.example.popdemo", &[act]),
        vec![s],
        vec![app_start("s0")],
        vec![],
    )
}

const CLASS_POOL: [&str; 6] = [
    "android.widget.TextView",
    "android.widget.Button",
    "android.widget.LinearLayout",
    "android.widget.ImageButton",
    "android.widget.CheckBox",
    "android.widget.FrameLayout",
];

const RESOURCE_POOL: [&str; 8] = [
    "title_text",
    "btn_start",
    "list_item",
    "nav_home",
    "btn_settings",
    "caption",
    "header_row",
    "loading_spinner",
];

fn random_bounds(rng: &mut ChaCha8Rng) -> Bounds {
    let left = rng.random_range(0..1000);
    let top = rng.random_range(0..1700);
    let right = rng.random_range(left..=1080);
    let bottom = rng.random_range(top..=1776);
    Bounds::new(left, top, right, bottom)
}

/// One-state graph whose tree has `n` nodes with random shape.
pub fn random_tree_graph(rng: &mut ChaCha8Rng, n: usize) -> UTGraph {
    let act = "com.example.rand.MainActivity";
    let tree = random_tree(rng, n, "n");
    graph(
        meta("com.example.rand", &[act]),
        vec![state("s0", act, StateKind::Content, tree)],
        vec![app_start("s0")],
        vec![],
    )
}

/// Random valid tree of `n` nodes with ids `{prefix}0..{prefix}{n-1}`,
/// node 0 as root, unique z values.
pub fn random_tree(rng: &mut ChaCha8Rng, n: usize, prefix: &str) -> ViewTree {
    assert!(n >= 1);
    let mut zs: Vec<i64> = (0..n as i64).collect();
    for i in (1..zs.len()).rev() {
        let j = rng.random_range(0..=i);
        zs.swap(i, j);
    }
    let mut nodes: Vec<ViewNode> = (0..n)
        .map(|i| {
            let class = CLASS_POOL[rng.random_range(0..CLASS_POOL.len())];
            let resource = RESOURCE_POOL[rng.random_range(0..RESOURCE_POOL.len())];
            ViewNode {
                id: format!("{prefix}{i}"),
                class_name: class.to_string(),
                resource_id: resource.to_string(),
                text: String::new(),
                bounds: random_bounds(rng),
                z: zs[i],
                clickable: rng.random_bool(0.4),
                children: Vec::new(),
            }
        })
        .collect();
    for i in 1..n {
        let parent = rng.random_range(0..i);
        let child_id = nodes[i].id.clone();
        nodes[parent].children.push(child_id);
    }
    tree(&format!("{prefix}0"), nodes)
}

/// Random multi-state graph with transitions and traffic that passes
/// validation. Used for round-trip and determinism properties.
pub fn random_graph(seed: u64) -> UTGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let package = format!("com.example.gen{}", rng.random_range(0..1000));
    let n_states = rng.random_range(2..=6usize);
    let activities: Vec<String> = (0..n_states)
        .map(|i| format!("{package}.Activity{i}"))
        .collect();

    let mut states = Vec::new();
    let mut traffic = Vec::new();
    let with_external = rng.random_bool(0.3);
    for (i, declared_activity) in activities.iter().enumerate() {
        let external = with_external && i == n_states - 1;
        let activity = if external {
            "com.other.launcher.Home".to_string()
        } else {
            declared_activity.clone()
        };
        let kind = if external {
            StateKind::External
        } else {
            StateKind::Content
        };
        let n_nodes = rng.random_range(1..=8usize);
        let mut s = state(
            &format!("s{i}"),
            &activity,
            kind,
            random_tree(&mut rng, n_nodes, "v"),
        );
        if rng.random_bool(0.5) {
            s.ad_load_traces
                .push("com.google.ads.AdView.loadAd".to_string());
        }
        if rng.random_bool(0.4) {
            let tid = format!("t{i}");
            traffic.push(TrafficRecord {
                id: tid.clone(),
                state_id: s.id.clone(),
                view_id: None,
                method: if rng.random_bool(0.5) {
                    HttpMethod::Get
                } else {
                    HttpMethod::Post
                },
                url: format!("http://cdn.example.com/{i}"),
                response_content_type: "text/html".to_string(),
                response_length: rng.random_range(0..100_000),
                body_magic: "3C68746D6C3E0D0A".to_string(),
                user_initiated: rng.random_bool(0.5),
            });
            s.traffic_ids.push(tid);
        }
        states.push(s);
    }

    let mut transitions = vec![app_start("s0")];
    for i in 1..n_states {
        let from = rng.random_range(0..i);
        transitions.push(transition(
            &format!("s{from}"),
            &format!("s{i}"),
            [EventType::Click, EventType::Scroll, EventType::Back][rng.random_range(0..3)],
            None,
        ));
    }

    let mut m = meta(&package, &[]);
    m.activities = activities;
    graph(m, states, transitions, traffic)
}

/// Large graph for throughput checks: `n_states` states of
/// `views_per_state` views each, every state carrying one detectable ad
/// plus content views, chained by click transitions.
pub fn big_graph(n_states: usize, views_per_state: usize) -> UTGraph {
    assert!(views_per_state >= 3);
    let package = "com.example.big";
    let activities: Vec<String> = (0..n_states).map(|i| format!("{package}.A{i}")).collect();
    let mut states = Vec::new();
    for (i, activity) in activities.iter().enumerate() {
        let mut nodes = vec![node(
            "root",
            "android.widget.FrameLayout",
            "",
            Bounds::new(0, 0, 1080, 1776),
            0,
            false,
            &[],
        )];
        let n_children = views_per_state - 2;
        for j in 0..n_children {
            let y = 60 + ((j as i64 * 90) % 1500);
            nodes.push(node(
                &format!("v{j}"),
                if j % 3 == 0 {
                    "android.widget.Button"
                } else {
                    "android.widget.TextView"
                },
                RESOURCE_POOL[j % RESOURCE_POOL.len()],
                Bounds::new(
                    40 + (j as i64 % 4) * 250,
                    y,
                    240 + (j as i64 % 4) * 250,
                    y + 80,
                ),
                1 + j as i64,
                j % 3 == 0,
                &[],
            ));
        }
        nodes.push(node(
            "ad",
            "android.webkit.WebView",
            "ad_banner",
            Bounds::new(200, 570, 880, 1210),
            views_per_state as i64 + 5,
            true,
            &[],
        ));
        let child_ids: Vec<String> = nodes[1..].iter().map(|n| n.id.clone()).collect();
        nodes[0].children = child_ids;
        let mut s = state(
            &format!("s{i:04}"),
            activity,
            StateKind::Content,
            tree("root", nodes),
        );
        s.ad_load_traces
            .push("com.google.ads.AdView.loadAd".to_string());
        states.push(s);
    }
    let mut transitions = vec![app_start("s0000")];
    for i in 1..n_states {
        transitions.push(transition(
            &format!("s{:04}", i - 1),
            &format!("s{i:04}"),
            EventType::Click,
            None,
        ));
    }
    let mut m = meta(package, &[]);
    m.activities = activities;
    graph(m, states, transitions, vec![])
}
