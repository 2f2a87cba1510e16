//! Randomized equivalence checks of the graph-level rules against
//! independent oracles re-derived from the rule statements.

use std::collections::BTreeSet;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use adscan_core::adview::{detect_graph_ad_views, AdFeatureConfig, AdKind, DetectedAd};
use adscan_core::fixtures;
use adscan_core::geometry::Bounds;
use adscan_core::model::{leaf_views, EventType, StateKind, UTGraph, ViewNode};
use adscan_core::rules::{
    check_all, check_drive_by, check_frequent, check_hidden, check_interaction, check_non_content,
    check_number, check_outside, check_overlap, check_size, FraudFinding, RuleConfig,
};
use adscan_core::sim::{explore, generate_benchmark, ExplorationConfig};
use adscan_core::taxonomy::FraudType;

/// Random multi-state graph with ad-ish leaves, traces, and varied kinds.
fn random_rule_graph(rng: &mut ChaCha8Rng) -> UTGraph {
    let n_states = rng.random_range(2..=8usize);
    let package = "com.example.oracle";
    let declared: Vec<String> = (0..n_states).map(|i| format!("{package}.A{i}")).collect();

    let kinds = [
        StateKind::Content,
        StateKind::Launch,
        StateKind::Login,
        StateKind::Exit,
        StateKind::Error,
        StateKind::Thankyou,
    ];
    let mut states = Vec::new();
    for (i, declared_activity) in declared.iter().enumerate() {
        let external = rng.random_bool(0.15);
        let n_nodes = rng.random_range(1..=8usize);
        let mut tree = fixtures::random_tree(rng, n_nodes, "v");
        // Sprinkle ad identifiers.
        let ad_classes = ["android.webkit.WebView", "android.widget.ImageView"];
        for node in tree.nodes.values_mut() {
            if rng.random_bool(0.35) {
                node.class_name = ad_classes[rng.random_range(0..2)].to_string();
            }
        }
        let mut s = fixtures::state(
            &format!("s{i}"),
            if external {
                "com.other.launcher.Home"
            } else {
                declared_activity
            },
            if external {
                StateKind::External
            } else {
                kinds[rng.random_range(0..kinds.len())]
            },
            tree,
        );
        if rng.random_bool(0.6) {
            s.ad_load_traces
                .push("com.google.ads.AdView.loadAd".to_string());
        }
        states.push(s);
    }

    let mut transitions = vec![fixtures::app_start("s0")];
    let n_edges = rng.random_range(1..=12usize);
    for _ in 0..n_edges {
        let src = format!("s{}", rng.random_range(0..n_states));
        let dst = format!("s{}", rng.random_range(0..n_states));
        let kind = [
            EventType::Click,
            EventType::Scroll,
            EventType::Back,
            EventType::LongClick,
        ][rng.random_range(0..4)];
        transitions.push(fixtures::transition(&src, &dst, kind, None));
    }

    let mut meta = fixtures::meta(package, &[]);
    meta.activities = declared;
    fixtures::graph(meta, states, transitions, vec![])
}

fn rects_overlap(a: &Bounds, b: &Bounds) -> bool {
    a.left.max(b.left) < a.right.min(b.right) && a.top.max(b.top) < a.bottom.min(b.bottom)
}

fn oracle_interactive(v: &ViewNode) -> bool {
    v.clickable
        && v.children.is_empty()
        && (v
            .class_name
            .rsplit('.')
            .next()
            .unwrap_or("")
            .contains("Button")
            || v.class_name.contains("Dialog"))
}

#[test]
fn interaction_matches_the_exhaustive_transition_pair_oracle() {
    let ad_cfg = AdFeatureConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(71);
    for case in 0..1000 {
        let g = random_rule_graph(&mut rng);
        let detections = detect_graph_ad_views(&g, &ad_cfg);
        let findings = check_interaction(&g, &detections);
        let got: BTreeSet<(String, String, String)> = findings
            .iter()
            .map(|f| {
                (
                    f.state_ids[0].clone(),
                    f.state_ids[1].clone(),
                    f.view_ids[0].clone(),
                )
            })
            .collect();

        // Oracle: scan every user transition, every interactive leaf of
        // the source, every detected ad of the target.
        let mut expected = BTreeSet::new();
        for t in &g.transitions {
            if matches!(t.event.kind, EventType::AppStart | EventType::AppExit) {
                continue;
            }
            let (Some(s1), Some(s2)) = (g.states.get(&t.source), g.states.get(&t.target)) else {
                continue;
            };
            for ad in detections.get(&s2.id).map(Vec::as_slice).unwrap_or(&[]) {
                let ad_node = &s2.view_tree.nodes[&ad.view_id];
                let covers_any =
                    s1.view_tree.nodes.values().any(|v| {
                        oracle_interactive(v) && rects_overlap(&ad_node.bounds, &v.bounds)
                    });
                if covers_any {
                    expected.insert((s1.id.clone(), s2.id.clone(), ad.view_id.clone()));
                }
            }
        }
        assert_eq!(got, expected, "interaction mismatch, case {case}");
    }
}

#[test]
fn outside_matches_the_set_membership_oracle() {
    let ad_cfg = AdFeatureConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(72);
    for case in 0..1000 {
        let g = random_rule_graph(&mut rng);
        let detections = detect_graph_ad_views(&g, &ad_cfg);
        let flagged: BTreeSet<String> = check_outside(&g, &detections)
            .into_iter()
            .map(|f| f.state_ids[0].clone())
            .collect();
        let expected: BTreeSet<String> = g
            .states
            .values()
            .filter(|s| {
                s.kind == StateKind::External
                    && !detections.get(&s.id).map(Vec::is_empty).unwrap_or(true)
            })
            .map(|s| s.id.clone())
            .collect();
        assert_eq!(flagged, expected, "outside mismatch, case {case}");
    }
}

#[test]
fn non_content_matches_the_tag_scan_oracle() {
    let ad_cfg = AdFeatureConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(73);
    let nc = [
        StateKind::Launch,
        StateKind::Login,
        StateKind::Exit,
        StateKind::Error,
        StateKind::Thankyou,
    ];
    for case in 0..1000 {
        let g = random_rule_graph(&mut rng);
        let detections = detect_graph_ad_views(&g, &ad_cfg);
        let flagged: BTreeSet<String> = check_non_content(&g, &detections)
            .into_iter()
            .map(|f| f.state_ids[0].clone())
            .collect();

        let mut expected = BTreeSet::new();
        for s in g.states.values() {
            let ads = detections.get(&s.id).map(Vec::as_slice).unwrap_or(&[]);
            let big: Vec<&DetectedAd> = ads
                .iter()
                .filter(|a| matches!(a.kind, AdKind::Interstitial | AdKind::FullScreen))
                .collect();
            if big.is_empty() {
                continue;
            }
            if nc.contains(&s.kind) {
                expected.insert(s.id.clone());
                continue;
            }
            let ad_ids: BTreeSet<&str> = ads.iter().map(|a| a.view_id.as_str()).collect();
            let bare = leaf_views(s).iter().all(|v| ad_ids.contains(v.id.as_str()));
            if !bare {
                continue;
            }
            let adjacent = g.transitions.iter().any(|t| {
                t.event.kind != EventType::AppStart
                    && ((t.source == s.id
                        && g.states
                            .get(&t.target)
                            .is_some_and(|o| nc.contains(&o.kind)))
                        || (t.target == s.id
                            && g.states
                                .get(&t.source)
                                .is_some_and(|o| nc.contains(&o.kind))))
            });
            if adjacent {
                expected.insert(s.id.clone());
            }
        }
        assert_eq!(flagged, expected, "non-content mismatch, case {case}");
    }
}

#[test]
fn check_all_equals_the_union_of_the_nine_rules() {
    let ad_cfg = AdFeatureConfig::default();
    let rule_cfg = RuleConfig::default();
    let models = generate_benchmark(
        18,
        6,
        &FraudType::ALL.into_iter().map(|t| (t, 2)).collect(),
        41,
    )
    .unwrap();
    for model in &models {
        let graph = explore(model, &ExplorationConfig::default());
        let report = check_all(&graph, &rule_cfg, &ad_cfg).unwrap();

        let detections = detect_graph_ad_views(&graph, &ad_cfg);
        let mut expected: Vec<FraudFinding> = Vec::new();
        for (sid, state) in &graph.states {
            let ads = detections.get(sid).map(Vec::as_slice).unwrap_or(&[]);
            expected.extend(check_hidden(state, ads));
            expected.extend(check_size(state, ads, &graph.screen, &rule_cfg));
            expected.extend(check_number(state, ads, &graph.screen, &rule_cfg));
            expected.extend(check_overlap(state, ads));
        }
        expected.extend(check_interaction(&graph, &detections));
        expected.extend(check_drive_by(&graph, &detections, &rule_cfg));
        expected.extend(check_outside(&graph, &detections));
        expected.extend(check_frequent(&graph, &detections, &rule_cfg));
        expected.extend(check_non_content(&graph, &detections));
        let hash = rule_cfg.hash();
        for f in &mut expected {
            f.rule_config_hash = hash.clone();
        }
        expected.sort_by(|a, b| {
            (a.fraud_type, &a.state_ids, &a.view_ids).cmp(&(
                b.fraud_type,
                &b.state_ids,
                &b.view_ids,
            ))
        });
        assert_eq!(report.findings, expected, "{}", model.meta.package);
        assert_eq!(report.fraudulent, !expected.is_empty());
    }
}

/// Per-state detections feed the state rules and never contain non-leaf
/// nodes, mirroring the detector contract the rules rely on.
#[test]
fn detections_driving_the_rules_are_always_leaves() {
    let ad_cfg = AdFeatureConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(74);
    for _ in 0..300 {
        let g = random_rule_graph(&mut rng);
        let detections = detect_graph_ad_views(&g, &ad_cfg);
        for (sid, ads) in &detections {
            let state = &g.states[sid];
            let leaves: BTreeSet<&str> = leaf_views(state).iter().map(|v| v.id.as_str()).collect();
            for ad in ads {
                assert!(leaves.contains(ad.view_id.as_str()));
            }
        }
    }
}
