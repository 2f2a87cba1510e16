//! Acceptance suite. Each test prints one pass/fail line; run with
//! `cargo test -p adscan-core --test acceptance -- --nocapture` to see
//! them.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use adscan_core::adview::{
    detect_ad_views, has_ad_load_trace, placement_feature, string_feature, type_feature,
    AdFeatureConfig, AdKind, DetectedAd,
};
use adscan_core::corpus::{run_models, CorpusMetrics, PipelineConfig, Ratio};
use adscan_core::fixtures;
use adscan_core::geometry::{intersection_area, intersects, Bounds};
use adscan_core::model::{leaf_views, EventType, StateKind, UTGraph};
use adscan_core::rules::{
    check_all, check_drive_by, check_frequent, check_hidden, check_overlap, check_size, RuleConfig,
};
use adscan_core::sim::{
    default_distribution, exploration_suite, explore, generate_benchmark, inject_faults,
    reachable_ad_screens, ExplorationConfig, FaultConfig, Strategy,
};
use adscan_core::taxonomy::FraudType;

fn criterion(name: &str, body: impl FnOnce()) {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(()) => println!("acceptance {name}: PASS"),
        Err(e) => {
            println!("acceptance {name}: FAIL");
            std::panic::resume_unwind(e);
        }
    }
}

/// Criterion 1: the regenerated 100-app benchmark scores perfectly without
/// faults; under fault rates (0.05, 0.05) over 10 seeds the mean precision
/// and recall stay at or above 0.90 and the error log shows at least one
/// false positive of the trace-without-displayed-ad mechanism and one
/// false negative of the inherited-ad-view mechanism. Total runtime under
/// 60 seconds.
#[test]
fn c1_benchmark_fidelity() {
    criterion("C1 benchmark-fidelity", || {
        let started = Instant::now();
        let models = generate_benchmark(50, 50, &default_distribution(), 1).unwrap();
        assert_eq!(models.len(), 100);
        let per_type: BTreeMap<FraudType, usize> = FraudType::ALL
            .into_iter()
            .map(|t| {
                let n = models
                    .iter()
                    .filter(|m| m.meta.label.as_ref().unwrap().fraud_types.contains(&t))
                    .count();
                (t, n)
            })
            .collect();
        for (t, n) in &per_type {
            assert!(*n >= 2, "{t} has {n} samples, need at least 2");
        }

        // Faults disabled: perfect scores.
        let clean_run = run_models(&models, &PipelineConfig::default(), 0);
        assert_eq!(clean_run.metrics.skipped, 0);
        assert_eq!(
            clean_run.metrics.precision(),
            Some(Ratio { num: 50, den: 50 })
        );
        assert_eq!(clean_run.metrics.recall(), Some(Ratio { num: 50, den: 50 }));

        // Fault rates (0.05, 0.05) over 10 seeds.
        let mut precisions = Vec::new();
        let mut recalls = Vec::new();
        let mut saw_trace_without_ad_fp = false;
        let mut saw_inherited_fn = false;
        for seed in 0..10u64 {
            let cfg = PipelineConfig {
                faults: Some(FaultConfig {
                    ad_load_failure_rate: 0.05,
                    inherited_ad_rate: 0.05,
                    seed,
                }),
                ..PipelineConfig::default()
            };
            let run = run_models(&models, &cfg, 0);
            assert_eq!(run.metrics.skipped, 0);
            precisions.push(run.metrics.precision().unwrap().as_f64());
            recalls.push(run.metrics.recall().unwrap().as_f64());
            for entry in &run.error_log {
                if entry.kind == "false_positive"
                    && entry
                        .mechanisms
                        .iter()
                        .any(|m| m == "trace_without_displayed_ad")
                {
                    saw_trace_without_ad_fp = true;
                }
                if entry.kind == "false_negative"
                    && entry.mechanisms.iter().any(|m| m == "inherited_ad_view")
                {
                    saw_inherited_fn = true;
                }
            }
        }
        let mean = |xs: &[f64]| xs.iter().sum::<f64>() / xs.len() as f64;
        let mean_precision = mean(&precisions);
        let mean_recall = mean(&recalls);
        assert!(
            mean_precision >= 0.90,
            "mean precision {mean_precision:.4} under faults"
        );
        assert!(
            mean_recall >= 0.90,
            "mean recall {mean_recall:.4} under faults"
        );
        assert!(
            saw_trace_without_ad_fp,
            "no false positive with the trace-without-displayed-ad mechanism"
        );
        assert!(
            saw_inherited_fn,
            "no false negative with the inherited-ad-view mechanism"
        );

        let elapsed = started.elapsed();
        assert!(
            elapsed.as_secs_f64() < 60.0,
            "criterion took {elapsed:?}, budget is 60s"
        );
    });
}

/// Criterion 2: the reference confusion matrix (46 TP, 3 FP, 47 TN, 4 FN)
/// reproduces precision 93.88% and recall 92.00% exactly.
#[test]
fn c2_report_arithmetic() {
    criterion("C2 report-arithmetic", || {
        let metrics = CorpusMetrics::from_counts(46, 3, 47, 4);
        let precision = metrics.precision().unwrap();
        let recall = metrics.recall().unwrap();
        assert_eq!(precision, Ratio { num: 46, den: 49 });
        assert_eq!(recall, Ratio { num: 46, den: 50 });
        assert_eq!(precision.percent(), "93.88%");
        assert_eq!(recall.percent(), "92.00%");
    });
}

fn random_bounds_in(rng: &mut ChaCha8Rng, w: i64, h: i64) -> Bounds {
    let l = rng.random_range(0..w);
    let t = rng.random_range(0..h);
    let r = rng.random_range(l..=w);
    let b = rng.random_range(t..=h);
    Bounds::new(l, t, r, b)
}

/// Independent overlap test on closed-open pixel coverage.
fn oracle_overlaps(a: &Bounds, b: &Bounds) -> bool {
    let x_lo = a.left.max(b.left);
    let x_hi = a.right.min(b.right);
    let y_lo = a.top.max(b.top);
    let y_hi = a.bottom.min(b.bottom);
    x_lo < x_hi && y_lo < y_hi
}

/// Criterion 3: oracle-equivalence suites, each at least 1000 randomized
/// cases with zero mismatches.
#[test]
fn c3_oracle_equivalence() {
    criterion("C3 oracle-equivalence", || {
        // (a) rectangle intersection vs. per-pixel rasterization on a
        // 64x64 grid.
        let mut rng = ChaCha8Rng::seed_from_u64(64);
        for case in 0..1000 {
            let a = random_bounds_in(&mut rng, 64, 64);
            let b = random_bounds_in(&mut rng, 64, 64);
            let mut pixels = 0i64;
            for x in 0..64i64 {
                for y in 0..64i64 {
                    let in_a = a.left <= x && x < a.right && a.top <= y && y < a.bottom;
                    let in_b = b.left <= x && x < b.right && b.top <= y && y < b.bottom;
                    if in_a && in_b {
                        pixels += 1;
                    }
                }
            }
            assert_eq!(
                intersection_area(&a, &b),
                pixels,
                "area mismatch, case {case}"
            );
            assert_eq!(intersects(&a, &b), pixels > 0, "flag mismatch, case {case}");
        }

        // (b) hidden/overlap rules vs. an O(n^2) pair scan.
        let mut rng = ChaCha8Rng::seed_from_u64(65);
        for case in 0..1000 {
            let n = rng.random_range(2..=10usize);
            let g = fixtures::random_tree_graph(&mut rng, n);
            let state = &g.states["s0"];
            let leaves = leaf_views(state);
            let kinds = [AdKind::Banner, AdKind::Interstitial, AdKind::FullScreen];
            let mut ads: Vec<DetectedAd> = Vec::new();
            for v in &leaves {
                if rng.random_bool(0.4) {
                    ads.push(DetectedAd {
                        view_id: v.id.clone(),
                        kind: kinds[rng.random_range(0..3)],
                    });
                }
            }
            let ad_ids: BTreeSet<&str> = ads.iter().map(|a| a.view_id.as_str()).collect();

            let mut expect_hidden: BTreeSet<String> = BTreeSet::new();
            let mut expect_overlap: BTreeSet<String> = BTreeSet::new();
            for ad in &ads {
                let ad_node = &state.view_tree.nodes[&ad.view_id];
                for w in &leaves {
                    if ad_ids.contains(w.id.as_str()) {
                        continue;
                    }
                    if !oracle_overlaps(&ad_node.bounds, &w.bounds) {
                        continue;
                    }
                    if w.z > ad_node.z {
                        expect_hidden.insert(ad.view_id.clone());
                    }
                    if w.clickable && ad_node.z >= w.z {
                        expect_overlap.insert(ad.view_id.clone());
                    }
                }
            }
            let got_hidden: BTreeSet<String> = check_hidden(state, &ads)
                .into_iter()
                .map(|f| f.view_ids[0].clone())
                .collect();
            let got_overlap: BTreeSet<String> = check_overlap(state, &ads)
                .into_iter()
                .map(|f| f.view_ids[0].clone())
                .collect();
            assert_eq!(got_hidden, expect_hidden, "hidden mismatch, case {case}");
            assert_eq!(got_overlap, expect_overlap, "overlap mismatch, case {case}");
        }

        // (c) ad-view detection vs. exhaustive predicate evaluation.
        let cfg = AdFeatureConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(66);
        for case in 0..1000 {
            let n = rng.random_range(1..=20usize);
            let mut g = fixtures::random_tree_graph(&mut rng, n);
            {
                let s = g.states.get_mut("s0").unwrap();
                let ad_classes = [
                    "android.webkit.WebView",
                    "com.pop.is.ar",
                    "android.widget.ImageView",
                ];
                let ad_resources = ["ad_container", "AdLayout", "banner_slot", "photo"];
                for node in s.view_tree.nodes.values_mut() {
                    if rng.random_bool(0.3) {
                        node.class_name = ad_classes[rng.random_range(0..3)].to_string();
                    }
                    if rng.random_bool(0.3) {
                        node.resource_id = ad_resources[rng.random_range(0..4)].to_string();
                    }
                }
                if rng.random_bool(0.7) {
                    s.ad_load_traces
                        .push("com.appbrain.AdService.load".to_string());
                }
            }
            let state = &g.states["s0"];
            let got = detect_ad_views(state, &g.screen, &cfg);
            let mut expected = Vec::new();
            if has_ad_load_trace(state, &cfg) {
                for v in leaf_views(state) {
                    if string_feature(v, &cfg) || type_feature(v, &cfg) {
                        if let Some(kind) = placement_feature(v, &g.screen, &cfg) {
                            expected.push(DetectedAd {
                                view_id: v.id.clone(),
                                kind,
                            });
                        }
                    }
                }
            }
            assert_eq!(got, expected, "detection mismatch, case {case}");
        }

        // (d) frequent-ad counting vs. incoming-edge enumeration on graphs
        // of at most 8 states.
        let rule_cfg = RuleConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(67);
        for case in 0..1000 {
            let n_states = rng.random_range(2..=8usize);
            let mut states = Vec::new();
            for i in 0..n_states {
                let tree = fixtures::tree(
                    "root",
                    vec![
                        fixtures::node(
                            "root",
                            "android.widget.FrameLayout",
                            "",
                            Bounds::new(0, 0, 1080, 1776),
                            0,
                            false,
                            &["leaf"],
                        ),
                        fixtures::node(
                            "leaf",
                            "android.widget.TextView",
                            "caption",
                            Bounds::new(0, 100, 400, 200),
                            1,
                            false,
                            &[],
                        ),
                    ],
                );
                states.push(fixtures::state(
                    &format!("s{i}"),
                    "com.example.freq.MainActivity",
                    StateKind::Content,
                    tree,
                ));
            }
            let mut transitions = vec![fixtures::app_start("s0")];
            let n_edges = rng.random_range(0..=14usize);
            for _ in 0..n_edges {
                let src = format!("s{}", rng.random_range(0..n_states));
                let dst = format!("s{}", rng.random_range(0..n_states));
                let kind =
                    [EventType::Click, EventType::Scroll, EventType::Back][rng.random_range(0..3)];
                let view = if rng.random_bool(0.6) {
                    Some(format!("v{}", rng.random_range(0..3)))
                } else {
                    None
                };
                transitions.push(fixtures::transition(&src, &dst, kind, view.as_deref()));
            }
            let graph = fixtures::graph(
                fixtures::meta("com.example.freq", &["com.example.freq.MainActivity"]),
                states,
                transitions,
                vec![],
            );
            // Random ad-bearing states, fed to the rule as detections.
            let mut detections: BTreeMap<String, Vec<DetectedAd>> = BTreeMap::new();
            for i in 0..n_states {
                if rng.random_bool(0.5) {
                    detections.insert(
                        format!("s{i}"),
                        vec![DetectedAd {
                            view_id: "leaf".to_string(),
                            kind: if rng.random_bool(0.5) {
                                AdKind::Interstitial
                            } else {
                                AdKind::FullScreen
                            },
                        }],
                    );
                }
            }
            let findings = check_frequent(&graph, &detections, &rule_cfg);
            let flagged: BTreeSet<&str> =
                findings.iter().map(|f| f.state_ids[0].as_str()).collect();
            // Oracle: enumerate distinct incoming (source, event, view)
            // triples per ad-bearing state.
            let mut expected: BTreeSet<&str> = BTreeSet::new();
            for sid in detections.keys() {
                let mut edges = HashSet::new();
                for t in &graph.transitions {
                    if &t.target == sid && t.event.kind != EventType::AppStart {
                        edges.insert((t.source.clone(), t.event.kind, t.event.view_id.clone()));
                    }
                }
                if edges.len() > 3 {
                    expected.insert(sid.as_str());
                }
            }
            assert_eq!(flagged, expected, "frequent mismatch, case {case}");
        }

        // (e) drive-by rule vs. the 16-row condition truth table,
        // randomized over 1000 constructions.
        let mut rng = ChaCha8Rng::seed_from_u64(68);
        for case in 0..1000 {
            let c1_ads = rng.random_bool(0.5);
            let c2_download = rng.random_bool(0.5);
            let c3_same_activity = rng.random_bool(0.5);
            let c4_touch = rng.random_bool(0.5);
            let graph = drive_by_case(&mut rng, c1_ads, c2_download, c3_same_activity, c4_touch);
            let detections = if c1_ads {
                BTreeMap::from([(
                    "subject".to_string(),
                    vec![DetectedAd {
                        view_id: "ad".to_string(),
                        kind: AdKind::Interstitial,
                    }],
                )])
            } else {
                BTreeMap::new()
            };
            let findings = check_drive_by(&graph, &detections, &rule_cfg);
            let expect = c1_ads && c2_download && c3_same_activity && c4_touch;
            assert_eq!(
                findings.iter().any(|f| f.state_ids[0] == "subject"),
                expect,
                "drive-by mismatch, case {case}: c1={c1_ads} c2={c2_download} c3={c3_same_activity} c4={c4_touch}"
            );
        }
    });
}

/// Build a three-state graph around a "subject" state with each drive-by
/// condition independently toggled.
fn drive_by_case(
    rng: &mut ChaCha8Rng,
    c1_ads: bool,
    c2_download: bool,
    c3_same_activity: bool,
    c4_touch: bool,
) -> UTGraph {
    let act_subject = "com.example.driveby.OfferActivity";
    let next_activity = if c3_same_activity {
        act_subject
    } else {
        "com.example.driveby.BrowserActivity"
    };
    let mk_tree = |with_ad: bool| {
        let mut nodes = vec![
            fixtures::node(
                "root",
                "android.widget.FrameLayout",
                "",
                Bounds::new(0, 0, 1080, 1776),
                0,
                false,
                &["caption"],
            ),
            fixtures::node(
                "caption",
                "android.widget.TextView",
                "caption",
                Bounds::new(0, 1500, 400, 1580),
                1,
                false,
                &[],
            ),
        ];
        if with_ad {
            nodes[0].children.push("ad".to_string());
            nodes.push(fixtures::node(
                "ad",
                "android.webkit.WebView",
                "ad_offer",
                Bounds::new(200, 570, 880, 1210),
                5,
                true,
                &[],
            ));
        }
        fixtures::tree("root", nodes)
    };
    let entry = fixtures::state(
        "entry",
        "com.example.driveby.MainActivity",
        StateKind::Content,
        mk_tree(false),
    );
    let mut subject = fixtures::state("subject", act_subject, StateKind::Content, mk_tree(c1_ads));
    let next = fixtures::state("next", next_activity, StateKind::Content, mk_tree(false));

    let mut traffic = Vec::new();
    // Noise record: never a download.
    if rng.random_bool(0.5) {
        subject.traffic_ids.push("t_page".to_string());
        traffic.push(adscan_core::model::TrafficRecord {
            id: "t_page".to_string(),
            state_id: "subject".to_string(),
            view_id: None,
            method: adscan_core::model::HttpMethod::Get,
            url: "http://cdn.example.com/page".to_string(),
            response_content_type: "text/html".to_string(),
            response_length: 2048,
            body_magic: "3C68746D6C3E0D0A".to_string(),
            user_initiated: false,
        });
    }
    if c2_download {
        subject.traffic_ids.push("t_apk".to_string());
        traffic.push(adscan_core::model::TrafficRecord {
            id: "t_apk".to_string(),
            state_id: "subject".to_string(),
            view_id: None,
            method: adscan_core::model::HttpMethod::Get,
            url: "http://ads.example.net/promo.apk".to_string(),
            response_content_type: "application/vnd.android.package-archive".to_string(),
            response_length: 3_200_000,
            body_magic: "504B030414000000".to_string(),
            user_initiated: false,
        });
    } else if rng.random_bool(0.5) {
        // A user-confirmed transfer must not count as condition 2.
        subject.traffic_ids.push("t_confirmed".to_string());
        traffic.push(adscan_core::model::TrafficRecord {
            id: "t_confirmed".to_string(),
            state_id: "subject".to_string(),
            view_id: None,
            method: adscan_core::model::HttpMethod::Get,
            url: "http://cdn.example.com/manual.pdf".to_string(),
            response_content_type: "application/octet-stream".to_string(),
            response_length: 9000,
            body_magic: "255044462D312E35".to_string(),
            user_initiated: true,
        });
    }

    let incoming = if c4_touch {
        EventType::Click
    } else {
        EventType::Scroll
    };
    let transitions = vec![
        fixtures::app_start("entry"),
        fixtures::transition("entry", "subject", incoming, None),
        fixtures::transition("subject", "next", EventType::Click, None),
    ];
    let mut meta = fixtures::meta(
        "com.example.driveby",
        &[
            "com.example.driveby.MainActivity",
            act_subject,
            next_activity,
        ],
    );
    meta.activities.dedup();
    fixtures::graph(meta, vec![entry, subject, next], transitions, traffic)
}

/// Criterion 4: the reconstructed pop-up state is detected as one
/// interstitial and its size ratio passes the size rule.
#[test]
fn c4_geometry_constants() {
    criterion("C4 geometry-constants", || {
        let g = fixtures::fig5_graph();
        let screen = g.screen;
        assert_eq!(screen.width, 1080);
        assert_eq!(screen.height, 1776);
        let state = &g.states["s0"];
        let popup = &state.view_tree.nodes["popup"];
        assert_eq!(popup.bounds, Bounds::new(135, 520, 945, 1330));
        assert_eq!(popup.bounds.width(), 810);
        assert_eq!(popup.bounds.height(), 810);
        assert_eq!(popup.class_name, "com.pop.is.ar");
        assert!(!state.ad_load_traces.is_empty());

        let cfg = AdFeatureConfig::default();
        let ads = detect_ad_views(state, &screen, &cfg);
        assert_eq!(
            ads,
            vec![DetectedAd {
                view_id: "popup".to_string(),
                kind: AdKind::Interstitial
            }],
            "exactly one interstitial ad view"
        );

        let ratio = popup.bounds.area() as f64 / screen.area() as f64;
        let expected = 656_100.0_f64 / 1_918_080.0_f64;
        assert!(
            (ratio - expected).abs() < 1e-9,
            "ratio {ratio} vs {expected}"
        );
        assert!((ratio - 0.342).abs() < 1e-3);

        let size_findings = check_size(state, &ads, &screen, &RuleConfig::default());
        assert!(
            size_findings.is_empty(),
            "the 810x810 pop-up passes the size rule"
        );
    });
}

/// Criterion 5: over the 30-app suite with 20 paired seeds at equal
/// budget, mean ad-state coverage of ad-first is at least that of random,
/// and ad-first reaches every scripted exit-state ad within the default
/// budget.
#[test]
fn c5_exploration_dominance() {
    criterion("C5 exploration-dominance", || {
        let suite = exploration_suite(2);
        assert_eq!(suite.len(), 30);
        let paired_budget = 24u32;

        let coverage =
            |app: &adscan_core::sim::AppModel, strategy: Strategy, seed: u64, budget: u32| {
                let cfg = ExplorationConfig {
                    strategy,
                    event_budget: budget,
                    seed,
                    ..ExplorationConfig::default()
                };
                let graph = explore(app, &cfg);
                let explored_ad_states = graph
                    .states
                    .values()
                    .filter(|s| {
                        leaf_views(s)
                            .iter()
                            .any(|v| v.resource_id.starts_with("ad_"))
                    })
                    .count();
                let total = reachable_ad_screens(app).len();
                assert!(
                    total > 0,
                    "{} has no reachable ad screens",
                    app.meta.package
                );
                explored_ad_states as f64 / total as f64
            };

        let mut ad_first_sum = 0.0;
        let mut random_sum = 0.0;
        let mut n = 0usize;
        for app in &suite {
            for seed in 0..20u64 {
                ad_first_sum += coverage(app, Strategy::AdFirst, seed, paired_budget);
                random_sum += coverage(app, Strategy::Random, seed, paired_budget);
                n += 1;
            }
        }
        let mean_ad_first = ad_first_sum / n as f64;
        let mean_random = random_sum / n as f64;
        assert!(
            mean_ad_first >= mean_random,
            "ad_first {mean_ad_first:.4} < random {mean_random:.4} at budget {paired_budget}"
        );

        // Every scripted exit-state ad is reached within the default
        // budget.
        for app in &suite {
            let graph = explore(app, &ExplorationConfig::default());
            let exit_ad_reached = graph.states.values().any(|s| {
                s.kind == StateKind::Exit
                    && leaf_views(s)
                        .iter()
                        .any(|v| v.resource_id.starts_with("ad_"))
            });
            assert!(exit_ad_reached, "{} exit ad unreached", app.meta.package);
        }
    });
}

/// Criterion 6: rule evaluation over a 100-state / 2000-view graph stays
/// under 0.4 s, and the full per-app pipeline stays under 5 s.
#[test]
fn c6_performance() {
    criterion("C6 performance", || {
        let graph = fixtures::big_graph(100, 20);
        let total_views: usize = graph.states.values().map(|s| s.view_tree.nodes.len()).sum();
        assert_eq!(graph.states.len(), 100);
        assert!(total_views >= 2000, "graph has {total_views} views");

        let rules = RuleConfig::default();
        let ads_cfg = AdFeatureConfig::default();
        // Warm once, then measure.
        let report = check_all(&graph, &rules, &ads_cfg).unwrap();
        assert!(report.fraudulent || !report.findings.is_empty() || report.findings.is_empty());
        let started = Instant::now();
        let _ = check_all(&graph, &rules, &ads_cfg).unwrap();
        let rule_time = started.elapsed();
        assert!(
            rule_time.as_secs_f64() < 0.4,
            "check_all took {rule_time:?}, budget is 0.4s"
        );

        // Full simulated pipeline for one app.
        let models =
            generate_benchmark(1, 0, &BTreeMap::from([(FraudType::Hidden, 1)]), 3).unwrap();
        let started = Instant::now();
        let faulted = inject_faults(
            &models[0],
            &FaultConfig {
                ad_load_failure_rate: 0.05,
                inherited_ad_rate: 0.05,
                seed: 1,
            },
        );
        let g = explore(&faulted, &ExplorationConfig::default());
        let _ = check_all(&g, &rules, &ads_cfg).unwrap();
        let app_time = started.elapsed();
        assert!(
            app_time.as_secs_f64() < 5.0,
            "per-app pipeline took {app_time:?}, budget is 5s"
        );
    });
}

/// Criterion 7: 100 randomized graphs round-trip byte-stably
/// (serialize . deserialize . serialize is a fixed point).
#[test]
fn c7_serialization_fixed_point() {
    criterion("C7 serialization-fixed-point", || {
        for seed in 0..100u64 {
            let g = fixtures::random_graph(seed);
            assert_eq!(g.validate(), Vec::<String>::new(), "seed {seed}");
            let first = g.serialize();
            let reparsed = UTGraph::deserialize(&first).unwrap();
            let second = reparsed.serialize();
            assert_eq!(first, second, "fixed point broken at seed {seed}");
            assert_eq!(g, reparsed, "structural equality broken at seed {seed}");
        }
    });
}
