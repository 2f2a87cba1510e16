//! Benchmark and exploration-suite generators.
//!
//! Fraud apps embed one scripted violation per labelled type, drawn from
//! parameter ranges that clearly break the rule's threshold; clean apps
//! draw from clearly-compliant ranges. Screen geometry is laid out so each
//! script trips exactly its own rule: ad slots, buttons and dialogs are
//! kept apart unless a rule is meant to fire on them.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::adview::AD_NETWORK_PREFIXES;
use crate::error::SimError;
use crate::geometry::Bounds;
use crate::model::{AppLabel, AppMeta, EventType, HttpMethod, ScreenDims, StateKind};
use crate::taxonomy::FraudType;

use super::app_model::{
    AdSpec, AppModel, Effect, Handler, Reflow, Screen, TemplateView, TrafficSpec,
};

const SCREEN: ScreenDims = ScreenDims {
    width: 1080,
    height: 1776,
};

// Shared layout slots (1080x1776 screen).
const TITLE: Bounds = Bounds {
    left: 40,
    top: 40,
    right: 1040,
    bottom: 120,
};
const PHOTO_NORMAL: Bounds = Bounds {
    left: 150,
    top: 400,
    right: 930,
    bottom: 700,
};
const PHOTO_EXPANDED: Bounds = Bounds {
    left: 135,
    top: 500,
    right: 945,
    bottom: 1310,
};
const CAPTION: Bounds = Bounds {
    left: 100,
    top: 1500,
    right: 980,
    bottom: 1580,
};
const BACK_BTN: Bounds = Bounds {
    left: 60,
    top: 1600,
    right: 280,
    bottom: 1700,
};
const CLEAN_BANNER: Bounds = Bounds {
    left: 0,
    top: 1768,
    right: 1080,
    bottom: 1776,
};
const POPUP: Bounds = Bounds {
    left: 135,
    top: 520,
    right: 945,
    bottom: 1330,
};
const HIDDEN_AD: Bounds = Bounds {
    left: 135,
    top: 600,
    right: 945,
    bottom: 1410,
};
const HIDDEN_AD_SCROLLED: Bounds = Bounds {
    left: 135,
    top: 60,
    right: 945,
    bottom: 870,
};
const EMAIL_BTN: Bounds = Bounds {
    left: 300,
    top: 900,
    right: 780,
    bottom: 1030,
};
const NUM_BOX_A: Bounds = Bounds {
    left: 140,
    top: 100,
    right: 940,
    bottom: 700,
};
const NUM_BOX_B: Bounds = Bounds {
    left: 140,
    top: 760,
    right: 940,
    bottom: 1460,
};
const DIALOG_TEXT: Bounds = Bounds {
    left: 140,
    top: 720,
    right: 940,
    bottom: 790,
};
const DIALOG_YES: Bounds = Bounds {
    left: 140,
    top: 800,
    right: 540,
    bottom: 950,
};
const DIALOG_NO: Bounds = Bounds {
    left: 560,
    top: 800,
    right: 940,
    bottom: 950,
};
const DIALOG_TOP_YES: Bounds = Bounds {
    left: 140,
    top: 30,
    right: 540,
    bottom: 140,
};
const HOME_AD: Bounds = Bounds {
    left: 0,
    top: 0,
    right: 1080,
    bottom: 8,
};

fn nav_button_bounds(i: i64) -> Bounds {
    Bounds::new(60 + i * 260, 430, 280 + i * 260, 550)
}

fn overlap_button_bounds(i: i64) -> Bounds {
    match i {
        0 => Bounds::new(150, 560, 510, 660),
        1 => Bounds::new(570, 560, 930, 660),
        2 => Bounds::new(150, 700, 510, 800),
        _ => Bounds::new(570, 700, 930, 800),
    }
}

/// A centered interstitial slot from clearly rule-compliant ranges.
fn clean_interstitial_bounds(rng: &mut ChaCha8Rng) -> Bounds {
    let w = [680i64, 720, 760][rng.random_range(0..3)];
    let h = [640i64, 700, 760][rng.random_range(0..3)];
    let left = 540 - w / 2;
    Bounds::new(left, 570, left + w, 570 + h)
}

/// A bottom banner whose ratio exceeds the legitimate banner interval but
/// stays inside the detection interval.
fn oversize_banner_bounds(rng: &mut ChaCha8Rng) -> Bounds {
    let top = 1640 + 20 * rng.random_range(0..4i64);
    Bounds::new(0, top, 1080, 1776)
}

fn text_view(id: &str, resource: &str, text: &str, bounds: Bounds, z: i64) -> TemplateView {
    TemplateView {
        id: id.to_string(),
        class: "android.widget.TextView".to_string(),
        resource_id: resource.to_string(),
        text: text.to_string(),
        bounds,
        z,
        clickable: false,
        parent: None,
    }
}

fn button(id: &str, resource: &str, text: &str, bounds: Bounds, z: i64) -> TemplateView {
    TemplateView {
        id: id.to_string(),
        class: "android.widget.Button".to_string(),
        resource_id: resource.to_string(),
        text: text.to_string(),
        bounds,
        z,
        clickable: true,
        parent: None,
    }
}

fn image(id: &str, resource: &str, bounds: Bounds, z: i64) -> TemplateView {
    TemplateView {
        id: id.to_string(),
        class: "android.widget.ImageView".to_string(),
        resource_id: resource.to_string(),
        text: String::new(),
        bounds,
        z,
        clickable: false,
        parent: None,
    }
}

fn web_ad(id: &str, resource: &str, bounds: Bounds, z: i64) -> AdSpec {
    AdSpec {
        id: id.to_string(),
        class: "android.webkit.WebView".to_string(),
        resource_id: resource.to_string(),
        bounds,
        z,
        emits_trace: true,
        renders_view: true,
        fetch_traffic: true,
    }
}

fn click(view: &str, to: &str) -> Handler {
    Handler {
        view: Some(view.to_string()),
        event: EventType::Click,
        effect: Effect::Goto {
            screen: to.to_string(),
        },
    }
}

fn scroll_to(view: &str, to: &str) -> Handler {
    Handler {
        view: Some(view.to_string()),
        event: EventType::Scroll,
        effect: Effect::Goto {
            screen: to.to_string(),
        },
    }
}

fn back_to(to: &str) -> Handler {
    Handler {
        view: None,
        event: EventType::Back,
        effect: Effect::Goto {
            screen: to.to_string(),
        },
    }
}

fn exit_app(view: Option<&str>) -> Handler {
    Handler {
        view: view.map(|v| v.to_string()),
        event: if view.is_some() {
            EventType::Click
        } else {
            EventType::AppExit
        },
        effect: Effect::ExitApp,
    }
}

fn apk_download(view: &str, to: &str) -> Handler {
    Handler {
        view: Some(view.to_string()),
        event: EventType::Click,
        effect: Effect::Download {
            traffic: TrafficSpec {
                method: HttpMethod::Get,
                url: "http://ads.example.net/promo.apk".to_string(),
                content_type: "application/vnd.android.package-archive".to_string(),
                length: 3_200_000,
                body_magic: "504B030414000000".to_string(),
                user_initiated: false,
            },
            to: to.to_string(),
        },
    }
}

fn confirmed_pdf_download(view: &str, to: &str) -> Handler {
    Handler {
        view: Some(view.to_string()),
        event: EventType::Click,
        effect: Effect::Download {
            traffic: TrafficSpec {
                method: HttpMethod::Get,
                url: "http://cdn.example.com/manual.pdf".to_string(),
                content_type: "application/pdf".to_string(),
                length: 120_000,
                body_magic: "255044462D312E35".to_string(),
                user_initiated: true,
            },
            to: to.to_string(),
        },
    }
}

struct AppBuilder {
    package: String,
    screens: BTreeMap<String, Screen>,
    activities: BTreeSet<String>,
    ad_lib: String,
    rng: ChaCha8Rng,
}

impl AppBuilder {
    fn new(package: &str, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ fnv64(package.as_bytes()));
        let ad_lib = AD_NETWORK_PREFIXES[rng.random_range(0..AD_NETWORK_PREFIXES.len())];
        AppBuilder {
            package: package.to_string(),
            screens: BTreeMap::new(),
            activities: BTreeSet::new(),
            ad_lib: ad_lib.to_string(),
            rng,
        }
    }

    fn activity(&mut self, name: &str) -> String {
        let full = format!("{}.{}", self.package, name);
        self.activities.insert(full.clone());
        full
    }

    fn add_screen(&mut self, id: &str, screen: Screen) {
        self.screens.insert(id.to_string(), screen);
    }

    fn finish(self, label: Vec<FraudType>, seed: u64) -> AppModel {
        AppModel {
            meta: AppMeta {
                package: self.package,
                permissions: vec![
                    "android.permission.INTERNET".to_string(),
                    "android.permission.ACCESS_NETWORK_STATE".to_string(),
                    "android.permission.WAKE_LOCK".to_string(),
                ],
                activities: self.activities.into_iter().collect(),
                detected_ad_libs: vec![self.ad_lib],
                label: Some(AppLabel { fraud_types: label }),
            },
            screen: SCREEN,
            start_screen: "main".to_string(),
            screens: self.screens,
            seed,
            fault_log: Vec::new(),
        }
    }

    /// Content decoy screen with a back button.
    fn decoy(&mut self, id: &str, activity: &str, back: &str) {
        let screen = Screen {
            activity: activity.to_string(),
            kind: StateKind::Content,
            views: vec![
                text_view("title", "title_text", "Section", TITLE, 1),
                text_view(
                    "body",
                    "body_text",
                    "Lorem ipsum",
                    Bounds::new(60, 700, 1020, 1400),
                    2,
                ),
                button("btn_back", "nav_back", "Back", BACK_BTN, 9),
            ],
            ads: Vec::new(),
            handlers: vec![click("btn_back", back)],
            reflow_on_ad_failure: Vec::new(),
            scroll_chain: None,
        };
        self.add_screen(id, screen);
    }

    /// Standard exit dialog. `home` adds an app-exit path into an external
    /// screen; `top_buttons` moves the dialog row to the top of the screen;
    /// `yes_only` drops the "No" button (no way back).
    fn exit_dialog(
        &mut self,
        activity: &str,
        with_banner: bool,
        yes_only: bool,
        top_buttons: bool,
        home: Option<&str>,
    ) {
        let yes_bounds = if top_buttons {
            DIALOG_TOP_YES
        } else {
            DIALOG_YES
        };
        let mut views = vec![
            text_view(
                "dialog_text",
                "dialog_text",
                "Leave the app?",
                DIALOG_TEXT,
                2,
            ),
            button("btn_yes", "btn_yes", "Exit", yes_bounds, 3),
        ];
        let mut handlers = Vec::new();
        if !yes_only {
            views.push(button("btn_no", "btn_no", "Cancel", DIALOG_NO, 4));
            handlers.push(click("btn_no", "main"));
        }
        let mut ads = Vec::new();
        if with_banner {
            ads.push(web_ad("ad_exit_banner", "ad_banner", CLEAN_BANNER, 40));
        }
        match home {
            Some(home_screen) => {
                handlers.push(Handler {
                    view: None,
                    event: EventType::AppExit,
                    effect: Effect::Goto {
                        screen: home_screen.to_string(),
                    },
                });
                handlers.push(exit_app(Some("btn_yes")));
            }
            None => handlers.push(exit_app(Some("btn_yes"))),
        }
        self.add_screen(
            "exit_dialog",
            Screen {
                activity: activity.to_string(),
                kind: StateKind::Exit,
                views,
                ads,
                handlers,
                reflow_on_ad_failure: Vec::new(),
                scroll_chain: None,
            },
        );
    }
}

fn fnv64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

fn main_screen(
    activity: &str,
    nav: &[(&str, &str)],
    ads: Vec<AdSpec>,
    extra_views: Vec<TemplateView>,
    reflow: Vec<Reflow>,
) -> Screen {
    let mut views = vec![text_view("title", "title_text", "Home", TITLE, 1)];
    views.extend(extra_views);
    let mut handlers = Vec::new();
    for (i, (view_id, target)) in nav.iter().enumerate() {
        views.push(button(
            view_id,
            &format!("nav_{view_id}"),
            "Open",
            nav_button_bounds(i as i64),
            10 + i as i64,
        ));
        handlers.push(click(view_id, target));
    }
    handlers.push(back_to("exit_dialog"));
    Screen {
        activity: activity.to_string(),
        kind: StateKind::Content,
        views,
        ads,
        handlers,
        reflow_on_ad_failure: reflow,
        scroll_chain: None,
    }
}

/// One clean app. Variants rotate: 0 = banner plus reflowing photo,
/// 1 = banner plus interstitial overlay, 2 = banner plus scroll chain,
/// 3 = banner plus a user-confirmed download.
fn clean_app(package: &str, seed: u64, variant: u32) -> AppModel {
    let mut b = AppBuilder::new(package, seed);
    let main_act = b.activity("MainActivity");
    let sub_act = b.activity("DetailActivity");

    let mut main_ads = vec![web_ad("ad_main_banner", "ad_banner", CLEAN_BANNER, 40)];
    let mut extra_views = Vec::new();
    let mut reflow = Vec::new();
    let mut nav: Vec<(&str, &str)> = vec![("btn_news", "sub0"), ("btn_about", "sub1")];

    match variant % 4 {
        0 => {
            // The photo sits under the nav buttons; when the banner fails
            // to load the layout reflows it into an interstitial-sized
            // centered block.
            extra_views.push(image("photo", "photo_header", PHOTO_NORMAL, 2));
            reflow.push(Reflow {
                view: "photo".to_string(),
                bounds: PHOTO_EXPANDED,
            });
        }
        1 => {
            nav.push(("btn_promo", "overlay"));
        }
        2 => {
            nav.push(("btn_reader", "reader"));
        }
        _ => {
            nav.push(("btn_manual", "sub2"));
        }
    }

    let main = main_screen(
        &main_act,
        &nav,
        std::mem::take(&mut main_ads),
        extra_views,
        reflow,
    );
    b.add_screen("main", main);
    b.decoy("sub0", &sub_act, "main");
    b.decoy("sub1", &sub_act, "main");

    match variant % 4 {
        1 => {
            let bounds = clean_interstitial_bounds(&mut b.rng);
            b.add_screen(
                "overlay",
                Screen {
                    activity: main_act.clone(),
                    kind: StateKind::Content,
                    views: vec![
                        button(
                            "btn_close",
                            "btn_close",
                            "x",
                            Bounds::new(880, 460, 940, 518),
                            45,
                        ),
                        text_view(
                            "promo_caption",
                            "caption",
                            "Featured",
                            Bounds::new(100, 1400, 980, 1480),
                            2,
                        ),
                    ],
                    ads: vec![web_ad("ad_promo", "ad_interstitial", bounds, 40)],
                    handlers: vec![click("btn_close", "main")],
                    reflow_on_ad_failure: Vec::new(),
                    scroll_chain: None,
                },
            );
        }
        2 => {
            let reader_act = b.activity("ReaderActivity");
            for (i, (id, next)) in [("reader", Some("reader_p2")), ("reader_p2", None)]
                .into_iter()
                .enumerate()
            {
                let mut handlers = vec![back_to(if i == 0 { "main" } else { "reader" })];
                if let Some(next) = next {
                    handlers.push(scroll_to("list", next));
                }
                b.add_screen(
                    id,
                    Screen {
                        activity: reader_act.clone(),
                        kind: StateKind::Content,
                        views: vec![
                            TemplateView {
                                id: "list".to_string(),
                                class: "android.widget.ListView".to_string(),
                                resource_id: "article_list".to_string(),
                                text: String::new(),
                                bounds: Bounds::new(40, 200, 1040, 1400),
                                z: 2,
                                clickable: true,
                                parent: None,
                            },
                            button("btn_back", "nav_back", "Back", BACK_BTN, 9),
                        ],
                        ads: vec![AdSpec {
                            emits_trace: i == 0,
                            ..web_ad("ad_reader_banner", "ad_banner", CLEAN_BANNER, 40)
                        }],
                        handlers,
                        reflow_on_ad_failure: Vec::new(),
                        scroll_chain: Some("reader".to_string()),
                    },
                );
            }
        }
        3 => {
            let screen = Screen {
                activity: sub_act.clone(),
                kind: StateKind::Content,
                views: vec![
                    text_view("title", "title_text", "Manual", TITLE, 1),
                    button(
                        "btn_get",
                        "btn_get_manual",
                        "Download manual",
                        Bounds::new(200, 700, 880, 820),
                        5,
                    ),
                    button("btn_back", "nav_back", "Back", BACK_BTN, 9),
                ],
                ads: Vec::new(),
                handlers: vec![
                    confirmed_pdf_download("btn_get", "sub2_done"),
                    click("btn_back", "main"),
                ],
                reflow_on_ad_failure: Vec::new(),
                scroll_chain: None,
            };
            b.add_screen("sub2", screen);
            b.decoy("sub2_done", &sub_act, "main");
        }
        _ => {}
    }

    let with_dialog_banner = variant % 2 == 1;
    b.exit_dialog(&main_act, with_dialog_banner, false, false, None);
    b.finish(Vec::new(), seed)
}

/// One fraud app embedding the scripted violation(s).
fn fraud_app(package: &str, seed: u64, primary: FraudType, with_drive_by: bool) -> AppModel {
    let mut b = AppBuilder::new(package, seed);
    let main_act = b.activity("MainActivity");
    let sub_act = b.activity("DetailActivity");
    let mut label = vec![primary];

    match primary {
        FraudType::Hidden => {
            let gallery_act = b.activity("GalleryActivity");
            b.add_screen(
                "main",
                main_screen(
                    &main_act,
                    &[("btn_gallery", "gallery"), ("btn_news", "sub0")],
                    vec![],
                    vec![],
                    vec![],
                ),
            );
            b.decoy("sub0", &sub_act, "main");
            // Page 1: the ad lies under the mail button. Page 2 inherits
            // the ad (scrolled up, no fresh load trace).
            b.add_screen(
                "gallery",
                Screen {
                    activity: gallery_act.clone(),
                    kind: StateKind::Content,
                    views: vec![
                        button("btn_mail", "btn_mail", "Mail", EMAIL_BTN, 30),
                        button("btn_back", "nav_back", "Back", BACK_BTN, 9),
                        text_view("caption", "caption", "Gallery", CAPTION, 3),
                    ],
                    ads: vec![web_ad("ad_panel", "ad_panel", HIDDEN_AD, 10)],
                    handlers: vec![
                        scroll_to("caption", "gallery_p2"),
                        click("btn_mail", "sub0"),
                        click("btn_back", "main"),
                    ],
                    reflow_on_ad_failure: Vec::new(),
                    scroll_chain: Some("gallery".to_string()),
                },
            );
            b.add_screen(
                "gallery_p2",
                Screen {
                    activity: gallery_act,
                    kind: StateKind::Content,
                    views: vec![
                        text_view(
                            "caption2",
                            "caption",
                            "Gallery p2",
                            Bounds::new(100, 1440, 980, 1520),
                            3,
                        ),
                        button("btn_back", "nav_back", "Back", BACK_BTN, 9),
                    ],
                    ads: vec![AdSpec {
                        emits_trace: false,
                        ..web_ad("ad_panel", "ad_panel", HIDDEN_AD_SCROLLED, 10)
                    }],
                    handlers: vec![back_to("gallery")],
                    reflow_on_ad_failure: Vec::new(),
                    scroll_chain: Some("gallery".to_string()),
                },
            );
            b.exit_dialog(&main_act, false, false, false, None);
        }
        FraudType::Size => {
            let wall_act = b.activity("WallActivity");
            let banner = oversize_banner_bounds(&mut b.rng);
            b.add_screen(
                "main",
                main_screen(
                    &main_act,
                    &[("btn_wall", "wall"), ("btn_news", "sub0")],
                    vec![],
                    vec![],
                    vec![],
                ),
            );
            b.decoy("sub0", &sub_act, "main");
            for (id, next, traced) in [("wall", Some("wall_p2"), true), ("wall_p2", None, false)] {
                let mut handlers = vec![back_to(if next.is_some() { "main" } else { "wall" })];
                if let Some(next) = next {
                    handlers.push(scroll_to("caption", next));
                }
                b.add_screen(
                    id,
                    Screen {
                        activity: wall_act.clone(),
                        kind: StateKind::Content,
                        views: vec![
                            text_view(
                                "caption",
                                "caption",
                                "Wallpapers",
                                Bounds::new(100, 200, 980, 280),
                                3,
                            ),
                            button(
                                "btn_back",
                                "nav_back",
                                "Back",
                                Bounds::new(60, 1500, 280, 1600),
                                9,
                            ),
                        ],
                        ads: vec![AdSpec {
                            emits_trace: traced,
                            ..web_ad("ad_big_banner", "ad_banner", banner, 40)
                        }],
                        handlers,
                        reflow_on_ad_failure: Vec::new(),
                        scroll_chain: Some("wall".to_string()),
                    },
                );
            }
            b.exit_dialog(&main_act, false, false, false, None);
        }
        FraudType::Number => {
            // Two compliant-sized boxes whose union crosses the cap, with
            // real content present. Single bottom nav button; yes-only
            // dialog so no interactive view returns into the boxed layout.
            let screen = Screen {
                activity: main_act.clone(),
                kind: StateKind::Content,
                views: vec![
                    text_view("caption", "caption", "Feed", CAPTION, 3),
                    button("btn_more", "nav_more", "More", BACK_BTN, 9),
                ],
                ads: vec![
                    web_ad("ad_box_a", "ad_box_a", NUM_BOX_A, 20),
                    web_ad("ad_box_b", "ad_box_b", NUM_BOX_B, 21),
                ],
                handlers: vec![click("btn_more", "sub0"), back_to("exit_dialog")],
                reflow_on_ad_failure: Vec::new(),
                scroll_chain: None,
            };
            b.add_screen("main", screen);
            b.decoy("sub0", &sub_act, "main");
            b.exit_dialog(&main_act, false, true, true, None);
        }
        FraudType::Overlap => {
            let mut views = vec![text_view("caption", "caption", "Tools", CAPTION, 3)];
            let mut handlers = Vec::new();
            for i in 0..4i64 {
                let id = format!("btn_tool{i}");
                views.push(button(
                    &id,
                    &format!("tool_{i}"),
                    "Tool",
                    overlap_button_bounds(i),
                    5 + i,
                ));
                handlers.push(click(&id, "sub0"));
            }
            handlers.push(back_to("exit_dialog"));
            b.add_screen(
                "main",
                Screen {
                    activity: main_act.clone(),
                    kind: StateKind::Content,
                    views,
                    ads: vec![web_ad("ad_cover", "ad_cover", POPUP, 40)],
                    handlers,
                    reflow_on_ad_failure: Vec::new(),
                    scroll_chain: None,
                },
            );
            b.decoy("sub0", &sub_act, "main");
            b.exit_dialog(&main_act, false, true, true, None);
        }
        FraudType::Interaction => {
            b.add_screen(
                "main",
                main_screen(&main_act, &[("btn_news", "sub0")], vec![], vec![], vec![]),
            );
            b.decoy("sub0", &sub_act, "main");
            // Confirming the exit dialog pops an interstitial exactly over
            // where the dialog buttons were.
            let views = vec![
                text_view(
                    "dialog_text",
                    "dialog_text",
                    "Leave the app?",
                    DIALOG_TEXT,
                    2,
                ),
                button("btn_yes", "btn_yes", "Exit", DIALOG_YES, 3),
                button("btn_no", "btn_no", "Cancel", DIALOG_NO, 4),
            ];
            b.add_screen(
                "exit_dialog",
                Screen {
                    activity: main_act.clone(),
                    kind: StateKind::Exit,
                    views,
                    ads: Vec::new(),
                    handlers: vec![click("btn_yes", "exit_ad"), click("btn_no", "main")],
                    reflow_on_ad_failure: Vec::new(),
                    scroll_chain: None,
                },
            );
            b.add_screen(
                "exit_ad",
                Screen {
                    activity: main_act.clone(),
                    kind: StateKind::Content,
                    views: vec![
                        button(
                            "btn_close",
                            "btn_close",
                            "x",
                            Bounds::new(880, 460, 940, 518),
                            45,
                        ),
                        text_view(
                            "promo_caption",
                            "caption",
                            "Sponsored",
                            Bounds::new(100, 1400, 980, 1480),
                            2,
                        ),
                    ],
                    ads: vec![web_ad("ad_exit_pop", "ad_interstitial", POPUP, 40)],
                    handlers: vec![click("btn_close", "main"), exit_app(None)],
                    reflow_on_ad_failure: Vec::new(),
                    scroll_chain: None,
                },
            );
            if with_drive_by {
                label.push(FraudType::DriveBy);
                add_offers_flow(&mut b, "main");
            }
        }
        FraudType::DriveBy => {
            b.add_screen(
                "main",
                main_screen(&main_act, &[("btn_news", "sub0")], vec![], vec![], vec![]),
            );
            b.decoy("sub0", &sub_act, "main");
            add_offers_flow(&mut b, "main");
            b.exit_dialog(&main_act, false, false, false, None);
        }
        FraudType::Outside => {
            b.add_screen(
                "main",
                main_screen(&main_act, &[("btn_news", "sub0")], vec![], vec![], vec![]),
            );
            b.decoy("sub0", &sub_act, "main");
            b.exit_dialog(&main_act, false, false, false, Some("home"));
            // The launcher screen after exit still shows the app's ad.
            b.add_screen(
                "home",
                Screen {
                    activity: "com.android.launcher3.Launcher".to_string(),
                    kind: StateKind::External,
                    views: vec![
                        image(
                            "icon_row",
                            "launcher_icons",
                            Bounds::new(60, 200, 1020, 420),
                            2,
                        ),
                        image(
                            "icon_row2",
                            "launcher_icons",
                            Bounds::new(60, 500, 1020, 720),
                            3,
                        ),
                    ],
                    ads: vec![web_ad("ad_float", "ad_float_strip", HOME_AD, 40)],
                    handlers: Vec::new(),
                    reflow_on_ad_failure: Vec::new(),
                    scroll_chain: None,
                },
            );
        }
        FraudType::Frequent => {
            // Every menu button lands on the same interstitial state:
            // four distinct incoming edges, above the threshold of three.
            let mut views = vec![text_view("caption", "caption", "Menu", CAPTION, 3)];
            let mut handlers = Vec::new();
            for i in 0..4i64 {
                let id = format!("btn_menu{i}");
                views.push(button(
                    &id,
                    &format!("menu_{i}"),
                    "Item",
                    nav_button_bounds(i),
                    10 + i,
                ));
                handlers.push(click(&id, "ad_hub"));
            }
            handlers.push(back_to("exit_dialog"));
            b.add_screen(
                "main",
                Screen {
                    activity: main_act.clone(),
                    kind: StateKind::Content,
                    views,
                    ads: Vec::new(),
                    handlers,
                    reflow_on_ad_failure: Vec::new(),
                    scroll_chain: None,
                },
            );
            let bounds = clean_interstitial_bounds(&mut b.rng);
            b.add_screen(
                "ad_hub",
                Screen {
                    activity: main_act.clone(),
                    kind: StateKind::Content,
                    views: vec![
                        button(
                            "btn_close",
                            "btn_close",
                            "x",
                            Bounds::new(880, 460, 940, 518),
                            45,
                        ),
                        text_view(
                            "promo_caption",
                            "caption",
                            "Sponsored",
                            Bounds::new(100, 1400, 980, 1480),
                            2,
                        ),
                    ],
                    ads: vec![web_ad("ad_every_click", "ad_interstitial", bounds, 40)],
                    handlers: vec![click("btn_close", "main")],
                    reflow_on_ad_failure: Vec::new(),
                    scroll_chain: None,
                },
            );
            b.exit_dialog(&main_act, false, false, false, None);
        }
        FraudType::NonContent => {
            let thanks_act = b.activity("ThanksActivity");
            let even = fnv64(package.as_bytes()).is_multiple_of(2);
            if even {
                // Variant A: interstitial straight on the thank-you state.
                b.add_screen(
                    "main",
                    main_screen(
                        &main_act,
                        &[("btn_rate", "thanks"), ("btn_news", "sub0")],
                        vec![],
                        vec![],
                        vec![],
                    ),
                );
                b.decoy("sub0", &sub_act, "main");
                let bounds = clean_interstitial_bounds(&mut b.rng);
                b.add_screen(
                    "thanks",
                    Screen {
                        activity: thanks_act,
                        kind: StateKind::Thankyou,
                        views: vec![
                            text_view(
                                "thanks_text",
                                "thanks_text",
                                "Thanks for rating!",
                                Bounds::new(140, 200, 940, 300),
                                2,
                            ),
                            button("btn_ok", "btn_ok", "OK", BACK_BTN, 9),
                        ],
                        ads: vec![web_ad("ad_thanks", "ad_interstitial", bounds, 40)],
                        handlers: vec![click("btn_ok", "main")],
                        reflow_on_ad_failure: Vec::new(),
                        scroll_chain: None,
                    },
                );
                b.exit_dialog(&main_act, false, false, false, None);
            } else {
                // Variant B: a bare ad screen right after the exit dialog.
                b.add_screen(
                    "main",
                    main_screen(&main_act, &[("btn_news", "sub0")], vec![], vec![], vec![]),
                );
                b.decoy("sub0", &sub_act, "main");
                let views = vec![
                    text_view(
                        "dialog_text",
                        "dialog_text",
                        "Leave the app?",
                        Bounds::new(140, 160, 940, 230),
                        2,
                    ),
                    button("btn_yes", "btn_yes", "Exit", DIALOG_TOP_YES, 3),
                ];
                b.add_screen(
                    "exit_dialog",
                    Screen {
                        activity: main_act.clone(),
                        kind: StateKind::Exit,
                        views,
                        ads: Vec::new(),
                        handlers: vec![click("btn_yes", "bare_ad")],
                        reflow_on_ad_failure: Vec::new(),
                        scroll_chain: None,
                    },
                );
                b.screens
                    .get_mut("main")
                    .unwrap()
                    .handlers
                    .push(back_to("exit_dialog"));
                let bounds = clean_interstitial_bounds(&mut b.rng);
                b.add_screen(
                    "bare_ad",
                    Screen {
                        activity: main_act.clone(),
                        kind: StateKind::Content,
                        views: Vec::new(),
                        ads: vec![web_ad("ad_farewell", "ad_interstitial", bounds, 40)],
                        handlers: vec![exit_app(None)],
                        reflow_on_ad_failure: Vec::new(),
                        scroll_chain: None,
                    },
                );
            }
        }
    }

    if !b.screens.contains_key("exit_dialog") {
        b.exit_dialog(&main_act, false, false, false, None);
    }
    b.finish(label, seed)
}

/// Offers flow for the drive-by script: clicking the ad silently pulls an
/// APK while the activity stays the same.
fn add_offers_flow(b: &mut AppBuilder, back: &str) {
    let offers_act = b.activity("OffersActivity");
    let bounds = clean_interstitial_bounds(&mut b.rng);
    b.screens
        .get_mut("main")
        .expect("main exists")
        .handlers
        .push(click("btn_offers", "offers"));
    let main = b.screens.get_mut("main").expect("main exists");
    let nav_index = main
        .views
        .iter()
        .filter(|v| v.id.starts_with("btn_"))
        .count() as i64;
    main.views.push(button(
        "btn_offers",
        "nav_offers",
        "Offers",
        nav_button_bounds(nav_index.min(3)),
        18,
    ));
    b.add_screen(
        "offers",
        Screen {
            activity: offers_act.clone(),
            kind: StateKind::Content,
            views: vec![
                text_view(
                    "offer_caption",
                    "caption",
                    "Partner offers",
                    Bounds::new(100, 1400, 980, 1480),
                    2,
                ),
                button("btn_back", "nav_back", "Back", BACK_BTN, 9),
            ],
            ads: vec![web_ad("ad_offer", "ad_interstitial", bounds, 40)],
            handlers: vec![
                apk_download("ad_offer", "offers_done"),
                click("btn_back", back),
            ],
            reflow_on_ad_failure: Vec::new(),
            scroll_chain: None,
        },
    );
    b.add_screen(
        "offers_done",
        Screen {
            activity: offers_act,
            kind: StateKind::Content,
            views: vec![
                text_view(
                    "done_caption",
                    "caption",
                    "Installing",
                    Bounds::new(100, 700, 980, 780),
                    2,
                ),
                button("btn_back", "nav_back", "Back", BACK_BTN, 9),
            ],
            ads: Vec::new(),
            handlers: vec![click("btn_back", back)],
            reflow_on_ad_failure: Vec::new(),
            scroll_chain: None,
        },
    );
}

/// The paper-scale default: 50 fraud apps over all nine types.
pub fn default_distribution() -> BTreeMap<FraudType, u32> {
    let mut d = BTreeMap::new();
    d.insert(FraudType::Hidden, 6);
    d.insert(FraudType::Size, 6);
    d.insert(FraudType::Number, 6);
    d.insert(FraudType::Overlap, 6);
    d.insert(FraudType::Interaction, 6);
    d.insert(FraudType::DriveBy, 5);
    d.insert(FraudType::Outside, 5);
    d.insert(FraudType::Frequent, 5);
    d.insert(FraudType::NonContent, 5);
    d
}

/// Generate a labelled benchmark: `count_fraud` apps distributed over the
/// fraud types (one primary script each; the first interaction app also
/// carries a drive-by script when both types are requested), plus
/// `count_clean` compliant apps. Deterministic per seed.
pub fn generate_benchmark(
    count_fraud: u32,
    count_clean: u32,
    distribution: &BTreeMap<FraudType, u32>,
    seed: u64,
) -> Result<Vec<AppModel>, SimError> {
    let total: u32 = distribution.values().sum();
    if total != count_fraud {
        return Err(SimError::DistributionMismatch {
            expected: count_fraud,
            got: total,
        });
    }
    let both_requested = distribution
        .get(&FraudType::Interaction)
        .copied()
        .unwrap_or(0)
        > 0
        && distribution.get(&FraudType::DriveBy).copied().unwrap_or(0) > 0;

    let mut models = Vec::new();
    let mut idx = 0u32;
    let mut dual_done = false;
    for fraud_type in FraudType::ALL {
        let n = distribution.get(&fraud_type).copied().unwrap_or(0);
        for _ in 0..n {
            let package = format!("com.bench.app{idx:03}");
            let dual = fraud_type == FraudType::Interaction && both_requested && !dual_done;
            if dual {
                dual_done = true;
            }
            models.push(fraud_app(&package, seed, fraud_type, dual));
            idx += 1;
        }
    }
    for i in 0..count_clean {
        let package = format!("com.bench.app{idx:03}");
        models.push(clean_app(&package, seed, i));
        idx += 1;
    }
    Ok(models)
}

/// Thirty decoy-heavy apps for exploration-strategy comparisons: ads sit
/// on the main state, the exit dialog and one deep screen, everything else
/// is content.
pub fn exploration_suite(seed: u64) -> Vec<AppModel> {
    let mut models = Vec::new();
    for i in 0..30u64 {
        let package = format!("com.suite.app{i:02}");
        let mut b = AppBuilder::new(&package, seed.wrapping_add(i));
        let main_act = b.activity("MainActivity");
        let sub_act = b.activity("SectionActivity");
        let deep_act = b.activity("ArticleActivity");

        let n_subs = 14 + (i as usize % 5);
        let mut views = vec![text_view("title", "title_text", "Home", TITLE, 1)];
        let mut handlers = Vec::new();
        for s in 0..n_subs {
            let id = format!("btn_s{s:02}");
            let col = (s % 4) as i64;
            let row = (s / 4) as i64;
            views.push(button(
                &id,
                &format!("nav_{s:02}"),
                "Open",
                Bounds::new(
                    60 + col * 260,
                    200 + row * 130,
                    280 + col * 260,
                    300 + row * 130,
                ),
                10 + s as i64,
            ));
            handlers.push(click(&id, &format!("sub{s:02}")));
        }
        handlers.push(back_to("exit_dialog"));
        b.add_screen(
            "main",
            Screen {
                activity: main_act.clone(),
                kind: StateKind::Content,
                views,
                ads: vec![web_ad("ad_main_banner", "ad_banner", CLEAN_BANNER, 90)],
                handlers,
                reflow_on_ad_failure: Vec::new(),
                scroll_chain: None,
            },
        );
        for s in 0..n_subs {
            let sid = format!("sub{s:02}");
            if s % 3 == 2 {
                // Deeper branch.
                let deep = format!("deep{s:02}");
                let screen = Screen {
                    activity: sub_act.clone(),
                    kind: StateKind::Content,
                    views: vec![
                        text_view("title", "title_text", "Section", TITLE, 1),
                        button(
                            "btn_open",
                            "nav_deeper",
                            "Read",
                            Bounds::new(200, 700, 880, 820),
                            5,
                        ),
                        button("btn_back", "nav_back", "Back", BACK_BTN, 9),
                    ],
                    ads: Vec::new(),
                    handlers: vec![click("btn_open", &deep), click("btn_back", "main")],
                    reflow_on_ad_failure: Vec::new(),
                    scroll_chain: None,
                };
                b.add_screen(&sid, screen);
                let deep_has_ad = s == 2;
                let bounds = clean_interstitial_bounds(&mut b.rng);
                b.add_screen(
                    &deep,
                    Screen {
                        activity: deep_act.clone(),
                        kind: StateKind::Content,
                        views: vec![
                            text_view(
                                "body",
                                "body_text",
                                "Article",
                                Bounds::new(60, 100, 1020, 400),
                                2,
                            ),
                            button("btn_back", "nav_back", "Back", BACK_BTN, 9),
                        ],
                        ads: if deep_has_ad {
                            vec![web_ad("ad_article", "ad_interstitial", bounds, 40)]
                        } else {
                            Vec::new()
                        },
                        handlers: vec![click("btn_back", &sid)],
                        reflow_on_ad_failure: Vec::new(),
                        scroll_chain: None,
                    },
                );
            } else {
                b.decoy(&sid, &sub_act, "main");
            }
        }
        b.exit_dialog(&main_act, true, false, false, None);
        models.push(b.finish(Vec::new(), seed.wrapping_add(i)));
    }
    models
}

/// Reachability oracle over the model itself (never through exploration):
/// screens with a renderable ad slot reachable from the start screen.
pub fn reachable_ad_screens(app: &AppModel) -> BTreeSet<String> {
    let mut seen = BTreeSet::new();
    let mut stack = vec![app.start_screen.clone()];
    while let Some(sid) = stack.pop() {
        if !seen.insert(sid.clone()) {
            continue;
        }
        let Some(screen) = app.screens.get(&sid) else {
            continue;
        };
        for handler in &screen.handlers {
            if let Some(view) = &handler.view {
                let available = screen.views.iter().any(|v| &v.id == view)
                    || screen.ads.iter().any(|a| &a.id == view && a.renders_view);
                if !available {
                    continue;
                }
            }
            match &handler.effect {
                Effect::Goto { screen } => stack.push(screen.clone()),
                Effect::Download { to, .. } => stack.push(to.clone()),
                Effect::ExitApp => {}
            }
        }
    }
    seen.into_iter()
        .filter(|sid| {
            app.screens
                .get(sid)
                .is_some_and(|s| s.ads.iter().any(|a| a.renders_view))
        })
        .collect()
}
