//! Synthetic app models, exploration, fault injection and benchmark
//! generation.
//!
//! An [`AppModel`] is a deterministic stand-in for a real app: screens with
//! views, ad slots and event handlers. [`explore`] walks a model with the
//! ad-first or random strategy and emits a UTG; [`inject_faults`] perturbs a
//! model the way flaky ad loading and view inheritance perturb real runs;
//! [`generate_benchmark`] builds labelled corpora whose fraud apps embed
//! scripted rule violations and whose clean apps stay within every rule.

mod app_model;
mod explore;
mod faults;
mod generate;

pub use app_model::{
    AdSpec, AppModel, Effect, FaultAnnotation, Handler, Screen, TemplateView, TrafficSpec,
};
pub use explore::{explore, explore_with_stats, ExplorationConfig, ExplorationStats, Strategy};
pub use faults::{inject_faults, FaultConfig};
pub use generate::{
    default_distribution, exploration_suite, generate_benchmark, reachable_ad_screens,
};
