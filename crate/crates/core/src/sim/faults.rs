//! Fault injection: the two ad-observation failure modes that degrade
//! detector input in practice.
//!
//! A load failure keeps the ad-load trace but renders no ad view (network
//! failures, loading time-outs). Inherited-ad suppression keeps the
//! rendered ad views of a scroll chain but drops their load traces; the
//! whole chain loses its traces because the trace-gate propagates across
//! scroll edges, so suppressing only the scrolled page would be rescued by
//! the gate of its predecessor. Ground-truth labels are never touched:
//! faults perturb observations, not behaviour.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::app_model::{AppModel, FaultAnnotation};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FaultConfig {
    pub ad_load_failure_rate: f64,
    pub inherited_ad_rate: f64,
    #[serde(default)]
    pub seed: u64,
}

impl FaultConfig {
    pub fn none() -> Self {
        FaultConfig {
            ad_load_failure_rate: 0.0,
            inherited_ad_rate: 0.0,
            seed: 0,
        }
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

/// Apply fault draws to a model. Deterministic for a given (model package,
/// seed); rates of zero return the model unchanged.
pub fn inject_faults(app: &AppModel, cfg: &FaultConfig) -> AppModel {
    let load_rate = cfg.ad_load_failure_rate.clamp(0.0, 1.0);
    let inherited_rate = cfg.inherited_ad_rate.clamp(0.0, 1.0);
    if load_rate == 0.0 && inherited_rate == 0.0 {
        return app.clone();
    }

    let mut out = app.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ fnv64(app.meta.package.as_bytes()));

    // Load failures, one draw per ad slot in deterministic screen order.
    for (sid, screen) in out.screens.iter_mut() {
        for ad in screen.ads.iter_mut() {
            if !(ad.emits_trace && ad.renders_view) {
                continue;
            }
            if rng.random_bool(load_rate) {
                ad.renders_view = false;
                out.fault_log.push(FaultAnnotation::LoadFailure {
                    screen: sid.clone(),
                    ad: ad.id.clone(),
                });
            }
        }
    }

    // Inherited-ad suppression, one draw per scroll chain.
    let mut chains: Vec<String> = out
        .screens
        .values()
        .filter_map(|s| s.scroll_chain.clone())
        .collect();
    chains.sort();
    chains.dedup();
    for chain in chains {
        if !rng.random_bool(inherited_rate) {
            continue;
        }
        for screen in out.screens.values_mut() {
            if screen.scroll_chain.as_deref() == Some(chain.as_str()) {
                for ad in screen.ads.iter_mut() {
                    ad.emits_trace = false;
                }
            }
        }
        out.fault_log
            .push(FaultAnnotation::InheritedAdSuppressed { chain });
    }

    out
}
