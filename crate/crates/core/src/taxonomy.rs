//! The nine-type ad-fraud taxonomy shared by labels, rules and metrics.

use serde::{Deserialize, Serialize};
use std::fmt;

/// One fraud type. The first four are static placement frauds (visible in a
/// single UI state); the rest are dynamic interaction frauds (require the
/// transition graph or runtime behaviour).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FraudType {
    Hidden,
    Size,
    Number,
    Overlap,
    Interaction,
    DriveBy,
    Outside,
    Frequent,
    NonContent,
}

impl FraudType {
    pub const ALL: [FraudType; 9] = [
        FraudType::Hidden,
        FraudType::Size,
        FraudType::Number,
        FraudType::Overlap,
        FraudType::Interaction,
        FraudType::DriveBy,
        FraudType::Outside,
        FraudType::Frequent,
        FraudType::NonContent,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            FraudType::Hidden => "hidden",
            FraudType::Size => "size",
            FraudType::Number => "number",
            FraudType::Overlap => "overlap",
            FraudType::Interaction => "interaction",
            FraudType::DriveBy => "drive_by",
            FraudType::Outside => "outside",
            FraudType::Frequent => "frequent",
            FraudType::NonContent => "non_content",
        }
    }
}

impl fmt::Display for FraudType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn serde_names_are_snake_case() {
        assert_eq!(
            serde_json::to_string(&FraudType::DriveBy).unwrap(),
            "\"drive_by\""
        );
        assert_eq!(
            serde_json::from_str::<FraudType>("\"non_content\"").unwrap(),
            FraudType::NonContent
        );
    }

    #[test]
    fn all_lists_each_type_once() {
        let mut seen = std::collections::BTreeSet::new();
        for t in FraudType::ALL {
            assert!(seen.insert(t));
        }
        assert_eq!(seen.len(), 9);
    }
}
