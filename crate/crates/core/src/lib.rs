//! Ad-fraud detection over mobile UI state transition graphs.
//!
//! The crate is organized as a pipeline: [`model`] defines the UI state
//! transition graph (UTG) and its JSON format, [`adview`] identifies ad views
//! among leaf nodes, [`rules`] evaluates the fraud heuristics, [`traffic`]
//! classifies download behaviour, [`sim`] generates and explores synthetic
//! app models, and [`corpus`] runs batches and scores them against labels.

pub mod adview;
pub mod corpus;
pub mod error;
#[doc(hidden)]
pub mod fixtures;
pub mod geometry;
pub mod model;
pub mod rules;
pub mod sim;
pub mod taxonomy;
pub mod traffic;

pub use error::{CorpusError, ModelError, SimError};
pub use geometry::Bounds;
pub use model::UTGraph;
pub use rules::{FraudFinding, FraudReport, RuleConfig};
pub use taxonomy::FraudType;
