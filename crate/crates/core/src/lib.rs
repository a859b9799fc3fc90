//! Exact simulation of Grover's search and the Tsallis relative alpha entropy
//! of coherence of every intermediate state.
//!
//! * [`model`]: database size, target sets and the two-level analytic state.
//! * [`coherence`]: `C_alpha`, `C~_alpha`, the relative entropy and skew
//!   information of coherence, and the Tsallis relative entropy itself.
//! * [`engine`]: real-amplitude state vector simulation with a fast
//!   Walsh-Hadamard transform and per-operator snapshots.
//! * [`analytic`]: closed-form and large-database formulas for every stage.
//! * [`dynamics`]: coherence production and depletion per operator and the
//!   turning point of the iteration.
//!
//! The numerical core is generic over [`Real`]; `f64` aliases are exported
//! at the crate root.

pub mod analytic;
pub mod coherence;
pub mod dynamics;
pub mod engine;
pub mod error;
pub mod model;
pub mod scalar;

pub use coherence::{AlphaBranch, AlphaParam};
pub use error::{Error, Result};
pub use model::{make_config, GroverConfig, TargetSet, TargetSpec, TargetStructure};
pub use scalar::Real;

pub type StateVector = engine::StateVector<f64>;
pub type StateVector32 = engine::StateVector<f32>;
pub type StageRecord = engine::StageRecord<f64>;
pub type ProbabilityVector = coherence::ProbabilityVector<f64>;
pub type ProbabilityHistogram = coherence::ProbabilityHistogram<f64>;
pub type TwoLevelState = model::TwoLevelState<f64>;
pub type CoherenceValue = analytic::CoherenceValue<f64>;
pub type DeltaSeries = dynamics::DeltaSeries<f64>;
