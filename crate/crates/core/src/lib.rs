//! Exact computation of formal feature-importance scores for discrete
//! classifiers, together with an audit of the axioms those scores satisfy.
//!
//! Scores are obtained by instantiating power-index template scores
//! (Shapley-Shubik, Banzhaf, Johnston, Deegan-Packel, Holler-Packel,
//! Responsibility, Andjiga) with characteristic functions derived from
//! abductive and contrastive explanations. All values are exact rationals.

pub mod charfun;
pub mod error;
pub mod exec;
pub mod explain;
pub mod fixtures;
pub mod model;
pub mod props;
pub mod random;
pub mod rational;
pub mod repro;
pub mod scores;
pub mod subset;

pub use charfun::{CharFnId, CharacteristicTable};
pub use error::{Error, Result};
pub use exec::Execution;
pub use explain::{ExplanationFamily, FamilyKind};
pub use model::{Classifier, ExplanationProblem, Instance, WeightedVotingGame};
pub use rational::Rational;
pub use scores::{Fis, FisId, ScoreVector, Template, TemplateId};
pub use subset::FeatureSet;
