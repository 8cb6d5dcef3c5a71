//! Analytic Hierarchy Process engine for comparing chatbot versions against a
//! hierarchy of quality attributes.
//!
//! The pipeline is: [`format::parse_model`] a model file, check it with
//! [`validate::validate_model`], then [`synthesis::evaluate`] it to get local
//! and global weights, per-node consistency and alternative totals.

pub mod catalog;
pub mod format;
pub mod model;
pub mod priority;
pub mod ratio;
pub mod report;
pub mod synthesis;
pub mod validate;

pub use format::{parse_model, serialize_model, ParseError, ParseErrorKind, SourceSpan};
pub use model::{AlternativeDecl, Children, DecisionModel, Metadata, Node, NodePath, PairwiseJudgment};
pub use ratio::Ratio;
pub use synthesis::{evaluate, rank_alternatives, whatif, AnalysisDelta, AnalysisError, AnalysisResult};
pub use validate::{validate_model, IssueCode, ValidationReport};
