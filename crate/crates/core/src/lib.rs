//! Binary email features tailored for cosine distance.
//!
//! The pipeline selects labelled emails from a maildir-style corpus, lexes
//! them into words, ranks each email's words by TF-IDF significance and keeps
//! the words that rank highly in many emails. Each email then becomes a
//! sparse binary vector with a fixed number of ones: its top-ranked kept
//! words, padded with dimensions private to that email. With equal popcounts
//! the cosine distance between two emails is `1 - shared / ones`, an exact
//! count of common indicative words.
//!
//! Modules follow the pipeline order: [`corpus`], [`lexer`], [`vocab`],
//! [`significance`], [`features`], then [`cosine`] and [`knn`] for
//! evaluation and [`io`] for files. [`pipeline`] runs the build end to end.

pub mod corpus;
pub mod cosine;
pub mod error;
pub mod features;
pub mod io;
pub mod knn;
pub mod lexer;
mod par;
pub mod pipeline;
pub mod rng;
pub mod significance;
pub mod vocab;

pub use corpus::{LabelSet, LabelSpec, RawEmail};
pub use error::{Error, Result};
pub use features::{FeatureDataset, FeatureRow};
pub use knn::EvalReport;
pub use pipeline::{build_features, BuildOutput, PipelineParams, PipelineStats};
pub use significance::FilterParams;
pub use vocab::{Stage, StopWords, VocabStage};
