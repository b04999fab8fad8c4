//! Cleaning, dataset construction and scoring for grammatical error
//! detection corpora built from learner sentence pairs.
//!
//! The crate is organised around the life of a corpus:
//!
//! - [`corpus_io`] reads and writes pair TSV, labeled JSONL and prediction JSONL.
//! - [`normalize`] and [`editdist`] hold the pure text primitives.
//! - [`pipeline`] runs the eight cleaning stages and produces the stage report.
//! - [`dataset_builder`] turns a cleaned corpus into train/validation splits
//!   and cleaned/discarded mixing batches.
//! - [`metrics`] scores prediction files.
//! - [`synth`] generates corpora together with the report the pipeline must produce.
//! - [`stats`] summarises the quantities the filters act on.

pub mod corpus_io;
pub mod dataset_builder;
pub mod editdist;
mod error;
pub mod metrics;
pub mod normalize;
pub mod pipeline;
pub mod stats;
pub mod synth;

pub use corpus_io::{DiscardedPair, LabeledExample, PairFormat, PredictionRecord, SentencePair};
pub use dataset_builder::{build_mix, build_split, MixSpec, SplitSpec};
pub use editdist::{length_difference, levenshtein, normalized_levenshtein, DistanceResult};
pub use error::{Error, Result};
pub use metrics::{compute_metrics, confusion, ConfusionMatrix, MetricsMode, MetricsReport};
pub use normalize::ContractionTable;
pub use pipeline::{run_pipeline, FilterConfig, PipelineOutput, Stage, StageReport};
pub use synth::{generate, Category, SynthSpec};
