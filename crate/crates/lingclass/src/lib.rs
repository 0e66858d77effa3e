//! Phonetic clustering and instance-based language classification for
//! multilingual word lists.
//!
//! The pipeline: ingest a lexicon from CSV, encode each surface as a
//! soundex code embedded in the unit 4-cube, cluster the embeddings
//! with DBSCAN, fit a KNN model under a hybrid string/phonetic
//! distance, optionally self-train on a labeled pool, and evaluate with
//! outcome reports and one-vs-rest ROC curves.
//!
//! All floating-point math is generic over [`num::Real`] (`f32` or
//! `f64`); the aliases below pin the common concrete choices.

pub mod classifier;
pub mod clustering;
pub mod error;
pub mod evaluation;
pub mod lexicon;
pub mod metrics;
pub mod num;
pub mod phonetics;

pub use error::{Error, Result};
pub use lexicon::{Category, Language, Lexicon, WordRecord};
pub use num::Real;
pub use phonetics::SoundexCode;

/// Default scalar for the concrete aliases.
pub type Scalar = f64;

pub type SoundexVector = phonetics::SoundexVector<Scalar>;
pub type LdmConfig = metrics::LdmConfig<Scalar>;
pub type ClusterParams = clustering::ClusterParams<Scalar>;
pub type ClusterReport = clustering::ClusterReport<Scalar>;
pub type KnnConfig = classifier::KnnConfig<Scalar>;
pub type InstanceModel = classifier::InstanceModel<Scalar>;
pub type Prediction = classifier::Prediction<Scalar>;
pub type EvalReport = evaluation::EvalReport<Scalar>;
pub type RocCurve = evaluation::RocCurve<Scalar>;

/// Single-precision variants.
pub type SoundexVectorF32 = phonetics::SoundexVector<f32>;
pub type LdmConfigF32 = metrics::LdmConfig<f32>;
pub type ClusterParamsF32 = clustering::ClusterParams<f32>;
pub type KnnConfigF32 = classifier::KnnConfig<f32>;
pub type InstanceModelF32 = classifier::InstanceModel<f32>;
pub type RocCurveF32 = evaluation::RocCurve<f32>;
