//! A dependency-light handwritten-character recognition pipeline.
//!
//! The stages, in order: binarize glyph rasters ([`raster`]), extract a
//! 204-element shadow + longest-run feature vector over a
//! center-of-gravity quad-tree ([`features`]), classify with a
//! backpropagation MLP ([`mlp`]) or a one-vs-one RBF soft-margin SVM
//! ([`svm`]), score with confusion matrices and macro recognition
//! accuracy ([`eval`]), and optionally merge mutually-confused classes
//! ([`grouping`]). A deterministic synthetic glyph generator
//! ([`synthgen`]) supplies desk-scale data for the whole pipeline.

pub mod error;
pub mod eval;
pub mod features;
pub mod grouping;
pub mod mlp;
pub mod raster;
pub mod svm;
pub mod synthgen;

pub use error::{Error, Result};
