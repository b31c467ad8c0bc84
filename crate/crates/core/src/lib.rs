//! Document chunking for retrieval-augmented generation.
//!
//! The crate segments documents into sentence-aligned chunks with several
//! strategies, builds parent/child indexes for small-to-big retrieval,
//! scores retrieval units against a query, and evaluates the result with
//! ranking and extractive-QA metrics.
//!
//! Every model dependency sits behind a provider trait:
//! [`logits::LogitsProvider`] for next-token EOS scores,
//! [`retrieval::EmbeddingProvider`] for dense vectors and
//! [`retrieval::Generator`] for answer synthesis. Deterministic mocks are
//! provided for each, as are HTTP clients for the JSON wire protocols.

pub mod error;
pub mod evaluation;
pub mod granularity;
mod http;
pub mod logits;
pub mod pipeline;
pub mod retrieval;
pub mod segmentation;
pub mod text;

pub use error::{Error, ProviderError, Result};
