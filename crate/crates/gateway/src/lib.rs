//! Provider access for translation and embedding.
//!
//! [`LlmTranslator`] and [`GatewayEmbedder`] talk to any chat-completions
//! compatible endpoint through a [`Transport`]; responses are cached on
//! disk by request hash. [`mock`] holds deterministic offline providers.

pub mod cache;
pub mod client;
pub mod config;
pub mod limiter;
pub mod mock;
pub mod prompt;
pub mod transport;

pub use cache::{cache_key, DiskCache};
pub use client::{GatewayEmbedder, LlmTranslator};
pub use config::{ModelConfig, ReasoningEffort};
pub use limiter::InFlightLimiter;
pub use mock::{HashedBowEmbedder, LossyTranslator, MockTransport, OracleTranslator};
pub use transport::{ChatMessage, Transport, TransportError};
#[cfg(feature = "http")]
pub use transport::HttpTransport;
