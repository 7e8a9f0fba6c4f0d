//! Uniform definability of types over finite sets, computed on finite trace
//! systems: compression of types into certificates, order and decision
//! predicates, pattern searches, indiscernibility analysis and definition
//! scheme combinators.

pub mod bits;
pub mod cli;
pub mod compress;
pub mod error;
pub mod fixtures;
pub mod gen;
pub mod indiscernible;
pub mod order;
mod par;
pub mod pattern;
pub mod scheme;
pub mod trace;

pub use compress::{compress, evaluate, verify_roundtrip, CompressionCertificate, Ladder};
pub use error::{Error, Result};
pub use gen::GenSpec;
pub use order::OrderContext;
pub use trace::{SignedPattern, TraceSystem, TypeAssignment};
