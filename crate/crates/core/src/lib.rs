//! Circular binary words whose only squares are 00, 11 and 0101.
//!
//! * [`words`]: words, circular words, square detection.
//! * [`morphism`]: morphisms into {0,1}* and their certification.
//! * [`ternary`]: level circular square-free ternary words.
//! * [`constructor`]: length formulas, coverage, construction and certificates.
//! * [`search`]: exhaustive existence decision and counting.
//! * [`catalog`]: the embedded morphisms and explicit words.
//! * [`cli`]: the `fsword` command line.

pub mod catalog;
pub mod cli;
pub mod constructor;
pub mod morphism;
pub mod search;
pub mod ternary;
pub mod words;

pub use catalog::{load_catalog, parse_morphism, serialize_morphism, Catalog, CatalogEntry, FixtureEntry};
pub use constructor::{construct, knockout, reachable_lengths, replay, LengthCertificate, Recipe};
pub use morphism::{HnReport, Morphism};
pub use search::{decide, decide_range, SearchOutcome};
pub use words::{CircularWord, Word};
