//! Core library for extracting third-party embeddings from archived web
//! pages and analysing the resulting tracking networks.
//!
//! The pipeline runs in stages over documented file formats:
//!
//! 1. [`extract`] turns HTML corpora (WARC or manifest) into the bipartite
//!    embedding edge list,
//! 2. [`graph`] builds the bipartite third-party/tracking networks, the
//!    hyperlink network, and the tracker co-occurrence projection,
//! 3. [`rank`] computes PageRank and the rank/domain share prevalence
//!    measures,
//! 4. [`stats`] holds the statistical kernels (power-law fit,
//!    assortativity, G² tests, point-biserial correlation),
//! 5. [`cluster`] prunes and clusters the co-occurrence network.

pub mod cluster;
pub mod extract;
pub mod graph;
pub mod labels;
pub mod pld;
pub mod rank;
pub mod stats;

pub use extract::{EmbeddingEdge, PageRecord};
pub use graph::{BipartiteGraph, CooccurrenceGraph, HyperlinkGraph};
pub use labels::{CategoryMap, Criticality, LabelTable, ThirdPartyLabel};
pub use pld::{CandidateSource, HostCandidate, PayLevelDomain, SuffixRuleSet};
pub use rank::{CompanyShareTable, DomainSet, RankVector};
pub use stats::{ContingencyTable2x2, CorrelationResult, PowerLawFit};
