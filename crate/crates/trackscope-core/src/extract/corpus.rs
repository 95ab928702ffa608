//! Corpus ingestion: WARC archives or a manifest of HTML files, aggregated
//! into the deduplicated embedding edge list.

use std::collections::HashMap;
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::warc::{WarcItem, WarcReader};
use super::{extract_page, EmbeddingEdge, PageRecord};
use crate::pld::{PayLevelDomain, SuffixRuleSet};

#[derive(Debug, Error)]
pub enum ExtractError {
    #[error("no readable records in corpus")]
    NoReadableRecords,
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("manifest line {line} is not `url<TAB>path`")]
    BadManifestLine { line: usize },
    #[error("edge tsv line {line} is malformed")]
    BadEdgeLine { line: usize },
    #[error("duplicate edge for ({site}, {third_party})")]
    DuplicateEdge {
        site: PayLevelDomain,
        third_party: PayLevelDomain,
    },
}

/// Where pages come from.
#[derive(Debug, Clone)]
pub enum CorpusSource {
    /// WARC 1.x files (`.warc` or `.warc.gz`), response records only.
    WarcFiles(Vec<PathBuf>),
    /// TSV manifest `url<TAB>relative_path`, paths resolved against the
    /// manifest's directory.
    Manifest(PathBuf),
}

/// Counters accumulated during ingestion.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestStats {
    /// HTML pages successfully extracted.
    pub pages: u64,
    /// Records skipped: unreadable, non-HTML, or without a resolvable
    /// site PLD.
    pub skipped: u64,
    pub sites: u64,
    pub third_parties: u64,
    pub edges: u64,
}

/// The aggregated result of a corpus run.
#[derive(Debug, Clone)]
pub struct CorpusExtraction {
    /// Sorted by (site, third_party); one row per pair.
    pub edges: Vec<EmbeddingEdge>,
    pub stats: IngestStats,
}

/// Runs extraction over every page of the corpus and aggregates per
/// (site, third-party) pair. Aggregation is a commutative merge, so page
/// order never affects the result. Fails only when zero records could be
/// read.
pub fn ingest_corpus(
    source: &CorpusSource,
    rules: &SuffixRuleSet,
) -> Result<CorpusExtraction, ExtractError> {
    let mut agg = EdgeAggregator::default();
    match source {
        CorpusSource::WarcFiles(paths) => {
            for path in paths {
                ingest_warc_file(path, rules, &mut agg)?;
            }
        }
        CorpusSource::Manifest(path) => ingest_manifest(path, rules, &mut agg)?,
    }
    agg.finish()
}

#[derive(Default)]
struct EdgeAggregator {
    counts: HashMap<(PayLevelDomain, PayLevelDomain), u32>,
    pages: u64,
    skipped: u64,
}

impl EdgeAggregator {
    fn add_page(&mut self, page: &PageRecord, rules: &SuffixRuleSet) {
        self.pages += 1;
        for third_party in extract_page(page, rules) {
            *self
                .counts
                .entry((page.site_pld.clone(), third_party))
                .or_insert(0) += 1;
        }
    }

    fn skip(&mut self) {
        self.skipped += 1;
    }

    fn finish(self) -> Result<CorpusExtraction, ExtractError> {
        if self.pages == 0 {
            return Err(ExtractError::NoReadableRecords);
        }
        let mut edges: Vec<EmbeddingEdge> = self
            .counts
            .into_iter()
            .map(|((site, third_party), page_count)| EmbeddingEdge {
                site,
                third_party,
                page_count,
            })
            .collect();
        edges.sort();
        let mut sites: Vec<&PayLevelDomain> = edges.iter().map(|e| &e.site).collect();
        sites.dedup();
        let site_count = sites.len() as u64;
        let mut tps: Vec<&PayLevelDomain> = edges.iter().map(|e| &e.third_party).collect();
        tps.sort();
        tps.dedup();
        let stats = IngestStats {
            pages: self.pages,
            skipped: self.skipped,
            sites: site_count,
            third_parties: tps.len() as u64,
            edges: edges.len() as u64,
        };
        Ok(CorpusExtraction { edges, stats })
    }
}

fn ingest_warc_file(
    path: &Path,
    rules: &SuffixRuleSet,
    agg: &mut EdgeAggregator,
) -> Result<(), ExtractError> {
    let mut reader = match WarcReader::open(path) {
        Ok(r) => r,
        Err(_) => {
            agg.skip();
            return Ok(());
        }
    };
    loop {
        match reader.next_item() {
            Ok(Some(WarcItem::HtmlPage(html))) => {
                match PageRecord::new(html.url, html.body, rules) {
                    Some(page) => agg.add_page(&page, rules),
                    None => agg.skip(),
                }
            }
            Ok(Some(WarcItem::Skipped)) => agg.skip(),
            Ok(None) => break,
            Err(_) => {
                // Truncated or malformed record; the rest of this file is
                // unreadable.
                agg.skip();
                break;
            }
        }
    }
    Ok(())
}

fn ingest_manifest(
    manifest: &Path,
    rules: &SuffixRuleSet,
    agg: &mut EdgeAggregator,
) -> Result<(), ExtractError> {
    let file = fs::File::open(manifest).map_err(|source| ExtractError::Io {
        path: manifest.to_path_buf(),
        source,
    })?;
    let base = manifest.parent().unwrap_or(Path::new("."));
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|source| ExtractError::Io {
            path: manifest.to_path_buf(),
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let Some((url, rel)) = line.split_once('\t') else {
            return Err(ExtractError::BadManifestLine { line: idx + 1 });
        };
        let path = base.join(rel.trim());
        match fs::read(&path) {
            Ok(body) => match PageRecord::new(url.trim(), body, rules) {
                Some(page) => agg.add_page(&page, rules),
                None => agg.skip(),
            },
            Err(_) => agg.skip(),
        }
    }
    Ok(())
}

/// Writes the edge list as `site<TAB>third_party<TAB>page_count` rows,
/// sorted by (site, third_party) for byte-reproducible output.
pub fn write_edge_tsv<W: Write>(mut out: W, edges: &[EmbeddingEdge]) -> std::io::Result<()> {
    debug_assert!(edges.windows(2).all(|w| w[0] < w[1]), "edges must be sorted");
    for edge in edges {
        writeln!(out, "{}\t{}\t{}", edge.site, edge.third_party, edge.page_count)?;
    }
    Ok(())
}

/// Parses an edge TSV written by [`write_edge_tsv`].
pub fn read_edge_tsv<R: BufRead>(input: R) -> Result<Vec<EmbeddingEdge>, ExtractError> {
    let mut edges = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let line = line.map_err(|source| ExtractError::Io {
            path: PathBuf::from("<edge tsv>"),
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split('\t');
        let (Some(site), Some(tp), Some(count)) = (parts.next(), parts.next(), parts.next())
        else {
            return Err(ExtractError::BadEdgeLine { line: idx + 1 });
        };
        let page_count: u32 = count
            .trim()
            .parse()
            .map_err(|_| ExtractError::BadEdgeLine { line: idx + 1 })?;
        edges.push(EmbeddingEdge {
            site: PayLevelDomain::from_resolved(site),
            third_party: PayLevelDomain::from_resolved(tp),
            page_count,
        });
    }
    Ok(edges)
}
