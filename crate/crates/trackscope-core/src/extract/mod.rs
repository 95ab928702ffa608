//! Third-party embedding extraction from archived HTML pages.
//!
//! A page contributes an embedding for every distinct third-party PLD it
//! references via `script`/`iframe`/`img` `src`, `link` `src`/`href`, or a
//! URI-shaped string literal in inline JavaScript. Per-site aggregation of
//! those embeddings produces the edge list of the bipartite third-party
//! network.

pub mod corpus;
pub mod html;
pub mod js;
pub mod warc;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::pld::{canonicalize_uri, CandidateSource, HostCandidate, PayLevelDomain, SuffixRuleSet};

pub use corpus::{ingest_corpus, read_edge_tsv, write_edge_tsv, CorpusExtraction, CorpusSource, ExtractError, IngestStats};

/// An archived page: its URL, raw HTML payload and the site PLD the URL
/// resolves to.
#[derive(Debug, Clone)]
pub struct PageRecord {
    pub url: String,
    pub body: Vec<u8>,
    pub site_pld: PayLevelDomain,
}

impl PageRecord {
    /// Builds a record from a URL and payload; `None` when the URL has no
    /// resolvable PLD (such pages cannot appear in the bipartite network).
    pub fn new(url: impl Into<String>, body: Vec<u8>, rules: &SuffixRuleSet) -> Option<Self> {
        let url = url.into();
        let host = canonicalize_uri(&url)?;
        let site_pld = rules.resolve_pld(&host).ok()?;
        Some(PageRecord { url, body, site_pld })
    }
}

/// One edge of the bipartite third-party network: `third_party` was seen
/// on `page_count` distinct pages of `site`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EmbeddingEdge {
    pub site: PayLevelDomain,
    pub third_party: PayLevelDomain,
    pub page_count: u32,
}

/// Collects host candidates from the embedding elements of an HTML
/// payload: `src` of `script`/`iframe`/`img`, `src` and `href` of `link`,
/// plus URI-shaped string literals in inline script bodies. Undecodable
/// bytes degrade to lossy text, never to failure.
pub fn extract_embedded_hosts(html_bytes: &[u8]) -> BTreeSet<HostCandidate> {
    let text = String::from_utf8_lossy(html_bytes);
    let mut candidates = BTreeSet::new();
    for tag in html::scan_tags(&text) {
        let mut push = |attr: &str, source: CandidateSource| {
            if let Some(value) = tag.attr(attr) {
                let value = value.trim();
                if !value.is_empty() {
                    candidates.insert(HostCandidate::new(value, source));
                }
            }
        };
        match tag.name.as_str() {
            "script" => push("src", CandidateSource::ScriptSrc),
            "iframe" => push("src", CandidateSource::IframeSrc),
            "img" | "image" => push("src", CandidateSource::ImageSrc),
            "link" => {
                push("src", CandidateSource::LinkRef);
                push("href", CandidateSource::LinkRef);
            }
            _ => {}
        }
        if let Some(body) = &tag.inline_body {
            candidates.extend(extract_js_uri_literals(body));
        }
    }
    candidates
}

/// Scans JavaScript source for string literals matching the URI pattern.
/// See [`js::uri_literal_pattern`] for the exact shape.
pub fn extract_js_uri_literals(source: &str) -> BTreeSet<HostCandidate> {
    js::scan_uri_literals(source)
        .into_iter()
        .map(|lit| HostCandidate::new(lit, CandidateSource::JsLiteral))
        .collect()
}

/// Resolves a page's candidates to third-party PLDs: candidates that do
/// not canonicalize or resolve are dropped, and so is the page's own PLD
/// (first-party content is not an embedding).
pub fn extract_page(page: &PageRecord, rules: &SuffixRuleSet) -> BTreeSet<PayLevelDomain> {
    extract_embedded_hosts(&page.body)
        .into_iter()
        .filter_map(|cand| {
            let host = canonicalize_uri(&cand.raw)?;
            rules.resolve_pld(&host).ok()
        })
        .filter(|pld| *pld != page.site_pld)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rules() -> &'static SuffixRuleSet {
        SuffixRuleSet::bundled()
    }

    fn page(url: &str, body: &str) -> PageRecord {
        PageRecord::new(url, body.as_bytes().to_vec(), rules()).unwrap()
    }

    #[test]
    fn script_src_candidate() {
        let got = extract_embedded_hosts(
            br#"<script src="http://b.scorecardresearch.com/beacon.js"></script>"#,
        );
        assert_eq!(
            got.into_iter().collect::<Vec<_>>(),
            vec![HostCandidate::new(
                "http://b.scorecardresearch.com/beacon.js",
                CandidateSource::ScriptSrc
            )]
        );
    }

    #[test]
    fn plain_markup_yields_nothing() {
        assert!(extract_embedded_hosts(b"<p>hello</p>").is_empty());
    }

    #[test]
    fn img_and_link_sources() {
        let got = extract_embedded_hosts(
            br#"<img src=//cdn.a.org/i.png><link href="https://f.b.net/c.css">"#,
        );
        let got: Vec<_> = got.into_iter().collect();
        assert_eq!(
            got,
            vec![
                HostCandidate::new("//cdn.a.org/i.png", CandidateSource::ImageSrc),
                HostCandidate::new("https://f.b.net/c.css", CandidateSource::LinkRef),
            ]
        );
    }

    #[test]
    fn paper_document_write_snippet_recovers_tracker() {
        let body = concat!(
            "<script type=\"text/javascript\">document.write(\n",
            "unescape(\"%3Cscript src='\" +\n",
            "(document.location.protocol == \"https:\" ?\n",
            "\"https://sb\" : \"http://b\") +\n",
            "\".scorecardresearch.com/beacon.js' %3E%3C/script%3E\"));\n",
            "</script>"
        );
        let page = page("http://publisher.example.com/index.html", body);
        let plds = extract_page(&page, rules());
        assert_eq!(
            plds.into_iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            vec!["scorecardresearch.com"]
        );
    }

    #[test]
    fn first_party_embeddings_are_dropped() {
        let page = page(
            "http://news.example.com/a",
            r#"<img src="http://static.example.com/logo.png">"#,
        );
        assert!(extract_page(&page, rules()).is_empty());
    }

    #[test]
    fn hosts_collapse_to_distinct_plds() {
        let page = page(
            "http://site.example.org/",
            concat!(
                r#"<script src="http://js.tracker-one.com/a.js"></script>"#,
                r#"<img src="http://px.tracker-one.com/p.gif">"#,
                r#"<iframe src="https://widgets.tracker-two.net/f">"#,
            ),
        );
        let plds: Vec<String> = extract_page(&page, rules())
            .into_iter()
            .map(|p| p.to_string())
            .collect();
        assert_eq!(plds, vec!["tracker-one.com", "tracker-two.net"]);
    }

    #[test]
    fn page_with_unresolvable_url_is_rejected() {
        assert!(PageRecord::new("not a url", Vec::new(), rules()).is_none());
        assert!(PageRecord::new("http://192.168.0.1/x", Vec::new(), rules()).is_none());
    }

    #[test]
    fn invalid_utf8_degrades_gracefully() {
        let mut body = b"<img src=\"http://t.example.net/p.gif\">".to_vec();
        body.extend([0xff, 0xfe, 0x80]);
        let got = extract_embedded_hosts(&body);
        assert_eq!(got.len(), 1);
    }
}
