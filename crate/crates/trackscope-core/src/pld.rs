//! Domain identities: URI canonicalization and pay-level-domain resolution.
//!
//! A pay-level domain (PLD) is the registrable unit directly below a public
//! suffix (`example.co.uk`, not `co.uk` and not `foo.example.co.uk`). Both
//! websites and third-parties are identified by their PLD everywhere else in
//! this crate, so everything funnels through [`canonicalize_uri`] and
//! [`SuffixRuleSet::resolve_pld`].

use std::collections::HashSet;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use url::{Host, Url};

/// Frozen public suffix snapshot shipped with the crate.
pub const BUNDLED_SUFFIX_LIST: &str = include_str!("../data/public_suffix_list.dat");

#[derive(Debug, Error)]
pub enum PldError {
    #[error("host {0:?} is a public suffix and has no registrable part")]
    NoRegistrablePart(String),
    #[error("host {0:?} has too few labels to resolve")]
    TooFewLabels(String),
    #[error("suffix list contains no rules")]
    EmptyRuleSet,
    #[error("exception rule {0:?} has no covering wildcard rule")]
    UncoveredException(String),
}

/// A canonical pay-level domain: lowercase ASCII host, no scheme, port,
/// path or trailing dot.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PayLevelDomain(String);

impl PayLevelDomain {
    /// Wraps an already-resolved PLD string without re-resolving it.
    /// Callers outside tests should go through [`SuffixRuleSet::resolve_pld`].
    pub fn from_resolved(name: impl Into<String>) -> Self {
        PayLevelDomain(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Final label of the PLD, i.e. its top-level domain.
    pub fn tld(&self) -> &str {
        self.0.rsplit('.').next().unwrap_or(&self.0)
    }
}

impl fmt::Display for PayLevelDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for PayLevelDomain {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// Where in the page a host candidate was found.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CandidateSource {
    ScriptSrc,
    IframeSrc,
    LinkRef,
    ImageSrc,
    JsLiteral,
}

impl fmt::Display for CandidateSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CandidateSource::ScriptSrc => "script_src",
            CandidateSource::IframeSrc => "iframe_src",
            CandidateSource::LinkRef => "link_ref",
            CandidateSource::ImageSrc => "image_src",
            CandidateSource::JsLiteral => "js_literal",
        };
        f.write_str(s)
    }
}

/// A raw host reference as found in markup or script, before
/// canonicalization and PLD resolution.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HostCandidate {
    pub raw: String,
    pub source: CandidateSource,
}

impl HostCandidate {
    pub fn new(raw: impl Into<String>, source: CandidateSource) -> Self {
        HostCandidate {
            raw: raw.into(),
            source,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RuleKind {
    Normal,
    Wildcard,
    Exception,
}

#[derive(Debug, Clone)]
struct SuffixRule {
    /// Labels in reverse order (TLD first), so matching walks host labels
    /// right to left.
    labels: Vec<String>,
    kind: RuleKind,
}

/// Parsed public-suffix rules with deterministic longest-match lookup.
///
/// Immutable after load; share freely across threads.
#[derive(Debug)]
pub struct SuffixRuleSet {
    rules: Vec<SuffixRule>,
}

impl SuffixRuleSet {
    /// Parses the Mozilla public-suffix-list text format: one rule per
    /// line, `//` comments, blank lines ignored, `*` wildcard labels and
    /// `!` exception prefixes.
    pub fn parse(text: &str) -> Result<Self, PldError> {
        let mut rules = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with("//") {
                continue;
            }
            // A rule ends at the first whitespace.
            let token = line.split_whitespace().next().unwrap_or("");
            if token.is_empty() {
                continue;
            }
            let (kind, body) = match token.strip_prefix('!') {
                Some(rest) => (RuleKind::Exception, rest),
                None => {
                    if token.split('.').any(|l| l == "*") {
                        (RuleKind::Wildcard, token)
                    } else {
                        (RuleKind::Normal, token)
                    }
                }
            };
            let mut labels: Vec<String> = body
                .trim_matches('.')
                .split('.')
                .map(|l| l.to_ascii_lowercase())
                .collect();
            if labels.iter().any(|l| l.is_empty()) {
                continue;
            }
            labels.reverse();
            rules.push(SuffixRule { labels, kind });
        }
        if rules.is_empty() {
            return Err(PldError::EmptyRuleSet);
        }
        let set = SuffixRuleSet { rules };
        set.check_exception_coverage()?;
        Ok(set)
    }

    /// Bundled frozen snapshot, parsed once.
    pub fn bundled() -> &'static SuffixRuleSet {
        static BUNDLED: OnceLock<SuffixRuleSet> = OnceLock::new();
        BUNDLED.get_or_init(|| {
            SuffixRuleSet::parse(BUNDLED_SUFFIX_LIST).expect("bundled suffix list parses")
        })
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Every exception rule must sit under a wildcard rule covering the
    /// same position, otherwise the list is malformed.
    fn check_exception_coverage(&self) -> Result<(), PldError> {
        let wildcards: HashSet<Vec<&str>> = self
            .rules
            .iter()
            .filter(|r| r.kind == RuleKind::Wildcard)
            .map(|r| r.labels.iter().map(String::as_str).collect())
            .collect();
        for rule in self.rules.iter().filter(|r| r.kind == RuleKind::Exception) {
            let mut covering: Vec<&str> = rule.labels.iter().map(String::as_str).collect();
            if let Some(last) = covering.last_mut() {
                *last = "*";
            }
            if !wildcards.contains(&covering) {
                let mut labels: Vec<&str> = rule.labels.iter().map(String::as_str).collect();
                labels.reverse();
                return Err(PldError::UncoveredException(labels.join(".")));
            }
        }
        Ok(())
    }

    /// Number of labels of the public suffix matched by `host_labels`
    /// (reverse order, TLD first). Exceptions beat wildcards, longest
    /// match wins; with no explicit match the implicit `*` rule applies.
    fn suffix_len(&self, host_labels: &[&str]) -> usize {
        let mut best_normal_or_wildcard = 0usize;
        let mut best_exception: Option<usize> = None;
        'rules: for rule in &self.rules {
            if rule.labels.len() > host_labels.len() {
                continue;
            }
            for (rule_label, host_label) in rule.labels.iter().zip(host_labels.iter()) {
                if rule_label != "*" && rule_label != host_label {
                    continue 'rules;
                }
            }
            match rule.kind {
                RuleKind::Exception => {
                    // The exception's suffix is the rule minus its leftmost label.
                    let len = rule.labels.len() - 1;
                    best_exception = Some(best_exception.map_or(len, |b| b.max(len)));
                }
                RuleKind::Normal | RuleKind::Wildcard => {
                    best_normal_or_wildcard = best_normal_or_wildcard.max(rule.labels.len());
                }
            }
        }
        if let Some(len) = best_exception {
            return len;
        }
        // Implicit "*" rule: the bare TLD is the suffix.
        best_normal_or_wildcard.max(1)
    }

    /// Resolves a canonical host to its pay-level domain: the matching
    /// public suffix plus exactly one more label.
    pub fn resolve_pld(&self, host: &str) -> Result<PayLevelDomain, PldError> {
        let host = host.trim_end_matches('.');
        if host.is_empty() {
            return Err(PldError::TooFewLabels(host.to_string()));
        }
        let lower = host.to_ascii_lowercase();
        let labels: Vec<&str> = lower.split('.').collect();
        if labels.iter().any(|l| l.is_empty()) {
            return Err(PldError::TooFewLabels(lower));
        }
        let mut reversed: Vec<&str> = labels.clone();
        reversed.reverse();
        let suffix_len = self.suffix_len(&reversed);
        if labels.len() < suffix_len + 1 {
            if labels.len() == suffix_len {
                return Err(PldError::NoRegistrablePart(lower));
            }
            return Err(PldError::TooFewLabels(lower));
        }
        let pld_labels = &labels[labels.len() - suffix_len - 1..];
        Ok(PayLevelDomain(pld_labels.join(".")))
    }
}

/// Extracts the canonical lowercased host from a raw URI reference.
///
/// Accepts absolute URIs, protocol-relative references (`//host/...`) and
/// bare hosts followed by a path. Relative paths, schemes without a host
/// (`data:`, `javascript:`, `mailto:`), IP-address hosts and hosts without
/// a dot all yield `None`; this function never fails.
pub fn canonicalize_uri(raw: &str) -> Option<String> {
    let trimmed = raw.trim();
    if trimmed.is_empty() {
        return None;
    }

    let url = if let Some(rest) = trimmed.strip_prefix("//") {
        if rest.is_empty() {
            return None;
        }
        Url::parse(&format!("http://{rest}")).ok()?
    } else if has_scheme(trimmed) {
        Url::parse(trimmed).ok()?
    } else {
        // Bare host followed by a path. Without a slash the reference is
        // ambiguous with a relative filename and is treated as relative.
        let head = trimmed.split('/').next()?;
        if trimmed.len() == head.len() || !looks_like_host(head) {
            return None;
        }
        Url::parse(&format!("http://{trimmed}")).ok()?
    };

    host_from_url(&url)
}

fn has_scheme(s: &str) -> bool {
    let Some(colon) = s.find(':') else {
        return false;
    };
    let scheme = &s[..colon];
    let mut chars = scheme.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'))
}

/// Quick shape check for the authority part of a schemeless reference:
/// must contain a dot and only host-ish characters (userinfo/port allowed,
/// the URL parser strips them).
fn looks_like_host(head: &str) -> bool {
    let after_userinfo = head.rsplit('@').next().unwrap_or(head);
    let hostpart = after_userinfo.split(':').next().unwrap_or(after_userinfo);
    !hostpart.is_empty()
        && hostpart.contains('.')
        && hostpart
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '.' | '-' | '_'))
}

fn host_from_url(url: &Url) -> Option<String> {
    let host = match url.host()? {
        Host::Domain(d) => d.to_string(),
        // The unit of analysis is the pay-level domain; IP literals are out.
        Host::Ipv4(_) | Host::Ipv6(_) => return None,
    };
    let host = host.trim_matches('.').to_ascii_lowercase();
    if host.is_empty() || !host.contains('.') {
        return None;
    }
    // Non-special schemes skip the parser's IP detection.
    if host.parse::<std::net::Ipv4Addr>().is_ok() {
        return None;
    }
    // Unicode hosts are re-run through an http URL so idna produces the
    // punycode spelling; anything still non-ASCII is dropped.
    if !host.is_ascii() {
        let reparsed = Url::parse(&format!("http://{host}/")).ok()?;
        return match reparsed.host()? {
            Host::Domain(d) if d.is_ascii() && d.contains('.') => {
                Some(d.trim_matches('.').to_ascii_lowercase())
            }
            _ => None,
        };
    }
    Some(host)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rules() -> &'static SuffixRuleSet {
        SuffixRuleSet::bundled()
    }

    #[test]
    fn canonicalize_absolute_uri() {
        assert_eq!(
            canonicalize_uri("http://b.scorecardresearch.com/beacon.js").as_deref(),
            Some("b.scorecardresearch.com")
        );
    }

    #[test]
    fn canonicalize_relative_path_has_no_host() {
        assert_eq!(canonicalize_uri("style.css"), None);
        assert_eq!(canonicalize_uri("img/logo.png"), None);
        assert_eq!(canonicalize_uri("../x/y.html"), None);
    }

    #[test]
    fn canonicalize_protocol_relative() {
        assert_eq!(
            canonicalize_uri("//cdn.example.net:8080/x.png?v=1").as_deref(),
            Some("cdn.example.net")
        );
    }

    #[test]
    fn canonicalize_rejects_hostless_schemes() {
        assert_eq!(canonicalize_uri("data:image/png;base64,AAAA"), None);
        assert_eq!(canonicalize_uri("javascript:void(0)"), None);
        assert_eq!(canonicalize_uri("mailto:a@b.com"), None);
    }

    #[test]
    fn canonicalize_rejects_ip_hosts() {
        assert_eq!(canonicalize_uri("http://192.168.0.1/x.js"), None);
        assert_eq!(canonicalize_uri("http://[2001:db8::1]/x.js"), None);
    }

    #[test]
    fn canonicalize_rejects_dotless_hosts() {
        assert_eq!(canonicalize_uri("http://localhost/x.js"), None);
    }

    #[test]
    fn canonicalize_strips_port_credentials_and_case() {
        assert_eq!(
            canonicalize_uri("HTTPS://user:pw@CDN.Example.COM:443/a?b#c").as_deref(),
            Some("cdn.example.com")
        );
    }

    #[test]
    fn canonicalize_strips_trailing_dot() {
        assert_eq!(
            canonicalize_uri("http://example.com./x").as_deref(),
            Some("example.com")
        );
    }

    #[test]
    fn canonicalize_bare_host_with_path() {
        assert_eq!(
            canonicalize_uri("cdn.assets.org/pixel.gif").as_deref(),
            Some("cdn.assets.org")
        );
        // No path: ambiguous with a relative filename.
        assert_eq!(canonicalize_uri("cdn.assets.org"), None);
    }

    #[test]
    fn canonicalize_unicode_host_becomes_punycode() {
        assert_eq!(
            canonicalize_uri("http://bücher.example/x").as_deref(),
            Some("xn--bcher-kva.example")
        );
    }

    #[test]
    fn resolve_plain_com() {
        assert_eq!(
            rules().resolve_pld("www.google-analytics.com").unwrap().as_str(),
            "google-analytics.com"
        );
        assert_eq!(
            rules().resolve_pld("example.com").unwrap().as_str(),
            "example.com"
        );
    }

    #[test]
    fn resolve_multi_label_suffix() {
        assert_eq!(
            rules().resolve_pld("foo.bar.co.uk").unwrap().as_str(),
            "bar.co.uk"
        );
    }

    #[test]
    fn resolve_wildcard_and_exception() {
        // *.ck makes foo.ck a suffix, so www.foo.ck registers under it.
        assert_eq!(
            rules().resolve_pld("www.foo.ck").unwrap().as_str(),
            "www.foo.ck"
        );
        // !www.ck carves www.ck back out as registrable.
        assert_eq!(rules().resolve_pld("www.ck").unwrap().as_str(), "www.ck");
        assert_eq!(
            rules().resolve_pld("sub.www.ck").unwrap().as_str(),
            "www.ck"
        );
        assert!(matches!(
            rules().resolve_pld("foo.ck"),
            Err(PldError::NoRegistrablePart(_))
        ));
    }

    #[test]
    fn resolve_rejects_bare_suffix() {
        assert!(matches!(
            rules().resolve_pld("com"),
            Err(PldError::NoRegistrablePart(_))
        ));
        assert!(matches!(
            rules().resolve_pld("co.uk"),
            Err(PldError::NoRegistrablePart(_))
        ));
    }

    #[test]
    fn resolve_unknown_tld_uses_implicit_rule() {
        assert_eq!(
            rules().resolve_pld("a.b.zzzunknown").unwrap().as_str(),
            "b.zzzunknown"
        );
        assert!(matches!(
            rules().resolve_pld("zzzunknown"),
            Err(PldError::NoRegistrablePart(_))
        ));
    }

    #[test]
    fn resolve_is_idempotent() {
        for host in ["www.example.com", "a.b.c.bar.co.uk", "x.city.kobe.jp"] {
            let once = rules().resolve_pld(host).unwrap();
            let twice = rules().resolve_pld(once.as_str()).unwrap();
            assert_eq!(once, twice, "idempotence for {host}");
        }
    }

    #[test]
    fn exception_requires_wildcard() {
        let err = SuffixRuleSet::parse("!city.example\n").unwrap_err();
        assert!(matches!(err, PldError::UncoveredException(_)));
    }

    #[test]
    fn empty_list_is_an_error() {
        assert!(matches!(
            SuffixRuleSet::parse("// only comments\n\n"),
            Err(PldError::EmptyRuleSet)
        ));
    }

    #[test]
    fn tld_of_pld() {
        let pld = rules().resolve_pld("foo.bar.co.uk").unwrap();
        assert_eq!(pld.tld(), "uk");
    }
}
