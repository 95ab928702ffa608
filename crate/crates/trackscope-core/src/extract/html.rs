//! Lenient, error-recovering HTML tag scanner.
//!
//! This is not a conforming HTML parser; it is a single-pass scanner that
//! finds the embedding elements the extraction cares about (`script`,
//! `iframe`, `img`/`image`, `link`) and captures inline script bodies.
//! Malformed markup never fails, it just yields fewer candidates.

/// One tag of interest found in the document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScannedTag {
    pub name: String,
    /// Lowercased attribute names with raw (undecoded) values.
    pub attrs: Vec<(String, String)>,
    /// Raw text content up to the matching closer, captured only for
    /// `script` elements.
    pub inline_body: Option<String>,
}

impl ScannedTag {
    pub fn attr(&self, name: &str) -> Option<&str> {
        self.attrs
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_str())
    }
}

const INTERESTING: [&str; 5] = ["script", "iframe", "img", "image", "link"];

/// Scans `html` and returns the interesting tags in document order.
pub fn scan_tags(html: &str) -> Vec<ScannedTag> {
    let bytes = html.as_bytes();
    let mut tags = Vec::new();
    let mut i = 0usize;

    while let Some(off) = find_byte(bytes, i, b'<') {
        i = off + 1;
        if i >= bytes.len() {
            break;
        }
        match bytes[i] {
            b'!' => {
                // Comment, doctype or CDATA: skip wholesale.
                if bytes[i..].starts_with(b"!--") {
                    i = match find_sub(bytes, i, b"-->") {
                        Some(p) => p + 3,
                        None => bytes.len(),
                    };
                } else {
                    i = match find_byte(bytes, i, b'>') {
                        Some(p) => p + 1,
                        None => bytes.len(),
                    };
                }
            }
            b'/' => {
                // Closing tag.
                i = match find_byte(bytes, i, b'>') {
                    Some(p) => p + 1,
                    None => bytes.len(),
                };
            }
            b'?' => {
                // Processing instruction.
                i = match find_byte(bytes, i, b'>') {
                    Some(p) => p + 1,
                    None => bytes.len(),
                };
            }
            c if c.is_ascii_alphabetic() => {
                let (tag, next) = parse_tag(html, i);
                i = next;
                if let Some(mut tag) = tag {
                    let is_raw_text = tag.name == "script" || tag.name == "style";
                    if is_raw_text && !tag_self_closes(&tag) {
                        let closer = format!("</{}", tag.name);
                        let (body, after) = capture_raw_text(html, i, &closer);
                        if tag.name == "script" && !body.trim().is_empty() {
                            tag.inline_body = Some(body);
                        }
                        i = after;
                    }
                    if INTERESTING.contains(&tag.name.as_str()) {
                        tags.push(tag);
                    }
                }
            }
            _ => {
                // Stray '<' in text; keep scanning.
            }
        }
    }
    tags
}

fn tag_self_closes(tag: &ScannedTag) -> bool {
    tag.attrs.iter().any(|(n, _)| n == "/")
}

fn find_byte(bytes: &[u8], from: usize, needle: u8) -> Option<usize> {
    bytes[from.min(bytes.len())..]
        .iter()
        .position(|&b| b == needle)
        .map(|p| from + p)
}

fn find_sub(bytes: &[u8], from: usize, needle: &[u8]) -> Option<usize> {
    if from >= bytes.len() {
        return None;
    }
    bytes[from..]
        .windows(needle.len())
        .position(|w| w == needle)
        .map(|p| from + p)
}

/// Parses a tag starting at the first name byte. Returns the tag (None if
/// it was malformed beyond use) and the offset just past the closing '>'.
fn parse_tag(html: &str, start: usize) -> (Option<ScannedTag>, usize) {
    let bytes = html.as_bytes();
    let mut i = start;
    while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'-') {
        i += 1;
    }
    let name = html[start..i].to_ascii_lowercase();

    let mut attrs = Vec::new();
    loop {
        while i < bytes.len() && bytes[i].is_ascii_whitespace() {
            i += 1;
        }
        if i >= bytes.len() {
            return (None, i);
        }
        match bytes[i] {
            b'>' => {
                i += 1;
                break;
            }
            b'/' => {
                attrs.push(("/".to_string(), String::new()));
                i += 1;
            }
            _ => {
                let attr_start = i;
                while i < bytes.len()
                    && !bytes[i].is_ascii_whitespace()
                    && !matches!(bytes[i], b'=' | b'>' | b'/')
                {
                    i += 1;
                }
                if i == attr_start {
                    i += 1;
                    continue;
                }
                let attr_name = html[attr_start..i].to_ascii_lowercase();
                while i < bytes.len() && bytes[i].is_ascii_whitespace() {
                    i += 1;
                }
                let mut value = String::new();
                if i < bytes.len() && bytes[i] == b'=' {
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_whitespace() {
                        i += 1;
                    }
                    if i < bytes.len() && (bytes[i] == b'"' || bytes[i] == b'\'') {
                        let quote = bytes[i];
                        i += 1;
                        let vstart = i;
                        while i < bytes.len() && bytes[i] != quote {
                            i += 1;
                        }
                        value = html[vstart..i.min(bytes.len())].to_string();
                        if i < bytes.len() {
                            i += 1; // closing quote
                        }
                    } else {
                        let vstart = i;
                        while i < bytes.len()
                            && !bytes[i].is_ascii_whitespace()
                            && bytes[i] != b'>'
                        {
                            i += 1;
                        }
                        value = html[vstart..i].to_string();
                    }
                }
                attrs.push((attr_name, value));
            }
        }
    }
    (
        Some(ScannedTag {
            name,
            attrs,
            inline_body: None,
        }),
        i,
    )
}

/// Captures raw text content up to a case-insensitive closer like
/// `</script`. Returns the body and the offset past the closer's '>'.
fn capture_raw_text(html: &str, start: usize, closer: &str) -> (String, usize) {
    let lower = html.as_bytes();
    let needle = closer.as_bytes();
    let mut i = start;
    while i + needle.len() <= lower.len() {
        if lower[i..i + needle.len()].eq_ignore_ascii_case(needle) {
            let body = html[start..i].to_string();
            let after = match find_byte(lower, i, b'>') {
                Some(p) => p + 1,
                None => lower.len(),
            };
            return (body, after);
        }
        i += 1;
    }
    (html[start..].to_string(), html.len())
}
