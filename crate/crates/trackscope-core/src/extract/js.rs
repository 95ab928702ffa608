//! JavaScript string-literal scanning.
//!
//! Scripts are tokenized (comments, string/template/regex literals) and
//! every string literal is tested against a URI pattern; matching literals
//! become host candidates. No code is ever evaluated, so literals are
//! considered one by one even when the script concatenates them at runtime.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use regex::Regex;

/// Bounds on the final host label. Together with the `≥ 2 labels` shape in
/// [`uri_literal_pattern`] these define what counts as a URI-like literal;
/// this is the single knob with the largest effect on extraction recall.
pub const FINAL_LABEL_MIN_LEN: usize = 2;
pub const FINAL_LABEL_MAX_LEN: usize = 24;

/// Pattern a string literal must match to be taken as a URI reference: an
/// optional `scheme://`, bare `//` or leading dot, then two or more
/// dot-separated labels with an alphabetic final label, then optionally a
/// port and a path.
pub fn uri_literal_pattern() -> &'static Regex {
    static PATTERN: OnceLock<Regex> = OnceLock::new();
    PATTERN.get_or_init(|| {
        let re = format!(
            r"(?s)^(?:(?:[A-Za-z][A-Za-z0-9+.-]*:)?//|\.+)?(?:[A-Za-z0-9](?:[A-Za-z0-9_-]*[A-Za-z0-9])?\.)+[A-Za-z]{{{min},{max}}}(?::\d{{1,5}})?(?:[/?#].*)?$",
            min = FINAL_LABEL_MIN_LEN,
            max = FINAL_LABEL_MAX_LEN
        );
        Regex::new(&re).expect("URI literal pattern compiles")
    })
}

/// Collects the string literals of `source` that match the URI pattern,
/// with leading dots stripped. Never fails: scripts that confuse the
/// tokenizer additionally go through a naive quote-span scan.
pub fn scan_uri_literals(source: &str) -> BTreeSet<String> {
    let (literals, clean) = tokenize_literals(source);
    let mut out: BTreeSet<String> = literals
        .iter()
        .filter_map(|lit| match_uri_literal(lit))
        .collect();
    if !clean {
        for lit in fallback_quote_spans(source) {
            if let Some(m) = match_uri_literal(&lit) {
                out.insert(m);
            }
        }
    }
    out
}

fn match_uri_literal(literal: &str) -> Option<String> {
    let trimmed = literal.trim();
    if uri_literal_pattern().is_match(trimmed) {
        Some(trimmed.trim_start_matches('.').to_string())
    } else {
        None
    }
}

/// Tokenizes enough of JavaScript to pull out string literals: line and
/// block comments, single/double-quoted strings, template literals and a
/// regex-literal heuristic so quotes inside regexes do not derail the scan.
/// Returns the literals and whether the scan ended cleanly.
fn tokenize_literals(source: &str) -> (Vec<String>, bool) {
    let bytes = source.as_bytes();
    let mut literals = Vec::new();
    let mut clean = true;
    let mut i = 0usize;
    // Last significant byte before position i, used to decide whether '/'
    // starts a regex literal or is a division operator.
    let mut prev: Option<u8> = None;

    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b'/' if i + 1 < bytes.len() && bytes[i + 1] == b'/' => {
                i = memchr_from(bytes, i, b'\n').unwrap_or(bytes.len());
            }
            b'/' if i + 1 < bytes.len() && bytes[i + 1] == b'*' => {
                match find_sub(bytes, i + 2, b"*/") {
                    Some(p) => i = p + 2,
                    None => {
                        clean = false;
                        i = bytes.len();
                    }
                }
            }
            b'\'' | b'"' => {
                let (lit, next, terminated) = read_quoted(source, i, b);
                literals.push(lit);
                if !terminated {
                    clean = false;
                }
                i = next;
                prev = Some(b'"');
            }
            b'`' => {
                let (parts, next, terminated) = read_template(source, i);
                literals.extend(parts);
                if !terminated {
                    clean = false;
                }
                i = next;
                prev = Some(b'"');
            }
            b'/' => {
                if regex_can_start(prev) {
                    let (next, terminated) = skip_regex(bytes, i);
                    if !terminated {
                        clean = false;
                    }
                    i = next;
                    prev = Some(b')');
                } else {
                    prev = Some(b'/');
                    i += 1;
                }
            }
            _ => {
                if !b.is_ascii_whitespace() {
                    prev = Some(b);
                }
                i += 1;
            }
        }
    }
    (literals, clean)
}

fn regex_can_start(prev: Option<u8>) -> bool {
    match prev {
        None => true,
        Some(p) => !(p.is_ascii_alphanumeric() || matches!(p, b')' | b']' | b'"' | b'.' | b'_')),
    }
}

/// Reads a quoted string starting at the opening quote, decoding standard
/// escape sequences. Returns (content, offset past closer, terminated).
fn read_quoted(source: &str, start: usize, quote: u8) -> (String, usize, bool) {
    let bytes = source.as_bytes();
    let mut out = String::new();
    let mut i = start + 1;
    while i < bytes.len() {
        match bytes[i] {
            b'\\' => {
                let (decoded, next) = decode_escape(source, i);
                if let Some(c) = decoded {
                    out.push(c);
                }
                i = next;
            }
            b if b == quote => return (out, i + 1, true),
            b'\n' => {
                // Unescaped newline terminates a (broken) string literal.
                return (out, i + 1, false);
            }
            _ => {
                let ch_len = utf8_len(bytes[i]);
                out.push_str(&source[i..(i + ch_len).min(source.len())]);
                i += ch_len;
            }
        }
    }
    (out, i, false)
}

/// Reads a template literal, returning its static text chunks (the pieces
/// between `${...}` holes).
fn read_template(source: &str, start: usize) -> (Vec<String>, usize, bool) {
    let bytes = source.as_bytes();
    let mut parts = Vec::new();
    let mut current = String::new();
    let mut i = start + 1;
    while i < bytes.len() {
        match bytes[i] {
            b'\\' => {
                let (decoded, next) = decode_escape(source, i);
                if let Some(c) = decoded {
                    current.push(c);
                }
                i = next;
            }
            b'`' => {
                parts.push(std::mem::take(&mut current));
                return (parts, i + 1, true);
            }
            b'$' if i + 1 < bytes.len() && bytes[i + 1] == b'{' => {
                parts.push(std::mem::take(&mut current));
                // Skip the interpolation hole (no nesting support; the
                // fallback scan covers pathological cases).
                i = memchr_from(bytes, i + 2, b'}').map_or(bytes.len(), |p| p + 1);
            }
            _ => {
                let ch_len = utf8_len(bytes[i]);
                current.push_str(&source[i..(i + ch_len).min(source.len())]);
                i += ch_len;
            }
        }
    }
    parts.push(current);
    (parts, i, false)
}

/// Decodes one backslash escape starting at the backslash. Returns the
/// decoded char (None when the escape only affects syntax, e.g. a line
/// continuation) and the offset past the escape.
fn decode_escape(source: &str, start: usize) -> (Option<char>, usize) {
    let bytes = source.as_bytes();
    let Some(&code) = bytes.get(start + 1) else {
        return (None, start + 1);
    };
    match code {
        b'n' => (Some('\n'), start + 2),
        b't' => (Some('\t'), start + 2),
        b'r' => (Some('\r'), start + 2),
        b'b' => (Some('\u{8}'), start + 2),
        b'f' => (Some('\u{c}'), start + 2),
        b'v' => (Some('\u{b}'), start + 2),
        b'0' => (Some('\0'), start + 2),
        b'\n' => (None, start + 2),
        b'x' => {
            let hex = source.get(start + 2..start + 4);
            match hex.and_then(|h| u32::from_str_radix(h, 16).ok()) {
                Some(v) => (char::from_u32(v), start + 4),
                None => (None, start + 2),
            }
        }
        b'u' => {
            if bytes.get(start + 2) == Some(&b'{') {
                let end = memchr_from(bytes, start + 3, b'}').unwrap_or(source.len());
                let v = source
                    .get(start + 3..end)
                    .and_then(|h| u32::from_str_radix(h, 16).ok());
                (v.and_then(char::from_u32), (end + 1).min(source.len()))
            } else {
                let hex = source.get(start + 2..start + 6);
                match hex.and_then(|h| u32::from_str_radix(h, 16).ok()) {
                    Some(v) => (char::from_u32(v), start + 6),
                    None => (None, start + 2),
                }
            }
        }
        _ => {
            let ch_len = utf8_len(code);
            let end = (start + 1 + ch_len).min(source.len());
            (source[start + 1..end].chars().next(), end)
        }
    }
}

/// Skips a regex literal starting at '/'. Character classes may contain
/// an unescaped '/'.
fn skip_regex(bytes: &[u8], start: usize) -> (usize, bool) {
    let mut i = start + 1;
    let mut in_class = false;
    while i < bytes.len() {
        match bytes[i] {
            b'\\' => i += 2,
            b'[' => {
                in_class = true;
                i += 1;
            }
            b']' => {
                in_class = false;
                i += 1;
            }
            b'/' if !in_class => return (i + 1, true),
            b'\n' => return (i + 1, false),
            _ => i += 1,
        }
    }
    (i, false)
}

/// Last-resort literal scan: raw spans between matching quote characters,
/// no escape handling.
fn fallback_quote_spans(source: &str) -> Vec<String> {
    let mut out = Vec::new();
    for quote in ['\'', '"'] {
        let mut rest = source;
        while let Some(open) = rest.find(quote) {
            let tail = &rest[open + 1..];
            match tail.find(quote) {
                Some(close) => {
                    out.push(tail[..close].to_string());
                    rest = &tail[close + 1..];
                }
                None => break,
            }
        }
    }
    out
}

fn memchr_from(bytes: &[u8], from: usize, needle: u8) -> Option<usize> {
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

fn utf8_len(first: u8) -> usize {
    match first {
        b if b < 0x80 => 1,
        b if b >> 5 == 0b110 => 2,
        b if b >> 4 == 0b1110 => 3,
        _ => 4,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scan(source: &str) -> Vec<String> {
        scan_uri_literals(source).into_iter().collect()
    }

    #[test]
    fn plain_url_literal() {
        assert_eq!(
            scan(r#"var u = "https://tracker.example.org/p.gif";"#),
            vec!["https://tracker.example.org/p.gif"]
        );
    }

    #[test]
    fn no_literals_no_candidates() {
        assert!(scan("var x = 5;").is_empty());
    }

    #[test]
    fn leading_dot_literal_is_stripped() {
        assert_eq!(
            scan(r#"s.src = ".scorecardresearch.com/beacon.js";"#),
            vec!["scorecardresearch.com/beacon.js"]
        );
    }

    #[test]
    fn scheme_fragments_do_not_match() {
        assert!(scan(r#"var p = (x ? "https://sb" : "http://b");"#).is_empty());
    }

    #[test]
    fn version_strings_do_not_match() {
        assert!(scan(r#"var v = "1.2.3"; var w = "lib-2.10.4";"#).is_empty());
    }

    #[test]
    fn comments_are_ignored() {
        assert!(scan("// \"http://a.example.com/x\"\n/* 'http://b.example.com/y' */").is_empty());
    }

    #[test]
    fn regex_literal_does_not_derail() {
        assert_eq!(
            scan(r#"var re = /["']/; var u = "http://r.example.net/x";"#),
            vec!["http://r.example.net/x"]
        );
    }

    #[test]
    fn division_is_not_a_regex() {
        assert_eq!(
            scan(r#"var a = b / 2; var u = "cdn.example.io/x.js";"#),
            vec!["cdn.example.io/x.js"]
        );
    }

    #[test]
    fn template_literal_chunks() {
        assert_eq!(
            scan("var u = `https://t.example.com/${id}/px.gif`;"),
            vec!["https://t.example.com/"]
        );
    }

    #[test]
    fn escaped_quotes_inside_literal() {
        assert_eq!(
            scan(r#"var u = "http://esc.example.org/a\"b";"#),
            vec![r#"http://esc.example.org/a"b"#]
        );
    }

    #[test]
    fn unterminated_string_falls_back() {
        // The broken literal still yields its quote-delimited span.
        let got = scan("var u = 'http://broken.example.com/x паth\nvar z = 'http://ok.example.com/y';");
        assert!(got.iter().any(|s| s.contains("ok.example.com")));
    }

    #[test]
    fn protocol_relative_literal() {
        assert_eq!(scan(r#"u = "//cdn.pr.example.net/x.js";"#), vec!["//cdn.pr.example.net/x.js"]);
    }

    #[test]
    fn unicode_escapes_decode() {
        assert_eq!(
            scan(r#"var u = "http://u.example.org/x";"#),
            vec!["http://u.example.org/x"]
        );
    }
}
