//! Minimal WARC 1.x reader for response records.
//!
//! Reads plain or gzipped (one member per record, the usual `.warc.gz`
//! layout) archives, yields the target URI and HTTP body of every
//! `response` record whose Content-Type includes `text/html`, and counts
//! everything it skips.

use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use flate2::bufread::MultiGzDecoder;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum WarcError {
    #[error("io error reading warc: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed warc record: {0}")]
    Malformed(String),
}

/// One HTML response pulled out of an archive.
#[derive(Debug, Clone)]
pub struct WarcHtmlPage {
    pub url: String,
    pub body: Vec<u8>,
}

/// Outcome of reading one WARC record.
#[derive(Debug)]
pub enum WarcItem {
    HtmlPage(WarcHtmlPage),
    /// A well-formed record we do not process (non-response, non-HTML,
    /// missing target URI).
    Skipped,
}

pub struct WarcReader<R: BufRead> {
    input: R,
    done: bool,
}

impl WarcReader<Box<dyn BufRead>> {
    /// Opens a `.warc` or `.warc.gz` file, sniffing gzip by magic bytes.
    pub fn open(path: &Path) -> Result<Self, WarcError> {
        let mut reader = BufReader::new(File::open(path)?);
        let magic = reader.fill_buf()?;
        let gz = magic.len() >= 2 && magic[0] == 0x1f && magic[1] == 0x8b;
        let input: Box<dyn BufRead> = if gz {
            Box::new(BufReader::new(MultiGzDecoder::new(reader)))
        } else {
            Box::new(reader)
        };
        Ok(WarcReader { input, done: false })
    }
}

impl<R: BufRead> WarcReader<R> {
    pub fn new(input: R) -> Self {
        WarcReader { input, done: false }
    }

    /// Reads the next record. `Ok(None)` at end of input. A structural
    /// error poisons the rest of the stream (record boundaries are
    /// length-delimited, so there is no reliable resync).
    pub fn next_item(&mut self) -> Result<Option<WarcItem>, WarcError> {
        if self.done {
            return Ok(None);
        }
        match self.read_record() {
            Ok(item) => Ok(item),
            Err(e) => {
                self.done = true;
                Err(e)
            }
        }
    }

    fn read_record(&mut self) -> Result<Option<WarcItem>, WarcError> {
        // Skip blank separator lines between records.
        let mut version = String::new();
        loop {
            version.clear();
            let n = self.input.read_line(&mut version)?;
            if n == 0 {
                self.done = true;
                return Ok(None);
            }
            if !version.trim().is_empty() {
                break;
            }
        }
        let version = version.trim();
        if !version.starts_with("WARC/") {
            return Err(WarcError::Malformed(format!(
                "expected WARC version line, got {version:?}"
            )));
        }

        let mut warc_type = None;
        let mut target_uri = None;
        let mut content_length: Option<u64> = None;
        loop {
            let mut line = String::new();
            let n = self.input.read_line(&mut line)?;
            if n == 0 {
                return Err(WarcError::Malformed("truncated record header".into()));
            }
            let line = line.trim_end();
            if line.is_empty() {
                break;
            }
            let Some((name, value)) = line.split_once(':') else {
                continue;
            };
            let value = value.trim();
            match name.to_ascii_lowercase().as_str() {
                "warc-type" => warc_type = Some(value.to_string()),
                "warc-target-uri" => {
                    target_uri = Some(value.trim_matches(['<', '>']).to_string())
                }
                "content-length" => {
                    content_length = value.parse().ok();
                }
                _ => {}
            }
        }
        let len = content_length
            .ok_or_else(|| WarcError::Malformed("missing Content-Length".into()))?;
        let mut block = vec![0u8; len as usize];
        self.input.read_exact(&mut block).map_err(|_| {
            WarcError::Malformed(format!("truncated record block ({len} bytes expected)"))
        })?;

        if warc_type.as_deref() != Some("response") {
            return Ok(Some(WarcItem::Skipped));
        }
        let Some(url) = target_uri else {
            return Ok(Some(WarcItem::Skipped));
        };
        match parse_http_response(&block) {
            Some(body) => Ok(Some(WarcItem::HtmlPage(WarcHtmlPage { url, body }))),
            None => Ok(Some(WarcItem::Skipped)),
        }
    }
}

/// Splits an HTTP response block into headers and body, returning the body
/// when the Content-Type is HTML.
fn parse_http_response(block: &[u8]) -> Option<Vec<u8>> {
    let header_end = find_header_end(block)?;
    let headers = String::from_utf8_lossy(&block[..header_end.0]);
    let mut is_html = false;
    for line in headers.lines().skip(1) {
        if let Some((name, value)) = line.split_once(':') {
            if name.trim().eq_ignore_ascii_case("content-type")
                && value.to_ascii_lowercase().contains("text/html")
            {
                is_html = true;
            }
        }
    }
    if !is_html {
        return None;
    }
    Some(block[header_end.1..].to_vec())
}

/// Finds the header/body split: offset of the blank line and offset of the
/// first body byte.
fn find_header_end(block: &[u8]) -> Option<(usize, usize)> {
    if let Some(p) = block.windows(4).position(|w| w == b"\r\n\r\n") {
        return Some((p, p + 4));
    }
    block.windows(2).position(|w| w == b"\n\n").map(|p| (p, p + 2))
}
