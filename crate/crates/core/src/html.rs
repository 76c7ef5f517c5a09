//! Lenient HTML tokenizer.
//!
//! Only what the pipeline needs: visible text and anchor targets. Malformed
//! markup never fails; an unterminated tag or comment swallows the rest of
//! the input, which is what browsers do as well.

use alloc::string::String;
use alloc::vec::Vec;

/// One lexical item of an HTML document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Token<'a> {
    Text(&'a str),
    StartTag { name: String, attrs: Vec<(String, String)> },
    EndTag { name: String },
    Comment,
}

/// Elements whose content is never rendered as text.
const RAW_TEXT: &[&str] = &["script", "style"];

/// Elements that do not break a word when they open or close.
const INLINE: &[&str] = &[
    "a", "abbr", "b", "bdi", "bdo", "cite", "code", "data", "dfn", "em", "font", "i", "kbd", "mark",
    "q", "s", "samp", "small", "span", "strong", "sub", "sup", "time", "u", "var", "wbr",
];

pub struct Tokenizer<'a> {
    src: &'a str,
    pos: usize,
    /// Set after `<script>`/`<style>`; the next token is its raw body.
    raw_until: Option<&'static str>,
}

impl<'a> Tokenizer<'a> {
    pub fn new(src: &'a str) -> Self {
        Tokenizer { src, pos: 0, raw_until: None }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn tag(&mut self) -> Option<Token<'a>> {
        let rest = self.rest();
        debug_assert!(rest.starts_with('<'));
        if let Some(body) = rest.strip_prefix("<!--") {
            let end = body.find("-->").map(|i| i + 3).unwrap_or(body.len());
            self.pos += 4 + end;
            return Some(Token::Comment);
        }
        let bytes = rest.as_bytes();
        let next = bytes.get(1).copied();
        match next {
            Some(b'!') | Some(b'?') => {
                let end = rest.find('>').map(|i| i + 1).unwrap_or(rest.len());
                self.pos += end;
                Some(Token::Comment)
            }
            Some(b'/') => {
                let (name, consumed) = read_name(&rest[2..]);
                if name.is_empty() {
                    // `</ ` or `</>`: skip like a bogus comment.
                    let end = rest.find('>').map(|i| i + 1).unwrap_or(rest.len());
                    self.pos += end;
                    return Some(Token::Comment);
                }
                let after = &rest[2 + consumed..];
                let end = after.find('>').map(|i| i + 1).unwrap_or(after.len());
                self.pos += 2 + consumed + end;
                Some(Token::EndTag { name })
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let (name, consumed) = read_name(&rest[1..]);
                let (attrs, attr_len) = read_attrs(&rest[1 + consumed..]);
                self.pos += 1 + consumed + attr_len;
                if let Some(raw) = RAW_TEXT.iter().find(|r| **r == name) {
                    self.raw_until = Some(raw);
                }
                Some(Token::StartTag { name, attrs })
            }
            _ => None,
        }
    }
}

impl<'a> Iterator for Tokenizer<'a> {
    type Item = Token<'a>;

    fn next(&mut self) -> Option<Token<'a>> {
        if self.pos >= self.src.len() {
            return None;
        }
        if let Some(end_name) = self.raw_until.take() {
            // Raw-text bodies are reported as comments.
            let rest = self.rest();
            let end = find_ascii_ci(rest, "</", end_name).unwrap_or(rest.len());
            self.pos += end;
            if end > 0 {
                return Some(Token::Comment);
            }
        }
        let rest = self.rest();
        if rest.starts_with('<') {
            if let Some(tok) = self.tag() {
                return Some(tok);
            }
            // A lone '<' that does not open a tag is text.
            let end = rest[1..].find('<').map(|i| i + 1).unwrap_or(rest.len());
            self.pos += end;
            return Some(Token::Text(&rest[..end]));
        }
        let end = rest.find('<').unwrap_or(rest.len());
        self.pos += end;
        Some(Token::Text(&rest[..end]))
    }
}

fn find_ascii_ci(hay: &str, prefix: &str, name: &str) -> Option<usize> {
    let h = hay.as_bytes();
    let needle_len = prefix.len() + name.len();
    if h.len() < needle_len {
        return None;
    }
    (0..=h.len() - needle_len).find(|&i| {
        h[i..i + prefix.len()] == *prefix.as_bytes()
            && h[i + prefix.len()..i + needle_len].eq_ignore_ascii_case(name.as_bytes())
    })
}

fn read_name(s: &str) -> (String, usize) {
    let end = s
        .find(|c: char| c.is_ascii_whitespace() || c == '>' || c == '/')
        .unwrap_or(s.len());
    (s[..end].to_ascii_lowercase(), end)
}

/// Parses attributes up to and including the closing `>`.
fn read_attrs(s: &str) -> (Vec<(String, String)>, usize) {
    let b = s.as_bytes();
    let mut attrs = Vec::new();
    let mut i = 0;
    loop {
        while i < b.len() && (b[i].is_ascii_whitespace() || b[i] == b'/') {
            i += 1;
        }
        if i >= b.len() {
            return (attrs, i);
        }
        if b[i] == b'>' {
            return (attrs, i + 1);
        }
        let start = i;
        if b[i] == b'=' {
            // Stray `=` with no attribute name.
            i += 1;
        }
        while i < b.len() && !b[i].is_ascii_whitespace() && !matches!(b[i], b'=' | b'>' | b'/') {
            i += 1;
        }
        let name = s[start..i].to_ascii_lowercase();
        while i < b.len() && b[i].is_ascii_whitespace() {
            i += 1;
        }
        let mut value = String::new();
        if i < b.len() && b[i] == b'=' {
            i += 1;
            while i < b.len() && b[i].is_ascii_whitespace() {
                i += 1;
            }
            if i < b.len() && (b[i] == b'"' || b[i] == b'\'') {
                let q = b[i];
                let vstart = i + 1;
                let vend = b[vstart..].iter().position(|&c| c == q).map(|p| vstart + p);
                match vend {
                    Some(e) => {
                        value = decode_entities(&s[vstart..e]);
                        i = e + 1;
                    }
                    None => {
                        value = decode_entities(&s[vstart..]);
                        i = b.len();
                    }
                }
            } else {
                let vstart = i;
                while i < b.len() && !b[i].is_ascii_whitespace() && b[i] != b'>' {
                    i += 1;
                }
                value = decode_entities(&s[vstart..i]);
            }
        }
        if !name.is_empty() && !name.starts_with('=') {
            attrs.push((name, value));
        }
    }
}

/// Decodes the common named entities and numeric character references.
/// Unknown entities are kept verbatim.
pub fn decode_entities(s: &str) -> String {
    if !s.contains('&') {
        return String::from(s);
    }
    let mut out = String::with_capacity(s.len());
    let mut rest = s;
    while let Some(amp) = rest.find('&') {
        out.push_str(&rest[..amp]);
        let tail = &rest[amp..];
        let semi = tail[1..].find(';').map(|i| i + 1).filter(|&i| i <= 10);
        let decoded = semi.and_then(|i| decode_one(&tail[1..i]).map(|c| (c, i + 1)));
        match decoded {
            Some((c, len)) => {
                out.push(c);
                rest = &tail[len..];
            }
            None => {
                out.push('&');
                rest = &tail[1..];
            }
        }
    }
    out.push_str(rest);
    out
}

fn decode_one(name: &str) -> Option<char> {
    if let Some(num) = name.strip_prefix('#') {
        let code = if let Some(hex) = num.strip_prefix('x').or_else(|| num.strip_prefix('X')) {
            u32::from_str_radix(hex, 16).ok()?
        } else {
            num.parse::<u32>().ok()?
        };
        return Some(char::from_u32(code).unwrap_or('\u{FFFD}'));
    }
    Some(match name {
        "amp" => '&',
        "lt" => '<',
        "gt" => '>',
        "quot" => '"',
        "apos" => '\'',
        "nbsp" => ' ',
        "copy" => '©',
        "reg" => '®',
        "euro" => '€',
        "pound" => '£',
        "mdash" => '—',
        "ndash" => '–',
        "hellip" => '…',
        "laquo" => '«',
        "raquo" => '»',
        _ => return None,
    })
}

/// Visible text of an HTML document with whitespace collapsed to single
/// spaces. Script and style bodies and comments are dropped; invalid UTF-8
/// is replaced.
pub fn extract_text(html: &[u8]) -> String {
    let src = String::from_utf8_lossy(html);
    let mut out = String::with_capacity(src.len() / 2);
    let mut pending_space = false;
    for tok in Tokenizer::new(&src) {
        match tok {
            Token::Text(t) => {
                let decoded = decode_entities(t);
                for (i, word) in decoded.split(char::is_whitespace).enumerate() {
                    if i > 0 {
                        pending_space = true;
                    }
                    if word.is_empty() {
                        continue;
                    }
                    if pending_space && !out.is_empty() {
                        out.push(' ');
                    }
                    pending_space = false;
                    out.push_str(word);
                }
            }
            Token::StartTag { name, .. } | Token::EndTag { name } => {
                if !INLINE.contains(&name.as_str()) {
                    pending_space = true;
                }
            }
            Token::Comment => {}
        }
    }
    out
}

/// `href` values of `<a>` and `<area>` elements in document order.
pub fn anchor_hrefs(html: &[u8]) -> Vec<String> {
    let src = String::from_utf8_lossy(html);
    Tokenizer::new(&src)
        .filter_map(|tok| match tok {
            Token::StartTag { name, attrs } if name == "a" || name == "area" => attrs
                .into_iter()
                .find(|(k, _)| k == "href")
                .map(|(_, v)| String::from(v.trim())),
            _ => None,
        })
        .collect()
}

/// Number of whitespace-delimited tokens.
pub fn word_count(text: &str) -> usize {
    text.split_whitespace().count()
}
