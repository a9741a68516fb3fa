//! Append-only storage for the growing text collection, plus the
//! line-oriented update-stream format.
//!
//! Texts are identified by 1-based ids and positions are 1-based, matching
//! the edge-label convention `(k, i, j)` = `T_k[i..=j]` used throughout the
//! index. Texts are retained in full: edge labels and the insertion loop
//! need O(1) access to any stored character.

use std::collections::BTreeSet;
use std::fmt;

/// One fully-online update: append `ch` to the text with id `text_id`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct UpdateOp {
    /// 1-based text id. An id one beyond the current text count registers a
    /// new empty text before appending.
    pub text_id: usize,
    /// The appended character.
    pub ch: char,
}

impl UpdateOp {
    pub fn new(text_id: usize, ch: char) -> Self {
        UpdateOp { text_id, ch }
    }
}

/// Errors from the text store and the stream parser.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TextError {
    /// `text_id` was zero or more than one beyond the registered count.
    InvalidTextId { text_id: usize, text_count: usize },
    /// Position out of `1..=len` for the given text.
    OutOfRange {
        text_id: usize,
        pos: usize,
        len: usize,
    },
    /// Malformed stream line; `line` is 1-based.
    Parse { line: usize, msg: String },
}

impl fmt::Display for TextError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TextError::InvalidTextId {
                text_id,
                text_count,
            } => write!(
                f,
                "invalid text id {text_id} (store holds {text_count} texts; \
                 ids are 1-based and may exceed the count by at most one)"
            ),
            TextError::OutOfRange { text_id, pos, len } => write!(
                f,
                "position {pos} out of range for text {text_id} (length {len})"
            ),
            TextError::Parse { line, msg } => write!(f, "line {line}: {msg}"),
        }
    }
}

impl std::error::Error for TextError {}

/// Append-only store for all texts in the collection.
///
/// Tracks the total length `N` (= number of updates applied) and the set of
/// distinct characters seen so far.
#[derive(Debug, Clone, Default)]
pub struct TextStore {
    texts: Vec<Vec<char>>,
    total_len: usize,
    alphabet: BTreeSet<char>,
}

impl TextStore {
    pub fn new() -> Self {
        TextStore::default()
    }

    /// Applies one update, registering a new text if `op.text_id` is one
    /// beyond the current count. Returns the new length of that text.
    pub fn append(&mut self, op: UpdateOp) -> Result<usize, TextError> {
        if op.text_id == 0 || op.text_id > self.texts.len() + 1 {
            return Err(TextError::InvalidTextId {
                text_id: op.text_id,
                text_count: self.texts.len(),
            });
        }
        if op.text_id == self.texts.len() + 1 {
            self.texts.push(Vec::new());
        }
        let text = &mut self.texts[op.text_id - 1];
        text.push(op.ch);
        self.total_len += 1;
        self.alphabet.insert(op.ch);
        Ok(text.len())
    }

    /// Number of registered texts (`K`).
    pub fn text_count(&self) -> usize {
        self.texts.len()
    }

    /// Total number of stored characters (`N`).
    pub fn total_len(&self) -> usize {
        self.total_len
    }

    /// Number of distinct characters seen so far (`σ`).
    pub fn alphabet_size(&self) -> usize {
        self.alphabet.len()
    }

    /// Distinct characters in code-point order.
    pub fn alphabet(&self) -> impl Iterator<Item = char> + '_ {
        self.alphabet.iter().copied()
    }

    /// Length of text `k`. Panics on an unregistered id.
    pub fn len(&self, k: usize) -> usize {
        self.texts[k - 1].len()
    }

    /// Character at 1-based position `i` of text `k`, with range checking.
    pub fn char_at(&self, k: usize, i: usize) -> Result<char, TextError> {
        let text = self
            .texts
            .get(k.wrapping_sub(1))
            .ok_or(TextError::InvalidTextId {
                text_id: k,
                text_count: self.texts.len(),
            })?;
        if i == 0 || i > text.len() {
            return Err(TextError::OutOfRange {
                text_id: k,
                pos: i,
                len: text.len(),
            });
        }
        Ok(text[i - 1])
    }

    /// Character at 1-based position `i` of text `k`; panics when out of
    /// range. Hot path for edge-label resolution.
    #[inline]
    pub fn at(&self, k: usize, i: usize) -> char {
        self.texts[k - 1][i - 1]
    }

    /// The characters of text `k`.
    pub fn text(&self, k: usize) -> &[char] {
        &self.texts[k - 1]
    }

    /// Text `k` as a `String` (diagnostics, DOT export).
    pub fn text_string(&self, k: usize) -> String {
        self.texts[k - 1].iter().collect()
    }
}

/// Parses the update-stream format: one `<k><TAB><token>` per line, where
/// the token is a single character or an escape `\xHH` / `\uHHHH`. Lines
/// that are blank (or whitespace only) and lines whose first non-blank
/// character is `#` are skipped.
pub fn parse_stream(input: &str) -> Result<Vec<UpdateOp>, TextError> {
    let mut ops = Vec::new();
    for (idx, raw_line) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.strip_suffix('\r').unwrap_or(raw_line);
        let trimmed = line.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let parse_err = |msg: String| TextError::Parse { line: line_no, msg };
        let (id_part, token) = line
            .split_once('\t')
            .ok_or_else(|| parse_err("expected `<text-id><TAB><token>`".into()))?;
        let text_id: usize = id_part
            .parse()
            .map_err(|_| parse_err(format!("invalid text id {id_part:?}")))?;
        if text_id == 0 {
            return Err(parse_err("text ids are 1-based; 0 is invalid".into()));
        }
        let ch = parse_token(token).map_err(parse_err)?;
        ops.push(UpdateOp { text_id, ch });
    }
    Ok(ops)
}

fn parse_token(token: &str) -> Result<char, String> {
    let mut chars = token.chars();
    let first = chars
        .next()
        .ok_or_else(|| "empty token; expected a character or escape".to_string())?;
    if chars.next().is_none() {
        return Ok(first);
    }
    let hex = if let Some(h) = token.strip_prefix("\\x") {
        if h.len() != 2 {
            return Err(format!("`\\x` escape needs exactly 2 hex digits, got {token:?}"));
        }
        h
    } else if let Some(h) = token.strip_prefix("\\u") {
        if h.len() != 4 {
            return Err(format!("`\\u` escape needs exactly 4 hex digits, got {token:?}"));
        }
        h
    } else {
        return Err(format!(
            "token {token:?} is neither a single character nor a `\\xHH`/`\\uHHHH` escape"
        ));
    };
    let code = u32::from_str_radix(hex, 16)
        .map_err(|_| format!("invalid hex digits in escape {token:?}"))?;
    char::from_u32(code).ok_or_else(|| format!("escape {token:?} is not a Unicode scalar value"))
}

/// Serializes ops to the canonical stream form: ASCII graphic characters
/// other than `\` appear raw; everything else up to U+FFFF uses the shortest
/// escape with uppercase hex; characters beyond U+FFFF (which the 4-digit
/// escape cannot express) appear raw.
pub fn serialize_stream(ops: &[UpdateOp]) -> String {
    use fmt::Write;
    let mut out = String::new();
    for op in ops {
        let code = op.ch as u32;
        if (op.ch.is_ascii_graphic() && op.ch != '\\') || code > 0xFFFF {
            writeln!(out, "{}\t{}", op.text_id, op.ch).unwrap();
        } else if code <= 0xFF {
            writeln!(out, "{}\t\\x{code:02X}", op.text_id).unwrap();
        } else {
            writeln!(out, "{}\t\\u{code:04X}", op.text_id).unwrap();
        }
    }
    out
}
