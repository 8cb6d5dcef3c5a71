//! Block-structured YAML subset: block mappings and sequences, single-line
//! flow sequences, plain/quoted scalars, folded and literal block scalars,
//! `&anchor` / `*alias` tokens, and `#` comments.
//!
//! The output is an untyped tree with source positions; mapping it onto a
//! decision model happens in `read`.

use super::{ParseError, ParseErrorKind, SourceSpan};

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Scalar {
    pub text: String,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Anchor {
    pub name: String,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Entry {
    pub key: Scalar,
    pub anchor: Option<Anchor>,
    pub value: Value,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Value {
    Null(SourceSpan),
    Scalar(Scalar),
    Alias(Scalar),
    Seq(Vec<Value>, SourceSpan),
    Map(Vec<Entry>, SourceSpan),
}

impl Value {
    pub fn span(&self) -> SourceSpan {
        match self {
            Value::Null(s) | Value::Seq(_, s) | Value::Map(_, s) => *s,
            Value::Scalar(s) | Value::Alias(s) => s.span,
        }
    }
}

#[derive(Debug, Clone)]
struct Line<'a> {
    number: usize,
    raw: &'a str,
    indent: usize,
    /// Content after the indentation with comments and trailing blanks removed.
    content: String,
}

impl Line<'_> {
    fn is_blank(&self) -> bool {
        self.content.is_empty()
    }

    fn span_at(&self, offset: usize) -> SourceSpan {
        SourceSpan::new(self.number, self.indent + offset + 1)
    }
}

pub(crate) fn parse_document(text: &str) -> Result<Value, ParseError> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let lines: Vec<Line> = text
        .lines()
        .enumerate()
        .map(|(i, raw)| {
            let indent = raw.len() - raw.trim_start_matches(' ').len();
            let content = strip_comment(&raw[indent..]).trim_end().to_string();
            Line {
                number: i + 1,
                raw,
                indent,
                content,
            }
        })
        .collect();
    let mut parser = Parser { lines, pos: 0 };
    parser.skip_blank()?;
    let Some(first) = parser.peek() else {
        return Ok(Value::Map(Vec::new(), SourceSpan::new(1, 1)));
    };
    let indent = first.indent;
    let doc = parser.parse_block(indent)?;
    parser.skip_blank()?;
    if let Some(line) = parser.peek() {
        let kind = if line.indent > indent {
            ParseErrorKind::Indentation
        } else {
            ParseErrorKind::Syntax
        };
        return Err(ParseError::new(
            line.span_at(0),
            kind,
            "content does not belong to the enclosing block",
        ));
    }
    if !matches!(doc, Value::Map(..)) {
        return Err(ParseError::new(
            doc.span(),
            ParseErrorKind::Syntax,
            "document must be a mapping of top-level sections",
        ));
    }
    Ok(doc)
}

/// Removes a `#` comment that starts the content or follows whitespace,
/// ignoring `#` inside quoted scalars.
fn strip_comment(s: &str) -> &str {
    let bytes = s.as_bytes();
    let mut quote: Option<u8> = None;
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match quote {
            Some(q) => {
                if q == b'"' && b == b'\\' {
                    i += 1;
                } else if b == q {
                    quote = None;
                }
            }
            None => {
                if b == b'#' && (i == 0 || bytes[i - 1] == b' ' || bytes[i - 1] == b'\t') {
                    return &s[..i];
                }
                if (b == b'"' || b == b'\'') && starts_token(bytes, i) {
                    quote = Some(b);
                }
            }
        }
        i += 1;
    }
    s
}

// Quotes only open a quoted scalar at the start of a token.
fn starts_token(bytes: &[u8], i: usize) -> bool {
    i == 0 || matches!(bytes[i - 1], b' ' | b'\t' | b'[' | b',' | b'{' | b':' | b'-')
}

struct Parser<'a> {
    lines: Vec<Line<'a>>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Line<'a>> {
        self.lines.get(self.pos)
    }

    /// Skips blank and comment-only lines, rejecting tab indentation on the
    /// first structural line found.
    fn skip_blank(&mut self) -> Result<(), ParseError> {
        while let Some(line) = self.lines.get(self.pos) {
            if line.is_blank() {
                self.pos += 1;
                continue;
            }
            if line.content.starts_with('\t') {
                return Err(ParseError::new(
                    SourceSpan::new(line.number, line.indent + 1),
                    ParseErrorKind::Indentation,
                    "tabs are not allowed in indentation",
                ));
            }
            break;
        }
        Ok(())
    }

    fn parse_block(&mut self, indent: usize) -> Result<Value, ParseError> {
        let line = self.peek().expect("caller checked for a line");
        if is_seq_item(&line.content) {
            self.parse_seq(indent)
        } else {
            self.parse_map(indent)
        }
    }

    fn parse_map(&mut self, indent: usize) -> Result<Value, ParseError> {
        let start = self.peek().map(|l| l.span_at(0)).unwrap_or_default();
        let mut entries = Vec::new();
        loop {
            self.skip_blank()?;
            let Some(line) = self.peek() else { break };
            if line.indent < indent {
                break;
            }
            if line.indent > indent {
                return Err(ParseError::new(
                    line.span_at(0),
                    ParseErrorKind::Indentation,
                    format!("unexpected indentation of {} spaces (expected {indent})", line.indent),
                ));
            }
            if is_seq_item(&line.content) {
                // A sequence at the same indentation ends this mapping only
                // when it is the value of the parent key; here it is misplaced.
                return Err(ParseError::new(
                    line.span_at(0),
                    ParseErrorKind::Syntax,
                    "sequence item where a `key: value` entry was expected",
                ));
            }
            let number = line.number;
            let content = line.content.clone();
            let (key_text, rest_offset) = split_key(&content).ok_or_else(|| {
                ParseError::new(
                    line.span_at(0),
                    ParseErrorKind::Syntax,
                    format!("expected `key: value`, found `{content}`"),
                )
            })?;
            let key = Scalar {
                text: unquote(key_text, line.span_at(0))?,
                span: line.span_at(0),
            };
            let rest = content[rest_offset..].trim_start();
            let rest_col = line.indent + 1 + content.len() - rest.len();
            self.pos += 1;
            let (anchor, value) = self.parse_value(rest, indent, number, rest_col, true)?;
            entries.push(Entry { key, anchor, value });
        }
        Ok(Value::Map(entries, start))
    }

    fn parse_seq(&mut self, indent: usize) -> Result<Value, ParseError> {
        let start = self.peek().map(|l| l.span_at(0)).unwrap_or_default();
        let mut items = Vec::new();
        loop {
            self.skip_blank()?;
            let Some(line) = self.peek() else { break };
            if line.indent < indent {
                break;
            }
            if line.indent > indent {
                return Err(ParseError::new(
                    line.span_at(0),
                    ParseErrorKind::Indentation,
                    format!("unexpected indentation of {} spaces (expected {indent})", line.indent),
                ));
            }
            if !is_seq_item(&line.content) {
                break;
            }
            let number = line.number;
            let content = line.content.clone();
            let item = content[1..].trim_start();
            let offset = content.len() - item.len();
            let item_col = line.indent + 1 + offset;
            if !item.is_empty() && !item.starts_with('[') && split_key(item).is_some() {
                // compact mapping: `- key: value` continues at the item column
                let item_indent = line.indent + offset;
                let line = &mut self.lines[self.pos];
                line.indent = item_indent;
                line.content = item.to_string();
                items.push(self.parse_map(item_indent)?);
                continue;
            }
            self.pos += 1;
            let (anchor, value) = self.parse_value(item, indent, number, item_col, false)?;
            if let Some(anchor) = anchor {
                return Err(ParseError::new(
                    anchor.span,
                    ParseErrorKind::Syntax,
                    "anchors are only supported on mapping values",
                ));
            }
            items.push(value);
        }
        Ok(Value::Seq(items, start))
    }

    /// Parses the value following `key:` or `- `, consuming continuation lines
    /// as needed. `indent` is the indentation of the owning line.
    fn parse_value(
        &mut self,
        rest: &str,
        indent: usize,
        number: usize,
        col: usize,
        in_map: bool,
    ) -> Result<(Option<Anchor>, Value), ParseError> {
        let mut rest = rest;
        let mut col = col;
        let mut anchor = None;
        if let Some(after) = rest.strip_prefix('&') {
            let name_len = after.find(char::is_whitespace).unwrap_or(after.len());
            let name = &after[..name_len];
            if name.is_empty() {
                return Err(ParseError::new(
                    SourceSpan::new(number, col),
                    ParseErrorKind::Syntax,
                    "anchor without a name",
                ));
            }
            anchor = Some(Anchor {
                name: name.to_string(),
                span: SourceSpan::new(number, col),
            });
            let remaining = after[name_len..].trim_start();
            col += rest.len() - remaining.len();
            rest = remaining;
        }
        let span = SourceSpan::new(number, col);

        if rest.is_empty() {
            self.skip_blank()?;
            let nested = match self.peek() {
                Some(next) if next.indent > indent => Some(next.indent),
                // YAML allows a block sequence value at the key's own indentation
                Some(next) if in_map && next.indent == indent && is_seq_item(&next.content) => Some(indent),
                _ => None,
            };
            let value = match nested {
                Some(child_indent) => self.parse_block(child_indent)?,
                None => Value::Null(span),
            };
            return Ok((anchor, value));
        }

        if let Some(name) = rest.strip_prefix('*') {
            if name.is_empty() || name.contains(char::is_whitespace) {
                return Err(ParseError::new(
                    span,
                    ParseErrorKind::Syntax,
                    format!("malformed alias `{rest}`"),
                ));
            }
            return Ok((
                anchor,
                Value::Alias(Scalar {
                    text: name.to_string(),
                    span,
                }),
            ));
        }

        if rest.starts_with('>') || rest.starts_with('|') {
            let text = self.block_scalar(rest, indent, span)?;
            return Ok((anchor, Value::Scalar(Scalar { text, span })));
        }

        if rest.starts_with('[') {
            let mut flow = FlowParser {
                src: rest,
                pos: 0,
                line: number,
                col,
            };
            let value = flow.parse_seq()?;
            flow.skip_ws();
            if flow.pos != rest.len() {
                return Err(ParseError::new(
                    flow.span(),
                    ParseErrorKind::Syntax,
                    "unexpected characters after flow sequence",
                ));
            }
            return Ok((anchor, value));
        }

        if rest.starts_with('{') {
            return Err(ParseError::new(
                span,
                ParseErrorKind::Syntax,
                "flow mappings are not supported",
            ));
        }

        let text = unquote(rest, span)?;
        Ok((anchor, Value::Scalar(Scalar { text, span })))
    }

    /// Reads a `>` (folded) or `|` (literal) block scalar whose header has
    /// already been seen.
    fn block_scalar(&mut self, header: &str, indent: usize, span: SourceSpan) -> Result<String, ParseError> {
        let folded = header.starts_with('>');
        let chomp = match &header[1..] {
            "" => Chomp::Clip,
            "-" => Chomp::Strip,
            "+" => Chomp::Keep,
            other => {
                return Err(ParseError::new(
                    span,
                    ParseErrorKind::Syntax,
                    format!("unsupported block scalar indicator `{other}`"),
                ))
            }
        };

        let mut body: Vec<&str> = Vec::new();
        let mut content_indent: Option<usize> = None;
        while let Some(line) = self.lines.get(self.pos) {
            let raw = line.raw;
            let trimmed = raw.trim_start_matches(' ');
            if trimmed.trim().is_empty() {
                body.push("");
                self.pos += 1;
                continue;
            }
            let line_indent = raw.len() - trimmed.len();
            if line_indent <= indent {
                break;
            }
            if trimmed.starts_with('\t') && content_indent.is_none_or(|ci| line_indent < ci) {
                return Err(ParseError::new(
                    SourceSpan::new(line.number, line_indent + 1),
                    ParseErrorKind::Indentation,
                    "tabs are not allowed in indentation",
                ));
            }
            let ci = *content_indent.get_or_insert(line_indent);
            if line_indent < ci {
                return Err(ParseError::new(
                    SourceSpan::new(line.number, line_indent + 1),
                    ParseErrorKind::Indentation,
                    "block scalar line is less indented than its first line",
                ));
            }
            body.push(&raw[ci..]);
            self.pos += 1;
        }
        // trailing blank lines belong to chomping, not content
        let mut trailing = 0;
        while body.last() == Some(&"") {
            body.pop();
            trailing += 1;
        }

        let mut text = String::new();
        if folded {
            let mut pending_newlines = 0;
            for (i, line) in body.iter().enumerate() {
                if line.is_empty() {
                    pending_newlines += 1;
                    continue;
                }
                if i > 0 {
                    if pending_newlines > 0 {
                        text.push_str(&"\n".repeat(pending_newlines));
                    } else {
                        text.push(' ');
                    }
                }
                pending_newlines = 0;
                text.push_str(line.trim_end());
            }
        } else {
            text = body.join("\n");
        }
        if !body.is_empty() {
            match chomp {
                Chomp::Strip => {}
                Chomp::Clip => text.push('\n'),
                Chomp::Keep => text.push_str(&"\n".repeat(1 + trailing)),
            }
        }
        Ok(text)
    }
}

enum Chomp {
    Clip,
    Strip,
    Keep,
}

fn is_seq_item(content: &str) -> bool {
    content == "-" || content.starts_with("- ")
}

/// Finds the `key:` separator of a mapping entry. Returns the raw key text and
/// the byte offset just past the colon.
fn split_key(content: &str) -> Option<(&str, usize)> {
    let bytes = content.as_bytes();
    let mut i = 0;
    if matches!(bytes.first(), Some(b'"') | Some(b'\'')) {
        let quote = bytes[0];
        i = 1;
        while i < bytes.len() {
            if quote == b'"' && bytes[i] == b'\\' {
                i += 2;
                continue;
            }
            if bytes[i] == quote {
                if quote == b'\'' && bytes.get(i + 1) == Some(&b'\'') {
                    i += 2;
                    continue;
                }
                break;
            }
            i += 1;
        }
        i += 1;
        let after = content.get(i..)?.trim_start();
        let colon = content.len() - after.len();
        return (after.starts_with(':') && (after.len() == 1 || after[1..].starts_with(' ')))
            .then(|| (&content[..i], colon + 1));
    }
    if matches!(bytes.first(), Some(b'[') | Some(b'{') | Some(b'*') | Some(b'&')) {
        return None;
    }
    while i < bytes.len() {
        if bytes[i] == b':' && (i + 1 == bytes.len() || bytes[i + 1] == b' ') {
            let key = content[..i].trim_end();
            return (!key.is_empty()).then_some((key, i + 1));
        }
        i += 1;
    }
    None
}

/// Resolves a scalar token: double-quoted (with escapes), single-quoted, or
/// plain. Plain and quoted results are both trimmed.
pub(crate) fn unquote(token: &str, span: SourceSpan) -> Result<String, ParseError> {
    let token = token.trim();
    let unterminated = || {
        ParseError::new(
            span,
            ParseErrorKind::Syntax,
            format!("unterminated quoted scalar `{token}`"),
        )
    };
    if let Some(body) = token.strip_prefix('"') {
        let mut out = String::new();
        let mut chars = body.chars();
        loop {
            match chars.next() {
                None => return Err(unterminated()),
                Some('"') => break,
                Some('\\') => match chars.next() {
                    Some('n') => out.push('\n'),
                    Some('t') => out.push('\t'),
                    Some('r') => out.push('\r'),
                    Some('"') => out.push('"'),
                    Some('\\') => out.push('\\'),
                    Some('/') => out.push('/'),
                    Some('0') => out.push('\0'),
                    Some(other) => {
                        return Err(ParseError::new(
                            span,
                            ParseErrorKind::Syntax,
                            format!("unsupported escape `\\{other}`"),
                        ))
                    }
                    None => return Err(unterminated()),
                },
                Some(c) => out.push(c),
            }
        }
        if !chars.as_str().trim().is_empty() {
            return Err(ParseError::new(
                span,
                ParseErrorKind::Syntax,
                "unexpected characters after quoted scalar",
            ));
        }
        return Ok(out.trim().to_string());
    }
    if let Some(body) = token.strip_prefix('\'') {
        let mut out = String::new();
        let mut chars = body.chars().peekable();
        loop {
            match chars.next() {
                None => return Err(unterminated()),
                Some('\'') if chars.peek() == Some(&'\'') => {
                    chars.next();
                    out.push('\'');
                }
                Some('\'') => break,
                Some(c) => out.push(c),
            }
        }
        if chars.any(|c| !c.is_whitespace()) {
            return Err(ParseError::new(
                span,
                ParseErrorKind::Syntax,
                "unexpected characters after quoted scalar",
            ));
        }
        return Ok(out.trim().to_string());
    }
    Ok(token.to_string())
}

struct FlowParser<'s> {
    src: &'s str,
    pos: usize,
    line: usize,
    col: usize,
}

impl FlowParser<'_> {
    fn span(&self) -> SourceSpan {
        SourceSpan::new(self.line, self.col + self.src[..self.pos].chars().count())
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(' ') {
            self.pos += 1;
        }
    }

    fn parse_seq(&mut self) -> Result<Value, ParseError> {
        let start = self.span();
        debug_assert!(self.src[self.pos..].starts_with('['));
        self.pos += 1;
        let mut items = Vec::new();
        loop {
            self.skip_ws();
            let rest = &self.src[self.pos..];
            if rest.is_empty() {
                return Err(ParseError::new(
                    start,
                    ParseErrorKind::Syntax,
                    "unterminated flow sequence (multi-line flow sequences are not supported)",
                ));
            }
            if rest.starts_with(']') {
                self.pos += 1;
                return Ok(Value::Seq(items, start));
            }
            if !items.is_empty() {
                if !rest.starts_with(',') {
                    return Err(ParseError::new(
                        self.span(),
                        ParseErrorKind::Syntax,
                        "expected `,` or `]` in flow sequence",
                    ));
                }
                self.pos += 1;
                self.skip_ws();
            }
            items.push(self.parse_item()?);
        }
    }

    fn parse_item(&mut self) -> Result<Value, ParseError> {
        let span = self.span();
        let rest = &self.src[self.pos..];
        if rest.starts_with('[') {
            return self.parse_seq();
        }
        if rest.starts_with('{') {
            return Err(ParseError::new(
                span,
                ParseErrorKind::Syntax,
                "flow mappings are not supported",
            ));
        }
        let len = if rest.starts_with('"') || rest.starts_with('\'') {
            quoted_len(rest)
                .ok_or_else(|| ParseError::new(span, ParseErrorKind::Syntax, "unterminated quoted scalar"))?
        } else {
            rest.find([',', ']']).unwrap_or(rest.len())
        };
        let token = &rest[..len];
        if token.trim().is_empty() {
            return Err(ParseError::new(
                span,
                ParseErrorKind::Syntax,
                "empty flow sequence item",
            ));
        }
        self.pos += len;
        if let Some(alias) = token.trim().strip_prefix('*') {
            return Ok(Value::Alias(Scalar {
                text: alias.to_string(),
                span,
            }));
        }
        Ok(Value::Scalar(Scalar {
            text: unquote(token, span)?,
            span,
        }))
    }
}

fn quoted_len(s: &str) -> Option<usize> {
    let bytes = s.as_bytes();
    let quote = bytes[0];
    let mut i = 1;
    while i < bytes.len() {
        if quote == b'"' && bytes[i] == b'\\' {
            i += 2;
            continue;
        }
        if bytes[i] == quote {
            if quote == b'\'' && bytes.get(i + 1) == Some(&b'\'') {
                i += 2;
                continue;
            }
            return Some(i + 1);
        }
        i += 1;
    }
    None
}
