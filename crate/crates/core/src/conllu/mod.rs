//! CoNLL-U documents with a byte-preserving parser and serializer.
//!
//! Nothing here knows about the coconstruction scheme. Columns are kept
//! as close to their source bytes as possible: FEATS and MISC preserve
//! entry order and non `Key=Value` segments, comment lines are stored
//! verbatim, and multiword ranges and empty nodes are kept as distinct
//! id kinds.

mod sentence;
mod token;

use std::collections::HashMap;
use std::fmt;
use std::io::Read;
use std::str::FromStr;

use thiserror::Error;

pub use sentence::{parse_meta, Sentence, SpeakerKeys};
pub use token::{Dep, DepHead, Feature, Features, InvalidTokenId, Token, TokenId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("input is not valid UTF-8")]
    Utf8,
    #[error("I/O error: {0}")]
    Io(String),
    #[error("expected 10 tab-separated columns, found {0}")]
    ColumnCount(usize),
    #[error("{0}")]
    TokenId(#[from] InvalidTokenId),
    #[error("invalid HEAD `{0}`")]
    Head(String),
    #[error("invalid DEPS column `{0}`")]
    Deps(String),
    #[error("duplicate token id {0}")]
    DuplicateTokenId(TokenId),
    #[error("word ids are not the contiguous sequence 1..{0}")]
    NonContiguousIds(usize),
    #[error("comment line after token rows")]
    CommentAfterTokens,
    #[error("duplicate sent_id `{0}`")]
    DuplicateSentId(String),
}

/// Parse failure located at a 1-based input line.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    fn new(line: usize, kind: impl Into<ParseErrorKind>) -> Self {
        ParseError {
            line,
            kind: kind.into(),
        }
    }
}

/// An ordered sequence of sentences with unique `sent_id`s.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Document {
    sentences: Vec<Sentence>,
    index: HashMap<String, usize>,
}

impl Document {
    /// Build a document, rejecting duplicate `sent_id`s.
    pub fn new(sentences: Vec<Sentence>) -> Result<Self, ParseErrorKind> {
        let mut index = HashMap::with_capacity(sentences.len());
        for (pos, s) in sentences.iter().enumerate() {
            if let Some(id) = s.sent_id() {
                if index.insert(id.to_owned(), pos).is_some() {
                    return Err(ParseErrorKind::DuplicateSentId(id.to_owned()));
                }
            }
        }
        Ok(Document { sentences, index })
    }

    pub fn sentences(&self) -> &[Sentence] {
        &self.sentences
    }

    pub fn into_sentences(self) -> Vec<Sentence> {
        self.sentences
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    /// Document position of the sentence with the given id.
    pub fn position(&self, sent_id: &str) -> Option<usize> {
        self.index.get(sent_id).copied()
    }

    pub fn get(&self, sent_id: &str) -> Option<&Sentence> {
        self.position(sent_id).map(|p| &self.sentences[p])
    }

    /// Serialize to CoNLL-U text.
    pub fn serialize(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Document {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.sentences {
            write!(f, "{}", s)?;
            writeln!(f)?;
        }
        Ok(())
    }
}

impl FromStr for Document {
    type Err = ParseError;

    fn from_str(input: &str) -> Result<Self, Self::Err> {
        parse_str(input)
    }
}

/// Read and parse a whole CoNLL-U stream.
pub fn parse_document<R: Read>(mut reader: R) -> Result<Document, ParseError> {
    let mut bytes = Vec::new();
    reader
        .read_to_end(&mut bytes)
        .map_err(|e| ParseError::new(0, ParseErrorKind::Io(e.to_string())))?;
    let text = String::from_utf8(bytes).map_err(|_| ParseError::new(0, ParseErrorKind::Utf8))?;
    parse_str(&text)
}

pub fn serialize_document(doc: &Document) -> String {
    doc.to_string()
}

/// The canonical form the serializer reproduces: LF line endings and
/// exactly one blank line after the last sentence.
pub fn normalize(text: &str) -> String {
    let text = text.replace("\r\n", "\n");
    let trimmed = text.trim_end_matches('\n');
    if trimmed.is_empty() {
        String::new()
    } else {
        format!("{}\n\n", trimmed)
    }
}

fn parse_token(line: &str, lineno: usize) -> Result<Token, ParseError> {
    let cols: Vec<&str> = line.split('\t').collect();
    if cols.len() != 10 {
        return Err(ParseError::new(
            lineno,
            ParseErrorKind::ColumnCount(cols.len()),
        ));
    }
    let id: TokenId = cols[0]
        .parse()
        .map_err(|e: InvalidTokenId| ParseError::new(lineno, e))?;
    let head = match cols[6] {
        "_" => None,
        "0" => Some(0),
        h => match h.parse::<TokenId>() {
            Ok(TokenId::Word(h)) => Some(h),
            _ => return Err(ParseError::new(lineno, ParseErrorKind::Head(h.into()))),
        },
    };
    let deps = token::parse_deps(cols[8])
        .ok_or_else(|| ParseError::new(lineno, ParseErrorKind::Deps(cols[8].into())))?;
    Ok(Token {
        id,
        form: cols[1].to_owned(),
        lemma: cols[2].to_owned(),
        upos: cols[3].to_owned(),
        xpos: cols[4].to_owned(),
        feats: Features::parse(cols[5]),
        head,
        deprel: (cols[7] != "_").then(|| cols[7].to_owned()),
        deps,
        misc: Features::parse(cols[9]),
    })
}

struct PendingSentence {
    sentence: Sentence,
    first_line: usize,
    sent_id_line: Option<usize>,
}

fn finish(
    pending: PendingSentence,
    sentences: &mut Vec<Sentence>,
    seen: &mut HashMap<String, usize>,
) -> Result<(), ParseError> {
    let s = pending.sentence;
    let ids: Vec<usize> = s.tokens.iter().filter_map(|t| t.id.word()).collect();
    if ids.iter().enumerate().any(|(i, &id)| id != i + 1) {
        return Err(ParseError::new(
            pending.first_line,
            ParseErrorKind::NonContiguousIds(ids.len()),
        ));
    }
    if let Some(id) = s.sent_id() {
        let line = pending.sent_id_line.unwrap_or(pending.first_line);
        if seen.insert(id.to_owned(), line).is_some() {
            return Err(ParseError::new(
                line,
                ParseErrorKind::DuplicateSentId(id.to_owned()),
            ));
        }
    }
    sentences.push(s);
    Ok(())
}

fn parse_str(input: &str) -> Result<Document, ParseError> {
    let mut sentences = Vec::new();
    let mut seen = HashMap::new();
    let mut pending: Option<PendingSentence> = None;

    for (i, raw) in input.split('\n').enumerate() {
        let lineno = i + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.trim().is_empty() {
            if let Some(p) = pending.take() {
                finish(p, &mut sentences, &mut seen)?;
            }
            continue;
        }
        let p = pending.get_or_insert_with(|| PendingSentence {
            sentence: Sentence::new(),
            first_line: lineno,
            sent_id_line: None,
        });
        if line.starts_with('#') {
            if !p.sentence.tokens.is_empty() {
                return Err(ParseError::new(lineno, ParseErrorKind::CommentAfterTokens));
            }
            if parse_meta(line).is_some_and(|(k, _)| k == "sent_id") && p.sent_id_line.is_none() {
                p.sent_id_line = Some(lineno);
            }
            p.sentence.comments.push(line.to_owned());
        } else {
            let tok = parse_token(line, lineno)?;
            if p.sentence.tokens.iter().any(|t| t.id == tok.id) {
                return Err(ParseError::new(
                    lineno,
                    ParseErrorKind::DuplicateTokenId(tok.id),
                ));
            }
            p.sentence.tokens.push(tok);
        }
    }
    if let Some(p) = pending.take() {
        finish(p, &mut sentences, &mut seen)?;
    }

    Document::new(sentences).map_err(|kind| ParseError::new(0, kind))
}
