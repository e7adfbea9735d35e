use std::fmt;
use std::str::FromStr;

/// Identifier of a CoNLL-U row.
///
/// Word rows carry a positive integer, multiword tokens a range `a-b`
/// and empty nodes a decimal `k.m` anchored after word `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TokenId {
    Word(usize),
    Range(usize, usize),
    Empty(usize, usize),
}

impl TokenId {
    pub fn word(self) -> Option<usize> {
        match self {
            TokenId::Word(id) => Some(id),
            _ => None,
        }
    }

    pub fn is_word(self) -> bool {
        matches!(self, TokenId::Word(_))
    }

    /// Shift every word index by `offset`.
    pub fn shifted(self, offset: usize) -> TokenId {
        match self {
            TokenId::Word(id) => TokenId::Word(id + offset),
            TokenId::Range(a, b) => TokenId::Range(a + offset, b + offset),
            TokenId::Empty(k, m) => TokenId::Empty(k + offset, m),
        }
    }
}

impl fmt::Display for TokenId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenId::Word(id) => write!(f, "{}", id),
            TokenId::Range(a, b) => write!(f, "{}-{}", a, b),
            TokenId::Empty(k, m) => write!(f, "{}.{}", k, m),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvalidTokenId(pub String);

impl fmt::Display for InvalidTokenId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid token id `{}`", self.0)
    }
}

impl std::error::Error for InvalidTokenId {}

fn parse_index(s: &str) -> Option<usize> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    // Leading zeros would not survive a round-trip.
    if s.len() > 1 && s.starts_with('0') {
        return None;
    }
    s.parse().ok()
}

impl FromStr for TokenId {
    type Err = InvalidTokenId;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || InvalidTokenId(s.to_owned());
        if let Some((a, b)) = s.split_once('-') {
            let a = parse_index(a).ok_or_else(err)?;
            let b = parse_index(b).ok_or_else(err)?;
            if a == 0 || b < a {
                return Err(err());
            }
            Ok(TokenId::Range(a, b))
        } else if let Some((k, m)) = s.split_once('.') {
            let k = parse_index(k).ok_or_else(err)?;
            let m = parse_index(m).ok_or_else(err)?;
            if m == 0 {
                return Err(err());
            }
            Ok(TokenId::Empty(k, m))
        } else {
            match parse_index(s) {
                Some(id) if id > 0 => Ok(TokenId::Word(id)),
                _ => Err(err()),
            }
        }
    }
}

/// One `|`-separated entry of the FEATS or MISC column.
///
/// Segments without `=` are kept verbatim so that the column survives a
/// round-trip unchanged.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Feature {
    Pair(String, String),
    Raw(String),
}

impl Feature {
    pub fn key(&self) -> Option<&str> {
        match self {
            Feature::Pair(k, _) => Some(k),
            Feature::Raw(_) => None,
        }
    }
}

impl fmt::Display for Feature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Feature::Pair(k, v) => write!(f, "{}={}", k, v),
            Feature::Raw(raw) => f.write_str(raw),
        }
    }
}

/// Ordered key-value list used for FEATS and MISC.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Features(Vec<Feature>);

impl Features {
    pub fn new() -> Self {
        Features(Vec::new())
    }

    pub fn parse(column: &str) -> Self {
        if column == "_" {
            return Features::new();
        }
        Features(
            column
                .split('|')
                .map(|seg| match seg.split_once('=') {
                    Some((k, v)) if !k.is_empty() => Feature::Pair(k.to_owned(), v.to_owned()),
                    _ => Feature::Raw(seg.to_owned()),
                })
                .collect(),
        )
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Feature> {
        self.0.iter()
    }

    /// Key-value pairs in column order, skipping raw segments.
    pub fn pairs(&self) -> impl Iterator<Item = (&str, &str)> {
        self.0.iter().filter_map(|f| match f {
            Feature::Pair(k, v) => Some((k.as_str(), v.as_str())),
            Feature::Raw(_) => None,
        })
    }

    /// First value stored under `key`.
    pub fn get(&self, key: &str) -> Option<&str> {
        self.pairs().find(|(k, _)| *k == key).map(|(_, v)| v)
    }

    pub fn get_all<'a>(&'a self, key: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.pairs().filter(move |(k, _)| *k == key).map(|(_, v)| v)
    }

    pub fn contains_key(&self, key: &str) -> bool {
        self.get(key).is_some()
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.0.push(Feature::Pair(key.into(), value.into()));
    }

    /// Replace the first entry for `key` in place, or append a new one.
    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        let value = value.into();
        for f in &mut self.0 {
            if let Feature::Pair(k, v) = f {
                if k == key {
                    *v = value;
                    return;
                }
            }
        }
        self.push(key, value);
    }

    /// Remove every entry for `key`, returning how many were removed.
    pub fn remove(&mut self, key: &str) -> usize {
        let before = self.0.len();
        self.0.retain(|f| f.key() != Some(key));
        before - self.0.len()
    }

    pub(crate) fn entries_mut(&mut self) -> &mut Vec<Feature> {
        &mut self.0
    }
}

impl FromIterator<Feature> for Features {
    fn from_iter<I: IntoIterator<Item = Feature>>(iter: I) -> Self {
        Features(iter.into_iter().collect())
    }
}

impl fmt::Display for Features {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("_");
        }
        for (i, feat) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            write!(f, "{}", feat)?;
        }
        Ok(())
    }
}

/// Head of an enhanced dependency: the root, a word or an empty node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DepHead {
    Root,
    Node(TokenId),
}

impl fmt::Display for DepHead {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DepHead::Root => f.write_str("0"),
            DepHead::Node(id) => write!(f, "{}", id),
        }
    }
}

/// One entry of the enhanced-graph (DEPS) column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dep {
    pub head: DepHead,
    pub label: String,
}

impl Dep {
    pub fn new(head: DepHead, label: impl Into<String>) -> Self {
        Dep {
            head,
            label: label.into(),
        }
    }

    fn parse(entry: &str) -> Option<Dep> {
        let (head, label) = entry.split_once(':')?;
        if label.is_empty() {
            return None;
        }
        let head = if head == "0" {
            DepHead::Root
        } else {
            match head.parse().ok()? {
                id @ (TokenId::Word(_) | TokenId::Empty(..)) => DepHead::Node(id),
                TokenId::Range(..) => return None,
            }
        };
        Some(Dep::new(head, label))
    }
}

impl fmt::Display for Dep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.head, self.label)
    }
}

pub(crate) fn parse_deps(column: &str) -> Option<Vec<Dep>> {
    if column == "_" {
        return Some(Vec::new());
    }
    column.split('|').map(Dep::parse).collect()
}

pub(crate) fn format_deps(deps: &[Dep]) -> String {
    if deps.is_empty() {
        return "_".to_owned();
    }
    deps.iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join("|")
}

/// One CoNLL-U row.
///
/// Underscore-only columns are kept as `"_"` strings for LEMMA, UPOS and
/// XPOS; FEATS, DEPS and MISC use empty collections; HEAD and DEPREL use
/// `None`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub id: TokenId,
    pub form: String,
    pub lemma: String,
    pub upos: String,
    pub xpos: String,
    pub feats: Features,
    pub head: Option<usize>,
    pub deprel: Option<String>,
    pub deps: Vec<Dep>,
    pub misc: Features,
}

impl Token {
    /// A word row with all annotation columns empty.
    pub fn word(id: usize, form: impl Into<String>) -> Self {
        Token {
            id: TokenId::Word(id),
            form: form.into(),
            lemma: "_".into(),
            upos: "_".into(),
            xpos: "_".into(),
            feats: Features::new(),
            head: None,
            deprel: None,
            deps: Vec::new(),
            misc: Features::new(),
        }
    }

    pub fn is_word(&self) -> bool {
        self.id.is_word()
    }

    pub fn deprel(&self) -> &str {
        self.deprel.as_deref().unwrap_or("_")
    }

    pub fn space_after(&self) -> bool {
        self.misc.get("SpaceAfter") != Some("No")
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let head = self
            .head
            .map(|h| h.to_string())
            .unwrap_or_else(|| "_".into());
        write!(
            f,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.id,
            self.form,
            self.lemma,
            self.upos,
            self.xpos,
            self.feats,
            head,
            self.deprel(),
            format_deps(&self.deps),
            self.misc
        )
    }
}
