use std::fmt;

use super::token::{Token, TokenId};

/// Parse a `# key = value` comment line into its key and value.
///
/// Keys are a single whitespace-free word; anything else is free text.
pub fn parse_meta(line: &str) -> Option<(&str, &str)> {
    let body = line.strip_prefix('#')?;
    let (key, value) = body.split_once('=')?;
    let key = key.trim();
    if key.is_empty() || key.contains(char::is_whitespace) {
        return None;
    }
    Some((key, value.trim()))
}

/// Comment keys that carry the speaker of a speaker-based unit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpeakerKeys(Vec<String>);

impl SpeakerKeys {
    pub const DEFAULT: &'static str = "speaker";

    /// `speaker` followed by the given aliases, in lookup order.
    pub fn with_aliases<I, S>(aliases: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut keys = vec![Self::DEFAULT.to_owned()];
        for alias in aliases {
            let alias = alias.into();
            let alias = alias.trim();
            if !alias.is_empty() && !keys.iter().any(|k| k == alias) {
                keys.push(alias.to_owned());
            }
        }
        SpeakerKeys(keys)
    }

    /// Parse a comma-separated alias list such as `speaker_id,participant`.
    pub fn from_list(list: &str) -> Self {
        Self::with_aliases(list.split(','))
    }

    pub fn contains(&self, key: &str) -> bool {
        self.0.iter().any(|k| k == key)
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }
}

impl Default for SpeakerKeys {
    fn default() -> Self {
        SpeakerKeys(vec![Self::DEFAULT.to_owned()])
    }
}

/// A speaker-based maximal unit: comment block plus token rows.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Sentence {
    /// Raw comment lines, `#` included.
    pub comments: Vec<String>,
    pub tokens: Vec<Token>,
}

impl Sentence {
    pub fn new() -> Self {
        Sentence::default()
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.comments
            .iter()
            .filter_map(|c| parse_meta(c))
            .find(|(k, _)| *k == key)
            .map(|(_, v)| v)
    }

    /// Replace the first `# key = ...` line, or append one.
    pub fn set_meta(&mut self, key: &str, value: &str) {
        let line = format!("# {} = {}", key, value);
        for c in &mut self.comments {
            if parse_meta(c).is_some_and(|(k, _)| k == key) {
                *c = line;
                return;
            }
        }
        self.comments.push(line);
    }

    pub fn remove_meta(&mut self, key: &str) {
        self.comments
            .retain(|c| !parse_meta(c).is_some_and(|(k, _)| k == key));
    }

    pub fn sent_id(&self) -> Option<&str> {
        self.meta("sent_id")
    }

    pub fn text(&self) -> Option<&str> {
        self.meta("text")
    }

    /// Speaker from the comment block, falling back to a `Speaker=` value
    /// shared by every word's MISC.
    pub fn speaker<'a>(&'a self, keys: &SpeakerKeys) -> Option<&'a str> {
        for key in keys.iter() {
            if let Some(v) = self.meta(key) {
                return Some(v);
            }
        }
        let mut shared = None;
        for tok in self.words() {
            let v = tok.misc.get("Speaker")?;
            match shared {
                None => shared = Some(v),
                Some(s) if s != v => return None,
                _ => {}
            }
        }
        shared
    }

    /// Word rows only (no multiword ranges or empty nodes).
    pub fn words(&self) -> impl Iterator<Item = &Token> {
        self.tokens.iter().filter(|t| t.is_word())
    }

    pub fn word_count(&self) -> usize {
        self.words().count()
    }

    pub fn word(&self, id: usize) -> Option<&Token> {
        self.tokens.iter().find(|t| t.id == TokenId::Word(id))
    }

    pub fn word_mut(&mut self, id: usize) -> Option<&mut Token> {
        self.tokens.iter_mut().find(|t| t.id == TokenId::Word(id))
    }

    /// Surface text rebuilt from word forms and `SpaceAfter=No`.
    ///
    /// Multiword tokens contribute their surface form in place of their
    /// syntactic words.
    pub fn rebuild_text(&self) -> String {
        let mut out = String::new();
        let mut skip_until = 0;
        let mut pending_space = false;
        for tok in &self.tokens {
            let space_after = match tok.id {
                TokenId::Range(_, end) => {
                    skip_until = end;
                    tok.space_after()
                }
                TokenId::Word(id) if id > skip_until => tok.space_after(),
                _ => continue,
            };
            if pending_space {
                out.push(' ');
            }
            out.push_str(&tok.form);
            pending_space = space_after;
        }
        out
    }
}

impl fmt::Display for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.comments {
            writeln!(f, "{}", c)?;
        }
        for t in &self.tokens {
            writeln!(f, "{}", t)?;
        }
        Ok(())
    }
}
