//! Candidate mining for treebanks without scheme annotation.
//!
//! Two heuristics scan consecutive sentence pairs produced by different
//! speakers. A backchannel candidate is a pair whose first sentence is
//! not a question and whose second contains backchannel forms. An
//! incompletion candidate is a pair whose first sentence does not end in
//! final punctuation. Candidates are reports for manual inspection.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::conllu::{Document, Sentence, SpeakerKeys, Token};
use crate::scheme::sentence_label;

/// Minimum frequency for a form to enter a derived lexicon.
pub const DEFAULT_THRESHOLD: usize = 2;

const BUILT_IN: &[&str] = &[
    "ah", "aha", "ahah", "ah-ha", "aja", "d'accord", "da", "ecco", "eh", "già", "hm", "hmm", "ja",
    "mh", "mhm", "mhmh", "mm", "mmh", "ok", "okay", "oui", "right", "sì", "tako", "uh-huh",
    "voilà", "yeah", "yes",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    BuiltIn,
    Derived,
    File,
}

/// Lowercased forms that may signal a backchannel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BackchannelLexicon {
    entries: BTreeSet<String>,
    provenance: Provenance,
}

impl BackchannelLexicon {
    pub fn new<I, S>(forms: I, provenance: Provenance) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        BackchannelLexicon {
            entries: forms
                .into_iter()
                .map(|f| f.as_ref().to_lowercase())
                .collect(),
            provenance,
        }
    }

    /// Small multilingual list of common backchannel forms.
    pub fn built_in() -> Self {
        Self::new(BUILT_IN.iter(), Provenance::BuiltIn)
    }

    /// One form per line; `#` starts a comment, blank lines are skipped.
    pub fn parse(text: &str) -> Self {
        let forms = text
            .lines()
            .map(|l| l.split_once('#').map_or(l, |(before, _)| before).trim())
            .filter(|l| !l.is_empty());
        Self::new(forms, Provenance::File)
    }

    pub fn contains(&self, form: &str) -> bool {
        self.entries.contains(&form.to_lowercase())
    }

    pub fn insert(&mut self, form: &str) -> bool {
        self.entries.insert(form.to_lowercase())
    }

    pub fn entries(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }
}

impl fmt::Display for BackchannelLexicon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.entries.iter().try_for_each(|e| writeln!(f, "{}", e))
    }
}

/// Lexicon from forms already annotated as `discourse*`, INTJ or PART,
/// keeping those seen at least [`DEFAULT_THRESHOLD`] times.
pub fn derive_lexicon(doc: &Document) -> BackchannelLexicon {
    derive_lexicon_with(doc, DEFAULT_THRESHOLD)
}

pub fn derive_lexicon_with(doc: &Document, threshold: usize) -> BackchannelLexicon {
    derive_lexicon_from([doc], threshold)
}

/// Derive one lexicon from several documents, counting forms jointly.
pub fn derive_lexicon_from<'a, I>(docs: I, threshold: usize) -> BackchannelLexicon
where
    I: IntoIterator<Item = &'a Document>,
{
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    let words = docs
        .into_iter()
        .flat_map(|d| d.sentences().iter().flat_map(Sentence::words));
    for tok in words {
        if tok.deprel().starts_with("discourse") || tok.upos == "INTJ" || tok.upos == "PART" {
            *counts.entry(tok.form.to_lowercase()).or_default() += 1;
        }
    }
    let forms = counts
        .into_iter()
        .filter(|&(_, n)| n >= threshold)
        .map(|(form, _)| form);
    BackchannelLexicon::new(forms, Provenance::Derived)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetectConfig {
    pub speakers: SpeakerKeys,
    /// Require every non-punctuation word of the second sentence to be a
    /// lexicon form.
    pub all_tokens: bool,
    /// Forms of PUNCT tokens that count as final punctuation.
    pub final_punctuation: BTreeSet<String>,
}

impl Default for DetectConfig {
    fn default() -> Self {
        DetectConfig {
            speakers: SpeakerKeys::default(),
            all_tokens: false,
            final_punctuation: [".", "?", "!", "…"].into_iter().map(String::from).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DetectError {
    #[error("backchannel lexicon is empty")]
    EmptyLexicon,
    #[error("no speaker metadata for sentence(s) {}", .0.join(", "))]
    MissingSpeaker(Vec<String>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CandidateKind {
    Backchannel,
    Incompletion,
}

impl fmt::Display for CandidateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CandidateKind::Backchannel => "backchannel",
            CandidateKind::Incompletion => "incompletion",
        })
    }
}

/// A pair of consecutive sentences flagged for inspection.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Candidate {
    pub kind: CandidateKind,
    pub first_sent_id: String,
    pub second_sent_id: String,
    /// Matched lexicon words of the second sentence, or the last word of
    /// the first sentence for incompletions.
    pub trigger_tokens: Vec<usize>,
    pub score: usize,
}

/// `kind  first  second  ids  score`, ids comma-separated.
impl fmt::Display for Candidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ids: Vec<String> = self.trigger_tokens.iter().map(usize::to_string).collect();
        write!(
            f,
            "{}\t{}\t{}\t{}\t{}",
            self.kind,
            self.first_sent_id,
            self.second_sent_id,
            if ids.is_empty() {
                "_".to_owned()
            } else {
                ids.join(",")
            },
            self.score
        )
    }
}

pub fn candidates_to_tsv(candidates: &[Candidate]) -> String {
    candidates.iter().map(|c| format!("{}\n", c)).collect()
}

pub fn candidates_to_jsonl(candidates: &[Candidate]) -> String {
    candidates
        .iter()
        .map(|c| serde_json::to_string(c).expect("candidate serializes") + "\n")
        .collect()
}

/// Consecutive pairs by different speakers, as document positions.
fn speaker_pairs(doc: &Document, keys: &SpeakerKeys) -> Result<Vec<usize>, DetectError> {
    let sentences = doc.sentences();
    let speakers: Vec<Option<&str>> = sentences.iter().map(|s| s.speaker(keys)).collect();
    let missing: Vec<String> = speakers
        .iter()
        .enumerate()
        .filter(|(_, s)| s.is_none())
        .map(|(pos, _)| sentence_label(&sentences[pos], pos))
        .collect();
    if !missing.is_empty() {
        return Err(DetectError::MissingSpeaker(missing));
    }
    Ok((1..sentences.len())
        .filter(|&i| speakers[i - 1] != speakers[i])
        .map(|i| i - 1)
        .collect())
}

fn is_question_mark(form: &str) -> bool {
    !form.is_empty() && form.chars().all(|c| c == '?')
}

fn is_interrogative(s: &Sentence) -> bool {
    s.words().any(|t| is_question_mark(&t.form))
        || s.text().is_some_and(|t| t.trim_end().ends_with('?'))
}

fn candidate(doc: &Document, kind: CandidateKind, first: usize, triggers: Vec<usize>) -> Candidate {
    let s = doc.sentences();
    Candidate {
        kind,
        first_sent_id: sentence_label(&s[first], first),
        second_sent_id: sentence_label(&s[first + 1], first + 1),
        score: match kind {
            CandidateKind::Backchannel => triggers.len(),
            CandidateKind::Incompletion => 1,
        },
        trigger_tokens: triggers,
    }
}

fn word_id(t: &Token) -> usize {
    t.id.word().expect("word row")
}

pub fn detect_backchannels(
    doc: &Document,
    lexicon: &BackchannelLexicon,
    config: &DetectConfig,
) -> Result<Vec<Candidate>, DetectError> {
    if lexicon.is_empty() {
        return Err(DetectError::EmptyLexicon);
    }
    let sentences = doc.sentences();
    let mut out = Vec::new();
    for first in speaker_pairs(doc, &config.speakers)? {
        if is_interrogative(&sentences[first]) {
            continue;
        }
        let second = &sentences[first + 1];
        let triggers: Vec<usize> = second
            .words()
            .filter(|t| lexicon.contains(&t.form))
            .map(word_id)
            .collect();
        let accepted = if config.all_tokens {
            let mut content = second.words().filter(|t| t.upos != "PUNCT").peekable();
            content.peek().is_some() && content.all(|t| lexicon.contains(&t.form))
        } else {
            !triggers.is_empty()
        };
        if accepted {
            out.push(candidate(doc, CandidateKind::Backchannel, first, triggers));
        }
    }
    Ok(out)
}

pub fn detect_incompletions(
    doc: &Document,
    config: &DetectConfig,
) -> Result<Vec<Candidate>, DetectError> {
    let sentences = doc.sentences();
    let mut out = Vec::new();
    for first in speaker_pairs(doc, &config.speakers)? {
        let Some(last) = sentences[first].words().filter(|t| t.upos != "SYM").last() else {
            continue;
        };
        let closed = last.upos == "PUNCT" && config.final_punctuation.contains(&last.form);
        if !closed {
            out.push(candidate(
                doc,
                CandidateKind::Incompletion,
                first,
                vec![word_id(last)],
            ));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    type Row<'a> = (&'a str, &'a str, &'a [(&'a str, &'a str)]);

    fn doc(rows: &[Row]) -> Document {
        let mut text = String::new();
        for (i, (speaker, sent_text, words)) in rows.iter().enumerate() {
            text.push_str(&format!(
                "# sent_id = s{}\n# speaker = {}\n# text = {}\n",
                i + 1,
                speaker,
                sent_text
            ));
            for (j, (form, upos)) in words.iter().enumerate() {
                let (head, rel) = if j == 0 { (0, "root") } else { (1, "dep") };
                text.push_str(&format!(
                    "{}\t{}\t_\t{}\t_\t_\t{}\t{}\t_\t_\n",
                    j + 1,
                    form,
                    upos,
                    head,
                    rel
                ));
            }
            text.push('\n');
        }
        text.parse().unwrap()
    }

    #[test]
    fn lexicon_file_skips_comments() {
        let lex = BackchannelLexicon::parse("# forms\nMhm\n\n ja # yes\n");
        assert_eq!(lex.entries().collect::<Vec<_>>(), ["ja", "mhm"]);
        assert_eq!(lex.provenance(), Provenance::File);
        assert!(lex.contains("JA"));
    }

    #[test]
    fn derived_lexicon_applies_threshold() {
        let d = doc(&[
            ("A", "ja ja", &[("ja", "INTJ"), ("Ja", "INTJ")]),
            ("B", "mhm", &[("mhm", "INTJ")]),
            ("A", "hiša", &[("hiša", "NOUN")]),
        ]);
        let lex = derive_lexicon(&d);
        assert_eq!(lex.entries().collect::<Vec<_>>(), ["ja"]);
        assert_eq!(lex.provenance(), Provenance::Derived);
        assert_eq!(derive_lexicon_with(&d, 1).len(), 2);
    }

    #[test]
    fn questions_block_backchannels() {
        let d = doc(&[
            ("A", "vieni?", &[("vieni", "VERB"), ("?", "PUNCT")]),
            ("B", "sì", &[("sì", "INTJ")]),
            ("A", "allora vengo", &[("allora", "ADV"), ("vengo", "VERB")]),
            ("B", "mhm", &[("mhm", "INTJ")]),
        ]);
        let lex = BackchannelLexicon::built_in();
        let found = detect_backchannels(&d, &lex, &DetectConfig::default()).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].to_string(), "backchannel\ts3\ts4\t1\t1");
    }

    #[test]
    fn all_tokens_mode_counts_every_trigger() {
        let d = doc(&[
            ("A", "smo šli", &[("smo", "AUX"), ("šli", "VERB")]),
            (
                "B",
                "tako , tako , tako , tako",
                &[
                    ("tako", "PART"),
                    (",", "PUNCT"),
                    ("tako", "PART"),
                    (",", "PUNCT"),
                    ("tako", "PART"),
                    (",", "PUNCT"),
                    ("tako", "PART"),
                ],
            ),
            (
                "A",
                "tako je bilo",
                &[("tako", "PART"), ("je", "AUX"), ("bilo", "VERB")],
            ),
        ]);
        let lex = BackchannelLexicon::new(["tako"], Provenance::File);
        let config = DetectConfig {
            all_tokens: true,
            ..DetectConfig::default()
        };
        let found = detect_backchannels(&d, &lex, &config).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].trigger_tokens, [1, 3, 5, 7]);
        assert_eq!(found[0].score, 4);
    }

    #[test]
    fn ellipsis_follows_the_configured_set() {
        let d = doc(&[
            (
                "A",
                "in potem …",
                &[("in", "CCONJ"), ("potem", "ADV"), ("…", "PUNCT")],
            ),
            ("B", "ja", &[("ja", "INTJ")]),
        ]);
        let mut config = DetectConfig::default();
        assert!(detect_incompletions(&d, &config).unwrap().is_empty());
        config.final_punctuation.remove("…");
        let found = detect_incompletions(&d, &config).unwrap();
        assert_eq!(found[0].trigger_tokens, [3]);
        assert_eq!(found[0].score, 1);
    }

    #[test]
    fn missing_speakers_are_listed() {
        let d: Document = "# sent_id = a\n1\tx\t_\t_\t_\t_\t0\troot\t_\t_\n\n\
# sent_id = b\n# speaker = B\n1\ty\t_\t_\t_\t_\t0\troot\t_\t_\n\n"
            .parse()
            .unwrap();
        let err = detect_incompletions(&d, &DetectConfig::default()).unwrap_err();
        assert_eq!(err, DetectError::MissingSpeaker(vec!["a".into()]));
        let empty = BackchannelLexicon::new(Vec::<String>::new(), Provenance::File);
        assert_eq!(
            detect_backchannels(&d, &empty, &DetectConfig::default()).unwrap_err(),
            DetectError::EmptyLexicon
        );
    }
}
