//! Import of the older `AttachTo` + `Rel` encoding.

use std::fmt;

use thiserror::Error;

use super::{validate::sentence_label, BACKCHANNEL, COCONSTRUCT};
use crate::conllu::{Document, Feature, Sentence};

const ATTACH_TO: &str = "AttachTo";
const REL: &str = "Rel";
const LEGACY_REFORM: &str = "conj:dicto";
const REFORM: &str = "conj:reform";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LegacyProblem {
    pub sent_id: String,
    pub tok_id: String,
    pub message: String,
}

impl fmt::Display for LegacyProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}\t{}", self.sent_id, self.tok_id, self.message)
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("{} token(s) carry an incomplete AttachTo/Rel pair", .problems.len())]
pub struct LegacyImportError {
    pub problems: Vec<LegacyProblem>,
}

fn modern_relation(rel: &str) -> &str {
    if rel == LEGACY_REFORM {
        REFORM
    } else {
        rel
    }
}

/// Rewrite `AttachTo`/`Rel` pairs into `Coconstruct` (or `Backchannel` when
/// `Rel=discourse`) and rename `conj:dicto` to `conj:reform` everywhere.
///
/// The new key takes the place of `AttachTo` in the MISC column. Every
/// token with half a pair is reported; nothing is returned in that case.
pub fn import_legacy_rhapsodie(doc: &Document) -> Result<Document, LegacyImportError> {
    let mut problems = Vec::new();
    let mut sentences: Vec<Sentence> = Vec::with_capacity(doc.len());

    for (pos, s) in doc.sentences().iter().enumerate() {
        let label = sentence_label(s, pos);
        let mut s = s.clone();
        for tok in &mut s.tokens {
            if tok.deprel.as_deref() == Some(LEGACY_REFORM) {
                tok.deprel = Some(REFORM.into());
            }
            for dep in &mut tok.deps {
                if dep.label == LEGACY_REFORM {
                    dep.label = REFORM.into();
                }
            }

            let attach = tok.misc.get(ATTACH_TO).map(str::to_owned);
            let rel = tok.misc.get(REL).map(str::to_owned);
            let (attach, rel) = match (attach, rel) {
                (None, None) => continue,
                (Some(a), Some(r)) => (a, r),
                (a, _) => {
                    let missing = if a.is_some() { REL } else { ATTACH_TO };
                    problems.push(LegacyProblem {
                        sent_id: label.clone(),
                        tok_id: tok.id.to_string(),
                        message: format!(
                            "{} without {}",
                            if a.is_some() { ATTACH_TO } else { REL },
                            missing
                        ),
                    });
                    continue;
                }
            };

            let replacement = if rel == "discourse" {
                Feature::Pair(BACKCHANNEL.into(), attach)
            } else {
                Feature::Pair(
                    COCONSTRUCT.into(),
                    format!("{}::{}", modern_relation(&rel), attach),
                )
            };
            let entries = tok.misc.entries_mut();
            let at = entries
                .iter()
                .position(|f| f.key() == Some(ATTACH_TO))
                .expect("AttachTo present");
            entries[at] = replacement;
            tok.misc.remove(REL);
        }
        sentences.push(s);
    }

    if !problems.is_empty() {
        return Err(LegacyImportError { problems });
    }
    Ok(Document::new(sentences).expect("sent_ids unchanged"))
}
