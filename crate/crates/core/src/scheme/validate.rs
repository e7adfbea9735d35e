use std::collections::HashSet;
use std::fmt;

use serde::{Serialize, Serializer};

use super::{
    is_coconstruct_relation, is_relation_label, scan_features, SchemeError, SchemeFeatures,
    COCONSTRUCT, HEAD, PROMOTION,
};
use crate::conllu::{Document, Sentence, SpeakerKeys};
use crate::tree;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        })
    }
}

/// Stable issue codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IssueCode {
    /// Scheme feature syntax: pointer grammar, repeated keys, `Scrap` value.
    V1,
    /// Pointer target `sent_id` does not exist.
    V2,
    /// Pointer target does not strictly precede the bearer.
    V3,
    /// Pointer target token does not exist.
    V4,
    /// `Head` value or placement.
    V5,
    /// `Promotion` value.
    V6,
    /// `Coconstruct` relation label.
    V7,
    /// Basic tree well-formedness.
    V8,
    /// Pointer between contiguous sentences of one speaker.
    V9,
    /// Backchannel bearer is not its sentence's root.
    V10,
}

impl IssueCode {
    pub const ALL: [IssueCode; 10] = [
        IssueCode::V1,
        IssueCode::V2,
        IssueCode::V3,
        IssueCode::V4,
        IssueCode::V5,
        IssueCode::V6,
        IssueCode::V7,
        IssueCode::V8,
        IssueCode::V9,
        IssueCode::V10,
    ];
}

impl fmt::Display for IssueCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self)
    }
}

impl Serialize for IssueCode {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationIssue {
    #[serde(serialize_with = "lowercase")]
    pub severity: Severity,
    pub code: IssueCode,
    pub sent_id: String,
    pub tok_id: Option<usize>,
    pub message: String,
}

fn lowercase<S: Serializer>(sev: &Severity, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(sev)
}

impl ValidationIssue {
    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tok = self
            .tok_id
            .map(|t| t.to_string())
            .unwrap_or_else(|| "_".into());
        write!(
            f,
            "{}\t{}\t{}\t{}\t{}",
            self.severity, self.code, self.sent_id, tok, self.message
        )
    }
}

/// One issue per line: severity, code, sent_id, tok_id, message.
pub fn issues_to_tsv(issues: &[ValidationIssue]) -> String {
    issues.iter().map(|i| format!("{}\n", i)).collect()
}

pub fn issues_to_jsonl(issues: &[ValidationIssue]) -> String {
    issues
        .iter()
        .map(|i| serde_json::to_string(i).expect("issue serializes") + "\n")
        .collect()
}

/// Label used in issues for a sentence; falls back to its 1-based
/// position when it has no `sent_id`.
pub(crate) fn sentence_label(s: &Sentence, pos: usize) -> String {
    s.sent_id()
        .map(str::to_owned)
        .unwrap_or_else(|| format!("#{}", pos + 1))
}

struct Collector {
    issues: Vec<(usize, usize, ValidationIssue)>,
}

impl Collector {
    fn push(
        &mut self,
        pos: usize,
        label: &str,
        tok: Option<usize>,
        severity: Severity,
        code: IssueCode,
        message: String,
    ) {
        self.issues.push((
            pos,
            tok.unwrap_or(0),
            ValidationIssue {
                severity,
                code,
                sent_id: label.to_owned(),
                tok_id: tok,
                message,
            },
        ));
    }
}

fn feature_error_code(err: &SchemeError) -> IssueCode {
    match err {
        SchemeError::HeadValue(_) => IssueCode::V5,
        SchemeError::Pointer { .. } | SchemeError::Repeated(_) | SchemeError::ScrapValue(_) => {
            IssueCode::V1
        }
    }
}

/// Validate with the default speaker comment key.
pub fn validate_document(doc: &Document) -> Vec<ValidationIssue> {
    validate_document_with(doc, &SpeakerKeys::default())
}

/// Check every scheme rule. Issues come back in document order, then by
/// token, then by code.
pub fn validate_document_with(doc: &Document, speakers: &SpeakerKeys) -> Vec<ValidationIssue> {
    let sentences = doc.sentences();
    let mut out = Collector { issues: Vec::new() };

    // Decoded features per sentence and word, plus the set of tokens a
    // repair pointer resolves to (their dependents may carry `Head`).
    let mut decoded: Vec<Vec<(usize, SchemeFeatures, Vec<SchemeError>)>> =
        Vec::with_capacity(sentences.len());
    let mut repair_targets = HashSet::new();
    for s in sentences {
        let mut row = Vec::new();
        for tok in s.words() {
            let (feats, errors) = scan_features(&tok.misc);
            if let Some(p) = feats.coconstruct.as_ref().filter(|p| p.is_repair()) {
                if let Some(target) = doc.position(&p.target_sent_id) {
                    repair_targets.insert((target, p.target_tok_id));
                }
            }
            row.push((tok.id.word().unwrap_or(0), feats, errors));
        }
        decoded.push(row);
    }

    for (pos, s) in sentences.iter().enumerate() {
        let label = sentence_label(s, pos);

        if let Err(e) = tree::check_sentence(s) {
            out.push(
                pos,
                &label,
                None,
                Severity::Error,
                IssueCode::V8,
                e.to_string(),
            );
        }

        for (tok_id, feats, errors) in &decoded[pos] {
            let tok_id = *tok_id;
            let tok = s.word(tok_id).expect("word listed in its sentence");
            let at = Some(tok_id);

            for e in errors {
                out.push(
                    pos,
                    &label,
                    at,
                    Severity::Error,
                    feature_error_code(e),
                    e.to_string(),
                );
            }

            if feats.coconstruct.is_some() && feats.backchannel.is_some() {
                out.push(
                    pos,
                    &label,
                    at,
                    Severity::Warning,
                    IssueCode::V1,
                    "token bears both Coconstruct and Backchannel".into(),
                );
            }

            let targets = feats
                .coconstruct
                .iter()
                .map(|p| (COCONSTRUCT, &p.target_sent_id, p.target_tok_id))
                .chain(
                    feats
                        .backchannel
                        .iter()
                        .map(|p| ("Backchannel", &p.target_sent_id, p.target_tok_id)),
                );
            for (key, target_sent, target_tok) in targets {
                let Some(target_pos) = doc.position(target_sent) else {
                    out.push(
                        pos,
                        &label,
                        at,
                        Severity::Error,
                        IssueCode::V2,
                        format!("{} target sentence `{}` does not exist", key, target_sent),
                    );
                    continue;
                };
                if target_pos >= pos {
                    out.push(
                        pos,
                        &label,
                        at,
                        Severity::Error,
                        IssueCode::V3,
                        format!(
                            "{} target sentence `{}` does not precede `{}`",
                            key, target_sent, label
                        ),
                    );
                }
                if sentences[target_pos].word(target_tok).is_none() {
                    out.push(
                        pos,
                        &label,
                        at,
                        Severity::Error,
                        IssueCode::V4,
                        format!(
                            "{} target token {}::{} does not exist",
                            key, target_sent, target_tok
                        ),
                    );
                    continue;
                }
                if key == COCONSTRUCT && target_pos + 1 == pos {
                    let a = sentences[target_pos].speaker(speakers);
                    let b = s.speaker(speakers);
                    if a.is_some() && a == b {
                        out.push(
                            pos,
                            &label,
                            at,
                            Severity::Warning,
                            IssueCode::V9,
                            format!(
                                "Coconstruct links contiguous sentences of speaker {}; they should be merged",
                                b.unwrap_or_default()
                            ),
                        );
                    }
                }
            }

            if let Some(p) = &feats.coconstruct {
                if !is_coconstruct_relation(&p.deprel) {
                    out.push(
                        pos,
                        &label,
                        at,
                        Severity::Error,
                        IssueCode::V7,
                        format!(
                            "Coconstruct relation `{}` is not a UD relation or `repair`",
                            p.deprel
                        ),
                    );
                }
            }

            if let Some(promotion) = &feats.promotion {
                if !is_relation_label(promotion) {
                    out.push(
                        pos,
                        &label,
                        at,
                        Severity::Error,
                        IssueCode::V6,
                        format!("Promotion value `{}` is not a relation label", promotion),
                    );
                } else if !feats.scrap {
                    out.push(
                        pos,
                        &label,
                        at,
                        Severity::Warning,
                        IssueCode::V6,
                        "Promotion without Scrap=Yes".into(),
                    );
                }
            }

            if feats.head_mode.is_some() {
                let governor = tok.head.filter(|&h| h > 0);
                let licensed = governor.is_some_and(|h| {
                    s.word(h).is_some_and(|g| g.misc.contains_key(PROMOTION))
                        || repair_targets.contains(&(pos, h))
                });
                if !licensed {
                    out.push(
                        pos,
                        &label,
                        at,
                        Severity::Error,
                        IssueCode::V5,
                        format!("{} feature on a token whose head is not promoted", HEAD),
                    );
                }
            }

            if feats.backchannel.is_some() && tok.head != Some(0) {
                out.push(
                    pos,
                    &label,
                    at,
                    Severity::Warning,
                    IssueCode::V10,
                    "Backchannel bearer is not the root of its sentence".into(),
                );
            }
        }
    }

    let mut issues = out.issues;
    issues.sort_by_key(|(pos, tok, issue)| (*pos, *tok, issue.code));
    issues.into_iter().map(|(_, _, i)| i).collect()
}
