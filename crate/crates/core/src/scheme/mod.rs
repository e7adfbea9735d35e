//! The coconstruction annotation scheme carried in MISC.
//!
//! Five keys make up the scheme:
//!
//! * `Coconstruct=<deprel>::<sent_id>::<tok_id>` on the later token of a
//!   cross-unit dependency, pointing back at its governor (or at the
//!   head of the first denotation for stacking);
//! * `Backchannel=<sent_id>::<tok_id>` on a backchannel, implying the
//!   relation `discourse:backchannel`;
//! * `Scrap=Yes` on an element whose projection is unfinished;
//! * `Promotion=<deprel>` on a promoted element, recording the relation it
//!   would bear to its missing head;
//! * `Head=Word|Position` on dependents of a promoted element.

mod legacy;
mod validate;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::conllu::Features;

pub use legacy::{import_legacy_rhapsodie, LegacyImportError, LegacyProblem};
pub(crate) use validate::sentence_label;
pub use validate::{
    issues_to_jsonl, issues_to_tsv, validate_document, validate_document_with, IssueCode, Severity,
    ValidationIssue,
};

pub const COCONSTRUCT: &str = "Coconstruct";
pub const BACKCHANNEL: &str = "Backchannel";
pub const SCRAP: &str = "Scrap";
pub const PROMOTION: &str = "Promotion";
pub const HEAD: &str = "Head";
pub const SPEAKER: &str = "Speaker";
/// Provenance key added to tokens of merged units.
pub const COCONSTRUCT_FROM: &str = "CoconstructFrom";

/// Pseudo-relation marking the later item of a repair; becomes an inverted
/// `reparandum` in the dependency view.
pub const REPAIR: &str = "repair";
pub const REPARANDUM: &str = "reparandum";
pub const BACKCHANNEL_RELATION: &str = "discourse:backchannel";

const SEPARATOR: &str = "::";

/// The 37 universal relations of UD v2.
pub const UNIVERSAL_RELATIONS: [&str; 37] = [
    "acl",
    "advcl",
    "advmod",
    "amod",
    "appos",
    "aux",
    "case",
    "cc",
    "ccomp",
    "clf",
    "compound",
    "conj",
    "cop",
    "csubj",
    "dep",
    "det",
    "discourse",
    "dislocated",
    "expl",
    "fixed",
    "flat",
    "goeswith",
    "iobj",
    "list",
    "mark",
    "nmod",
    "nsubj",
    "nummod",
    "obj",
    "obl",
    "orphan",
    "parataxis",
    "punct",
    "reparandum",
    "root",
    "vocative",
    "xcomp",
];

/// Syntactic check: lowercase ASCII segments joined by `:`.
pub fn is_relation_label(label: &str) -> bool {
    !label.is_empty()
        && label
            .split(':')
            .all(|part| !part.is_empty() && part.bytes().all(|b| b.is_ascii_lowercase()))
}

/// A well-formed label whose base is a universal relation, or `repair`.
pub fn is_coconstruct_relation(label: &str) -> bool {
    if label == REPAIR {
        return true;
    }
    let base = label.split(':').next().unwrap_or("");
    is_relation_label(label) && UNIVERSAL_RELATIONS.contains(&base)
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum PointerError {
    #[error("pointer `{raw}` has {found} `::`-separated fields, expected {expected}")]
    FieldCount {
        raw: String,
        expected: usize,
        found: usize,
    },
    #[error("pointer `{0}` has an empty field")]
    EmptyField(String),
    #[error("pointer `{0}` has a token id that is not a positive integer")]
    TokenId(String),
}

fn split_pointer(raw: &str, expected: usize) -> Result<Vec<&str>, PointerError> {
    let fields: Vec<&str> = raw.split(SEPARATOR).collect();
    if fields.len() != expected {
        return Err(PointerError::FieldCount {
            raw: raw.to_owned(),
            expected,
            found: fields.len(),
        });
    }
    if fields.iter().any(|f| f.is_empty()) {
        return Err(PointerError::EmptyField(raw.to_owned()));
    }
    Ok(fields)
}

fn parse_tok_id(raw: &str, field: &str) -> Result<usize, PointerError> {
    match field.parse::<usize>() {
        Ok(id) if id > 0 && !field.starts_with('0') && !field.starts_with('+') => Ok(id),
        _ => Err(PointerError::TokenId(raw.to_owned())),
    }
}

/// Backward pointer `<deprel>::<sent_id>::<tok_id>`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoconstructPointer {
    pub deprel: String,
    pub target_sent_id: String,
    pub target_tok_id: usize,
}

impl CoconstructPointer {
    pub fn is_repair(&self) -> bool {
        self.deprel == REPAIR
    }
}

impl FromStr for CoconstructPointer {
    type Err = PointerError;

    fn from_str(raw: &str) -> Result<Self, Self::Err> {
        let f = split_pointer(raw, 3)?;
        Ok(CoconstructPointer {
            deprel: f[0].to_owned(),
            target_sent_id: f[1].to_owned(),
            target_tok_id: parse_tok_id(raw, f[2])?,
        })
    }
}

impl fmt::Display for CoconstructPointer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{sep}{}{sep}{}",
            self.deprel,
            self.target_sent_id,
            self.target_tok_id,
            sep = SEPARATOR
        )
    }
}

/// Backward pointer `<sent_id>::<tok_id>`; the relation is always
/// `discourse:backchannel`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BackchannelPointer {
    pub target_sent_id: String,
    pub target_tok_id: usize,
}

impl FromStr for BackchannelPointer {
    type Err = PointerError;

    fn from_str(raw: &str) -> Result<Self, Self::Err> {
        let f = split_pointer(raw, 2)?;
        Ok(BackchannelPointer {
            target_sent_id: f[0].to_owned(),
            target_tok_id: parse_tok_id(raw, f[1])?,
        })
    }
}

impl fmt::Display for BackchannelPointer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}{}",
            self.target_sent_id, SEPARATOR, self.target_tok_id
        )
    }
}

/// Value of the `Head` feature on a dependent of a promoted element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HeadMode {
    /// True dependent of the promoted word itself; stays attached to it.
    Word,
    /// Dependent of the missing head; lifted onto the completing token.
    Position,
}

impl FromStr for HeadMode {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "Word" => Ok(HeadMode::Word),
            "Position" => Ok(HeadMode::Position),
            _ => Err(()),
        }
    }
}

impl fmt::Display for HeadMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HeadMode::Word => "Word",
            HeadMode::Position => "Position",
        })
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SchemeError {
    #[error("malformed {key} value: {source}")]
    Pointer {
        key: &'static str,
        #[source]
        source: PointerError,
    },
    #[error("{0} occurs more than once on one token")]
    Repeated(&'static str),
    #[error("Scrap value `{0}` is not `Yes`")]
    ScrapValue(String),
    #[error("Head value `{0}` is neither `Word` nor `Position`")]
    HeadValue(String),
}

/// Decoded scheme features of one token.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SchemeFeatures {
    pub coconstruct: Option<CoconstructPointer>,
    pub backchannel: Option<BackchannelPointer>,
    pub scrap: bool,
    pub promotion: Option<String>,
    pub head_mode: Option<HeadMode>,
    pub speaker: Option<String>,
}

impl SchemeFeatures {
    pub fn is_empty(&self) -> bool {
        *self == SchemeFeatures::default()
    }
}

/// Decode every scheme key, collecting all problems instead of stopping
/// at the first. Keys that fail to decode are left unset.
pub(crate) fn scan_features(misc: &Features) -> (SchemeFeatures, Vec<SchemeError>) {
    let mut feats = SchemeFeatures::default();
    let mut errors = Vec::new();

    for key in [COCONSTRUCT, BACKCHANNEL, SCRAP, PROMOTION, HEAD] {
        if misc.get_all(key).count() > 1 {
            errors.push(SchemeError::Repeated(key));
        }
    }

    if let Some(raw) = misc.get(COCONSTRUCT) {
        match raw.parse() {
            Ok(p) => feats.coconstruct = Some(p),
            Err(source) => errors.push(SchemeError::Pointer {
                key: COCONSTRUCT,
                source,
            }),
        }
    }
    if let Some(raw) = misc.get(BACKCHANNEL) {
        match raw.parse() {
            Ok(p) => feats.backchannel = Some(p),
            Err(source) => errors.push(SchemeError::Pointer {
                key: BACKCHANNEL,
                source,
            }),
        }
    }
    if let Some(raw) = misc.get(SCRAP) {
        if raw == "Yes" {
            feats.scrap = true;
        } else {
            errors.push(SchemeError::ScrapValue(raw.to_owned()));
        }
    }
    feats.promotion = misc.get(PROMOTION).map(str::to_owned);
    if let Some(raw) = misc.get(HEAD) {
        match raw.parse() {
            Ok(mode) => feats.head_mode = Some(mode),
            Err(()) => errors.push(SchemeError::HeadValue(raw.to_owned())),
        }
    }
    feats.speaker = misc.get(SPEAKER).map(str::to_owned);

    (feats, errors)
}

/// Decode the scheme keys of one token's MISC column. Unrelated keys are
/// ignored.
pub fn parse_scheme_features(misc: &Features) -> Result<SchemeFeatures, SchemeError> {
    let (feats, mut errors) = scan_features(misc);
    if errors.is_empty() {
        Ok(feats)
    } else {
        Err(errors.swap_remove(0))
    }
}
