//! Cross-speaker syntactic relations in spoken-language treebanks.
//!
//! Sentences of a speaker-based CoNLL-U treebank may carry MISC pointers
//! (`Coconstruct`, `Backchannel`, `Scrap`, `Promotion`, `Head`) linking
//! material across speaker turns. This crate parses and serializes such
//! treebanks, validates the annotations, converts them into an
//! intermediate graph view and a dependency-based view with one tree per
//! rectional unit, mines candidate annotations and reports corpus counts.

pub mod conllu;
pub mod convert;
pub mod detect;
pub mod scheme;
pub mod stats;
pub mod tree;

pub use conllu::{
    normalize, parse_document, serialize_document, Document, ParseError, Sentence, SpeakerKeys,
    Token, TokenId,
};
pub use convert::{convert_document, ConvertError, ConvertOptions, Views};
pub use detect::{
    derive_lexicon, derive_lexicon_from, detect_backchannels, detect_incompletions,
    BackchannelLexicon, Candidate, DetectConfig, DetectError,
};
pub use scheme::{
    import_legacy_rhapsodie, validate_document, validate_document_with, IssueCode, Severity,
    ValidationIssue,
};
pub use stats::{compute_stats, render_stats, Format, SchemeStats};
