//! Conversion from the speaker-based view to the intermediate graph view
//! and the dependency-based view.
//!
//! The pipeline has three steps:
//!
//! 1. [`cluster_units`] joins sentences connected by pointers into
//!    rectional units and renumbers their tokens;
//! 2. [`build_intermediate_graph`] adds `/attach` edges for every pointer
//!    and marks the speaker-based edges they replace as `/sb`;
//! 3. [`project_dependency_view`] keeps tree and attach edges, drops
//!    superseded ones and checks that the result is a tree.

mod cluster;
mod graph;
mod project;
pub mod union_find;

use std::collections::HashMap;

use thiserror::Error;

use crate::conllu::{Document, ParseErrorKind, SpeakerKeys, TokenId};
use crate::scheme::{BackchannelPointer, SchemeError, BACKCHANNEL};
use crate::tree::TreeError;

pub use cluster::{cluster_units, RectionalUnit, Renumbering, TokenOrigin, TokenRef};
pub use graph::{build_intermediate_graph, EdgeTag, GraphEdge};
pub use project::project_dependency_view;

/// Comment key marking sentences of the intermediate view.
pub const VIEW_KEY: &str = "coconstruct_view";
pub const INTERMEDIATE: &str = "intermediate";

/// Failure inside one rectional unit.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum UnitError {
    #[error("{sent_id} token {tok_id}: {source}")]
    Scheme {
        sent_id: String,
        tok_id: usize,
        #[source]
        source: SchemeError,
    },
    #[error("{sent_id} token {tok_id}: pointer target {target} is not in the unit")]
    Unresolved {
        sent_id: String,
        tok_id: usize,
        target: String,
    },
    #[error("ambiguous scrap resolution between {first} and {second}")]
    AmbiguousScrap { first: String, second: String },
    #[error("token {0} receives more than one attach edge")]
    MultipleHeads(usize),
    #[error("token {0} has no head after projection")]
    MissingHead(usize),
    #[error("projected structure is not a tree: {0}")]
    Tree(TreeError),
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ConvertError {
    #[error("unit {unit}: {source}")]
    Unit {
        unit: String,
        #[source]
        source: UnitError,
    },
    #[error("sentence {0} belongs to an intermediate view, which cannot be converted again")]
    IntermediateInput(String),
    #[error("merged unit id `{0}` collides with another sentence")]
    DuplicateUnitId(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvertOptions {
    /// Merge backchannels into the unit of their target.
    pub include_backchannels: bool,
    pub speakers: SpeakerKeys,
}

impl Default for ConvertOptions {
    fn default() -> Self {
        ConvertOptions {
            include_backchannels: true,
            speakers: SpeakerKeys::default(),
        }
    }
}

/// Both output views of a conversion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Views {
    pub intermediate: Document,
    pub dependency: Document,
}

/// First sentence that belongs to an intermediate view, if any.
pub fn intermediate_marker(doc: &Document) -> Option<String> {
    doc.sentences().iter().enumerate().find_map(|(pos, s)| {
        let marked = s.meta(VIEW_KEY) == Some(INTERMEDIATE)
            || s.tokens.iter().any(|t| {
                t.deps
                    .iter()
                    .any(|d| d.label.ends_with("/attach") || d.label.ends_with("/sb"))
            });
        marked.then(|| crate::scheme::sentence_label(s, pos))
    })
}

/// Convert a scheme-valid speaker-based document into its intermediate
/// and dependency-based views, one sentence per rectional unit.
pub fn convert_document(doc: &Document, options: &ConvertOptions) -> Result<Views, ConvertError> {
    if let Some(sent) = intermediate_marker(doc) {
        return Err(ConvertError::IntermediateInput(sent));
    }

    let units = cluster_units(doc, options.include_backchannels);

    // Unmerged backchannels keep their pointer, re-aimed at the target's
    // new address.
    let mut addresses: HashMap<(usize, usize), (String, usize)> = HashMap::new();
    if !options.include_backchannels {
        for unit in &units {
            for (tok, origin) in unit.merged_tokens.iter().zip(&unit.origins) {
                if let (TokenId::Word(new), TokenId::Word(old)) = (tok.id, origin.id) {
                    addresses.insert((unit.positions[origin.member], old), (unit.id.clone(), new));
                }
            }
        }
    }

    let mut intermediate = Vec::with_capacity(units.len());
    let mut dependency = Vec::with_capacity(units.len());
    for unit in units {
        let id = unit.id.clone();
        let wrap = |source| ConvertError::Unit {
            unit: id.clone(),
            source,
        };
        let unit = build_intermediate_graph(unit, doc).map_err(wrap)?;

        let mut inter = graph::intermediate_sentence(&unit);
        project::migrate_metadata(&unit, &mut inter.tokens, &options.speakers);
        inter.comments = project::unit_comments(&unit, &options.speakers);
        inter.set_meta(VIEW_KEY, INTERMEDIATE);
        intermediate.push(inter);

        let mut dep = project_dependency_view(&unit, &options.speakers).map_err(wrap)?;
        if !options.include_backchannels {
            for tok in dep.tokens.iter_mut() {
                let Some(p) = tok
                    .misc
                    .get(BACKCHANNEL)
                    .and_then(|raw| raw.parse::<BackchannelPointer>().ok())
                else {
                    continue;
                };
                let Some(target) = doc.position(&p.target_sent_id) else {
                    continue;
                };
                if let Some((sent, id)) = addresses.get(&(target, p.target_tok_id)) {
                    let moved = BackchannelPointer {
                        target_sent_id: sent.clone(),
                        target_tok_id: *id,
                    };
                    tok.misc.set(BACKCHANNEL, moved.to_string());
                }
            }
        }
        dependency.push(dep);
    }

    let duplicate = |kind| match kind {
        ParseErrorKind::DuplicateSentId(id) => ConvertError::DuplicateUnitId(id),
        other => unreachable!("document construction only fails on ids: {other}"),
    };
    Ok(Views {
        intermediate: Document::new(intermediate).map_err(duplicate)?,
        dependency: Document::new(dependency).map_err(duplicate)?,
    })
}
