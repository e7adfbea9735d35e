use std::collections::HashSet;
use std::fmt;

use super::{RectionalUnit, TokenRef, UnitError};
use crate::conllu::{Dep, DepHead, Document, Sentence, TokenId};
use crate::scheme::{
    parse_scheme_features, sentence_label, HeadMode, SchemeFeatures, BACKCHANNEL_RELATION,
    REPARANDUM,
};

/// Kind of an edge in the intermediate graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeTag {
    /// Speaker-based edge kept as is.
    Tree,
    /// Edge created from a pointer, a promotion or a lifting.
    Attach,
    /// Speaker-based edge superseded by an attach edge.
    Sb,
}

impl EdgeTag {
    /// Suffix used in the DEPS column of the intermediate view.
    pub fn suffix(self) -> &'static str {
        match self {
            EdgeTag::Tree => "",
            EdgeTag::Attach => "/attach",
            EdgeTag::Sb => "/sb",
        }
    }
}

/// Labeled edge between speaker-view words; `head == None` is the root.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GraphEdge {
    pub head: Option<TokenRef>,
    pub dep: TokenRef,
    pub label: String,
    pub tag: EdgeTag,
}

impl GraphEdge {
    fn new(head: Option<TokenRef>, dep: TokenRef, label: impl Into<String>, tag: EdgeTag) -> Self {
        GraphEdge {
            head,
            dep,
            label: label.into(),
            tag,
        }
    }
}

impl fmt::Display for GraphEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.head {
            Some(h) => write!(f, "{}:{}", h.sentence, h.token)?,
            None => f.write_str("root")?,
        }
        write!(
            f,
            " -> {}:{} {}{}",
            self.dep.sentence,
            self.dep.token,
            self.label,
            self.tag.suffix()
        )
    }
}

struct Builder<'a> {
    unit: &'a RectionalUnit,
    edges: Vec<GraphEdge>,
}

impl Builder<'_> {
    fn incoming_tree(&self, dep: TokenRef) -> Option<usize> {
        self.edges
            .iter()
            .position(|e| e.dep == dep && e.tag != EdgeTag::Attach)
    }

    /// Mark the speaker-based edge into `dep` as superseded, returning it.
    fn demote(&mut self, dep: TokenRef) -> Option<GraphEdge> {
        let i = self.incoming_tree(dep)?;
        self.edges[i].tag = EdgeTag::Sb;
        Some(self.edges[i].clone())
    }

    fn attach(&mut self, head: Option<TokenRef>, dep: TokenRef, label: &str) {
        self.edges
            .push(GraphEdge::new(head, dep, label, EdgeTag::Attach));
    }

    /// Speaker-based children of `head` in their original order.
    fn tree_children(&self, head: TokenRef) -> Vec<(TokenRef, String)> {
        self.edges
            .iter()
            .filter(|e| e.head == Some(head) && e.tag == EdgeTag::Tree)
            .map(|e| (e.dep, e.label.clone()))
            .collect()
    }

    /// Move `Head=Position` children of `from` onto `to`.
    fn lift_positional(&mut self, from: TokenRef, to: TokenRef) -> Result<(), UnitError> {
        for (child, label) in self.tree_children(from) {
            let tok = self.unit.word(child).expect("edge endpoint exists");
            if features(self.unit, child, tok)?.head_mode == Some(HeadMode::Position) {
                self.demote(child);
                self.attach(Some(to), child, &label);
            }
        }
        Ok(())
    }
}

fn features(
    unit: &RectionalUnit,
    at: TokenRef,
    tok: &crate::conllu::Token,
) -> Result<SchemeFeatures, UnitError> {
    parse_scheme_features(&tok.misc).map_err(|source| UnitError::Scheme {
        sent_id: sentence_label(unit.sentence(at.sentence), at.sentence),
        tok_id: at.token,
        source,
    })
}

fn resolve(
    unit: &RectionalUnit,
    doc: &Document,
    bearer: TokenRef,
    sent_id: &str,
    tok_id: usize,
) -> Result<TokenRef, UnitError> {
    let target = doc
        .position(sent_id)
        .map(|p| TokenRef::new(p, tok_id))
        .filter(|&t| unit.word(t).is_some());
    target.ok_or_else(|| UnitError::Unresolved {
        sent_id: sentence_label(unit.sentence(bearer.sentence), bearer.sentence),
        tok_id: bearer.token,
        target: format!("{}::{}", sent_id, tok_id),
    })
}

/// Populate `unit.edges` with the intermediate graph.
///
/// Every speaker-based edge starts out as `Tree`. Each pointer then adds
/// `Attach` edges and demotes the edges they replace to `Sb`; the bearer's
/// own speaker-based edge is always demoted. Three pointer cases exist:
///
/// * completion with promotion: the target has a child with the pointer's
///   relation and a `Promotion` value. That scrap moves under the bearer
///   with its promoted relation, and its `Head=Position` children follow;
/// * repair: the bearer takes the target's place and the target hangs
///   off the bearer as `reparandum`;
/// * anything else (stacking, plain completion, backchannels): the
///   bearer attaches to the target.
pub fn build_intermediate_graph(
    mut unit: RectionalUnit,
    doc: &Document,
) -> Result<RectionalUnit, UnitError> {
    let mut b = Builder {
        unit: &unit,
        edges: Vec::new(),
    };

    for (&pos, s) in unit.positions.iter().zip(&unit.members) {
        for tok in s.words() {
            let id = tok.id.word().expect("word row");
            if let Some(h) = tok.head {
                let head = (h > 0).then(|| TokenRef::new(pos, h));
                b.edges.push(GraphEdge::new(
                    head,
                    TokenRef::new(pos, id),
                    tok.deprel(),
                    EdgeTag::Tree,
                ));
            }
        }
    }

    let mut resolved_scraps: HashSet<TokenRef> = HashSet::new();
    for (&pos, s) in unit.positions.iter().zip(&unit.members) {
        for tok in s.words() {
            let bearer = TokenRef::new(pos, tok.id.word().expect("word row"));
            let feats = features(&unit, bearer, tok)?;

            if let Some(p) = &feats.coconstruct {
                let target = resolve(&unit, doc, bearer, &p.target_sent_id, p.target_tok_id)?;
                b.demote(bearer);
                if p.is_repair() {
                    let replaced = b.demote(target);
                    let (head, label) = match replaced {
                        Some(e) => (e.head, e.label),
                        None => (None, "root".to_owned()),
                    };
                    b.attach(head, bearer, &label);
                    b.attach(Some(bearer), target, REPARANDUM);
                    b.lift_positional(target, bearer)?;
                    continue;
                }

                let mut scraps = Vec::new();
                for (child, label) in b.tree_children(target) {
                    if label != p.deprel || resolved_scraps.contains(&child) {
                        continue;
                    }
                    let child_tok = unit.word(child).expect("edge endpoint exists");
                    if let Some(promotion) = features(&unit, child, child_tok)?.promotion {
                        scraps.push((child, promotion));
                    }
                }
                match scraps.as_slice() {
                    [] => b.attach(Some(target), bearer, &p.deprel),
                    [(scrap, promotion)] => {
                        let (scrap, promotion) = (*scrap, promotion.clone());
                        resolved_scraps.insert(scrap);
                        b.demote(scrap);
                        b.attach(Some(target), bearer, &p.deprel);
                        b.attach(Some(bearer), scrap, &promotion);
                        b.lift_positional(scrap, bearer)?;
                    }
                    [(first, _), (second, _), ..] => {
                        let name = |r: TokenRef| {
                            let s = unit.sentence(r.sentence);
                            format!("{}::{}", sentence_label(s, r.sentence), r.token)
                        };
                        return Err(UnitError::AmbiguousScrap {
                            first: name(*first),
                            second: name(*second),
                        });
                    }
                }
            }

            if unit.include_backchannels {
                if let Some(p) = &feats.backchannel {
                    let target = resolve(&unit, doc, bearer, &p.target_sent_id, p.target_tok_id)?;
                    b.demote(bearer);
                    b.attach(Some(target), bearer, BACKCHANNEL_RELATION);
                }
            }
        }
    }

    let edges = b.edges;
    unit.edges = edges;
    Ok(unit)
}

/// The unit as one intermediate-view sentence: HEAD and DEPREL keep the
/// speaker-based tree, DEPS lists every graph edge with its tag suffix.
pub(crate) fn intermediate_sentence(unit: &RectionalUnit) -> Sentence {
    let mut tokens = unit.merged_tokens.clone();
    let map = |r: TokenRef| unit.renumbering.map(r).expect("edge inside unit");

    for tok in tokens.iter_mut() {
        if let TokenId::Word(id) = tok.id {
            let here = unit.renumbering.source(id).expect("word inside unit");
            let mut deps: Vec<(usize, Dep)> = unit
                .edges
                .iter()
                .filter(|e| e.dep == here)
                .map(|e| {
                    let head = e.head.map(map).unwrap_or(0);
                    let dh = if head == 0 {
                        DepHead::Root
                    } else {
                        DepHead::Node(TokenId::Word(head))
                    };
                    (head, Dep::new(dh, format!("{}{}", e.label, e.tag.suffix())))
                })
                .collect();
            deps.sort_by_key(|(head, _)| *head);
            tok.deps = deps.into_iter().map(|(_, d)| d).collect();
        }
    }

    Sentence {
        comments: Vec::new(),
        tokens,
    }
}
