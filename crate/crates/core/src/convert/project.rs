use super::{EdgeTag, RectionalUnit, UnitError};
use crate::conllu::{parse_meta, Dep, DepHead, Sentence, SpeakerKeys, Token, TokenId};
use crate::scheme::{
    parse_scheme_features, sentence_label, HeadMode, BACKCHANNEL, COCONSTRUCT, COCONSTRUCT_FROM,
    HEAD, SPEAKER,
};
use crate::tree;

/// Speaker from a member's comment block only.
fn comment_speaker<'a>(s: &'a Sentence, keys: &SpeakerKeys) -> Option<&'a str> {
    keys.iter().find_map(|k| s.meta(k))
}

/// Add `Speaker=` and, for merged units, `CoconstructFrom=` to every word.
pub(crate) fn migrate_metadata(unit: &RectionalUnit, tokens: &mut [Token], keys: &SpeakerKeys) {
    let speakers: Vec<Option<&str>> = unit
        .members
        .iter()
        .map(|s| comment_speaker(s, keys))
        .collect();
    let labels: Vec<String> = unit
        .positions
        .iter()
        .zip(&unit.members)
        .map(|(&p, s)| sentence_label(s, p))
        .collect();

    for (tok, origin) in tokens.iter_mut().zip(&unit.origins) {
        if !tok.is_word() {
            continue;
        }
        if let Some(speaker) = speakers[origin.member] {
            if !tok.misc.contains_key(SPEAKER) {
                tok.misc.push(SPEAKER, speaker);
            }
        }
        if !unit.is_singleton() && !tok.misc.contains_key(COCONSTRUCT_FROM) {
            tok.misc
                .push(COCONSTRUCT_FROM, labels[origin.member].as_str());
        }
    }
}

/// Comment block of the unit's output sentence.
///
/// Speaker lines move to the tokens. A merged unit gets a fresh
/// `sent_id` and `text` followed by the members' remaining comments.
pub(crate) fn unit_comments(unit: &RectionalUnit, keys: &SpeakerKeys) -> Vec<String> {
    let is_speaker = |c: &String| parse_meta(c).is_some_and(|(k, _)| keys.contains(k));
    if unit.is_singleton() {
        return unit.members[0]
            .comments
            .iter()
            .filter(|c| !is_speaker(c))
            .cloned()
            .collect();
    }

    let text = unit
        .members
        .iter()
        .map(|s| {
            s.text()
                .map(str::to_owned)
                .unwrap_or_else(|| s.rebuild_text())
        })
        .collect::<Vec<_>>()
        .join(" ");
    let mut comments = vec![
        format!("# sent_id = {}", unit.id),
        format!("# text = {}", text),
    ];
    for s in &unit.members {
        comments.extend(
            s.comments
                .iter()
                .filter(|c| {
                    !is_speaker(c)
                        && !parse_meta(c).is_some_and(|(k, _)| k == "sent_id" || k == "text")
                })
                .cloned(),
        );
    }
    comments
}

/// Project the intermediate graph onto a UD tree.
///
/// Attach edges win over speaker-based ones; superseded edges disappear.
/// Consumed pointers and lifted `Head=Position` marks are removed from
/// MISC, speaker metadata moves onto the tokens, and merged units record
/// each token's source sentence in `CoconstructFrom`.
pub fn project_dependency_view(
    unit: &RectionalUnit,
    keys: &SpeakerKeys,
) -> Result<Sentence, UnitError> {
    let n: usize = unit.members.iter().map(Sentence::word_count).sum();
    let map = |r| unit.renumbering.map(r).expect("edge inside unit");

    let mut chosen: Vec<Option<(usize, &str)>> = vec![None; n + 1];
    let mut attached = vec![false; n + 1];
    for e in unit.edges.iter().filter(|e| e.tag == EdgeTag::Attach) {
        let dep = map(e.dep);
        if attached[dep] {
            return Err(UnitError::MultipleHeads(dep));
        }
        attached[dep] = true;
        chosen[dep] = Some((e.head.map(map).unwrap_or(0), &e.label));
    }
    for e in unit.edges.iter().filter(|e| e.tag == EdgeTag::Tree) {
        let dep = map(e.dep);
        if !attached[dep] {
            chosen[dep] = Some((e.head.map(map).unwrap_or(0), &e.label));
        }
    }

    let mut tokens = unit.merged_tokens.clone();
    let mut heads = Vec::with_capacity(n);
    for tok in tokens.iter_mut() {
        let TokenId::Word(id) = tok.id else { continue };
        let (head, label) = chosen[id].ok_or(UnitError::MissingHead(id))?;
        heads.push(Some(head));
        if tok.head == Some(head) && tok.deprel.as_deref() == Some(label) {
            continue;
        }
        let old = tok
            .head
            .map(|h| (basic_dep_head(h), tok.deprel().to_owned()));
        if let Some((old_head, old_label)) = old {
            for d in tok.deps.iter_mut() {
                if d.head == old_head && d.label == old_label {
                    *d = Dep::new(basic_dep_head(head), label);
                }
            }
        }
        tok.head = Some(head);
        tok.deprel = Some(label.to_owned());

        if attached[id] {
            let src = unit.renumbering.source(id).expect("word inside unit");
            let feats = parse_scheme_features(&tok.misc).map_err(|source| UnitError::Scheme {
                sent_id: sentence_label(unit.sentence(src.sentence), src.sentence),
                tok_id: src.token,
                source,
            })?;
            if feats.head_mode == Some(HeadMode::Position) {
                tok.misc.remove(HEAD);
            }
        }
    }
    tree::check_heads(&heads).map_err(UnitError::Tree)?;

    for tok in tokens.iter_mut().filter(|t| t.is_word()) {
        tok.misc.remove(COCONSTRUCT);
        if unit.include_backchannels {
            tok.misc.remove(BACKCHANNEL);
        }
    }
    migrate_metadata(unit, &mut tokens, keys);

    Ok(Sentence {
        comments: unit_comments(unit, keys),
        tokens,
    })
}

fn basic_dep_head(head: usize) -> DepHead {
    if head == 0 {
        DepHead::Root
    } else {
        DepHead::Node(TokenId::Word(head))
    }
}
