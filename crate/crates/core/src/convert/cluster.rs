use super::union_find::UnionFind;
use super::GraphEdge;
use crate::conllu::{DepHead, Document, Sentence, Token, TokenId};
use crate::scheme::{scan_features, sentence_label};

/// A word addressed by document position and its speaker-view id.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TokenRef {
    pub sentence: usize,
    pub token: usize,
}

impl TokenRef {
    pub fn new(sentence: usize, token: usize) -> Self {
        TokenRef { sentence, token }
    }
}

/// Where a merged row came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TokenOrigin {
    /// Index into [`RectionalUnit::members`].
    pub member: usize,
    pub id: TokenId,
}

/// Old `(sentence, word id)` to merged word id.
///
/// Members are concatenated in document order, so each member's words
/// are shifted by the number of words before it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Renumbering {
    positions: Vec<usize>,
    offsets: Vec<usize>,
    lengths: Vec<usize>,
}

impl Renumbering {
    pub fn member_of(&self, sentence: usize) -> Option<usize> {
        self.positions.iter().position(|&p| p == sentence)
    }

    pub fn offset(&self, member: usize) -> usize {
        self.offsets[member]
    }

    /// Merged id of a speaker-view word, if it belongs to this unit.
    pub fn map(&self, r: TokenRef) -> Option<usize> {
        let m = self.member_of(r.sentence)?;
        (r.token >= 1 && r.token <= self.lengths[m]).then(|| r.token + self.offsets[m])
    }

    /// Inverse of [`Renumbering::map`].
    pub fn source(&self, merged: usize) -> Option<TokenRef> {
        (0..self.positions.len())
            .rev()
            .find(|&m| merged > self.offsets[m] && merged <= self.offsets[m] + self.lengths[m])
            .map(|m| TokenRef::new(self.positions[m], merged - self.offsets[m]))
    }
}

/// A rectional unit: sentences joined by pointers, with their merged and
/// renumbered token sequence and, once built, the intermediate graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RectionalUnit {
    /// Merged `sent_id` (member ids joined with `+`).
    pub id: String,
    /// Document positions of the members, ascending.
    pub positions: Vec<usize>,
    /// Member sentences as they appear in the speaker-based view.
    pub members: Vec<Sentence>,
    /// Member rows concatenated and renumbered; HEAD and DEPS are mapped
    /// to the new ids but otherwise keep the speaker-based tree.
    pub merged_tokens: Vec<Token>,
    pub origins: Vec<TokenOrigin>,
    pub renumbering: Renumbering,
    pub edges: Vec<GraphEdge>,
    /// Whether backchannel pointers joined this unit.
    pub include_backchannels: bool,
}

impl RectionalUnit {
    pub fn is_singleton(&self) -> bool {
        self.members.len() == 1
    }

    pub(crate) fn sentence(&self, position: usize) -> &Sentence {
        let m = self
            .renumbering
            .member_of(position)
            .expect("position belongs to unit");
        &self.members[m]
    }

    pub(crate) fn word(&self, r: TokenRef) -> Option<&Token> {
        let m = self.renumbering.member_of(r.sentence)?;
        self.members[m].word(r.token)
    }
}

/// Group sentences linked by `Coconstruct` pointers (and `Backchannel`
/// pointers when `include_backchannels` is set) into rectional units.
///
/// Links are undirected and transitive. Pointers that do not resolve are
/// ignored here; validation reports them. Units come back in order of
/// their first member, with edges still empty.
pub fn cluster_units(doc: &Document, include_backchannels: bool) -> Vec<RectionalUnit> {
    let sentences = doc.sentences();
    let mut uf = UnionFind::new(sentences.len());
    for (pos, s) in sentences.iter().enumerate() {
        for tok in s.words() {
            let (feats, _) = scan_features(&tok.misc);
            let mut link = |sent_id: &str| {
                if let Some(target) = doc.position(sent_id) {
                    uf.union(pos, target);
                }
            };
            if let Some(p) = &feats.coconstruct {
                link(&p.target_sent_id);
            }
            if include_backchannels {
                if let Some(p) = &feats.backchannel {
                    link(&p.target_sent_id);
                }
            }
        }
    }

    uf.groups()
        .into_iter()
        .map(|positions| build_unit(doc, positions, include_backchannels))
        .collect()
}

fn build_unit(doc: &Document, positions: Vec<usize>, include_backchannels: bool) -> RectionalUnit {
    let members: Vec<Sentence> = positions
        .iter()
        .map(|&p| doc.sentences()[p].clone())
        .collect();

    let mut offsets = Vec::with_capacity(members.len());
    let mut lengths = Vec::with_capacity(members.len());
    let mut total = 0;
    for s in &members {
        offsets.push(total);
        let n = s.word_count();
        lengths.push(n);
        total += n;
    }

    let mut merged_tokens = Vec::with_capacity(members.iter().map(|s| s.tokens.len()).sum());
    let mut origins = Vec::with_capacity(merged_tokens.capacity());
    for (m, s) in members.iter().enumerate() {
        let offset = offsets[m];
        for tok in &s.tokens {
            let mut t = tok.clone();
            t.id = tok.id.shifted(offset);
            t.head = tok.head.map(|h| if h == 0 { 0 } else { h + offset });
            for dep in &mut t.deps {
                if let DepHead::Node(id) = dep.head {
                    dep.head = DepHead::Node(id.shifted(offset));
                }
            }
            merged_tokens.push(t);
            origins.push(TokenOrigin {
                member: m,
                id: tok.id,
            });
        }
    }

    let id = if members.len() == 1 {
        members[0].sent_id().unwrap_or_default().to_owned()
    } else {
        positions
            .iter()
            .zip(&members)
            .map(|(&p, s)| sentence_label(s, p))
            .collect::<Vec<_>>()
            .join("+")
    };

    RectionalUnit {
        id,
        renumbering: Renumbering {
            positions: positions.clone(),
            offsets,
            lengths,
        },
        positions,
        members,
        merged_tokens,
        origins,
        edges: Vec::new(),
        include_backchannels,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sentence(id: &str, misc: &[&str]) -> String {
        let mut out = format!("# sent_id = {}\n", id);
        for (i, m) in misc.iter().enumerate() {
            let head = if i == 0 { 0 } else { 1 };
            let rel = if i == 0 { "root" } else { "dep" };
            out.push_str(&format!(
                "{}\tw{}\t_\t_\t_\t_\t{}\t{}\t_\t{}\n",
                i + 1,
                i + 1,
                head,
                rel,
                m
            ));
        }
        out.push('\n');
        out
    }

    #[test]
    fn unlinked_sentences_are_singletons() {
        let doc: Document = [sentence("a", &["_", "_"]), sentence("b", &["_"])]
            .concat()
            .parse()
            .unwrap();
        let units = cluster_units(&doc, true);
        assert_eq!(units.len(), 2);
        assert_eq!(units[0].merged_tokens, doc.sentences()[0].tokens);
        assert_eq!(units[1].merged_tokens, doc.sentences()[1].tokens);
        assert_eq!(units[1].id, "b");
    }

    #[test]
    fn chain_forms_one_unit() {
        let doc: Document = [
            sentence("s1", &["_", "_"]),
            sentence("s2", &["Coconstruct=obj::s1::1", "_"]),
            sentence("s3", &["Coconstruct=conj:reform::s2::2"]),
        ]
        .concat()
        .parse()
        .unwrap();
        let units = cluster_units(&doc, false);
        assert_eq!(units.len(), 1);
        let u = &units[0];
        assert_eq!(u.id, "s1+s2+s3");
        assert_eq!(u.positions, vec![0, 1, 2]);
        let ids: Vec<String> = u.merged_tokens.iter().map(|t| t.id.to_string()).collect();
        assert_eq!(ids, ["1", "2", "3", "4", "5"]);
        // second sentence's dependent now points at merged id 3
        assert_eq!(u.merged_tokens[3].head, Some(3));
        assert_eq!(u.merged_tokens[2].head, Some(0));
        assert_eq!(u.renumbering.map(TokenRef::new(2, 1)), Some(5));
        assert_eq!(u.renumbering.source(4), Some(TokenRef::new(1, 2)));
        assert_eq!(u.renumbering.map(TokenRef::new(2, 2)), None);
    }

    #[test]
    fn backchannel_links_follow_the_flag() {
        let doc: Document = [
            sentence("s1", &["_"]),
            sentence("s2", &["Backchannel=s1::1"]),
        ]
        .concat()
        .parse()
        .unwrap();
        assert_eq!(cluster_units(&doc, true).len(), 1);
        assert_eq!(cluster_units(&doc, false).len(), 2);
    }

    #[test]
    fn ranges_and_empty_nodes_shift_with_their_words() {
        let doc: Document = "# sent_id = a\n1\tx\t_\t_\t_\t_\t0\troot\t_\t_\n\n\
# sent_id = b\n1-2\tdel\t_\t_\t_\t_\t_\t_\t_\t_\n1\tdi\t_\t_\t_\t_\t2\tcase\t_\t_\n\
2\til\t_\t_\t_\t_\t0\troot\t_\tCoconstruct=nmod::a::1\n2.1\tè\t_\t_\t_\t_\t_\t_\t2:dep\t_\n\n"
            .parse()
            .unwrap();
        let u = &cluster_units(&doc, true)[0];
        let ids: Vec<String> = u.merged_tokens.iter().map(|t| t.id.to_string()).collect();
        assert_eq!(ids, ["1", "2-3", "2", "3", "3.1"]);
        assert_eq!(u.merged_tokens[4].deps[0].to_string(), "3:dep");
    }
}
