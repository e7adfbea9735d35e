//! Seeded generators of random speaker-based documents.

use std::collections::HashSet;
use std::fmt::Write as _;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

const LABELS: &[&str] = &[
    "nsubj",
    "obj",
    "obl",
    "advmod",
    "amod",
    "det",
    "case",
    "nmod",
    "conj",
    "discourse",
    "mark",
    "conj:reform",
    "acl:relcl",
];
const SPEAKERS: &[&str] = &["A", "B", "C"];

#[derive(Clone, Debug)]
pub struct Word {
    pub head: usize,
    pub rel: String,
    pub misc: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct Sent {
    pub id: String,
    pub speaker: String,
    pub words: Vec<Word>,
}

/// Pointer kinds counted by [`GenSummary`].
#[derive(Clone, Debug, Default)]
pub struct GenSummary {
    pub general: usize,
    pub promotions: usize,
    pub repairs: usize,
    pub backchannels: usize,
    pub lifted: usize,
}

pub fn render(sents: &[Sent]) -> String {
    let mut out = String::new();
    for s in sents {
        let _ = writeln!(out, "# sent_id = {}\n# speaker = {}", s.id, s.speaker);
        for (i, w) in s.words.iter().enumerate() {
            let misc = if w.misc.is_empty() {
                "_".to_owned()
            } else {
                w.misc.join("|")
            };
            let _ = writeln!(
                out,
                "{}\t{}w{}\t_\tX\t_\t_\t{}\t{}\t_\t{}",
                i + 1,
                s.id,
                i + 1,
                w.head,
                w.rel,
                misc
            );
        }
        out.push('\n');
    }
    out
}

/// Random tree over `k` words: a root, then each remaining word hangs off
/// an already placed one.
fn random_tree(rng: &mut ChaCha8Rng, k: usize) -> Vec<Word> {
    let root = rng.random_range(1..=k);
    let mut order: Vec<usize> = (1..=k).filter(|&w| w != root).collect();
    order.shuffle(rng);
    let mut words = vec![
        Word {
            head: 0,
            rel: "root".into(),
            misc: Vec::new()
        };
        k
    ];
    let mut placed = vec![root];
    for w in order {
        let head = *placed.choose(rng).expect("root placed");
        words[w - 1].head = head;
        words[w - 1].rel = LABELS.choose(rng).expect("labels").to_string();
        placed.push(w);
    }
    words
}

fn root_of(s: &Sent) -> usize {
    s.words.iter().position(|w| w.head == 0).expect("root") + 1
}

/// A scheme-valid document: random trees, then pointers from sentence
/// roots back to earlier tokens. Each token is targeted at most once,
/// each head has at most one promoted child, and no token receives two
/// attachments.
pub fn scheme_document(rng: &mut ChaCha8Rng) -> (Vec<Sent>, GenSummary) {
    let n = rng.random_range(1..=7);
    let mut sents: Vec<Sent> = (0..n)
        .map(|i| Sent {
            id: format!("g{}", i + 1),
            speaker: SPEAKERS.choose(rng).expect("speakers").to_string(),
            words: {
                let k = rng.random_range(1..=6);
                random_tree(rng, k)
            },
        })
        .collect();

    let mut summary = GenSummary::default();
    let mut targeted: HashSet<(usize, usize)> = HashSet::new();
    let mut attached: HashSet<(usize, usize)> = HashSet::new();
    let mut promoted_heads: HashSet<(usize, usize)> = HashSet::new();

    for j in 1..n {
        if !rng.random_bool(0.75) {
            continue;
        }
        let bearer = (j, root_of(&sents[j]));
        let earlier: Vec<(usize, usize)> = (0..j)
            .flat_map(|i| (1..=sents[i].words.len()).map(move |t| (i, t)))
            .filter(|r| !targeted.contains(r))
            .collect();
        if earlier.is_empty() {
            continue;
        }
        let pointer = match rng.random_range(0..4) {
            0 => {
                // completion with promotion
                let scraps: Vec<(usize, usize)> = earlier
                    .iter()
                    .copied()
                    .filter(|&(i, c)| {
                        let w = &sents[i].words[c - 1];
                        w.head != 0
                            && !attached.contains(&(i, c))
                            && !targeted.contains(&(i, w.head))
                            && !promoted_heads.contains(&(i, w.head))
                    })
                    .collect();
                let Some(&(i, c)) = scraps.choose(rng) else {
                    continue;
                };
                let h = sents[i].words[c - 1].head;
                let rel = sents[i].words[c - 1].rel.clone();
                let promotion = LABELS.choose(rng).expect("labels").to_string();
                let scrap = &mut sents[i].words[c - 1].misc;
                scrap.push("Scrap=Yes".into());
                scrap.push(format!("Promotion={}", promotion));
                for d in 1..=sents[i].words.len() {
                    if sents[i].words[d - 1].head != c || attached.contains(&(i, d)) {
                        continue;
                    }
                    match rng.random_range(0..3) {
                        0 => {
                            sents[i].words[d - 1].misc.push("Head=Position".into());
                            attached.insert((i, d));
                            targeted.insert((i, d));
                            summary.lifted += 1;
                        }
                        1 => sents[i].words[d - 1].misc.push("Head=Word".into()),
                        _ => {}
                    }
                }
                promoted_heads.insert((i, h));
                targeted.insert((i, h));
                targeted.insert((i, c));
                attached.insert((i, c));
                summary.promotions += 1;
                format!("Coconstruct={}::{}::{}", rel, sents[i].id, h)
            }
            1 => {
                let options: Vec<(usize, usize)> = earlier
                    .iter()
                    .copied()
                    .filter(|r| !attached.contains(r))
                    .collect();
                let Some(&(i, t)) = options.choose(rng) else {
                    continue;
                };
                targeted.insert((i, t));
                attached.insert((i, t));
                summary.repairs += 1;
                format!("Coconstruct=repair::{}::{}", sents[i].id, t)
            }
            2 => {
                let &(i, t) = earlier.choose(rng).expect("non-empty");
                targeted.insert((i, t));
                summary.backchannels += 1;
                format!("Backchannel={}::{}", sents[i].id, t)
            }
            _ => {
                let &(i, t) = earlier.choose(rng).expect("non-empty");
                targeted.insert((i, t));
                summary.general += 1;
                let rel = LABELS.choose(rng).expect("labels");
                format!("Coconstruct={}::{}::{}", rel, sents[i].id, t)
            }
        };
        attached.insert(bearer);
        targeted.insert(bearer);
        sents[j].words[bearer.1 - 1].misc.push(pointer);
    }
    (sents, summary)
}

/// One pointer of a random link graph, from `from` to `to` by position.
#[derive(Clone, Copy, Debug)]
pub struct Link {
    pub from: usize,
    pub to: usize,
    pub backchannel: bool,
}

/// Sentences with pointers in any direction, including pointers to
/// missing sentences, which clustering ignores. Returns the document
/// text and the links that resolve.
pub fn link_graph(rng: &mut ChaCha8Rng) -> (String, usize, Vec<Link>) {
    let n = rng.random_range(1..=15);
    let mut misc: Vec<Vec<String>> = vec![Vec::new(); n];
    let mut links = Vec::new();
    for _ in 0..rng.random_range(0..=n + 2) {
        let from = rng.random_range(0..n);
        let backchannel = rng.random_bool(0.3);
        if rng.random_bool(0.1) {
            misc[from].push(if backchannel {
                "Backchannel=nowhere::1".to_owned()
            } else {
                "Coconstruct=obl::nowhere::1".to_owned()
            });
            continue;
        }
        let to = rng.random_range(0..n);
        misc[from].push(if backchannel {
            format!("Backchannel=l{}::1", to)
        } else {
            format!("Coconstruct=obl::l{}::1", to)
        });
        links.push(Link {
            from,
            to,
            backchannel,
        });
    }

    let mut text = String::new();
    for (i, m) in misc.iter().enumerate() {
        let _ = writeln!(text, "# sent_id = l{}", i);
        let _ = writeln!(text, "1\tw\t_\tX\t_\t_\t0\troot\t_\t_");
        // one pointer per word keeps each MISC column well formed
        for (k, p) in m.iter().enumerate() {
            let _ = writeln!(text, "{}\tw\t_\tX\t_\t_\t1\tdep\t_\t{}", k + 2, p);
        }
        text.push('\n');
    }
    (text, n, links)
}
