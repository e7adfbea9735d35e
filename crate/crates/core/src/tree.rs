//! Well-formedness of basic dependency trees.

use std::fmt;

use crate::conllu::Sentence;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TreeError {
    NoRoot,
    MultipleRoots(Vec<usize>),
    MissingHead(usize),
    DanglingHead { dep: usize, head: usize },
    Cycle(usize),
}

impl fmt::Display for TreeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeError::NoRoot => f.write_str("no word is attached to the root"),
            TreeError::MultipleRoots(ids) => {
                let ids: Vec<_> = ids.iter().map(|i| i.to_string()).collect();
                write!(f, "multiple roots: {}", ids.join(", "))
            }
            TreeError::MissingHead(id) => write!(f, "word {} has no head", id),
            TreeError::DanglingHead { dep, head } => {
                write!(f, "word {} points to missing head {}", dep, head)
            }
            TreeError::Cycle(id) => write!(f, "cycle through word {}", id),
        }
    }
}

impl std::error::Error for TreeError {}

/// Check that `heads` (entry `i` is the head of word `i + 1`, `0` for the
/// root) describe a single-rooted, acyclic, connected tree. Returns the
/// root's word id.
pub fn check_heads(heads: &[Option<usize>]) -> Result<usize, TreeError> {
    let n = heads.len();
    let mut roots = Vec::new();
    for (i, head) in heads.iter().enumerate() {
        let dep = i + 1;
        match *head {
            None => return Err(TreeError::MissingHead(dep)),
            Some(0) => roots.push(dep),
            Some(h) if h > n => return Err(TreeError::DanglingHead { dep, head: h }),
            Some(_) => {}
        }
    }

    // 0 = unvisited, 1 = on current path, 2 = reaches the root
    let mut state = vec![0u8; n + 1];
    state[0] = 2;
    for start in 1..=n {
        let mut path = Vec::new();
        let mut cur = start;
        while state[cur] == 0 {
            state[cur] = 1;
            path.push(cur);
            cur = heads[cur - 1].unwrap_or(0);
        }
        if state[cur] == 1 {
            return Err(TreeError::Cycle(cur));
        }
        for node in path {
            state[node] = 2;
        }
    }

    match roots.len() {
        0 => Err(TreeError::NoRoot),
        1 => Ok(roots[0]),
        _ => Err(TreeError::MultipleRoots(roots)),
    }
}

/// Check the basic tree of a sentence's word rows.
pub fn check_sentence(sentence: &Sentence) -> Result<usize, TreeError> {
    let heads: Vec<Option<usize>> = sentence.words().map(|t| t.head).collect();
    check_heads(&heads)
}
