//! Synthetic corpora for benchmarking.

use std::fmt::Write as _;

const FIRST_TURN: &[(&str, usize, &str)] = &[
    ("we", 2, "nsubj"),
    ("went", 0, "root"),
    ("to", 2, "obl"),
    ("the", 3, "det"),
];

/// A dialogue of `pairs` two-turn exchanges. The second turn backchannels
/// every fifth exchange and completes the first turn every third one.
pub fn dialogue(pairs: usize) -> String {
    let mut out = String::new();
    for p in 0..pairs {
        let first = format!("d{}a", p);
        let _ = writeln!(
            out,
            "# sent_id = {}\n# speaker = A\n# text = we went to the",
            first
        );
        for (i, (form, head, rel)) in FIRST_TURN.iter().enumerate() {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\tX\t_\t_\t{}\t{}\t_\t_",
                i + 1,
                form,
                form,
                head,
                rel
            );
        }
        out.push('\n');

        let pointer = if p % 5 == 0 {
            format!("Backchannel={}::2", first)
        } else if p % 3 == 0 {
            format!("Coconstruct=obl::{}::2", first)
        } else {
            "_".to_owned()
        };
        let _ = writeln!(out, "# sent_id = d{}b\n# speaker = B\n# text = market", p);
        let _ = writeln!(
            out,
            "1\tmarket\tmarket\tNOUN\t_\t_\t0\troot\t_\t{}\n",
            pointer
        );
    }
    out
}
