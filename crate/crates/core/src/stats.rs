//! Counts of scheme annotations over a document.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::AddAssign;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::conllu::{Document, Sentence};
use crate::convert::cluster_units;
use crate::scheme::{BACKCHANNEL, COCONSTRUCT, PROMOTION, SCRAP};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SchemeStats {
    pub sentences: usize,
    /// Syntactic words; multiword ranges and empty nodes are not counted.
    pub tokens: usize,
    /// Sentences with at least one `Backchannel` bearer.
    pub backchannel_sentences: usize,
    pub coconstruct_tokens: usize,
    /// Pointer relation of each `Coconstruct` bearer.
    pub by_deprel: BTreeMap<String, usize>,
    pub scrap_tokens: usize,
    pub promotion_by_label: BTreeMap<String, usize>,
    /// Rectional units with more than one member, linked by `Coconstruct`
    /// pointers only.
    pub units_multi_member: usize,
}

impl AddAssign<&SchemeStats> for SchemeStats {
    fn add_assign(&mut self, rhs: &SchemeStats) {
        self.sentences += rhs.sentences;
        self.tokens += rhs.tokens;
        self.backchannel_sentences += rhs.backchannel_sentences;
        self.coconstruct_tokens += rhs.coconstruct_tokens;
        for (k, v) in &rhs.by_deprel {
            *self.by_deprel.entry(k.clone()).or_default() += v;
        }
        self.scrap_tokens += rhs.scrap_tokens;
        for (k, v) in &rhs.promotion_by_label {
            *self.promotion_by_label.entry(k.clone()).or_default() += v;
        }
        self.units_multi_member += rhs.units_multi_member;
    }
}

pub fn compute_stats(doc: &Document) -> SchemeStats {
    let mut stats = SchemeStats {
        sentences: doc.len(),
        ..SchemeStats::default()
    };
    for tok in doc.sentences().iter().flat_map(Sentence::words) {
        stats.tokens += 1;
        if let Some(raw) = tok.misc.get(COCONSTRUCT) {
            stats.coconstruct_tokens += 1;
            let label = raw.split("::").next().unwrap_or_default();
            *stats.by_deprel.entry(label.to_owned()).or_default() += 1;
        }
        if tok.misc.contains_key(SCRAP) {
            stats.scrap_tokens += 1;
        }
        if let Some(label) = tok.misc.get(PROMOTION) {
            *stats
                .promotion_by_label
                .entry(label.to_owned())
                .or_default() += 1;
        }
    }
    stats.backchannel_sentences = doc
        .sentences()
        .iter()
        .filter(|s| s.words().any(|t| t.misc.contains_key(BACKCHANNEL)))
        .count();
    stats.units_multi_member = cluster_units(doc, false)
        .iter()
        .filter(|u| !u.is_singleton())
        .count();
    stats
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Tsv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("unknown format `{0}` (expected tsv or json)")]
pub struct UnknownFormat(pub String);

impl FromStr for Format {
    type Err = UnknownFormat;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tsv" => Ok(Format::Tsv),
            "json" => Ok(Format::Json),
            other => Err(UnknownFormat(other.to_owned())),
        }
    }
}

/// Render as a header line plus one row (TSV), or as a JSON object.
///
/// Map entries become extra TSV columns named `by_deprel:<label>` and
/// `promotion:<label>`.
pub fn render_stats(stats: &SchemeStats, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(stats).expect("stats serialize") + "\n",
        Format::Tsv => {
            let mut columns: Vec<(String, usize)> = vec![
                ("sentences".into(), stats.sentences),
                ("tokens".into(), stats.tokens),
                ("backchannel_sentences".into(), stats.backchannel_sentences),
                ("coconstruct_tokens".into(), stats.coconstruct_tokens),
                ("scrap_tokens".into(), stats.scrap_tokens),
                ("units_multi_member".into(), stats.units_multi_member),
            ];
            columns.extend(
                stats
                    .by_deprel
                    .iter()
                    .map(|(k, v)| (format!("by_deprel:{}", k), *v)),
            );
            columns.extend(
                stats
                    .promotion_by_label
                    .iter()
                    .map(|(k, v)| (format!("promotion:{}", k), *v)),
            );
            let mut out = String::new();
            let header: Vec<&str> = columns.iter().map(|(k, _)| k.as_str()).collect();
            let values: Vec<String> = columns.iter().map(|(_, v)| v.to_string()).collect();
            let _ = writeln!(out, "{}", header.join("\t"));
            let _ = writeln!(out, "{}", values.join("\t"));
            out
        }
    }
}
