use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use coconstruct::convert::intermediate_marker;
use coconstruct::detect::{candidates_to_jsonl, candidates_to_tsv, derive_lexicon_from};
use coconstruct::scheme::{issues_to_jsonl, issues_to_tsv, Severity};
use coconstruct::{
    compute_stats, convert_document, detect_backchannels, detect_incompletions,
    import_legacy_rhapsodie, parse_document, render_stats, validate_document_with,
    BackchannelLexicon, ConvertOptions, DetectConfig, Document, Format, SchemeStats, SpeakerKeys,
    ValidationIssue,
};

const SPEAKER_KEYS_VAR: &str = "COCONSTRUCT_SPEAKER_KEYS";

/// Validate, convert and mine cross-speaker annotations in CoNLL-U files.
#[derive(Parser)]
#[command(name = "coconstruct", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check scheme annotations and report issues.
    Validate {
        #[command(flatten)]
        io: Io,
        #[arg(long, value_enum, default_value_t = OutFormat::Tsv)]
        format: OutFormat,
        /// Treat warnings as failures.
        #[arg(long)]
        strict: bool,
    },
    /// Merge coconstructed sentences into rectional units.
    Convert {
        #[command(flatten)]
        io: Io,
        #[arg(long, value_enum, default_value_t = View::Dependency)]
        view: View,
        /// Keep backchannels as separate sentences.
        #[arg(long)]
        no_backchannel_merge: bool,
        /// Refuse to convert when validation reports warnings.
        #[arg(long)]
        strict: bool,
    },
    /// List backchannel and incompletion candidates.
    Detect {
        #[command(flatten)]
        io: Io,
        /// List backchannel candidates (both kinds when neither flag is given).
        #[arg(long)]
        backchannels: bool,
        /// List incompletion candidates.
        #[arg(long)]
        incompletions: bool,
        /// Lexicon file, one form per line.
        #[arg(long, value_name = "FILE", conflicts_with = "derive_lexicon")]
        lexicon: Option<PathBuf>,
        /// Build the lexicon from discourse, INTJ and PART tokens of the input.
        #[arg(long)]
        derive_lexicon: bool,
        /// Require every non-punctuation word to be a lexicon form.
        #[arg(long)]
        all_tokens: bool,
        #[arg(long, value_enum, default_value_t = OutFormat::Tsv)]
        format: OutFormat,
    },
    /// Count scheme annotations.
    Stats {
        #[command(flatten)]
        io: Io,
        #[arg(long, value_enum, default_value_t = OutFormat::Tsv)]
        format: OutFormat,
    },
    /// Rewrite AttachTo/Rel pointers and conj:dicto into the current scheme.
    ImportLegacy {
        #[command(flatten)]
        io: Io,
    },
}

#[derive(Args)]
struct Io {
    /// Input files; standard input when absent or `-`.
    inputs: Vec<PathBuf>,
    /// Output file (a path prefix for `--view both`).
    #[arg(short, long, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Tsv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum View {
    Intermediate,
    Dependency,
    Both,
}

/// Failure that maps onto exit status 1 rather than 2.
#[derive(Debug)]
struct Rejected;

impl std::fmt::Display for Rejected {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("input rejected")
    }
}

impl std::error::Error for Rejected {}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<Rejected>() => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {:#}", e);
            ExitCode::from(2)
        }
    }
}

fn speaker_keys() -> SpeakerKeys {
    std::env::var(SPEAKER_KEYS_VAR)
        .map(|list| SpeakerKeys::from_list(&list))
        .unwrap_or_default()
}

fn input_name(path: &Path) -> String {
    if path == Path::new("-") {
        "<stdin>".to_owned()
    } else {
        path.display().to_string()
    }
}

/// Parse every input in parallel, keeping input order.
fn read_inputs(inputs: &[PathBuf]) -> Result<Vec<(String, Document)>> {
    if inputs.is_empty() {
        return read_inputs(&[PathBuf::from("-")]);
    }
    if inputs.iter().filter(|p| *p == Path::new("-")).count() > 1 {
        bail!("standard input can be read only once");
    }
    inputs
        .par_iter()
        .map(|path| {
            let name = input_name(path);
            let doc = if path == Path::new("-") {
                let mut buf = Vec::new();
                io::stdin()
                    .read_to_end(&mut buf)
                    .context("reading standard input")?;
                parse_document(buf.as_slice())
            } else {
                let file = fs::File::open(path).with_context(|| format!("opening {}", name))?;
                parse_document(io::BufReader::new(file))
            };
            let doc = doc.with_context(|| format!("parsing {}", name))?;
            Ok((name, doc))
        })
        .collect()
}

fn write_output(output: Option<&Path>, data: &str) -> Result<()> {
    match output {
        Some(path) => fs::write(path, data).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(data.as_bytes())
                .and_then(|()| out.flush())
                .context("writing standard output")
        }
    }
}

fn core_format(format: OutFormat) -> Format {
    match format {
        OutFormat::Tsv => Format::Tsv,
        OutFormat::Json => Format::Json,
    }
}

/// Whether a set of issues should fail the run.
fn fails(issues: &[ValidationIssue], strict: bool) -> bool {
    issues
        .iter()
        .any(|i| i.severity == Severity::Error || strict)
}

fn run(cli: Cli) -> Result<()> {
    let keys = speaker_keys();
    match cli.command {
        Command::Validate { io, format, strict } => {
            let docs = read_inputs(&io.inputs)?;
            let reports: Vec<Vec<ValidationIssue>> = docs
                .par_iter()
                .map(|(_, doc)| validate_document_with(doc, &keys))
                .collect();
            let mut text = String::new();
            for issues in &reports {
                text.push_str(&match format {
                    OutFormat::Tsv => issues_to_tsv(issues),
                    OutFormat::Json => issues_to_jsonl(issues),
                });
            }
            write_output(io.output.as_deref(), &text)?;
            if reports.iter().any(|r| fails(r, strict)) {
                return Err(Rejected.into());
            }
            Ok(())
        }
        Command::Convert {
            io,
            view,
            no_backchannel_merge,
            strict,
        } => {
            if view == View::Both && io.output.is_none() {
                bail!("--view both needs -o PREFIX");
            }
            let docs = read_inputs(&io.inputs)?;
            for (name, doc) in &docs {
                if let Some(sent) = intermediate_marker(doc) {
                    bail!(
                        "{}: sentence {} is in the intermediate view, which is terminal; \
                         convert the speaker-based source instead",
                        name,
                        sent
                    );
                }
            }
            let mut rejected = false;
            for (name, doc) in &docs {
                let issues = validate_document_with(doc, &keys);
                if !issues.is_empty() {
                    eprint!(
                        "{}",
                        issues_to_tsv(&issues)
                            .lines()
                            .map(|l| format!("{}\t{}\n", name, l))
                            .collect::<String>()
                    );
                }
                rejected |= fails(&issues, strict);
            }
            if rejected {
                eprintln!("conversion refused: fix the validation errors above");
                return Err(Rejected.into());
            }

            let options = ConvertOptions {
                include_backchannels: !no_backchannel_merge,
                speakers: keys,
            };
            let views = docs
                .par_iter()
                .map(|(name, doc)| {
                    convert_document(doc, &options).with_context(|| format!("converting {}", name))
                })
                .collect::<Result<Vec<_>>>()?;
            let intermediate: String = views.iter().map(|v| v.intermediate.serialize()).collect();
            let dependency: String = views.iter().map(|v| v.dependency.serialize()).collect();
            match view {
                View::Intermediate => write_output(io.output.as_deref(), &intermediate),
                View::Dependency => write_output(io.output.as_deref(), &dependency),
                View::Both => {
                    let prefix = io.output.expect("checked above");
                    let with_suffix = |suffix: &str| {
                        let mut p = prefix.clone().into_os_string();
                        p.push(suffix);
                        PathBuf::from(p)
                    };
                    write_output(Some(&with_suffix(".intermediate.conllu")), &intermediate)?;
                    write_output(Some(&with_suffix(".dependency.conllu")), &dependency)
                }
            }
        }
        Command::Detect {
            io,
            backchannels,
            incompletions,
            lexicon,
            derive_lexicon,
            all_tokens,
            format,
        } => {
            let (backchannels, incompletions) = match (backchannels, incompletions) {
                (false, false) => (true, true),
                other => other,
            };
            let docs = read_inputs(&io.inputs)?;
            let lexicon = match (&lexicon, derive_lexicon) {
                (Some(path), _) => BackchannelLexicon::parse(
                    &fs::read_to_string(path)
                        .with_context(|| format!("reading lexicon {}", path.display()))?,
                ),
                (None, true) => derive_lexicon_from(
                    docs.iter().map(|(_, d)| d),
                    coconstruct::detect::DEFAULT_THRESHOLD,
                ),
                (None, false) => BackchannelLexicon::built_in(),
            };
            let config = DetectConfig {
                speakers: keys,
                all_tokens,
                ..DetectConfig::default()
            };
            let found = docs
                .par_iter()
                .map(|(name, doc)| -> Result<Vec<_>> {
                    let mut found = Vec::new();
                    if backchannels {
                        found.extend(
                            detect_backchannels(doc, &lexicon, &config)
                                .with_context(|| format!("scanning {}", name))?,
                        );
                    }
                    if incompletions {
                        found.extend(
                            detect_incompletions(doc, &config)
                                .with_context(|| format!("scanning {}", name))?,
                        );
                    }
                    Ok(found)
                })
                .collect::<Result<Vec<_>>>()?;
            let all: Vec<_> = found.into_iter().flatten().collect();
            let text = match format {
                OutFormat::Tsv => candidates_to_tsv(&all),
                OutFormat::Json => candidates_to_jsonl(&all),
            };
            write_output(io.output.as_deref(), &text)
        }
        Command::Stats { io, format } => {
            let docs = read_inputs(&io.inputs)?;
            let total = docs.par_iter().map(|(_, doc)| compute_stats(doc)).reduce(
                SchemeStats::default,
                |mut a, b| {
                    a += &b;
                    a
                },
            );
            write_output(
                io.output.as_deref(),
                &render_stats(&total, core_format(format)),
            )
        }
        Command::ImportLegacy { io } => {
            let docs = read_inputs(&io.inputs)?;
            let mut text = String::new();
            let mut rejected = false;
            for (name, doc) in &docs {
                match import_legacy_rhapsodie(doc) {
                    Ok(imported) => text.push_str(&imported.serialize()),
                    Err(e) => {
                        rejected = true;
                        eprintln!("{}: {}", name, e);
                        for p in &e.problems {
                            eprintln!("{}\t{}", name, p);
                        }
                    }
                }
            }
            if rejected {
                return Err(Rejected.into());
            }
            write_output(io.output.as_deref(), &text)
        }
    }
}
