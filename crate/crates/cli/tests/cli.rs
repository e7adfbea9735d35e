use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures")
        .join(name)
}

fn golden(name: &str) -> String {
    fs::read_to_string(fixture("golden").join(name)).unwrap()
}

fn run(args: &[&str], stdin: Option<&[u8]>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_coconstruct"));
    cmd.args(args)
        .env_remove("COCONSTRUCT_SPEAKER_KEYS")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    let mut child = cmd.spawn().unwrap();
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or_default()).unwrap();
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn path(name: &str) -> String {
    fixture(name).to_string_lossy().into_owned()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn validate_clean_file() {
    let out = run(&["validate", &path("ex11_mestiere.conllu")], None);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
}

#[test]
fn validate_reports_errors_with_status_one() {
    let out = run(&["validate", &path("bad/v2_missing_sentence.conllu")], None);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).starts_with("error\tV2\ts2\t1\t"));

    let json = run(
        &[
            "validate",
            "--format",
            "json",
            &path("bad/v2_missing_sentence.conllu"),
        ],
        None,
    );
    let issue: serde_like::Issue = serde_like::parse(&stdout(&json));
    assert_eq!(issue.code, "V2");
}

#[test]
fn warnings_fail_only_under_strict() {
    let file = path("bad/v10_backchannel_not_root.conllu");
    assert_eq!(run(&["validate", &file], None).status.code(), Some(0));
    assert_eq!(
        run(&["validate", "--strict", &file], None).status.code(),
        Some(1)
    );
}

#[test]
fn convert_writes_the_dependency_view() {
    let out = run(
        &[
            "convert",
            "--view",
            "dependency",
            &path("fig1_apostrofo.conllu"),
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(stdout(&out), golden("fig1_apostrofo.dependency.conllu"));

    let apart = run(
        &[
            "convert",
            "--no-backchannel-merge",
            &path("fig1_apostrofo.conllu"),
        ],
        None,
    );
    assert_eq!(
        stdout(&apart),
        golden("fig1_apostrofo.no_merge.dependency.conllu")
    );
}

#[test]
fn both_views_go_to_prefixed_files() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("ex12");
    let out = run(
        &[
            "convert",
            "--view",
            "both",
            "-o",
            prefix.to_str().unwrap(),
            &path("ex12_nice_attitude.conllu"),
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let read = |suffix: &str| {
        fs::read_to_string(dir.path().join(format!("ex12.{}.conllu", suffix))).unwrap()
    };
    assert_eq!(
        read("intermediate"),
        golden("ex12_nice_attitude.intermediate.conllu")
    );
    assert_eq!(
        read("dependency"),
        golden("ex12_nice_attitude.dependency.conllu")
    );

    let missing = run(
        &[
            "convert",
            "--view",
            "both",
            &path("ex12_nice_attitude.conllu"),
        ],
        None,
    );
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn intermediate_output_cannot_be_converted_again() {
    let first = run(
        &[
            "convert",
            "--view",
            "intermediate",
            &path("ex11_mestiere.conllu"),
        ],
        None,
    );
    assert_eq!(first.status.code(), Some(0));
    let second = run(&["convert"], Some(&first.stdout));
    assert_eq!(second.status.code(), Some(2));
    assert!(
        stderr(&second).contains("intermediate view"),
        "{}",
        stderr(&second)
    );
}

#[test]
fn legacy_import_validate_convert_pipeline() {
    let imported = run(&["import-legacy", &path("legacy_rhapsodie.conllu")], None);
    assert_eq!(imported.status.code(), Some(0), "{}", stderr(&imported));
    let validated = run(&["validate", "-"], Some(&imported.stdout));
    assert_eq!(validated.status.code(), Some(0), "{}", stdout(&validated));
    let converted = run(&["convert"], Some(&imported.stdout));
    assert_eq!(converted.status.code(), Some(0), "{}", stderr(&converted));
    let text = stdout(&converted);
    assert!(text.contains("# sent_id = Rhap_D2001-5+Rhap_D2001-6+Rhap_D2001-7+Rhap_D2001-8\n"));
    assert!(text.contains("discourse:backchannel"));
    assert!(!text.contains("conj:dicto"));
}

#[test]
fn convert_refuses_invalid_input() {
    let out = run(&["convert", &path("bad/v4_missing_token.conllu")], None);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    assert!(stderr(&out).contains("V4"));
}

#[test]
fn detect_with_a_lexicon_file() {
    let out = run(
        &[
            "detect",
            "--backchannels",
            "--lexicon",
            &path("dialogue_lexicon.txt"),
            &path("dialogue_detect.conllu"),
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 7);
    assert!(text.lines().all(|l| l.starts_with("backchannel\tdlg-")));
    assert!(text.contains("backchannel\tdlg-28\tdlg-29\t1,2\t2\n"));

    let both = run(
        &[
            "detect",
            "--derive-lexicon",
            "--format",
            "json",
            &path("dialogue_detect.conllu"),
        ],
        None,
    );
    assert_eq!(both.status.code(), Some(0));
    assert!(stdout(&both).contains("\"kind\":\"incompletion\""));
}

#[test]
fn detect_needs_speakers() {
    let out = run(&["detect", &path("mwt_italian.conllu")], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("mwt-1"));
}

#[test]
fn speaker_keys_come_from_the_environment() {
    let text = fs::read_to_string(fixture("dialogue_detect.conllu"))
        .unwrap()
        .replace("# speaker =", "# participant =");
    let without = run(&["detect", "--incompletions", "-"], Some(text.as_bytes()));
    assert_eq!(without.status.code(), Some(2));

    let mut cmd = Command::new(env!("CARGO_BIN_EXE_coconstruct"));
    let mut child = cmd
        .args(["detect", "--incompletions"])
        .env("COCONSTRUCT_SPEAKER_KEYS", "participant")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(text.as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 4);
}

#[test]
fn stats_sum_over_inputs_in_order() {
    let out = run(&["stats", &path("stats_ten.conllu")], None);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "sentences\ttokens\tbackchannel_sentences\tcoconstruct_tokens\tscrap_tokens\tunits_multi_member\tby_deprel:conj:reform\tby_deprel:obl\tpromotion:case"
    );
    assert_eq!(lines.next().unwrap(), "10\t29\t2\t3\t1\t3\t1\t2\t1");

    let two = run(
        &[
            "stats",
            &path("stats_ten.conllu"),
            &path("ex11_mestiere.conllu"),
        ],
        None,
    );
    assert!(stdout(&two).lines().nth(1).unwrap().starts_with("12\t35\t"));
}

#[test]
fn multiple_inputs_keep_their_order() {
    let out = run(
        &[
            "convert",
            &path("ex13_sottotitolatore.conllu"),
            &path("ex11_mestiere.conllu"),
        ],
        None,
    );
    let expected = golden("ex13_sottotitolatore.dependency.conllu")
        + &golden("ex11_mestiere.dependency.conllu");
    assert_eq!(stdout(&out), expected);
}

#[test]
fn malformed_input_exits_two() {
    let out = run(&["validate"], Some(b"1\tx\t_\n"));
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 1"));
}

/// Minimal field extraction so the test needs no JSON dependency.
mod serde_like {
    pub struct Issue {
        pub code: String,
    }

    pub fn parse(line: &str) -> Issue {
        let start = line.find("\"code\":\"").expect("code field") + 8;
        let end = start + line[start..].find('"').expect("closing quote");
        Issue {
            code: line[start..end].to_owned(),
        }
    }
}
