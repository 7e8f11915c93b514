//! End-to-end runs of the `pumpkit` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use pumpkit::report::{PumpReport, WitnessReport};
use pumpkit::PdaDocument;
use pumpkit_core::corpus::{builtin, NAMES};
use pumpkit_core::pda::is_star_form;

fn pumpkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pumpkit")).args(args).output().expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    pumpkit(args).status.code().expect("exit code")
}

fn stdout(args: &[&str]) -> String {
    String::from_utf8(pumpkit(args).stdout).unwrap()
}

fn corpus_file(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus").join(format!("{}.json", name.to_lowercase()))
}

#[test]
fn shipped_corpus_files_match_the_builtins() {
    for name in NAMES {
        let path = corpus_file(name);
        let text = std::fs::read_to_string(&path).unwrap();
        let doc = PdaDocument::parse(&text).unwrap();
        assert_eq!(doc.to_general().unwrap(), builtin(name).unwrap().pda, "{name}");
        assert_eq!(text, stdout(&["export", &format!("builtin:{name}")]), "{name}");
    }
}

#[test]
fn exit_code_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let malformed = dir.path().join("bad.json");
    std::fs::write(&malformed, "{ \"version\": \"pumpkit/1\", ").unwrap();
    let invalid = dir.path().join("invalid.json");
    let mut doc = PdaDocument::from_general(&builtin("DYCK1").unwrap().pda, None, None);
    doc.initial_state = "nowhere".into();
    std::fs::write(&invalid, doc.to_json()).unwrap();
    let (malformed, invalid) = (malformed.to_str().unwrap(), invalid.to_str().unwrap());
    let dyck = corpus_file("DYCK1");
    let dyck = dyck.to_str().unwrap();

    let cases: &[(&[&str], i32)] = &[
        (&["params", dyck], 0),
        (&["params", malformed], 2),
        (&["params", invalid], 2),
        (&["params", "missing.json"], 2),
        (&["normalize", malformed], 2),
        (&["check", dyck, "(())"], 0),
        (&["check", dyck, "(()"], 1),
        (&["check", dyck, ""], 0),
        (&["check", dyck, ")("], 1),
        (&["check", dyck, "(x)"], 2),
        (&["check", dyck, "(())", "--max-steps", "2"], 3),
        (&["check", dyck, "(())", "--max-height", "2"], 3),
        (&["check", invalid, "()"], 2),
        (&["pump", dyck, "(((())))"], 0),
        (&["pump", dyck, "(((())))", "--report", "json"], 0),
        (&["pump", dyck, "(()"], 1),
        (&["pump", dyck, "(()", "--mode", "strict"], 2),
        (&["pump", dyck, "(((())))", "--mode", "strict"], 2),
        (&["pump", dyck, "(((())))", "--mode", "sloppy"], 2),
        (&["pump", dyck, "(((())))", "--n", "0,x"], 2),
        (&["pump", dyck, "(((())))", "--max-steps", "3"], 3),
        (&["pump", dyck, "()"], 0),
        (&["pump", "builtin:ANBN", "ab"], 4),
        (&["pump", "builtin:GEN_PAL", "abba"], 4),
        (&["pump", "builtin:GEN_PAL", "abaaba"], 0),
        (&["profile", dyck, "(())"], 0),
        (&["profile", dyck, "(()"], 1),
        (&["profile", dyck, "(())", "--max-steps", "1"], 3),
        (&["profile", "builtin:ANBN", "ab", "--annotate"], 4),
        (&["profile", dyck, "(b)"], 2),
        (&["frobnicate"], 2),
    ];
    for (args, expected) in cases {
        assert_eq!(code(args), *expected, "{args:?}");
    }
}

#[test]
fn word_files_hold_one_word_per_line() {
    let dir = tempfile::tempdir().unwrap();
    let words = dir.path().join("words.txt");
    std::fs::write(&words, "()\n\n(()\n").unwrap();
    let words = words.to_str().unwrap();
    let out = stdout(&["check", "builtin:DYCK1", "--word-file", words]);
    assert_eq!(out.lines().count(), 3);
    assert_eq!(code(&["check", "builtin:DYCK1", "--word-file", words]), 1);
    assert_eq!(code(&["pump", "builtin:DYCK1", "--word-file", words]), 2);

    let one = dir.path().join("one.txt");
    std::fs::write(&one, "(((())))\n").unwrap();
    assert_eq!(code(&["pump", "builtin:DYCK1", "--word-file", one.to_str().unwrap()]), 0);
    assert_eq!(code(&["check", "builtin:DYCK1", "()", "--word-file", one.to_str().unwrap()]), 2);
}

#[test]
fn params_lines() {
    assert_eq!(stdout(&["params", "builtin:DYCK1"]), "p'=8 p=13122 |A|=2 |Γ|=2 normalization=unchanged\n");
    assert_eq!(stdout(&["params", "builtin:REG_AB"]), "p'=4 p=32 |A|=2 |Γ|=1 normalization=unchanged\n");
    assert_eq!(stdout(&["params", "builtin:ANBN"]), "p'=18 p=1162261467 |A|=3 |Γ|=2 normalization=unchanged\n");
}

#[test]
fn normalize_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("pal.json");
    let pal = corpus_file("GEN_PAL");
    assert_eq!(code(&["normalize", pal.to_str().unwrap(), "-o", out.to_str().unwrap()]), 0);
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text, stdout(&["normalize", pal.to_str().unwrap()]));
    let normal = PdaDocument::parse(&text).unwrap().to_general().unwrap();
    assert!(is_star_form(&normal));
    for (w, expected) in [("abba", 0), ("abab", 1), ("", 0), ("aabbaa", 0)] {
        assert_eq!(code(&["check", out.to_str().unwrap(), w]), expected, "{w}");
    }

    let dyck = stdout(&["normalize", "builtin:DYCK1"]);
    assert_eq!(PdaDocument::parse(&dyck).unwrap().to_general().unwrap(), builtin("DYCK1").unwrap().pda);

    let mut empty = PdaDocument::from_general(&builtin("DYCK1").unwrap().pda, None, None);
    empty.transitions.clear();
    let empty_path = dir.path().join("empty.json");
    std::fs::write(&empty_path, empty.to_json()).unwrap();
    let normalized = stdout(&["normalize", empty_path.to_str().unwrap()]);
    assert!(PdaDocument::parse(&normalized).unwrap().transitions.is_empty());
    assert_eq!(code(&["check", empty_path.to_str().unwrap(), "()"]), 1);
}

#[test]
fn pump_json_report() {
    let json = stdout(&["pump", "builtin:DYCK1", "(((())))", "--report", "json", "--n", "0,2,4"]);
    let report = PumpReport::from_json(&json).unwrap();
    assert_eq!(report.to_json(), json);
    assert_eq!(report.case, "Case2");
    assert_eq!([&report.parts.u, &report.parts.v, &report.parts.x, &report.parts.y, &report.parts.z], ["(", "(", "(())", ")", ")"]);
    assert!(matches!(report.witness, WitnessReport::Case2 { g: 2, h: 3, .. }));
    assert_eq!(report.verification.iter().map(|v| v.n).collect::<Vec<_>>(), [0, 2, 4]);
    assert!(report.overall);
}

#[test]
fn annotated_golden_chart() {
    let chart = stdout(&["profile", "builtin:DYCK1", "(((())))", "--annotate"]);
    let expected = "\
stack height, positions 0..=9
    5 |    #
    4 |   ###
    3 |  #####
    2 | #######
    1 |#########
    0 +----------
       0
 word  (((())))
level  i   j   k
 pump   gh   hg
parts  uvxxxxyzz
level: i=0 j=4 k=8 N=4
pump: g=2 h=3 lp(g)=1 lp(h)=2 fp(h)=6 fp(g)=7
parts (Case2): u=\"(\" v=\"(\" x=\"(())\" y=\")\" z=\")\"
";
    assert_eq!(chart, expected);
    assert_eq!(
        stdout(&["profile", "builtin:DYCK1", "(())"]),
        "stack height, positions 0..=5\n    3 |  #\n    2 | ###\n    1 |#####\n    0 +------\n       0\n"
    );
}

#[test]
fn svg_is_well_formed() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("chart.svg");
    let word = "(".repeat(300) + &")".repeat(300);
    for extra in [&[][..], &["--annotate"][..]] {
        let mut args = vec!["profile", "builtin:DYCK1", &word, "--render", "svg", "-o", out.to_str().unwrap()];
        args.extend_from_slice(extra);
        assert_eq!(code(&args), 0);
        let text = std::fs::read_to_string(&out).unwrap();
        let doc = roxmltree::Document::parse(&text).unwrap();
        assert_eq!(doc.root_element().tag_name().name(), "svg");
        let path = doc.descendants().find(|n| n.attribute("class") == Some("profile")).unwrap();
        // one horizontal and one vertical segment per step
        assert_eq!(path.attribute("d").unwrap().matches('H').count(), 601);
    }
    let svg = stdout(&["profile", "builtin:DYCK1", "(((())))", "--render", "svg", "--annotate"]);
    let doc = roxmltree::Document::parse(&svg).unwrap();
    assert_eq!(doc.descendants().filter(|n| n.attribute("class") == Some("pump")).count(), 4);
    assert!(svg.contains("u=&quot;(&quot;"));
}

#[test]
fn long_runs_are_downsampled_in_ascii_only() {
    let word = "(".repeat(600) + &")".repeat(600);
    let chart = stdout(&["profile", "builtin:DYCK1", &word, "--annotate"]);
    assert!(chart.contains("max-pooled into 400 columns"));
    assert_eq!(chart.lines().filter(|l| l.contains('|')).count(), 40);
    // annotations keep true path positions
    assert!(chart.contains("positions 0..=1201"));
    assert!(chart.lines().any(|l| l.starts_with("level: i=")));
}
