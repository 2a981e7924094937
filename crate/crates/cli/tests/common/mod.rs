//! Golden transcripts: `$ palg ...` lines followed by the expected stdout,
//! stderr lines prefixed with `! `, and a closing `[exit N]`.

use std::path::{Path, PathBuf};
use std::process::Command;

pub struct Case {
    pub file: String,
    pub command: String,
    pub expected: Vec<String>,
    pub exit: i32,
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub fn load_cases() -> Vec<Case> {
    let mut files: Vec<_> = std::fs::read_dir(golden_dir())
        .expect("golden directory")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "golden"))
        .collect();
    files.sort();
    let mut cases = Vec::new();
    for path in files {
        let text = std::fs::read_to_string(&path).unwrap();
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        let mut cur: Option<Case> = None;
        for line in text.lines() {
            if let Some(cmd) = line.strip_prefix("$ ") {
                assert!(cur.is_none(), "{name}: command without [exit N]");
                cur = Some(Case {
                    file: name.clone(),
                    command: cmd.to_string(),
                    expected: vec![],
                    exit: 0,
                });
            } else if let Some(code) = line
                .strip_prefix("[exit ")
                .and_then(|s| s.strip_suffix(']'))
            {
                let mut c = cur.take().expect("[exit] without command");
                c.exit = code.parse().unwrap();
                cases.push(c);
            } else if let Some(c) = cur.as_mut() {
                c.expected.push(line.to_string());
            }
        }
        assert!(cur.is_none(), "{name}: unterminated case");
    }
    cases
}

/// Runs the command and renders it in transcript form.
pub fn run(command: &str) -> (Vec<String>, i32) {
    let argv = shlex::split(command).expect("shell words");
    assert_eq!(argv[0], "palg");
    let out = Command::new(env!("CARGO_BIN_EXE_palg"))
        .args(&argv[1..])
        .output()
        .expect("run palg");
    let mut lines: Vec<String> = String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(String::from)
        .collect();
    lines.extend(
        String::from_utf8_lossy(&out.stderr)
            .lines()
            .map(|l| format!("! {l}")),
    );
    (lines, out.status.code().unwrap_or(-1))
}

/// Mismatches, one message per failing case.
pub fn check_all() -> (usize, Vec<String>) {
    let cases = load_cases();
    let mut failures = Vec::new();
    for c in &cases {
        let (lines, code) = run(&c.command);
        if lines != c.expected || code != c.exit {
            failures.push(format!(
                "{}: `{}`\n  expected (exit {}):\n    {}\n  got (exit {code}):\n    {}",
                c.file,
                c.command,
                c.exit,
                c.expected.join("\n    "),
                lines.join("\n    ")
            ));
        }
    }
    (cases.len(), failures)
}
