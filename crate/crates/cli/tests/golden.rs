mod common;

#[test]
fn transcripts_match() {
    let (n, failures) = common::check_all();
    assert!(n > 0, "no golden transcripts found");
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}
