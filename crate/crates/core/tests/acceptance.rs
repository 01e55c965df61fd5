//! The nine acceptance criteria, checked at exact equality against the
//! bundled fixtures. Prints one line per criterion.

use std::io::Write;

use rees_core::fixtures::corpus;
use rees_core::verify::verify_corpus;

#[test]
fn acceptance_criteria() {
    let results = verify_corpus(&corpus(), None);
    // Straight to stderr so the lines show up without --nocapture.
    let mut err = std::io::stderr().lock();
    for c in &results {
        writeln!(err, "{}", c.line()).unwrap();
    }
    let ids: Vec<u32> = results.iter().map(|c| c.id).collect();
    assert_eq!(ids, (1..=9).collect::<Vec<_>>());
    let failed: Vec<u32> = results.iter().filter(|c| !c.pass).map(|c| c.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
