use std::io::Write;

use fbpir::acceptance::{Runner, Suite};
use fbpir::default_knowledge_base;

fn run(suite: Suite) {
    let mut runner = Runner::new(suite, default_knowledge_base().unwrap());
    // straight to stderr so the report survives output capture
    let results = runner.run_all(|r| {
        writeln!(std::io::stderr(), "{r}").ok();
    });
    assert_eq!(results.len(), 13);
    let failed: Vec<String> = results.iter().filter(|r| !r.passed).map(|r| r.to_string()).collect();
    assert!(failed.is_empty(), "failed criteria:\n{}", failed.join("\n"));
}

#[test]
fn fast_suite() {
    run(Suite::Fast);
}

#[test]
#[ignore = "unpruned five-dimensional search takes several minutes"]
fn full_suite() {
    run(Suite::Full);
}
