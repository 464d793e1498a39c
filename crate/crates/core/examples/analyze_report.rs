//! Full analysis of a cone document, rendered as markdown.

use std::path::PathBuf;

use conestrat::document::parse_cone_file;
use conestrat::report::{analyze, to_markdown, AnalysisOptions};

fn main() {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/square_cone.json"));
    let doc = parse_cone_file(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    let report = analyze(&doc, &AnalysisOptions::default()).unwrap();
    print!("{}", to_markdown(&report));
}
