//! Bundled analysis documents. See `fixtures/README.md` for their contents.

use crate::document::AnalysisDocument;

pub const EXAMPLE1_JSON: &str = include_str!("../fixtures/example1.json");
pub const EXAMPLE2_JSON: &str = include_str!("../fixtures/example2.json");
pub const LORENZ_JSON: &str = include_str!("../fixtures/lorenz.json");

fn load(text: &str) -> AnalysisDocument {
    AnalysisDocument::parse(text).expect("bundled fixture parses")
}

/// 15-cell triangulated disc with seven multivectors.
pub fn example1() -> AnalysisDocument {
    load(EXAMPLE1_JSON)
}

/// 17-cell complex with identified edges and one critical edge.
pub fn example2() -> AnalysisDocument {
    load(EXAMPLE2_JSON)
}

/// 37-cell Lorenz-like field: a repeller made of two periodic orbits, a
/// saddle and two attracting orbits.
pub fn lorenz() -> AnalysisDocument {
    load(LORENZ_JSON)
}

/// All bundled fixtures with their names.
pub fn all() -> Vec<(&'static str, AnalysisDocument)> {
    vec![("example1", example1()), ("example2", example2()), ("lorenz", lorenz())]
}
