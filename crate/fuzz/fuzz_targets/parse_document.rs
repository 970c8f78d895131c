//! Document parser: arbitrary bytes must yield a document or a pointed error.
//!
//! ```bash
//! cargo fuzz run parse_document corpus/parse_document
//! ```

#![no_main]

use libfuzzer_sys::fuzz_target;
use mvf_core::AnalysisDocument;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    match AnalysisDocument::parse(text) {
        Ok(doc) => {
            let field = doc.field();
            assert_eq!(doc.multivector_ids().len(), field.len());
            let covered: usize = field.multivectors().iter().map(|m| m.len()).sum();
            assert_eq!(covered, field.complex().len());
        }
        Err(e) => assert!(e.pointer.is_empty() || e.pointer.starts_with('/')),
    }
});
