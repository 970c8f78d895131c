#![no_main]

use libfuzzer_sys::fuzz_target;
use mvf_core::{morse, AnalysisDocument, Dynamics};

// Parsed documents run through the Morse pipeline; small inputs only so the
// exponential parts stay cheap.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(doc) = AnalysisDocument::parse(text) else {
        return;
    };
    if doc.complex().len() > 24 {
        return;
    }
    let d = Dynamics::new(doc.field());
    let (family, order) = morse::minimal_morse_decomposition(&d).unwrap();
    assert!(order.is_partial_order());
    assert!(morse::is_morse_decomposition(&d, &family).unwrap().passed());
    for (_, fam) in doc.families() {
        if let Ok(report) = morse::verify_predecomposition(&d, fam) {
            if report.passed() {
                let _ = morse::consolidate_by_scc(&d, fam);
            }
        }
    }
});
