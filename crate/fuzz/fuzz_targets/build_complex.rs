#![no_main]

use libfuzzer_sys::fuzz_target;
use mvf_core::Complex;

// Simplices from raw bytes: each byte picks vertices by its set bits, so
// every input is well formed and the builder itself gets exercised.
fuzz_target!(|data: &[u8]| {
    let simplices: Vec<Vec<String>> = data
        .iter()
        .take(12)
        .map(|&b| (0..8).filter(|i| b >> i & 1 == 1).map(|i| ((b'a' + i) as char).to_string()).collect())
        .filter(|s: &Vec<String>| !s.is_empty() && s.len() <= 4)
        .collect();
    let Ok(complex) = Complex::from_simplices(&simplices) else {
        return;
    };
    let all = complex.full_set();
    assert!(complex.is_closed(&all));
    let betti = complex.relative_betti(&all).unwrap();
    let euler: i64 = betti.iter().enumerate().map(|(d, &b)| if d % 2 == 0 { b as i64 } else { -(b as i64) }).sum();
    let cells: i64 = (0..complex.len()).map(|x| if complex.dim(x) % 2 == 0 { 1 } else { -1 }).sum();
    assert_eq!(euler, cells);
    let rebuilt = Complex::from_cells(complex.to_cells()).unwrap();
    assert_eq!(rebuilt.ids(), complex.ids());
});
