#![no_main]

use ab_moduli::io::parse_rho;
use ab_moduli::{classify_holonomy, holonomy_spectrum};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(rho) = parse_rho(text) {
        let _ = rho.to_string();
        let _ = classify_holonomy(&rho, 1_000_000, 1e-9);
        let _ = holonomy_spectrum(&rho, 8);
    }
});
