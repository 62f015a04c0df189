#![no_main]

use ab_moduli::io::parse_real;
use ab_moduli::{make_constants, reduce_to_moduli, PhysicalConstants};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(x) = parse_real(text) {
        let _ = make_constants(x, Some(1.0));
        let _ = reduce_to_moduli(x, &PhysicalConstants::default());
    }
});
