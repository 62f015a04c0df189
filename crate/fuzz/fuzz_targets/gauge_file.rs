#![no_main]

use ab_moduli::io::parse_gauge_file;
use ab_moduli::{evaluate_map, gauge_apply, FlatConnection, PuncturedPoint};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(map) = parse_gauge_file(text) {
        let _ = map.nominal_winding();
        let _ = evaluate_map(&map, PuncturedPoint::new(0.6, -0.8).expect("point is off the origin"));
        let _ = gauge_apply(&FlatConnection::canonical(0.5), &map, 0.3);
    }
});
