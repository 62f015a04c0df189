#![no_main]

use ab_moduli::io::parse_path_file;
use ab_moduli::{line_integral, winding_number, FlatConnection};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(path) = parse_path_file(text) {
        let _ = path.angle_sum();
        let _ = line_integral(&FlatConnection::canonical(1.0), &path, 0.3);
        if let Ok(w) = winding_number(&path) {
            assert_eq!(winding_number(&path.reversed()).ok(), Some(-w));
        }
    }
});
