#![no_main]

use ab_moduli::io::{parse_connection_file, ConnectionFile};
use ab_moduli::{holonomy, period, PhysicalConstants, PolyPath};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(conn) = parse_connection_file(text) {
        let consts = PhysicalConstants::default();
        let square = PolyPath::circle(1.0, 4).expect("square is valid");
        let _ = period(&conn, &square, &consts);
        let _ = holonomy(&conn, &square, &consts);
        let file = ConnectionFile::from_connection(&conn).expect("parsed connections are catalog-only");
        let _ = serde_json::to_string(&file);
    }
});
