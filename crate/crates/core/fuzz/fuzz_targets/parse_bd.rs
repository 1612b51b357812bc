#![no_main]

use libfuzzer_sys::fuzz_target;
use mmw::decomposition::{parse_bd, serialize_bd};

fuzz_target!(|data: &[u8]| {
    if let Ok(d) = parse_bd(data) {
        let again = parse_bd(serialize_bd(&d).as_bytes()).expect("serialised decomposition must parse");
        assert_eq!(again, d);
    }
});
