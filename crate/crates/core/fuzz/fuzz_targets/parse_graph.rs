#![no_main]

use libfuzzer_sys::fuzz_target;
use mmw::graph::parse_graph;

fuzz_target!(|data: &[u8]| {
    if let Ok(g) = parse_graph(data) {
        let again = parse_graph(g.to_dimacs().as_bytes()).expect("serialised graph must parse");
        assert_eq!(again, g);
    }
});
