#![no_main]

use libfuzzer_sys::fuzz_target;
use mmw::decomposition::parse_bd;
use mmw::domset::solve;
use mmw::graph::parse_graph;
use mmw::oracle::brute_force_domset;

// Input: a graph file, a NUL byte, then a decomposition file.
fuzz_target!(|data: &[u8]| {
    let Some(split) = data.iter().position(|&b| b == 0) else {
        return;
    };
    let (Ok(g), Ok(d)) = (parse_graph(&data[..split]), parse_bd(&data[split + 1..])) else {
        return;
    };
    if g.vertex_count() > 14 {
        return;
    }
    if let Ok(size) = solve(&g, &d) {
        assert_eq!(size, brute_force_domset(&g).unwrap());
    }
});
