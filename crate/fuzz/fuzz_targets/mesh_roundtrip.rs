#![no_main]

use libfuzzer_sys::fuzz_target;
use pfvm::mesh::{parse_mesh, write_mesh, DEFAULT_PLANARITY_TOL};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(mesh) = parse_mesh(text, DEFAULT_PLANARITY_TOL) else { return };
    let written = write_mesh(&mesh);
    let back = parse_mesh(&written, DEFAULT_PLANARITY_TOL).expect("written mesh must parse");
    assert_eq!(back.cells(), mesh.cells());
    assert_eq!(write_mesh(&back), written);
});
