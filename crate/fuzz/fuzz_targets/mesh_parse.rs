#![no_main]

use libfuzzer_sys::fuzz_target;
use pfvm::mesh::{parse_mesh, validate_admissibility, DEFAULT_PLANARITY_TOL, DEFAULT_TOLERANCE};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(mesh) = parse_mesh(text, DEFAULT_PLANARITY_TOL) {
        let _ = validate_admissibility(&mesh, DEFAULT_TOLERANCE);
    }
});
