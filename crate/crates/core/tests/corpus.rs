//! Replays the checked-in fuzz seeds through the parser invariants.

use std::path::PathBuf;

use pfvm::io::parse_config_str;
use pfvm::mesh::{parse_mesh, validate_admissibility, write_mesh, DEFAULT_PLANARITY_TOL, DEFAULT_TOLERANCE};

fn seeds(target: &str) -> Vec<(PathBuf, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .map(|p| {
            let text = std::fs::read_to_string(&p).unwrap();
            (p, text)
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds in {}", dir.display());
    out
}

#[test]
fn mesh_seeds() {
    let mut parsed = 0;
    for (path, text) in seeds("mesh_parse").into_iter().chain(seeds("mesh_roundtrip")) {
        let Ok(mesh) = parse_mesh(&text, DEFAULT_PLANARITY_TOL) else { continue };
        parsed += 1;
        let _ = validate_admissibility(&mesh, DEFAULT_TOLERANCE);
        let written = write_mesh(&mesh);
        let back = parse_mesh(&written, DEFAULT_PLANARITY_TOL).unwrap();
        assert_eq!(back.cells(), mesh.cells(), "{}", path.display());
        assert_eq!(write_mesh(&back), written, "{}", path.display());
    }
    assert!(parsed >= 4);
}

#[test]
fn config_seeds() {
    let mut parsed = 0;
    for (path, text) in seeds("config_parse") {
        let Ok(cfg) = parse_config_str(&text) else { continue };
        parsed += 1;
        assert_eq!(parse_config_str(&cfg.to_json()).unwrap(), cfg, "{}", path.display());
    }
    assert!(parsed >= 5);
}
