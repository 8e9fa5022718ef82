mod common;

use pfvm::mesh::{
    generate_box_mesh, load_mesh, mesh_metrics, parse_mesh, uniform_box, validate_admissibility, write_mesh,
    DEFAULT_PLANARITY_TOL, DEFAULT_TOLERANCE,
};
use pfvm::Error;

const TWO_CELLS: &str = "\
PFVM-MESH 1
counts 12 11 2
v 0 0 0
v 0.5 0 0
v 1 0 0
v 0 1 0
v 0.5 1 0
v 1 1 0
v 0 0 1
v 0.5 0 1
v 1 0 1
v 0 1 1
v 0.5 1 1
v 1 1 1
# shared face, normal +x
f 4 1 4 10 7 0 1
f 4 0 6 9 3 0 -1
f 4 2 5 11 8 1 -1
f 4 0 1 7 6 0 -1
f 4 1 2 8 7 1 -1
f 4 3 9 10 4 0 -1
f 4 4 10 11 5 1 -1
f 4 0 3 4 1 0 -1
f 4 1 4 5 2 1 -1
f 4 6 7 10 9 0 -1
f 4 7 8 11 10 1 -1
c 0.25 0.5 0.5
c 0.75 0.5 0.5
";

#[test]
fn two_cell_file_matches_generator() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("two.pfvm");
    std::fs::write(&path, TWO_CELLS).unwrap();
    let file = load_mesh(&path).unwrap();
    let gen = uniform_box([1.0; 3], [2, 1, 1]).unwrap();
    assert!(validate_admissibility(&file, DEFAULT_TOLERANCE).passed());
    assert_eq!(file.n_faces(), gen.n_faces());
    assert_eq!(file.cells(), gen.cells());
    let key = |m: &pfvm::mesh::Mesh| {
        let mut v: Vec<_> = (0..m.n_faces())
            .map(|f| {
                let face = m.face(f);
                let x = m.metrics(f);
                (face.owner, face.neighbor, face.centroid.map(|c| (c * 1e9).round() as i64), x.d_sigma, x.tau)
            })
            .collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    };
    assert_eq!(key(&file), key(&gen));
    let f = file.interior_faces().next().unwrap();
    assert_eq!(file.face(f).area, 1.0);
    assert_eq!(file.metrics(f).d_sigma, 0.5);
    assert_eq!(file.metrics(f).tau, 2.0);
}

#[test]
fn parse_errors_name_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.pfvm");
    std::fs::write(&path, TWO_CELLS.replace("v 1 0 1", "v 1 0 one")).unwrap();
    match load_mesh(&path) {
        Err(Error::Parse { path: p, line, .. }) => {
            assert!(p.ends_with("bad.pfvm"));
            assert_eq!(line, 11);
        }
        other => panic!("expected parse error, got {other:?}"),
    }
    assert!(matches!(load_mesh(dir.path().join("missing.pfvm")), Err(Error::Io { .. })));
}

#[test]
fn written_meshes_reload_identically() {
    let mut r = common::rng(4);
    let coords = common::graded(&mut r, [0.3, -0.2, 1.0], [3, 2, 4]);
    let mesh = generate_box_mesh(coords.clone())
        .unwrap()
        .with_significant_points(common::shifted_points(&mut r, &coords))
        .unwrap();
    let back = parse_mesh(&write_mesh(&mesh), DEFAULT_PLANARITY_TOL).unwrap();
    assert_eq!(back.face_metrics(), mesh.face_metrics());
    assert_eq!(back.cells(), mesh.cells());
    assert_eq!(write_mesh(&back), write_mesh(&mesh));
}

/// Unit cube next to two half-height cells; the cube's right face spans
/// both but is declared shared with the lower one only.
const HANGING: &str = "\
PFVM-MESH 1
counts 16 16 3
v 0 0 0
v 1 0 0
v 1 1 0
v 0 1 0
v 0 0 1
v 1 0 1
v 1 1 1
v 0 1 1
v 2 0 0
v 2 0.5 0
v 2 1 0
v 1 0.5 0
v 2 0 1
v 2 0.5 1
v 2 1 1
v 1 0.5 1
f 4 0 3 2 1 0 -1
f 4 4 5 6 7 0 -1
f 4 0 1 5 4 0 -1
f 4 2 3 7 6 0 -1
f 4 0 4 7 3 0 -1
f 4 1 2 6 5 0 1
f 4 1 11 9 8 1 -1
f 4 5 12 13 15 1 -1
f 4 1 8 12 5 1 -1
f 4 8 9 13 12 1 -1
f 4 11 15 13 9 1 2
f 4 11 2 10 9 2 -1
f 4 15 13 14 6 2 -1
f 4 2 6 14 10 2 -1
f 4 9 10 14 13 2 -1
f 4 11 15 6 2 2 -1
c 0.5 0.5 0.5
c 1.5 0.25 0.5
c 1.5 0.75 0.5
";

#[test]
fn hanging_node_fails_condition_three() {
    let mesh = parse_mesh(HANGING, DEFAULT_PLANARITY_TOL).unwrap();
    let report = validate_admissibility(&mesh, DEFAULT_TOLERANCE);
    assert!(!report.passed());
    assert!(!report.condition(3).passed(), "{report}");
    assert!(report.offending(3).contains(&pfvm::mesh::Entity::Face(5)), "{report}");
}

#[test]
fn validator_is_deterministic() {
    for case in common::suite(6, 8) {
        let a = validate_admissibility(&case.mesh, DEFAULT_TOLERANCE);
        let b = validate_admissibility(&case.mesh, DEFAULT_TOLERANCE);
        assert_eq!(a, b);
        assert_eq!(a.to_string(), b.to_string());
    }
    let bad = parse_mesh(HANGING, DEFAULT_PLANARITY_TOL).unwrap();
    assert_eq!(
        validate_admissibility(&bad, DEFAULT_TOLERANCE),
        validate_admissibility(&bad, DEFAULT_TOLERANCE)
    );
}

#[test]
fn mesh_norm_of_uniform_cube_grid() {
    let m = mesh_metrics(&uniform_box([1.0; 3], [4, 4, 4]).unwrap());
    assert!((m.mesh_norm - 3f64.sqrt() / 2.0 * 0.25).abs() < 1e-14);
    assert!(m.pyramid_residual.abs() < 1e-12);
    assert_eq!(m.n_cells, 64);
    assert_eq!(m.n_interior_faces, 3 * 4 * 4 * 3);
}

#[test]
fn graded_spacing_stays_admissible() {
    let coords = [vec![0.0, 0.25, 1.0], vec![0.0, 1.0], vec![0.0, 1.0]];
    let mesh = generate_box_mesh(coords).unwrap();
    assert!(validate_admissibility(&mesh, DEFAULT_TOLERANCE).passed());
}

#[test]
fn non_monotone_spacing_is_rejected() {
    let coords = [vec![0.0, 0.5, 0.4], vec![0.0, 1.0], vec![0.0, 1.0]];
    assert!(matches!(generate_box_mesh(coords), Err(Error::Input(_))));
}
