mod common;

use pfvm::analysis::{refinement_study_on, LEDGER_HEADER, STUDY_HEADER};
use pfvm::io::output::{sha256_hex, snapshot_name, vtk_string};
use pfvm::io::{parse_config, parse_config_str, write_outputs, Artifacts, Manifest};
use pfvm::mesh::{parse_mesh, uniform_box, write_mesh, DEFAULT_PLANARITY_TOL};
use pfvm::run::run_simulation;
use pfvm::Error;

/// Minimal reader for the legacy ASCII unstructured-grid subset we write.
struct Vtk {
    points: Vec<[f64; 3]>,
    cells: Vec<Vec<usize>>,
    types: Vec<u8>,
    scalars: Vec<(String, Vec<f64>)>,
}

fn read_vtk(text: &str) -> Vtk {
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# vtk DataFile Version"));
    lines.next().unwrap();
    assert_eq!(lines.next(), Some("ASCII"));
    assert_eq!(lines.next(), Some("DATASET UNSTRUCTURED_GRID"));
    let mut out = Vtk {
        points: vec![],
        cells: vec![],
        types: vec![],
        scalars: vec![],
    };
    let mut n_cells = 0;
    while let Some(line) = lines.next() {
        let tok: Vec<&str> = line.split_whitespace().collect();
        match tok.first().copied() {
            Some("POINTS") => {
                let n: usize = tok[1].parse().unwrap();
                for _ in 0..n {
                    let v: Vec<f64> = lines.next().unwrap().split_whitespace().map(|t| t.parse().unwrap()).collect();
                    out.points.push([v[0], v[1], v[2]]);
                }
            }
            Some("CELLS") => {
                n_cells = tok[1].parse().unwrap();
                let size: usize = tok[2].parse().unwrap();
                let mut seen = 0;
                for _ in 0..n_cells {
                    let v: Vec<usize> = lines.next().unwrap().split_whitespace().map(|t| t.parse().unwrap()).collect();
                    assert_eq!(v[0] + 1, v.len());
                    seen += v.len();
                    out.cells.push(v[1..].to_vec());
                }
                assert_eq!(seen, size);
            }
            Some("CELL_TYPES") => {
                for _ in 0..n_cells {
                    out.types.push(lines.next().unwrap().trim().parse().unwrap());
                }
            }
            Some("CELL_DATA") => assert_eq!(tok[1].parse::<usize>().unwrap(), n_cells),
            Some("SCALARS") => {
                assert_eq!(lines.next(), Some("LOOKUP_TABLE default"));
                let vals = (0..n_cells).map(|_| lines.next().unwrap().trim().parse().unwrap()).collect();
                out.scalars.push((tok[1].to_string(), vals));
            }
            _ => panic!("unexpected line {line:?}"),
        }
    }
    out
}

#[test]
fn vtk_of_the_zero_state() {
    let mesh = uniform_box([1.0, 2.0, 3.0], [2, 3, 4]).unwrap();
    let zero = vec![0.0; mesh.n_cells()];
    let vtk = read_vtk(&vtk_string(&mesh, &zero, &zero, "zero"));
    assert_eq!(vtk.points.len(), mesh.n_vertices());
    assert_eq!(vtk.cells.len(), mesh.n_cells());
    assert!(vtk.types.iter().all(|&t| t == 12));
    assert_eq!(vtk.scalars.len(), 2);
    for (name, vals) in &vtk.scalars {
        assert!(name == "u" || name == "p");
        assert!(vals.iter().all(|&v| v == 0.0));
    }
    // hexahedra are listed bottom face first, counter-clockwise
    for (k, c) in vtk.cells.iter().enumerate() {
        let lo = vtk.points[c[0]];
        let hi = vtk.points[c[6]];
        let mid = [0.5 * (lo[0] + hi[0]), 0.5 * (lo[1] + hi[1]), 0.5 * (lo[2] + hi[2])];
        let x = mesh.cell(k).center;
        assert!((0..3).all(|a| (mid[a] - x[a]).abs() < 1e-14));
    }
}

#[test]
fn vtk_values_round_trip_exactly() {
    let mesh = uniform_box([1.0; 3], [3, 2, 2]).unwrap();
    let mut r = common::rng(3);
    let u = common::random_values(&mut r, mesh.n_cells());
    let p: Vec<f64> = u.iter().map(|v| v * 1e-300).collect();
    let vtk = read_vtk(&vtk_string(&mesh, &u, &p, "two\nlines"));
    assert_eq!(vtk.scalars[0], ("u".to_string(), u));
    assert_eq!(vtk.scalars[1], ("p".to_string(), p));
}

#[test]
fn vtk_of_a_general_mesh_uses_polyhedra() {
    let text = write_mesh(&uniform_box([1.0; 3], [2, 1, 1]).unwrap());
    let mesh = parse_mesh(&text, DEFAULT_PLANARITY_TOL).unwrap();
    assert!(mesh.grid().is_none());
    let zero = vec![0.0; mesh.n_cells()];
    let vtk = read_vtk(&vtk_string(&mesh, &zero, &zero, "poly"));
    assert!(vtk.types.iter().all(|&t| t == 42));
    for (k, rec) in vtk.cells.iter().enumerate() {
        assert_eq!(rec[0], mesh.cell_faces(k).len());
        let mut i = 1;
        for _ in 0..rec[0] {
            let n = rec[i];
            assert!(rec[i + 1..=i + n].iter().all(|&v| v < mesh.n_vertices()));
            i += n + 1;
        }
        assert_eq!(i, rec.len());
    }
}

fn small_config(dir: &std::path::Path) -> pfvm::io::RunConfig {
    let mut cfg = parse_config_str(
        r#"{"mesh": {"box": {"extents": [1, 1, 1], "cells": [3, 3, 3]}}, "t_final": 0.003, "snapshot_every": 2}"#,
    )
    .unwrap();
    cfg.output_dir = dir.to_path_buf();
    cfg
}

#[test]
fn golden_headers() {
    assert_eq!(
        LEDGER_HEADER,
        "t,norm2_pdot,norm2_udot,semi2_p,semi2_u,well_energy,int_pdot,int_udot,lhs,rhs,margin"
    );
    assert_eq!(STUDY_HEADER, "level,mesh_norm,diff_u,diff_p,order_u,order_p,flux_residual");
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path());
    let out = run_simulation(&cfg).unwrap();
    let csv = out.ledger.to_csv();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(LEDGER_HEADER));
    assert_eq!(lines.count(), out.ledger.rows.len());
    let mesh = cfg.build_mesh().unwrap();
    let table = refinement_study_on(&cfg, &[mesh.clone(), mesh]).unwrap();
    let csv = table.to_csv();
    assert_eq!(csv.lines().next(), Some(STUDY_HEADER));
    assert_eq!(csv.lines().count(), 3);
    assert!(csv.lines().all(|l| l.split(',').count() == 7));
}

#[test]
fn manifest_hashes_match_files() {
    assert_eq!(
        sha256_hex(b"abc"),
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
    );
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path());
    let mesh = cfg.build_mesh().unwrap();
    let out = run_simulation(&cfg).unwrap();
    let manifest = write_outputs(
        dir.path(),
        &Artifacts {
            mesh: Some(&mesh),
            snapshots: &out.snapshots,
            ledger: Some(&out.ledger),
            extra: vec![("config.json".into(), cfg.to_json())],
            ..Default::default()
        },
    )
    .unwrap();
    let text = std::fs::read_to_string(dir.path().join("manifest.txt")).unwrap();
    assert_eq!(Manifest::parse(&text).unwrap(), manifest);
    let names: Vec<&str> = manifest.entries.iter().map(|e| e.0.as_str()).collect();
    assert!(names.contains(&"ledger.csv") && names.contains(&"config.json"));
    assert!(names.contains(&snapshot_name(0).as_str()));
    assert!(names.contains(&snapshot_name(out.steps).as_str()));
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(sorted, names);
    for (name, hash) in &manifest.entries {
        let bytes = std::fs::read(dir.path().join(name)).unwrap();
        assert_eq!(&sha256_hex(&bytes), hash, "{name}");
    }
    // snapshots every second step plus the last one
    let steps: Vec<usize> = out.snapshots.iter().map(|s| s.step).collect();
    let expected: Vec<usize> = (0..=out.steps).filter(|n| n % 2 == 0 || *n == out.steps).collect();
    assert_eq!(steps, expected);
}

fn config_error(text: &str) -> (String, String) {
    match parse_config_str(text) {
        Err(Error::Config { key, msg }) => (key, msg),
        other => panic!("expected config error for {text}, got {other:?}"),
    }
}

#[test]
fn config_errors_name_the_key() {
    let mesh = r#""mesh": {"box": {"extents": [1, 1, 1], "cells": [2, 2, 2]}}"#;
    assert_eq!(config_error(&format!("{{{mesh}, \"t_final\": -1}}")).0, "t_final");
    assert_eq!(
        config_error(&format!("{{{mesh}, \"t_final\": 1, \"dt\": {{\"policy\": \"stable\", \"safety\": 1.5}}}}")).0,
        "dt.safety"
    );
    assert_eq!(config_error(&format!("{{{mesh}, \"t_final\": 1, \"bogus\": 3}}")).0, "bogus");
    assert_eq!(config_error(&format!("{{{mesh}, \"t_final\": 1, \"params\": {{\"xi\": \"a\"}}}}")).0, "params.xi");
    assert_eq!(config_error(&format!("{{{mesh}, \"t_final\": 1, \"params\": {{\"xi\": -1}}}}")).0, "params.xi");
    assert_eq!(config_error(r#"{"t_final": 1}"#).0, "<root>");
    assert!(config_error(&format!("{{{mesh}, \"t_final\": 1, \"initial\": {{\"type\": \"cube\"}}}}")).0.starts_with("initial"));
    assert_eq!(config_error(&format!("{{{mesh}, \"t_final\": 1, \"ledger_every\": 0}}")).0, "ledger_every");
    assert!(matches!(parse_config_str("{"), Err(Error::Config { .. })));
}

#[test]
fn config_round_trips_through_json() {
    let text = r#"{"mesh": {"box": {"coords": [[0, 0.3, 1], [0, 1], [0, 0.5, 1]]}}, "t_final": 0.25,
        "params": {"xi": 0.05, "coupling_sign": 1}, "initial": {"type": "planar_front", "axis": 2},
        "boundary": {"type": "constant", "u": -0.5, "p": 0}, "dt": {"policy": "fixed", "value": 1e-4},
        "integrator": "explicit_euler", "snapshot_every": 7, "seed": 42}"#;
    let cfg = parse_config_str(text).unwrap();
    assert_eq!(parse_config_str(&cfg.to_json()).unwrap(), cfg);
}

#[test]
fn relative_paths_resolve_against_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let sub = dir.path().join("case");
    std::fs::create_dir(&sub).unwrap();
    std::fs::write(sub.join("cube.pfvm"), write_mesh(&uniform_box([1.0; 3], [2, 2, 2]).unwrap())).unwrap();
    let cfg_path = sub.join("run.json");
    std::fs::write(&cfg_path, r#"{"mesh": {"file": "cube.pfvm"}, "t_final": 0.1, "output_dir": "out"}"#).unwrap();
    let cfg = parse_config(&cfg_path).unwrap();
    assert_eq!(cfg.build_mesh().unwrap().n_cells(), 8);
    assert_eq!(cfg.output_path(), sub.join("out"));
    std::fs::write(&cfg_path, r#"{"mesh": {"file": "nowhere.pfvm"}, "t_final": 0.1}"#).unwrap();
    let cfg = parse_config(&cfg_path).unwrap();
    assert!(matches!(cfg.build_mesh(), Err(Error::Io { .. })));
    assert!(matches!(parse_config(sub.join("missing.json")), Err(Error::Io { .. })));
}
