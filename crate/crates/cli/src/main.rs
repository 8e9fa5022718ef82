use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pfvm::analysis::{apriori_bound_check, refinement_study};
use pfvm::io::{parse_config, write_outputs, Artifacts, RunConfig};
use pfvm::mesh::{
    generate_box_mesh, load_mesh, mesh_metrics, uniform_coords, validate_admissibility, write_mesh, Mesh,
    DEFAULT_TOLERANCE,
};
use pfvm::run::run_simulation;
use pfvm::Error;

mod verify;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BLOWUP: u8 = 3;

#[derive(Parser)]
#[command(name = "pfvm", version, about = "Finite volume phase-field solidification solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check mesh admissibility and print mesh metrics.
    CheckMesh {
        /// PFVM-MESH file, or `box:NXxNYxNZ` for a generated unit box.
        mesh: String,
        /// Relative tolerance of the geometric checks.
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tolerance: f64,
    },
    /// Check the discrete identities on generated meshes.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a simulation.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides `output_dir` from the config.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run a mesh refinement study.
    Study {
        #[arg(long)]
        config: PathBuf,
        /// Overrides `study_levels` from the config.
        #[arg(long)]
        levels: Option<usize>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Write a rectilinear box mesh in PFVM-MESH format.
    GenBox {
        /// Box extents `LX,LY,LZ`.
        #[arg(long, value_delimiter = ',', default_values_t = [1.0, 1.0, 1.0])]
        extents: Vec<f64>,
        /// Cell counts `NX,NY,NZ`.
        #[arg(long, value_delimiter = ',', required = true)]
        cells: Vec<usize>,
        #[arg(long)]
        out: PathBuf,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Blowup { .. } => EXIT_BLOWUP,
        Error::Config { .. } | Error::Input(_) => EXIT_USAGE,
        _ => EXIT_FAIL,
    }
}

fn fail(e: Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(exit_code(&e))
}

fn box_mesh(extents: [f64; 3], cells: [usize; 3]) -> pfvm::Result<Mesh> {
    generate_box_mesh(std::array::from_fn(|a| uniform_coords(extents[a], cells[a])))
}

fn parse_box(spec: &str) -> Option<[usize; 3]> {
    let dims: Vec<usize> = spec.split('x').map(|s| s.parse().ok()).collect::<Option<_>>()?;
    <[usize; 3]>::try_from(dims).ok()
}

fn check_mesh(spec: &str, tolerance: f64) -> pfvm::Result<bool> {
    let mesh = match spec.strip_prefix("box:") {
        Some(dims) => {
            let n = parse_box(dims).ok_or_else(|| Error::input(format!("bad box spec {dims:?}, expected NXxNYxNZ")))?;
            box_mesh([1.0; 3], n)?
        }
        None => load_mesh(spec)?,
    };
    let report = validate_admissibility(&mesh, tolerance);
    println!("{report}");
    let m = mesh_metrics(&mesh);
    println!("cells {}", m.n_cells);
    println!("faces {} ({} interior)", m.n_faces, m.n_interior_faces);
    println!("domain volume {:.12e}", m.domain_volume);
    println!("pyramid residual {:.3e}", m.pyramid_residual);
    println!("mesh norm {:.6e}", m.mesh_norm);
    println!("tau range [{:.6e}, {:.6e}]", m.tau_min, m.tau_max);
    println!("volume range [{:.6e}, {:.6e}]", m.volume_min, m.volume_max);
    Ok(report.passed())
}

fn load_config(path: &Path, output: Option<PathBuf>) -> pfvm::Result<RunConfig> {
    let mut cfg = parse_config(path)?;
    if let Some(out) = output {
        // command-line paths are relative to the working directory
        let cwd = std::env::current_dir().map_err(|e| Error::io(".", e))?;
        cfg.output_dir = cwd.join(out);
    }
    Ok(cfg)
}

fn run(config: &Path, output: Option<PathBuf>) -> pfvm::Result<Option<Error>> {
    let cfg = load_config(config, output)?;
    let mesh = cfg.build_mesh()?;
    let out = run_simulation(&cfg)?;
    let dir = cfg.output_path();
    write_outputs(
        &dir,
        &Artifacts {
            mesh: Some(&mesh),
            snapshots: &out.snapshots,
            ledger: Some(&out.ledger),
            extra: vec![("config.json".into(), cfg.to_json())],
            ..Default::default()
        },
    )?;
    println!("steps {} dt {:.6e}", out.steps, out.dt);
    println!("max |drive| {:.6e}", out.max_drive);
    let t_end = out.final_state.t;
    if let Some(r) = apriori_bound_check(&out.ledger, t_end) {
        println!(
            "a priori bound at t = {:.6e}: lhs {:.6e} rhs {:.6e} margin {:.6e} ({})",
            r.t,
            r.lhs,
            r.rhs,
            r.margin,
            if r.holds() { "holds" } else { "VIOLATED" }
        );
    }
    println!("outputs written to {}", dir.display());
    Ok(out.failure)
}

fn study(config: &Path, levels: Option<usize>, output: Option<PathBuf>) -> pfvm::Result<()> {
    let cfg = load_config(config, output)?;
    let levels = levels.unwrap_or(cfg.study_levels);
    let table = refinement_study(&cfg, levels)?;
    let dir = cfg.output_path();
    write_outputs(
        &dir,
        &Artifacts {
            table: Some(&table),
            extra: vec![("config.json".into(), cfg.to_json())],
            ..Default::default()
        },
    )?;
    print!("{}", table.to_csv());
    println!("outputs written to {}", dir.display());
    Ok(())
}

fn gen_box(extents: &[f64], cells: &[usize], out: &Path) -> pfvm::Result<()> {
    let (Ok(extents), Ok(cells)) = (<[f64; 3]>::try_from(extents), <[usize; 3]>::try_from(cells)) else {
        return Err(Error::input("--extents and --cells take three comma separated values"));
    };
    let mesh = box_mesh(extents, cells)?;
    std::fs::write(out, write_mesh(&mesh)).map_err(|e| Error::io(out, e))?;
    println!("wrote {} cells to {}", mesh.n_cells(), out.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match cli.command {
        Command::CheckMesh { mesh, tolerance } => match check_mesh(&mesh, tolerance) {
            Ok(true) => ExitCode::SUCCESS,
            Ok(false) => ExitCode::from(EXIT_FAIL),
            Err(e) => fail(e),
        },
        Command::Verify { seed } => match verify::run(seed) {
            Ok(checks) => {
                let mut ok = true;
                for c in &checks {
                    ok &= c.passed();
                    let status = if c.passed() { "pass" } else { "FAIL" };
                    println!("{}: {:.3e} (tolerance {:.0e}) {status}", c.name, c.residual, c.tolerance);
                }
                if ok {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(EXIT_FAIL)
                }
            }
            Err(e) => fail(e),
        },
        Command::Run { config, output } => match run(&config, output) {
            Ok(None) => ExitCode::SUCCESS,
            Ok(Some(e)) => {
                eprintln!("error: {e}; partial outputs were written");
                ExitCode::from(exit_code(&e))
            }
            Err(e) => fail(e),
        },
        Command::Study { config, levels, output } => match study(&config, levels, output) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => fail(e),
        },
        Command::GenBox { extents, cells, out } => match gen_box(&extents, &cells, &out) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => fail(e),
        },
    }
}
