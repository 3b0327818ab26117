//! `penner`: command-line front end for signed Penner coordinates.
//!
//! Exit codes: 0 success, 1 usage or constraint error, 2 degenerate flip,
//! 3 invalid chart point, 4 I/O or malformed input file.

mod workspace;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use penner_core::coords::{component_index, is_valid_chart_point, phi_puncture, phi_total, SignedCoords};
use penner_core::holonomy::{
    build_connection, build_connection_unchecked, looks_irreducible, pi1_representation, Step, Walk,
};
use penner_core::search::{census_csv, component_census, default_depth, find_route, SampleSpec};
use penner_core::surface::{catalan_number, enumerate_polygon_triangulations, Triangulation};
use penner_core::{Error, Mode, Rational, Scalar, Tolerance};
use serde_json::{json, Value};

use workspace::{dispatch, save, AnyWorkspace, Workspace};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Core(Error::DegenerateFlip { .. } | Error::DegenerateAt { .. }) => 2,
            CliError::Core(Error::InvalidChart) => 3,
            CliError::Core(Error::Parse(_)) | CliError::Io(_) => 4,
            CliError::Core(_) => 1,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) | CliError::Io(m) => m.clone(),
            CliError::Core(Error::DegenerateAt { step, edge }) => {
                format!("degenerate flip at step {step} (edge {edge}): S = 0, workspace unchanged")
            }
            CliError::Core(e) => e.to_string(),
        }
    }
}

type CliResult<T = ()> = Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "penner", version, about = "Signed Penner coordinates on punctured surfaces")]
struct Cli {
    /// Arithmetic for new workspaces and censuses.
    #[arg(long, global = true, default_value = "rational")]
    mode: Mode,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Zero threshold for float mode.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tolerance: f64,
    /// Route search depth [default: twice the number of edges].
    #[arg(long, global = true)]
    depth: Option<usize>,
    #[arg(long, global = true, default_value_t = 1000)]
    trials: usize,
    /// Output file; commands that modify a workspace default to rewriting it.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Canonical triangulation of the surface of genus G with S punctures.
    New {
        #[arg(long)]
        g: usize,
        #[arg(long)]
        s: usize,
        /// Comma-separated edge lengths [default: all 1].
        #[arg(long)]
        lengths: Option<String>,
        /// Face signs as a string of `+` and `-` [default: all +].
        #[arg(long, allow_hyphen_values = true)]
        signs: Option<String>,
    },
    /// Flip edges in order, printing S and the new sign for each.
    Flip {
        workspace: PathBuf,
        #[arg(required = true)]
        edges: Vec<usize>,
    },
    /// Apply the puncture scaling with one factor per puncture.
    Scale {
        workspace: PathBuf,
        #[arg(required = true)]
        factors: Vec<String>,
    },
    /// Print φ, k, coordinates and puncture holonomies.
    Report { workspace: PathBuf },
    /// Print the graph connection, puncture holonomies and loop generators as JSON.
    Holonomy {
        workspace: PathBuf,
        #[arg(long, default_value_t = 0)]
        base: usize,
    },
    /// Search for a non-degenerate flip route to a target triangulation.
    Route {
        workspace: PathBuf,
        /// Surface or workspace file holding the target.
        #[arg(long, conflicts_with = "via")]
        target: Option<PathBuf>,
        /// Target obtained by flipping these edges of the current triangulation.
        #[arg(long, value_delimiter = ',')]
        via: Vec<usize>,
        /// Apply the route found and save the workspace.
        #[arg(long)]
        apply: bool,
    },
    /// Count valid chart points per sign-pattern class.
    Census {
        #[arg(long)]
        g: usize,
        #[arg(long)]
        s: usize,
    },
    /// Enumerate triangulations of a convex n-gon.
    Catalan {
        n: usize,
        #[arg(long)]
        list: bool,
    },
    /// Build a workspace from a surface file and optional coordinates file.
    Import {
        surface: PathBuf,
        #[arg(long)]
        coords: Option<PathBuf>,
    },
    /// Print part of a workspace as JSON.
    Export {
        workspace: PathBuf,
        #[arg(long, value_enum, default_value = "surface")]
        what: Part,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Part {
    Surface,
    Coords,
    Connection,
    History,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> CliResult {
    let tol = Tolerance(cli.tolerance);
    let seed = cli.seed.unwrap_or(0);
    match &cli.command {
        Command::New { g, s, lengths, signs } => {
            let lengths = lengths.clone().map(|l| vec![l]);
            match cli.mode {
                Mode::Rational => emit_workspace(&Workspace::<Rational>::new_surface(*g, *s, lengths, signs.clone(), seed)?, cli.out.as_deref()),
                Mode::Float => emit_workspace(&Workspace::<f64>::new_surface(*g, *s, lengths, signs.clone(), seed)?, cli.out.as_deref()),
            }
        }
        Command::Flip { workspace, edges } => dispatch!(AnyWorkspace::load(workspace)?, ws => {
            let mut ws = ws;
            let log = ws.flip(edges, tol)?;
            for step in &log {
                println!("flip {}: S = {}, sign = {}", step.edge, step.rhs.to_repr(), step.sign.as_char());
            }
            save(&ws, cli.out.as_deref().unwrap_or(workspace))
        }),
        Command::Scale { workspace, factors } => dispatch!(AnyWorkspace::load(workspace)?, ws => {
            let mut ws = ws;
            ws.scale(factors)?;
            for p in 0..ws.tri.num_vertices() {
                println!("phi[{p}] = {}", phi_puncture(&ws.tri, &ws.coords, p)?.to_repr());
            }
            save(&ws, cli.out.as_deref().unwrap_or(workspace))
        }),
        Command::Report { workspace } => dispatch!(AnyWorkspace::load(workspace)?, ws => report(&ws, tol)),
        Command::Holonomy { workspace, base } => dispatch!(AnyWorkspace::load(workspace)?, ws => {
            emit_json(&holonomy_json(&ws, *base, tol)?, cli.out.as_deref())
        }),
        Command::Route { workspace, target, via, apply } => dispatch!(AnyWorkspace::load(workspace)?, ws => {
            let target = match target {
                Some(path) => read_target(path)?,
                None if !via.is_empty() => {
                    let mut t = ws.tri.clone();
                    for &e in via {
                        t = t.flip_combinatorial(e)?.0;
                    }
                    t
                }
                None => return Err(CliError::Usage("route needs --target or --via".into())),
            };
            let depth = cli.depth.unwrap_or_else(|| default_depth(&ws.tri));
            match find_route(&ws.tri, &ws.coords, &target, depth, tol) {
                Ok(route) => {
                    let mut out = route.to_json();
                    out["length"] = json!(route.steps.len());
                    println!("{}", serde_json::to_string_pretty(&out).expect("json"));
                    if *apply {
                        let mut ws = ws;
                        ws.flip(&route.edges(), tol)?;
                        save(&ws, cli.out.as_deref().unwrap_or(workspace))?;
                    }
                    Ok(())
                }
                Err(Error::Inconclusive { depth }) => {
                    let out = json!({ "steps": [], "success": false, "failure_step": null, "inconclusive_depth": depth });
                    println!("{}", serde_json::to_string_pretty(&out).expect("json"));
                    Ok(())
                }
                Err(e) => Err(e.into()),
            }
        }),
        Command::Census { g, s } => {
            let spec = SampleSpec::with_seed(seed);
            let rows = match cli.mode {
                Mode::Rational => component_census::<Rational>(*g, *s, &spec, cli.trials, tol)?,
                Mode::Float => component_census::<f64>(*g, *s, &spec, cli.trials, tol)?,
            };
            emit_text(&census_csv(&rows), cli.out.as_deref())
        }
        Command::Catalan { n, list } => {
            let all = enumerate_polygon_triangulations(*n)?;
            let mut text = format!(
                "{n}-gon: {} triangulations (Catalan number C_{} = {})\n",
                all.len(),
                n - 2,
                catalan_number(*n as u64 - 2)
            );
            if *list {
                for t in &all {
                    let diags: Vec<String> = t.iter().map(|(i, j)| format!("{i}-{j}")).collect();
                    text.push_str(&diags.join(" "));
                    text.push('\n');
                }
            }
            emit_text(&text, cli.out.as_deref())
        }
        Command::Import { surface, coords } => {
            let tri = Triangulation::from_json(read_json(surface)?)?;
            let coords_json = coords.as_deref().map(read_json).transpose()?;
            match cli.mode {
                Mode::Rational => emit_workspace(&imported::<Rational>(tri, coords_json, seed)?, cli.out.as_deref()),
                Mode::Float => emit_workspace(&imported::<f64>(tri, coords_json, seed)?, cli.out.as_deref()),
            }
        }
        Command::Export { workspace, what } => dispatch!(AnyWorkspace::load(workspace)?, ws => {
            let value = match what {
                Part::Surface => ws.tri.to_json(),
                Part::Coords => ws.coords.to_json(),
                Part::Connection => build_connection(&ws.tri, &ws.coords, tol)?.to_json(),
                Part::History => json!(ws.history),
            };
            emit_json(&value, cli.out.as_deref())
        }),
    }
}

fn imported<S: Scalar>(tri: Triangulation, coords: Option<Value>, seed: u64) -> CliResult<Workspace<S>> {
    let coords = match coords {
        Some(v) => SignedCoords::from_json(&tri, &v)?,
        None => SignedCoords::unit(&tri),
    };
    Ok(Workspace::import(tri, coords, seed))
}

fn report<S: Scalar>(ws: &Workspace<S>, tol: Tolerance) -> CliResult {
    let (tri, c) = (&ws.tri, &ws.coords);
    println!(
        "surface: genus {}, {} punctures, {} edges, {} faces",
        tri.genus(),
        tri.punctures(),
        tri.num_edges(),
        tri.num_faces()
    );
    println!("mode: {}", if S::MODE == Mode::Rational { "rational" } else { "float" });
    let valid = is_valid_chart_point(tri, c, tol);
    println!("chart point: {}", if valid { "valid" } else { "invalid (some phi vanishes)" });
    println!("k = {}", component_index(c));
    for p in 0..tri.num_vertices() {
        println!("phi[{p}] = {}", phi_puncture(tri, c, p)?.to_repr());
    }
    println!("phi_total = {}", phi_total(tri, c).to_repr());
    for (e, f) in c.lengths().iter().enumerate() {
        println!("f[{e}] = {}", f.to_repr());
    }
    let signs: String = c.signs().iter().map(|s| s.as_char()).collect();
    println!("eps = {signs}");
    let conn = build_connection_unchecked(tri, c);
    for p in 0..tri.num_vertices() {
        let hol = conn.puncture_holonomy(p, tol)?;
        let kind = if valid_phi(hol.v(), tol) { "parabolic" } else { "identity, not parabolic" };
        println!("holonomy[{p}] = ({}, {}) {kind}", hol.u().to_repr(), hol.v().to_repr());
    }
    let consistent = ws.replayed().map(|r| r.tri == ws.tri && r.coords == ws.coords).unwrap_or(false);
    println!(
        "history: {} entries, {}",
        ws.history.len(),
        if consistent { "replays to current state" } else { "does not replay to current state" }
    );
    Ok(())
}

fn valid_phi<S: Scalar>(v: &S, tol: Tolerance) -> bool {
    !v.is_negligible(&S::one(), tol)
}

fn walk_json(walk: &Walk) -> Value {
    let steps: Vec<String> = walk
        .steps
        .iter()
        .map(|s| match *s {
            Step::Long(h) => format!("L{h}"),
            Step::Short { corner, reversed: false } => format!("S{corner}"),
            Step::Short { corner, reversed: true } => format!("S{corner}'"),
        })
        .collect();
    json!({ "start": walk.start, "steps": steps })
}

fn holonomy_json<S: Scalar>(ws: &Workspace<S>, base: usize, tol: Tolerance) -> CliResult<Value> {
    let conn = build_connection(&ws.tri, &ws.coords, tol)?;
    let punctures: Vec<Value> = (0..ws.tri.num_vertices())
        .map(|p| {
            conn.puncture_holonomy(p, tol)
                .map(|h| json!({ "puncture": p, "u": h.u().to_repr(), "v": h.v().to_repr() }))
        })
        .collect::<Result<_, _>>()?;
    let rep = pi1_representation(&conn, base)?;
    let generators: Vec<Value> = rep
        .generators
        .iter()
        .map(|(w, m)| json!({ "walk": walk_json(w), "matrix": m.to_json() }))
        .collect();
    Ok(json!({
        "connection": conn.to_json(),
        "punctures": punctures,
        "generators": generators,
        "relations": rep.relations,
        "rank": rep.rank(),
        "irreducible_heuristic": looks_irreducible(&rep, tol),
    }))
}

fn read_json(path: &Path) -> CliResult<Value> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn read_target(path: &Path) -> CliResult<Triangulation> {
    let value = read_json(path)?;
    let surface = if value.get("surface").is_some() { value["surface"].clone() } else { value };
    Triangulation::from_json(surface).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn emit_text(text: &str, out: Option<&Path>) -> CliResult {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json(value: &Value, out: Option<&Path>) -> CliResult {
    emit_text(&(serde_json::to_string_pretty(value).expect("json") + "\n"), out)
}

fn emit_workspace<S: Scalar>(ws: &Workspace<S>, out: Option<&Path>) -> CliResult {
    match out {
        Some(path) => save(ws, path),
        None => emit_json(&ws.to_json(), None),
    }
}
