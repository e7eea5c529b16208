use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use sticky_core::anisotropy::{aniso_perimeter, check_region_bound};
use sticky_core::defects::{decompose_square, decompose_triangular, face_defect, triangular_lattice_graph};
use sticky_core::gamma_lab::{compactness_diagnostics, gamma_sweep, liminf_check, LIMINF_BETA};
use sticky_core::ground_state::{brute_force_min, perturbation_test, verify_crystallization, SearchBudget};
use sticky_core::{
    parse_config, render_svg, BondGraph, Configuration, Drawable, Error, FaceComplex, Mode, PolygonalSet, Report,
    SelectionRule, Shape, SvgOptions,
};

#[derive(Parser)]
#[command(name = "sticky", version, about = "Sup-norm sticky-disk configurations: energies, faces, defects, ground states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the report (or SVG) here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for randomized checks; recorded in the report.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Tolerance override; recorded in the report.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
}

#[derive(Args)]
struct ConfigArgs {
    /// Configuration document (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Reinterpret the document's coordinates in this mode.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Lattice,
    Continuous,
}

#[derive(Clone, Copy, ValueEnum)]
enum LatticeArg {
    Square,
    Triangular,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum ShapeArg {
    Square,
    Diamond,
    Octagon,
    Lshape,
    Hexagon,
    File,
}

#[derive(Subcommand)]
enum Command {
    /// Check feasibility and admissibility of a configuration.
    Validate(ConfigArgs),
    /// Bond count, energy and excess.
    Energy(ConfigArgs),
    /// Enumerate faces with their kinds, perimeters and defects.
    Faces(ConfigArgs),
    /// Evaluate the excess decomposition for a face selection.
    Decompose {
        #[command(flatten)]
        input: ConfigArgs,
        /// `boxtimes`, `all`, or `perim<=K`.
        #[arg(long, default_value = "boxtimes")]
        selection: String,
        /// Triangular reads lattice coordinates in the basis (1,0), (1/2, sqrt3/2).
        #[arg(long, value_enum, default_value = "square")]
        lattice: LatticeArg,
    },
    /// Exhaustive ground-state search for n points.
    Minimize {
        #[arg(long)]
        n: usize,
        /// Abort after this many search nodes.
        #[arg(long)]
        max_nodes: Option<u64>,
    },
    /// Crystallization flags, plus a randomized perturbation test when --samples > 0.
    CrystalCheck {
        #[command(flatten)]
        input: ConfigArgs,
        #[arg(long, default_value_t = 0)]
        samples: usize,
        #[arg(long, default_value_t = 0.2)]
        magnitude: f64,
    },
    /// Rescaled excess of recovery configurations for a target shape.
    Gamma {
        #[arg(long, value_enum)]
        shape: ShapeArg,
        /// Comma-separated particle numbers.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        /// Polygon document for `--shape file` (points in order; rescaled to area 1).
        #[arg(long)]
        config: Option<PathBuf>,
        /// Large-face exponent of the lower-bound check.
        #[arg(long, default_value_t = LIMINF_BETA)]
        beta: f64,
    },
    /// Anisotropic isoperimetric comparison of area-1 shapes against the octagon.
    Wulff {
        /// Extra polygon document to compare.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Draw a configuration, a selected region, or a target shape as SVG.
    Render {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        /// Highlight this selection (same syntax as `decompose`).
        #[arg(long)]
        selection: Option<String>,
        /// Draw a target shape instead of a configuration.
        #[arg(long, value_enum)]
        shape: Option<ShapeArg>,
        #[arg(long)]
        annotate: bool,
    },
}

/// Exit status 1: a checked property failed. Exit status 2: bad input.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl Failure {
    fn usage(error: anyhow::Error) -> Self {
        Failure { code: 2, error }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. }
            | Error::DuplicatePoint { .. }
            | Error::NonFinite { .. }
            | Error::NotLattice { .. }
            | Error::InvalidArgument(_)
            | Error::InvalidSelection(_)
            | Error::DegenerateTarget(_) => 2,
            _ => 1,
        };
        Failure { code, error: e.into() }
    }
}

enum Output {
    Report(Report),
    Svg(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|out| {
        let (text, passed) = match out {
            Output::Report(r) => (r.to_json(), r.passed),
            Output::Svg(s) => (s, true),
        };
        match &cli.out {
            Some(path) => std::fs::write(path, text)
                .with_context(|| format!("writing {}", path.display()))
                .map_err(Failure::usage)?,
            None => print!("{text}"),
        }
        Ok(passed)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let report = |name: &str| Report::new(name).seed(cli.seed).requested_tolerance(cli.tolerance);
    let out = match &cli.command {
        Command::Validate(input) => {
            let config = load_config(input)?;
            let n = config.len();
            let r = report("validate").quantity("N", n);
            match BondGraph::build(config) {
                Ok(g) => {
                    let adm = g.check_admissibility()?;
                    r.quantity("#Ed", g.edge_count())
                        .quantity("#F_⊠", adm.boxtimes_quads.len())
                        .check(adm.is_admissible())
                        .details(&adm)
                }
                Err(e @ (Error::Infeasible { .. } | Error::AmbiguousPredicate(_))) => {
                    r.check(false).details(&json!({ "error": e.to_string() }))
                }
                Err(e) => return Err(e.into()),
            }
        }
        Command::Energy(input) => {
            let g = BondGraph::build(load_config(input)?)?;
            let (energy, excess) = g.energy();
            report("energy")
                .quantity("N", g.vertex_count())
                .quantity("#Ed", g.edge_count())
                .quantity("E(X)", energy)
                .quantity("F(X)", excess)
                .details(&json!({ "components": g.connected_components().len() }))
        }
        Command::Faces(input) => {
            let fc = FaceComplex::from_config(load_config(input)?)?;
            let g = fc.graph();
            let boxtimes = fc.boxtimes_faces().len();
            let components = g.connected_components().len() as i64;
            let chi = fc.euler_characteristic();
            let compact = compactness_diagnostics(&fc)?;
            let faces: Vec<_> = (0..fc.faces().len())
                .map(|f| {
                    let face = fc.face(f);
                    json!({
                        "id": f,
                        "kind": face.kind,
                        "comb_perimeter": face.comb_perimeter(),
                        "interior_components": face.interior_count(),
                        "delta": face_defect(&fc, f),
                        "area": face.outer_area(),
                    })
                })
                .collect();
            report("faces")
                .quantity("#F", fc.faces().len())
                .quantity("#F_⊠", boxtimes)
                .quantity("χ", chi)
                .quantity("P_comb(G)", fc.comb_perimeter_graph())
                .check(chi == 1 + components - 2 * boxtimes as i64)
                .check(compact.holds())
                .details(&json!({ "faces": faces, "edge_classes": fc.classify_edges(), "compactness": compact }))
        }
        Command::Decompose { input, selection, lattice } => {
            let config = load_config(input)?;
            let fc = match lattice {
                LatticeArg::Square => FaceComplex::from_config(config)?,
                LatticeArg::Triangular => {
                    let coords = config
                        .lattice_points()
                        .ok_or_else(|| Failure::usage(anyhow!("the triangular lattice needs a lattice document")))?;
                    FaceComplex::enumerate(triangular_lattice_graph(&coords)?)?
                }
            };
            let sel = fc.selection(parse_selection(selection)?);
            let d = match lattice {
                LatticeArg::Square => decompose_square(&fc, &sel)?,
                LatticeArg::Triangular => decompose_triangular(&fc, &sel)?,
            };
            let (w, k) = (d.neighbourhood.perimeter_weight(), d.neighbourhood.max_degree());
            let mut r = report("decompose")
                .quantity(&format!("{w}·P_comb(A_S)"), d.perimeter_term)
                .quantity(&format!("{k}·#cc(A_S)"), d.component_term)
                .quantity(&format!("−{k}·#(F_bdd∖S)"), d.unselected_term)
                .quantity("Σ_S δ(F)", d.defect_sum)
                .quantity(&format!("{}·#Ed^ext", k - 2), d.exterior_edge_term)
                .quantity("F(X)", d.excess)
                .quantity("residual", d.residual)
                .check(d.holds());
            if let LatticeArg::Square = lattice {
                let region = fc.select_region(&sel)?;
                let bound = check_region_bound(&fc, &region);
                r = r.quantity("P_φ(A_S)", bound.lhs).check(bound.holds);
            }
            r.details(&json!({ "selection": sel, "decomposition": d }))
        }
        Command::Minimize { n, max_nodes } => {
            let budget = max_nodes.map(|m| SearchBudget { max_nodes: m }).unwrap_or_default();
            let res = brute_force_min(*n, budget)?;
            report("minimize")
                .quantity("N", res.n)
                .quantity("max #Ed", res.max_edges)
                .quantity("min F(X)", res.min_excess)
                .quantity("#minimizers", res.minimizers.len())
                .details(&res)
        }
        Command::CrystalCheck { input, samples, magnitude } => {
            let config = load_config(input)?;
            let flags = verify_crystallization(&config)?;
            let mut r = report("crystal-check").quantity("N", config.len()).check(flags.all_ok());
            let mut details = json!({ "crystallization": flags });
            if *samples > 0 {
                let p = perturbation_test(&config, *samples, *magnitude, cli.seed.unwrap_or(0))?;
                r = r.seed(Some(p.seed)).quantity("min ΔE", p.worst_delta).check(p.holds());
                details["perturbation"] = serde_json::to_value(&p).expect("serializable");
            }
            r.details(&details)
        }
        Command::Gamma { shape, n, config, beta } => {
            let target = load_shape(*shape, config.as_deref())?;
            if n.contains(&0) {
                return Err(Failure::usage(anyhow!("particle numbers must be positive")));
            }
            let sweep = gamma_sweep(&target, n)?;
            let c = cli.tolerance.unwrap_or(30.0);
            let p = sweep.target_aniso_perimeter;
            let mut r = report("gamma").quantity("P_φ(E)", p).quantity("|E|", sweep.target_area);
            let mut liminf = Vec::new();
            for rec in &sweep.records {
                r = r.check(rec.compactness.holds());
                if rec.liminf.is_some() {
                    let set = sticky_core::recovery_lattice(&target, rec.n)?;
                    let fc = FaceComplex::from_config(set.to_configuration())?;
                    let l = liminf_check(&fc, *beta)?;
                    r = r.check(l.holds());
                    liminf.push(l);
                }
            }
            let last = sweep.records.iter().max_by_key(|r| r.n).expect("at least one n");
            let gap = (last.rescaled_excess - p).abs();
            r.quantity("F(X_n)/√n", last.rescaled_excess)
                .quantity("|F/√n − P_φ|", gap)
                .quantity("|A_⊠ Δ E|", last.symdiff)
                .check(gap <= c / (last.n as f64).sqrt())
                .details(&json!({ "sweep": sweep, "liminf": liminf, "rate_constant": c }))
        }
        Command::Wulff { config } => {
            let octagon = Shape::Octagon.polygon();
            let p_oct = aniso_perimeter(&octagon);
            let exact = 28.0 / 7f64.sqrt();
            let mut candidates: Vec<(String, PolygonalSet)> = Shape::ALL
                .iter()
                .filter(|s| !matches!(s, Shape::Octagon))
                .map(|s| (s.name().to_string(), s.polygon()))
                .collect();
            if let Some(path) = config {
                candidates.push((path.display().to_string(), load_shape(ShapeArg::File, Some(path))?));
            }
            let rows: Vec<_> = candidates
                .iter()
                .map(|(name, e)| json!({ "shape": name, "P_φ": aniso_perimeter(e), "area": e.area() }))
                .collect();
            let octagon_minimal = candidates.iter().all(|(_, e)| aniso_perimeter(e) > p_oct);
            report("wulff")
                .quantity("P_φ(W)", p_oct)
                .quantity("28/√7", exact)
                .quantity("|W|", octagon.area())
                .check(((p_oct - exact) / exact).abs() <= 1e-12)
                .check(octagon_minimal)
                .details(&json!({ "candidates": rows, "octagon": octagon }))
        }
        Command::Render { config, mode, selection, shape, annotate } => {
            let opts = SvgOptions { annotate_defects: *annotate, ..SvgOptions::default() };
            // target shapes have unit area
            let shape_opts = SvgOptions { scale: 300.0, margin: 0.1, ..opts.clone() };
            let svg = match (config, shape) {
                (_, Some(s)) if *s != ShapeArg::File => {
                    render_svg(Drawable::Polygon(&load_shape(*s, None)?), &shape_opts)
                }
                (Some(path), Some(_)) => {
                    render_svg(Drawable::Polygon(&load_shape(ShapeArg::File, Some(path))?), &shape_opts)
                }
                (Some(path), None) => {
                    let fc = FaceComplex::from_config(load_config(&ConfigArgs { config: path.clone(), mode: *mode })?)?;
                    match selection {
                        Some(s) => {
                            let region = fc.select_region(&fc.selection(parse_selection(s)?))?;
                            render_svg(Drawable::Region(&fc, &region), &opts)
                        }
                        None => render_svg(Drawable::Faces(&fc), &opts),
                    }
                }
                (None, _) => return Err(Failure::usage(anyhow!("render needs --config or --shape"))),
            };
            return Ok(Output::Svg(svg));
        }
    };
    Ok(Output::Report(out))
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    std::fs::read(path).with_context(|| format!("reading {}", path.display())).map_err(Failure::usage)
}

fn load_config(input: &ConfigArgs) -> Result<Configuration, Failure> {
    let config = parse_config(&read(&input.config)?)
        .map_err(|e| Failure::usage(anyhow::Error::from(e).context(input.config.display().to_string())))?;
    Ok(match (input.mode, config.mode()) {
        (Some(ModeArg::Continuous), Mode::Lattice) => config.to_continuous(),
        (Some(ModeArg::Lattice), Mode::Continuous) => Configuration::new(config.points().to_vec(), Mode::Lattice)?,
        _ => config,
    })
}

fn load_shape(shape: ShapeArg, path: Option<&Path>) -> Result<PolygonalSet, Failure> {
    let named = match shape {
        ShapeArg::Square => Shape::Square,
        ShapeArg::Diamond => Shape::Diamond,
        ShapeArg::Octagon => Shape::Octagon,
        ShapeArg::Lshape => Shape::LShape,
        ShapeArg::Hexagon => Shape::Hexagon,
        ShapeArg::File => {
            let path = path.ok_or_else(|| Failure::usage(anyhow!("--shape file needs --config")))?;
            let doc = parse_config(&read(path)?)?;
            let poly = PolygonalSet::polygon(doc.points().to_vec())?;
            return Ok(poly.scaled(1.0 / poly.area().sqrt()));
        }
    };
    Ok(named.polygon())
}

fn parse_selection(s: &str) -> Result<SelectionRule, Failure> {
    match s {
        "boxtimes" => Ok(SelectionRule::Boxtimes),
        "all" => Ok(SelectionRule::AllBounded),
        _ => s
            .strip_prefix("perim<=")
            .and_then(|k| k.parse().ok())
            .map(SelectionRule::PerimeterAtMost)
            .ok_or_else(|| Failure::usage(anyhow!("unknown selection {s:?}; expected boxtimes, all or perim<=K"))),
    }
}
