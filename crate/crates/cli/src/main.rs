//! `spherepart`: catalog, validation, certification, optimization and
//! rendering of curve networks that partition the unit sphere.
//!
//! Reports go to standard output as JSON; diagnostics go to standard error.
//! Exit status is 0 on success, 1 when a run completes with a negative
//! verdict (failed validation, uncertified proof, unconverged optimization)
//! and 2 on errors.

mod render;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use sphere_partition::catalog::{build_named_net, catalog_table, CatalogName};
use sphere_partition::geom::isoperimetric_profile;
use sphere_partition::json;
use sphere_partition::net::{parse_net_with_warnings, region_areas, serialize_net, total_perimeter, validate, Net, Tolerances};
use sphere_partition::optimizer::{
    estimate_edge_structure, minimize, perturb, to_net, DiscretizedNet, OptimizerConfig,
};
use sphere_partition::verifier::{default_constants, verify_all, verify_with_dependencies, Status, VerifyOptions};

#[derive(Parser, Debug)]
#[command(name = "spherepart", version, about = "Equal-area partitions of the unit sphere")]
struct Cli {
    /// More diagnostics on standard error (repeat for more).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the catalog of regular partitions with their perimeters.
    Catalog {
        /// Also write every catalog net as `<dir>/<name>.json`.
        #[arg(long, value_name = "DIR")]
        export: Option<PathBuf>,
    },
    /// Certify the numeric steps of the four-region proof with interval arithmetic.
    Verify {
        /// Only this claim and the claims it depends on.
        #[arg(long, value_name = "ID")]
        claim: Option<String>,
        /// Override a named decimal constant, e.g. `--constant tetra_perimeter_bound=11.46`.
        #[arg(long, value_name = "NAME=VALUE")]
        constant: Vec<String>,
        /// Widen every intermediate enclosure to at least this width.
        #[arg(long, value_name = "W", default_value_t = 0.0)]
        min_width: f64,
    },
    /// Validate a net file and report its perimeter and region areas.
    CheckNet {
        file: PathBuf,
        /// Allowed |kappa - (p_left - p_right)| per edge.
        #[arg(long, value_name = "TOL", default_value_t = Tolerances::default().kappa)]
        kappa_tol: f64,
        /// Allowed deviation of each meeting angle from 120 degrees, in radians.
        #[arg(long, value_name = "TOL", default_value_t = Tolerances::default().angle)]
        angle_tol: f64,
    },
    /// Minimize perimeter over polyline nets under the area constraints.
    Optimize(OptimizeArgs),
    /// Least perimeter enclosing a given area.
    Profile {
        #[arg(long, allow_negative_numbers = true)]
        area: f64,
    },
    /// Draw a net as two orthographic hemispheres side by side.
    Render {
        #[arg(long, value_name = "FILE")]
        net: PathBuf,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
}

#[derive(Args, Debug)]
struct OptimizeArgs {
    #[arg(long, value_name = "FILE")]
    net: PathBuf,
    /// Points per edge, endpoints included.
    #[arg(long, default_value_t = 16)]
    m: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Largest initial displacement of any point, in radians.
    #[arg(long, value_name = "RAD", default_value_t = 0.0)]
    perturb: f64,
    /// Outer (multiplier update) iterations.
    #[arg(long, default_value_t = OptimizerConfig::default().max_outer_iterations)]
    max_iter: usize,
    #[arg(long, default_value_t = OptimizerConfig::default().tol_g)]
    tol_g: f64,
    #[arg(long, default_value_t = OptimizerConfig::default().tol_c)]
    tol_c: f64,
    /// Per-step CSV: outer, iter, perimeter, residual, grad_norm.
    #[arg(long, value_name = "FILE")]
    trace: Option<PathBuf>,
    /// Converged net with every polyline replaced by its fitted arc.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new()
        .filter_level(level)
        .format_timestamp(None)
        .init();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// `Ok(false)` is a completed run with a negative verdict.
fn run(command: Command) -> Result<bool> {
    match command {
        Command::Catalog { export } => catalog(export.as_deref()),
        Command::Verify {
            claim,
            constant,
            min_width,
        } => verify(claim.as_deref(), &constant, min_width),
        Command::CheckNet {
            file,
            kappa_tol,
            angle_tol,
        } => check_net(&file, kappa_tol, angle_tol),
        Command::Optimize(args) => optimize(&args),
        Command::Profile { area } => profile(area),
        Command::Render { net, out } => {
            let net = read_net(&net)?;
            write(&out, &render::svg(&net))?;
            Ok(true)
        }
    }
}

fn emit<T: Serialize>(value: &T) -> Result<()> {
    print!("{}", json::to_string(value)?);
    Ok(())
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn read_net(path: &Path) -> Result<Net> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let (net, warnings) = parse_net_with_warnings(&text).with_context(|| format!("parsing {}", path.display()))?;
    for w in warnings {
        log::warn!("{}: {w}", path.display());
    }
    Ok(net)
}

fn catalog(export: Option<&Path>) -> Result<bool> {
    if let Some(dir) = export {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        for name in CatalogName::ALL {
            let path = dir.join(format!("{name}.json"));
            write(&path, &serialize_net(&build_named_net(name).net))?;
            log::info!("wrote {}", path.display());
        }
    }
    emit(&catalog_table())?;
    Ok(true)
}

fn verify(claim: Option<&str>, constants: &[String], min_width: f64) -> Result<bool> {
    if !(min_width >= 0.0 && min_width.is_finite()) {
        bail!("--min-width must be a finite non-negative number, got {min_width}");
    }
    let known = default_constants();
    let mut options = VerifyOptions::default().with_min_width(min_width);
    for c in constants {
        let Some((name, value)) = c.split_once('=') else {
            bail!("--constant expects NAME=VALUE, got `{c}`");
        };
        if !known.contains_key(name) {
            bail!(
                "unknown constant `{name}`; known: {}",
                known.keys().cloned().collect::<Vec<_>>().join(", ")
            );
        }
        options = options.with_constant(name, value);
    }
    let report = match claim {
        Some(id) => verify_with_dependencies(id, &options)?,
        None => verify_all(&options),
    };
    for c in &report.claims {
        let margin = c.margin.map_or("exact".to_string(), |m| format!("margin {m:.6e}"));
        eprintln!("{} {} ({margin})", c.id, status_word(c.status));
    }
    eprintln!("{}/{} certified", report.certified, report.total);
    emit(&report)?;
    Ok(report.is_certified())
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Certified => "certified",
        Status::Undecided => "undecided",
        Status::Failed => "failed",
    }
}

#[derive(Serialize)]
struct RegionReport {
    id: u32,
    area: f64,
    target_area: f64,
    pressure: f64,
}

#[derive(Serialize)]
struct NetReport {
    passed: bool,
    perimeter: f64,
    regions: Vec<RegionReport>,
    checks: sphere_partition::net::ValidationReport,
}

fn check_net(file: &Path, kappa_tol: f64, angle_tol: f64) -> Result<bool> {
    for (name, v) in [("--kappa-tol", kappa_tol), ("--angle-tol", angle_tol)] {
        if !(v >= 0.0 && v.is_finite()) {
            bail!("{name} must be a finite non-negative number, got {v}");
        }
    }
    let net = read_net(file)?;
    let tol = Tolerances {
        kappa: kappa_tol,
        angle: angle_tol,
        ..Default::default()
    };
    let report = validate(&net, &tol);
    let areas = region_areas(&net)?;
    let regions = net
        .regions()
        .iter()
        .map(|r| RegionReport {
            id: r.id,
            area: areas[&r.id],
            target_area: r.target_area,
            pressure: r.pressure,
        })
        .collect();
    let passed = report.passed();
    if !passed {
        eprintln!("failed checks: {}", report.failed().join(", "));
    }
    emit(&NetReport {
        passed,
        perimeter: total_perimeter(&net),
        regions,
        checks: report,
    })?;
    Ok(passed)
}

#[derive(Serialize)]
struct EdgeReport {
    id: u32,
    kappa: f64,
    deviation: f64,
    pressure_gap: f64,
}

#[derive(Serialize)]
struct VertexReport {
    id: u32,
    angles_deg: Vec<f64>,
}

#[derive(Serialize)]
struct OptimizeReport {
    status: &'static str,
    iterations: usize,
    perimeter: f64,
    grad_norm: f64,
    max_residual: f64,
    regions: Vec<RegionReport>,
    flagged_edges: Vec<u32>,
    max_angle_error_deg: Option<f64>,
    max_abs_kappa: Option<f64>,
    max_pressure_gap: Option<f64>,
    edges: Vec<EdgeReport>,
    vertices: Vec<VertexReport>,
}

fn optimize(args: &OptimizeArgs) -> Result<bool> {
    if args.m < 3 {
        bail!("--m must be at least 3 so every edge can be fitted, got {}", args.m);
    }
    if !(args.perturb >= 0.0 && args.perturb.is_finite()) {
        bail!("--perturb must be a finite non-negative angle, got {}", args.perturb);
    }
    let net = read_net(&args.net)?;
    let config = OptimizerConfig {
        max_outer_iterations: args.max_iter,
        tol_g: args.tol_g,
        tol_c: args.tol_c,
        seed: args.seed,
        m: args.m,
        ..Default::default()
    };
    config.validate()?;
    let initial = perturb(&DiscretizedNet::from_net(&net, args.m)?, args.perturb, args.seed);
    let out = minimize(&initial, &config)?;
    eprintln!(
        "{} after {} steps: perimeter {:.12}, gradient {:.3e}, residual {:.3e}",
        out.status.as_str(),
        out.iterations,
        out.perimeter(),
        out.grad_norm,
        out.residual
    );
    if let Some(path) = &args.trace {
        write(path, &out.trace.to_csv())?;
    }
    let structure = estimate_edge_structure(&out.net, &out.pressures)?;
    if let Some(path) = &args.out {
        write(path, &serialize_net(&to_net(&out.net, &out.pressures)?))?;
    }
    let areas = out.net.region_areas();
    let regions = out
        .net
        .regions()
        .iter()
        .zip(areas)
        .map(|(&(id, target_area), area)| RegionReport {
            id,
            area,
            target_area,
            pressure: out.pressures[&id],
        })
        .collect();
    let has_vertices = !structure.vertices.is_empty();
    emit(&OptimizeReport {
        status: out.status.as_str(),
        iterations: out.iterations,
        perimeter: out.perimeter(),
        grad_norm: out.grad_norm,
        max_residual: out.residual,
        regions,
        flagged_edges: out.flagged_edges.clone(),
        max_angle_error_deg: has_vertices.then(|| structure.max_angle_error_deg()),
        max_abs_kappa: Some(structure.max_abs_kappa()),
        max_pressure_gap: Some(structure.max_pressure_gap()),
        edges: structure
            .edges
            .iter()
            .map(|e| EdgeReport {
                id: e.edge,
                kappa: e.fit.kappa,
                deviation: e.fit.deviation,
                pressure_gap: e.pressure_gap,
            })
            .collect(),
        vertices: structure
            .vertices
            .iter()
            .map(|v| VertexReport {
                id: v.vertex,
                angles_deg: v.angles_deg.clone(),
            })
            .collect(),
    })?;
    Ok(out.converged())
}

fn profile(area: f64) -> Result<bool> {
    let value = isoperimetric_profile(area)?;
    let report: BTreeMap<&str, f64> = [("area", area), ("profile", value)].into_iter().collect();
    emit(&report)?;
    Ok(true)
}
