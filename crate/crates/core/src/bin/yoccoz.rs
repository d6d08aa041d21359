//! Command line front end. Every command prints one JSON report (or writes
//! it to `--out`); exit codes are 0 ok, 2 usage or precondition, 3 numeric,
//! 4 I/O.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;

use yoccoz::config::RunConfig;
use yoccoz::dynamics::{trace_ray, QuadraticMap, RayTrace};
use yoccoz::pipeline::{analyze, puzzle_for, save_rays};
use yoccoz::presets::{preset, presets, Preset};
use yoccoz::puzzle::export::{export_family, family_svg, svg_paths, FamilyExport};
use yoccoz::report::{to_json, Report};
use yoccoz::verify::sweeps::run_check;
use yoccoz::verify::{apriori_report, ledger_report};
use yoccoz::{Angle, Error, Result};

#[derive(Parser)]
#[command(name = "yoccoz", version, about = "Yoccoz puzzles, principal nests and modulus checks")]
struct Cli {
    /// Configuration file of `key = value` lines.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Configuration override `key=value`; repeatable.
    #[arg(long = "set", global = true)]
    overrides: Vec<String>,
    /// Worker threads (same as `--set jobs=N`).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Param {
    /// Parameter, e.g. `-1` or `-0.1226+0.7449i`.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "preset")]
    c: Option<String>,
    /// Named preset (see `yoccoz presets`).
    #[arg(long)]
    preset: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Trace external rays down to a potential level.
    Rays {
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        /// Comma separated angles `p/q`.
        #[arg(long, value_delimiter = ',')]
        angles: Vec<String>,
        #[arg(long, default_value_t = 1e-3)]
        level: f64,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Puzzle piece families up to a depth.
    Puzzle {
        #[command(flatten)]
        param: Param,
        #[arg(long, default_value_t = 1)]
        depth: usize,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Escape route and principal nest.
    Nest {
        #[command(flatten)]
        param: Param,
    },
    /// Modulus ledger, a-priori report (`--levels`) or fixture sweep
    /// (`--check`).
    Verify {
        #[command(flatten)]
        param: Param,
        #[arg(long, conflicts_with = "check")]
        levels: Option<usize>,
        /// One of pi-bounds, cylinder, groetzsch, degree-n, series,
        /// parallel, qal, covering.
        #[arg(long)]
        check: Option<String>,
    },
    /// SVG of the puzzle pieces of one depth.
    Render {
        #[command(flatten)]
        param: Param,
        #[arg(long, default_value_t = 1)]
        depth: usize,
        #[arg(long, default_value_t = 800)]
        size: u32,
    },
    /// Named parameters and their location recipes.
    Presets,
    /// Reference of all configuration keys (markdown).
    ConfigReference,
}

fn parse_c(s: &str) -> Result<Complex64> {
    s.trim()
        .parse()
        .map_err(|_| Error::Argument(format!("cannot parse parameter {s:?}")))
}

fn parameter(p: &Param) -> Result<Complex64> {
    match (&p.c, &p.preset) {
        (Some(c), None) => parse_c(c),
        (None, Some(name)) => preset(name)?.parameter(),
        _ => Err(Error::Argument("give exactly one of --c and --preset".into())),
    }
}

fn write(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(Error::from),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit<T: Serialize>(cli: &Cli, config: &RunConfig, schema: &str, body: &T) -> Result<()> {
    write(&cli.out, &to_json(&Report::new(schema, config, body))?)
}

#[derive(Serialize)]
struct RaysBody {
    parameter: [f64; 2],
    level: f64,
    rays: Vec<RayTrace>,
}

#[derive(Serialize)]
struct PuzzleBody {
    parameter: [f64; 2],
    q: usize,
    families: Vec<FamilyExport>,
}

#[derive(Serialize)]
struct NestBody {
    parameter: [f64; 2],
    decoration: yoccoz::nest::Decoration,
    nest: yoccoz::nest::PrincipalNest,
}

#[derive(Serialize)]
struct PresetsBody {
    presets: Vec<Preset>,
}

fn load_config(cli: &Cli) -> Result<RunConfig> {
    let mut config = RunConfig::default();
    if let Some(path) = &cli.config {
        config.apply_text(&std::fs::read_to_string(path)?)?;
    }
    for kv in &cli.overrides {
        config.apply_override(kv)?;
    }
    if let Some(j) = cli.jobs {
        config.set("jobs", &j.to_string())?;
    }
    Ok(config)
}

fn run(cli: &Cli) -> Result<()> {
    let config = load_config(cli)?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build_global()
        .map_err(|e| Error::Internal(e.to_string()))?;
    match &cli.command {
        Command::Rays { c, angles, level, svg } => {
            let c = parse_c(c)?;
            let map = QuadraticMap::new(c);
            let angles: Vec<Angle> = angles.iter().map(|a| a.parse()).collect::<Result<_>>()?;
            let rays = angles
                .iter()
                .map(|a| trace_ray(&map, &config.trace, a, *level))
                .collect::<Result<Vec<_>>>()?;
            if let Some(path) = svg {
                let shapes: Vec<_> = rays.iter().map(|r| (r.angle.to_string(), r.points.clone())).collect();
                std::fs::write(path, svg_paths(&shapes, 800, false))?;
            }
            let body = RaysBody {
                parameter: [c.re, c.im],
                level: *level,
                rays,
            };
            emit(cli, &config, "yoccoz.rays.v1", &body)
        }
        Command::Puzzle { param, depth, svg } => {
            let c = parameter(param)?;
            let puzzle = puzzle_for(c, &config)?;
            let families = puzzle.families(*depth)?;
            let exports = families
                .iter()
                .map(|f| export_family(&puzzle, f))
                .collect::<Result<Vec<_>>>()?;
            if let Some(path) = svg {
                std::fs::write(path, family_svg(&puzzle, families.last().unwrap(), 800)?)?;
            }
            save_rays(&puzzle)?;
            let body = PuzzleBody {
                parameter: [c.re, c.im],
                q: puzzle.q(),
                families: exports,
            };
            emit(cli, &config, "yoccoz.puzzle.v1", &body)
        }
        Command::Nest { param } => {
            let c = parameter(param)?;
            let a = analyze(c, &config)?;
            let body = NestBody {
                parameter: [c.re, c.im],
                decoration: a.decoration,
                nest: a.nest,
            };
            emit(cli, &config, "yoccoz.nest.v1", &body)
        }
        Command::Verify { param, levels, check } => match (check, levels) {
            (Some(name), _) => {
                if param.c.is_some() || param.preset.is_some() {
                    return Err(Error::Argument("--check takes no parameter".into()));
                }
                let sweep = run_check(name, &config)?;
                emit(cli, &config, yoccoz::verify::sweeps::SWEEP_SCHEMA, &sweep)
            }
            (None, Some(levels)) => {
                let report = apriori_report(parameter(param)?, *levels, &config)?;
                emit(cli, &config, yoccoz::verify::apriori::APRIORI_SCHEMA, &report)
            }
            (None, None) => {
                let report = ledger_report(parameter(param)?, &config)?;
                emit(cli, &config, yoccoz::verify::LEDGER_SCHEMA, &report)
            }
        },
        Command::Render { param, depth, size } => {
            let puzzle = puzzle_for(parameter(param)?, &config)?;
            let families = puzzle.families(*depth)?;
            let text = family_svg(&puzzle, families.last().unwrap(), *size)?;
            save_rays(&puzzle)?;
            write(&cli.out, &text)
        }
        Command::Presets => emit(cli, &config, "yoccoz.presets.v1", &PresetsBody { presets: presets() }),
        Command::ConfigReference => write(&cli.out, &RunConfig::reference()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("yoccoz: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
