use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;

use cabling_core::atlas::{
    default_floor, mountain_range, transverse_classes, AtlasError, KnotAtlas,
};
use cabling_core::builtin::builtin_atlas;
use cabling_core::cabling::{classify_cable, iterate_cables, CablingError};
use cabling_core::farey::{bypass_slope, AttachmentSide};
use cabling_core::io::{parse_atlas_file, serialize_cable_result, serialize_cable_results};
use cabling_core::render::{render_svg, RenderSpec};
use cabling_core::slope::{CableSpec, Slope};
use cabling_core::verify::{run_verify, VerifyConfig};

const EXIT_UNCOVERED: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(
    name = "cabling",
    version,
    about = "Legendrian and transverse classification of cables"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify one cable of a companion knot.
    Classify {
        #[command(flatten)]
        source: Source,
        #[arg(long, allow_hyphen_values = true)]
        cable: CableSpec,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cable repeatedly, each result becoming the next companion.
    Iterate {
        #[command(flatten)]
        source: Source,
        #[arg(long, allow_hyphen_values = true, required = true)]
        cable: Vec<CableSpec>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the realized (tb, rot) pairs down to a floor.
    Range {
        #[command(flatten)]
        source: Source,
        #[arg(long, allow_hyphen_values = true)]
        floor: Option<BigInt>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Draw the mountain range as SVG.
    Render {
        #[command(flatten)]
        source: Source,
        #[arg(long, allow_hyphen_values = true)]
        floor: Option<BigInt>,
        #[arg(long, default_value_t = 24)]
        cell: u32,
        #[arg(long)]
        no_labels: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Self-linking numbers of the transverse classes.
    Transverse {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = cabling_core::atlas::DEFAULT_SL_DEPTH)]
        depth: u32,
    },
    /// Farey graph arithmetic.
    Farey {
        #[command(subcommand)]
        op: FareyOp,
    },
    /// Check the closed forms against brute-force oracles.
    Verify {
        /// Fixed search bound for the bypass oracle.
        #[arg(long)]
        oracle_bound: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Subcommand)]
enum FareyOp {
    /// Dividing slope after a bypass attached along ruling slope r to a torus of slope s.
    Bypass {
        #[arg(long, allow_hyphen_values = true)]
        s: Slope,
        #[arg(long, allow_hyphen_values = true)]
        r: Slope,
        #[arg(long)]
        side: AttachmentSide,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Atlas file (JSON).
    #[arg(long)]
    atlas: Option<PathBuf>,
    /// Built-in atlas name.
    #[arg(long)]
    builtin: Option<String>,
}

enum Failure {
    Input(String),
    Internal(String),
}

impl From<AtlasError> for Failure {
    fn from(e: AtlasError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<CablingError> for Failure {
    fn from(e: CablingError) -> Self {
        match e {
            CablingError::Atlas(_) | CablingError::NotUtp(_) => Failure::Input(e.to_string()),
            _ => Failure::Internal(e.to_string()),
        }
    }
}

fn load(source: &Source) -> Result<KnotAtlas, Failure> {
    match (&source.atlas, &source.builtin) {
        (Some(path), _) => {
            let bytes =
                fs::read(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            parse_atlas_file(&bytes).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
        }
        (None, Some(name)) => builtin_atlas(name).map_err(|e| Failure::Input(e.to_string())),
        (None, None) => Err(Failure::Input("an atlas source is required".into())),
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| Failure::Internal(e.to_string()))
        }
    }
}

fn floor_or_default(atlas: &KnotAtlas, floor: Option<BigInt>) -> BigInt {
    floor.unwrap_or_else(|| default_floor(atlas))
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Classify { source, cable, out } => {
            let atlas = load(&source)?;
            let result = classify_cable(&atlas, &cable)?;
            emit(&serialize_cable_result(&result), out.as_deref())?;
            Ok(if result.regime.is_covered() {
                0
            } else {
                EXIT_UNCOVERED
            })
        }
        Command::Iterate { source, cable, out } => {
            let atlas = load(&source)?;
            let results = iterate_cables(&atlas, &cable)?;
            emit(&serialize_cable_results(&results), out.as_deref())?;
            let covered = results.last().is_none_or(|r| r.regime.is_covered());
            Ok(if covered { 0 } else { EXIT_UNCOVERED })
        }
        Command::Range { source, floor, svg } => {
            let atlas = load(&source)?;
            let floor = floor_or_default(&atlas, floor);
            let range = mountain_range(&atlas, &floor)?;
            let peaks = range.peaks();
            let mut text = format!("# {}: tb rot, floor {}\n", atlas.name(), floor);
            for (tb, rot) in range.entries().iter().rev() {
                let mark = if peaks.contains(&(tb.clone(), rot.clone())) {
                    " peak"
                } else {
                    ""
                };
                text.push_str(&format!("{tb} {rot}{mark}\n"));
            }
            emit(&text, None)?;
            if let Some(path) = svg {
                let svg = render_svg(&range, &RenderSpec::new(floor))
                    .map_err(|e| Failure::Input(e.to_string()))?;
                emit(&svg, Some(&path))?;
            }
            Ok(0)
        }
        Command::Render {
            source,
            floor,
            cell,
            no_labels,
            out,
        } => {
            let atlas = load(&source)?;
            let floor = floor_or_default(&atlas, floor);
            let range = mountain_range(&atlas, &floor)?;
            let spec = RenderSpec {
                floor,
                cell,
                labels: !no_labels,
            };
            let svg = render_svg(&range, &spec).map_err(|e| Failure::Input(e.to_string()))?;
            emit(&svg, out.as_deref())?;
            Ok(0)
        }
        Command::Transverse { source, depth } => {
            let atlas = load(&source)?;
            let t = transverse_classes(&atlas, depth)?;
            let values: Vec<String> = t.sl_values().iter().map(ToString::to_string).collect();
            emit(
                &format!("sl_max {}\nsl {}\n", t.sl_max(), values.join(" ")),
                None,
            )?;
            Ok(0)
        }
        Command::Farey {
            op: FareyOp::Bypass { s, r, side },
        } => {
            let slope = bypass_slope(&s, &r, side).map_err(|e| Failure::Input(e.to_string()))?;
            emit(&format!("{slope}\n"), None)?;
            Ok(0)
        }
        Command::Verify { oracle_bound, seed } => {
            let defaults = VerifyConfig::default();
            let config = VerifyConfig {
                oracle_bound,
                seed: seed.unwrap_or(defaults.seed),
                ..defaults
            };
            let report = run_verify(&config);
            emit(&format!("{report}\n"), None)?;
            Ok(if report.passed() { 0 } else { EXIT_INTERNAL })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(EXIT_INTERNAL)
        }
    }
}
