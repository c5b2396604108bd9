//! Command-line front end: builds the figure tables (packet shapes, overlap
//! curves, coherence surface, mismatch sweeps, randomized scan, median
//! contour) and writes them as CSV, JSON or SVG with a provenance header
//! that reproduces the file when re-run.

pub mod args;
mod commands;
pub mod render;
pub mod table;

pub use args::{ArgError, Parsed};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unknown keys, unusable values: exit 2.
    Usage(String),
    /// Numeric or I/O failure while computing or writing: exit 1.
    Run(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Run(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}\nrun `wedgesim help` for usage"),
            CliError::Run(msg) => write!(f, "{msg}"),
        }
    }
}

impl From<wedgesim_core::Error> for CliError {
    fn from(e: wedgesim_core::Error) -> Self {
        CliError::Run(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Run(format!("i/o error: {e}"))
    }
}

impl From<ArgError> for CliError {
    fn from(e: ArgError) -> Self {
        CliError::Usage(e.to_string())
    }
}

pub fn run(argv: &[String]) -> Result<(), CliError> {
    let Some(subcommand) = argv.first() else {
        return Err(CliError::Usage("missing subcommand".into()));
    };
    let rest = &argv[1..];
    match subcommand.as_str() {
        "modes" => commands::modes(rest),
        "overlaps" => commands::overlaps(rest),
        "surface" => commands::surface(rest),
        "mismatch" => commands::mismatch(rest),
        "scan" => commands::scan(rest),
        "contour" => commands::contour(rest),
        "selftest" => commands::selftest(rest),
        "help" | "--help" | "-h" => {
            print!("{}", usage());
            Ok(())
        }
        other => Err(CliError::Usage(format!("unknown subcommand {other:?}"))),
    }
}

fn usage() -> String {
    "\
wedgesim — localized two-mode Gaussian states under uniform acceleration

USAGE: wedgesim <SUBCOMMAND> [FLAGS]

SUBCOMMANDS
  modes     packet shapes on the t = 0 surface (columns x,input,output)
  overlaps  Bogolyubov coefficients versus acceleration
  surface   coherence over a grid of two accelerations
  mismatch  mode-mismatch sweeps (point, accel or waveform)
  scan      randomized squeezed-state scan
  contour   median-coherence contour from a scan CSV
  selftest  run the built-in numeric checks
  help      this text

COMMON FLAGS
  --output PATH     write to PATH instead of stdout
  --format KIND     csv (default), json or svg
  --config FILE     key = value defaults, overridden by flags
  --cache-dir DIR   overlap cache (default: $WEDGESIM_CACHE_DIR if set)

Run a subcommand with no extra flags to use the reference parameters
(acceleration 0.1, width 2, central frequency 5, mass 0.1, seed 42).
"
    .into()
}
