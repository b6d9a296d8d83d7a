//! `cremona`: monoid dimensions, monoid search, Cremona maps of P^3,
//! rectification of ruled surfaces and the inequality checks, all with JSON
//! output. Reruns with the same seed print byte-identical JSON; wall-clock
//! timings go to stderr.
//!
//! Exit codes: 0 success, 2 usage or input error, 3 search exhausted,
//! 4 verification failure.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::CliError;

#[derive(Parser, Debug)]
#[command(name = "cremona", version, about = "Monoid Cremona maps of P^3 and rectification of rational ruled surfaces")]
struct Cli {
    /// Seed for every random choice; RECT_SEED overrides it.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerated and closed-form dimension of a monoid system.
    MonoidDim {
        d: u32,
        /// Comma separated vertexes, `p0` or `p0,p4`.
        #[arg(long, default_value = "p0,p4")]
        vertexes: String,
    },
    /// Search a double-vertex monoid through a surface in P^4.
    FindMonoid(FindMonoidArgs),
    /// Build, verify or apply a Cremona map.
    Cremona {
        #[command(subcommand)]
        action: CremonaAction,
    },
    /// Lower the ruling degree of a surface in P^3 down to a scroll.
    Rectify(RectifyArgs),
    /// Check the inequalities on a grid of shapes, or print the constants.
    VerifyLemmas(VerifyLemmasArgs),
    /// Push a scroll through random monoid maps and optionally rectify back.
    DemoOrbit(DemoOrbitArgs),
}

#[derive(Args, Debug)]
struct FindMonoidArgs {
    /// Surface descriptor, or a request `{d, vertexes, surface, seed}`.
    #[arg(long)]
    surface: PathBuf,
    /// Try only this degree.
    #[arg(long)]
    d: Option<u32>,
    #[arg(long, default_value_t = 8)]
    d_max: u32,
    #[arg(long, default_value_t = cremona_core::monoid::DEFAULT_DRAWS)]
    draws: usize,
}

#[derive(Subcommand, Debug)]
enum CremonaAction {
    /// From a monoid form in x0..x4 with vertexes p0 and p4, or a random one.
    Build {
        #[arg(long, conflicts_with = "degree")]
        monoid: Option<String>,
        /// Degree of a random double-vertex monoid.
        #[arg(long)]
        degree: Option<u32>,
    },
    /// Exact check that the inverse undoes the forward map at random points.
    Verify {
        #[arg(long)]
        map: PathBuf,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Image of a surface in P^3 under the forward map.
    Apply {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        surface: PathBuf,
    },
}

#[derive(Args, Debug)]
struct SearchBounds {
    #[arg(long, default_value_t = 4)]
    beta_max: u32,
    #[arg(long, default_value_t = 8)]
    d_max: u32,
    /// Points in each exact identity check.
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Run four projections before looking for the fixed component.
    #[arg(long)]
    four_projection: bool,
    /// Move [1,0,0,0] off the surface once per step instead of to a
    /// general point of it before every projection.
    #[arg(long)]
    vertex_off_surface: bool,
}

#[derive(Args, Debug)]
struct RectifyArgs {
    #[arg(long)]
    surface: PathBuf,
    #[command(flatten)]
    bounds: SearchBounds,
}

#[derive(Args, Debug)]
struct VerifyLemmasArgs {
    /// Shapes to check, `a=LO..HI,b=LO..HI`.
    #[arg(long, default_value = "a=2..6,b=1..6")]
    grid: String,
    #[arg(long, default_value_t = cremona_core::lemmas::DEFAULT_PRECISION)]
    precision: u32,
    /// Rows `h = 1..=h_max` reported per shape.
    #[arg(long, default_value_t = 10)]
    h_max: u64,
    /// Range scanned for the dimension threshold.
    #[arg(long, default_value_t = 100)]
    threshold_h_max: u64,
    /// Linear coefficient of the h0 estimate, a rational.
    #[arg(long, default_value = "0")]
    ell: String,
    /// Constant term of the h0 estimate, a rational.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    m: String,
    /// Print only the constants.
    #[arg(long)]
    constants: bool,
    /// JSON instead of a text table.
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct DemoOrbitArgs {
    /// Starting scroll; the quadric `su, sv, tu, tv` when omitted.
    #[arg(long)]
    scroll: Option<PathBuf>,
    /// Degrees of the monoid maps applied in turn.
    #[arg(long, value_delimiter = ',', default_value = "2")]
    degrees: Vec<u32>,
    /// Rectify the final surface.
    #[arg(long)]
    rectify: bool,
    #[command(flatten)]
    bounds: SearchBounds,
}

/// RECT_SEED, else `--seed`; `None` when neither is given.
fn seed(cli: &Cli) -> Result<Option<u64>, CliError> {
    match std::env::var("RECT_SEED") {
        Ok(v) => v.trim().parse().map(Some).map_err(|_| CliError::Usage(format!("RECT_SEED is not an integer: {v:?}"))),
        Err(_) => Ok(cli.seed),
    }
}

fn run(cli: &Cli) -> Result<commands::Output, CliError> {
    let chosen = seed(cli)?;
    let seed = chosen.unwrap_or(0);
    log::debug!("seed {seed}");
    match &cli.command {
        Command::MonoidDim { d, vertexes } => commands::monoid_dim(*d, vertexes),
        Command::FindMonoid(a) => commands::find_monoid(&a.surface, a.d, a.d_max, a.draws, chosen),
        Command::Cremona { action } => match action {
            CremonaAction::Build { monoid, degree } => commands::cremona_build(monoid.as_deref(), *degree, seed),
            CremonaAction::Verify { map, trials } => commands::cremona_verify(map, *trials, seed),
            CremonaAction::Apply { map, surface } => commands::cremona_apply(map, surface, seed),
        },
        Command::Rectify(a) => commands::rectify(&a.surface, &a.bounds.config(seed)),
        Command::VerifyLemmas(a) => {
            if a.constants {
                commands::constants(a.precision, a.json)
            } else {
                let opts = commands::GridOptions {
                    grid: &a.grid,
                    precision: a.precision,
                    h_max: a.h_max,
                    threshold_h_max: a.threshold_h_max,
                    ell: &a.ell,
                    m: &a.m,
                };
                commands::verify_grid(&opts, a.json)
            }
        }
        Command::DemoOrbit(a) => {
            let cfg = a.rectify.then(|| a.bounds.config(seed));
            commands::demo_orbit(a.scroll.as_deref(), &a.degrees, cfg.as_ref(), seed)
        }
    }
}

impl SearchBounds {
    fn config(&self, seed: u64) -> cremona_core::rectify::RectifyConfig {
        cremona_core::rectify::RectifyConfig {
            seed,
            beta_max: self.beta_max,
            d_max: self.d_max,
            trials: self.trials,
            four_projection: self.four_projection,
            vertex_on_surface: !self.vertex_off_surface,
            ..Default::default()
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let out = run(&cli);
    let (text, code) = match out {
        Ok(o) => (Some(o.text), o.code),
        Err(e) => {
            eprintln!("error: {e}");
            (None, e.exit_code())
        }
    };
    if let Some(text) = text {
        let written = match &cli.output {
            Some(path) => std::fs::write(path, &text),
            None => {
                print!("{text}");
                Ok(())
            }
        };
        if let Err(e) = written {
            eprintln!("error: cannot write output: {e}");
            return ExitCode::from(2);
        }
    }
    ExitCode::from(code)
}
