use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use systolic::fuchsian::FNCoords;
use systolic::hyptrig::Side;
use systolic::Exec;
use systolic_cli::render::render;
use systolic_cli::*;

#[derive(Parser)]
#[command(name = "systolic", version, about = "Systole and diameter of closed hyperbolic surfaces")]
struct Cli {
    /// Output format [default: csv for `table`, text otherwise].
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores; 1 runs sequentially).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for randomly drawn surfaces.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Genus-level systole and diameter bounds.
    Bounds {
        #[arg(long)]
        genus: u64,
    },
    /// Bounds for a range of genera, one row each (CSV unless --format is given).
    Table {
        #[arg(long, default_value_t = 2)]
        genus_min: u64,
        #[arg(long)]
        genus_max: u64,
    },
    /// Closed geodesic of a two-arc curve, with the holonomy cross-check.
    Trig {
        #[arg(value_enum)]
        side: SideArg,
        /// Angle at the first vertex, radians.
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        /// Angle at the second vertex, radians.
        #[arg(long, allow_negative_numbers = true)]
        beta: f64,
        /// Arc length.
        #[arg(long, allow_negative_numbers = true)]
        d: f64,
    },
    /// Certified systole.
    Systole {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long, default_value_t = 1.0)]
        radius_slack: f64,
    },
    /// Certified diameter interval.
    Diameter {
        #[command(flatten)]
        surface: SurfaceArgs,
        /// Number of sampling circles; the covering radius is r_dom / grid.
        #[arg(long, default_value_t = systolic::diameter::DEFAULT_GRID)]
        grid: usize,
    },
    /// Systole, diameter and the inequality slacks; exit 1 if any check fails.
    Verify {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long, default_value_t = systolic::diameter::DEFAULT_GRID)]
        grid: usize,
        #[arg(long, default_value_t = 1.0)]
        radius_slack: f64,
        /// Verify this many random surfaces drawn with --seed instead.
        #[arg(long, conflicts_with_all = ["surface", "fn_coords"])]
        random: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Same,
    Opposite,
}

#[derive(Args)]
struct SurfaceArgs {
    /// Preset surface.
    #[arg(long, value_parser = ["bolza"], conflicts_with = "fn_coords")]
    surface: Option<String>,
    /// Fenchel–Nielsen coordinates l1,l2,l3,t1,t2,t3.
    #[arg(long = "fn", allow_hyphen_values = true)]
    fn_coords: Option<String>,
}

impl SurfaceArgs {
    fn choice(&self) -> systolic::Result<SurfaceChoice> {
        match &self.fn_coords {
            Some(c) => Ok(SurfaceChoice::Fn { coords: c.parse()? }),
            None => Ok(SurfaceChoice::Bolza),
        }
    }
}

enum Failure {
    Lib(systolic::Error),
    Io(anyhow::Error),
}

impl From<systolic::Error> for Failure {
    fn from(e: systolic::Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.into())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit::INVALID_INPUT as u8)
        }
    }
}

fn run(cli: &Cli) -> Result<i32, Failure> {
    let exec = match cli.threads {
        Some(0) => return Err(systolic::Error::Domain("--threads must be at least 1".into()).into()),
        Some(1) => Exec::Sequential,
        Some(n) => {
            rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(anyhow::Error::from)?;
            Exec::Parallel
        }
        None => Exec::Parallel,
    };
    let base = RunOptions { cap: element_cap_from_env()?, exec, ..RunOptions::default() };

    let mut out: Box<dyn Write> = match &cli.out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let format = cli.format.unwrap_or_default();
    let mut code = exit::OK;
    match &cli.command {
        Command::Bounds { genus } => render(&[BoundsRow::new(*genus)?], format, &mut out)?,
        Command::Table { genus_min, genus_max } => {
            if !(2 <= *genus_min && genus_min <= genus_max) {
                return Err(systolic::Error::Domain(format!("need 2 <= genus-min <= genus-max, got {genus_min}..{genus_max}")).into());
            }
            let rows = (*genus_min..=*genus_max).map(BoundsRow::new).collect::<systolic::Result<Vec<_>>>()?;
            render(&rows, cli.format.unwrap_or(Format::Csv), &mut out)?;
        }
        Command::Trig { side, alpha, beta, d } => {
            let side = match side {
                SideArg::Same => Side::Same,
                SideArg::Opposite => Side::Opposite,
            };
            render(&[TrigReport::new(side, *alpha, *beta, *d)?], format, &mut out)?;
        }
        Command::Systole { surface, radius_slack } => {
            let choice = surface.choice()?;
            let s = choice.build()?;
            let opts = RunOptions { radius_slack: *radius_slack, ..base };
            render(&[SysReport::compute(choice, &s, &opts)?], format, &mut out)?;
        }
        Command::Diameter { surface, grid } => {
            let choice = surface.choice()?;
            let s = choice.build()?;
            let opts = RunOptions { grid: *grid, ..base };
            render(&[DiamReport::compute(choice, &s, &opts)?], format, &mut out)?;
        }
        Command::Verify { surface, grid, radius_slack, random } => {
            let opts = RunOptions { grid: *grid, radius_slack: *radius_slack, ..base };
            let choices = match random {
                Some(n) => random_choices(cli.seed, *n),
                None => vec![surface.choice()?],
            };
            let reports = choices.into_iter().map(|s| verify(s, &opts)).collect::<systolic::Result<Vec<_>>>()?;
            for r in reports.iter().filter(|r| !r.pass) {
                eprintln!(
                    "VERIFICATION FAILED for {}: an inequality that holds on every closed surface is violated; \
                     this almost certainly indicates a bug",
                    r.surface
                );
                code = exit::VERIFICATION_FAILED;
            }
            render(&reports, format, &mut out)?;
        }
    }
    out.flush()?;
    Ok(code)
}

/// Lengths uniform in [0.5, 3] and twists uniform in [0, length).
fn random_choices(seed: u64, n: usize) -> Vec<SurfaceChoice> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let lengths = [0; 3].map(|_| rng.gen_range(0.5..=3.0));
            let twists = lengths.map(|l: f64| rng.gen_range(0.0..l));
            SurfaceChoice::Fn { coords: FNCoords::new(lengths, twists).expect("lengths are positive") }
        })
        .collect()
}
