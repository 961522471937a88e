//! `hexfold`: build, verify and apply multi-fold colourings of `G[a,b]`.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error.

mod svg;

use clap::{Parser, Subcommand, ValueEnum};
use hexfold::bounds::chi_f_upper;
use hexfold::constructions::{
    classic_seven, construct_2nm, construct_density, construct_nm, fold2_twelve, fold3_sixteen,
    fold7_thirtyseven, Interval, PeriodicColouring,
};
use hexfold::scheduler::{build_conflict_graph, schedule_from_colouring, validate_schedule, Transmitter};
use hexfold::specfile::{load_spec, save_spec};
use hexfold::tables::render_tables;
use hexfold::verifier::{verify_exact_with_radius, verify_sampled};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "hexfold", version, about = "Multi-fold colourings of the plane distance graphs G[a,b]")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Classic7,
    Fold2,
    Fold3,
    Fold7,
    Nm,
    #[value(name = "2nm")]
    TwoNm,
    Density,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Sampled,
}

#[derive(clap::Args)]
struct ConstructArgs {
    #[arg(long, value_enum)]
    method: Method,
    /// Lower end of the forbidden distance interval.
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    /// Upper end of the forbidden distance interval (defaults to `a`).
    #[arg(long)]
    b: Option<f64>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    m: Option<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// Fractional chromatic upper bound for G[1,b].
    Bound {
        #[arg(long)]
        b: f64,
    },
    /// Build a colouring and write its spec file.
    Construct {
        #[command(flatten)]
        args: ConstructArgs,
        /// Spec output path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also render one fundamental domain as SVG.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Colour class filled in the SVG.
        #[arg(long, default_value_t = 0)]
        svg_colour: u32,
    },
    /// Verify a spec file; prints a JSON report.
    Verify {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
        /// Side of the square sampling window centred at the origin.
        #[arg(long, default_value_t = 20.0)]
        window: f64,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Extra enumeration radius for the exact check.
        #[arg(long, default_value_t = 0.0)]
        extra_radius: f64,
    },
    /// Time-slot schedule for transmitters read from an `id,x,y` CSV.
    Schedule {
        #[arg(long)]
        positions: PathBuf,
        /// Colouring method; the interval is [1, b].
        #[arg(long, value_enum, default_value_t = Method::Nm)]
        method: Method,
        #[arg(long, default_value_t = 2.0)]
        b: f64,
        #[arg(long, default_value_t = 3)]
        n: u32,
        #[arg(long, default_value_t = 3)]
        m: u32,
        /// Use the colouring stored in this spec file instead of building one.
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Transmitter range; coordinates are divided by it.
        #[arg(long, default_value_t = 1.0)]
        range: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print all result tables.
    Tables,
}

enum Failure {
    Usage(String),
    Verification,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Bound { b } => {
            let d = chi_f_upper(b)?;
            println!("b        = {}", d.b);
            println!("x        = {:.15}", d.x);
            println!("y        = {:.15}", d.y);
            println!("s        = {:.15}", d.s);
            println!("area_A   = {:.15}", d.area_a);
            println!("bound    = {:.15}", d.bound);
            Ok(())
        }
        Command::Construct { args, out, svg, svg_colour } => {
            let c = build(&args)?;
            let text = save_spec(&c);
            match out {
                Some(p) => write(&p, &text)?,
                None => print!("{text}"),
            }
            if let Some(p) = svg {
                if svg_colour >= c.k() {
                    return Err(Failure::Usage(format!("--svg-colour {svg_colour} must be below k = {}", c.k())));
                }
                write(&p, &svg::render(&c, svg_colour))?;
            }
            eprintln!("{}: j = {}, k = {}, k/j = {:.4}", c.provenance().method, c.j(), c.k(), c.ratio());
            Ok(())
        }
        Command::Verify { spec, mode, window, samples, seed, extra_radius } => {
            let c = load_spec(&read(&spec)?)?;
            let report = match mode {
                Mode::Exact => verify_exact_with_radius(&c, extra_radius),
                Mode::Sampled => {
                    if !(window.is_finite() && window > 0.0) {
                        return Err(Failure::Usage("--window must be positive".into()));
                    }
                    verify_sampled(&c, window, samples, seed)
                }
            };
            println!("{}", report.to_json());
            if report.valid {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
        Command::Schedule { positions, method, b, n, m, spec, range, out } => {
            if !(range.is_finite() && range > 0.0) {
                return Err(Failure::Usage("--range must be positive".into()));
            }
            let c = match spec {
                Some(p) => load_spec(&read(&p)?)?,
                None => build(&ConstructArgs { method, a: 1.0, b: Some(b), n: Some(n), m: Some(m) })?,
            };
            let ts = parse_transmitters(&read(&positions)?, range)?;
            let g = build_conflict_graph(ts)?;
            let s = schedule_from_colouring(&g, &c)?;
            if !validate_schedule(&s, &g) {
                return Err(Failure::Verification);
            }
            let text = s.to_json();
            match out {
                Some(p) => write(&p, &(text + "\n"))?,
                None => println!("{text}"),
            }
            eprintln!(
                "{} transmitters, {} conflicts, cycle_length = {}/{} = {:.4}",
                g.vertices().len(),
                g.edges().len(),
                s.k,
                s.j,
                s.cycle_length
            );
            Ok(())
        }
        Command::Tables => {
            print!("{}", render_tables());
            Ok(())
        }
    }
}

fn build(args: &ConstructArgs) -> Result<PeriodicColouring, Failure> {
    let b = args.b.unwrap_or(args.a);
    let interval = Interval::new(args.a, b)?;
    let need = |v: Option<u32>, name: &str| v.ok_or_else(|| Failure::Usage(format!("--{name} is required")));
    let fixed = |f: fn() -> PeriodicColouring| -> Result<PeriodicColouring, Failure> {
        if interval.ratio() != 1.0 {
            return Err(Failure::Usage("this method colours G[a,a]; omit --b or set it equal to --a".into()));
        }
        let c = f();
        Ok(if args.a == 1.0 { c } else { c.scaled(args.a)? })
    };
    match args.method {
        Method::Classic7 => fixed(classic_seven),
        Method::Fold2 => fixed(fold2_twelve),
        Method::Fold3 => fixed(fold3_sixteen),
        Method::Fold7 => fixed(fold7_thirtyseven),
        Method::Nm => Ok(construct_nm(interval, need(args.n, "n")?, need(args.m, "m")?)?),
        Method::TwoNm => Ok(construct_2nm(interval, need(args.n, "n")?, need(args.m, "m")?)?),
        Method::Density => Ok(construct_density(interval, need(args.n, "n")?)?),
    }
}

/// Transmitters from `id,x,y` CSV text, coordinates divided by `range`.
/// Empty input gives no transmitters.
fn parse_transmitters(text: &str, range: f64) -> Result<Vec<Transmitter>, Failure> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers = rdr.headers().map_err(|e| Failure::Usage(format!("line 1: {e}")))?.clone();
    if headers.iter().collect::<Vec<_>>() != ["id", "x", "y"] {
        return Err(Failure::Usage(format!("line 1: expected header `id,x,y`, found `{}`", headers.iter().collect::<Vec<_>>().join(","))));
    }
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(0);
            Failure::Usage(format!("line {line}: {e}"))
        })?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        let coord = |i: usize, name: &str| -> Result<f64, Failure> {
            let v = rec[i].parse::<f64>().map_err(|_| Failure::Usage(format!("line {line}: bad {name} `{}`", &rec[i])))?;
            if v.is_finite() {
                Ok(v / range)
            } else {
                Err(Failure::Usage(format!("line {line}: {name} must be finite")))
            }
        };
        if rec[0].is_empty() {
            return Err(Failure::Usage(format!("line {line}: empty id")));
        }
        out.push(Transmitter::new(&rec[0], coord(1, "x")?, coord(2, "y")?));
    }
    Ok(out)
}

fn read(p: &Path) -> Result<String, Failure> {
    fs::read_to_string(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))
}

fn write(p: &Path, text: &str) -> Result<(), Failure> {
    fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))
}
