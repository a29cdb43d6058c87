use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use mfpx::{
    compute_newton_polytope, format_report, ode_problem, parse_ode, parse_raw, parse_system, EliminationProblem, Emit,
    OdeInput, Options, Relations, Report,
};

const EXIT_PARSE: u8 = 2;
const EXIT_MISMATCH: u8 = 3;
const EXIT_FAILURE: u8 = 1;

#[derive(Parser)]
#[command(name = "mfpx", version, about = "Newton polytopes of eliminants via mixed fiber polytopes")]
struct Cli {
    /// Worker threads for oracle batches (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum EmitArg {
    Vertices,
    Facets,
    Both,
    Count,
}

#[derive(clap::Args)]
struct Common {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Cross-check every vertex against the brute-force oracle.
    #[arg(long)]
    verify: bool,
    #[arg(long)]
    count_lattice: bool,
    #[arg(long, value_enum, default_value = "both")]
    emit: EmitArg,
    /// Print timings and oracle statistics to stderr.
    #[arg(long)]
    stats: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Mixed fiber polytope of a polynomial system or raw supports.
    Compute {
        #[arg(long)]
        input: PathBuf,
        /// Read `dim/split/polytope` lines instead of polynomials.
        #[arg(long)]
        raw: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Differential elimination for `x_1` of a polynomial dynamical system.
    Ode {
        /// Lines `x' = g(x)`; optional with `--template`.
        #[arg(long, required_unless_present = "template")]
        input: Option<PathBuf>,
        #[arg(long)]
        order: usize,
        /// Dense right-hand sides of degrees `d` (first) and `D` (rest).
        #[arg(long, value_name = "n,d,D", value_parser = parse_template, conflicts_with = "input")]
        template: Option<(usize, usize, usize)>,
        /// Express every derivative of `x_1` in the state variables alone
        /// instead of in terms of the lower derivatives.
        #[arg(long)]
        substituted: bool,
        #[command(flatten)]
        common: Common,
    },
}

fn parse_template(s: &str) -> Result<(usize, usize, usize), String> {
    let v: Vec<usize> = s
        .trim_matches(|c| c == '[' || c == ']')
        .split(',')
        .map(|t| t.trim().parse().map_err(|_| format!("bad template `{s}`")))
        .collect::<Result<_, _>>()?;
    match v[..] {
        [n, d, big_d] if n > 0 => Ok((n, d, big_d)),
        _ => Err(format!("expected n,d,D, got `{s}`")),
    }
}

fn read(path: &PathBuf) -> Result<String, ExitCode> {
    std::fs::read_to_string(path).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        ExitCode::from(EXIT_FAILURE)
    })
}

fn parse_fail(path: &std::path::Path, e: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {}: {e}", path.display());
    ExitCode::from(EXIT_PARSE)
}

fn build(command: &Command) -> Result<(EliminationProblem, &Common), ExitCode> {
    let fail = |e: mfpx::ProblemError| {
        eprintln!("error: {e}");
        ExitCode::from(EXIT_FAILURE)
    };
    match command {
        Command::Compute { input, raw, common } => {
            let text = read(input)?;
            let problem = if *raw {
                let r = parse_raw(&text).map_err(|e| parse_fail(input, e))?;
                EliminationProblem::from_raw(&r)
            } else {
                let s = parse_system(&text).map_err(|e| parse_fail(input, e))?;
                EliminationProblem::from_system(&s)
            };
            Ok((problem.map_err(fail)?, common))
        }
        Command::Ode { input, order, template, substituted, common } => {
            let ode = match (input, template) {
                (_, Some((n, d, big_d))) => OdeInput::Template { n: *n, d: *d, big_d: *big_d },
                (Some(path), None) => OdeInput::Exact(parse_ode(&read(path)?).map_err(|e| parse_fail(path, e))?),
                (None, None) => unreachable!("clap requires one of them"),
            };
            let relations = if *substituted { Relations::Substituted } else { Relations::Chained };
            Ok((ode_problem(&ode, *order, relations).map_err(fail)?, common))
        }
    }
}

fn print_stats(r: &Report) {
    eprintln!("vertices {}", r.vertex_count);
    eprintln!("facets {}", r.facet_count);
    for (phase, t) in &r.timings {
        eprintln!("time_{phase} {:.3}s", t.as_secs_f64());
    }
}

fn run(cli: Cli) -> ExitCode {
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_FAILURE);
        }
    }
    let (problem, common) = match build(&cli.command) {
        Ok(x) => x,
        Err(code) => return code,
    };
    let emit = match common.emit {
        EmitArg::Vertices => Emit::Vertices,
        EmitArg::Facets => Emit::Facets,
        EmitArg::Both => Emit::Both,
        EmitArg::Count => Emit::Count,
    };
    let opts = Options {
        seed: common.seed,
        verify: common.verify,
        count_lattice: common.count_lattice || emit == Emit::Count,
    };
    let report = match compute_newton_polytope(&problem, opts) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_FAILURE);
        }
    };
    print!("{}", format_report(&report, emit));
    if common.stats {
        print_stats(&report);
    }
    match report.verified {
        Some(true) => {
            println!("verified true");
            ExitCode::SUCCESS
        }
        Some(false) => {
            println!("verified false");
            for g in &report.mismatches {
                let cs: Vec<String> = g.coeffs().iter().map(|c| c.to_string()).collect();
                eprintln!("mismatch at covector ({})", cs.join(","));
            }
            ExitCode::from(EXIT_MISMATCH)
        }
        None => ExitCode::SUCCESS,
    }
}

fn main() -> ExitCode {
    run(Cli::parse())
}
