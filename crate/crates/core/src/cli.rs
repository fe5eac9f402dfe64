//! Command-line front end: `plan`, `validate`, `gen` and `bench`.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::benchgen::{gen_generator_capped, write_instance, Family, GenSpec, Size};
use crate::model::GroundedProblem;
use crate::pddl::load;
use crate::plan::Plan;
use crate::search::{search, BoundsMode, EncodingKind, SearchConfig, SearchStatus, Strategy};
use crate::validator::validate_with;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_TIMEOUT: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "lazyplan", version, about = "Temporal planner with lazy LP scheduling checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Search for a plan; prints it to stdout.
    Plan {
        domain: PathBuf,
        problem: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
        /// Stats JSON goes here instead of stderr.
        #[arg(long)]
        stats: Option<PathBuf>,
        /// Write every LP model into this directory.
        #[arg(long)]
        dump_lp: Option<PathBuf>,
        /// Write the goal state's temporal network as DOT.
        #[arg(long)]
        dump_stn: Option<PathBuf>,
    },
    /// Check a plan against a problem.
    Validate {
        domain: PathBuf,
        problem: PathBuf,
        plan: PathBuf,
        #[arg(long, default_value_t = 0.001)]
        epsilon: f64,
    },
    /// Write a generated instance.
    Gen(GenArgs),
    /// Solve a range of ladder instances and print one CSV row each.
    Bench {
        family: Family,
        #[arg(long, default_value_t = 1)]
        from: usize,
        #[arg(long, default_value_t = 5)]
        to: usize,
        #[command(flatten)]
        search: SearchArgs,
    },
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(long, value_enum, default_value_t = StrategyArg::Lazy)]
    strategy: StrategyArg,
    /// Defaults to optimized for lazy and full for always-lp.
    #[arg(long, value_enum)]
    encoding: Option<EncodingArg>,
    /// Seconds.
    #[arg(long, default_value_t = 1800)]
    timeout: u64,
    #[arg(long, default_value_t = 0.001)]
    epsilon: f64,
    #[arg(long, value_enum, default_value_t = BoundsArg::Conditions)]
    bounds: BoundsArg,
    /// Weighted A* with this heuristic weight; greedy when absent.
    #[arg(long)]
    weight: Option<f64>,
    /// Skip writing LP-derived bounds back into the temporal network.
    #[arg(long)]
    no_write_back: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct GenArgs {
    family: Family,
    /// Ladder instance; overrides the size flags.
    #[arg(long)]
    instance: Option<usize>,
    #[arg(long)]
    trips: Option<usize>,
    #[arg(long)]
    cars: Option<usize>,
    #[arg(long)]
    locations: Option<usize>,
    #[arg(long)]
    pumps: Option<usize>,
    #[arg(long)]
    processes: Option<usize>,
    #[arg(long)]
    tasks: Option<usize>,
    #[arg(long)]
    tanks: Option<usize>,
    /// Generator only: the unsolvable capped-tank fixture.
    #[arg(long)]
    capped: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum StrategyArg {
    Lazy,
    AlwaysLp,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum EncodingArg {
    Optimized,
    Full,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum BoundsArg {
    Conditions,
    All,
    Off,
}

impl clap::builder::ValueParserFactory for Family {
    type Parser = clap::builder::ValueParser;

    fn value_parser() -> Self::Parser {
        clap::builder::ValueParser::new(|s: &str| s.parse::<Family>())
    }
}

impl SearchArgs {
    fn config(&self) -> SearchConfig {
        let strategy = match self.strategy {
            StrategyArg::Lazy => Strategy::Lazy,
            StrategyArg::AlwaysLp => Strategy::AlwaysLp,
        };
        let encoding = match (self.encoding, strategy) {
            (Some(EncodingArg::Optimized), _) | (None, Strategy::Lazy) => EncodingKind::Optimized,
            (Some(EncodingArg::Full), _) | (None, Strategy::AlwaysLp) => EncodingKind::Full,
        };
        let bounds = match self.bounds {
            BoundsArg::Conditions => BoundsMode::Conditions,
            BoundsArg::All => BoundsMode::All,
            BoundsArg::Off => BoundsMode::Off,
        };
        SearchConfig {
            strategy,
            encoding,
            bounds,
            epsilon: self.epsilon,
            timeout: Duration::from_secs(self.timeout),
            weight: self.weight,
            write_back: !self.no_write_back,
            ..SearchConfig::default()
        }
    }
}

fn status_code(s: SearchStatus) -> i32 {
    match s {
        SearchStatus::Solved => EXIT_OK,
        SearchStatus::Unsolvable => EXIT_FAIL,
        SearchStatus::Timeout => EXIT_TIMEOUT,
    }
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_files(domain: &Path, problem: &Path) -> Result<GroundedProblem, String> {
    let d = read(domain)?;
    let p = read(problem)?;
    load(&d, &p).map_err(|e| e.to_string())
}

/// Parses `args` (program name first) and runs the command. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return EXIT_USAGE;
            }
            let _ = write!(out, "{e}");
            return EXIT_OK;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, String> {
    let io = |e: std::io::Error| e.to_string();
    match cmd {
        Command::Plan { domain, problem, search: args, stats, dump_lp, dump_stn } => {
            let p = load_files(&domain, &problem)?;
            let mut cfg = args.config();
            if let Some(dir) = &dump_lp {
                fs::create_dir_all(dir).map_err(io)?;
                cfg.lp_dump = Some(dir.clone());
            }
            let r = search(&p, cfg);
            if let Some(plan) = &r.plan {
                write!(out, "{plan}").map_err(io)?;
            }
            let json = r.stats.to_json();
            match &stats {
                Some(path) => fs::write(path, format!("{json}\n")).map_err(io)?,
                None => writeln!(err, "{json}").map_err(io)?,
            }
            if let (Some(path), Some(stn)) = (&dump_stn, &r.stn) {
                fs::write(path, stn.to_dot()).map_err(io)?;
            }
            if r.status != SearchStatus::Solved {
                writeln!(err, "{}", r.status).map_err(io)?;
            }
            Ok(status_code(r.status))
        }
        Command::Validate { domain, problem, plan, epsilon } => {
            let p = load_files(&domain, &problem)?;
            let plan = Plan::parse(&read(&plan)?).map_err(|e| e.to_string())?;
            let v = validate_with(&p, &plan, epsilon).map_err(|e| e.to_string())?;
            write!(out, "{v}").map_err(io)?;
            Ok(if v.valid { EXIT_OK } else { EXIT_FAIL })
        }
        Command::Gen(g) => {
            let (spec_n, generated) = generate(&g)?;
            let (d, p) = write_instance(&g.out, g.family, spec_n, &generated).map_err(io)?;
            writeln!(out, "{}\n{}", d.display(), p.display()).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Bench { family, from, to, search: args } => {
            writeln!(out, "instance,plan_happenings,lp_runs,lp_time_ms,total_time_ms").map_err(io)?;
            for k in from..=to {
                let g = GenSpec::ladder(family, k, args.seed).generate();
                let p = load(&g.domain, &g.problem).map_err(|e| e.to_string())?;
                let r = search(&p, args.config());
                let s = &r.stats;
                writeln!(
                    out,
                    "{}-{k},{},{},{:.3},{:.3}",
                    family.name(),
                    s.plan_happenings,
                    s.lp_runs,
                    s.lp_time_ms,
                    s.total_time_ms
                )
                .map_err(io)?;
                if r.status != SearchStatus::Solved {
                    writeln!(err, "{}-{k}: {}", family.name(), r.status).map_err(io)?;
                }
            }
            Ok(EXIT_OK)
        }
    }
}

fn generate(g: &GenArgs) -> Result<(usize, crate::benchgen::Generated), String> {
    if g.capped {
        if g.family != Family::Generator {
            return Err("--capped applies to the generator family only".into());
        }
        return Ok((1, gen_generator_capped(g.seed)));
    }
    if let Some(k) = g.instance {
        return Ok((k, GenSpec::ladder(g.family, k, g.seed).generate()));
    }
    let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| format!("missing --{flag} (or use --instance)"));
    let size = match g.family {
        Family::Carpool => Size::Carpool {
            trips: need(g.trips, "trips")?,
            cars: need(g.cars, "cars")?,
            locations: g.locations.unwrap_or(100),
        },
        Family::Pump => Size::Pump {
            pumps: need(g.pumps, "pumps")?,
            processes: need(g.processes, "processes")?,
            tasks: need(g.tasks, "tasks")?,
        },
        Family::Generator => Size::Generator { tanks: need(g.tanks, "tanks")? },
    };
    let n = match size {
        Size::Carpool { trips, .. } => trips,
        Size::Pump { processes, .. } => processes,
        Size::Generator { tanks } => tanks,
    };
    Ok((n, GenSpec { size, seed: g.seed }.generate()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("lazyplan").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn unknown_command_is_usage_error() {
        assert_eq!(call(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(call(&["plan", "only-one.pddl"]).0, EXIT_USAGE);
    }

    #[test]
    fn missing_file_is_usage_error() {
        let (code, _, err) = call(&["plan", "/nonexistent/d.pddl", "/nonexistent/p.pddl"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("/nonexistent/d.pddl"));
    }

    #[test]
    fn gen_requires_sizes() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().to_str().unwrap();
        assert_eq!(call(&["gen", "pump", "--pumps", "1", "--out", out]).0, EXIT_USAGE);
        assert_eq!(call(&["gen", "pump", "--capped", "--out", out]).0, EXIT_USAGE);
        assert_eq!(call(&["gen", "nope", "--instance", "1"]).0, EXIT_USAGE);
    }

    #[test]
    fn encoding_follows_strategy_unless_given() {
        let parse = |args: &[&str]| {
            let cli = Cli::try_parse_from(["lazyplan", "bench", "generator"].iter().chain(args)).unwrap();
            match cli.command {
                Command::Bench { search, .. } => search.config(),
                _ => unreachable!(),
            }
        };
        assert_eq!(parse(&[]).encoding, EncodingKind::Optimized);
        assert_eq!(parse(&["--strategy", "always-lp"]).encoding, EncodingKind::Full);
        assert_eq!(parse(&["--strategy", "always-lp", "--encoding", "optimized"]).encoding, EncodingKind::Optimized);
        assert_eq!(parse(&[]).timeout, Duration::from_secs(1800));
    }
}
