//! Command-line front end. [`run_cli`] is the whole program; `main` only
//! wires it to the process streams.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::fpt::{solve_fpt, Backend, FptError, FptOptions, PermuterError, DEVIATION_FLAGS};
use crate::io::{
    digest, parse_certificate, parse_grid, parse_instance, parse_route, render_frames, write_instance, write_route,
    RenderError, RenderFormat,
};
use crate::reductions::{ham_to_sna, verify_cross_composition, ComposedSolver, ReductionError};
use crate::snake::{solve_bfs_oracle, Decision, Instance, OracleError, OracleOptions, SolveResult};
use crate::wall::{tw_reduce, wall_instance, WallError, WallLayout, WallStrategy, DEFAULT_BRUTE_FORCE_BUDGET};

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_INVARIANT: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "snakeplan", about = "Snake motion planning on graphs", disable_version_flag = true)]
struct Cli {
    /// Print the version and the algorithm deviation flags.
    #[arg(long)]
    version: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide an instance and print `YES <moves>` or `NO`.
    Solve(SolveArgs),
    /// Generate instances.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Contract wall edges until no large wall is found.
    ReduceTw(ReduceArgs),
    /// Check a route file against an instance.
    VerifyRoute {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        route: PathBuf,
    },
    /// Write one frame per configuration of a route on a grid instance.
    Render {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        route: PathBuf,
        #[arg(long, value_enum, default_value = "ascii")]
        format: FormatArg,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, value_enum, default_value = "oracle")]
    algo: Algo,
    #[arg(long, value_enum, default_value = "deterministic")]
    backend: BackendArg,
    /// Seed for the montecarlo backend.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of sampled colorings for the montecarlo backend.
    #[arg(long)]
    samples: Option<u64>,
    /// Worker threads for the fpt solver.
    #[arg(long)]
    workers: Option<usize>,
    /// Stop the oracle after this many configurations.
    #[arg(long, default_value_t = crate::snake::DEFAULT_MAX_STATES)]
    max_states: usize,
    #[arg(long)]
    emit_route: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum GenCommand {
    /// Compose grid graphs (`snake-grid v1` files) into one instance.
    Hamtosna {
        #[arg(long, num_args = 1.., required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Also decide the inputs and checkpoints with the oracle and write a report.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// An elementary wall with two pendant paths.
    Wall {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "through", value_parser = parse_layout)]
        layout: WallLayout,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args, Debug)]
struct ReduceArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    report: PathBuf,
    #[arg(long, value_enum, default_value = "grid-pattern")]
    strategy: StrategyArg,
    /// Wall certificate for the external strategy.
    #[arg(long)]
    certificate: Option<PathBuf>,
    /// Step budget for the brute-force strategy.
    #[arg(long, default_value_t = DEFAULT_BRUTE_FORCE_BUDGET)]
    budget: u64,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Algo {
    Oracle,
    Fpt,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum BackendArg {
    Deterministic,
    Exhaustive,
    Montecarlo,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FormatArg {
    Ascii,
    Svg,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum StrategyArg {
    GridPattern,
    BruteForce,
    External,
}

fn parse_layout(s: &str) -> Result<WallLayout, String> {
    WallLayout::parse(s).ok_or_else(|| {
        let names: Vec<&str> = WallLayout::ALL.iter().map(|l| l.name()).collect();
        format!("unknown layout `{s}`, expected one of {}", names.join(", "))
    })
}

/// A failure with its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<FptError> for Failure {
    fn from(e: FptError) -> Self {
        let code = match e {
            FptError::Permuter(PermuterError::OverBudget { .. }) => EXIT_BUDGET,
            FptError::Permuter(_) => EXIT_USAGE,
            FptError::Invariant(_) => EXIT_INVARIANT,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        Failure { code: EXIT_BUDGET, message: e.to_string() }
    }
}

impl From<WallError> for Failure {
    fn from(e: WallError) -> Self {
        let code = match e {
            WallError::Budget { .. } => EXIT_BUDGET,
            _ => EXIT_USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<ReductionError> for Failure {
    fn from(e: ReductionError) -> Self {
        match e {
            ReductionError::Hamiltonian(_) | ReductionError::Oracle(_) => Failure { code: EXIT_BUDGET, message: e.to_string() },
            ReductionError::Fpt(f) => f.into(),
            _ => Failure::usage(e.to_string()),
        }
    }
}

type CliResult = Result<i32, Failure>;

/// Runs the program on `args` (including the program name) and returns the exit code.
pub fn run_cli<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{text}");
                EXIT_YES
            };
        }
    };
    if cli.version {
        let _ = writeln!(stdout, "snakeplan {}", env!("CARGO_PKG_VERSION"));
        for (flag, what) in DEVIATION_FLAGS {
            let _ = writeln!(stdout, "deviation {flag}: {what}");
        }
        return EXIT_YES;
    }
    let Some(command) = cli.command else {
        let _ = writeln!(stderr, "error: a subcommand is required (see --help)");
        return EXIT_USAGE;
    };
    let result = match command {
        Command::Solve(a) => solve(&a, stdout, stderr),
        Command::Gen(GenCommand::Hamtosna { inputs, out, report }) => gen_hamtosna(&inputs, &out, report.as_deref(), stdout),
        Command::Gen(GenCommand::Wall { r, k, layout, out }) => gen_wall(r, k, layout, &out),
        Command::ReduceTw(a) => reduce(&a, stdout),
        Command::VerifyRoute { instance, route } => verify(&instance, &route, stdout),
        Command::Render { instance, route, format, out } => render(&instance, &route, format, &out, stdout),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn load_instance(path: &Path) -> Result<Instance, Failure> {
    parse_instance(&read(path)?).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn solve(a: &SolveArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult {
    let inst = load_instance(&a.instance)?;
    let result: SolveResult = match a.algo {
        Algo::Oracle => solve_bfs_oracle(&inst, &OracleOptions { step_cap: None, max_states: a.max_states })?,
        Algo::Fpt => {
            let backend = match a.backend {
                BackendArg::Deterministic => Backend::Deterministic,
                BackendArg::Exhaustive => Backend::Exhaustive,
                BackendArg::Montecarlo => Backend::MonteCarlo { seed: a.seed, samples: a.samples },
            };
            let mut opts = FptOptions::new(backend);
            opts.workers = a.workers;
            let sol = solve_fpt(&inst, &opts)?;
            for line in sol.metadata.lines() {
                let _ = writeln!(stderr, "fpt {line}");
            }
            sol.result
        }
    };
    match (&result.decision, &result.route) {
        (Decision::Yes, Some(route)) => {
            route.check(&inst).map_err(|e| Failure { code: EXIT_INVARIANT, message: format!("solver route invalid: {e}") })?;
            let _ = writeln!(stdout, "YES {}", route.len());
            if let Some(path) = &a.emit_route {
                write_file(path, &write_route(route, &inst.graph))?;
            }
            Ok(EXIT_YES)
        }
        (Decision::Yes, None) => Err(Failure { code: EXIT_INVARIANT, message: "Yes answer without a route".into() }),
        (Decision::No, _) => {
            let _ = writeln!(stdout, "NO");
            Ok(EXIT_NO)
        }
    }
}

fn gen_hamtosna(inputs: &[PathBuf], out: &Path, report: Option<&Path>, stdout: &mut dyn Write) -> CliResult {
    let mut grids = Vec::with_capacity(inputs.len());
    let mut digests = Vec::with_capacity(inputs.len());
    for p in inputs {
        let text = read(p)?;
        digests.push(digest(text.as_bytes()));
        grids.push(parse_grid(&text).map_err(|e| Failure::usage(format!("{}: {e}", p.display())))?);
    }
    let comp = ham_to_sna(&grids)?;
    let mut comments = vec![format!("gen hamtosna: {} inputs, snake length {}", inputs.len(), comp.instance.k)];
    for (i, (d, c)) in digests.iter().zip(&comp.columns).enumerate() {
        comments.push(format!("input {} sha256 {d} column {c}", i + 1));
    }
    write_file(out, &write_instance(&comp.instance, &comments))?;
    let _ = writeln!(stdout, "vertices {} edges {}", comp.instance.graph.n(), comp.instance.graph.edge_count());
    if let Some(path) = report {
        let rep = verify_cross_composition(&grids, &ComposedSolver::Oracle(OracleOptions::default()))?;
        let mut text = rep.lines().join("\n");
        text.push('\n');
        write_file(path, &text)?;
        if !rep.agreement {
            return Err(Failure { code: EXIT_INVARIANT, message: "composed answer differs from the inputs".into() });
        }
    }
    Ok(EXIT_YES)
}

fn gen_wall(r: usize, k: usize, layout: WallLayout, out: &Path) -> CliResult {
    if k < 2 {
        return Err(Failure::usage(format!("snake length must be at least 2, got {k}")));
    }
    let inst = wall_instance(r, k, layout)?;
    let comments = vec![format!("gen wall: r {r} k {k} layout {}", layout.name())];
    write_file(out, &write_instance(&inst, &comments))?;
    Ok(EXIT_YES)
}

fn reduce(a: &ReduceArgs, stdout: &mut dyn Write) -> CliResult {
    let inst = load_instance(&a.input)?;
    let strategy = match (a.strategy, &a.certificate) {
        (StrategyArg::External, Some(p)) => WallStrategy::External(
            parse_certificate(&read(p)?).map_err(|e| Failure::usage(format!("{}: {e}", p.display())))?,
        ),
        (StrategyArg::External, None) => return Err(Failure::usage("the external strategy needs --certificate")),
        (_, Some(_)) => return Err(Failure::usage("--certificate is only used by the external strategy")),
        (StrategyArg::GridPattern, None) => WallStrategy::GridPattern,
        (StrategyArg::BruteForce, None) => WallStrategy::BruteForce { budget: a.budget },
    };
    let (reduced, report) = tw_reduce(&inst, &strategy)?;
    let comments = vec![
        format!("reduce-tw: {} contractions", report.steps.len()),
        format!("source sha256 {}", digest(read(&a.input)?.as_bytes())),
    ];
    write_file(&a.out, &write_instance(&reduced, &comments))?;
    let mut text = report.lines().join("\n");
    text.push('\n');
    write_file(&a.report, &text)?;
    let _ = writeln!(stdout, "contractions {} vertices {}", report.steps.len(), reduced.graph.n());
    Ok(EXIT_YES)
}

fn verify(instance: &Path, route: &Path, stdout: &mut dyn Write) -> CliResult {
    let inst = load_instance(instance)?;
    let r = parse_route(&read(route)?, &inst.graph).map_err(|e| Failure::usage(format!("{}: {e}", route.display())))?;
    match r.check(&inst) {
        Ok(()) => {
            let _ = writeln!(stdout, "OK {}", r.len());
            Ok(EXIT_YES)
        }
        Err(e) => {
            let _ = writeln!(stdout, "FAIL step {}: {}", e.step, e.reason);
            Ok(EXIT_NO)
        }
    }
}

fn render(instance: &Path, route: &Path, format: FormatArg, out: &Path, stdout: &mut dyn Write) -> CliResult {
    let inst = load_instance(instance)?;
    let r = parse_route(&read(route)?, &inst.graph).map_err(|e| Failure::usage(format!("{}: {e}", route.display())))?;
    let format = match format {
        FormatArg::Ascii => RenderFormat::Ascii,
        FormatArg::Svg => RenderFormat::Svg,
    };
    let frames = match render_frames(&inst, &r, format) {
        Ok(f) => f,
        Err(RenderError::Route(e)) => {
            let _ = writeln!(stdout, "FAIL step {}: {}", e.step, e.reason);
            return Ok(EXIT_NO);
        }
        Err(e @ RenderError::NotGrid) => return Err(Failure::usage(e.to_string())),
    };
    fs::create_dir_all(out).map_err(|e| Failure::usage(format!("{}: {e}", out.display())))?;
    for f in &frames {
        write_file(&out.join(format!("frame_{:04}.{}", f.step, format.extension())), &f.body)?;
    }
    let _ = writeln!(stdout, "frames {}", frames.len());
    Ok(EXIT_YES)
}
