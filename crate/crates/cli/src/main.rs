use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gsec::harness::{run_suites, SuiteConfig};
use gsec::runtime::DEFAULT_FUEL;
use gsec::static_eval::{format_trace, trace_small};
use gsec::statics::{type_of, StaticTerm};
use gsec::{
    elaborate, evaluate, evaluate_traced, parse, typecheck_gradual, Halt, SecurityLattice, Term,
    TypeEnv,
};

const OK: u8 = 0;
const TYPE_ERROR: u8 = 1;
const RUNTIME_ERROR: u8 = 2;
const INPUT_ERROR: u8 = 3;
const COUNTEREXAMPLES: u8 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "gsec",
    version,
    about = "Check, elaborate and run gradual security-typed programs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Type-check a program and print its type.
    Check(ProgramArgs),
    /// Print the evidence-annotated intrinsic term.
    Elab(ProgramArgs),
    /// Evaluate a program.
    Run(ProgramArgs),
    /// Run property suites.
    Props(PropsArgs),
}

#[derive(Debug, Args)]
struct LatticeArg {
    /// Built-in lattice name (two-point, diamond) or path to a JSON lattice.
    #[arg(long, env = "GSEC_LATTICE", default_value = "two-point")]
    lattice: String,
}

#[derive(Debug, Args)]
struct ProgramArgs {
    file: PathBuf,
    #[command(flatten)]
    lattice: LatticeArg,
    /// Print every evaluation step.
    #[arg(long)]
    trace: bool,
    /// Use the static checker and evaluator.
    #[arg(long = "static")]
    static_only: bool,
    /// Step limit for evaluation.
    #[arg(long, default_value_t = DEFAULT_FUEL)]
    fuel: usize,
}

#[derive(Debug, Args)]
struct PropsArgs {
    /// Accepted for interface uniformity; suites do not read it.
    file: Option<PathBuf>,
    #[command(flatten)]
    lattice: LatticeArg,
    /// Suite to run; repeat for several. Runs all when absent.
    #[arg(long = "suite")]
    suites: Vec<String>,
    /// Term depth bound.
    #[arg(long)]
    depth: Option<usize>,
    /// Type depth bound.
    #[arg(long)]
    type_depth: Option<usize>,
    /// Sample random terms with this seed instead of enumerating.
    #[arg(long)]
    seed: Option<u64>,
    /// Number of random terms per suite.
    #[arg(long)]
    samples: Option<usize>,
    /// Print only the `PROP` lines.
    #[arg(long)]
    quiet: bool,
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

fn load_lattice(arg: &LatticeArg) -> Result<SecurityLattice, Failure> {
    if let Some(lat) = SecurityLattice::builtin(&arg.lattice) {
        return Ok(lat);
    }
    let text = std::fs::read_to_string(&arg.lattice).map_err(|e| {
        fail(
            INPUT_ERROR,
            format!(
                "lattice `{}` is neither built in nor readable: {e}",
                arg.lattice
            ),
        )
    })?;
    SecurityLattice::from_json(&text)
        .map_err(|e| fail(INPUT_ERROR, format!("{}: {e}", arg.lattice)))
}

fn load_program(path: &Path, lattice: &SecurityLattice) -> Result<Term, Failure> {
    let source = std::fs::read_to_string(path)
        .map_err(|e| fail(INPUT_ERROR, format!("{}: {e}", path.display())))?;
    parse(&source, lattice).map_err(|e| fail(INPUT_ERROR, format!("{}:{e}", path.display())))
}

fn type_error(path: &Path, e: impl std::fmt::Display) -> Failure {
    fail(TYPE_ERROR, format!("{}: {e}", path.display()))
}

fn check(args: &ProgramArgs) -> Result<u8, Failure> {
    let lat = load_lattice(&args.lattice)?;
    let term = load_program(&args.file, &lat)?;
    let shown = if args.static_only {
        let st = StaticTerm::from_surface(&term, &lat).map_err(|e| type_error(&args.file, e))?;
        lat.render(&type_of(&TypeEnv::new(), &st, &lat).map_err(|e| type_error(&args.file, e))?)
    } else {
        lat.render(
            &typecheck_gradual(&TypeEnv::new(), &term, &lat)
                .map_err(|e| type_error(&args.file, e))?,
        )
    };
    println!(": {shown}");
    Ok(OK)
}

fn elab(args: &ProgramArgs) -> Result<u8, Failure> {
    let lat = load_lattice(&args.lattice)?;
    let term = load_program(&args.file, &lat)?;
    let it = elaborate(&TypeEnv::new(), &term, &lat).map_err(|e| type_error(&args.file, e))?;
    println!("{}", lat.show(&it));
    Ok(OK)
}

fn run(args: &ProgramArgs) -> Result<u8, Failure> {
    let lat = load_lattice(&args.lattice)?;
    let term = load_program(&args.file, &lat)?;
    if args.static_only {
        return run_static(args, &lat, &term);
    }
    let it = elaborate(&TypeEnv::new(), &term, &lat).map_err(|e| type_error(&args.file, e))?;
    let runtime = |e| fail(RUNTIME_ERROR, format!("{}: {e}", args.file.display()));
    let halt = if args.trace {
        let trace = evaluate_traced(&it, &lat, args.fuel).map_err(runtime)?;
        print!("{}", lat.show(&trace));
        return Ok(exit_for(&trace.halt));
    } else {
        evaluate(&it, &lat, args.fuel).map_err(runtime)?.halt
    };
    match &halt {
        Halt::Value(v) => println!("{}", lat.show(v)),
        Halt::Error(_) => println!("{}", lat.show(&halt)),
    }
    Ok(exit_for(&halt))
}

fn exit_for(halt: &Halt) -> u8 {
    match halt {
        Halt::Value(_) => OK,
        Halt::Error(_) => RUNTIME_ERROR,
    }
}

fn run_static(args: &ProgramArgs, lat: &SecurityLattice, term: &Term) -> Result<u8, Failure> {
    let st = StaticTerm::from_surface(term, lat).map_err(|e| type_error(&args.file, e))?;
    type_of(&TypeEnv::new(), &st, lat).map_err(|e| type_error(&args.file, e))?;
    let trace = trace_small(&st, lat, args.fuel)
        .map_err(|e| fail(RUNTIME_ERROR, format!("{}: {e}", args.file.display())))?;
    if args.trace {
        print!("{}", format_trace(&trace, lat));
    } else {
        println!(
            "{}",
            lat.show(trace.last().expect("traces are never empty"))
        );
    }
    Ok(OK)
}

fn props(args: &PropsArgs) -> Result<u8, Failure> {
    let lat = load_lattice(&args.lattice)?;
    let mut cfg = SuiteConfig::new(lat);
    cfg.term_depth = args.depth;
    cfg.type_depth = args.type_depth;
    cfg.seed = args.seed;
    if let Some(n) = args.samples {
        cfg.samples = n;
    }
    let quiet = args.quiet;
    let reports = run_suites(&args.suites, &cfg, |r| {
        if quiet {
            println!("{}", r.line());
        } else {
            print!("{r}");
        }
    })
    .map_err(|e| fail(INPUT_ERROR, e.to_string()))?;
    let failed = reports.iter().filter(|r| !r.passed()).count();
    if failed > 0 {
        println!("{failed} of {} suites failed", reports.len());
        Ok(COUNTEREXAMPLES)
    } else {
        Ok(OK)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { INPUT_ERROR } else { OK });
        }
    };
    let result = match &cli.command {
        Command::Check(a) => check(a),
        Command::Elab(a) => elab(a),
        Command::Run(a) => run(a),
        Command::Props(a) => props(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
