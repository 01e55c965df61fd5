use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use rees_core::fixtures::{fixture, IdealSpec};
use rees_core::oracle::Caps;
use rees_core::report::{analyze, Options, Scope};
use rees_core::verify::{load_corpus_dir, verify_corpus};
use rees_core::{Error, Field, MonomialOrder, Result};

#[derive(Parser)]
#[command(name = "rees", version, about = "Rees algebras of almost complete intersections of forms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Every section of the report.
    Analyze(SpecArgs),
    /// Hilbert series, linkage and Hilbert–Samuel data.
    Hilbert(SpecArgs),
    /// Defining equations of the Rees algebra.
    Rees(SpecArgs),
    /// Special fiber: elimination equation, degree, birationality.
    Fiber(SpecArgs),
    /// Content matrix and its determinant.
    Matrix(SpecArgs),
    /// The binary (two-variable) construction.
    Binary(SpecArgs),
    /// Check the bundled fixtures against their stored values.
    VerifyPaper(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Order {
    Grevlex,
    Lex,
}

#[derive(Args)]
struct SpecArgs {
    /// A spec file, or the name of a bundled fixture.
    spec: String,
    /// Override the coefficient field, e.g. `Q` or `GF(32003)`.
    #[arg(long)]
    field: Option<String>,
    #[arg(long, value_enum, default_value = "grevlex")]
    order: Order,
    /// Oracle bidegree caps as `A,B`.
    #[arg(long, default_value = "10,4")]
    caps: String,
    /// Skip the linear-algebra cross-check.
    #[arg(long)]
    no_oracle: bool,
    /// Largest power tried for the Hilbert–Samuel fit; 0 skips it.
    #[arg(long, default_value_t = 10)]
    samuel_max: usize,
    #[arg(long, value_enum, default_value = "text")]
    emit: Emit,
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Only fixtures whose name starts with this.
    #[arg(long)]
    filter: Option<String>,
    /// Read fixtures from this directory instead of the bundled corpus.
    #[arg(long)]
    corpus: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    emit: Emit,
}

fn parse_caps(text: &str) -> Result<Caps> {
    let bad = || Error::Input(format!("--caps expects `A,B`, got `{text}`"));
    let (a, b) = text.split_once(',').ok_or_else(bad)?;
    Ok(Caps { max_a: a.trim().parse().map_err(|_| bad())?, max_b: b.trim().parse().map_err(|_| bad())? })
}

fn read_spec(spec: &str) -> Result<IdealSpec> {
    let path = Path::new(spec);
    if !path.exists() {
        if let Some(s) = fixture(spec) {
            return Ok(s);
        }
    }
    IdealSpec::from_path(path)
}

fn run_spec(args: &SpecArgs, scope: Scope) -> Result<bool> {
    let spec = read_spec(&args.spec)?;
    let field = match &args.field {
        Some(f) => Some(Field::parse(f).ok_or_else(|| Error::Input(format!("unknown field `{f}`")))?),
        None => None,
    };
    let mut loaded = spec.load_with(field)?;
    if let Order::Lex = args.order {
        loaded = loaded.with_order(MonomialOrder::Lex);
    }
    if scope == Scope::Binary && loaded.ring.nvars() != 2 {
        return Err(Error::Input("the binary command needs two variables".into()));
    }
    let opts = Options {
        caps: parse_caps(&args.caps)?,
        samuel_max: (args.samuel_max > 0).then_some(args.samuel_max),
        oracle: !args.no_oracle,
        timings: args.timings,
    };
    let report = analyze(&loaded, scope, &opts)?;
    match args.emit {
        Emit::Text => print!("{}", report.to_text()),
        Emit::Json => println!("{}", report.to_json()),
    }
    Ok(report.passed())
}

fn run_verify(args: &VerifyArgs) -> Result<bool> {
    let corpus = match &args.corpus {
        Some(dir) => load_corpus_dir(dir)?,
        None => rees_core::fixtures::corpus(),
    };
    let results = verify_corpus(&corpus, args.filter.as_deref());
    if results.is_empty() {
        return Err(Error::Input("no fixture matches the filter".into()));
    }
    match args.emit {
        Emit::Text => {
            for c in &results {
                println!("{}", c.line());
            }
        }
        Emit::Json => println!("{}", serde_json::to_string_pretty(&results).expect("results serialize")),
    }
    Ok(results.iter().all(|c| c.pass))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Analyze(a) => run_spec(a, Scope::All),
        Command::Hilbert(a) => run_spec(a, Scope::Hilbert),
        Command::Rees(a) => run_spec(a, Scope::Rees),
        Command::Fiber(a) => run_spec(a, Scope::Fiber),
        Command::Matrix(a) => run_spec(a, Scope::Matrix),
        Command::Binary(a) => run_spec(a, Scope::Binary),
        Command::VerifyPaper(a) => run_verify(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
