use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;

use nfold::cli::{self, CommandReport};
use nfold::laws::{self, Scenario};
use nfold::random::Bounds;
use nfold::stable::NullClass;
use nfold::{json, Error, Result, RingRef};

#[derive(Parser)]
#[command(name = "nfold", version, about = "Exact computations with n-fold matrix factorizations")]
struct Cli {
    /// Ring description (JSON). Defaults to the "ring" entry of the first input.
    #[arg(long, global = true, value_name = "FILE")]
    ring: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 3)]
    n: usize,
    #[arg(long, global = true, default_value_t = 2)]
    max_rank: usize,
    #[arg(long, global = true, default_value_t = 2)]
    max_deg: usize,
    /// Comma-separated law suites, or `all` / `lemmas`.
    #[arg(long, global = true, default_value = "all")]
    suite: String,
    /// Cases per suite.
    #[arg(long, global = true, default_value_t = 100)]
    cases: usize,
    /// Write the JSON report here (`-` for stdout).
    #[arg(long, global = true, value_name = "OUT")]
    json: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Class {
    Homotopic,
    ThetaZero,
}

#[derive(Subcommand)]
enum Command {
    /// Check that an object is an n-fold factorization.
    Validate { object: PathBuf },
    /// Apply a functor to an object or morphism.
    Functor {
        /// shift, twist, face, degeneracy, inc, inc-left, inc-right, quotient,
        /// left-section or right-section
        name: String,
        input: PathBuf,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        power: i64,
        #[arg(long, default_value_t = 0)]
        index: usize,
        /// Parameter k of the recollement functors (n is `--n`).
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// The trivial object θ^i(A^m) in F_n.
    Theta {
        #[arg(long, default_value_t = 0)]
        index: usize,
        #[arg(long, default_value_t = 1)]
        rank: usize,
    },
    /// Decide whether a morphism is null-homotopic.
    HomotopyCheck { morphism: PathBuf },
    /// Decide whether an object is zero in the stable category.
    StablyZero { object: PathBuf },
    /// Stable Hom between two objects.
    StableHom {
        x: PathBuf,
        y: PathBuf,
        #[arg(long, value_enum, default_value = "homotopic")]
        class: Class,
    },
    /// Cokernel chain of an object.
    Cok0 { object: PathBuf },
    /// Lift a chain of modules to a factorization.
    Lift { chain: PathBuf },
    /// Decide whether two chains are isomorphic.
    ChainIso { c: PathBuf, d: PathBuf },
    /// Γ-module data of an object.
    Phi { object: PathBuf },
    /// Object of a Γ-module.
    Psi { module: PathBuf },
    /// Check the recollement identities for (n, k).
    Recollement {
        #[arg(value_name = "N")]
        folds: usize,
        #[arg(value_name = "K")]
        k: usize,
        /// Object of F_n to check; random if absent.
        object: Option<PathBuf>,
    },
    /// Run the randomized law suites.
    Laws,
}

fn read(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    json::parse(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

struct Inputs {
    ring: Option<RingRef>,
}

impl Inputs {
    fn new(cli: &Cli) -> Result<Self> {
        let ring = cli.ring.as_deref().map(read).transpose()?.map(|v| json::ring_from_json(&v)).transpose()?;
        Ok(Inputs { ring })
    }

    /// Reads a document and settles the ring it lives over.
    fn doc(&mut self, path: &Path) -> Result<Value> {
        let v = read(path)?;
        self.ring = Some(json::document_ring(&v, self.ring.as_ref())?);
        Ok(v)
    }

    fn ring(&self) -> Result<&RingRef> {
        self.ring.as_ref().ok_or_else(|| Error::Parse("no ring given (use --ring)".into()))
    }
}

fn run(cli: &Cli) -> Result<CommandReport> {
    let mut io = Inputs::new(cli)?;
    let bounds = Bounds { n: cli.n, max_rank: cli.max_rank, max_deg: cli.max_deg };
    match &cli.command {
        Command::Validate { object } => {
            let v = io.doc(object)?;
            cli::cmd_validate(io.ring()?, &v)
        }
        Command::Functor { name, input, power, index, k } => {
            let v = io.doc(input)?;
            let f = cli::functor_by_name(name, *power, *index, cli.n, *k)?;
            cli::cmd_functor(io.ring()?, &f, &v)
        }
        Command::Theta { index, rank } => cli::cmd_theta(io.ring()?, cli.n, *index, *rank),
        Command::HomotopyCheck { morphism } => {
            let v = io.doc(morphism)?;
            cli::cmd_homotopy(io.ring()?, &v)
        }
        Command::StablyZero { object } => {
            let v = io.doc(object)?;
            cli::cmd_stably_zero(io.ring()?, &v)
        }
        Command::StableHom { x, y, class } => {
            let (x, y) = (io.doc(x)?, io.doc(y)?);
            let class = match class {
                Class::Homotopic => NullClass::Homotopic,
                Class::ThetaZero => NullClass::ThetaZero,
            };
            cli::cmd_stable_hom(io.ring()?, &x, &y, class)
        }
        Command::Cok0 { object } => {
            let v = io.doc(object)?;
            cli::cmd_cok0(io.ring()?, &v)
        }
        Command::Lift { chain } => {
            let v = io.doc(chain)?;
            cli::cmd_lift(io.ring()?, &v)
        }
        Command::ChainIso { c, d } => {
            let (c, d) = (io.doc(c)?, io.doc(d)?);
            cli::cmd_chain_iso(io.ring()?, &c, &d, cli.seed)
        }
        Command::Phi { object } => {
            let v = io.doc(object)?;
            cli::cmd_phi(io.ring()?, &v)
        }
        Command::Psi { module } => {
            let v = io.doc(module)?;
            cli::cmd_psi(io.ring()?, &v)
        }
        Command::Recollement { folds, k, object } => {
            let v = object.as_deref().map(|p| io.doc(p)).transpose()?;
            cli::cmd_recollement(io.ring()?, *folds, *k, v.as_ref(), cli.seed, bounds)
        }
        Command::Laws => {
            let suites = laws::parse_suites(&cli.suite)?;
            Ok(match io.ring {
                Some(ring) => cli::cmd_laws(&Scenario { ring, seed: cli.seed, bounds, suites, cases: cli.cases }),
                None => cli::cmd_laws_default(cli.seed, bounds, &suites, cli.cases),
            })
        }
    }
}

/// Prints to stdout, tolerating a closed pipe.
fn emit(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(&cli) {
        Ok(report) => {
            emit(&report.summary);
            let text = serde_json::to_string_pretty(&report.json).expect("JSON values serialize");
            match cli.json.as_deref() {
                Some(p) if p == Path::new("-") => emit(&text),
                Some(p) => {
                    if let Err(e) = std::fs::write(p, text + "\n") {
                        eprintln!("error: {}: {e}", p.display());
                        return ExitCode::from(cli::EXIT_INPUT_ERROR as u8);
                    }
                }
                None => {}
            }
            report.outcome.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            cli::exit_code_for_error(&e)
        }
    };
    ExitCode::from(code as u8)
}
