//! Command-line front end. Every command writes one JSON document (or JSON
//! lines for `enumerate`) to standard output or `--output`.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 a decomposition flag
//! came out false.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::error::Error;
use crate::operators::{LinearOperator, OperatorJson};
use crate::preorder::{enumerate_preorders, Preorder, PreorderFile};
use crate::proper::{decompose_by_coefficients, decompose_by_diagonal, lemma_audit_suite};
use crate::ring::RingSpec;
use crate::solver::{
    compare_spans, derivation_nullspace, lie_derivation_closed_form, lie_derivation_nullspace,
    Field,
};

#[derive(Debug, Parser)]
#[command(
    name = "incidence",
    version,
    about = "Lie derivations of incidence algebras over exact rings"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that a preorder file lists its full reflexive-transitive closure.
    Validate {
        #[command(flatten)]
        input: PosetArgs,
    },
    /// Compute a basis of derivations or Lie derivations.
    Basis {
        #[command(flatten)]
        input: PosetArgs,
        #[arg(long, value_enum, default_value_t = KindArg::Lie)]
        kind: KindArg,
        #[arg(long, value_enum, default_value_t = MethodArg::Bruteforce)]
        method: MethodArg,
        /// Allow fields of characteristic 2.
        #[arg(long)]
        exploratory: bool,
    },
    /// Split a Lie derivation into a derivation and a central-valued map.
    Decompose {
        #[command(flatten)]
        input: PosetArgs,
        #[arg(long)]
        operator: PathBuf,
        #[arg(long, value_enum, default_value_t = SplitArg::Coefficients)]
        method: SplitArg,
    },
    /// Run the seeded lemma audit and emit its report.
    Audit {
        #[command(flatten)]
        input: PosetArgs,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Allow fields of characteristic 2.
        #[arg(long)]
        exploratory: bool,
    },
    /// Print every preorder on `1..=n` as one JSON document per line.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        connected_only: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct PosetArgs {
    #[arg(long)]
    pub poset: PathBuf,
    /// `Q`, `Z` or `Z/<n>`.
    #[arg(long, default_value = "Q")]
    pub ring: String,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Lie,
    Derivation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Bruteforce,
    ClosedForm,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SplitArg {
    Coefficients,
    Diagonal,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: String,
        source: serde_json::Error,
    },
    #[error(transparent)]
    Math(#[from] Error),
}

/// Rendered output plus exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub text: String,
    pub status: i32,
    pub output: Option<PathBuf>,
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: path.display().to_string(),
        source,
    })
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn load(input: &PosetArgs) -> Result<(Arc<Preorder>, RingSpec), CliError> {
    let file: PreorderFile = read_json(&input.poset)?;
    let ring: RingSpec = input.ring.parse()?;
    let p = Preorder::from_file(&file)
        .map_err(|e| CliError::Usage(format!("{}: {e}", input.poset.display())))?;
    Ok((Arc::new(p), ring))
}

fn field(ring: RingSpec, exploratory: bool) -> Result<Field, CliError> {
    let field = if exploratory {
        Field::exploratory(ring)
    } else {
        Field::new(ring)
    };
    field.map_err(|e| CliError::Usage(format!("solver needs a field: {e}")))
}

/// First pair of the closure that the file does not list, with the index of
/// a stated relation that implies it.
fn missing_pair(file: &PreorderFile, p: &Preorder) -> Option<String> {
    let stated = |a: &str, b: &str| a == b || file.relations.iter().any(|(x, y)| x == a && y == b);
    let (x, y) = p.pairs().find(|&(x, y)| !stated(p.label(x), p.label(y)))?;
    let (a, b) = (p.label(x), p.label(y));
    let via = file
        .relations
        .iter()
        .position(|(s, t)| s == a && p.leq(p.index_of(t).expect("known label"), y))
        .map(|k| format!(" (implied via relations[{k}])"))
        .unwrap_or_default();
    Some(format!(
        "relations: closure contains (\"{a}\", \"{b}\") which is not listed{via}"
    ))
}

fn validate(input: &PosetArgs) -> Result<Outcome, CliError> {
    let file: PreorderFile = read_json(&input.poset)?;
    let p = Preorder::from_file(&file)
        .map_err(|e| CliError::Usage(format!("{}: {e}", input.poset.display())))?;
    if let Some(msg) = missing_pair(&file, &p) {
        return Err(CliError::Usage(format!("{}: {msg}", input.poset.display())));
    }
    let report = json!({
        "valid": true,
        "elements": p.len(),
        "poset": p.is_poset(),
        "connected": p.is_connected(),
        "components": p.connected_components().len(),
    });
    Ok(Outcome {
        text: pretty(&report),
        status: 0,
        output: input.output.clone(),
    })
}

fn basis(
    input: &PosetArgs,
    kind: KindArg,
    method: MethodArg,
    exploratory: bool,
) -> Result<Outcome, CliError> {
    let (p, ring) = load(input)?;
    let field = field(ring, exploratory)?;
    if kind == KindArg::Derivation && method != MethodArg::Bruteforce {
        return Err(CliError::Usage(
            "derivations are only solved by --method bruteforce".into(),
        ));
    }
    let brute = || match kind {
        KindArg::Lie => lie_derivation_nullspace(&p, field),
        KindArg::Derivation => derivation_nullspace(&p, field),
    };
    let text = match method {
        MethodArg::Bruteforce => pretty(&brute()?.to_json()),
        MethodArg::ClosedForm => pretty(&lie_derivation_closed_form(&p, field)?.to_json()),
        MethodArg::Both => {
            let b = brute()?;
            let c = lie_derivation_closed_form(&p, field)?;
            let cmp = compare_spans(&b, &c)?;
            pretty(&json!({
                "bruteforce": b.to_json(),
                "closed_form": c.to_json(),
                "comparison": {
                    "relation": cmp.relation,
                    "witness": cmp.witness.as_ref().map(LinearOperator::to_json),
                },
            }))
        }
    };
    Ok(Outcome {
        text,
        status: 0,
        output: input.output.clone(),
    })
}

fn decompose(input: &PosetArgs, operator: &Path, method: SplitArg) -> Result<Outcome, CliError> {
    let (p, ring) = load(input)?;
    let json: OperatorJson = read_json(operator)?;
    let l = LinearOperator::from_json(&p, ring, &json)?;
    let dec = match method {
        SplitArg::Coefficients => decompose_by_coefficients(&l)?,
        SplitArg::Diagonal => decompose_by_diagonal(&l)?,
    };
    Ok(Outcome {
        text: pretty(&dec.to_json()),
        status: if dec.verified.all() { 0 } else { 2 },
        output: input.output.clone(),
    })
}

fn audit(
    input: &PosetArgs,
    trials: usize,
    seed: u64,
    exploratory: bool,
) -> Result<Outcome, CliError> {
    let (p, ring) = load(input)?;
    let field = field(ring, exploratory)?;
    Ok(Outcome {
        text: pretty(&lemma_audit_suite(&p, field, trials, seed)),
        status: 0,
        output: input.output.clone(),
    })
}

fn enumerate(
    n: usize,
    connected_only: bool,
    output: &Option<PathBuf>,
) -> Result<Outcome, CliError> {
    let mut text = String::new();
    for p in enumerate_preorders(n)?.filter(|p| !connected_only || p.is_connected()) {
        text.push_str(&serde_json::to_string(&p.to_file()).expect("serializable"));
        text.push('\n');
    }
    Ok(Outcome {
        text,
        status: 0,
        output: output.clone(),
    })
}

pub fn execute(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::Validate { input } => validate(input),
        Command::Basis {
            input,
            kind,
            method,
            exploratory,
        } => basis(input, *kind, *method, *exploratory),
        Command::Decompose {
            input,
            operator,
            method,
        } => decompose(input, operator, *method),
        Command::Audit {
            input,
            trials,
            seed,
            exploratory,
        } => audit(input, *trials, *seed, *exploratory),
        Command::Enumerate {
            n,
            connected_only,
            output,
        } => enumerate(*n, *connected_only, output),
    }
}

/// Runs a parsed command, writes its output and returns the exit status.
pub fn run(cli: &Cli) -> i32 {
    let outcome = match execute(&cli.command) {
        Ok(outcome) => outcome,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    match &outcome.output {
        Some(path) => {
            if let Err(e) = fs::write(path, &outcome.text) {
                eprintln!("error: {}: {e}", path.display());
                return 1;
            }
        }
        None => print!("{}", outcome.text),
    }
    outcome.status
}

pub fn main() -> i32 {
    match Cli::try_parse() {
        Ok(cli) => run(&cli),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                1
            } else {
                0
            }
        }
    }
}
