//! `coha`: scripted access to products, stratum classes and the verification
//! routines of `coha-core`.
//!
//! Exit codes: 0 on success, 1 when a verification fails, 2 on invalid input.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use coha_core::io::{ElementJson, QuiverFile};
use coha_core::quantum::verify_factorization_with;
use coha_core::strata::{is_product_of_differences, verify_structure_iso};
use coha_core::{
    codim, euler_class, muln, stratum_class, DimVector, Quiver, RootList, SubquiverPartition,
};
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Parser)]
#[command(
    name = "coha",
    version,
    about = "Cohomological Hall algebras of Dynkin quivers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Positive roots in combined Reineke order; the whole quiver unless
    /// blocks are given.
    Roots(Common),
    /// Multiply a list of elements, given as JSON text or a path to a JSON file.
    Multiply {
        #[command(flatten)]
        common: Common,
        /// `[{"gamma": [...], "poly": "..."}, ...]`
        elements: String,
    },
    /// Stratum class, its Euler class on the normal locus, and codimension.
    Stratum {
        #[command(flatten)]
        common: Common,
        /// Multiplicities over the combined root order, e.g. `[1,0,1]`.
        #[arg(long)]
        m: String,
    },
    /// Check the dilogarithm factorization inside a box.
    DilogVerify {
        #[command(flatten)]
        common: Common,
        /// Upper bound on grades, e.g. `[3,3]`.
        #[arg(long = "box")]
        bound: String,
    },
    /// Check that products of subalgebra elements span each graded piece.
    StructureVerify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        gamma: String,
        #[arg(long, default_value_t = 3)]
        kmax: u32,
    },
}

#[derive(Debug, Args)]
struct Common {
    /// Quiver file `{"vertices": n, "arrows": [[tail, head], ...]}`.
    #[arg(long)]
    quiver: PathBuf,
    /// Blocks as JSON, e.g. `[[1],[2,3]]`; overrides the quiver file.
    #[arg(long)]
    blocks: Option<String>,
    /// Write the JSON result here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
}

fn invalid(e: impl std::fmt::Display) -> CliError {
    CliError::Invalid(e.to_string())
}

struct Setup {
    quiver: Arc<Quiver>,
    blocks: SubquiverPartition,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_owned(),
        source,
    })
}

fn parse_json<T: serde::de::DeserializeOwned>(what: &str, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Invalid(format!("--{what}: {e}")))
}

fn dim_vector(q: &Quiver, what: &str, text: &str) -> Result<DimVector, CliError> {
    q.dim(parse_json(what, text)?).map_err(invalid)
}

/// Without blocks, `whole_by_default` selects the whole quiver instead of
/// singleton vertices.
fn setup_with(c: &Common, whole_by_default: bool) -> Result<Setup, CliError> {
    let file = QuiverFile::parse(&read(&c.quiver)?).map_err(invalid)?;
    let quiver = Arc::new(file.quiver().map_err(invalid)?);
    let raw: Option<Vec<Vec<usize>>> = match &c.blocks {
        Some(text) => Some(parse_json("blocks", text)?),
        None => file.blocks.clone(),
    };
    let blocks = match raw {
        Some(raw) => SubquiverPartition::new(&quiver, &raw, true).map_err(invalid)?,
        None if whole_by_default => SubquiverPartition::whole(&quiver, true).map_err(invalid)?,
        None => SubquiverPartition::singletons(&quiver),
    };
    Ok(Setup { quiver, blocks })
}

fn setup(c: &Common) -> Result<Setup, CliError> {
    setup_with(c, false)
}

fn roots(c: &Common) -> Result<(Value, bool), CliError> {
    let s = setup_with(c, true)?;
    let roots = RootList::combined(&s.quiver, &s.blocks).map_err(invalid)?;
    let listed: Vec<Value> = roots
        .roots()
        .iter()
        .enumerate()
        .map(|(u, b)| json!({"root": b.as_root_sum(), "vector": b.entries(), "block": roots.block_of(u) + 1}))
        .collect();
    let kinds: Vec<String> = s.blocks.kinds().iter().map(ToString::to_string).collect();
    Ok((json!({"types": kinds, "roots": listed}), true))
}

fn multiply(c: &Common, elements: &str) -> Result<(Value, bool), CliError> {
    let s = setup(c)?;
    let text = if elements.trim_start().starts_with('[') {
        elements.to_owned()
    } else {
        read(Path::new(elements))?
    };
    let parsed: Vec<ElementJson> = parse_json("elements", &text)?;
    let factors = parsed
        .iter()
        .map(|e| e.to_element(&s.quiver))
        .collect::<Result<Vec<_>, _>>()
        .map_err(invalid)?;
    let product = muln(&factors).map_err(invalid)?;
    Ok((
        serde_json::to_value(ElementJson::from(&product)).expect("serializable"),
        true,
    ))
}

fn stratum(c: &Common, m: &str) -> Result<(Value, bool), CliError> {
    let s = setup(c)?;
    let roots = RootList::combined(&s.quiver, &s.blocks).map_err(invalid)?;
    let m = roots.partition(parse_json("m", m)?).map_err(invalid)?;
    let class = stratum_class(&s.quiver, &roots, &m).map_err(invalid)?;
    let eps = euler_class(&s.quiver, &roots, &m).map_err(invalid)?;
    let c = codim(&s.quiver, &roots, &m).map_err(invalid)?;
    let consistent = eps.degree().unwrap_or(0) == c as u32 && is_product_of_differences(&eps);
    let out = json!({
        "gamma": roots.total(&m).entries(),
        "class": ElementJson::from(&class),
        "euler": eps.to_string(),
        "codim": c,
        "degree_matches_codim": consistent,
    });
    Ok((out, consistent))
}

fn dilog_verify(c: &Common, bound: &str) -> Result<(Value, bool), CliError> {
    let s = setup(c)?;
    let bound = dim_vector(&s.quiver, "box", bound)?;
    let roots = RootList::combined(&s.quiver, &s.blocks).map_err(invalid)?;
    let report = verify_factorization_with(&s.quiver, &roots, &bound).map_err(invalid)?;
    let witness = report.discrepancy.as_ref().map(|d| {
        json!({
            "gamma": d.gamma.entries(),
            "simple_side": d.simple_side.to_string(),
            "root_side": d.root_side.to_string(),
        })
    });
    let out = json!({
        "holds": report.holds,
        "grades_compared": report.grades_compared,
        "order": roots.roots().iter().map(DimVector::as_root_sum).collect::<Vec<_>>(),
        "discrepancy": witness,
    });
    Ok((out, report.holds))
}

fn structure_verify(c: &Common, gamma: &str, kmax: u32) -> Result<(Value, bool), CliError> {
    let s = setup(c)?;
    let gamma = dim_vector(&s.quiver, "gamma", gamma)?;
    let reports = verify_structure_iso(&s.quiver, &s.blocks, &gamma, kmax).map_err(invalid)?;
    let ok = reports.iter().all(|r| r.verified);
    let out = json!({"gamma": gamma.entries(), "verified": ok, "degrees": reports});
    Ok((out, ok))
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("COHA_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| CliError::Invalid(format!("COHA_THREADS={raw} is not a count")))?;
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(invalid)?;
    #[cfg(not(feature = "parallel"))]
    let _ = n;
    Ok(())
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    configure_threads()?;
    let (common, result) = match &cli.command {
        Command::Roots(c) => (c, roots(c)?),
        Command::Multiply { common, elements } => (common, multiply(common, elements)?),
        Command::Stratum { common, m } => (common, stratum(common, m)?),
        Command::DilogVerify { common, bound } => (common, dilog_verify(common, bound)?),
        Command::StructureVerify {
            common,
            gamma,
            kmax,
        } => (common, structure_verify(common, gamma, *kmax)?),
    };
    let (value, ok) = result;
    let text = serde_json::to_string_pretty(&value).expect("serializable") + "\n";
    match &common.out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Write {
            path: path.clone(),
            source,
        })?,
        None => print!("{text}"),
    }
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
