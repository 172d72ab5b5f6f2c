use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cartan_core::algebra::{AlgebraContext, Family};
use cartan_core::weights::Weight;

use crate::CliError;

#[derive(Parser, Debug)]
#[command(name = "cartan", version, about = "Graded representations of W(n), S(n), H(2r) in exact arithmetic")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the graded basis of 𝔤_[degree] in term grammar.
    Basis {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        degree: i32,
    },
    /// Run a structural verification; exit 1 with a witness on failure.
    Verify {
        which: Check,
        #[command(flatten)]
        common: Common,
        /// Weight for module-axioms.
        #[arg(long, allow_hyphen_values = true)]
        weight: Option<String>,
        /// Degree bound D for module-axioms, max degree for jacobi.
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Print a truncated formal character.
    Char {
        object: CharObject,
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        weight: Option<String>,
    },
    /// Composition multiplicities [V(λ) : L(μ)⟨s⟩] from the peel oracle.
    Compmult {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        weight: String,
    },
    /// Closed-form tilting multiplicity [T(λ) : Δ(μ)].
    Tiltmult {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
    },
    /// Compare the closed form with the composition oracle.
    Soergel {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
    },
}

#[derive(Args, Debug)]
pub struct Common {
    /// W, S or H.
    #[arg(long)]
    pub algebra: String,
    /// Number of variables (2r for H).
    #[arg(long)]
    pub n: usize,
    /// Truncation degree N.
    #[arg(long, default_value_t = 6)]
    pub trunc: usize,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Check {
    Jacobi,
    Si,
    Generation,
    ModuleAxioms,
    Complex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CharObject {
    Delta,
    Nabla,
    Simple,
    Tilting,
    Pi,
}

impl Common {
    pub fn context(&self) -> Result<AlgebraContext, CliError> {
        let family: Family = self.algebra.parse()?;
        Ok(AlgebraContext::new(family, self.n)?)
    }
}

/// Parses an antidominant weight, announcing any change of representative.
pub fn parse_weight(ctx: AlgebraContext, text: &str) -> Result<Weight, CliError> {
    let (w, changed) = Weight::parse(ctx, text)?;
    if changed {
        eprintln!("note: {ctx} weight {text} canonicalized to {w}");
    }
    w.ensure_antidominant()?;
    Ok(w)
}

pub fn require_weight(ctx: AlgebraContext, text: Option<&str>, what: &str) -> Result<Weight, CliError> {
    match text {
        Some(t) => parse_weight(ctx, t),
        None => Err(CliError::Usage(format!("{what} needs --weight"))),
    }
}
