use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "arrtower",
    version,
    about = "Cohomology of no-r-equal configuration spaces and Taylor-tower connectivity"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    pub format: Format,

    /// Write output to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Cross-check join-formula homology against directly built complexes.
    #[arg(long, global = true)]
    pub checked: bool,

    /// Override the ground-set size guard (also ARRTOWER_MAX_K).
    #[arg(long, global = true)]
    pub max_k: Option<usize>,

    /// Worker threads; 1 runs everything on the calling thread.
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    /// On failure, print a JSON error object on standard output.
    #[arg(long, global = true)]
    pub error_json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Reduced integral cohomology of rConf(k, R^n).
    Cohomology(CohomologyArgs),
    /// Dump the lattice Π_{k,r}: elements, covers, interval homology.
    Lattice(LatticeArgs),
    /// Check the total cokernel of the restriction cube.
    Cube(CubeArgs),
    /// Cartesian-ness, layer connectivity, convergence and comparison.
    Connectivity(ConnectivityArgs),
    /// Run the invariant suite; exits 0 iff everything passes.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct CohomologyArgs {
    #[arg(long)]
    pub k: Values,
    #[arg(long)]
    pub r: Values,
    #[arg(long)]
    pub n: Values,
    /// Include the ℤ in degree 0.
    #[arg(long)]
    pub unreduced: bool,
    /// Also print the per-element breakdown in table mode.
    #[arg(long)]
    pub ledger: bool,
}

#[derive(Debug, Args)]
pub struct LatticeArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub r: usize,
    /// Include the order complex of (0̂, 1̂).
    #[arg(long)]
    pub complex: bool,
}

#[derive(Debug, Args)]
pub struct CubeArgs {
    #[arg(long)]
    pub k: Values,
    #[arg(long)]
    pub r: Values,
    #[arg(long)]
    pub n: Values,
}

#[derive(Debug, Args)]
pub struct ConnectivityArgs {
    #[arg(long)]
    pub k: Option<Values>,
    #[arg(long)]
    pub r: Option<Values>,
    #[arg(long)]
    pub n: Option<Values>,
    #[arg(long)]
    pub m: Option<Values>,
    /// Use the standard grid (k 1-9, r 2-5, n 1-5, m 0-3) for unset ranges.
    #[arg(long)]
    pub grid: bool,
    /// Also compute the lowest nonzero degree of the total fiber.
    #[arg(long)]
    pub homological: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    /// Run only the worked examples against their expected values.
    #[arg(long)]
    #[arg(long = "worked-examples", alias = "paper-examples")]
    pub worked_examples: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Lattice,
    Homology,
    Gm,
    Cube,
    Connectivity,
}

/// A parameter given as `4`, `2-5`, `2..5` (both inclusive) or `2,3,7`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Values(pub Vec<u64>);

impl FromStr for Values {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let num = |t: &str| t.trim().parse::<u64>().map_err(|_| format!("not a number: {t:?}"));
        let mut out = Vec::new();
        for part in s.split(',') {
            let range = part.split_once("..").or_else(|| part.split_once('-'));
            match range {
                Some((a, b)) => {
                    let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
                    if a > b {
                        return Err(format!("empty range {part:?}"));
                    }
                    if b - a > 10_000 {
                        return Err(format!("range {part:?} is too long"));
                    }
                    out.extend(a..=b);
                }
                None => out.push(num(part)?),
            }
        }
        out.sort_unstable();
        out.dedup();
        Ok(Values(out))
    }
}
