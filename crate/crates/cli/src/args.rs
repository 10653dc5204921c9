use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use equipart_core::scheme::DEFAULT_MAX_VERTICES;
use equipart_core::Tolerances;

#[derive(Debug, Parser)]
#[command(name = "equipart", version, about = "Association schemes, equitable partitions and feasibility checks")]
pub struct Cli {
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,

    /// Eigenvalue grouping tolerance (float mode).
    #[arg(long, global = true, default_value_t = Tolerances::default().eigen)]
    pub tol_eigen: f64,

    /// Integrality tolerance (float mode).
    #[arg(long, global = true, default_value_t = Tolerances::default().integrality)]
    pub tol_int: f64,

    #[arg(long, global = true, default_value_t = DEFAULT_MAX_VERTICES)]
    pub max_vertices: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the scheme axioms and print valencies.
    SchemeVerify(SchemeInput),
    /// Eigenmatrices P and Q with multiplicities.
    Spectra(SchemeInput),
    /// Equitability and feasibility of a vertex partition.
    PartitionCheck(PartitionArgs),
    /// Higman's condition for a vertex permutation.
    Automorphism(AutomorphismArgs),
    /// Search for completely regular codes.
    CrcSearch(CrcArgs),
}

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false, id = "scheme_source")]
pub struct SchemeSource {
    /// Relation file: header "v d" then d+1 blocks of 0/1 rows.
    #[arg(long, value_name = "FILE")]
    pub relations: Option<PathBuf>,

    /// Edge list of a distance-regular graph (requires --drg).
    #[arg(long, value_name = "FILE", requires = "drg")]
    pub edges: Option<PathBuf>,

    /// Named family: petersen, hamming,n,q, johnson,n,k, cycle,n, complete,n.
    #[arg(long, value_name = "NAME")]
    pub family: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct SchemeInput {
    #[command(flatten)]
    pub source: SchemeSource,

    /// Read the edge list as a distance-regular graph.
    #[arg(long)]
    pub drg: bool,
}

#[derive(Debug, Clone, Args)]
pub struct PartitionArgs {
    #[command(flatten)]
    pub scheme: SchemeInput,

    /// Partition file, one cell per line.
    #[arg(long, value_name = "FILE")]
    pub partition: PathBuf,

    /// Trace profile, projector integrality and Lloyd checks.
    #[arg(long)]
    pub feasibility: bool,

    /// Compare ⟨F, E_j⟩ with dim(W_j H) (equitable partitions only).
    #[arg(long)]
    pub theorem2: bool,
}

#[derive(Debug, Clone, Args)]
pub struct AutomorphismArgs {
    #[command(flatten)]
    pub scheme: SchemeInput,

    /// Permutation file, one "x y" mapping per line.
    #[arg(long, value_name = "FILE")]
    pub permutation: PathBuf,

    /// Evaluate the condition even if the permutation moves relations.
    #[arg(long)]
    pub no_precheck: bool,
}

#[derive(Debug, Clone, Args)]
pub struct CrcArgs {
    #[command(flatten)]
    pub scheme: SchemeInput,

    /// Relation whose graph defines distances.
    #[arg(long, default_value_t = 1)]
    pub relation: usize,

    /// Code sizes, "a..b" or a single size.
    #[arg(long, value_name = "A..B", default_value = "1..1")]
    pub sizes: String,

    /// Maximum number of candidates evaluated.
    #[arg(long, default_value_t = equipart_core::codes::DEFAULT_BUDGET)]
    pub budget: usize,

    /// Skip candidates with an already seen pairwise-relation signature.
    #[arg(long)]
    pub dedup: bool,

    /// Also evaluate Lloyd and projector integrality on each distance partition.
    #[arg(long)]
    pub prefilter: bool,

    /// Evaluate candidates on one thread.
    #[arg(long)]
    pub serial: bool,

    /// Write one JSON record per examined code to FILE.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

pub fn parse_sizes(text: &str) -> Option<(usize, usize)> {
    match text.split_once("..") {
        Some((a, b)) => Some((a.trim().parse().ok()?, b.trim().trim_start_matches('=').parse().ok()?)),
        None => {
            let k = text.trim().parse().ok()?;
            Some((k, k))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_valid() {
        Cli::command().debug_assert();
    }

    #[test]
    fn sizes() {
        assert_eq!(parse_sizes("1..3"), Some((1, 3)));
        assert_eq!(parse_sizes("2..=2"), Some((2, 2)));
        assert_eq!(parse_sizes("4"), Some((4, 4)));
        assert_eq!(parse_sizes("a..2"), None);
    }
}
