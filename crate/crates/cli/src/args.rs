use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "hcl", version, about = "Hypergraph container experiments with exact arithmetic")]
pub struct Cli {
    /// Also print decimal approximations of rationals to stderr.
    #[arg(long, global = true)]
    pub human: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a generated hypergraph as JSON.
    Gen(GenArgs),
    /// Build containers for a hypergraph file.
    Contain(ContainArgs),
    /// Check that every maximal independent set lies in a container.
    Verify(VerifyArgs),
    /// Degree measure of a hypergraph at level t.
    Measure(MeasureArgs),
    /// Re-run the command recorded in a manifest.
    Replay {
        manifest: PathBuf,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Clique,
    Gridlines,
    Folkman,
    Induced,
    Random,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    /// clique: n of K_n. folkman, induced: n of K_n for the pattern size.
    #[arg(long)]
    pub n: Option<u32>,
    /// clique: cliques K_{r+1}.
    #[arg(long)]
    pub r: Option<u32>,
    /// gridlines: points per line.
    #[arg(long)]
    pub m: Option<u32>,
    /// gridlines: the prime M.
    #[arg(long = "big-m")]
    pub big_m: Option<u32>,
    /// gridlines: edge size; random: uniformity.
    #[arg(long)]
    pub s: Option<u32>,
    #[arg(long = "h-max")]
    pub h_max: Option<u32>,
    /// folkman, induced: the host K_N.
    #[arg(long = "big-n")]
    pub big_n: Option<u32>,
    /// folkman, induced: number of colours.
    #[arg(long)]
    pub k: Option<u32>,
    /// induced: pattern graph as a 2-uniform hypergraph file.
    #[arg(long)]
    pub pattern: Option<PathBuf>,
    /// induced: one edge unit per injection instead of merging.
    #[arg(long)]
    pub keep_multiplicity: bool,
    /// random: vertex count.
    #[arg(long)]
    pub v: Option<u32>,
    /// random: number of distinct edges.
    #[arg(long)]
    pub edges: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Simple,
    Packaged,
}

#[derive(Args, Debug)]
pub struct ContainArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "simple")]
    pub mode: Mode,
    #[arg(long, default_value = "1/2")]
    pub q: String,
    /// Simple mode: the degree constant K.
    #[arg(long = "K", default_value = "1")]
    pub big_k: String,
    /// Packaged mode.
    #[arg(long)]
    pub alpha: Option<String>,
    /// Packaged mode.
    #[arg(long)]
    pub beta: Option<String>,
    /// Packaged mode: the edge budget E.
    #[arg(long = "E")]
    pub big_e: Option<String>,
    /// Run even when the hypotheses fail.
    #[arg(long)]
    pub force: bool,
    /// Simple mode: a JSON list of vertices; output its single container instead
    /// of enumerating all of them.
    #[arg(long)]
    pub independent: Option<PathBuf>,
    /// Simple mode: maximum number of enumerated leaves.
    #[arg(long, default_value_t = 1_000_000)]
    pub limit: usize,
    #[arg(long, default_value_t = 100_000)]
    pub max_nodes: usize,
    #[arg(long, default_value_t = 1_000_000)]
    pub witness_limit: u64,
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub hypergraph: PathBuf,
    #[arg(long)]
    pub containers: PathBuf,
    /// Maximum number of maximal independent sets to enumerate.
    #[arg(long, default_value_t = 10_000_000)]
    pub cap: usize,
    /// Write the report here instead of stdout.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct MeasureArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    #[arg(long, short)]
    pub t: usize,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}
