use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "odd-ramsey", version, about = "Odd Ramsey colorings: verification, tiles, conflicts, matching and exact search")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    /// `K_{n,n}` against `K_{2,t}`.
    #[value(alias = "bg")]
    Graph,
    /// Complete k-partite k-graph against `K_{1,...,1,2,2}`.
    #[value(alias = "kh", alias = "hypergraph")]
    Hyper,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PruningArg {
    None,
    Canonical,
    Full,
}

#[derive(Clone, Debug, Args)]
pub struct Global {
    #[arg(long, global = true, value_enum, default_value_t = Kind::Graph)]
    pub kind: Kind,
    /// Part size.
    #[arg(long, global = true, default_value_t = 4)]
    pub n: usize,
    #[arg(long, global = true, default_value_t = 2)]
    pub t: usize,
    /// Uniformity of the hypergraph host.
    #[arg(long, global = true, default_value_t = 2)]
    pub k: usize,
    /// Seed for randomized commands; one is generated and printed if omitted.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub eps: Option<f64>,
    #[arg(long, global = true)]
    pub delta: Option<f64>,
    /// Main palette size.
    #[arg(long, global = true)]
    pub n1: Option<u32>,
    /// Reserve palette size.
    #[arg(long, global = true)]
    pub n2: Option<u32>,
    /// Cap on enumerated tiles.
    #[arg(long, global = true)]
    pub guard: Option<u64>,
    /// Cap on search nodes or enumerated colorings.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// Directory for the JSON report and artifacts.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "name", rename_all = "lowercase")]
pub enum Command {
    /// Check a coloring file for a bad target copy. Exit 0 iff none.
    Verify { file: PathBuf },
    /// Enumerate H1 tiles and compare measured degrees with the closed forms.
    Tiles {
        /// Write one dump line per tile.
        #[arg(long)]
        dump: bool,
    },
    /// Regularity and codegree conditions of the tile system.
    Conditions,
    /// Enumerate conflicts, report codegrees and check the structural claims.
    Conflicts {
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 1_000)]
        matchings: usize,
        /// Write every conflict as JSON lines.
        #[arg(long)]
        dump: bool,
    },
    /// Run the matcher and write the colorings it finds.
    Color {
        /// Number of seeds, starting at `--seed`.
        #[arg(long, default_value_t = 1)]
        runs: u64,
        #[arg(long, default_value_t = 4)]
        restarts: usize,
    },
    /// Exact odd Ramsey number by backtracking.
    Exact {
        #[arg(long, default_value_t = 4)]
        qmax: u32,
        #[arg(long, value_enum)]
        pruning: Option<PruningArg>,
    },
    /// Check that floor(n/t) colors always leave a bad K_{2,t}.
    Lowerbound {
        /// Sample this many random colorings instead of enumerating all.
        #[arg(long)]
        samples: Option<u64>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Verify { .. } => "verify",
            Command::Tiles { .. } => "tiles",
            Command::Conditions => "conditions",
            Command::Conflicts { .. } => "conflicts",
            Command::Color { .. } => "color",
            Command::Exact { .. } => "exact",
            Command::Lowerbound { .. } => "lowerbound",
        }
    }

    pub fn is_randomized(&self) -> bool {
        matches!(self, Command::Conflicts { .. } | Command::Color { .. })
            || matches!(self, Command::Lowerbound { samples: Some(_) })
    }
}
