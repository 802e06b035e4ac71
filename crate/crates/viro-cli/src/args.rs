use std::path::PathBuf;

use clap::{value_parser, Args, Parser, Subcommand, ValueEnum};

/// Default cap on glued cells before homology is attempted.
pub const DEFAULT_CELL_CAP: u64 = 20_000_000;

#[derive(Debug, Parser)]
#[command(name = "viro", version, about = "Cooking coefficients, certified triangulations and combinatorial patchworking")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct RunConfig {
    /// Output format. Defaults depend on the subcommand.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write to this file instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    /// Worker threads; 1 runs everything on the calling thread's pool of one.
    #[arg(long, global = true, value_parser = value_parser!(u64).range(1..))]
    pub workers: Option<u64>,

    /// Per-dimension cap on search combinations.
    #[arg(long, global = true, env = "VIRO_FRONTIER_CAP", default_value_t = viro_cook::search::DEFAULT_CAP as u64,
          value_parser = value_parser!(u64).range(1..))]
    pub frontier_cap: u64,

    /// Largest glued complex, in cells, that `patchwork` will reduce.
    #[arg(long, global = true, env = "VIRO_CELL_CAP", default_value_t = DEFAULT_CELL_CAP,
          value_parser = value_parser!(u64).range(1..))]
    pub cell_cap: u64,

    /// Levels computed in exact arithmetic before `limit` switches to floats.
    #[arg(long, global = true, env = "VIRO_EXACT_HORIZON", default_value_t = viro_cook::limit::DEFAULT_EXACT_HORIZON as u64,
          value_parser = value_parser!(u64).range(1..))]
    pub exact_horizon: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eulerian numbers, Hodge coefficients, second differences and sign profiles.
    Coeff(CoeffArgs),
    /// Cook one ingredient set.
    Cook(CookArgs),
    /// Best cooked coefficients over recursive plans.
    Search(SearchArgs),
    /// Distribution of cooked coefficients against the Gaussian.
    Limit(LimitArgs),
    /// Build the certified triangulation T of S^n_d.
    Triangulate(TriangulateArgs),
    /// Glue a T-complex and compute its Z_2 Betti numbers.
    Patchwork(PatchworkArgs),
    /// Run the acceptance suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct CoeffArgs {
    /// Largest n.
    #[arg(long, default_value_t = 10, value_parser = value_parser!(u64).range(1..=400))]
    pub n: u64,

    /// Smallest n.
    #[arg(long, default_value_t = 1, value_parser = value_parser!(u64).range(1..))]
    pub from: u64,
}

#[derive(Debug, Args)]
pub struct CookArgs {
    /// JSON object (inline or a file) mapping dimension to a registry name or a list of "num/den" entries.
    #[arg(long)]
    pub ingredients: String,

    /// Target dimension; defaults to one more than the largest ingredient.
    #[arg(long, value_parser = value_parser!(u64).range(2..))]
    pub n: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SearchMode {
    Memo,
    Brute,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// Dimension of the coefficient to maximise.
    #[arg(long, required_unless_present = "table", value_parser = value_parser!(u64).range(1..))]
    pub n: Option<u64>,

    /// Index of the coefficient to maximise.
    #[arg(long, required_unless_present = "table")]
    pub i: Option<u64>,

    /// Comma-separated leaves: std, brugalle, brugalle+, brugalle-, interp, interp:<a>.
    #[arg(long, default_value = "std,brugalle")]
    pub leaves: String,

    /// Overrides --frontier-cap for this run.
    #[arg(long, value_parser = value_parser!(u64).range(1..))]
    pub cap: Option<u64>,

    #[arg(long, value_enum, default_value_t = SearchMode::Memo)]
    pub mode: SearchMode,

    /// Emit the surplus table for every n up to this value.
    #[arg(long, conflicts_with_all = ["n", "i"], value_parser = value_parser!(u64).range(1..))]
    pub table: Option<u64>,
}

#[derive(Debug, Args)]
pub struct LimitArgs {
    /// Number of fixed ingredient levels.
    #[arg(long = "N", value_parser = value_parser!(u64).range(1..))]
    pub big_n: u64,

    /// Registry names (one for level N, or one per level) or a JSON object as for `cook`.
    #[arg(long, default_value = "standard")]
    pub ingredients: String,

    /// Level to compare with the Gaussian.
    #[arg(long, value_parser = value_parser!(u64).range(2..))]
    pub n: u64,
}

#[derive(Debug, Args)]
pub struct TriangulateArgs {
    #[arg(long, value_parser = value_parser!(u64).range(2..))]
    pub n: u64,

    #[arg(long, value_parser = value_parser!(u64).range(1..))]
    pub d: u64,

    /// Refine to a primitive triangulation.
    #[arg(long)]
    pub primitive: bool,

    /// Re-check convexity, volume and the required regions before writing.
    #[arg(long)]
    pub verify: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ChartMode {
    Torus,
    Affine,
    Projective,
}

#[derive(Debug, Args)]
pub struct PatchworkArgs {
    /// Primitive triangulation in the text format written by `triangulate`.
    #[arg(long)]
    pub triangulation: Option<std::path::PathBuf>,

    /// A sign file, `harnack` (n = 2), or `qnd` (standard ingredients transplanted onto T).
    #[arg(long)]
    pub signs: String,

    #[arg(long, value_enum, default_value_t = ChartMode::Projective)]
    pub mode: ChartMode,

    /// Dimension when no triangulation file is given.
    #[arg(long, value_parser = value_parser!(u64).range(2..))]
    pub n: Option<u64>,

    /// Degree when no triangulation file is given.
    #[arg(long, value_parser = value_parser!(u64).range(1..))]
    pub d: Option<u64>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// One of coefficients, cooking, limit, triangulation, patchwork, search, all.
    #[arg(long, default_value = "all")]
    pub suite: String,
}
