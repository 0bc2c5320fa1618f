use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::output::Format;

#[derive(Debug, Parser)]
#[command(
    name = "entrobound",
    version,
    about = "Entropic lower bounds on multipartite entanglement"
)]
pub struct Cli {
    /// Write output here instead of stdout; a `<out>.manifest.json` is written alongside.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format (tables default to csv, reports to json).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Seed for stochastic paths.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Witness and element bounds across a Werner-mixing sweep.
    Werner(WernerArgs),
    /// Tripartite witness for a state, density-matrix file or counts file.
    Witness(WitnessArgs),
    /// GHZ-adapted density-element bounds.
    ElementBound(StateSource),
    /// Spatial triple-Gaussian bound against pump width.
    CvSpatial(CvSpatialArgs),
    /// Frequency-time triple-Gaussian bound against pump bandwidth.
    CvTime(CvTimeArgs),
    /// Coarse-grained bound of a triple-Gaussian model.
    CvCoarse(CvCoarseArgs),
    /// Cyclic N-partite witness.
    Npartite(NpartiteArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum WernerFamily {
    Gw,
    Ww,
}

#[derive(Debug, Args)]
pub struct WernerArgs {
    #[arg(long, value_enum)]
    pub state: WernerFamily,
    #[arg(long, default_value = "p=0:1:201")]
    pub sweep: String,
    /// Comma-separated Q,R basis names for the measured witness.
    #[arg(long, default_value = "x,z")]
    pub bases: String,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct StateSource {
    /// Built-in state: ghz3, ghz(n[,d]), w3, mm, mm(n), insep, gw(p), ww(p).
    #[arg(long)]
    pub state: Option<String>,
    /// Density matrix JSON file with `dims`, `re` and optional `im`.
    #[arg(long)]
    pub rho: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct WitnessArgs {
    #[arg(long, conflicts_with_all = ["rho", "counts"])]
    pub state: Option<String>,
    #[arg(long, conflicts_with = "counts")]
    pub rho: Option<PathBuf>,
    /// Counts CSV: `setting,outcome_A,outcome_B,outcome_C,count`.
    #[arg(long)]
    pub counts: Option<PathBuf>,
    /// Comma-separated Q,R basis names (x, y, z, computational(d), fourier(d)).
    #[arg(long, default_value = "x,z", conflicts_with = "bases_file")]
    pub bases: String,
    /// JSON file `{"q": {"re": [[..]], "im": [[..]]}, "r": {..}}`; columns are basis vectors.
    #[arg(long)]
    pub bases_file: Option<PathBuf>,
    /// Per-setting total below which a low-counts warning is raised.
    #[arg(long, default_value_t = entrobound::distribution::DEFAULT_MIN_COUNTS)]
    pub min_counts: u64,
    /// Counts come from a pure state; enables the pure-state minimum bound.
    #[arg(long, requires = "counts")]
    pub assume_pure: bool,
}

#[derive(Debug, Args)]
pub struct CvSpatialArgs {
    #[arg(long, default_value = "10mm")]
    pub length: String,
    #[arg(long, default_value = "325nm")]
    pub wavelength: String,
    #[arg(long, default_value = "2.247")]
    pub index: String,
    #[arg(
        long,
        default_value = "sigma_p=1um:10mm:161:log",
        conflicts_with = "at"
    )]
    pub sweep: String,
    /// Evaluate at these pump widths instead of a sweep.
    #[arg(long, value_delimiter = ',')]
    pub at: Vec<String>,
}

#[derive(Debug, Args)]
pub struct CvTimeArgs {
    #[arg(long, default_value = "10mm")]
    pub length: String,
    /// Group velocity dispersion in s²/m.
    #[arg(long, default_value = "1.01e-25")]
    pub gvd: String,
    #[arg(
        long,
        default_value = "sigma_wp=1MHz:100THz:321:log",
        conflicts_with = "at"
    )]
    pub sweep: String,
    /// Evaluate at these pump bandwidths instead of a sweep.
    #[arg(long, value_delimiter = ',')]
    pub at: Vec<String>,
    /// Read bandwidths as ordinary frequency and multiply by 2π.
    #[arg(long)]
    pub ordinary_hz: bool,
}

#[derive(Debug, Args)]
pub struct CvCoarseArgs {
    /// Axis exponents alpha_u,alpha_v,alpha_w.
    #[arg(long, value_delimiter = ',', required = true)]
    pub alpha: Vec<f64>,
    #[arg(long)]
    pub dx: f64,
    #[arg(long)]
    pub dk: f64,
    /// Also run the Monte-Carlo estimator with this many samples.
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Debug, Args)]
pub struct NpartiteArgs {
    #[arg(long, conflicts_with = "counts")]
    pub state: Option<String>,
    #[arg(long)]
    pub counts: Option<PathBuf>,
    /// Expected party count; checked against the state or counts file.
    #[arg(long)]
    pub n: Option<usize>,
    /// Local dimension of the counts file outcomes.
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    #[arg(long, default_value = "z,x")]
    pub bases: String,
    #[arg(long, default_value_t = entrobound::distribution::DEFAULT_MIN_COUNTS)]
    pub min_counts: u64,
}
