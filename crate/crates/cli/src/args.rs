use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "qconvex", version, about = "Verifiers and coefficient tools for q-starlike and q-close-to-convex functions")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Deformation parameter, in [1e-6, 1].
    #[arg(long, global = true, default_value_t = 0.5)]
    pub q: f64,

    /// Truncation order of generated series.
    #[arg(
        long,
        global = true,
        env = "QCONVEX_ORDER",
        default_value_t = 64,
        value_parser = clap::value_parser!(u16).range(8..=4096)
    )]
    pub order: u16,

    /// Comma-separated sampling radii in (0, 1).
    #[arg(long, global = true, value_delimiter = ',', default_value = "0.5,0.8,0.95")]
    pub radii: Vec<f64>,

    /// Samples per circle.
    #[arg(long, global = true, default_value_t = 720)]
    pub angles: usize,

    /// Explicit margin tolerance; by default derived from the truncation tail.
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    /// Output format; each command has its own default.
    #[arg(long, global = true)]
    pub format: Option<Format>,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a series at points inside the unit disk.
    Eval {
        /// Catalog tag, kq, psi, quantum_dilog, quantum_dilog_scaled, dilog, or a series JSON file.
        #[arg(long = "fn")]
        function: String,
        /// Point as `re` or `re,im`; repeatable.
        #[arg(long = "z", required = true, allow_hyphen_values = true)]
        points: Vec<String>,
    },
    /// Print series coefficients, or write them as a series document.
    Coeffs {
        #[arg(long = "fn")]
        function: String,
        /// Index or inclusive range `lo..hi`.
        #[arg(long)]
        n: Option<String>,
    },
    /// Run a membership check on the sampling grid.
    CheckMembership {
        #[arg(long, value_enum, default_value_t = CheckKind::Kq)]
        check: CheckKind,
        #[arg(long)]
        f: String,
        /// Reference function; required by kq, kq-lemma and ctc.
        #[arg(long)]
        g: Option<String>,
    },
    /// Evaluate coefficient criteria on a real sequence.
    CheckCriteria {
        #[arg(long)]
        f: String,
        /// One criterion tag, or all of them when omitted.
        #[arg(long)]
        criterion: Option<String>,
    },
    /// Tabulate a coefficient bound.
    Bounds {
        /// kq_general, kq_identity, kq_cayley, kq_koebe, kq_lemniscate, kq_hexic, sq_product or sq_cn.
        #[arg(long)]
        class: String,
        /// Index or inclusive range `lo..hi`.
        #[arg(long, default_value = "1..20")]
        n: String,
        /// Distance from 1 for the classical-limit column.
        #[arg(long, default_value_t = qconvex::bounds::DEFAULT_CLASSICAL_EPSILON)]
        epsilon: f64,
    },
    /// Run the full verification suite.
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    /// q-close-to-convex, defining disk condition.
    Kq,
    /// q-close-to-convex, lemma form.
    KqLemma,
    /// q-starlike, defining disk condition.
    SqStar,
    /// q-starlike, ratio form.
    SqStarRatio,
    /// Classical starlike, applied to `f`.
    Starlike,
    /// Classical close-to-convex.
    Ctc,
}
