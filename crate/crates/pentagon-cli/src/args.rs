use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pentagon::identities::IdentityId;
use pentagon::special_functions::TruncationPolicy;

#[derive(Debug, Parser)]
#[command(name = "pentagon", version, about = "Numerical and exact checks of pentagon identities")]
pub struct Cli {
    /// Worker threads for parallel parameter points (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check one identity over a parameter file or a seeded random sweep.
    Verify(VerifyArgs),
    /// Tabulate the distance to a limiting identity along a parameter sequence.
    LimitStudy(LimitArgs),
    /// Expand both sides of the operator pentagon in exact arithmetic.
    ExpandOperator(ExpandArgs),
    /// Run the golden test vectors.
    Selfcheck(SelfcheckArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Identity {
    Operator,
    Classical,
    Hyperbolic,
    Index,
    Gamma,
    Beta,
    Equivalence,
}

impl Identity {
    pub fn id(self) -> IdentityId {
        match self {
            Identity::Operator => IdentityId::Operator,
            Identity::Classical => IdentityId::Classical,
            Identity::Hyperbolic => IdentityId::Hyperbolic,
            Identity::Index => IdentityId::Index,
            Identity::Gamma => IdentityId::GammaSumIntegral,
            Identity::Beta => IdentityId::BetaIntegral,
            Identity::Equivalence => IdentityId::Equivalence,
        }
    }
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Identity to check; may also be given with --identity.
    #[arg(value_enum)]
    pub identity: Option<Identity>,

    #[arg(long = "identity", value_enum, conflicts_with = "identity")]
    pub identity_flag: Option<Identity>,

    /// Parameter points, one JSON object per line.
    #[arg(long, conflicts_with = "random", required_unless_present = "random")]
    pub params: Option<PathBuf>,

    /// Number of seeded random points.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub random: Option<u64>,

    #[arg(long, default_value_t = 1)]
    pub seed: u64,

    /// Residual target replacing the default for this identity.
    #[arg(long)]
    pub tol: Option<f64>,

    /// Rerun each point with doubled truncation and require a stable residual.
    #[arg(long)]
    pub doubled: bool,

    /// Write the report here instead of standard output.
    #[arg(long)]
    pub report: Option<PathBuf>,

    #[command(flatten)]
    pub truncation: TruncationArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LimitKindArg {
    #[value(name = "q-to-1", alias = "Q_TO_1")]
    QTo1,
    #[value(name = "omega", alias = "OMEGA")]
    Omega,
}

#[derive(Debug, Args)]
pub struct LimitArgs {
    #[arg(value_enum)]
    pub kind: LimitKindArg,

    /// Comma-separated q values (q-to-1) or |ω₂| values (omega).
    #[arg(long, value_delimiter = ',')]
    pub sequence: Option<Vec<f64>>,

    /// Gamma-side parameter points for q-to-1, one JSON object per line
    /// (default: the symmetric point).
    #[arg(long)]
    pub params: Option<PathBuf>,

    /// Argument z for the omega study as "re" or "re,im"; repeatable.
    #[arg(long = "z")]
    pub z: Vec<String>,

    /// Also tabulate the scalar q-Pochhammer ratio probes (q-to-1 only).
    #[arg(long)]
    pub probes: bool,

    #[arg(long)]
    pub report: Option<PathBuf>,

    #[command(flatten)]
    pub truncation: TruncationArgs,
}

#[derive(Debug, Args)]
pub struct ExpandArgs {
    #[arg(long, default_value_t = 8)]
    pub max_degree: u32,

    /// Rational q written as "p/r".
    #[arg(long, default_value = "1/2")]
    pub q: String,

    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SelfcheckArgs {
    /// Vector file to run instead of the shipped one.
    #[arg(long)]
    pub vectors: Option<PathBuf>,

    /// Relative tolerance replacing every vector's own.
    #[arg(long)]
    pub tol: Option<f64>,

    #[arg(long)]
    pub report: Option<PathBuf>,

    #[command(flatten)]
    pub truncation: TruncationArgs,
}

/// Overrides for individual truncation controls.
#[derive(Debug, Clone, Default, Args)]
pub struct TruncationArgs {
    #[arg(long)]
    pub product_tail_tol: Option<f64>,
    #[arg(long)]
    pub series_max_terms: Option<usize>,
    #[arg(long)]
    pub quadrature_abs_tol: Option<f64>,
    #[arg(long)]
    pub quadrature_rel_tol: Option<f64>,
    #[arg(long)]
    pub sum_window_start: Option<i64>,
    #[arg(long)]
    pub sum_window_max: Option<i64>,
    #[arg(long)]
    pub sum_tail_tol: Option<f64>,
    #[arg(long)]
    pub max_refinements: Option<usize>,
    #[arg(long)]
    pub circle_points_start: Option<usize>,
    #[arg(long)]
    pub circle_points_max: Option<usize>,
    #[arg(long)]
    pub tail_factor: Option<f64>,
    #[arg(long)]
    pub modular_epsilon: Option<f64>,
}

impl TruncationArgs {
    pub fn apply(&self, base: TruncationPolicy) -> TruncationPolicy {
        let mut p = base;
        macro_rules! set {
            ($($f:ident),*) => {$(if let Some(v) = self.$f { p.$f = v; })*};
        }
        set!(
            product_tail_tol,
            series_max_terms,
            quadrature_abs_tol,
            quadrature_rel_tol,
            sum_window_start,
            sum_window_max,
            sum_tail_tol,
            max_refinements,
            circle_points_start,
            circle_points_max,
            tail_factor,
            modular_epsilon
        );
        p
    }
}
