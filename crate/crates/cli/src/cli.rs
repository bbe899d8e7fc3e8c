use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "arithdyn", version, about = "Heights and arithmetic dynamics on the projective line")]
pub struct Cli {
    /// Seed for every randomised step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write a run manifest to this path.
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

/// A map given as JSON (`{"d":2,"U":[..],"V":[..]}`, or `@file`) or as `[X^d:Y^d]`.
#[derive(Debug, Args, Serialize)]
#[group(required = true, multiple = false)]
pub struct MapArg {
    /// Coefficient `i` of `U` and `V` multiplies `X^(d-i) Y^i`.
    #[arg(long)]
    pub map: Option<String>,
    /// Use the power map of this degree.
    #[arg(long)]
    pub power: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Global,
    Local,
    Both,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case", tag = "subcommand")]
pub enum Command {
    /// Logarithmic height of a point of P^k(Q).
    Height {
        /// `a/b`, `a`, `inf`, or `[x0:x1:...]`.
        #[arg(long)]
        point: String,
    },
    /// Points of P^k(Q) with h <= B, as CSV.
    Enumerate {
        #[arg(long)]
        k: usize,
        /// Bound on the logarithmic height.
        #[arg(long)]
        bound: f64,
    },
    /// Point count against the Schanuel asymptotic for H <= B.
    Schanuel {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        bound: u64,
    },
    /// Mahler measure of an integer polynomial.
    Mahler {
        /// Coefficients from the constant term up.
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Height of an algebraic number and its decomposition into places.
    Algheight {
        /// Minimal polynomial, constant term first.
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Decide whether a root of the polynomial is a root of unity.
    Rou {
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
    },
    /// Canonical height of a rational point.
    Canheight {
        #[command(flatten)]
        map: MapArg,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Method::Local)]
        method: Method,
    },
    /// All preperiodic points in P^1(Q).
    Preperiodic {
        #[command(flatten)]
        map: MapArg,
    },
    /// Reduction type at each prime up to a bound and at every bad prime, as CSV.
    Goodred {
        #[command(flatten)]
        map: MapArg,
        #[arg(long, default_value_t = 50)]
        primes_up_to: u64,
    },
    /// Escape rate and filled Julia membership on a square grid, as CSV.
    JuliaSample {
        #[command(flatten)]
        map: MapArg,
        /// Points per side.
        #[arg(long, default_value_t = 64)]
        grid: usize,
        /// The grid covers `[-extent, extent]^2`.
        #[arg(long, default_value_t = 2.0)]
        extent: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Transfinite diameter estimate against the resultant formula.
    Tdiam {
        #[command(flatten)]
        map: MapArg,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = arithdyn::green::DEFAULT_RESTARTS)]
        restarts: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Archimedean discrepancy and, for power maps, the full height identity.
    Discrepancy {
        #[command(flatten)]
        map: MapArg,
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Mean pairing of a point set with the fitted constant.
    Baker {
        #[command(flatten)]
        map: MapArg,
        #[command(flatten)]
        points: PointsArg,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Moments of a family of Galois orbits, as CSV.
    Bilu {
        /// `rou:N` for the primitive N-th roots of unity or `poly:c0,c1,...`
        /// for the conjugates of a root.
        #[arg(long, allow_hyphen_values = true)]
        family: String,
        /// Comma-separated nonzero exponents.
        #[arg(long, allow_hyphen_values = true)]
        exponents: String,
    },
    /// Discrete energy of a point cloud.
    Energy {
        #[command(flatten)]
        map: MapArg,
        /// CSV with columns `re,im`.
        #[arg(long)]
        cloud: PathBuf,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Heights and monomial maps on the multiplicative torus.
    #[command(subcommand)]
    Torus(TorusCommand),
}

#[derive(Debug, Args, Serialize)]
#[group(required = true, multiple = false)]
pub struct PointsArg {
    /// CSV with columns `re,im`.
    #[arg(long)]
    pub points_file: Option<PathBuf>,
    /// Use the N-th roots of unity.
    #[arg(long)]
    pub roots_of_unity: Option<usize>,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case", tag = "torus")]
pub enum TorusCommand {
    /// Sum of the coordinate heights.
    Height {
        /// JSON array of `{"rational":"p/q"}` or `{"minpoly":[..],"root_index":i}`.
        #[arg(long)]
        point: String,
    },
    /// Image under `x -> prod x_i^a_i` with the height bound.
    Pushforward {
        #[arg(long)]
        point: String,
        #[arg(long, allow_hyphen_values = true)]
        exponents: String,
    },
    /// Check `h(alpha beta) <= h(alpha) + h(beta)`.
    Subadditivity {
        /// `p/q` or `poly:c0,c1,...`.
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
    },
}
