//! `ellstab`: command-line front end for the exact stability numerics.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ellstab::rational::Q;

use config::{parse_box, parse_int_range, parse_q_range, parse_rational, CheckLevel, Format, RunConfig};

/// A usage or input-shape problem detected by the front end (exit code 2).
#[derive(Debug)]
pub struct Usage(pub String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

#[derive(Parser, Debug)]
#[command(name = "ellstab", version, about = "Exact stability numerics on Weierstraß elliptic surfaces")]
struct Cli {
    /// Surface invariant e = −Θ² (e ≥ 1; e = 2 is a K3).
    #[arg(long, global = true)]
    e: Option<i64>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// `full` embeds and enforces the independent consistency checks.
    #[arg(long, global = true, value_enum)]
    check: Option<CheckLevel>,
    /// `key = value` defaults; flags override.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

/// A Chern table, from a JSON file (`-` for stdin) or inline as `n,d,c,s`.
#[derive(Args, Debug, Clone)]
pub struct TableInput {
    /// JSON file holding {"n": int, "d": int, "c": int, "s": "p/q"}.
    pub input: Option<PathBuf>,
    /// Inline table `n,d,c,s`.
    #[arg(long, allow_hyphen_values = true)]
    pub v: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TransformOp {
    Phi,
    Phihat,
    Dual,
    Shift,
    Tensor,
    Psi,
    Upsilon,
}

#[derive(Subcommand, Debug)]
#[allow(clippy::large_enum_variant)]
enum Command {
    /// Apply a lattice operation to a Chern table.
    Transform {
        #[arg(long, value_enum)]
        op: TransformOp,
        #[command(flatten)]
        table: TableInput,
        /// `tensor`: D = αΘ + βf (integers).
        #[arg(long, allow_hyphen_values = true, value_parser = parse_rational)]
        alpha: Option<Q>,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_rational)]
        beta: Option<Q>,
        /// `psi`: the quotient m ≥ 1.
        #[arg(long)]
        m: Option<u64>,
        /// `upsilon`: twist by 𝒪(−kΘ).
        #[arg(long, allow_hyphen_values = true)]
        k: Option<i64>,
        /// Replay the composition identities for this operation.
        #[arg(long)]
        verify: bool,
    },
    /// Stability-parameter transport under the Fourier–Mukai transform.
    #[command(subcommand)]
    Transport(TransportCmd),
    /// Closed-form chamber bounds.
    #[command(subcommand)]
    Bounds(BoundsCmd),
    /// Enumerate walls for v along the a-ray in a search box.
    Walls(WallsArgs),
    /// Euclidean reduction of a primitive table to rank one.
    Euclid {
        #[command(flatten)]
        table: TableInput,
    },
}

#[derive(Subcommand, Debug)]
pub enum TransportCmd {
    /// Barred (ā, p̄, q̄, b̄) to unbarred parameters.
    Forward {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_rational)]
        abar: Q,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_rational)]
        pbar: Q,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_rational)]
        qbar: Q,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_rational)]
        bbar: Q,
    },
    /// Unbarred (a, p, q, b) back to barred parameters.
    Inverse {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_rational)]
        a: Q,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_rational)]
        p: Q,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_rational)]
        q: Q,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_rational)]
        b: Q,
    },
    /// Boundary conditions B̄ = λΘ, H̄ = Θ + 2f on an elliptic K3.
    Tx {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_rational)]
        lambda: Q,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_rational)]
        z: Q,
        /// Defaults to the unique k with k + 1 < −2λ < k + 2.
        #[arg(long, allow_hyphen_values = true)]
        k: Option<i64>,
    },
    /// Projectivity certificate parameters for B̄ = (μ_f/2)Θ + λf.
    Thm54 {
        #[command(flatten)]
        table: TableInput,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_rational)]
        lambda: Q,
        #[arg(long)]
        vbar: u64,
    },
    /// Friedman-chamber threshold for B̄ = λf.
    Friedman56 {
        #[command(flatten)]
        table: TableInput,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_rational)]
        lambda: Q,
        #[arg(long)]
        ubar: u64,
    },
    /// Thresholds for a class of fiber degree zero with B̄ = λf.
    Thm58 {
        #[command(flatten)]
        table: TableInput,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_rational)]
        lambda: Q,
    },
}

/// B = pΘ + qf and ω = Θ + bf.
#[derive(Args, Debug, Clone)]
pub struct FieldArgs {
    #[arg(long, allow_hyphen_values = true, value_parser = parse_rational, default_value = "0")]
    pub p: Q,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_rational, default_value = "0")]
    pub q: Q,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_rational)]
    pub b: Q,
}

#[derive(Subcommand, Debug)]
pub enum BoundsCmd {
    /// (N/2)·μ·Δ for a positive-rank class.
    Gieseker {
        #[command(flatten)]
        table: TableInput,
        #[command(flatten)]
        field: FieldArgs,
    },
    /// Bound for a rank-zero class.
    Onedim {
        #[command(flatten)]
        table: TableInput,
        #[command(flatten)]
        field: FieldArgs,
    },
    /// Bound after twisting by B = μ_f(v)Θ + λf.
    Zerofiber {
        #[command(flatten)]
        table: TableInput,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_rational)]
        lambda: Q,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_rational)]
        b: Q,
    },
    /// Threshold on ā for geometricity after the transform.
    Geometric {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_rational)]
        pbar: Q,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_rational)]
        bbar: Q,
    },
    /// The L(−Θ) ⊂ L wall for L = αΘ + βf.
    Linebundle {
        #[arg(long, allow_hyphen_values = true)]
        alpha: i64,
        #[arg(long, allow_hyphen_values = true)]
        beta: i64,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_rational)]
        bbar: Q,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BoundKind {
    /// Gieseker for positive rank, one-dimensional for rank zero.
    Auto,
    Gieseker,
    Onedim,
    Zerofiber,
    None,
}

#[derive(Args, Debug, Clone)]
pub struct WallsArgs {
    #[command(flatten)]
    pub table: TableInput,
    #[command(flatten)]
    pub field: FieldArgs,
    /// Symmetric box `N,D,C`: |n_A| ≤ N, |d_A| ≤ D, |c_A| ≤ C.
    #[arg(long = "box", value_parser = parse_box)]
    pub search_box: Option<[i64; 3]>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_int_range)]
    pub n_range: Option<[i64; 2]>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_int_range)]
    pub d_range: Option<[i64; 2]>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_int_range)]
    pub c_range: Option<[i64; 2]>,
    /// Explicit ch₂ range `lo:hi`; needed where the discriminants leave it unbounded.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_q_range)]
    pub s_range: Option<ellstab::walls::QRange>,
    /// Also admit Im A = 0 and Im A = Im v.
    #[arg(long)]
    pub include_boundary: bool,
    /// Add the genericity verdict for the ray.
    #[arg(long)]
    pub generic: bool,
    #[arg(long, value_enum, default_value = "auto")]
    pub bound: BoundKind,
    /// λ for `--bound zerofiber`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_rational, default_value = "0")]
    pub lambda: Q,
}

fn resolve_config(cli: &Cli) -> anyhow::Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(e) = cli.e {
        cfg.e = e;
    }
    if let Some(f) = cli.format {
        cfg.format = f;
    }
    if let Some(c) = cli.check {
        cfg.check = c;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> anyhow::Result<String> {
    let cfg = resolve_config(&cli)?;
    let g = ellstab::SurfaceGeometry::new(cfg.e).map_err(|e| Usage(e.to_string()))?;
    let ctx = commands::Ctx { cfg, g };
    match cli.command {
        Command::Transform { op, table, alpha, beta, m, k, verify } => {
            commands::transform(&ctx, op, &table, alpha, beta, m, k, verify)
        }
        Command::Transport(cmd) => commands::transport(&ctx, cmd),
        Command::Bounds(cmd) => commands::bounds(&ctx, cmd),
        Command::Walls(args) => commands::walls(&ctx, &args),
        Command::Euclid { table } => commands::euclid(&ctx, &table),
    }
}

/// 2 usage/schema, 3 precondition, 4 internal.
fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.downcast_ref::<Usage>().is_some() {
            return 2;
        }
        if let Some(e) = cause.downcast_ref::<ellstab::Error>() {
            return match e {
                ellstab::Error::Schema(_) => 2,
                ellstab::Error::Precondition(_) | ellstab::Error::UnboundedStratum { .. } => 3,
                ellstab::Error::Internal(_) => 4,
            };
        }
        if cause.downcast_ref::<commands::CheckFailed>().is_some() {
            return 4;
        }
    }
    4
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            if let Some(partial) = err.chain().find_map(|c| c.downcast_ref::<commands::CheckFailed>()) {
                print!("{}", partial.output);
            }
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
