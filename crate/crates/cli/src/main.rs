//! `abstorus`: batch front end for lattices, absolute sets, the exponential bridge and
//! cohomology jump loci.

mod commands;
mod error;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "abstorus", version, about = "Exact computations on rank-one character tori")]
pub struct Cli {
    /// Write the result here (atomically) instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    /// Worker threads; 1 runs sequentially. Results do not depend on this value.
    #[arg(long, global = true)]
    parallel: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SetOp {
    Union,
    Intersect,
    Complement,
    Difference,
    Closure,
    Components,
    Equal,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum GaloisMode {
    Orbit,
    Check,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ExpDirection {
    /// Torsion coset to its ℚ-affine family.
    ToDr,
    /// ℚ-affine family to its torsion coset.
    ToBetti,
}

#[derive(Subcommand)]
pub enum Command {
    /// Smith normal form `U·A·V = D` of an integer matrix.
    Snf { matrix: PathBuf },
    /// Row Hermite normal form `U·A = H` of an integer matrix.
    Hnf { matrix: PathBuf },
    /// Boolean operations, closure and components of absolute sets.
    Set {
        #[arg(value_enum)]
        op: SetOp,
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Re-check the result pointwise on the torsion grid of this level.
        #[arg(long)]
        oracle_level: Option<u64>,
    },
    /// Galois orbit of a set, or whether it is Galois invariant.
    Galois {
        #[arg(value_enum)]
        mode: GaloisMode,
        set: PathBuf,
        #[arg(long)]
        level: u64,
    },
    /// The exponential bridge between ℚ-affine families and torsion cosets.
    Exp {
        #[arg(value_enum)]
        direction: ExpDirection,
        file: PathBuf,
        /// Also map back and require the input to be recovered.
        #[arg(long)]
        round_trip: bool,
    },
    /// Reconstruct a cohomology jump locus V^i_k from a complex or a group presentation.
    Jumploci {
        /// Complex JSON, `fox` output, or presentation text.
        input: PathBuf,
        #[arg(long = "i")]
        degree: usize,
        #[arg(long = "k")]
        threshold: usize,
        /// Search level N: all torsion points of order dividing N are evaluated.
        #[arg(long)]
        level: u64,
        /// Check this claimed locus instead of trusting the reconstruction.
        #[arg(long)]
        verify: Option<PathBuf>,
        #[arg(long)]
        symmetry: bool,
        #[arg(long)]
        galois: bool,
        /// For presentations: use every component of the character variety.
        #[arg(long)]
        all_components: bool,
        /// Maximum number of grid points (overrides ABSTORUS_GRID_CEILING).
        #[arg(long)]
        grid_ceiling: Option<u64>,
    },
    /// Fox-calculus complex of a group presentation.
    Fox {
        presentation: PathBuf,
        /// Emit the complex over every generator, supported on the whole character variety.
        #[arg(long)]
        all_components: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("abstorus: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
