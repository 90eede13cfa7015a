use std::fmt;

use abstorus::bridge::BridgeError;
use abstorus::format::FormatError;
use abstorus::jump::JumpError;
use abstorus::TorusError;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    /// A check ran and failed (verification, equality, round trip, oracle).
    pub const CHECK_FAILED: i32 = 1;
    pub const PARSE: i32 = 2;
    pub const RANK_OR_LEVEL: i32 = 3;
    pub const IRRATIONAL: i32 = 4;
    pub const BUDGET: i32 = 5;
}

#[derive(Debug)]
pub enum CliError {
    Io { path: String, err: std::io::Error },
    Format(FormatError),
    Usage(String),
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        CliError::Format(e)
    }
}

impl From<TorusError> for CliError {
    fn from(e: TorusError) -> Self {
        CliError::Format(FormatError::Torus(e))
    }
}

impl From<JumpError> for CliError {
    fn from(e: JumpError) -> Self {
        CliError::Format(FormatError::Jump(e))
    }
}

impl From<BridgeError> for CliError {
    fn from(e: BridgeError) -> Self {
        CliError::Format(FormatError::Bridge(e))
    }
}

fn torus_code(e: &TorusError) -> i32 {
    match e {
        TorusError::RankMismatch(..) | TorusError::LevelViolation { .. } => exit::RANK_OR_LEVEL,
        TorusError::GridTooLarge { .. } => exit::BUDGET,
        _ => exit::PARSE,
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Usage(_) => exit::PARSE,
            CliError::Format(f) => match f {
                FormatError::Syntax { .. } | FormatError::Schema { .. } => exit::PARSE,
                FormatError::Torus(t) => torus_code(t),
                FormatError::Bridge(BridgeError::Torus(t)) => torus_code(t),
                FormatError::Bridge(
                    BridgeError::IrrationalDirection { .. } | BridgeError::IrrationalTranslate { .. },
                ) => exit::IRRATIONAL,
                FormatError::Bridge(BridgeError::Shape(_)) => exit::RANK_OR_LEVEL,
                FormatError::Jump(j) => match j {
                    JumpError::RankMismatch { .. } | JumpError::LevelViolation { .. } => exit::RANK_OR_LEVEL,
                    JumpError::Budget { .. } => exit::BUDGET,
                    JumpError::Torus(t) => torus_code(t),
                    _ => exit::PARSE,
                },
            },
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io { path, err } => write!(f, "{path}: {err}"),
            CliError::Format(e) => write!(f, "{e}"),
            CliError::Usage(m) => write!(f, "{m}"),
        }
    }
}
