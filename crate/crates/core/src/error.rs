//! Error types shared by every module.

use std::fmt;

/// A syntax error with a 1-based source position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub expected: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: expected {}", self.line, self.column, self.expected)
    }
}

impl std::error::Error for ParseError {}

/// Every failure the library can report.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("semantic error: {0}")]
    Semantic(String),
    #[error("cap exceeded: {what} needs {needed}, limit is {limit}")]
    CapExceeded {
        what: String,
        needed: u128,
        limit: u128,
    },
    #[error("rule is not normal: {0}")]
    NotNormal(String),
    #[error("modal scope is not an objective atom: {0}")]
    ModalScopeTooRich(String),
    #[error("the theory must be objective (no modal operator)")]
    ModalNotAllowed,
    #[error("formula is not generalized Horn: {0}")]
    NotGHorn(String),
    #[error("interpretation is not named: element {0} has no name")]
    NotNamed(usize),
    #[error("modal query on an inconsistent expansion")]
    InconsistentKernel,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn cap(what: impl Into<String>, needed: u128, limit: u128) -> Self {
        Error::CapExceeded {
            what: what.into(),
            needed,
            limit,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Enumeration limits. Exceeding one is an error, never a silent truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Caps {
    /// Maximum number of ground atoms of a signature.
    pub atoms: usize,
    /// Maximum number of interpretations enumerated by one entailment check.
    pub interpretations: u64,
    /// Maximum number of candidate kernels / candidate Herbrand interpretations.
    pub kernels: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            atoms: 20,
            interpretations: 1 << 20,
            kernels: 1 << 20,
        }
    }
}

impl Caps {
    /// Parses `atoms=20,interpretations=1048576,kernels=1048576` (any subset,
    /// missing keys keep their value from `self`).
    pub fn parse_overrides(&self, text: &str) -> Result<Caps> {
        let mut caps = *self;
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::Semantic(format!("malformed cap `{part}`")))?;
            let value: u64 = value
                .trim()
                .parse()
                .map_err(|_| Error::Semantic(format!("malformed cap value `{part}`")))?;
            if value == 0 {
                return Err(Error::Semantic(format!("cap `{key}` must be positive")));
            }
            match key.trim() {
                "atoms" => caps.atoms = value as usize,
                "interpretations" => caps.interpretations = value,
                "kernels" => caps.kernels = value,
                other => return Err(Error::Semantic(format!("unknown cap `{other}`"))),
            }
        }
        Ok(caps)
    }
}
