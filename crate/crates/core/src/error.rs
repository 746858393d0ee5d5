use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum CoreError {
    #[error("mode index {index} out of range (n_modes = {n_modes})")]
    ModeOutOfRange { index: u32, n_modes: u32 },

    #[error("vector sides do not match ({left:?} vs {right:?})")]
    SideMismatch { left: String, right: String },

    #[error("basis families do not match ({left} vs {right})")]
    FamilyMismatch { left: String, right: String },

    #[error("cutoff overflow: transition from a state of energy {energy} exceeds E_max = {e_max}")]
    CutoffOverflow { energy: u64, e_max: u64 },

    #[error("twisted-element levels do not match ({left} vs {right})")]
    LevelMismatch { left: i64, right: i64 },

    #[error("level k = 0 is unsupported (untwisted Pontryagin-dual case)")]
    UntwistedLevel,

    #[error("window of {window} orbit steps too small for support reaching {needed}")]
    WindowTooSmall { window: i64, needed: i64 },

    #[error("quadrature truncation insufficient: tail mass {tail:.3e} exceeds {limit:.3e}")]
    QuadratureTail { tail: f64, limit: f64 },

    #[error("float-mode rank indeterminate near threshold: raise precision (sv = {value:.3e})")]
    IndeterminateRank { value: f64 },

    #[error("operator identity failed at entry {entry}: {detail}")]
    IdentityFailure { entry: String, detail: String },

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
