use thiserror::Error;

/// Errors raised by the laboratory.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("grid of {grid} points cannot dealias truncation {truncation} (need a power of two >= {needed})")]
    GridTooSmall {
        grid: usize,
        truncation: usize,
        needed: usize,
    },

    #[error("state not resolved: tail amplitude {tail:.3e} exceeds {tol:.3e}")]
    Unresolved { tail: f64, tol: f64 },

    #[error("denominator has a root at modulus {modulus:.6} inside the closed unit disc")]
    PoleInDisc { modulus: f64 },

    #[error("numerator and denominator share a root (distance {distance:.3e})")]
    CommonRoot { distance: f64 },

    #[error("output truncation {truncation} too small, aliased amplitude {residual:.3e}")]
    Aliasing { truncation: usize, residual: f64 },

    #[error("eigenvalue clusters at {a:.6e} and {b:.6e} are too close to separate")]
    AmbiguousCluster { a: f64, b: f64 },

    #[error("singular values straddle the rank threshold {tol:.3e} (nearest {value:.3e})")]
    RankThreshold { tol: f64, value: f64 },

    #[error("Blaschke fit failed: expected degree {expected}, {reason}")]
    DegreeMismatch { expected: usize, reason: String },

    #[error("1/x = {inv_x:.6e} is within tolerance of eigenvalue {eigenvalue:.6e}")]
    NearResonance { inv_x: f64, eigenvalue: f64 },

    #[error("level {sigma:.6} is within {gap:.3e} of an H-eigenvalue (crossing)")]
    CrossingProximity { sigma: f64, gap: f64 },

    #[error("no spectral level near {0:.6}")]
    LevelNotFound(f64),

    #[error("Blaschke zeros cannot be matched unambiguously (separation {0:.3e})")]
    MatchingAmbiguity(f64),

    #[error("step size underflow at t = {t:.6} (h = {h:.3e})")]
    StepFailure { t: f64, h: f64 },

    #[error("time {t:.6} outside trajectory [{start:.6}, {end:.6}]")]
    OutsideTrajectory { t: f64, start: f64, end: f64 },

    #[error("modulus k = {0} outside [0, 1)")]
    ModulusOutOfRange(f64),

    #[error("series truncation insufficient: tail {tail:.3e} at |p| = {p:.6}")]
    TruncationInsufficient { tail: f64, p: f64 },

    #[error("window [{lo:.3}, {hi:.3}] has too few resolved samples ({count})")]
    WindowUnresolved { lo: f64, hi: f64, count: usize },

    #[error("assembly check failed: {0}")]
    AssemblyCheck(String),

    #[error("unknown scenario '{0}'")]
    UnknownScenario(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
