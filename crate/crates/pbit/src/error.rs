use thiserror::Error;

#[derive(Debug, Error)]
pub enum DeviceError {
    #[error("parameter {name} must be positive and finite, got {value}")]
    InvalidParam { name: &'static str, value: f64 },
    #[error("distortion scales must be positive, got h_scale={h_scale}, v_scale={v_scale}")]
    InvalidProfile { h_scale: f64, v_scale: f64 },
    #[error("energy barrier must be >= 0, got {value}")]
    InvalidBarrier { value: f64 },
    #[error("non-finite input voltage {value}")]
    NonFiniteInput { value: f64 },
}

#[derive(Debug, Error)]
pub enum NetworkError {
    #[error("device index {index} out of range for network of size {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("output vector length {got} does not match network size {n}")]
    OutputLengthMismatch { got: usize, n: usize },
    #[error("network size must be >= 2, got {0}")]
    TooSmall(usize),
    #[error("unsupported Bayesian network size {0}; expected 8, 20, or 50")]
    UnsupportedBnSize(usize),
    #[error("energy is only defined for EMOA networks; this network is directed (PGA)")]
    NoEnergyForPga,
    #[error("state entries must be -1 or +1")]
    InvalidState,
    #[error("state length {got} does not match network size {n}")]
    StateLengthMismatch { got: usize, n: usize },
    #[error("embedded network table is corrupt: {0}")]
    CorruptTable(String),
    #[error("network validation failed: {0}")]
    Invalid(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

#[derive(Debug, Error)]
pub enum VariabilityError {
    #[error("sweep max_level must be >= 0 and finite, got {0}")]
    InvalidLevel(f64),
    #[error("{kind} sweep with max_level {level} >= 1 would produce a zero-gain device")]
    DegenerateScale { kind: &'static str, level: f64 },
}

#[derive(Debug, Error)]
pub enum SamplerError {
    #[error("ensemble size {got} does not match network size {n}")]
    EnsembleMismatch { got: usize, n: usize },
    #[error("chain must run at least one step")]
    ZeroSteps,
    #[error("annealing schedule covers {schedule} steps but the chain runs {steps}")]
    ScheduleMismatch { schedule: u64, steps: u64 },
    #[error("schedule stage {stage} invalid: kappa={kappa}, steps={steps}")]
    InvalidStage { stage: usize, kappa: f64, steps: u64 },
    #[error("burn-in {burn_in} leaves no recorded steps out of {steps}")]
    BurnInTooLong { burn_in: u64, steps: u64 },
    #[error("networks larger than 64 devices are not supported by the state histogram")]
    TooManyDevices(usize),
    #[error(transparent)]
    Device(#[from] DeviceError),
}

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("device counts differ: {a} vs {b}")]
    SizeMismatch { a: usize, b: usize },
    #[error("correlation matrices differ in dimension: {a} vs {b}")]
    DimensionMismatch { a: usize, b: usize },
    #[error("cannot aggregate an empty list")]
    Empty,
    #[error("accumulators recorded no steps")]
    NoRecordedSteps,
}

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("config error: {0}")]
    Config(String),
    #[error("level {level}: {source}")]
    Chain {
        level: f64,
        #[source]
        source: SamplerError,
    },
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    Variability(#[from] VariabilityError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}
