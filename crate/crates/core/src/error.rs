use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown gate symbol {0:?}")]
    UnknownGate(String),
    #[error("illegal character {ch:?} at position {pos}")]
    Parse { pos: usize, ch: char },
    #[error("identity has no rotation axis")]
    NoAxis,
    #[error("identity needs no commutation through T")]
    IdentityCommutation,
    #[error("table verification failed: {0}")]
    Table(String),
    #[error("degenerate trace level (|tr| = {0}); tiles are undefined")]
    DegenerateLevel(f64),
    #[error("t_max {requested} exceeds the memory budget {budget}")]
    Budget { requested: u32, budget: u32 },
    #[error("catalog format: {0}")]
    Format(String),
    #[error("catalog version {found} is not supported (expected {expected})")]
    Version { found: u32, expected: u32 },
    #[error("catalog checksum mismatch (stored {stored:#018x}, computed {computed:#018x})")]
    Checksum { stored: u64, computed: u64 },
    #[error("invalid query: {0}")]
    Query(String),
    #[error("group commutator input too far from identity (dist {0:.3} ≥ 0.5)")]
    TooFarFromIdentity(f64),
    #[error("recursion depth {requested} exceeds the configured maximum {max}")]
    Depth { requested: u32, max: u32 },
    #[error("no catalog entry within reach of the level-0 target; build a larger catalog")]
    LevelZeroMiss,
    #[error("audit failure: {0}")]
    Audit(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
