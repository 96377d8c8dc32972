use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("Fibonacci index {0} out of range (valid: 1..=93)")]
    IndexOutOfRange(u32),
    #[error("invalid Zeckendorf representation {indices:?}: {reason}")]
    InvalidRepresentation {
        indices: Vec<u32>,
        reason: &'static str,
    },
    #[error("operation is undefined for zero")]
    UndefinedForZero,
    #[error("arithmetic overflow for input {0}")]
    Overflow(u64),
    #[error("Grundy value {value} at position {position} does not fit in 2 bits")]
    ValueOverflow { position: u64, value: u64 },
    #[error("table size {0} exceeds the 2^32 position limit")]
    TableTooLarge(u64),
    #[error("a table needs at least one position")]
    EmptyTable,
    #[error("position {position} outside table range 0..={max}")]
    PositionOutOfRange { position: u64, max: u64 },
    #[error(
        "window too small: preperiod {max_preperiod} + 2 * period {max_period} > {max_position}"
    )]
    WindowTooSmall {
        max_period: u64,
        max_preperiod: u64,
        max_position: u64,
    },
    #[error("position {position} exceeds enumeration range (largest covered: {covered})")]
    BoundTooSmall { position: u64, covered: u64 },
    #[error("position {0} is not a member of exactly one enumerated set")]
    Unclassified(u64),
    #[error("invalid subtraction set: {0}")]
    InvalidSubtractionSet(&'static str),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
