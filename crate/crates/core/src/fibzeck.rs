//! Exact Fibonacci arithmetic and the Zeckendorf codec.
//!
//! Indexing follows `F_1 = F_2 = 1, F_3 = 2, F_4 = 3, ...`. Zeckendorf
//! representations use indices `>= 2` only, which makes them unique.

use crate::error::{Error, Result};

/// Index into the Fibonacci sequence.
pub type FibIndex = u32;

/// Largest index whose Fibonacci number fits in a `u64`.
pub const MAX_FIB_INDEX: FibIndex = 93;

const FIB: [u64; MAX_FIB_INDEX as usize + 1] = {
    let mut table = [0u64; MAX_FIB_INDEX as usize + 1];
    table[1] = 1;
    table[2] = 1;
    let mut i = 3;
    while i <= MAX_FIB_INDEX as usize {
        table[i] = table[i - 1] + table[i - 2];
        i += 1;
    }
    table
};

/// Returns `F_i`.
pub fn fib(i: FibIndex) -> Result<u64> {
    if i == 0 || i > MAX_FIB_INDEX {
        return Err(Error::IndexOutOfRange(i));
    }
    Ok(FIB[i as usize])
}

/// Largest index `i >= 2` with `F_i <= x`.
pub fn fib_floor_index(x: u64) -> Result<FibIndex> {
    if x == 0 {
        return Err(Error::UndefinedForZero);
    }
    // FIB[2..] is strictly increasing
    let above = FIB[2..].partition_point(|&f| f <= x);
    Ok(above as FibIndex + 1)
}

/// Ascending list of Fibonacci indices, each `>= 2`, no two adjacent.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct ZeckendorfRep {
    indices: Vec<FibIndex>,
}

impl ZeckendorfRep {
    /// Validates the representation invariants.
    pub fn from_indices(indices: Vec<FibIndex>) -> Result<Self> {
        let invalid = |reason| Error::InvalidRepresentation {
            indices: indices.clone(),
            reason,
        };
        if indices.iter().any(|&i| i < 2) {
            return Err(invalid("index below 2"));
        }
        if indices.iter().any(|&i| i > MAX_FIB_INDEX) {
            return Err(invalid("index above 93"));
        }
        for pair in indices.windows(2) {
            if pair[1] <= pair[0] {
                return Err(invalid("indices not strictly ascending"));
            }
            if pair[1] == pair[0] + 1 {
                return Err(invalid("adjacent indices"));
            }
        }
        Ok(Self { indices })
    }

    pub fn indices(&self) -> &[FibIndex] {
        &self.indices
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    /// Smallest index, if any.
    pub fn z1(&self) -> Option<FibIndex> {
        self.indices.first().copied()
    }

    /// Second smallest index, if any.
    pub fn z2(&self) -> Option<FibIndex> {
        self.indices.get(1).copied()
    }
}

/// Greedy Zeckendorf decomposition. Zero encodes to the empty representation.
pub fn zeckendorf_encode(x: u64) -> ZeckendorfRep {
    let mut indices = Vec::new();
    let mut rest = x;
    while rest > 0 {
        let i = fib_floor_index(rest).expect("rest is positive");
        indices.push(i);
        rest -= FIB[i as usize];
    }
    indices.reverse();
    ZeckendorfRep { indices }
}

/// Sums the Fibonacci numbers named by `indices`, after checking they form a
/// valid Zeckendorf representation.
pub fn zeckendorf_decode(indices: &[FibIndex]) -> Result<u64> {
    let rep = ZeckendorfRep::from_indices(indices.to_vec())?;
    decode_rep(&rep)
}

/// Value of an already validated representation.
pub fn decode_rep(rep: &ZeckendorfRep) -> Result<u64> {
    rep.indices.iter().try_fold(0u64, |acc, &i| {
        acc.checked_add(FIB[i as usize]).ok_or(Error::Overflow(acc))
    })
}

/// Index of the smallest term in the Zeckendorf expansion of `x`.
pub fn smallest_index(x: u64) -> Result<FibIndex> {
    if x == 0 {
        return Err(Error::UndefinedForZero);
    }
    let mut rest = x;
    loop {
        let i = fib_floor_index(rest)?;
        rest -= FIB[i as usize];
        if rest == 0 {
            return Ok(i);
        }
    }
}
