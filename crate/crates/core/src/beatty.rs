//! Lower and upper Wythoff sequences, computed without floating point.
//!
//! `A(n) = floor(n * phi)` and `B(n) = floor(n * phi^2) = A(n) + n` are the
//! complementary Beatty sequences for the golden ratio. `AB(n) = 2 A(n) + n`
//! is the composed sequence whose successors form the Grundy-2 positions.
//!
//! Membership is decided through the Zeckendorf expansion: `x` lies in `A`
//! exactly when its smallest Fibonacci index is even.

use crate::error::{Error, Result};
use crate::fibzeck::smallest_index;

/// Indices at or above this bound are rejected.
pub const MAX_BEATTY_INDEX: u64 = 1 << 62;

/// `floor(sqrt(5 n^2))`, falling back to 128-bit arithmetic when `5 n^2`
/// leaves `u64`.
fn isqrt_five_n_squared(n: u64) -> u64 {
    match n.checked_mul(n).and_then(|sq| sq.checked_mul(5)) {
        Some(v) => v.isqrt(),
        None => {
            let v = 5 * (n as u128) * (n as u128);
            v.isqrt() as u64
        }
    }
}

/// `floor(n * phi)` as `floor((n + isqrt(5 n^2)) / 2)`.
///
/// `n = 0` yields 0.
pub fn lower_wythoff(n: u64) -> Result<u64> {
    if n >= MAX_BEATTY_INDEX {
        return Err(Error::Overflow(n));
    }
    // n + isqrt(5n^2) < 2^62 + 2^63.2, fits u64 for n < 2^62
    Ok((n + isqrt_five_n_squared(n)) / 2)
}

/// `floor(n * phi^2) = n + floor(n * phi)`.
pub fn upper_wythoff(n: u64) -> Result<u64> {
    let a = lower_wythoff(n)?;
    n.checked_add(a).ok_or(Error::Overflow(n))
}

/// `2 floor(n * phi) + n`; the Grundy-2 positions are `ab(n) + 1`.
pub fn ab(n: u64) -> Result<u64> {
    let a = lower_wythoff(n)?;
    a.checked_mul(2)
        .and_then(|v| v.checked_add(n))
        .ok_or(Error::Overflow(n))
}

/// Membership in the lower Wythoff sequence `A`. Zero is in neither sequence.
pub fn in_lower_wythoff(x: u64) -> bool {
    match smallest_index(x) {
        Ok(z1) => z1 % 2 == 0,
        Err(_) => false,
    }
}

/// Membership in the upper Wythoff sequence `B`. Zero is in neither sequence.
pub fn in_upper_wythoff(x: u64) -> bool {
    match smallest_index(x) {
        Ok(z1) => z1 % 2 == 1,
        Err(_) => false,
    }
}

/// Symbol of the Fibonacci word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    A,
    B,
}

impl Letter {
    pub fn as_char(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::B => 'b',
        }
    }
}

/// Finite prefix of the fixed point of `a -> ab, b -> a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibWord {
    symbols: Vec<Letter>,
}

impl FibWord {
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[Letter] {
        &self.symbols
    }

    /// Symbol at 1-based position `k`.
    pub fn at(&self, k: usize) -> Option<Letter> {
        k.checked_sub(1).and_then(|i| self.symbols.get(i)).copied()
    }

    /// 1-based positions holding `a`, ascending.
    pub fn a_positions(&self) -> impl Iterator<Item = u64> + '_ {
        self.symbols
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == Letter::A)
            .map(|(i, _)| i as u64 + 1)
    }
}

impl std::fmt::Display for FibWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for l in &self.symbols {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

/// Prefix of length `length` of the Fibonacci word.
///
/// Built from `w_{k+1} = w_k w_{k-1}`, which equals iterating the morphism.
pub fn fibonacci_word(length: usize) -> FibWord {
    let mut symbols = vec![Letter::A, Letter::B];
    let mut prev = 1;
    while symbols.len() < length {
        let cur = symbols.len();
        symbols.extend_from_within(..prev);
        prev = cur;
    }
    symbols.truncate(length);
    FibWord { symbols }
}
