//! Brute-force Sprague-Grundy engine for subtraction games.
//!
//! Values are packed two bits per position, so the engine handles any
//! subtraction set whose Grundy values stay at or below 3.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fibzeck::{fib, MAX_FIB_INDEX};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Generator {
    /// `F_{2n+1} - 1` for `n >= 1`.
    OddFibMinusOne,
    Finite(Vec<u64>),
}

/// Strictly increasing set of positive subtrahends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubtractionSet {
    name: String,
    generator: Generator,
}

impl SubtractionSet {
    /// `{F_{2n+1} - 1 : n >= 1} = {1, 4, 12, 33, 88, ...}`.
    pub fn odd_fibonacci_minus_one() -> Self {
        Self {
            name: "F(2n+1)-1".to_owned(),
            generator: Generator::OddFibMinusOne,
        }
    }

    pub fn finite(name: impl Into<String>, elements: Vec<u64>) -> Result<Self> {
        if elements.first() == Some(&0) {
            return Err(Error::InvalidSubtractionSet("subtrahends must be positive"));
        }
        if elements.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidSubtractionSet(
                "subtrahends must be strictly increasing",
            ));
        }
        Ok(Self {
            name: name.into(),
            generator: Generator::Finite(elements),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Ascending enumeration. The Fibonacci preset stops at the last term
    /// representable in `u64`.
    pub fn iter(&self) -> Box<dyn Iterator<Item = u64> + '_> {
        match &self.generator {
            Generator::OddFibMinusOne => Box::new(
                (1..)
                    .map(|n| 2 * n + 1)
                    .take_while(|&i| i <= MAX_FIB_INDEX)
                    .map(|i| fib(i).expect("index checked") - 1),
            ),
            Generator::Finite(v) => Box::new(v.iter().copied()),
        }
    }

    /// All subtrahends `<= limit`, ascending.
    pub fn subtrahends_upto(&self, limit: u64) -> Vec<u64> {
        self.iter().take_while(|&s| s <= limit).collect()
    }
}

impl fmt::Display for SubtractionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Least nonnegative integer not in `values`.
pub fn mex<I: IntoIterator<Item = u64>>(values: I) -> u64 {
    let present: BTreeSet<u64> = values.into_iter().collect();
    (0..).find(|v| !present.contains(v)).expect("finite set")
}

const PER_WORD: u64 = 32;

/// Grundy values for positions `0..=max_position`, 2 bits each.
#[derive(Debug, Clone)]
pub struct GrundyTable {
    set: SubtractionSet,
    max_position: u64,
    words: Vec<u64>,
}

impl GrundyTable {
    fn zeroed(set: SubtractionSet, max_position: u64) -> Result<Self> {
        if max_position >= 1 << 32 {
            return Err(Error::TableTooLarge(max_position));
        }
        let words = vec![0u64; (max_position / PER_WORD + 1) as usize];
        Ok(Self {
            set,
            max_position,
            words,
        })
    }

    /// Packs arbitrary values without checking the mex recursion; see
    /// [`verify_recursion`] for that.
    pub fn from_values(set: SubtractionSet, values: &[u8]) -> Result<Self> {
        let max_position = values.len().checked_sub(1).ok_or(Error::EmptyTable)? as u64;
        let mut table = Self::zeroed(set, max_position)?;
        for (x, &v) in values.iter().enumerate() {
            if v > 3 {
                return Err(Error::ValueOverflow {
                    position: x as u64,
                    value: v as u64,
                });
            }
            table.set_value(x as u64, v);
        }
        Ok(table)
    }

    #[inline]
    fn set_value(&mut self, x: u64, v: u8) {
        let shift = (x % PER_WORD) * 2;
        let w = &mut self.words[(x / PER_WORD) as usize];
        *w = (*w & !(3 << shift)) | ((v as u64) << shift);
    }

    /// Value at `x`; panics when `x > max_position`.
    #[inline]
    pub fn value(&self, x: u64) -> u8 {
        assert!(x <= self.max_position, "position {x} out of range");
        ((self.words[(x / PER_WORD) as usize] >> ((x % PER_WORD) * 2)) & 3) as u8
    }

    pub fn get(&self, x: u64) -> Option<u8> {
        (x <= self.max_position).then(|| self.value(x))
    }

    pub fn max_position(&self) -> u64 {
        self.max_position
    }

    pub fn set(&self) -> &SubtractionSet {
        &self.set
    }

    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        (0..=self.max_position).map(|x| self.value(x))
    }

    /// Bytes held by the packed storage.
    pub fn storage_bytes(&self) -> usize {
        self.words.len() * std::mem::size_of::<u64>()
    }
}

/// Fills the table in increasing position order.
pub fn grundy_sieve(set: &SubtractionSet, max_position: u64) -> Result<GrundyTable> {
    let subtrahends = set.subtrahends_upto(max_position);
    let mut table = GrundyTable::zeroed(set.clone(), max_position)?;
    for x in 0..=max_position {
        let mut seen = 0u8;
        for &s in subtrahends.iter().take_while(|&&s| s <= x) {
            seen |= 1 << table.value(x - s);
        }
        let g = seen.trailing_ones() as u64;
        if g > 3 {
            return Err(Error::ValueOverflow {
                position: x,
                value: g,
            });
        }
        table.set_value(x, g as u8);
    }
    Ok(table)
}

/// Re-derives every table entry from its options with the set-based [`mex`]
/// and returns the first position that disagrees.
pub fn verify_recursion(table: &GrundyTable) -> Option<u64> {
    let subtrahends = table.set.subtrahends_upto(table.max_position);
    (0..=table.max_position).into_par_iter().find_first(|&x| {
        let options = subtrahends
            .iter()
            .take_while(|&&s| s <= x)
            .map(|&s| table.value(x - s) as u64);
        mex(options) != table.value(x) as u64
    })
}

/// Outcome of a bounded search for eventual periodicity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PeriodReport {
    pub searched_max_period: u64,
    pub searched_max_preperiod: u64,
    /// `(preperiod, period)` when found.
    pub found: Option<(u64, u64)>,
}

/// Smallest `(period, preperiod)` with `g(x) = g(x + p)` for all
/// `t <= x <= N - p`, searching `p <= max_period` and `t <= max_preperiod`.
pub fn period_scan(
    table: &GrundyTable,
    max_period: u64,
    max_preperiod: u64,
) -> Result<PeriodReport> {
    let n = table.max_position;
    let needed = max_period
        .checked_mul(2)
        .and_then(|v| v.checked_add(max_preperiod));
    if needed.is_none_or(|v| v > n) {
        return Err(Error::WindowTooSmall {
            max_period,
            max_preperiod,
            max_position: n,
        });
    }
    let found = (1..=max_period).find_map(|p| {
        // the last mismatch bounds the preperiod from below
        let preperiod = (0..=n - p)
            .rev()
            .find(|&x| table.value(x) != table.value(x + p))
            .map_or(0, |x| x + 1);
        (preperiod <= max_preperiod).then_some((preperiod, p))
    });
    Ok(PeriodReport {
        searched_max_period: max_period,
        searched_max_preperiod: max_preperiod,
        found,
    })
}

/// Distinct values occurring in the table.
pub fn attained_values(table: &GrundyTable) -> BTreeSet<u8> {
    let mut mask = 0u8;
    for x in 0..=table.max_position {
        mask |= 1 << table.value(x);
        if mask == 0b1111 {
            break;
        }
    }
    (0..4).filter(|v| mask & (1 << v) != 0).collect()
}

/// Closure of `values` and 0 under XOR.
pub fn xor_closure(values: &BTreeSet<u8>) -> BTreeSet<u8> {
    let mut group: BTreeSet<u8> = BTreeSet::from([0]);
    for &v in values {
        if !group.contains(&v) {
            let shifted: Vec<u8> = group.iter().map(|g| g ^ v).collect();
            group.extend(shifted);
        }
    }
    group
}

/// Group generated under XOR by the values attained in the table.
pub fn nim_value_group(table: &GrundyTable) -> BTreeSet<u8> {
    xor_closure(&attained_values(table))
}

/// Subtrahends leading from `x` to a Grundy-0 position, ascending.
pub fn optimal_moves(table: &GrundyTable, x: u64) -> Result<Vec<u64>> {
    if x > table.max_position {
        return Err(Error::PositionOutOfRange {
            position: x,
            max: table.max_position,
        });
    }
    Ok(table
        .set
        .iter()
        .take_while(|&s| s <= x)
        .filter(|&s| table.value(x - s) == 0)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fib_table(n: u64) -> GrundyTable {
        grundy_sieve(&SubtractionSet::odd_fibonacci_minus_one(), n).unwrap()
    }

    #[test]
    fn subtrahend_prefixes() {
        let s = SubtractionSet::odd_fibonacci_minus_one();
        assert!(s.subtrahends_upto(0).is_empty());
        assert_eq!(s.subtrahends_upto(12), vec![1, 4, 12]);
        assert_eq!(s.subtrahends_upto(100), vec![1, 4, 12, 33, 88]);
        // F_93 - 1 is the last representable term
        assert_eq!(s.iter().count(), 46);
        assert_eq!(s.iter().last(), Some(12_200_160_415_121_876_737));
    }

    #[test]
    fn finite_set_validation() {
        assert!(SubtractionSet::finite("x", vec![0, 1]).is_err());
        assert!(SubtractionSet::finite("x", vec![2, 2]).is_err());
        assert!(SubtractionSet::finite("x", vec![3, 1]).is_err());
        assert!(SubtractionSet::finite("x", vec![]).is_ok());
        assert!(SubtractionSet::finite("x", vec![1, 2, 5]).is_ok());
    }

    #[test]
    fn mex_examples() {
        assert_eq!(mex([]), 0);
        assert_eq!(mex([0, 1, 2]), 3);
        assert_eq!(mex([1, 2]), 0);
        assert_eq!(mex([0, 0, 2]), 1);
    }

    #[test]
    fn sieve_examples() {
        let t = fib_table(4);
        assert_eq!(t.iter().collect::<Vec<_>>(), vec![0, 1, 0, 1, 2]);
        assert_eq!(fib_table(0).iter().collect::<Vec<_>>(), vec![0]);
        assert_eq!(fib_table(17).value(17), 2);
    }

    #[test]
    fn sieve_prefix_to_17() {
        let t = fib_table(17);
        assert_eq!(
            t.iter().collect::<Vec<_>>(),
            vec![0, 1, 0, 1, 2, 0, 1, 0, 1, 2, 0, 1, 2, 0, 1, 0, 1, 2]
        );
    }

    #[test]
    fn sieve_overflow_is_an_error() {
        // {1,2,3,4} has g(x) = x mod 5, so g(4) = 4
        let s = SubtractionSet::finite("1..4", vec![1, 2, 3, 4]).unwrap();
        assert_eq!(
            grundy_sieve(&s, 10).unwrap_err(),
            Error::ValueOverflow {
                position: 4,
                value: 4
            }
        );
        assert!(grundy_sieve(&s, 3).is_ok());
    }

    #[test]
    fn table_size_limit() {
        let s = SubtractionSet::finite("none", vec![]).unwrap();
        assert_eq!(
            grundy_sieve(&s, 1 << 32).unwrap_err(),
            Error::TableTooLarge(1 << 32)
        );
    }

    #[test]
    fn packing_crosses_word_boundaries() {
        let values: Vec<u8> = (0..200).map(|i| (i * 7 % 4) as u8).collect();
        let t = GrundyTable::from_values(SubtractionSet::finite("x", vec![]).unwrap(), &values)
            .unwrap();
        assert_eq!(t.iter().collect::<Vec<_>>(), values);
        assert_eq!(t.get(200), None);
    }

    #[test]
    fn recursion_recheck_detects_tampering() {
        let t = fib_table(500);
        assert_eq!(verify_recursion(&t), None);
        let mut values: Vec<u8> = t.iter().collect();
        values[321] ^= 1;
        let bad = GrundyTable::from_values(t.set().clone(), &values).unwrap();
        assert_eq!(verify_recursion(&bad), Some(321));
    }

    #[test]
    fn period_of_single_subtrahend_game() {
        let s = SubtractionSet::finite("{1}", vec![1]).unwrap();
        let t = grundy_sieve(&s, 100).unwrap();
        let r = period_scan(&t, 10, 10).unwrap();
        assert_eq!(r.found, Some((0, 2)));
    }

    #[test]
    fn period_of_constant_table() {
        let s = SubtractionSet::finite("empty", vec![]).unwrap();
        let t = grundy_sieve(&s, 50).unwrap();
        assert!(t.iter().all(|v| v == 0));
        assert_eq!(period_scan(&t, 5, 5).unwrap().found, Some((0, 1)));
    }

    #[test]
    fn period_scan_recovers_planted_preperiod() {
        // 7 noise values then period 3
        let mut values = vec![3, 3, 0, 2, 1, 3, 1];
        values.extend((0..300).map(|i| [0u8, 1, 2][i % 3]));
        let t = GrundyTable::from_values(SubtractionSet::finite("x", vec![]).unwrap(), &values)
            .unwrap();
        let r = period_scan(&t, 20, 20).unwrap();
        let (pre, p) = r.found.unwrap();
        assert_eq!(p, 3);
        assert!(pre <= 7);
        for x in pre..=t.max_position() - p {
            assert_eq!(t.value(x), t.value(x + p));
        }
        assert_ne!(t.value(pre - 1), t.value(pre - 1 + p));
    }

    #[test]
    fn period_scan_window_check() {
        let t = fib_table(100);
        assert!(matches!(
            period_scan(&t, 40, 21),
            Err(Error::WindowTooSmall { .. })
        ));
        assert!(period_scan(&t, 40, 20).is_ok());
        assert!(period_scan(&t, u64::MAX, 0).is_err());
    }

    #[test]
    fn fib_table_has_no_short_period() {
        let t = fib_table(20_000);
        assert_eq!(period_scan(&t, 2_000, 10_000).unwrap().found, None);
    }

    #[test]
    fn groups() {
        assert_eq!(nim_value_group(&fib_table(4)), BTreeSet::from([0, 1, 2, 3]));
        let zero = grundy_sieve(&SubtractionSet::finite("empty", vec![]).unwrap(), 10).unwrap();
        assert_eq!(nim_value_group(&zero), BTreeSet::from([0]));
        let alt = grundy_sieve(&SubtractionSet::finite("{1}", vec![1]).unwrap(), 10).unwrap();
        assert_eq!(nim_value_group(&alt), BTreeSet::from([0, 1]));
        assert_eq!(xor_closure(&BTreeSet::from([2])), BTreeSet::from([0, 2]));
    }

    #[test]
    fn optimal_move_examples() {
        let t = fib_table(20);
        assert_eq!(optimal_moves(&t, 4), Ok(vec![4]));
        assert_eq!(optimal_moves(&t, 2), Ok(vec![]));
        assert_eq!(optimal_moves(&t, 9), Ok(vec![4]));
        assert_eq!(
            optimal_moves(&t, 21),
            Err(Error::PositionOutOfRange {
                position: 21,
                max: 20
            })
        );
    }
}
