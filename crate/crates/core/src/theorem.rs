//! Closed-form Grundy values of the subtraction game `{F_{2n+1} - 1}`.
//!
//! Positive integers split into three classes:
//!
//! * `B = {floor(n phi^2)}` with Grundy value 0,
//! * `B + 1` (including 1, from `n = 0`) with Grundy value 1,
//! * `AB + 1 = {2 floor(n phi) + n + 1}` with Grundy value 2.
//!
//! [`classify`] decides the class from the two smallest Zeckendorf indices in
//! `O(log x)`. [`SetEnumeration`] and [`classify_by_enumeration`] build the
//! same classes straight from the Beatty generators, and the verifiers compare
//! both against the brute-force sieve.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::beatty::{ab, upper_wythoff};
use crate::error::{Error, Result};
use crate::fibzeck::zeckendorf_encode;
use crate::grundy::{grundy_sieve, SubtractionSet};

/// Positions at or above this bound are rejected by the closed form.
pub const MAX_POSITION: u64 = 1 << 63;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PositionClass {
    /// Position 0.
    Terminal,
    /// Upper Wythoff numbers.
    B,
    /// Successors of upper Wythoff numbers, 1 included.
    BPlus1,
    /// Successors of `2 floor(n phi) + n`.
    ABPlus1,
}

impl PositionClass {
    pub fn grundy(self) -> u8 {
        match self {
            PositionClass::Terminal | PositionClass::B => 0,
            PositionClass::BPlus1 => 1,
            PositionClass::ABPlus1 => 2,
        }
    }

    /// Short tag used in tabular output.
    pub fn tag(self) -> &'static str {
        match self {
            PositionClass::Terminal => "T",
            PositionClass::B => "B",
            PositionClass::BPlus1 => "B1",
            PositionClass::ABPlus1 => "AB1",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        Some(match tag {
            "T" => PositionClass::Terminal,
            "B" => PositionClass::B,
            "B1" => PositionClass::BPlus1,
            "AB1" => PositionClass::ABPlus1,
            _ => return None,
        })
    }
}

impl fmt::Display for PositionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Closed-form class of `x` from its Zeckendorf expansion `z_1 < z_2 < ...`:
///
/// * `z_1` odd: `B`
/// * `z_1 >= 4` even: `B + 1`
/// * `z_1 = 2` and no `z_2`, or `z_2` odd: `B + 1`
/// * `z_1 = 2` and `z_2` even: `AB + 1`
pub fn classify(x: u64) -> Result<PositionClass> {
    if x >= MAX_POSITION {
        return Err(Error::Overflow(x));
    }
    let rep = zeckendorf_encode(x);
    let class = match (rep.z1(), rep.z2()) {
        (None, _) => PositionClass::Terminal,
        (Some(z1), _) if z1 % 2 == 1 => PositionClass::B,
        (Some(2), Some(z2)) if z2 % 2 == 0 => PositionClass::ABPlus1,
        _ => PositionClass::BPlus1,
    };
    Ok(class)
}

/// Binary search for `x` among `generator(lo..=hi) + offset`; the generator
/// must be increasing.
fn generated(
    generator: fn(u64) -> Result<u64>,
    offset: u64,
    mut lo: u64,
    mut hi: u64,
    x: u64,
) -> Result<bool> {
    while lo <= hi {
        let mid = lo + (hi - lo) / 2;
        let v = generator(mid)? + offset;
        match v.cmp(&x) {
            std::cmp::Ordering::Equal => return Ok(true),
            std::cmp::Ordering::Less => lo = mid + 1,
            std::cmp::Ordering::Greater => match mid.checked_sub(1) {
                Some(m) => hi = m,
                None => return Ok(false),
            },
        }
    }
    Ok(false)
}

/// Class of `x` by direct membership search in `B(n)` for `1 <= n <= witnesses`,
/// `B(n) + 1` for `0 <= n <= witnesses` and `AB(n) + 1` for `1 <= n <= witnesses`.
///
/// Fails with [`Error::BoundTooSmall`] when `x > B(witnesses)`, and with
/// [`Error::Unclassified`] if `x` is found in no set or in several.
pub fn classify_by_enumeration(x: u64, witnesses: u64) -> Result<PositionClass> {
    if x == 0 {
        return Ok(PositionClass::Terminal);
    }
    let covered = upper_wythoff(witnesses)?;
    if x > covered {
        return Err(Error::BoundTooSmall {
            position: x,
            covered,
        });
    }
    let hits = [
        (
            generated(upper_wythoff, 0, 1, witnesses, x)?,
            PositionClass::B,
        ),
        (
            generated(upper_wythoff, 1, 0, witnesses, x)?,
            PositionClass::BPlus1,
        ),
        (generated(ab, 1, 1, witnesses, x)?, PositionClass::ABPlus1),
    ];
    let mut found = hits.iter().filter(|(hit, _)| *hit).map(|&(_, c)| c);
    match (found.next(), found.next()) {
        (Some(c), None) => Ok(c),
        _ => Err(Error::Unclassified(x)),
    }
}

const IN_B: u8 = 1;
const IN_B1: u8 = 2;
const IN_AB1: u8 = 4;

/// Membership bitmap of `B`, `B + 1` and `AB + 1` over `0..=max`, filled by
/// running each generator up to `max`.
#[derive(Debug, Clone)]
pub struct SetEnumeration {
    masks: Vec<u8>,
}

impl SetEnumeration {
    pub fn upto(max: u64) -> Result<Self> {
        let len = usize::try_from(max)
            .ok()
            .and_then(|m| m.checked_add(1))
            .ok_or(Error::TableTooLarge(max))?;
        let mut masks = vec![0u8; len];
        let mut mark =
            |generator: fn(u64) -> Result<u64>, offset: u64, first: u64, bit: u8| -> Result<()> {
                for n in first.. {
                    let v = generator(n)? + offset;
                    if v > max {
                        break;
                    }
                    masks[v as usize] |= bit;
                }
                Ok(())
            };
        mark(upper_wythoff, 0, 1, IN_B)?;
        mark(upper_wythoff, 1, 0, IN_B1)?;
        mark(ab, 1, 1, IN_AB1)?;
        Ok(Self { masks })
    }

    pub fn max(&self) -> u64 {
        self.masks.len() as u64 - 1
    }

    /// `(in B, in B + 1, in AB + 1)`.
    pub fn membership(&self, x: u64) -> Option<(bool, bool, bool)> {
        self.masks
            .get(x as usize)
            .map(|&m| (m & IN_B != 0, m & IN_B1 != 0, m & IN_AB1 != 0))
    }

    pub fn class_of(&self, x: u64) -> Result<PositionClass> {
        if x == 0 {
            return Ok(PositionClass::Terminal);
        }
        let mask = *self.masks.get(x as usize).ok_or(Error::BoundTooSmall {
            position: x,
            covered: self.max(),
        })?;
        match mask {
            IN_B => Ok(PositionClass::B),
            IN_B1 => Ok(PositionClass::BPlus1),
            IN_AB1 => Ok(PositionClass::ABPlus1),
            _ => Err(Error::Unclassified(x)),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ClassCounts {
    pub terminal: u64,
    pub b: u64,
    pub b1: u64,
    pub ab1: u64,
    /// Positions that could not be assigned a single class.
    pub unclassified: u64,
}

impl ClassCounts {
    pub fn add(&mut self, class: PositionClass) {
        match class {
            PositionClass::Terminal => self.terminal += 1,
            PositionClass::B => self.b += 1,
            PositionClass::BPlus1 => self.b1 += 1,
            PositionClass::ABPlus1 => self.ab1 += 1,
        }
    }

    pub fn total(&self) -> u64 {
        self.terminal + self.b + self.b1 + self.ab1 + self.unclassified
    }

    fn merge(mut self, other: Self) -> Self {
        self.terminal += other.terminal;
        self.b += other.b;
        self.b1 += other.b1;
        self.ab1 += other.ab1;
        self.unclassified += other.unclassified;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub position: u64,
    pub detail: String,
}

/// Outcome of an exhaustive check over `range[0]..=range[1]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub range: [u64; 2],
    pub passed: bool,
    pub mismatches: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_counterexample: Option<Counterexample>,
    pub class_counts: ClassCounts,
}

#[derive(Default)]
struct Tally {
    counts: ClassCounts,
    mismatches: u64,
    first: Option<Counterexample>,
}

impl Tally {
    fn fail(&mut self, position: u64, detail: impl FnOnce() -> String) {
        self.mismatches += 1;
        if self.first.as_ref().is_none_or(|c| position < c.position) {
            self.first = Some(Counterexample {
                position,
                detail: detail(),
            });
        }
    }

    fn merge(mut self, other: Self) -> Self {
        self.counts = self.counts.merge(other.counts);
        self.mismatches += other.mismatches;
        if let Some(c) = other.first {
            if self.first.as_ref().is_none_or(|f| c.position < f.position) {
                self.first = Some(c);
            }
        }
        self
    }

    fn into_report(self, lo: u64, hi: u64) -> VerificationReport {
        VerificationReport {
            range: [lo, hi],
            passed: self.first.is_none(),
            mismatches: self.mismatches,
            first_counterexample: self.first,
            class_counts: self.counts,
        }
    }
}

/// Runs `check` over `lo..=hi` in parallel and gathers the tallies.
fn tally_range<F>(lo: u64, hi: u64, check: F) -> VerificationReport
where
    F: Fn(u64, &mut Tally) + Sync,
{
    (lo..=hi)
        .into_par_iter()
        .fold(Tally::default, |mut t, x| {
            check(x, &mut t);
            t
        })
        .reduce(Tally::default, Tally::merge)
        .into_report(lo, hi)
}

/// Checks that every `x` in `1..=max` lies in exactly one of the enumerated
/// sets `B`, `B + 1`, `AB + 1`.
pub fn verify_partition(max: u64) -> Result<VerificationReport> {
    let sets = SetEnumeration::upto(max)?;
    Ok(tally_range(1, max, |x, t| match sets.class_of(x) {
        Ok(c) => t.counts.add(c),
        Err(_) => {
            t.counts.unclassified += 1;
            t.fail(x, || {
                let (b, b1, ab1) = sets.membership(x).unwrap_or_default();
                format!("membership B={b} B+1={b1} AB+1={ab1}")
            });
        }
    }))
}

/// Checks, for every `x` in `0..=max`, that the closed form agrees with both
/// the brute-force sieve and the set enumeration. Counts are by closed form.
pub fn verify_equivalence(max: u64) -> Result<VerificationReport> {
    let table = grundy_sieve(&SubtractionSet::odd_fibonacci_minus_one(), max)?;
    let sets = SetEnumeration::upto(max)?;
    Ok(tally_range(0, max, |x, t| {
        let class = classify(x).expect("sieve range is below 2^32");
        t.counts.add(class);
        let sieved = table.value(x);
        let enumerated = sets.class_of(x);
        if class.grundy() != sieved || enumerated.as_ref() != Ok(&class) {
            t.fail(x, || {
                format!(
                    "closed form {class} (g={}), sieve g={sieved}, enumeration {enumerated:?}",
                    class.grundy()
                )
            });
        }
    }))
}

/// Which classes the followers `x - s` of a position fall into. Position 0 is
/// tracked separately as `terminal`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct FollowerProfile {
    pub in_b: bool,
    pub in_b1: bool,
    pub in_ab1: bool,
    pub terminal: bool,
}

impl FollowerProfile {
    /// `(follower in B or 0, follower in B + 1, follower in AB + 1)`.
    pub fn as_triple(&self) -> (bool, bool, bool) {
        (self.in_b || self.terminal, self.in_b1, self.in_ab1)
    }

    /// The follower pattern that makes `class` carry its Grundy value:
    ///
    /// * `B`: no follower in `B`;
    /// * `B + 1`: some follower in `B` or 0, none in `B + 1`;
    /// * `AB + 1`: followers in `B` or 0 and in `B + 1`, none in `AB + 1`.
    pub fn consistent_with(&self, class: PositionClass) -> bool {
        let (zero, one, two) = self.as_triple();
        match class {
            PositionClass::Terminal => !self.in_b && !one && !two && !self.terminal,
            PositionClass::B => !self.in_b,
            PositionClass::BPlus1 => zero && !one,
            PositionClass::ABPlus1 => zero && one && !two,
        }
    }
}

/// Follower profile of `x`, with classes looked up in `sets`.
pub fn follower_profile(x: u64, sets: &SetEnumeration) -> Result<FollowerProfile> {
    let mut profile = FollowerProfile::default();
    for s in SubtractionSet::odd_fibonacci_minus_one()
        .iter()
        .take_while(|&s| s <= x)
    {
        match sets.class_of(x - s)? {
            PositionClass::Terminal => profile.terminal = true,
            PositionClass::B => profile.in_b = true,
            PositionClass::BPlus1 => profile.in_b1 = true,
            PositionClass::ABPlus1 => profile.in_ab1 = true,
        }
    }
    Ok(profile)
}

/// Follower profile of `x` against sets enumerated up to `bound`.
pub fn follower_properties(x: u64, bound: u64) -> Result<FollowerProfile> {
    if x > bound {
        return Err(Error::BoundTooSmall {
            position: x,
            covered: bound,
        });
    }
    follower_profile(x, &SetEnumeration::upto(bound)?)
}

/// Checks [`FollowerProfile::consistent_with`] for every `x` in `0..=max`,
/// with the class of `x` taken from the enumeration.
pub fn verify_follower_properties(max: u64) -> Result<VerificationReport> {
    let sets = SetEnumeration::upto(max)?;
    Ok(tally_range(0, max, |x, t| {
        let checked = sets
            .class_of(x)
            .and_then(|c| follower_profile(x, &sets).map(|p| (c, p)));
        match checked {
            Ok((class, profile)) => {
                t.counts.add(class);
                if !profile.consistent_with(class) {
                    t.fail(x, || format!("{class} position with followers {profile:?}"));
                }
            }
            Err(e) => {
                t.counts.unclassified += 1;
                t.fail(x, || e.to_string());
            }
        }
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Player {
    /// The player who just moved wins (P-position).
    Previous,
    /// The player about to move wins (N-position).
    Next,
}

pub fn winner(x: u64) -> Result<Player> {
    Ok(if classify(x)?.grundy() == 0 {
        Player::Previous
    } else {
        Player::Next
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Move {
    pub component: usize,
    pub subtrahend: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SumOutcome {
    pub nim_sum: u8,
    pub winner: Player,
    /// First move, by component then subtrahend, that restores nim-sum 0.
    pub winning_move: Option<Move>,
}

/// Winner of the disjunctive sum of games at `positions`.
pub fn sum_winner(positions: &[u64]) -> Result<SumOutcome> {
    let values = positions
        .iter()
        .map(|&x| classify(x).map(PositionClass::grundy))
        .collect::<Result<Vec<_>>>()?;
    let nim_sum = values.iter().fold(0, |acc, v| acc ^ v);
    if nim_sum == 0 {
        return Ok(SumOutcome {
            nim_sum,
            winner: Player::Previous,
            winning_move: None,
        });
    }
    let set = SubtractionSet::odd_fibonacci_minus_one();
    for (component, (&x, &g)) in positions.iter().zip(&values).enumerate() {
        let target = g ^ nim_sum;
        for s in set.iter().take_while(|&s| s <= x) {
            if classify(x - s)?.grundy() == target {
                return Ok(SumOutcome {
                    nim_sum,
                    winner: Player::Next,
                    winning_move: Some(Move {
                        component,
                        subtrahend: s,
                    }),
                });
            }
        }
    }
    unreachable!("a nonzero nim-sum always has a move to zero")
}
