//! Parties, party sets and subsystems.
//!
//! Parties are numbered `1..=n`, the purifier is `n + 1`. Letters map
//! `A -> 1`, `B -> 2`, ..., so the purifier of a five-party model is `F`.

use std::cmp::Ordering;
use std::fmt;

use crate::{Error, Result};

/// Largest supported party count; `n + 1` letters must fit in `A..=Z`.
pub const MAX_PARTIES: usize = 25;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Party(u8);

impl Party {
    /// Party `index` of an `n`-party system; `index == n + 1` is the purifier.
    pub fn new(index: usize, n: usize) -> Result<Self> {
        if n > MAX_PARTIES || index == 0 || index > n + 1 {
            return Err(Error::InvalidSubsystem(format!(
                "party index {index} outside [1, {}]",
                n + 1
            )));
        }
        Ok(Party(index as u8))
    }

    pub fn from_letter(letter: char, n: usize) -> Result<Self> {
        if !letter.is_ascii_uppercase() {
            return Err(Error::Parse(format!("'{letter}' is not a party letter")));
        }
        let index = (letter as u8 - b'A') as usize + 1;
        Party::new(index, n).map_err(|_| Error::PartyOutOfRange { letter, n })
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn letter(self) -> char {
        (b'A' + self.0 - 1) as char
    }

    pub fn is_purifier(self, n: usize) -> bool {
        self.index() == n + 1
    }
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// A set of parties drawn from `[n + 1]`, stored as a bitmask (bit `i - 1` is
/// party `i`).
///
/// Ordering is cardinality first, then lexicographic on the sorted index
/// list, so `A < B < AB < AC < BC < ABC`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct PartySet(u32);

impl PartySet {
    pub const EMPTY: PartySet = PartySet(0);

    pub fn from_bits(bits: u32) -> Self {
        PartySet(bits)
    }

    /// All of `[count]`.
    pub fn first(count: usize) -> Self {
        PartySet(((1u64 << count) - 1) as u32)
    }

    pub fn singleton(p: Party) -> Self {
        PartySet(1 << (p.index() - 1))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, p: Party) -> bool {
        self.0 & (1 << (p.index() - 1)) != 0
    }

    pub fn contains_index(self, index: usize) -> bool {
        index >= 1 && index <= 32 && self.0 & (1 << (index - 1)) != 0
    }

    pub fn union(self, other: PartySet) -> Self {
        PartySet(self.0 | other.0)
    }

    pub fn intersection(self, other: PartySet) -> Self {
        PartySet(self.0 & other.0)
    }

    pub fn difference(self, other: PartySet) -> Self {
        PartySet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: PartySet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: PartySet) -> bool {
        self.0 & other.0 == 0
    }

    /// Party indices in ascending order.
    pub fn indices(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (1..=32usize).filter(move |i| bits & (1u32 << (i - 1)) != 0)
    }

    pub fn letters(self) -> String {
        self.indices()
            .map(|i| (b'A' + i as u8 - 1) as char)
            .collect()
    }

    /// Parses a letter string such as `"ACE"`; every letter must be a party of
    /// `[n + 1]` (the purifier is accepted here).
    pub fn parse_letters(text: &str, n: usize) -> Result<Self> {
        let mut set = PartySet::EMPTY;
        for c in text.chars() {
            let p = Party::from_letter(c, n)?;
            if set.contains(p) {
                return Err(Error::Parse(format!("party '{c}' repeated in '{text}'")));
            }
            set = set.union(PartySet::singleton(p));
        }
        Ok(set)
    }
}

impl Ord for PartySet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.indices().cmp(other.indices()))
    }
}

impl PartialOrd for PartySet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PartySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            write!(f, "∅")
        } else {
            write!(f, "{}", self.letters())
        }
    }
}

/// A nonempty subset of `[n]`; never contains the purifier.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subsystem(PartySet);

impl Subsystem {
    pub fn new(set: PartySet, n: usize) -> Result<Self> {
        if set.is_empty() {
            return Err(Error::InvalidSubsystem("empty subsystem".into()));
        }
        if n > MAX_PARTIES || !set.is_subset(PartySet::first(n)) {
            return Err(Error::InvalidSubsystem(format!(
                "{set} is not a subset of the {n} parties"
            )));
        }
        Ok(Subsystem(set))
    }

    /// Parses letters; `F` in a five-party system is rejected as the purifier.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let text = text.trim();
        for c in text.chars() {
            let p = Party::from_letter(c, n)?;
            if p.is_purifier(n) {
                return Err(Error::PartyOutOfRange { letter: c, n });
            }
        }
        Subsystem::new(PartySet::parse_letters(text, n)?, n)
    }

    pub fn set(self) -> PartySet {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.len()
    }

    pub fn is_empty(self) -> bool {
        false
    }

    pub fn contains(self, p: Party) -> bool {
        self.0.contains(p)
    }

    pub fn letters(self) -> String {
        self.0.letters()
    }

    /// `[n + 1] \ I`, which always contains the purifier.
    pub fn complement(self, n: usize) -> PartySet {
        complement_subsystem(self, n)
    }
}

impl fmt::Display for Subsystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `[n + 1] \ I`; purification gives `S(I) = S(complement)`.
pub fn complement_subsystem(subsystem: Subsystem, n: usize) -> PartySet {
    PartySet::first(n + 1).difference(subsystem.set())
}

/// Every nonempty subset of `[n]`, in cardinality-then-lexicographic order.
pub fn all_subsystems(n: usize) -> Vec<Subsystem> {
    assert!(n <= MAX_PARTIES, "at most {MAX_PARTIES} parties");
    let mut sets: Vec<PartySet> = (1..(1u32 << n)).map(PartySet::from_bits).collect();
    sets.sort();
    sets.into_iter().map(Subsystem).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order_matches_grouped_listing() {
        let names: Vec<String> = all_subsystems(3).iter().map(|s| s.letters()).collect();
        assert_eq!(names, ["A", "B", "C", "AB", "AC", "BC", "ABC"]);
        assert_eq!(all_subsystems(5).len(), 31);
        assert_eq!(all_subsystems(5)[5].letters(), "AB");
        assert_eq!(all_subsystems(5)[14].letters(), "DE");
    }

    #[test]
    fn complements() {
        let i = Subsystem::parse("ABDE", 5).unwrap();
        assert_eq!(complement_subsystem(i, 5).letters(), "CF");
        let a = Subsystem::parse("A", 2).unwrap();
        assert_eq!(complement_subsystem(a, 2).letters(), "BC");
        let all = Subsystem::new(PartySet::first(4), 4).unwrap();
        assert_eq!(complement_subsystem(all, 4).letters(), "E");
    }

    #[test]
    fn purifier_rejected_in_subsystems() {
        assert!(matches!(
            Subsystem::parse("AF", 5),
            Err(Error::PartyOutOfRange { letter: 'F', n: 5 })
        ));
        assert!(Subsystem::parse("AG", 5).is_err());
        assert!(Subsystem::parse("", 5).is_err());
        assert!(Subsystem::parse("AA", 5).is_err());
    }
}
