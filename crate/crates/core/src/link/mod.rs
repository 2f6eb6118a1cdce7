//! Link models: weighted loops, a combinatorial linking structure, loop
//! min-cuts, bridges and the hypergraph conversion.
//!
//! Loops are indexed `0..loop_count()`. External loop `external()[i - 1]`
//! carries party `i`, the last one being the purifier. A loop set is a `u64`
//! bitmask, so models have at most 64 loops.

mod bridge;
mod convert;
mod ray15;
mod structure;

use std::cmp::Ordering;
use std::fmt;

use num_traits::Zero;

use crate::graph::check_externals;
use crate::party::PartySet;
use crate::rational::Scaled;
use crate::{EntropyVector, Error, Rational, Result, Subsystem};

pub use bridge::{bridge_oracle, k_loop_stratification, BridgeScan};
pub use convert::hypergraph_to_link;
pub use ray15::ray15_link;
pub use structure::{ConnectivityTable, LinkingStructure};

pub const MAX_LOOPS: usize = 64;

/// Largest number of cuttable loops the min-cut search accepts.
pub const MAX_CUT_CANDIDATES: usize = 30;

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LoopSet(u64);

impl LoopSet {
    pub const EMPTY: LoopSet = LoopSet(0);

    pub fn from_bits(bits: u64) -> Self {
        LoopSet(bits)
    }

    pub fn from_indices(indices: impl IntoIterator<Item = usize>) -> Self {
        LoopSet(indices.into_iter().fold(0, |acc, i| acc | 1 << i))
    }

    /// The first `count` loops.
    pub fn first(count: usize) -> Self {
        if count >= 64 {
            LoopSet(u64::MAX)
        } else {
            LoopSet((1 << count) - 1)
        }
    }

    pub fn singleton(index: usize) -> Self {
        LoopSet(1 << index)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, index: usize) -> bool {
        index < 64 && self.0 >> index & 1 == 1
    }

    pub fn insert(&mut self, index: usize) {
        self.0 |= 1 << index;
    }

    pub fn remove(&mut self, index: usize) {
        self.0 &= !(1 << index);
    }

    pub fn union(self, other: LoopSet) -> Self {
        LoopSet(self.0 | other.0)
    }

    pub fn intersection(self, other: LoopSet) -> Self {
        LoopSet(self.0 & other.0)
    }

    pub fn difference(self, other: LoopSet) -> Self {
        LoopSet(self.0 & !other.0)
    }

    pub fn intersects(self, other: LoopSet) -> bool {
        self.0 & other.0 != 0
    }

    pub fn is_subset(self, other: LoopSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn lowest(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Member indices in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            (rest != 0).then(|| {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                i
            })
        })
    }

    /// Lexicographic comparison of the sorted index lists.
    pub fn cmp_lex(self, other: LoopSet) -> Ordering {
        self.iter().cmp(other.iter())
    }

    /// Every subset of `self` (including the empty set and `self`).
    pub fn subsets(self) -> impl Iterator<Item = LoopSet> {
        let full = self.0;
        let mut next = Some(0u64);
        std::iter::from_fn(move || {
            let current = next?;
            next = if current == full {
                None
            } else {
                Some((current.wrapping_sub(full)) & full)
            };
            Some(LoopSet(current))
        })
    }
}

impl Ord for LoopSet {
    /// Cardinality first, then lexicographic on the index lists.
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.cmp_lex(*other))
    }
}

impl PartialOrd for LoopSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl FromIterator<usize> for LoopSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        LoopSet::from_indices(iter)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LoopWeight {
    Finite(Rational),
    Infinite,
}

impl LoopWeight {
    pub fn is_infinite(&self) -> bool {
        matches!(self, LoopWeight::Infinite)
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            LoopWeight::Finite(w) => Some(w),
            LoopWeight::Infinite => None,
        }
    }
}

impl fmt::Display for LoopWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoopWeight::Finite(w) => write!(f, "{w}"),
            LoopWeight::Infinite => write!(f, "inf"),
        }
    }
}

/// How the chosen min-cut was singled out among the optimal ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TieBreak {
    /// Number of inclusion-minimal valid cuts attaining the minimum weight.
    pub optimal_cuts: usize,
}

impl TieBreak {
    pub const RULE: &'static str =
        "least weight, then fewest loops, then lexicographically smallest index list";
}

impl fmt::Display for TieBreak {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.optimal_cuts <= 1 {
            write!(f, "unique minimum")
        } else {
            write!(f, "{} optimal cuts; chose by {}", self.optimal_cuts, Self::RULE)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopCutResult {
    pub side: PartySet,
    pub cut: LoopSet,
    pub weight: Rational,
    pub interior: LoopSet,
    pub exterior: LoopSet,
    pub tie_break: TieBreak,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkModel {
    names: Vec<String>,
    weights: Vec<LoopWeight>,
    external: Vec<usize>,
    structure: LinkingStructure,
    external_set: LoopSet,
    /// Finite weights scaled to integers; infinite loops hold 0.
    scaled: Scaled,
}

impl LinkModel {
    pub fn new(
        names: Vec<String>,
        weights: Vec<LoopWeight>,
        external: Vec<usize>,
        structure: LinkingStructure,
    ) -> Result<Self> {
        if names.len() > MAX_LOOPS {
            return Err(Error::TooLarge(format!(
                "{} loops (at most {MAX_LOOPS})",
                names.len()
            )));
        }
        if weights.len() != names.len() {
            return Err(Error::LengthMismatch {
                expected: names.len(),
                found: weights.len(),
            });
        }
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(Error::InvalidModel(format!("duplicate loop name '{name}'")));
            }
        }
        check_externals(names.len(), &external)?;
        structure.validate(names.len())?;
        let zero = Rational::zero();
        let scaled = Scaled::new(weights.iter().map(|w| w.finite().unwrap_or(&zero)))?;
        let external_set = external.iter().copied().collect();
        Ok(LinkModel {
            names,
            weights,
            external,
            structure,
            external_set,
            scaled,
        })
    }

    pub fn n(&self) -> usize {
        self.external.len() - 1
    }

    pub fn loop_count(&self) -> usize {
        self.names.len()
    }

    pub fn all_loops(&self) -> LoopSet {
        LoopSet::first(self.names.len())
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn weights(&self) -> &[LoopWeight] {
        &self.weights
    }

    pub fn external(&self) -> &[usize] {
        &self.external
    }

    pub fn structure(&self) -> &LinkingStructure {
        &self.structure
    }

    pub fn external_loops(&self) -> LoopSet {
        self.external_set
    }

    /// External loops of the parties in `side`.
    pub fn externals_of(&self, side: PartySet) -> LoopSet {
        side.indices()
            .filter(|&p| p <= self.external.len())
            .map(|p| self.external[p - 1])
            .collect()
    }

    /// Internal loops of finite weight, the only loops a cut may contain.
    pub fn cuttable_loops(&self) -> LoopSet {
        (0..self.names.len())
            .filter(|&i| !self.external_set.contains(i) && !self.weights[i].is_infinite())
            .collect()
    }

    /// Exact total weight of a set of finite loops.
    pub fn weight_of(&self, set: LoopSet) -> Result<Rational> {
        if let Some(i) = set.iter().find(|&i| i >= self.names.len() || self.weights[i].is_infinite()) {
            return Err(if i >= self.names.len() {
                Error::UnknownLoop(i)
            } else {
                Error::InvalidCutSet(format!("loop {} has infinite weight", self.names[i]))
            });
        }
        Ok(self.scaled.unscale(self.scaled_weight(set)))
    }

    fn scaled_weight(&self, set: LoopSet) -> u128 {
        set.iter().map(|i| self.scaled.numer[i] as u128).sum()
    }

    pub fn set_names(&self, set: LoopSet) -> Vec<&str> {
        set.iter().map(|i| self.names[i].as_str()).collect()
    }

    pub fn format_set(&self, set: LoopSet) -> String {
        format!("{{{}}}", self.set_names(set).join(","))
    }

    fn check_known(&self, set: LoopSet) -> Result<()> {
        match set.difference(self.all_loops()).lowest() {
            Some(i) => Err(Error::UnknownLoop(i)),
            None => Ok(()),
        }
    }

    /// Maximal linked blocks of `set`, ordered by smallest member.
    pub fn connected_sublinks(&self, set: LoopSet) -> Result<Vec<LoopSet>> {
        self.check_known(set)?;
        Ok(self.structure.blocks(set))
    }

    /// A single linked block with at least two loops.
    pub fn is_irreducible(&self, set: LoopSet) -> bool {
        set.len() >= 2 && set.is_subset(self.all_loops()) && self.structure.is_connected(set)
    }

    fn check_side(&self, side: PartySet) -> Result<()> {
        let all = PartySet::first(self.external.len());
        if side.is_empty() || side == all || !side.is_subset(all) {
            return Err(Error::InvalidSubsystem(format!(
                "{side} is not a nonempty proper subset of the external parties"
            )));
        }
        Ok(())
    }

    fn check_cut(&self, cut: LoopSet) -> Result<()> {
        self.check_known(cut)?;
        if let Some(i) = cut.difference(self.cuttable_loops()).lowest() {
            return Err(Error::InvalidCutSet(format!(
                "loop {} is external or has infinite weight",
                self.names[i]
            )));
        }
        Ok(())
    }

    /// Whether removing `cut` leaves no block joining an external loop of
    /// `side` to an external loop of the other parties.
    pub fn separates(&self, side: PartySet, cut: LoopSet) -> Result<bool> {
        self.check_side(side)?;
        self.check_cut(cut)?;
        Ok(self.separates_unchecked(self.externals_of(side), cut))
    }

    fn separates_unchecked(&self, inside: LoopSet, cut: LoopSet) -> bool {
        let outside = self.external_set.difference(inside);
        self.structure
            .blocks(self.all_loops().difference(cut))
            .iter()
            .all(|b| !(b.intersects(inside) && b.intersects(outside)))
    }

    pub fn is_valid_loop_cut(&self, subsystem: Subsystem, cut: LoopSet) -> Result<bool> {
        self.check_subsystem(subsystem)?;
        self.separates(subsystem.set(), cut)
    }

    fn check_subsystem(&self, s: Subsystem) -> Result<()> {
        if !s.set().is_subset(PartySet::first(self.n())) {
            return Err(Error::InvalidSubsystem(format!(
                "{s} is not a subsystem of this {}-party model",
                self.n()
            )));
        }
        Ok(())
    }

    /// Interior and exterior of `cut` for `side`: the blocks of the remaining
    /// link touching the side's externals, and everything else.
    pub fn interior_exterior(&self, side: PartySet, cut: LoopSet) -> (LoopSet, LoopSet) {
        let inside = self.externals_of(side);
        let rest = self.all_loops().difference(cut);
        let interior = self
            .structure
            .blocks(rest)
            .into_iter()
            .filter(|b| b.intersects(inside))
            .fold(LoopSet::EMPTY, LoopSet::union);
        (interior, rest.difference(interior))
    }

    /// Minimum-weight loop cut for the externals of `side` against all other
    /// externals. Any nonempty proper subset of `[n + 1]` is accepted.
    pub fn min_cut_for(&self, side: PartySet) -> Result<LoopCutResult> {
        self.check_side(side)?;
        let candidates: Vec<usize> = self.cuttable_loops().iter().collect();
        if candidates.len() > MAX_CUT_CANDIDATES {
            return Err(Error::TooLarge(format!(
                "{} cuttable loops (at most {MAX_CUT_CANDIDATES})",
                candidates.len()
            )));
        }
        let inside = self.externals_of(side);
        let all_candidates: LoopSet = candidates.iter().copied().collect();
        if !self.separates_unchecked(inside, all_candidates) {
            return Err(Error::Uncuttable(side.letters()));
        }
        let mut search = CutSearch {
            model: self,
            inside,
            candidates: &candidates,
            best: None,
            optimal_cuts: 0,
        };
        search.visit(0, LoopSet::EMPTY, 0, all_candidates);
        let (cut, weight, _) = search.best.expect("the full candidate set is a valid cut");
        let optimal_cuts = search.optimal_cuts;
        let (interior, exterior) = self.interior_exterior(side, cut);
        Ok(LoopCutResult {
            side,
            cut,
            weight: self.scaled.unscale(weight),
            interior,
            exterior,
            tie_break: TieBreak { optimal_cuts },
        })
    }

    pub fn link_min_cut(&self, subsystem: Subsystem) -> Result<LoopCutResult> {
        self.check_subsystem(subsystem)?;
        self.min_cut_for(subsystem.set())
    }

    pub fn entropy(&self, subsystem: Subsystem) -> Result<Rational> {
        Ok(self.link_min_cut(subsystem)?.weight)
    }

    pub fn entropy_vector(&self) -> Result<EntropyVector> {
        EntropyVector::try_from_fn(self.n(), |s| self.entropy(s))
    }
}

struct CutSearch<'a> {
    model: &'a LinkModel,
    inside: LoopSet,
    candidates: &'a [usize],
    best: Option<(LoopSet, u128, usize)>,
    optimal_cuts: usize,
}

impl CutSearch<'_> {
    /// Include-first depth-first search. Among sets of equal weight and size
    /// the first one reached is the lexicographically smallest, so only
    /// strict improvements replace the incumbent.
    fn visit(&mut self, depth: usize, chosen: LoopSet, weight: u128, undecided: LoopSet) {
        if let Some((_, best, _)) = self.best {
            if weight > best {
                return;
            }
        }
        if self.model.separates_unchecked(self.inside, chosen) {
            self.record(chosen, weight);
            // Supersets of a valid cut are valid and never better.
            return;
        }
        if !self.model.separates_unchecked(self.inside, chosen.union(undecided)) {
            return;
        }
        let Some(&loop_index) = self.candidates.get(depth) else {
            return;
        };
        let undecided = undecided.difference(LoopSet::singleton(loop_index));
        let mut with = chosen;
        with.insert(loop_index);
        let w = self.model.scaled.numer[loop_index] as u128;
        self.visit(depth + 1, with, weight + w, undecided);
        self.visit(depth + 1, chosen, weight, undecided);
    }

    fn record(&mut self, cut: LoopSet, weight: u128) {
        let minimal = cut.iter().all(|i| {
            !self
                .model
                .separates_unchecked(self.inside, cut.difference(LoopSet::singleton(i)))
        });
        match self.best {
            Some((_, best, _)) if weight > best => {}
            Some((_, best, _)) if weight == best => {
                if minimal {
                    self.optimal_cuts += 1;
                }
                let (_, _, size) = self.best.unwrap();
                if cut.len() < size {
                    self.best = Some((cut, weight, cut.len()));
                }
            }
            _ => {
                self.optimal_cuts = minimal as usize;
                self.best = Some((cut, weight, cut.len()));
            }
        }
    }
}

pub fn link_entropy(model: &LinkModel, subsystem: Subsystem) -> Result<Rational> {
    model.entropy(subsystem)
}

pub fn link_entropy_vector(model: &LinkModel) -> Result<EntropyVector> {
    model.entropy_vector()
}
