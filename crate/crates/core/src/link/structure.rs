use std::collections::BTreeMap;

use super::LoopSet;
use crate::{Error, Result};

/// Largest loop count an explicit connectivity table may describe.
pub const MAX_TABLE_LOOPS: usize = 16;

/// Which loop subsets are linked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinkingStructure {
    /// Generating linked subsets. A set is connected when its loops are
    /// chained together by atoms it fully contains, so a proper subset of an
    /// atom is unlinked unless other atoms join it.
    Atoms(Vec<LoopSet>),
    Table(ConnectivityTable),
}

impl LinkingStructure {
    pub(crate) fn validate(&self, loop_count: usize) -> Result<()> {
        let all = LoopSet::first(loop_count);
        match self {
            LinkingStructure::Atoms(atoms) => {
                for atom in atoms {
                    if atom.len() < 2 {
                        return Err(Error::InvalidModel("atom with fewer than 2 loops".into()));
                    }
                    if let Some(i) = atom.difference(all).lowest() {
                        return Err(Error::UnknownLoop(i));
                    }
                }
                Ok(())
            }
            LinkingStructure::Table(table) => table.validate(loop_count),
        }
    }

    /// Partition of `set` into linked blocks, ordered by smallest member.
    pub fn blocks(&self, set: LoopSet) -> Vec<LoopSet> {
        match self {
            LinkingStructure::Atoms(atoms) => {
                let inside: Vec<u64> = atoms
                    .iter()
                    .filter(|a| a.is_subset(set))
                    .map(|a| a.bits())
                    .collect();
                let mut rest = set.bits();
                let mut blocks = Vec::new();
                while rest != 0 {
                    let block = grow(rest & rest.wrapping_neg(), &inside);
                    blocks.push(LoopSet::from_bits(block));
                    rest &= !block;
                }
                blocks
            }
            LinkingStructure::Table(table) => table.partition(set).to_vec(),
        }
    }

    pub fn is_connected(&self, set: LoopSet) -> bool {
        match self {
            LinkingStructure::Atoms(atoms) => {
                if set.is_empty() {
                    return false;
                }
                let inside: Vec<u64> = atoms
                    .iter()
                    .filter(|a| a.is_subset(set))
                    .map(|a| a.bits())
                    .collect();
                grow(set.bits() & set.bits().wrapping_neg(), &inside) == set.bits()
            }
            LinkingStructure::Table(table) => table.partition(set).len() == 1,
        }
    }
}

/// Closure of `seed` under the atoms that meet it.
fn grow(seed: u64, atoms: &[u64]) -> u64 {
    let mut block = seed;
    loop {
        let next = atoms
            .iter()
            .filter(|&&a| a & block != 0)
            .fold(block, |acc, &a| acc | a);
        if next == block {
            return block;
        }
        block = next;
    }
}

/// An explicit partition of every nonempty loop subset into linked blocks.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConnectivityTable {
    partitions: BTreeMap<u64, Vec<LoopSet>>,
}

impl ConnectivityTable {
    pub fn new(entries: impl IntoIterator<Item = (LoopSet, Vec<LoopSet>)>) -> Self {
        let partitions = entries
            .into_iter()
            .map(|(set, mut blocks)| {
                blocks.sort_by_key(|b| b.lowest());
                (set.bits(), blocks)
            })
            .collect();
        ConnectivityTable { partitions }
    }

    /// Tabulates `blocks` on every nonempty subset of the first `loop_count` loops.
    pub fn from_fn(loop_count: usize, mut blocks: impl FnMut(LoopSet) -> Vec<LoopSet>) -> Result<Self> {
        if loop_count > MAX_TABLE_LOOPS {
            return Err(too_large(loop_count));
        }
        Ok(ConnectivityTable::new(
            LoopSet::first(loop_count)
                .subsets()
                .filter(|s| !s.is_empty())
                .map(|s| (s, blocks(s))),
        ))
    }

    pub fn entries(&self) -> impl Iterator<Item = (LoopSet, &[LoopSet])> {
        self.partitions
            .iter()
            .map(|(&bits, blocks)| (LoopSet::from_bits(bits), blocks.as_slice()))
    }

    fn partition(&self, set: LoopSet) -> &[LoopSet] {
        self.partitions
            .get(&set.bits())
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    fn validate(&self, loop_count: usize) -> Result<()> {
        if loop_count > MAX_TABLE_LOOPS {
            return Err(too_large(loop_count));
        }
        let all = LoopSet::first(loop_count);
        if let Some((&bits, _)) = self.partitions.iter().find(|(&b, _)| b == 0 || !LoopSet::from_bits(b).is_subset(all)) {
            return Err(Error::InvalidModel(format!(
                "table key {bits:#b} is empty or names unknown loops"
            )));
        }
        for set in all.subsets().filter(|s| !s.is_empty()) {
            let Some(blocks) = self.partitions.get(&set.bits()) else {
                return Err(Error::InvalidModel(format!(
                    "table has no partition for loop set {:?}",
                    set.iter().collect::<Vec<_>>()
                )));
            };
            let mut covered = LoopSet::EMPTY;
            for b in blocks {
                if b.is_empty() || b.intersects(covered) {
                    return Err(Error::InvalidModel(format!(
                        "table entry for {:?} is not a partition",
                        set.iter().collect::<Vec<_>>()
                    )));
                }
                covered = covered.union(*b);
            }
            if covered != set {
                return Err(Error::InvalidModel(format!(
                    "table entry for {:?} does not cover the set",
                    set.iter().collect::<Vec<_>>()
                )));
            }
            // Refinement is transitive, so single-loop deletions suffice.
            for removed in set.iter() {
                let smaller = set.difference(LoopSet::singleton(removed));
                if smaller.is_empty() {
                    continue;
                }
                for b in &self.partitions[&smaller.bits()] {
                    if !blocks.iter().any(|big| b.is_subset(*big)) {
                        return Err(Error::InvalidModel(format!(
                            "deleting loop {removed} from {:?} links loops that were unlinked",
                            set.iter().collect::<Vec<_>>()
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

fn too_large(loop_count: usize) -> Error {
    Error::TooLarge(format!(
        "connectivity tables support at most {MAX_TABLE_LOOPS} loops, got {loop_count}"
    ))
}
