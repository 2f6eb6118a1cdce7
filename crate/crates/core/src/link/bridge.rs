use std::collections::BTreeMap;

use super::{LinkModel, LoopCutResult, LoopSet};
use crate::party::PartySet;
use crate::{Error, Result, Subsystem};

/// Largest model the exhaustive bridge scan accepts.
pub const MAX_SCAN_LOOPS: usize = 20;

impl LinkModel {
    /// Irreducible and meeting the interior, the exterior and the cut of `cut`.
    pub fn is_bridge(&self, cut: &LoopCutResult, set: LoopSet) -> bool {
        set.intersects(cut.interior)
            && set.intersects(cut.exterior)
            && set.intersects(cut.cut)
            && self.is_irreducible(set)
    }

    /// A bridge none of whose proper subsets is a bridge.
    pub fn is_minimal_bridge(&self, cut: &LoopCutResult, set: LoopSet) -> bool {
        self.is_bridge(cut, set)
            && set
                .subsets()
                .filter(|s| *s != set)
                .all(|s| !self.is_bridge(cut, s))
    }
}

/// Whether `set` is a minimal bridge across the min-cut of `subsystem`.
pub fn bridge_oracle(model: &LinkModel, subsystem: Subsystem, set: LoopSet) -> Result<bool> {
    let cut = model.link_min_cut(subsystem)?;
    Ok(model.is_minimal_bridge(&cut, set))
}

/// Cut loop to the size of its smallest minimal bridge.
pub fn k_loop_stratification(model: &LinkModel, subsystem: Subsystem) -> Result<BTreeMap<usize, usize>> {
    BridgeScan::new(model, model.link_min_cut(subsystem)?)?.stratification(model)
}

/// All minimal bridges across one min-cut, found by a pass over every loop
/// subset in increasing bitmask order.
#[derive(Clone, Debug)]
pub struct BridgeScan {
    cut: LoopCutResult,
    minimal: Vec<LoopSet>,
}

impl BridgeScan {
    pub fn new(model: &LinkModel, cut: LoopCutResult) -> Result<Self> {
        let count = model.loop_count();
        if count > MAX_SCAN_LOOPS {
            return Err(Error::TooLarge(format!(
                "bridge scan supports at most {MAX_SCAN_LOOPS} loops, got {count}"
            )));
        }
        // contains[m]: some subset of m (m included) is a bridge.
        let mut contains = vec![false; 1 << count];
        let mut minimal = Vec::new();
        let (w, x, c) = (cut.interior.bits(), cut.exterior.bits(), cut.cut.bits());
        for m in 1u64..1 << count {
            let mut rest = m;
            let mut below = false;
            while rest != 0 && !below {
                let bit = rest & rest.wrapping_neg();
                below = contains[(m ^ bit) as usize];
                rest ^= bit;
            }
            if below {
                contains[m as usize] = true;
            } else if m & w != 0 && m & x != 0 && m & c != 0 && model.is_irreducible(LoopSet::from_bits(m)) {
                contains[m as usize] = true;
                minimal.push(LoopSet::from_bits(m));
            }
        }
        minimal.sort();
        Ok(BridgeScan { cut, minimal })
    }

    pub fn for_side(model: &LinkModel, side: PartySet) -> Result<Self> {
        BridgeScan::new(model, model.min_cut_for(side)?)
    }

    pub fn cut(&self) -> &LoopCutResult {
        &self.cut
    }

    /// Minimal bridges ordered by size, then lexicographically.
    pub fn minimal_bridges(&self) -> &[LoopSet] {
        &self.minimal
    }

    pub fn is_minimal_bridge(&self, set: LoopSet) -> bool {
        self.minimal.binary_search(&set).is_ok()
    }

    /// Minimal bridges meeting the cut in more than one loop.
    pub fn multi_cut_bridges(&self) -> Vec<LoopSet> {
        self.minimal
            .iter()
            .copied()
            .filter(|b| b.intersection(self.cut.cut).len() != 1)
            .collect()
    }

    /// For each cut loop, the smallest size of a minimal bridge containing it.
    pub fn stratification(&self, model: &LinkModel) -> Result<BTreeMap<usize, usize>> {
        self.cut
            .cut
            .iter()
            .map(|l| {
                // Bridges are sorted by size, so the first hit is the smallest.
                match self.minimal.iter().find(|b| b.contains(l)) {
                    Some(b) => Ok((l, b.len())),
                    None => Err(Error::NonMinimalCut {
                        subsystem: self.cut.side.letters(),
                        loop_name: model.name(l).to_string(),
                    }),
                }
            })
            .collect()
    }
}
