use std::collections::BTreeMap;

use crate::link::{LinkModel, LoopCutResult, LoopSet};
use crate::{Error, LinearInequality, Result, TritString};

/// Loops grouped by their trit-string across the LHS min-cuts: coordinate
/// `l` is `+1` in the cut interior of term `l`, `0` in its cut and `-1` in
/// its exterior.
#[derive(Clone, Debug)]
pub struct TritPartition {
    cuts: Vec<LoopCutResult>,
    of_loop: Vec<TritString>,
    cells: BTreeMap<TritString, LoopSet>,
}

pub fn build_trit_partition(model: &LinkModel, ineq: &LinearInequality) -> Result<TritPartition> {
    if ineq.n() != model.n() {
        return Err(Error::PartyCountMismatch {
            expected: model.n(),
            found: ineq.n(),
        });
    }
    let cuts = ineq
        .lhs()
        .iter()
        .map(|t| model.link_min_cut(t.subsystem))
        .collect::<Result<Vec<_>>>()?;
    let of_loop: Vec<TritString> = (0..model.loop_count())
        .map(|i| {
            TritString::new(cuts.iter().map(|c| trit(c, i)).collect()).expect("values are trits")
        })
        .collect();
    let mut cells: BTreeMap<TritString, LoopSet> = BTreeMap::new();
    for (i, x) in of_loop.iter().enumerate() {
        cells.entry(x.clone()).or_default().insert(i);
    }
    let partition = TritPartition {
        cuts,
        of_loop,
        cells,
    };
    assert!(
        partition.reconstruction_holds(model),
        "cells fail to reconstruct the LHS cuts"
    );
    Ok(partition)
}

fn trit(cut: &LoopCutResult, loop_index: usize) -> i8 {
    if cut.interior.contains(loop_index) {
        1
    } else if cut.cut.contains(loop_index) {
        0
    } else {
        -1
    }
}

impl TritPartition {
    /// Number of LHS terms.
    pub fn l(&self) -> usize {
        self.cuts.len()
    }

    pub fn cuts(&self) -> &[LoopCutResult] {
        &self.cuts
    }

    pub fn cut(&self, term: usize) -> &LoopCutResult {
        &self.cuts[term]
    }

    /// Nonempty cells keyed by trit-string.
    pub fn cells(&self) -> &BTreeMap<TritString, LoopSet> {
        &self.cells
    }

    /// `W(x)`; empty when no loop carries `x`.
    pub fn cell(&self, x: &TritString) -> LoopSet {
        self.cells.get(x).copied().unwrap_or_default()
    }

    pub fn trits_of(&self, loop_index: usize) -> &TritString {
        &self.of_loop[loop_index]
    }

    /// Union of the cells whose coordinate `term` equals `value`.
    pub fn union_where(&self, term: usize, value: i8) -> LoopSet {
        self.cells
            .iter()
            .filter(|(x, _)| x.get(term) == value)
            .fold(LoopSet::EMPTY, |acc, (_, w)| acc.union(*w))
    }

    /// Cells are disjoint and cover every loop, and for every term the
    /// `+1`, `0` and `-1` cells rebuild the interior, cut and exterior.
    pub fn reconstruction_holds(&self, model: &LinkModel) -> bool {
        let mut covered = LoopSet::EMPTY;
        for w in self.cells.values() {
            if w.is_empty() || w.intersects(covered) {
                return false;
            }
            covered = covered.union(*w);
        }
        covered == model.all_loops()
            && self.cuts.iter().enumerate().all(|(l, c)| {
                self.union_where(l, 1) == c.interior
                    && self.union_where(l, 0) == c.cut
                    && self.union_where(l, -1) == c.exterior
            })
    }
}
