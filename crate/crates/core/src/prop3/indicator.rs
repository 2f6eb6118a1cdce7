use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use serde_json::{json, Value};

use super::TritPartition;
use crate::link::{BridgeScan, LinkModel, LoopSet};
use crate::{Error, Rational, Result, TritString};

/// A tuple of distinct nonempty cells: `x^1` first, the rest sorted.
pub type CellTuple = Vec<TritString>;

/// One indicator value set to 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndicatorEntry {
    pub term: usize,
    pub n: usize,
    pub k: usize,
    pub tuple: CellTuple,
    /// Loops turned green by this entry.
    pub credited: LoopSet,
    /// The bridge that credited the first of them.
    pub bridge: LoopSet,
}

/// A bridge seen by the scan that meets the cut in more than one loop.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct LemmaViolation {
    pub term: usize,
    pub bridge: LoopSet,
    pub cut_loops: LoopSet,
}

/// Where each cut loop was credited, per LHS term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Credit {
    pub n: usize,
    pub k: usize,
}

#[derive(Clone, Debug)]
pub struct OracularIndicatorTable {
    entries: Vec<IndicatorEntry>,
    index: BTreeMap<(usize, usize, usize, CellTuple), usize>,
    credits: Vec<BTreeMap<usize, Credit>>,
    lemma_violations: Vec<LemmaViolation>,
}

/// Builds `F_l^{(n,k)}` for every LHS term. For each term, cut loops start
/// gray; `k` rises from 3 while gray loops remain, `n` runs over `3..=k`, and
/// tuples `(x^1, ..)` with `x^1_l = 0` are visited in canonical order. A
/// minimal bridge of size `k` covered minimally by the tuple's cells (each
/// cell meets it) credits a gray loop of `B ∩ W(x^1)`, which turns green and
/// sets the entry.
///
/// Tuples hold distinct nonempty cells only. When `B ∩ W(x^1)` holds several
/// gray loops the lowest index is credited. Bridges meeting the cut more than
/// once are recorded as lemma violations rather than aborting the scan.
pub fn compute_oracular_indicator(
    model: &LinkModel,
    partition: &TritPartition,
) -> Result<OracularIndicatorTable> {
    let mut table = OracularIndicatorTable {
        entries: Vec::new(),
        index: BTreeMap::new(),
        credits: Vec::new(),
        lemma_violations: Vec::new(),
    };
    let cells: Vec<(&TritString, LoopSet)> = partition.cells().iter().map(|(x, w)| (x, *w)).collect();
    for term in 0..partition.l() {
        let cut = partition.cut(term).clone();
        let scan = BridgeScan::new(model, cut.clone())?;
        let mut gray = cut.cut;
        let mut credits = BTreeMap::new();
        let mut violations = BTreeSet::new();
        let mut k = 3;
        while !gray.is_empty() && k <= model.loop_count() {
            // Each bridge fixes its minimal cover: the cells it meets. Sorting
            // by (n, x^1, rest, B) replays the nested loop order.
            let mut visits: Vec<(usize, usize, Vec<usize>, LoopSet)> = Vec::new();
            for &b in scan.minimal_bridges().iter().filter(|b| b.len() == k) {
                if b.intersection(cut.cut).len() != 1 {
                    violations.insert(b);
                }
                let met: Vec<usize> = (0..cells.len()).filter(|&i| cells[i].1.intersects(b)).collect();
                for &first in met.iter().filter(|&&i| cells[i].0.get(term) == 0) {
                    let rest = met.iter().copied().filter(|&i| i != first).collect();
                    visits.push((met.len(), first, rest, b));
                }
            }
            visits.sort();
            for (n, first, rest, b) in visits {
                let Some(l) = b.intersection(cells[first].1).intersection(gray).lowest() else {
                    continue;
                };
                gray.remove(l);
                credits.insert(l, Credit { n, k });
                let mut tuple: CellTuple = vec![cells[first].0.clone()];
                tuple.extend(rest.iter().map(|&i| cells[i].0.clone()));
                table.set(term, n, k, tuple, l, b);
            }
            k += 1;
        }
        if !gray.is_empty() {
            return Err(Error::GrayLoopsRemain {
                term,
                loops: model.set_names(gray).iter().map(|s| s.to_string()).collect(),
            });
        }
        table.credits.push(credits);
        table.lemma_violations.extend(violations.into_iter().map(|bridge| LemmaViolation {
            term,
            bridge,
            cut_loops: bridge.intersection(cut.cut),
        }));
    }
    Ok(table)
}

impl OracularIndicatorTable {
    fn set(&mut self, term: usize, n: usize, k: usize, tuple: CellTuple, credited: usize, bridge: LoopSet) {
        let key = (term, n, k, tuple);
        match self.index.get(&key) {
            Some(&i) => self.entries[i].credited.insert(credited),
            None => {
                self.index.insert(key.clone(), self.entries.len());
                self.entries.push(IndicatorEntry {
                    term,
                    n,
                    k,
                    tuple: key.3,
                    credited: LoopSet::singleton(credited),
                    bridge,
                });
            }
        }
    }

    /// Entries with value 1, in the order they were set.
    pub fn entries(&self) -> &[IndicatorEntry] {
        &self.entries
    }

    /// `F_term^{(n,k)}(tuple)`.
    pub fn value(&self, term: usize, n: usize, k: usize, tuple: &[TritString]) -> bool {
        self.index.contains_key(&(term, n, k, tuple.to_vec()))
    }

    /// Distinct `(n, k, tuple)` keys with some nonzero term.
    pub fn support(&self) -> BTreeSet<(usize, usize, CellTuple)> {
        self.entries
            .iter()
            .map(|e| (e.n, e.k, e.tuple.clone()))
            .collect()
    }

    /// Cut loop to the `(n, k)` stratum that credited it, for one term.
    pub fn credits(&self, term: usize) -> &BTreeMap<usize, Credit> {
        &self.credits[term]
    }

    pub fn lemma_violations(&self) -> &[LemmaViolation] {
        &self.lemma_violations
    }

    /// `Σ_l α_l |C_l|` summed stratum by stratum over the credited loops.
    pub fn weighted_cut_total(&self, model: &LinkModel, alphas: &[Rational]) -> Result<Rational> {
        let mut total = Rational::zero();
        for (term, credits) in self.credits.iter().enumerate() {
            let loops: LoopSet = credits.keys().copied().collect();
            total += &alphas[term] * model.weight_of(loops)?;
        }
        Ok(total)
    }

    /// The same total in cell form, `Σ_l α_l Σ F · |W(x^1)|`. It exceeds the
    /// stratum sum when a cell holds several cut loops credited by
    /// different tuples, or loops outside the cut.
    pub fn weighted_cell_total(
        &self,
        model: &LinkModel,
        partition: &TritPartition,
        alphas: &[Rational],
    ) -> Result<Rational> {
        let mut total = Rational::zero();
        for e in &self.entries {
            total += &alphas[e.term] * model.weight_of(partition.cell(&e.tuple[0]))?;
        }
        Ok(total)
    }

    /// Entries breaking the bit conditions every genuine entry satisfies:
    /// `x^1_l = 0`, `Σ_i |x^i_l| = n - 1` and `|Σ_i x^i_l| <= n - 3`.
    pub fn bit_condition_failures(&self) -> Vec<&IndicatorEntry> {
        self.entries
            .iter()
            .filter(|e| {
                let column: Vec<i64> = e.tuple.iter().map(|x| x.get(e.term) as i64).collect();
                let abs: i64 = column.iter().map(|v| v.abs()).sum();
                let signed: i64 = column.iter().sum();
                column[0] != 0 || abs != e.n as i64 - 1 || signed.abs() > e.n as i64 - 3
            })
            .collect()
    }

    pub fn to_json(&self, model: &LinkModel) -> Value {
        let names = |s: LoopSet| -> Vec<String> { model.set_names(s).iter().map(|n| n.to_string()).collect() };
        let entries: Vec<Value> = self
            .entries
            .iter()
            .map(|e| {
                json!({
                    "term": e.term,
                    "n": e.n,
                    "k": e.k,
                    "tuple": e.tuple.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                    "credited": names(e.credited),
                    "bridge": names(e.bridge),
                })
            })
            .collect();
        let violations: Vec<Value> = self
            .lemma_violations
            .iter()
            .map(|v| {
                json!({
                    "term": v.term,
                    "bridge": names(v.bridge),
                    "cut_loops": names(v.cut_loops),
                })
            })
            .collect();
        json!({ "entries": entries, "lemma_violations": violations })
    }
}
