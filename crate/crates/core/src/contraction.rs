//! Contraction maps `f: {0,1}^L -> {0,1}^R` certifying inequalities on graphs
//! (pairwise weighted-Hamming contraction) and on rank-`k` hypergraphs
//! (the all-equal indicator over `k`-tuples), with a backtracking search.

use std::collections::BTreeMap;
use std::fmt;

use crate::bits::BitString;
use crate::rational::Scaled;
use crate::{Error, LinearInequality, Result};

/// Largest `L` or `R` for which per-mask weight tables are built.
pub const MAX_TERMS: usize = 20;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ContractionMode {
    Graph,
    /// Rank-`k` hypergraphs, `k >= 2`.
    Hypergraph(usize),
}

impl fmt::Display for ContractionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ContractionMode::Graph => write!(f, "graph"),
            ContractionMode::Hypergraph(k) => write!(f, "hypergraph:{k}"),
        }
    }
}

/// A possibly partial map from LHS bitstrings to RHS bitstrings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateMap {
    l: usize,
    r: usize,
    assignment: BTreeMap<BitString, BitString>,
}

impl CandidateMap {
    pub fn new(l: usize, r: usize) -> Self {
        CandidateMap {
            l,
            r,
            assignment: BTreeMap::new(),
        }
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn insert(&mut self, x: BitString, y: BitString) -> Result<()> {
        if x.len() != self.l {
            return Err(Error::LengthMismatch {
                expected: self.l,
                found: x.len(),
            });
        }
        if y.len() != self.r {
            return Err(Error::LengthMismatch {
                expected: self.r,
                found: y.len(),
            });
        }
        self.assignment.insert(x, y);
        Ok(())
    }

    pub fn get(&self, x: BitString) -> Option<BitString> {
        self.assignment.get(&x).copied()
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn is_total(&self) -> bool {
        self.l < 64 && self.assignment.len() == 1 << self.l
    }

    pub fn iter(&self) -> impl Iterator<Item = (BitString, BitString)> + '_ {
        self.assignment.iter().map(|(x, y)| (*x, *y))
    }

    /// First bitstring without an image, in numeric order.
    fn first_missing(&self) -> Option<BitString> {
        (0..1u64 << self.l)
            .map(|b| BitString::new(self.l, b).expect("in range"))
            .find(|x| !self.assignment.contains_key(x))
    }
}

/// Why a total map fails to be a contraction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckOutcome {
    Valid,
    /// `f(x)` differs from the RHS occurrence string of the party with LHS
    /// occurrence string `x`.
    FixedPoint {
        party: char,
        x: BitString,
        expected: BitString,
        found: BitString,
    },
    /// Arguments (a pair, or up to `k` distinct strings) violating the condition.
    Violation(Vec<BitString>),
}

impl CheckOutcome {
    pub fn is_valid(&self) -> bool {
        matches!(self, CheckOutcome::Valid)
    }
}

/// Integer weight of every bit mask on both sides, over one common denominator.
struct Weights {
    alpha: Vec<u128>,
    beta: Vec<u128>,
}

impl Weights {
    fn new(ineq: &LinearInequality) -> Result<Self> {
        let (l, r) = (ineq.lhs_len(), ineq.rhs_len());
        if l > MAX_TERMS || r > MAX_TERMS {
            return Err(Error::TooLarge(format!(
                "contraction tables support at most {MAX_TERMS} terms per side"
            )));
        }
        let coefficients: Vec<_> = ineq.alphas().into_iter().chain(ineq.betas()).collect();
        let scaled = Scaled::new(coefficients.iter())?;
        let table = |c: &[u64]| -> Vec<u128> {
            let mut t = vec![0u128; 1 << c.len()];
            for m in 1..t.len() {
                let low = m.trailing_zeros() as usize;
                t[m] = t[m & (m - 1)] + c[low] as u128;
            }
            t
        };
        Ok(Weights {
            alpha: table(&scaled.numer[..l]),
            beta: table(&scaled.numer[l..]),
        })
    }

    /// Condition on a set of distinct arguments and their images: the
    /// coordinates where the arguments disagree outweigh those where the
    /// images disagree. For two arguments this is the norm contraction.
    fn holds(&self, xs: &[u64], ys: &[u64]) -> bool {
        let spread = |v: &[u64]| {
            let (or, and) = v.iter().fold((0u64, u64::MAX), |(o, a), &b| (o | b, a & b));
            (or ^ and) as usize
        };
        self.alpha[spread(xs)] >= self.beta[spread(ys)]
    }
}

fn check_shape(f: &CandidateMap, ineq: &LinearInequality) -> Result<()> {
    if f.l != ineq.lhs_len() || f.r != ineq.rhs_len() {
        return Err(Error::LengthMismatch {
            expected: ineq.lhs_len(),
            found: f.l,
        });
    }
    if let Some(x) = f.first_missing() {
        return Err(Error::PartialMap(format!("no image for {x}")));
    }
    Ok(())
}

fn check_fixed_points(f: &CandidateMap, ineq: &LinearInequality) -> Option<CheckOutcome> {
    ineq.occurrence_bitstrings().into_iter().find_map(|o| {
        let found = f.get(o.x).expect("total map");
        (found != o.y).then_some(CheckOutcome::FixedPoint {
            party: o.party.letter(),
            x: o.x,
            expected: o.y,
            found,
        })
    })
}

/// Pairwise check of `‖x - x'‖_α >= ‖f(x) - f(x')‖_β` plus the fixed points.
pub fn check_graph_contraction(f: &CandidateMap, ineq: &LinearInequality) -> Result<CheckOutcome> {
    check_rank(f, ineq, 2)
}

/// `i^k_α(x^1..x^k) >= i^k_β(f(x^1)..f(x^k))` over all `k`-tuples with
/// repetition, plus the fixed points. Repetition covers every rank up to `k`.
pub fn check_hypergraph_contraction(
    f: &CandidateMap,
    ineq: &LinearInequality,
    k: usize,
) -> Result<CheckOutcome> {
    if k < 2 {
        return Err(Error::InvalidModel(format!("hypergraph rank must be at least 2, got {k}")));
    }
    check_rank(f, ineq, k)
}

fn check_rank(f: &CandidateMap, ineq: &LinearInequality, k: usize) -> Result<CheckOutcome> {
    check_shape(f, ineq)?;
    if let Some(bad) = check_fixed_points(f, ineq) {
        return Ok(bad);
    }
    let weights = Weights::new(ineq)?;
    let xs: Vec<u64> = f.assignment.keys().map(|x| x.bits()).collect();
    let ys: Vec<u64> = f.assignment.values().map(|y| y.bits()).collect();
    // A k-tuple with repetition is determined by the set of its distinct
    // entries, so it suffices to visit subsets of size 2..=k.
    let mut chosen = Vec::with_capacity(k);
    let found = subsets_up_to(xs.len(), k, &mut chosen, &mut |idx| {
        let a: Vec<u64> = idx.iter().map(|&i| xs[i]).collect();
        let b: Vec<u64> = idx.iter().map(|&i| ys[i]).collect();
        !weights.holds(&a, &b)
    });
    Ok(match found {
        Some(idx) => CheckOutcome::Violation(
            idx.iter()
                .map(|&i| BitString::new(f.l, xs[i]).expect("in range"))
                .collect(),
        ),
        None => CheckOutcome::Valid,
    })
}

/// Visits index subsets of `0..count` with 2..=k elements in lexicographic
/// order, returning the first one for which `stop` is true.
fn subsets_up_to(
    count: usize,
    k: usize,
    chosen: &mut Vec<usize>,
    stop: &mut impl FnMut(&[usize]) -> bool,
) -> Option<Vec<usize>> {
    let start = chosen.last().map_or(0, |&i| i + 1);
    for i in start..count {
        chosen.push(i);
        if chosen.len() >= 2 && stop(chosen) {
            return Some(chosen.clone());
        }
        if chosen.len() < k {
            if let Some(hit) = subsets_up_to(count, k, chosen, stop) {
                return Some(hit);
            }
        }
        chosen.pop();
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(CandidateMap),
    /// Every consistent partial assignment was explored.
    NotFound,
    BudgetExceeded,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Examined nodes: the seeded root plus one per tried image of a free
    /// bitstring, consistent or not.
    pub nodes: u64,
    /// Deepest level reached, in assigned free bitstrings.
    pub max_depth: usize,
    /// Bitstrings not fixed by occurrence conditions.
    pub free_strings: usize,
}

/// Hamming weight, then lexicographic on the written string.
fn order_key(bits: u64, len: usize) -> (u32, Vec<bool>) {
    (bits.count_ones(), (0..len).map(|i| bits >> i & 1 == 1).collect())
}

/// Exhaustive backtracking for a contraction map. Bitstrings are assigned in
/// Hamming-weight order after the occurrence fixed points are seeded; an
/// image is accepted only if it satisfies the condition against every
/// already-assigned string. `budget` caps the number of examined nodes.
pub fn search_contraction_map(
    ineq: &LinearInequality,
    mode: ContractionMode,
    budget: Option<u64>,
) -> Result<(SearchOutcome, SearchStats)> {
    if budget == Some(0) {
        return Err(Error::InvalidBudget);
    }
    let k = match mode {
        ContractionMode::Graph => 2,
        ContractionMode::Hypergraph(k) if k >= 2 => k,
        ContractionMode::Hypergraph(k) => {
            return Err(Error::InvalidModel(format!("hypergraph rank must be at least 2, got {k}")))
        }
    };
    let (l, r) = (ineq.lhs_len(), ineq.rhs_len());
    let weights = Weights::new(ineq)?;

    let mut fixed: BTreeMap<u64, u64> = BTreeMap::new();
    let mut stats = SearchStats::default();
    for o in ineq.occurrence_bitstrings() {
        match fixed.insert(o.x.bits(), o.y.bits()) {
            Some(prev) if prev != o.y.bits() => return Ok((SearchOutcome::NotFound, stats)),
            _ => {}
        }
    }
    let mut order: Vec<u64> = (0..1u64 << l).filter(|x| !fixed.contains_key(x)).collect();
    order.sort_by_key(|&x| order_key(x, l));
    let mut values: Vec<u64> = (0..1u64 << r).collect();
    values.sort_by_key(|&y| order_key(y, r));
    stats.free_strings = order.len();

    let mut search = Search {
        weights: &weights,
        k,
        xs: fixed.keys().copied().collect(),
        ys: fixed.values().copied().collect(),
        order: &order,
        values: &values,
        budget,
        stats,
    };
    if !search.spend() {
        return Ok((SearchOutcome::BudgetExceeded, search.stats));
    }
    // The seeded fixed points must already be mutually consistent.
    let seeded = search.xs.len();
    let mut chosen = Vec::new();
    let clash = subsets_up_to(seeded, k, &mut chosen, &mut |idx| {
        let a: Vec<u64> = idx.iter().map(|&i| search.xs[i]).collect();
        let b: Vec<u64> = idx.iter().map(|&i| search.ys[i]).collect();
        !weights.holds(&a, &b)
    });
    if clash.is_some() {
        return Ok((SearchOutcome::NotFound, search.stats));
    }
    let outcome = match search.descend(0) {
        Step::Found => {
            let mut f = CandidateMap::new(l, r);
            for (&x, &y) in search.xs.iter().zip(&search.ys) {
                f.insert(BitString::new(l, x)?, BitString::new(r, y)?)?;
            }
            let verdict = check_rank(&f, ineq, k)?;
            assert!(verdict.is_valid(), "search returned an unverified map: {verdict:?}");
            SearchOutcome::Found(f)
        }
        Step::Exhausted => SearchOutcome::NotFound,
        Step::OutOfBudget => SearchOutcome::BudgetExceeded,
    };
    Ok((outcome, search.stats))
}

enum Step {
    Found,
    Exhausted,
    OutOfBudget,
}

struct Search<'a> {
    weights: &'a Weights,
    k: usize,
    xs: Vec<u64>,
    ys: Vec<u64>,
    order: &'a [u64],
    values: &'a [u64],
    budget: Option<u64>,
    stats: SearchStats,
}

impl Search<'_> {
    fn descend(&mut self, depth: usize) -> Step {
        self.stats.max_depth = self.stats.max_depth.max(depth);
        let Some(&x) = self.order.get(depth) else {
            return Step::Found;
        };
        for &y in self.values {
            if !self.spend() {
                return Step::OutOfBudget;
            }
            if self.consistent(x, y) {
                self.xs.push(x);
                self.ys.push(y);
                match self.descend(depth + 1) {
                    Step::Exhausted => {}
                    done => return done,
                }
                self.xs.pop();
                self.ys.pop();
            }
        }
        Step::Exhausted
    }

    /// Counts one examined node; false once the budget is exhausted.
    fn spend(&mut self) -> bool {
        self.stats.nodes += 1;
        self.budget.map_or(true, |b| self.stats.nodes <= b)
    }

    /// Checks every set made of `x` and at most `k - 1` assigned strings.
    fn consistent(&self, x: u64, y: u64) -> bool {
        let mut a = Vec::with_capacity(self.k);
        let mut b = Vec::with_capacity(self.k);
        self.extend(x, y, 0, &mut a, &mut b)
    }

    fn extend(&self, x: u64, y: u64, start: usize, a: &mut Vec<u64>, b: &mut Vec<u64>) -> bool {
        for i in start..self.xs.len() {
            a.push(self.xs[i]);
            b.push(self.ys[i]);
            a.push(x);
            b.push(y);
            let mut ok = self.weights.holds(a, b);
            a.pop();
            b.pop();
            if ok && a.len() + 1 < self.k {
                ok = self.extend(x, y, i + 1, a, b);
            }
            a.pop();
            b.pop();
            if !ok {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(l: usize, r: usize, pairs: &[(&str, &str)]) -> CandidateMap {
        let mut f = CandidateMap::new(l, r);
        for (x, y) in pairs {
            f.insert(x.parse().unwrap(), y.parse().unwrap()).unwrap();
        }
        f
    }

    #[test]
    fn subadditivity_or_map() {
        let sa = LinearInequality::subadditivity();
        let or = map(2, 1, &[("00", "0"), ("10", "1"), ("01", "1"), ("11", "1")]);
        assert!(check_graph_contraction(&or, &sa).unwrap().is_valid());
        assert!(check_hypergraph_contraction(&or, &sa, 3).unwrap().is_valid());
        let bad = map(2, 1, &[("00", "0"), ("10", "1"), ("01", "0"), ("11", "1")]);
        assert!(matches!(
            check_graph_contraction(&bad, &sa).unwrap(),
            CheckOutcome::FixedPoint { party: 'B', .. }
        ));
        let partial = map(2, 1, &[("00", "0")]);
        assert!(matches!(check_graph_contraction(&partial, &sa), Err(Error::PartialMap(_))));
    }

    #[test]
    fn ssa_and_or_map() {
        // LHS AB, BC; RHS B, ABC: f(x1, x2) = (x1 AND x2, x1 OR x2).
        let ssa = LinearInequality::strong_subadditivity();
        let f = map(2, 2, &[("00", "00"), ("10", "01"), ("01", "01"), ("11", "11")]);
        assert!(check_graph_contraction(&f, &ssa).unwrap().is_valid());
    }

    #[test]
    fn searches_find_verified_maps() {
        for (ineq, mode) in [
            (LinearInequality::subadditivity(), ContractionMode::Graph),
            (LinearInequality::subadditivity(), ContractionMode::Hypergraph(3)),
            (LinearInequality::strong_subadditivity(), ContractionMode::Graph),
            (LinearInequality::monogamy_of_mutual_information(), ContractionMode::Graph),
        ] {
            let (outcome, stats) = search_contraction_map(&ineq, mode, None).unwrap();
            let SearchOutcome::Found(f) = outcome else {
                panic!("no map for {ineq} in {mode} mode");
            };
            assert!(stats.nodes > 0);
            let k = match mode {
                ContractionMode::Graph => 2,
                ContractionMode::Hypergraph(k) => k,
            };
            assert!(check_hypergraph_contraction(&f, &ineq, k).unwrap().is_valid());
        }
    }

    #[test]
    fn invalid_inequality_has_no_map() {
        let wrong = LinearInequality::parse("S(AB) >= S(A) + S(B)", 2).unwrap();
        let (outcome, _) = search_contraction_map(&wrong, ContractionMode::Graph, None).unwrap();
        assert_eq!(outcome, SearchOutcome::NotFound);
    }

    #[test]
    fn budget_semantics() {
        let mmi = LinearInequality::monogamy_of_mutual_information();
        assert_eq!(
            search_contraction_map(&mmi, ContractionMode::Graph, Some(0)),
            Err(Error::InvalidBudget)
        );
        let (outcome, stats) = search_contraction_map(&mmi, ContractionMode::Graph, Some(1)).unwrap();
        assert_eq!(outcome, SearchOutcome::BudgetExceeded);
        assert_eq!(stats.nodes, 2);
    }
}
