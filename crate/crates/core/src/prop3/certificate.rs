use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::{CellTuple, OracularIndicatorTable, TritPartition};
use crate::error::Inconsistency;
use crate::link::{LinkModel, LoopSet};
use crate::{Error, Evaluation, LinearInequality, Rational, Result, TritString};

/// Exhaustive tuple checks are offered up to these sizes.
pub const MAX_EXHAUSTIVE_TERMS: usize = 4;
pub const MAX_EXHAUSTIVE_LOOPS: usize = 10;

/// `f`, one RHS trit-string per nonempty cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prop3Map {
    r: usize,
    values: BTreeMap<TritString, TritString>,
}

impl Prop3Map {
    pub fn new(r: usize, values: BTreeMap<TritString, TritString>) -> Result<Self> {
        if let Some(v) = values.values().find(|v| v.len() != r) {
            return Err(Error::LengthMismatch {
                expected: r,
                found: v.len(),
            });
        }
        Ok(Prop3Map { r, values })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn get(&self, x: &TritString) -> Option<&TritString> {
        self.values.get(x)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&TritString, &TritString)> {
        self.values.iter()
    }

    /// Replaces the value on one cell.
    pub fn set(&mut self, x: TritString, value: TritString) -> Result<()> {
        if value.len() != self.r {
            return Err(Error::LengthMismatch {
                expected: self.r,
                found: value.len(),
            });
        }
        self.values.insert(x, value);
        Ok(())
    }

    /// Union of the cells with `f(x)_r = value`.
    pub fn union_where(&self, partition: &TritPartition, r: usize, value: i8) -> LoopSet {
        self.values
            .iter()
            .filter(|(_, v)| v.get(r) == value)
            .fold(LoopSet::EMPTY, |acc, (x, _)| acc.union(partition.cell(x)))
    }
}

/// Fills in the `±1` entries of `f` from its zeros. The zero cells of term
/// `r` form `C_r`; each remaining block of the link goes inside when it
/// touches the externals of `J_r`, outside when it touches other externals.
/// A cell takes the sign of its attached blocks; a cell holding only
/// unattached loops gets `-1`, and unattached loops follow their cell, so an
/// unattached block must not span cells of both signs.
pub fn derive_rhs_assignment(
    model: &LinkModel,
    ineq: &LinearInequality,
    partition: &TritPartition,
    zeros: &BTreeMap<TritString, BTreeSet<usize>>,
) -> Result<Prop3Map> {
    let r_len = ineq.rhs_len();
    if let Some(&r) = zeros.values().flatten().find(|&&r| r >= r_len) {
        return Err(Error::LengthMismatch {
            expected: r_len,
            found: r + 1,
        });
    }
    let cells: Vec<(&TritString, LoopSet)> = partition.cells().iter().map(|(x, w)| (x, *w)).collect();
    let mut columns: Vec<Vec<i8>> = vec![Vec::with_capacity(r_len); cells.len()];
    for (r, term) in ineq.rhs().iter().enumerate() {
        let is_zero = |x: &TritString| zeros.get(x).is_some_and(|z| z.contains(&r));
        let cut = cells
            .iter()
            .filter(|(x, _)| is_zero(x))
            .fold(LoopSet::EMPTY, |acc, (_, w)| acc.union(*w));
        let fail = |reason| Error::Inconsistent { term: r, reason };
        if let Some(l) = cut.difference(model.cuttable_loops()).lowest() {
            return Err(fail(Inconsistency::UncuttableLoop(model.name(l).to_string())));
        }
        let side = term.subsystem.set();
        if !model.separates(side, cut)? {
            return Err(fail(Inconsistency::NotACut));
        }
        let inside = model.externals_of(side);
        let outside = model.external_loops().difference(inside);
        let (mut plus, mut minus, mut floating) = (LoopSet::EMPTY, LoopSet::EMPTY, Vec::new());
        for b in model.structure().blocks(model.all_loops().difference(cut)) {
            if b.intersects(inside) {
                plus = plus.union(b);
            } else if b.intersects(outside) {
                minus = minus.union(b);
            } else {
                floating.push(b);
            }
        }
        let mut signs = BTreeMap::new();
        for (i, (x, w)) in cells.iter().enumerate() {
            let value = if is_zero(x) {
                0
            } else {
                match (w.intersects(plus), w.intersects(minus)) {
                    (true, true) => return Err(fail(Inconsistency::StraddlingCell(x.to_string()))),
                    (true, false) => 1,
                    _ => -1,
                }
            };
            columns[i].push(value);
            for l in w.iter() {
                signs.insert(l, value);
            }
        }
        for b in floating {
            let mut seen = b.iter().map(|l| signs[&l]);
            let first = seen.next();
            if seen.any(|s| Some(s) != first) {
                return Err(fail(Inconsistency::StraddlingBlock(model.format_set(b))));
            }
        }
    }
    let values = cells
        .iter()
        .zip(columns)
        .map(|((x, _), col)| Ok(((*x).clone(), TritString::new(col)?)))
        .collect::<Result<_>>()?;
    Prop3Map::new(r_len, values)
}

/// Condition (1) for one RHS term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RhsCutReport {
    pub term: usize,
    pub cut: LoopSet,
    pub interior: LoopSet,
    pub exterior: LoopSet,
    pub failure: Option<Inconsistency>,
}

/// A tuple where condition (2) fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TupleViolation {
    pub n: usize,
    pub k: usize,
    pub tuple: CellTuple,
    pub lhs: Rational,
    pub rhs: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TupleCoverage {
    /// Support tuples, plus this many sampled tuples outside the support.
    Support { samples: usize, seed: u64 },
    /// Every tuple of distinct nonempty cells for every `3 <= n <= k <= |L|`.
    Exhaustive,
}

impl Default for TupleCoverage {
    fn default() -> Self {
        TupleCoverage::Support { samples: 64, seed: 0 }
    }
}

#[derive(Clone, Debug)]
pub struct CertificateReport {
    pub passed: bool,
    pub condition1: Vec<RhsCutReport>,
    pub violation: Option<TupleViolation>,
    pub tuples_checked: usize,
    /// `Σ α_l |C_l|` from the indicator's credited loops.
    pub lhs_cut_total: Rational,
    /// `Σ β_r |C_r|`, absent when some `C_r` holds an uncuttable loop.
    pub rhs_cut_total: Option<Rational>,
    /// `Σ β_r S(J_r)`.
    pub rhs_entropy_total: Rational,
    /// `Σ α_l |C_l| >= Σ β_r |C_r| >= Σ β_r S(J_r)`.
    pub weight_chain_holds: bool,
    pub direct: Evaluation,
    /// The certificate passed but the inequality fails on this model.
    pub soundness_gap: bool,
}

/// Checks `f` against both conditions on this one model. Because the
/// indicator depends on the model's cuts, a pass certifies the inequality
/// for `model` alone.
pub fn check_prop3_certificate(
    model: &LinkModel,
    ineq: &LinearInequality,
    partition: &TritPartition,
    table: &OracularIndicatorTable,
    f: &Prop3Map,
    coverage: &TupleCoverage,
) -> Result<CertificateReport> {
    if f.r() != ineq.rhs_len() {
        return Err(Error::LengthMismatch {
            expected: ineq.rhs_len(),
            found: f.r(),
        });
    }
    if let Some(x) = partition.cells().keys().find(|x| f.get(x).is_none()) {
        return Err(Error::UndefinedCell(x.to_string()));
    }
    let condition1: Vec<RhsCutReport> = (0..f.r())
        .map(|r| condition1_for(model, ineq, partition, f, r))
        .collect::<Result<_>>()?;
    let cond1 = condition1.iter().all(|c| c.failure.is_none());

    let alphas = ineq.alphas();
    let betas = ineq.betas();
    let eval = |n: usize, k: usize, tuple: &[TritString]| -> (Rational, Rational) {
        let mut lhs = Rational::zero();
        let mut count = Rational::zero();
        for (l, alpha) in alphas.iter().enumerate() {
            if table.value(l, n, k, tuple) {
                lhs += alpha;
                count += Rational::one();
            }
        }
        let fx = f.get(&tuple[0]).expect("tuples hold nonempty cells");
        let zero_weight: Rational = betas
            .iter()
            .enumerate()
            .filter(|(r, _)| fx.get(*r) == 0)
            .map(|(_, b)| b.clone())
            .sum();
        (lhs, zero_weight * count)
    };

    let mut tuples_checked = 0;
    let mut violation = None;
    let mut visit = |n: usize, k: usize, tuple: &CellTuple| -> bool {
        tuples_checked += 1;
        let (lhs, rhs) = eval(n, k, tuple);
        if lhs < rhs {
            violation = Some(TupleViolation {
                n,
                k,
                tuple: tuple.clone(),
                lhs,
                rhs,
            });
            return false;
        }
        true
    };
    let support = table.support();
    match coverage {
        TupleCoverage::Support { samples, seed } => {
            let mut go = true;
            for (n, k, tuple) in &support {
                go = visit(*n, *k, tuple);
                if !go {
                    break;
                }
            }
            if go {
                for (n, k, tuple) in sample_outside(partition, &support, model.loop_count(), *samples, *seed) {
                    let (lhs, rhs) = eval(n, k, &tuple);
                    assert!(
                        lhs.is_zero() && rhs.is_zero(),
                        "tuple outside the indicator support has a nonzero term"
                    );
                    if !visit(n, k, &tuple) {
                        break;
                    }
                }
            }
        }
        TupleCoverage::Exhaustive => {
            let (l_len, loops) = (ineq.lhs_len(), model.loop_count());
            if l_len > MAX_EXHAUSTIVE_TERMS || loops > MAX_EXHAUSTIVE_LOOPS {
                return Err(Error::TooLarge(format!(
                    "exhaustive tuple checks need L <= {MAX_EXHAUSTIVE_TERMS} and at most \
                     {MAX_EXHAUSTIVE_LOOPS} loops, got L = {l_len} and {loops} loops"
                )));
            }
            'all: for tuple in all_tuples(partition, loops) {
                for k in tuple.len()..=loops {
                    if !visit(tuple.len(), k, &tuple) {
                        break 'all;
                    }
                }
            }
        }
    }

    let lhs_cut_total = table.weighted_cut_total(model, &alphas)?;
    let rhs_cut_total = condition1
        .iter()
        .zip(&betas)
        .try_fold(Rational::zero(), |acc, (c, b)| model.weight_of(c.cut).ok().map(|w| acc + b * w));
    let rhs_entropy_total = ineq
        .rhs()
        .iter()
        .try_fold(Rational::zero(), |acc, t| Ok::<_, Error>(acc + &t.coefficient * model.entropy(t.subsystem)?))?;
    let weight_chain_holds = rhs_cut_total
        .as_ref()
        .is_some_and(|rc| lhs_cut_total >= *rc && *rc >= rhs_entropy_total);
    let direct = check_inequality_direct(model, ineq)?;
    let passed = cond1 && violation.is_none();
    Ok(CertificateReport {
        passed,
        condition1,
        violation,
        tuples_checked,
        lhs_cut_total,
        rhs_cut_total,
        rhs_entropy_total,
        weight_chain_holds,
        soundness_gap: passed && !direct.holds,
        direct,
    })
}

fn condition1_for(
    model: &LinkModel,
    ineq: &LinearInequality,
    partition: &TritPartition,
    f: &Prop3Map,
    r: usize,
) -> Result<RhsCutReport> {
    let cut = f.union_where(partition, r, 0);
    let interior = f.union_where(partition, r, 1);
    let exterior = f.union_where(partition, r, -1);
    let side = ineq.rhs()[r].subsystem.set();
    let inside = model.externals_of(side);
    let failure = if let Some(l) = cut.difference(model.cuttable_loops()).lowest() {
        Some(Inconsistency::UncuttableLoop(model.name(l).to_string()))
    } else if !model.separates(side, cut)? {
        Some(Inconsistency::NotACut)
    } else if interior.intersection(model.external_loops()) != inside {
        Some(Inconsistency::ExternalMismatch)
    } else {
        model
            .structure()
            .blocks(model.all_loops().difference(cut))
            .into_iter()
            .find(|b| b.intersects(interior) && b.intersects(exterior))
            .map(|b| Inconsistency::StraddlingBlock(model.format_set(b)))
    };
    Ok(RhsCutReport {
        term: r,
        cut,
        interior,
        exterior,
        failure,
    })
}

/// Every canonical tuple: any cell first, then a sorted set of other cells,
/// with `3 <= n <= |L|`.
fn all_tuples(partition: &TritPartition, loops: usize) -> Vec<CellTuple> {
    let keys: Vec<&TritString> = partition.cells().keys().collect();
    let mut out = Vec::new();
    for n in 3..=keys.len().min(loops) {
        for first in 0..keys.len() {
            let others: Vec<usize> = (0..keys.len()).filter(|&i| i != first).collect();
            for rest in combinations(&others, n - 1) {
                let mut tuple = vec![keys[first].clone()];
                tuple.extend(rest.iter().map(|&i| keys[i].clone()));
                out.push(tuple);
            }
        }
    }
    out
}

fn combinations(items: &[usize], size: usize) -> Vec<Vec<usize>> {
    fn go(items: &[usize], size: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            go(items, size, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(items, size, 0, &mut Vec::new(), &mut out);
    out
}

/// Random canonical tuples outside the support.
fn sample_outside(
    partition: &TritPartition,
    support: &BTreeSet<(usize, usize, CellTuple)>,
    loops: usize,
    samples: usize,
    seed: u64,
) -> Vec<(usize, usize, CellTuple)> {
    let keys: Vec<&TritString> = partition.cells().keys().collect();
    let max_n = keys.len().min(loops);
    if max_n < 3 {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(samples);
    // Bounded retries keep small supports that fill the space from looping.
    for _ in 0..samples.saturating_mul(8) {
        if out.len() == samples {
            break;
        }
        let n = rng.gen_range(3..=max_n);
        let k = rng.gen_range(n..=loops);
        let mut picked = sample(&mut rng, keys.len(), n).into_vec();
        let first = picked.remove(0);
        picked.sort_unstable();
        let mut tuple = vec![keys[first].clone()];
        tuple.extend(picked.iter().map(|&i| keys[i].clone()));
        let key = (n, k, tuple);
        if !support.contains(&key) {
            out.push(key);
        }
    }
    out
}

/// Evaluates the inequality on the model's entropies.
pub fn check_inequality_direct(model: &LinkModel, ineq: &LinearInequality) -> Result<Evaluation> {
    if ineq.n() != model.n() {
        return Err(Error::PartyCountMismatch {
            expected: model.n(),
            found: ineq.n(),
        });
    }
    ineq.evaluate_with(|s| model.entropy(s))
}

impl CertificateReport {
    pub fn to_json(&self, model: &LinkModel) -> Value {
        let names = |s: LoopSet| -> Vec<String> { model.set_names(s).iter().map(|n| n.to_string()).collect() };
        let cond1: Vec<Value> = self
            .condition1
            .iter()
            .map(|c| {
                json!({
                    "term": c.term,
                    "cut": names(c.cut),
                    "interior": names(c.interior),
                    "exterior": names(c.exterior),
                    "failure": c.failure.as_ref().map(|f| f.to_string()),
                })
            })
            .collect();
        let violation = self.violation.as_ref().map(|v| {
            json!({
                "n": v.n,
                "k": v.k,
                "tuple": v.tuple.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "lhs": v.lhs.to_string(),
                "rhs": v.rhs.to_string(),
            })
        });
        json!({
            "passed": self.passed,
            "condition1": cond1,
            "violation": violation,
            "tuples_checked": self.tuples_checked,
            "lhs_cut_total": self.lhs_cut_total.to_string(),
            "rhs_cut_total": self.rhs_cut_total.as_ref().map(|r| r.to_string()),
            "rhs_entropy_total": self.rhs_entropy_total.to_string(),
            "weight_chain_holds": self.weight_chain_holds,
            "direct": self.direct.to_string(),
            "soundness_gap": self.soundness_gap,
        })
    }
}
