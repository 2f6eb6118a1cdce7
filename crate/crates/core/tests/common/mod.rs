//! Brute-force oracles shared by the integration tests. They use only the
//! raw model data (atoms, weights, externals) and never call the solvers
//! they check.
#![allow(dead_code)]

use std::collections::BTreeMap;

use linkcone::contraction::CandidateMap;
use linkcone::generate::{random_link, LinkParams};
use linkcone::party::all_subsystems;
use linkcone::prop3::{Prop3Map, TritPartition};
use linkcone::rational::int;
use linkcone::{
    BitString, Hypergraph, LinearInequality, LinkModel, LinkingStructure, PartySet, Rational, TritString,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn atoms_of(m: &LinkModel) -> Vec<u64> {
    match m.structure() {
        LinkingStructure::Atoms(a) => a.iter().map(|s| s.bits()).collect(),
        LinkingStructure::Table(_) => panic!("oracles expect atom structures"),
    }
}

/// Connected components of `set` under the atoms it fully contains.
pub fn components(atoms: &[u64], set: u64) -> Vec<u64> {
    let inside: Vec<u64> = atoms.iter().copied().filter(|a| a & !set == 0).collect();
    let mut parent: Vec<usize> = (0..64).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for a in &inside {
        let first = a.trailing_zeros() as usize;
        for i in 0..64 {
            if a >> i & 1 == 1 {
                let (x, y) = (find(&mut parent, first), find(&mut parent, i));
                parent[x] = y;
            }
        }
    }
    let mut comps: BTreeMap<usize, u64> = BTreeMap::new();
    for i in 0..64 {
        if set >> i & 1 == 1 {
            let r = find(&mut parent, i);
            *comps.entry(r).or_default() |= 1 << i;
        }
    }
    comps.into_values().collect()
}

pub fn connected(atoms: &[u64], set: u64) -> bool {
    set != 0 && components(atoms, set).len() == 1
}

fn finite_weight(m: &LinkModel, i: usize) -> Option<Rational> {
    m.weights()[i].finite().cloned()
}

fn externals_bits(m: &LinkModel, side: PartySet) -> u64 {
    side.indices().map(|p| 1u64 << m.external()[p - 1]).fold(0, |a, b| a | b)
}

pub fn all_externals(m: &LinkModel) -> u64 {
    m.external().iter().map(|&e| 1u64 << e).fold(0, |a, b| a | b)
}

pub fn cuttable(m: &LinkModel) -> u64 {
    let ext = all_externals(m);
    (0..m.loop_count())
        .filter(|&i| ext >> i & 1 == 0 && finite_weight(m, i).is_some())
        .map(|i| 1u64 << i)
        .fold(0, |a, b| a | b)
}

/// `cut` leaves no component touching the side's externals and others.
pub fn separates(m: &LinkModel, side: PartySet, cut: u64) -> bool {
    let atoms = atoms_of(m);
    let all = (1u64 << m.loop_count()) - 1;
    let inside = externals_bits(m, side);
    let outside = all_externals(m) & !inside;
    components(&atoms, all & !cut)
        .iter()
        .all(|c| c & inside == 0 || c & outside == 0)
}

pub fn weight(m: &LinkModel, set: u64) -> Rational {
    (0..m.loop_count())
        .filter(|&i| set >> i & 1 == 1)
        .map(|i| finite_weight(m, i).expect("finite"))
        .fold(int(0), |a, b| a + b)
}

/// Minimum cut weight by enumerating every subset of cuttable loops.
pub fn link_min_cut(m: &LinkModel, side: PartySet) -> Option<Rational> {
    let cand = cuttable(m);
    let mut best: Option<Rational> = None;
    let mut sub = cand;
    loop {
        if separates(m, side, sub) {
            let w = weight(m, sub);
            if best.as_ref().map_or(true, |b| w < *b) {
                best = Some(w);
            }
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & cand;
    }
    best
}

pub fn link_entropy_vector(m: &LinkModel) -> Vec<Rational> {
    all_subsystems(m.n())
        .into_iter()
        .map(|s| link_min_cut(m, s.set()).expect("cuttable"))
        .collect()
}

/// Interior loops of `cut` for `side`.
pub fn interior(m: &LinkModel, side: PartySet, cut: u64) -> u64 {
    let atoms = atoms_of(m);
    let all = (1u64 << m.loop_count()) - 1;
    let inside = externals_bits(m, side);
    components(&atoms, all & !cut)
        .into_iter()
        .filter(|c| c & inside != 0)
        .fold(0, |a, b| a | b)
}

pub fn is_bridge(m: &LinkModel, cut: u64, inner: u64, outer: u64, set: u64) -> bool {
    set & cut != 0 && set & inner != 0 && set & outer != 0 && connected(&atoms_of(m), set)
}

/// Minimal bridges by testing every subset and all of its proper subsets.
pub fn minimal_bridges(m: &LinkModel, cut: u64, inner: u64, outer: u64) -> Vec<u64> {
    let all = (1u64 << m.loop_count()) - 1;
    (1..=all)
        .filter(|&s| is_bridge(m, cut, inner, outer, s))
        .filter(|&s| {
            let mut sub = (s - 1) & s;
            while sub != 0 {
                if is_bridge(m, cut, inner, outer, sub) {
                    return false;
                }
                sub = (sub - 1) & s;
            }
            true
        })
        .collect()
}

/// Hypergraph entropy by enumerating every side assignment of internal vertices.
pub fn hypergraph_min_cut(h: &Hypergraph, side: PartySet) -> Rational {
    let names = h.vertex_names().len();
    let external = h.external();
    let internal: Vec<usize> = (0..names).filter(|v| !external.contains(v)).collect();
    let base: u64 = side.indices().map(|p| 1u64 << external[p - 1]).fold(0, |a, b| a | b);
    let mut best: Option<Rational> = None;
    for mask in 0u64..1 << internal.len() {
        let mut s = base;
        for (j, &v) in internal.iter().enumerate() {
            if mask >> j & 1 == 1 {
                s |= 1 << v;
            }
        }
        let w = h
            .edges()
            .iter()
            .filter(|e| {
                let ins = e.members.iter().filter(|&&v| s >> v & 1 == 1).count();
                ins != 0 && ins != e.members.len()
            })
            .fold(int(0), |a, e| a + &e.weight);
        if best.as_ref().map_or(true, |b| w < *b) {
            best = Some(w);
        }
    }
    best.expect("at least one assignment")
}

pub fn hypergraph_entropy_vector(h: &Hypergraph) -> Vec<Rational> {
    all_subsystems(h.n())
        .into_iter()
        .map(|s| hypergraph_min_cut(h, s.set()))
        .collect()
}

/// Occurrence strings per party `1..=n+1`, the purifier last.
pub fn occurrences(ineq: &LinearInequality) -> Vec<(BitString, BitString)> {
    let string = |terms: &[linkcone::Term], p: usize| {
        BitString::from_bools(&terms.iter().map(|t| t.subsystem.set().contains_index(p)).collect::<Vec<_>>())
            .unwrap()
    };
    (1..=ineq.n() + 1)
        .map(|p| (string(ineq.lhs(), p), string(ineq.rhs(), p)))
        .collect()
}

/// Checks a total map: occurrence fixed points, and for every set of 2 to
/// `k` distinct strings the weight of LHS coordinates where they disagree
/// is at least that of RHS coordinates where their images disagree.
pub fn contraction_holds(f: &CandidateMap, ineq: &LinearInequality, k: usize) -> bool {
    let (l, r) = (ineq.lhs_len(), ineq.rhs_len());
    let alphas = ineq.alphas();
    let betas = ineq.betas();
    for (x, y) in occurrences(ineq) {
        if f.get(x) != Some(y) {
            return false;
        }
    }
    let strings: Vec<u64> = (0..1u64 << l).collect();
    let image = |x: u64| f.get(BitString::new(l, x).unwrap()).expect("total").bits();
    let disagree = |vals: &[u64], len: usize, coef: &[Rational]| {
        (0..len)
            .filter(|&c| {
                let first = vals[0] >> c & 1;
                vals.iter().any(|v| v >> c & 1 != first)
            })
            .fold(int(0), |a, c| a + &coef[c])
    };
    let mut chosen = Vec::new();
    fn rec(
        strings: &[u64],
        start: usize,
        k: usize,
        chosen: &mut Vec<u64>,
        test: &mut dyn FnMut(&[u64]) -> bool,
    ) -> bool {
        if chosen.len() >= 2 && !test(chosen) {
            return false;
        }
        if chosen.len() == k {
            return true;
        }
        for i in start..strings.len() {
            chosen.push(strings[i]);
            let ok = rec(strings, i + 1, k, chosen, test);
            chosen.pop();
            if !ok {
                return false;
            }
        }
        true
    }
    let mut test = |xs: &[u64]| {
        let ys: Vec<u64> = xs.iter().map(|&x| image(x)).collect();
        disagree(xs, l, &alphas) >= disagree(&ys, r, &betas)
    };
    rec(&strings, 0, k, &mut chosen, &mut test)
}

/// Parameters of the seeded link suite: three parties, six to ten loops,
/// up to eight atoms of arity at most four.
pub fn suite_params(seed: u64) -> LinkParams {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let loops = rng.gen_range(6..=10);
    let max_arity = rng.gen_range(2..=4);
    let mut p = LinkParams::new(3, loops, rng.gen_range(0..=8), max_arity, seed);
    p.max_weight = 4;
    p
}

pub fn suite_model(seed: u64) -> LinkModel {
    random_link(&suite_params(seed)).unwrap()
}

/// All SA instances `S(X) + S(Y) >= S(XY)` over disjoint nonempty X, Y.
pub fn sa_instances(n: usize) -> Vec<LinearInequality> {
    let subs = all_subsystems(n);
    let mut out = Vec::new();
    for x in &subs {
        for y in &subs {
            if x.set().bits() < y.set().bits() && x.set().is_disjoint(y.set()) {
                out.push(LinearInequality::subadditivity_instance(n, *x, *y).unwrap());
            }
        }
    }
    out
}

/// All SSA instances over pairwise disjoint nonempty X, Y, Z (X before Z).
pub fn ssa_instances(n: usize) -> Vec<LinearInequality> {
    let subs = all_subsystems(n);
    let mut out = Vec::new();
    for x in &subs {
        for y in &subs {
            for z in &subs {
                let (a, b, c) = (x.set(), y.set(), z.set());
                if a.bits() < c.bits() && a.is_disjoint(b) && b.is_disjoint(c) && a.is_disjoint(c) {
                    out.push(LinearInequality::strong_subadditivity_instance(n, *x, *y, *z).unwrap());
                }
            }
        }
    }
    out
}

pub fn single(letters: &str, n: usize) -> LinearInequality {
    LinearInequality::parse(&format!("S({letters}) >= S({letters})"), n).unwrap()
}

/// The SA certificate built by hand from the two LHS cuts: cells in either
/// cut go to zero, cells in either interior to `+1`, the rest to `-1`.
pub fn sa_certificate(partition: &TritPartition) -> Prop3Map {
    let values = partition
        .cells()
        .keys()
        .map(|x| {
            let v = if x.trits().contains(&0) {
                0
            } else if x.trits().contains(&1) {
                1
            } else {
                -1
            };
            (x.clone(), TritString::new(vec![v]).unwrap())
        })
        .collect();
    Prop3Map::new(1, values).unwrap()
}
