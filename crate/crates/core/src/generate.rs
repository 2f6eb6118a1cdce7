//! Seeded random models for property suites.
//!
//! External elements come first and are named by their party letters; the
//! purifier is the last of them. Everything else is internal.

use std::collections::BTreeSet;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Edge;
use crate::hypergraph::Hyperedge;
use crate::party::{Party, MAX_PARTIES};
use crate::rational::int;
use crate::{Error, Hypergraph, LinkModel, LinkingStructure, LoopSet, LoopWeight, Result, WeightedGraph};

/// Parameters for [`random_link`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkParams {
    pub parties: usize,
    pub loops: usize,
    pub atoms: usize,
    pub max_arity: usize,
    pub max_weight: u32,
    pub seed: u64,
}

impl LinkParams {
    pub fn new(parties: usize, loops: usize, atoms: usize, max_arity: usize, seed: u64) -> Self {
        LinkParams {
            parties,
            loops,
            atoms,
            max_arity,
            max_weight: 4,
            seed,
        }
    }
}

fn invalid(msg: String) -> Error {
    Error::InvalidModel(msg)
}

fn external_names(parties: usize) -> Vec<String> {
    (1..=parties + 1)
        .map(|i| Party::new(i, parties).expect("party in range").letter().to_string())
        .collect()
}

fn check_parties(parties: usize) -> Result<()> {
    if parties == 0 || parties > MAX_PARTIES {
        return Err(invalid(format!("parties must be in 1..={MAX_PARTIES}, got {parties}")));
    }
    Ok(())
}

/// Number of loop subsets of size `2..=max_arity` holding an internal loop.
fn atom_capacity(loops: usize, externals: usize, max_arity: usize) -> u128 {
    let binom = |n: usize, k: usize| -> u128 {
        if k > n {
            return 0;
        }
        (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
    };
    (2..=max_arity)
        .map(|s| binom(loops, s) - binom(externals, s))
        .sum()
}

/// A link with infinite-weight external loops `A, B, ..`, internal loops
/// `l1, l2, ..` weighted uniformly in `1..=max_weight`, and distinct atoms
/// of uniform size in `2..=max_arity`, each holding an internal loop.
pub fn random_link(p: &LinkParams) -> Result<LinkModel> {
    check_parties(p.parties)?;
    let externals = p.parties + 1;
    if p.loops < externals {
        return Err(invalid(format!("need at least {externals} loops, got {}", p.loops)));
    }
    if p.max_arity < 2 || p.max_arity > p.loops {
        return Err(invalid(format!("max arity must be in 2..={}, got {}", p.loops, p.max_arity)));
    }
    if p.max_weight == 0 {
        return Err(invalid("max weight must be positive".into()));
    }
    if (p.atoms as u128) > atom_capacity(p.loops, externals, p.max_arity) {
        return Err(invalid(format!(
            "only {} distinct atoms exist, {} requested",
            atom_capacity(p.loops, externals, p.max_arity),
            p.atoms
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut names = external_names(p.parties);
    names.extend((1..=p.loops - externals).map(|i| format!("l{i}")));
    let mut weights = vec![LoopWeight::Infinite; externals];
    weights.extend((externals..p.loops).map(|_| LoopWeight::Finite(int(rng.gen_range(1..=p.max_weight) as i64))));
    let ext_set = LoopSet::first(externals);
    let mut seen = BTreeSet::new();
    let mut atoms = Vec::with_capacity(p.atoms);
    while atoms.len() < p.atoms {
        let size = rng.gen_range(2..=p.max_arity);
        let atom: LoopSet = sample(&mut rng, p.loops, size).into_iter().collect();
        if !atom.is_subset(ext_set) && seen.insert(atom) {
            atoms.push(atom);
        }
    }
    LinkModel::new(names, weights, (0..externals).collect(), LinkingStructure::Atoms(atoms))
}

/// Parameters for [`random_hypergraph`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypergraphParams {
    pub parties: usize,
    pub vertices: usize,
    pub edges: usize,
    pub max_rank: usize,
    pub max_weight: u32,
    pub seed: u64,
}

/// A hypergraph on external vertices `A, B, ..` and internal `v1, v2, ..`
/// with hyperedges of uniform size in `2..=max_rank`. Repeated hyperedges
/// are allowed.
pub fn random_hypergraph(p: &HypergraphParams) -> Result<Hypergraph> {
    check_parties(p.parties)?;
    let externals = p.parties + 1;
    if p.vertices < externals {
        return Err(invalid(format!("need at least {externals} vertices, got {}", p.vertices)));
    }
    if p.max_rank < 2 || p.max_rank > p.vertices {
        return Err(invalid(format!("max rank must be in 2..={}, got {}", p.vertices, p.max_rank)));
    }
    if p.max_weight == 0 {
        return Err(invalid("max weight must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut names = external_names(p.parties);
    names.extend((1..=p.vertices - externals).map(|i| format!("v{i}")));
    let edges = (0..p.edges)
        .map(|_| {
            let size = rng.gen_range(2..=p.max_rank);
            let mut members = sample(&mut rng, p.vertices, size).into_vec();
            members.sort_unstable();
            Hyperedge {
                members,
                weight: int(rng.gen_range(1..=p.max_weight) as i64),
            }
        })
        .collect();
    Hypergraph::new(names, (0..externals).collect(), edges)
}

/// A graph: the rank-2 case of [`random_hypergraph`].
pub fn random_graph(parties: usize, vertices: usize, edges: usize, max_weight: u32, seed: u64) -> Result<WeightedGraph> {
    let h = random_hypergraph(&HypergraphParams {
        parties,
        vertices,
        edges,
        max_rank: 2,
        max_weight,
        seed,
    })?;
    let edges = h
        .edges()
        .iter()
        .map(|e| Edge {
            u: e.members[0],
            v: e.members[1],
            weight: e.weight.clone(),
        })
        .collect();
    WeightedGraph::new(h.vertex_names().to_vec(), h.external().to_vec(), edges)
}
