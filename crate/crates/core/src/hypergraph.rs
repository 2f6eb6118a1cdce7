//! Weighted-hypergraph min-cut entropies.
//!
//! A hyperedge is cut by a vertex set `W` when it has members both inside and
//! outside `W`. Entropies minimize the cut weight over all `W` containing the
//! subsystem's externals and no other external, by depth-first enumeration of
//! the internal vertices with branch-and-bound on the weight of hyperedges
//! already known to be cut.

use crate::graph::{check_externals, WeightedGraph};
use crate::party::PartySet;
use crate::rational::Scaled;
use crate::{EntropyVector, Error, Rational, Result, Subsystem};

pub const MAX_VERTICES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hyperedge {
    pub members: Vec<usize>,
    pub weight: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    names: Vec<String>,
    external: Vec<usize>,
    edges: Vec<Hyperedge>,
    masks: Vec<u64>,
    scaled: Scaled,
}

impl Hypergraph {
    pub fn new(names: Vec<String>, external: Vec<usize>, edges: Vec<Hyperedge>) -> Result<Self> {
        if names.len() > MAX_VERTICES {
            return Err(Error::TooLarge(format!(
                "{} vertices (at most {MAX_VERTICES})",
                names.len()
            )));
        }
        check_externals(names.len(), &external)?;
        let mut masks = Vec::with_capacity(edges.len());
        for e in &edges {
            let mut mask = 0u64;
            for &m in &e.members {
                if m >= names.len() {
                    return Err(Error::InvalidModel(format!("hyperedge member {m} does not exist")));
                }
                if mask >> m & 1 == 1 {
                    return Err(Error::InvalidModel(format!(
                        "hyperedge lists vertex {} twice",
                        names[m]
                    )));
                }
                mask |= 1 << m;
            }
            if mask.count_ones() < 2 {
                return Err(Error::InvalidModel("hyperedge with fewer than 2 members".into()));
            }
            masks.push(mask);
        }
        let scaled = Scaled::new(edges.iter().map(|e| &e.weight))?;
        Ok(Hypergraph {
            names,
            external,
            edges,
            masks,
            scaled,
        })
    }

    /// The rank-2 hypergraph with the same edges as `graph`.
    pub fn from_graph(graph: &WeightedGraph) -> Self {
        let edges = graph
            .edges()
            .iter()
            .map(|e| Hyperedge {
                members: vec![e.u, e.v],
                weight: e.weight.clone(),
            })
            .collect();
        Hypergraph::new(graph.vertex_names().to_vec(), graph.external().to_vec(), edges)
            .expect("a valid graph is a valid hypergraph")
    }

    pub fn n(&self) -> usize {
        self.external.len() - 1
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.names
    }

    pub fn external(&self) -> &[usize] {
        &self.external
    }

    pub fn edges(&self) -> &[Hyperedge] {
        &self.edges
    }

    /// Largest hyperedge size (0 without hyperedges).
    pub fn rank(&self) -> usize {
        self.masks.iter().map(|m| m.count_ones() as usize).max().unwrap_or(0)
    }

    /// Total weight of hyperedges split by the vertex set `subset`.
    pub fn cut_weight(&self, subset: &[usize]) -> Rational {
        let w = subset.iter().fold(0u64, |acc, &v| acc | 1 << v);
        self.scaled.unscale(self.cut_weight_mask(w))
    }

    fn cut_weight_mask(&self, w: u64) -> u128 {
        self.masks
            .iter()
            .zip(&self.scaled.numer)
            .filter(|(m, _)| *m & w != 0 && *m & !w != 0)
            .map(|(_, &x)| x as u128)
            .sum()
    }

    pub fn min_cut_value(&self, side: PartySet) -> Result<Rational> {
        let all = PartySet::first(self.external.len());
        if side.is_empty() || side == all || !side.is_subset(all) {
            return Err(Error::InvalidSubsystem(format!(
                "{side} is not a nonempty proper subset of the externals"
            )));
        }
        let mut inside = 0u64;
        let mut outside = 0u64;
        for (i, &v) in self.external.iter().enumerate() {
            if side.contains_index(i + 1) {
                inside |= 1 << v;
            } else {
                outside |= 1 << v;
            }
        }
        let internal: Vec<usize> = (0..self.names.len())
            .filter(|v| (inside | outside) >> v & 1 == 0)
            .collect();
        let mut best = u128::MAX;
        self.branch(&internal, inside, outside, &mut best);
        Ok(self.scaled.unscale(best))
    }

    /// Weight of hyperedges with members on both sides of a partial assignment.
    fn committed_cut(&self, inside: u64, outside: u64) -> u128 {
        self.masks
            .iter()
            .zip(&self.scaled.numer)
            .filter(|(m, _)| *m & inside != 0 && *m & outside != 0)
            .map(|(_, &x)| x as u128)
            .sum()
    }

    fn branch(&self, rest: &[usize], inside: u64, outside: u64, best: &mut u128) {
        let bound = self.committed_cut(inside, outside);
        if bound >= *best {
            return;
        }
        match rest.split_first() {
            None => *best = bound,
            Some((&v, rest)) => {
                self.branch(rest, inside | 1 << v, outside, best);
                self.branch(rest, inside, outside | 1 << v, best);
            }
        }
    }

    pub fn entropy(&self, subsystem: Subsystem) -> Result<Rational> {
        if !subsystem.set().is_subset(PartySet::first(self.n())) {
            return Err(Error::InvalidSubsystem(format!(
                "{subsystem} is not a subsystem of this {}-party model",
                self.n()
            )));
        }
        self.min_cut_value(subsystem.set())
    }

    pub fn entropy_vector(&self) -> Result<EntropyVector> {
        EntropyVector::try_from_fn(self.n(), |s| self.entropy(s))
    }
}

pub fn hypergraph_cut_weight(h: &Hypergraph, subset: &[usize]) -> Rational {
    h.cut_weight(subset)
}

pub fn hypergraph_entropy(h: &Hypergraph, subsystem: Subsystem) -> Result<Rational> {
    h.entropy(subsystem)
}

pub fn hypergraph_entropy_vector(h: &Hypergraph) -> Result<EntropyVector> {
    h.entropy_vector()
}
