//! Weighted-graph min-cut entropies.

use crate::maxflow::FlowNetwork;
use crate::party::{PartySet, MAX_PARTIES};
use crate::rational::Scaled;
use crate::{EntropyVector, Error, Rational, Result, Subsystem};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: Rational,
}

/// Undirected graph with nonnegative edge weights and `n + 1` external
/// vertices; `external[i - 1]` is the vertex of party `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGraph {
    names: Vec<String>,
    external: Vec<usize>,
    edges: Vec<Edge>,
    scaled: Scaled,
}

impl WeightedGraph {
    pub fn new(names: Vec<String>, external: Vec<usize>, edges: Vec<Edge>) -> Result<Self> {
        check_externals(names.len(), &external)?;
        for e in &edges {
            if e.u >= names.len() || e.v >= names.len() {
                return Err(Error::InvalidModel(format!(
                    "edge ({}, {}) has an unknown endpoint",
                    e.u, e.v
                )));
            }
            if e.u == e.v {
                return Err(Error::InvalidModel(format!(
                    "self-loop at vertex {}",
                    names[e.u]
                )));
            }
        }
        let scaled = Scaled::new(edges.iter().map(|e| &e.weight))?;
        Ok(WeightedGraph {
            names,
            external,
            edges,
            scaled,
        })
    }

    /// Party count `n` (externals minus the purifier).
    pub fn n(&self) -> usize {
        self.external.len() - 1
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.names
    }

    pub fn external(&self) -> &[usize] {
        &self.external
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Same graph with every weight multiplied by `factor`.
    pub fn scaled(&self, factor: &Rational) -> Result<Self> {
        let edges = self
            .edges
            .iter()
            .map(|e| Edge {
                weight: &e.weight * factor,
                ..e.clone()
            })
            .collect();
        WeightedGraph::new(self.names.clone(), self.external.clone(), edges)
    }

    /// Min-cut weight separating the externals of `side` (a nonempty proper
    /// subset of `[n + 1]`) from the remaining externals.
    pub fn min_cut_value(&self, side: PartySet) -> Result<Rational> {
        let all = PartySet::first(self.external.len());
        if side.is_empty() || side == all || !side.is_subset(all) {
            return Err(Error::InvalidSubsystem(format!(
                "{side} is not a nonempty proper subset of the externals"
            )));
        }
        // Node 0 is the merged source, node 1 the merged sink.
        let mut node = vec![usize::MAX; self.names.len()];
        let mut next = 2;
        for (i, &v) in self.external.iter().enumerate() {
            node[v] = if side.contains_index(i + 1) { 0 } else { 1 };
        }
        for slot in node.iter_mut().filter(|s| **s == usize::MAX) {
            *slot = next;
            next += 1;
        }
        let mut net = FlowNetwork::new(next);
        for (e, &w) in self.edges.iter().zip(&self.scaled.numer) {
            let (a, b) = (node[e.u], node[e.v]);
            if a != b && w > 0 {
                net.add_undirected(a, b, w as u128);
            }
        }
        Ok(self.scaled.unscale(net.max_flow(0, 1)))
    }

    pub fn entropy(&self, subsystem: Subsystem) -> Result<Rational> {
        self.check_subsystem(subsystem)?;
        self.min_cut_value(subsystem.set())
    }

    pub fn entropy_vector(&self) -> Result<EntropyVector> {
        EntropyVector::try_from_fn(self.n(), |s| self.entropy(s))
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
}

pub(crate) fn check_externals(vertex_count: usize, external: &[usize]) -> Result<()> {
    if external.len() < 2 || external.len() > MAX_PARTIES + 1 {
        return Err(Error::InvalidModel(format!(
            "need between 2 and {} external elements, got {}",
            MAX_PARTIES + 1,
            external.len()
        )));
    }
    for (i, &v) in external.iter().enumerate() {
        if v >= vertex_count {
            return Err(Error::InvalidModel(format!("external element {v} does not exist")));
        }
        if external[..i].contains(&v) {
            return Err(Error::InvalidModel(format!(
                "element {v} is labelled by two parties"
            )));
        }
    }
    Ok(())
}

pub fn graph_entropy(graph: &WeightedGraph, subsystem: Subsystem) -> Result<Rational> {
    graph.entropy(subsystem)
}

pub fn graph_entropy_vector(graph: &WeightedGraph) -> Result<EntropyVector> {
    graph.entropy_vector()
}
