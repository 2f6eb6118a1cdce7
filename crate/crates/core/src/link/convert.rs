use super::{LinkModel, LinkingStructure, LoopSet, LoopWeight};
use crate::Hypergraph;

/// One infinite-weight loop per vertex and one loop per hyperedge, carrying
/// the hyperedge weight and Hopf-linked to the loop of each member vertex.
///
/// Vertex loops keep the vertex names; edge loops are named `e0, e1, ...`,
/// with underscores prepended when a vertex already uses that name.
pub fn hypergraph_to_link(h: &Hypergraph) -> LinkModel {
    let mut names: Vec<String> = h.vertex_names().to_vec();
    let mut prefix = String::from("e");
    while (0..h.edges().len()).any(|i| names.contains(&format!("{prefix}{i}"))) {
        prefix.insert(0, '_');
    }
    let vertices = names.len();
    let mut weights = vec![LoopWeight::Infinite; vertices];
    let mut atoms = Vec::new();
    for (i, e) in h.edges().iter().enumerate() {
        names.push(format!("{prefix}{i}"));
        weights.push(LoopWeight::Finite(e.weight.clone()));
        let edge_loop = vertices + i;
        atoms.extend(e.members.iter().map(|&v| LoopSet::from_indices([edge_loop, v])));
    }
    LinkModel::new(names, weights, h.external().to_vec(), LinkingStructure::Atoms(atoms))
        .expect("a valid hypergraph converts to a valid link")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::Hyperedge;
    use crate::rational::int;
    use crate::EntropyVector;

    fn names(list: &[&str]) -> Vec<String> {
        list.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn bell_pair_becomes_a_chain() {
        let h = Hypergraph::new(
            names(&["a", "o"]),
            vec![0, 1],
            vec![Hyperedge { members: vec![0, 1], weight: int(1) }],
        )
        .unwrap();
        let link = hypergraph_to_link(&h);
        assert_eq!(link.loop_count(), 3);
        assert_eq!(link.name(2), "e0");
        assert_eq!(
            link.structure(),
            &LinkingStructure::Atoms(vec![LoopSet::from_indices([0, 2]), LoopSet::from_indices([1, 2])])
        );
        assert_eq!(link.entropy_vector().unwrap().entries(), &[int(1)]);
    }

    #[test]
    fn unit_four_edge() {
        let h = Hypergraph::new(
            names(&["a", "b", "c", "o"]),
            vec![0, 1, 2, 3],
            vec![Hyperedge { members: vec![0, 1, 2, 3], weight: int(1) }],
        )
        .unwrap();
        let link = hypergraph_to_link(&h);
        assert_eq!(link.loop_count(), 5);
        assert_eq!(
            link.entropy_vector().unwrap(),
            EntropyVector::from_integers(3, &[1; 7]).unwrap()
        );
    }

    #[test]
    fn edge_names_avoid_vertex_names() {
        let h = Hypergraph::new(
            names(&["e0", "o"]),
            vec![0, 1],
            vec![Hyperedge { members: vec![0, 1], weight: int(0) }],
        )
        .unwrap();
        let link = hypergraph_to_link(&h);
        assert_eq!(link.name(2), "_e0");
        assert_eq!(link.entropy_vector().unwrap().entries(), &[int(0)]);
    }
}
