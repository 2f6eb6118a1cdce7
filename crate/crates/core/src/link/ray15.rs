use super::{LinkModel, LinkingStructure, LoopSet, LoopWeight};
use crate::rational::int;

/// Ten-loop reconstruction of the five-party link whose entropy vector no
/// hypergraph realizes. Externals `A..F` (`F` purifies) are indices 0..6,
/// then `w2` (weight 2) and `u1, u2, u3` (weight 1). Six Brunnian triples
/// each join one external loop to `w2` and one of the `u` loops.
pub fn ray15_link() -> LinkModel {
    let names = ["A", "B", "C", "D", "E", "F", "w2", "u1", "u2", "u3"];
    let mut weights = vec![LoopWeight::Infinite; 6];
    weights.push(LoopWeight::Finite(int(2)));
    weights.extend(std::iter::repeat(LoopWeight::Finite(int(1))).take(3));
    let (w2, u1, u2, u3) = (6, 7, 8, 9);
    let pairs = [(0, u1), (1, u1), (3, u2), (4, u2), (2, u3), (5, u3)];
    let atoms = pairs
        .iter()
        .map(|&(ext, u)| LoopSet::from_indices([ext, u, w2]))
        .collect();
    LinkModel::new(
        names.iter().map(|s| s.to_string()).collect(),
        weights,
        (0..6).collect(),
        LinkingStructure::Atoms(atoms),
    )
    .expect("the built-in model is valid")
}
