mod common;

use linkcone::contraction::{
    check_graph_contraction, check_hypergraph_contraction, search_contraction_map, ContractionMode, SearchOutcome,
};
use linkcone::{LinearInequality, Subsystem};

fn sub(t: &str, n: usize) -> Subsystem {
    Subsystem::parse(t, n).unwrap()
}

#[test]
fn found_maps_pass_the_brute_force_check() {
    let sa = LinearInequality::subadditivity();
    let ssa = LinearInequality::strong_subadditivity();
    let mmi = LinearInequality::monogamy_of_mutual_information();
    let sa4 = LinearInequality::subadditivity_instance(4, sub("AB", 4), sub("CD", 4)).unwrap();
    for (ineq, mode, k) in [
        (&sa, ContractionMode::Graph, 2),
        (&sa, ContractionMode::Hypergraph(3), 3),
        (&ssa, ContractionMode::Graph, 2),
        (&mmi, ContractionMode::Graph, 2),
        (&sa4, ContractionMode::Hypergraph(4), 4),
    ] {
        let (outcome, _) = search_contraction_map(ineq, mode, None).unwrap();
        let SearchOutcome::Found(f) = outcome else {
            panic!("{ineq} in {mode}: {outcome:?}")
        };
        assert!(common::contraction_holds(&f, ineq, k), "{ineq} in {mode}");
        let lib = if k == 2 {
            check_graph_contraction(&f, ineq).unwrap()
        } else {
            check_hypergraph_contraction(&f, ineq, k).unwrap()
        };
        assert!(lib.is_valid());
    }
}

#[test]
fn checker_agrees_with_brute_force_on_perturbed_maps() {
    let mmi = LinearInequality::monogamy_of_mutual_information();
    let (SearchOutcome::Found(f), _) = search_contraction_map(&mmi, ContractionMode::Graph, None).unwrap() else {
        panic!("MMI has a graph map")
    };
    let entries: Vec<_> = f.iter().collect();
    for (i, (x, _)) in entries.iter().enumerate() {
        for y in 0..1u64 << mmi.rhs_len() {
            let mut g = f.clone();
            g.insert(*x, linkcone::BitString::new(mmi.rhs_len(), y).unwrap()).unwrap();
            for k in [2, 3] {
                let lib = if k == 2 {
                    check_graph_contraction(&g, &mmi).unwrap()
                } else {
                    check_hypergraph_contraction(&g, &mmi, k).unwrap()
                };
                assert_eq!(lib.is_valid(), common::contraction_holds(&g, &mmi, k), "entry {i} image {y} k {k}");
            }
        }
    }
}
