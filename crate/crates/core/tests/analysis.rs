mod common;

use hlnet_core::analysis::{
    explore, ground, ground_with, parse_predicate, place_invariants, transition_invariants, AnalysisError, Limits,
};
use hlnet_core::io::{parse, Library, ModelDocument, SystemDoc};
use hlnet_core::net::Marking;
use num_bigint::BigInt;
use num_traits::Zero;

use common::*;

#[test]
fn single_table_graph() {
    let sys = system("branch_single");
    let rg = explore(&sys, Limits::default(), None).unwrap();
    assert_eq!((rg.nodes.len(), rg.edges.len()), (9, 10));
    assert!(!rg.truncated);
    assert!(rg.deadlocks.is_empty());
}

#[test]
fn predicate_hits() {
    let sys = system("branch_single");
    let eating = parse_predicate("count(eating) >= 1").unwrap();
    let rg = explore(&sys, Limits::default(), Some(&eating)).unwrap();
    assert!(!rg.hits.is_empty());
    for &h in &rg.hits {
        assert_eq!(rg.nodes[h].count("eating"), 1);
    }
    let never = parse_predicate("count(free_tables) == 0 && count(offered_tables) == 0 && count(eating) == 0 && count(waiting) == 0 && count(clients_ready_to_order) == 0").unwrap();
    assert!(explore(&sys, Limits::default(), Some(&never)).unwrap().hits.is_empty());
}

#[test]
fn predicate_syntax_errors_have_positions() {
    let err = parse_predicate("count(menu) >= ").unwrap_err();
    assert_eq!(err.span.line, 1);
    assert!(err.span.col > 1, "{err}");
}

#[test]
fn limits_truncate() {
    let sys = system("branch_pair");
    let rg = explore(
        &sys,
        Limits {
            max_nodes: 10,
            max_edges: 1_000,
        },
        None,
    )
    .unwrap();
    assert!(rg.truncated);
    assert!(rg.nodes.len() <= 10);
}

fn toy() -> Library {
    let mut lib = Library::default();
    let docs = [
        "signature T { sets S; }",
        "structure St of T { S = {a, b}; }",
        "module drain of T { places { p : S init elm(S); q : S; } trans { go; } arcs { p -> go : x; go -> q : x; } }",
    ];
    for (i, text) in docs.iter().enumerate() {
        let doc: ModelDocument = parse(text).unwrap();
        lib.add(format!("toy{i}").into(), doc).unwrap();
    }
    lib
}

fn toy_system() -> hlnet_core::instantiation::System {
    toy()
        .system(&SystemDoc {
            name: "toy".into(),
            signature: "T".into(),
            structure: "St".into(),
            modules: vec!["drain".into()],
            marking: None,
        })
        .unwrap()
}

#[test]
fn deadlocks_are_found() {
    let sys = toy_system();
    let rg = explore(&sys, Limits::default(), None).unwrap();
    // p holds {a, b}; each firing moves one token: 4 markings
    assert_eq!(rg.nodes.len(), 4);
    assert_eq!(rg.edges.len(), 4);
    assert_eq!(rg.deadlocks.len(), 1);
    let dead = &rg.nodes[rg.deadlocks[0]];
    assert_eq!(dead.count("p"), 0);
    assert_eq!(dead.count("q"), 2);
}

#[test]
fn toy_invariants() {
    let sys = toy_system();
    let g = ground(&sys).unwrap();
    assert_eq!(g.places.len(), 4);
    assert_eq!(g.transitions.len(), 2);
    let pi = place_invariants(&g);
    // p(v) + q(v) for each v
    assert_eq!(pi.len(), 2);
    for i in &pi {
        assert!(g.is_place_invariant(i));
        assert_eq!(g.weigh(i, &g.initial), BigInt::from(1));
    }
    assert!(transition_invariants(&g).is_empty());
}

#[test]
fn pair_invariants_are_invariant() {
    let sys = system("branch_pair");
    let g = ground(&sys).unwrap();
    for i in place_invariants(&g) {
        assert!(g.is_place_invariant(&i));
        assert!(i.iter().any(|x| !x.is_zero()));
    }
    let ti = transition_invariants(&g);
    assert!(!ti.is_empty());
    for j in &ti {
        assert!(g.is_transition_invariant(j));
    }
}

#[test]
fn binding_cap_is_enforced() {
    let sys = system("branch");
    assert!(matches!(ground_with(&sys, 16, 3), Err(AnalysisError::BindingCap { .. })));
}

#[test]
fn grounded_marking_translation_round_trips() {
    let sys = system("branch_pair");
    let g = ground(&sys).unwrap();
    let v = g.vector(&sys.initial).unwrap();
    assert_eq!(v, g.initial);
    assert_eq!(g.marking(&v), sys.initial);
    let mut outside = Marking::new();
    outside.add("free_tables", hlnet_core::algebra::Value::atom("t9"), 1);
    assert!(g.vector(&outside).is_err());
}

#[test]
fn served_meal_matches_the_order() {
    let sys = system("branch_pair");
    let rg = explore(&sys, Limits::default(), None).unwrap();
    let mut served = 0;
    for (_, (t, b), _) in &rg.edges {
        if t == "hand_over" {
            let y = b.get("Y").unwrap().clone();
            assert_eq!(Some(&sys.structure.apply("g", vec![y]).unwrap()), b.get("X"));
            served += 1;
        }
    }
    assert!(served > 0);
}
